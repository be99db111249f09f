#include <doctest.h>

#include <random>

#include "pamr/error.hpp"
#include "pamr/penman.hpp"
#include "pamr/smatch.hpp"
#include "support/test_support.hpp"

using namespace pamr;

namespace {

Graph P(std::string_view text) { return parse_penman_or_throw(text); }

SmatchConfig hill_only(int restarts, std::uint64_t seed = 0) {
  SmatchConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  cfg.exact_threshold = 0;
  return cfg;
}

}  // namespace

TEST_CASE("identical graphs score 1") {
  Graph fa1 = P("(x / xastan :ARG0 (x2 / doxtar) :ARG1 (x3 / raftan :ARG0 x2 :ARG4 (t / city :wiki \"tehrân\" "
                ":name (n / name :op1 \"tehrân\"))))");
  auto r = score_pair(fa1, fa1);
  CHECK(r.matched == 13);
  CHECK(r.f1 == 1.0);
  CHECK(score_pair(fa1, fa1, hill_only(4)).f1 == 1.0);
}

TEST_CASE("hand-derived: concept substitution") {
  // Triples: TOP, 2 instances, 1 relation on each side; only doxtar/pesar differ.
  Graph a = P("(a / xastan :ARG0 (b / doxtar))");
  Graph b = P("(a / xastan :ARG0 (b / pesar))");
  for (auto r : {score_pair(a, b), score_exact(a, b), score_pair(a, b, hill_only(1))}) {
    CHECK(r.total_a == 4);
    CHECK(r.total_b == 4);
    CHECK(r.matched == 3);
    CHECK(r.f1 == doctest::Approx(0.75).epsilon(1e-12));
  }
}

TEST_CASE("hand-derived: edge label only") {
  Graph a = P("(a / x :ARG0 (b / y))");
  Graph b = P("(a / x :ARG1 (b / y))");
  CHECK(score_pair(a, b).f1 == doctest::Approx(0.75).epsilon(1e-12));
  SmatchConfig un;
  un.mode = MatchMode::Unlabeled;
  auto r = score_pair(a, b, un);
  CHECK(r.f1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.mode == MatchMode::Unlabeled);
}

TEST_CASE("precision and recall follow candidate and reference sizes") {
  Graph a = P("(a / x :ARG0 (b / y) :mod (c / z))");
  Graph b = P("(a / x :ARG0 (b / y))");
  auto r = score_exact(a, b);
  CHECK(r.matched == 4);
  CHECK(r.total_a == 6);
  CHECK(r.total_b == 4);
  CHECK(r.precision == doctest::Approx(4.0 / 6.0));
  CHECK(r.recall == doctest::Approx(1.0));
  CHECK(r.f1 == doctest::Approx(2.0 * 4 / 10));
}

TEST_CASE("disjoint graphs score zero") {
  auto r = score_exact(P("(a / x :ARG0 (b / y))"), P("(p / q :mod (r / s))"));
  CHECK(r.matched == 0);
  CHECK(r.f1 == 0.0);
}

TEST_CASE("include_top toggles the TOP triple") {
  Graph a = P("(a / x)");
  SmatchConfig no_top;
  no_top.include_top = false;
  CHECK(score_pair(a, a, no_top).total_a == 1);
  CHECK(score_pair(a, a).total_a == 2);
}

TEST_CASE("attribute matching ignores quoting but not value") {
  GraphBuilder qa;
  qa.add_instance("a", "x").add_attribute("a", "quant", Constant{"3", true});
  Graph a = P("(a / x :quant 3)");
  CHECK(score_exact(a, qa.build()).matched == 3);
  CHECK(score_exact(a, P("(a / x :quant 4)")).matched == 2);
}

TEST_CASE("mapping is injective and ordered by candidate preorder") {
  Graph a = P("(a / x :ARG0 (b / y) :ARG1 (c / z))");
  Graph b = P("(p / x :ARG1 (q / z) :ARG0 (r / y))");
  auto r = score_pair(a, b);
  CHECK(r.f1 == 1.0);
  CHECK(r.mapping == Mapping{{"a", "p"}, {"b", "r"}, {"c", "q"}});
}

TEST_CASE("exact search cap and config validation") {
  std::string big = "(v0 / c";
  for (int i = 1; i < 10; ++i) big += " :ARG0 (v" + std::to_string(i) + " / c)";
  big += ")";
  Graph g = P(big);
  CHECK_THROWS_AS(score_exact(g, g), ContractError);
  SmatchConfig bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(score_pair(g, g, bad), ContractError);
  CHECK_THROWS_AS(score_pair(P("(a / b :ARG0 a)"), g), ContractError);
  CHECK(score_pair(g, g).f1 == 1.0);
}

TEST_CASE("score_exact agrees with the independent oracle") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 150; ++i) {
    Graph a = testing::random_graph(rng, 5);
    Graph b = testing::random_graph(rng, 5);
    for (bool top : {true, false}) {
      for (bool unlabeled : {false, true}) {
        SmatchConfig cfg;
        cfg.include_top = top;
        cfg.mode = unlabeled ? MatchMode::Unlabeled : MatchMode::Labeled;
        auto exact = score_exact(a, b, cfg);
        auto oracle = testing::oracle_smatch(a, b, top, unlabeled);
        CHECK(exact.matched == oracle.matched);
        CHECK(exact.total_a == oracle.total_a);
        CHECK(exact.total_b == oracle.total_b);
        CHECK(exact.exact);
      }
    }
  }
}

TEST_CASE("properties over random pairs") {
  std::mt19937_64 rng(202);
  for (int i = 0; i < 150; ++i) {
    Graph a = testing::random_graph(rng, 5);
    Graph b = testing::random_graph(rng, 5);
    auto exact = score_exact(a, b);
    auto hill = score_pair(a, b, hill_only(8, i));
    CHECK(hill.matched <= exact.matched);
    CHECK(!hill.exact);

    SmatchConfig un;
    un.mode = MatchMode::Unlabeled;
    CHECK(score_exact(a, b, un).f1 >= exact.f1);
    CHECK(score_exact(b, a).f1 == doctest::Approx(exact.f1).epsilon(1e-12));

    auto again = score_pair(a, b, hill_only(8, i));
    CHECK(again.matched == hill.matched);
    CHECK(again.mapping == hill.mapping);

    std::vector<std::pair<std::string, std::string>> renaming;
    for (const auto& inst : a.instances()) renaming.emplace_back(inst.var, "z" + inst.var);
    CHECK(score_pair(a, rename_variables(a, renaming)).f1 == 1.0);
  }
}

TEST_CASE("corpus aggregation is micro") {
  Graph a = P("(a / xastan :ARG0 (b / doxtar))");
  Graph b = P("(a / xastan :ARG0 (b / pesar))");
  auto one = score_corpus({{a, b}});
  CHECK(one.micro.f1 == doctest::Approx(score_pair(a, b).f1));
  auto two = score_corpus({{a, b}, {a, b}});
  CHECK(two.micro.f1 == doctest::Approx(one.micro.f1));
  CHECK(two.micro.matched == 6);
  auto mixed = score_corpus({{a, b}, {a, a}});
  CHECK(mixed.micro.precision == doctest::Approx(7.0 / 8.0));
  CHECK(mixed.micro.recall == doctest::Approx(7.0 / 8.0));
  CHECK(mixed.micro.f1 == doctest::Approx(0.875));
  CHECK(mixed.pairs.size() == 2);
  CHECK_THROWS_AS(score_corpus({}), ContractError);
}

TEST_CASE("corpus scoring is independent of scheduling") {
  std::mt19937_64 rng(9);
  std::vector<std::pair<Graph, Graph>> pairs;
  for (int i = 0; i < 64; ++i) pairs.emplace_back(testing::random_graph(rng, 8), testing::random_graph(rng, 8));
  SmatchConfig cfg;
  cfg.seed = 42;
  auto first = score_corpus(pairs, cfg);
  auto second = score_corpus(pairs, cfg);
  REQUIRE(first.pairs.size() == pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto alone = score_pair(pairs[i].first, pairs[i].second, cfg);
    CHECK(first.pairs[i].matched == alone.matched);
    CHECK(first.pairs[i].mapping == alone.mapping);
    CHECK(second.pairs[i].mapping == first.pairs[i].mapping);
  }
  CHECK(first.micro.matched == second.micro.matched);
}
