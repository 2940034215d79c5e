#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stats_oracles.hpp"
#include "synthetic.hpp"

#include "discalign/error.hpp"
#include "discalign/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

using namespace discalign;

namespace {

using oracle::brute_fisher;
using oracle::chi2_sf;
using oracle::Counts;
using oracle::T;

Counts random_counts(std::mt19937_64& rng, std::size_t r, std::size_t c, std::uint64_t max_cell) {
  Counts out(r, std::vector<std::uint64_t>(c));
  for (auto& row : out) {
    for (auto& v : row) v = rng() % (max_cell + 1);
  }
  return out;
}

bool has_empty_line(const ContingencyTable& t) {
  const auto rt = t.row_totals();
  const auto ct = t.col_totals();
  return std::count(rt.begin(), rt.end(), 0u) + std::count(ct.begin(), ct.end(), 0u) > 0;
}

AlignmentRecord record(const char* sense, const char* rst, RelationType type = RelationType::Explicit,
                       const char* conn = "") {
  AlignmentRecord r;
  r.status = AlignmentStatus::Aligned;
  r.analysis = true;
  r.rst_label = rst;
  r.senses = {Taxonomy::builtin().parse_pdtb(sense)};
  r.rel_type = type;
  r.connective = conn;
  return r;
}

const std::vector<AlignmentRecord>& synthetic_records() {
  static const auto records = [] {
    std::vector<Document> docs;
    for (auto& sd : synthetic::generate_corpus()) docs.push_back(std::move(sd.doc));
    return align_corpus(docs);
  }();
  return records;
}

const ConnectiveTest* find_test(const std::vector<ConnectiveTest>& tests, const std::string& conn) {
  for (const auto& t : tests) {
    if (t.connective == conn) return &t;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("chi-square examples") {
  const auto r = chi_square(T({{20, 5}, {5, 20}}));
  CHECK(r.method == TestMethod::ChiSquare);
  REQUIRE(r.statistic);
  CHECK(*r.statistic == doctest::Approx(18.0).epsilon(1e-12));
  CHECK(*r.df == 1);
  CHECK(std::abs(r.p_value - chi2_sf(18.0, 1)) < 1e-6);
  CHECK(std::abs(r.p_value - std::erfc(3.0)) < 1e-12);

  const auto flat = chi_square(T({{10, 10}, {10, 10}}));
  CHECK(*flat.statistic == 0.0);
  CHECK(flat.p_value == doctest::Approx(1.0));

  CHECK_THROWS_WITH_AS(chi_square(T({{0, 0}, {3, 4}})), "degenerate table", StatsError);
  CHECK_THROWS_AS(chi_square(T({})), StatsError);
}

TEST_CASE("chi-square p agrees with the series oracle on wider tables") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const auto t = T(random_counts(rng, 2 + rng() % 4, 2 + rng() % 4, 30));
    if (has_empty_line(t)) continue;
    const auto r = chi_square(t);
    CHECK(std::abs(r.p_value - chi2_sf(*r.statistic, *r.df)) < 1e-9);
  }
}

TEST_CASE("chi-square invariances") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 100; ++k) {
    auto counts = random_counts(rng, 2 + rng() % 3, 2 + rng() % 3, 20);
    const auto t = T(counts);
    if (has_empty_line(t)) continue;
    const double base = *chi_square(t).statistic;

    auto permuted = counts;
    std::shuffle(permuted.begin(), permuted.end(), rng);
    for (auto& row : permuted) std::reverse(row.begin(), row.end());
    CHECK(*chi_square(T(permuted)).statistic == doctest::Approx(base).epsilon(1e-9));
    CHECK(*chi_square(t.transposed()).statistic == doctest::Approx(base).epsilon(1e-9));

    auto scaled = counts;
    for (auto& row : scaled) {
      for (auto& v : row) v *= 3;
    }
    CHECK(*chi_square(T(scaled)).statistic == doctest::Approx(3 * base).epsilon(1e-9));
  }
}

TEST_CASE("Fisher examples") {
  const auto r = fisher_exact(T({{3, 1}, {1, 3}}));
  CHECK(r.method == TestMethod::FisherExact);
  CHECK_FALSE(r.statistic);
  CHECK(std::abs(r.p_value - 34.0 / 70.0) < 1e-9);
  CHECK(std::abs(fisher_exact(T({{4, 0}, {0, 4}})).p_value - 2.0 / 70.0) < 1e-12);

  const auto one_row = fisher_exact(T({{3, 4, 5}}));
  CHECK(one_row.p_value == 1.0);
  CHECK_FALSE(one_row.warnings.empty());
  CHECK(fisher_exact(T({{0, 0}, {2, 3}})).p_value == 1.0);
}

TEST_CASE("Fisher matches brute force for small N") {
  std::mt19937_64 rng(13);
  int checked = 0;
  while (checked < 300) {
    const std::size_t r = 2 + rng() % 2;
    const std::size_t c = 2 + rng() % 2;
    auto counts = random_counts(rng, r, c, 4);
    const auto t = T(counts);
    if (t.total() > 20 || has_empty_line(t)) continue;
    INFO(to_tsv(t));
    CHECK(std::abs(fisher_exact(t).p_value - brute_fisher(counts)) < 1e-12);
    ++checked;
  }
}

TEST_CASE("Monte Carlo Fisher tracks the exact value") {
  const auto t = T({{5, 2, 1}, {1, 4, 3}, {2, 1, 6}});
  const auto exact = fisher_exact(t);
  TestOptions opt;
  opt.mc_samples = 20000;
  const auto mc = fisher_monte_carlo(t, opt);
  CHECK(mc.monte_carlo);
  REQUIRE(mc.std_error);
  CHECK(std::abs(mc.p_value - exact.p_value) <= 3 * *mc.std_error);
  CHECK(mc.samples == 20000);
  // same seed, same estimate
  CHECK(fisher_monte_carlo(t, opt).p_value == mc.p_value);

  opt.exact_limit = 5;
  const auto fallback = fisher_exact(t, opt);
  CHECK(fallback.monte_carlo);
  CHECK_FALSE(fallback.warnings.empty());
}

TEST_CASE("chi-square and Fisher converge on a large balanced table") {
  const auto t = T({{60, 40}, {40, 60}});
  CHECK(std::abs(chi_square(t).p_value - fisher_exact(t).p_value) <= 0.01);
}

TEST_CASE("method selection follows the smallest expected count") {
  std::mt19937_64 rng(17);
  TestOptions opt;
  opt.exact_limit = 100'000;
  opt.mc_samples = 200;
  for (int k = 0; k < 1000; ++k) {
    const auto t = T(random_counts(rng, 2 + rng() % 3, 2 + rng() % 3, 1 + rng() % 12));
    const auto r = independence_test(t, opt);
    INFO(to_tsv(t));
    CHECK((r.method == TestMethod::FisherExact) == (expected_min(t) < 5.0));
    CHECK(r.expected_min == expected_min(t));
    CHECK(r.p_value >= 0.0);
    CHECK(r.p_value <= 1.0);
  }
}

TEST_CASE("expected_min") {
  CHECK(expected_min(T({{20, 5}, {5, 20}})) == 12.5);
  CHECK(expected_min(T({{3, 1}, {1, 3}})) == 2.0);
  CHECK(expected_min(T({})) == 0.0);
}

TEST_CASE("Cohen's kappa") {
  CHECK(cohen_kappa(T({{45, 15}, {25, 15}})) == doctest::Approx(0.130435).epsilon(1e-6));
  CHECK(std::abs(cohen_kappa(T({{45, 15}, {25, 15}})) - 0.06 / 0.46) < 1e-12);
  CHECK(cohen_kappa(T({{7, 0, 0}, {0, 4, 0}, {0, 0, 9}})) == doctest::Approx(1.0));
  CHECK(cohen_kappa(T({{5, 5}, {5, 5}})) == doctest::Approx(0.0));
  CHECK_THROWS_AS(cohen_kappa(T({{1, 2, 3}, {4, 5, 6}})), StatsError);
  CHECK_THROWS_AS(cohen_kappa(T({{0, 0}, {0, 0}})), StatsError);
  CHECK_THROWS_AS(cohen_kappa(T({{5, 0}, {0, 0}})), StatsError);

  std::mt19937_64 rng(23);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + rng() % 3;
    const auto t = T(random_counts(rng, n, n, 10));
    double kappa = 0;
    try {
      kappa = cohen_kappa(t);
    } catch (const StatsError&) {
      continue;
    }
    CHECK(cohen_kappa(t.transposed()) == doctest::Approx(kappa));
    CHECK(kappa <= 1.0 + 1e-12);
  }
}

TEST_CASE("agreement_table maps both layers into one space") {
  KappaSpace space;
  space.pdtb = {{"Comparison", "contrastive"}, {"Comparison.Concession", "concessive"}};
  space.rst = {{"contrast", "contrastive"}, {"concession", "concessive"}};
  const std::vector<LabelPair> pairs = {
      {"Comparison.Contrast", "contrast", RelationType::Explicit, "but"},
      {"Comparison.Concession.Expectation", "concession", RelationType::Explicit, "although"},
      {"Comparison.Concession", "contrast", RelationType::Explicit, "but"},
      {"Expansion.Conjunction", "contrast", RelationType::Explicit, "and"},
      {"Comparison.Contrast", "list", RelationType::Explicit, "and"},
  };
  const auto t = agreement_table(pairs, space);
  CHECK(t.row_labels == std::vector<std::string>{"concessive", "contrastive"});
  CHECK(t.counts == Counts{{1, 1}, {0, 1}});

  space.subset = {"contrastive"};
  CHECK(agreement_table(pairs, space).counts == Counts{{1}});
}

TEST_CASE("build_table examples") {
  CHECK(build_table({}, 2, Split::All).rows() == 0);
  CHECK(build_table({}, 2, Split::All).cols() == 0);

  const std::vector<AlignmentRecord> recs = {
      record("Comparison.Contrast", "contrast"),
      record("Comparison.Contrast", "contrast"),
      record("Comparison.Contrast", "concession"),
  };
  const auto t = build_table(recs, 2, Split::All);
  CHECK(t.row_labels == std::vector<std::string>{"Comparison.Contrast"});
  CHECK(t.col_labels == std::vector<std::string>{"concession", "contrast"});
  CHECK(t.counts == Counts{{1, 2}});

  const auto level1 = build_table(recs, 1, Split::All);
  CHECK(level1.row_labels == std::vector<std::string>{"Comparison"});
  CHECK(level1.total() == 3);
  CHECK_THROWS_AS(build_table(recs, 4, Split::All), std::invalid_argument);
}

TEST_CASE("build_table filters by split and analysis") {
  std::vector<AlignmentRecord> recs = {
      record("Comparison.Contrast", "contrast", RelationType::Explicit),
      record("Expansion.Conjunction", "list", RelationType::Implicit),
      record("EntRel", "elaboration-additional", RelationType::EntRel),
      record("Contingency.Cause.Result", "result", RelationType::AltLex),
      record("Comparison.Contrast", "contrast-e", RelationType::Explicit),
  };
  recs.back().analysis = false;
  CHECK(build_table(recs, 2, Split::Explicit).total() == 1);
  CHECK(build_table(recs, 2, Split::Implicit).total() == 2);
  CHECK(build_table(recs, 2, Split::All).total() == 4);

  // level-3 senses keep shallower labels whole
  const std::vector<AlignmentRecord> deep = {record("Comparison.Concession.Expectation", "concession"),
                                             record("Temporal.Synchrony", "temporal-same-time")};
  CHECK(build_table(deep, 3, Split::All).row_labels ==
        std::vector<std::string>{"Comparison.Concession.Expectation", "Temporal.Synchrony"});
}

TEST_CASE("multi-sense relations keep the sense closest to the RST label") {
  auto r = record("Expansion.Conjunction", "antithesis");
  r.senses.push_back(Taxonomy::builtin().parse_pdtb("Comparison.Contrast"));
  const auto pairs = observed_pairs({r}, 2);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].pdtb == "Comparison.Contrast");
}

TEST_CASE("table totals are consistent") {
  const auto t = build_table(synthetic_records(), 2, Split::All);
  const auto rt = t.row_totals();
  const auto ct = t.col_totals();
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  for (auto v : rt) a += v;
  for (auto v : ct) b += v;
  CHECK(a == t.total());
  CHECK(b == t.total());
  std::size_t analysed = 0;
  for (const auto& r : synthetic_records()) analysed += r.analysis;
  CHECK(t.total() == analysed);
  CHECK(build_table(synthetic_records(), 2, Split::Explicit).total() +
            build_table(synthetic_records(), 2, Split::Implicit).total() <=
        t.total());
}

TEST_CASE("to_tsv layout") {
  auto t = T({{1, 2}, {3, 0}});
  t.row_labels = {"Comparison.Contrast", "Expansion.Conjunction"};
  t.col_labels = {"contrast", "list"};
  CHECK(to_tsv(t) ==
        "pdtb\\rst\tcontrast\tlist\ttotal\n"
        "Comparison.Contrast\t1\t2\t3\n"
        "Expansion.Conjunction\t3\t0\t3\n"
        "total\t4\t2\t6\n");
}

TEST_CASE("split names") {
  for (auto s : {Split::Explicit, Split::Implicit, Split::All}) CHECK(parse_split(to_string(s)) == s);
  CHECK_FALSE(parse_split("both"));
  CHECK(in_split(RelationType::NoRel, Split::Implicit));
  CHECK_FALSE(in_split(RelationType::AltLex, Split::Implicit));
  CHECK_FALSE(in_split(RelationType::AltLex, Split::Explicit));
}

TEST_CASE("connective tests on the synthetic corpus") {
  const auto tests = connective_tests(synthetic_records());
  REQUIRE_FALSE(tests.empty());
  CHECK(std::is_sorted(tests.begin(), tests.end(),
                       [](const auto& a, const auto& b) { return a.connective < b.connective; }));

  const auto* w = find_test(tests, "while");
  REQUIRE(w);
  REQUIRE(w->result);
  CHECK(w->result->p_value < 0.01);

  const auto* but = find_test(tests, "but");
  REQUIRE(but);
  REQUIRE(but->result);
  CHECK(but->result->p_value > 0.05);

  for (const auto& t : tests) {
    CHECK(t.skipped == (t.n < 10));
    CHECK(t.skipped != t.result.has_value());
    CHECK(t.table.total() == t.n);
  }
}

TEST_CASE("connective tests skip rare connectives") {
  const std::vector<AlignmentRecord> recs = {
      record("Comparison.Contrast", "contrast", RelationType::Explicit, "But"),
      record("Comparison.Contrast", "contrast", RelationType::Explicit, "but"),
      record("Comparison.Concession", "concession", RelationType::Explicit, "but"),
      record("Expansion.Conjunction", "list", RelationType::Implicit, "and"),
  };
  const auto tests = connective_tests(recs);
  REQUIRE(tests.size() == 1);
  CHECK(tests[0].connective == "but");
  CHECK(tests[0].n == 3);
  CHECK(tests[0].skipped);
  CHECK_FALSE(tests[0].result);

  ConnectiveOptions opt;
  opt.include_implicit = true;
  opt.min_n = 1;
  const auto with_implicit = connective_tests(recs, opt);
  REQUIRE(with_implicit.size() == 2);
  CHECK(with_implicit[0].connective == "and");
  CHECK(with_implicit[0].result);
}

TEST_CASE("connective tests do not depend on record order") {
  auto recs = synthetic_records();
  ConnectiveOptions opt;
  opt.test.exact_limit = 10;  // force the Monte Carlo path
  opt.test.mc_samples = 500;
  const auto a = to_json(connective_tests(recs, opt)).dump();
  std::mt19937_64 rng(3);
  std::shuffle(recs.begin(), recs.end(), rng);
  CHECK(to_json(connective_tests(recs, opt)).dump() == a);
  CHECK(connective_seed(1, "but") == connective_seed(1, "but"));
  CHECK(connective_seed(1, "but") != connective_seed(1, "while"));
  CHECK(connective_seed(1, "but") != connective_seed(2, "but"));
}

TEST_CASE("TestResult JSON") {
  const auto chi = to_json(chi_square(T({{20, 5}, {5, 20}})));
  CHECK(chi["method"] == "ChiSquare");
  CHECK(chi["df"] == 1);
  CHECK_FALSE(chi.contains("std_error"));
  const auto fe = to_json(fisher_exact(T({{3, 1}, {1, 3}})));
  CHECK(fe["statistic"].is_null());
  CHECK(fe["method"] == "FisherExact");
}
