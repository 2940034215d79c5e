#pragma once

// Contingency tables over aligned records and the independence / agreement
// statistics computed on them.

#include "discalign/alignment.hpp"
#include "discalign/mapping.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace discalign {

// Explicit: Explicit relations. Implicit: Implicit plus EntRel/NoRel.
// All: every relation type, AltLex included.
enum class Split { Explicit, Implicit, All };

std::string_view to_string(Split s);
std::optional<Split> parse_split(std::string_view s);
bool in_split(RelationType type, Split split);

struct ContingencyTable {
  std::vector<std::string> row_labels;  // PDTB senses
  std::vector<std::string> col_labels;  // RST labels
  std::vector<std::vector<std::uint64_t>> counts;
  Split split = Split::All;

  std::size_t rows() const noexcept { return row_labels.size(); }
  std::size_t cols() const noexcept { return col_labels.size(); }
  std::vector<std::uint64_t> row_totals() const;
  std::vector<std::uint64_t> col_totals() const;
  std::uint64_t total() const;

  // Builds a table from raw counts, labelling rows r0.. and columns c0..
  static ContingencyTable from_counts(std::vector<std::vector<std::uint64_t>> counts);
  ContingencyTable transposed() const;
  // Drops rows and columns whose totals are zero.
  ContingencyTable without_empty_lines() const;
};

// One aligned relation reduced to the label pair that enters a table.
struct LabelPair {
  std::string pdtb;  // closest sense, generalized to the requested level
  std::string rst;   // base label
  RelationType type = RelationType::Explicit;
  std::string connective;  // normalized
};

// Pairs for every record with analysis == true. Multi-sense relations keep
// the sense closest to the RST label; senses shallower than `pdtb_level`
// are kept whole.
std::vector<LabelPair> observed_pairs(const std::vector<AlignmentRecord>& records,
                                      std::size_t pdtb_level,
                                      const CorrespondenceGrid& grid = CorrespondenceGrid::builtin());

// Rows and columns sorted by label.
ContingencyTable table_from_pairs(const std::vector<LabelPair>& pairs, Split split);

ContingencyTable build_table(const std::vector<AlignmentRecord>& records, std::size_t pdtb_level,
                             Split split,
                             const CorrespondenceGrid& grid = CorrespondenceGrid::builtin());

enum class TestMethod { ChiSquare, FisherExact };

std::string_view to_string(TestMethod m);

struct TestResult {
  TestMethod method = TestMethod::ChiSquare;
  std::optional<double> statistic;  // chi-square only
  std::optional<int> df;            // chi-square only
  double p_value = 1.0;
  double expected_min = 0.0;
  bool monte_carlo = false;
  std::optional<double> std_error;  // Monte Carlo only
  std::size_t samples = 0;          // Monte Carlo only
  std::vector<std::string> warnings;
};

struct TestOptions {
  double min_expected = 5.0;
  // Largest number of tables the exact Fisher path may enumerate.
  std::uint64_t exact_limit = 10'000'000;
  std::size_t mc_samples = 20'000;
  std::uint64_t seed = 0x5EED;
};

double expected_min(const ContingencyTable& table);

// Pearson statistic without continuity correction. Throws StatsError
// ("degenerate table") on an empty table or a zero row/column total.
TestResult chi_square(const ContingencyTable& table);

// Two-sided: sums the probabilities of all tables with the observed margins
// that are no more probable than the observed one (relative tolerance 1e-10).
// Falls back to Monte Carlo when enumeration exceeds options.exact_limit.
TestResult fisher_exact(const ContingencyTable& table, const TestOptions& options = {});
TestResult fisher_monte_carlo(const ContingencyTable& table, const TestOptions& options = {});

// Fisher when expected_min < options.min_expected, chi-square otherwise.
TestResult independence_test(const ContingencyTable& table, const TestOptions& options = {});

// Throws StatsError for non-square tables, empty tables, and p_e == 1.
double cohen_kappa(const ContingencyTable& table);

// Maps both layers into one label space for kappa. PDTB senses map through
// their longest listed ancestor, RST labels through their base. Pairs with an
// unmapped side, or outside `subset` when it is non-empty, are dropped.
struct KappaSpace {
  std::vector<std::pair<std::string, std::string>> pdtb;  // sense prefix -> shared label
  std::map<std::string, std::string> rst;                 // RST label -> shared label
  std::vector<std::string> subset;
};

ContingencyTable agreement_table(const std::vector<LabelPair>& pairs, const KappaSpace& space);

struct ConnectiveOptions {
  std::size_t min_n = 10;
  std::size_t pdtb_level = 2;
  // Also test implicit relations under their inserted connective.
  bool include_implicit = false;
  std::function<std::string(std::string_view)> normalizer;  // default: text::normalize_connective
  TestOptions test;
};

struct ConnectiveTest {
  std::string connective;
  std::size_t n = 0;
  std::optional<TestResult> result;  // absent when skipped
  bool skipped = false;
  ContingencyTable table;
};

// One independence test per connective, ordered by connective. Monte Carlo
// streams are seeded from (seed, connective), so results do not depend on
// evaluation order.
std::vector<ConnectiveTest> connective_tests(const std::vector<AlignmentRecord>& records,
                                             const ConnectiveOptions& options = {},
                                             const CorrespondenceGrid& grid = CorrespondenceGrid::builtin());

std::uint64_t connective_seed(std::uint64_t seed, std::string_view connective);

// TSV with a header row and trailing "total" row and column.
std::string to_tsv(const ContingencyTable& table);
nlohmann::ordered_json to_json(const TestResult& result);
nlohmann::ordered_json to_json(const std::vector<ConnectiveTest>& tests);

}  // namespace discalign
