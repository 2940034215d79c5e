#include "discalign/stats.hpp"

#include "discalign/error.hpp"
#include "discalign/text.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace discalign {

namespace {

constexpr double kFisherTolerance = 1e-10;

struct Margins {
  std::vector<std::uint64_t> rows;
  std::vector<std::uint64_t> cols;
  std::uint64_t n = 0;
};

Margins margins(const ContingencyTable& t) { return {t.row_totals(), t.col_totals(), t.total()}; }

class LogFactorial {
 public:
  explicit LogFactorial(std::uint64_t n) : table_(n + 1, 0.0) {
    for (std::uint64_t i = 2; i <= n; ++i) table_[i] = table_[i - 1] + std::log(static_cast<double>(i));
  }
  double operator()(std::uint64_t k) const { return table_[k]; }

 private:
  std::vector<double> table_;
};

// Log-probability of a table given its margins, minus the margin constant.
double cell_term(const std::vector<std::vector<std::uint64_t>>& counts, const LogFactorial& lf) {
  double s = 0.0;
  for (const auto& row : counts) {
    for (auto v : row) s -= lf(v);
  }
  return s;
}

double margin_constant(const Margins& m, const LogFactorial& lf) {
  double k = -lf(m.n);
  for (auto v : m.rows) k += lf(v);
  for (auto v : m.cols) k += lf(v);
  return k;
}

struct BudgetExceeded {};

class FisherEnumerator {
 public:
  FisherEnumerator(const Margins& m, const LogFactorial& lf, double log_obs, std::uint64_t limit)
      : m_(m), lf_(lf), threshold_(log_obs + std::log1p(kFisherTolerance)), limit_(limit),
        constant_(margin_constant(m, lf)), colrem_(m.cols) {}

  double run() {
    row(0, 0.0);
    return std::min(1.0, p_);
  }

 private:
  void row(std::size_t i, double acc) {
    const std::size_t r = m_.rows.size();
    if (i + 1 == r) {
      double s = acc;
      for (auto v : colrem_) s -= lf_(v);
      if (++tables_ > limit_) throw BudgetExceeded{};
      const double lp = constant_ + s;
      if (lp <= threshold_) p_ += std::exp(lp);
      return;
    }
    cell(i, 0, m_.rows[i], acc);
  }

  void cell(std::size_t i, std::size_t j, std::uint64_t rowrem, double acc) {
    const std::size_t c = colrem_.size();
    if (j + 1 == c) {
      if (rowrem > colrem_[j]) return;
      colrem_[j] -= rowrem;
      row(i + 1, acc - lf_(rowrem));
      colrem_[j] += rowrem;
      return;
    }
    std::uint64_t rest = 0;
    for (std::size_t k = j + 1; k < c; ++k) rest += colrem_[k];
    const std::uint64_t lo = rowrem > rest ? rowrem - rest : 0;
    const std::uint64_t hi = std::min(rowrem, colrem_[j]);
    for (std::uint64_t x = lo; x <= hi; ++x) {
      colrem_[j] -= x;
      cell(i, j + 1, rowrem - x, acc - lf_(x));
      colrem_[j] += x;
    }
  }

  const Margins& m_;
  const LogFactorial& lf_;
  double threshold_;
  std::uint64_t limit_;
  double constant_;
  std::vector<std::uint64_t> colrem_;
  std::uint64_t tables_ = 0;
  double p_ = 0.0;
};

// Unbiased draw from [0, bound) independent of the standard library's
// distribution implementations.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

TestResult degenerate_fisher(double emin) {
  TestResult r;
  r.method = TestMethod::FisherExact;
  r.p_value = 1.0;
  r.expected_min = emin;
  r.warnings.emplace_back("degenerate margins: fewer than two non-empty rows or columns");
  return r;
}

std::string sense_at_level(const SenseLabel& s, std::size_t level) {
  return s.depth() > level ? generalize(s, level).str() : s.str();
}

}  // namespace

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Explicit: return "explicit";
    case Split::Implicit: return "implicit";
    case Split::All: return "all";
  }
  return "all";
}

std::optional<Split> parse_split(std::string_view s) {
  if (s == "explicit") return Split::Explicit;
  if (s == "implicit") return Split::Implicit;
  if (s == "all") return Split::All;
  return std::nullopt;
}

bool in_split(RelationType type, Split split) {
  switch (split) {
    case Split::Explicit: return type == RelationType::Explicit;
    case Split::Implicit:
      return type == RelationType::Implicit || type == RelationType::EntRel ||
             type == RelationType::NoRel;
    case Split::All: return true;
  }
  return false;
}

std::vector<std::uint64_t> ContingencyTable::row_totals() const {
  std::vector<std::uint64_t> out(rows(), 0);
  for (std::size_t i = 0; i < rows(); ++i) {
    out[i] = std::accumulate(counts[i].begin(), counts[i].end(), std::uint64_t{0});
  }
  return out;
}

std::vector<std::uint64_t> ContingencyTable::col_totals() const {
  std::vector<std::uint64_t> out(cols(), 0);
  for (const auto& row : counts) {
    for (std::size_t j = 0; j < cols(); ++j) out[j] += row[j];
  }
  return out;
}

std::uint64_t ContingencyTable::total() const {
  std::uint64_t n = 0;
  for (const auto& row : counts) n = std::accumulate(row.begin(), row.end(), n);
  return n;
}

ContingencyTable ContingencyTable::from_counts(std::vector<std::vector<std::uint64_t>> counts) {
  ContingencyTable t;
  const std::size_t c = counts.empty() ? 0 : counts.front().size();
  for (const auto& row : counts) {
    if (row.size() != c) throw std::invalid_argument("ragged contingency table");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) t.row_labels.push_back("r" + std::to_string(i));
  for (std::size_t j = 0; j < c; ++j) t.col_labels.push_back("c" + std::to_string(j));
  t.counts = std::move(counts);
  return t;
}

ContingencyTable ContingencyTable::transposed() const {
  ContingencyTable t;
  t.split = split;
  t.row_labels = col_labels;
  t.col_labels = row_labels;
  t.counts.assign(cols(), std::vector<std::uint64_t>(rows(), 0));
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) t.counts[j][i] = counts[i][j];
  }
  return t;
}

ContingencyTable ContingencyTable::without_empty_lines() const {
  const auto rt = row_totals();
  const auto ct = col_totals();
  ContingencyTable t;
  t.split = split;
  std::vector<std::size_t> keep_cols;
  for (std::size_t j = 0; j < cols(); ++j) {
    if (ct[j] > 0) {
      keep_cols.push_back(j);
      t.col_labels.push_back(col_labels[j]);
    }
  }
  for (std::size_t i = 0; i < rows(); ++i) {
    if (rt[i] == 0) continue;
    t.row_labels.push_back(row_labels[i]);
    std::vector<std::uint64_t> row;
    for (auto j : keep_cols) row.push_back(counts[i][j]);
    t.counts.push_back(std::move(row));
  }
  return t;
}

std::vector<LabelPair> observed_pairs(const std::vector<AlignmentRecord>& records,
                                      std::size_t pdtb_level, const CorrespondenceGrid& grid) {
  if (pdtb_level < 1 || pdtb_level > 3) throw std::invalid_argument("PDTB level must be 1..3");
  const Taxonomy& tax = grid.taxonomy();
  std::vector<LabelPair> out;
  for (const auto& r : records) {
    if (!r.analysis || !r.rst_label || r.senses.empty()) continue;
    const SenseLabel& sense = select_closest_sense(r.senses, *r.rst_label, grid);
    out.push_back(LabelPair{sense_at_level(sense, pdtb_level), tax.rst_base(*r.rst_label), r.rel_type,
                            text::normalize_connective(r.connective)});
  }
  return out;
}

ContingencyTable table_from_pairs(const std::vector<LabelPair>& pairs, Split split) {
  std::set<std::string> rows;
  std::set<std::string> cols;
  for (const auto& p : pairs) {
    if (!in_split(p.type, split)) continue;
    rows.insert(p.pdtb);
    cols.insert(p.rst);
  }
  ContingencyTable t;
  t.split = split;
  t.row_labels.assign(rows.begin(), rows.end());
  t.col_labels.assign(cols.begin(), cols.end());
  t.counts.assign(rows.size(), std::vector<std::uint64_t>(cols.size(), 0));
  for (const auto& p : pairs) {
    if (!in_split(p.type, split)) continue;
    const auto i = static_cast<std::size_t>(std::distance(rows.begin(), rows.find(p.pdtb)));
    const auto j = static_cast<std::size_t>(std::distance(cols.begin(), cols.find(p.rst)));
    ++t.counts[i][j];
  }
  return t;
}

ContingencyTable build_table(const std::vector<AlignmentRecord>& records, std::size_t pdtb_level,
                             Split split, const CorrespondenceGrid& grid) {
  return table_from_pairs(observed_pairs(records, pdtb_level, grid), split);
}

std::string_view to_string(TestMethod m) {
  return m == TestMethod::ChiSquare ? "ChiSquare" : "FisherExact";
}

double expected_min(const ContingencyTable& table) {
  const auto m = margins(table);
  if (m.n == 0 || m.rows.empty() || m.cols.empty()) return 0.0;
  const auto rmin = *std::min_element(m.rows.begin(), m.rows.end());
  const auto cmin = *std::min_element(m.cols.begin(), m.cols.end());
  return static_cast<double>(rmin) * static_cast<double>(cmin) / static_cast<double>(m.n);
}

TestResult chi_square(const ContingencyTable& table) {
  const auto m = margins(table);
  if (m.n == 0 || m.rows.empty() || m.cols.empty() ||
      std::find(m.rows.begin(), m.rows.end(), 0u) != m.rows.end() ||
      std::find(m.cols.begin(), m.cols.end(), 0u) != m.cols.end()) {
    throw StatsError("degenerate table");
  }
  const double n = static_cast<double>(m.n);
  double stat = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const double e = static_cast<double>(m.rows[i]) * static_cast<double>(m.cols[j]) / n;
      const double d = static_cast<double>(table.counts[i][j]) - e;
      stat += d * d / e;
    }
  }
  TestResult r;
  r.method = TestMethod::ChiSquare;
  r.statistic = stat;
  r.df = static_cast<int>((table.rows() - 1) * (table.cols() - 1));
  r.expected_min = expected_min(table);
  r.p_value = *r.df == 0 ? 1.0 : boost::math::gamma_q(*r.df / 2.0, stat / 2.0);
  return r;
}

TestResult fisher_exact(const ContingencyTable& table, const TestOptions& options) {
  const double emin = expected_min(table);
  const ContingencyTable t = table.without_empty_lines();
  if (t.rows() < 2 || t.cols() < 2) return degenerate_fisher(emin);
  const auto m = margins(t);
  const LogFactorial lf(m.n);
  const double log_obs = margin_constant(m, lf) + cell_term(t.counts, lf);
  TestResult r;
  r.method = TestMethod::FisherExact;
  r.expected_min = emin;
  try {
    r.p_value = FisherEnumerator(m, lf, log_obs, options.exact_limit).run();
  } catch (const BudgetExceeded&) {
    r = fisher_monte_carlo(table, options);
    r.warnings.push_back("exact enumeration exceeded " + std::to_string(options.exact_limit) +
                         " tables; Monte Carlo estimate");
  }
  return r;
}

TestResult fisher_monte_carlo(const ContingencyTable& table, const TestOptions& options) {
  const double emin = expected_min(table);
  const ContingencyTable t = table.without_empty_lines();
  if (t.rows() < 2 || t.cols() < 2) return degenerate_fisher(emin);
  const auto m = margins(t);
  const LogFactorial lf(m.n);
  const double threshold = cell_term(t.counts, lf) + std::log1p(kFisherTolerance);

  // Paired labels; permuting the column labels preserves both margins.
  std::vector<std::uint32_t> row_of;
  std::vector<std::uint32_t> col_of;
  row_of.reserve(m.n);
  col_of.reserve(m.n);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      for (std::uint64_t k = 0; k < t.counts[i][j]; ++k) {
        row_of.push_back(static_cast<std::uint32_t>(i));
        col_of.push_back(static_cast<std::uint32_t>(j));
      }
    }
  }
  std::mt19937_64 rng(options.seed);
  std::vector<std::vector<std::uint64_t>> sim(t.rows(), std::vector<std::uint64_t>(t.cols()));
  std::size_t hits = 0;
  const std::size_t b = std::max<std::size_t>(options.mc_samples, 1);
  for (std::size_t s = 0; s < b; ++s) {
    for (std::size_t k = col_of.size() - 1; k > 0; --k) {
      std::swap(col_of[k], col_of[uniform_below(rng, k + 1)]);
    }
    for (auto& row : sim) std::fill(row.begin(), row.end(), 0);
    for (std::size_t k = 0; k < row_of.size(); ++k) ++sim[row_of[k]][col_of[k]];
    if (cell_term(sim, lf) <= threshold) ++hits;
  }
  TestResult r;
  r.method = TestMethod::FisherExact;
  r.monte_carlo = true;
  r.samples = b;
  r.expected_min = emin;
  r.p_value = static_cast<double>(hits + 1) / static_cast<double>(b + 1);
  r.std_error = std::sqrt(r.p_value * (1.0 - r.p_value) / static_cast<double>(b));
  return r;
}

TestResult independence_test(const ContingencyTable& table, const TestOptions& options) {
  if (expected_min(table) < options.min_expected) return fisher_exact(table, options);
  return chi_square(table);
}

double cohen_kappa(const ContingencyTable& table) {
  if (table.rows() != table.cols()) throw StatsError("kappa needs a square table");
  const auto m = margins(table);
  if (m.n == 0) throw StatsError("kappa of an empty table");
  const double n = static_cast<double>(m.n);
  double po = 0.0;
  double pe = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    po += static_cast<double>(table.counts[i][i]);
    pe += static_cast<double>(m.rows[i]) * static_cast<double>(m.cols[i]);
  }
  po /= n;
  pe /= n * n;
  if (std::abs(1.0 - pe) < 1e-15) throw StatsError("kappa undefined: expected agreement is 1");
  return (po - pe) / (1.0 - pe);
}

ContingencyTable agreement_table(const std::vector<LabelPair>& pairs, const KappaSpace& space) {
  auto map_pdtb = [&](const std::string& sense) -> std::optional<std::string> {
    std::optional<std::string> best;
    std::size_t best_len = 0;
    for (const auto& [prefix, label] : space.pdtb) {
      const bool match = sense == prefix ||
                         (sense.size() > prefix.size() && sense.starts_with(prefix) &&
                          sense[prefix.size()] == '.');
      if (match && prefix.size() >= best_len) {
        best = label;
        best_len = prefix.size();
      }
    }
    return best;
  };
  std::set<std::string> labels;
  for (const auto& [k, v] : space.pdtb) labels.insert(v);
  for (const auto& [k, v] : space.rst) labels.insert(v);
  if (!space.subset.empty()) labels = std::set<std::string>(space.subset.begin(), space.subset.end());

  ContingencyTable t;
  t.row_labels.assign(labels.begin(), labels.end());
  t.col_labels = t.row_labels;
  t.counts.assign(labels.size(), std::vector<std::uint64_t>(labels.size(), 0));
  for (const auto& p : pairs) {
    const auto a = map_pdtb(p.pdtb);
    const auto it = space.rst.find(p.rst);
    if (!a || it == space.rst.end()) continue;
    const auto ia = labels.find(*a);
    const auto ib = labels.find(it->second);
    if (ia == labels.end() || ib == labels.end()) continue;
    ++t.counts[static_cast<std::size_t>(std::distance(labels.begin(), ia))]
              [static_cast<std::size_t>(std::distance(labels.begin(), ib))];
  }
  return t;
}

std::uint64_t connective_seed(std::uint64_t seed, std::string_view connective) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : connective) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return splitmix64(h ^ splitmix64(seed));
}

std::vector<ConnectiveTest> connective_tests(const std::vector<AlignmentRecord>& records,
                                             const ConnectiveOptions& options,
                                             const CorrespondenceGrid& grid) {
  auto normalize = options.normalizer
                       ? options.normalizer
                       : [](std::string_view s) { return text::normalize_connective(s); };
  std::map<std::string, std::vector<LabelPair>> by_connective;
  for (auto& p : observed_pairs(records, options.pdtb_level, grid)) {
    const bool wanted = p.type == RelationType::Explicit ||
                        (options.include_implicit && p.type == RelationType::Implicit);
    if (!wanted) continue;
    auto key = normalize(p.connective);
    if (key.empty()) continue;
    // Tables are built over a single split below.
    p.type = RelationType::Explicit;
    by_connective[key].push_back(std::move(p));
  }

  std::vector<ConnectiveTest> out;
  for (const auto& [conn, pairs] : by_connective) {
    ConnectiveTest ct;
    ct.connective = conn;
    ct.n = pairs.size();
    ct.table = table_from_pairs(pairs, Split::Explicit).without_empty_lines();
    if (ct.n < options.min_n) {
      ct.skipped = true;
    } else {
      TestOptions topt = options.test;
      topt.seed = connective_seed(options.test.seed, conn);
      ct.result = independence_test(ct.table, topt);
    }
    out.push_back(std::move(ct));
  }
  return out;
}

std::string to_tsv(const ContingencyTable& table) {
  const auto rt = table.row_totals();
  const auto ct = table.col_totals();
  std::string out = "pdtb\\rst";
  for (const auto& c : table.col_labels) out += "\t" + c;
  out += "\ttotal\n";
  for (std::size_t i = 0; i < table.rows(); ++i) {
    out += table.row_labels[i];
    for (auto v : table.counts[i]) out += "\t" + std::to_string(v);
    out += "\t" + std::to_string(rt[i]) + "\n";
  }
  out += "total";
  for (auto v : ct) out += "\t" + std::to_string(v);
  out += "\t" + std::to_string(table.total()) + "\n";
  return out;
}

nlohmann::ordered_json to_json(const TestResult& r) {
  nlohmann::ordered_json v;
  v["method"] = std::string(to_string(r.method));
  v["statistic"] = r.statistic ? nlohmann::ordered_json(*r.statistic) : nlohmann::ordered_json(nullptr);
  v["df"] = r.df ? nlohmann::ordered_json(*r.df) : nlohmann::ordered_json(nullptr);
  v["p_value"] = r.p_value;
  v["expected_min"] = r.expected_min;
  v["monte_carlo"] = r.monte_carlo;
  if (r.monte_carlo) {
    v["std_error"] = r.std_error.value_or(0.0);
    v["samples"] = r.samples;
  }
  v["warnings"] = r.warnings;
  return v;
}

nlohmann::ordered_json to_json(const std::vector<ConnectiveTest>& tests) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& t : tests) {
    nlohmann::ordered_json v;
    v["connective"] = t.connective;
    v["n"] = t.n;
    v["skipped"] = t.skipped;
    v["result"] = t.result ? to_json(*t.result) : nlohmann::ordered_json(nullptr);
    v["pdtb_labels"] = t.table.row_labels;
    v["rst_labels"] = t.table.col_labels;
    v["counts"] = t.table.counts;
    arr.push_back(std::move(v));
  }
  return arr;
}

}  // namespace discalign
