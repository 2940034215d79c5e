#include "discalign/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace discalign {

namespace {

LabelSummary summarize(const std::string& label, const std::vector<std::string>& others,
                       const std::vector<std::uint64_t>& counts) {
  LabelSummary s;
  s.label = label;
  for (auto c : counts) s.total += c;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    s.shares.push_back(Share{others[k], counts[k],
                             static_cast<double>(counts[k]) / static_cast<double>(s.total)});
  }
  std::stable_sort(s.shares.begin(), s.shares.end(), [](const Share& a, const Share& b) {
    return a.count != b.count ? a.count > b.count : a.label < b.label;
  });
  return s;
}

std::string pct(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", fraction * 100.0);
  return buf;
}

std::string fixed6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string marked(std::uint64_t n, std::optional<ExpectationLevel> level) {
  const auto s = std::to_string(n);
  if (n == 0) return "";
  if (!level) return s;
  switch (*level) {
    case ExpectationLevel::All3: return "**" + s + "**";
    case ExpectationLevel::TwoOfThree: return "_" + s + "_";
    case ExpectationLevel::OneProposal: return s + "'";
    case ExpectationLevel::Unexpected: return s;
  }
  return s;
}

nlohmann::ordered_json shares_json(const std::vector<Share>& shares) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : shares) {
    arr.push_back({{"label", s.label}, {"count", s.count}, {"fraction", round6(s.fraction)}});
  }
  return arr;
}

}  // namespace

double round6(double x) { return std::round(x * 1e6) / 1e6; }

MappingReport annotate_expectations(const ContingencyTable& table, const CorrespondenceGrid& grid) {
  MappingReport r;
  r.table = table;
  const Taxonomy& tax = grid.taxonomy();
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const SenseLabel pdtb = tax.parse_pdtb(table.row_labels[i]);
    std::vector<ExpectationLevel> row;
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const auto level = grid.expectation_level(table.col_labels[j], pdtb);
      row.push_back(level);
      if (!grid.is_excluded(table.col_labels[j])) r.level_counts[level] += table.counts[i][j];
    }
    r.cell_expectations.push_back(std::move(row));
    r.pdtb_summaries.push_back(summarize(table.row_labels[i], table.col_labels, table.counts[i]));
  }
  const ContingencyTable t = table.transposed();
  for (std::size_t j = 0; j < t.rows(); ++j) {
    r.rst_summaries.push_back(summarize(t.row_labels[j], t.col_labels, t.counts[j]));
  }
  for (const auto& s : r.rst_summaries) {
    if (grid.is_excluded(s.label)) r.excluded.push_back(Share{s.label, s.total, 0.0});
  }
  const std::uint64_t n = table.total();
  for (auto& e : r.excluded) e.fraction = n ? static_cast<double>(e.count) / static_cast<double>(n) : 0.0;
  for (const auto& label : grid.disputed()) {
    DisputedRow d;
    d.rst = label;
    for (const auto& s : r.rst_summaries) {
      if (s.label != label) continue;
      d.total = s.total;
      d.top.assign(s.shares.begin(), s.shares.begin() + std::min<std::size_t>(3, s.shares.size()));
    }
    r.disputed_rows.push_back(std::move(d));
  }
  return r;
}

YieldSummary yield_summary(const std::vector<AlignmentRecord>& records) {
  YieldSummary y;
  y.total = records.size();
  for (const auto& r : records) {
    if (r.analysis) {
      ++y.mapped;
      if (r.direct) ++y.direct;
    }
    if (r.status == AlignmentStatus::Flagged) ++y.flagged;
    if (r.status == AlignmentStatus::Unalignable) ++y.unalignable;
    for (const auto& f : r.flags) ++y.flag_histogram[std::string(flag_name(f.kind))];
  }
  auto percent = [](std::size_t a, std::size_t b) {
    return b == 0 ? 0.0 : 100.0 * static_cast<double>(a) / static_cast<double>(b);
  };
  y.mapped_pct = percent(y.mapped, y.total);
  y.exact_pct = percent(y.direct, y.mapped);
  y.flagged_pct = percent(y.flagged, y.total);
  y.unalignable_pct = percent(y.unalignable, y.total);
  return y;
}

std::string render_markdown(const MappingReport& report, const YieldSummary& yield,
                            const RenderOptions& options) {
  std::string out = "# Mapping report\n\n## Alignment yield\n\n";
  out += "| measure | count | percent |\n|---|---:|---:|\n";
  out += "| relations | " + std::to_string(yield.total) + " | |\n";
  out += "| mapped | " + std::to_string(yield.mapped) + " | " + fixed6(yield.mapped_pct) + " |\n";
  out += "| direct (of mapped) | " + std::to_string(yield.direct) + " | " + fixed6(yield.exact_pct) +
         " |\n";
  out += "| flagged | " + std::to_string(yield.flagged) + " | " + fixed6(yield.flagged_pct) + " |\n";
  out += "| unalignable | " + std::to_string(yield.unalignable) + " | " +
         fixed6(yield.unalignable_pct) + " |\n\n";
  if (!yield.flag_histogram.empty()) {
    out += "| flag | count |\n|---|---:|\n";
    for (const auto& [f, n] : yield.flag_histogram) out += "| " + f + " | " + std::to_string(n) + " |\n";
    out += "\n";
  }

  const ContingencyTable& t = report.table;
  std::uint64_t threshold = options.display_threshold;
  if (threshold == 0) threshold = t.split == Split::Implicit ? 20 : 30;

  out += "## Observed label pairs (" + std::string(to_string(t.split)) + ")\n\n";
  if (t.rows() == 0) {
    out += "No aligned relations.\n";
    return out;
  }
  out += "Cells: **n** predicted by all three proposals, _n_ by two, n' by one. Labels with fewer "
         "than " + std::to_string(threshold) + " instances are folded into \"other\".\n\n";

  const auto rt = t.row_totals();
  const auto ct = t.col_totals();
  // RST labels are rendered as rows, PDTB senses as columns.
  std::vector<std::size_t> shown_pdtb;
  bool pdtb_other = false;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (rt[i] >= threshold) {
      shown_pdtb.push_back(i);
    } else {
      pdtb_other = true;
    }
  }
  std::vector<std::size_t> shown_rst;
  bool rst_other = false;
  for (std::size_t j = 0; j < t.cols(); ++j) {
    if (ct[j] >= threshold) {
      shown_rst.push_back(j);
    } else {
      rst_other = true;
    }
  }

  out += "| RST \\ PDTB |";
  for (auto i : shown_pdtb) out += " " + t.row_labels[i] + " |";
  if (pdtb_other) out += " other |";
  out += " total |\n|---|";
  for (std::size_t k = 0; k < shown_pdtb.size() + (pdtb_other ? 1 : 0) + 1; ++k) out += "---:|";
  out += "\n";

  auto emit_row = [&](const std::string& name, const std::vector<std::size_t>& cols, bool folded) {
    out += "| " + name + " |";
    std::uint64_t row_total = 0;
    for (auto i : shown_pdtb) {
      std::uint64_t n = 0;
      for (auto j : cols) n += t.counts[i][j];
      row_total += n;
      out += " " + (folded ? marked(n, std::nullopt) : marked(n, report.cell_expectations[i][cols.front()])) +
             " |";
    }
    if (pdtb_other) {
      std::uint64_t n = 0;
      for (std::size_t i = 0; i < t.rows(); ++i) {
        if (rt[i] >= threshold) continue;
        for (auto j : cols) n += t.counts[i][j];
      }
      row_total += n;
      out += " " + marked(n, std::nullopt) + " |";
    }
    out += " " + std::to_string(row_total) + " |\n";
  };
  for (auto j : shown_rst) emit_row(t.col_labels[j], {j}, false);
  if (rst_other) {
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (ct[j] < threshold) rest.push_back(j);
    }
    emit_row("other", rest, true);
  }
  out += "\n";

  out += "## Expectation levels\n\n| level | observations |\n|---|---:|\n";
  for (auto level : {ExpectationLevel::All3, ExpectationLevel::TwoOfThree,
                     ExpectationLevel::OneProposal, ExpectationLevel::Unexpected}) {
    auto it = report.level_counts.find(level);
    out += "| " + std::string(to_string(level)) + " | " +
           std::to_string(it == report.level_counts.end() ? 0 : it->second) + " |\n";
  }
  out += "\n";

  out += "## Disputed RST labels\n\n| RST label | n | most frequent PDTB senses |\n|---|---:|---|\n";
  for (const auto& d : report.disputed_rows) {
    std::string top;
    for (const auto& s : d.top) {
      if (!top.empty()) top += ", ";
      top += s.label + " " + pct(s.fraction);
    }
    out += "| " + d.rst + " | " + std::to_string(d.total) + " | " + top + " |\n";
  }
  out += "\n";

  if (!report.excluded.empty()) {
    out += "## Excluded RST labels\n\nNot covered by any proposal.\n\n| RST label | n |\n|---|---:|\n";
    for (const auto& e : report.excluded) out += "| " + e.label + " | " + std::to_string(e.count) + " |\n";
    out += "\n";
  }
  return out;
}

nlohmann::ordered_json render_json(const MappingReport& report, const YieldSummary& yield) {
  using nlohmann::ordered_json;
  ordered_json out;
  ordered_json y;
  y["total"] = yield.total;
  y["mapped"] = yield.mapped;
  y["direct"] = yield.direct;
  y["flagged"] = yield.flagged;
  y["unalignable"] = yield.unalignable;
  y["mapped_pct"] = round6(yield.mapped_pct);
  y["exact_pct"] = round6(yield.exact_pct);
  y["flagged_pct"] = round6(yield.flagged_pct);
  y["unalignable_pct"] = round6(yield.unalignable_pct);
  y["flag_histogram"] = yield.flag_histogram;
  out["yield"] = std::move(y);

  const ContingencyTable& t = report.table;
  ordered_json table;
  table["split"] = std::string(to_string(t.split));
  table["pdtb_labels"] = t.row_labels;
  table["rst_labels"] = t.col_labels;
  table["counts"] = t.counts;
  ordered_json levels = ordered_json::array();
  for (const auto& row : report.cell_expectations) {
    ordered_json r = ordered_json::array();
    for (auto l : row) r.push_back(std::string(to_string(l)));
    levels.push_back(std::move(r));
  }
  table["expectations"] = std::move(levels);
  out["table"] = std::move(table);

  auto summaries = [&](const std::vector<LabelSummary>& v) {
    ordered_json arr = ordered_json::array();
    for (const auto& s : v) {
      arr.push_back({{"label", s.label}, {"total", s.total}, {"shares", shares_json(s.shares)}});
    }
    return arr;
  };
  out["pdtb_summaries"] = summaries(report.pdtb_summaries);
  out["rst_summaries"] = summaries(report.rst_summaries);

  ordered_json lc;
  for (auto level : {ExpectationLevel::All3, ExpectationLevel::TwoOfThree,
                     ExpectationLevel::OneProposal, ExpectationLevel::Unexpected}) {
    auto it = report.level_counts.find(level);
    lc[std::string(to_string(level))] = it == report.level_counts.end() ? 0 : it->second;
  }
  out["level_counts"] = std::move(lc);

  ordered_json disputed = ordered_json::array();
  for (const auto& d : report.disputed_rows) {
    disputed.push_back({{"rst", d.rst}, {"total", d.total}, {"top", shares_json(d.top)}});
  }
  out["disputed_rows"] = std::move(disputed);
  out["excluded"] = shares_json(report.excluded);
  return out;
}

}  // namespace discalign
