#pragma once

// Observed-vs-expected mapping analysis, alignment yield, and the Markdown /
// JSON renderings of both.

#include "discalign/alignment.hpp"
#include "discalign/mapping.hpp"
#include "discalign/stats.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace discalign {

struct Share {
  std::string label;
  std::uint64_t count = 0;
  double fraction = 0.0;
};

// Distribution of one label over the other axis; fractions sum to 1.
struct LabelSummary {
  std::string label;
  std::uint64_t total = 0;
  std::vector<Share> shares;  // count descending, then label
};

struct DisputedRow {
  std::string rst;
  std::uint64_t total = 0;
  std::vector<Share> top;  // up to three PDTB senses
};

struct MappingReport {
  ContingencyTable table;
  // Same shape as table.counts.
  std::vector<std::vector<ExpectationLevel>> cell_expectations;
  std::vector<LabelSummary> pdtb_summaries;  // one per table row
  std::vector<LabelSummary> rst_summaries;   // one per table column
  std::vector<DisputedRow> disputed_rows;
  // Observations per expectation level, over non-excluded RST labels.
  std::map<ExpectationLevel, std::uint64_t> level_counts;
  // RST labels the proposals leave out (question-answer, ...), with totals.
  std::vector<Share> excluded;
};

MappingReport annotate_expectations(const ContingencyTable& table,
                                    const CorrespondenceGrid& grid = CorrespondenceGrid::builtin());

struct YieldSummary {
  std::size_t total = 0;
  std::size_t mapped = 0;  // records entering the analysis
  std::size_t direct = 0;  // mapped records with directly corresponding spans
  std::size_t flagged = 0;
  std::size_t unalignable = 0;
  double mapped_pct = 0.0;  // of total
  double exact_pct = 0.0;   // of mapped
  double flagged_pct = 0.0;
  double unalignable_pct = 0.0;
  std::map<std::string, std::size_t> flag_histogram;
};

YieldSummary yield_summary(const std::vector<AlignmentRecord>& records);

struct RenderOptions {
  // Labels with fewer observations are folded into "other" in Markdown.
  // 0 picks the split default: 30 for explicit and all, 20 for implicit.
  std::uint64_t display_threshold = 0;
};

std::string render_markdown(const MappingReport& report, const YieldSummary& yield,
                            const RenderOptions& options = {});
// Numbers rounded to 6 decimals; nothing is folded.
nlohmann::ordered_json render_json(const MappingReport& report, const YieldSummary& yield);

double round6(double x);

}  // namespace discalign
