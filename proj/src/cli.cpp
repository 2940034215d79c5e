#include "discalign/cli.hpp"

#include "discalign/alignment.hpp"
#include "discalign/ingestion.hpp"
#include "discalign/mapping.hpp"
#include "discalign/report.hpp"
#include "discalign/stats.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>

namespace discalign {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path);
  f << content;
  if (!f) throw DataError("write failed: " + path);
}

std::vector<AlignmentRecord> read_records(const std::string& path) {
  return parse_alignment_jsonl(read_file(path));
}

std::uint64_t parse_hex(const std::string& s) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used, 16);
  } catch (const std::logic_error&) {
    throw UsageError("--seed: not a hexadecimal number: " + s);
  }
  if (used != s.size()) throw UsageError("--seed: not a hexadecimal number: " + s);
  return v;
}

Split split_option(const std::string& s) {
  auto split = parse_split(s);
  if (!split) throw UsageError("--split must be explicit, implicit or all");
  return *split;
}

struct Args {
  // align
  std::string manifest;
  bool include_flagged = false;
  bool no_strip = false;
  bool ignore_ws = false;
  unsigned threads = 0;
  // shared
  std::string input;
  std::string output;
  std::string split = "all";
  std::size_t level = 2;
  std::string grid;
  // compare-mappings
  std::uint64_t threshold = 0;
  // test-connectives
  std::size_t min_n = 10;
  std::string seed = "5EED";
  std::size_t samples = 20000;
  bool include_implicit = false;
  // query
  std::string q_rst;
  std::string q_pdtb;
  std::string q_flag;
};

int cmd_align(const Args& a, std::ostream& out, std::ostream& err) {
  const auto manifest = read_manifest(a.manifest);
  const auto loaded = load_corpus(manifest);
  for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";
  for (const auto& f : loaded.failures) err << "error: " << f.doc_id << ": " << f.message << "\n";
  if (loaded.documents.empty() && !manifest.entries.empty()) {
    err << "error: no document could be loaded\n";
    return kExitData;
  }
  AlignOptions opts;
  opts.include_flagged = a.include_flagged;
  opts.strip_connective = !a.no_strip;
  opts.ignore_whitespace = a.ignore_ws;
  const auto records = align_corpus(loaded.documents, opts, a.threads);
  write_output(a.output, to_jsonl(records), out);
  if (loaded.partial()) {
    err << loaded.failures.size() << " of " << manifest.entries.size() << " documents failed\n";
    return kExitPartial;
  }
  return kExitOk;
}

const CorrespondenceGrid& grid_for(const Args& a, std::optional<CorrespondenceGrid>& storage) {
  if (a.grid.empty()) return CorrespondenceGrid::builtin();
  storage = CorrespondenceGrid::from_json(read_file(a.grid), Taxonomy::builtin());
  return *storage;
}

int cmd_tables(const Args& a, std::ostream& out) {
  std::optional<CorrespondenceGrid> storage;
  const auto& grid = grid_for(a, storage);
  const auto table = build_table(read_records(a.input), a.level, split_option(a.split), grid);
  write_output(a.output, to_tsv(table), out);
  return kExitOk;
}

int cmd_compare(const Args& a, std::ostream& out) {
  std::optional<CorrespondenceGrid> storage;
  const auto& grid = grid_for(a, storage);
  const auto records = read_records(a.input);
  const auto table = build_table(records, a.level, split_option(a.split), grid);
  const auto report = annotate_expectations(table, grid);
  const auto yield = yield_summary(records);
  const bool json = a.output.size() >= 5 && a.output.ends_with(".json");
  if (json) {
    write_output(a.output, render_json(report, yield).dump(2) + "\n", out);
  } else {
    RenderOptions ro;
    ro.display_threshold = a.threshold;
    write_output(a.output, render_markdown(report, yield, ro), out);
  }
  return kExitOk;
}

int cmd_test_connectives(const Args& a, std::ostream& out) {
  std::optional<CorrespondenceGrid> storage;
  const auto& grid = grid_for(a, storage);
  ConnectiveOptions co;
  co.min_n = a.min_n;
  co.pdtb_level = a.level;
  co.include_implicit = a.include_implicit;
  co.test.seed = parse_hex(a.seed);
  co.test.mc_samples = a.samples;
  const auto tests = connective_tests(read_records(a.input), co, grid);
  nlohmann::ordered_json doc;
  doc["seed"] = a.seed;
  doc["min_n"] = a.min_n;
  doc["pdtb_level"] = a.level;
  doc["connectives"] = to_json(tests);
  write_output(a.output, doc.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_query(const Args& a, std::ostream& out) {
  const int given = !a.q_rst.empty() + !a.q_pdtb.empty() + !a.q_flag.empty();
  if (given != 1) throw UsageError("query needs exactly one of --rst, --pdtb, --flag");
  const Taxonomy& tax = Taxonomy::builtin();
  std::function<bool(const AlignmentRecord&)> match;
  if (!a.q_rst.empty()) {
    const auto want = tax.rst_base(normalize_rst_label(a.q_rst));
    match = [&tax, want](const AlignmentRecord& r) {
      return r.rst_label && tax.rst_base(*r.rst_label) == want;
    };
  } else if (!a.q_pdtb.empty()) {
    const auto want = tax.parse_pdtb(a.q_pdtb);
    match = [&tax, want](const AlignmentRecord& r) {
      for (const auto& s : r.senses) {
        if (is_descendant(want, tax.parse_pdtb(s.str()))) return true;
      }
      return false;
    };
  } else {
    const auto paren = a.q_flag.find('(');
    const std::string name = a.q_flag.substr(0, paren);
    const auto exact = paren == std::string::npos ? std::nullopt : parse_flag(a.q_flag);
    if (!parse_flag(name) && !parse_flag(name + "(1)")) {
      throw UsageError("unknown flag \"" + a.q_flag + "\"");
    }
    match = [name, exact](const AlignmentRecord& r) {
      for (const auto& f : r.flags) {
        if (exact ? f == *exact : flag_name(f.kind) == name) return true;
      }
      return false;
    };
  }
  std::string result;
  for (const auto& r : read_records(a.input)) {
    if (match(r)) result += to_jsonl(r);
  }
  write_output(a.output, result, out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Align PDTB relations to RST trees and compare their labels"};
  app.name("discalign");
  app.require_subcommand(1);
  Args a;

  auto* align = app.add_subcommand("align", "Align every PDTB relation of a corpus");
  align->add_option("manifest", a.manifest, "Corpus manifest (JSON)")->required();
  align->add_option("-o,--output", a.output, "Aligned records (JSONL)");
  align->add_flag("--include-flagged", a.include_flagged,
                  "Admit records flagged only for nuclearity into the analysis");
  align->add_flag("--no-strip-connective", a.no_strip,
                  "Count connective characters in overlap and margin");
  align->add_flag("--ignore-whitespace", a.ignore_ws, "Do not count whitespace characters");
  align->add_option("--threads", a.threads, "Worker threads (0: all cores)");

  auto* tables = app.add_subcommand("tables", "PDTB x RST contingency table as TSV");
  tables->add_option("aligned", a.input, "Aligned records (JSONL)")->required();
  tables->add_option("--split", a.split, "explicit, implicit or all");
  tables->add_option("--level", a.level, "PDTB sense level")->check(CLI::Range(1, 3));
  tables->add_option("--grid", a.grid, "Correspondence grid (JSON)");
  tables->add_option("-o,--output", a.output, "Output TSV");

  auto* compare = app.add_subcommand("compare-mappings", "Observed vs. proposed label mappings");
  compare->add_option("aligned", a.input, "Aligned records (JSONL)")->required();
  compare->add_option("--grid", a.grid, "Correspondence grid (JSON)");
  compare->add_option("--split", a.split, "explicit, implicit or all");
  compare->add_option("--level", a.level, "PDTB sense level")->check(CLI::Range(1, 3));
  compare->add_option("--threshold", a.threshold, "Fold labels below this count into \"other\"");
  compare->add_option("-o,--output", a.output, "report.md or report.json");

  auto* conn = app.add_subcommand("test-connectives", "Per-connective independence tests");
  conn->add_option("aligned", a.input, "Aligned records (JSONL)")->required();
  conn->add_option("--min-n", a.min_n, "Skip connectives with fewer instances");
  conn->add_option("--seed", a.seed, "Monte Carlo seed (hex)");
  conn->add_option("--samples", a.samples, "Monte Carlo samples");
  conn->add_option("--level", a.level, "PDTB sense level")->check(CLI::Range(1, 3));
  conn->add_flag("--include-implicit", a.include_implicit, "Also test inserted connectives");
  conn->add_option("--grid", a.grid, "Correspondence grid (JSON)");
  conn->add_option("-o,--output", a.output, "Output JSON");

  auto* query = app.add_subcommand("query", "Select aligned records");
  query->add_option("aligned", a.input, "Aligned records (JSONL)")->required();
  query->add_option("--rst", a.q_rst, "RST label");
  query->add_option("--pdtb", a.q_pdtb, "PDTB sense or ancestor");
  query->add_option("--flag", a.q_flag, "Alignment flag");
  query->add_option("-o,--output", a.output, "Output JSONL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*align) return cmd_align(a, out, err);
    if (*tables) return cmd_tables(a, out);
    if (*compare) return cmd_compare(a, out);
    if (*conn) return cmd_test_connectives(a, out);
    if (*query) return cmd_query(a, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const StatsError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace discalign
