#pragma once

// Readers and writers for the on-disk annotation formats, and the corpus
// loader that pairs them into Documents.

#include "discalign/error.hpp"
#include "discalign/model.hpp"
#include "discalign/taxonomy.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace discalign {

// RST JSON: {"doc_id": str, "root": node}. Relation labels are normalized
// with normalize_rst_label. The result is validated; when `text` is given,
// whitespace-only gaps between children are accepted. `doc_id`, when not
// null, receives the file's doc_id.
RstTree parse_rst_json(std::string_view bytes, const std::u32string* text = nullptr,
                       std::string* doc_id = nullptr);

// RST-DT .dis trees. Leaf offsets are recovered by searching each leaf's text
// payload in `text`, left to right, starting after the previous leaf.
RstTree parse_rst_dis(std::string_view bytes, const std::u32string& text);

std::string to_rst_json(const RstTree& tree, std::string_view doc_id);

struct PdtbLine {
  std::string doc_id;
  PdtbRelation relation;
};

// One JSON object per line; blank lines are skipped. Errors name the 1-based
// line. A rel_id repeated within one doc_id is an error.
std::vector<PdtbLine> parse_pdtb_jsonl(std::string_view bytes,
                                       const Taxonomy& taxonomy = Taxonomy::builtin());

std::string to_pdtb_jsonl(std::string_view doc_id, const std::vector<PdtbRelation>& relations);

struct ManifestEntry {
  std::string doc_id;
  std::filesystem::path text_path;
  std::filesystem::path rst_path;  // .dis read as RST-DT, anything else as JSON
  std::filesystem::path pdtb_path;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
};

// JSON array of {doc_id, text, rst, pdtb}; relative paths resolve against the
// manifest's directory. Throws on duplicate doc_ids.
CorpusManifest read_manifest(const std::filesystem::path& path);
CorpusManifest parse_manifest(std::string_view bytes, const std::filesystem::path& base_dir);

struct LoadFailure {
  std::string doc_id;
  std::string message;
};

struct LoadResult {
  std::vector<Document> documents;  // manifest order, failures omitted
  std::vector<LoadFailure> failures;
  std::vector<std::string> warnings;  // unknown labels, retained as-is

  bool partial() const noexcept { return !failures.empty(); }
};

LoadResult load_corpus(const CorpusManifest& manifest,
                       const Taxonomy& taxonomy = Taxonomy::builtin());

// Builds one Document from in-memory layers, checking every span against the
// text. Throws DataError.
Document make_document(std::string doc_id, std::string text, RstTree rst,
                       std::vector<PdtbRelation> pdtb);

std::string read_file(const std::filesystem::path& path);

}  // namespace discalign
