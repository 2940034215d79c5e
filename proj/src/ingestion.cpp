#include "discalign/ingestion.hpp"

#include "discalign/text.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

namespace discalign {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::pair<std::size_t, std::size_t> line_col(std::string_view bytes, std::size_t offset) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset && i < bytes.size(); ++i) {
    if (bytes[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json parse_json(std::string_view bytes, const std::string& what) {
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    const std::size_t off = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, col] = line_col(bytes, off);
    throw SyntaxError(what + ": syntax error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what(),
                      line, col, off);
  }
}

std::size_t get_offset(const json& v) {
  if (!v.is_number_unsigned()) {
    throw SemanticError("offset must be a non-negative integer, got " + v.dump());
  }
  return v.get<std::size_t>();
}

CharSpan span_from_json(const json& v) {
  if (!v.is_array() || v.size() != 2) {
    throw SemanticError("span must be [start, end], got " + v.dump());
  }
  return CharSpan(get_offset(v[0]), get_offset(v[1]));
}

SpanSet spans_from_json(const json& v) {
  if (!v.is_array()) throw SemanticError("spans must be an array, got " + v.dump());
  std::vector<CharSpan> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(span_from_json(s));
  return SpanSet(std::move(out));
}

ordered_json spans_to_json(const SpanSet& set) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : set.spans()) arr.push_back({s.start(), s.end()});
  return arr;
}

std::string normalized_rel2par(const std::string& raw) {
  auto label = normalize_rst_label(raw);
  if (label.empty()) throw SemanticError("empty rel2par");
  return label;
}

RstNode node_from_json(const json& v) {
  if (!v.is_object()) throw SemanticError("RST node must be an object");
  RstNode node;
  node.span = span_from_json(v.at("span"));
  const auto nuc = v.at("nuclearity").get<std::string>();
  auto parsed = parse_nuclearity(nuc);
  if (!parsed) throw SemanticError("bad nuclearity \"" + nuc + "\"");
  node.nuclearity = *parsed;
  node.rel2par = normalized_rel2par(v.at("rel2par").get<std::string>());
  const bool has_children = v.contains("children");
  const bool has_edu = v.contains("edu_id");
  if (has_children == has_edu) {
    throw SemanticError("leaf edu_id: node " + to_string(node.span) +
                        " needs exactly one of \"children\" and \"edu_id\"");
  }
  if (has_edu) {
    if (!v["edu_id"].is_number_integer()) throw SemanticError("edu_id must be an integer");
    node.edu_id = v["edu_id"].get<int>();
  } else {
    for (const auto& c : v["children"]) node.children.push_back(node_from_json(c));
  }
  return node;
}

ordered_json node_to_json(const RstNode& node) {
  ordered_json out;
  out["span"] = {node.span.start(), node.span.end()};
  out["nuclearity"] = std::string(to_string(node.nuclearity));
  out["rel2par"] = node.rel2par;
  if (node.is_leaf()) {
    out["edu_id"] = node.edu_id.value_or(0);
  } else {
    ordered_json kids = ordered_json::array();
    for (const auto& c : node.children) kids.push_back(node_to_json(c));
    out["children"] = std::move(kids);
  }
  return out;
}

void require_valid(const RstTree& tree, const std::u32string* text) {
  auto violations = validate_tree(tree, text);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw SemanticError(v.rule + " at " + to_string(v.span) + ": " + v.detail);
  }
}

// Recursive-descent reader for the .dis subset.
class DisParser {
 public:
  DisParser(std::string_view bytes, const std::u32string& text) : in_(bytes), text_(text) {}

  RstTree run() {
    skip_ws();
    RstTree tree;
    tree.root = node();
    skip_ws();
    if (pos_ != in_.size()) fail("trailing content after tree");
    tree.edus = collect_edus(tree.root);
    return tree;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    auto [line, col] = line_col(in_, pos_);
    throw SyntaxError(".dis: " + what + " at offset " + std::to_string(pos_) + " (line " +
                          std::to_string(line) + ", column " + std::to_string(col) + ")",
                      line, col, pos_);
  }

  void skip_ws() {
    while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= in_.size()) fail(std::string("unexpected end of input, expected '") + c + "'");
    if (in_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < in_.size() && !std::isspace(static_cast<unsigned char>(in_[pos_])) &&
           in_[pos_] != '(' && in_[pos_] != ')') {
      ++pos_;
    }
    if (start == pos_) fail("expected a token");
    return std::string(in_.substr(start, pos_ - start));
  }

  int integer() {
    const auto w = word();
    try {
      std::size_t used = 0;
      const int v = std::stoi(w, &used);
      if (used != w.size()) throw std::invalid_argument(w);
      return v;
    } catch (const std::logic_error&) {
      fail("expected an integer, got \"" + w + "\"");
    }
  }

  // Peeks the word following the '(' at pos_.
  std::string peek_keyword() {
    const std::size_t save = pos_;
    ++pos_;
    auto w = word();
    pos_ = save;
    return w;
  }

  RstNode node() {
    expect('(');
    const auto role = word();
    auto nuc = parse_nuclearity(role);
    if (!nuc) fail("unknown role \"" + role + "\"");
    RstNode node;
    node.nuclearity = *nuc;
    std::optional<int> leaf;
    std::optional<std::pair<int, int>> range;
    std::optional<std::string> payload;
    while (true) {
      skip_ws();
      if (pos_ >= in_.size()) fail("unbalanced parenthesis: unexpected end of input");
      if (in_[pos_] == ')') {
        ++pos_;
        break;
      }
      if (in_[pos_] != '(') fail("expected '(' or ')'");
      const auto kw = peek_keyword();
      if (parse_nuclearity(kw)) {
        node.children.push_back(this->node());
        continue;
      }
      ++pos_;
      word();
      if (kw == "span") {
        const int a = integer();
        const int b = integer();
        range.emplace(a, b);
      } else if (kw == "leaf") {
        leaf = integer();
      } else if (kw == "rel2par") {
        node.rel2par = normalized_rel2par(word());
      } else if (kw == "text") {
        payload = text_payload();
      } else {
        fail("unknown attribute \"" + kw + "\"");
      }
      expect(')');
    }

    if (leaf) {
      if (!node.children.empty()) fail("leaf node with children");
      if (!payload) throw SemanticError(".dis: leaf " + std::to_string(*leaf) + " has no text");
      node.edu_id = *leaf;
      node.span = locate(*payload, *leaf);
    } else {
      if (node.children.empty()) fail("node without leaf number or children");
      node.span = CharSpan(node.children.front().span.start(), node.children.back().span.end());
      if (range) {
        const auto edus = collect_edus(node);
        if (edus.front().id != range->first || edus.back().id != range->second) {
          throw SemanticError(".dis: (span " + std::to_string(range->first) + " " +
                              std::to_string(range->second) + ") does not match its leaves");
        }
      }
    }
    return node;
  }

  std::string text_payload() {
    skip_ws();
    if (in_.substr(pos_, 2) != "_!") fail("expected \"_!\"");
    pos_ += 2;
    const std::size_t end = in_.find("!_", pos_);
    if (end == std::string_view::npos) fail("unterminated text payload");
    std::string out(in_.substr(pos_, end - pos_));
    pos_ = end + 2;
    return out;
  }

  CharSpan locate(const std::string& payload, int leaf) {
    std::u32string needle = text::decode_utf8(text::normalize_newlines(payload));
    std::size_t b = 0;
    std::size_t e = needle.size();
    while (b < e && text::is_space(needle[b])) ++b;
    while (e > b && text::is_space(needle[e - 1])) --e;
    needle = needle.substr(b, e - b);
    if (needle.empty()) throw SemanticError(".dis: leaf " + std::to_string(leaf) + " has empty text");
    const std::size_t at = text_.find(needle, cursor_);
    if (at == std::u32string::npos) {
      throw SemanticError("EDU text not found in document: leaf " + std::to_string(leaf) +
                          " (\"" + text::encode_utf8(needle.substr(0, 40)) + "\")");
    }
    cursor_ = at + needle.size();
    return CharSpan(at, cursor_);
  }

  std::string_view in_;
  const std::u32string& text_;
  std::size_t pos_ = 0;
  std::size_t cursor_ = 0;
};

void check_bounds(const CharSpan& s, std::size_t len, const std::string& where) {
  if (s.end() > len) {
    throw SemanticError("span out of bounds: " + where + " " + to_string(s) +
                        " exceeds text length " + std::to_string(len));
  }
}

void check_node_bounds(const RstNode& node, std::size_t len) {
  check_bounds(node.span, len, "RST node");
  for (const auto& c : node.children) check_node_bounds(c, len);
}

void collect_unknown_rst(const RstNode& node, const Taxonomy& taxonomy, std::set<std::string>& out) {
  if (node.rel2par != kSpanSentinel && !taxonomy.is_known(rst_label(node.rel2par))) {
    out.insert(node.rel2par);
  }
  for (const auto& c : node.children) collect_unknown_rst(c, taxonomy, out);
}

}  // namespace

RstTree parse_rst_json(std::string_view bytes, const std::u32string* text, std::string* doc_id) {
  const json doc = parse_json(bytes, "RST JSON");
  RstTree tree;
  try {
    if (doc_id != nullptr) *doc_id = doc.value("doc_id", std::string());
    tree.root = node_from_json(doc.at("root"));
  } catch (const json::exception& e) {
    throw SemanticError(std::string("RST JSON: ") + e.what());
  }
  tree.edus = collect_edus(tree.root);
  require_valid(tree, text);
  return tree;
}

RstTree parse_rst_dis(std::string_view bytes, const std::u32string& text) {
  RstTree tree = DisParser(bytes, text).run();
  require_valid(tree, &text);
  return tree;
}

std::string to_rst_json(const RstTree& tree, std::string_view doc_id) {
  ordered_json out;
  out["doc_id"] = std::string(doc_id);
  out["root"] = node_to_json(tree.root);
  return out.dump(1) + "\n";
}

std::vector<PdtbLine> parse_pdtb_jsonl(std::string_view bytes, const Taxonomy& taxonomy) {
  std::vector<PdtbLine> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < bytes.size()) {
    std::size_t end = bytes.find('\n', start);
    if (end == std::string_view::npos) end = bytes.size();
    std::string_view line = bytes.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    const std::string where = "PDTB line " + std::to_string(line_no);
    json v;
    try {
      v = json::parse(line);
    } catch (const json::parse_error& e) {
      const std::size_t col = e.byte > 0 ? e.byte : 1;
      throw SyntaxError(where + ", column " + std::to_string(col) + ": " + e.what(), line_no, col);
    }
    PdtbLine rec;
    try {
      rec.doc_id = v.at("doc_id").get<std::string>();
      auto& rel = rec.relation;
      rel.rel_id = v.at("rel_id").get<std::string>();
      const auto type = v.at("type").get<std::string>();
      auto parsed = parse_relation_type(type);
      if (!parsed) throw SemanticError("unknown relation type \"" + type + "\"");
      rel.type = *parsed;
      if (v.contains("connective") && !v["connective"].is_null()) {
        const auto& c = v["connective"];
        rel.connective_spans = spans_from_json(c.value("spans", json::array()));
        rel.connective_text = c.value("text", std::string());
      }
      for (const auto& s : v.at("senses")) rel.senses.push_back(taxonomy.parse_pdtb(s.get<std::string>()));
      rel.arg1 = spans_from_json(v.at("arg1").at("spans"));
      rel.arg2 = spans_from_json(v.at("arg2").at("spans"));
      check_relation(rel);
    } catch (const json::exception& e) {
      throw SemanticError(where + ": " + e.what());
    } catch (const DataError& e) {
      throw SemanticError(where + ": " + e.what());
    }
    if (!seen.emplace(rec.doc_id, rec.relation.rel_id).second) {
      throw SemanticError(where + ": duplicate rel_id \"" + rec.relation.rel_id + "\" in document \"" +
                          rec.doc_id + "\"");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::string to_pdtb_jsonl(std::string_view doc_id, const std::vector<PdtbRelation>& relations) {
  std::string out;
  for (const auto& rel : relations) {
    ordered_json v;
    v["doc_id"] = std::string(doc_id);
    v["rel_id"] = rel.rel_id;
    v["type"] = std::string(to_string(rel.type));
    v["connective"] = {{"spans", spans_to_json(rel.connective_spans)}, {"text", rel.connective_text}};
    ordered_json senses = ordered_json::array();
    for (const auto& s : rel.senses) senses.push_back(s.str());
    v["senses"] = std::move(senses);
    v["arg1"] = {{"spans", spans_to_json(rel.arg1)}};
    v["arg2"] = {{"spans", spans_to_json(rel.arg2)}};
    out += v.dump();
    out += '\n';
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CorpusManifest parse_manifest(std::string_view bytes, const std::filesystem::path& base_dir) {
  const json doc = parse_json(bytes, "manifest");
  if (!doc.is_array()) throw SemanticError("manifest must be a JSON array");
  CorpusManifest m;
  std::set<std::string> ids;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  try {
    for (const auto& e : doc) {
      ManifestEntry entry;
      entry.doc_id = e.at("doc_id").get<std::string>();
      entry.text_path = resolve(e.at("text").get<std::string>());
      entry.rst_path = resolve(e.at("rst").get<std::string>());
      entry.pdtb_path = resolve(e.at("pdtb").get<std::string>());
      if (!ids.insert(entry.doc_id).second) {
        throw SemanticError("manifest: duplicate doc_id \"" + entry.doc_id + "\"");
      }
      m.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw SemanticError(std::string("manifest: ") + e.what());
  }
  return m;
}

CorpusManifest read_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path), path.parent_path());
}

Document make_document(std::string doc_id, std::string text, RstTree rst,
                       std::vector<PdtbRelation> pdtb) {
  Document doc;
  doc.doc_id = std::move(doc_id);
  doc.text = text::normalize_newlines(text);
  doc.chars = text::decode_utf8(doc.text);
  doc.rst = std::move(rst);
  doc.pdtb = std::move(pdtb);
  const std::size_t len = doc.length();
  check_node_bounds(doc.rst.root, len);
  for (const auto& rel : doc.pdtb) {
    const std::string where = "relation " + rel.rel_id;
    for (const auto* set : {&rel.arg1, &rel.arg2, &rel.connective_spans}) {
      for (const auto& s : set->spans()) check_bounds(s, len, where);
    }
  }
  return doc;
}

LoadResult load_corpus(const CorpusManifest& manifest, const Taxonomy& taxonomy) {
  LoadResult result;
  // Several documents may share one JSONL file.
  std::map<std::filesystem::path, std::variant<std::vector<PdtbLine>, std::string>> pdtb_cache;

  for (const auto& entry : manifest.entries) {
    try {
      std::string raw = text::normalize_newlines(read_file(entry.text_path));
      const std::u32string chars = text::decode_utf8(raw);

      const std::string rst_bytes = read_file(entry.rst_path);
      RstTree tree = entry.rst_path.extension() == ".dis"
                         ? parse_rst_dis(rst_bytes, chars)
                         : parse_rst_json(rst_bytes, &chars);

      auto it = pdtb_cache.find(entry.pdtb_path);
      if (it == pdtb_cache.end()) {
        std::variant<std::vector<PdtbLine>, std::string> parsed;
        try {
          parsed = parse_pdtb_jsonl(read_file(entry.pdtb_path), taxonomy);
        } catch (const DataError& e) {
          parsed = std::string(e.what());
        }
        it = pdtb_cache.emplace(entry.pdtb_path, std::move(parsed)).first;
      }
      if (const auto* err = std::get_if<std::string>(&it->second)) {
        throw DataError(entry.pdtb_path.string() + ": " + *err);
      }
      std::vector<PdtbRelation> rels;
      for (const auto& line : std::get<std::vector<PdtbLine>>(it->second)) {
        if (line.doc_id == entry.doc_id) rels.push_back(line.relation);
      }

      Document doc = make_document(entry.doc_id, std::move(raw), std::move(tree), std::move(rels));

      std::set<std::string> unknown_rst;
      collect_unknown_rst(doc.rst.root, taxonomy, unknown_rst);
      for (const auto& l : unknown_rst) {
        std::string msg = entry.doc_id + ": unknown RST label \"" + l + "\" (nearest:";
        for (const auto& n : taxonomy.nearest_rst(l)) msg += " " + n;
        result.warnings.push_back(msg + ")");
      }
      for (const auto& rel : doc.pdtb) {
        for (const auto& s : rel.senses) {
          if (!taxonomy.is_known(s)) {
            result.warnings.push_back(entry.doc_id + ": relation " + rel.rel_id +
                                      ": unknown PDTB sense \"" + s.str() + "\"");
          }
        }
      }
      result.documents.push_back(std::move(doc));
    } catch (const DataError& e) {
      result.failures.push_back(LoadFailure{entry.doc_id, e.what()});
    }
  }
  return result;
}

}  // namespace discalign
