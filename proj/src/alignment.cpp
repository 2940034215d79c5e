#include "discalign/alignment.hpp"

#include "discalign/error.hpp"
#include "discalign/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <thread>
#include <tuple>

namespace discalign {

using nlohmann::json;
using nlohmann::ordered_json;

const RstNode& node_at(const RstTree& tree, const NodePath& path) {
  const RstNode* cur = &tree.root;
  for (std::size_t i : path) {
    if (i >= cur->children.size()) throw DataError("node path out of range");
    cur = &cur->children[i];
  }
  return *cur;
}

namespace {

void walk(const RstNode& node, NodePath& path, std::vector<PathNode>& out) {
  out.push_back(PathNode{path, &node});
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    path.push_back(i);
    walk(node.children[i], path, out);
    path.pop_back();
  }
}

bool is_prefix(const NodePath& a, const NodePath& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

struct Scored {
  std::size_t overlap;
  std::size_t margin;
  CharSpan span;

  long long score() const {
    return static_cast<long long>(overlap) - static_cast<long long>(margin);
  }
};

// True when a ranks strictly before b.
bool better(const Scored& a, const Scored& b) {
  if (a.score() != b.score()) return a.score() > b.score();
  if (a.overlap != b.overlap) return a.overlap > b.overlap;
  if (a.margin != b.margin) return a.margin < b.margin;
  if (a.span.length() != b.span.length()) return a.span.length() < b.span.length();
  return a.span.start() < b.span.start();
}

SpanSet whitespace_positions(const std::u32string& chars) {
  std::vector<CharSpan> out;
  std::size_t i = 0;
  while (i < chars.size()) {
    if (!text::is_space(chars[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < chars.size() && text::is_space(chars[i])) ++i;
    out.emplace_back(start, i);
  }
  return SpanSet(std::move(out));
}

bool blank(const std::u32string& chars, std::size_t from, std::size_t to) {
  for (std::size_t i = from; i < to; ++i) {
    if (i >= chars.size() || !text::is_space(chars[i])) return false;
  }
  return true;
}

// Connective spans touching `arg` (directly or across whitespace), widened
// over the surrounding whitespace.
SpanSet connective_neutral(const SpanSet& arg, const SpanSet& connective,
                           const std::u32string& chars) {
  std::vector<CharSpan> out;
  for (const auto& c : connective.spans()) {
    bool adjacent = false;
    for (const auto& a : arg.spans()) {
      if (c.overlaps(a) || (c.end() <= a.start() && blank(chars, c.end(), a.start())) ||
          (a.end() <= c.start() && blank(chars, a.end(), c.start()))) {
        adjacent = true;
        break;
      }
    }
    if (!adjacent) continue;
    std::size_t s = c.start();
    std::size_t e = c.end();
    while (s > 0 && s - 1 < chars.size() && text::is_space(chars[s - 1])) --s;
    while (e < chars.size() && text::is_space(chars[e])) ++e;
    out.emplace_back(s, e);
  }
  return SpanSet(std::move(out));
}

bool is_direct(const SpanMatch& m, const SpanSet& arg, const SpanSet& connective,
               const std::u32string& chars) {
  if (m.kind != MatchKind::Edu) return false;
  auto stripped = [&](std::size_t p) {
    return connective.contains(p) ||
           (p < chars.size() && (text::is_space(chars[p]) || text::is_punct(chars[p])));
  };
  std::size_t extra = 0;
  for (std::size_t p = m.span.start(); p < m.span.end(); ++p) {
    if (!arg.contains(p) && !stripped(p)) ++extra;
  }
  std::size_t uncovered = 0;
  for (const auto& s : arg.spans()) {
    for (std::size_t p = s.start(); p < s.end(); ++p) {
      if (!m.span.contains(CharSpan(p, p + 1)) && !stripped(p)) ++uncovered;
    }
  }
  return extra <= 2 && uncovered <= 2;
}

}  // namespace

std::vector<PathNode> all_nodes(const RstTree& tree) {
  std::vector<PathNode> out;
  NodePath path;
  walk(tree.root, path, out);
  return out;
}

std::optional<SpanMatch> match_argument(const SpanSet& arg, const RstTree& tree,
                                        const SpanSet& neutral) {
  SpanSet target = set_difference(arg, neutral);
  const SpanSet* skip = &neutral;
  const SpanSet none;
  if (target.empty()) {
    target = arg;
    skip = &none;
  }
  const auto nodes = all_nodes(tree);

  auto score = [&](const RstNode& n) {
    const SpanSet cand = set_difference(SpanSet{n.span}, *skip);
    return Scored{overlap_chars(target, cand), margin_chars(cand, target), n.span};
  };
  auto best_of = [&](bool leaves) {
    std::optional<std::pair<Scored, const PathNode*>> best;
    for (const auto& pn : nodes) {
      if (pn.node->is_leaf() != leaves) continue;
      const Scored s = score(*pn.node);
      if (s.overlap == 0) continue;
      if (!best || better(s, best->first)) best.emplace(s, &pn);
    }
    return best;
  };

  auto best = best_of(true);
  if (!best) return std::nullopt;
  MatchKind kind = MatchKind::Edu;
  if (auto sub = best_of(false); sub && sub->first.score() > best->first.score()) {
    best = sub;
    kind = MatchKind::Subtree;
  }
  const auto& [s, pn] = *best;
  return SpanMatch{pn->path, pn->node->span, s.overlap, s.margin, kind};
}

std::optional<NodePath> lowest_common_relation(const NodePath& a, const NodePath& b) {
  if (is_prefix(a, b) || is_prefix(b, a)) return std::nullopt;
  auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  (void)ib;
  return NodePath(a.begin(), ia);
}

bool is_attribution(std::string_view label) {
  return label == "attribution" || label.starts_with("attribution-");
}

bool is_same_unit(std::string_view label) { return label == kSameUnit; }

std::string relation_label_at(const RstNode& node) {
  if (node.is_leaf()) throw DataError("relation_label_at: leaf node " + to_string(node.span));
  if (node.is_multinuclear()) {
    const std::string* label = nullptr;
    for (const auto& c : node.children) {
      if (c.nuclearity != Nuclearity::Nucleus) continue;
      if (label != nullptr && *label != c.rel2par) {
        throw DataError("inconsistent multinuclear labels at " + to_string(node.span) + ": \"" +
                        *label + "\" vs \"" + c.rel2par + "\"");
      }
      label = &c.rel2par;
    }
    return *label;
  }
  for (const auto& c : node.children) {
    if (c.nuclearity == Nuclearity::Satellite) return c.rel2par;
  }
  throw DataError("relation_label_at: node " + to_string(node.span) + " has no satellite");
}

std::string relation_label_between(const RstNode& node, std::size_t i, std::size_t j) {
  if (i >= node.children.size() || j >= node.children.size()) {
    throw DataError("relation_label_between: child index out of range");
  }
  const RstNode& a = node.children[std::min(i, j)];
  const RstNode& b = node.children[std::max(i, j)];
  if (b.nuclearity == Nuclearity::Satellite) return b.rel2par;
  if (a.nuclearity == Nuclearity::Satellite) return a.rel2par;
  return relation_label_at(node);
}

std::optional<std::string> resolve_same_unit(const RstNode& node) {
  const RstNode* complex = nullptr;
  std::size_t complex_count = 0;
  const RstNode* embedded = nullptr;
  for (const auto& c : node.children) {
    if (c.nuclearity == Nuclearity::Satellite) {
      if (embedded == nullptr) embedded = &c;
      continue;
    }
    if (!c.is_leaf()) {
      complex = &c;
      ++complex_count;
    }
  }
  if (complex_count >= 2) return std::nullopt;
  if (complex != nullptr) {
    auto label = relation_label_at(*complex);
    if (is_same_unit(label)) return resolve_same_unit(*complex);
    return label;
  }
  if (embedded != nullptr) return embedded->rel2par;
  return std::nullopt;
}

NuclearityCheck check_nuclearity(const RstTree& tree, const NodePath& side_child,
                                 const SpanMatch& match) {
  NuclearityCheck out;
  NodePath path = side_child;
  const RstNode* cur = &node_at(tree, path);
  const CharSpan& target = match.span;
  while (true) {
    if (target.contains(cur->span)) return out;
    if (!cur->span.overlaps(target)) {
      out.status = NuclearityStatus::NuclearityViolation;
      return out;
    }
    if (cur->is_leaf()) return out;
    if (cur->is_multinuclear()) {
      out.status = NuclearityStatus::InterveningMultinuclear;
      if (is_prefix(path, match.path)) {
        const RstNode* n = cur;
        for (std::size_t k = path.size(); k < match.path.size(); ++k) {
          if (n->is_multinuclear()) ++out.multinuclear;
          n = &n->children[match.path[k]];
        }
      } else {
        out.multinuclear = 1;
      }
      return out;
    }
    std::size_t next = 0;
    for (std::size_t i = 0; i < cur->children.size(); ++i) {
      const auto& c = cur->children[i];
      if (c.nuclearity == Nuclearity::Nucleus) next = i;
      if (c.nuclearity == Nuclearity::Satellite && is_attribution(c.rel2par)) ++out.attribution;
    }
    path.push_back(next);
    cur = &cur->children[next];
  }
}

std::string_view flag_name(FlagKind kind) {
  switch (kind) {
    case FlagKind::DiscontinuousArg: return "DiscontinuousArg";
    case FlagKind::CentralEmbedding: return "CentralEmbedding";
    case FlagKind::NoRstMatch: return "NoRstMatch";
    case FlagKind::InternalRelation: return "InternalRelation";
    case FlagKind::NuclearityViolation: return "NuclearityViolation";
    case FlagKind::InterveningMultinuclear: return "InterveningMultinuclear";
    case FlagKind::SameUnitResolved: return "SameUnitResolved";
    case FlagKind::SameUnitUnresolvable: return "SameUnitUnresolvable";
    case FlagKind::InterveningAttribution: return "InterveningAttribution";
  }
  return "?";
}

bool is_excluding(FlagKind kind) {
  switch (kind) {
    case FlagKind::NuclearityViolation:
    case FlagKind::InterveningMultinuclear:
    case FlagKind::SameUnitUnresolvable:
    case FlagKind::NoRstMatch:
    case FlagKind::InternalRelation:
      return true;
    default:
      return false;
  }
}

std::string to_string(const AlignmentFlag& flag) {
  std::string out(flag_name(flag.kind));
  if (flag.kind == FlagKind::InterveningAttribution) out += "(" + std::to_string(flag.count) + ")";
  return out;
}

std::optional<AlignmentFlag> parse_flag(std::string_view s) {
  std::size_t count = 0;
  std::string_view name = s;
  if (const auto open = s.find('('); open != std::string_view::npos) {
    if (!s.ends_with(")")) return std::nullopt;
    const auto digits = s.substr(open + 1, s.size() - open - 2);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos) {
      return std::nullopt;
    }
    count = std::stoul(std::string(digits));
    name = s.substr(0, open);
  }
  for (int k = 0; k <= static_cast<int>(FlagKind::InterveningAttribution); ++k) {
    const auto kind = static_cast<FlagKind>(k);
    if (flag_name(kind) != name) continue;
    if ((kind == FlagKind::InterveningAttribution) != (count >= 1)) return std::nullopt;
    return AlignmentFlag{kind, count};
  }
  return std::nullopt;
}

std::string_view to_string(AlignmentStatus s) {
  switch (s) {
    case AlignmentStatus::Aligned: return "Aligned";
    case AlignmentStatus::Flagged: return "Flagged";
    case AlignmentStatus::Unalignable: return "Unalignable";
  }
  return "?";
}

std::optional<AlignmentStatus> parse_alignment_status(std::string_view s) {
  if (s == "Aligned") return AlignmentStatus::Aligned;
  if (s == "Flagged") return AlignmentStatus::Flagged;
  if (s == "Unalignable") return AlignmentStatus::Unalignable;
  return std::nullopt;
}

bool AlignmentRecord::has_flag(FlagKind kind) const {
  return std::any_of(flags.begin(), flags.end(), [&](const AlignmentFlag& f) { return f.kind == kind; });
}

AlignmentRecord align_relation(const PdtbRelation& rel, const Document& doc,
                               const AlignOptions& options) {
  AlignmentRecord rec;
  rec.doc_id = doc.doc_id;
  rec.rel_id = rel.rel_id;
  rec.rel_type = rel.type;
  rec.connective = rel.connective_text;
  rec.senses = rel.senses;

  auto flag = [&](FlagKind k, std::size_t count = 0) {
    if (!rec.has_flag(k)) rec.flags.push_back(AlignmentFlag{k, count});
  };

  if (rel.arg1.span_count() > 1 || rel.arg2.span_count() > 1) flag(FlagKind::DiscontinuousArg);
  const CharSpan h1 = rel.arg1.hull();
  const CharSpan h2 = rel.arg2.hull();
  if (h1.contains(h2) || h2.contains(h1)) flag(FlagKind::CentralEmbedding);

  SpanSet ws;
  if (options.ignore_whitespace) ws = whitespace_positions(doc.chars);
  auto neutral = [&](const SpanSet& arg) {
    SpanSet n = ws;
    if (options.strip_connective) {
      n = set_union(n, connective_neutral(arg, rel.connective_spans, doc.chars));
    }
    return n;
  };

  const RstTree& tree = doc.rst;
  rec.arg1_match = match_argument(rel.arg1, tree, neutral(rel.arg1));
  rec.arg2_match = match_argument(rel.arg2, tree, neutral(rel.arg2));
  if (!rec.arg1_match || !rec.arg2_match) {
    flag(FlagKind::NoRstMatch);
    return rec;
  }
  const SpanMatch& m1 = *rec.arg1_match;
  const SpanMatch& m2 = *rec.arg2_match;
  rec.direct = is_direct(m1, rel.arg1, rel.connective_spans, doc.chars) &&
               is_direct(m2, rel.arg2, rel.connective_spans, doc.chars);

  if (m1.path == m2.path) {
    flag(FlagKind::InternalRelation);
    return rec;
  }

  auto resolve = [&](const RstNode& node) {
    if (auto label = resolve_same_unit(node)) {
      flag(FlagKind::SameUnitResolved);
      rec.rst_label = *label;
    } else {
      flag(FlagKind::SameUnitUnresolvable);
      rec.rst_label = std::string(kSameUnit);
    }
  };

  const auto lcr = lowest_common_relation(m1.path, m2.path);
  if (!lcr) {
    // One match contains the other: only a Same-unit container carries a
    // relation between its parts.
    const NodePath& outer = m1.path.size() < m2.path.size() ? m1.path : m2.path;
    const RstNode& node = node_at(tree, outer);
    if (!is_same_unit(relation_label_at(node))) {
      flag(FlagKind::InternalRelation);
      return rec;
    }
    rec.rst_node_path = outer;
    resolve(node);
  } else {
    const RstNode& node = node_at(tree, *lcr);
    rec.rst_node_path = *lcr;
    const std::size_t i = m1.path[lcr->size()];
    const std::size_t j = m2.path[lcr->size()];
    const std::string label = relation_label_between(node, i, j);
    if (is_same_unit(label)) {
      resolve(node);
    } else {
      rec.rst_label = label;
    }

    std::size_t attributions = 0;
    for (const auto& [m, child] : {std::pair{&m1, i}, std::pair{&m2, j}}) {
      NodePath side = *lcr;
      side.push_back(child);
      const auto check = check_nuclearity(tree, side, *m);
      if (check.status == NuclearityStatus::NuclearityViolation) flag(FlagKind::NuclearityViolation);
      if (check.status == NuclearityStatus::InterveningMultinuclear) {
        flag(FlagKind::InterveningMultinuclear);
      }
      attributions += check.attribution;
    }
    if (attributions > 0) flag(FlagKind::InterveningAttribution, attributions);
  }

  bool excluded = false;
  bool nuclearity_only = true;
  for (const auto& f : rec.flags) {
    if (!is_excluding(f.kind)) continue;
    excluded = true;
    if (f.kind != FlagKind::NuclearityViolation && f.kind != FlagKind::InterveningMultinuclear) {
      nuclearity_only = false;
    }
  }
  const bool attribution_label = is_attribution(*rec.rst_label);
  if (!excluded && !attribution_label) {
    rec.status = AlignmentStatus::Aligned;
    rec.analysis = true;
  } else {
    rec.status = AlignmentStatus::Flagged;
    rec.analysis = options.include_flagged && nuclearity_only && !attribution_label;
  }
  return rec;
}

std::vector<AlignmentRecord> align_document(const Document& doc, const AlignOptions& options) {
  std::vector<AlignmentRecord> out;
  out.reserve(doc.pdtb.size());
  for (const auto& rel : doc.pdtb) out.push_back(align_relation(rel, doc, options));
  std::sort(out.begin(), out.end(),
            [](const AlignmentRecord& a, const AlignmentRecord& b) { return a.rel_id < b.rel_id; });
  return out;
}

std::vector<AlignmentRecord> align_corpus(const std::vector<Document>& docs,
                                          const AlignOptions& options, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(docs.size(), 1)));
  std::vector<std::vector<AlignmentRecord>> per_doc(docs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < docs.size(); k = next++) {
      per_doc[k] = align_document(docs[k], options);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<AlignmentRecord> out;
  for (auto& v : per_doc) std::move(v.begin(), v.end(), std::back_inserter(out));
  std::stable_sort(out.begin(), out.end(), [](const AlignmentRecord& a, const AlignmentRecord& b) {
    return std::tie(a.doc_id, a.rel_id) < std::tie(b.doc_id, b.rel_id);
  });
  return out;
}

namespace {

ordered_json match_to_json(const std::optional<SpanMatch>& m) {
  if (!m) return nullptr;
  ordered_json out;
  out["path"] = m->path;
  out["span"] = {m->span.start(), m->span.end()};
  out["kind"] = m->kind == MatchKind::Edu ? "EDU" : "Subtree";
  out["overlap"] = m->overlap;
  out["margin"] = m->margin;
  return out;
}

std::optional<SpanMatch> match_from_json(const json& v) {
  if (v.is_null()) return std::nullopt;
  SpanMatch m;
  m.path = v.at("path").get<NodePath>();
  const auto& s = v.at("span");
  m.span = CharSpan(s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>());
  const auto kind = v.at("kind").get<std::string>();
  if (kind == "EDU") {
    m.kind = MatchKind::Edu;
  } else if (kind == "Subtree") {
    m.kind = MatchKind::Subtree;
  } else {
    throw SemanticError("bad match kind \"" + kind + "\"");
  }
  m.overlap = v.at("overlap").get<std::size_t>();
  m.margin = v.at("margin").get<std::size_t>();
  return m;
}

SenseLabel split_sense(const std::string& s) {
  SenseLabel out{Framework::Pdtb, {}};
  std::size_t start = 0;
  while (true) {
    const auto dot = s.find('.', start);
    out.segments.push_back(s.substr(start, dot == std::string::npos ? dot : dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return out;
}

}  // namespace

std::string to_jsonl(const AlignmentRecord& r) {
  ordered_json v;
  v["doc_id"] = r.doc_id;
  v["rel_id"] = r.rel_id;
  v["status"] = std::string(to_string(r.status));
  v["rst_label"] = r.rst_label ? ordered_json(*r.rst_label) : ordered_json(nullptr);
  v["rst_node_path"] = r.rst_node_path ? ordered_json(*r.rst_node_path) : ordered_json(nullptr);
  v["arg1_match"] = match_to_json(r.arg1_match);
  v["arg2_match"] = match_to_json(r.arg2_match);
  ordered_json flags = ordered_json::array();
  for (const auto& f : r.flags) flags.push_back(to_string(f));
  v["flags"] = std::move(flags);
  v["direct"] = r.direct;
  v["analysis"] = r.analysis;
  ordered_json senses = ordered_json::array();
  for (const auto& s : r.senses) senses.push_back(s.str());
  v["pdtb"] = {{"type", std::string(to_string(r.rel_type))},
               {"connective", r.connective},
               {"senses", std::move(senses)}};
  return v.dump() + "\n";
}

std::string to_jsonl(const std::vector<AlignmentRecord>& records) {
  std::string out;
  for (const auto& r : records) out += to_jsonl(r);
  return out;
}

std::vector<AlignmentRecord> parse_alignment_jsonl(std::string_view bytes) {
  std::vector<AlignmentRecord> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < bytes.size()) {
    std::size_t end = bytes.find('\n', start);
    if (end == std::string_view::npos) end = bytes.size();
    const std::string_view line = bytes.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "alignment line " + std::to_string(line_no);
    json v;
    try {
      v = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SyntaxError(where + ": " + e.what(), line_no, e.byte);
    }
    try {
      AlignmentRecord r;
      r.doc_id = v.at("doc_id").get<std::string>();
      r.rel_id = v.at("rel_id").get<std::string>();
      const auto status = parse_alignment_status(v.at("status").get<std::string>());
      if (!status) throw SemanticError("bad status " + v["status"].dump());
      r.status = *status;
      if (!v.at("rst_label").is_null()) r.rst_label = v["rst_label"].get<std::string>();
      if (!v.at("rst_node_path").is_null()) r.rst_node_path = v["rst_node_path"].get<NodePath>();
      r.arg1_match = match_from_json(v.at("arg1_match"));
      r.arg2_match = match_from_json(v.at("arg2_match"));
      for (const auto& f : v.at("flags")) {
        auto parsed = parse_flag(f.get<std::string>());
        if (!parsed) throw SemanticError("bad flag " + f.dump());
        r.flags.push_back(*parsed);
      }
      r.direct = v.at("direct").get<bool>();
      r.analysis = v.at("analysis").get<bool>();
      const auto& p = v.at("pdtb");
      const auto type = parse_relation_type(p.at("type").get<std::string>());
      if (!type) throw SemanticError("bad relation type " + p["type"].dump());
      r.rel_type = *type;
      r.connective = p.at("connective").get<std::string>();
      for (const auto& s : p.at("senses")) r.senses.push_back(split_sense(s.get<std::string>()));
      if (r.status == AlignmentStatus::Unalignable && r.rst_label) {
        throw SemanticError("Unalignable record carries an rst_label");
      }
      if (r.status == AlignmentStatus::Aligned) {
        if (!r.rst_label) throw SemanticError("Aligned record without rst_label");
        for (const auto& f : r.flags) {
          if (is_excluding(f.kind)) throw SemanticError("Aligned record with excluding flag");
        }
      }
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw SemanticError(where + ": " + e.what());
    } catch (const DataError& e) {
      throw SemanticError(where + ": " + e.what());
    }
  }
  return out;
}

}  // namespace discalign
