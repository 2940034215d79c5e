#include "discalign/model.hpp"

#include "discalign/error.hpp"
#include "discalign/text.hpp"

#include <algorithm>
#include <stdexcept>

namespace discalign {

CharSpan::CharSpan(std::size_t start, std::size_t end) : start_(start), end_(end) {
  if (start >= end) {
    throw SemanticError("empty or inverted span [" + std::to_string(start) + "," +
                        std::to_string(end) + ")");
  }
}

std::string to_string(const CharSpan& span) {
  return "[" + std::to_string(span.start()) + "," + std::to_string(span.end()) + ")";
}

SpanSet::SpanSet(std::vector<CharSpan> spans) {
  std::sort(spans.begin(), spans.end());
  for (const CharSpan& s : spans) {
    if (!spans_.empty() && s.start() <= spans_.back().end()) {
      if (s.end() > spans_.back().end()) {
        spans_.back() = CharSpan(spans_.back().start(), s.end());
      }
    } else {
      spans_.push_back(s);
    }
  }
}

SpanSet::SpanSet(std::initializer_list<CharSpan> spans)
    : SpanSet(std::vector<CharSpan>(spans)) {}

std::size_t SpanSet::total_length() const noexcept {
  std::size_t n = 0;
  for (const auto& s : spans_) n += s.length();
  return n;
}

bool SpanSet::contains(std::size_t pos) const noexcept {
  auto it = std::upper_bound(spans_.begin(), spans_.end(), pos,
                             [](std::size_t p, const CharSpan& s) { return p < s.start(); });
  if (it == spans_.begin()) return false;
  --it;
  return pos < it->end();
}

CharSpan SpanSet::hull() const {
  if (spans_.empty()) throw std::logic_error("hull of empty SpanSet");
  return CharSpan(spans_.front().start(), spans_.back().end());
}

SpanSet set_union(const SpanSet& a, const SpanSet& b) {
  std::vector<CharSpan> all = a.spans();
  all.insert(all.end(), b.spans().begin(), b.spans().end());
  return SpanSet(std::move(all));
}

SpanSet set_intersection(const SpanSet& a, const SpanSet& b) {
  std::vector<CharSpan> out;
  auto i = a.spans().begin();
  auto j = b.spans().begin();
  while (i != a.spans().end() && j != b.spans().end()) {
    const std::size_t lo = std::max(i->start(), j->start());
    const std::size_t hi = std::min(i->end(), j->end());
    if (lo < hi) out.emplace_back(lo, hi);
    if (i->end() < j->end()) {
      ++i;
    } else {
      ++j;
    }
  }
  return SpanSet(std::move(out));
}

SpanSet set_difference(const SpanSet& a, const SpanSet& b) {
  std::vector<CharSpan> out;
  auto j = b.spans().begin();
  for (const CharSpan& s : a.spans()) {
    std::size_t cursor = s.start();
    while (j != b.spans().end() && j->end() <= cursor) ++j;
    for (auto k = j; k != b.spans().end() && k->start() < s.end(); ++k) {
      if (k->start() > cursor) out.emplace_back(cursor, k->start());
      cursor = std::max(cursor, k->end());
      if (cursor >= s.end()) break;
    }
    if (cursor < s.end()) out.emplace_back(cursor, s.end());
  }
  return SpanSet(std::move(out));
}

std::size_t overlap_chars(const SpanSet& a, const SpanSet& b) {
  std::size_t n = 0;
  auto i = a.spans().begin();
  auto j = b.spans().begin();
  while (i != a.spans().end() && j != b.spans().end()) {
    const std::size_t lo = std::max(i->start(), j->start());
    const std::size_t hi = std::min(i->end(), j->end());
    if (lo < hi) n += hi - lo;
    if (i->end() < j->end()) {
      ++i;
    } else {
      ++j;
    }
  }
  return n;
}

std::size_t margin_chars(const SpanSet& candidate, const SpanSet& target) {
  return candidate.total_length() - overlap_chars(candidate, target);
}

std::string SenseLabel::str() const {
  std::string out;
  for (const auto& seg : segments) {
    if (!out.empty()) out.push_back('.');
    out += seg;
  }
  return out;
}

std::string_view to_string(Nuclearity n) {
  switch (n) {
    case Nuclearity::Root: return "Root";
    case Nuclearity::Nucleus: return "Nucleus";
    case Nuclearity::Satellite: return "Satellite";
  }
  return "?";
}

std::optional<Nuclearity> parse_nuclearity(std::string_view s) {
  if (s == "Root") return Nuclearity::Root;
  if (s == "Nucleus") return Nuclearity::Nucleus;
  if (s == "Satellite") return Nuclearity::Satellite;
  return std::nullopt;
}

std::size_t RstNode::nucleus_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      children.begin(), children.end(),
      [](const RstNode& c) { return c.nuclearity == Nuclearity::Nucleus; }));
}

namespace {

void collect_leaves(const RstNode& node, std::vector<Edu>& out) {
  if (node.is_leaf()) {
    out.push_back(Edu{node.edu_id.value_or(0), node.span});
    return;
  }
  for (const auto& c : node.children) collect_leaves(c, out);
}

bool whitespace_gap(const std::u32string* text, std::size_t from, std::size_t to) {
  if (text == nullptr || to > text->size()) return false;
  for (std::size_t i = from; i < to; ++i) {
    if (!text::is_space((*text)[i])) return false;
  }
  return true;
}

class TreeValidator {
 public:
  explicit TreeValidator(const std::u32string* text) : text_(text) {}

  std::vector<TreeViolation> run(const RstTree& tree) {
    const RstNode& root = tree.root;
    if (root.nuclearity != Nuclearity::Root || root.rel2par != kSpanSentinel) {
      add(root.span, "root labeling", "root must have nuclearity Root and rel2par \"span\"");
    }
    visit(root, true);
    check_edus(tree);
    return std::move(out_);
  }

 private:
  void add(const CharSpan& span, std::string rule, std::string detail) {
    out_.push_back(TreeViolation{span, std::move(rule), std::move(detail)});
  }

  void visit(const RstNode& node, bool is_root) {
    if (!is_root && node.nuclearity == Nuclearity::Root) {
      add(node.span, "nuclearity labeling", "non-root node with nuclearity Root");
    }
    if (node.is_leaf()) {
      if (!node.edu_id) add(node.span, "leaf edu_id", "leaf without edu_id");
      return;
    }
    if (node.edu_id) add(node.span, "leaf edu_id", "internal node carries edu_id");
    if (node.children.size() < 2) {
      add(node.span, "internal node arity", "internal node with fewer than 2 children");
    }
    check_tiling(node);
    check_nuclearity(node);
    for (const auto& c : node.children) visit(c, false);
  }

  void check_tiling(const RstNode& node) {
    const auto& kids = node.children;
    bool ok = kids.front().span.start() == node.span.start() &&
              kids.back().span.end() == node.span.end();
    bool overlap = false;
    for (std::size_t i = 1; i < kids.size(); ++i) {
      const std::size_t prev_end = kids[i - 1].span.end();
      const std::size_t next_start = kids[i].span.start();
      if (next_start < prev_end) {
        overlap = true;
      } else if (next_start > prev_end && !whitespace_gap(text_, prev_end, next_start)) {
        ok = false;
      }
    }
    if (overlap) {
      add(node.span, "children overlap", "child spans overlap or are out of order");
    } else if (!ok) {
      add(node.span, "children do not tile parent",
          "child spans leave a gap or exceed the parent span");
    }
  }

  void check_nuclearity(const RstNode& node) {
    const std::size_t nuclei = node.nucleus_count();
    std::string problem;
    if (nuclei == 0) {
      problem = "no Nucleus child";
    } else if (nuclei == 1) {
      for (const auto& c : node.children) {
        if (c.nuclearity == Nuclearity::Nucleus && c.rel2par != kSpanSentinel) {
          problem = "mononuclear Nucleus must carry rel2par \"span\", found \"" + c.rel2par + "\"";
          break;
        }
        if (c.nuclearity == Nuclearity::Satellite && c.rel2par == kSpanSentinel) {
          problem = "Satellite must carry a relation label";
          break;
        }
      }
    } else {
      const std::string* label = nullptr;
      for (const auto& c : node.children) {
        if (c.nuclearity == Nuclearity::Satellite) {
          if (c.rel2par == kSpanSentinel) {
            problem = "Satellite must carry a relation label";
            break;
          }
          continue;
        }
        if (c.rel2par == kSpanSentinel) {
          problem = "multinuclear Nucleus must carry the relation label";
          break;
        }
        if (label != nullptr && *label != c.rel2par) {
          problem = "multinuclear children disagree (\"" + *label + "\" vs \"" + c.rel2par + "\")";
          break;
        }
        label = &c.rel2par;
      }
    }
    if (!problem.empty()) add(node.span, "nuclearity labeling", problem);
  }

  void check_edus(const RstTree& tree) {
    std::vector<Edu> leaves;
    collect_leaves(tree.root, leaves);
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      if (leaves[i].id != static_cast<int>(i + 1)) {
        add(leaves[i].span, "edu numbering",
            "expected edu_id " + std::to_string(i + 1) + ", found " + std::to_string(leaves[i].id));
        break;
      }
    }
    if (tree.edus != leaves) {
      add(tree.root.span, "edu list", "edus do not match the tree leaves");
    }
  }

  const std::u32string* text_;
  std::vector<TreeViolation> out_;
};

}  // namespace

std::vector<Edu> collect_edus(const RstNode& root) {
  std::vector<Edu> out;
  collect_leaves(root, out);
  return out;
}

std::vector<TreeViolation> validate_tree(const RstTree& tree, const std::u32string* text) {
  return TreeValidator(text).run(tree);
}

NucleusPath nucleus_path(const RstNode& node) {
  NucleusPath path;
  const RstNode* cur = &node;
  path.nodes.push_back(cur);
  while (!cur->is_leaf()) {
    if (cur->is_multinuclear()) {
      path.ambiguous = true;
      break;
    }
    const RstNode* next = nullptr;
    for (const auto& c : cur->children) {
      if (c.nuclearity == Nuclearity::Nucleus) next = &c;
    }
    if (next == nullptr) {
      // No nucleus at all; only reachable on unvalidated trees.
      path.ambiguous = true;
      break;
    }
    cur = next;
    path.nodes.push_back(cur);
  }
  return path;
}

std::string_view to_string(RelationType t) {
  switch (t) {
    case RelationType::Explicit: return "Explicit";
    case RelationType::Implicit: return "Implicit";
    case RelationType::AltLex: return "AltLex";
    case RelationType::EntRel: return "EntRel";
    case RelationType::NoRel: return "NoRel";
  }
  return "?";
}

std::optional<RelationType> parse_relation_type(std::string_view s) {
  if (s == "Explicit") return RelationType::Explicit;
  if (s == "Implicit") return RelationType::Implicit;
  if (s == "AltLex") return RelationType::AltLex;
  if (s == "EntRel") return RelationType::EntRel;
  if (s == "NoRel") return RelationType::NoRel;
  return std::nullopt;
}

void check_relation(const PdtbRelation& rel) {
  auto fail = [&](const std::string& what) {
    throw SemanticError("relation " + rel.rel_id + ": " + what);
  };
  if (rel.rel_id.empty()) fail("empty rel_id");
  if (rel.arg1.empty() || rel.arg2.empty()) fail("empty argument");
  if (overlap_chars(rel.arg1, rel.arg2) > 0) fail("argument overlap");
  const bool entity = rel.type == RelationType::EntRel || rel.type == RelationType::NoRel;
  if (entity) {
    if (!rel.connective_spans.empty()) fail("EntRel/NoRel relation with connective spans");
    const std::string_view expected = to_string(rel.type);
    if (rel.senses.size() != 1 || rel.senses.front().str() != expected) {
      fail("EntRel/NoRel relation must carry exactly the sense \"" + std::string(expected) + "\"");
    }
  } else {
    if (rel.senses.empty() || rel.senses.size() > 2) fail("expected 1 or 2 senses");
    if (rel.type == RelationType::Explicit && rel.connective_spans.empty()) {
      fail("Explicit relation without connective spans");
    }
  }
  for (const auto& s : rel.senses) {
    if (s.framework != Framework::Pdtb || s.segments.empty() || s.segments.size() > 3) {
      fail("malformed sense \"" + s.str() + "\"");
    }
  }
}

}  // namespace discalign
