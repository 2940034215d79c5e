#pragma once

// Core annotation model: character spans, RST trees, PDTB relations.
//
// All offsets are code-point positions into the LF-normalized document text.
// Values are immutable once built and every operation here is a pure
// function, so documents can be shared freely between threads.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace discalign {

// Half-open [start, end). Empty spans are rejected.
class CharSpan {
 public:
  CharSpan(std::size_t start, std::size_t end);

  std::size_t start() const noexcept { return start_; }
  std::size_t end() const noexcept { return end_; }
  std::size_t length() const noexcept { return end_ - start_; }

  bool contains(const CharSpan& other) const noexcept {
    return start_ <= other.start_ && other.end_ <= end_;
  }
  bool overlaps(const CharSpan& other) const noexcept {
    return start_ < other.end_ && other.start_ < end_;
  }

  friend bool operator==(const CharSpan&, const CharSpan&) = default;
  friend auto operator<=>(const CharSpan&, const CharSpan&) = default;

 private:
  std::size_t start_;
  std::size_t end_;
};

std::string to_string(const CharSpan& span);

// Canonical set of character positions: sorted, disjoint, non-adjacent spans.
class SpanSet {
 public:
  SpanSet() = default;
  SpanSet(std::vector<CharSpan> spans);  // NOLINT: canonicalizing conversion
  SpanSet(std::initializer_list<CharSpan> spans);

  const std::vector<CharSpan>& spans() const noexcept { return spans_; }
  bool empty() const noexcept { return spans_.empty(); }
  std::size_t span_count() const noexcept { return spans_.size(); }
  std::size_t total_length() const noexcept;
  bool contains(std::size_t pos) const noexcept;

  // Smallest single span covering the set. Precondition: !empty().
  CharSpan hull() const;

  friend bool operator==(const SpanSet&, const SpanSet&) = default;

 private:
  std::vector<CharSpan> spans_;
};

SpanSet set_union(const SpanSet& a, const SpanSet& b);
SpanSet set_intersection(const SpanSet& a, const SpanSet& b);
SpanSet set_difference(const SpanSet& a, const SpanSet& b);

// Number of character positions in both a and b.
std::size_t overlap_chars(const SpanSet& a, const SpanSet& b);
// Number of character positions in candidate but not in target.
std::size_t margin_chars(const SpanSet& candidate, const SpanSet& target);

enum class Framework { Pdtb, Rst };

// A relation label. PDTB labels have 1-3 dot-separated segments
// (class.type.subtype); RST labels have exactly one.
struct SenseLabel {
  Framework framework = Framework::Pdtb;
  std::vector<std::string> segments;

  std::size_t depth() const noexcept { return segments.size(); }
  std::string str() const;

  friend bool operator==(const SenseLabel&, const SenseLabel&) = default;
  friend auto operator<=>(const SenseLabel&, const SenseLabel&) = default;
};

inline constexpr std::string_view kSpanSentinel = "span";
inline constexpr std::string_view kSameUnit = "same-unit";

enum class Nuclearity { Root, Nucleus, Satellite };

std::string_view to_string(Nuclearity n);
std::optional<Nuclearity> parse_nuclearity(std::string_view s);

struct RstNode {
  CharSpan span{0, 1};
  Nuclearity nuclearity = Nuclearity::Root;
  std::string rel2par{kSpanSentinel};
  std::vector<RstNode> children;
  std::optional<int> edu_id;

  bool is_leaf() const noexcept { return children.empty(); }
  std::size_t nucleus_count() const noexcept;
  bool is_multinuclear() const noexcept { return nucleus_count() >= 2; }

  friend bool operator==(const RstNode&, const RstNode&) = default;
};

struct Edu {
  int id = 0;
  CharSpan span{0, 1};
  friend bool operator==(const Edu&, const Edu&) = default;
};

struct RstTree {
  RstNode root;
  std::vector<Edu> edus;

  friend bool operator==(const RstTree&, const RstTree&) = default;
};

// Rebuilds `edus` from the leaves of `root` in document order.
std::vector<Edu> collect_edus(const RstNode& root);

struct TreeViolation {
  CharSpan span;
  std::string rule;
  std::string detail;
};

// Checks every RstNode/RstTree invariant. When `text` is given, gaps between
// consecutive children that consist only of whitespace are tolerated (EDU
// offsets recovered from raw text never include inter-EDU whitespace).
std::vector<TreeViolation> validate_tree(const RstTree& tree,
                                         const std::u32string* text = nullptr);

// Descent from `node` through successive unique Nucleus children.
struct NucleusPath {
  std::vector<const RstNode*> nodes;
  // Set when a multinuclear node was met; `nodes` then ends at that node.
  bool ambiguous = false;
};

NucleusPath nucleus_path(const RstNode& node);

enum class RelationType { Explicit, Implicit, AltLex, EntRel, NoRel };

std::string_view to_string(RelationType t);
std::optional<RelationType> parse_relation_type(std::string_view s);

struct PdtbRelation {
  std::string rel_id;
  RelationType type = RelationType::Explicit;
  SpanSet connective_spans;
  std::string connective_text;
  std::vector<SenseLabel> senses;
  SpanSet arg1;
  SpanSet arg2;

  friend bool operator==(const PdtbRelation&, const PdtbRelation&) = default;
};

// Throws SemanticError naming the first violated PdtbRelation invariant.
void check_relation(const PdtbRelation& rel);

struct Document {
  std::string doc_id;
  std::string text;       // UTF-8, LF line endings
  std::u32string chars;   // decoded `text`; offsets index into this
  RstTree rst;
  std::vector<PdtbRelation> pdtb;

  std::size_t length() const noexcept { return chars.size(); }
};

}  // namespace discalign
