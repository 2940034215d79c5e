#pragma once

// Two-step alignment of PDTB relations onto an RST tree: match each argument
// to its best RST span, then read the relation at the lowest node separating
// the two matches, checking nuclearity on the way.

#include "discalign/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace discalign {

// Child indices from the root; the root itself is the empty path.
using NodePath = std::vector<std::size_t>;

const RstNode& node_at(const RstTree& tree, const NodePath& path);

// Every node with its path, in pre-order.
struct PathNode {
  NodePath path;
  const RstNode* node;
};
std::vector<PathNode> all_nodes(const RstTree& tree);

enum class MatchKind { Edu, Subtree };

struct SpanMatch {
  NodePath path;
  CharSpan span{0, 1};
  std::size_t overlap = 0;
  std::size_t margin = 0;
  MatchKind kind = MatchKind::Edu;

  friend bool operator==(const SpanMatch&, const SpanMatch&) = default;
};

// Best node for `arg`. Characters in `neutral` count neither as overlap nor as
// margin. Only nodes sharing at least one character with the argument are
// candidates; score = overlap - margin, ties broken by higher overlap, lower
// margin, shorter span, earlier start. EDUs are scored first and a subtree
// replaces the best EDU only with a strictly greater score.
std::optional<SpanMatch> match_argument(const SpanSet& arg, const RstTree& tree,
                                        const SpanSet& neutral = {});

// Deepest node with `a` and `b` below different children. nullopt when the
// paths are equal or one is a prefix of the other.
std::optional<NodePath> lowest_common_relation(const NodePath& a, const NodePath& b);

// Label of the relation a node expresses: the satellite's rel2par on a
// mononuclear node, the shared nucleus label on a multinuclear one. Throws
// DataError on a leaf or on disagreeing nucleus labels.
std::string relation_label_at(const RstNode& node);

// Label of the relation holding between children i and j of `node`.
std::string relation_label_between(const RstNode& node, std::size_t i, std::size_t j);

// For a Same-unit node, the label of the one relation beneath it; nullopt when
// both segments span several EDUs (or nothing is embedded).
std::optional<std::string> resolve_same_unit(const RstNode& node);

bool is_attribution(std::string_view label);
bool is_same_unit(std::string_view label);

enum class NuclearityStatus { Ok, NuclearityViolation, InterveningMultinuclear };

struct NuclearityCheck {
  NuclearityStatus status = NuclearityStatus::Ok;
  std::size_t multinuclear = 0;  // InterveningMultinuclear only
  std::size_t attribution = 0;   // attribution relations crossed on the nucleus path
};

// Follows the nucleus path from the child of the lowest common relation at
// `side_child` towards the matched node.
NuclearityCheck check_nuclearity(const RstTree& tree, const NodePath& side_child,
                                 const SpanMatch& match);

enum class FlagKind {
  DiscontinuousArg,
  CentralEmbedding,
  NoRstMatch,
  InternalRelation,
  NuclearityViolation,
  InterveningMultinuclear,
  SameUnitResolved,
  SameUnitUnresolvable,
  InterveningAttribution,
};

struct AlignmentFlag {
  FlagKind kind;
  std::size_t count = 0;  // InterveningAttribution only, >= 1

  friend bool operator==(const AlignmentFlag&, const AlignmentFlag&) = default;
};

// "InterveningAttribution(2)" style.
std::string to_string(const AlignmentFlag& flag);
std::optional<AlignmentFlag> parse_flag(std::string_view s);
std::string_view flag_name(FlagKind kind);
bool is_excluding(FlagKind kind);

enum class AlignmentStatus { Aligned, Flagged, Unalignable };

std::string_view to_string(AlignmentStatus s);
std::optional<AlignmentStatus> parse_alignment_status(std::string_view s);

struct AlignmentRecord {
  std::string doc_id;
  std::string rel_id;
  AlignmentStatus status = AlignmentStatus::Unalignable;
  std::optional<std::string> rst_label;
  std::optional<NodePath> rst_node_path;
  std::optional<SpanMatch> arg1_match;
  std::optional<SpanMatch> arg2_match;
  std::vector<AlignmentFlag> flags;
  // Both arguments match single EDUs up to punctuation, whitespace and the
  // connective.
  bool direct = false;
  // Counts towards the mapping analysis.
  bool analysis = false;
  // Copied from the PDTB relation so records are self-contained.
  RelationType rel_type = RelationType::Explicit;
  std::string connective;
  std::vector<SenseLabel> senses;

  bool has_flag(FlagKind kind) const;
  friend bool operator==(const AlignmentRecord&, const AlignmentRecord&) = default;
};

struct AlignOptions {
  // Treat connective spans touching an argument as neutral characters.
  bool strip_connective = true;
  // Exclude whitespace from overlap and margin counts.
  bool ignore_whitespace = false;
  // Also admit records flagged only for nuclearity reasons into the analysis.
  bool include_flagged = false;
};

AlignmentRecord align_relation(const PdtbRelation& rel, const Document& doc,
                               const AlignOptions& options = {});

// Records ordered by rel_id.
std::vector<AlignmentRecord> align_document(const Document& doc, const AlignOptions& options = {});

// Documents are aligned in parallel; output is ordered by (doc_id, rel_id).
std::vector<AlignmentRecord> align_corpus(const std::vector<Document>& docs,
                                          const AlignOptions& options = {},
                                          unsigned threads = 0);

std::string to_jsonl(const AlignmentRecord& record);
std::string to_jsonl(const std::vector<AlignmentRecord>& records);
// Throws SyntaxError/SemanticError naming the line.
std::vector<AlignmentRecord> parse_alignment_jsonl(std::string_view bytes);

}  // namespace discalign
