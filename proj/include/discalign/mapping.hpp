#pragma once

// The three RST-DT <-> PDTB correspondence proposals (OLiA, UniDim, ISO) and
// the CCR dimension profiles.

#include "discalign/model.hpp"
#include "discalign/taxonomy.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace discalign {

enum class Proposal : std::uint8_t { OLiA = 1, UniDim = 2, ISO = 4 };

// Subset of {OLiA, UniDim, ISO}. Printed as the grid letters "o", "u", "i".
class ProposalSet {
 public:
  ProposalSet() = default;
  ProposalSet(std::initializer_list<Proposal> ps) {
    for (auto p : ps) insert(p);
  }

  void insert(Proposal p) noexcept { bits_ |= static_cast<std::uint8_t>(p); }
  bool contains(Proposal p) const noexcept { return (bits_ & static_cast<std::uint8_t>(p)) != 0; }
  std::size_t size() const noexcept;
  bool empty() const noexcept { return bits_ == 0; }
  ProposalSet& operator|=(ProposalSet o) noexcept {
    bits_ |= o.bits_;
    return *this;
  }
  // Letters in o,u,i order.
  std::vector<std::string> letters() const;

  friend bool operator==(ProposalSet, ProposalSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

std::optional<Proposal> parse_proposal(std::string_view letter);

enum class ExpectationLevel { Unexpected = 0, OneProposal = 1, TwoOfThree = 2, All3 = 3 };

std::string_view to_string(ExpectationLevel level);

struct GridEntry {
  std::string rst;
  SenseLabel pdtb;
  ProposalSet proposals;
  bool disputed = false;
};

enum class Polarity { Positive, Negative };
enum class BasicOperation { Causal, Additive, Conditional, Temporal };
enum class Source { Objective, Subjective };
enum class Order { Forward, Backward, None };

struct CcrProfile {
  Polarity polarity;
  BasicOperation basic_operation;
  Source source;
  Order order;
  friend bool operator==(const CcrProfile&, const CcrProfile&) = default;
};

std::string_view to_string(Polarity v);
std::string_view to_string(BasicOperation v);
std::string_view to_string(Source v);
std::string_view to_string(Order v);

class CorrespondenceGrid {
 public:
  // Parses and checksum-verifies a grid file; every label must resolve in
  // `taxonomy` (SemanticError otherwise).
  static CorrespondenceGrid from_json(std::string_view bytes, const Taxonomy& taxonomy);
  static const CorrespondenceGrid& builtin();

  const std::string& version() const noexcept { return version_; }
  const std::string& checksum() const noexcept { return checksum_; }
  const std::vector<GridEntry>& entries() const noexcept { return entries_; }
  // RST labels that have a row in the grid.
  const std::vector<std::string>& rows() const noexcept { return rows_; }

  // Grid entries for an RST label (suffixed variants are reduced to their
  // base). Throws UnknownLabelError for labels outside the taxonomy.
  std::vector<GridEntry> expected_for(std::string_view rst) const;
  // Inverse query: every entry whose PDTB cell equals `pdtb`, is an ancestor
  // of it, or lies beneath it.
  std::vector<GridEntry> expected_for_pdtb(const SenseLabel& pdtb) const;

  // Union of proposals over entries for `rst` whose PDTB cell is an ancestor,
  // the label itself, or a descendant.
  ProposalSet proposals_for(std::string_view rst, const SenseLabel& pdtb) const;
  ExpectationLevel expectation_level(std::string_view rst, const SenseLabel& pdtb) const;

  // Proposals that explicitly leave the label unmapped.
  ProposalSet not_mapped(std::string_view rst) const;
  ProposalSet not_mapped(const SenseLabel& pdtb) const;

  // Labels the proposals leave out of consideration (question-answer, ...).
  bool is_excluded(std::string_view rst) const;
  const std::vector<std::string>& excluded() const noexcept { return excluded_; }
  bool is_disputed(std::string_view rst) const;
  std::vector<std::string> disputed() const;

  std::optional<CcrProfile> ccr_profile(const SenseLabel& label) const;

  const Taxonomy& taxonomy() const noexcept { return taxonomy_; }

 private:
  std::string base(std::string_view rst) const;

  Taxonomy taxonomy_;
  std::string version_;
  std::string checksum_;
  std::vector<GridEntry> entries_;
  std::vector<std::string> rows_;
  std::vector<std::string> excluded_;
  std::vector<std::pair<std::string, ProposalSet>> rst_not_mapped_;
  std::vector<std::pair<SenseLabel, ProposalSet>> pdtb_not_mapped_;
  std::vector<std::pair<SenseLabel, CcrProfile>> ccr_;
};

// The sense whose expectation level against `rst` is strongest; ties go to
// the first listed. Precondition: senses non-empty.
const SenseLabel& select_closest_sense(const std::vector<SenseLabel>& senses, std::string_view rst,
                                       const CorrespondenceGrid& grid);

}  // namespace discalign
