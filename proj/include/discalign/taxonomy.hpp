#pragma once

// Label inventories of both frameworks: the three-level PDTB sense hierarchy
// and the RST-DT relation tagset with its class grouping.

#include "discalign/error.hpp"
#include "discalign/model.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace discalign {

class UnknownLabelError : public DataError {
 public:
  UnknownLabelError(const std::string& what, std::vector<std::string> nearest)
      : DataError(what), nearest_(std::move(nearest)) {}
  const std::vector<std::string>& nearest() const noexcept { return nearest_; }

 private:
  std::vector<std::string> nearest_;
};

// Lower-cases, collapses whitespace runs to '-', and drops the RST-DT
// embedded-relation suffix "-e".
std::string normalize_rst_label(std::string_view raw);

// Truncates to `level` segments. Throws DataError if level is 0 or exceeds
// the label's depth.
SenseLabel generalize(const SenseLabel& label, std::size_t level);

// True iff a's segments are a prefix of b's. Throws DataError across frameworks.
bool is_descendant(const SenseLabel& a, const SenseLabel& b);

SenseLabel rst_label(std::string_view label);

class Taxonomy {
 public:
  // Parses and checksum-verifies a taxonomy data file.
  static Taxonomy from_json(std::string_view bytes);
  // The data file compiled into the library.
  static const Taxonomy& builtin();

  const std::string& version() const noexcept { return version_; }
  const std::string& checksum() const noexcept { return checksum_; }

  // Splits on '.', maps each segment to its canonical spelling where known
  // (case, spacing and hyphenation insensitive, plus aliases). Unknown
  // segments are kept verbatim.
  SenseLabel parse_pdtb(std::string_view sense) const;
  bool is_known(const SenseLabel& label) const;

  // All 43 hierarchy labels, classes first then types then subtypes.
  const std::vector<SenseLabel>& pdtb_labels() const noexcept { return pdtb_labels_; }
  const std::vector<std::string>& pdtb_synthetic() const noexcept { return pdtb_synthetic_; }
  bool is_synthetic(const SenseLabel& label) const;

  const std::vector<std::string>& rst_labels() const noexcept { return rst_labels_; }
  std::size_t rst_class_count(bool include_structural = false) const;

  // Owning class. Throws UnknownLabelError carrying the nearest known labels.
  std::string rst_class(const SenseLabel& label) const;
  // Relation name without nuclearity-order suffix ("consequence-n" -> "consequence").
  // Unknown labels are returned unchanged.
  std::string rst_base(std::string_view label) const;
  bool is_structural(std::string_view label) const;
  std::vector<std::string> nearest_rst(std::string_view label, std::size_t k = 3) const;

 private:
  struct RstEntry {
    std::string cls;
    std::string base;
    bool structural = false;
  };

  std::string version_;
  std::string checksum_;
  std::vector<SenseLabel> pdtb_labels_;
  std::set<std::vector<std::string>> pdtb_known_;
  std::map<std::string, std::string> pdtb_spelling_;  // folded key -> canonical
  std::vector<std::string> pdtb_synthetic_;
  std::vector<std::string> rst_labels_;
  std::map<std::string, RstEntry> rst_;
};

}  // namespace discalign
