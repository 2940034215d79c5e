#include "discalign/mapping.hpp"

#include "checksum.hpp"
#include "discalign/error.hpp"

#include <algorithm>
#include <bit>

namespace discalign {

namespace {

template <typename E, std::size_t N>
E parse_enum(const std::string& s, const std::pair<std::string_view, E> (&table)[N],
             const char* what) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  throw SemanticError(std::string("grid: bad ") + what + " \"" + s + "\"");
}

constexpr std::pair<std::string_view, Polarity> kPolarity[] = {
    {"positive", Polarity::Positive}, {"negative", Polarity::Negative}};
constexpr std::pair<std::string_view, BasicOperation> kBasicOp[] = {
    {"causal", BasicOperation::Causal},
    {"additive", BasicOperation::Additive},
    {"conditional", BasicOperation::Conditional},
    {"temporal", BasicOperation::Temporal}};
constexpr std::pair<std::string_view, Source> kSource[] = {{"objective", Source::Objective},
                                                          {"subjective", Source::Subjective}};
constexpr std::pair<std::string_view, Order> kOrder[] = {
    {"forward", Order::Forward}, {"backward", Order::Backward}, {"none", Order::None}};

template <typename E, std::size_t N>
std::string_view enum_name(E v, const std::pair<std::string_view, E> (&table)[N]) {
  for (const auto& [name, value] : table) {
    if (value == v) return name;
  }
  return "?";
}

ProposalSet parse_proposals(const nlohmann::json& arr) {
  ProposalSet out;
  for (const auto& p : arr) {
    auto parsed = parse_proposal(p.get<std::string>());
    if (!parsed) throw SemanticError("grid: bad proposal letter " + p.dump());
    out.insert(*parsed);
  }
  if (out.empty()) throw SemanticError("grid: empty proposal set");
  return out;
}

bool related(const SenseLabel& a, const SenseLabel& b) {
  return is_descendant(a, b) || is_descendant(b, a);
}

}  // namespace

std::size_t ProposalSet::size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<std::string> ProposalSet::letters() const {
  std::vector<std::string> out;
  if (contains(Proposal::OLiA)) out.emplace_back("o");
  if (contains(Proposal::UniDim)) out.emplace_back("u");
  if (contains(Proposal::ISO)) out.emplace_back("i");
  return out;
}

std::optional<Proposal> parse_proposal(std::string_view letter) {
  if (letter == "o") return Proposal::OLiA;
  if (letter == "u") return Proposal::UniDim;
  if (letter == "i") return Proposal::ISO;
  return std::nullopt;
}

std::string_view to_string(ExpectationLevel level) {
  switch (level) {
    case ExpectationLevel::All3: return "All3";
    case ExpectationLevel::TwoOfThree: return "TwoOfThree";
    case ExpectationLevel::OneProposal: return "OneProposal";
    case ExpectationLevel::Unexpected: return "Unexpected";
  }
  return "Unexpected";
}

std::string_view to_string(Polarity v) { return enum_name(v, kPolarity); }
std::string_view to_string(BasicOperation v) { return enum_name(v, kBasicOp); }
std::string_view to_string(Source v) { return enum_name(v, kSource); }
std::string_view to_string(Order v) { return enum_name(v, kOrder); }

CorrespondenceGrid CorrespondenceGrid::from_json(std::string_view bytes, const Taxonomy& taxonomy) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(std::string("grid: ") + e.what(), 0, 0, e.byte);
  }
  detail::verify_checksum(doc, "grid");

  CorrespondenceGrid g;
  g.taxonomy_ = taxonomy;
  auto check_rst = [&](const std::string& l) {
    if (!taxonomy.is_known(rst_label(l))) throw SemanticError("grid: unknown RST label \"" + l + "\"");
  };
  auto pdtb = [&](const std::string& s) {
    auto label = taxonomy.parse_pdtb(s);
    if (!taxonomy.is_known(label)) throw SemanticError("grid: unknown PDTB label \"" + s + "\"");
    return label;
  };
  try {
    g.version_ = doc.at("version").get<std::string>();
    g.checksum_ = doc.at("checksum").get<std::string>();
    for (const auto& e : doc.at("entries")) {
      GridEntry entry;
      entry.rst = e.at("rst").get<std::string>();
      check_rst(entry.rst);
      entry.pdtb = pdtb(e.at("pdtb").get<std::string>());
      entry.proposals = parse_proposals(e.at("proposals"));
      entry.disputed = e.value("disputed", false);
      g.entries_.push_back(std::move(entry));
    }
    for (const auto& r : doc.at("rows")) {
      g.rows_.push_back(r.get<std::string>());
      check_rst(g.rows_.back());
    }
    for (const auto& r : doc.value("excluded", nlohmann::json::array())) {
      g.excluded_.push_back(r.get<std::string>());
      check_rst(g.excluded_.back());
    }
    for (const auto& e : doc.value("rst_not_mapped", nlohmann::json::array())) {
      const auto l = e.at("rst").get<std::string>();
      check_rst(l);
      g.rst_not_mapped_.emplace_back(l, parse_proposals(e.at("proposals")));
    }
    for (const auto& e : doc.value("pdtb_not_mapped", nlohmann::json::array())) {
      g.pdtb_not_mapped_.emplace_back(pdtb(e.at("pdtb").get<std::string>()),
                                      parse_proposals(e.at("proposals")));
    }
    for (const auto& e : doc.value("ccr", nlohmann::json::array())) {
      const auto fw = e.at("framework").get<std::string>();
      const auto name = e.at("label").get<std::string>();
      SenseLabel label;
      if (fw == "PDTB") {
        label = pdtb(name);
      } else if (fw == "RST") {
        check_rst(name);
        label = rst_label(name);
      } else {
        throw SemanticError("grid: bad framework \"" + fw + "\"");
      }
      CcrProfile p{parse_enum(e.at("polarity").get<std::string>(), kPolarity, "polarity"),
                   parse_enum(e.at("basic_operation").get<std::string>(), kBasicOp, "basic_operation"),
                   parse_enum(e.at("source").get<std::string>(), kSource, "source"),
                   parse_enum(e.at("order").get<std::string>(), kOrder, "order")};
      g.ccr_.emplace_back(std::move(label), p);
    }
  } catch (const nlohmann::json::exception& e) {
    throw SemanticError(std::string("grid: ") + e.what());
  }
  return g;
}

const CorrespondenceGrid& CorrespondenceGrid::builtin() {
  static const CorrespondenceGrid instance = from_json(detail::kBuiltinGridJson, Taxonomy::builtin());
  return instance;
}

std::string CorrespondenceGrid::base(std::string_view raw) const {
  const std::string rst = normalize_rst_label(raw);
  if (!taxonomy_.is_known(rst_label(rst))) {
    auto nearest = taxonomy_.nearest_rst(rst);
    std::string msg = "unknown RST label \"" + std::string(raw) + "\"; nearest:";
    for (const auto& n : nearest) msg += " " + n;
    throw UnknownLabelError(msg, std::move(nearest));
  }
  return taxonomy_.rst_base(rst);
}

std::vector<GridEntry> CorrespondenceGrid::expected_for(std::string_view rst) const {
  const auto b = base(rst);
  std::vector<GridEntry> out;
  for (const auto& e : entries_) {
    if (e.rst == b) out.push_back(e);
  }
  return out;
}

std::vector<GridEntry> CorrespondenceGrid::expected_for_pdtb(const SenseLabel& pdtb) const {
  std::vector<GridEntry> out;
  for (const auto& e : entries_) {
    if (related(e.pdtb, pdtb)) out.push_back(e);
  }
  return out;
}

ProposalSet CorrespondenceGrid::proposals_for(std::string_view rst, const SenseLabel& pdtb) const {
  ProposalSet out;
  if (pdtb.framework != Framework::Pdtb || !taxonomy_.is_known(rst_label(rst))) return out;
  const auto b = taxonomy_.rst_base(rst);
  for (const auto& e : entries_) {
    if (e.rst == b && related(e.pdtb, pdtb)) out |= e.proposals;
  }
  return out;
}

ExpectationLevel CorrespondenceGrid::expectation_level(std::string_view rst,
                                                       const SenseLabel& pdtb) const {
  return static_cast<ExpectationLevel>(proposals_for(rst, pdtb).size());
}

ProposalSet CorrespondenceGrid::not_mapped(std::string_view rst) const {
  const auto b = base(rst);
  for (const auto& [l, ps] : rst_not_mapped_) {
    if (l == b) return ps;
  }
  return {};
}

ProposalSet CorrespondenceGrid::not_mapped(const SenseLabel& pdtb) const {
  for (const auto& [l, ps] : pdtb_not_mapped_) {
    if (l == pdtb) return ps;
  }
  return {};
}

bool CorrespondenceGrid::is_excluded(std::string_view rst) const {
  const auto b = taxonomy_.rst_base(rst);
  return std::find(excluded_.begin(), excluded_.end(), b) != excluded_.end();
}

bool CorrespondenceGrid::is_disputed(std::string_view rst) const {
  const auto b = taxonomy_.rst_base(rst);
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const GridEntry& e) { return e.rst == b && e.disputed; });
}

std::vector<std::string> CorrespondenceGrid::disputed() const {
  std::vector<std::string> out;
  for (const auto& r : rows_) {
    if (is_disputed(r)) out.push_back(r);
  }
  return out;
}

std::optional<CcrProfile> CorrespondenceGrid::ccr_profile(const SenseLabel& label) const {
  for (const auto& [l, p] : ccr_) {
    if (l == label) return p;
  }
  return std::nullopt;
}

const SenseLabel& select_closest_sense(const std::vector<SenseLabel>& senses, std::string_view rst,
                                       const CorrespondenceGrid& grid) {
  if (senses.empty()) throw std::invalid_argument("select_closest_sense: no senses");
  const SenseLabel* best = &senses.front();
  auto best_level = grid.expectation_level(rst, *best);
  for (std::size_t i = 1; i < senses.size(); ++i) {
    const auto level = grid.expectation_level(rst, senses[i]);
    if (level > best_level) {
      best = &senses[i];
      best_level = level;
    }
  }
  return *best;
}

}  // namespace discalign
