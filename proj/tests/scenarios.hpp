#pragma once

// Hand-built documents for the alignment situations that matter: boundary
// and nucleus-path matches, intervening multinuclear nodes, a nuclearity
// violation, Same-unit containers and a sentence-internal relation. Each
// comes with the record the aligner must produce.

#include "fixtures.hpp"

namespace fx {

struct ScenarioCase {
  std::string name;
  Document doc;
  std::string rel_id;
  AlignmentStatus status;
  std::optional<std::string> label;
  std::vector<AlignmentFlag> flags;  // order-insensitive
};

// (a) is the short nucleus of (a-c); (b) and (c) form a temporal-same-time
// pair; (d) restates (a).
inline Document scn_segmentation() {
  TextBuilder b;
  auto a = b.edu("Prices fell.");
  auto bb = b.edu("Traders in Chicago sold their futures contracts all morning");
  auto c = b.edu("while the exchange struggled with a computer failure that lasted hours.");
  auto d = b.edu("In other words, the market slid.");
  const auto sync = rel(RelationType::Explicit, {"Temporal.Synchrony"},
                        {CharSpan(b.find("Prices").start(), b.find("all morning").end())},
                        {b.find("the exchange struggled with a computer failure that lasted hours")},
                        {b.find("while")}, "while", "sync");
  const auto restate = rel(RelationType::Implicit, {"Expansion.Restatement.Equivalence"},
                           {b.find("Prices fell")}, {b.find("the market slid")}, {}, "in other words",
                           "restate");
  auto pair = multi({bb, c}, "temporal-same-time");
  auto left = mono(a, std::move(pair), "elaboration-additional");
  auto root = mono(std::move(left), d, "restatement");
  return doc_of(b, std::move(root), {sync, restate}, "scn_segmentation");
}

// Arg2 sits in the satellite of a consequence whose nucleus path runs into a
// multinuclear contrast.
inline Document scn_revise_bad() {
  TextBuilder b;
  auto a = b.edu("The state cut water allocations.");
  auto bb = b.edu("Farmers fallowed their fields,");
  auto c = b.edu("while ranchers sold cattle early.");
  const auto r = rel(RelationType::Implicit, {"Comparison.Contrast"}, {b.find("The state cut water allocations")},
                     {b.find("ranchers sold cattle early")}, {}, "however", "contrast");
  auto cons = multi({bb, c}, "contrast");
  auto root = mono(a, std::move(cons), "consequence-s");
  return doc_of(b, std::move(root), {r}, "scn_revise");
}

// (a) concession satellite; (b) attribution satellite of List((c-d), (e-g)).
inline Document scn_difficult_success() {
  TextBuilder b;
  auto a = b.edu("Although the bill passed the House,");
  auto bb = b.edu("aides said");
  auto c = b.edu("the Senate will act");
  auto d = b.edu("if the budget allows it,");
  auto e = b.edu("and the president will sign it.");
  const auto r = rel(RelationType::Explicit, {"Comparison.Concession.Contra-expectation"},
                     {CharSpan(b.find("the Senate").start(), b.find("allows it").end())},
                     {b.find("the bill passed the House")}, {b.find("Although")}, "although", "conc");
  auto cond = mono(c, d, "condition");
  auto list = multi({std::move(cond), e}, "list");
  auto attr = mono(std::move(list), bb, "attribution", true);
  auto root = mono(std::move(attr), a, "concession", true);
  return doc_of(b, std::move(root), {r}, "scn_list");
}

// Circumstance satellite (c) against (a-b), whose nucleus path ends at (a)
// while Arg1 is (b).
inline Document scn_bad_alignment() {
  TextBuilder b;
  auto a = b.edu("Kidder completed a task-force study,");
  auto bb = b.edu("a review that took six weeks,");
  auto c = b.edu("as Mr. Carpenter denied the speculation.");
  const auto r = rel(RelationType::Implicit, {"Temporal.Synchrony"}, {b.find("a review that took six weeks")},
                     {b.find("Mr. Carpenter denied the speculation")}, {}, "meanwhile", "sync");
  auto eoa = mono(a, bb, "elaboration-object-attribute-e");
  auto root = mono(std::move(eoa), c, "circumstance");
  return doc_of(b, std::move(root), {r}, "scn_violation");
}

// Discontinuous Arg1 around an embedded concession, joined by Same-unit.
inline Document scn_same_unit() {
  TextBuilder b;
  auto a = b.edu("Quarterly operating profits at the unit,");
  auto bb = b.edu("although costs rose,");
  auto c = b.edu("climbed sharply in the third quarter.");
  const auto r = rel(RelationType::Explicit, {"Comparison.Concession.Expectation"},
                     {b.find("Quarterly operating profits at the unit"), b.find("climbed sharply in the third quarter")},
                     {b.find("costs rose")}, {b.find("although")}, "although", "su");
  auto inner = mono(a, bb, "concession");
  auto root = multi({std::move(inner), c}, "same-unit");
  return doc_of(b, std::move(root), {r}, "scn_same_unit");
}

// Both Same-unit segments span several EDUs.
inline Document scn_same_unit_unresolvable() {
  TextBuilder b;
  auto a1 = b.edu("The plan,");
  auto a2 = b.edu("which was approved in May,");
  auto c1 = b.edu("will cut costs");
  auto c2 = b.edu("because suppliers agreed.");
  const auto r = rel(RelationType::Implicit, {"Contingency.Cause.Result"}, {CharSpan(0, b.find("in May").end())},
                     {CharSpan(b.find("will cut").start(), b.find("agreed").end())}, {}, "so", "su2");
  auto left = mono(a1, a2, "elaboration-object-attribute-e");
  auto right = mono(c1, c2, "reason");
  auto root = multi({std::move(left), std::move(right)}, "same-unit");
  return doc_of(b, std::move(root), {r}, "su_unresolvable");
}

// One EDU holds both arguments.
inline Document scn_internal() {
  TextBuilder b;
  auto a = b.edu("Municipal bonds look cheap.");
  auto bb = b.edu("That's because municipal-bond interest is exempt from federal income tax.");
  const auto r = rel(RelationType::Explicit, {"Contingency.Cause.Reason"}, {b.find("That")},
                     {b.find("municipal-bond interest is exempt from federal income tax")},
                     {b.find("because")}, "because", "internal");
  auto root = mono(a, bb, "explanation-argumentative");
  return doc_of(b, std::move(root), {r}, "scn_internal");
}

inline std::vector<ScenarioCase> scenario_cases() {
  using F = AlignmentFlag;
  return {
      {"boundary match", scn_segmentation(), "sync", AlignmentStatus::Aligned, "temporal-same-time", {}},
      {"nucleus path match", scn_segmentation(), "restate", AlignmentStatus::Aligned, "restatement", {}},
      {"multinuclear on nucleus path", scn_revise_bad(), "contrast", AlignmentStatus::Flagged,
       "consequence-s", {F{FlagKind::InterveningMultinuclear, 0}}},
      {"multinuclear list", scn_difficult_success(), "conc", AlignmentStatus::Flagged, "concession",
       {F{FlagKind::InterveningMultinuclear, 0}, F{FlagKind::InterveningAttribution, 1}}},
      {"nuclearity violation", scn_bad_alignment(), "sync", AlignmentStatus::Flagged, "circumstance",
       {F{FlagKind::NuclearityViolation, 0}}},
      {"same-unit resolved", scn_same_unit(), "su", AlignmentStatus::Aligned, "concession",
       {F{FlagKind::DiscontinuousArg, 0}, F{FlagKind::CentralEmbedding, 0}, F{FlagKind::SameUnitResolved, 0}}},
      {"same-unit unresolvable", scn_same_unit_unresolvable(), "su2", AlignmentStatus::Flagged, "same-unit",
       {F{FlagKind::SameUnitUnresolvable, 0}}},
      {"internal relation", scn_internal(), "internal", AlignmentStatus::Unalignable, std::nullopt,
       {F{FlagKind::InternalRelation, 0}}},
  };
}

inline const PdtbRelation& relation_by_id(const Document& d, const std::string& id) {
  for (const auto& r : d.pdtb) {
    if (r.rel_id == id) return r;
  }
  throw std::logic_error("no relation " + id);
}

inline bool same_flags(std::vector<AlignmentFlag> a, std::vector<AlignmentFlag> b) {
  auto key = [](const AlignmentFlag& f) { return std::make_pair(static_cast<int>(f.kind), f.count); };
  auto less = [&](const AlignmentFlag& x, const AlignmentFlag& y) { return key(x) < key(y); };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

}  // namespace fx
