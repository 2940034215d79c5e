#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "discalign/ingestion.hpp"
#include "discalign/mapping.hpp"

#include <json.hpp>

#include <set>

using namespace discalign;

namespace {

const CorrespondenceGrid& grid() { return CorrespondenceGrid::builtin(); }
SenseLabel P(const char* s) { return Taxonomy::builtin().parse_pdtb(s); }

ProposalSet proposals_of(const std::vector<GridEntry>& entries, const std::string& pdtb) {
  ProposalSet out;
  for (const auto& e : entries) {
    if (e.pdtb.str() == pdtb) out |= e.proposals;
  }
  return out;
}

std::vector<SenseLabel> all_pdtb() {
  auto out = Taxonomy::builtin().pdtb_labels();
  for (const auto& s : Taxonomy::builtin().pdtb_synthetic()) out.push_back(P(s.c_str()));
  return out;
}

const ProposalSet kOUI{Proposal::OLiA, Proposal::UniDim, Proposal::ISO};

}  // namespace

TEST_CASE("ProposalSet") {
  ProposalSet s{Proposal::ISO, Proposal::OLiA};
  CHECK(s.size() == 2);
  CHECK(s.letters() == std::vector<std::string>{"o", "i"});
  CHECK(parse_proposal("u") == Proposal::UniDim);
  CHECK_FALSE(parse_proposal("x"));
}

TEST_CASE("expected_for examples") {
  CHECK(proposals_of(grid().expected_for("condition"), "Contingency.Condition") == kOUI);

  const auto anti = grid().expected_for("antithesis");
  CHECK(proposals_of(anti, "Comparison.Contrast") == ProposalSet{Proposal::OLiA, Proposal::UniDim});
  CHECK(proposals_of(anti, "Comparison.Concession.Expectation") == ProposalSet{Proposal::UniDim, Proposal::ISO});
  CHECK(proposals_of(anti, "Comparison.Concession.Contra-expectation") ==
        ProposalSet{Proposal::UniDim, Proposal::ISO});

  const auto eoa = grid().expected_for("elaboration-object-attribute");
  CHECK(proposals_of(eoa, "Expansion") == ProposalSet{Proposal::OLiA});
  CHECK(proposals_of(eoa, "Expansion.Restatement.Specification") == ProposalSet{Proposal::UniDim});
  CHECK(proposals_of(eoa, "Expansion.Restatement.Generalization") == ProposalSet{Proposal::UniDim});
  CHECK(proposals_of(eoa, "EntRel") == ProposalSet{Proposal::ISO});

  // suffixed and embedded variants share the base row
  CHECK(grid().expected_for("elaboration-object-attribute-e").size() == eoa.size());
  CHECK_THROWS_AS(grid().expected_for("no-such-relation"), UnknownLabelError);
}

TEST_CASE("grid spot checks") {
  CHECK(grid().proposals_for("temporal-same-time", P("Temporal.Synchrony")) == kOUI);
  CHECK(grid().proposals_for("antithesis", P("Comparison.Contrast")) ==
        ProposalSet{Proposal::OLiA, Proposal::UniDim});
  CHECK(grid().proposals_for("antithesis", P("Comparison.Concession")) ==
        ProposalSet{Proposal::UniDim, Proposal::ISO});
  CHECK(grid().proposals_for("comparison", P("Expansion.Conjunction")) == ProposalSet{Proposal::UniDim});
  CHECK(grid().proposals_for("comparison", P("Comparison.Contrast")) == ProposalSet{Proposal::ISO});
  CHECK(grid().not_mapped("comparison").contains(Proposal::OLiA));
}

TEST_CASE("expectation_level examples") {
  CHECK(grid().expectation_level("temporal-same-time", P("Temporal.Synchrony")) == ExpectationLevel::All3);
  CHECK(grid().expectation_level("comparison", P("Expansion.Conjunction")) == ExpectationLevel::OneProposal);
  CHECK(grid().expectation_level("list", P("Contingency.Cause.Reason")) == ExpectationLevel::Unexpected);
  CHECK(grid().expectation_level("list", P("Expansion.Conjunction")) == ExpectationLevel::Unexpected);
  CHECK(grid().expectation_level("antithesis", P("Comparison.Contrast")) == ExpectationLevel::TwoOfThree);
  CHECK(grid().expectation_level("condition", P("Contingency.Condition.Hypothetical")) == ExpectationLevel::All3);
  CHECK(to_string(ExpectationLevel::TwoOfThree) == "TwoOfThree");
}

TEST_CASE("grid completeness: every row answered by every proposal") {
  for (const auto& row : grid().rows()) {
    ProposalSet covered = grid().not_mapped(row);
    for (const auto& e : grid().expected_for(row)) covered |= e.proposals;
    INFO(row);
    CHECK(covered == kOUI);
  }
  for (const auto& e : grid().entries()) CHECK_FALSE(e.proposals.empty());
}

TEST_CASE("grid transcription is pinned") {
  CHECK(grid().checksum() == "4f25620284e71163a68cbdac8b0344f43bfed907fd5812ccf9e661fccb181936");
  CHECK(grid().entries().size() == 143);
  CHECK(grid().rows().size() == 44);
  const auto bytes = read_file(std::string(DISCALIGN_SOURCE_DIR) + "/data/grid.json");
  auto doc = nlohmann::ordered_json::parse(bytes);
  doc["entries"][0]["proposals"] = {"o", "u", "i"};
  CHECK_THROWS_AS(CorrespondenceGrid::from_json(doc.dump(), Taxonomy::builtin()), DataError);
}

TEST_CASE("grid rejects labels unknown to the taxonomy") {
  const auto bytes = read_file(std::string(DISCALIGN_SOURCE_DIR) + "/data/grid.json");
  auto doc = nlohmann::ordered_json::parse(bytes);
  doc["entries"][0]["rst"] = "not-a-label";
  doc.erase("checksum");
  // re-stamp is not available here; either error class is a rejection
  CHECK_THROWS_AS(CorrespondenceGrid::from_json(doc.dump(), Taxonomy::builtin()), DataError);
}

TEST_CASE("inverse query agrees with the forward query") {
  for (const auto& label : all_pdtb()) {
    std::set<std::pair<std::string, std::string>> forward;
    for (const auto& row : grid().rows()) {
      for (const auto& e : grid().expected_for(row)) {
        if (is_descendant(e.pdtb, label) || is_descendant(label, e.pdtb)) forward.emplace(e.rst, e.pdtb.str());
      }
    }
    std::set<std::pair<std::string, std::string>> inverse;
    for (const auto& e : grid().expected_for_pdtb(label)) inverse.emplace(e.rst, e.pdtb.str());
    INFO(label.str());
    CHECK(forward == inverse);
  }
}

TEST_CASE("expectation_level inherits from a coarser grid cell") {
  const auto& tax = Taxonomy::builtin();
  std::size_t checked = 0;
  for (const auto& e : grid().entries()) {
    bool finer_entry = false;
    for (const auto& o : grid().expected_for(e.rst)) {
      if (o.pdtb.depth() > e.pdtb.depth() && is_descendant(e.pdtb, o.pdtb)) finer_entry = true;
    }
    if (finer_entry) continue;
    for (const auto& x : tax.pdtb_labels()) {
      if (x.depth() <= e.pdtb.depth() || !is_descendant(e.pdtb, x)) continue;
      CHECK(grid().expectation_level(e.rst, x) ==
            grid().expectation_level(e.rst, generalize(x, e.pdtb.depth())));
      ++checked;
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("disputed and excluded labels") {
  CHECK(grid().disputed() == std::vector<std::string>{"background", "circumstance", "comparison", "antithesis",
                                                      "elaboration-object-attribute"});
  CHECK(grid().is_disputed("antithesis"));
  CHECK_FALSE(grid().is_disputed("condition"));
  CHECK(grid().is_excluded("question-answer"));
  CHECK(grid().is_excluded("attribution"));
  CHECK_FALSE(grid().is_excluded("list"));
}

TEST_CASE("CCR profiles") {
  const auto reason = grid().ccr_profile(P("Contingency.Cause.Reason"));
  REQUIRE(reason);
  CHECK(*reason == CcrProfile{Polarity::Positive, BasicOperation::Causal, Source::Objective, Order::Backward});

  const auto conc = grid().ccr_profile(rst_label("concession"));
  const auto cause = grid().ccr_profile(rst_label("cause"));
  REQUIRE(conc);
  REQUIRE(cause);
  CHECK(conc->polarity == Polarity::Negative);
  CHECK(conc->polarity != cause->polarity);
  CHECK(conc->basic_operation == cause->basic_operation);
  CHECK(conc->source == cause->source);
  CHECK(conc->order == cause->order);

  CHECK_FALSE(grid().ccr_profile(P("Expansion.List")));
}

TEST_CASE("select_closest_sense") {
  const std::vector<SenseLabel> two = {P("Expansion.Conjunction"), P("Comparison.Contrast")};
  CHECK(select_closest_sense(two, "antithesis", grid()).str() == "Comparison.Contrast");
  const std::vector<SenseLabel> one = {P("Temporal.Asynchronous.Precedence")};
  CHECK(select_closest_sense(one, "list", grid()) == one[0]);
  const std::vector<SenseLabel> neither = {P("Temporal.Synchrony"), P("Contingency.Cause.Reason")};
  CHECK(select_closest_sense(neither, "list", grid()) == neither[0]);
}
