#include "synthetic.hpp"

#include "discalign/ingestion.hpp"
#include "discalign/taxonomy.hpp"

#include <random>
#include <stdexcept>

namespace discalign::synthetic {

namespace {

const std::vector<std::string> kSubjects = {
    "the company", "the board",    "investors",       "the agency",   "analysts",
    "the bank",    "retailers",    "the union",       "regulators",   "the airline",
    "local officials", "the fund", "the chip maker",  "exporters",    "the utility",
    "the brokerage", "shareholders", "the city council", "the insurer", "car dealers"};

const std::vector<std::string> kPredicates = {
    "raised its forecast",      "cut spending",           "expanded overseas",
    "delayed the vote",         "reported higher sales",  "lowered prices",
    "hired new staff",          "sold the unit",          "revised the plan",
    "posted a loss",            "bought back shares",     "closed two plants",
    "signed a supply contract", "paid down its debt",     "filed for a rate increase",
    "rejected the offer",       "trimmed its payroll",    "opened new stores",
    "issued new bonds",         "settled the lawsuit"};

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

struct Block {
  RstNode node;
  std::vector<PdtbRelation> rels;
};

class DocBuilder {
 public:
  explicit DocBuilder(std::mt19937_64& rng) : rng_(rng) {}

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool chance(double p) { return static_cast<double>(rng_() % 1'000'000) < p * 1'000'000.0; }

  std::string clause() { return kSubjects[pick(kSubjects.size())] + " " + kPredicates[pick(kPredicates.size())]; }

  RstNode edu(const std::string& s) {
    if (!text.empty()) text += ' ';
    const std::size_t start = text.size();
    text += s;
    RstNode n;
    n.span = CharSpan(start, text.size());
    n.edu_id = next_id++;
    n.nuclearity = Nuclearity::Nucleus;
    return n;
  }

  CharSpan find_in(const RstNode& node, const std::string& needle) const {
    const auto at = text.find(needle, node.span.start());
    if (at == std::string::npos || at + needle.size() > node.span.end()) {
      throw std::logic_error("synthetic: \"" + needle + "\" not inside node");
    }
    return CharSpan(at, at + needle.size());
  }

  std::string text;
  int next_id = 1;

 private:
  std::mt19937_64& rng_;
};

RstNode mono(RstNode nucleus, RstNode satellite, const std::string& label, bool satellite_first) {
  nucleus.nuclearity = Nuclearity::Nucleus;
  nucleus.rel2par = std::string(kSpanSentinel);
  satellite.nuclearity = Nuclearity::Satellite;
  satellite.rel2par = label;
  RstNode n;
  n.nuclearity = Nuclearity::Nucleus;
  if (satellite_first) {
    n.children = {std::move(satellite), std::move(nucleus)};
  } else {
    n.children = {std::move(nucleus), std::move(satellite)};
  }
  n.span = CharSpan(n.children.front().span.start(), n.children.back().span.end());
  return n;
}

RstNode multi(std::vector<RstNode> kids, const std::string& label) {
  RstNode n;
  n.nuclearity = Nuclearity::Nucleus;
  for (auto& k : kids) {
    k.nuclearity = Nuclearity::Nucleus;
    k.rel2par = label;
  }
  n.children = std::move(kids);
  n.span = CharSpan(n.children.front().span.start(), n.children.back().span.end());
  return n;
}

PdtbRelation relation(RelationType type, std::vector<CharSpan> conn, std::string conn_text,
                      const std::vector<std::string>& senses, std::vector<CharSpan> arg1,
                      std::vector<CharSpan> arg2) {
  PdtbRelation r;
  r.type = type;
  r.connective_spans = SpanSet(std::move(conn));
  r.connective_text = std::move(conn_text);
  for (const auto& s : senses) r.senses.push_back(Taxonomy::builtin().parse_pdtb(s));
  r.arg1 = SpanSet(std::move(arg1));
  r.arg2 = SpanSet(std::move(arg2));
  return r;
}

// "[A,] [while B.]": the reading decides both labels.
Block while_block(DocBuilder& b) {
  const bool temporal = b.chance(0.5);
  const auto c1 = b.clause();
  const auto c2 = b.clause();
  auto e1 = b.edu(capitalize(c1) + ",");
  auto e2 = b.edu("while " + c2 + ".");
  Block out;
  out.rels.push_back(relation(RelationType::Explicit, {b.find_in(e2, "while")}, "while",
                              {temporal ? "Temporal.Synchrony" : "Comparison.Contrast"},
                              {b.find_in(e1, capitalize(c1))}, {b.find_in(e2, c2)}));
  out.node = multi({e1, e2}, temporal ? "temporal-same-time" : "contrast");
  return out;
}

// "[A,] [but B.]": PDTB and RST labels drawn independently.
Block but_block(DocBuilder& b) {
  const auto c1 = b.clause();
  const auto c2 = b.clause();
  auto e1 = b.edu(capitalize(c1) + ",");
  auto e2 = b.edu("but " + c2 + ".");
  const char* sense = b.chance(0.5) ? "Comparison.Contrast" : "Comparison.Concession.Contra-expectation";
  const std::size_t rst = b.pick(3);
  Block out;
  out.rels.push_back(relation(RelationType::Explicit, {b.find_in(e2, "but")}, "but", {sense},
                              {b.find_in(e1, capitalize(c1))}, {b.find_in(e2, c2)}));
  if (rst == 0) {
    out.node = multi({e1, e2}, "contrast");
  } else {
    out.node = mono(e2, e1, rst == 1 ? "concession" : "antithesis", true);
  }
  return out;
}

Block because_block(DocBuilder& b) {
  const auto c1 = b.clause();
  const auto c2 = b.clause();
  auto e1 = b.edu(capitalize(c1));
  auto e2 = b.edu("because " + c2 + ".");
  Block out;
  out.rels.push_back(relation(RelationType::Explicit, {b.find_in(e2, "because")}, "because",
                              {"Contingency.Cause.Reason"}, {b.find_in(e1, capitalize(c1))},
                              {b.find_in(e2, c2)}));
  out.node = mono(e1, e2, b.chance(0.7) ? "reason" : "explanation-argumentative", false);
  return out;
}

Block if_block(DocBuilder& b) {
  const auto c1 = b.clause();
  const auto c2 = b.clause();
  auto e1 = b.edu("If " + c1 + ",");
  auto e2 = b.edu(c2 + " within a year.");
  Block out;
  out.rels.push_back(relation(RelationType::Explicit, {b.find_in(e1, "If")}, "if",
                              {"Contingency.Condition.Hypothetical"}, {b.find_in(e2, c2)},
                              {b.find_in(e1, c1)}));
  out.node = mono(e2, e1, "condition", true);
  return out;
}

// Two sentences without a connective.
Block implicit_block(DocBuilder& b) {
  const auto c1 = capitalize(b.clause());
  const auto c2 = capitalize(b.clause());
  auto e1 = b.edu(c1 + ".");
  const std::size_t kind = b.pick(10);
  const bool altlex = kind == 9;
  auto e2 = b.edu(altlex ? "That is why " + b.clause() + "." : c2 + ".");
  Block out;
  const auto a1 = b.find_in(e1, c1);
  if (altlex) {
    const auto conn = b.find_in(e2, "That is why");
    const CharSpan a2(conn.end() + 1, e2.span.end() - 1);
    out.rels.push_back(relation(RelationType::AltLex, {conn}, "that is why",
                                {"Contingency.Cause.Result"}, {a1}, {a2}));
    out.node = mono(e1, e2, "result", false);
  } else if (kind < 5) {
    out.rels.push_back(relation(RelationType::Implicit, {}, "in addition", {"Expansion.Conjunction"},
                                {a1}, {b.find_in(e2, c2)}));
    out.node = mono(e1, e2, "elaboration-additional", false);
  } else if (kind < 7) {
    out.rels.push_back(relation(RelationType::Implicit, {}, "specifically",
                                {"Expansion.Restatement.Specification"}, {a1}, {b.find_in(e2, c2)}));
    out.node = mono(e1, e2, "elaboration-general-specific", false);
  } else {
    out.rels.push_back(relation(RelationType::EntRel, {}, "", {"EntRel"}, {a1}, {b.find_in(e2, c2)}));
    out.node = mono(e1, e2, "elaboration-additional", false);
  }
  return out;
}

// "[Analysts said] [A] [because B.]": an attribution on Arg1's nucleus path.
Block attribution_block(DocBuilder& b) {
  const auto c1 = b.clause();
  const auto c2 = b.clause();
  auto e1 = b.edu(capitalize(kSubjects[b.pick(kSubjects.size())]) + " said");
  auto e2 = b.edu(c1);
  auto e3 = b.edu("because " + c2 + ".");
  Block out;
  out.rels.push_back(relation(RelationType::Explicit, {b.find_in(e3, "because")}, "because",
                              {"Contingency.Cause.Reason"}, {b.find_in(e2, c1)}, {b.find_in(e3, c2)}));
  auto attr = mono(e2, e1, "attribution", true);
  out.node = mono(std::move(attr), e3, "reason", false);
  return out;
}

// "[Although A,] [B] [and C.]": Arg1 sits inside a multinuclear list.
Block list_block(DocBuilder& b) {
  const auto c1 = b.clause();
  const auto c2 = b.clause();
  const auto c3 = b.clause();
  auto e1 = b.edu("Although " + c1 + ",");
  auto e2 = b.edu(c2);
  auto e3 = b.edu("and " + c3 + ".");
  Block out;
  out.rels.push_back(relation(RelationType::Explicit, {b.find_in(e1, "Although")}, "although",
                              {"Comparison.Concession.Contra-expectation"}, {b.find_in(e2, c2)},
                              {b.find_in(e1, c1)}));
  out.rels.push_back(relation(RelationType::Explicit, {b.find_in(e3, "and")}, "and",
                              {"Expansion.Conjunction"}, {b.find_in(e2, c2)}, {b.find_in(e3, c3)}));
  auto list = multi({e2, e3}, "list");
  out.node = mono(std::move(list), e1, "concession", true);
  return out;
}

// "[A,] [a move that surprised analysts,] [when B.]": the nucleus path of
// (a-b) ends at (a), not at Arg1 (b).
Block violation_block(DocBuilder& b) {
  const auto c1 = b.clause();
  const auto c2 = b.clause();
  auto e1 = b.edu(capitalize(c1) + ",");
  auto e2 = b.edu("a move that surprised analysts,");
  auto e3 = b.edu("when " + c2 + ".");
  Block out;
  out.rels.push_back(relation(RelationType::Explicit, {b.find_in(e3, "when")}, "when",
                              {"Temporal.Synchrony"}, {b.find_in(e2, "a move that surprised analysts")},
                              {b.find_in(e3, c2)}));
  auto inner = mono(e1, e2, "elaboration-object-attribute", false);
  out.node = mono(std::move(inner), e3, "circumstance", false);
  return out;
}

// "[Quarterly profits at X,] [although costs rose,] [climbed sharply ...]":
// discontinuous Arg1 joined by Same-unit.
Block same_unit_block(DocBuilder& b) {
  const std::string subject = "Quarterly profits at " + kSubjects[b.pick(kSubjects.size())];
  const std::string rest = "climbed sharply in the third quarter";
  auto e1 = b.edu(subject + ",");
  auto e2 = b.edu("although costs rose,");
  auto e3 = b.edu(rest + ".");
  Block out;
  out.rels.push_back(relation(RelationType::Explicit, {b.find_in(e2, "although")}, "although",
                              {"Comparison.Concession.Expectation"},
                              {b.find_in(e1, subject), b.find_in(e3, rest)},
                              {b.find_in(e2, "costs rose")}));
  auto inner = mono(e1, e2, "concession", false);
  out.node = multi({std::move(inner), e3}, std::string(kSameUnit));
  return out;
}

// Both Same-unit segments span several EDUs.
Block same_unit_unresolvable_block(DocBuilder& b) {
  const std::string subject = "The plan";
  const auto c2 = b.clause();
  auto e1 = b.edu(subject + ",");
  auto e2 = b.edu("which was approved in May,");
  auto e3 = b.edu("will cut costs");
  auto e4 = b.edu("because " + c2 + ".");
  Block out;
  out.rels.push_back(relation(RelationType::Implicit, {}, "so", {"Contingency.Cause.Result"},
                              {b.find_in(e2, "which was approved in May")},
                              {b.find_in(e3, "will cut costs")}));
  out.rels.push_back(relation(RelationType::Explicit, {b.find_in(e4, "because")}, "because",
                              {"Contingency.Cause.Reason"}, {b.find_in(e3, "will cut costs")},
                              {b.find_in(e4, c2)}));
  auto left = mono(e1, e2, "elaboration-object-attribute", false);
  auto right = mono(e3, e4, "reason", false);
  out.node = multi({std::move(left), std::move(right)}, std::string(kSameUnit));
  return out;
}

// "[That's because A.]": both arguments inside one EDU.
Block internal_block(DocBuilder& b) {
  const auto c1 = b.clause();
  auto e1 = b.edu("That's because " + c1 + ".");
  Block out;
  out.rels.push_back(relation(RelationType::Explicit, {b.find_in(e1, "because")}, "because",
                              {"Contingency.Cause.Reason"}, {b.find_in(e1, "That")},
                              {b.find_in(e1, c1)}));
  out.node = e1;
  return out;
}

Block special_block(DocBuilder& b, std::size_t which) {
  switch (which % 6) {
    case 0: return attribution_block(b);
    case 1: return list_block(b);
    case 2: return violation_block(b);
    case 3: return same_unit_block(b);
    case 4: return same_unit_unresolvable_block(b);
    default: return internal_block(b);
  }
}

const RstNode& first_leaf(const RstNode& n) { return n.is_leaf() ? n : first_leaf(n.children.front()); }
const RstNode& last_leaf(const RstNode& n) { return n.is_leaf() ? n : last_leaf(n.children.back()); }

CharSpan trim_punct(const std::string& text, CharSpan s) {
  std::size_t e = s.end();
  while (e > s.start() + 1 && (text[e - 1] == '.' || text[e - 1] == ',')) --e;
  return CharSpan(s.start(), e);
}

SyntheticDoc make_doc(std::size_t index, std::mt19937_64& rng) {
  DocBuilder b(rng);
  std::vector<Block> blocks;
  std::vector<int> plan = {0, 0, 1, 1, 2, 3, 4, 5, 5, 6};
  // Fisher-Yates with the corpus generator so the layout varies per document.
  for (std::size_t k = plan.size() - 1; k > 0; --k) std::swap(plan[k], plan[rng() % (k + 1)]);
  for (int kind : plan) {
    switch (kind) {
      case 0: blocks.push_back(while_block(b)); break;
      case 1: blocks.push_back(but_block(b)); break;
      case 2: blocks.push_back(because_block(b)); break;
      case 3: blocks.push_back(if_block(b)); break;
      case 4: blocks.push_back(implicit_block(b)); break;
      case 5: blocks.push_back(special_block(b, index * 2 + blocks.size())); break;
      default: blocks.push_back(b.chance(0.5) ? implicit_block(b) : because_block(b)); break;
    }
  }

  std::vector<PdtbRelation> rels;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    for (auto& r : blocks[k].rels) rels.push_back(std::move(r));
    if (k + 1 < blocks.size() && b.chance(0.4)) {
      const auto& l = last_leaf(blocks[k].node);
      const auto& f = first_leaf(blocks[k + 1].node);
      rels.push_back(relation(RelationType::EntRel, {}, "", {"EntRel"}, {trim_punct(b.text, l.span)},
                              {trim_punct(b.text, f.span)}));
    }
  }

  // Right-branching elaboration chain over the blocks.
  RstNode tail = std::move(blocks.back().node);
  for (std::size_t k = blocks.size() - 1; k-- > 0;) {
    tail = mono(std::move(blocks[k].node), std::move(tail), "elaboration-additional", false);
  }
  tail.nuclearity = Nuclearity::Root;
  tail.rel2par = std::string(kSpanSentinel);

  char id[32];
  for (std::size_t k = 0; k < rels.size(); ++k) {
    std::snprintf(id, sizeof id, "r%02zu", k + 1);
    rels[k].rel_id = id;
  }
  std::snprintf(id, sizeof id, "syn_%03zu", index + 1);
  RstTree tree;
  tree.root = std::move(tail);
  tree.edus = collect_edus(tree.root);
  SyntheticDoc out;
  out.doc = make_document(id, b.text + "\n", std::move(tree), std::move(rels));
  out.write_dis = index % 5 == 4;
  return out;
}

void dis_node(const RstNode& n, const std::string& text, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += "( " + std::string(to_string(n.nuclearity));
  if (n.is_leaf()) {
    out += " (leaf " + std::to_string(*n.edu_id) + ")";
  } else {
    const auto edus = collect_edus(n);
    out += " (span " + std::to_string(edus.front().id) + " " + std::to_string(edus.back().id) + ")";
  }
  if (n.nuclearity != Nuclearity::Root) out += " (rel2par " + n.rel2par + ")";
  if (n.is_leaf()) {
    out += " (text _!" + text.substr(n.span.start(), n.span.length()) + "!_) )\n";
    return;
  }
  out += "\n";
  for (const auto& c : n.children) dis_node(c, text, depth + 1, out);
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += ")\n";
}

}  // namespace

std::vector<SyntheticDoc> generate_corpus(const CorpusOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::vector<SyntheticDoc> out;
  for (std::size_t i = 0; i < options.documents; ++i) out.push_back(make_doc(i, rng));
  return out;
}

std::string to_dis(const RstTree& tree, const std::string& text) {
  std::string out;
  dis_node(tree.root, text, 0, out);
  return out;
}

}  // namespace discalign::synthetic
