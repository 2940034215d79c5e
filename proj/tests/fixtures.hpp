#pragma once

// Tree and relation builders shared by the test binaries, plus the slow
// reference implementations the library is checked against.

#include "discalign/alignment.hpp"
#include "discalign/ingestion.hpp"
#include "discalign/model.hpp"
#include "discalign/taxonomy.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace fx {

using namespace discalign;

// Appends EDU strings separated by one space. ASCII only, so offsets are bytes.
struct TextBuilder {
  std::string text;
  int next_id = 1;

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

  CharSpan find(const std::string& needle, std::size_t from = 0) const {
    const auto at = text.find(needle, from);
    if (at == std::string::npos) throw std::logic_error("fixture: missing \"" + needle + "\"");
    return CharSpan(at, at + needle.size());
  }
};

inline RstNode mono(RstNode nucleus, RstNode satellite, const std::string& label,
                    bool satellite_first = false) {
  nucleus.nuclearity = Nuclearity::Nucleus;
  nucleus.rel2par = "span";
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

inline RstNode multi(std::vector<RstNode> kids, const std::string& label) {
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

inline RstTree tree_of(RstNode root) {
  root.nuclearity = Nuclearity::Root;
  root.rel2par = "span";
  RstTree t;
  t.root = std::move(root);
  t.edus = collect_edus(t.root);
  return t;
}

inline PdtbRelation rel(RelationType type, std::vector<std::string> senses, SpanSet arg1, SpanSet arg2,
                        SpanSet conn = {}, std::string conn_text = "", std::string id = "r1") {
  PdtbRelation r;
  r.rel_id = std::move(id);
  r.type = type;
  for (const auto& s : senses) r.senses.push_back(Taxonomy::builtin().parse_pdtb(s));
  r.arg1 = std::move(arg1);
  r.arg2 = std::move(arg2);
  r.connective_spans = std::move(conn);
  r.connective_text = std::move(conn_text);
  return r;
}

inline Document doc_of(const TextBuilder& b, RstNode root, std::vector<PdtbRelation> rels,
                       const std::string& id = "fixture") {
  return make_document(id, b.text, tree_of(std::move(root)), std::move(rels));
}

// ---- random structures -------------------------------------------------

// Random SpanSet over [0, universe): each position is kept with probability p,
// then runs become spans.
inline SpanSet random_spanset(std::mt19937_64& rng, std::size_t universe, double p) {
  std::bernoulli_distribution keep(p);
  std::vector<CharSpan> spans;
  std::size_t i = 0;
  while (i < universe) {
    if (!keep(rng)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < universe && keep(rng)) ++j;
    spans.emplace_back(i, j);
    i = j + 1;
  }
  return SpanSet(spans);
}

inline std::set<std::size_t> positions(const SpanSet& s) {
  std::set<std::size_t> out;
  for (const auto& sp : s.spans()) {
    for (std::size_t i = sp.start(); i < sp.end(); ++i) out.insert(i);
  }
  return out;
}

inline std::set<std::size_t> positions(const CharSpan& s) {
  std::set<std::size_t> out;
  for (std::size_t i = s.start(); i < s.end(); ++i) out.insert(i);
  return out;
}

namespace detail {

inline RstNode random_subtree(std::mt19937_64& rng, const std::vector<CharSpan>& edus, std::size_t lo,
                              std::size_t hi) {
  static const std::vector<std::string> kMono = {"elaboration-additional", "reason", "condition",
                                                 "attribution", "background", "concession"};
  static const std::vector<std::string> kMulti = {"list", "contrast", "sequence", "same-unit"};
  RstNode n;
  n.span = CharSpan(edus[lo].start(), edus[hi - 1].end());
  if (hi - lo == 1) {
    n.edu_id = static_cast<int>(lo + 1);
    return n;
  }
  // Split into 2 or (sometimes) 3 contiguous groups.
  std::size_t parts = (hi - lo >= 3 && rng() % 4 == 0) ? 3 : 2;
  std::vector<std::size_t> cuts;
  while (cuts.size() < parts - 1) {
    const std::size_t c = lo + 1 + rng() % (hi - lo - 1);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::size_t> bounds = {lo};
  bounds.insert(bounds.end(), cuts.begin(), cuts.end());
  bounds.push_back(hi);
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    n.children.push_back(random_subtree(rng, edus, bounds[k], bounds[k + 1]));
  }
  if (rng() % 3 == 0) {
    const auto& label = kMulti[rng() % kMulti.size()];
    for (auto& c : n.children) {
      c.nuclearity = Nuclearity::Nucleus;
      c.rel2par = label;
    }
  } else {
    const std::size_t nuc = rng() % n.children.size();
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      auto& c = n.children[k];
      if (k == nuc) {
        c.nuclearity = Nuclearity::Nucleus;
        c.rel2par = "span";
      } else {
        c.nuclearity = Nuclearity::Satellite;
        c.rel2par = kMono[rng() % kMono.size()];
      }
    }
  }
  return n;
}

}  // namespace detail

// Valid tree over `n_edus` contiguous EDUs of random length 1..max_len.
inline RstTree random_tree(std::mt19937_64& rng, std::size_t n_edus, std::size_t max_len = 6) {
  std::vector<CharSpan> edus;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n_edus; ++i) {
    const std::size_t len = 1 + rng() % max_len;
    edus.emplace_back(pos, pos + len);
    pos += len;
  }
  return tree_of(detail::random_subtree(rng, edus, 0, n_edus));
}

// ---- reference implementations ----------------------------------------

// Every node with its path, built by independent recursion.
inline void collect_paths(const RstNode& n, NodePath& path,
                          std::vector<std::pair<NodePath, const RstNode*>>& out) {
  out.emplace_back(path, &n);
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    path.push_back(i);
    collect_paths(n.children[i], path, out);
    path.pop_back();
  }
}

inline std::vector<std::pair<NodePath, const RstNode*>> paths_of(const RstTree& t) {
  std::vector<std::pair<NodePath, const RstNode*>> out;
  NodePath p;
  collect_paths(t.root, p, out);
  return out;
}

// Brute force: among internal nodes whose span covers both nodes, the one with
// the smallest span where the two fall under different children.
inline std::optional<NodePath> brute_lcr(const RstTree& t, const NodePath& a, const NodePath& b) {
  const auto nodes = paths_of(t);
  auto span_of = [&](const NodePath& p) {
    for (const auto& [q, n] : nodes) {
      if (q == p) return n->span;
    }
    throw std::logic_error("no such path");
  };
  const CharSpan sa = span_of(a);
  const CharSpan sb = span_of(b);
  if (sa.contains(sb) || sb.contains(sa)) return std::nullopt;
  std::optional<std::pair<NodePath, std::size_t>> best;
  for (const auto& [p, n] : nodes) {
    if (n->is_leaf() || !n->span.contains(sa) || !n->span.contains(sb)) continue;
    int ia = -1;
    int ib = -1;
    for (std::size_t k = 0; k < n->children.size(); ++k) {
      if (n->children[k].span.contains(sa)) ia = static_cast<int>(k);
      if (n->children[k].span.contains(sb)) ib = static_cast<int>(k);
    }
    if (ia < 0 || ib < 0 || ia == ib) continue;
    if (!best || n->span.length() < best->second) best = {p, n->span.length()};
  }
  if (!best) return std::nullopt;
  return best->first;
}

// Exhaustive scoring of every node by per-position set arithmetic.
inline std::optional<SpanMatch> brute_match(const SpanSet& arg, const RstTree& t,
                                            const SpanSet& neutral = {}) {
  auto target = positions(arg);
  auto skip = positions(neutral);
  {
    std::set<std::size_t> rest;
    for (auto i : target) {
      if (!skip.count(i)) rest.insert(i);
    }
    if (rest.empty()) {
      skip.clear();
    } else {
      target = rest;
    }
  }
  using Key = std::tuple<long, std::size_t, long, long, long>;  // larger is better
  std::optional<std::pair<Key, SpanMatch>> best_edu;
  std::optional<std::pair<Key, SpanMatch>> best_sub;
  for (const auto& [p, n] : paths_of(t)) {
    std::size_t ov = 0;
    std::size_t mg = 0;
    for (auto i : positions(n->span)) {
      if (skip.count(i)) continue;
      if (target.count(i)) {
        ++ov;
      } else {
        ++mg;
      }
    }
    if (ov == 0) continue;
    const long score = static_cast<long>(ov) - static_cast<long>(mg);
    Key key{score, ov, -static_cast<long>(mg), -static_cast<long>(n->span.length()),
            -static_cast<long>(n->span.start())};
    SpanMatch m{p, n->span, ov, mg, n->is_leaf() ? MatchKind::Edu : MatchKind::Subtree};
    auto& slot = n->is_leaf() ? best_edu : best_sub;
    if (!slot || key > slot->first) slot = std::make_pair(key, m);
  }
  if (!best_edu) return std::nullopt;
  if (best_sub && std::get<0>(best_sub->first) > std::get<0>(best_edu->first)) return best_sub->second;
  return best_edu->second;
}

}  // namespace fx
