#include "discalign/taxonomy.hpp"

#include "checksum.hpp"
#include "discalign/error.hpp"
#include "discalign/text.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace discalign {

namespace {

// Case, whitespace, hyphen and underscore insensitive key.
std::string fold(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

std::vector<std::string> split_dots(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = s.find('.', start);
    std::string_view seg = s.substr(start, dot == std::string_view::npos ? dot : dot - start);
    while (!seg.empty() && std::isspace(static_cast<unsigned char>(seg.front()))) seg.remove_prefix(1);
    while (!seg.empty() && std::isspace(static_cast<unsigned char>(seg.back()))) seg.remove_suffix(1);
    out.emplace_back(seg);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

std::string normalize_rst_label(std::string_view raw) {
  std::string out;
  bool pending = false;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back('-');
    pending = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (out.size() > 2 && out.ends_with("-e")) out.resize(out.size() - 2);
  return out;
}

SenseLabel generalize(const SenseLabel& label, std::size_t level) {
  if (level == 0 || level > label.depth()) {
    throw DataError("cannot generalize \"" + label.str() + "\" (depth " +
                    std::to_string(label.depth()) + ") to level " + std::to_string(level));
  }
  SenseLabel out = label;
  out.segments.resize(level);
  return out;
}

bool is_descendant(const SenseLabel& a, const SenseLabel& b) {
  if (a.framework != b.framework) {
    throw DataError("cannot compare labels across frameworks: \"" + a.str() + "\" vs \"" +
                    b.str() + "\"");
  }
  if (a.segments.size() > b.segments.size()) return false;
  return std::equal(a.segments.begin(), a.segments.end(), b.segments.begin());
}

SenseLabel rst_label(std::string_view label) {
  return SenseLabel{Framework::Rst, {std::string(label)}};
}

Taxonomy Taxonomy::from_json(std::string_view bytes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(std::string("taxonomy: ") + e.what(), 0, 0, e.byte);
  }
  detail::verify_checksum(doc, "taxonomy");

  Taxonomy t;
  try {
    t.version_ = doc.at("version").get<std::string>();
    t.checksum_ = doc.at("checksum").get<std::string>();

    auto add_spelling = [&](const std::string& name) { t.pdtb_spelling_[fold(name)] = name; };
    std::vector<SenseLabel> types;
    std::vector<SenseLabel> subtypes;
    for (const auto& [cls, type_map] : doc.at("pdtb").items()) {
      add_spelling(cls);
      t.pdtb_labels_.push_back(SenseLabel{Framework::Pdtb, {cls}});
      for (const auto& [type, subs] : type_map.items()) {
        add_spelling(type);
        types.push_back(SenseLabel{Framework::Pdtb, {cls, type}});
        for (const auto& sub : subs) {
          const auto name = sub.get<std::string>();
          add_spelling(name);
          subtypes.push_back(SenseLabel{Framework::Pdtb, {cls, type, name}});
        }
      }
    }
    t.pdtb_labels_.insert(t.pdtb_labels_.end(), types.begin(), types.end());
    t.pdtb_labels_.insert(t.pdtb_labels_.end(), subtypes.begin(), subtypes.end());
    for (const auto& l : t.pdtb_labels_) t.pdtb_known_.insert(l.segments);

    for (const auto& s : doc.at("pdtb_synthetic")) {
      const auto name = s.get<std::string>();
      t.pdtb_synthetic_.push_back(name);
      t.pdtb_known_.insert({name});
      add_spelling(name);
    }
    if (doc.contains("pdtb_aliases")) {
      for (const auto& [alias, target] : doc["pdtb_aliases"].items()) {
        t.pdtb_spelling_[fold(alias)] = target.get<std::string>();
      }
    }

    for (const auto& e : doc.at("rst")) {
      const auto label = e.at("label").get<std::string>();
      RstEntry entry;
      entry.cls = e.at("class").get<std::string>();
      entry.base = e.value("base", label);
      entry.structural = e.value("structural", false);
      if (!t.rst_.emplace(label, entry).second) {
        throw SemanticError("taxonomy: duplicate RST label \"" + label + "\"");
      }
      t.rst_labels_.push_back(label);
    }
  } catch (const nlohmann::json::exception& e) {
    throw SemanticError(std::string("taxonomy: ") + e.what());
  }
  return t;
}

const Taxonomy& Taxonomy::builtin() {
  static const Taxonomy instance = from_json(detail::kBuiltinTaxonomyJson);
  return instance;
}

SenseLabel Taxonomy::parse_pdtb(std::string_view sense) const {
  SenseLabel out{Framework::Pdtb, split_dots(sense)};
  for (auto& seg : out.segments) {
    auto it = pdtb_spelling_.find(fold(seg));
    if (it != pdtb_spelling_.end()) seg = it->second;
  }
  return out;
}

bool Taxonomy::is_known(const SenseLabel& label) const {
  if (label.framework == Framework::Pdtb) return pdtb_known_.contains(label.segments);
  return label.segments.size() == 1 &&
         (rst_.contains(label.segments.front()) || label.segments.front() == kSpanSentinel);
}

bool Taxonomy::is_synthetic(const SenseLabel& label) const {
  return label.framework == Framework::Pdtb && label.segments.size() == 1 &&
         std::find(pdtb_synthetic_.begin(), pdtb_synthetic_.end(), label.segments.front()) !=
             pdtb_synthetic_.end();
}

std::size_t Taxonomy::rst_class_count(bool include_structural) const {
  std::set<std::string> classes;
  for (const auto& [label, e] : rst_) {
    if (include_structural || !e.structural) classes.insert(e.cls);
  }
  return classes.size();
}

std::string Taxonomy::rst_class(const SenseLabel& label) const {
  if (label.framework != Framework::Rst || label.segments.size() != 1) {
    throw DataError("not an RST label: \"" + label.str() + "\"");
  }
  auto it = rst_.find(label.segments.front());
  if (it == rst_.end()) {
    auto nearest = nearest_rst(label.segments.front());
    std::string msg = "unknown RST label \"" + label.segments.front() + "\"; nearest:";
    for (const auto& n : nearest) msg += " " + n;
    throw UnknownLabelError(msg, std::move(nearest));
  }
  return it->second.cls;
}

std::string Taxonomy::rst_base(std::string_view label) const {
  auto it = rst_.find(std::string(label));
  return it == rst_.end() ? std::string(label) : it->second.base;
}

bool Taxonomy::is_structural(std::string_view label) const {
  auto it = rst_.find(std::string(label));
  return it != rst_.end() && it->second.structural;
}

std::vector<std::string> Taxonomy::nearest_rst(std::string_view label, std::size_t k) const {
  std::vector<std::pair<std::size_t, std::string>> scored;
  scored.reserve(rst_labels_.size());
  for (const auto& l : rst_labels_) scored.emplace_back(edit_distance(label, l), l);
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(k, scored.size()); ++i) out.push_back(scored[i].second);
  return out;
}

}  // namespace discalign
