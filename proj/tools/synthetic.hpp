#pragma once

// Generator for the shipped synthetic corpus. Documents are strings of small
// blocks, each a fixed RST constellation with its PDTB relations, chained
// together by elaboration-additional.

#include "discalign/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace discalign::synthetic {

struct SyntheticDoc {
  Document doc;
  bool write_dis = false;  // serialize the tree as .dis instead of JSON
};

struct CorpusOptions {
  std::size_t documents = 20;
  std::uint64_t seed = 7;
};

std::vector<SyntheticDoc> generate_corpus(const CorpusOptions& options = {});

// RST-DT style .dis rendering of a tree over `text`.
std::string to_dis(const RstTree& tree, const std::string& text);

}  // namespace discalign::synthetic
