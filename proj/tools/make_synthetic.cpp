// Writes the synthetic corpus: per-document text and RST files, one shared
// PDTB JSONL file and a manifest.
//
//   make_synthetic [out_dir] [--docs N] [--seed S]

#include "synthetic.hpp"

#include "discalign/ingestion.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

void write(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  f << content;
  if (!f) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic corpus"};
  std::string out_dir = "data/synthetic";
  discalign::synthetic::CorpusOptions opts;
  app.add_option("out_dir", out_dir, "Output directory");
  app.add_option("--docs", opts.documents, "Number of documents");
  app.add_option("--seed", opts.seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path dir(out_dir);
    fs::create_directories(dir / "text");
    fs::create_directories(dir / "rst");
    const auto docs = discalign::synthetic::generate_corpus(opts);
    nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
    std::string pdtb;
    std::size_t relations = 0;
    for (const auto& sd : docs) {
      const auto& d = sd.doc;
      write(dir / "text" / (d.doc_id + ".txt"), d.text);
      const std::string rst_name = d.doc_id + (sd.write_dis ? ".dis" : ".json");
      write(dir / "rst" / rst_name,
            sd.write_dis ? discalign::synthetic::to_dis(d.rst, d.text)
                         : discalign::to_rst_json(d.rst, d.doc_id));
      pdtb += discalign::to_pdtb_jsonl(d.doc_id, d.pdtb);
      relations += d.pdtb.size();
      manifest.push_back({{"doc_id", d.doc_id},
                          {"text", "text/" + d.doc_id + ".txt"},
                          {"rst", "rst/" + rst_name},
                          {"pdtb", "pdtb.jsonl"}});
    }
    write(dir / "pdtb.jsonl", pdtb);
    write(dir / "manifest.json", manifest.dump(2) + "\n");
    std::cout << docs.size() << " documents, " << relations << " relations -> " << dir.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
