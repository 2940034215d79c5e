#include "checksum.hpp"

#include "discalign/error.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

namespace discalign::detail {

std::string data_checksum(const nlohmann::json& doc) {
  nlohmann::json body = doc;
  body.erase("checksum");
  const std::string text = body.dump();

  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), text.data(), text.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[md[i] >> 4]);
    hex.push_back(kHex[md[i] & 0xF]);
  }
  return hex;
}

void verify_checksum(const nlohmann::json& doc, const std::string& what) {
  if (!doc.is_object() || !doc.contains("checksum") || !doc["checksum"].is_string()) {
    throw SemanticError(what + ": missing checksum");
  }
  const std::string actual = data_checksum(doc);
  if (doc["checksum"].get<std::string>() != actual) {
    throw SemanticError(what + ": checksum mismatch (stored " +
                        doc["checksum"].get<std::string>() + ", computed " + actual + ")");
  }
}

}  // namespace discalign::detail
