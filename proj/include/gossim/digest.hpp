#pragma once

#include <openssl/evp.h>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gossim/core.hpp"

namespace gossim {

inline constexpr const char* kDigestAlgorithm = "sha256";

inline Digest sha256(std::span<const std::uint8_t> bytes) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size()) {
    throw std::runtime_error("EVP_Digest(sha256) failed");
  }
  return out;
}

/// Deterministic stand-in for the software image of a version: `size`
/// bytes derived from the version number.
inline std::vector<std::uint8_t> synthetic_image(Version v, std::size_t size) {
  std::vector<std::uint8_t> image(size);
  std::uint32_t state = 0x9e3779b9u ^ v.value;
  for (auto& b : image) {
    state = state * 1664525u + 1013904223u;
    b = static_cast<std::uint8_t>(state >> 24);
  }
  return image;
}

inline Digest image_digest(Version v, std::size_t size) { return sha256(synthetic_image(v, size)); }

inline std::string to_hex(const Digest& d) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  s.reserve(d.size() * 2);
  for (auto b : d) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 0xf]);
  }
  return s;
}

}  // namespace gossim
