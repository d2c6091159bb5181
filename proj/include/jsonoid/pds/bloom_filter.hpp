#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "jsonoid/hash.hpp"

namespace jsonoid {

// Fixed-size Bloom filter over canonical value bytes. Uses double hashing:
// the two 64-bit halves of one MurmurHash3 x64/128 digest give index_i =
// (h1 + i*h2) mod m. Filters with equal (m, k) merge by bitwise OR.
class BloomFilter {
 public:
  BloomFilter() = default;
  BloomFilter(std::uint64_t bits, std::uint32_t hashes)
      : m_(bits), k_(hashes), words_((bits + 63) / 64, 0) {
    if (bits == 0 || hashes == 0) throw std::invalid_argument("bloom: m and k must be positive");
  }

  void insert(std::string_view value_bytes) {
    Hash128 h = murmur3_128(value_bytes);
    for (std::uint32_t i = 0; i < k_; ++i) {
      std::uint64_t idx = (h.h1 + i * h.h2) % m_;
      words_[idx >> 6] |= (1ULL << (idx & 63));
    }
  }

  bool query(std::string_view value_bytes) const {
    Hash128 h = murmur3_128(value_bytes);
    for (std::uint32_t i = 0; i < k_; ++i) {
      std::uint64_t idx = (h.h1 + i * h.h2) % m_;
      if (!(words_[idx >> 6] & (1ULL << (idx & 63)))) return false;
    }
    return true;
  }

  friend BloomFilter combine(BloomFilter a, const BloomFilter& b) {
    a.check_compatible(b);
    for (std::size_t i = 0; i < a.words_.size(); ++i) a.words_[i] |= b.words_[i];
    return a;
  }

  // True when every bit of this filter is also set in `other`, i.e. the set
  // summarized here is likely a subset of the one summarized by `other`.
  bool subset_of(const BloomFilter& other) const {
    check_compatible(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & other.words_[i]) != words_[i]) return false;
    return true;
  }

  double fill_ratio() const {
    std::uint64_t set = 0;
    for (std::uint64_t w : words_) set += std::uint64_t(std::popcount(w));
    return m_ ? double(set) / double(m_) : 0.0;
  }

  std::uint64_t bits() const { return m_; }
  std::uint32_t hashes() const { return k_; }
  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  bool operator==(const BloomFilter&) const = default;

 private:
  void check_compatible(const BloomFilter& other) const {
    if (m_ != other.m_ || k_ != other.k_)
      throw std::invalid_argument("bloom: parameter mismatch");
  }

  std::uint64_t m_ = 0;
  std::uint32_t k_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace jsonoid
