#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "jsonoid/hash.hpp"

namespace jsonoid {

// HyperLogLog cardinality sketch with 2^p registers. The register index
// comes from the low p bits of a 64-bit hash and the rank from the
// remaining 64-p bits, so the classic 32-bit large-range correction is not
// needed. Small cardinalities fall back to linear counting.
class HyperLogLog {
 public:
  HyperLogLog() = default;
  explicit HyperLogLog(std::uint32_t precision)
      : p_(precision), registers_(std::size_t(1) << precision, 0) {
    if (precision < 4 || precision > 18)
      throw std::invalid_argument("hll: precision must be in [4, 18]");
  }

  void add(std::string_view value_bytes) {
    std::uint64_t h = murmur3_128(value_bytes).h1;
    std::uint64_t idx = h & ((std::uint64_t(1) << p_) - 1);
    std::uint64_t rest = h >> p_;
    // rank = position of the least-significant 1 bit in the remaining
    // 64-p bits, counting from 1; all-zero rest gets the maximum rank.
    std::uint8_t rank = rest == 0 ? std::uint8_t(64 - p_ + 1)
                                  : std::uint8_t(std::countr_zero(rest) + 1);
    registers_[idx] = std::max(registers_[idx], rank);
  }

  friend HyperLogLog combine(HyperLogLog a, const HyperLogLog& b) {
    if (a.p_ != b.p_) throw std::invalid_argument("hll: precision mismatch");
    for (std::size_t i = 0; i < a.registers_.size(); ++i)
      a.registers_[i] = std::max(a.registers_[i], b.registers_[i]);
    return a;
  }

  double estimate() const {
    const double m = double(registers_.size());
    double sum = 0.0;
    std::size_t zeros = 0;
    for (std::uint8_t r : registers_) {
      sum += std::ldexp(1.0, -int(r));
      if (r == 0) ++zeros;
    }
    // Small range: linear counting while its own estimate stays below
    // 2.5m. Branching on the linear-counting value rather than the raw
    // estimate avoids the raw estimator's bias bump right at the
    // threshold.
    if (zeros > 0) {
      double lc = m * std::log(m / double(zeros));
      if (lc <= 2.5 * m) return lc;
    }
    double alpha;
    switch (registers_.size()) {
      case 16: alpha = 0.673; break;
      case 32: alpha = 0.697; break;
      case 64: alpha = 0.709; break;
      default: alpha = 0.7213 / (1.0 + 1.079 / m); break;
    }
    return alpha * m * m / sum;
  }

  // 1.04 / sqrt(2^p), the standard error of the estimator.
  double standard_error() const {
    return 1.04 / std::sqrt(double(registers_.size()));
  }

  std::uint32_t precision() const { return p_; }
  const std::vector<std::uint8_t>& registers() const { return registers_; }
  std::vector<std::uint8_t>& registers() { return registers_; }

  bool operator==(const HyperLogLog&) const = default;

 private:
  std::uint32_t p_ = 0;
  std::vector<std::uint8_t> registers_;
};

}  // namespace jsonoid
