#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace jsonoid {

// Mergeable central-moment accumulator (count, mean, M2..M4) using the
// pairwise update formulas. Every term below is written symmetrically in
// (a, b) so that combine is bitwise commutative; associativity holds to
// floating-point accuracy.
class MomentsAccumulator {
 public:
  MomentsAccumulator() = default;

  static MomentsAccumulator of(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("moments: non-finite value");
    MomentsAccumulator m;
    m.n_ = 1;
    m.mean_ = value;
    return m;
  }

  void add(double value) { *this = combine(*this, of(value)); }

  static MomentsAccumulator restore(std::uint64_t n, double mean, double m2, double m3,
                                    double m4) {
    MomentsAccumulator m;
    m.n_ = n;
    m.mean_ = mean;
    m.m2_ = m2;
    m.m3_ = m3;
    m.m4_ = m4;
    return m;
  }

  friend MomentsAccumulator combine(const MomentsAccumulator& a, const MomentsAccumulator& b) {
    if (a.n_ == 0) return b;
    if (b.n_ == 0) return a;

    // Each term is built from atoms that are bitwise symmetric (or exactly
    // antisymmetric in matched pairs) under swapping a and b.
    MomentsAccumulator r;
    const double na = double(a.n_), nb = double(b.n_);
    const double n = na + nb;
    const double nab = na * nb;
    const double ndiff = na - nb;
    const double na2 = na * na, nb2 = nb * nb;
    const double nn = n * n;
    const double delta = b.mean_ - a.mean_;
    const double d2 = delta * delta;
    const double d3 = d2 * delta;
    const double d4 = d2 * d2;

    r.n_ = a.n_ + b.n_;
    r.mean_ = (na * a.mean_ + nb * b.mean_) / n;
    r.m2_ = a.m2_ + b.m2_ + d2 * nab / n;
    r.m3_ = a.m3_ + b.m3_ + d3 * nab * ndiff / nn +
            3.0 * delta * (na * b.m2_ - nb * a.m2_) / n;
    r.m4_ = a.m4_ + b.m4_ + d4 * nab * ((na2 + nb2) - nab) / (nn * n) +
            6.0 * d2 * (na2 * b.m2_ + nb2 * a.m2_) / nn +
            4.0 * delta * (na * b.m3_ - nb * a.m3_) / n;
    // M4 is a sum of fourth powers; keep rounding from pushing it negative.
    if (r.m4_ < 0.0) r.m4_ = 0.0;
    return r;
  }

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  double m3() const { return m3_; }
  double m4() const { return m4_; }

  struct Report {
    std::uint64_t count = 0;
    std::optional<double> mean;
    std::optional<double> stddev;    // population
    std::optional<double> skewness;
    std::optional<double> kurtosis;  // excess
  };

  // Statistics that are undefined at the current count (or with zero
  // variance) are reported as absent rather than NaN.
  Report report() const {
    Report r;
    r.count = n_;
    if (n_ >= 1) r.mean = mean_;
    if (n_ >= 2) r.stddev = std::sqrt(m2_ / double(n_));
    if (n_ >= 2 && m2_ > 0.0) {
      double n = double(n_);
      r.skewness = std::sqrt(n) * m3_ / std::pow(m2_, 1.5);
      r.kurtosis = n * m4_ / (m2_ * m2_) - 3.0;
    }
    return r;
  }

  bool operator==(const MomentsAccumulator&) const = default;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

}  // namespace jsonoid
