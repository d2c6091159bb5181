#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace jsonoid {

// Ben-Haim/Tom-Tov streaming histogram: a bounded list of (value, count)
// bins kept sorted by value. Exceeding the bin budget merges the two
// adjacent bins with the smallest value gap into their weighted mean.
// Counts are conserved exactly under any merge order.
class StreamingHistogram {
 public:
  struct Bin {
    double value = 0.0;
    std::uint64_t count = 0;
    bool operator==(const Bin&) const = default;
  };

  StreamingHistogram() = default;
  explicit StreamingHistogram(std::size_t max_bins) : max_bins_(max_bins) {
    if (max_bins == 0) throw std::invalid_argument("histogram: max_bins must be positive");
  }

  void add(double value) {
    auto it = std::lower_bound(bins_.begin(), bins_.end(), value,
                               [](const Bin& b, double v) { return b.value < v; });
    if (it != bins_.end() && it->value == value) {
      ++it->count;
    } else {
      bins_.insert(it, Bin{value, 1});
      reduce();
    }
    ++total_;
  }

  friend StreamingHistogram combine(StreamingHistogram a, const StreamingHistogram& b) {
    if (a.max_bins_ != b.max_bins_)
      throw std::invalid_argument("histogram: max_bins mismatch");
    a.bins_.insert(a.bins_.end(), b.bins_.begin(), b.bins_.end());
    std::sort(a.bins_.begin(), a.bins_.end(), [](const Bin& x, const Bin& y) {
      return x.value != y.value ? x.value < y.value : x.count < y.count;
    });
    a.total_ += b.total_;
    a.reduce();
    return a;
  }

  // Smallest bin value whose cumulative mass reaches q, treating each bin
  // as a point mass at its value.
  double quantile(double q) const {
    if (bins_.empty()) throw std::invalid_argument("histogram: empty");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("histogram: quantile out of range");
    std::uint64_t target = std::uint64_t(q * double(total_));
    if (target >= total_) target = total_ - 1;
    std::uint64_t seen = 0;
    for (const Bin& b : bins_) {
      seen += b.count;
      if (seen > target) return b.value;
    }
    return bins_.back().value;
  }

  static StreamingHistogram restore(std::size_t max_bins, std::uint64_t total,
                                    std::vector<Bin> bins) {
    StreamingHistogram h(max_bins);
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < bins.size(); ++i) {
      if (i > 0 && bins[i].value <= bins[i - 1].value)
        throw std::invalid_argument("histogram: bins not strictly increasing");
      sum += bins[i].count;
    }
    if (sum != total || bins.size() > max_bins)
      throw std::invalid_argument("histogram: inconsistent restore data");
    h.bins_ = std::move(bins);
    h.total_ = total;
    return h;
  }

  std::uint64_t total() const { return total_; }
  std::size_t max_bins() const { return max_bins_; }
  const std::vector<Bin>& bins() const { return bins_; }

  bool operator==(const StreamingHistogram&) const = default;

 private:
  void reduce() {
    while (bins_.size() > max_bins_) {
      std::size_t best = 0;
      double best_gap = bins_[1].value - bins_[0].value;
      for (std::size_t i = 1; i + 1 < bins_.size(); ++i) {
        double gap = bins_[i + 1].value - bins_[i].value;
        if (gap < best_gap) {
          best_gap = gap;
          best = i;
        }
      }
      Bin& l = bins_[best];
      const Bin& r = bins_[best + 1];
      std::uint64_t c = l.count + r.count;
      l.value = (l.value * double(l.count) + r.value * double(r.count)) / double(c);
      l.count = c;
      bins_.erase(bins_.begin() + std::ptrdiff_t(best) + 1);
    }
  }

  std::size_t max_bins_ = 100;
  std::uint64_t total_ = 0;
  std::vector<Bin> bins_;
};

}  // namespace jsonoid
