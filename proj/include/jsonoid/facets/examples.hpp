#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "jsonoid/json.hpp"

namespace jsonoid {

// Capacity-bounded sample of observed values plus the exact number of
// observations it summarizes. Merging keeps everything while under
// capacity; above it, each retained slot is drawn from one side with
// probability proportional to that side's total, without replacement.
struct ExamplesFacet {
  std::vector<Json> examples;
  std::uint64_t total = 0;

  static ExamplesFacet of(Json value) {
    ExamplesFacet e;
    e.examples.push_back(std::move(value));
    e.total = 1;
    return e;
  }

  friend ExamplesFacet combine(const ExamplesFacet& a, const ExamplesFacet& b,
                               std::size_t capacity, std::mt19937_64& rng) {
    ExamplesFacet r;
    r.total = a.total + b.total;
    if (a.examples.size() + b.examples.size() <= capacity) {
      r.examples = a.examples;
      r.examples.insert(r.examples.end(), b.examples.begin(), b.examples.end());
      return r;
    }
    std::vector<Json> pa = a.examples, pb = b.examples;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double wa = double(a.total) / double(a.total + b.total);
    auto draw = [&rng](std::vector<Json>& pool) {
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      std::size_t i = pick(rng);
      Json v = std::move(pool[i]);
      pool[i] = std::move(pool.back());
      pool.pop_back();
      return v;
    };
    r.examples.reserve(capacity);
    while (r.examples.size() < capacity && (!pa.empty() || !pb.empty())) {
      bool from_a = pb.empty() || (!pa.empty() && unit(rng) < wa);
      r.examples.push_back(draw(from_a ? pa : pb));
    }
    return r;
  }

  bool operator==(const ExamplesFacet&) const = default;
};

}  // namespace jsonoid
