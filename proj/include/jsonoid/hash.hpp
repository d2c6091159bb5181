#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>

namespace jsonoid {

struct Hash128 {
  std::uint64_t h1 = 0;
  std::uint64_t h2 = 0;
};

// MurmurHash3 x64 128-bit (Austin Appleby, public domain). This is the one
// fixed hash used by every sketch in the project, so serialized sketches
// stay comparable across runs and builds.
inline Hash128 murmur3_128(const void* key, std::size_t len, std::uint64_t seed = 0) {
  const auto* data = static_cast<const std::uint8_t*>(key);
  const std::size_t nblocks = len / 16;

  std::uint64_t h1 = seed, h2 = seed;
  const std::uint64_t c1 = 0x87c37b91114253d5ULL;
  const std::uint64_t c2 = 0x4cf5ad432745937fULL;

  auto rotl = [](std::uint64_t x, int r) { return (x << r) | (x >> (64 - r)); };
  auto fmix = [](std::uint64_t k) {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    k *= 0xc4ceb9fe1a85ec53ULL;
    k ^= k >> 33;
    return k;
  };

  for (std::size_t i = 0; i < nblocks; i++) {
    std::uint64_t k1, k2;
    std::memcpy(&k1, data + i * 16, 8);
    std::memcpy(&k2, data + i * 16 + 8, 8);

    k1 *= c1; k1 = rotl(k1, 31); k1 *= c2; h1 ^= k1;
    h1 = rotl(h1, 27); h1 += h2; h1 = h1 * 5 + 0x52dce729;
    k2 *= c2; k2 = rotl(k2, 33); k2 *= c1; h2 ^= k2;
    h2 = rotl(h2, 31); h2 += h1; h2 = h2 * 5 + 0x38495ab5;
  }

  const std::uint8_t* tail = data + nblocks * 16;
  std::uint64_t k1 = 0, k2 = 0;
  switch (len & 15) {
    case 15: k2 ^= std::uint64_t(tail[14]) << 48; [[fallthrough]];
    case 14: k2 ^= std::uint64_t(tail[13]) << 40; [[fallthrough]];
    case 13: k2 ^= std::uint64_t(tail[12]) << 32; [[fallthrough]];
    case 12: k2 ^= std::uint64_t(tail[11]) << 24; [[fallthrough]];
    case 11: k2 ^= std::uint64_t(tail[10]) << 16; [[fallthrough]];
    case 10: k2 ^= std::uint64_t(tail[9]) << 8; [[fallthrough]];
    case 9:  k2 ^= std::uint64_t(tail[8]);
             k2 *= c2; k2 = rotl(k2, 33); k2 *= c1; h2 ^= k2; [[fallthrough]];
    case 8:  k1 ^= std::uint64_t(tail[7]) << 56; [[fallthrough]];
    case 7:  k1 ^= std::uint64_t(tail[6]) << 48; [[fallthrough]];
    case 6:  k1 ^= std::uint64_t(tail[5]) << 40; [[fallthrough]];
    case 5:  k1 ^= std::uint64_t(tail[4]) << 32; [[fallthrough]];
    case 4:  k1 ^= std::uint64_t(tail[3]) << 24; [[fallthrough]];
    case 3:  k1 ^= std::uint64_t(tail[2]) << 16; [[fallthrough]];
    case 2:  k1 ^= std::uint64_t(tail[1]) << 8; [[fallthrough]];
    case 1:  k1 ^= std::uint64_t(tail[0]);
             k1 *= c1; k1 = rotl(k1, 31); k1 *= c2; h1 ^= k1;
  }

  h1 ^= len; h2 ^= len;
  h1 += h2; h2 += h1;
  h1 = fmix(h1); h2 = fmix(h2);
  h1 += h2; h2 += h1;
  return {h1, h2};
}

inline Hash128 murmur3_128(std::string_view s, std::uint64_t seed = 0) {
  return murmur3_128(s.data(), s.size(), seed);
}

}  // namespace jsonoid
