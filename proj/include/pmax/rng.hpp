#pragma once

#include <cstdint>
#include <string_view>

namespace pmax {

// Counter-based random streams. Every draw is a pure function of
// (stream state, counter), so results never depend on evaluation order
// or thread scheduling. Streams fork into named substreams; substream
// derivation is stable and part of the reproducibility contract.

inline uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline uint64_t hash_combine(uint64_t a, uint64_t b) {
  return mix64(a + 0x9e3779b97f4a7c15ULL * (b + 1));
}

inline uint64_t hash_str(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

class RngStream {
 public:
  RngStream() : state_(0) {}
  explicit RngStream(uint64_t seed) : state_(mix64(seed + 0x632be59bd9b4e019ULL)) {}

  RngStream child(uint64_t tag) const { return from_state(hash_combine(state_, tag)); }
  RngStream child(std::string_view tag) const { return from_state(hash_combine(state_, hash_str(tag))); }

  uint64_t bits(uint64_t counter) const { return hash_combine(state_, counter); }

  // uniform in [0,1)
  double u01(uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  double uniform(uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * u01(counter);
  }

  // uniform integer in [0, n)
  uint64_t below(uint64_t counter, uint64_t n) const {
    // 128-bit multiply keeps the draw unbiased enough for simulation work
    return static_cast<uint64_t>((static_cast<__uint128_t>(bits(counter)) * n) >> 64);
  }

  uint64_t state() const { return state_; }

 private:
  static RngStream from_state(uint64_t s) {
    RngStream r;
    r.state_ = s;
    return r;
  }
  uint64_t state_;
};

}  // namespace pmax
