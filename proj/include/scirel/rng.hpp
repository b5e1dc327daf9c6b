#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace scirel {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

// Seedable, splittable generator (xoshiro256**). Every stochastic choice in
// the pipeline draws from a stream derived by name from the single run seed,
// so results are bitwise reproducible and independent of evaluation order.
class RngStream {
 public:
  static RngStream from_seed(std::uint64_t seed) {
    RngStream r;
    r.key_ = seed;
    std::uint64_t sm = seed;
    for (auto& s : r.state_) s = detail::splitmix64(sm);
    return r;
  }

  // Derivation depends only on (parent key, name), never on draw position.
  RngStream derive(std::string_view name) const {
    std::uint64_t child = key_ ^ (detail::fnv1a64(name) * 0x9e3779b97f4a7c15ULL);
    std::uint64_t sm = child;
    child = detail::splitmix64(sm);
    return from_seed(child);
  }

  std::uint64_t next_u64() {
    auto rotl = [](std::uint64_t x, int k) {
      return (x << k) | (x >> (64 - k));
    };
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Modulo bias is < n / 2^64, irrelevant here,
  // and keeps the draw count per call fixed (one), which matters for
  // reproducible stream positions.
  std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_int(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  std::array<std::uint64_t, 5> save_state() const {
    return {state_[0], state_[1], state_[2], state_[3], key_};
  }

  static RngStream restore_state(const std::array<std::uint64_t, 5>& s) {
    RngStream r;
    r.state_ = {s[0], s[1], s[2], s[3]};
    r.key_ = s[4];
    return r;
  }

 private:
  RngStream() = default;
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t key_ = 0;
};

}  // namespace scirel
