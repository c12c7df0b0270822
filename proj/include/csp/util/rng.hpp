#pragma once

#include <cstdint>
#include <string_view>

namespace csp {

// splitmix64, used both as a mixer and as the draw engine so that
// sequences are identical across platforms and standard libraries.
inline uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() { return splitmix64_next(state_); }

  // Unbiased bounded draw (rejection sampling).
  uint64_t below(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  uint64_t state() const { return state_; }

 private:
  uint64_t state_;
};

// Independent stream per (game, round, player), derived from the master
// seed by hashing. Resume and concurrent execution therefore never
// depend on draw order.
inline Rng stream_for(uint64_t master_seed, std::string_view game_id,
                      int round, std::string_view player_id) {
  uint64_t h = master_seed;
  h ^= fnv1a64(game_id) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= static_cast<uint64_t>(round) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= fnv1a64(player_id) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  // one round of mixing so nearby keys do not produce nearby states
  uint64_t s = h;
  splitmix64_next(s);
  return Rng(s);
}

}  // namespace csp
