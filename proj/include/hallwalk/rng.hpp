#ifndef HALLWALK_RNG_HPP
#define HALLWALK_RNG_HPP

// Deterministic 64-bit generator (splitmix64). Chosen over <random>
// engines because simulation results must reproduce bit for bit across
// platforms and standard-library versions; std::uniform_int_distribution
// makes no such promise.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hallwalk/rational.hpp"

namespace hallwalk {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform bigint in [0, n), n >= 1, by rejection from the smallest
  // covering power of two.
  ZZ below(const ZZ& n) {
    if (n <= 0) throw std::invalid_argument("Rng::below: bound must be positive");
    if (n == 1) return ZZ(0);
    const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    std::vector<std::uint64_t> buf(words);
    while (true) {
      for (std::size_t i = 0; i < words; ++i) buf[i] = next();
      ZZ z;
      mpz_import(z.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
      z >>= (words * 64 - bits);
      if (z < n) return z;
    }
  }

 private:
  std::uint64_t state_;
};

// Stable per-unit seed derivation for parallel trajectories/samples.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  Rng r(master ^ (0x632be59bd9b4e019ull * (index + 1)));
  r.next();
  return r.next();
}

}  // namespace hallwalk

#endif
