#ifndef HALLWALK_COWEIGHT_HPP
#define HALLWALK_COWEIGHT_HPP

// Coweights are integer coordinate vectors in the basis of simple coroots.
// With that convention height(x) = <x, rho> is just the coordinate sum, and
// x >= y in dominance order iff x - y has nonnegative coordinates.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hallwalk {

using Coweight = std::vector<std::int64_t>;

inline Coweight cw_zero(std::size_t rank) { return Coweight(rank, 0); }

inline void cw_check_rank(const Coweight& a, const Coweight& b) {
  if (a.size() != b.size()) throw std::invalid_argument("coweight rank mismatch");
}

inline Coweight cw_add(const Coweight& a, const Coweight& b) {
  cw_check_rank(a, b);
  Coweight r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

inline Coweight cw_sub(const Coweight& a, const Coweight& b) {
  cw_check_rank(a, b);
  Coweight r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

inline Coweight cw_neg(const Coweight& a) {
  Coweight r(a);
  for (auto& v : r) v = -v;
  return r;
}

inline Coweight cw_scale(std::int64_t c, const Coweight& a) {
  Coweight r(a);
  for (auto& v : r) v *= c;
  return r;
}

inline std::int64_t height(const Coweight& a) {
  std::int64_t h = 0;
  for (auto v : a) h += v;
  return h;
}

// Dominance (coroot-lattice) partial order: b <= a.
inline bool cw_dominated(const Coweight& b, const Coweight& a) {
  cw_check_rank(a, b);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i] > a[i]) return false;
  return true;
}

// Total order refining dominance: compare height first, then coordinates
// lexicographically. Used as the monomial order for division and peeling.
struct GradedLess {
  bool operator()(const Coweight& a, const Coweight& b) const {
    const auto ha = height(a), hb = height(b);
    if (ha != hb) return ha < hb;
    return a < b;
  }
};

inline std::string cw_str(const Coweight& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + "]";
}

struct CoweightHash {
  std::size_t operator()(const Coweight& a) const {
    std::size_t h = a.size();
    for (auto v : a) {
      // boost::hash_combine mixing
      h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace hallwalk

#endif
