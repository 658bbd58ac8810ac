#ifndef HALLWALK_ROOT_SYSTEM_HPP
#define HALLWALK_ROOT_SYSTEM_HPP

// Finite root systems from integer Cartan matrices.
//
// Conventions used throughout the library:
//   * C(i,j) = <alpha_j-check, alpha_i>, so the pairing of a coweight x
//     with the simple root alpha_i is row i of C*x.
//   * Coweights, coroots and the Weyl action on them live in simple-coroot
//     coordinates; roots are kept in simple-root coordinates.
//   * height(x) = <x, rho> = coordinate sum (see coweight.hpp).
//
// The Weyl group is materialized as explicit integer matrices acting on
// coroot coordinates. Finite type is certified up front by positive
// definiteness of the symmetrized Cartan matrix, so the closures below
// terminate; the cap exists to keep very large groups (E7, E8) out unless
// a caller raises it deliberately.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hallwalk/coweight.hpp"
#include "hallwalk/errors.hpp"
#include "hallwalk/rational.hpp"
#include "hallwalk/tpoly.hpp"

namespace hallwalk {

using CartanMatrix = std::vector<std::vector<std::int64_t>>;

// Standard matrix for a family letter, e.g. ("A",3) or ("G",2).
CartanMatrix cartan_for_family(const std::string& family, int rank);

struct RootDatum {
  std::vector<std::int64_t> root;  // simple-root coordinates
  Coweight coroot;                 // simple-coroot coordinates
};

struct WeylElement {
  std::vector<std::int64_t> mat;  // rank x rank, row major, acts on coroot coords
  int length = 0;
  int sign = 1;  // (-1)^length, equals det(mat)
};

class RootSystem {
 public:
  // Throws CartanError for malformed or non-finite-type input,
  // CapExceeded when a closure would exceed `cap` elements.
  explicit RootSystem(CartanMatrix cartan, std::size_t cap = 1000000);

  std::size_t rank() const { return n_; }
  const CartanMatrix& cartan() const { return cartan_; }

  const std::vector<RootDatum>& positive_roots() const { return positive_; }
  std::size_t num_positive_roots() const { return positive_.size(); }
  const Coweight& two_rho_check() const { return two_rho_check_; }

  const std::vector<WeylElement>& weyl() const { return weyl_; }
  std::size_t weyl_order() const { return weyl_.size(); }

  Coweight apply(const WeylElement& w, const Coweight& x) const;

  // <x, alpha_i> for the i-th simple root.
  std::int64_t pairing_simple(const Coweight& x, std::size_t i) const;
  // <x, alpha> for an arbitrary root in simple-root coordinates.
  std::int64_t pairing_root(const Coweight& x,
                            const std::vector<std::int64_t>& root) const;

  bool is_dominant(const Coweight& x) const;
  void require_dominant(const Coweight& x, const char* who = "operation") const;

  // In-place simple reflection x -> s_i(x).
  void reflect_simple(Coweight& x, std::size_t i) const;

  // Unique dominant point of the orbit of x, along with one word of simple
  // reflections (applied left to right to x) that reaches it.
  std::pair<Coweight, std::vector<std::size_t>> dominant_representative(
      const Coweight& x) const;

  std::vector<Coweight> orbit(const Coweight& x) const;

  // Poincare series W(t) and the stabilizer series W_x(t), summing t^length
  // over the elements fixing x. For dominant x the stabilizer is a standard
  // parabolic and W_x(t) divides W(t) exactly; for other x it is only a
  // conjugate of one and divisibility can fail.
  const TPoly& poincare() const { return poincare_; }
  TPoly stabilizer_poincare(const Coweight& x) const;

  // Product over positive coroots of the Euclidean ratios
  // <x + rho-check, beta-check> / <rho-check, beta-check>.
  // Requires x dominant; the value does not depend on the symmetrizer
  // normalization.
  ZZ weyl_dimension(const Coweight& x) const;

  // Symmetrizer d with C(i,j)*d(j) = C(j,i)*d(i), long roots normalized to
  // squared length 2 within each component.
  const std::vector<QQ>& symmetrizer() const { return sym_d_; }
  // Euclidean pairing of two vectors in coroot coordinates.
  QQ coroot_pairing_eucl(const Coweight& x, const Coweight& y) const;

 private:
  void validate_cartan() const;
  void compute_symmetrizer();
  void close_roots(std::size_t cap);
  void close_weyl(std::size_t cap);

  std::size_t n_ = 0;
  CartanMatrix cartan_;
  std::vector<QQ> sym_d_;
  std::vector<RootDatum> positive_;
  Coweight two_rho_check_;
  std::vector<WeylElement> weyl_;
  TPoly poincare_;
};

}  // namespace hallwalk

#endif
