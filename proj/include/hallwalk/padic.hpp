#ifndef HALLWALK_PADIC_HPP
#define HALLWALK_PADIC_HPP

// Independent cross-check of the exact transition and corners laws by
// direct matrix sampling over Q_p, for the special linear groups. Matrix
// entries carry explicit precision: a scalar is either a certified unit
// times p^val, or a certified zero down to some absolute precision floor.
// Every extracted invariant is exact or the extraction throws
// PrecisionExhausted; no silent rounding anywhere.

#include <cstdint>
#include <string>
#include <vector>

#include "hallwalk/coweight.hpp"
#include "hallwalk/rational.hpp"
#include "hallwalk/rng.hpp"
#include "hallwalk/satake.hpp"

namespace hallwalk {

struct PadicScalar {
  // When zero is set the value is indistinguishable from 0 below absolute
  // precision p^val (val is the floor, unit and prec are meaningless).
  // Otherwise the value is p^val * unit with unit a p-unit known mod p^prec.
  bool zero = true;
  long val = 0;
  ZZ unit = 0;
  long prec = 0;

  static constexpr long kExactPrec = 1000000000L;

  long abs_prec() const {
    if (zero) return val;
    if (prec >= kExactPrec) return kExactPrec;
    return val + prec;
  }
  bool exact() const { return zero ? val >= kExactPrec : prec >= kExactPrec; }
};

PadicScalar padic_exact_zero();
PadicScalar padic_zero_below(long floor);
PadicScalar padic_power(long p, long e);                            // exact p^e
PadicScalar padic_from_residue(const ZZ& r, long p, long n);        // r mod p^n
PadicScalar padic_add(const PadicScalar& a, const PadicScalar& b, long p);
PadicScalar padic_mul(const PadicScalar& a, const PadicScalar& b, long p);

class PadicMatrix {
 public:
  PadicMatrix(std::size_t dim, long p);  // exact zero matrix
  static PadicMatrix diagonal_powers(const std::vector<long>& exponents, long p);
  static PadicMatrix from_residues(const std::vector<std::vector<ZZ>>& r, long p,
                                   long n);

  std::size_t dim() const { return dim_; }
  long p() const { return p_; }
  PadicScalar& at(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const PadicScalar& at(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  friend PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b);

 private:
  std::size_t dim_;
  long p_;
  std::vector<PadicScalar> a_;
};

// Exact determinant by fraction-free elimination.
ZZ zz_det(std::vector<std::vector<ZZ>> m);

// Uniform draw from SL_dim(Z_p) truncated at precision p^n: uniform
// residues conditioned on an invertible reduction, then one row scaled by
// the inverse determinant (fibers of that map have equal size, so the
// result is uniform on SL of the residue ring).
PadicMatrix haar_sample_sl(std::size_t dim, long p, long n, Rng& rng);

// Diagonal p^{x_1},...,p^{x_dim} realizing a dominant coweight of the
// special linear group: x_i are the successive differences of the coroot
// coordinates, x_1 = c_1, x_i = c_i - c_{i-1}, x_dim = -c_{dim-1}.
PadicMatrix pi_matrix(const Coweight& c, long p);

// Singular numbers (coroot coordinates) by Smith elimination with
// valuation-minimal pivoting. The matrix must be special linear; `guard`
// is the safety margin below the certified precision at which a pivot is
// still accepted.
Coweight singular_numbers(const PadicMatrix& a, long guard = 3);

// Corner coweight (coroot coordinates): partial determinant valuations of
// the bottom row blocks.
Coweight corner_numbers(const PadicMatrix& a, long guard = 3);

struct OracleAtom {
  Coweight cw;
  QQ exact;
  double empirical = 0;
  double z = 0;       // (empirical - exact) / sqrt(exact (1-exact) / samples)
  bool pass = false;  // |empirical - exact| within 3 binomial standard errors
};

struct OracleReport {
  std::string kind;  // "corners" or "product"
  long p = 0;
  long n = 0;  // working precision exponent
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t precision_failures = 0;
  std::size_t unexpected = 0;  // draws outside the exact support
  std::vector<OracleAtom> atoms;
  double chi2 = 0;
  std::size_t dof = 0;
  double max_abs_z = 0;
  bool ok = false;  // every atom passes, nothing unexpected, no precision loss
};

struct OracleOptions {
  std::size_t samples = 1000;
  long n = 0;  // 0 picks 8 * (1 + total height of the inputs)
  std::uint64_t seed = 1;
  unsigned threads = 1;
  long guard = 3;
};

// Samples U pi_lambda V with U, V Haar and tallies corner_numbers against
// the exact corners law. ctx must be a type A system at q = p.
OracleReport validate_corners(ProbabilityContext& ctx, long p, const Coweight& lambda,
                              const OracleOptions& opt);

// Samples U pi_mu W pi_lambda V and tallies singular_numbers against the
// exact product transition law.
OracleReport validate_products(ProbabilityContext& ctx, long p, const Coweight& mu,
                               const Coweight& lambda, const OracleOptions& opt);

}  // namespace hallwalk

#endif
