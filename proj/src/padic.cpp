#include "hallwalk/padic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "hallwalk/errors.hpp"
#include "hallwalk/parallel.hpp"
#include "hallwalk/root_system.hpp"

namespace hallwalk {

namespace {

constexpr long kExact = PadicScalar::kExactPrec;

long sat_add(long a, long b) {
  if (a >= kExact || b >= kExact) return kExact;
  const long s = a + b;
  return s >= kExact ? kExact : s;
}

// p-adic valuation of a nonzero integer
long valp(const ZZ& x, long p) {
  ZZ rest;
  const ZZ zp(p);
  return static_cast<long>(
      mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), zp.get_mpz_t()));
}

ZZ ppow(long p, long e) {
  if (e < 0) throw std::invalid_argument("ppow: negative exponent");
  return z_pow(ZZ(p), static_cast<unsigned long>(e));
}

void check_p(long p) {
  if (p < 2) throw ConfigError("p must be at least 2, got " + std::to_string(p));
}

}  // namespace

PadicScalar padic_exact_zero() {
  PadicScalar s;
  s.zero = true;
  s.val = kExact;
  return s;
}

PadicScalar padic_zero_below(long floor) {
  PadicScalar s;
  s.zero = true;
  s.val = std::min(floor, kExact);
  return s;
}

PadicScalar padic_power(long p, long e) {
  check_p(p);
  PadicScalar s;
  s.zero = false;
  s.val = e;
  s.unit = 1;
  s.prec = kExact;
  return s;
}

PadicScalar padic_from_residue(const ZZ& r, long p, long n) {
  check_p(p);
  if (n < 1) throw std::invalid_argument("padic_from_residue: precision below 1");
  if (r < 0 || r >= ppow(p, n))
    throw std::invalid_argument("padic_from_residue: residue out of range");
  if (r == 0) return padic_zero_below(n);
  PadicScalar s;
  s.zero = false;
  s.val = valp(r, p);
  s.prec = n - s.val;
  ZZ u = r;
  mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), ppow(p, s.val).get_mpz_t());
  s.unit = std::move(u);
  return s;
}

PadicScalar padic_mul(const PadicScalar& a, const PadicScalar& b, long p) {
  check_p(p);
  if (a.zero || b.zero) return padic_zero_below(sat_add(a.val, b.val));
  PadicScalar s;
  s.zero = false;
  s.val = a.val + b.val;
  s.prec = std::min(a.prec, b.prec);
  s.unit = a.unit * b.unit;
  if (s.prec < kExact) s.unit %= ppow(p, s.prec);
  return s;
}

PadicScalar padic_add(const PadicScalar& a, const PadicScalar& b, long p) {
  check_p(p);
  const long abs_out = std::min(a.abs_prec(), b.abs_prec());
  const PadicScalar* terms[2] = {&a, &b};

  if (abs_out >= kExact) {
    // both operands exact
    long vmin = kExact;
    for (const auto* t : terms)
      if (!t->zero) vmin = std::min(vmin, t->val);
    if (vmin >= kExact) return padic_exact_zero();
    ZZ s(0);
    for (const auto* t : terms)
      if (!t->zero) s += ppow(p, t->val - vmin) * t->unit;
    if (s == 0) return padic_exact_zero();
    PadicScalar r;
    r.zero = false;
    const long v = valp(s, p);
    r.val = vmin + v;
    r.prec = kExact;
    mpz_divexact(s.get_mpz_t(), s.get_mpz_t(), ppow(p, v).get_mpz_t());
    r.unit = std::move(s);
    return r;
  }

  long vmin = kExact;
  for (const auto* t : terms)
    if (!t->zero) vmin = std::min(vmin, t->val);
  if (vmin >= abs_out) return padic_zero_below(abs_out);
  const ZZ window = ppow(p, abs_out - vmin);
  ZZ s(0);
  for (const auto* t : terms)
    if (!t->zero) s += ppow(p, t->val - vmin) * t->unit;
  s %= window;
  if (s < 0) s += window;
  if (s == 0) return padic_zero_below(abs_out);
  PadicScalar r;
  r.zero = false;
  const long v = valp(s, p);
  r.val = vmin + v;
  r.prec = abs_out - r.val;
  mpz_divexact(s.get_mpz_t(), s.get_mpz_t(), ppow(p, v).get_mpz_t());
  s %= ppow(p, r.prec);
  r.unit = std::move(s);
  return r;
}

PadicMatrix::PadicMatrix(std::size_t dim, long p) : dim_(dim), p_(p) {
  check_p(p);
  if (dim == 0) throw std::invalid_argument("empty matrix");
  a_.assign(dim * dim, padic_exact_zero());
}

PadicMatrix PadicMatrix::diagonal_powers(const std::vector<long>& exponents, long p) {
  PadicMatrix m(exponents.size(), p);
  for (std::size_t i = 0; i < exponents.size(); ++i)
    m.at(i, i) = padic_power(p, exponents[i]);
  return m;
}

PadicMatrix PadicMatrix::from_residues(const std::vector<std::vector<ZZ>>& r, long p,
                                       long n) {
  PadicMatrix m(r.size(), p);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i].size() != r.size())
      throw std::invalid_argument("from_residues: ragged rows");
    for (std::size_t j = 0; j < r.size(); ++j)
      m.at(i, j) = padic_from_residue(r[i][j], p, n);
  }
  return m;
}

PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.dim_ != b.dim_ || a.p_ != b.p_)
    throw std::invalid_argument("matrix shape or prime mismatch");
  PadicMatrix c(a.dim_, a.p_);
  for (std::size_t i = 0; i < a.dim_; ++i)
    for (std::size_t j = 0; j < a.dim_; ++j) {
      PadicScalar acc = padic_exact_zero();
      for (std::size_t k = 0; k < a.dim_; ++k)
        acc = padic_add(acc, padic_mul(a.at(i, k), b.at(k, j), a.p_), a.p_);
      c.at(i, j) = std::move(acc);
    }
  return c;
}

ZZ zz_det(std::vector<std::vector<ZZ>> a) {
  const std::size_t n = a.size();
  if (n == 0) return ZZ(1);
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("zz_det: not square");
  ZZ prev(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return ZZ(0);
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        ZZ t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign < 0 ? ZZ(-a[n - 1][n - 1]) : a[n - 1][n - 1];
}

PadicMatrix haar_sample_sl(std::size_t dim, long p, long n, Rng& rng) {
  check_p(p);
  if (dim < 2) throw std::invalid_argument("haar_sample_sl: dimension below 2");
  if (n < 1) throw std::invalid_argument("haar_sample_sl: precision below 1");
  const ZZ pn = ppow(p, n);
  for (int tries = 0; tries < 1000000; ++tries) {
    std::vector<std::vector<ZZ>> r(dim, std::vector<ZZ>(dim));
    for (auto& row : r)
      for (auto& e : row) e = rng.below(pn);
    ZZ det = zz_det(r) % pn;
    if (det < 0) det += pn;
    if (mpz_divisible_ui_p(det.get_mpz_t(), static_cast<unsigned long>(p))) continue;
    ZZ dinv;
    if (!mpz_invert(dinv.get_mpz_t(), det.get_mpz_t(), pn.get_mpz_t()))
      throw InvariantViolation("unit determinant failed to invert");
    for (auto& e : r[0]) e = (e * dinv) % pn;
    return PadicMatrix::from_residues(r, p, n);
  }
  throw InvariantViolation("haar_sample_sl: no invertible reduction found");
}

PadicMatrix pi_matrix(const Coweight& c, long p) {
  const std::size_t dim = c.size() + 1;
  std::vector<long> x(dim);
  std::int64_t prev = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    x[i] = static_cast<long>(c[i] - prev);
    prev = c[i];
  }
  x[dim - 1] = static_cast<long>(-prev);
  return PadicMatrix::diagonal_powers(x, p);
}

namespace {

struct ScaledResidues {
  long m = 0;  // every entry was multiplied by p^m
  long M = 0;  // entries are certified modulo p^M
  ZZ pM;
  std::vector<std::vector<ZZ>> r;
};

// Bound on how many scaled digits we keep when inputs are exact.
constexpr long kWorkingCap = 512;

ScaledResidues scale_residues(const PadicMatrix& a, long guard) {
  const std::size_t d = a.dim();
  const long p = a.p();
  long min_val = kExact;
  long min_abs = kExact;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      min_val = std::min(min_val, a.at(i, j).val);
      min_abs = std::min(min_abs, a.at(i, j).abs_prec());
    }
  ScaledResidues s;
  s.m = std::max(0L, -min_val);
  s.M = std::min(sat_add(min_abs, s.m), s.m + kWorkingCap);
  if (s.M <= s.m + guard)
    throw PrecisionExhausted("only " + std::to_string(s.M - s.m) +
                             " certified digits around the integral scale");
  s.pM = ppow(p, s.M);
  s.r.assign(d, std::vector<ZZ>(d, ZZ(0)));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const PadicScalar& e = a.at(i, j);
      if (e.zero) continue;
      const long shift = e.val + s.m;
      if (shift >= s.M) continue;  // vanishes in the window
      ZZ v = (ppow(p, shift) * e.unit) % s.pM;
      if (v < 0) v += s.pM;
      s.r[i][j] = std::move(v);
    }
  return s;
}

}  // namespace

Coweight singular_numbers(const PadicMatrix& a, long guard) {
  const std::size_t d = a.dim();
  const long p = a.p();
  ScaledResidues s = scale_residues(a, guard);
  std::vector<char> row_active(d, 1), col_active(d, 1);
  std::vector<long> divisors;
  long meff = s.M;
  for (std::size_t step = 0; step < d; ++step) {
    long best = kExact;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (!row_active[i]) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (!col_active[j] || s.r[i][j] == 0) continue;
        const long v = valp(s.r[i][j], p);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (best >= meff - guard)
      throw PrecisionExhausted("divisor " + std::to_string(step) +
                               " is not certified: pivot valuation " +
                               (best >= kExact ? std::string("unresolved")
                                               : std::to_string(best)) +
                               " against effective precision " + std::to_string(meff));
    ZZ u = s.r[bi][bj];
    mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), ppow(p, best).get_mpz_t());
    ZZ uinv;
    if (!mpz_invert(uinv.get_mpz_t(), u.get_mpz_t(), s.pM.get_mpz_t()))
      throw InvariantViolation("pivot unit failed to invert");
    for (std::size_t i = 0; i < d; ++i) {
      if (!row_active[i] || i == bi || s.r[i][bj] == 0) continue;
      ZZ mult = s.r[i][bj];
      mpz_divexact(mult.get_mpz_t(), mult.get_mpz_t(), ppow(p, best).get_mpz_t());
      mult = (mult * uinv) % s.pM;
      for (std::size_t j = 0; j < d; ++j) {
        if (!col_active[j]) continue;
        s.r[i][j] = (s.r[i][j] - mult * s.r[bi][j]) % s.pM;
        if (s.r[i][j] < 0) s.r[i][j] += s.pM;
      }
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (!col_active[j] || j == bj || s.r[bi][j] == 0) continue;
      ZZ mult = s.r[bi][j];
      mpz_divexact(mult.get_mpz_t(), mult.get_mpz_t(), ppow(p, best).get_mpz_t());
      mult = (mult * uinv) % s.pM;
      for (std::size_t i = 0; i < d; ++i) {
        if (!row_active[i]) continue;
        s.r[i][j] = (s.r[i][j] - mult * s.r[i][bj]) % s.pM;
        if (s.r[i][j] < 0) s.r[i][j] += s.pM;
      }
    }
    row_active[bi] = 0;
    col_active[bj] = 0;
    divisors.push_back(best);
    meff -= best;
  }
  for (std::size_t i = 1; i < d; ++i)
    if (divisors[i] < divisors[i - 1])
      throw InvariantViolation("elementary divisors out of order");
  // descending valuations in the diagonal realization
  std::vector<long> eps(d);
  long total = 0;
  for (std::size_t i = 0; i < d; ++i) {
    eps[i] = divisors[d - 1 - i] - s.m;
    total += eps[i];
  }
  if (total != 0)
    throw InvariantViolation("determinant valuation " + std::to_string(total) +
                             " is nonzero; the matrix is not special linear");
  Coweight c(d - 1);
  long acc = 0;
  for (std::size_t j = 0; j + 1 < d; ++j) {
    acc += eps[j];
    c[j] = acc;
  }
  return c;
}

Coweight corner_numbers(const PadicMatrix& a, long guard) {
  const std::size_t d = a.dim();
  const long p = a.p();
  const ScaledResidues s = scale_residues(a, guard);
  // t[i] = sum of singular numbers of the block of the last (d - i) rows,
  // 0-indexed here so t[0] covers the full matrix.
  std::vector<long> t(d);
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t k = d - i;  // block height = minor size
    const std::size_t first_row = i;
    long best = kExact;
    // walk all k-element column subsets
    std::vector<std::size_t> pick(k);
    for (std::size_t j = 0; j < k; ++j) pick[j] = j;
    for (;;) {
      std::vector<std::vector<ZZ>> minor(k, std::vector<ZZ>(k));
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) minor[r][c] = s.r[first_row + r][pick[c]];
      ZZ det = zz_det(std::move(minor)) % s.pM;
      if (det < 0) det += s.pM;
      if (det != 0) best = std::min(best, valp(det, p));
      // next combination
      std::size_t pos = k;
      while (pos > 0 && pick[pos - 1] == d - k + pos - 1) --pos;
      if (pos == 0) break;
      ++pick[pos - 1];
      for (std::size_t j = pos; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    if (best >= s.M - guard)
      throw PrecisionExhausted("corner block of " + std::to_string(k) +
                               " rows has no certified minor valuation");
    t[i] = best - static_cast<long>(k) * s.m;
  }
  if (t[0] != 0)
    throw InvariantViolation("total valuation " + std::to_string(t[0]) +
                             " is nonzero; the matrix is not special linear");
  Coweight c(d - 1);
  for (std::size_t j = 0; j + 1 < d; ++j) c[j] = -t[j + 1];
  return c;
}

namespace {

void require_type_a(ProbabilityContext& ctx, long p) {
  const RootSystem& rs = ctx.rs();
  if (rs.cartan() != cartan_for_family("A", static_cast<int>(rs.rank())))
    throw ConfigError("the matrix oracle supports only family A root systems");
  if (ctx.q() != QQ(static_cast<long>(p)))
    throw ConfigError("oracle needs q = p; context has q = " + rat_str(ctx.q()) +
                      ", sampling at p = " + std::to_string(p));
}

OracleReport tally(std::string kind, long p, long n, const OracleOptions& opt,
                   const LatticeDistribution& exact,
                   const std::vector<Coweight>& draws,
                   const std::vector<char>& failed) {
  OracleReport rep;
  rep.kind = std::move(kind);
  rep.p = p;
  rep.n = n;
  rep.samples = draws.size();
  rep.seed = opt.seed;
  std::map<Coweight, std::size_t, GradedLess> counts;
  std::size_t effective = 0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    if (failed[i]) {
      ++rep.precision_failures;
      continue;
    }
    ++effective;
    ++counts[draws[i]];
  }
  if (effective == 0) {
    rep.ok = false;
    return rep;
  }
  const double dn = static_cast<double>(effective);
  bool all_pass = true;
  for (const auto& [cw, pq] : exact.support()) {
    OracleAtom atom;
    atom.cw = cw;
    atom.exact = pq;
    const auto it = counts.find(cw);
    const double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    atom.empirical = observed / dn;
    const double pe = pq.get_d();
    const double se = std::sqrt(pe * (1 - pe) / dn);
    atom.z = se == 0 ? 0 : (atom.empirical - pe) / se;
    const double spread = std::max(atom.empirical * (1 - atom.empirical), pe * (1 - pe));
    atom.pass = std::fabs(atom.empirical - pe) <= 3 * std::sqrt(spread / dn);
    all_pass = all_pass && atom.pass;
    rep.max_abs_z = std::max(rep.max_abs_z, std::fabs(atom.z));
    rep.chi2 += (observed - dn * pe) * (observed - dn * pe) / (dn * pe);
    rep.atoms.push_back(std::move(atom));
    if (it != counts.end()) counts.erase(it);
  }
  for (const auto& [cw, count] : counts) {
    rep.unexpected += count;
    OracleAtom atom;
    atom.cw = cw;
    atom.exact = QQ(0);
    atom.empirical = static_cast<double>(count) / dn;
    atom.z = 0;
    atom.pass = false;
    rep.atoms.push_back(std::move(atom));
  }
  rep.dof = exact.size() - 1;
  rep.ok = all_pass && rep.unexpected == 0 && rep.precision_failures == 0;
  return rep;
}

}  // namespace

OracleReport validate_corners(ProbabilityContext& ctx, long p, const Coweight& lambda,
                              const OracleOptions& opt) {
  require_type_a(ctx, p);
  const RootSystem& rs = ctx.rs();
  if (lambda.size() != rs.rank()) throw ConfigError("lambda rank mismatch");
  rs.require_dominant(lambda, "oracle");
  const long n = opt.n > 0 ? opt.n : 8 * (1 + height(lambda));
  const std::size_t dim = rs.rank() + 1;
  const LatticeDistribution exact = ctx.corners_distribution(lambda);
  const PadicMatrix pi = pi_matrix(lambda, p);

  std::vector<Coweight> draws(opt.samples);
  std::vector<char> failed(opt.samples, 0);
  parallel_indexed(opt.samples, opt.threads, [&](std::size_t i) {
    Rng rng(derive_seed(opt.seed, i));
    const PadicMatrix u = haar_sample_sl(dim, p, n, rng);
    const PadicMatrix v = haar_sample_sl(dim, p, n, rng);
    try {
      draws[i] = corner_numbers(u * pi * v, opt.guard);
    } catch (const PrecisionExhausted&) {
      failed[i] = 1;
    }
  });
  return tally("corners", p, n, opt, exact, draws, failed);
}

OracleReport validate_products(ProbabilityContext& ctx, long p, const Coweight& mu,
                               const Coweight& lambda, const OracleOptions& opt) {
  require_type_a(ctx, p);
  const RootSystem& rs = ctx.rs();
  if (mu.size() != rs.rank() || lambda.size() != rs.rank())
    throw ConfigError("coweight rank mismatch");
  rs.require_dominant(mu, "oracle");
  rs.require_dominant(lambda, "oracle");
  const long n = opt.n > 0 ? opt.n : 8 * (1 + height(mu) + height(lambda));
  const std::size_t dim = rs.rank() + 1;
  const LatticeDistribution exact = ctx.product_transition(mu, lambda);
  const PadicMatrix pi_mu = pi_matrix(mu, p);
  const PadicMatrix pi_lam = pi_matrix(lambda, p);

  std::vector<Coweight> draws(opt.samples);
  std::vector<char> failed(opt.samples, 0);
  parallel_indexed(opt.samples, opt.threads, [&](std::size_t i) {
    Rng rng(derive_seed(opt.seed, i));
    const PadicMatrix u = haar_sample_sl(dim, p, n, rng);
    const PadicMatrix w = haar_sample_sl(dim, p, n, rng);
    const PadicMatrix v = haar_sample_sl(dim, p, n, rng);
    try {
      draws[i] = singular_numbers(u * pi_mu * w * pi_lam * v, opt.guard);
    } catch (const PrecisionExhausted&) {
      failed[i] = 1;
    }
  });
  return tally("product", p, n, opt, exact, draws, failed);
}

}  // namespace hallwalk
