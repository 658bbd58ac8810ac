#include <cstdint>
#include <map>
#include <vector>

#include "doctest.h"

#include "hallwalk/padic.hpp"
#include "hallwalk/rng.hpp"

using namespace hallwalk;

namespace {

PadicMatrix int_matrix(const std::vector<std::vector<long>>& rows, long p,
                       long n = 24) {
  ZZ mod;
  mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(n));
  std::vector<std::vector<ZZ>> r;
  for (const auto& row : rows) {
    auto& out = r.emplace_back();
    for (long x : row) {
      ZZ v = ZZ(x) % mod;
      if (v < 0) v += mod;
      out.push_back(std::move(v));
    }
  }
  return PadicMatrix::from_residues(r, p, n);
}

}  // namespace

TEST_CASE("scalar valuations track arithmetic") {
  const PadicScalar six = padic_from_residue(ZZ(6), 2, 10);
  CHECK_FALSE(six.zero);
  CHECK(six.val == 1);
  CHECK(six.unit == 3);

  const PadicScalar two = padic_from_residue(ZZ(2), 2, 10);
  const PadicScalar eight = padic_add(six, two, 2);
  CHECK(eight.val == 3);
  CHECK_FALSE(eight.zero);

  const PadicScalar twelve = padic_mul(six, two, 2);
  CHECK(twelve.val == 2);

  // cancellation down to the working precision leaves a certified zero
  const PadicScalar a = padic_from_residue(ZZ(3), 2, 4);
  const PadicScalar b = padic_from_residue(ZZ(13), 2, 4);
  const PadicScalar sum = padic_add(a, b, 2);
  CHECK(sum.zero);
  CHECK(sum.val == 4);

  const PadicScalar inv_cube = padic_power(2, -3);
  CHECK(inv_cube.val == -3);
  CHECK(inv_cube.exact());
  CHECK(padic_mul(inv_cube, padic_power(2, 3), 2).val == 0);

  CHECK(padic_exact_zero().zero);
  CHECK(padic_zero_below(5).val == 5);
}

TEST_CASE("integer determinants by fraction-free elimination") {
  CHECK(zz_det({{ZZ(1), ZZ(2)}, {ZZ(3), ZZ(4)}}) == -2);
  CHECK(zz_det({{ZZ(2), ZZ(0), ZZ(0)}, {ZZ(0), ZZ(3), ZZ(0)}, {ZZ(0), ZZ(0), ZZ(5)}}) ==
        30);
  CHECK(zz_det({{ZZ(1), ZZ(2), ZZ(3)}, {ZZ(2), ZZ(4), ZZ(6)}, {ZZ(7), ZZ(1), ZZ(0)}}) ==
        0);
  CHECK(zz_det({{ZZ(0), ZZ(1)}, {ZZ(1), ZZ(0)}}) == -1);
}

TEST_CASE("diagonal realizations of dominant coweights") {
  // rank 2 coweight [2,1]: exponents 2, -1, -1 sum to zero
  const PadicMatrix pi = pi_matrix({2, 1}, 3);
  CHECK(pi.dim() == 3);
  CHECK(pi.at(0, 0).val == 2);
  CHECK(pi.at(1, 1).val == -1);
  CHECK(pi.at(2, 2).val == -1);
  CHECK(pi.at(0, 1).zero);

  CHECK(singular_numbers(pi) == Coweight{2, 1});
  CHECK(corner_numbers(pi) == Coweight{2, 1});

  const PadicMatrix one = pi_matrix({3}, 2);
  CHECK(singular_numbers(one) == Coweight{3});
  CHECK(corner_numbers(one) == Coweight{3});
  CHECK(singular_numbers(pi_matrix({0}, 2)) == Coweight{0});
}

TEST_CASE("rotations by integral matrices preserve singular numbers") {
  const long p = 2;
  const PadicMatrix pi = pi_matrix({2}, p);
  const PadicMatrix u = int_matrix({{1, 1}, {0, 1}}, p);
  const PadicMatrix v = int_matrix({{1, 0}, {1, 1}}, p);
  const PadicMatrix w = int_matrix({{0, 1}, {-1, 0}}, p);

  CHECK(singular_numbers(u * pi * v) == Coweight{2});
  CHECK(singular_numbers(w * pi * w) == Coweight{2});
  CHECK(singular_numbers(u * (pi * pi) * w) == Coweight{4});

  // corners are stable under upper-unipotent rows above and units on the right
  const PadicMatrix n = int_matrix({{1, 3}, {0, 1}}, p);
  CHECK(corner_numbers(n * pi * v) == corner_numbers(pi));
  CHECK(corner_numbers(n * pi * w) == corner_numbers(pi));
}

TEST_CASE("a fully uncertified matrix refuses to answer") {
  const PadicMatrix zero = int_matrix({{0, 0}, {0, 0}}, 2, 3);
  CHECK_THROWS_AS(singular_numbers(zero), PrecisionExhausted);
  CHECK_THROWS_AS(corner_numbers(zero), PrecisionExhausted);
}

TEST_CASE("haar samples cover the residue group uniformly") {
  Rng rng(20260815);
  std::map<std::uint32_t, int> counts;
  const int n = 6000;
  for (int i = 0; i < n; ++i) {
    const PadicMatrix m = haar_sample_sl(2, 2, 1, rng);
    std::uint32_t code = 0;
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) {
        code <<= 1;
        if (!m.at(r, c).zero) {
          CHECK(m.at(r, c).val == 0);
          code |= 1;
        }
      }
    ++counts[code];
  }
  // SL2 over the two-element field has exactly 6 elements
  CHECK(counts.size() == 6);
  double chi2 = 0;
  const double expect = n / 6.0;
  for (const auto& [code, c] : counts) chi2 += (c - expect) * (c - expect) / expect;
  CHECK(chi2 < 20.5);  // 1e-3 critical value at 5 degrees of freedom
}

TEST_CASE("small oracle runs are deterministic and clean") {
  RootSystem rs(cartan_for_family("A", 1));
  ProbabilityContext ctx(rs, QQ(2));
  OracleOptions opt;
  opt.samples = 300;
  opt.n = 12;
  opt.seed = 77;

  const OracleReport corners = validate_corners(ctx, 2, {1}, opt);
  CHECK(corners.kind == "corners");
  CHECK(corners.samples == 300);
  CHECK(corners.precision_failures == 0);
  CHECK(corners.unexpected == 0);
  CHECK(corners.atoms.size() == 3);
  double total = 0;
  for (const auto& a : corners.atoms) total += a.empirical;
  CHECK(total == doctest::Approx(1.0));

  const OracleReport again = validate_corners(ctx, 2, {1}, opt);
  for (std::size_t i = 0; i < corners.atoms.size(); ++i) {
    CHECK(corners.atoms[i].cw == again.atoms[i].cw);
    CHECK(corners.atoms[i].empirical == again.atoms[i].empirical);
  }

  const OracleReport prod = validate_products(ctx, 2, {1}, {1}, opt);
  CHECK(prod.kind == "product");
  CHECK(prod.precision_failures == 0);
  CHECK(prod.unexpected == 0);
}

TEST_CASE("the oracle insists on type A at q equal to the prime") {
  RootSystem c2(cartan_for_family("C", 2));
  ProbabilityContext bad_type(c2, QQ(2));
  OracleOptions opt;
  opt.samples = 10;
  CHECK_THROWS_AS(validate_corners(bad_type, 2, {1, 1}, opt), ConfigError);

  RootSystem a1(cartan_for_family("A", 1));
  ProbabilityContext bad_q(a1, QQ(3));
  CHECK_THROWS_AS(validate_corners(bad_q, 2, {1}, opt), ConfigError);
}
