#include <utility>
#include <vector>

#include "doctest.h"

#include "hallwalk/hall_littlewood.hpp"

using namespace hallwalk;

namespace {

const TPoly kOne(1);
const TPoly kT = TPoly::t();

}  // namespace

TEST_CASE("rank one expansions in closed form") {
  RootSystem rs(cartan_for_family("A", 1));

  const HLExpansion p0 = hl_expand(rs, {0});
  CHECK(p0.terms.size() == 1);
  CHECK(p0.u({0}) == kOne);

  // P_m = e^{m} + e^{-m} + (1-t) * sum_{|j| < m} e^{j}
  for (std::int64_t m = 1; m <= 3; ++m) {
    CAPTURE(m);
    const HLExpansion pm = hl_expand(rs, {m});
    CHECK(pm.terms.size() == static_cast<std::size_t>(2 * m + 1));
    CHECK(pm.u({m}) == kOne);
    CHECK(pm.u({-m}) == kOne);
    for (std::int64_t j = -m + 1; j < m; ++j) CHECK(pm.u({j}) == kOne - kT);
    CHECK(pm.u({m + 1}).is_zero());
  }

  CHECK_THROWS_AS(hl_expand(rs, {-1}), InvariantViolation);
}

TEST_CASE("adjoint expansion for the rank two simply laced system") {
  RootSystem rs(cartan_for_family("A", 2));
  const HLExpansion p = hl_expand(rs, {1, 1});
  CHECK(p.terms.size() == 7);
  CHECK(p.u({1, 1}) == kOne);
  // all six coroots sit in one orbit, with monic coefficient
  for (const auto& d : rs.positive_roots()) {
    CHECK(p.u(d.coroot) == kOne);
    CHECK(p.u(cw_neg(d.coroot)) == kOne);
  }
  // zero-weight coefficient 2 - t - t^2, one term 1 - t^{e} per exponent e
  CHECK(p.u({0, 0}) == (kOne - kT) + (kOne - kT * kT));
}

TEST_CASE("expansions are invariant under the whole Weyl group") {
  for (const char* fam : {"A", "C", "G"}) {
    RootSystem rs(cartan_for_family(fam, 2));
    const Coweight lambda = fam[0] == 'G' ? Coweight{2, 1} : Coweight{1, 2};
    CAPTURE(fam);
    const HLExpansion p = hl_expand(rs, lambda);
    CHECK(p.u(lambda) == kOne);
    for (const auto& w : rs.weyl())
      for (const auto& [nu, c] : p.terms.terms())
        CHECK(p.u(rs.apply(w, nu)) == c);
    // support lies below lambda: dominant representatives are dominated
    for (const auto& [nu, c] : p.terms.terms()) {
      const Coweight rep = rs.dominant_representative(nu).first;
      CHECK(cw_dominated(rep, lambda));
      CHECK(c.degree() <= height(lambda) - height(rep));
    }
  }
}

TEST_CASE("specializing t before or after expanding is the same") {
  RootSystem rs(cartan_for_family("C", 2));
  const Coweight lambda{1, 2};
  const HLExpansion full = hl_expand(rs, lambda);
  const QQ t0(1, 3);
  const Element<QQ> direct = hl_expand_eval(rs, lambda, t0);
  for (const auto& [nu, c] : full.terms.terms()) CHECK(direct.coeff(nu) == c.eval(t0));
  for (const auto& [nu, c] : direct.terms()) CHECK_FALSE(full.u(nu).is_zero());
}

TEST_CASE("random-point agreement with the defining Weyl sum") {
  const std::pair<const char*, Coweight> cases[] = {
      {"A", {2, 2}}, {"C", {1, 2}}, {"G", {2, 1}}};
  for (const auto& [fam, lambda] : cases) {
    RootSystem rs(cartan_for_family(fam, 2));
    CAPTURE(fam);
    const auto rep = numeric_oracle_check(rs, lambda, 4, 20260815);
    CHECK(rep.ok);
    CHECK(rep.agreements == rep.trials);
  }
}

TEST_CASE("rank one structure constants in closed form") {
  RootSystem rs(cartan_for_family("A", 1));
  const LRTable t = lr_coefficients(rs, {1}, {1});
  CHECK(t.coeffs.size() == 3);
  CHECK(t.c({2}) == kOne);
  CHECK(t.c({1}) == kOne - kT);
  CHECK(t.c({0}) == kOne + kT);
  CHECK(t.c({3}).is_zero());

  // P_2 * P_1 = P_3 + (1-t) P_2 + P_1
  const LRTable s = lr_coefficients(rs, {2}, {1});
  CHECK(s.c({3}) == kOne);
  CHECK(s.c({2}) == kOne - kT);
  CHECK(s.c({1}) == kOne);
  CHECK(s.c({0}).is_zero());
}

TEST_CASE("structure constants reassemble the product exactly") {
  for (const char* fam : {"A", "C"}) {
    RootSystem rs(cartan_for_family(fam, 2));
    HLCache cache(rs);
    const Coweight mu{1, 1}, nu{1, 2};
    CAPTURE(fam);
    const LRTable t = lr_coefficients(cache, mu, nu);
    Element<TPoly> lhs = cache.get(mu)->terms * cache.get(nu)->terms;
    for (const auto& [lambda, c] : t.coeffs)
      lhs.sub_scaled_shifted(c, cw_zero(2), cache.get(lambda)->terms);
    CHECK(lhs.is_zero());
    // symmetry of the product
    const LRTable s = lr_coefficients(cache, nu, mu);
    CHECK(s.coeffs == t.coeffs);
    // top coefficient is monic at mu + nu
    CHECK(t.c(cw_add(mu, nu)) == kOne);
  }
}

TEST_CASE("structure constants at t = 0 and t = 1 have the right mass") {
  RootSystem rs(cartan_for_family("A", 2));
  HLCache cache(rs);
  const LRTable t = lr_coefficients(cache, {1, 1}, {1, 1});
  // t = 0: multiplicities of the character ring; total matches 8 * 8
  ZZ char_mass = 0;
  for (const auto& [lambda, c] : t.coeffs) {
    const QQ m = c.eval(QQ(0));
    CHECK(is_integer(m));
    CHECK(m > 0);
    char_mass += m.get_num() * rs.weyl_dimension(lambda);
  }
  CHECK(char_mass == 64);
}

TEST_CASE("expansion cache returns shared results") {
  RootSystem rs(cartan_for_family("A", 2));
  HLCache cache(rs);
  const auto a = cache.get({1, 1});
  const auto b = cache.get({1, 1});
  CHECK(a.get() == b.get());
  CHECK(a->u({1, 1}) == kOne);
}
