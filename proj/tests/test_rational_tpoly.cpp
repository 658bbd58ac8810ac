#include <stdexcept>

#include "doctest.h"

#include "hallwalk/rational.hpp"
#include "hallwalk/tpoly.hpp"

using namespace hallwalk;

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rat("3/4") == QQ(3, 4));
  CHECK(parse_rat("-6/8") == make_q(ZZ(-3), ZZ(4)));
  CHECK(parse_rat("0.25") == QQ(1, 4));
  CHECK(parse_rat("-0.5") == make_q(ZZ(-1), ZZ(2)));
  CHECK(parse_rat("2") == QQ(2));
  CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1.2/3"), std::invalid_argument);

  CHECK(rat_str(make_q(ZZ(-1), ZZ(2))) == "-1/2");
  CHECK(rat_str(QQ(3)) == "3");
  CHECK(make_q(ZZ(2), ZZ(-4)) == make_q(ZZ(-1), ZZ(2)));
  CHECK(is_integer(QQ(4)));
  CHECK_FALSE(is_integer(QQ(1, 3)));
}

TEST_CASE("integer and rational powers") {
  CHECK(z_pow(ZZ(3), 4) == 81);
  CHECK(z_pow(ZZ(-2), 3) == -8);
  CHECK(z_pow(ZZ(7), 0) == 1);
  CHECK(q_pow(QQ(1, 2), -3) == QQ(8));
  CHECK(q_pow(QQ(2), 10) == QQ(1024));
  CHECK(q_pow(QQ(5), 0) == QQ(1));
}

TEST_CASE("t-polynomial ring operations") {
  const TPoly t = TPoly::t();
  const TPoly a = TPoly(1) + t;        // 1 + t
  const TPoly b = TPoly(1) - t;        // 1 - t
  CHECK(a * b == TPoly(1) - t * t);
  CHECK(a.degree() == 1);
  CHECK(TPoly().degree() == -1);
  CHECK(TPoly().is_zero());
  CHECK((a - a).is_zero());
  CHECK(TPoly::monomial(3, ZZ(2)).coeff(3) == 2);
  CHECK(TPoly::monomial(3, ZZ(2)).coeff(1) == 0);

  // trailing zero coefficients must be trimmed so == is structural
  CHECK(TPoly(std::vector<ZZ>{ZZ(1), ZZ(0)}) == TPoly(1));
}

TEST_CASE("t-polynomial evaluation and exact division") {
  const TPoly t = TPoly::t();
  const TPoly f = (TPoly(1) + t) * (TPoly(1) + t + t * t);  // A2 Poincare series
  CHECK(f.eval(QQ(1)) == QQ(6));
  CHECK(f.eval(QQ(1, 2)) == QQ(21, 8));
  CHECK(f.divexact(TPoly(1) + t) == TPoly(1) + t + t * t);
  CHECK(f.divexact(f) == TPoly(1));
  CHECK_THROWS_AS((TPoly(1) + t).divexact(t), std::domain_error);
  CHECK_THROWS_AS(f.divexact(TPoly()), std::domain_error);
}
