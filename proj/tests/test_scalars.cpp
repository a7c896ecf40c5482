#include <doctest.h>

#include "tensorcert/rng.hpp"
#include "tensorcert/scalar.hpp"

using namespace tensorcert;

TEST_CASE("parsing canonical forms") {
  FieldSpec q = FieldSpec::rationals();
  FieldSpec f3 = FieldSpec::prime(3);

  CHECK(parse_scalar("3/4", q).str() == "3/4");
  CHECK(parse_scalar("5", f3).str() == "2");
  CHECK(parse_scalar("-6/4", q).str() == "-3/2");
  CHECK(parse_scalar("0", q).is_zero());
  CHECK_THROWS_AS(parse_scalar("1/0", q), ParseError);
  CHECK_THROWS_AS(parse_scalar("x", q), ParseError);
  CHECK_THROWS_AS(parse_scalar("1/3", FieldSpec::prime(3)), ArithmeticError);

  FieldSpec ring = FieldSpec::eps(q, 2);
  CHECK(parse_scalar("[1,1]", ring).str() == "[1,1]");
  CHECK(parse_scalar("[1]", ring).str() == "[1,0]");
  CHECK_THROWS_AS(parse_scalar("[1,2,3]", ring), ParseError);
}

TEST_CASE("eps arithmetic truncates") {
  FieldSpec ring = FieldSpec::eps(FieldSpec::rationals(), 2);
  Scalar one_plus = parse_scalar("[1,1]", ring);
  Scalar one_minus = parse_scalar("[1,-1]", ring);
  CHECK(one_plus * one_minus == Scalar::one(ring));
  Scalar eps = parse_scalar("[0,1]", ring);
  CHECK((eps * eps).is_zero());
  CHECK_FALSE(eps.invertible());
  CHECK_THROWS_AS(Scalar::one(ring) / eps, ArithmeticError);
  CHECK(one_plus.inverse() * one_plus == Scalar::one(ring));
}

TEST_CASE("rational arithmetic") {
  FieldSpec q = FieldSpec::rationals();
  Scalar a = parse_scalar("2/3", q), b = parse_scalar("1/6", q);
  CHECK((a + b).str() == "5/6");
  CHECK((a / b).str() == "4");
  CHECK((a - a).is_zero());
}

TEST_CASE("field spec constraints") {
  CHECK_THROWS(FieldSpec::prime(4));
  CHECK_THROWS(FieldSpec::eps(FieldSpec::eps(FieldSpec::rationals(), 2), 2));
  CHECK_THROWS(FieldSpec::eps(FieldSpec::rationals(), 0));
  CHECK(FieldSpec::prime(5).name() == "F5");
  CHECK(FieldSpec::eps(FieldSpec::prime(5), 3).name() == "F5[eps]^3");
}

TEST_CASE("field axioms on random triples") {
  std::vector<FieldSpec> fields = {FieldSpec::rationals(), FieldSpec::prime(2),
                                   FieldSpec::prime(5), FieldSpec::eps(FieldSpec::prime(5), 3),
                                   FieldSpec::eps(FieldSpec::rationals(), 2)};
  Rng rng(42);
  auto draw = [&](const FieldSpec& f) {
    if (!f.is_eps()) return rng.scalar(f);
    std::vector<Scalar> coeffs;
    for (int i = 0; i < f.eps_order(); ++i) coeffs.push_back(rng.scalar(f.base()));
    return Scalar::from_eps_coeffs(coeffs, f);
  };
  for (const auto& f : fields) {
    for (int trial = 0; trial < 200; ++trial) {
      Scalar a = draw(f), b = draw(f), cc = draw(f);
      CHECK((a + b) + cc == a + (b + cc));
      CHECK((a * b) * cc == a * (b * cc));
      CHECK(a * (b + cc) == a * b + a * cc);
      CHECK(a + (-a) == Scalar::zero(f));
      if (a.invertible()) CHECK(a * a.inverse() == Scalar::one(f));
      // parse o render is the identity
      CHECK(parse_scalar(a.str(), f) == a);
    }
  }
}

TEST_CASE("truncation is a ring homomorphism") {
  FieldSpec hi = FieldSpec::eps(FieldSpec::prime(7), 4);
  Rng rng(7);
  auto draw = [&] {
    std::vector<Scalar> coeffs;
    for (int i = 0; i < 4; ++i) coeffs.push_back(rng.scalar(FieldSpec::prime(7)));
    return Scalar::from_eps_coeffs(coeffs, hi);
  };
  for (int trial = 0; trial < 200; ++trial) {
    Scalar a = draw(), b = draw();
    CHECK((a * b).truncated(2) == a.truncated(2) * b.truncated(2));
    CHECK((a + b).truncated(2) == a.truncated(2) + b.truncated(2));
  }
}
