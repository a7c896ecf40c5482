#include <doctest.h>

#include "tensorcert/linalg.hpp"
#include "tensorcert/rng.hpp"

using namespace tensorcert;

namespace {
const FieldSpec Q = FieldSpec::rationals();

Matrix mat2(std::initializer_list<std::initializer_list<long long>> rows, const FieldSpec& f) {
  std::vector<std::vector<Scalar>> out;
  for (auto& r : rows) {
    std::vector<Scalar> row;
    for (long long v : r) row.push_back(Scalar::from_int(v, f));
    out.push_back(row);
  }
  return Matrix::from_rows(out);
}
}  // namespace

TEST_CASE("rank basics") {
  CHECK(Matrix::identity(2, Q).rank() == 2);
  // Strassen row 2 gamma^T from the table has rank 1
  CHECK(mat2({{0, 0}, {1, -1}}, Q).rank() == 1);
  CHECK(mat2({{1, 1}, {1, 1}}, FieldSpec::prime(2)).rank() == 1);
  CHECK(Matrix(3, 4, Q).rank() == 0);
}

TEST_CASE("kernel and inverse") {
  CHECK(Matrix::identity(2, Q).kernel().empty());
  Matrix m = mat2({{1, 1}, {0, 1}}, Q);
  CHECK(m.inverted() == mat2({{1, -1}, {0, 1}}, Q));
  auto ker = mat2({{1, 1}}, Q).kernel();
  REQUIRE(ker.size() == 1);
  CHECK(ker[0][0] + ker[0][1] == Scalar::zero(Q));
  CHECK_THROWS_AS(mat2({{1, 1}, {1, 1}}, Q).inverted(), ArithmeticError);
}

TEST_CASE("dot complement") {
  auto e = [&](int i, int j) { return Matrix::unit(2, 2, i, j, Q); };
  Subspace s = Subspace::span(2, 2, Q, {e(0, 0)});
  Subspace c = s.dot_complement();
  CHECK(c.dim() == 3);
  CHECK(c.contains(e(0, 1)));
  CHECK(c.contains(e(1, 0)));
  CHECK(c.contains(e(1, 1)));
  CHECK_FALSE(c.contains(e(0, 0)));

  CHECK(Subspace::full(2, 2, Q).dot_complement().dim() == 0);

  Subspace diag = Subspace::span(2, 2, Q, {e(0, 0) + e(1, 1)});
  Subspace dc = diag.dot_complement();
  CHECK(dc.dim() == 3);
  CHECK(dc.contains(e(0, 0) - e(1, 1)));
}

TEST_CASE("sum and intersection") {
  auto e = [&](int i, int j) { return Matrix::unit(2, 2, i, j, Q); };
  Subspace a = Subspace::span(2, 2, Q, {e(0, 0), e(0, 1)});
  Subspace b = Subspace::span(2, 2, Q, {e(0, 1), e(1, 0)});
  CHECK(subspace_sum(Subspace::span(2, 2, Q, {e(0, 0)}),
                     Subspace::span(2, 2, Q, {e(0, 1)}))
            .dim() == 2);
  Subspace meet = subspace_intersect(a, b);
  CHECK(meet.dim() == 1);
  CHECK(meet.contains(e(0, 1)));
  CHECK(subspace_sum(a, Subspace::zero(2, 2, Q)) == a);
}

TEST_CASE("operators") {
  CHECK(MatrixSpaceOperator::identity(2, 2, Q).rank() == 4);
  MatrixSpaceOperator t = MatrixSpaceOperator::transpose_op(2, Q);
  CHECK(t.rank() == 4);
  CHECK(t.apply(Matrix::unit(2, 2, 0, 1, Q)) == Matrix::unit(2, 2, 1, 0, Q));
  // projection onto e11
  Matrix rep(4, 4, Q);
  rep.at(0, 0) = Scalar::one(Q);
  MatrixSpaceOperator proj(2, 2, 2, 2, rep);
  CHECK(proj.rank() == 1);
  CHECK(MatrixSpaceOperator::identity(2, 2, Q).apply(mat2({{1, 2}, {3, 4}}, Q)) ==
        mat2({{1, 2}, {3, 4}}, Q));
  CHECK(MatrixSpaceOperator::zero(2, 2, 2, 2, Q).apply(mat2({{1, 2}, {3, 4}}, Q)).is_zero());
}

TEST_CASE("rank(AB) <= min(rank A, rank B) on random pairs") {
  for (auto field : {FieldSpec::prime(5), Q}) {
    Rng rng(11);
    for (int trial = 0; trial < 60; ++trial) {
      Matrix a = rng.matrix(3, 4, field), b = rng.matrix(4, 2, field);
      CHECK((a * b).rank() <= std::min(a.rank(), b.rank()));
    }
  }
}

TEST_CASE("complement is an involution and dims add up") {
  for (auto field : {FieldSpec::prime(3), Q}) {
    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
      int k = static_cast<int>(rng.below(5));
      std::vector<Matrix> gens;
      for (int i = 0; i < k; ++i) gens.push_back(rng.matrix(2, 3, field));
      Subspace s = Subspace::span(2, 3, field, gens);
      Subspace p = s.dot_complement();
      CHECK(s.dim() + p.dim() == 6);
      CHECK(p.dot_complement() == s);
    }
  }
}

TEST_CASE("modular law for dims") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto gens = [&](int k) {
      std::vector<Matrix> out;
      for (int i = 0; i < k; ++i) out.push_back(rng.matrix(2, 2, FieldSpec::prime(3)));
      return out;
    };
    Subspace a = Subspace::span(2, 2, FieldSpec::prime(3), gens(static_cast<int>(rng.below(4))));
    Subspace b = Subspace::span(2, 2, FieldSpec::prime(3), gens(static_cast<int>(rng.below(4))));
    CHECK(subspace_intersect(a, b).dim() + subspace_sum(a, b).dim() == a.dim() + b.dim());
  }
}

TEST_CASE("fraction-free rank agrees with rank modulo large primes") {
  // cross-check oracle: random integer matrices, three large prime moduli
  Rng rng(99);
  const long long primes[] = {2147483647LL, 2147483629LL, 2147483587LL};
  for (int trial = 0; trial < 25; ++trial) {
    int rows = 2 + static_cast<int>(rng.below(4));
    int cols = 2 + static_cast<int>(rng.below(4));
    Matrix m(rows, cols, Q);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        m.at(i, j) = Scalar::from_int(static_cast<long long>(rng.below(41)) - 20, Q);
    // random low-rank perturbation so that rank deficiency actually occurs
    if (rng.below(2) == 0 && rows > 1) {
      for (int j = 0; j < cols; ++j) m.at(rows - 1, j) = m.at(0, j) + m.at(rows - 1 > 1 ? 1 : 0, j);
    }
    int r = m.rank();
    for (long long p : primes) {
      FieldSpec fp = FieldSpec::prime(p);
      Matrix mp(rows, cols, fp);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
          mp.at(i, j) = Scalar::from_rational(m.at(i, j).rational_value(), fp);
      // entries are small, so no modular rank drop is possible here
      CHECK(mp.rank() == r);
    }
  }
}

TEST_CASE("rank over a large prime uses exact field elimination") {
  // 2^61 - 1 exceeds the residue fast path's modulus bound
  FieldSpec fp = FieldSpec::prime((Int(1) << 61) - 1);
  Matrix m(3, 3, fp);
  m.at(0, 0) = Scalar::from_int(2, fp);
  m.at(1, 1) = Scalar::from_int(3, fp);
  m.at(2, 0) = Scalar::from_int(4, fp);  // row 3 = 2 * row 1
  CHECK(m.rank() == 2);
  CHECK(Matrix::identity(4, fp).rank() == 4);
}

TEST_CASE("rank of an eps matrix is the rank of its constant part") {
  FieldSpec ring = FieldSpec::eps(Q, 2);
  Matrix m(2, 2, ring);
  m.at(0, 0) = parse_scalar("[1,1]", ring);
  m.at(0, 1) = parse_scalar("[0,1]", ring);  // pure eps: invisible at order 0
  m.at(1, 0) = parse_scalar("[2,0]", ring);
  m.at(1, 1) = parse_scalar("[0,5]", ring);
  CHECK(m.rank() == 1);
  CHECK(Matrix::identity(3, ring).rank() == 3);
  CHECK_THROWS(m.kernel());
  CHECK_THROWS(m.inverted());
  CHECK_THROWS(Subspace::span(2, 2, ring, {m}));
}

TEST_CASE("quotient coordinates") {
  auto e = [&](int i, int j) { return Matrix::unit(2, 2, i, j, Q); };
  Subspace s = Subspace::span(2, 2, Q, {e(0, 0) + e(1, 1)});
  CHECK(s.quotient_coordinates(e(0, 0) + e(1, 1)) ==
        std::vector<Scalar>(3, Scalar::zero(Q)));
  CHECK(s.contains(e(0, 0) + e(1, 1)));
  CHECK_FALSE(s.contains(e(0, 0)));
  MatrixSpaceOperator q = MatrixSpaceOperator::quotient_map(s);
  CHECK(q.out_dim() == 3);
  CHECK(q.apply(e(0, 0) + e(1, 1)).is_zero());
  CHECK(q.rank() == 3);
}
