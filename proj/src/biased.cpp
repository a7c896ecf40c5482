#include "tensorcert/biased.hpp"

namespace tensorcert {

BiasMatrix::BiasMatrix(Matrix d) : D(std::move(d)) {
  if (!D.field().is_rational()) throw std::invalid_argument("bias matrices live over the rationals");
  if (D.rows() != D.cols() || D != D.transposed())
    throw std::invalid_argument("bias matrix must be symmetric");
}

Scalar rayleigh(const BiasMatrix& D, const Matrix& v) {
  if (v.cols() != 1 || v.rows() != D.D.rows())
    throw std::invalid_argument("rayleigh expects a column vector matching D");
  Scalar denom = v.dot(v);
  if (denom.is_zero()) throw std::invalid_argument("rayleigh quotient of the zero vector");
  Scalar num = v.dot(D.D * v);
  return num / denom;
}

Scalar biased_dim(const BiasMatrix& D, const Subspace& S) {
  int n = D.D.rows();
  if (S.ambient_dim() != n || !S.field().is_rational())
    throw std::invalid_argument("subspace does not match the bias matrix");
  int d = S.dim();
  if (d == 0) return Scalar::zero(S.field());
  // columns of B are the basis vectors
  Matrix B(n, d, S.field());
  const auto& rows = S.basis_rows();
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < n; ++i) B.at(i, k) = rows[k][i];
  Matrix gram = B.transposed() * B;          // invertible: basis is independent
  Matrix m = gram.inverted() * (B.transposed() * (D.D * B));
  Scalar tr = Scalar::zero(S.field());
  for (int i = 0; i < d; ++i) tr = tr + m.at(i, i);
  return tr;
}

Scalar modularity_defect(const BiasMatrix& D, const Subspace& S1, const Subspace& S2) {
  return biased_dim(D, S1) + biased_dim(D, S2) - biased_dim(D, subspace_intersect(S1, S2)) -
         biased_dim(D, subspace_sum(S1, S2));
}

bool right_angled(const Subspace& S1, const Subspace& S2) {
  Subspace meet_perp = subspace_intersect(S1, S2).dot_complement();
  Subspace a = subspace_intersect(meet_perp, S1);
  Subspace b = subspace_intersect(meet_perp, S2);
  for (const auto& x : a.basis_matrices())
    for (const auto& y : b.basis_matrices())
      if (!x.dot(y).is_zero()) return false;
  return true;
}

}  // namespace tensorcert
