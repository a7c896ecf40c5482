#ifndef TENSORCERT_BIASED_HPP
#define TENSORCERT_BIASED_HPP

#include "tensorcert/linalg.hpp"

namespace tensorcert {

/// Symmetric rational bias matrix.
struct BiasMatrix {
  Matrix D;
  explicit BiasMatrix(Matrix d);
};

/// (v^T D v) / (v^T v) for a nonzero rational column vector v.
Scalar rayleigh(const BiasMatrix& D, const Matrix& v);

/// Trace of the orthogonal restriction of D to S: tr((B^T B)^{-1} B^T D B)
/// over any basis B of S.  Zero subspace gives 0.
Scalar biased_dim(const BiasMatrix& D, const Subspace& S);

/// dim_D(S1) + dim_D(S2) - dim_D(S1 meet S2) - dim_D(S1 + S2).
Scalar modularity_defect(const BiasMatrix& D, const Subspace& S1, const Subspace& S2);

/// Right-angle test used by the modularity law: (S1 meet S2)^perp meet S1 is
/// orthogonal to (S1 meet S2)^perp meet S2.
bool right_angled(const Subspace& S1, const Subspace& S2);

}  // namespace tensorcert

#endif
