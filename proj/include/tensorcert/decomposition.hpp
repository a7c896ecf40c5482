#ifndef TENSORCERT_DECOMPOSITION_HPP
#define TENSORCERT_DECOMPOSITION_HPP

#include "tensorcert/tensor.hpp"

namespace tensorcert {

/// One rank-1 summand: a matrix per factor.
struct RankOneTerm {
  std::vector<Matrix> factors;
};

/// Ordered list of rank-1 terms with a target shape.
struct Decomposition {
  TensorShape shape;
  std::vector<RankOneTerm> terms;

  int rank() const { return static_cast<int>(terms.size()); }
  void check_terms() const;  // throws when a term does not conform to shape
};

/// Exact sum of the outer products of the terms.
Tensor evaluate_decomposition(const Decomposition& d);

/// Factor-wise Kronecker product of the two term lists (r1*r2 terms).
Decomposition kronecker_compose(const Decomposition& d1, const Decomposition& d2);

/// For a decomposition of kappa_m(n): the coefficient table expressing each
/// open chain omega_m(i,i') in the span of the terms' (m-1)-factor prefixes;
/// entry (i,i',s) equals entry (i',i) of term s's last factor.
struct OmegaCoefficients {
  int n = 0;
  int term_count = 0;
  /// coeff[(i*n + iprime) * term_count + s]
  std::vector<Scalar> coeff;
  const Scalar& at(int i, int iprime, int s) const {
    return coeff[(static_cast<size_t>(i) * n + iprime) * term_count + s];
  }
};
OmegaCoefficients omega_span_coefficients(const Decomposition& d);

/// Raises a decomposition of kappa_m(n) to one of kappa_{m+1}(n) with at
/// most r*n^2 terms; the result is verified by evaluation.
Decomposition lift_kappa(const Decomposition& d);

/// Lowers a decomposition of kappa_{m+1}(n) to one of kappa_m(n) with at
/// most r terms, contracting the last two factors.
Decomposition contract_kappa(const Decomposition& d);

/// True when the shape is the cyclic matrix-space chain over dims
/// (n_1..n_m); fills dims when non-null.
bool cyclic_dims(const TensorShape& shape, std::vector<int>* dims);

}  // namespace tensorcert

#endif
