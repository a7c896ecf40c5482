#ifndef TENSORCERT_REGISTRY_HPP
#define TENSORCERT_REGISTRY_HPP

#include "tensorcert/decomposition.hpp"

namespace tensorcert {

/// The classical 7-term decomposition of kappa_3(2); the third factors are
/// stored un-transposed.
Decomposition strassen(const FieldSpec& field);

/// The n1*n2*n3-term decomposition (e_ij, e_jk, e_ki) of <n1,n2,n3>.
Decomposition naive(int n1, int n2, int n3, const FieldSpec& field);

/// Names understood by builtin lookup: "strassen", "naive-<n1>x<n2>x<n3>".
Decomposition builtin_decomposition(const std::string& name, const FieldSpec& field);

}  // namespace tensorcert

#endif
