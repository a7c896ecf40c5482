#ifndef TENSORCERT_TENSOR_HPP
#define TENSORCERT_TENSOR_HPP

#include <utility>
#include <vector>

#include "tensorcert/linalg.hpp"

namespace tensorcert {

/// Shape of an m-factor tensor whose factors are matrix spaces.
struct TensorShape {
  std::vector<std::pair<int, int>> factors;
  FieldSpec field;

  int arity() const { return static_cast<int>(factors.size()); }
  /// Extents of the 2m index slots [r1, c1, r2, c2, ...]; the dense entry
  /// layout is row-major over this slot list.
  std::vector<int> slot_extents() const;
  long long entry_count() const;
  bool operator==(const TensorShape& o) const { return factors == o.factors && field == o.field; }
  bool operator!=(const TensorShape& o) const { return !(*this == o); }
};

/// Dense exact m-factor tensor.
class Tensor {
 public:
  explicit Tensor(TensorShape shape);

  const TensorShape& shape() const { return shape_; }
  const FieldSpec& field() const { return shape_.field; }
  int arity() const { return shape_.arity(); }

  const Scalar& at(const std::vector<int>& slots) const { return entries_[offset(slots)]; }
  Scalar& at(const std::vector<int>& slots) { return entries_[offset(slots)]; }
  const std::vector<Scalar>& entries() const { return entries_; }
  std::vector<Scalar>& entries() { return entries_; }

  bool operator==(const Tensor& o) const { return shape_ == o.shape_ && entries_ == o.entries_; }
  bool operator!=(const Tensor& o) const { return !(*this == o); }
  bool is_zero() const;
  Tensor operator+(const Tensor& o) const;
  Tensor operator-(const Tensor& o) const;
  Tensor scaled(const Scalar& c) const;
  /// Kronecker (factor-wise) product with composite row-major indices.
  Tensor kron(const Tensor& o) const;

  /// Coordinatewise dot product; squared Frobenius-style norm.
  Scalar dot(const Tensor& o) const;
  Scalar norm_sq() const { return dot(*this); }

  size_t offset(const std::vector<int>& slots) const;
  std::vector<int> slots_of(size_t offset) const;

 private:
  TensorShape shape_;
  std::vector<Scalar> entries_;
};

/// Side assignment for each of the 2m index slots of a flattening.
enum class Side { left, right };

struct FlattenGrouping {
  std::vector<Side> slots;  // length 2m, slot order [r1, c1, r2, c2, ...]

  /// The grouping {row1, col1, row3 | row2, col2, col3} on 3-factor tensors.
  static FlattenGrouping pi();
  /// For even arity m: whole factors 1,3,5,... left and 2,4,... right.
  static FlattenGrouping pairing(int arity);
  /// Factor `idx` (0-based) left, everything else right.
  static FlattenGrouping single_factor(int arity, int idx);
};

/// <n1,n2,n3>: unit entries at ((i,j),(j,k),(k,i)).
Tensor matmul_tensor(int n1, int n2, int n3, const FieldSpec& field);
/// kappa_m over dims (n_1..n_m): unit entries at ((i1,i2),...,(im,i1)).
Tensor cyclic_tensor(const std::vector<int>& dims, const FieldSpec& field);
/// omega_m(i, i'): the (m-1)-factor open chain with endpoints fixed
/// (i, i' are 0-based here).
Tensor open_cyclic_tensor(int m, int n, int i, int iprime, const FieldSpec& field);

/// Regroups slots into a LEFT x RIGHT matrix (row-major on each side).
Matrix flatten(const Tensor& t, const FlattenGrouping& g);

/// (A_1 x ... x A_m) t, one operator per factor.
Tensor apply_hom_tuple(const Tensor& t, const std::vector<MatrixSpaceOperator>& maps);

/// e_ij -> e_ij + e_ji applied on every factor (all factors square, equal size).
Tensor symmetrize(const Tensor& t);

/// Contraction of the last factor of t1 with the first factor of t2.
Tensor contract_pair(const Tensor& t1, const Tensor& t2);

/// ||Contr(t1,t2)||^2 / (||t1||^2 ||t2||^2), exact rational in [0,1].
Scalar cos_sq(const Tensor& t1, const Tensor& t2);

/// Exact test of sigma -> ||Contr_I(sigma, t)||^2 agreement, via the forms'
/// symmetric coefficient matrices (rational field).
bool i_equivalent(const Tensor& t1, const Tensor& t2, const std::vector<int>& factor_subset);
/// The coefficient matrix of the quadratic form above (exposed for tests).
Matrix contraction_form(const Tensor& t, const std::vector<int>& factor_subset);

/// Ordered p-subsets of [d] in lexicographic order.
struct WedgeBasis {
  int p, ambient_dim;
  std::vector<std::vector<int>> subsets;
  static WedgeBasis make(int p, int d);
  int index_of(const std::vector<int>& sorted_subset) const;
};

/// Matrix of the map B* x Lambda^p(A') -> Lambda^{p+1}(A') x C induced by a
/// 3-tensor in A x B x C, with A' a subspace of A projected onto its
/// echelon-pivot coordinates.  Rows index (wedge(p+1), C), columns (B, wedge(p)).
Matrix koszul_flatten(const Tensor& t, int p, const Subspace& a_prime);

}  // namespace tensorcert

#endif
