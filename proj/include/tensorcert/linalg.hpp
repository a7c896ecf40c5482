#ifndef TENSORCERT_LINALG_HPP
#define TENSORCERT_LINALG_HPP

#include <optional>
#include <vector>

#include "tensorcert/scalar.hpp"

namespace tensorcert {

/// Dense exact matrix.  Entries are stored row-major; that vectorization
/// order is fixed globally and shared by every operator representation
/// and flattening in the library.
class Matrix {
 public:
  Matrix(int rows, int cols, const FieldSpec& field);
  static Matrix identity(int n, const FieldSpec& field);
  static Matrix unit(int rows, int cols, int i, int j, const FieldSpec& field);
  static Matrix from_rows(const std::vector<std::vector<Scalar>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const FieldSpec& field() const { return field_; }

  const Scalar& at(int i, int j) const { return entries_[static_cast<size_t>(i) * cols_ + j]; }
  Scalar& at(int i, int j) { return entries_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;  // matrix product
  Matrix scaled(const Scalar& c) const;
  Matrix operator-() const;
  Matrix transposed() const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  bool is_zero() const;

  /// Coordinatewise dot product sum_ij a_ij b_ij (no transpose).
  Scalar dot(const Matrix& o) const;

  /// Kronecker product, row-major composite indices.
  Matrix kron(const Matrix& o) const;

  std::vector<Scalar> vectorized() const { return entries_; }
  static Matrix from_vector(const std::vector<Scalar>& v, int rows, int cols,
                            const FieldSpec& field);

  /// Exact rank.  Over Q this runs fraction-free (Bareiss) elimination on a
  /// denominator-cleared copy; over F_p straight elimination on residues.
  /// For an eps ring the rank of the eps^0 coefficient matrix is reported.
  int rank() const;
  /// Basis of the right kernel {x : Mx = 0}, as column vectors.
  std::vector<std::vector<Scalar>> kernel() const;
  Matrix inverted() const;

  std::string str() const;

 private:
  int rows_, cols_;
  FieldSpec field_;
  std::vector<Scalar> entries_;
};

/// Subspace of a matrix space F^{a x b}, held as the reduced row echelon
/// form of its vectorized basis; equal subspaces have identical bases.
class Subspace {
 public:
  static Subspace zero(int rows, int cols, const FieldSpec& field);
  static Subspace full(int rows, int cols, const FieldSpec& field);
  static Subspace span(int rows, int cols, const FieldSpec& field,
                       const std::vector<Matrix>& generators);

  int ambient_rows() const { return arows_; }
  int ambient_cols() const { return acols_; }
  int ambient_dim() const { return arows_ * acols_; }
  const FieldSpec& field() const { return field_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  bool is_proper() const { return dim() < ambient_dim(); }

  const std::vector<std::vector<Scalar>>& basis_rows() const { return basis_; }
  std::vector<Matrix> basis_matrices() const;

  bool contains(const Matrix& m) const;
  bool operator==(const Subspace& o) const;
  bool operator!=(const Subspace& o) const { return !(*this == o); }

  /// {zeta : zeta . a = 0 for all a in the subspace} under the
  /// coordinatewise dot product.
  Subspace dot_complement() const;

  /// Canonical coset representative of v modulo this subspace (pivots
  /// eliminated), and the representative restricted to the non-pivot
  /// coordinates (coordinates of the quotient space).
  std::vector<Scalar> coset_representative(const Matrix& m) const;
  std::vector<Scalar> quotient_coordinates(const Matrix& m) const;
  const std::vector<int>& pivot_columns() const { return pivots_; }
  std::vector<int> nonpivot_columns() const;

  friend Subspace subspace_sum(const Subspace& a, const Subspace& b);
  friend Subspace subspace_intersect(const Subspace& a, const Subspace& b);

 private:
  Subspace(int r, int c, const FieldSpec& f) : arows_(r), acols_(c), field_(f) {}
  void reduce(std::vector<std::vector<Scalar>> rows);
  int arows_, acols_;
  FieldSpec field_;
  std::vector<std::vector<Scalar>> basis_;  // RREF rows
  std::vector<int> pivots_;
};

Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersect(const Subspace& a, const Subspace& b);

/// Linear map between matrix spaces F^{a x b} -> F^{c x d}, represented by
/// its (cd) x (ab) matrix on row-major vectorizations.
class MatrixSpaceOperator {
 public:
  MatrixSpaceOperator(int in_rows, int in_cols, int out_rows, int out_cols, Matrix rep);
  static MatrixSpaceOperator identity(int rows, int cols, const FieldSpec& field);
  static MatrixSpaceOperator zero(int in_rows, int in_cols, int out_rows, int out_cols,
                                  const FieldSpec& field);
  static MatrixSpaceOperator transpose_op(int n, const FieldSpec& field);
  /// X -> X + X^T on square matrices.
  static MatrixSpaceOperator symmetrizer(int n, const FieldSpec& field);
  /// Operator determined by images of a basis: v_i -> images[i].
  static MatrixSpaceOperator from_basis_images(const std::vector<Matrix>& basis,
                                               const std::vector<Matrix>& images);
  /// Canonical surjection onto the quotient by s, with the quotient's
  /// non-pivot coordinates laid out as a column space F^(d x 1).
  static MatrixSpaceOperator quotient_map(const Subspace& s);

  int in_rows() const { return in_rows_; }
  int in_cols() const { return in_cols_; }
  int out_rows() const { return out_rows_; }
  int out_cols() const { return out_cols_; }
  int in_dim() const { return in_rows_ * in_cols_; }
  int out_dim() const { return out_rows_ * out_cols_; }
  const FieldSpec& field() const { return rep_.field(); }
  const Matrix& rep() const { return rep_; }

  Matrix apply(const Matrix& m) const;
  int rank() const { return rep_.rank(); }
  bool is_invertible() const { return in_dim() == out_dim() && rank() == in_dim(); }

  MatrixSpaceOperator compose_after(const MatrixSpaceOperator& inner) const;  // this o inner

 private:
  int in_rows_, in_cols_, out_rows_, out_cols_;
  Matrix rep_;
};

}  // namespace tensorcert

#endif
