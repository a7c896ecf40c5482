#include "tensorcert/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace tensorcert {

Matrix::Matrix(int rows, int cols, const FieldSpec& field)
    : rows_(rows), cols_(cols), field_(field) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("matrix dimensions must be positive");
  entries_.assign(static_cast<size_t>(rows) * cols, Scalar::zero(field));
}

Matrix Matrix::identity(int n, const FieldSpec& field) {
  Matrix m(n, n, field);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(field);
  return m;
}

Matrix Matrix::unit(int rows, int cols, int i, int j, const FieldSpec& field) {
  Matrix m(rows, cols, field);
  m.at(i, j) = Scalar::one(field);
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Scalar>>& rows) {
  if (rows.empty() || rows[0].empty()) throw std::invalid_argument("empty matrix literal");
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()), rows[0][0].field());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw std::invalid_argument("ragged matrix literal");
    for (size_t j = 0; j < rows[i].size(); ++j) {
      if (rows[i][j].field() != m.field_) throw std::invalid_argument("mixed fields in matrix");
      m.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
  }
  return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || field_ != o.field_)
    throw std::invalid_argument("shape/field mismatch in matrix +");
  Matrix m(rows_, cols_, field_);
  for (size_t i = 0; i < entries_.size(); ++i) m.entries_[i] = entries_[i] + o.entries_[i];
  return m;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + (-o); }

Matrix Matrix::operator-() const {
  Matrix m(rows_, cols_, field_);
  for (size_t i = 0; i < entries_.size(); ++i) m.entries_[i] = -entries_[i];
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_ || field_ != o.field_)
    throw std::invalid_argument("shape/field mismatch in matrix *");
  Matrix m(rows_, o.cols_, field_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      if (at(i, k).is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) {
        if (o.at(k, j).is_zero()) continue;
        m.at(i, j) = m.at(i, j) + at(i, k) * o.at(k, j);
      }
    }
  return m;
}

Matrix Matrix::scaled(const Scalar& c) const {
  Matrix m(rows_, cols_, field_);
  for (size_t i = 0; i < entries_.size(); ++i) m.entries_[i] = entries_[i] * c;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix m(cols_, rows_, field_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
  return m;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && entries_ == o.entries_;
}

bool Matrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Scalar& s) { return s.is_zero(); });
}

Scalar Matrix::dot(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || field_ != o.field_)
    throw std::invalid_argument("shape/field mismatch in dot");
  Scalar acc = Scalar::zero(field_);
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].is_zero() || o.entries_[i].is_zero()) continue;
    acc = acc + entries_[i] * o.entries_[i];
  }
  return acc;
}

Matrix Matrix::kron(const Matrix& o) const {
  if (field_ != o.field_) throw std::invalid_argument("field mismatch in kron");
  Matrix m(rows_ * o.rows_, cols_ * o.cols_, field_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      if (at(i, j).is_zero()) continue;
      for (int r = 0; r < o.rows_; ++r)
        for (int c = 0; c < o.cols_; ++c)
          m.at(i * o.rows_ + r, j * o.cols_ + c) = at(i, j) * o.at(r, c);
    }
  return m;
}

Matrix Matrix::from_vector(const std::vector<Scalar>& v, int rows, int cols,
                           const FieldSpec& field) {
  if (static_cast<int>(v.size()) != rows * cols)
    throw std::invalid_argument("vector length does not match shape");
  Matrix m(rows, cols, field);
  m.entries_ = v;
  return m;
}

namespace {

// Bareiss fraction-free elimination on an integer grid, full pivoting,
// zero-skip so that sparse grids cost little.  Returns the rank.
int bareiss_rank(std::vector<std::vector<Int>> a) {
  int rows = static_cast<int>(a.size());
  if (rows == 0) return 0;
  int cols = static_cast<int>(a[0].size());
  Int prev = 1;
  int r = 0;
  for (int step = 0; r < rows && step < cols; ++step) {
    int pr = -1, pc = -1;
    for (int c = 0; c < cols && pr < 0; ++c)
      for (int i = r; i < rows; ++i)
        if (a[i][c] != 0) {
          pr = i;
          pc = c;
          break;
        }
    if (pr < 0) break;
    std::swap(a[r], a[pr]);
    const Int pivot = a[r][pc];
    for (int i = r + 1; i < rows; ++i) {
      const Int lead = a[i][pc];
      if (lead == 0) {
        for (int j = 0; j < cols; ++j)
          if (a[i][j] != 0) a[i][j] = a[i][j] * pivot / prev;
      } else {
        for (int j = 0; j < cols; ++j) {
          Int v = pivot * a[i][j] - lead * a[r][j];
          a[i][j] = v == 0 ? Int(0) : v / prev;
        }
      }
    }
    prev = pivot;
    ++r;
  }
  return r;
}

// straight elimination over F_p on 64-bit residues (p < 2^31)
int residue_rank(std::vector<std::vector<unsigned long long>> a, unsigned long long p) {
  int rows = static_cast<int>(a.size());
  if (rows == 0) return 0;
  int cols = static_cast<int>(a[0].size());
  auto inv = [p](unsigned long long x) {
    unsigned long long r = 1, b = x, e = p - 2;
    while (e) {
      if (e & 1) r = static_cast<unsigned long long>(static_cast<unsigned __int128>(r) * b % p);
      b = static_cast<unsigned long long>(static_cast<unsigned __int128>(b) * b % p);
      e >>= 1;
    }
    return r;
  };
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c]) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[r], a[piv]);
    unsigned long long f = inv(a[r][c]);
    for (int j = c; j < cols; ++j)
      a[r][j] = static_cast<unsigned long long>(static_cast<unsigned __int128>(a[r][j]) * f % p);
    for (int i = r + 1; i < rows; ++i) {
      unsigned long long lead = a[i][c];
      if (!lead) continue;
      for (int j = c; j < cols; ++j) {
        unsigned __int128 sub = static_cast<unsigned __int128>(lead) * a[r][j] % p;
        a[i][j] = (a[i][j] + p - static_cast<unsigned long long>(sub)) % p;
      }
    }
    ++r;
  }
  return r;
}

}  // namespace

int Matrix::rank() const {
  if (field_.is_eps()) {
    // rank of the eps^0 coefficient matrix over the base field
    Matrix base(rows_, cols_, field_.base());
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) base.at(i, j) = at(i, j).eps_coeff(0);
    return base.rank();
  }
  if (field_.is_prime() && field_.modulus() < Int(1) << 31) {
    unsigned long long p = field_.modulus().convert_to<unsigned long long>();
    std::vector<std::vector<unsigned long long>> a(rows_,
                                                   std::vector<unsigned long long>(cols_));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) a[i][j] = at(i, j).residue().convert_to<unsigned long long>();
    return residue_rank(std::move(a), p);
  }
  if (field_.is_prime()) {
    // large modulus: straight elimination with exact field arithmetic
    std::vector<std::vector<Scalar>> rows;
    for (int i = 0; i < rows_; ++i) {
      std::vector<Scalar> row(cols_);
      for (int j = 0; j < cols_; ++j) row[j] = at(i, j);
      rows.push_back(std::move(row));
    }
    int rr = 0;
    for (int c = 0; c < cols_ && rr < rows_; ++c) {
      int piv = -1;
      for (int i = rr; i < rows_; ++i)
        if (!rows[i][c].is_zero()) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      std::swap(rows[rr], rows[piv]);
      Scalar f = rows[rr][c].inverse();
      for (int j = c; j < cols_; ++j) rows[rr][j] = rows[rr][j] * f;
      for (int i = rr + 1; i < rows_; ++i) {
        if (rows[i][c].is_zero()) continue;
        Scalar lead = rows[i][c];
        for (int j = c; j < cols_; ++j) rows[i][j] = rows[i][j] - lead * rows[rr][j];
      }
      ++rr;
    }
    return rr;
  }
  // rationals: clear denominators per row, then fraction-free elimination
  std::vector<std::vector<Int>> a(rows_, std::vector<Int>(cols_));
  for (int i = 0; i < rows_; ++i) {
    Int lcm = 1;
    for (int j = 0; j < cols_; ++j) {
      const Rat& v = at(i, j).rational_value();
      Int den = denominator(v);
      lcm = lcm / gcd(lcm, den) * den;
    }
    for (int j = 0; j < cols_; ++j) {
      const Rat& v = at(i, j).rational_value();
      a[i][j] = numerator(v) * (lcm / denominator(v));
    }
  }
  return bareiss_rank(std::move(a));
}

namespace {

// Gauss-Jordan to RREF over the Scalar field; returns pivot columns.
std::vector<int> rref_inplace(std::vector<std::vector<Scalar>>& rows, int cols) {
  std::vector<int> pivots;
  int r = 0;
  int nrows = static_cast<int>(rows.size());
  for (int c = 0; c < cols && r < nrows; ++c) {
    int piv = -1;
    for (int i = r; i < nrows; ++i)
      if (!rows[i][c].is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    Scalar f = rows[r][c].inverse();
    for (int j = 0; j < cols; ++j) rows[r][j] = rows[r][j] * f;
    for (int i = 0; i < nrows; ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      Scalar lead = rows[i][c];
      for (int j = 0; j < cols; ++j) rows[i][j] = rows[i][j] - lead * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(pivots.size(), std::vector<Scalar>());
  return pivots;
}

}  // namespace

std::vector<std::vector<Scalar>> Matrix::kernel() const {
  if (field_.is_eps()) throw std::logic_error("kernel is not defined over an eps ring");
  std::vector<std::vector<Scalar>> rows;
  for (int i = 0; i < rows_; ++i) {
    std::vector<Scalar> row(cols_);
    for (int j = 0; j < cols_; ++j) row[j] = at(i, j);
    rows.push_back(std::move(row));
  }
  std::vector<int> pivots = rref_inplace(rows, cols_);
  std::vector<bool> is_pivot(cols_, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Scalar>> basis;
  for (int fc = 0; fc < cols_; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<Scalar> v(cols_, Scalar::zero(field_));
    v[fc] = Scalar::one(field_);
    for (size_t ri = 0; ri < pivots.size(); ++ri) v[pivots[ri]] = -rows[ri][fc];
    basis.push_back(std::move(v));
  }
  return basis;
}

Matrix Matrix::inverted() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of a non-square matrix");
  if (field_.is_eps()) throw std::logic_error("inverse is not provided over an eps ring");
  std::vector<std::vector<Scalar>> rows;
  for (int i = 0; i < rows_; ++i) {
    std::vector<Scalar> row(2 * cols_, Scalar::zero(field_));
    for (int j = 0; j < cols_; ++j) row[j] = at(i, j);
    row[cols_ + i] = Scalar::one(field_);
    rows.push_back(std::move(row));
  }
  std::vector<int> pivots = rref_inplace(rows, 2 * cols_);
  if (static_cast<int>(pivots.size()) != rows_ || pivots.back() >= cols_)
    throw ArithmeticError("matrix is singular");
  Matrix inv(rows_, cols_, field_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) inv.at(i, j) = rows[i][cols_ + j];
  return inv;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j).str();
    os << "]";
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------

Subspace Subspace::zero(int rows, int cols, const FieldSpec& field) {
  return Subspace(rows, cols, field);
}

Subspace Subspace::full(int rows, int cols, const FieldSpec& field) {
  Subspace s(rows, cols, field);
  std::vector<std::vector<Scalar>> rws;
  for (int i = 0; i < rows * cols; ++i) {
    std::vector<Scalar> v(rows * cols, Scalar::zero(field));
    v[i] = Scalar::one(field);
    rws.push_back(std::move(v));
  }
  s.reduce(std::move(rws));
  return s;
}

Subspace Subspace::span(int rows, int cols, const FieldSpec& field,
                        const std::vector<Matrix>& generators) {
  Subspace s(rows, cols, field);
  std::vector<std::vector<Scalar>> rws;
  for (const auto& g : generators) {
    if (g.rows() != rows || g.cols() != cols || g.field() != field)
      throw std::invalid_argument("generator does not live in the ambient matrix space");
    rws.push_back(g.vectorized());
  }
  s.reduce(std::move(rws));
  return s;
}

void Subspace::reduce(std::vector<std::vector<Scalar>> rows) {
  if (field_.is_eps())
    throw std::logic_error("subspaces over an eps ring are not supported (not a field)");
  pivots_ = rref_inplace(rows, ambient_dim());
  basis_ = std::move(rows);
}

std::vector<Matrix> Subspace::basis_matrices() const {
  std::vector<Matrix> out;
  for (const auto& row : basis_) out.push_back(Matrix::from_vector(row, arows_, acols_, field_));
  return out;
}

std::vector<Scalar> Subspace::coset_representative(const Matrix& m) const {
  if (m.rows() != arows_ || m.cols() != acols_ || m.field() != field_)
    throw std::invalid_argument("vector does not live in the ambient space");
  std::vector<Scalar> v = m.vectorized();
  for (size_t r = 0; r < basis_.size(); ++r) {
    const Scalar& lead = v[pivots_[r]];
    if (lead.is_zero()) continue;
    Scalar f = lead;
    for (int j = 0; j < ambient_dim(); ++j) v[j] = v[j] - f * basis_[r][j];
  }
  return v;
}

std::vector<int> Subspace::nonpivot_columns() const {
  std::vector<bool> is_pivot(ambient_dim(), false);
  for (int c : pivots_) is_pivot[c] = true;
  std::vector<int> out;
  for (int c = 0; c < ambient_dim(); ++c)
    if (!is_pivot[c]) out.push_back(c);
  return out;
}

std::vector<Scalar> Subspace::quotient_coordinates(const Matrix& m) const {
  std::vector<Scalar> rep = coset_representative(m);
  std::vector<Scalar> out;
  for (int c : nonpivot_columns()) out.push_back(rep[c]);
  return out;
}

bool Subspace::contains(const Matrix& m) const {
  std::vector<Scalar> rep = coset_representative(m);
  return std::all_of(rep.begin(), rep.end(), [](const Scalar& s) { return s.is_zero(); });
}

bool Subspace::operator==(const Subspace& o) const {
  return arows_ == o.arows_ && acols_ == o.acols_ && field_ == o.field_ && basis_ == o.basis_;
}

Subspace Subspace::dot_complement() const {
  if (basis_.empty()) return full(arows_, acols_, field_);
  Matrix m(dim(), ambient_dim(), field_);
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < ambient_dim(); ++j) m.at(i, j) = basis_[i][j];
  std::vector<std::vector<Scalar>> ker = m.kernel();
  Subspace s(arows_, acols_, field_);
  s.reduce(std::move(ker));
  return s;
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  if (a.arows_ != b.arows_ || a.acols_ != b.acols_ || a.field_ != b.field_)
    throw std::invalid_argument("ambient mismatch in subspace sum");
  std::vector<std::vector<Scalar>> rows = a.basis_;
  rows.insert(rows.end(), b.basis_.begin(), b.basis_.end());
  Subspace s(a.arows_, a.acols_, a.field_);
  s.reduce(std::move(rows));
  return s;
}

Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
  if (a.arows_ != b.arows_ || a.acols_ != b.acols_ || a.field_ != b.field_)
    throw std::invalid_argument("ambient mismatch in subspace intersection");
  // x in both spans: solve [A^T | -B^T] on stacked coefficients
  int da = a.dim(), db = b.dim(), n = a.ambient_dim();
  if (da == 0 || db == 0) return Subspace::zero(a.arows_, a.acols_, a.field_);
  Matrix sys(n, da + db, a.field_);
  for (int j = 0; j < da; ++j)
    for (int i = 0; i < n; ++i) sys.at(i, j) = a.basis_[j][i];
  for (int j = 0; j < db; ++j)
    for (int i = 0; i < n; ++i) sys.at(i, da + j) = -b.basis_[j][i];
  std::vector<std::vector<Scalar>> ker = sys.kernel();
  std::vector<std::vector<Scalar>> rows;
  for (const auto& coeff : ker) {
    std::vector<Scalar> v(n, Scalar::zero(a.field_));
    for (int j = 0; j < da; ++j)
      for (int i = 0; i < n; ++i) v[i] = v[i] + coeff[j] * a.basis_[j][i];
    rows.push_back(std::move(v));
  }
  Subspace s(a.arows_, a.acols_, a.field_);
  s.reduce(std::move(rows));
  return s;
}

// ---------------------------------------------------------------------------

MatrixSpaceOperator::MatrixSpaceOperator(int in_rows, int in_cols, int out_rows, int out_cols,
                                         Matrix rep)
    : in_rows_(in_rows), in_cols_(in_cols), out_rows_(out_rows), out_cols_(out_cols),
      rep_(std::move(rep)) {
  if (rep_.rows() != out_rows * out_cols || rep_.cols() != in_rows * in_cols)
    throw std::invalid_argument("operator representation has inconsistent dimensions");
}

MatrixSpaceOperator MatrixSpaceOperator::identity(int rows, int cols, const FieldSpec& field) {
  return MatrixSpaceOperator(rows, cols, rows, cols, Matrix::identity(rows * cols, field));
}

MatrixSpaceOperator MatrixSpaceOperator::zero(int in_rows, int in_cols, int out_rows, int out_cols,
                                              const FieldSpec& field) {
  return MatrixSpaceOperator(in_rows, in_cols, out_rows, out_cols,
                             Matrix(out_rows * out_cols, in_rows * in_cols, field));
}

MatrixSpaceOperator MatrixSpaceOperator::transpose_op(int n, const FieldSpec& field) {
  Matrix rep(n * n, n * n, field);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rep.at(j * n + i, i * n + j) = Scalar::one(field);
  return MatrixSpaceOperator(n, n, n, n, std::move(rep));
}

MatrixSpaceOperator MatrixSpaceOperator::symmetrizer(int n, const FieldSpec& field) {
  Matrix rep(n * n, n * n, field);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      rep.at(i * n + j, i * n + j) = rep.at(i * n + j, i * n + j) + Scalar::one(field);
      rep.at(j * n + i, i * n + j) = rep.at(j * n + i, i * n + j) + Scalar::one(field);
    }
  return MatrixSpaceOperator(n, n, n, n, std::move(rep));
}

MatrixSpaceOperator MatrixSpaceOperator::from_basis_images(const std::vector<Matrix>& basis,
                                                           const std::vector<Matrix>& images) {
  if (basis.empty() || basis.size() != images.size())
    throw std::invalid_argument("basis/image count mismatch");
  int ir = basis[0].rows(), ic = basis[0].cols();
  int orr = images[0].rows(), oc = images[0].cols();
  const FieldSpec& f = basis[0].field();
  if (static_cast<int>(basis.size()) != ir * ic)
    throw std::invalid_argument("not a full basis of the domain");
  Matrix B(ir * ic, ir * ic, f), V(orr * oc, ir * ic, f);
  for (size_t k = 0; k < basis.size(); ++k) {
    std::vector<Scalar> bv = basis[k].vectorized(), iv = images[k].vectorized();
    for (int i = 0; i < ir * ic; ++i) B.at(i, static_cast<int>(k)) = bv[i];
    for (int i = 0; i < orr * oc; ++i) V.at(i, static_cast<int>(k)) = iv[i];
  }
  return MatrixSpaceOperator(ir, ic, orr, oc, V * B.inverted());
}

MatrixSpaceOperator MatrixSpaceOperator::quotient_map(const Subspace& s) {
  std::vector<int> coords = s.nonpivot_columns();
  int d = static_cast<int>(coords.size());
  int ar = s.ambient_rows(), ac = s.ambient_cols();
  if (d == 0) {
    // quotient by the full space: one output coordinate, identically zero
    return zero(ar, ac, 1, 1, s.field());
  }
  Matrix rep(d, ar * ac, s.field());
  for (int i = 0; i < ar; ++i)
    for (int j = 0; j < ac; ++j) {
      std::vector<Scalar> q = s.quotient_coordinates(Matrix::unit(ar, ac, i, j, s.field()));
      for (int k = 0; k < d; ++k) rep.at(k, i * ac + j) = q[k];
    }
  return MatrixSpaceOperator(ar, ac, d, 1, std::move(rep));
}

Matrix MatrixSpaceOperator::apply(const Matrix& m) const {
  if (m.rows() != in_rows_ || m.cols() != in_cols_ || m.field() != field())
    throw std::invalid_argument("operator applied to a matrix of the wrong shape");
  std::vector<Scalar> v = m.vectorized();
  std::vector<Scalar> out(out_dim(), Scalar::zero(field()));
  for (int r = 0; r < out_dim(); ++r)
    for (int c = 0; c < in_dim(); ++c) {
      if (rep_.at(r, c).is_zero() || v[c].is_zero()) continue;
      out[r] = out[r] + rep_.at(r, c) * v[c];
    }
  return Matrix::from_vector(out, out_rows_, out_cols_, field());
}

MatrixSpaceOperator MatrixSpaceOperator::compose_after(const MatrixSpaceOperator& inner) const {
  if (inner.out_rows_ != in_rows_ || inner.out_cols_ != in_cols_)
    throw std::invalid_argument("operator composition shape mismatch");
  return MatrixSpaceOperator(inner.in_rows_, inner.in_cols_, out_rows_, out_cols_,
                             rep_ * inner.rep_);
}

}  // namespace tensorcert
