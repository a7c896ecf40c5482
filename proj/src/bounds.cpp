#include "tensorcert/bounds.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <numeric>
#include <set>

#include "tensorcert/rng.hpp"

namespace tensorcert {

bool SupportSet::contains(int rho) const {
  return std::binary_search(indices.begin(), indices.end(), rho);
}

namespace {

std::vector<int> require_cyclic(const TensorShape& shape) {
  std::vector<int> dims;
  if (!cyclic_dims(shape, &dims))
    throw std::invalid_argument("shape is not a cyclic matrix-space chain");
  return dims;
}

}  // namespace

BoundReport inner_rank_sum(const Decomposition& d, int factor_one_based,
                           const std::optional<MatrixSpaceOperator>& L) {
  d.check_terms();
  std::vector<int> dims = require_cyclic(d.shape);
  int m = d.shape.arity();
  if (factor_one_based < 1 || factor_one_based > m)
    throw std::invalid_argument("factor index out of range");
  int f = factor_one_based - 1;
  auto [fr, fc] = d.shape.factors[f];
  MatrixSpaceOperator op = L ? *L : MatrixSpaceOperator::identity(fr, fc, d.shape.field);
  if (op.in_rows() != fr || op.in_cols() != fc || op.field() != d.shape.field)
    throw std::invalid_argument("operator does not act on the chosen factor");

  // factor f spans dims[f] x dims[f+1]; the left side collects every other dim
  long long multiplier = 1;
  for (int j = 0; j < m; ++j)
    if (j != f && j != (f + 1) % m) multiplier *= dims[j];

  BoundReport rep;
  rep.bound_lhs = multiplier * op.rank();
  rep.per_term_ranks.reserve(d.terms.size());
  for (const auto& term : d.terms) {
    int r = op.apply(term.factors[f]).rank();
    rep.per_term_ranks.push_back(r);
    rep.rank_sum += r;
  }
  rep.support.indices.resize(d.terms.size());
  std::iota(rep.support.indices.begin(), rep.support.indices.end(), 1);
  rep.holds = rep.bound_lhs <= rep.rank_sum;
  rep.equality = rep.bound_lhs == rep.rank_sum;
  rep.description = "inner-rank sum over factor " + std::to_string(factor_one_based);
  return rep;
}

MatrixSpaceOperator construct_rank_one_operator(const std::vector<Matrix>& vs) {
  if (vs.empty()) throw std::invalid_argument("empty family");
  int n = vs[0].rows();
  const FieldSpec& field = vs[0].field();
  if (vs[0].cols() != n) throw std::invalid_argument("family must consist of square matrices");
  for (const auto& v : vs) {
    if (v.rows() != n || v.cols() != n || v.field() != field)
      throw std::invalid_argument("family members live in different spaces");
    if (v.is_zero()) throw std::invalid_argument("zero vector present in family");
  }
  int nn = n * n;
  if (static_cast<int>(vs.size()) > nn + 1)
    throw std::invalid_argument("family has more than n^2+1 elements");
  Subspace spanned = Subspace::span(n, n, field, vs);
  if (spanned.dim() != nn) throw std::invalid_argument("family does not span the matrix space");

  // pick a greedy independent subset; with n^2 or n^2+1 spanning vectors at
  // most one element is skipped
  std::vector<int> basis_idx;
  int skipped = -1;
  {
    std::vector<Matrix> acc;
    for (int i = 0; i < static_cast<int>(vs.size()); ++i) {
      acc.push_back(vs[i]);
      if (Subspace::span(n, n, field, acc).dim() == static_cast<int>(acc.size())) {
        basis_idx.push_back(i);
      } else {
        acc.pop_back();
        skipped = i;
      }
    }
  }

  std::vector<Matrix> basis;
  for (int i : basis_idx) basis.push_back(vs[i]);

  auto unit_images_rowmajor = [&](void) {
    std::vector<Matrix> images;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) images.push_back(Matrix::unit(n, n, i, j, field));
    return images;
  };

  if (skipped < 0) {
    // a plain basis: send it to the unit matrices
    return MatrixSpaceOperator::from_basis_images(basis, unit_images_rowmajor());
  }

  // express the skipped vector over the basis and rescale so that it becomes
  // a plain sum of a prefix
  Matrix coords(nn, nn + 1, field);
  for (int k = 0; k < nn; ++k) {
    std::vector<Scalar> v = basis[k].vectorized();
    for (int i = 0; i < nn; ++i) coords.at(i, k) = v[i];
  }
  {
    std::vector<Scalar> v = vs[skipped].vectorized();
    for (int i = 0; i < nn; ++i) coords.at(i, nn) = v[i];
  }
  std::vector<std::vector<Scalar>> ker = coords.kernel();
  if (ker.size() != 1) throw std::logic_error("expected a single dependency");
  std::vector<Scalar> rel = ker[0];
  Scalar last = rel[nn];
  if (last.is_zero()) throw std::logic_error("dependency does not involve the extra vector");
  // v_skipped = sum_k c_k basis_k with c_k = -rel_k / rel_last
  std::vector<Scalar> c(nn, Scalar::zero(field));
  for (int k = 0; k < nn; ++k) c[k] = -(rel[k] / last);

  // reorder: vectors with nonzero coefficient first, rescaled by it
  std::vector<Matrix> w;
  int t = 0;
  for (int k = 0; k < nn; ++k)
    if (!c[k].is_zero()) {
      w.push_back(basis[k].scaled(c[k]));
      ++t;
    }
  for (int k = 0; k < nn; ++k)
    if (c[k].is_zero()) w.push_back(basis[k]);
  if (t == 0) throw std::logic_error("extra vector is zero");

  int mrows = (t + n - 1) / n;  // rows of ones in the image of the sum
  int q = t - (mrows - 1) * n;  // vectors landing in the last, partial row
  std::vector<Matrix> images;
  // full rows of unit matrices
  for (int idx = 0; idx < (mrows - 1) * n; ++idx)
    images.push_back(Matrix::unit(n, n, idx / n, idx % n, field));
  // partial row: q-1 units, then the tail block summing the row to ones
  for (int j = 0; j + 1 < q; ++j) images.push_back(Matrix::unit(n, n, mrows - 1, j, field));
  {
    Matrix tail(n, n, field);
    for (int cidx = q - 1; cidx < n; ++cidx) tail.at(mrows - 1, cidx) = Scalar::one(field);
    images.push_back(std::move(tail));
  }
  // completion: the unused directions of the partial row, then whole rows
  for (int cidx = q - 1; cidx + 1 < n; ++cidx)
    images.push_back(Matrix::unit(n, n, mrows - 1, cidx, field));
  for (int r = mrows; r < n; ++r)
    for (int cidx = 0; cidx < n; ++cidx) images.push_back(Matrix::unit(n, n, r, cidx, field));

  return MatrixSpaceOperator::from_basis_images(w, images);
}

LowerBoundSchedule certified_lower_bound(long long n) {
  if (n < 2) throw std::invalid_argument("bound needs n >= 2");
  LowerBoundSchedule s;
  s.rank_one_slots = n * n + 1;
  s.rank_n_slots = n * n - n;
  s.bound = 2 * n * n - n + 1;
  return s;
}

SupportSet annihilation_support(const Decomposition& d, const Subspace& Z, const Subspace& H) {
  d.check_terms();
  if (d.shape.arity() < 2) throw std::invalid_argument("need at least two factors");
  auto [a1, a2] = d.shape.factors[0];
  auto [b1, b2] = d.shape.factors[1];
  if (Z.ambient_rows() != a1 || Z.ambient_cols() != a2 || Z.field() != d.shape.field ||
      H.ambient_rows() != b1 || H.ambient_cols() != b2 || H.field() != d.shape.field)
    throw std::invalid_argument("subspace ambient mismatch");
  SupportSet out;
  std::vector<Matrix> zb = Z.basis_matrices(), hb = H.basis_matrices();
  for (int rho = 0; rho < d.rank(); ++rho) {
    auto hits = [&](const std::vector<Matrix>& basis, const Matrix& v) {
      for (const auto& b : basis)
        if (!b.dot(v).is_zero()) return true;
      return false;
    };
    if (hits(zb, d.terms[rho].factors[0]) && hits(hb, d.terms[rho].factors[1]))
      out.indices.push_back(rho + 1);
  }
  return out;
}

int span_product_dim(const Subspace& Z, const Subspace& H, const std::vector<Matrix>* f,
                     const std::vector<Matrix>* g) {
  if (Z.ambient_cols() != H.ambient_rows() || Z.field() != H.field())
    throw std::invalid_argument("shapes do not chain in span_product_dim");
  int n1 = Z.ambient_rows(), n2 = Z.ambient_cols(), n3 = H.ambient_cols();
  if (f && static_cast<int>(f->size()) != n1 * n2)
    throw std::invalid_argument("family f needs one matrix per (i,j)");
  if (g && static_cast<int>(g->size()) != n2 * n3)
    throw std::invalid_argument("family g needs one matrix per (j,k)");
  std::vector<Matrix> zb = Z.basis_matrices(), hb = H.basis_matrices();
  if (zb.empty() || hb.empty()) return 0;
  std::vector<Matrix> products;
  for (const auto& z : zb)
    for (const auto& h : hb) {
      if (!f && !g) {
        products.push_back(z * h);
        continue;
      }
      Matrix p(n1, n3, Z.field());
      for (int i = 0; i < n1; ++i)
        for (int k = 0; k < n3; ++k) {
          Scalar acc = Scalar::zero(Z.field());
          for (int j = 0; j < n2; ++j) {
            Scalar zf = f ? z.dot((*f)[i * n2 + j]) : z.at(i, j);
            Scalar hg = g ? h.dot((*g)[j * n3 + k]) : h.at(j, k);
            acc = acc + zf * hg;
          }
          p.at(i, k) = acc;
        }
      products.push_back(std::move(p));
    }
  return Subspace::span(n1, n3, Z.field(), products).dim();
}

int quotient_span_dim(const Subspace& A, const Subspace& B) {
  if (A.ambient_cols() != B.ambient_rows() || A.field() != B.field())
    throw std::invalid_argument("ambients do not chain in quotient_span_dim");
  int n1 = A.ambient_rows(), n2 = A.ambient_cols(), n3 = B.ambient_cols();
  int da = A.ambient_dim() - A.dim();
  int db = B.ambient_dim() - B.dim();
  if (da == 0 || db == 0) return 0;
  const FieldSpec& field = A.field();
  Matrix rows(n1 * n3, da * db, field);
  for (int i = 0; i < n1; ++i)
    for (int k = 0; k < n3; ++k) {
      for (int j = 0; j < n2; ++j) {
        std::vector<Scalar> qa = A.quotient_coordinates(Matrix::unit(n1, n2, i, j, field));
        std::vector<Scalar> qb = B.quotient_coordinates(Matrix::unit(n2, n3, j, k, field));
        for (int x = 0; x < da; ++x) {
          if (qa[x].is_zero()) continue;
          for (int y = 0; y < db; ++y) {
            if (qb[y].is_zero()) continue;
            Scalar& cell = rows.at(i * n3 + k, x * db + y);
            cell = cell + qa[x] * qb[y];
          }
        }
      }
    }
  return rows.rank();
}

PsiInstance build_psi_zh(const Subspace& Z, const Subspace& H) {
  if (Z.ambient_cols() != H.ambient_rows() || Z.field() != H.field())
    throw std::invalid_argument("ambients do not chain in build_psi_zh");
  int n1 = Z.ambient_rows(), n3 = H.ambient_cols();
  int mprime = Z.dim(), nprime = H.dim();
  PsiInstance psi;
  psi.src_dim = mprime * n3;
  psi.dst_dim = nprime * n1;
  psi.provenance = "psi_zh";
  psi.matrix = Matrix(std::max(1, psi.dst_dim), std::max(1, psi.src_dim), Z.field());
  std::vector<Matrix> zb = Z.basis_matrices(), hb = H.basis_matrices();
  for (int a = 0; a < mprime; ++a)
    for (int b = 0; b < nprime; ++b) {
      Matrix prod = zb[a] * hb[b];
      for (int i = 0; i < n1; ++i)
        for (int k = 0; k < n3; ++k) psi.matrix.at(b * n1 + i, a * n3 + k) = prod.at(i, k);
    }
  return psi;
}

bool psi_kernel_trivial(const PsiInstance& psi) { return psi.matrix.rank() == psi.src_dim; }

PsiInstance build_psi_general(const Tensor& t, const MatrixSpaceOperator& M,
                              const MatrixSpaceOperator& N, const MatrixSpaceOperator& Lsplit) {
  if (t.arity() != 3) throw std::invalid_argument("psi needs a 3-factor tensor");
  auto [a1, a2] = t.shape().factors[0];
  auto [b1, b2] = t.shape().factors[1];
  auto [c1, c2] = t.shape().factors[2];
  if (M.in_rows() != a1 || M.in_cols() != a2 || N.in_rows() != b1 || N.in_cols() != b2 ||
      Lsplit.in_rows() != c1 || Lsplit.in_cols() != c2)
    throw std::invalid_argument("operator shapes do not chain with the tensor");
  int m3 = Lsplit.out_rows(), m1 = Lsplit.out_cols();
  int dimM = M.out_dim(), dimN = N.out_dim();
  PsiInstance psi;
  psi.src_dim = dimM * m3;
  psi.dst_dim = dimN * m1;
  psi.provenance = "psi_general";
  psi.matrix = Matrix(std::max(1, psi.dst_dim), std::max(1, psi.src_dim), t.field());
  // cache unit images
  auto images = [](const MatrixSpaceOperator& op) {
    std::vector<std::vector<Scalar>> out;
    for (int i = 0; i < op.in_rows(); ++i)
      for (int j = 0; j < op.in_cols(); ++j)
        out.push_back(
            op.apply(Matrix::unit(op.in_rows(), op.in_cols(), i, j, op.field())).vectorized());
    return out;
  };
  std::vector<std::vector<Scalar>> mi = images(M), ni = images(N), li = images(Lsplit);
  const auto& entries = t.entries();
  for (size_t off = 0; off < entries.size(); ++off) {
    if (entries[off].is_zero()) continue;
    std::vector<int> slots = t.slots_of(off);
    const auto& mimg = mi[static_cast<size_t>(slots[0]) * a2 + slots[1]];
    const auto& nimg = ni[static_cast<size_t>(slots[2]) * b2 + slots[3]];
    const auto& limg = li[static_cast<size_t>(slots[4]) * c2 + slots[5]];
    for (int a = 0; a < dimM; ++a) {
      if (mimg[a].is_zero()) continue;
      Scalar va = entries[off] * mimg[a];
      for (int b = 0; b < dimN; ++b) {
        if (nimg[b].is_zero()) continue;
        Scalar vab = va * nimg[b];
        for (int c = 0; c < m3; ++c)
          for (int i = 0; i < m1; ++i) {
            const Scalar& lv = limg[static_cast<size_t>(c) * m1 + i];
            if (lv.is_zero()) continue;
            Scalar& cell = psi.matrix.at(b * m1 + i, a * m3 + c);
            cell = cell + vab * lv;
          }
      }
    }
  }
  return psi;
}

BoundReport psi_support_bound(const Decomposition& d, const Subspace& Z, const Subspace& H,
                              const std::optional<MatrixSpaceOperator>& L) {
  d.check_terms();
  SupportSet supp = annihilation_support(d, Z, H);
  auto [fr, fc] = d.shape.factors.back();
  MatrixSpaceOperator op = L ? *L : MatrixSpaceOperator::identity(fr, fc, d.shape.field);
  BoundReport rep;
  rep.support = supp;
  rep.bound_lhs = build_psi_zh(Z, H).rank();
  for (int rho = 1; rho <= d.rank(); ++rho) {
    int r = supp.contains(rho) ? op.apply(d.terms[rho - 1].factors.back()).rank() : 0;
    rep.per_term_ranks.push_back(r);
    if (supp.contains(rho)) rep.rank_sum += r;
  }
  rep.holds = rep.bound_lhs <= rep.rank_sum;
  rep.equality = rep.bound_lhs == rep.rank_sum;
  rep.description = "rank(Psi_{Z,H}) <= support-restricted inner-rank sum";
  return rep;
}

BoundReport annihilation_bound(const Decomposition& d, const Subspace& Z, const Subspace& H) {
  SupportSet supp = annihilation_support(d, Z, H);
  BoundReport rep;
  rep.support = supp;
  rep.bound_lhs = span_product_dim(Z, H);
  for (int rho = 1; rho <= d.rank(); ++rho)
    rep.per_term_ranks.push_back(supp.contains(rho) ? 1 : 0);
  rep.rank_sum = supp.size();
  rep.holds = rep.bound_lhs <= rep.rank_sum;
  rep.equality = rep.bound_lhs == rep.rank_sum;
  rep.description = "dim Span(ZH) <= |supp(ZH)|";
  return rep;
}

BoundReport general_psi_bound(const Decomposition& d, const MatrixSpaceOperator& M,
                              const MatrixSpaceOperator& N, const MatrixSpaceOperator& Lsplit) {
  d.check_terms();
  Tensor t = evaluate_decomposition(d);
  PsiInstance psi = build_psi_general(t, M, N, Lsplit);
  BoundReport rep;
  for (int rho = 0; rho < d.rank(); ++rho) {
    bool in = !M.apply(d.terms[rho].factors[0]).is_zero() &&
              !N.apply(d.terms[rho].factors[1]).is_zero();
    if (in) rep.support.indices.push_back(rho + 1);
    int r = in ? Lsplit.apply(d.terms[rho].factors[2]).rank() : 0;
    rep.per_term_ranks.push_back(r);
    if (in) rep.rank_sum += r;
  }
  rep.bound_lhs = psi.rank();
  rep.holds = rep.bound_lhs <= rep.rank_sum;
  rep.equality = rep.bound_lhs == rep.rank_sum;
  rep.description = "rank(Psi) <= support-restricted inner-rank sum (general maps)";
  return rep;
}

PsiInstance trivial_tensoring(const PsiInstance& psi, int d) {
  if (d < 1) throw std::invalid_argument("tensoring degree must be >= 1");
  PsiInstance out;
  out.src_dim = psi.src_dim * d;
  out.dst_dim = psi.dst_dim * d;
  out.provenance = psi.provenance + " x I_" + std::to_string(d);
  out.matrix = psi.matrix.kron(Matrix::identity(d, psi.matrix.field()));
  return out;
}

PsiInstance tensor_instances(const PsiInstance& a, const PsiInstance& b) {
  PsiInstance out;
  out.src_dim = a.src_dim * b.src_dim;
  out.dst_dim = a.dst_dim * b.dst_dim;
  out.provenance = a.provenance + " x " + b.provenance;
  out.matrix = a.matrix.kron(b.matrix);
  return out;
}

long long overlap(const std::vector<Matrix>& vs, const Subspace& U) {
  if (vs.empty()) throw std::invalid_argument("empty family");
  if (!U.is_proper()) throw std::invalid_argument("overlap is evaluated on proper subspaces only");
  long long count = 0;
  for (const auto& v : vs)
    if (U.contains(v)) ++count;
  return count - U.dim();
}

OverlapReport max_proper_overlap(const std::vector<Matrix>& vs) {
  if (vs.empty()) throw std::invalid_argument("empty family");
  int t = static_cast<int>(vs.size());
  if (t > 24) throw std::invalid_argument("family too large for exhaustive overlap search");
  int ar = vs[0].rows(), ac = vs[0].cols();
  const FieldSpec& field = vs[0].field();
  for (const auto& v : vs)
    if (v.rows() != ar || v.cols() != ac || v.field() != field)
      throw std::invalid_argument("family members live in different spaces");

  // enumerate the lattice of subset spans breadth-first, deduplicated by
  // canonical echelon basis; every maximizer is of this form
  auto signature = [](const Subspace& s) {
    std::string sig;
    for (const auto& row : s.basis_rows())
      for (const auto& x : row) sig += x.str() + ",";
    return sig;
  };
  std::vector<Subspace> frontier{Subspace::zero(ar, ac, field)};
  std::set<std::string> seen{signature(frontier[0])};
  OverlapReport best;
  best.value = -1;
  size_t qi = 0;
  while (qi < frontier.size()) {
    if (frontier.size() > 200000)
      throw std::invalid_argument("family generates too many distinct spans");
    Subspace u = frontier[qi++];
    if (u.is_proper()) {
      long long val = overlap(vs, u);
      if (val > best.value) {
        best.value = val;
        best.witness = u;
      }
    }
    for (const auto& v : vs) {
      if (u.contains(v)) continue;
      std::vector<Matrix> gens = u.basis_matrices();
      gens.push_back(v);
      Subspace bigger = Subspace::span(ar, ac, field, gens);
      std::string sig = signature(bigger);
      if (seen.insert(sig).second) frontier.push_back(bigger);
    }
  }
  return best;
}

ComboReport complete_to_invertible(const std::vector<Matrix>& vs, int prefix_len,
                                   std::uint64_t seed, long long budget) {
  if (vs.empty()) throw std::invalid_argument("empty family");
  int n = vs[0].rows();
  const FieldSpec& field = vs[0].field();
  if (vs[0].cols() != n) throw std::invalid_argument("square matrices required");
  int t = static_cast<int>(vs.size());
  if (prefix_len < 1 || prefix_len > t) throw std::invalid_argument("bad prefix length");

  ComboReport rep;
  rep.seed = seed;
  rep.prefix_len = prefix_len;
  Matrix M(n, n, field);
  for (int i = 0; i < prefix_len; ++i) M = M + vs[i];
  rep.s = M.rank();

  if (rep.s == n) {
    rep.found = true;
    rep.coefficients = {Scalar::one(field)};
    rep.combination = M;
    return rep;
  }

  int max_extra = n - rep.s;
  std::vector<int> pool;
  for (int i = prefix_len; i < t; ++i) pool.push_back(i);
  Rng rng(seed);

  auto try_coeffs = [&](const std::vector<int>& subset, const std::vector<Scalar>& coeffs) {
    Matrix cand = M.scaled(coeffs[0]);
    for (size_t j = 0; j < subset.size(); ++j) cand = cand + vs[subset[j]].scaled(coeffs[j + 1]);
    if (cand.rank() == n) {
      rep.found = true;
      rep.coefficients = coeffs;
      rep.extra_indices.clear();
      for (int idx : subset) rep.extra_indices.push_back(idx + 1);
      rep.combination = cand;
      return true;
    }
    return false;
  };

  for (int k = 1; k <= max_extra && !rep.found; ++k) {
    if (k > static_cast<int>(pool.size())) break;
    std::vector<int> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (!rep.found) {
      std::vector<int> subset;
      for (int x : pick) subset.push_back(pool[x]);
      bool exhaustive = false;
      if (field.is_prime()) {
        Int total = 1;
        for (int e = 0; e <= k && total <= 1000000; ++e) total *= field.modulus();
        exhaustive = total <= 1000000;
      }
      if (exhaustive) {
        long long p = field.modulus().convert_to<long long>();
        std::vector<long long> tuple(k + 1, 0);
        while (true) {
          bool all_zero = std::all_of(tuple.begin(), tuple.end(), [](long long x) { return !x; });
          if (!all_zero) {
            std::vector<Scalar> coeffs;
            for (long long x : tuple) coeffs.push_back(Scalar::from_int(x, field));
            if (try_coeffs(subset, coeffs)) break;
          }
          int pos = k;
          while (pos >= 0 && ++tuple[pos] == p) tuple[pos--] = 0;
          if (pos < 0) break;
        }
      } else {
        for (long long trial = 0; trial < budget && !rep.found; ++trial) {
          std::vector<Scalar> coeffs;
          for (int j = 0; j <= k; ++j) coeffs.push_back(rng.scalar(field));
          if (coeffs[0].is_zero()) coeffs[0] = Scalar::one(field);
          try_coeffs(subset, coeffs);
        }
      }
      if (rep.found) break;
      // next k-subset in lexicographic order
      int i = k - 1;
      while (i >= 0 && pick[i] == static_cast<int>(pool.size()) - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  rep.inconclusive = !rep.found;
  return rep;
}

std::optional<TameWitness> tame_search(const std::vector<Matrix>& zeta_basis,
                                       const std::vector<Matrix>& eta_basis, int n,
                                       int max_threads) {
  const FieldSpec field = zeta_basis.empty() ? FieldSpec::rationals() : zeta_basis[0].field();
  auto check_basis = [&](const std::vector<Matrix>& b, const char* which) {
    if (static_cast<int>(b.size()) != n * n ||
        Subspace::span(n, n, field, b).dim() != n * n)
      throw std::invalid_argument(std::string(which) + " family is not a basis of the matrix space");
  };
  check_basis(zeta_basis, "zeta");
  check_basis(eta_basis, "eta");

  // n-subsets of [n^2] in lexicographic order
  std::vector<std::vector<int>> subsets;
  {
    std::vector<int> cur(n);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
      subsets.push_back(cur);
      int i = n - 1;
      while (i >= 0 && cur[i] == n * n - n + i) --i;
      if (i < 0) break;
      ++cur[i];
      for (int j = i + 1; j < n; ++j) cur[j] = cur[j - 1] + 1;
    }
  }
  long long total = static_cast<long long>(subsets.size()) * subsets.size();

  auto evaluate_candidate = [&](long long idx) -> bool {
    const auto& zi = subsets[idx / subsets.size()];
    const auto& hi = subsets[idx % subsets.size()];
    std::vector<Matrix> zg, hg;
    for (int x : zi) zg.push_back(zeta_basis[x]);
    for (int x : hi) hg.push_back(eta_basis[x]);
    Subspace Z = Subspace::span(n, n, field, zg);
    Subspace H = Subspace::span(n, n, field, hg);
    return build_psi_zh(Z, H).rank() == n * n;
  };

  long long found = -1;
  if (max_threads <= 1) {
    for (long long idx = 0; idx < total; ++idx)
      if (evaluate_candidate(idx)) {
        found = idx;
        break;
      }
  } else {
    const long long chunk = 64;
    for (long long base = 0; base < total && found < 0; base += chunk * max_threads) {
      std::vector<std::future<long long>> waves;
      for (int w = 0; w < max_threads; ++w) {
        long long lo = base + w * chunk;
        if (lo >= total) break;
        long long hi = std::min(total, lo + chunk);
        waves.push_back(std::async(std::launch::async, [&, lo, hi]() -> long long {
          for (long long idx = lo; idx < hi; ++idx)
            if (evaluate_candidate(idx)) return idx;
          return -1;
        }));
      }
      for (auto& fut : waves) {
        long long r = fut.get();
        if (r >= 0 && (found < 0 || r < found)) found = r;
      }
    }
  }
  if (found < 0) return std::nullopt;

  TameWitness w;
  w.zeta_indices = subsets[found / subsets.size()];
  w.eta_indices = subsets[found % subsets.size()];
  std::vector<Matrix> zg, hg;
  for (int x : w.zeta_indices) zg.push_back(zeta_basis[x]);
  for (int x : w.eta_indices) hg.push_back(eta_basis[x]);
  w.Z = Subspace::span(n, n, field, zg);
  w.H = Subspace::span(n, n, field, hg);
  w.psi = build_psi_zh(w.Z, w.H);
  w.candidates_tried = found + 1;
  return w;
}

namespace {

// smallest dependent subset of the family, exhaustively for small families,
// greedy circuits otherwise
DichotomyReport::FamilyResult dependent_subset(const std::vector<Matrix>& family, int cap) {
  DichotomyReport::FamilyResult res;
  int t = static_cast<int>(family.size());
  int ar = family[0].rows(), ac = family[0].cols();
  const FieldSpec& field = family[0].field();
  if (t <= 16) {
    res.exhaustive = true;
    for (int size = 1; size <= std::min(cap, t); ++size) {
      std::vector<int> pick(size);
      std::iota(pick.begin(), pick.end(), 0);
      while (true) {
        std::vector<Matrix> gens;
        for (int x : pick) gens.push_back(family[x]);
        if (Subspace::span(ar, ac, field, gens).dim() < size) {
          res.dependent_found = true;
          for (int x : pick) res.witness.push_back(x + 1);
          return res;
        }
        int i = size - 1;
        while (i >= 0 && pick[i] == t - size + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
    return res;
  }
  // greedy circuit scan
  std::vector<Matrix> prefix;
  std::vector<int> prefix_idx;
  std::vector<int> best;
  for (int j = 0; j < t; ++j) {
    Subspace sp = prefix.empty() ? Subspace::zero(ar, ac, field)
                                 : Subspace::span(ar, ac, field, prefix);
    if (!sp.contains(family[j])) {
      prefix.push_back(family[j]);
      prefix_idx.push_back(j);
      continue;
    }
    // solve for the combination over the prefix
    int d = static_cast<int>(prefix.size());
    Matrix sys(ar * ac, d + 1, field);
    for (int k = 0; k < d; ++k) {
      std::vector<Scalar> v = prefix[k].vectorized();
      for (int i = 0; i < ar * ac; ++i) sys.at(i, k) = v[i];
    }
    std::vector<Scalar> v = family[j].vectorized();
    for (int i = 0; i < ar * ac; ++i) sys.at(i, d) = v[i];
    for (const auto& ker : sys.kernel()) {
      if (ker[d].is_zero()) continue;
      std::vector<int> circuit;
      for (int k = 0; k < d; ++k)
        if (!ker[k].is_zero()) circuit.push_back(prefix_idx[k] + 1);
      circuit.push_back(j + 1);
      std::sort(circuit.begin(), circuit.end());
      if (best.empty() || circuit.size() < best.size()) best = circuit;
      break;
    }
  }
  if (!best.empty() && static_cast<int>(best.size()) <= cap) {
    res.dependent_found = true;
    res.witness = best;
  }
  return res;
}

}  // namespace

DichotomyReport dichotomy_check(const Decomposition& d) {
  std::vector<int> dims = require_cyclic(d.shape);
  if (d.shape.arity() != 3) throw std::invalid_argument("dichotomy check applies to 3-factor decompositions");
  int n = dims[0];
  for (int x : dims)
    if (x != n) throw std::invalid_argument("dichotomy check needs square shape");
  if (evaluate_decomposition(d) != cyclic_tensor(dims, d.shape.field))
    throw std::invalid_argument("decomposition does not evaluate to the cyclic tensor");
  DichotomyReport rep;
  rep.r = d.rank();
  rep.threshold = 3LL * n * n - 2 * n;
  rep.count_clause = rep.r >= rep.threshold;
  int cap = std::min(rep.r, n * n);
  for (int f = 0; f < 3; ++f) {
    std::vector<Matrix> family;
    for (const auto& term : d.terms) family.push_back(term.factors[f]);
    rep.families.push_back(dependent_subset(family, cap));
  }
  return rep;
}

MaxRankReport max_rank_search(const QuotientQuestion& q, int budget, std::uint64_t seed) {
  if (q.tensor.arity() != 3) throw std::invalid_argument("quotient questions use 3-factor tensors");
  auto [a1, a2] = q.tensor.shape().factors[0];
  auto [b1, b2] = q.tensor.shape().factors[1];
  auto [c1, c2] = q.tensor.shape().factors[2];
  const FieldSpec& field = q.tensor.field();
  MatrixSpaceOperator Lsplit =
      q.Lsplit ? *q.Lsplit
               : MatrixSpaceOperator(c1, c2, c1, c2, Matrix::identity(c1 * c2, field));
  MatrixSpaceOperator qa = MatrixSpaceOperator::quotient_map(q.A);
  MatrixSpaceOperator qb = MatrixSpaceOperator::quotient_map(q.B);

  MaxRankReport rep;
  rep.seed = seed;
  {
    long long n1 = a1, n2 = a2, n3 = b2;
    rep.optimistic =
        n1 * n2 * n3 - std::min(static_cast<long long>(n3) * q.A.dim(),
                                static_cast<long long>(n2) * q.B.dim());
  }
  Rng rng(seed);
  rep.best = -1;
  for (int cand = 0; cand < std::max(1, budget); ++cand) {
    MatrixSpaceOperator M = qa, N = qb;
    if (cand > 0) {
      M = qa.compose_after(rng.invertible_operator(a1, a2, field));
      N = qb.compose_after(rng.invertible_operator(b1, b2, field));
    }
    int r = build_psi_general(q.tensor, M, N, Lsplit).rank();
    if (r > rep.best) {
      rep.best = r;
      rep.best_candidate = cand;
    }
  }
  return rep;
}

StarsZerosResult stars_zeros_rank(int n1, int n2, int n3,
                                  const std::vector<std::pair<int, int>>& J1,
                                  const std::vector<std::pair<int, int>>& J2,
                                  const FieldSpec& field) {
  auto in = [](const std::vector<std::pair<int, int>>& J, int a, int b) {
    return std::find(J.begin(), J.end(), std::make_pair(a, b)) != J.end();
  };
  StarsZerosResult res;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      for (int k = 0; k < n3; ++k)
        if (!in(J1, i, j) && !in(J2, j, k)) ++res.count;
  std::vector<Matrix> agens, bgens;
  for (auto [i, j] : J1) agens.push_back(Matrix::unit(n1, n2, i, j, field));
  for (auto [j, k] : J2) bgens.push_back(Matrix::unit(n2, n3, j, k, field));
  Subspace A = Subspace::span(n1, n2, field, agens);
  Subspace B = Subspace::span(n2, n3, field, bgens);
  Tensor t = matmul_tensor(n1, n2, n3, field);
  MatrixSpaceOperator Lsplit(n3, n1, n3, n1, Matrix::identity(n3 * n1, field));
  PsiInstance psi = build_psi_general(t, MatrixSpaceOperator::quotient_map(A),
                                      MatrixSpaceOperator::quotient_map(B), Lsplit);
  res.psi_rank = psi.rank();
  if (res.psi_rank != res.count)
    throw std::logic_error("stars-and-zeros count disagrees with the eliminated rank");
  return res;
}

}  // namespace tensorcert
