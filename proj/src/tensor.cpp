#include "tensorcert/tensor.hpp"

#include <algorithm>
#include <numeric>

namespace tensorcert {

std::vector<int> TensorShape::slot_extents() const {
  std::vector<int> out;
  for (auto [r, c] : factors) {
    out.push_back(r);
    out.push_back(c);
  }
  return out;
}

long long TensorShape::entry_count() const {
  long long n = 1;
  for (auto [r, c] : factors) n *= static_cast<long long>(r) * c;
  return n;
}

Tensor::Tensor(TensorShape shape) : shape_(std::move(shape)) {
  if (shape_.arity() < 1) throw std::invalid_argument("tensor needs at least one factor");
  for (auto [r, c] : shape_.factors)
    if (r < 1 || c < 1) throw std::invalid_argument("factor dimensions must be positive");
  entries_.assign(static_cast<size_t>(shape_.entry_count()), Scalar::zero(shape_.field));
}

size_t Tensor::offset(const std::vector<int>& slots) const {
  std::vector<int> ext = shape_.slot_extents();
  if (slots.size() != ext.size()) throw std::invalid_argument("wrong slot count");
  size_t off = 0;
  for (size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] < 0 || slots[i] >= ext[i]) throw std::out_of_range("slot index out of range");
    off = off * ext[i] + slots[i];
  }
  return off;
}

std::vector<int> Tensor::slots_of(size_t offset) const {
  std::vector<int> ext = shape_.slot_extents();
  std::vector<int> slots(ext.size());
  for (size_t i = ext.size(); i-- > 0;) {
    slots[i] = static_cast<int>(offset % ext[i]);
    offset /= ext[i];
  }
  return slots;
}

bool Tensor::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Scalar& s) { return s.is_zero(); });
}

Tensor Tensor::operator+(const Tensor& o) const {
  if (shape_ != o.shape_) throw std::invalid_argument("shape mismatch in tensor +");
  Tensor t(shape_);
  for (size_t i = 0; i < entries_.size(); ++i) t.entries_[i] = entries_[i] + o.entries_[i];
  return t;
}

Tensor Tensor::operator-(const Tensor& o) const {
  if (shape_ != o.shape_) throw std::invalid_argument("shape mismatch in tensor -");
  Tensor t(shape_);
  for (size_t i = 0; i < entries_.size(); ++i) t.entries_[i] = entries_[i] - o.entries_[i];
  return t;
}

Tensor Tensor::scaled(const Scalar& c) const {
  Tensor t(shape_);
  for (size_t i = 0; i < entries_.size(); ++i) t.entries_[i] = entries_[i] * c;
  return t;
}

Tensor Tensor::kron(const Tensor& o) const {
  if (arity() != o.arity() || field() != o.field())
    throw std::invalid_argument("arity/field mismatch in tensor kron");
  TensorShape ns;
  ns.field = field();
  for (int f = 0; f < arity(); ++f)
    ns.factors.push_back({shape_.factors[f].first * o.shape_.factors[f].first,
                          shape_.factors[f].second * o.shape_.factors[f].second});
  Tensor t(ns);
  std::vector<int> slots(2 * arity());
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].is_zero()) continue;
    std::vector<int> si = slots_of(i);
    for (size_t j = 0; j < o.entries_.size(); ++j) {
      if (o.entries_[j].is_zero()) continue;
      std::vector<int> sj = o.slots_of(j);
      for (int s = 0; s < 2 * arity(); ++s) {
        int inner = s % 2 == 0 ? o.shape_.factors[s / 2].first : o.shape_.factors[s / 2].second;
        slots[s] = si[s] * inner + sj[s];
      }
      t.at(slots) = entries_[i] * o.entries_[j];
    }
  }
  return t;
}

Scalar Tensor::dot(const Tensor& o) const {
  if (shape_ != o.shape_) throw std::invalid_argument("shape mismatch in tensor dot");
  Scalar acc = Scalar::zero(field());
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].is_zero() || o.entries_[i].is_zero()) continue;
    acc = acc + entries_[i] * o.entries_[i];
  }
  return acc;
}

FlattenGrouping FlattenGrouping::pi() {
  // slots [r1,c1,r2,c2,r3,c3] -> {L,L,R,R,L,R}
  return {{Side::left, Side::left, Side::right, Side::right, Side::left, Side::right}};
}

FlattenGrouping FlattenGrouping::pairing(int arity) {
  if (arity % 2 != 0) throw std::invalid_argument("pairing grouping needs even arity");
  FlattenGrouping g;
  for (int f = 0; f < arity; ++f) {
    Side s = f % 2 == 0 ? Side::left : Side::right;
    g.slots.push_back(s);
    g.slots.push_back(s);
  }
  return g;
}

FlattenGrouping FlattenGrouping::single_factor(int arity, int idx) {
  FlattenGrouping g;
  for (int f = 0; f < arity; ++f) {
    Side s = f == idx ? Side::left : Side::right;
    g.slots.push_back(s);
    g.slots.push_back(s);
  }
  return g;
}

Tensor matmul_tensor(int n1, int n2, int n3, const FieldSpec& field) {
  return cyclic_tensor({n1, n2, n3}, field);
}

Tensor cyclic_tensor(const std::vector<int>& dims, const FieldSpec& field) {
  int m = static_cast<int>(dims.size());
  if (m < 2) throw std::invalid_argument("cyclic tensor needs at least two factors");
  TensorShape shape;
  shape.field = field;
  for (int f = 0; f < m; ++f) shape.factors.push_back({dims[f], dims[(f + 1) % m]});
  Tensor t(shape);
  std::vector<int> idx(m, 0), slots(2 * m);
  while (true) {
    for (int f = 0; f < m; ++f) {
      slots[2 * f] = idx[f];
      slots[2 * f + 1] = idx[(f + 1) % m];
    }
    t.at(slots) = Scalar::one(field);
    int f = m - 1;
    while (f >= 0 && ++idx[f] == dims[f]) idx[f--] = 0;
    if (f < 0) break;
  }
  return t;
}

Tensor open_cyclic_tensor(int m, int n, int i, int iprime, const FieldSpec& field) {
  if (m < 3) throw std::invalid_argument("open cyclic tensor needs m >= 3");
  if (i < 0 || i >= n || iprime < 0 || iprime >= n)
    throw std::out_of_range("endpoint index out of range");
  TensorShape shape;
  shape.field = field;
  for (int f = 0; f < m - 1; ++f) shape.factors.push_back({n, n});
  Tensor t(shape);
  // chain i, i2, ..., i_{m-1}, iprime over the m-1 factors
  int inner = m - 2;  // free indices i2..i_{m-1}
  std::vector<int> idx(std::max(inner, 1), 0);
  std::vector<int> slots(2 * (m - 1));
  while (true) {
    std::vector<int> chain;
    chain.push_back(i);
    for (int f = 0; f < inner; ++f) chain.push_back(idx[f]);
    chain.push_back(iprime);
    for (int f = 0; f < m - 1; ++f) {
      slots[2 * f] = chain[f];
      slots[2 * f + 1] = chain[f + 1];
    }
    t.at(slots) = t.at(slots) + Scalar::one(field);
    if (inner == 0) break;
    int f = inner - 1;
    while (f >= 0 && ++idx[f] == n) idx[f--] = 0;
    if (f < 0) break;
  }
  return t;
}

Matrix flatten(const Tensor& t, const FlattenGrouping& g) {
  std::vector<int> ext = t.shape().slot_extents();
  if (g.slots.size() != ext.size()) throw std::invalid_argument("grouping has wrong slot count");
  long long lrows = 1, lcols = 1;
  for (size_t s = 0; s < ext.size(); ++s)
    (g.slots[s] == Side::left ? lrows : lcols) *= ext[s];
  if (lrows == 1 || lcols == 1) {
    bool left_empty = std::none_of(g.slots.begin(), g.slots.end(),
                                   [](Side s) { return s == Side::left; });
    bool right_empty = std::none_of(g.slots.begin(), g.slots.end(),
                                    [](Side s) { return s == Side::right; });
    if (left_empty || right_empty) throw std::invalid_argument("grouping side is empty");
  }
  Matrix m(static_cast<int>(lrows), static_cast<int>(lcols), t.field());
  const auto& entries = t.entries();
  for (size_t off = 0; off < entries.size(); ++off) {
    if (entries[off].is_zero()) continue;
    std::vector<int> slots = t.slots_of(off);
    long long r = 0, c = 0;
    for (size_t s = 0; s < slots.size(); ++s) {
      if (g.slots[s] == Side::left)
        r = r * ext[s] + slots[s];
      else
        c = c * ext[s] + slots[s];
    }
    m.at(static_cast<int>(r), static_cast<int>(c)) = entries[off];
  }
  return m;
}

Tensor apply_hom_tuple(const Tensor& t, const std::vector<MatrixSpaceOperator>& maps) {
  if (static_cast<int>(maps.size()) != t.arity())
    throw std::invalid_argument("need one operator per factor");
  TensorShape ns;
  ns.field = t.field();
  for (int f = 0; f < t.arity(); ++f) {
    if (maps[f].in_rows() != t.shape().factors[f].first ||
        maps[f].in_cols() != t.shape().factors[f].second || maps[f].field() != t.field())
      throw std::invalid_argument("operator does not match factor shape");
    ns.factors.push_back({maps[f].out_rows(), maps[f].out_cols()});
  }
  Tensor out(ns);
  // apply factor by factor; cache images of unit matrices
  const auto& entries = t.entries();
  std::vector<std::vector<std::vector<Scalar>>> unit_images(t.arity());
  for (int f = 0; f < t.arity(); ++f) {
    auto [r, c] = t.shape().factors[f];
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        unit_images[f].push_back(maps[f].apply(Matrix::unit(r, c, i, j, t.field())).vectorized());
  }
  std::vector<int> oext = ns.slot_extents();
  for (size_t off = 0; off < entries.size(); ++off) {
    if (entries[off].is_zero()) continue;
    std::vector<int> slots = t.slots_of(off);
    // accumulate the outer product of the factor images
    std::vector<const std::vector<Scalar>*> imgs(t.arity());
    for (int f = 0; f < t.arity(); ++f) {
      int c = t.shape().factors[f].second;
      imgs[f] = &unit_images[f][static_cast<size_t>(slots[2 * f]) * c + slots[2 * f + 1]];
    }
    // iterate over all output coordinates of the rank-1 image
    std::vector<int> oidx(t.arity(), 0);
    std::vector<int> oslots(2 * t.arity());
    while (true) {
      Scalar v = entries[off];
      bool zero = false;
      for (int f = 0; f < t.arity() && !zero; ++f) {
        const Scalar& iv = (*imgs[f])[oidx[f]];
        if (iv.is_zero()) zero = true;
        else v = v * iv;
      }
      if (!zero) {
        for (int f = 0; f < t.arity(); ++f) {
          int oc = ns.factors[f].second;
          oslots[2 * f] = oidx[f] / oc;
          oslots[2 * f + 1] = oidx[f] % oc;
        }
        out.at(oslots) = out.at(oslots) + v;
      }
      int f = t.arity() - 1;
      while (f >= 0) {
        if (++oidx[f] < ns.factors[f].first * ns.factors[f].second) break;
        oidx[f--] = 0;
      }
      if (f < 0) break;
    }
  }
  return out;
}

Tensor symmetrize(const Tensor& t) {
  int n = t.shape().factors[0].first;
  std::vector<MatrixSpaceOperator> maps;
  for (auto [r, c] : t.shape().factors) {
    if (r != c || r != n) throw std::invalid_argument("symmetrize needs equal square factors");
    maps.push_back(MatrixSpaceOperator::symmetrizer(n, t.field()));
  }
  return apply_hom_tuple(t, maps);
}

Tensor contract_pair(const Tensor& t1, const Tensor& t2) {
  if (t1.field() != t2.field()) throw std::invalid_argument("field mismatch in contraction");
  if (t1.shape().factors.back() != t2.shape().factors.front())
    throw std::invalid_argument("contracted factors have different shapes");
  if (t1.arity() + t2.arity() < 3)
    throw std::invalid_argument("contraction result would have no factors");
  TensorShape ns;
  ns.field = t1.field();
  for (int f = 0; f + 1 < t1.arity(); ++f) ns.factors.push_back(t1.shape().factors[f]);
  for (int f = 1; f < t2.arity(); ++f) ns.factors.push_back(t2.shape().factors[f]);
  Tensor out(ns);
  const auto& e1 = t1.entries();
  const auto& e2 = t2.entries();
  for (size_t o1 = 0; o1 < e1.size(); ++o1) {
    if (e1[o1].is_zero()) continue;
    std::vector<int> s1 = t1.slots_of(o1);
    for (size_t o2 = 0; o2 < e2.size(); ++o2) {
      if (e2[o2].is_zero()) continue;
      std::vector<int> s2 = t2.slots_of(o2);
      if (s1[2 * t1.arity() - 2] != s2[0] || s1[2 * t1.arity() - 1] != s2[1]) continue;
      std::vector<int> os(s1.begin(), s1.end() - 2);
      os.insert(os.end(), s2.begin() + 2, s2.end());
      out.at(os) = out.at(os) + e1[o1] * e2[o2];
    }
  }
  return out;
}

Scalar cos_sq(const Tensor& t1, const Tensor& t2) {
  if (!t1.field().is_rational()) throw std::invalid_argument("cos_sq requires the rational field");
  Scalar n1 = t1.norm_sq(), n2 = t2.norm_sq();
  if (n1.is_zero() || n2.is_zero()) throw ArithmeticError("cos_sq of a zero-norm tensor");
  Scalar contr_sq = Scalar::zero(t1.field());
  if (t1.arity() == 1 && t2.arity() == 1) {
    // fully contracted pair: the result is the scalar t1 . t2
    Scalar d = t1.dot(t2);
    contr_sq = d * d;
  } else {
    contr_sq = contract_pair(t1, t2).norm_sq();
  }
  return contr_sq / (n1 * n2);
}

Matrix contraction_form(const Tensor& t, const std::vector<int>& factor_subset) {
  if (!t.field().is_rational())
    throw std::invalid_argument("contraction forms are computed over the rationals");
  std::vector<int> I = factor_subset;
  std::sort(I.begin(), I.end());
  if (I.empty() || I.back() >= t.arity() || I.front() < 0 ||
      std::adjacent_find(I.begin(), I.end()) != I.end())
    throw std::invalid_argument("bad factor subset");
  long long du = 1;
  for (int f : I) du *= static_cast<long long>(t.shape().factors[f].first) *
                       t.shape().factors[f].second;
  // group entries by complement coordinates, accumulate outer products
  std::vector<bool> in_I(t.arity(), false);
  for (int f : I) in_I[f] = true;
  Matrix q(static_cast<int>(du), static_cast<int>(du), t.field());
  const auto& entries = t.entries();
  // map: complement offset -> list of (u index, value)
  std::vector<std::pair<long long, std::pair<long long, size_t>>> items;  // (w, (u, off))
  for (size_t off = 0; off < entries.size(); ++off) {
    if (entries[off].is_zero()) continue;
    std::vector<int> slots = t.slots_of(off);
    long long u = 0, w = 0;
    for (int f = 0; f < t.arity(); ++f) {
      auto [r, c] = t.shape().factors[f];
      long long coord = static_cast<long long>(slots[2 * f]) * c + slots[2 * f + 1];
      if (in_I[f])
        u = u * (static_cast<long long>(r) * c) + coord;
      else
        w = w * (static_cast<long long>(r) * c) + coord;
    }
    items.push_back({w, {u, off}});
  }
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 0; i < items.size();) {
    size_t j = i;
    while (j < items.size() && items[j].first == items[i].first) ++j;
    for (size_t a = i; a < j; ++a)
      for (size_t b = i; b < j; ++b) {
        int ua = static_cast<int>(items[a].second.first);
        int ub = static_cast<int>(items[b].second.first);
        q.at(ua, ub) = q.at(ua, ub) + entries[items[a].second.second] * entries[items[b].second.second];
      }
    i = j;
  }
  return q;
}

bool i_equivalent(const Tensor& t1, const Tensor& t2, const std::vector<int>& factor_subset) {
  if (t1.shape() != t2.shape()) throw std::invalid_argument("shape mismatch in i_equivalent");
  return contraction_form(t1, factor_subset) == contraction_form(t2, factor_subset);
}

WedgeBasis WedgeBasis::make(int p, int d) {
  WedgeBasis w;
  w.p = p;
  w.ambient_dim = d;
  if (p < 0 || p > d) return w;
  std::vector<int> cur(p);
  std::iota(cur.begin(), cur.end(), 0);
  if (p == 0) {
    w.subsets.push_back({});
    return w;
  }
  while (true) {
    w.subsets.push_back(cur);
    int i = p - 1;
    while (i >= 0 && cur[i] == d - p + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < p; ++j) cur[j] = cur[j - 1] + 1;
  }
  return w;
}

int WedgeBasis::index_of(const std::vector<int>& sorted_subset) const {
  auto it = std::lower_bound(subsets.begin(), subsets.end(), sorted_subset);
  if (it == subsets.end() || *it != sorted_subset) throw std::logic_error("subset not in basis");
  return static_cast<int>(it - subsets.begin());
}

Matrix koszul_flatten(const Tensor& t, int p, const Subspace& a_prime) {
  if (t.arity() != 3) throw std::invalid_argument("koszul flattening needs a 3-factor tensor");
  auto [ar, ac] = t.shape().factors[0];
  auto [br, bc] = t.shape().factors[1];
  auto [cr, cc] = t.shape().factors[2];
  if (a_prime.ambient_rows() != ar || a_prime.ambient_cols() != ac ||
      a_prime.field() != t.field())
    throw std::invalid_argument("subspace does not live in the first factor");
  int d = a_prime.dim();
  if (p < 0 || p + 1 > d) throw std::invalid_argument("wedge degree out of range");
  WedgeBasis lo = WedgeBasis::make(p, d), hi = WedgeBasis::make(p + 1, d);
  int dimB = br * bc, dimC = cr * cc;
  Matrix m(static_cast<int>(hi.subsets.size()) * dimC,
           dimB * static_cast<int>(lo.subsets.size()), t.field());
  // projection x -> coordinates of x at the echelon pivots of A'
  const std::vector<int>& piv = a_prime.pivot_columns();
  const auto& entries = t.entries();
  for (size_t off = 0; off < entries.size(); ++off) {
    if (entries[off].is_zero()) continue;
    std::vector<int> slots = t.slots_of(off);
    int a_coord = slots[0] * ac + slots[1];
    int bi = slots[2] * bc + slots[3];
    int ci = slots[4] * cc + slots[5];
    // pi_{A'} of a unit matrix: nonzero only when its coordinate is a pivot
    auto it = std::find(piv.begin(), piv.end(), a_coord);
    if (it == piv.end()) continue;
    int wi = static_cast<int>(it - piv.begin());
    for (size_t si = 0; si < lo.subsets.size(); ++si) {
      const std::vector<int>& S = lo.subsets[si];
      if (std::binary_search(S.begin(), S.end(), wi)) continue;
      std::vector<int> T = S;
      T.insert(std::upper_bound(T.begin(), T.end(), wi), wi);
      int sign_flips = static_cast<int>(std::lower_bound(S.begin(), S.end(), wi) - S.begin());
      Scalar v = entries[off];
      if (sign_flips % 2 != 0) v = -v;
      int row = hi.index_of(T) * dimC + ci;
      int col = bi * static_cast<int>(lo.subsets.size()) + static_cast<int>(si);
      m.at(row, col) = m.at(row, col) + v;
    }
  }
  return m;
}

}  // namespace tensorcert
