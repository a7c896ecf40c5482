#include "tensorcert/decomposition.hpp"

namespace tensorcert {

void Decomposition::check_terms() const {
  for (const auto& t : terms) {
    if (static_cast<int>(t.factors.size()) != shape.arity())
      throw std::invalid_argument("term arity does not match shape");
    for (int f = 0; f < shape.arity(); ++f) {
      const Matrix& m = t.factors[f];
      if (m.rows() != shape.factors[f].first || m.cols() != shape.factors[f].second ||
          m.field() != shape.field)
        throw std::invalid_argument("term factor does not conform to shape");
    }
  }
}

Tensor evaluate_decomposition(const Decomposition& d) {
  d.check_terms();
  Tensor out(d.shape);
  int m = d.shape.arity();
  std::vector<int> slots(2 * m, 0);
  for (const auto& term : d.terms) {
    // iterate over all slot combinations, skipping zero factor entries
    std::fill(slots.begin(), slots.end(), 0);
    std::vector<int> ext = d.shape.slot_extents();
    while (true) {
      Scalar v = Scalar::one(d.shape.field);
      bool zero = false;
      for (int f = 0; f < m && !zero; ++f) {
        const Scalar& e = term.factors[f].at(slots[2 * f], slots[2 * f + 1]);
        if (e.is_zero())
          zero = true;
        else
          v = v * e;
      }
      if (!zero) out.at(slots) = out.at(slots) + v;
      int s = 2 * m - 1;
      while (s >= 0 && ++slots[s] == ext[s]) slots[s--] = 0;
      if (s < 0) break;
    }
  }
  return out;
}

Decomposition kronecker_compose(const Decomposition& d1, const Decomposition& d2) {
  if (d1.shape.arity() != d2.shape.arity() || d1.shape.field != d2.shape.field)
    throw std::invalid_argument("arity/field mismatch in kronecker composition");
  Decomposition out;
  out.shape.field = d1.shape.field;
  for (int f = 0; f < d1.shape.arity(); ++f)
    out.shape.factors.push_back({d1.shape.factors[f].first * d2.shape.factors[f].first,
                                 d1.shape.factors[f].second * d2.shape.factors[f].second});
  for (const auto& t1 : d1.terms)
    for (const auto& t2 : d2.terms) {
      RankOneTerm t;
      for (int f = 0; f < d1.shape.arity(); ++f)
        t.factors.push_back(t1.factors[f].kron(t2.factors[f]));
      out.terms.push_back(std::move(t));
    }
  return out;
}

bool cyclic_dims(const TensorShape& shape, std::vector<int>* dims) {
  int m = shape.arity();
  if (m < 2) return false;
  for (int f = 0; f < m; ++f)
    if (shape.factors[f].second != shape.factors[(f + 1) % m].first) return false;
  if (dims) {
    dims->clear();
    for (int f = 0; f < m; ++f) dims->push_back(shape.factors[f].first);
  }
  return true;
}

namespace {

int check_kappa(const Decomposition& d) {
  std::vector<int> dims;
  if (!cyclic_dims(d.shape, &dims))
    throw std::invalid_argument("decomposition shape is not a cyclic matrix-space chain");
  int n = dims[0];
  for (int x : dims)
    if (x != n) throw std::invalid_argument("kappa operations need equal dims on every factor");
  if (evaluate_decomposition(d) != cyclic_tensor(dims, d.shape.field))
    throw std::invalid_argument("decomposition does not evaluate to the cyclic tensor");
  return n;
}

}  // namespace

OmegaCoefficients omega_span_coefficients(const Decomposition& d) {
  int n = check_kappa(d);
  OmegaCoefficients out;
  out.n = n;
  out.term_count = d.rank();
  out.coeff.reserve(static_cast<size_t>(n) * n * d.rank());
  for (int i = 0; i < n; ++i)
    for (int ip = 0; ip < n; ++ip)
      for (const auto& term : d.terms) out.coeff.push_back(term.factors.back().at(ip, i));
  return out;
}

Decomposition lift_kappa(const Decomposition& d) {
  int n = check_kappa(d);
  int m = d.shape.arity();
  Decomposition out;
  out.shape.field = d.shape.field;
  out.shape.factors.assign(m + 1, {n, n});
  for (const auto& term : d.terms) {
    const Matrix& last = term.factors.back();
    for (int i = 0; i < n; ++i) {
      bool col_zero = true;
      for (int r = 0; r < n && col_zero; ++r) col_zero = last.at(r, i).is_zero();
      if (col_zero) continue;
      for (int ip = 0; ip < n; ++ip) {
        RankOneTerm t;
        t.factors.assign(term.factors.begin(), term.factors.end() - 1);
        Matrix col_mat(n, n, d.shape.field);
        for (int r = 0; r < n; ++r) col_mat.at(r, ip) = last.at(r, i);
        t.factors.push_back(std::move(col_mat));
        t.factors.push_back(Matrix::unit(n, n, ip, i, d.shape.field));
        out.terms.push_back(std::move(t));
      }
    }
  }
  if (evaluate_decomposition(out) != cyclic_tensor(std::vector<int>(m + 1, n), d.shape.field))
    throw std::logic_error("lift did not evaluate to the larger cyclic tensor");
  return out;
}

Decomposition contract_kappa(const Decomposition& d) {
  int n = check_kappa(d);
  int m = d.shape.arity();
  if (m < 3) throw std::invalid_argument("contraction needs at least three factors");
  Decomposition out;
  out.shape.field = d.shape.field;
  out.shape.factors.assign(m - 1, {n, n});
  for (const auto& term : d.terms) {
    Matrix prod = term.factors[m - 2].transposed() * term.factors[m - 1];
    if (prod.is_zero()) continue;
    RankOneTerm t;
    t.factors.assign(term.factors.begin(), term.factors.end() - 2);
    t.factors.push_back(std::move(prod));
    out.terms.push_back(std::move(t));
  }
  if (evaluate_decomposition(out) != cyclic_tensor(std::vector<int>(m - 1, n), d.shape.field))
    throw std::logic_error("contraction did not evaluate to the smaller cyclic tensor");
  return out;
}

}  // namespace tensorcert
