#include "tensorcert/certify.hpp"

#include <sstream>

namespace tensorcert {

namespace {

std::string slots_str(const Tensor& t, size_t off) {
  std::vector<int> slots = t.slots_of(off);
  std::ostringstream os;
  os << "(";
  for (size_t f = 0; f * 2 < slots.size(); ++f)
    os << (f ? "," : "") << "(" << slots[2 * f] + 1 << "," << slots[2 * f + 1] + 1 << ")";
  os << ")";
  return os.str();
}

}  // namespace

CertificateReport verify_exact(const Decomposition& d, const Tensor& target) {
  if (d.shape != target.shape()) throw std::invalid_argument("shape mismatch in verification");
  CertificateReport rep;
  rep.term_count = d.rank();
  rep.field_name = d.shape.field.name();
  Tensor got = evaluate_decomposition(d);
  for (size_t off = 0; off < got.entries().size(); ++off) {
    if (got.entries()[off] == target.entries()[off]) continue;
    rep.verified = false;
    rep.mismatch_location = "entry " + slots_str(got, off) + ": expected " +
                            target.entries()[off].str() + ", evaluated " +
                            got.entries()[off].str();
    return rep;
  }
  rep.verified = true;
  return rep;
}

Decomposition lift_to_eps(const Decomposition& d, int order) {
  if (d.shape.field.is_eps()) throw std::invalid_argument("decomposition is already over an eps ring");
  FieldSpec ring = FieldSpec::eps(d.shape.field, order);
  Decomposition out;
  out.shape = {d.shape.factors, ring};
  for (const auto& term : d.terms) {
    RankOneTerm t;
    for (const auto& f : term.factors) {
      Matrix m(f.rows(), f.cols(), ring);
      for (int i = 0; i < f.rows(); ++i)
        for (int j = 0; j < f.cols(); ++j)
          m.at(i, j) = Scalar::from_eps_coeffs({f.at(i, j)}, ring);
      t.factors.push_back(std::move(m));
    }
    out.terms.push_back(std::move(t));
  }
  return out;
}

CertificateReport verify_infinitesimal(const Decomposition& d, const Tensor& target, int h) {
  if (!d.shape.field.is_eps())
    throw std::invalid_argument("infinitesimal verification needs an eps-ring decomposition");
  if (h < 0) throw std::invalid_argument("h must be nonnegative");
  int order = d.shape.field.eps_order();
  if (order < h + 2)
    throw std::invalid_argument("eps order " + std::to_string(order) +
                                " too small for h = " + std::to_string(h) +
                                " (needs >= h+2)");
  if (d.shape.field.base() != target.field())
    throw std::invalid_argument("target must live over the base field of the eps ring");
  if (d.shape.factors != target.shape().factors)
    throw std::invalid_argument("shape mismatch in infinitesimal verification");

  CertificateReport rep;
  rep.term_count = d.rank();
  rep.field_name = d.shape.field.name();
  rep.h = h;
  Tensor got = evaluate_decomposition(d);
  for (size_t off = 0; off < got.entries().size(); ++off) {
    const Scalar& e = got.entries()[off];
    for (int k = 0; k < h; ++k) {
      if (e.eps_coeff(k).is_zero()) continue;
      rep.verified = false;
      rep.mismatch_location = "entry " + slots_str(got, off) + ": eps^" + std::to_string(k) +
                              " coefficient is " + e.eps_coeff(k).str() + ", expected 0";
      return rep;
    }
    if (e.eps_coeff(h) != target.entries()[off]) {
      rep.verified = false;
      rep.mismatch_location = "entry " + slots_str(got, off) + ": eps^" + std::to_string(h) +
                              " coefficient is " + e.eps_coeff(h).str() + ", expected " +
                              target.entries()[off].str();
      return rep;
    }
    if (!e.eps_coeff(h + 1).is_zero()) ++rep.remainder_nonzero;
  }
  rep.verified = true;
  return rep;
}

DecompositionStats stats(const Decomposition& d) {
  d.check_terms();
  DecompositionStats out;
  out.term_count = d.rank();
  for (int f = 0; f < d.shape.arity(); ++f) {
    FactorStats fs;
    std::vector<Matrix> family;
    for (const auto& term : d.terms) {
      family.push_back(term.factors[f]);
      int r = term.factors[f].rank();
      fs.per_term_ranks.push_back(r);
      fs.rank_sum += r;
    }
    auto [ar, ac] = d.shape.factors[f];
    fs.span_dim = Subspace::span(ar, ac, d.shape.field, family).dim();
    fs.max_overlap = max_proper_overlap(family).value;
    fs.average_rank = d.rank() ? Rat(fs.rank_sum, d.rank()) : Rat(0);
    out.factors.push_back(std::move(fs));
  }
  return out;
}

}  // namespace tensorcert
