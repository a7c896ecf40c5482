#include "tensorcert/serialize.hpp"

#include <fstream>

namespace tensorcert {

json field_to_json(const FieldSpec& f) {
  if (f.is_rational()) return "Q";
  if (f.is_prime()) return "F" + f.modulus().str();
  json j;
  j["base"] = field_to_json(f.base());
  j["eps_order"] = f.eps_order();
  return j;
}

FieldSpec field_from_json(const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "Q") return FieldSpec::rationals();
    if (!s.empty() && s[0] == 'F') return FieldSpec::prime(Int(s.substr(1)));
    throw ParseError("unknown field '" + s + "'");
  }
  if (j.is_object() && j.contains("base") && j.contains("eps_order"))
    return FieldSpec::eps(field_from_json(j.at("base")), j.at("eps_order").get<int>());
  throw ParseError("malformed field spec");
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const FieldSpec& field) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    throw ParseError("matrix must be a nonempty nested array");
  int rows = static_cast<int>(j.size());
  int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols, field);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols) throw ParseError("ragged matrix rows");
    for (int c = 0; c < cols; ++c) m.at(i, c) = parse_scalar(j[i][c].get<std::string>(), field);
  }
  return m;
}

json subspace_to_json(const Subspace& s) {
  json j;
  j["ambient"] = {s.ambient_rows(), s.ambient_cols()};
  j["basis"] = json::array();
  for (const auto& b : s.basis_matrices()) j["basis"].push_back(matrix_to_json(b));
  return j;
}

Subspace subspace_from_json(const json& j, const FieldSpec& field) {
  if (!j.is_object() || !j.contains("ambient"))
    throw ParseError("subspace needs an 'ambient' shape");
  int ar = j.at("ambient").at(0).get<int>();
  int ac = j.at("ambient").at(1).get<int>();
  std::vector<Matrix> gens;
  if (j.contains("basis"))
    for (const auto& b : j.at("basis")) gens.push_back(matrix_from_json(b, field));
  return Subspace::span(ar, ac, field, gens);
}

json operator_to_json(const MatrixSpaceOperator& op) {
  json j;
  j["in"] = {op.in_rows(), op.in_cols()};
  j["out"] = {op.out_rows(), op.out_cols()};
  j["matrix"] = matrix_to_json(op.rep());
  return j;
}

MatrixSpaceOperator operator_from_json(const json& j, const FieldSpec& field) {
  int ir = j.at("in").at(0).get<int>(), ic = j.at("in").at(1).get<int>();
  int orr = j.at("out").at(0).get<int>(), oc = j.at("out").at(1).get<int>();
  return MatrixSpaceOperator(ir, ic, orr, oc, matrix_from_json(j.at("matrix"), field));
}

json decomposition_to_json(const Decomposition& d, const json& metadata) {
  json j;
  j["field"] = field_to_json(d.shape.field);
  j["shape"] = json::array();
  for (auto [r, c] : d.shape.factors) j["shape"].push_back({r, c});
  j["terms"] = json::array();
  for (const auto& term : d.terms) {
    json t = json::array();
    for (const auto& f : term.factors) t.push_back(matrix_to_json(f));
    j["terms"].push_back(std::move(t));
  }
  if (!metadata.empty()) j["metadata"] = metadata;
  return j;
}

Decomposition decomposition_from_json(const json& j, json* metadata) {
  for (const char* key : {"field", "shape", "terms"})
    if (!j.contains(key)) throw ParseError(std::string("decomposition file misses '") + key + "'");
  Decomposition d;
  d.shape.field = field_from_json(j.at("field"));
  for (const auto& pr : j.at("shape"))
    d.shape.factors.push_back({pr.at(0).get<int>(), pr.at(1).get<int>()});
  int ti = 0;
  for (const auto& t : j.at("terms")) {
    if (static_cast<int>(t.size()) != d.shape.arity())
      throw ParseError("term " + std::to_string(ti + 1) + " has wrong factor count");
    RankOneTerm term;
    int fi = 0;
    for (const auto& f : t) {
      Matrix m = matrix_from_json(f, d.shape.field);
      if (m.rows() != d.shape.factors[fi].first || m.cols() != d.shape.factors[fi].second)
        throw ParseError("term " + std::to_string(ti + 1) + " factor " + std::to_string(fi + 1) +
                         " does not match the shape header");
      term.factors.push_back(std::move(m));
      ++fi;
    }
    d.terms.push_back(std::move(term));
    ++ti;
  }
  if (metadata) *metadata = j.value("metadata", json::object());
  return d;
}

void save_decomposition(const Decomposition& d, const std::string& path, const json& metadata) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << decomposition_to_json(d, metadata).dump(2) << "\n";
}

Decomposition load_decomposition(const std::string& path, json* metadata) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    return decomposition_from_json(j, metadata);
  } catch (const std::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json certificate_to_json(const CertificateReport& rep) {
  json j;
  j["status"] = rep.verified ? "verified" : "failed";
  if (!rep.verified) j["mismatch"] = rep.mismatch_location;
  json st;
  st["terms"] = rep.term_count;
  st["field"] = rep.field_name;
  if (rep.h >= 0) {
    st["h"] = rep.h;
    st["remainder_nonzero_entries"] = rep.remainder_nonzero;
  }
  j["statistics"] = std::move(st);
  return j;
}

json bound_report_to_json(const BoundReport& rep) {
  json j;
  j["lhs"] = rep.bound_lhs;
  j["per_term_ranks"] = rep.per_term_ranks;
  j["rank_sum"] = rep.rank_sum;
  j["support"] = rep.support.indices;
  j["verdict"] = rep.holds ? "holds" : "violated";
  j["equality"] = rep.equality;
  j["what"] = rep.description;
  return j;
}

json stats_to_json(const DecompositionStats& st) {
  json j;
  j["terms"] = st.term_count;
  j["factors"] = json::array();
  for (const auto& f : st.factors) {
    json fj;
    fj["span_dim"] = f.span_dim;
    fj["max_proper_overlap"] = f.max_overlap;
    fj["per_term_ranks"] = f.per_term_ranks;
    fj["rank_sum"] = f.rank_sum;
    fj["average_rank"] = f.average_rank.str();
    j["factors"].push_back(std::move(fj));
  }
  return j;
}

}  // namespace tensorcert
