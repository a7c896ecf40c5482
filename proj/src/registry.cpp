#include "tensorcert/registry.hpp"

namespace tensorcert {

namespace {

constexpr int kStrassenTable[7][3][2][2] = {
    // alpha, beta, gamma^T per row
    {{{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}},
    {{{0, 0}, {1, 1}}, {{1, 0}, {0, 0}}, {{0, 0}, {1, -1}}},
    {{{1, 0}, {0, 0}}, {{0, 1}, {0, -1}}, {{0, 1}, {0, 1}}},
    {{{0, 0}, {0, 1}}, {{-1, 0}, {1, 0}}, {{1, 0}, {1, 0}}},
    {{{1, 1}, {0, 0}}, {{0, 0}, {0, 1}}, {{-1, 1}, {0, 0}}},
    {{{-1, 0}, {1, 0}}, {{1, 1}, {0, 0}}, {{0, 0}, {0, 1}}},
    {{{0, 1}, {0, -1}}, {{0, 0}, {1, 1}}, {{1, 0}, {0, 0}}},
};

Matrix table_matrix(const int (&m)[2][2], const FieldSpec& field, bool transpose) {
  Matrix out(2, 2, field);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Scalar v = Scalar::from_int(m[i][j], field);
      if (transpose)
        out.at(j, i) = v;
      else
        out.at(i, j) = v;
    }
  return out;
}

}  // namespace

Decomposition strassen(const FieldSpec& field) {
  Decomposition d;
  d.shape = {{{2, 2}, {2, 2}, {2, 2}}, field};
  for (const auto& row : kStrassenTable) {
    RankOneTerm t;
    t.factors.push_back(table_matrix(row[0], field, false));
    t.factors.push_back(table_matrix(row[1], field, false));
    t.factors.push_back(table_matrix(row[2], field, true));  // table lists gamma^T
    d.terms.push_back(std::move(t));
  }
  return d;
}

Decomposition naive(int n1, int n2, int n3, const FieldSpec& field) {
  if (n1 < 1 || n2 < 1 || n3 < 1) throw std::invalid_argument("dims must be positive");
  Decomposition d;
  d.shape = {{{n1, n2}, {n2, n3}, {n3, n1}}, field};
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      for (int k = 0; k < n3; ++k) {
        RankOneTerm t;
        t.factors.push_back(Matrix::unit(n1, n2, i, j, field));
        t.factors.push_back(Matrix::unit(n2, n3, j, k, field));
        t.factors.push_back(Matrix::unit(n3, n1, k, i, field));
        d.terms.push_back(std::move(t));
      }
  return d;
}

Decomposition builtin_decomposition(const std::string& name, const FieldSpec& field) {
  if (name == "strassen") return strassen(field);
  if (name.rfind("naive-", 0) == 0) {
    int n1, n2, n3;
    if (sscanf(name.c_str() + 6, "%dx%dx%d", &n1, &n2, &n3) == 3) return naive(n1, n2, n3, field);
  }
  throw std::invalid_argument("unknown builtin decomposition '" + name + "'");
}

}  // namespace tensorcert
