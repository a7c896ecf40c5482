#ifndef TENSORCERT_BOUNDS_HPP
#define TENSORCERT_BOUNDS_HPP

#include <optional>
#include <string>

#include "tensorcert/decomposition.hpp"

namespace tensorcert {

/// Sorted, duplicate-free set of term indices rho in [r] (1-based, as in
/// the inequalities' statements).
struct SupportSet {
  std::vector<int> indices;
  bool contains(int rho) const;
  int size() const { return static_cast<int>(indices.size()); }
};

/// Outcome of one lower-bound check lhs <= sum of per-term ranks over the
/// support set.
struct BoundReport {
  long long bound_lhs = 0;
  std::vector<int> per_term_ranks;  // entry rho-1
  SupportSet support;
  bool holds = false;
  bool equality = false;
  long long rank_sum = 0;
  std::string description;
};

/// sum over [r] of rank(L . factor_rho) against the product-of-dims lower
/// bound; a non-invertible L scales the left side down to
/// (product of uninvolved dims) * rank(L).
BoundReport inner_rank_sum(const Decomposition& d, int factor_one_based,
                           const std::optional<MatrixSpaceOperator>& L = std::nullopt);

/// Invertible operator taking every element of a spanning family of at most
/// n^2+1 nonzero matrices to a matrix of rank <= 1.
MatrixSpaceOperator construct_rank_one_operator(const std::vector<Matrix>& vs);

/// 2n^2 - n + 1 together with its counting schedule.
struct LowerBoundSchedule {
  long long bound = 0;
  long long rank_one_slots = 0;  // n^2 + 1 images of rank 1
  long long rank_n_slots = 0;    // n^2 - n further terms of rank <= n
};
LowerBoundSchedule certified_lower_bound(long long n);

/// {rho : some zeta in Z has zeta . alpha_rho != 0 and some eta in H has
/// eta . beta_rho != 0}.
SupportSet annihilation_support(const Decomposition& d, const Subspace& Z, const Subspace& H);

/// dim Span{zeta.eta} from basis products; with families f, g present the
/// products are replaced by sum_j (zeta.f_ij)(eta.g_jk) e_i x e_k.
int span_product_dim(const Subspace& Z, const Subspace& H,
                     const std::vector<Matrix>* f = nullptr,
                     const std::vector<Matrix>* g = nullptr);

/// dim Span_{ik} (sum_j [e_ij]_A x [e_jk]_B) in the quotient pair.
int quotient_span_dim(const Subspace& A, const Subspace& B);

/// A realized annihilation map with its matrix.
struct PsiInstance {
  int src_dim = 0;  // columns
  int dst_dim = 0;  // rows
  Matrix matrix = Matrix(1, 1, FieldSpec::rationals());
  std::string provenance;
  int rank() const { return matrix.rank(); }
};

/// Psi_{Z,H}: rows (eta index b, i), columns (zeta index a, k), entry
/// (zeta_a eta_b)_{ik}; built from the canonical echelon bases.
PsiInstance build_psi_zh(const Subspace& Z, const Subspace& H);
/// Kernel criterion: Psi_{Z,H} has trivial kernel, i.e. full column rank.
bool psi_kernel_trivial(const PsiInstance& psi);

/// Psi = pi (M x N x Lsplit) t for a 3-factor tensor t; Lsplit maps the
/// third factor into F^{m3} x F^{m1}.  Rows (N' coord, i in [m1]), columns
/// (M' coord, c in [m3]).
PsiInstance build_psi_general(const Tensor& t, const MatrixSpaceOperator& M,
                              const MatrixSpaceOperator& N, const MatrixSpaceOperator& Lsplit);

/// rank(Psi_{Z,H}) <= sum over supp(ZH) of rank(L gamma_rho).
BoundReport psi_support_bound(const Decomposition& d, const Subspace& Z, const Subspace& H,
                              const std::optional<MatrixSpaceOperator>& L = std::nullopt);

/// dim Span(ZH) <= |supp(ZH)|.
BoundReport annihilation_bound(const Decomposition& d, const Subspace& Z, const Subspace& H);

/// rank(Psi) <= sum over {rho : M alpha_rho != 0 and N beta_rho != 0} of
/// rank(Lsplit gamma_rho).
BoundReport general_psi_bound(const Decomposition& d, const MatrixSpaceOperator& M,
                              const MatrixSpaceOperator& N, const MatrixSpaceOperator& Lsplit);

/// Psi x I_d: rank scales by exactly d.
PsiInstance trivial_tensoring(const PsiInstance& psi, int d);
/// Kronecker product of two instances: rank multiplies.
PsiInstance tensor_instances(const PsiInstance& a, const PsiInstance& b);

/// |{v in vs : v in U}| - dim U for a proper subspace U (multiset count).
long long overlap(const std::vector<Matrix>& vs, const Subspace& U);

struct OverlapReport {
  long long value = 0;
  Subspace witness;
  OverlapReport() : witness(Subspace::zero(1, 1, FieldSpec::rationals())) {}
};
/// Maximum of overlap over proper subspaces; exhaustive over spans of
/// subsets of vs (sufficient: replacing U by span(vs meet U) never lowers
/// the value).  Rejects families larger than 24 vectors.
OverlapReport max_proper_overlap(const std::vector<Matrix>& vs);

/// Invertible-combination search following the determinant-monomial
/// argument: M = v_1 + ... + v_{s'}, then at most n - rank(M) more vectors.
struct ComboReport {
  bool found = false;
  bool inconclusive = false;  // searched budget exhausted
  int prefix_len = 0;
  int s = 0;  // rank of the prefix sum
  std::vector<int> extra_indices;  // 1-based positions of the extra vectors
  std::vector<Scalar> coefficients;  // coefficient of M, then of each extra
  std::uint64_t seed = 0;
  Matrix combination;
  ComboReport() : combination(Matrix(1, 1, FieldSpec::rationals())) {}
};
ComboReport complete_to_invertible(const std::vector<Matrix>& vs, int prefix_len,
                                   std::uint64_t seed = 0, long long budget = 4096);

/// First (Z,H) pair in lexicographic subset order, |Z| = |H| = n, with
/// Psi_{Z,H} of full rank n^2.
struct TameWitness {
  std::vector<int> zeta_indices;  // 0-based positions into the input bases
  std::vector<int> eta_indices;
  Subspace Z, H;
  PsiInstance psi;
  long long candidates_tried = 0;
  TameWitness()
      : Z(Subspace::zero(1, 1, FieldSpec::rationals())),
        H(Subspace::zero(1, 1, FieldSpec::rationals())) {}
};
std::optional<TameWitness> tame_search(const std::vector<Matrix>& zeta_basis,
                                       const std::vector<Matrix>& eta_basis, int n,
                                       int max_threads = 1);

/// Reports r >= 3n^2 - 2n and, independently, a small linearly dependent
/// subset in each factor family when one exists.
struct DichotomyReport {
  int r = 0;
  long long threshold = 0;  // 3n^2 - 2n
  bool count_clause = false;
  struct FamilyResult {
    bool dependent_found = false;
    std::vector<int> witness;  // 1-based term indices
    bool exhaustive = false;   // complete subset search vs greedy circuits
  };
  std::vector<FamilyResult> families;
};
DichotomyReport dichotomy_check(const Decomposition& d);

/// Quotient-question data over <n1,n2,n3>.
struct QuotientQuestion {
  Tensor tensor;
  Subspace A, B;
  std::optional<MatrixSpaceOperator> Lsplit;  // defaults to the canonical split
};
struct MaxRankReport {
  int best = 0;
  int best_candidate = 0;  // 0 = canonical quotients, i = i-th random basis change
  long long optimistic = 0;
  std::uint64_t seed = 0;
};
MaxRankReport max_rank_search(const QuotientQuestion& q, int budget, std::uint64_t seed = 0);

/// |{(i,j,k) : (i,j) not in J1, (j,k) not in J2}| cross-checked against the
/// eliminated rank of Psi for the coordinate subspaces; throws when the two
/// disagree.
struct StarsZerosResult {
  long long count = 0;
  int psi_rank = 0;
};
StarsZerosResult stars_zeros_rank(int n1, int n2, int n3,
                                  const std::vector<std::pair<int, int>>& J1,
                                  const std::vector<std::pair<int, int>>& J2,
                                  const FieldSpec& field);

}  // namespace tensorcert

#endif
