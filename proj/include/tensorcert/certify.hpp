#ifndef TENSORCERT_CERTIFY_HPP
#define TENSORCERT_CERTIFY_HPP

#include "tensorcert/bounds.hpp"

namespace tensorcert {

/// Result of an exact or infinitesimal verification run.
struct CertificateReport {
  bool verified = false;
  std::string mismatch_location;  // set exactly when verification failed
  int term_count = 0;
  std::string field_name;
  /// For infinitesimal runs: number of nonzero entries in the unconstrained
  /// remainder coefficient at eps^{h+1} (reported, never required zero).
  long long remainder_nonzero = 0;
  int h = -1;  // -1 for exact verification
};

/// Entrywise exact comparison of the evaluated sum with the target.
CertificateReport verify_exact(const Decomposition& d, const Tensor& target);

/// Embeds a base-field decomposition into the eps ring of the given order.
Decomposition lift_to_eps(const Decomposition& d, int order);

/// Checks that the eps-ring evaluation equals eps^h * target up to an
/// O(eps^{h+1}) remainder: coefficients 0..h-1 vanish, coefficient h equals
/// the target exactly.  Requires eps order >= h+2.
CertificateReport verify_infinitesimal(const Decomposition& d, const Tensor& target, int h);

/// Per-factor summary statistics of a decomposition.
struct FactorStats {
  int span_dim = 0;
  long long max_overlap = 0;
  std::vector<int> per_term_ranks;
  long long rank_sum = 0;
  Rat average_rank;
};
struct DecompositionStats {
  int term_count = 0;
  std::vector<FactorStats> factors;
};
DecompositionStats stats(const Decomposition& d);

}  // namespace tensorcert

#endif
