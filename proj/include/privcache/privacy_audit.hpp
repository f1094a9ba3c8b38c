#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "privcache/private_scheme.hpp"
#include "privcache/rational.hpp"

namespace privcache {

/// Exact probability law over outcomes encoded as integer vectors.
struct ExactDistribution {
  std::map<std::vector<int>, Rational> mass;

  Rational total() const;
  Rational probability(const std::vector<int>& outcome) const;
  std::size_t support_size() const { return mass.size(); }
};

/// Thrown when an exhaustive enumeration would exceed its cap.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::string what_is_counted, BigInt cardinality, BigInt cap);

  const std::string& counted() const { return counted_; }
  const BigInt& cardinality() const { return cardinality_; }
  const BigInt& cap() const { return cap_; }

 private:
  std::string counted_;
  BigInt cardinality_;
  BigInt cap_;
};

struct EnumerationBudget {
  BigInt cap = 20'000'000;
};

/// Deliberate weakenings of the delivery randomness, used to show that the
/// audits detect leaks. Both are off in the real scheme.
struct SchemeMutation {
  bool identity_permutation = false;  // P is the identity, so P~ = Q~
  bool fixed_slots = false;           // every S_k = (0, 1, ..., L-1)
  bool unpinned_blocks = false;       // q~_k uniform over all orderings of T

  bool any() const { return identity_permutation || fixed_slots || unpinned_blocks; }
};

/// Every demand vector of the restricted demand subset for (N, K, N-bar):
/// one N-bar subset, and each of the K blocks a permutation of it.
std::vector<std::vector<int>> restricted_demand_set(int files, int blocks, int block_length);

/// (N - N-bar)! / (N! (N-bar!)^(K-1)): the probability of each restricted
/// demand vector under the scheme.
Rational closed_form_ptilde_mass(const SchemeParams& params);

/// Number of paths ptilde_distribution would enumerate.
BigInt ptilde_enumeration_size(const SchemeParams& params, const DemandMatrix& demand, SchemeMutation mutation = {});

/// Exact law of P~ given the demand matrix and the observer's slot tuple,
/// enumerating P, T, the observer's block and, for every other user, its
/// slot tuple together with its block.
ExactDistribution ptilde_distribution(const SchemeParams& params, const DemandMatrix& demand, int observer,
                                      const std::vector<int>& observer_slots,
                                      const EnumerationBudget& budget = {}, SchemeMutation mutation = {});

struct InvarianceReport {
  bool identical = true;
  Rational max_discrepancy;   // max |Pr_D(p) - Pr_D0(p)| over outcomes and D
  std::vector<int> witness;   // outcome attaining it, empty when identical
  std::size_t witness_demand = 0;
};

/// Whether the P~ law is the same for every demand matrix in `demands`
/// (all of which must share row `observer`).
InvarianceReport verify_ptilde_invariance(const SchemeParams& params, const std::vector<DemandMatrix>& demands,
                                          int observer, const std::vector<int>& observer_slots,
                                          const EnumerationBudget& budget = {}, SchemeMutation mutation = {});

/// What the mutual information is measured against.
enum class InformationTarget {
  kOtherDemands,  // I(D_{\k}; X_D, Z_k, d_k), the privacy quantity
  kOwnDemand,     // I(d_k; X_D, Z_k, d_k) = H(d_k), a sanity check
};

struct MutualInformationResult {
  /// The joint law factorizes exactly (rational equality for every pair of
  /// target value and observation), i.e. the information is exactly zero.
  bool exactly_zero = false;
  /// max |Pr(a, o) - Pr(a) Pr(o)|; zero iff exactly_zero.
  Rational max_factorization_gap;
  /// Pr(o | D) is the same for all D sharing the observer's row, which
  /// implies zero information under every prior.
  bool conditional_laws_equal = false;
  /// The information in base-q units, evaluated from the exact law.
  double value = 0.0;
  BigInt enumerated_paths;
  std::size_t observations = 0;
};

/// Number of joint realizations exact_mutual_information would enumerate:
/// |demand set| * q^(N F) * |P choices| * |S choices| * max |T| * max |Q~|.
BigInt mutual_information_enumeration_size(const SchemeParams& params, SchemeMutation mutation = {});

/// Exact mutual information between the target and user `observer`'s view
/// (broadcast with P~, labeled cache with S_k, own demand), under a uniform
/// prior on demand matrices and uniform files, by exhaustive enumeration of
/// files and all randomness through the real placement and delivery.
MutualInformationResult exact_mutual_information(const SchemeParams& params, int observer,
                                                 InformationTarget target = InformationTarget::kOtherDemands,
                                                 const EnumerationBudget& budget = {},
                                                 SchemeMutation mutation = {});

/// Law of P~ given (D, S_observer) obtained by marginalizing the same full
/// enumeration over files; must match ptilde_distribution.
ExactDistribution ptilde_law_from_full_enumeration(const SchemeParams& params, const DemandMatrix& demand,
                                                   int observer, const std::vector<int>& observer_slots,
                                                   const EnumerationBudget& budget = {});

struct ChiSquareReport {
  std::uint64_t runs = 0;
  std::size_t cells = 0;
  std::size_t out_of_support = 0;  // samples outside the restricted demand set
  double statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double critical_value = 0.0;  // 0.999 quantile
  bool pass = false;
};

/// Samples P~ `runs` times through the real samplers with D and S_observer
/// fixed, and compares frequencies with the uniform law on the restricted
/// demand set. Throws std::invalid_argument when runs is 0 or below ten times
/// the support size.
ChiSquareReport empirical_distribution_check(const SchemeParams& params, const DemandMatrix& demand, int observer,
                                             const std::vector<int>& observer_slots, std::uint64_t runs,
                                             std::uint64_t seed, SchemeMutation mutation = {});

}  // namespace privcache
