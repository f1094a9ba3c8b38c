#include "privcache/privacy_audit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include <boost/math/distributions/chi_squared.hpp>

#include "privcache/combinatorics.hpp"

namespace privcache {

Rational ExactDistribution::total() const {
  Rational t = 0;
  for (const auto& [_, p] : mass) t += p;
  return t;
}

Rational ExactDistribution::probability(const std::vector<int>& outcome) const {
  auto it = mass.find(outcome);
  return it == mass.end() ? Rational(0) : it->second;
}

BudgetExceeded::BudgetExceeded(std::string what_is_counted, BigInt cardinality, BigInt cap)
    : std::runtime_error("enumeration budget exceeded: " + what_is_counted + " = " + cardinality.str() +
                         " exceeds cap " + cap.str()),
      counted_(std::move(what_is_counted)),
      cardinality_(std::move(cardinality)),
      cap_(std::move(cap)) {}

std::vector<std::vector<int>> restricted_demand_set(int files, int blocks, int block_length) {
  std::vector<std::vector<int>> out;
  for (const auto& set : subsets_of_size(iota_vector(files), block_length)) {
    const auto perms = permutations(set);
    std::vector<std::size_t> pick(blocks, 0);
    while (true) {
      std::vector<int> v;
      for (int b = 0; b < blocks; ++b) v.insert(v.end(), perms[pick[b]].begin(), perms[pick[b]].end());
      out.push_back(std::move(v));
      int b = blocks - 1;
      while (b >= 0 && ++pick[b] == perms.size()) pick[b--] = 0;
      if (b < 0) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Rational closed_form_ptilde_mass(const SchemeParams& params) {
  const int n = params.files;
  const int nbar = params.distinct_files();
  BigInt den = factorial(n);
  const BigInt nbar_fact = factorial(nbar);
  for (int k = 1; k < params.users; ++k) den *= nbar_fact;
  return Rational(factorial(n - nbar), den);
}

namespace {

using Block = std::vector<int>;
using WeightedBlocks = std::vector<std::pair<Block, Rational>>;

std::vector<int> fixed_slot_tuple(const SchemeParams& params) { return iota_vector(params.demands_per_user); }

void check_observer(const SchemeParams& params, int observer, const std::vector<int>& slots) {
  if (observer < 0 || observer >= params.users) throw std::invalid_argument("observer out of range");
  const auto tuples = all_slot_tuples(params);
  if (std::find(tuples.begin(), tuples.end(), slots) == tuples.end()) {
    throw std::invalid_argument("observer slot tuple is not L distinct slots in [0, N-bar)");
  }
}

std::vector<Block> blocks_for(std::span<const int> superset, std::span<const int> row, std::span<const int> slots,
                              SchemeMutation mutation) {
  if (mutation.unpinned_blocks) return permutations(std::vector<int>(superset.begin(), superset.end()));
  return pinned_blocks(superset, row, slots);
}

// Law of a non-observer block given T and its row: the slot tuple is
// marginalized uniformly, then the block is uniform among the pinned ones.
WeightedBlocks marginal_block_law(const SchemeParams& params, std::span<const int> superset,
                                  std::span<const int> row, SchemeMutation mutation) {
  std::vector<std::vector<int>> tuples;
  if (mutation.fixed_slots) {
    tuples.push_back(fixed_slot_tuple(params));
  } else {
    tuples = all_slot_tuples(params);
  }
  std::map<Block, Rational> law;
  for (const auto& slots : tuples) {
    const auto blocks = blocks_for(superset, row, slots, mutation);
    const Rational w(BigInt(1), BigInt(tuples.size() * blocks.size()));
    for (const auto& b : blocks) law[b] += w;
  }
  return {law.begin(), law.end()};
}

}  // namespace

BigInt ptilde_enumeration_size(const SchemeParams& params, const DemandMatrix& demand, SchemeMutation mutation) {
  params.validate();
  const int nbar = params.distinct_files();
  const int l = params.demands_per_user;
  const BigInt q_size = factorial(mutation.unpinned_blocks ? nbar : nbar - l);
  const BigInt slot_tuples = factorial(nbar) / factorial(nbar - l);
  BigInt n = factorial(params.files) * BigInt(feasible_supersets(params, demand).size()) * q_size;
  for (int k = 1; k < params.users; ++k) n *= slot_tuples * q_size;
  return n;
}

ExactDistribution ptilde_distribution(const SchemeParams& params, const DemandMatrix& demand, int observer,
                                      const std::vector<int>& observer_slots, const EnumerationBudget& budget,
                                      SchemeMutation mutation) {
  params.validate();
  validate_demand(params, demand);
  check_observer(params, observer, observer_slots);
  const BigInt size = ptilde_enumeration_size(params, demand, mutation);
  if (size > budget.cap) throw BudgetExceeded("P~ law paths (N! * |T| * |Q_k| * prod(|S| * |Q_i|))", size, budget.cap);

  std::vector<std::vector<int>> perms;
  if (mutation.identity_permutation) {
    perms.push_back(iota_vector(params.files));
  } else {
    perms = permutations(iota_vector(params.files));
  }
  const auto supersets = feasible_supersets(params, demand);
  const Rational outer(BigInt(1), BigInt(perms.size() * supersets.size()));

  ExactDistribution law;
  for (const auto& superset : supersets) {
    std::vector<WeightedBlocks> per_user(params.users);
    for (int k = 0; k < params.users; ++k) {
      if (k == observer) {
        const auto blocks = blocks_for(superset, demand[k], observer_slots, mutation);
        for (const auto& b : blocks) per_user[k].emplace_back(b, Rational(BigInt(1), BigInt(blocks.size())));
      } else {
        per_user[k] = marginal_block_law(params, superset, demand[k], mutation);
      }
    }
    std::vector<std::size_t> pick(params.users, 0);
    while (true) {
      std::vector<int> expanded;
      Rational w = outer;
      for (int k = 0; k < params.users; ++k) {
        const auto& [block, p] = per_user[k][pick[k]];
        expanded.insert(expanded.end(), block.begin(), block.end());
        w *= p;
      }
      for (const auto& perm : perms) law.mass[permute_demand(perm, expanded)] += w;
      int k = params.users - 1;
      while (k >= 0 && ++pick[k] == per_user[k].size()) pick[k--] = 0;
      if (k < 0) break;
    }
  }
  return law;
}

InvarianceReport verify_ptilde_invariance(const SchemeParams& params, const std::vector<DemandMatrix>& demands,
                                          int observer, const std::vector<int>& observer_slots,
                                          const EnumerationBudget& budget, SchemeMutation mutation) {
  InvarianceReport report;
  report.max_discrepancy = 0;
  if (demands.empty()) return report;
  for (const auto& d : demands) {
    validate_demand(params, d);
    if (d[observer] != demands.front()[observer]) {
      throw std::invalid_argument("verify_ptilde_invariance: demand matrices disagree on the observer's row");
    }
  }
  const auto reference = ptilde_distribution(params, demands.front(), observer, observer_slots, budget, mutation);
  for (std::size_t i = 1; i < demands.size(); ++i) {
    const auto law = ptilde_distribution(params, demands[i], observer, observer_slots, budget, mutation);
    auto consider = [&](const std::vector<int>& outcome) {
      Rational diff = law.probability(outcome) - reference.probability(outcome);
      if (diff < 0) diff = -diff;
      if (diff > report.max_discrepancy) {
        report.max_discrepancy = diff;
        report.witness = outcome;
        report.witness_demand = i;
      }
    };
    for (const auto& [o, _] : law.mass) consider(o);
    for (const auto& [o, _] : reference.mass) consider(o);
  }
  report.identical = report.max_discrepancy == 0;
  return report;
}

namespace {

struct Realization {
  const DemandMatrix* demand;
  const PlacementRandomness* placement;
  const DeliveryRandomness* delivery;
  const FileLibrary* library;
  const std::vector<CacheState>* caches;
  const PrivateBroadcast* broadcast;
  Rational weight;
};

BigInt power(const BigInt& base, std::uint64_t e) {
  BigInt out = 1;
  for (std::uint64_t i = 0; i < e; ++i) out *= base;
  return out;
}

// Visits every joint realization of (D, W, P, S, T, Q~) with its probability.
// D ranges over `demands` uniformly; when `observer_slots` is set the
// observer's slot tuple is fixed to it (conditioning on S_k).
void enumerate_realizations(const SchemeParams& params, const std::vector<DemandMatrix>& demands, int observer,
                            const std::optional<std::vector<int>>& observer_slots, SchemeMutation mutation,
                            const std::function<void(const Realization&)>& visit) {
  const std::size_t symbols = static_cast<std::size_t>(params.files) * params.file_length();
  const std::uint32_t q = params.field.modulus();

  std::vector<std::vector<int>> perms;
  if (mutation.identity_permutation) {
    perms.push_back(iota_vector(params.files));
  } else {
    perms = permutations(iota_vector(params.files));
  }
  std::vector<std::vector<std::vector<int>>> slot_choices(params.users);
  for (int k = 0; k < params.users; ++k) {
    if (mutation.fixed_slots) {
      slot_choices[k] = {fixed_slot_tuple(params)};
    } else if (k == observer && observer_slots) {
      slot_choices[k] = {*observer_slots};
    } else {
      slot_choices[k] = all_slot_tuples(params);
    }
  }
  const BigInt libraries = power(BigInt(q), symbols);
  BigInt base_den = BigInt(demands.size()) * libraries * BigInt(perms.size());
  for (const auto& c : slot_choices) base_den *= BigInt(c.size());

  for (const auto& demand : demands) {
    const auto supersets = feasible_supersets(params, demand);
    for (const auto& perm : perms) {
      std::vector<std::size_t> spick(params.users, 0);
      while (true) {
        PlacementRandomness placement;
        placement.permutation = perm;
        for (int k = 0; k < params.users; ++k) placement.slots.push_back(slot_choices[k][spick[k]]);

        for (const auto& superset : supersets) {
          std::vector<std::vector<Block>> blocks(params.users);
          BigInt den = base_den * BigInt(supersets.size());
          for (int k = 0; k < params.users; ++k) {
            blocks[k] = blocks_for(superset, demand[k], placement.slots[k], mutation);
            den *= BigInt(blocks[k].size());
          }
          const Rational weight(BigInt(1), den);
          std::vector<std::size_t> qpick(params.users, 0);
          while (true) {
            DeliveryRandomness delivery;
            delivery.superset = superset;
            for (int k = 0; k < params.users; ++k) {
              delivery.expanded.insert(delivery.expanded.end(), blocks[k][qpick[k]].begin(),
                                       blocks[k][qpick[k]].end());
            }
            FileLibrary library(params.files, params.file_length());
            std::vector<Symbol> digits(symbols, 0);
            while (true) {
              for (std::size_t i = 0; i < symbols; ++i) {
                library.at(static_cast<int>(i / params.file_length()), i % params.file_length()) = digits[i];
              }
              const auto caches = private_placement(params, library, placement);
              const auto broadcast = private_delivery(params, library, demand, placement, delivery);
              visit(Realization{&demand, &placement, &delivery, &library, &caches, &broadcast, weight});
              std::size_t i = 0;
              while (i < symbols && ++digits[i] == q) digits[i++] = 0;
              if (i == symbols) break;
            }
            int k = params.users - 1;
            while (k >= 0 && ++qpick[k] == blocks[k].size()) qpick[k--] = 0;
            if (k < 0) break;
          }
        }
        int k = params.users - 1;
        while (k >= 0 && ++spick[k] == slot_choices[k].size()) spick[k--] = 0;
        if (k < 0) break;
      }
    }
  }
}

// Canonical integer encoding of what user k observes.
std::vector<int> observation_of(const Realization& r, int observer) {
  std::vector<int> obs;
  const auto& row = (*r.demand)[observer];
  obs.insert(obs.end(), row.begin(), row.end());
  const CacheState& cache = (*r.caches)[observer];
  obs.push_back(-1);
  obs.insert(obs.end(), cache.slots.begin(), cache.slots.end());
  obs.push_back(-1);
  const auto& permuted = r.broadcast->permuted_demand();
  obs.insert(obs.end(), permuted.begin(), permuted.end());
  for (const auto& seg : r.broadcast->ucc.segments) {
    obs.push_back(-2);
    obs.push_back(static_cast<int>(seg.rank));
    for (Symbol v : seg.values) obs.push_back(static_cast<int>(v));
  }
  for (std::size_t label = 0; label < cache.labeled.size(); ++label) {
    obs.push_back(-3);
    obs.push_back(static_cast<int>(label));
    for (std::size_t i = 0; i < cache.labeled[label].size(); ++i) {
      obs.push_back(static_cast<int>(cache.labeled[label].indices[i]));
      obs.push_back(static_cast<int>(cache.labeled[label].values[i]));
    }
  }
  return obs;
}

}  // namespace

BigInt mutual_information_enumeration_size(const SchemeParams& params, SchemeMutation mutation) {
  params.validate();
  const int n = params.files;
  const int nbar = params.distinct_files();
  const int l = params.demands_per_user;
  const BigInt rows = factorial(n) / factorial(n - l);
  const BigInt slot_tuples = mutation.fixed_slots ? BigInt(1) : factorial(nbar) / factorial(nbar - l);
  BigInt size = power(BigInt(params.field.modulus()), static_cast<std::uint64_t>(n) * params.file_length());
  size *= mutation.identity_permutation ? BigInt(1) : factorial(n);
  size *= binomial(n, nbar);  // bound on |T choices|
  const BigInt q_size = factorial(mutation.unpinned_blocks ? nbar : nbar - l);
  for (int k = 0; k < params.users; ++k) size *= rows * slot_tuples * q_size;
  return size;
}

MutualInformationResult exact_mutual_information(const SchemeParams& params, int observer, InformationTarget target,
                                                 const EnumerationBudget& budget, SchemeMutation mutation) {
  params.validate();
  if (observer < 0 || observer >= params.users) throw std::invalid_argument("observer out of range");
  const BigInt size = mutual_information_enumeration_size(params, mutation);
  if (size > budget.cap) {
    throw BudgetExceeded("joint realizations (|D| * q^(N*F) * N! * |T| * prod(|S| * |Q_k|))", size, budget.cap);
  }
  const auto demands = all_demand_matrices(params.files, params.users, params.demands_per_user);

  std::map<std::vector<int>, std::map<std::vector<int>, Rational>> joint;  // obs -> target -> mass
  std::map<std::vector<int>, Rational> target_law;
  std::map<DemandMatrix, std::map<std::vector<int>, Rational>> conditional;  // D -> obs -> Pr(obs, D)
  MutualInformationResult result;
  enumerate_realizations(params, demands, observer, std::nullopt, mutation, [&](const Realization& r) {
    std::vector<int> a;
    for (int k = 0; k < params.users; ++k) {
      const bool take = target == InformationTarget::kOtherDemands ? k != observer : k == observer;
      if (!take) continue;
      a.insert(a.end(), (*r.demand)[k].begin(), (*r.demand)[k].end());
      a.push_back(-1);
    }
    auto obs = observation_of(r, observer);
    conditional[*r.demand][obs] += r.weight;
    joint[std::move(obs)][a] += r.weight;
    target_law[a] += r.weight;
    ++result.enumerated_paths;
  });

  result.observations = joint.size();
  result.max_factorization_gap = 0;
  long double info = 0.0L;
  for (const auto& [obs, by_target] : joint) {
    Rational p_obs = 0;
    for (const auto& [_, m] : by_target) p_obs += m;
    for (const auto& [a, p_a] : target_law) {
      auto it = by_target.find(a);
      const Rational p_joint = it == by_target.end() ? Rational(0) : it->second;
      Rational gap = p_joint - p_a * p_obs;
      if (gap < 0) gap = -gap;
      if (gap > result.max_factorization_gap) result.max_factorization_gap = gap;
      if (p_joint > 0) {
        const long double ratio = static_cast<long double>(to_double(p_joint / (p_a * p_obs)));
        info += static_cast<long double>(to_double(p_joint)) * std::log(ratio);
      }
    }
  }
  result.exactly_zero = result.max_factorization_gap == 0;

  // D is uniform, so equal joint masses mean equal conditional laws.
  result.conditional_laws_equal = true;
  std::map<std::vector<int>, const std::map<std::vector<int>, Rational>*> reference;
  for (const auto& [d, law] : conditional) {
    auto [it, fresh] = reference.emplace(d[observer], &law);
    if (!fresh && *it->second != law) result.conditional_laws_equal = false;
  }
  result.value = result.exactly_zero ? 0.0 : static_cast<double>(info / std::log((long double)params.field.modulus()));
  return result;
}

ExactDistribution ptilde_law_from_full_enumeration(const SchemeParams& params, const DemandMatrix& demand,
                                                   int observer, const std::vector<int>& observer_slots,
                                                   const EnumerationBudget& budget) {
  params.validate();
  validate_demand(params, demand);
  check_observer(params, observer, observer_slots);
  BigInt size = power(BigInt(params.field.modulus()), static_cast<std::uint64_t>(params.files) * params.file_length());
  size *= ptilde_enumeration_size(params, demand);
  if (size > budget.cap) throw BudgetExceeded("joint realizations for fixed (D, S_k)", size, budget.cap);
  ExactDistribution law;
  enumerate_realizations(params, {demand}, observer, observer_slots, {}, [&](const Realization& r) {
    law.mass[r.broadcast->permuted_demand()] += r.weight;
  });
  return law;
}

ChiSquareReport empirical_distribution_check(const SchemeParams& params, const DemandMatrix& demand, int observer,
                                             const std::vector<int>& observer_slots, std::uint64_t runs,
                                             std::uint64_t seed, SchemeMutation mutation) {
  params.validate();
  validate_demand(params, demand);
  check_observer(params, observer, observer_slots);
  if (runs == 0) throw std::invalid_argument("empirical_distribution_check: runs must be positive");
  const int nbar = params.distinct_files();
  BigInt cells = binomial(params.files, nbar);
  for (int k = 0; k < params.users; ++k) cells *= factorial(nbar);
  if (BigInt(runs) < cells * 10) {
    throw std::invalid_argument("empirical_distribution_check: need at least 10 runs per support cell (" +
                                BigInt(cells * 10).str() + ")");
  }

  const UccParams shape = params.ucc();
  std::map<std::vector<int>, std::uint64_t> counts;
  ChiSquareReport report;
  report.runs = runs;
  report.cells = cells.convert_to<std::size_t>();
  Rng master = substream(seed, "empirical");
  for (std::uint64_t i = 0; i < runs; ++i) {
    const std::uint64_t run_seed = master.next();
    PlacementRandomness placement = sample_placement_randomness(params, run_seed);
    placement.slots[observer] = observer_slots;
    if (mutation.identity_permutation) placement.permutation = iota_vector(params.files);
    if (mutation.fixed_slots) {
      for (int k = 0; k < params.users; ++k) {
        if (k != observer) placement.slots[k] = fixed_slot_tuple(params);
      }
    }
    auto delivery = sample_delivery_randomness(params, demand, placement, run_seed);
    if (mutation.unpinned_blocks) {
      for (int k = 0; k < params.users; ++k) {
        Rng rng = substream(run_seed, "unpinned", static_cast<std::uint64_t>(k));
        const auto block = sample_permutation(delivery.superset, rng);
        std::copy(block.begin(), block.end(), delivery.expanded.begin() + k * nbar);
      }
    }
    auto permuted = permute_demand(placement.permutation, delivery.expanded);
    if (!is_restricted(shape, permuted)) {
      ++report.out_of_support;
      continue;
    }
    ++counts[std::move(permuted)];
  }

  const double expected = static_cast<double>(runs) * to_double(closed_form_ptilde_mass(params));
  double sum_sq = 0.0;
  for (const auto& [_, c] : counts) sum_sq += static_cast<double>(c) * static_cast<double>(c) / expected;
  const double in_support = static_cast<double>(runs - report.out_of_support);
  report.statistic = sum_sq - 2.0 * in_support + static_cast<double>(runs);
  report.degrees_of_freedom = static_cast<double>(report.cells) - 1.0;
  if (report.degrees_of_freedom > 0) {
    report.critical_value =
        boost::math::quantile(boost::math::chi_squared_distribution<double>(report.degrees_of_freedom), 0.999);
  }
  report.pass = report.out_of_support == 0 && report.statistic <= report.critical_value;
  return report;
}

}  // namespace privcache
