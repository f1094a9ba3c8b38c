// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "privcache/combinatorics.hpp"
#include "privcache/privacy_audit.hpp"
#include "privcache/private_scheme.hpp"
#include "privcache/tradeoff.hpp"

using namespace privcache;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

SchemeParams make(int n, int k, int l, int r, std::uint32_t q = PrimeField::kDefaultModulus, std::size_t packet = 1) {
  SchemeParams p;
  p.files = n;
  p.users = k;
  p.demands_per_user = l;
  p.r = r;
  p.field = PrimeField(q);
  p.packet_size = packet;
  return p;
}

int failures = 0;

void report(int id, const std::string& title, double limit_seconds, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail << " [exception: " << e.what() << "]";
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds > limit_seconds) {
    v.pass = false;
    v.detail << " [over time limit " << limit_seconds << " s]";
  }
  if (!v.pass) ++failures;
  std::cout << "criterion " << id << " " << (v.pass ? "PASS" : "FAIL") << " " << title << ":" << v.detail.str()
            << " (" << seconds << " s)" << std::endl;
}

bool same_row(const FileLibrary& lib, int n, const SymbolVector& v) {
  const auto row = lib.file(n);
  return std::equal(row.begin(), row.end(), v.begin(), v.end());
}

// Every D and every (P, S, T, Q~) for one instance; counts decodes and
// decoder disagreements.
struct ExhaustiveTally {
  std::size_t realizations = 0;
  std::size_t decodes = 0;
  std::size_t wrong = 0;
  std::size_t disagreements = 0;
};

void exhaust(const SchemeParams& p, std::uint64_t seed, ExhaustiveTally& tally) {
  const auto lib = FileLibrary::random(p.field, p.files, p.file_length(), seed);
  const auto tuples = all_slot_tuples(p);
  for (const auto& d : all_demand_matrices(p.files, p.users, p.demands_per_user)) {
    for (const auto& perm : permutations(iota_vector(p.files))) {
      std::vector<std::size_t> spick(p.users, 0);
      while (true) {
        PlacementRandomness place{perm, {}};
        for (int k = 0; k < p.users; ++k) place.slots.push_back(tuples[spick[k]]);
        const auto caches = private_placement(p, lib, place);
        for (const auto& t : feasible_supersets(p, d)) {
          std::vector<std::vector<std::vector<int>>> blocks;
          for (int k = 0; k < p.users; ++k) blocks.push_back(pinned_blocks(t, d[k], place.slots[k]));
          std::vector<std::size_t> qpick(p.users, 0);
          while (true) {
            DeliveryRandomness del{t, {}};
            for (int k = 0; k < p.users; ++k) {
              del.expanded.insert(del.expanded.end(), blocks[k][qpick[k]].begin(), blocks[k][qpick[k]].end());
            }
            const auto x = private_delivery(p, lib, d, place, del);
            ++tally.realizations;
            for (int k = 0; k < p.users; ++k) {
              for (int l = 0; l < p.demands_per_user; ++l) {
                const auto lin = private_decode(k, l, x, caches[k], DecoderKind::kLinearSolve);
                const auto str = private_decode(k, l, x, caches[k], DecoderKind::kStructural);
                ++tally.decodes;
                if (!lin.ok() || !same_row(lib, d[k][l], lin.file)) ++tally.wrong;
                if (lin.status != str.status || lin.file != str.file) ++tally.disagreements;
              }
            }
            int k = p.users - 1;
            while (k >= 0 && ++qpick[k] == blocks[k].size()) qpick[k--] = 0;
            if (k < 0) break;
          }
        }
        int k = p.users - 1;
        while (k >= 0 && ++spick[k] == tuples.size()) spick[k--] = 0;
        if (k < 0) break;
      }
    }
  }
}

}  // namespace

int main() {
  report(1, "worked example (5,2,2,r=1)", 1.0, [](Verdict& v) {
    const auto p = make(5, 2, 2, 1, PrimeField::kDefaultModulus, 2);
    const auto lib = FileLibrary::random(p.field, 5, p.file_length(), 1);
    const auto run = simulate_run(p, lib, {{0, 1}, {0, 2}}, 1);
    v.require(run.memory == Rational(5, 4), "M = 5/4");
    v.require(run.rate == Rational(11, 4), "R = 11/4");
    v.require(run.broadcast.ucc.segments.size() == 22, "22 segments");
    for (const auto& s : run.broadcast.ucc.segments) v.require(s.values.size() * 8 == p.file_length(), "length F/8");
    v.require(run.all_correct, "all decodes");
    v.detail << " M=" << to_string(run.memory) << " R=" << to_string(run.rate)
             << " segments=" << run.broadcast.ucc.segments.size() << " F=" << p.file_length();
  });

  report(2, "achievable family (5,2,2)", 30.0, [](Verdict& v) {
    const SystemShape shape{5, 2, 2};
    const auto pts = achievable_points(shape);
    v.require(pts.front().memory == 0 && pts.front().rate == 4, "endpoint (0,4)");
    v.require(pts.back().memory == 5 && pts.back().rate == 0, "endpoint (5,0)");
    for (std::size_t i = 1; i < pts.size(); ++i) {
      v.require(pts[i].memory >= pts[i - 1].memory && pts[i].rate <= pts[i - 1].rate, "monotone");
    }
    // r ranges over [0, K*N-bar] = [0, 8]; 8 is the full-cache endpoint.
    bool rejected = false;
    try {
      make(5, 2, 2, 16).validate();
    } catch (const std::invalid_argument&) {
      rejected = true;
    }
    v.require(rejected, "r=16 rejected");
    std::size_t runs = 0;
    for (int r : {0, 1, 2, 8}) {
      const auto p = make(5, 2, 2, r);
      const auto lib = FileLibrary::random(p.field, 5, p.file_length(), r);
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto run = simulate_run(p, lib, sample_demand(p, seed), seed);
        v.require(run.memory == pts[r].memory && run.rate == pts[r].rate, "measured (M,R) at r=" + std::to_string(r));
        v.require(run.all_correct, "decodes at r=" + std::to_string(r));
        ++runs;
      }
    }
    v.detail << " r in {0,1,2,8}, " << runs << " runs match; r=16 exceeds K*N_bar=8 and is rejected as invalid";
  });

  ExhaustiveTally tally;
  report(3, "exhaustive correctness (3,2,1) r<=2 and (2,2,1) r<=4", 300.0, [&](Verdict& v) {
    for (std::uint32_t q : {2u, 257u}) {
      for (int r = 0; r <= 2; ++r) exhaust(make(3, 2, 1, r, q), 100 + r, tally);
      for (int r = 0; r <= 4; ++r) exhaust(make(2, 2, 1, r, q), 200 + r, tally);
    }
    v.require(tally.wrong == 0, std::to_string(tally.wrong) + " wrong decodes");
    v.detail << " " << tally.realizations << " realizations, " << tally.decodes << " decodes, " << tally.wrong
             << " wrong, q in {2,257}";
  });

  report(4, "P~ law for the three demand matrices, S_0=(0,2)", 120.0, [](Verdict& v) {
    const auto p = make(5, 2, 2, 1);
    const std::vector<DemandMatrix> table{{{0, 1}, {0, 1}}, {{0, 1}, {0, 2}}, {{0, 1}, {2, 3}}};
    const std::vector<int> slots{0, 2};
    const Rational mass = closed_form_ptilde_mass(p);
    v.require(mass == Rational(1, 2880), "closed form 1/2880");
    const auto support = restricted_demand_set(5, 2, 4);
    for (const auto& d : table) {
      const auto law = ptilde_distribution(p, d, 0, slots);
      v.require(law.support_size() == support.size(), "support size");
      for (const auto& s : support) {
        if (law.probability(s) != mass) {
          v.require(false, "uniform mass");
          break;
        }
      }
    }
    const auto inv = verify_ptilde_invariance(p, table, 0, slots);
    v.require(inv.identical, "identical laws");
    v.detail << " support " << support.size() << ", mass " << to_string(mass) << ", max discrepancy "
             << to_string(inv.max_discrepancy);
  });

  report(5, "exact mutual information (2,2,1,q=2,F=4,r=1)", 600.0, [](Verdict& v) {
    const auto p = make(2, 2, 1, 1, 2, 1);
    v.require(p.file_length() == 4, "F = 4");
    const auto mi = exact_mutual_information(p, 0);
    v.require(mi.exactly_zero, "I = 0 exactly");
    v.require(mi.conditional_laws_equal, "conditional laws equal");
    SchemeMutation baseline;
    baseline.identity_permutation = true;
    baseline.fixed_slots = true;
    const auto leak = exact_mutual_information(p, 0, InformationTarget::kOtherDemands, {}, baseline);
    v.require(!leak.exactly_zero && leak.value > 0, "baseline leaks");
    v.detail << " I=" << (mi.exactly_zero ? "0" : "nonzero") << " over " << mi.enumerated_paths.str()
             << " paths; baseline (identity P, fixed slots) I=" << leak.value << " bits";
  });

  report(6, "converse lines, corner envelope and gap for N<=8, K<=4", 300.0, [](Verdict& v) {
    std::size_t shapes = 0;
    std::size_t comparisons = 0;
    std::size_t flagged = 0;
    Rational worst = 0;
    for (int n = 1; n <= 8; ++n) {
      for (int k = 1; k <= 4; ++k) {
        for (int l = 1; l <= n; ++l) {
          const SystemShape s{n, k, l};
          const auto dom = verify_envelope_dominance(s, memory_grid(s, 101), lambda_grid(8));
          v.require(dom.pass, "dominance at " + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(l));
          const auto gap = gap_certificate(s);
          v.require(gap.within_six, "gap at " + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(l));
          if (gap.sup_ratio > worst) worst = gap.sup_ratio;
          comparisons += dom.comparisons;
          flagged += dom.lines_above_corner_envelope;
          ++shapes;
        }
      }
    }
    v.detail << " " << shapes << " shapes, " << comparisons << " exact comparisons, max ratio " << to_string(worst)
             << " (" << to_double(worst) << "), lines above corner envelope: " << flagged;
  });

  report(7, "structural decoder equals linear-solve decoder on criterion 3", 1.0, [&](Verdict& v) {
    v.require(tally.decodes > 0, "criterion 3 ran");
    v.require(tally.disagreements == 0, std::to_string(tally.disagreements) + " disagreements");
    v.detail << " " << tally.decodes << " decode pairs compared, " << tally.disagreements << " disagreements";
  });

  std::cout << (failures == 0 ? "all criteria PASS" : std::to_string(failures) + " criteria FAIL") << std::endl;
  return failures == 0 ? 0 : 1;
}
