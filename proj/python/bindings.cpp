// Python bindings. Results cross the boundary as JSON text so rationals stay
// exact; the Python wrapper turns {"num", "den"} pairs into Fractions.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "privcache/combinatorics.hpp"
#include "privcache/privacy_audit.hpp"
#include "privcache/report.hpp"
#include "privcache/tradeoff.hpp"

namespace py = pybind11;
using namespace privcache;
using nlohmann::json;

namespace {

SchemeParams scheme(int n, int k, int l, int r, std::uint32_t q, std::size_t packet) {
  SchemeParams p;
  p.files = n;
  p.users = k;
  p.demands_per_user = l;
  p.r = r;
  p.field = PrimeField(q);
  p.packet_size = packet;
  p.validate();
  return p;
}

SchemeMutation mutation(bool identity_permutation, bool fixed_slots, bool unpinned_blocks) {
  SchemeMutation m;
  m.identity_permutation = identity_permutation;
  m.fixed_slots = fixed_slots;
  m.unpinned_blocks = unpinned_blocks;
  return m;
}

json points_json(const std::vector<TradeoffPoint>& pts) {
  json out = json::array();
  for (const auto& p : pts) {
    out.push_back({{"M", rational_json(p.memory)}, {"R", rational_json(p.rate)}, {"provenance", p.provenance.to_string()}});
  }
  return out;
}

std::string simulate(int n, int k, int l, int r, std::uint32_t q, std::size_t packet, std::uint64_t seed,
                     std::optional<DemandMatrix> demand, const std::string& decoder) {
  const auto p = scheme(n, k, l, r, q, packet);
  if (decoder != "linear" && decoder != "structural") throw py::value_error("decoder must be linear or structural");
  const auto kind = decoder == "linear" ? DecoderKind::kLinearSolve : DecoderKind::kStructural;
  const auto lib = FileLibrary::random(p.field, n, p.file_length(), seed);
  const DemandMatrix d = demand ? *demand : sample_demand(p, seed);
  return run_trace_json(simulate_run(p, lib, d, seed, kind)).dump();
}

std::string ptilde_law(int n, int k, int l, const DemandMatrix& demand, int observer, const std::vector<int>& slots,
                       bool identity_permutation, bool fixed_slots, bool unpinned_blocks) {
  const auto p = scheme(n, k, l, 0, PrimeField::kDefaultModulus, 1);
  const auto law = ptilde_distribution(p, demand, observer, slots, {},
                                       mutation(identity_permutation, fixed_slots, unpinned_blocks));
  return json{{"support_size", law.support_size()},
              {"total", rational_json(law.total())},
              {"closed_form_mass", rational_json(closed_form_ptilde_mass(p))},
              {"restricted_set_size", restricted_demand_set(n, k, p.distinct_files()).size()},
              {"masses", [&] {
                 json m = json::array();
                 for (const auto& [_, v] : law.mass) m.push_back(rational_json(v));
                 return m;
               }()}}
      .dump();
}

std::string ptilde_invariance(int n, int k, int l, const std::vector<DemandMatrix>& demands, int observer,
                              const std::vector<int>& slots, bool identity_permutation, bool fixed_slots) {
  const auto p = scheme(n, k, l, 0, PrimeField::kDefaultModulus, 1);
  return invariance_json(
             verify_ptilde_invariance(p, demands, observer, slots, {}, mutation(identity_permutation, fixed_slots, false)))
      .dump();
}

std::string mutual_information(int n, int k, int l, int r, std::uint32_t q, std::size_t packet, int observer,
                               bool own_demand, bool identity_permutation, bool fixed_slots, const std::string& cap) {
  const auto p = scheme(n, k, l, r, q, packet);
  EnumerationBudget budget;
  budget.cap = BigInt(cap);
  const auto target = own_demand ? InformationTarget::kOwnDemand : InformationTarget::kOtherDemands;
  return mutual_information_json(exact_mutual_information(p, observer, target, budget,
                                                          mutation(identity_permutation, fixed_slots, false)))
      .dump();
}

std::string tradeoff(int n, int k, int l) {
  const SystemShape s{n, k, l};
  return json{{"achievable", points_json(achievable_points(s))}, {"corners", points_json(converse_corner_points(s))}}
      .dump();
}

std::string converse(int n, int k, int l, int s, const std::string& lambda) {
  return converse_line_json(converse_line({n, k, l}, s, parse_rational(lambda))).dump();
}

std::string envelope_value(int n, int k, int l, const std::string& memory, bool achievable) {
  const SystemShape s{n, k, l};
  const Rational m = parse_rational(memory);
  const Envelope e = achievable ? achievable_envelope(s) : converse_corner_envelope(s);
  return rational_json(e(m)).dump();
}

std::string gap(int n, int k, int l) { return gap_json(gap_certificate({n, k, l})).dump(); }

std::string sweep(int max_files, int max_users, unsigned threads) {
  json out = json::array();
  for (const auto& c : gap_sweep({max_files, max_users}, threads)) out.push_back(gap_json(c));
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Demand-private multi-demand coded caching core";

  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def("binomial", [](std::int64_t n, std::int64_t k) { return binomial(n, k).str(); });
  m.def("simulate", &simulate, py::arg("N"), py::arg("K"), py::arg("L"), py::arg("r"), py::arg("q") = 257,
        py::arg("packet_size") = 1, py::arg("seed") = 0, py::arg("demand") = std::nullopt,
        py::arg("decoder") = "linear");
  m.def("ptilde_law", &ptilde_law, py::arg("N"), py::arg("K"), py::arg("L"), py::arg("demand"),
        py::arg("observer") = 0, py::arg("slots"), py::arg("identity_permutation") = false,
        py::arg("fixed_slots") = false, py::arg("unpinned_blocks") = false);
  m.def("ptilde_invariance", &ptilde_invariance, py::arg("N"), py::arg("K"), py::arg("L"), py::arg("demands"),
        py::arg("observer") = 0, py::arg("slots"), py::arg("identity_permutation") = false,
        py::arg("fixed_slots") = false);
  m.def("mutual_information", &mutual_information, py::arg("N"), py::arg("K"), py::arg("L"), py::arg("r"),
        py::arg("q") = 2, py::arg("packet_size") = 1, py::arg("observer") = 0, py::arg("own_demand") = false,
        py::arg("identity_permutation") = false, py::arg("fixed_slots") = false, py::arg("cap") = "20000000");
  m.def("tradeoff", &tradeoff, py::arg("N"), py::arg("K"), py::arg("L"));
  m.def("converse_line", &converse, py::arg("N"), py::arg("K"), py::arg("L"), py::arg("s"), py::arg("lam"));
  m.def("envelope_value", &envelope_value, py::arg("N"), py::arg("K"), py::arg("L"), py::arg("M"),
        py::arg("achievable") = true);
  m.def("gap_certificate", &gap, py::arg("N"), py::arg("K"), py::arg("L"));
  m.def("gap_sweep", &sweep, py::arg("max_files") = 8, py::arg("max_users") = 4, py::arg("threads") = 1);
}
