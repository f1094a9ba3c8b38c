// privcache: simulate, audit and tradeoff experiments for the demand-private
// multi-demand coded caching scheme.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "privcache/combinatorics.hpp"
#include "privcache/privacy_audit.hpp"
#include "privcache/private_scheme.hpp"
#include "privcache/report.hpp"
#include "privcache/tradeoff.hpp"

using namespace privcache;
using nlohmann::json;

namespace {

enum Exit : int { kSuccess = 0, kCheckFailure = 1, kUsage = 2, kBudget = 3 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Config {
  std::optional<int> files, users;
  int demands_per_user = 1;
  int r = 1;
  std::uint32_t q = PrimeField::kDefaultModulus;
  std::size_t packet_size = 1;
  std::optional<std::size_t> file_length;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  std::string budget = "20000000";
  std::string mode = "all";
  std::uint64_t runs = 1;
  unsigned threads = 1;
  std::string demand;
  std::string slots;
  int observer = 0;
  std::string decoder = "linear";
  bool cross_check = false;
  std::vector<std::string> mutations;
  std::string sweep;
  int lambda_steps = 8;
};

std::vector<int> parse_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not an integer list: '" + text + "'");
    }
  }
  return out;
}

DemandMatrix parse_demand(const std::string& text) {
  DemandMatrix d;
  std::stringstream in(text);
  std::string row;
  while (std::getline(in, row, ';')) d.push_back(parse_list(row));
  return d;
}

SystemShape shape_of(const Config& c) {
  if (!c.files) throw UsageError("--N is required");
  if (!c.users) throw UsageError("--K is required");
  SystemShape shape{*c.files, *c.users, c.demands_per_user};
  shape.validate();
  return shape;
}

SchemeParams params_of(const Config& c) {
  const SystemShape shape = shape_of(c);
  SchemeParams p;
  p.files = shape.files;
  p.users = shape.users;
  p.demands_per_user = shape.demands_per_user;
  p.r = c.r;
  p.field = PrimeField(c.q);
  p.packet_size = c.packet_size;
  if (p.packet_size == 0) throw UsageError("--packet-size must be positive");
  p.validate();
  if (c.file_length) {
    const std::size_t subfiles = p.ucc().subfile_count();
    if (*c.file_length == 0 || *c.file_length % subfiles != 0) {
      throw UsageError("--F must be a positive multiple of C(K*N_bar, r) = " + std::to_string(subfiles));
    }
    p.packet_size = *c.file_length / subfiles;
  }
  return p;
}

EnumerationBudget budget_of(const Config& c) {
  try {
    EnumerationBudget b;
    b.cap = BigInt(c.budget);
    if (b.cap < 0) throw std::invalid_argument("negative");
    return b;
  } catch (const std::exception&) {
    throw UsageError("--budget must be a non-negative integer");
  }
}

SchemeMutation mutation_of(const Config& c) {
  SchemeMutation m;
  for (const auto& name : c.mutations) {
    if (name == "identity-permutation") {
      m.identity_permutation = true;
    } else if (name == "fixed-slots") {
      m.fixed_slots = true;
    } else if (name == "unpinned-blocks") {
      m.unpinned_blocks = true;
    } else {
      throw UsageError("unknown mutation '" + name + "'");
    }
  }
  return m;
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw UsageError("cannot write " + c.out);
  file << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_simulate(const Config& c) {
  const SchemeParams params = params_of(c);
  DecoderKind kind;
  if (c.decoder == "linear") {
    kind = DecoderKind::kLinearSolve;
  } else if (c.decoder == "structural") {
    kind = DecoderKind::kStructural;
  } else {
    throw UsageError("--decoder must be linear or structural");
  }
  std::optional<DemandMatrix> fixed;
  if (!c.demand.empty()) {
    fixed = parse_demand(c.demand);
    validate_demand(params, *fixed);
  }
  if (c.runs == 0) throw UsageError("--runs must be positive");

  bool all_ok = true;
  json traces = json::array();
  std::string csv = run_summary_csv_header() + "\n";
  for (std::uint64_t i = 0; i < c.runs; ++i) {
    const std::uint64_t seed = c.seed + i;
    const auto library = FileLibrary::random(params.field, params.files, params.file_length(), seed);
    const DemandMatrix demand = fixed ? *fixed : sample_demand(params, seed);
    const RunRecord run = simulate_run(params, library, demand, seed, kind, c.cross_check);
    all_ok = all_ok && run.all_correct;
    if (c.format == "csv") {
      csv += run_summary_csv_row(run) + "\n";
    } else {
      traces.push_back(run_trace_json(run));
    }
  }
  if (c.format == "csv") {
    emit(c, csv);
  } else {
    emit(c, dump(c.runs == 1 ? traces.front() : traces));
  }
  if (!all_ok) std::cerr << "simulate: at least one decode did not recover the requested file\n";
  return all_ok ? kSuccess : kCheckFailure;
}

// Audit of the P~ law: every demand matrix sharing the observer's row must
// give the same law, and that law must be uniform with the closed-form mass.
json audit_ptilde(const Config& c, const SchemeParams& params, const EnumerationBudget& budget,
                  SchemeMutation mutation, bool& pass) {
  std::vector<int> row;
  if (!c.demand.empty()) {
    const DemandMatrix d = parse_demand(c.demand);
    validate_demand(params, d);
    row = d.at(c.observer);
  } else {
    row = iota_vector(params.demands_per_user);
  }
  const std::vector<int> slots = c.slots.empty() ? iota_vector(params.demands_per_user) : parse_list(c.slots);

  std::vector<DemandMatrix> demands;
  for (auto& d : all_demand_matrices(params.files, params.users, params.demands_per_user)) {
    if (d[c.observer] == row) demands.push_back(std::move(d));
  }
  const BigInt total = ptilde_enumeration_size(params, demands.front(), mutation) * BigInt(demands.size());
  if (total > budget.cap) throw BudgetExceeded("P~ audit paths over all demand matrices", total, budget.cap);

  const InvarianceReport invariance =
      verify_ptilde_invariance(params, demands, c.observer, slots, budget, mutation);
  const auto law = ptilde_distribution(params, demands.front(), c.observer, slots, budget, mutation);
  const auto support = restricted_demand_set(params.files, params.users, params.distinct_files());
  const Rational mass = closed_form_ptilde_mass(params);
  bool uniform = law.support_size() == support.size();
  for (const auto& v : support) uniform = uniform && law.probability(v) == mass;

  pass = invariance.identical && uniform;
  return {{"observer", c.observer},
          {"observer_row", row},
          {"observer_slots", slots},
          {"demand_matrices", demands.size()},
          {"invariance", invariance_json(invariance)},
          {"support_size", law.support_size()},
          {"restricted_set_size", support.size()},
          {"closed_form_mass", rational_json(mass)},
          {"uniform_closed_form", uniform},
          {"pass", pass}};
}

int cmd_audit(const Config& c) {
  const SchemeParams params = params_of(c);
  if (c.observer < 0 || c.observer >= params.users) throw UsageError("--observer out of range");
  const EnumerationBudget budget = budget_of(c);
  const SchemeMutation mutation = mutation_of(c);
  if (c.mode != "all" && c.mode != "ptilde" && c.mode != "mi" && c.mode != "empirical") {
    throw UsageError("--mode must be all, ptilde, mi or empirical");
  }

  json report = {{"params", params_json(params)},
                 {"mode", c.mode},
                 {"mutations", c.mutations},
                 {"budget", budget.cap.str()}};
  bool pass = true;
  if (c.mode == "all" || c.mode == "ptilde") {
    bool ok = false;
    report["ptilde"] = audit_ptilde(c, params, budget, mutation, ok);
    pass = pass && ok;
  }
  if (c.mode == "all" || c.mode == "mi") {
    const BigInt size = mutual_information_enumeration_size(params, mutation);
    if (c.mode == "all" && size > budget.cap) {
      report["mi"] = {{"skipped", "enumeration size " + size.str() + " exceeds budget"}};
    } else {
      const auto mi = exact_mutual_information(params, c.observer, InformationTarget::kOtherDemands, budget, mutation);
      report["mi"] = mutual_information_json(mi);
      pass = pass && mi.exactly_zero && mi.conditional_laws_equal;
    }
  }
  if (c.mode == "empirical") {
    DemandMatrix d = c.demand.empty() ? sample_demand(params, c.seed) : parse_demand(c.demand);
    validate_demand(params, d);
    const std::vector<int> slots = c.slots.empty() ? iota_vector(params.demands_per_user) : parse_list(c.slots);
    const auto chi = empirical_distribution_check(params, d, c.observer, slots, c.runs, c.seed, mutation);
    report["empirical"] = chi_square_json(chi);
    report["empirical"]["D"] = d;
    pass = pass && chi.pass;
  }
  report["pass"] = pass;
  emit(c, dump(report));
  return pass ? kSuccess : kCheckFailure;
}

int cmd_tradeoff(const Config& c) {
  const SystemShape shape = shape_of(c);
  const auto points = achievable_points(shape);
  const auto corners = converse_corner_points(shape);
  if (c.format == "csv") {
    std::string csv = tradeoff_csv_header() + "\n";
    for (const auto& p : points) csv += tradeoff_csv_row(p) + "\n";
    for (const auto& p : corners) csv += tradeoff_csv_row(p) + "\n";
    emit(c, csv);
    return kSuccess;
  }
  auto envelope_json = [](const Envelope& e) {
    json out = json::array();
    for (const auto& b : e.breakpoints()) out.push_back({{"M", rational_json(b.memory)}, {"R", rational_json(b.rate)}});
    return out;
  };
  auto points_json = [](const std::vector<TradeoffPoint>& ps) {
    json out = json::array();
    for (const auto& p : ps) {
      out.push_back({{"M", rational_json(p.memory)}, {"R", rational_json(p.rate)}, {"provenance", p.provenance.to_string()}});
    }
    return out;
  };
  const auto lambdas = lambda_grid(c.lambda_steps);
  json lines = json::array();
  for (int s = 1; s <= shape.max_s(); ++s) {
    for (const auto& lambda : lambdas) lines.push_back(converse_line_json(converse_line(shape, s, lambda)));
  }
  const auto dominance = verify_envelope_dominance(shape, memory_grid(shape), lambdas);
  const auto gap = gap_certificate(shape);
  emit(c, dump({{"N", shape.files},
                {"K", shape.users},
                {"L", shape.demands_per_user},
                {"achievable_points", points_json(points)},
                {"achievable_envelope", envelope_json(achievable_envelope(shape))},
                {"corner_points", points_json(corners)},
                {"corner_envelope", envelope_json(converse_corner_envelope(shape))},
                {"converse_lines", lines},
                {"dominance", dominance_json(dominance)},
                {"gap", gap_json(gap)}}));
  return dominance.pass && gap.within_six ? kSuccess : kCheckFailure;
}

SweepRange parse_sweep(const std::string& text) {
  static const std::regex pattern(R"(N=1\.\.(\d+),K=1\.\.(\d+))");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw UsageError("--sweep must look like N=1..8,K=1..4");
  SweepRange range{std::stoi(m[1]), std::stoi(m[2])};
  if (range.max_files < 1 || range.max_users < 1) throw UsageError("--sweep bounds must be at least 1");
  return range;
}

int cmd_gap(const Config& c) {
  std::vector<GapCertificate> certs;
  if (!c.sweep.empty()) {
    certs = gap_sweep(parse_sweep(c.sweep), c.threads);
  } else {
    certs.push_back(gap_certificate(shape_of(c)));
  }
  bool pass = true;
  json out = json::array();
  Rational worst = 0;
  for (const auto& cert : certs) {
    pass = pass && cert.within_six;
    if (cert.max_ratio > worst) worst = cert.max_ratio;
    out.push_back(gap_json(cert));
  }
  if (c.sweep.empty()) {
    emit(c, dump(out.front()));
  } else {
    emit(c, dump({{"sweep", c.sweep}, {"count", certs.size()}, {"max_ratio", rational_json(worst)},
                  {"all_within_six", pass}, {"certificates", out}}));
  }
  return pass ? kSuccess : kCheckFailure;
}

void add_system_flags(CLI::App* cmd, Config& c) {
  cmd->add_option("--N", c.files, "number of files");
  cmd->add_option("--K", c.users, "number of users");
  cmd->add_option("--L", c.demands_per_user, "demands per user")->capture_default_str();
}

void add_scheme_flags(CLI::App* cmd, Config& c) {
  add_system_flags(cmd, c);
  cmd->add_option("--r", c.r, "placement parameter in [0, K*N_bar]")->capture_default_str();
  cmd->add_option("--q", c.q, "field size (prime)")->capture_default_str();
  cmd->add_option("--packet-size", c.packet_size, "symbols per subfile")->capture_default_str();
  cmd->add_option("--F", c.file_length, "file length in symbols (sets the packet size)");
  cmd->add_option("--seed", c.seed, "root seed")->capture_default_str();
  cmd->add_option("--demand", c.demand, "demand matrix, rows separated by ';', e.g. 0,1;2,3");
}

void add_output_flags(CLI::App* cmd, Config& c) {
  cmd->add_option("--out", c.out, "output path (default stdout)");
  cmd->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Demand-private multi-demand coded caching experiments"};
  app.require_subcommand(1);
  Config c;

  auto* simulate = app.add_subcommand("simulate", "run placement, delivery and every decode");
  add_scheme_flags(simulate, c);
  add_output_flags(simulate, c);
  simulate->add_option("--runs", c.runs, "number of runs, seeds seed..seed+runs-1")->capture_default_str();
  simulate->add_option("--decoder", c.decoder, "linear or structural")->capture_default_str();
  simulate->add_flag("--cross-check", c.cross_check, "also run the other decoder and compare");

  auto* audit = app.add_subcommand("audit", "privacy checks");
  add_scheme_flags(audit, c);
  add_output_flags(audit, c);
  audit->add_option("--mode", c.mode, "all, ptilde, mi or empirical")->capture_default_str();
  audit->add_option("--budget", c.budget, "enumeration cap")->capture_default_str();
  audit->add_option("--runs", c.runs, "samples for --mode empirical")->capture_default_str();
  audit->add_option("--observer", c.observer, "observing user")->capture_default_str();
  audit->add_option("--slots", c.slots, "observer slot tuple, e.g. 0,2");
  audit->add_option("--mutate", c.mutations, "identity-permutation, fixed-slots or unpinned-blocks");

  auto* tradeoff = app.add_subcommand("tradeoff", "achievable and converse memory-rate curves");
  add_system_flags(tradeoff, c);
  add_output_flags(tradeoff, c);
  tradeoff->add_option("--lambda-steps", c.lambda_steps, "lambda grid resolution")->capture_default_str();

  auto* gap = app.add_subcommand("gap", "multiplicative gap certificates");
  add_system_flags(gap, c);
  add_output_flags(gap, c);
  gap->add_option("--sweep", c.sweep, "N=1..a,K=1..b");
  gap->add_option("--threads", c.threads, "worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(c);
    if (*audit) return cmd_audit(c);
    if (*tradeoff) return cmd_tradeoff(c);
    return cmd_gap(c);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return kBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailure;
  }
}
