#include "privcache/report.hpp"

#include <sstream>

namespace privcache {

using nlohmann::json;

json rational_json(const Rational& x) {
  return {{"num", numerator_of(x).str()}, {"den", denominator_of(x).str()}};
}

Rational rational_from_json(const json& j) {
  return make_rational(BigInt(j.at("num").get<std::string>()), BigInt(j.at("den").get<std::string>()));
}

json params_json(const SchemeParams& params) {
  return {{"N", params.files},
          {"K", params.users},
          {"L", params.demands_per_user},
          {"r", params.r},
          {"q", params.field.modulus()},
          {"packet_size", params.packet_size},
          {"N_bar", params.distinct_files()},
          {"F", params.file_length()}};
}

json run_trace_json(const RunRecord& run) {
  json segments = json::array();
  for (const auto& seg : run.broadcast.ucc.segments) {
    segments.push_back({{"rank", seg.rank}, {"label", seg.label}, {"values", seg.values}});
  }
  json verdicts = json::array();
  for (std::size_t k = 0; k < run.verdicts.size(); ++k) {
    json row = json::array();
    for (std::size_t l = 0; l < run.verdicts[k].size(); ++l) {
      row.push_back({{"file", run.demand[k][l]},
                     {"slot", run.placement.slots[k][l]},
                     {"status", to_string(run.verdicts[k][l])},
                     {"correct", static_cast<bool>(run.correct[k][l])}});
    }
    verdicts.push_back(std::move(row));
  }
  return {{"seed", run.seed},
          {"params", params_json(run.params)},
          {"D", run.demand},
          {"P", run.placement.permutation},
          {"S", run.placement.slots},
          {"T", run.delivery.superset},
          {"Q_tilde", run.delivery.expanded},
          {"P_tilde", run.broadcast.permuted_demand()},
          {"leaders", leaders(run.broadcast.ucc.params)},
          {"segment_count", run.broadcast.ucc.segments.size()},
          {"segment_length", run.params.packet_size},
          {"segments", std::move(segments)},
          {"verdicts", std::move(verdicts)},
          {"M", rational_json(run.memory)},
          {"R", rational_json(run.rate)},
          {"all_correct", run.all_correct}};
}

std::string run_summary_csv_header() { return "seed,N,K,L,r,M_num,M_den,R_num,R_den,segments,all_correct"; }

std::string run_summary_csv_row(const RunRecord& run) {
  std::ostringstream out;
  out << run.seed << ',' << run.params.files << ',' << run.params.users << ',' << run.params.demands_per_user << ','
      << run.params.r << ',' << numerator_of(run.memory) << ',' << denominator_of(run.memory)
      << ',' << numerator_of(run.rate) << ',' << denominator_of(run.rate) << ','
      << run.broadcast.ucc.segments.size() << ',' << (run.all_correct ? 1 : 0);
  return out.str();
}

json distribution_json(const ExactDistribution& law) {
  json masses = json::array();
  for (const auto& [outcome, p] : law.mass) masses.push_back({{"outcome", outcome}, {"p", rational_json(p)}});
  return {{"support_size", law.support_size()}, {"total", rational_json(law.total())}, {"mass", std::move(masses)}};
}

json invariance_json(const InvarianceReport& report) {
  return {{"identical", report.identical},
          {"max_discrepancy", rational_json(report.max_discrepancy)},
          {"witness", report.witness},
          {"witness_demand", report.witness_demand}};
}

json mutual_information_json(const MutualInformationResult& result) {
  return {{"exactly_zero", result.exactly_zero},
          {"conditional_laws_equal", result.conditional_laws_equal},
          {"max_factorization_gap", rational_json(result.max_factorization_gap)},
          {"value", result.value},
          {"enumerated_paths", result.enumerated_paths.str()},
          {"observations", result.observations}};
}

json chi_square_json(const ChiSquareReport& report) {
  return {{"runs", report.runs},
          {"cells", report.cells},
          {"out_of_support", report.out_of_support},
          {"statistic", report.statistic},
          {"dof", report.degrees_of_freedom},
          {"critical_value", report.critical_value},
          {"pass", report.pass}};
}

std::string tradeoff_csv_header() { return "M_num,M_den,R_num,R_den,provenance"; }

std::string tradeoff_csv_row(const TradeoffPoint& point) {
  std::ostringstream out;
  out << numerator_of(point.memory) << ',' << denominator_of(point.memory) << ',' << numerator_of(point.rate)
      << ',' << denominator_of(point.rate) << ',' << point.provenance.to_string();
  return out.str();
}

json converse_line_json(const ConverseLine& line) {
  return {{"s", line.s},
          {"lambda", rational_json(line.lambda)},
          {"t", line.t},
          {"intercept", rational_json(line.intercept)},
          {"slope", rational_json(line.slope)}};
}

json dominance_json(const DominanceReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"M", rational_json(v.memory)},
                          {"lower", rational_json(v.lower)},
                          {"upper", rational_json(v.upper)},
                          {"bound", v.bound}});
  }
  return {{"pass", report.pass},
          {"comparisons", report.comparisons},
          {"lines_above_corner_envelope", report.lines_above_corner_envelope},
          {"violations", std::move(violations)}};
}

json gap_json(const GapCertificate& cert) {
  return {{"N", cert.shape.files},
          {"K", cert.shape.users},
          {"L", cert.shape.demands_per_user},
          {"max_ratio", rational_json(cert.max_ratio)},
          {"witness", {{"M", rational_json(cert.witness_memory)},
                       {"achievable", rational_json(cert.witness_upper)},
                       {"converse", rational_json(cert.witness_lower)}}},
          {"sup_ratio", rational_json(cert.sup_ratio)},
          {"sup_witness_M", rational_json(cert.sup_witness_memory)},
          {"within_six", cert.within_six}};
}

}  // namespace privcache
