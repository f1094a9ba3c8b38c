#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "privcache/privacy_audit.hpp"
#include "privcache/private_scheme.hpp"
#include "privcache/tradeoff.hpp"

namespace privcache {

/// {"num": "5", "den": "4"}; strings keep big values exact.
nlohmann::json rational_json(const Rational& x);
Rational rational_from_json(const nlohmann::json& j);

nlohmann::json params_json(const SchemeParams& params);

/// Full trace of one run: seed, parameters, D, P, S, T, Q~, P~, the segment
/// table, verdicts and the exact figures of merit.
nlohmann::json run_trace_json(const RunRecord& run);

std::string run_summary_csv_header();
/// seed, N, K, L, r, M_num, M_den, R_num, R_den, segments, all_correct
std::string run_summary_csv_row(const RunRecord& run);

nlohmann::json distribution_json(const ExactDistribution& law);
nlohmann::json invariance_json(const InvarianceReport& report);
nlohmann::json mutual_information_json(const MutualInformationResult& result);
nlohmann::json chi_square_json(const ChiSquareReport& report);

std::string tradeoff_csv_header();  // M_num,M_den,R_num,R_den,provenance
std::string tradeoff_csv_row(const TradeoffPoint& point);

nlohmann::json converse_line_json(const ConverseLine& line);
nlohmann::json dominance_json(const DominanceReport& report);
nlohmann::json gap_json(const GapCertificate& cert);

}  // namespace privcache
