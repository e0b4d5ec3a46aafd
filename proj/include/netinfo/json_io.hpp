#pragma once

#include <string>

#include <json.hpp>

#include "netinfo/converse.hpp"
#include "netinfo/regions.hpp"
#include "netinfo/sim.hpp"
#include "netinfo/tilting.hpp"

// Network file schema and report serialization. Channels come in three
// forms: "dense" (flat row-major probability array), "product_links"
// (independent per-link DMC tables) and "erasure" (edge list with erasure
// probabilities). Probabilities may be doubles or decimal strings.

namespace netinfo {

struct parse_error : error { using error::error; };

NetworkSpec parse_network_json(const nlohmann::json& j);
NetworkSpec load_network_file(const std::string& path);

nlohmann::json network_to_json(const NetworkSpec& spec);

// doubles rounded to 12 significant digits for stable diff-based testing
nlohmann::json j12(double v);

nlohmann::json membership_report_to_json(const MembershipReport& rep);
nlohmann::json capacity_report_to_json(const LinkCapacities& caps,
                                       const std::vector<CutBound>& rprime);
nlohmann::json tilted_sequence_to_json(const TiltedSequence& tilt);
nlohmann::json certificate_to_json(const Certificate& cert);

std::string experiment_to_csv(const std::vector<ExperimentCell>& cells);

}  // namespace netinfo
