#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "dispatchsim/adp.hpp"
#include "dispatchsim/policies.hpp"

namespace dispatchsim {

// Self-describing policy documents: the JSON carries everything needed to
// rebuild the policy against a network (basis set, discount, sampling
// settings, coefficients or heuristic parameters).
nlohmann::json closest_first_to_json();
nlohmann::json heuristic_to_json(const HeuristicParams& params);
nlohmann::json adp_to_json(const AdpParams& params);

// Accepts either a bare policy object or a document with a "policy" field
// (as written by the tuner commands). Throws InvalidInput on anything
// malformed.
std::unique_ptr<Policy> policy_from_json(const nlohmann::json& j,
                                         const Network& net, int M);
std::unique_ptr<Policy> load_policy(const std::string& path,
                                    const Network& net, int M);

}  // namespace dispatchsim
