#include "dispatchsim/policy_io.hpp"

#include <fstream>
#include <sstream>

#include "dispatchsim/errors.hpp"

namespace dispatchsim {

nlohmann::json closest_first_to_json() {
  return {{"type", "closest_first"}};
}

nlohmann::json heuristic_to_json(const HeuristicParams& params) {
  return {{"type", "heuristic"},
          {"T1", params.T1},
          {"T2", params.T2},
          {"delta", params.delta},
          {"percentile", params.percentile}};
}

nlohmann::json adp_to_json(const AdpParams& params) {
  return {{"type", "adp"},
          {"basis", basis_selector_name(params.basis.selector)},
          {"gamma", params.gamma},
          {"samples", params.samples},
          {"crn", params.crn},
          {"percentile", params.percentile},
          {"epsilon", params.epsilon},
          {"alpha0", params.coeffs.alpha0},
          {"alphas", params.coeffs.alphas}};
}

std::unique_ptr<Policy> policy_from_json(const nlohmann::json& doc,
                                         const Network& net, int M) {
  try {
    const nlohmann::json& j =
        doc.contains("type") ? doc : doc.at("policy");
    const std::string type = j.at("type").get<std::string>();
    if (type == "closest_first") return std::make_unique<ClosestFirstPolicy>();
    if (type == "heuristic") {
      HeuristicParams p;
      p.T1 = j.at("T1").get<double>();
      p.T2 = j.at("T2").get<double>();
      p.delta = j.at("delta").get<double>();
      p.percentile = j.value("percentile", 0.8);
      return std::make_unique<HeuristicPolicy>(p);
    }
    if (type == "adp") {
      AdpParams p;
      p.basis.selector = basis_selector_from_name(j.at("basis").get<std::string>());
      p.gamma = j.value("gamma", 0.99);
      p.samples = j.value("samples", 30);
      p.crn = j.value("crn", true);
      p.percentile = j.value("percentile", 0.8);
      p.epsilon = j.value("epsilon", 0.01);
      p.coeffs.alpha0 = j.at("alpha0").get<double>();
      p.coeffs.alphas = j.at("alphas").get<std::vector<double>>();
      return std::make_unique<AdpPolicy>(net, p, M);
    }
    throw InvalidInput("unknown policy type: " + type);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad policy json: ") + e.what());
  }
}

std::unique_ptr<Policy> load_policy(const std::string& path,
                                    const Network& net, int M) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  return policy_from_json(j, net, M);
}

}
