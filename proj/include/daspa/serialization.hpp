#ifndef DASPA_SERIALIZATION_HPP_
#define DASPA_SERIALIZATION_HPP_

#include <json.hpp>
#include <string>

#include "daspa/problem.hpp"
#include "daspa/scenario.hpp"

namespace daspa {

/// {K, N, serving_sets, gains (triplets antenna, user, value), weights,
/// budgets, proximal_params}, gains in linear scale, indices zero-based.
nlohmann::json problem_to_json(const ProblemInstance& inst);
ProblemInstance problem_from_json(const nlohmann::json& doc);

nlohmann::json scenario_to_json(const ChannelScenario& scenario);
ChannelScenario scenario_from_json(const nlohmann::json& doc);

ProblemInstance load_problem(const std::string& path);
void save_problem(const ProblemInstance& inst, const std::string& path);

}  // namespace daspa

#endif  // DASPA_SERIALIZATION_HPP_
