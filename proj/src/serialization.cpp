#include "daspa/serialization.hpp"

#include <fstream>
#include <stdexcept>

namespace daspa {
namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& arr) {
  Eigen::VectorXd v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) v[static_cast<int>(i)] = arr[i].get<double>();
  return v;
}

}  // namespace

nlohmann::json problem_to_json(const ProblemInstance& inst) {
  const AccessMap& access = inst.access;
  nlohmann::json doc;
  doc["K"] = access.num_antennas();
  doc["N"] = access.num_users();
  nlohmann::json serving = nlohmann::json::array();
  for (int n = 0; n < access.num_users(); ++n) serving.push_back(access.serving_set(n));
  doc["serving_sets"] = serving;
  nlohmann::json gains = nlohmann::json::array();
  for (int i = 0; i < access.num_variables(); ++i)
    gains.push_back({access.antenna_of_variable(i), access.user_of_variable(i), inst.gains[i]});
  doc["gains"] = gains;
  doc["weights"] = vector_to_json(inst.weights);
  doc["budgets"] = vector_to_json(inst.budgets);
  doc["proximal_params"] = vector_to_json(inst.proximal);
  return doc;
}

ProblemInstance problem_from_json(const nlohmann::json& doc) {
  const int K = doc.at("K").get<int>();
  const int N = doc.at("N").get<int>();
  std::vector<std::vector<int>> serving = doc.at("serving_sets").get<std::vector<std::vector<int>>>();
  if (static_cast<int>(serving.size()) != N)
    throw std::runtime_error("problem_from_json: serving_sets length != N");

  ProblemInstance inst;
  inst.access = AccessMap::from_serving_sets(K, std::move(serving));
  inst.gains = Eigen::VectorXd::Constant(inst.access.num_variables(), -1.0);
  for (const auto& triplet : doc.at("gains")) {
    const int k = triplet.at(0).get<int>();
    const int n = triplet.at(1).get<int>();
    const int var = (n >= 0 && n < N) ? inst.access.variable_index(k, n) : -1;
    if (var < 0)
      throw std::runtime_error("problem_from_json: gain entry (" + std::to_string(k) + "," +
                               std::to_string(n) + ") not in access map");
    if (inst.gains[var] >= 0.0)
      throw std::runtime_error("problem_from_json: duplicate gain entry (" + std::to_string(k) +
                               "," + std::to_string(n) + ")");
    inst.gains[var] = triplet.at(2).get<double>();
  }
  for (int i = 0; i < inst.access.num_variables(); ++i) {
    if (inst.gains[i] < 0.0)
      throw std::runtime_error("problem_from_json: missing gain for variable " + std::to_string(i));
  }
  inst.weights = vector_from_json(doc.at("weights"));
  inst.budgets = vector_from_json(doc.at("budgets"));
  inst.proximal = vector_from_json(doc.at("proximal_params"));
  return inst;
}

nlohmann::json scenario_to_json(const ChannelScenario& scenario) {
  nlohmann::json doc;
  doc["seed"] = scenario.seed;
  doc["spacing_m"] = scenario.topology.spacing;
  nlohmann::json antennas = nlohmann::json::array();
  for (int k = 0; k < scenario.topology.antenna_positions.rows(); ++k)
    antennas.push_back({scenario.topology.antenna_positions(k, 0),
                        scenario.topology.antenna_positions(k, 1)});
  doc["antenna_positions"] = antennas;
  nlohmann::json users = nlohmann::json::array();
  for (int n = 0; n < scenario.topology.user_positions.rows(); ++n)
    users.push_back({scenario.topology.user_positions(n, 0),
                     scenario.topology.user_positions(n, 1)});
  doc["user_positions"] = users;
  doc["bs_of_antenna"] = scenario.topology.bs_of_antenna;

  nlohmann::json gains = nlohmann::json::array();
  nlohmann::json large_scale = nlohmann::json::array();
  for (int k = 0; k < scenario.raw_gain.rows(); ++k) {
    for (int n = 0; n < scenario.raw_gain.cols(); ++n) {
      gains.push_back({k, n, scenario.raw_gain(k, n)});
      large_scale.push_back({k, n, scenario.large_scale_db(k, n)});
    }
  }
  doc["gains"] = gains;
  doc["large_scale_db"] = large_scale;
  doc["noise_power_watt"] = scenario.noise_power;
  doc["bandwidth_hz"] = scenario.bandwidth_hz;
  doc["sigma_peak_watt"] = vector_to_json(scenario.sigma_peak);

  nlohmann::json schedule;
  schedule["channel_of_user"] = scenario.schedule.channel_of_user;
  nlohmann::json interference = nlohmann::json::array();
  for (const auto& set : scenario.schedule.interference) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [k, m] : set) pairs.push_back({k, m});
    interference.push_back(pairs);
  }
  schedule["interference"] = interference;
  doc["schedule"] = schedule;
  return doc;
}

ChannelScenario scenario_from_json(const nlohmann::json& doc) {
  ChannelScenario scenario;
  scenario.seed = doc.at("seed").get<std::uint64_t>();
  scenario.topology.spacing = doc.at("spacing_m").get<double>();
  const auto& antennas = doc.at("antenna_positions");
  scenario.topology.antenna_positions.resize(antennas.size(), 2);
  for (size_t k = 0; k < antennas.size(); ++k) {
    scenario.topology.antenna_positions(static_cast<int>(k), 0) = antennas[k][0].get<double>();
    scenario.topology.antenna_positions(static_cast<int>(k), 1) = antennas[k][1].get<double>();
  }
  const auto& users = doc.at("user_positions");
  scenario.topology.user_positions.resize(users.size(), 2);
  for (size_t n = 0; n < users.size(); ++n) {
    scenario.topology.user_positions(static_cast<int>(n), 0) = users[n][0].get<double>();
    scenario.topology.user_positions(static_cast<int>(n), 1) = users[n][1].get<double>();
  }
  scenario.topology.bs_of_antenna = doc.at("bs_of_antenna").get<std::vector<int>>();

  const int K = static_cast<int>(antennas.size());
  const int N = static_cast<int>(users.size());
  scenario.raw_gain.setZero(K, N);
  scenario.large_scale_db.setZero(K, N);
  for (const auto& triplet : doc.at("gains"))
    scenario.raw_gain(triplet[0].get<int>(), triplet[1].get<int>()) = triplet[2].get<double>();
  for (const auto& triplet : doc.at("large_scale_db"))
    scenario.large_scale_db(triplet[0].get<int>(), triplet[1].get<int>()) =
        triplet[2].get<double>();
  scenario.noise_power = doc.at("noise_power_watt").get<double>();
  scenario.bandwidth_hz = doc.at("bandwidth_hz").get<double>();
  scenario.sigma_peak = vector_from_json(doc.at("sigma_peak_watt"));

  const auto& schedule = doc.at("schedule");
  scenario.schedule.channel_of_user = schedule.at("channel_of_user").get<std::vector<int>>();
  scenario.schedule.interference.clear();
  for (const auto& pairs : schedule.at("interference")) {
    std::vector<std::pair<int, int>> set;
    for (const auto& pair : pairs) set.emplace_back(pair[0].get<int>(), pair[1].get<int>());
    scenario.schedule.interference.push_back(std::move(set));
  }
  return scenario;
}

ProblemInstance load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json doc;
  in >> doc;
  return problem_from_json(doc);
}

void save_problem(const ProblemInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << problem_to_json(inst).dump(2) << "\n";
}

}  // namespace daspa
