#include "daspa/access_map.hpp"

#include <algorithm>

namespace daspa {

AccessMap AccessMap::from_serving_sets(int num_antennas,
                                       std::vector<std::vector<int>> serving_sets) {
  AccessMap map;
  map.num_antennas_ = num_antennas;
  map.serving_ = std::move(serving_sets);
  for (auto& set : map.serving_) std::sort(set.begin(), set.end());
  map.rebuild_derived();
  return map;
}

void AccessMap::rebuild_derived() {
  const int users = static_cast<int>(serving_.size());
  served_.assign(num_antennas_, {});
  offset_.assign(users, 0);
  var_user_.clear();
  var_antenna_.clear();
  int flat = 0;
  for (int n = 0; n < users; ++n) {
    offset_[n] = flat;
    for (int k : serving_[n]) {
      if (k >= 0 && k < num_antennas_) served_[k].push_back(n);
      var_user_.push_back(n);
      var_antenna_.push_back(k);
      ++flat;
    }
  }
}

int AccessMap::variable_index(int antenna, int user) const {
  const auto& set = serving_[user];
  auto it = std::lower_bound(set.begin(), set.end(), antenna);
  if (it == set.end() || *it != antenna) return -1;
  return offset_[user] + static_cast<int>(it - set.begin());
}

Eigen::VectorXd antenna_sum(const AccessMap& access, const Eigen::VectorXd& x) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(access.num_antennas());
  for (int k = 0; k < access.num_antennas(); ++k) {
    double acc = 0.0;
    for (int n : access.served_set(k)) acc += x[access.variable_index(k, n)];
    out[k] = acc;
  }
  return out;
}

Eigen::VectorXd lift_duals(const AccessMap& access, const Eigen::VectorXd& per_antenna) {
  Eigen::VectorXd out(access.num_variables());
  for (int i = 0; i < access.num_variables(); ++i)
    out[i] = per_antenna[access.antenna_of_variable(i)];
  return out;
}

Eigen::VectorXd lift_per_user(const AccessMap& access, const Eigen::VectorXd& per_user) {
  Eigen::VectorXd out(access.num_variables());
  for (int i = 0; i < access.num_variables(); ++i)
    out[i] = per_user[access.user_of_variable(i)];
  return out;
}

}  // namespace daspa
