#ifndef DASPA_ACCESS_MAP_HPP_
#define DASPA_ACCESS_MAP_HPP_

#include <Eigen/Core>
#include <vector>

namespace daspa {

/// Bipartite antenna-user serving relation.
///
/// Power variables are stacked user-major: all of user 0's serving antennas
/// (ascending antenna index), then user 1's, and so on. The implied binary
/// incidence matrix that maps flat variables to antennas is never stored;
/// antenna_sum() and lift_duals() provide its action.
class AccessMap {
 public:
  AccessMap() = default;

  /// Builds the map from per-user serving sets. Serving sets are sorted
  /// ascending; served sets and the flat variable layout are derived.
  static AccessMap from_serving_sets(int num_antennas,
                                     std::vector<std::vector<int>> serving_sets);

  int num_antennas() const { return num_antennas_; }
  int num_users() const { return static_cast<int>(serving_.size()); }
  /// Total number of power variables, sum of |R(n)| over users.
  int num_variables() const { return static_cast<int>(var_user_.size()); }

  const std::vector<int>& serving_set(int user) const { return serving_[user]; }
  const std::vector<int>& served_set(int antenna) const { return served_[antenna]; }

  /// Flat index of the (antenna, user) power variable, or -1 if the antenna
  /// does not serve the user.
  int variable_index(int antenna, int user) const;

  int user_of_variable(int var) const { return var_user_[var]; }
  int antenna_of_variable(int var) const { return var_antenna_[var]; }
  /// First flat index of the user's block; the block has size |R(n)|.
  int user_offset(int user) const { return offset_[user]; }

  // Mutable access kept for deserialization and corruption tests; normal
  // construction goes through from_serving_sets.
  std::vector<std::vector<int>>& mutable_serving_sets() { return serving_; }
  std::vector<std::vector<int>>& mutable_served_sets() { return served_; }

 private:
  void rebuild_derived();

  int num_antennas_ = 0;
  std::vector<std::vector<int>> serving_;  // user -> antennas, ascending
  std::vector<std::vector<int>> served_;   // antenna -> users, ascending
  std::vector<int> offset_;                // user -> first flat index
  std::vector<int> var_user_;
  std::vector<int> var_antenna_;
};

/// Per-antenna sums of a flat variable vector: out[k] = sum over n in U(k)
/// of x_(k,n), accumulated in ascending user order.
Eigen::VectorXd antenna_sum(const AccessMap& access, const Eigen::VectorXd& x);

/// Expands a per-antenna vector onto flat variables: out[i] = d[antenna(i)].
Eigen::VectorXd lift_duals(const AccessMap& access, const Eigen::VectorXd& per_antenna);

/// Expands a per-user vector onto flat variables: out[i] = u[user(i)].
Eigen::VectorXd lift_per_user(const AccessMap& access, const Eigen::VectorXd& per_user);

}  // namespace daspa

#endif  // DASPA_ACCESS_MAP_HPP_
