#include "roml/lsap.hpp"

#include <limits>
#include <sstream>

#include "roml/errors.hpp"

namespace roml {
namespace {

void validate(const AssignmentProblem& problem) {
  const auto n_src = problem.cost.rows();
  const auto n_tgt = problem.cost.cols();
  if (n_tgt < 1) {
    throw InvalidInputError("assignment problem needs at least one target");
  }
  if (n_src < n_tgt) {
    std::ostringstream os;
    os << "infeasible assignment: " << n_src << " sources for " << n_tgt
       << " targets";
    throw InfeasibleError(os.str());
  }
  require_finite(problem.cost, "assignment cost");
}

double total_of(const Matrix& cost, const std::vector<int>& t2s) {
  double total = 0.0;
  for (std::size_t j = 0; j < t2s.size(); ++j) {
    total += cost(t2s[j], static_cast<Eigen::Index>(j));
  }
  return total;
}

void enumerate(const Matrix& cost, std::vector<int>& current,
               std::vector<char>& used, double partial,
               AssignmentResult& best, bool& found) {
  const auto j = static_cast<Eigen::Index>(current.size());
  if (j == cost.cols()) {
    if (!found || partial < best.total_cost) {
      best.total_cost = partial;
      best.assignment.target_to_source = current;
      found = true;
    }
    return;
  }
  for (int i = 0; i < cost.rows(); ++i) {
    if (used[i]) continue;
    used[i] = 1;
    current.push_back(i);
    enumerate(cost, current, used, partial + cost(i, j), best, found);
    current.pop_back();
    used[i] = 0;
  }
}

}  // namespace

AssignmentResult solve_lsap(const AssignmentProblem& problem) {
  validate(problem);
  const Matrix& c = problem.cost;
  const int n = static_cast<int>(c.cols());  // targets, augmented one by one
  const int m = static_cast<int>(c.rows());  // sources
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // 1-based bookkeeping; index 0 is the virtual root of each search tree.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), min_to(m + 1);
  std::vector<int> owner(m + 1, 0), way(m + 1, 0);
  std::vector<char> visited(m + 1);

  for (int target = 1; target <= n; ++target) {
    owner[0] = target;
    int col = 0;
    std::fill(min_to.begin(), min_to.end(), kInf);
    std::fill(visited.begin(), visited.end(), 0);
    do {
      visited[col] = 1;
      const int row = owner[col];
      double delta = kInf;
      int next = 0;
      for (int s = 1; s <= m; ++s) {
        if (visited[s]) continue;
        const double reduced = c(s - 1, row - 1) - u[row] - v[s];
        if (reduced < min_to[s]) {
          min_to[s] = reduced;
          way[s] = col;
        }
        if (min_to[s] < delta) {
          delta = min_to[s];
          next = s;
        }
      }
      for (int s = 0; s <= m; ++s) {
        if (visited[s]) {
          u[owner[s]] += delta;
          v[s] -= delta;
        } else {
          min_to[s] -= delta;
        }
      }
      col = next;
    } while (owner[col] != 0);
    do {
      const int prev = way[col];
      owner[col] = owner[prev];
      col = prev;
    } while (col != 0);
  }

  AssignmentResult result;
  result.assignment.target_to_source.assign(n, -1);
  for (int s = 1; s <= m; ++s) {
    if (owner[s] != 0) result.assignment.target_to_source[owner[s] - 1] = s - 1;
  }
  result.total_cost = total_of(c, result.assignment.target_to_source);
  return result;
}

AssignmentResult brute_force_lsap(const AssignmentProblem& problem) {
  validate(problem);
  if (problem.cost.rows() > kBruteForceLsapMaxSources) {
    std::ostringstream os;
    os << "brute_force_lsap limited to " << kBruteForceLsapMaxSources
       << " sources, got " << problem.cost.rows();
    throw OversizeError(os.str());
  }
  AssignmentResult best;
  bool found = false;
  std::vector<int> current;
  std::vector<char> used(problem.cost.rows(), 0);
  enumerate(problem.cost, current, used, 0.0, best, found);
  // Recompute in column order so the total matches solve_lsap's summation.
  best.total_cost = total_of(problem.cost, best.assignment.target_to_source);
  return best;
}

bool is_injective(const Assignment& a, int n_sources) {
  std::vector<char> seen(n_sources > 0 ? n_sources : 0, 0);
  for (int s : a.target_to_source) {
    if (s < 0 || s >= n_sources || seen[s]) return false;
    seen[s] = 1;
  }
  return true;
}

}  // namespace roml
