#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <tcb/errors.hpp>

namespace tcb {

/// Outcome of one assignment round. Matches, unmatched rows and unmatched
/// columns partition the inputs; no index repeats.
struct AssignmentResult {
    std::vector<std::pair<int, int>> matches;  // (row, col), ascending by row
    std::vector<int> unmatched_rows;
    std::vector<int> unmatched_cols;
    double total_cost = 0.0;
};

/// Optimal bipartite assignment. Entries above max_cost are forbidden;
/// among matchings restricted to allowed entries the solver maximises
/// cardinality first, then minimises total cost, then returns the
/// lexicographically smallest match set among the remaining optima.
///
/// Costs must be finite. An all-forbidden matrix leaves everything
/// unmatched. The lexicographic refinement runs only when an alternate
/// optimum exists, so tie-free inputs pay one solve.
AssignmentResult linear_assignment(const Eigen::MatrixXd& cost, double max_cost);

}  // namespace tcb
