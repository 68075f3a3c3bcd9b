// Independent reference implementations used to pin expected values.
// Everything here is brute force on purpose; none of it shares code with
// the library paths it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <tcb/appearance.hpp>

namespace tcb::testing {

struct BruteForceAssignment {
    int cardinality = 0;
    double total_cost = 0.0;
    std::vector<std::pair<int, int>> matches;  // sorted by row
};

// Exhausts every injective partial assignment over allowed entries and
// keeps the best by (max cardinality, min cost, lexicographic matches).
inline BruteForceAssignment brute_force_assignment(const Eigen::MatrixXd& cost,
                                                   double max_cost) {
    const int rows = static_cast<int>(cost.rows());
    const int cols = static_cast<int>(cost.cols());

    BruteForceAssignment best;
    bool have_best = false;
    std::vector<char> col_used(cols, 0);
    std::vector<std::pair<int, int>> current;

    const auto better = [&](int cardinality, double total) {
        if (!have_best) return true;
        if (cardinality != best.cardinality) return cardinality > best.cardinality;
        if (total != best.total_cost) return total < best.total_cost;
        return current < best.matches;
    };

    const auto recurse = [&](auto&& self, int row, double total) -> void {
        if (row == rows) {
            const int cardinality = static_cast<int>(current.size());
            if (better(cardinality, total)) {
                best.cardinality = cardinality;
                best.total_cost = total;
                best.matches = current;
                have_best = true;
            }
            return;
        }
        for (int c = 0; c < cols; ++c) {
            if (col_used[c] || cost(row, c) > max_cost) continue;
            col_used[c] = 1;
            current.emplace_back(row, c);
            self(self, row + 1, total + cost(row, c));
            current.pop_back();
            col_used[c] = 0;
        }
        self(self, row + 1, total);  // leave this row unmatched
    };
    recurse(recurse, 0, 0.0);
    return best;
}

// Cosine response of one template against every cell, the slow way.
inline std::vector<Eigen::MatrixXd> naive_correlate(const TemplateSet& templates,
                                                    const FeatureMap& fmap) {
    std::vector<Eigen::MatrixXd> maps;
    for (const Embedding& z : templates.templates) {
        Eigen::MatrixXd values(fmap.height, fmap.width);
        for (int y = 0; y < fmap.height; ++y) {
            for (int x = 0; x < fmap.width; ++x) {
                double dot = 0.0, cell_sq = 0.0, z_sq = 0.0;
                for (int c = 0; c < fmap.channels; ++c) {
                    const double cell_value = fmap.cells(y * fmap.width + x, c);
                    dot += cell_value * z(c);
                    cell_sq += cell_value * cell_value;
                    z_sq += z(c) * z(c);
                }
                const double denom = std::sqrt(cell_sq) * std::sqrt(z_sq);
                values(y, x) = denom == 0.0 ? 0.0 : dot / denom;
            }
        }
        maps.push_back(std::move(values));
    }
    return maps;
}

}  // namespace tcb::testing
