#include <tcb/assignment.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace tcb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Allowed edges of one row: (column, cost shifted to be nonnegative).
struct Edge {
    int col;
    double cost;
};

struct Graph {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<Edge>> adj;  // per row, ascending column order
};

struct Solution {
    std::vector<int> match_row;  // row -> col or -1
    std::vector<int> match_col;  // col -> row or -1
    std::vector<double> pi_row;  // node potentials (reduced-cost invariant)
    std::vector<double> pi_col;
    double pi_sink = 0.0;
    int cardinality = 0;
};

// Min-cost max-cardinality matching by successive shortest augmenting
// paths over Johnson-reduced costs. Every scan runs in index order and all
// comparisons are strict, so the result is a pure function of the input.
// active_row/active_col restrict the instance (used by the lexicographic
// refinement); pass empty vectors for the full problem.
Solution solve(const Graph& g, const std::vector<char>& active_row,
               const std::vector<char>& active_col) {
    const auto row_on = [&](int r) { return active_row.empty() || active_row[r]; };
    const auto col_on = [&](int c) { return active_col.empty() || active_col[c]; };

    Solution s;
    s.match_row.assign(g.rows, -1);
    s.match_col.assign(g.cols, -1);
    s.pi_row.assign(g.rows, 0.0);
    s.pi_col.assign(g.cols, 0.0);

    // node encoding for the priority queue: rows first so that on ties the
    // frontier expands before a target column is accepted
    enum : int { kRow = 0, kCol = 1 };
    using QItem = std::tuple<double, int, int>;  // (dist, kind, index)

    std::vector<double> dist_row(g.rows), dist_col(g.cols);
    std::vector<int> parent_col(g.cols);   // row that reached the column
    std::vector<int> parent_row(g.rows);   // matched column we stepped back from

    while (true) {
        std::fill(dist_row.begin(), dist_row.end(), kInf);
        std::fill(dist_col.begin(), dist_col.end(), kInf);
        std::fill(parent_col.begin(), parent_col.end(), -1);
        std::fill(parent_row.begin(), parent_row.end(), -1);

        std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> queue;
        for (int r = 0; r < g.rows; ++r) {
            if (row_on(r) && s.match_row[r] < 0) {
                dist_row[r] = 0.0;
                queue.emplace(0.0, kRow, r);
            }
        }

        int target = -1;
        double target_dist = kInf;
        while (!queue.empty()) {
            const auto [d, kind, idx] = queue.top();
            queue.pop();
            if (kind == kRow) {
                if (d != dist_row[idx]) continue;
                for (const Edge& e : g.adj[idx]) {
                    if (!col_on(e.col)) continue;
                    const double reduced = e.cost + s.pi_row[idx] - s.pi_col[e.col];
                    const double nd = d + reduced;
                    if (nd < dist_col[e.col]) {
                        dist_col[e.col] = nd;
                        parent_col[e.col] = idx;
                        queue.emplace(nd, kCol, e.col);
                    }
                }
            } else {
                if (d != dist_col[idx]) continue;
                const int matched = s.match_col[idx];
                if (matched < 0) {
                    target = idx;
                    target_dist = d;
                    break;
                }
                // backward arc along the matched edge is tight (cost 0)
                if (d < dist_row[matched]) {
                    dist_row[matched] = d;
                    parent_row[matched] = idx;
                    queue.emplace(d, kRow, matched);
                }
            }
        }
        if (target < 0) break;  // no augmenting path: cardinality is maximal

        for (int r = 0; r < g.rows; ++r) {
            s.pi_row[r] += std::min(dist_row[r], target_dist);
        }
        for (int c = 0; c < g.cols; ++c) {
            s.pi_col[c] += std::min(dist_col[c], target_dist);
        }
        s.pi_sink += target_dist;

        int col = target;
        while (col >= 0) {
            const int row = parent_col[col];
            const int previous = parent_row[row];
            s.match_row[row] = col;
            s.match_col[col] = row;
            col = previous;
        }
        ++s.cardinality;
    }
    return s;
}

// True when the residual graph has a zero-reduced-cost directed cycle,
// i.e. some other matching attains the same (cardinality, cost). Arcs:
// forward unmatched edges at zero reduced cost, backward matched edges
// (always tight), and the source/sink arcs whose slack is the potential.
bool has_alternate_optimum(const Graph& g, const Solution& s) {
    // nodes: 0 = source, 1 = sink, rows, cols
    const int row_base = 2;
    const int col_base = 2 + g.rows;
    const int n = 2 + g.rows + g.cols;
    std::vector<std::vector<int>> out(n);

    for (int r = 0; r < g.rows; ++r) {
        if (s.match_row[r] < 0) {
            if (s.pi_row[r] == 0.0) out[0].push_back(row_base + r);  // source -> free row
        } else {
            if (s.pi_row[r] == 0.0) out[row_base + r].push_back(0);  // matched row -> source
        }
        for (const Edge& e : g.adj[r]) {
            if (s.match_row[r] == e.col) {
                out[col_base + e.col].push_back(row_base + r);  // backward, tight
            } else {
                const double reduced = e.cost + s.pi_row[r] - s.pi_col[e.col];
                if (reduced == 0.0) out[row_base + r].push_back(col_base + e.col);
            }
        }
    }
    for (int c = 0; c < g.cols; ++c) {
        if (s.match_col[c] < 0) {
            out[col_base + c].push_back(1);  // free col -> sink, always tight
        } else if (s.pi_col[c] == s.pi_sink) {
            out[1].push_back(col_base + c);  // sink -> matched col
        }
    }

    // cycle detection via iterative three-colour DFS
    std::vector<char> color(n, 0);
    std::vector<std::pair<int, std::size_t>> stack;
    for (int start = 0; start < n; ++start) {
        if (color[start] != 0) continue;
        stack.emplace_back(start, 0);
        color[start] = 1;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            if (next < out[node].size()) {
                const int to = out[node][next++];
                if (color[to] == 1) return true;
                if (color[to] == 0) {
                    color[to] = 1;
                    stack.emplace_back(to, 0);
                }
            } else {
                color[node] = 2;
                stack.pop_back();
            }
        }
    }
    return false;
}

double matching_cost(const Eigen::MatrixXd& cost, const std::vector<int>& match_row) {
    double total = 0.0;
    for (int r = 0; r < static_cast<int>(match_row.size()); ++r) {
        if (match_row[r] >= 0) total += cost(r, match_row[r]);
    }
    return total;
}

// Rebuilds the match set in lexicographic order: fix, row by row, the
// smallest column that still extends to an optimum of the full problem.
// Each probe is a fresh solve of the residual instance, so this only runs
// when has_alternate_optimum reported a tie.
std::vector<int> lexicographic_refine(const Graph& g, const Eigen::MatrixXd& cost,
                                      int best_cardinality, double best_cost) {
    const double tol = 1e-9 * std::max(1.0, std::abs(best_cost));
    std::vector<char> active_row(g.rows, 1), active_col(g.cols, 1);
    std::vector<int> result(g.rows, -1);
    int fixed_count = 0;
    double fixed_cost = 0.0;

    for (int r = 0; r < g.rows; ++r) {
        active_row[r] = 0;
        for (const Edge& e : g.adj[r]) {
            if (!active_col[e.col]) continue;
            active_col[e.col] = 0;
            const Solution residual = solve(g, active_row, active_col);
            const double candidate_cost = fixed_cost + cost(r, e.col) +
                                          matching_cost(cost, residual.match_row);
            if (residual.cardinality + fixed_count + 1 == best_cardinality &&
                std::abs(candidate_cost - best_cost) <= tol) {
                result[r] = e.col;
                ++fixed_count;
                fixed_cost += cost(r, e.col);
                break;
            }
            active_col[e.col] = 1;
        }
        if (result[r] < 0) {
            // row is unmatched in every optimum extending the prefix
            active_row[r] = 1;
        }
    }
    return result;
}

}  // namespace

AssignmentResult linear_assignment(const Eigen::MatrixXd& cost, double max_cost) {
    const int rows = static_cast<int>(cost.rows());
    const int cols = static_cast<int>(cost.cols());

    Graph g;
    g.rows = rows;
    g.cols = cols;
    g.adj.resize(rows);

    double min_allowed = kInf;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double value = cost(r, c);
            if (!std::isfinite(value)) {
                throw ValidationError("linear_assignment: non-finite cost entry");
            }
            if (value <= max_cost) min_allowed = std::min(min_allowed, value);
        }
    }
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double value = cost(r, c);
            if (value <= max_cost) g.adj[r].push_back(Edge{c, value - min_allowed});
        }
    }

    Solution s = solve(g, {}, {});
    std::vector<int> match_row = s.match_row;
    if (s.cardinality > 0 && has_alternate_optimum(g, s)) {
        match_row = lexicographic_refine(g, cost, s.cardinality, matching_cost(cost, match_row));
    }

    AssignmentResult result;
    std::vector<char> col_used(cols, 0);
    for (int r = 0; r < rows; ++r) {
        if (match_row[r] >= 0) {
            result.matches.emplace_back(r, match_row[r]);
            result.total_cost += cost(r, match_row[r]);
            col_used[match_row[r]] = 1;
        } else {
            result.unmatched_rows.push_back(r);
        }
    }
    for (int c = 0; c < cols; ++c) {
        if (!col_used[c]) result.unmatched_cols.push_back(c);
    }
    return result;
}

}  // namespace tcb
