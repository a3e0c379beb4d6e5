#pragma once

#include <limits>
#include <queue>

#include "pqc/env.hpp"
#include "pqc/scene.hpp"

namespace pqc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Weighted grid graph over collision-free cells. Edge u->v costs Euclidean
// length in meters plus the clearance penalty at v, matching the magnitude of
// the simulator's step reward exactly.
struct PlanGraph {
    GridSpec grid;
    Connectivity conn = Connectivity::Six;
    std::vector<char> free;       // per cell index
    std::vector<double> penalty;  // proximity penalty at each free cell
    long long n_vertices = 0;

    bool is_free(const Cell& c) const {
        return grid.in_bounds(c) && free[static_cast<size_t>(grid.index(c))];
    }

    // Cost of the edge from `from` along `action`; precondition: edge exists.
    double cost(const Cell& from, int action) const {
        const auto& d = action_set(conn)[static_cast<size_t>(action)];
        Cell to = apply_action(from, d);
        return d.len_cells * grid.cell_size + penalty[static_cast<size_t>(grid.index(to))];
    }

    long long count_directed_edges() const {
        long long n = 0;
        const auto& acts = action_set(conn);
        for (long long i = 0; i < grid.n_cells(); ++i) {
            if (!free[static_cast<size_t>(i)]) continue;
            Cell c = grid.cell_at(i);
            for (size_t a = 0; a < acts.size(); ++a)
                if (is_free(apply_action(c, acts[a]))) ++n;
        }
        return n;
    }
};

inline PlanGraph build_graph(const Scene& scene, Connectivity conn = Connectivity::Six) {
    PlanGraph g;
    g.grid = scene.grid;
    g.conn = conn;
    auto n = static_cast<size_t>(scene.grid.n_cells());
    g.free.assign(n, 0);
    g.penalty.assign(n, 0.0);
    for (long long i = 0; i < scene.grid.n_cells(); ++i) {
        Cell c = scene.grid.cell_at(i);
        if (!scene.occupied(c)) {
            g.free[static_cast<size_t>(i)] = 1;
            g.penalty[static_cast<size_t>(i)] = proximity_penalty(clearance(scene, c));
            ++g.n_vertices;
        }
    }
    return g;
}

// Cost-to-go and greedy expert action per cell. Unreachable and occupied cells
// hold infinity; the expert action is undefined (-1) at goal-region and
// unreachable cells.
struct ExpertSolution {
    GridSpec grid;
    Connectivity conn = Connectivity::Six;
    std::vector<double> cost_to_go;
    std::vector<int8_t> expert_action;

    double ctg(const Cell& c) const { return cost_to_go[static_cast<size_t>(grid.index(c))]; }
};

// Multi-source Dijkstra from the goal region over reversed edges. Binary heap
// with lazy deletion; costs compared exactly as 64-bit floats.
inline ExpertSolution solve(const PlanGraph& g, const std::vector<Cell>& goal_region) {
    if (goal_region.empty()) throw InvalidState("solve: empty goal region");
    for (const auto& c : goal_region)
        if (!g.is_free(c)) throw InvalidState("solve: goal cell not in vertex set");

    ExpertSolution sol;
    sol.grid = g.grid;
    sol.conn = g.conn;
    auto n = static_cast<size_t>(g.grid.n_cells());
    sol.cost_to_go.assign(n, kInf);
    sol.expert_action.assign(n, -1);

    using Entry = std::pair<double, long long>;  // (dist, cell index)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    for (const auto& c : goal_region) {
        auto idx = static_cast<size_t>(g.grid.index(c));
        if (sol.cost_to_go[idx] != 0.0) {
            sol.cost_to_go[idx] = 0.0;
            pq.push({0.0, static_cast<long long>(idx)});
        }
    }

    const auto& acts = action_set(g.conn);
    while (!pq.empty()) {
        auto [dist, vi] = pq.top();
        pq.pop();
        if (dist > sol.cost_to_go[static_cast<size_t>(vi)]) continue;  // stale entry
        Cell v = g.grid.cell_at(vi);
        double pen_v = g.penalty[static_cast<size_t>(vi)];
        // relax incoming edges u -> v; cost = |delta| + penalty(v), grouped so
        // the sum matches edge_cost + cost_to_go bit for bit
        for (const auto& d : acts) {
            Cell u{v.ix - d.dx, v.iy - d.dy, v.iz - d.dz};
            if (!g.is_free(u)) continue;
            auto ui = static_cast<size_t>(g.grid.index(u));
            double edge = d.len_cells * g.grid.cell_size + pen_v;
            double cand = edge + dist;
            if (cand < sol.cost_to_go[ui]) {
                sol.cost_to_go[ui] = cand;
                pq.push({cand, static_cast<long long>(ui)});
            }
        }
    }

    // greedy action per reachable non-goal cell; ties break to the lowest index
    std::vector<char> is_goal_cell(n, 0);
    for (const auto& c : goal_region) is_goal_cell[static_cast<size_t>(g.grid.index(c))] = 1;
    for (long long i = 0; i < g.grid.n_cells(); ++i) {
        auto idx = static_cast<size_t>(i);
        if (!g.free[idx] || sol.cost_to_go[idx] == kInf || is_goal_cell[idx]) continue;
        Cell c = g.grid.cell_at(i);
        int best = -1;
        double best_cost = kInf;
        for (size_t a = 0; a < acts.size(); ++a) {
            Cell to = apply_action(c, acts[a]);
            if (!g.is_free(to)) continue;
            double total = g.cost(c, static_cast<int>(a)) +
                           sol.cost_to_go[static_cast<size_t>(g.grid.index(to))];
            if (total < best_cost) {
                best_cost = total;
                best = static_cast<int>(a);
            }
        }
        sol.expert_action[idx] = static_cast<int8_t>(best);
    }
    return sol;
}

inline std::vector<Cell> goal_region_cells(const Scene& scene) {
    std::vector<Cell> cells;
    int r = goal_radius_cells(scene.grid);
    for (int dz = -r; dz <= r; ++dz)
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx) {
                Cell c{scene.goal.ix + dx, scene.goal.iy + dy, scene.goal.iz + dz};
                if (scene.free_cell(c)) cells.push_back(c);
            }
    return cells;
}

inline ExpertSolution solve_scene(const Scene& scene, Connectivity conn = Connectivity::Six) {
    PlanGraph g = build_graph(scene, conn);
    return solve(g, goal_region_cells(scene));
}

// Undiscounted value of taking `action` at `s`, then acting optimally:
// -(edge cost + cost-to-go at the destination).
inline double expert_q(const ExpertSolution& sol, const Scene& scene, const Cell& s, int action,
                       Connectivity conn = Connectivity::Six) {
    const auto& d = action_set(conn)[static_cast<size_t>(action)];
    Cell to = apply_action(s, d);
    if (!scene.free_cell(to)) throw InfeasibleAction("expert_q: destination infeasible");
    return -(edge_cost(scene, s, action, conn) + sol.ctg(to));
}

// Greedy expert action; deterministic lowest-index tie rule.
inline int expert_policy(const ExpertSolution& sol, const Scene& scene, const Cell& s) {
    auto idx = static_cast<size_t>(scene.grid.index(s));
    int8_t a = sol.expert_action[idx];
    if (a >= 0) return a;
    // fall back for cells solved without a stored action (goal region): recompute
    const auto& acts = action_set(sol.conn);
    int best = -1;
    double best_cost = kInf;
    for (size_t ai = 0; ai < acts.size(); ++ai) {
        Cell to = apply_action(s, acts[ai]);
        if (!scene.free_cell(to)) continue;
        double total = edge_cost(scene, s, static_cast<int>(ai), sol.conn) + sol.ctg(to);
        if (total < best_cost) {
            best_cost = total;
            best = static_cast<int>(ai);
        }
    }
    if (best < 0) throw NoFeasibleAction("expert_policy: no free neighbor");
    return best;
}

// Start-state distribution support: collision-free cells with finite
// cost-to-go, excluding the goal region.
inline std::vector<Cell> eligible_starts(const Scene& scene, const ExpertSolution& sol) {
    std::vector<Cell> out;
    for (long long i = 0; i < scene.grid.n_cells(); ++i) {
        Cell c = scene.grid.cell_at(i);
        if (!scene.free_cell(c)) continue;
        if (sol.cost_to_go[static_cast<size_t>(i)] == kInf) continue;
        if (is_goal(scene, c)) continue;
        out.push_back(c);
    }
    return out;
}

inline double max_finite_cost_to_go(const ExpertSolution& sol) {
    double m = 0.0;
    for (double v : sol.cost_to_go)
        if (v != kInf) m = std::max(m, v);
    return m;
}

// Debug dump: one line per cell, "ix iy iz cost".
inline void dump_cost_to_go(const ExpertSolution& sol, std::ostream& os) {
    for (long long i = 0; i < sol.grid.n_cells(); ++i) {
        Cell c = sol.grid.cell_at(i);
        double v = sol.cost_to_go[static_cast<size_t>(i)];
        os << c.ix << " " << c.iy << " " << c.iz << " " << (v == kInf ? "inf" : fmt_g9(v))
           << "\n";
    }
}

}  // namespace pqc
