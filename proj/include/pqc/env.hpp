#pragma once

#include <array>
#include <cstdint>

#include "pqc/scene.hpp"

namespace pqc {

// Obstacle-approach cost: zero beyond 2 cm of clearance, rising linearly to 1
// at contact.
inline double proximity_penalty(double d) {
    if (d >= 0.02) return 0.0;
    return 1.0 - d / 0.02;
}

enum class Terminal : uint8_t { None = 0, Goal = 1, Collision = 2, Timeout = 3 };

struct StepResult {
    Cell next;
    double reward = 0.0;
    Terminal terminal = Terminal::None;
};

// Success region: within 1 cm of the goal, expressed in cells (Chebyshev).
inline bool is_goal(const Scene& scene, const Cell& s) {
    if (!scene.grid.in_bounds(s)) throw InvalidState("is_goal: cell out of bounds");
    int r = goal_radius_cells(scene.grid);
    return std::abs(s.ix - scene.goal.ix) <= r && std::abs(s.iy - scene.goal.iy) <= r &&
           std::abs(s.iz - scene.goal.iz) <= r;
}

inline bool feasible(const Scene& scene, const Cell& s, int action, Connectivity conn) {
    const auto& d = action_set(conn)[static_cast<size_t>(action)];
    return scene.free_cell(apply_action(s, d));
}

inline std::vector<char> feasible_mask(const Scene& scene, const Cell& s, Connectivity conn) {
    const auto& acts = action_set(conn);
    std::vector<char> mask(acts.size());
    for (size_t a = 0; a < acts.size(); ++a)
        mask[a] = scene.free_cell(apply_action(s, acts[a])) ? 1 : 0;
    return mask;
}

// Cost of traversing an edge: Euclidean displacement in meters plus the
// clearance penalty charged at the destination. Precondition: move feasible.
inline double edge_cost(const Scene& scene, const Cell& from, int action, Connectivity conn) {
    const auto& d = action_set(conn)[static_cast<size_t>(action)];
    Cell to = apply_action(from, d);
    return d.len_cells * scene.grid.cell_size + proximity_penalty(clearance(scene, to));
}

// One simulator step. Pure function of its arguments: no hidden RNG.
// Collisions (moves into occupied or out-of-bounds cells) terminate the
// episode as a failure, leaving the state unchanged with zero reward.
inline StepResult step(const Scene& scene, const Cell& s, int action, int t,
                       Connectivity conn = Connectivity::Six) {
    if (!scene.free_cell(s)) throw InvalidState("step: state occupied or out of bounds");
    if (action < 0 || action >= action_count(conn)) throw InvalidState("step: bad action index");
    const auto& d = action_set(conn)[static_cast<size_t>(action)];
    Cell dest = apply_action(s, d);
    if (!scene.free_cell(dest)) return {s, 0.0, Terminal::Collision};
    StepResult r;
    r.next = dest;
    r.reward = -edge_cost(scene, s, action, conn);
    if (is_goal(scene, dest))
        r.terminal = Terminal::Goal;
    else if (t + 1 >= scene.grid.horizon())
        r.terminal = Terminal::Timeout;
    else
        r.terminal = Terminal::None;
    return r;
}

}  // namespace pqc
