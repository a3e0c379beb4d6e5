#include <catch2/catch_amalgamated.hpp>

#include "pqc/planner.hpp"

using namespace pqc;

namespace {

Scene empty_scene(int nx, int ny, int nz, Cell goal) {
    Scene s;
    s.task = TaskKind::PegInsertion;
    s.grid = {nx, ny, nz, 0.01};
    s.peg.hole_diameter = 0.0;
    s.goal = goal;
    return s;
}

// Tabular value iteration (gamma = 1, costs as negative rewards), run to a
// 1e-12 sup-norm fixed point. Independent of the Dijkstra path.
std::vector<double> value_iteration(const Scene& scene, const std::vector<Cell>& goals,
                                    Connectivity conn) {
    auto n = static_cast<size_t>(scene.grid.n_cells());
    std::vector<double> v(n, kInf);
    std::vector<char> is_goal_cell(n, 0);
    for (const auto& g : goals) {
        v[static_cast<size_t>(scene.grid.index(g))] = 0.0;
        is_goal_cell[static_cast<size_t>(scene.grid.index(g))] = 1;
    }
    const auto& acts = action_set(conn);
    for (int sweep = 0; sweep < 100000; ++sweep) {
        double change = 0.0;
        std::vector<double> next = v;
        for (long long i = 0; i < scene.grid.n_cells(); ++i) {
            Cell c = scene.grid.cell_at(i);
            auto idx = static_cast<size_t>(i);
            if (is_goal_cell[idx] || !scene.free_cell(c)) continue;
            double best = kInf;
            for (size_t a = 0; a < acts.size(); ++a) {
                Cell to = apply_action(c, acts[a]);
                if (!scene.free_cell(to)) continue;
                double vd = v[static_cast<size_t>(scene.grid.index(to))];
                if (vd == kInf) continue;
                best = std::min(best, edge_cost(scene, c, static_cast<int>(a), conn) + vd);
            }
            next[idx] = best;
            if (best != kInf && v[idx] != kInf) change = std::max(change, std::abs(best - v[idx]));
            if ((best == kInf) != (v[idx] == kInf)) change = kInf;
        }
        v = next;
        if (change < 1e-12) break;
    }
    return v;
}

Box cell_box(const GridSpec& g, const Cell& c) {
    return Box{g.cell_center(c), {0.004, 0.004, 0.004}};
}

}  // namespace

TEST_CASE("graph over an empty 3x3x1 grid: lattice counts") {
    Scene s = empty_scene(3, 3, 1, {2, 2, 0});
    PlanGraph g = build_graph(s);
    REQUIRE(g.n_vertices == 9);
    REQUIRE(g.count_directed_edges() == 24);  // 12 undirected lattice edges
}

TEST_CASE("edge into a cell with 1 cm clearance costs 0.51") {
    Scene s = empty_scene(9, 9, 3, {8, 8, 0});
    // box spans x in [0.055, 0.075]; destination (4,..) center x=0.045 -> d = 0.01
    s.obstacles.push_back(Box{{0.065, 0.045, 0.015}, {0.01, 0.01, 0.015}});
    PlanGraph g = build_graph(s);
    Cell from{3, 4, 1};
    REQUIRE(clearance(s, {4, 4, 1}) == Catch::Approx(0.01).margin(1e-15));
    REQUIRE(g.cost(from, 0) == Catch::Approx(0.01 + 0.5).margin(1e-12));
}

TEST_CASE("occupied cells are not vertices") {
    Scene s = empty_scene(5, 5, 1, {4, 4, 0});
    s.obstacles.push_back(cell_box(s.grid, {2, 2, 0}));
    PlanGraph g = build_graph(s);
    REQUIRE(g.n_vertices == 24);
    REQUIRE_FALSE(g.is_free({2, 2, 0}));
}

TEST_CASE("solve on a 5x1x1 corridor: exact unit-edge arithmetic") {
    Scene s = empty_scene(5, 1, 1, {4, 0, 0});
    PlanGraph g = build_graph(s);
    ExpertSolution sol = solve(g, {Cell{4, 0, 0}});  // goal region radius 0
    std::vector<double> want{0.04, 0.03, 0.02, 0.01, 0.0};
    for (int i = 0; i < 5; ++i)
        REQUIRE(sol.ctg({i, 0, 0}) == Catch::Approx(want[static_cast<size_t>(i)]).margin(1e-12));
    REQUIRE(expert_policy(sol, s, {0, 0, 0}) == 0);  // along the corridor
}

TEST_CASE("fully walled-off cells get infinite cost-to-go") {
    Scene s = empty_scene(5, 5, 1, {0, 0, 0});
    for (Cell c : {Cell{1, 2, 0}, Cell{3, 2, 0}, Cell{2, 1, 0}, Cell{2, 3, 0}})
        s.obstacles.push_back(cell_box(s.grid, c));
    ExpertSolution sol = solve(build_graph(s), {Cell{0, 0, 0}});
    REQUIRE(sol.ctg({2, 2, 0}) == kInf);
    REQUIRE(sol.ctg({4, 4, 0}) < kInf);
}

TEST_CASE("Dijkstra equals value iteration on random scenes") {
    for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull, 6ull}) {
        GridSpec grid{6, 6, 4, 0.01};
        Scene s = sample_scene(TaskKind::PegInsertion, grid, 3, seed);
        auto goals = goal_region_cells(s);
        ExpertSolution sol = solve(build_graph(s), goals);
        auto vi = value_iteration(s, goals, Connectivity::Six);
        for (long long i = 0; i < grid.n_cells(); ++i) {
            double a = sol.cost_to_go[static_cast<size_t>(i)];
            double b = vi[static_cast<size_t>(i)];
            if (a == kInf || b == kInf) {
                REQUIRE(a == b);
            } else {
                REQUIRE(a == Catch::Approx(b).margin(1e-9));
            }
        }
    }
}

TEST_CASE("expert q-values: adjacency and Bellman identity") {
    Scene s = empty_scene(7, 7, 3, {3, 3, 0});
    ExpertSolution sol = solve(build_graph(s), {Cell{3, 3, 0}});
    SECTION("next to the goal, stepping in is worth -0.01") {
        REQUIRE(expert_q(sol, s, {2, 3, 0}, 0) == Catch::Approx(-0.01).margin(1e-15));
    }
    SECTION("expert action attains -cost_to_go") {
        Scene r = sample_scene(TaskKind::PegInsertion, GridSpec::desk_scale(), 4, 9);
        ExpertSolution rs = solve_scene(r);
        auto starts = eligible_starts(r, rs);
        Rng rng(17);
        for (int i = 0; i < 100; ++i) {
            Cell c = rng.pick(starts);
            int a = expert_policy(rs, r, c);
            REQUIRE(expert_q(rs, r, c, a) == -rs.ctg(c));
        }
    }
    SECTION("max over actions equals -cost_to_go") {
        Scene r = sample_scene(TaskKind::PegInsertion, GridSpec::desk_scale(), 5, 10);
        ExpertSolution rs = solve_scene(r);
        auto starts = eligible_starts(r, rs);
        Rng rng(18);
        for (int i = 0; i < 100; ++i) {
            Cell c = rng.pick(starts);
            double best = -kInf;
            for (int a = 0; a < 6; ++a) {
                if (!feasible(r, c, a, Connectivity::Six)) continue;
                best = std::max(best, expert_q(rs, r, c, a));
            }
            REQUIRE(best == -rs.ctg(c));
        }
    }
}

TEST_CASE("expert_q rejects infeasible destinations") {
    Scene s = empty_scene(5, 5, 1, {4, 4, 0});
    ExpertSolution sol = solve(build_graph(s), {Cell{4, 4, 0}});
    REQUIRE_THROWS_AS(expert_q(sol, s, {0, 0, 0}, 1), InfeasibleAction);  // -x out of bounds
}

TEST_CASE("ties break to the lowest action index") {
    Scene s = empty_scene(5, 5, 1, {2, 2, 0});
    ExpertSolution sol = solve(build_graph(s), {Cell{2, 2, 0}});
    // from (0,0): +x (index 0) and +y (index 2) are equally good
    REQUIRE(expert_policy(sol, s, {0, 0, 0}) == 0);
}

TEST_CASE("expert rollouts always reach the goal, monotonically") {
    for (uint64_t seed : {21ull, 22ull, 23ull}) {
        Scene s = sample_scene(TaskKind::PegInsertion, GridSpec::desk_scale(), 6, seed);
        ExpertSolution sol = solve_scene(s);
        auto starts = eligible_starts(s, sol);
        Rng rng(seed);
        for (int trial = 0; trial < 30; ++trial) {
            Cell c = rng.pick(starts);
            double ctg = sol.ctg(c);
            long long max_steps = static_cast<long long>(std::ceil(ctg / 0.01)) + 1;
            long long taken = 0;
            int t = 0;
            while (!is_goal(s, c)) {
                int a = expert_policy(sol, s, c);
                StepResult r = step(s, c, a, t++);
                REQUIRE(r.terminal != Terminal::Collision);
                // descent equals the traversed edge cost exactly
                double edge = edge_cost(s, c, a, Connectivity::Six);
                REQUIRE(sol.ctg(c) - sol.ctg(r.next) == Catch::Approx(edge).margin(1e-12));
                REQUIRE(sol.ctg(r.next) < sol.ctg(c));
                c = r.next;
                ++taken;
                REQUIRE(taken <= max_steps);
            }
        }
    }
}

TEST_CASE("twenty-six connectivity uses true Euclidean edge lengths") {
    Scene s = empty_scene(5, 5, 3, {4, 4, 0});
    PlanGraph g = build_graph(s, Connectivity::TwentySix);
    const auto& acts = action_set(Connectivity::TwentySix);
    for (size_t a = 0; a < acts.size(); ++a) {
        Cell from{2, 2, 1};
        double want = acts[a].len_cells * 0.01;
        REQUIRE(g.cost(from, static_cast<int>(a)) == Catch::Approx(want).margin(1e-12));
    }
    ExpertSolution sol = solve(g, {Cell{4, 4, 0}});
    // diagonal route: two cells over in x and y costs sqrt(2)*2 cm from (2,2,0)...
    REQUIRE(sol.ctg({2, 2, 0}) == Catch::Approx(2 * std::sqrt(2.0) * 0.01).margin(1e-9));
}

TEST_CASE("cost-to-go dump has one line per cell") {
    Scene s = empty_scene(3, 3, 1, {2, 2, 0});
    ExpertSolution sol = solve(build_graph(s), {Cell{2, 2, 0}});
    std::ostringstream os;
    dump_cost_to_go(sol, os);
    std::istringstream is(os.str());
    std::string line;
    int n = 0;
    while (std::getline(is, line)) ++n;
    REQUIRE(n == 9);
    REQUIRE(os.str().find("0 0 0 ") != std::string::npos);
}

TEST_CASE("solve validates the goal region") {
    Scene s = empty_scene(3, 3, 1, {2, 2, 0});
    PlanGraph g = build_graph(s);
    REQUIRE_THROWS_AS(solve(g, {}), InvalidState);
    REQUIRE_THROWS_AS(solve(g, {Cell{5, 5, 0}}), InvalidState);
}
