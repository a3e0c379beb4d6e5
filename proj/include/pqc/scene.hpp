#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pqc/common.hpp"
#include "pqc/geometry.hpp"
#include "pqc/grid.hpp"
#include "pqc/rng.hpp"

namespace pqc {

enum class TaskKind { PegInsertion, BlockStacking };

inline const char* task_name(TaskKind t) {
    return t == TaskKind::PegInsertion ? "peg" : "blocks";
}

inline TaskKind task_from_name(const std::string& s) {
    if (s == "peg") return TaskKind::PegInsertion;
    if (s == "blocks") return TaskKind::BlockStacking;
    throw FormatError("unknown task '" + s + "'");
}

// Peg insertion: a circular hole sunk into the floor; the goal pose holds the
// grasped peg just above it. The peg is offset in the hand, so the goal cell
// compensates for the offset.
struct PegParams {
    double peg_diameter = 0.02;
    double hole_diameter = 0.04;
    double hole_depth = 0.02;
    double hole_x = 0.0, hole_y = 0.0;
    double offset_x = 0.0, offset_y = 0.0;  // grasped-object offset in the hand
};

// Block stacking: several blocks rest on the floor; exactly one matches the
// grasped block's dimensions and is the stacking target.
struct BlockParams {
    Vec3 grasped_size{0.03, 0.03, 0.025};
    double offset_x = 0.0, offset_y = 0.0;
    std::vector<Box> blocks;  // target + distractors, all physical obstacles
    int target_index = 0;
};

// All linear dimensions within `tol` of the grasped block's.
inline bool block_dims_match(const Vec3& grasped, const Box& b, double tol) {
    Vec3 s{2 * b.half.x, 2 * b.half.y, 2 * b.half.z};
    return std::abs(s.x - grasped.x) <= tol * grasped.x &&
           std::abs(s.y - grasped.y) <= tol * grasped.y &&
           std::abs(s.z - grasped.z) <= tol * grasped.z;
}

struct Scene {
    long long id = 0;
    TaskKind task = TaskKind::PegInsertion;
    GridSpec grid;
    std::vector<Box> obstacles;  // clutter only; stacking blocks live in task params
    Cell goal;
    PegParams peg;
    BlockParams blocks;
    uint64_t rng_seed = 0;

    // Physical boxes: clutter plus any scene blocks.
    template <typename F>
    void for_each_box(F&& f) const {
        for (const auto& b : obstacles) f(b);
        if (task == TaskKind::BlockStacking)
            for (const auto& b : blocks.blocks) f(b);
    }

    bool occupied(const Cell& c) const {
        Vec3 p = grid.cell_center(c);
        bool hit = false;
        for_each_box([&](const Box& b) { hit = hit || b.contains(p); });
        return hit;
    }

    bool free_cell(const Cell& c) const { return grid.in_bounds(c) && !occupied(c); }
};

// Euclidean distance from the cell center to the nearest obstacle surface;
// 0 inside an obstacle, capped at the grid diagonal when there is nothing near.
inline double clearance(const Scene& scene, const Cell& cell) {
    if (!scene.grid.in_bounds(cell)) throw InvalidState("clearance: cell out of bounds");
    Vec3 p = scene.grid.cell_center(cell);
    double best = scene.grid.diagonal();
    scene.for_each_box([&](const Box& b) { best = std::min(best, b.distance(p)); });
    return best;
}

namespace detail {

inline bool goal_region_free(const Scene& s, int radius_cells) {
    for (int dx = -radius_cells; dx <= radius_cells; ++dx)
        for (int dy = -radius_cells; dy <= radius_cells; ++dy)
            for (int dz = -radius_cells; dz <= radius_cells; ++dz) {
                Cell c{s.goal.ix + dx, s.goal.iy + dy, s.goal.iz + dz};
                if (s.grid.in_bounds(c) && s.occupied(c)) return false;
            }
    return true;
}

// 6-connected flood fill from the goal over free cells.
inline std::vector<char> reachable_from_goal(const Scene& s) {
    std::vector<char> seen(static_cast<size_t>(s.grid.n_cells()), 0);
    if (!s.free_cell(s.goal)) return seen;
    std::vector<Cell> stack{s.goal};
    seen[static_cast<size_t>(s.grid.index(s.goal))] = 1;
    const auto& acts = action_set(Connectivity::Six);
    while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        for (const auto& d : acts) {
            Cell n = apply_action(c, d);
            if (!s.free_cell(n)) continue;
            auto idx = static_cast<size_t>(s.grid.index(n));
            if (!seen[idx]) {
                seen[idx] = 1;
                stack.push_back(n);
            }
        }
    }
    return seen;
}

inline bool place_clutter(Scene& scene, int clutter_count, Rng& rng) {
    const GridSpec& g = scene.grid;
    Vec3 ext = g.extent();
    for (int i = 0; i < clutter_count; ++i) {
        bool placed = false;
        double half_xy_max = std::min(0.02, std::min(ext.x, ext.y) / 6.0);
        double half_z_max = std::min(0.025, 0.45 * ext.z);
        for (int tries = 0; tries < 50 && !placed; ++tries) {
            Box b;
            b.half.x = rng.uniform(0.006, half_xy_max);
            b.half.y = rng.uniform(0.006, half_xy_max);
            b.half.z = rng.uniform(0.008, half_z_max);
            b.center.x = rng.uniform(b.half.x, ext.x - b.half.x);
            b.center.y = rng.uniform(b.half.y, ext.y - b.half.y);
            b.center.z = b.half.z;  // rests on the floor
            if (b.top() > ext.z) continue;

            if (scene.task == TaskKind::PegInsertion) {
                double margin = scene.peg.hole_diameter / 2 + 0.012;
                if (b.distance_xy(scene.peg.hole_x, scene.peg.hole_y) < margin) continue;
            } else {
                bool bad = false;
                for (size_t k = 0; k < scene.blocks.blocks.size(); ++k) {
                    double gap = (static_cast<int>(k) == scene.blocks.target_index) ? 0.012 : 0.005;
                    if (b.overlaps(scene.blocks.blocks[k], gap)) bad = true;
                }
                if (bad) continue;
            }
            bool bad = false;
            for (const auto& other : scene.obstacles)
                if (b.overlaps(other, 0.005)) bad = true;
            if (bad) continue;

            scene.obstacles.push_back(b);
            placed = true;
        }
        if (!placed) return false;
    }
    return true;
}

}  // namespace detail

inline int goal_radius_cells(const GridSpec& g) {
    int r = static_cast<int>(std::floor(0.01 / g.cell_size + 1e-9));
    return std::max(0, r);
}

// Samples a world. Identical arguments yield an identical scene; throws
// SceneInfeasible after a bounded number of attempts.
inline Scene sample_scene(TaskKind task, const GridSpec& grid, int clutter_count, uint64_t seed,
                          int max_attempts = 100) {
    grid.validate();
    if (clutter_count < 0) throw ConfigError("clutter_count must be >= 0");
    Vec3 ext = grid.extent();

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Rng rng(mix_seed(seed, static_cast<uint64_t>(attempt)));
        Scene s;
        s.id = static_cast<long long>(seed);
        s.task = task;
        s.grid = grid;
        s.rng_seed = seed;

        if (task == TaskKind::PegInsertion) {
            PegParams& p = s.peg;
            double hole_max = std::min(0.046, 0.40 * std::min(ext.x, ext.y));
            p.hole_diameter = rng.uniform(0.65 * hole_max, hole_max);
            p.peg_diameter = rng.uniform(0.45 * p.hole_diameter, 0.78 * p.hole_diameter);
            p.hole_depth = 0.02;
            int margin = std::min(2, (grid.nx - 1) / 2);
            int hx = static_cast<int>(rng.uniform_int(margin, grid.nx - 1 - margin));
            int hy = static_cast<int>(rng.uniform_int(margin, grid.ny - 1 - margin));
            p.hole_x = (hx + 0.5) * grid.cell_size;
            p.hole_y = (hy + 0.5) * grid.cell_size;
            int ox = static_cast<int>(rng.uniform_int(-1, 1));
            int oy = static_cast<int>(rng.uniform_int(-1, 1));
            p.offset_x = ox * grid.cell_size;
            p.offset_y = oy * grid.cell_size;
            s.goal = {hx - ox, hy - oy, std::min(1, grid.nz - 1)};
        } else {
            BlockParams& bp = s.blocks;
            bp.grasped_size = {rng.uniform(0.020, 0.034), rng.uniform(0.020, 0.034),
                               rng.uniform(0.018, 0.028)};
            int ox = static_cast<int>(rng.uniform_int(-1, 1));
            int oy = static_cast<int>(rng.uniform_int(-1, 1));
            bp.offset_x = ox * grid.cell_size;
            bp.offset_y = oy * grid.cell_size;

            // target within 7% per dimension; distractor footprints off by
            // 30-50% and heights shortened, keeping the match unambiguous
            Vec3 target_size{bp.grasped_size.x * rng.uniform(0.93, 1.07),
                             bp.grasped_size.y * rng.uniform(0.93, 1.07),
                             bp.grasped_size.z * rng.uniform(0.93, 1.07)};
            std::vector<Vec3> sizes{target_size};
            const int n_distractors = 2;
            for (int i = 0; i < n_distractors; ++i) {
                double f = rng.bernoulli(0.5) ? rng.uniform(1.30, 1.50) : rng.uniform(0.45, 0.68);
                sizes.push_back({bp.grasped_size.x * f,
                                 bp.grasped_size.y * f,
                                 bp.grasped_size.z * rng.uniform(0.45, 0.68)});
            }

            bool ok = true;
            for (const auto& sz : sizes) {
                Box b;
                b.half = sz * 0.5;
                bool placed = false;
                for (int tries = 0; tries < 80 && !placed; ++tries) {
                    b.center.x = rng.uniform(b.half.x + 0.006, ext.x - b.half.x - 0.006);
                    b.center.y = rng.uniform(b.half.y + 0.006, ext.y - b.half.y - 0.006);
                    b.center.z = b.half.z;
                    bool bad = b.top() > ext.z - 0.03;
                    for (size_t k = 0; k < bp.blocks.size(); ++k)
                        if (b.overlaps(bp.blocks[k], k == 0 ? 0.012 : 0.008)) bad = true;
                    if (!bad) {
                        bp.blocks.push_back(b);
                        placed = true;
                    }
                }
                if (!placed) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            bp.target_index = 0;

            const Box& target = bp.blocks[0];
            // lowest cell whose center clears the block top by >= 2 cm (zero penalty)
            int gz = static_cast<int>(std::ceil((target.top() + 0.02) / grid.cell_size - 0.5));
            if (gz >= grid.nz) continue;
            int gx = static_cast<int>(target.center.x / grid.cell_size);
            int gy = static_cast<int>(target.center.y / grid.cell_size);
            s.goal = {gx - ox, gy - oy, gz};
            if (!grid.in_bounds(s.goal)) continue;

            // matching must be unambiguous: one block within 10%, the rest off by > 25%
            int matches = 0;
            bool separated = true;
            for (size_t k = 0; k < bp.blocks.size(); ++k) {
                if (block_dims_match(bp.grasped_size, bp.blocks[k], 0.10)) ++matches;
                if (k != 0 && block_dims_match(bp.grasped_size, bp.blocks[k], 0.25))
                    separated = false;
            }
            if (matches != 1 || !separated) continue;
        }

        if (!detail::place_clutter(s, clutter_count, rng)) continue;

        if (!s.free_cell(s.goal)) continue;
        if (!detail::goal_region_free(s, goal_radius_cells(grid))) continue;
        auto reach = detail::reachable_from_goal(s);
        int r = goal_radius_cells(grid);
        long long start_candidates = 0;
        for (long long i = 0; i < grid.n_cells(); ++i) {
            if (!reach[static_cast<size_t>(i)]) continue;
            Cell c = grid.cell_at(i);
            int cheb = std::max({std::abs(c.ix - s.goal.ix), std::abs(c.iy - s.goal.iy),
                                 std::abs(c.iz - s.goal.iz)});
            if (cheb > r) ++start_candidates;
        }
        if (start_candidates < 1) continue;

        return s;
    }
    throw SceneInfeasible("sample_scene: no feasible scene after " +
                          std::to_string(max_attempts) + " attempts (seed " +
                          std::to_string(seed) + ")");
}

// --- Scene text format ---
// One structured record per scene; fixed field order; floats at 9 significant
// digits so re-serialization is reproducible.

inline std::string scene_to_text(const Scene& s) {
    std::ostringstream os;
    os << "pqc-scene 1\n";
    os << "id " << s.id << "\n";
    os << "seed " << s.rng_seed << "\n";
    os << "task " << task_name(s.task) << "\n";
    os << "grid " << s.grid.nx << " " << s.grid.ny << " " << s.grid.nz << " "
       << fmt_g9(s.grid.cell_size) << "\n";
    os << "goal " << s.goal.ix << " " << s.goal.iy << " " << s.goal.iz << "\n";
    os << "clutter " << s.obstacles.size() << "\n";
    auto put_box = [&](const Box& b) {
        os << "box " << fmt_g9(b.center.x) << " " << fmt_g9(b.center.y) << " "
           << fmt_g9(b.center.z) << " " << fmt_g9(b.half.x) << " " << fmt_g9(b.half.y) << " "
           << fmt_g9(b.half.z) << "\n";
    };
    for (const auto& b : s.obstacles) put_box(b);
    if (s.task == TaskKind::PegInsertion) {
        const auto& p = s.peg;
        os << "peg " << fmt_g9(p.peg_diameter) << " " << fmt_g9(p.hole_diameter) << " "
           << fmt_g9(p.hole_depth) << " " << fmt_g9(p.hole_x) << " " << fmt_g9(p.hole_y) << " "
           << fmt_g9(p.offset_x) << " " << fmt_g9(p.offset_y) << "\n";
    } else {
        const auto& b = s.blocks;
        os << "grasped " << fmt_g9(b.grasped_size.x) << " " << fmt_g9(b.grasped_size.y) << " "
           << fmt_g9(b.grasped_size.z) << " " << fmt_g9(b.offset_x) << " " << fmt_g9(b.offset_y)
           << "\n";
        os << "blocks " << b.blocks.size() << "\n";
        os << "target " << b.target_index << "\n";
        for (const auto& blk : b.blocks) put_box(blk);
    }
    os << "end\n";
    return os.str();
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

struct LineReader {
    std::istringstream is;
    explicit LineReader(const std::string& text) : is(text) {}

    std::vector<std::string> expect(const std::string& key, size_t args) {
        std::string line;
        if (!std::getline(is, line)) throw FormatError("scene: missing '" + key + "'");
        auto toks = split_ws(line);
        if (toks.empty() || toks[0] != key || toks.size() != args + 1)
            throw FormatError("scene: expected '" + key + "', got '" + line + "'");
        return toks;
    }
};

inline Box parse_box(const std::vector<std::string>& t) {
    Box b;
    b.center = {parse_double(t[1]), parse_double(t[2]), parse_double(t[3])};
    b.half = {parse_double(t[4]), parse_double(t[5]), parse_double(t[6])};
    return b;
}

}  // namespace detail

inline Scene scene_from_text(const std::string& text) {
    detail::LineReader r(text);
    auto magic = r.expect("pqc-scene", 1);
    if (magic[1] != "1") throw FormatError("scene: unsupported version " + magic[1]);
    Scene s;
    s.id = parse_int(r.expect("id", 1)[1]);
    s.rng_seed = static_cast<uint64_t>(parse_int(r.expect("seed", 1)[1]));
    s.task = task_from_name(r.expect("task", 1)[1]);
    auto g = r.expect("grid", 4);
    s.grid.nx = static_cast<int>(parse_int(g[1]));
    s.grid.ny = static_cast<int>(parse_int(g[2]));
    s.grid.nz = static_cast<int>(parse_int(g[3]));
    s.grid.cell_size = parse_double(g[4]);
    s.grid.validate();
    auto gl = r.expect("goal", 3);
    s.goal = {static_cast<int>(parse_int(gl[1])), static_cast<int>(parse_int(gl[2])),
              static_cast<int>(parse_int(gl[3]))};
    long long n_clutter = parse_int(r.expect("clutter", 1)[1]);
    for (long long i = 0; i < n_clutter; ++i) s.obstacles.push_back(detail::parse_box(r.expect("box", 6)));
    if (s.task == TaskKind::PegInsertion) {
        auto p = r.expect("peg", 7);
        s.peg.peg_diameter = parse_double(p[1]);
        s.peg.hole_diameter = parse_double(p[2]);
        s.peg.hole_depth = parse_double(p[3]);
        s.peg.hole_x = parse_double(p[4]);
        s.peg.hole_y = parse_double(p[5]);
        s.peg.offset_x = parse_double(p[6]);
        s.peg.offset_y = parse_double(p[7]);
    } else {
        auto gr = r.expect("grasped", 5);
        s.blocks.grasped_size = {parse_double(gr[1]), parse_double(gr[2]), parse_double(gr[3])};
        s.blocks.offset_x = parse_double(gr[4]);
        s.blocks.offset_y = parse_double(gr[5]);
        long long nb = parse_int(r.expect("blocks", 1)[1]);
        s.blocks.target_index = static_cast<int>(parse_int(r.expect("target", 1)[1]));
        for (long long i = 0; i < nb; ++i)
            s.blocks.blocks.push_back(detail::parse_box(r.expect("box", 6)));
    }
    r.expect("end", 0);
    return s;
}

inline void save_scene(const Scene& s, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open for write: " + path);
    f << scene_to_text(s);
}

inline Scene load_scene(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return scene_from_text(ss.str());
}

}  // namespace pqc
