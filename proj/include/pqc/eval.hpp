#pragma once

#include "pqc/clone.hpp"

namespace pqc {

struct EvalReport {
    struct PerScene {
        long long scene_id = 0;
        long long episodes = 0, successes = 0, collisions = 0, timeouts = 0;
        double mean_steps_to_goal = 0.0;  // over successful episodes; 0 if none
    };
    std::vector<PerScene> per_scene;
    long long episodes = 0, successes = 0, collisions = 0, timeouts = 0;
    double mean_steps_to_goal = 0.0;

    double success_rate() const { return episodes ? double(successes) / episodes : 0.0; }
    double collision_rate() const { return episodes ? double(collisions) / episodes : 0.0; }
    double timeout_rate() const { return episodes ? double(timeouts) / episodes : 0.0; }
};

// A test-time policy: observation-driven action choice at a cell.
using Policy = std::function<int(const SceneBundle&, const Cell&)>;

inline Policy greedy_policy(const QNetwork& net, Workspace& ws) {
    return [&net, &ws](const SceneBundle& b, const Cell& c) {
        return greedy_action(net, ws, b, c);
    };
}

inline Policy expert_as_policy() {
    return [](const SceneBundle& b, const Cell& c) { return expert_policy(b.expert, b.scene, c); };
}

// Greedy rollouts from random starts; per-scene RNG streams keyed by scene id
// so paired evaluations share start states.
inline EvalReport evaluate(const Policy& policy, const std::vector<SceneBundle>& bundles,
                           int episodes_per_scene, uint64_t seed) {
    EvalReport rep;
    double steps_sum = 0.0;
    long long steps_n = 0;
    for (const auto& b : bundles) {
        EvalReport::PerScene ps;
        ps.scene_id = b.scene.id;
        double scene_steps = 0.0;
        long long scene_succ = 0;
        for (int ep = 0; ep < episodes_per_scene; ++ep) {
            Rng rng(mix_seed(seed, static_cast<uint64_t>(b.scene.id), static_cast<uint64_t>(ep)));
            if (b.starts.empty()) throw SceneInfeasible("evaluate: scene has no starts");
            Cell s = rng.pick(b.starts);
            Terminal outcome = Terminal::Timeout;
            int steps_taken = 0;
            int horizon = b.scene.grid.horizon();
            for (int t = 0; t < horizon; ++t) {
                int a = policy(b, s);
                StepResult r = step(b.scene, s, a, t, b.conn);
                ++steps_taken;
                if (r.terminal == Terminal::Goal) {
                    outcome = Terminal::Goal;
                    break;
                }
                if (r.terminal == Terminal::Collision) {
                    outcome = Terminal::Collision;
                    break;
                }
                if (r.terminal == Terminal::Timeout) {
                    outcome = Terminal::Timeout;
                    break;
                }
                s = r.next;
            }
            ++ps.episodes;
            if (outcome == Terminal::Goal) {
                ++ps.successes;
                scene_steps += steps_taken;
                ++scene_succ;
            } else if (outcome == Terminal::Collision) {
                ++ps.collisions;
            } else {
                ++ps.timeouts;
            }
        }
        ps.mean_steps_to_goal = scene_succ ? scene_steps / static_cast<double>(scene_succ) : 0.0;
        steps_sum += scene_steps;
        steps_n += scene_succ;
        rep.episodes += ps.episodes;
        rep.successes += ps.successes;
        rep.collisions += ps.collisions;
        rep.timeouts += ps.timeouts;
        rep.per_scene.push_back(ps);
    }
    rep.mean_steps_to_goal = steps_n ? steps_sum / static_cast<double>(steps_n) : 0.0;
    return rep;
}

// CSV schema: header row then typed columns; per-scene rows in id order,
// aggregate row last with scene_id "all".
inline std::string eval_report_csv(const EvalReport& rep) {
    std::ostringstream os;
    os << "scene_id,episodes,successes,collisions,timeouts,success_rate,collision_rate,"
          "timeout_rate,mean_steps_to_goal\n";
    auto row = [&](const std::string& id, long long eps, long long su, long long co, long long ti,
                   double msg) {
        double e = eps ? static_cast<double>(eps) : 1.0;
        os << id << "," << eps << "," << su << "," << co << "," << ti << ","
           << fmt_shortest(su / e) << "," << fmt_shortest(co / e) << "," << fmt_shortest(ti / e)
           << "," << fmt_shortest(msg) << "\n";
    };
    for (const auto& ps : rep.per_scene)
        row(std::to_string(ps.scene_id), ps.episodes, ps.successes, ps.collisions, ps.timeouts,
            ps.mean_steps_to_goal);
    row("all", rep.episodes, rep.successes, rep.collisions, rep.timeouts, rep.mean_steps_to_goal);
    return os.str();
}

inline void save_eval_report(const EvalReport& rep, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open for write: " + path);
    f << eval_report_csv(rep);
}

}  // namespace pqc
