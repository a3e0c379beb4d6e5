#pragma once

#include <filesystem>

#include "pqc/config.hpp"
#include "pqc/eval.hpp"
#include "pqc/metrics.hpp"
#include "pqc/svg.hpp"

namespace pqc {

// Scene sets live in disjoint id ranges so holdout hygiene is checkable from
// dataset records alone.
enum class SceneSet { Train = 0, Holdout = 1, Finetune = 2 };

inline const char* set_tag(SceneSet s) {
    switch (s) {
        case SceneSet::Train: return "train";
        case SceneSet::Holdout: return "holdout";
        case SceneSet::Finetune: return "finetune";
    }
    return "?";
}

inline long long set_id_base(SceneSet s) { return 1000 * static_cast<long long>(s); }

inline int set_count(const ExperimentConfig& cfg, SceneSet s) {
    switch (s) {
        case SceneSet::Train: return cfg.scenes_train;
        case SceneSet::Holdout: return cfg.scenes_holdout;
        case SceneSet::Finetune: return cfg.scenes_finetune;
    }
    return 0;
}

inline constexpr uint64_t kEvalSeed = 0xBEEF5EED;

namespace paths {

inline std::string zpad(int v, int width = 4) {
    std::string s = std::to_string(v);
    return std::string(width > static_cast<int>(s.size()) ? width - s.size() : 0, '0') + s;
}

inline std::string scene(const ExperimentConfig& cfg, SceneSet set, int i) {
    return cfg.out_dir + "/scenes/" + set_tag(set) + "_" + zpad(i) + ".scene";
}
inline std::string cache(const ExperimentConfig& cfg, SceneSet set, int i) {
    return cfg.out_dir + "/caches/" + set_tag(set) + "_" + zpad(i) + ".cache";
}
inline std::string ctg(const ExperimentConfig& cfg, SceneSet set, int i) {
    return cfg.out_dir + "/planner/" + set_tag(set) + "_" + zpad(i) + ".ctg";
}
inline std::string checkpoint(const ExperimentConfig& cfg, const std::string& method,
                              uint64_t seed) {
    return cfg.out_dir + "/net_" + method + "_seed" + std::to_string(seed) + ".ckpt";
}
inline std::string metrics(const ExperimentConfig& cfg, const std::string& method,
                           uint64_t seed) {
    return cfg.out_dir + "/metrics_" + method + "_seed" + std::to_string(seed) + ".csv";
}
inline std::string eval_csv(const ExperimentConfig& cfg, const std::string& method,
                            uint64_t seed, const std::string& set) {
    return cfg.out_dir + "/eval_" + method + "_seed" + std::to_string(seed) + "_" + set + ".csv";
}
inline std::string dataset(const ExperimentConfig& cfg, const std::string& method,
                           uint64_t seed) {
    return cfg.out_dir + "/dataset_" + method + "_seed" + std::to_string(seed) + ".bin";
}

}  // namespace paths

inline void ensure_dirs(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir + "/scenes");
    fs::create_directories(cfg.out_dir + "/caches");
    fs::create_directories(cfg.out_dir + "/planner");
    fs::create_directories(cfg.out_dir + "/plots");
}

inline void echo_config(const ExperimentConfig& cfg) {
    std::ofstream f(cfg.out_dir + "/config_echo.txt", std::ios::binary);
    if (!f) throw FormatError("cannot write config echo");
    f << cfg.emit();
}

// Samples one scene for a set slot. Scenes whose hardest reachable cell costs
// at least |penalty_c| are rejected so the fixed penalty stays strictly below
// every expert target on every start (bound configurable via max_expert_cost).
inline SceneBundle make_scene_bundle(const ExperimentConfig& cfg, SceneSet set, int index) {
    if (set_count(cfg, set) > 999) throw ConfigError("scene sets are limited to 999 scenes");
    RenderConfig rcfg = cfg.render_config();
    for (int k = 0; k < cfg.scene_attempts; ++k) {
        uint64_t seed = mix_seed(static_cast<uint64_t>(cfg.scene_seed),
                                 static_cast<uint64_t>(set) * 1000003ull +
                                     static_cast<uint64_t>(index),
                                 static_cast<uint64_t>(k));
        Scene scene;
        try {
            scene = sample_scene(cfg.task_kind(), cfg.grid(), cfg.clutter, seed);
        } catch (const SceneInfeasible&) {
            continue;
        }
        scene.id = set_id_base(set) + index;
        SceneBundle b;
        b.scene = std::move(scene);
        b.conn = cfg.conn();
        b.expert = solve_scene(b.scene, b.conn);
        if (cfg.max_expert_cost > 0 && max_finite_cost_to_go(b.expert) >= cfg.max_expert_cost)
            continue;
        b.starts = eligible_starts(b.scene, b.expert);
        if (b.starts.empty()) continue;
        b.cache = build_cache(b.scene, rcfg);
        return b;
    }
    throw SceneInfeasible(std::string("no acceptable scene for ") + set_tag(set) + "[" +
                          std::to_string(index) + "] after " +
                          std::to_string(cfg.scene_attempts) + " attempts");
}

// gen-scenes: writes scene files, observation caches and planner dumps for the
// train/holdout/finetune sets. Idempotent for a fixed scene_seed.
inline void cmd_gen_scenes(const ExperimentConfig& cfg, bool dump_ctg = false) {
    ensure_dirs(cfg);
    echo_config(cfg);
    for (SceneSet set : {SceneSet::Train, SceneSet::Holdout, SceneSet::Finetune}) {
        int n = set_count(cfg, set);
        for (int i = 0; i < n; ++i) {
            SceneBundle b = make_scene_bundle(cfg, set, i);
            save_scene(b.scene, paths::scene(cfg, set, i));
            save_cache(b.cache, paths::cache(cfg, set, i));
            if (dump_ctg) {
                std::ofstream f(paths::ctg(cfg, set, i), std::ios::binary);
                dump_cost_to_go(b.expert, f);
            }
        }
    }
}

inline std::vector<SceneBundle> load_set(const ExperimentConfig& cfg, SceneSet set,
                                         int limit = -1) {
    int n = set_count(cfg, set);
    if (limit >= 0) n = std::min(n, limit);
    RenderConfig rcfg = cfg.render_config();
    std::vector<SceneBundle> out;
    out.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        SceneBundle b;
        b.scene = load_scene(paths::scene(cfg, set, i));
        b.conn = cfg.conn();
        b.expert = solve_scene(b.scene, b.conn);
        b.starts = eligible_starts(b.scene, b.expert);
        b.cache = load_cache(paths::cache(cfg, set, i), b.scene, rcfg);
        out.push_back(std::move(b));
    }
    return out;
}

// Holdout hygiene: no dataset record may reference a holdout scene id.
inline void check_hygiene(const Dataset& d) {
    for (const auto& e : d.records)
        if (e.scene_id >= set_id_base(SceneSet::Holdout) &&
            e.scene_id < set_id_base(SceneSet::Finetune))
            throw InvalidState("hygiene: holdout scene " + std::to_string(e.scene_id) +
                               " appears in a training dataset");
}

struct TrainOutput {
    uint64_t seed = 0;
    EvalReport train_report, holdout_report;
    std::string checkpoint_path, metrics_path;
    std::vector<double> losses;
};

namespace detail {

inline std::map<long long, const SceneBundle*> index_bundles(
    const std::vector<SceneBundle>& bundles) {
    std::map<long long, const SceneBundle*> m;
    for (const auto& b : bundles) m[b.scene.id] = &b;
    return m;
}

}  // namespace detail

// Trains one seed of the configured method on prepared bundles and writes the
// checkpoint, metrics stream and final eval reports.
inline TrainOutput train_one_seed(const ExperimentConfig& cfg,
                                  const std::vector<SceneBundle>& train,
                                  const std::vector<SceneBundle>& holdout, uint64_t seed,
                                  int episodes_per_scene_override = -1,
                                  const std::vector<int>* episodes_by_scene = nullptr) {
    MethodConfig mc = cfg.method_config();
    NetSpec spec = cfg.net_spec();
    QNetwork net = make_network(spec, mix_seed(seed, 0x1817));
    OptimState opt = OptimState::make(net.n_params(), mc.lr);
    Workspace ws;

    std::vector<MetricsRow> rows;
    double last_loss = 0.0;
    TrainCallbacks cb;
    cb.on_progress = [&](long long, double loss) { last_loss = loss; };
    cb.on_snapshot = [&](long long unit, long long step) {
        EvalReport tr = evaluate(greedy_policy(net, ws), train, cfg.snapshot_eval_episodes,
                                 kEvalSeed);
        EvalReport ho = evaluate(greedy_policy(net, ws), holdout, cfg.snapshot_eval_episodes,
                                 kEvalSeed);
        rows.push_back({unit, step, tr.success_rate(), ho.success_rate(), last_loss});
    };

    auto by_id = detail::index_bundles(train);
    TrainResult res;
    if (mc.method == Method::BatchPQC) {
        cb.snapshot_every = cfg.snapshot_every > 0 ? cfg.snapshot_every
                                                   : std::max(1, mc.epochs / 4);
        int eps = episodes_per_scene_override > 0 ? episodes_per_scene_override
                                                  : cfg.episodes_per_scene;
        Dataset d = generate_batch_dataset(train, mc, eps, mix_seed(seed, 0xD5), nullptr,
                                           episodes_by_scene);
        d.scene_set_id = "train@" + std::to_string(cfg.scene_seed);
        check_hygiene(d);
        save_dataset(d, paths::dataset(cfg, cfg.method, seed));
        res = train_batch_pqc(net, opt, d, by_id, mc, mix_seed(seed, 0x7121), cb);
    } else {
        long long cutoff = mc.method == Method::DQN_OnPolicy ? 0 : cfg.schedule_cutoff;
        RolloutSchedule sched = RolloutSchedule::make(cutoff);
        cb.snapshot_every = cfg.snapshot_every > 0
                                ? cfg.snapshot_every
                                : std::max<long long>(1, cfg.online_episodes / 5);
        res = train_online(net, opt, train, mc, sched, cfg.online_episodes,
                           mix_seed(seed, 0x7121), cb);
    }

    TrainOutput out;
    out.seed = seed;
    out.losses = res.epoch_losses;
    out.train_report = evaluate(greedy_policy(net, ws), train, cfg.eval_episodes, kEvalSeed);
    out.holdout_report = evaluate(greedy_policy(net, ws), holdout, cfg.eval_episodes, kEvalSeed);
    out.checkpoint_path = paths::checkpoint(cfg, cfg.method, seed);
    out.metrics_path = paths::metrics(cfg, cfg.method, seed);
    save_checkpoint(net, opt, out.checkpoint_path);
    save_metrics(rows, out.metrics_path);
    save_eval_report(out.train_report, paths::eval_csv(cfg, cfg.method, seed, "train"));
    save_eval_report(out.holdout_report, paths::eval_csv(cfg, cfg.method, seed, "holdout"));
    return out;
}

// train: runs every seed in the config, writing per-seed artifacts.
inline std::vector<TrainOutput> cmd_train(const ExperimentConfig& cfg) {
    ensure_dirs(cfg);
    echo_config(cfg);
    auto train = load_set(cfg, SceneSet::Train);
    auto holdout = load_set(cfg, SceneSet::Holdout);
    std::vector<TrainOutput> outs;
    for (uint64_t seed : cfg.seed_list())
        outs.push_back(train_one_seed(cfg, train, holdout, seed));
    return outs;
}

// eval: greedy rollouts of a checkpoint on a scene set.
inline EvalReport cmd_eval(const ExperimentConfig& cfg, const std::string& checkpoint_path,
                           SceneSet set, int episodes_per_scene = -1) {
    ensure_dirs(cfg);
    auto bundles = load_set(cfg, set);
    auto [net, opt] = load_checkpoint(checkpoint_path, cfg.net_spec());
    Workspace ws;
    int eps = episodes_per_scene > 0 ? episodes_per_scene : cfg.eval_episodes;
    EvalReport rep = evaluate(greedy_policy(net, ws), bundles, eps, kEvalSeed);
    save_eval_report(rep, cfg.out_dir + "/eval_" + set_tag(set) + ".csv");
    return rep;
}

// sweep-scenes: trains batch PQC at several scene counts under a fixed total
// episode budget and evaluates against a shared holdout set.
inline std::vector<GroupedRow> cmd_sweep_scenes(const ExperimentConfig& cfg,
                                                const std::vector<int>& counts) {
    ensure_dirs(cfg);
    echo_config(cfg);
    for (size_t i = 1; i < counts.size(); ++i)
        if (counts[i] <= counts[i - 1]) throw ConfigError("sweep counts must be ascending");
    if (counts.empty()) throw ConfigError("sweep needs at least one count");
    if (counts.back() > cfg.scenes_train)
        throw ConfigError("sweep count exceeds generated train scenes");

    auto pool = load_set(cfg, SceneSet::Train);
    auto holdout = load_set(cfg, SceneSet::Holdout);
    const long long budget =
        static_cast<long long>(cfg.episodes_per_scene) * cfg.scenes_train;

    std::vector<GroupedRow> rows;
    for (int count : counts) {
        std::vector<SceneBundle> subset(pool.begin(), pool.begin() + count);
        std::vector<int> eps_by_scene(static_cast<size_t>(count), int(budget / count));
        for (long long i = 0; i < budget % count; ++i) ++eps_by_scene[static_cast<size_t>(i)];
        for (uint64_t seed : cfg.seed_list()) {
            ExperimentConfig sub = cfg;
            sub.method = "batch_pqc";
            sub.out_dir = cfg.out_dir + "/sweep_" + std::to_string(count);
            ensure_dirs(sub);
            TrainOutput out =
                train_one_seed(sub, subset, holdout, seed, -1, &eps_by_scene);
            rows.push_back({std::to_string(count), static_cast<long long>(seed),
                            out.train_report.success_rate(),
                            out.holdout_report.success_rate()});
        }
    }
    save_grouped(rows, cfg.out_dir + "/sweep.csv");

    // grouped bar data: per-count means, train vs holdout
    std::vector<std::string> groups;
    std::vector<double> train_means, holdout_means;
    for (int count : counts) {
        double t = 0, h = 0;
        int n = 0;
        for (const auto& r : rows)
            if (r.group == std::to_string(count)) {
                t += r.train_success;
                h += r.holdout_success;
                ++n;
            }
        groups.push_back(std::to_string(count));
        train_means.push_back(t / std::max(1, n));
        holdout_means.push_back(h / std::max(1, n));
    }
    std::ofstream f(cfg.out_dir + "/plots/sweep.svg", std::ios::binary);
    f << svg::bar_chart(groups, {"train", "holdout"}, {train_means, holdout_means},
                        "success by training-scene count", "success rate");
    return rows;
}

struct FinetuneOutput {
    uint64_t seed;
    EvalReport before_holdout, after_holdout, before_train, after_train;
};

// finetune: TD finetuning (DQN with the DAGGER-like schedule) of a cloned
// checkpoint on the finetune scene set, with paired before/after evaluation.
inline std::vector<FinetuneOutput> cmd_finetune(const ExperimentConfig& cfg) {
    ensure_dirs(cfg);
    echo_config(cfg);
    auto train = load_set(cfg, SceneSet::Train);
    auto holdout = load_set(cfg, SceneSet::Holdout);
    auto finetune_set = load_set(cfg, SceneSet::Finetune);

    std::vector<FinetuneOutput> outs;
    std::vector<GroupedRow> rows;
    for (uint64_t seed : cfg.seed_list()) {
        auto [net, opt0] = load_checkpoint(paths::checkpoint(cfg, cfg.method, seed),
                                           cfg.net_spec());
        Workspace ws;
        FinetuneOutput fo;
        fo.seed = seed;
        fo.before_holdout =
            evaluate(greedy_policy(net, ws), holdout, cfg.eval_episodes, kEvalSeed);
        fo.before_train = evaluate(greedy_policy(net, ws), train, cfg.eval_episodes, kEvalSeed);

        MethodConfig mc = cfg.method_config();
        mc.lr = cfg.finetune_lr;
        OptimState opt = OptimState::make(net.n_params(), mc.lr);
        RolloutSchedule sched = RolloutSchedule::make(cfg.finetune_cutoff);
        Dataset sanity;
        for (const auto& b : finetune_set)
            sanity.records.push_back({b.scene.id, b.scene.goal, 0, TargetKind::SupervisedQ});
        check_hygiene(sanity);
        finetune_dqn(net, opt, finetune_set, mc, sched, cfg.finetune_episodes,
                     mix_seed(seed, 0xF17E));

        fo.after_holdout =
            evaluate(greedy_policy(net, ws), holdout, cfg.eval_episodes, kEvalSeed);
        fo.after_train = evaluate(greedy_policy(net, ws), train, cfg.eval_episodes, kEvalSeed);
        save_checkpoint(net, opt,
                        paths::checkpoint(cfg, cfg.method + "_finetuned", seed));
        rows.push_back({"before", static_cast<long long>(seed),
                        fo.before_train.success_rate(), fo.before_holdout.success_rate()});
        rows.push_back({"after", static_cast<long long>(seed), fo.after_train.success_rate(),
                        fo.after_holdout.success_rate()});
        outs.push_back(fo);
    }
    save_grouped(rows, cfg.out_dir + "/finetune.csv");

    double bt = 0, bh = 0, at = 0, ah = 0;
    int n = 0;
    for (const auto& fo : outs) {
        bt += fo.before_train.success_rate();
        bh += fo.before_holdout.success_rate();
        at += fo.after_train.success_rate();
        ah += fo.after_holdout.success_rate();
        ++n;
    }
    if (n) {
        std::ofstream f(cfg.out_dir + "/plots/finetune.svg", std::ios::binary);
        f << svg::bar_chart({"train", "holdout"}, {"before", "after"},
                            {{bt / n, bh / n}, {at / n, ah / n}},
                            "success before/after TD finetuning", "success rate");
    }
    return outs;
}

// plot: line charts from metrics streams, bar charts from grouped CSVs.
inline void cmd_plot(const std::vector<std::string>& inputs, const std::string& out_path,
                     const std::string& kind) {
    std::string svg_text;
    if (kind == "line") {
        std::vector<svg::Series> series;
        for (const auto& path : inputs) {
            svg::Series s;
            s.name = std::filesystem::path(path).stem().string();
            for (const auto& r : load_metrics(path))
                s.points.push_back({static_cast<double>(r.step), r.holdout_success});
            series.push_back(std::move(s));
        }
        svg_text = svg::line_chart(series, "holdout success during training", "optimizer step",
                                   "success rate");
    } else if (kind == "bars") {
        if (inputs.size() != 1) throw ConfigError("bars mode takes exactly one grouped csv");
        auto rows = load_grouped(inputs[0]);
        std::vector<std::string> groups;
        for (const auto& r : rows)
            if (groups.empty() || groups.back() != r.group)
                if (std::find(groups.begin(), groups.end(), r.group) == groups.end())
                    groups.push_back(r.group);
        std::vector<double> train_means(groups.size(), 0.0), holdout_means(groups.size(), 0.0);
        std::vector<int> counts(groups.size(), 0);
        for (const auto& r : rows) {
            auto it = std::find(groups.begin(), groups.end(), r.group);
            auto gi = static_cast<size_t>(it - groups.begin());
            train_means[gi] += r.train_success;
            holdout_means[gi] += r.holdout_success;
            ++counts[gi];
        }
        for (size_t i = 0; i < groups.size(); ++i) {
            if (counts[i]) {
                train_means[i] /= counts[i];
                holdout_means[i] /= counts[i];
            }
        }
        svg_text = svg::bar_chart(groups, {"train", "holdout"}, {train_means, holdout_means},
                                  "grouped results", "success rate");
    } else {
        throw ConfigError("plot kind must be 'line' or 'bars'");
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw FormatError("cannot open for write: " + out_path);
    f << svg_text;
}

}  // namespace pqc
