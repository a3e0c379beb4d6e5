#pragma once

#include "pqc/clone.hpp"
#include "pqc/render.hpp"

namespace pqc {

// Flat key = value experiment configuration. Every field has a default; the
// full set is echoed into the output directory for provenance.
struct ExperimentConfig {
    std::string task = "peg";
    int grid_nx = 11, grid_ny = 11, grid_nz = 7;
    double cell_size = 0.01;
    int connectivity = 6;
    int clutter = 6;
    int scenes_train = 40, scenes_holdout = 10, scenes_finetune = 40;
    int episodes_per_scene = 25;
    long long online_episodes = 1000;
    long long schedule_cutoff = 500;
    std::string method = "batch_pqc";
    double penalty_c = -0.5;
    double relative_margin = 0.2;
    double dqfd_margin = 0.2;
    double dqfd_weight = 0.1;
    double adet_weight = 0.1;
    int batch_size = 64;
    int epochs = 8;
    bool per = true;
    double per_alpha = 0.6;
    double per_eps = 1e-3;
    double per_beta0 = 0.4;
    double per_beta1 = 1.0;
    double gamma = 0.99;
    int target_refresh = 500;
    int steps_per_episode = 8;
    long long buffer_capacity = 200000;
    double lr = 1e-3;
    double finetune_lr = 1e-4;
    long long finetune_episodes = 600;
    long long finetune_cutoff = 300;
    std::string net = "conv:8:3:2,relu,conv:16:3:2,relu,flatten,fc:64,relu,fc:out";
    int render_k = 8;
    int render_width = 32, render_height = 32;
    int band_rows = 2;
    double depth_min = -0.02, depth_max = 0.12;
    double dropout = 0.0;
    std::string seeds = "0,1,2";
    long long scene_seed = 9000;  // scene sets are shared across training seeds
    int eval_episodes = 20;
    long long snapshot_every = 0;  // 0: auto (epochs/2 for batch, episodes/5 online)
    int snapshot_eval_episodes = 4;
    double max_expert_cost = 0.45;  // scene filter; <= 0 disables
    int scene_attempts = 100;
    int threads = 2;
    std::string out_dir = "out";

    void set(const std::string& key, const std::string& value) {
        auto as_bool = [&] {
            if (value == "true" || value == "1") return true;
            if (value == "false" || value == "0") return false;
            throw ConfigError("bad boolean for " + key + ": " + value);
        };
        if (key == "preset") {
            if (value == "desk") {
                grid_nx = 11; grid_ny = 11; grid_nz = 7;
                scenes_train = 40; scenes_holdout = 10; scenes_finetune = 40;
                episodes_per_scene = 25; online_episodes = 1000; schedule_cutoff = 500;
            } else if (value == "paper") {
                grid_nx = 21; grid_ny = 21; grid_nz = 12;
                scenes_train = 500; scenes_holdout = 100; scenes_finetune = 500;
                episodes_per_scene = 100; online_episodes = 50000; schedule_cutoff = 25000;
            } else {
                throw ConfigError("unknown preset '" + value + "'");
            }
        }
        else if (key == "task") task = value;
        else if (key == "grid_nx") grid_nx = int(parse_int(value));
        else if (key == "grid_ny") grid_ny = int(parse_int(value));
        else if (key == "grid_nz") grid_nz = int(parse_int(value));
        else if (key == "cell_size") cell_size = parse_double(value);
        else if (key == "connectivity") connectivity = int(parse_int(value));
        else if (key == "clutter") clutter = int(parse_int(value));
        else if (key == "scenes_train") scenes_train = int(parse_int(value));
        else if (key == "scenes_holdout") scenes_holdout = int(parse_int(value));
        else if (key == "scenes_finetune") scenes_finetune = int(parse_int(value));
        else if (key == "episodes_per_scene") episodes_per_scene = int(parse_int(value));
        else if (key == "online_episodes") online_episodes = parse_int(value);
        else if (key == "schedule_cutoff") schedule_cutoff = parse_int(value);
        else if (key == "method") method = value;
        else if (key == "penalty_c") penalty_c = parse_double(value);
        else if (key == "relative_margin") relative_margin = parse_double(value);
        else if (key == "dqfd_margin") dqfd_margin = parse_double(value);
        else if (key == "dqfd_weight") dqfd_weight = parse_double(value);
        else if (key == "adet_weight") adet_weight = parse_double(value);
        else if (key == "batch_size") batch_size = int(parse_int(value));
        else if (key == "epochs") epochs = int(parse_int(value));
        else if (key == "per") per = as_bool();
        else if (key == "per_alpha") per_alpha = parse_double(value);
        else if (key == "per_eps") per_eps = parse_double(value);
        else if (key == "per_beta0") per_beta0 = parse_double(value);
        else if (key == "per_beta1") per_beta1 = parse_double(value);
        else if (key == "gamma") gamma = parse_double(value);
        else if (key == "target_refresh") target_refresh = int(parse_int(value));
        else if (key == "steps_per_episode") steps_per_episode = int(parse_int(value));
        else if (key == "buffer_capacity") buffer_capacity = parse_int(value);
        else if (key == "lr") lr = parse_double(value);
        else if (key == "finetune_lr") finetune_lr = parse_double(value);
        else if (key == "finetune_episodes") finetune_episodes = parse_int(value);
        else if (key == "finetune_cutoff") finetune_cutoff = parse_int(value);
        else if (key == "net") net = value;
        else if (key == "render_k") render_k = int(parse_int(value));
        else if (key == "render_width") render_width = int(parse_int(value));
        else if (key == "render_height") render_height = int(parse_int(value));
        else if (key == "band_rows") band_rows = int(parse_int(value));
        else if (key == "depth_min") depth_min = parse_double(value);
        else if (key == "depth_max") depth_max = parse_double(value);
        else if (key == "dropout") dropout = parse_double(value);
        else if (key == "seeds") seeds = value;
        else if (key == "scene_seed") scene_seed = parse_int(value);
        else if (key == "eval_episodes") eval_episodes = int(parse_int(value));
        else if (key == "snapshot_every") snapshot_every = parse_int(value);
        else if (key == "snapshot_eval_episodes") snapshot_eval_episodes = int(parse_int(value));
        else if (key == "max_expert_cost") max_expert_cost = parse_double(value);
        else if (key == "scene_attempts") scene_attempts = int(parse_int(value));
        else if (key == "threads") threads = int(parse_int(value));
        else if (key == "out_dir") out_dir = value;
        else throw ConfigError("unknown config key '" + key + "'");
    }

    std::string emit() const {
        std::ostringstream os;
        os << "task = " << task << "\n";
        os << "grid_nx = " << grid_nx << "\n";
        os << "grid_ny = " << grid_ny << "\n";
        os << "grid_nz = " << grid_nz << "\n";
        os << "cell_size = " << fmt_g9(cell_size) << "\n";
        os << "connectivity = " << connectivity << "\n";
        os << "clutter = " << clutter << "\n";
        os << "scenes_train = " << scenes_train << "\n";
        os << "scenes_holdout = " << scenes_holdout << "\n";
        os << "scenes_finetune = " << scenes_finetune << "\n";
        os << "episodes_per_scene = " << episodes_per_scene << "\n";
        os << "online_episodes = " << online_episodes << "\n";
        os << "schedule_cutoff = " << schedule_cutoff << "\n";
        os << "method = " << method << "\n";
        os << "penalty_c = " << fmt_g9(penalty_c) << "\n";
        os << "relative_margin = " << fmt_g9(relative_margin) << "\n";
        os << "dqfd_margin = " << fmt_g9(dqfd_margin) << "\n";
        os << "dqfd_weight = " << fmt_g9(dqfd_weight) << "\n";
        os << "adet_weight = " << fmt_g9(adet_weight) << "\n";
        os << "batch_size = " << batch_size << "\n";
        os << "epochs = " << epochs << "\n";
        os << "per = " << (per ? "true" : "false") << "\n";
        os << "per_alpha = " << fmt_g9(per_alpha) << "\n";
        os << "per_eps = " << fmt_g9(per_eps) << "\n";
        os << "per_beta0 = " << fmt_g9(per_beta0) << "\n";
        os << "per_beta1 = " << fmt_g9(per_beta1) << "\n";
        os << "gamma = " << fmt_g9(gamma) << "\n";
        os << "target_refresh = " << target_refresh << "\n";
        os << "steps_per_episode = " << steps_per_episode << "\n";
        os << "buffer_capacity = " << buffer_capacity << "\n";
        os << "lr = " << fmt_g9(lr) << "\n";
        os << "finetune_lr = " << fmt_g9(finetune_lr) << "\n";
        os << "finetune_episodes = " << finetune_episodes << "\n";
        os << "finetune_cutoff = " << finetune_cutoff << "\n";
        os << "net = " << net << "\n";
        os << "render_k = " << render_k << "\n";
        os << "render_width = " << render_width << "\n";
        os << "render_height = " << render_height << "\n";
        os << "band_rows = " << band_rows << "\n";
        os << "depth_min = " << fmt_g9(depth_min) << "\n";
        os << "depth_max = " << fmt_g9(depth_max) << "\n";
        os << "dropout = " << fmt_g9(dropout) << "\n";
        os << "seeds = " << seeds << "\n";
        os << "scene_seed = " << scene_seed << "\n";
        os << "eval_episodes = " << eval_episodes << "\n";
        os << "snapshot_every = " << snapshot_every << "\n";
        os << "snapshot_eval_episodes = " << snapshot_eval_episodes << "\n";
        os << "max_expert_cost = " << fmt_g9(max_expert_cost) << "\n";
        os << "scene_attempts = " << scene_attempts << "\n";
        os << "threads = " << threads << "\n";
        os << "out_dir = " << out_dir << "\n";
        return os.str();
    }

    void apply_text(const std::string& text) {
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            auto eq = line.find('=');
            if (eq == std::string::npos) {
                bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
                if (!blank) throw ConfigError("config line without '=': " + line);
                continue;
            }
            auto trim = [](std::string s) {
                auto a = s.find_first_not_of(" \t\r");
                auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("empty config key");
            set(key, value);
        }
    }

    void load_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open config: " + path);
        std::ostringstream ss;
        ss << f.rdbuf();
        apply_text(ss.str());
    }

    // --- Derived objects ---

    GridSpec grid() const {
        GridSpec g{grid_nx, grid_ny, grid_nz, cell_size};
        g.validate();
        return g;
    }

    Connectivity conn() const {
        if (connectivity == 6) return Connectivity::Six;
        if (connectivity == 26) return Connectivity::TwentySix;
        throw ConfigError("connectivity must be 6 or 26");
    }

    TaskKind task_kind() const { return task_from_name(task); }

    RenderConfig render_config() const {
        RenderConfig r;
        r.window_half_cells = render_k;
        r.width = render_width;
        r.height = render_height;
        r.band_rows = band_rows;
        r.depth_min = depth_min;
        r.depth_max = depth_max;
        r.dropout_prob = dropout;
        return r;
    }

    MethodConfig method_config() const {
        MethodConfig m;
        m.method = method_from_name(method);
        m.penalty_c = penalty_c;
        m.relative_margin = relative_margin;
        m.dqfd_margin = dqfd_margin;
        m.dqfd_weight = dqfd_weight;
        m.adet_weight = adet_weight;
        m.batch_size = batch_size;
        m.epochs = epochs;
        m.per_enabled = per;
        m.per_alpha = per_alpha;
        m.per_eps = per_eps;
        m.per_beta0 = per_beta0;
        m.per_beta1 = per_beta1;
        m.gamma = gamma;
        m.target_refresh = target_refresh;
        m.steps_per_episode = steps_per_episode;
        m.buffer_capacity = static_cast<size_t>(buffer_capacity);
        m.lr = lr;
        m.threads = threads;
        m.validate();
        return m;
    }

    NetSpec net_spec() const {
        return NetSpec::parse(net, 2, render_height, render_width, action_count(conn()));
    }

    std::vector<uint64_t> seed_list() const {
        std::vector<uint64_t> out;
        std::istringstream is(seeds);
        std::string tok;
        while (std::getline(is, tok, ','))
            if (!tok.empty()) out.push_back(static_cast<uint64_t>(parse_int(tok)));
        if (out.empty()) throw ConfigError("seeds list is empty");
        return out;
    }
};

}  // namespace pqc
