// Command-line driver for the planner-cloning lab: scene generation, training,
// evaluation, the scene-count sweep, TD finetuning and chart rendering.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "pqc/harness.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;

    pqc::ExperimentConfig resolve() const {
        pqc::ExperimentConfig cfg;
        if (!config_path.empty()) cfg.load_file(config_path);
        for (const auto& kv : overrides) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw pqc::ConfigError("--set expects key=value, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("-c,--config", o.config_path, "experiment config file (key = value lines)");
    cmd->add_option("-s,--set", o.overrides, "override a config key, key=value")->take_all();
    cmd->add_option("-o,--out", o.out_dir, "output directory");
}

std::vector<int> parse_counts(const std::string& s) {
    std::vector<int> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(static_cast<int>(pqc::parse_int(tok)));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gridworld visual-servo planner-cloning lab"};
    app.require_subcommand(1);

    CommonOpts gen_o, train_o, eval_o, sweep_o, ft_o;
    bool dump_ctg = false;
    auto* gen = app.add_subcommand("gen-scenes", "sample scenes, solve experts, build caches");
    add_common(gen, gen_o);
    gen->add_flag("--dump-ctg", dump_ctg, "also write cost-to-go text dumps");

    auto* train = app.add_subcommand("train", "train the configured method for every seed");
    add_common(train, train_o);

    std::string eval_ckpt, eval_set = "holdout";
    int eval_eps = -1;
    auto* evalc = app.add_subcommand("eval", "greedy rollouts of a checkpoint on a scene set");
    add_common(evalc, eval_o);
    evalc->add_option("--checkpoint", eval_ckpt, "checkpoint path")->required();
    evalc->add_option("--scene-set", eval_set, "train | holdout | finetune");
    evalc->add_option("--episodes", eval_eps, "episodes per scene");

    std::string counts = "10,40,160";
    auto* sweep = app.add_subcommand("sweep-scenes",
                                     "train batch PQC at several scene counts, fixed budget");
    add_common(sweep, sweep_o);
    sweep->add_option("--counts", counts, "ascending scene counts, comma separated");

    auto* ft = app.add_subcommand("finetune", "TD-finetune trained checkpoints");
    add_common(ft, ft_o);

    std::vector<std::string> plot_inputs;
    std::string plot_out = "plot.svg", plot_kind = "line";
    auto* plot = app.add_subcommand("plot", "render metrics or grouped CSVs as SVG charts");
    plot->add_option("inputs", plot_inputs, "metrics csv files (line) or one grouped csv (bars)");
    plot->add_option("--out", plot_out, "output svg path");
    plot->add_option("--kind", plot_kind, "line | bars");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            pqc::cmd_gen_scenes(gen_o.resolve(), dump_ctg);
            std::cout << "scenes ready\n";
        } else if (train->parsed()) {
            auto outs = pqc::cmd_train(train_o.resolve());
            for (const auto& o : outs)
                std::cout << "seed " << o.seed
                          << " train_success=" << pqc::fmt_shortest(o.train_report.success_rate())
                          << " holdout_success="
                          << pqc::fmt_shortest(o.holdout_report.success_rate()) << " -> "
                          << o.checkpoint_path << "\n";
        } else if (evalc->parsed()) {
            pqc::SceneSet set = eval_set == "train"      ? pqc::SceneSet::Train
                                : eval_set == "finetune" ? pqc::SceneSet::Finetune
                                                         : pqc::SceneSet::Holdout;
            auto rep = pqc::cmd_eval(eval_o.resolve(), eval_ckpt, set, eval_eps);
            std::cout << "episodes=" << rep.episodes
                      << " success=" << pqc::fmt_shortest(rep.success_rate())
                      << " collision=" << pqc::fmt_shortest(rep.collision_rate())
                      << " timeout=" << pqc::fmt_shortest(rep.timeout_rate()) << "\n";
        } else if (sweep->parsed()) {
            auto rows = pqc::cmd_sweep_scenes(sweep_o.resolve(), parse_counts(counts));
            for (const auto& r : rows)
                std::cout << "scenes=" << r.group << " seed=" << r.seed
                          << " train=" << pqc::fmt_shortest(r.train_success)
                          << " holdout=" << pqc::fmt_shortest(r.holdout_success) << "\n";
        } else if (ft->parsed()) {
            auto outs = pqc::cmd_finetune(ft_o.resolve());
            for (const auto& o : outs)
                std::cout << "seed " << o.seed << " holdout "
                          << pqc::fmt_shortest(o.before_holdout.success_rate()) << " -> "
                          << pqc::fmt_shortest(o.after_holdout.success_rate()) << "\n";
        } else if (plot->parsed()) {
            pqc::cmd_plot(plot_inputs, plot_out, plot_kind);
            std::cout << "wrote " << plot_out << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
