#pragma once

#include <functional>
#include <map>

#include "pqc/env.hpp"
#include "pqc/experience.hpp"
#include "pqc/nnet.hpp"
#include "pqc/planner.hpp"
#include "pqc/render.hpp"
#include "pqc/replay.hpp"

namespace pqc {

enum class Method {
    BatchPQC,
    OnlinePQC,
    OnlinePQC_NoPenalty,
    OnlinePQC_OneAction,
    OnlinePQC_RelativePenalty,
    DAGGER,
    DQfD_Dagger,
    ADET,
    DQN_OnPolicy,
    DQN_Dagger,
};

inline const char* method_name(Method m) {
    switch (m) {
        case Method::BatchPQC: return "batch_pqc";
        case Method::OnlinePQC: return "online_pqc";
        case Method::OnlinePQC_NoPenalty: return "online_pqc_no_penalty";
        case Method::OnlinePQC_OneAction: return "online_pqc_one_action";
        case Method::OnlinePQC_RelativePenalty: return "online_pqc_relative_penalty";
        case Method::DAGGER: return "dagger";
        case Method::DQfD_Dagger: return "dqfd";
        case Method::ADET: return "adet";
        case Method::DQN_OnPolicy: return "dqn_on_policy";
        case Method::DQN_Dagger: return "dqn_dagger";
    }
    return "?";
}

inline Method method_from_name(const std::string& s) {
    for (Method m : {Method::BatchPQC, Method::OnlinePQC, Method::OnlinePQC_NoPenalty,
                     Method::OnlinePQC_OneAction, Method::OnlinePQC_RelativePenalty,
                     Method::DAGGER, Method::DQfD_Dagger, Method::ADET, Method::DQN_OnPolicy,
                     Method::DQN_Dagger})
        if (s == method_name(m)) return m;
    throw ConfigError("unknown method '" + s + "'");
}

inline bool is_pqc_family(Method m) {
    return m == Method::BatchPQC || m == Method::OnlinePQC || m == Method::OnlinePQC_NoPenalty ||
           m == Method::OnlinePQC_OneAction || m == Method::OnlinePQC_RelativePenalty;
}

inline bool uses_fixed_penalty(Method m) {
    return m == Method::BatchPQC || m == Method::OnlinePQC;
}

inline bool is_td_method(Method m) {
    return m == Method::DQfD_Dagger || m == Method::ADET || m == Method::DQN_OnPolicy ||
           m == Method::DQN_Dagger;
}

struct MethodConfig {
    Method method = Method::BatchPQC;
    double penalty_c = -0.5;
    double relative_margin = 0.2;  // relative-penalty l
    double dqfd_margin = 0.2;
    double dqfd_weight = 0.1;
    double adet_weight = 0.1;
    int batch_size = 64;
    int epochs = 8;
    bool per_enabled = true;
    double per_alpha = 0.6;
    double per_eps = 1e-3;
    double per_beta0 = 0.4;
    double per_beta1 = 1.0;
    double gamma = 0.99;
    int target_refresh = 500;
    int steps_per_episode = 8;
    size_t buffer_capacity = 200000;
    double lr = 1e-3;
    int threads = 2;

    void validate() const {
        if (relative_margin <= 0 || dqfd_margin <= 0) throw ConfigError("margins must be > 0");
        if (batch_size < 1 || epochs < 1) throw ConfigError("bad batch/epoch config");
    }
};

inline LossConfig method_loss(const MethodConfig& cfg) {
    LossConfig l;
    switch (cfg.method) {
        case Method::DAGGER: l.kind = LossKind::CrossEntropyPolicy; break;
        case Method::DQfD_Dagger:
            l.kind = LossKind::CompositeDQfD;
            l.margin = cfg.dqfd_margin;
            l.aux_weight = cfg.dqfd_weight;
            break;
        case Method::ADET:
            l.kind = LossKind::CompositeADET;
            l.aux_weight = cfg.adet_weight;
            break;
        default: l.kind = LossKind::HuberValue; break;
    }
    return l;
}

// Everything needed to roll out and label episodes in one scene.
struct SceneBundle {
    Scene scene;
    ObservationCache cache;
    ExpertSolution expert;
    std::vector<Cell> starts;
    Connectivity conn = Connectivity::Six;
};

inline SceneBundle make_bundle(Scene scene, const RenderConfig& rcfg,
                               Connectivity conn = Connectivity::Six) {
    SceneBundle b;
    b.scene = std::move(scene);
    b.conn = conn;
    b.cache = build_cache(b.scene, rcfg);
    b.expert = solve_scene(b.scene, conn);
    b.starts = eligible_starts(b.scene, b.expert);
    return b;
}

// Greedy policy over the learned values: argmax with infeasible-action
// masking; ties break to the lowest index. Returns 0 if nothing is feasible.
inline int greedy_action(const QNetwork& net, Workspace& ws, const SceneBundle& b,
                         const Cell& cell) {
    const auto& q = forward_obs(net, b.cache.lookup_ptr(cell), ws);
    auto mask = feasible_mask(b.scene, cell, b.conn);
    int best = -1;
    double best_q = -kInf;
    for (size_t a = 0; a < mask.size(); ++a) {
        if (!mask[a]) continue;
        if (best < 0 || q[a] > best_q) {
            best = static_cast<int>(a);
            best_q = q[a];
        }
    }
    return best < 0 ? 0 : best;
}

// --- DAGGER-like rollout schedule ---
// Off-policy mass decays exponentially at an 80/20 expert/random split and
// clamps to zero at the cutoff episode (the expert share falls below 1% there).

struct RolloutSchedule {
    double expert0 = 0.8;
    double random0 = 0.2;
    double decay_rate = 0.0;
    long long cutoff = 0;

    static RolloutSchedule make(long long cutoff_episodes) {
        RolloutSchedule s;
        s.cutoff = cutoff_episodes;
        s.decay_rate = cutoff_episodes > 0 ? std::log(80.0) / cutoff_episodes : 0.0;
        return s;
    }

    struct Fractions {
        double expert, random, on_policy;
    };

    Fractions fractions(long long episode) const {
        if (cutoff <= 0 || episode >= cutoff) return {0.0, 0.0, 1.0};
        double s = std::exp(-decay_rate * static_cast<double>(episode));
        return {expert0 * s, random0 * s, 1.0 - s};
    }
};

enum class Behavior : uint8_t { Expert = 0, Random = 1, Greedy = 2 };

struct OnlineStep {
    Cell cell;
    Behavior behavior;
    int action;
    StepResult result;
};

// One episode under the mixed rollout policy. Every visited state is later
// labeled by the expert regardless of which policy acted.
inline std::vector<OnlineStep> rollout_online(const RolloutSchedule& sched, long long episode,
                                              const QNetwork& net, Workspace& ws,
                                              const SceneBundle& b, const Cell& start, Rng& rng) {
    std::vector<OnlineStep> steps;
    auto f = sched.fractions(episode);
    Cell s = start;
    int horizon = b.scene.grid.horizon();
    for (int t = 0; t < horizon; ++t) {
        if (is_goal(b.scene, s)) break;
        double u = rng.uniform();
        OnlineStep st;
        st.cell = s;
        if (u < f.expert) {
            st.behavior = Behavior::Expert;
            st.action = expert_policy(b.expert, b.scene, s);
        } else if (u < f.expert + f.random) {
            st.behavior = Behavior::Random;
            st.action = static_cast<int>(rng.uniform_int(0, action_count(b.conn) - 1));
        } else {
            st.behavior = Behavior::Greedy;
            st.action = greedy_action(net, ws, b, s);
        }
        st.result = step(b.scene, s, st.action, t, b.conn);
        steps.push_back(st);
        if (st.result.terminal != Terminal::None) break;
        s = st.result.next;
    }
    return steps;
}

// Expert rollout used by batch dataset generation.
inline std::vector<OnlineStep> rollout_expert(const SceneBundle& b, const Cell& start) {
    std::vector<OnlineStep> steps;
    Cell s = start;
    int horizon = b.scene.grid.horizon();
    for (int t = 0; t < horizon; ++t) {
        if (is_goal(b.scene, s)) break;
        OnlineStep st;
        st.cell = s;
        st.behavior = Behavior::Expert;
        st.action = expert_policy(b.expert, b.scene, s);
        st.result = step(b.scene, s, st.action, t, b.conn);
        steps.push_back(st);
        if (st.result.terminal != Terminal::None) break;
        s = st.result.next;
    }
    return steps;
}

// --- Target construction ---
// PQC modes emit one record per feasible action at each visited state; the
// one-action ablation keeps only the executed action. DAGGER emits expert
// labels; the TD methods emit executed transitions (with the expert label
// attached for their auxiliary losses). Returns the minimum expert-action
// target seen, for penalty validation.
inline double make_targets(const MethodConfig& cfg, const SceneBundle& b,
                           const std::vector<OnlineStep>& steps,
                           std::vector<Experience>& out) {
    double min_expert_target = kInf;
    const auto& acts = action_set(b.conn);
    for (const auto& st : steps) {
        const Cell& s = st.cell;
        Experience base;
        base.scene_id = b.scene.id;
        base.cell = s;

        if (is_pqc_family(cfg.method)) {
            int a_e = expert_policy(b.expert, b.scene, s);
            double q_e = expert_q(b.expert, b.scene, s, a_e, b.conn);
            min_expert_target = std::min(min_expert_target, q_e);
            if (cfg.method == Method::OnlinePQC_OneAction) {
                // executed action only, true expert value (Algorithm 1 without
                // the all-action loop)
                if (!feasible(b.scene, s, st.action, b.conn)) continue;
                double q = expert_q(b.expert, b.scene, s, st.action, b.conn);
                if (q == -kInf) continue;
                Experience e = base;
                e.action = static_cast<uint8_t>(st.action);
                e.kind = TargetKind::SupervisedQ;
                e.value = q;
                e.expert_action = static_cast<int8_t>(a_e);
                out.push_back(e);
                continue;
            }
            for (size_t a = 0; a < acts.size(); ++a) {
                if (!feasible(b.scene, s, static_cast<int>(a), b.conn)) continue;
                Experience e = base;
                e.action = static_cast<uint8_t>(a);
                e.kind = TargetKind::SupervisedQ;
                e.expert_action = static_cast<int8_t>(a_e);
                if (static_cast<int>(a) == a_e) {
                    e.value = q_e;
                } else if (cfg.method == Method::OnlinePQC_NoPenalty) {
                    double q = expert_q(b.expert, b.scene, s, static_cast<int>(a), b.conn);
                    if (q == -kInf) continue;
                    e.value = q;
                } else if (cfg.method == Method::OnlinePQC_RelativePenalty) {
                    double q = expert_q(b.expert, b.scene, s, static_cast<int>(a), b.conn);
                    if (q == -kInf) continue;
                    e.value = q - cfg.relative_margin;
                } else {
                    e.value = cfg.penalty_c;
                }
                out.push_back(e);
            }
        } else if (cfg.method == Method::DAGGER) {
            Experience e = base;
            int a_e = expert_policy(b.expert, b.scene, s);
            e.action = static_cast<uint8_t>(a_e);
            e.kind = TargetKind::ExpertLabel;
            e.expert_action = static_cast<int8_t>(a_e);
            out.push_back(e);
        } else {
            Experience e = base;
            e.action = static_cast<uint8_t>(st.action);
            e.kind = TargetKind::TDTransition;
            e.value = st.result.reward;
            e.next = st.result.next;
            e.terminal = st.result.terminal == Terminal::Goal ||
                                 st.result.terminal == Terminal::Collision
                             ? 1
                             : 0;
            e.expert_action = static_cast<int8_t>(expert_policy(b.expert, b.scene, s));
            out.push_back(e);
        }
    }
    return min_expert_target;
}

inline void validate_penalty(const MethodConfig& cfg, double min_expert_target) {
    if (uses_fixed_penalty(cfg.method) && cfg.penalty_c >= min_expert_target)
        throw PenaltyInvalid("penalty c=" + fmt_g9(cfg.penalty_c) +
                             " must be below the minimum expert target " +
                             fmt_g9(min_expert_target));
}

// --- Batch PQC data generation (Algorithm 1, lines 1-14) ---

inline Dataset generate_batch_dataset(const std::vector<SceneBundle>& bundles,
                                      const MethodConfig& cfg, int episodes_per_scene,
                                      uint64_t seed,
                                      const std::vector<Cell>* fixed_starts = nullptr,
                                      const std::vector<int>* episodes_by_scene = nullptr) {
    Dataset d;
    d.generator_config = std::string(method_name(cfg.method)) + "|c=" + fmt_g9(cfg.penalty_c) +
                         "|l=" + fmt_g9(cfg.relative_margin) +
                         "|eps=" + std::to_string(episodes_per_scene);
    if (episodes_by_scene && episodes_by_scene->size() != bundles.size())
        throw InvalidState("generate_batch_dataset: per-scene episode list size mismatch");
    double min_expert_target = kInf;
    for (size_t si = 0; si < bundles.size(); ++si) {
        const SceneBundle& b = bundles[si];
        if (b.starts.empty()) throw SceneInfeasible("scene has no eligible starts");
        int n_eps = fixed_starts ? static_cast<int>(fixed_starts->size())
                                 : (episodes_by_scene ? (*episodes_by_scene)[si]
                                                      : episodes_per_scene);
        for (int ep = 0; ep < n_eps; ++ep) {
            Rng rng(mix_seed(seed, si, static_cast<uint64_t>(ep)));
            Cell start = fixed_starts ? (*fixed_starts)[static_cast<size_t>(ep)] : rng.pick(b.starts);
            auto steps = rollout_expert(b, start);
            min_expert_target = std::min(min_expert_target, make_targets(cfg, b, steps, d.records));
        }
    }
    validate_penalty(cfg, min_expert_target);
    return d;
}

// --- Trainers ---

struct TrainCallbacks {
    // invoked after each epoch (batch) or evaluation interval (online)
    std::function<void(long long step, double mean_loss)> on_progress;
    // invoked at evaluation snapshots: (episode or epoch index, optimizer step)
    std::function<void(long long unit, long long step)> on_snapshot;
    long long snapshot_every = 0;  // units between snapshots; 0 disables
};

struct BatchIndexer {
    const ObservationCache* cache;
};

// Assembles network inputs for a list of experiences from the per-scene caches.
inline void assemble_inputs(const std::vector<const Experience*>& batch,
                            const std::map<long long, const SceneBundle*>& by_id, int in_size,
                            std::vector<double>& input, bool next_state = false) {
    input.resize(batch.size() * static_cast<size_t>(in_size));
    for (size_t i = 0; i < batch.size(); ++i) {
        const Experience& e = *batch[i];
        const SceneBundle* b = by_id.at(e.scene_id);
        const float* src = b->cache.lookup_ptr(next_state ? e.next : e.cell);
        double* dst = input.data() + i * static_cast<size_t>(in_size);
        for (int j = 0; j < in_size; ++j) dst[j] = src[j];
    }
}

// TD target: r for terminal transitions, else r + gamma * max_a' Q_target.
inline double td_target(const QNetwork& target_net, Workspace& ws, const Experience& e,
                        double gamma, const ObservationCache& cache) {
    if (e.kind != TargetKind::TDTransition) throw InvalidState("td_target: not a TD record");
    if (e.terminal) return e.value;
    const auto& q = forward_obs(target_net, cache.lookup_ptr(e.next), ws);
    double m = q[0];
    for (size_t i = 1; i < q.size(); ++i) m = std::max(m, q[i]);
    return e.value + gamma * m;
}

struct TrainResult {
    std::vector<double> epoch_losses;
    long long steps = 0;
};

// Minimizes the PQC supervised loss over the dataset with minibatch SGD
// (batch 64, 8 epochs by default; PER-weighted when enabled). Deterministic
// given (seed, dataset order); resuming from a checkpointed (net, opt) pair
// continues the same stream.
inline TrainResult train_batch_pqc(QNetwork& net, OptimState& opt, const Dataset& dataset,
                                   const std::map<long long, const SceneBundle*>& by_id,
                                   const MethodConfig& cfg, uint64_t seed,
                                   const TrainCallbacks& cb = {}, double stop_at_loss = -1.0,
                                   int max_epochs = -1) {
    if (dataset.records.empty()) throw InvalidState("train_batch_pqc: empty dataset");
    for (const auto& e : dataset.records)
        if (e.kind != TargetKind::SupervisedQ)
            throw InvalidState("train_batch_pqc: dataset must hold supervised q targets");
    const int B = cfg.batch_size;
    const long long n = static_cast<long long>(dataset.records.size());
    const long long steps_per_epoch = (n + B - 1) / B;
    const int epochs = max_epochs > 0 ? max_epochs : cfg.epochs;
    const int in_size = net.in_size();
    LossConfig loss_cfg;  // HuberValue
    Workspace ws;
    std::vector<double> grad;
    TrainResult res;

    if (cfg.per_enabled) {
        PERBuffer buf(dataset.records.size(), cfg.per_alpha, cfg.per_eps, cfg.per_beta0,
                      cfg.per_beta1);
        for (const auto& e : dataset.records) buf.insert(e);
        const long long total_steps = steps_per_epoch * epochs;
        long long start_step = opt.t;  // resume point
        double running = 0.0;
        long long running_n = 0;
        for (long long s = start_step; s < total_steps; ++s) {
            buf.set_progress(static_cast<double>(s) / std::max<long long>(1, total_steps));
            Rng rng(mix_seed(seed, 0x50455253ull, static_cast<uint64_t>(s)));
            auto sample = buf.sample(static_cast<size_t>(B), rng);
            std::vector<const Experience*> batch;
            batch.reserve(sample.indices.size());
            std::vector<SampleTarget> targets;
            for (size_t idx : sample.indices) {
                const Experience& e = buf.item(idx);
                batch.push_back(&e);
                targets.push_back({static_cast<int>(e.action), e.value, e.expert_action});
            }
            std::vector<double> input;
            assemble_inputs(batch, by_id, in_size, input);
            auto lr = loss_and_grad(net, input.data(), B, targets, loss_cfg, sample.is_weights,
                                    ws, grad, cfg.threads);
            opt_step(net, opt, grad);
            buf.update_priorities(sample.indices, lr.per_sample);
            running += lr.mean_loss;
            ++running_n;
            if ((s + 1) % steps_per_epoch == 0) {
                double mean = running / static_cast<double>(running_n);
                res.epoch_losses.push_back(mean);
                if (cb.on_progress) cb.on_progress(s + 1, mean);
                long long epoch = (s + 1) / steps_per_epoch;
                if (cb.on_snapshot && cb.snapshot_every > 0 && epoch % cb.snapshot_every == 0)
                    cb.on_snapshot(epoch, s + 1);
                running = 0.0;
                running_n = 0;
                if (stop_at_loss > 0 && mean < stop_at_loss) break;
            }
        }
        res.steps = opt.t;
        return res;
    }

    // uniform shuffling path
    std::vector<double> ones(static_cast<size_t>(B), 1.0);
    long long start_epoch = opt.t / steps_per_epoch;
    long long start_batch = opt.t % steps_per_epoch;
    for (long long e = start_epoch; e < epochs; ++e) {
        std::vector<size_t> perm(static_cast<size_t>(n));
        for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        Rng rng(mix_seed(seed, 0x45504f43ull, static_cast<uint64_t>(e)));
        rng.shuffle(perm);
        double running = 0.0;
        long long running_n = 0;
        for (long long bi = (e == start_epoch ? start_batch : 0); bi < steps_per_epoch; ++bi) {
            size_t lo = static_cast<size_t>(bi) * B;
            size_t hi = std::min(lo + static_cast<size_t>(B), static_cast<size_t>(n));
            std::vector<const Experience*> batch;
            std::vector<SampleTarget> targets;
            for (size_t i = lo; i < hi; ++i) {
                const Experience& ex = dataset.records[perm[i]];
                batch.push_back(&ex);
                targets.push_back({static_cast<int>(ex.action), ex.value, ex.expert_action});
            }
            std::vector<double> input;
            assemble_inputs(batch, by_id, in_size, input);
            std::vector<double> w(batch.size(), 1.0);
            auto lr = loss_and_grad(net, input.data(), static_cast<int>(batch.size()), targets,
                                    loss_cfg, w, ws, grad, cfg.threads);
            opt_step(net, opt, grad);
            running += lr.mean_loss;
            ++running_n;
        }
        double mean = running / std::max<long long>(1, running_n);
        res.epoch_losses.push_back(mean);
        if (cb.on_progress) cb.on_progress(opt.t, mean);
        if (cb.on_snapshot && cb.snapshot_every > 0 && (e + 1) % cb.snapshot_every == 0)
            cb.on_snapshot(e + 1, opt.t);
        if (stop_at_loss > 0 && mean < stop_at_loss) break;
    }
    res.steps = opt.t;
    return res;
}

// Online training loop: rollout -> expert labeling -> replay insertion ->
// prioritized minibatch updates. Covers the online PQC variants, DAGGER,
// DQfD, ADET and the DQN baselines; also used for TD finetuning.
inline TrainResult train_online(QNetwork& net, OptimState& opt,
                                const std::vector<SceneBundle>& bundles, const MethodConfig& cfg,
                                const RolloutSchedule& sched, long long episodes, uint64_t seed,
                                const TrainCallbacks& cb = {}) {
    if (bundles.empty()) throw InvalidState("train_online: no scenes");
    const int B = cfg.batch_size;
    const int in_size = net.in_size();
    LossConfig loss_cfg = method_loss(cfg);
    const bool td = is_td_method(cfg.method);

    // PER off degenerates to uniform sampling with unit weights (alpha = 0)
    double alpha = cfg.per_enabled ? cfg.per_alpha : 0.0;
    double beta0 = cfg.per_enabled ? cfg.per_beta0 : 0.0;
    double beta1 = cfg.per_enabled ? cfg.per_beta1 : 0.0;
    PERBuffer buf(cfg.buffer_capacity, alpha, cfg.per_eps, beta0, beta1);

    QNetwork target_net = net;
    Workspace ws, ws_t;
    std::vector<double> grad;
    TrainResult res;
    double running = 0.0;
    long long running_n = 0;
    std::map<long long, const SceneBundle*> by_id;
    for (const auto& bb : bundles) by_id[bb.scene.id] = &bb;

    for (long long ep = 0; ep < episodes; ++ep) {
        buf.set_progress(static_cast<double>(ep) / std::max<long long>(1, episodes));
        Rng rng(mix_seed(seed, 0x45505ull, static_cast<uint64_t>(ep)));
        const SceneBundle& b = bundles[static_cast<size_t>(
            rng.uniform_int(0, static_cast<long long>(bundles.size()) - 1))];
        Cell start = rng.pick(b.starts);
        auto steps = rollout_online(sched, ep, net, ws, b, start, rng);
        std::vector<Experience> exps;
        double min_target = make_targets(cfg, b, steps, exps);
        validate_penalty(cfg, min_target);
        for (const auto& e : exps) buf.insert(e);

        for (int k = 0; k < cfg.steps_per_episode; ++k) {
            if (buf.size() < static_cast<size_t>(B)) break;
            Rng srng(mix_seed(seed, 0x53414d50ull, static_cast<uint64_t>(opt.t)));
            auto sample = buf.sample(static_cast<size_t>(B), srng);
            std::vector<const Experience*> batch;
            std::vector<SampleTarget> targets;
            for (size_t idx : sample.indices) {
                const Experience& e = buf.item(idx);
                batch.push_back(&e);
                SampleTarget t;
                t.action = static_cast<int>(e.action);
                t.expert_action = e.expert_action;
                if (e.kind == TargetKind::TDTransition)
                    t.q = td_target(target_net, ws_t, e, cfg.gamma,
                                    by_id.at(e.scene_id)->cache);
                else
                    t.q = e.value;
                targets.push_back(t);
            }
            std::vector<double> input;
            assemble_inputs(batch, by_id, in_size, input);
            auto lr = loss_and_grad(net, input.data(), B, targets, loss_cfg, sample.is_weights,
                                    ws, grad, cfg.threads);
            opt_step(net, opt, grad);
            buf.update_priorities(sample.indices, lr.per_sample);
            running += lr.mean_loss;
            ++running_n;
            if (td && cfg.target_refresh > 0 && opt.t % cfg.target_refresh == 0)
                target_net.params = net.params;
        }

        if (cb.snapshot_every > 0 && (ep + 1) % cb.snapshot_every == 0) {
            if (cb.on_progress)
                cb.on_progress(opt.t, running_n ? running / static_cast<double>(running_n) : 0.0);
            if (cb.on_snapshot) cb.on_snapshot(ep + 1, opt.t);
            res.epoch_losses.push_back(running_n ? running / static_cast<double>(running_n) : 0.0);
            running = 0.0;
            running_n = 0;
        }
    }
    res.steps = opt.t;
    return res;
}

// TD finetuning: standard DQN with the DAGGER-like schedule, starting from a
// cloned network. Zero episodes leave the network untouched.
inline TrainResult finetune_dqn(QNetwork& net, OptimState& opt,
                                const std::vector<SceneBundle>& bundles, MethodConfig cfg,
                                const RolloutSchedule& sched, long long episodes, uint64_t seed,
                                const TrainCallbacks& cb = {}) {
    cfg.method = Method::DQN_Dagger;
    if (episodes == 0) return {};
    return train_online(net, opt, bundles, cfg, sched, episodes, seed, cb);
}

}  // namespace pqc
