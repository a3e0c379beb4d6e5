#pragma once

#include <cstring>
#include <fstream>
#include <thread>

#include "pqc/common.hpp"
#include "pqc/rng.hpp"

namespace pqc {

// --- Network specification ---

enum class LayerKind { Conv, ReLU, Flatten, Dense };

struct LayerSpec {
    LayerKind kind;
    int out_channels = 0, kernel = 0, stride = 0;  // conv
    int width = 0;                                 // dense; 0 means "output width"
};

struct Shape3 {
    int c = 0, h = 0, w = 0;
    int size() const { return c * h * w; }
    bool flat() const { return c == 1 && h == 1; }
};

struct NetSpec {
    int in_c = 2, in_h = 32, in_w = 32;
    int out_dim = 6;
    std::vector<LayerSpec> layers;

    // Layer list syntax: "conv:8:3:2,relu,conv:16:3:2,relu,flatten,fc:64,relu,fc:out"
    static NetSpec parse(const std::string& text, int in_c, int in_h, int in_w, int out_dim) {
        NetSpec spec;
        spec.in_c = in_c;
        spec.in_h = in_h;
        spec.in_w = in_w;
        spec.out_dim = out_dim;
        std::string item;
        std::istringstream is(text);
        while (std::getline(is, item, ',')) {
            std::vector<std::string> f;
            std::istringstream fs(item);
            std::string tok;
            while (std::getline(fs, tok, ':')) f.push_back(tok);
            if (f.empty()) throw ConfigError("net: empty layer item");
            LayerSpec l{};
            if (f[0] == "conv") {
                if (f.size() != 4) throw ConfigError("net: conv needs channels:kernel:stride");
                l.kind = LayerKind::Conv;
                l.out_channels = static_cast<int>(parse_int(f[1]));
                l.kernel = static_cast<int>(parse_int(f[2]));
                l.stride = static_cast<int>(parse_int(f[3]));
            } else if (f[0] == "relu") {
                l.kind = LayerKind::ReLU;
            } else if (f[0] == "flatten") {
                l.kind = LayerKind::Flatten;
            } else if (f[0] == "fc") {
                if (f.size() != 2) throw ConfigError("net: fc needs a width");
                l.kind = LayerKind::Dense;
                l.width = f[1] == "out" ? out_dim : static_cast<int>(parse_int(f[1]));
            } else {
                throw ConfigError("net: unknown layer '" + f[0] + "'");
            }
            spec.layers.push_back(l);
        }
        if (spec.layers.empty()) throw ConfigError("net: no layers");
        return spec;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "in:" << in_c << "x" << in_h << "x" << in_w << "|out:" << out_dim << "|";
        for (size_t i = 0; i < layers.size(); ++i) {
            if (i) os << ",";
            const auto& l = layers[i];
            switch (l.kind) {
                case LayerKind::Conv:
                    os << "conv:" << l.out_channels << ":" << l.kernel << ":" << l.stride;
                    break;
                case LayerKind::ReLU: os << "relu"; break;
                case LayerKind::Flatten: os << "flatten"; break;
                case LayerKind::Dense: os << "fc:" << l.width; break;
            }
        }
        return os.str();
    }
};

struct LayerPlan {
    LayerSpec spec;
    Shape3 in, out;
    size_t param_offset = 0, n_params = 0;
};

// Small natively implemented value network: a flat 64-bit parameter vector with
// a per-layer offset index. Forward/backward are exact for the fixed layer set.
struct QNetwork {
    NetSpec spec;
    std::vector<LayerPlan> plan;
    std::vector<double> params;

    size_t n_params() const { return params.size(); }
    int out_dim() const { return spec.out_dim; }
    int in_size() const { return spec.in_c * spec.in_h * spec.in_w; }
};

inline QNetwork build_network(const NetSpec& spec) {
    QNetwork net;
    net.spec = spec;
    Shape3 cur{spec.in_c, spec.in_h, spec.in_w};
    bool flat = false;
    size_t offset = 0;
    for (const auto& l : spec.layers) {
        LayerPlan p;
        p.spec = l;
        p.in = cur;
        p.param_offset = offset;
        switch (l.kind) {
            case LayerKind::Conv: {
                if (flat) throw ShapeMismatch("net: conv after flatten");
                int oh = (cur.h - l.kernel) / l.stride + 1;
                int ow = (cur.w - l.kernel) / l.stride + 1;
                if (l.kernel <= 0 || l.stride <= 0 || oh < 1 || ow < 1 || l.out_channels < 1)
                    throw ShapeMismatch("net: conv shape underflow");
                p.out = {l.out_channels, oh, ow};
                p.n_params = static_cast<size_t>(l.out_channels) * cur.c * l.kernel * l.kernel +
                             l.out_channels;
                break;
            }
            case LayerKind::ReLU:
                p.out = cur;
                break;
            case LayerKind::Flatten:
                if (flat) throw ShapeMismatch("net: double flatten");
                flat = true;
                p.out = {1, 1, cur.size()};
                break;
            case LayerKind::Dense:
                if (!flat) throw ShapeMismatch("net: fc before flatten");
                p.out = {1, 1, l.width};
                p.n_params = static_cast<size_t>(l.width) * cur.size() + l.width;
                break;
        }
        offset += p.n_params;
        cur = p.out;
        net.plan.push_back(p);
    }
    if (!flat || cur.size() != spec.out_dim)
        throw ShapeMismatch("net: output width " + std::to_string(cur.size()) +
                            " != " + std::to_string(spec.out_dim));
    net.params.assign(offset, 0.0);
    return net;
}

// Fan-in-scaled uniform init for hidden layers; the final dense layer gets
// small weights and a zero bias so the initial Q values sit near 0.
inline void init_params(QNetwork& net, uint64_t seed) {
    Rng rng(mix_seed(seed, 0x9e7));
    size_t last_dense = net.plan.size();
    for (size_t i = 0; i < net.plan.size(); ++i)
        if (net.plan[i].spec.kind == LayerKind::Dense) last_dense = i;
    for (size_t i = 0; i < net.plan.size(); ++i) {
        const auto& p = net.plan[i];
        if (p.n_params == 0) continue;
        size_t fan_in;
        size_t n_weights;
        if (p.spec.kind == LayerKind::Conv) {
            fan_in = static_cast<size_t>(p.in.c) * p.spec.kernel * p.spec.kernel;
            n_weights = p.n_params - p.spec.out_channels;
        } else {
            fan_in = static_cast<size_t>(p.in.size());
            n_weights = p.n_params - p.spec.width;
        }
        double limit = (i == last_dense) ? 1e-3 : std::sqrt(3.0 / static_cast<double>(fan_in));
        for (size_t j = 0; j < n_weights; ++j)
            net.params[p.param_offset + j] = rng.uniform(-limit, limit);
        for (size_t j = n_weights; j < p.n_params; ++j) net.params[p.param_offset + j] = 0.0;
    }
}

inline QNetwork make_network(const NetSpec& spec, uint64_t seed) {
    QNetwork net = build_network(spec);
    init_params(net, seed);
    return net;
}

// --- Forward / backward ---

// Reusable activation storage; callers keep one per worker to avoid realloc.
struct Workspace {
    std::vector<std::vector<double>> acts;  // plan.size()+1 arrays of B x size
    std::vector<double> in_scratch;
};

namespace detail {

inline void conv_forward(const LayerPlan& p, const double* w, const double* x, double* y) {
    const int ic_n = p.in.c, ih = p.in.h, iw = p.in.w;
    const int oc_n = p.out.c, oh = p.out.h, ow = p.out.w;
    const int k = p.spec.kernel, s = p.spec.stride;
    const double* bias = w + static_cast<size_t>(oc_n) * ic_n * k * k;
    for (int oc = 0; oc < oc_n; ++oc) {
        for (int oy = 0; oy < oh; ++oy) {
            for (int ox = 0; ox < ow; ++ox) {
                double sum = bias[oc];
                for (int ic = 0; ic < ic_n; ++ic) {
                    const double* wrow = w + ((static_cast<size_t>(oc) * ic_n + ic) * k) * k;
                    const double* xrow = x + (static_cast<size_t>(ic) * ih + oy * s) * iw + ox * s;
                    for (int ky = 0; ky < k; ++ky) {
                        for (int kx = 0; kx < k; ++kx) sum += wrow[ky * k + kx] * xrow[ky * iw + kx];
                    }
                }
                y[(static_cast<size_t>(oc) * oh + oy) * ow + ox] = sum;
            }
        }
    }
}

inline void conv_backward(const LayerPlan& p, const double* w, const double* x, const double* gy,
                          double* gw, double* gx) {
    const int ic_n = p.in.c, ih = p.in.h, iw = p.in.w;
    const int oc_n = p.out.c, oh = p.out.h, ow = p.out.w;
    const int k = p.spec.kernel, s = p.spec.stride;
    double* gbias = gw + static_cast<size_t>(oc_n) * ic_n * k * k;
    for (int oc = 0; oc < oc_n; ++oc) {
        for (int oy = 0; oy < oh; ++oy) {
            for (int ox = 0; ox < ow; ++ox) {
                double g = gy[(static_cast<size_t>(oc) * oh + oy) * ow + ox];
                if (g == 0.0) continue;
                gbias[oc] += g;
                for (int ic = 0; ic < ic_n; ++ic) {
                    const size_t wbase = (static_cast<size_t>(oc) * ic_n + ic) * k * k;
                    const size_t xbase = (static_cast<size_t>(ic) * ih + oy * s) * iw + ox * s;
                    for (int ky = 0; ky < k; ++ky) {
                        for (int kx = 0; kx < k; ++kx) {
                            gw[wbase + ky * k + kx] += g * x[xbase + ky * iw + kx];
                            gx[xbase + ky * iw + kx] += g * w[wbase + ky * k + kx];
                        }
                    }
                }
            }
        }
    }
}

inline void dense_forward(const LayerPlan& p, const double* w, const double* x, double* y) {
    const int in_n = p.in.size(), out_n = p.out.w;
    const double* bias = w + static_cast<size_t>(out_n) * in_n;
    for (int o = 0; o < out_n; ++o) {
        const double* wrow = w + static_cast<size_t>(o) * in_n;
        double sum = bias[o];
        for (int i = 0; i < in_n; ++i) sum += wrow[i] * x[i];
        y[o] = sum;
    }
}

inline void dense_backward(const LayerPlan& p, const double* w, const double* x, const double* gy,
                           double* gw, double* gx) {
    const int in_n = p.in.size(), out_n = p.out.w;
    double* gbias = gw + static_cast<size_t>(out_n) * in_n;
    std::memset(gx, 0, sizeof(double) * static_cast<size_t>(in_n));
    for (int o = 0; o < out_n; ++o) {
        double g = gy[o];
        gbias[o] += g;
        if (g == 0.0) continue;
        const double* wrow = w + static_cast<size_t>(o) * in_n;
        double* gwrow = gw + static_cast<size_t>(o) * in_n;
        for (int i = 0; i < in_n; ++i) {
            gwrow[i] += g * x[i];
            gx[i] += g * wrow[i];
        }
    }
}

inline void forward_sample(const QNetwork& net, Workspace& ws, size_t b) {
    for (size_t l = 0; l < net.plan.size(); ++l) {
        const auto& p = net.plan[l];
        const double* x = ws.acts[l].data() + b * p.in.size();
        double* y = ws.acts[l + 1].data() + b * p.out.size();
        const double* w = net.params.data() + p.param_offset;
        switch (p.spec.kind) {
            case LayerKind::Conv: conv_forward(p, w, x, y); break;
            case LayerKind::Dense: dense_forward(p, w, x, y); break;
            case LayerKind::ReLU:
                for (int i = 0; i < p.in.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
                break;
            case LayerKind::Flatten:
                std::memcpy(y, x, sizeof(double) * static_cast<size_t>(p.in.size()));
                break;
        }
    }
}

inline void backward_sample(const QNetwork& net, const Workspace& ws, size_t b,
                            const double* out_grad, double* grad, double* s1, double* s2) {
    // s1/s2 are scratch buffers at least as large as the widest layer
    int top = net.plan.back().out.size();
    std::memcpy(s1, out_grad, sizeof(double) * static_cast<size_t>(top));
    double* gy = s1;
    double* gx = s2;
    for (size_t li = net.plan.size(); li-- > 0;) {
        const auto& p = net.plan[li];
        const double* x = ws.acts[li].data() + b * p.in.size();
        const double* w = net.params.data() + p.param_offset;
        double* gw = grad + p.param_offset;
        switch (p.spec.kind) {
            case LayerKind::Conv:
                std::memset(gx, 0, sizeof(double) * static_cast<size_t>(p.in.size()));
                conv_backward(p, w, x, gy, gw, gx);
                std::swap(gy, gx);
                break;
            case LayerKind::Dense:
                dense_backward(p, w, x, gy, gw, gx);
                std::swap(gy, gx);
                break;
            case LayerKind::ReLU:
                for (int i = 0; i < p.in.size(); ++i)
                    gy[i] = x[i] > 0.0 ? gy[i] : 0.0;
                break;
            case LayerKind::Flatten: break;
        }
    }
}

inline size_t max_layer_size(const QNetwork& net) {
    size_t m = static_cast<size_t>(net.in_size());
    for (const auto& p : net.plan) m = std::max(m, static_cast<size_t>(p.out.size()));
    return m;
}

}  // namespace detail

// Batched forward pass. Deterministic; outputs land in ws.acts.back().
inline const std::vector<double>& forward(const QNetwork& net, const double* input, int batch,
                                          Workspace& ws, int threads = 1) {
    ws.acts.resize(net.plan.size() + 1);
    ws.acts[0].assign(input, input + static_cast<size_t>(batch) * net.in_size());
    for (size_t l = 0; l < net.plan.size(); ++l)
        ws.acts[l + 1].resize(static_cast<size_t>(batch) * net.plan[l].out.size());

    if (threads <= 1 || batch < 8) {
        for (int b = 0; b < batch; ++b) detail::forward_sample(net, ws, static_cast<size_t>(b));
    } else {
        int t_n = std::min(threads, batch);
        std::vector<std::thread> pool;
        for (int t = 0; t < t_n; ++t) {
            pool.emplace_back([&, t] {
                for (int b = t; b < batch; b += t_n)
                    detail::forward_sample(net, ws, static_cast<size_t>(b));
            });
        }
        for (auto& th : pool) th.join();
    }
    return ws.acts.back();
}

// Convenience single-observation forward from float data.
inline const std::vector<double>& forward_obs(const QNetwork& net, const float* obs,
                                              Workspace& ws) {
    ws.in_scratch.resize(static_cast<size_t>(net.in_size()));
    for (int i = 0; i < net.in_size(); ++i) ws.in_scratch[static_cast<size_t>(i)] = obs[i];
    return forward(net, ws.in_scratch.data(), 1, ws);
}

// --- Losses ---

enum class LossKind { HuberValue, CrossEntropyPolicy, LargeMargin, CompositeDQfD, CompositeADET };

struct SampleTarget {
    int action = -1;         // supervised head (HuberValue) or class label (CrossEntropy)
    double q = 0.0;          // regression target (supervised q or TD target)
    int expert_action = -1;  // expert label for margin / composite losses
};

struct LossConfig {
    LossKind kind = LossKind::HuberValue;
    double huber_delta = 1.0;
    double margin = 0.2;      // large-margin l
    double aux_weight = 0.1;  // weight of the margin / cross-entropy term in composites
};

inline void softmax(const double* q, int n, double* p) {
    double m = q[0];
    for (int i = 1; i < n; ++i) m = std::max(m, q[i]);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        p[i] = std::exp(q[i] - m);
        sum += p[i];
    }
    for (int i = 0; i < n; ++i) p[i] /= sum;
}

namespace detail {

inline double huber(double e, double delta) {
    double a = std::abs(e);
    return a <= delta ? 0.5 * e * e : delta * (a - 0.5 * delta);
}

inline double huber_grad(double e, double delta) {
    return e > delta ? delta : (e < -delta ? -delta : e);
}

// Per-sample loss and gradient w.r.t. the |A| outputs; `g` must be zeroed.
inline double sample_loss(const double* q, int n, const SampleTarget& t, const LossConfig& cfg,
                          double* g, double* scratch) {
    switch (cfg.kind) {
        case LossKind::HuberValue: {
            double e = q[t.action] - t.q;
            g[t.action] = huber_grad(e, cfg.huber_delta);
            return huber(e, cfg.huber_delta);
        }
        case LossKind::CrossEntropyPolicy: {
            softmax(q, n, scratch);
            for (int i = 0; i < n; ++i) g[i] = scratch[i];
            g[t.action] -= 1.0;
            return -std::log(std::max(scratch[t.action], 1e-300));
        }
        case LossKind::LargeMargin: {
            int e = t.expert_action;
            int best = 0;
            double best_v = q[0] + (0 != e ? cfg.margin : 0.0);
            for (int i = 1; i < n; ++i) {
                double v = q[i] + (i != e ? cfg.margin : 0.0);
                if (v > best_v) {
                    best_v = v;
                    best = i;
                }
            }
            if (best == e) return 0.0;
            g[best] += 1.0;
            g[e] -= 1.0;
            return best_v - q[e];
        }
        case LossKind::CompositeDQfD: {
            double e = q[t.action] - t.q;
            g[t.action] = huber_grad(e, cfg.huber_delta);
            double loss = huber(e, cfg.huber_delta);
            LossConfig lm = cfg;
            lm.kind = LossKind::LargeMargin;
            std::vector<double> g2(static_cast<size_t>(n), 0.0);
            double aux = sample_loss(q, n, t, lm, g2.data(), scratch);
            for (int i = 0; i < n; ++i) g[i] += cfg.aux_weight * g2[i];
            return loss + cfg.aux_weight * aux;
        }
        case LossKind::CompositeADET: {
            double e = q[t.action] - t.q;
            g[t.action] = huber_grad(e, cfg.huber_delta);
            double loss = huber(e, cfg.huber_delta);
            softmax(q, n, scratch);
            for (int i = 0; i < n; ++i) g[i] += cfg.aux_weight * scratch[i];
            g[t.expert_action] -= cfg.aux_weight;
            double aux = -std::log(std::max(scratch[t.expert_action], 1e-300));
            return loss + cfg.aux_weight * aux;
        }
    }
    throw ConfigError("unknown loss kind");
}

}  // namespace detail

struct LossResult {
    double mean_loss = 0.0;
    std::vector<double> per_sample;  // unweighted per-sample losses (replay priorities)
};

// Mean of is_weights[i] * loss_i over the batch; gradient is exact for the
// computed loss. is_weights are the PER importance weights (1.0 when disabled).
inline LossResult loss_and_grad(const QNetwork& net, const double* input, int batch,
                                const std::vector<SampleTarget>& targets, const LossConfig& cfg,
                                const std::vector<double>& is_weights, Workspace& ws,
                                std::vector<double>& grad, int threads = 1) {
    if (static_cast<int>(targets.size()) != batch || static_cast<int>(is_weights.size()) != batch)
        throw ShapeMismatch("loss_and_grad: batch size mismatch");
    const int n = net.out_dim();
    for (const auto& t : targets) {
        bool needs_label = cfg.kind != LossKind::HuberValue;
        if (t.action < 0 || t.action >= n) throw ShapeMismatch("loss_and_grad: bad action");
        if (needs_label && cfg.kind != LossKind::CrossEntropyPolicy &&
            (t.expert_action < 0 || t.expert_action >= n))
            throw ShapeMismatch("loss_and_grad: bad expert label");
    }

    forward(net, input, batch, ws, threads);
    const auto& out = ws.acts.back();

    LossResult res;
    res.per_sample.resize(static_cast<size_t>(batch));
    std::vector<double> out_grads(static_cast<size_t>(batch) * n, 0.0);
    std::vector<double> scratch(static_cast<size_t>(n));
    double total = 0.0;
    for (int b = 0; b < batch; ++b) {
        double* g = out_grads.data() + static_cast<size_t>(b) * n;
        double l = detail::sample_loss(out.data() + static_cast<size_t>(b) * n, n,
                                       targets[static_cast<size_t>(b)], cfg, g, scratch.data());
        res.per_sample[static_cast<size_t>(b)] = l;
        double w = is_weights[static_cast<size_t>(b)] / batch;
        total += w * l;
        for (int i = 0; i < n; ++i) g[i] *= w;
    }
    res.mean_loss = total;

    grad.assign(net.n_params(), 0.0);
    size_t scratch_n = detail::max_layer_size(net);
    if (threads <= 1 || batch < 8) {
        std::vector<double> s1(scratch_n), s2(scratch_n);
        for (int b = 0; b < batch; ++b)
            detail::backward_sample(net, ws, static_cast<size_t>(b),
                                    out_grads.data() + static_cast<size_t>(b) * n, grad.data(),
                                    s1.data(), s2.data());
    } else {
        int t_n = std::min(threads, batch);
        std::vector<std::vector<double>> partial(static_cast<size_t>(t_n));
        std::vector<std::thread> pool;
        for (int t = 0; t < t_n; ++t) {
            partial[static_cast<size_t>(t)].assign(net.n_params(), 0.0);
            pool.emplace_back([&, t] {
                std::vector<double> s1(scratch_n), s2(scratch_n);
                double* gp = partial[static_cast<size_t>(t)].data();
                for (int b = t; b < batch; b += t_n)
                    detail::backward_sample(net, ws, static_cast<size_t>(b),
                                            out_grads.data() + static_cast<size_t>(b) * n, gp,
                                            s1.data(), s2.data());
            });
        }
        for (auto& th : pool) th.join();
        // deterministic reduction: fixed thread order
        for (int t = 0; t < t_n; ++t) {
            const auto& p = partial[static_cast<size_t>(t)];
            for (size_t i = 0; i < grad.size(); ++i) grad[i] += p[i];
        }
    }
    return res;
}

// --- Adaptive-moment optimizer ---

struct OptimState {
    double lr = 1e-3, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    long long t = 0;
    std::vector<double> m, v;

    static OptimState make(size_t n_params, double lr) {
        OptimState s;
        s.lr = lr;
        s.m.assign(n_params, 0.0);
        s.v.assign(n_params, 0.0);
        return s;
    }
};

inline void opt_step(QNetwork& net, OptimState& st, const std::vector<double>& grad) {
    if (grad.size() != net.n_params() || st.m.size() != net.n_params())
        throw ShapeMismatch("opt_step: gradient length mismatch");
    st.t += 1;
    double bc1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.t));
    double bc2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.t));
    for (size_t i = 0; i < grad.size(); ++i) {
        double g = grad[i];
        st.m[i] = st.beta1 * st.m[i] + (1.0 - st.beta1) * g;
        st.v[i] = st.beta2 * st.v[i] + (1.0 - st.beta2) * g * g;
        double mhat = st.m[i] / bc1;
        double vhat = st.v[i] / bc2;
        net.params[i] -= st.lr * mhat / (std::sqrt(vhat) + st.eps);
    }
}

// --- Checkpoint format: spec header + parameter payload + optimizer payload ---

inline constexpr uint64_t kCheckpointMagic = 0x4b43454e43515000ull;

inline void save_checkpoint(const QNetwork& net, const OptimState& opt, const std::string& path) {
    std::vector<std::uint8_t> buf;
    put_pod(buf, kCheckpointMagic);
    put_pod(buf, static_cast<uint32_t>(1));
    std::string spec = net.spec.to_string();
    put_pod(buf, static_cast<uint32_t>(spec.size()));
    put_bytes(buf, spec.data(), spec.size());
    put_pod(buf, static_cast<uint64_t>(net.n_params()));
    put_bytes(buf, net.params.data(), net.params.size() * sizeof(double));
    put_pod(buf, opt.lr);
    put_pod(buf, opt.beta1);
    put_pod(buf, opt.beta2);
    put_pod(buf, opt.eps);
    put_pod(buf, static_cast<int64_t>(opt.t));
    put_pod(buf, static_cast<uint64_t>(opt.m.size()));
    put_bytes(buf, opt.m.data(), opt.m.size() * sizeof(double));
    put_bytes(buf, opt.v.data(), opt.v.size() * sizeof(double));
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open for write: " + path);
    f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

inline std::pair<QNetwork, OptimState> load_checkpoint(const std::string& path,
                                                       const NetSpec& expected) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open: " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
    ByteReader r(buf);
    if (r.get<uint64_t>() != kCheckpointMagic) throw FormatError("checkpoint: bad magic");
    if (r.get<uint32_t>() != 1) throw FormatError("checkpoint: unsupported version");
    uint32_t slen = r.get<uint32_t>();
    std::string spec_str(slen, '\0');
    r.get_raw(spec_str.data(), slen);
    QNetwork net = build_network(expected);
    if (spec_str != expected.to_string())
        throw FormatError("checkpoint: net spec mismatch: '" + spec_str + "' vs '" +
                          expected.to_string() + "'");
    uint64_t n = r.get<uint64_t>();
    if (n != net.n_params()) throw FormatError("checkpoint: parameter count mismatch");
    r.get_raw(net.params.data(), n * sizeof(double));
    OptimState opt;
    opt.lr = r.get<double>();
    opt.beta1 = r.get<double>();
    opt.beta2 = r.get<double>();
    opt.eps = r.get<double>();
    opt.t = r.get<int64_t>();
    uint64_t mn = r.get<uint64_t>();
    if (mn != n) throw FormatError("checkpoint: optimizer state size mismatch");
    opt.m.resize(mn);
    opt.v.resize(mn);
    r.get_raw(opt.m.data(), mn * sizeof(double));
    r.get_raw(opt.v.data(), mn * sizeof(double));
    if (!r.exhausted()) throw FormatError("checkpoint: trailing bytes");
    return {std::move(net), std::move(opt)};
}

}  // namespace pqc
