#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "pqc/nnet.hpp"

using namespace pqc;

namespace {

NetSpec tiny_spec() { return NetSpec::parse("conv:2:3:2,relu,flatten,fc:8,relu,fc:out", 2, 6, 6, 4); }

std::vector<double> random_inputs(int batch, int in_size, uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(static_cast<size_t>(batch) * in_size);
    for (auto& x : v) x = rng.uniform();
    return v;
}

// Central finite differences against the analytic gradient; accumulation in
// double precision, h = 1e-4, relative error floored at the h scale.
double max_grad_rel_error(QNetwork& net, const std::vector<double>& input, int batch,
                          const std::vector<SampleTarget>& targets, const LossConfig& cfg,
                          const std::vector<double>& weights) {
    Workspace ws;
    std::vector<double> grad;
    loss_and_grad(net, input.data(), batch, targets, cfg, weights, ws, grad);
    const double h = 1e-4;
    double worst = 0.0;
    for (size_t i = 0; i < net.n_params(); ++i) {
        double keep = net.params[i];
        net.params[i] = keep + h;
        std::vector<double> g2;
        double fp = loss_and_grad(net, input.data(), batch, targets, cfg, weights, ws, g2)
                        .mean_loss;
        net.params[i] = keep - h;
        double fm = loss_and_grad(net, input.data(), batch, targets, cfg, weights, ws, g2)
                        .mean_loss;
        net.params[i] = keep;
        double fd = (fp - fm) / (2 * h);
        double denom = std::max({std::abs(grad[i]), std::abs(fd), 1e-4});
        worst = std::max(worst, std::abs(grad[i] - fd) / denom);
    }
    return worst;
}

std::vector<SampleTarget> random_targets(int batch, int n_actions, uint64_t seed) {
    Rng rng(seed);
    std::vector<SampleTarget> t(static_cast<size_t>(batch));
    for (auto& s : t) {
        s.action = static_cast<int>(rng.uniform_int(0, n_actions - 1));
        s.expert_action = static_cast<int>(rng.uniform_int(0, n_actions - 1));
        s.q = rng.uniform(-0.6, 0.0);
    }
    return t;
}

}  // namespace

TEST_CASE("network shapes chain and parameters count up") {
    QNetwork net = build_network(tiny_spec());
    REQUIRE(net.n_params() == 38 + 72 + 36);
    REQUIRE(net.out_dim() == 4);
    NetSpec def = NetSpec::parse("conv:8:3:2,relu,conv:16:3:2,relu,flatten,fc:64,relu,fc:out", 2,
                                 32, 32, 6);
    QNetwork big = build_network(def);
    REQUIRE(big.plan.back().in.size() == 64);
}

TEST_CASE("malformed specs are rejected") {
    REQUIRE_THROWS_AS(build_network(NetSpec::parse("fc:8,flatten,fc:out", 2, 6, 6, 4)),
                      ShapeMismatch);
    REQUIRE_THROWS_AS(build_network(NetSpec::parse("flatten,fc:9", 2, 6, 6, 4)), ShapeMismatch);
    REQUIRE_THROWS_AS(build_network(NetSpec::parse("conv:4:9:1,relu,flatten,fc:out", 2, 6, 6, 4)),
                      ShapeMismatch);
    REQUIRE_THROWS_AS(NetSpec::parse("dense:3", 2, 6, 6, 4), ConfigError);
}

TEST_CASE("zero final layer makes all outputs zero") {
    QNetwork net = make_network(tiny_spec(), 1);
    const auto& last = net.plan.back();
    for (size_t i = 0; i < last.n_params; ++i) net.params[last.param_offset + i] = 0.0;
    Workspace ws;
    auto in = random_inputs(3, net.in_size(), 2);
    const auto& out = forward(net, in.data(), 3, ws);
    for (double v : out) REQUIRE(v == 0.0);
}

TEST_CASE("identical observations give identical rows") {
    QNetwork net = make_network(tiny_spec(), 3);
    auto one = random_inputs(1, net.in_size(), 4);
    std::vector<double> batch;
    for (int i = 0; i < 3; ++i) batch.insert(batch.end(), one.begin(), one.end());
    Workspace ws;
    auto out = forward(net, batch.data(), 3, ws);
    for (int i = 0; i < net.out_dim(); ++i) {
        REQUIRE(out[static_cast<size_t>(i)] == out[static_cast<size_t>(net.out_dim() + i)]);
        REQUIRE(out[static_cast<size_t>(i)] == out[static_cast<size_t>(2 * net.out_dim() + i)]);
    }
}

TEST_CASE("permuting the batch permutes the rows") {
    QNetwork net = make_network(tiny_spec(), 5);
    auto a = random_inputs(1, net.in_size(), 6);
    auto b = random_inputs(1, net.in_size(), 7);
    std::vector<double> ab = a, ba = b;
    ab.insert(ab.end(), b.begin(), b.end());
    ba.insert(ba.end(), a.begin(), a.end());
    Workspace ws;
    auto out_ab = forward(net, ab.data(), 2, ws);  // copy before reuse
    std::vector<double> first(out_ab.begin(), out_ab.end());
    auto out_ba = forward(net, ba.data(), 2, ws);
    int n = net.out_dim();
    for (int i = 0; i < n; ++i) {
        REQUIRE(first[static_cast<size_t>(i)] == out_ba[static_cast<size_t>(n + i)]);
        REQUIRE(first[static_cast<size_t>(n + i)] == out_ba[static_cast<size_t>(i)]);
    }
}

TEST_CASE("analytic gradients match central finite differences") {
    QNetwork net = make_network(tiny_spec(), 11);
    // push the final layer away from zero so margins and softmax are generic
    Rng bump(12);
    const auto& last = net.plan.back();
    for (size_t i = 0; i < last.n_params; ++i)
        net.params[last.param_offset + i] += bump.uniform(-0.3, 0.3);

    const int B = 3;
    auto input = random_inputs(B, net.in_size(), 13);
    auto targets = random_targets(B, net.out_dim(), 14);
    std::vector<double> weights{1.0, 0.7, 1.3};

    SECTION("HuberValue") {
        LossConfig cfg{LossKind::HuberValue};
        REQUIRE(max_grad_rel_error(net, input, B, targets, cfg, weights) < 1e-4);
    }
    SECTION("CrossEntropyPolicy") {
        LossConfig cfg{LossKind::CrossEntropyPolicy};
        REQUIRE(max_grad_rel_error(net, input, B, targets, cfg, weights) < 1e-4);
    }
    SECTION("LargeMargin") {
        LossConfig cfg{LossKind::LargeMargin};
        cfg.margin = 0.2;
        REQUIRE(max_grad_rel_error(net, input, B, targets, cfg, weights) < 1e-4);
    }
    SECTION("composite TD + large margin") {
        LossConfig cfg{LossKind::CompositeDQfD};
        cfg.margin = 0.2;
        cfg.aux_weight = 0.1;
        REQUIRE(max_grad_rel_error(net, input, B, targets, cfg, weights) < 1e-4);
    }
    SECTION("composite TD + cross entropy") {
        LossConfig cfg{LossKind::CompositeADET};
        cfg.aux_weight = 0.1;
        REQUIRE(max_grad_rel_error(net, input, B, targets, cfg, weights) < 1e-4);
    }
}

TEST_CASE("softmax rows sum to one") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> q(6), p(6);
        for (auto& v : q) v = rng.uniform(-5.0, 5.0);
        softmax(q.data(), 6, p.data());
        double sum = 0.0;
        for (double v : p) {
            REQUIRE(v >= 0.0);
            sum += v;
        }
        REQUIRE(sum == Catch::Approx(1.0).margin(1e-6));
    }
}

TEST_CASE("composite with zero auxiliary weight equals the pure TD term") {
    QNetwork net = make_network(tiny_spec(), 31);
    const int B = 4;
    auto input = random_inputs(B, net.in_size(), 32);
    auto targets = random_targets(B, net.out_dim(), 33);
    std::vector<double> w(B, 1.0);
    Workspace ws;
    std::vector<double> g1, g2;
    LossConfig huber{LossKind::HuberValue};
    LossConfig comp{LossKind::CompositeDQfD};
    comp.aux_weight = 0.0;
    auto r1 = loss_and_grad(net, input.data(), B, targets, huber, w, ws, g1);
    auto r2 = loss_and_grad(net, input.data(), B, targets, comp, w, ws, g2);
    REQUIRE(r1.mean_loss == r2.mean_loss);
    REQUIRE(g1 == g2);
}

TEST_CASE("margin term vanishes when the expert action dominates by the margin") {
    QNetwork net = build_network(NetSpec::parse("flatten,fc:out", 1, 1, 3, 3));
    for (auto& p : net.params) p = 0.0;
    const auto& last = net.plan.back();
    size_t bias_off = last.param_offset + 3ull * 3ull;
    net.params[bias_off + 0] = 1.0;  // expert action value, clear of the margin
    net.params[bias_off + 1] = 0.2;
    net.params[bias_off + 2] = 0.1;
    std::vector<double> input{0.0, 0.0, 0.0};
    std::vector<SampleTarget> t(1);
    t[0].action = 0;
    t[0].expert_action = 0;
    t[0].q = 1.0;
    LossConfig cfg{LossKind::LargeMargin};
    cfg.margin = 0.2;
    Workspace ws;
    std::vector<double> grad;
    auto res = loss_and_grad(net, input.data(), 1, t, cfg, {1.0}, ws, grad);
    REQUIRE(res.mean_loss == 0.0);
    for (double g : grad) REQUIRE(g == 0.0);
}

TEST_CASE("huber loss is exactly zero at the target") {
    QNetwork net = make_network(tiny_spec(), 41);
    auto input = random_inputs(1, net.in_size(), 42);
    Workspace ws;
    auto out = forward(net, input.data(), 1, ws);
    std::vector<SampleTarget> t(1);
    t[0].action = 2;
    t[0].q = out[2];  // target equals the prediction
    std::vector<double> grad;
    auto res = loss_and_grad(net, input.data(), 1, t, LossConfig{LossKind::HuberValue}, {1.0}, ws,
                             grad);
    REQUIRE(res.mean_loss == 0.0);
    for (double g : grad) REQUIRE(g == 0.0);
}

TEST_CASE("optimizer: zero gradient leaves parameters, bumps the counter") {
    QNetwork net = make_network(tiny_spec(), 51);
    auto params = net.params;
    OptimState opt = OptimState::make(net.n_params(), 1e-3);
    std::vector<double> zero(net.n_params(), 0.0);
    opt_step(net, opt, zero);
    REQUIRE(opt.t == 1);
    REQUIRE(net.params == params);
}

TEST_CASE("optimizer runs are bit-deterministic") {
    auto run = [] {
        QNetwork net = make_network(tiny_spec(), 61);
        OptimState opt = OptimState::make(net.n_params(), 1e-3);
        Rng rng(62);
        for (int i = 0; i < 50; ++i) {
            std::vector<double> g(net.n_params());
            for (auto& v : g) v = rng.uniform(-1.0, 1.0);
            opt_step(net, opt, g);
        }
        return net.params;
    };
    REQUIRE(run() == run());
}

TEST_CASE("optimizer descends a quadratic bowl") {
    QNetwork net = make_network(tiny_spec(), 71);
    OptimState opt = OptimState::make(net.n_params(), 1e-2);
    std::vector<double> target(net.n_params());
    Rng rng(72);
    for (auto& v : target) v = rng.uniform(-1.0, 1.0);
    auto f = [&] {
        double s = 0.0;
        for (size_t i = 0; i < net.n_params(); ++i) {
            double d = net.params[i] - target[i];
            s += 0.5 * d * d;
        }
        return s;
    };
    std::vector<double> losses;
    for (int i = 0; i < 100; ++i) {
        losses.push_back(f());
        std::vector<double> g(net.n_params());
        for (size_t j = 0; j < g.size(); ++j) g[j] = net.params[j] - target[j];
        opt_step(net, opt, g);
    }
    for (size_t i = 21; i < losses.size(); ++i) REQUIRE(losses[i] <= losses[i - 1] + 1e-12);
    REQUIRE(losses.back() < losses[20]);
}

TEST_CASE("checkpoint round-trip preserves behavior bit for bit") {
    namespace fs = std::filesystem;
    QNetwork net = make_network(tiny_spec(), 81);
    OptimState opt = OptimState::make(net.n_params(), 1e-3);
    Rng rng(82);
    for (int i = 0; i < 10; ++i) {
        std::vector<double> g(net.n_params());
        for (auto& v : g) v = rng.uniform(-1.0, 1.0);
        opt_step(net, opt, g);
    }
    std::string path = (fs::temp_directory_path() / "pqc_test.ckpt").string();
    save_checkpoint(net, opt, path);
    auto [net2, opt2] = load_checkpoint(path, tiny_spec());
    REQUIRE(net2.params == net.params);
    REQUIRE(opt2.t == opt.t);
    REQUIRE(opt2.m == opt.m);
    REQUIRE(opt2.v == opt.v);

    auto input = random_inputs(2, net.in_size(), 83);
    Workspace ws1, ws2;
    auto o1 = forward(net, input.data(), 2, ws1);
    auto o2 = forward(net2, input.data(), 2, ws2);
    REQUIRE(o1 == o2);

    SECTION("resumed updates match an uninterrupted run") {
        QNetwork straight = net;
        OptimState sopt = opt;
        Rng ra(99), rb(99);
        for (int i = 0; i < 7; ++i) {
            std::vector<double> g(net.n_params());
            for (auto& v : g) v = ra.uniform(-1.0, 1.0);
            opt_step(straight, sopt, g);
        }
        for (int i = 0; i < 7; ++i) {
            std::vector<double> g(net2.n_params());
            for (auto& v : g) v = rb.uniform(-1.0, 1.0);
            opt_step(net2, opt2, g);
        }
        REQUIRE(net2.params == straight.params);
    }

    SECTION("mismatched spec is rejected") {
        NetSpec other = NetSpec::parse("conv:2:3:2,relu,flatten,fc:9,relu,fc:out", 2, 6, 6, 4);
        REQUIRE_THROWS_AS(load_checkpoint(path, other), FormatError);
    }

    SECTION("truncation is rejected") {
        std::ifstream f(path, std::ios::binary);
        std::vector<char> bytes((std::istreambuf_iterator<char>(f)),
                                std::istreambuf_iterator<char>());
        f.close();
        std::ofstream o(path, std::ios::binary);
        o.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 16));
        o.close();
        REQUIRE_THROWS_AS(load_checkpoint(path, tiny_spec()), FormatError);
    }
}

TEST_CASE("threaded gradients are deterministic for a fixed thread count") {
    NetSpec spec = NetSpec::parse("conv:4:3:2,relu,flatten,fc:16,relu,fc:out", 2, 12, 12, 6);
    QNetwork net = make_network(spec, 91);
    const int B = 16;
    auto input = random_inputs(B, net.in_size(), 92);
    auto targets = random_targets(B, net.out_dim(), 93);
    std::vector<double> w(B, 1.0);
    Workspace ws;
    std::vector<double> g1, g2, g_serial;
    LossConfig cfg{LossKind::HuberValue};
    auto r1 = loss_and_grad(net, input.data(), B, targets, cfg, w, ws, g1, 2);
    auto r2 = loss_and_grad(net, input.data(), B, targets, cfg, w, ws, g2, 2);
    REQUIRE(g1 == g2);
    REQUIRE(r1.mean_loss == r2.mean_loss);
    auto r3 = loss_and_grad(net, input.data(), B, targets, cfg, w, ws, g_serial, 1);
    REQUIRE(r3.mean_loss == Catch::Approx(r1.mean_loss).epsilon(1e-12));
    for (size_t i = 0; i < g1.size(); ++i)
        REQUIRE(g_serial[i] == Catch::Approx(g1[i]).margin(1e-12));
}
