#include <doctest.h>

#include <cmath>

#include "otk/common/rng.hpp"
#include "otk/nn/grad_check.hpp"
#include "otk/nn/layers.hpp"

using namespace otk;
using namespace otk::nn;
using Md = DenseMat<double>;

namespace {

Md random_mat(Rng& rng, int r, int c, double lo = -1.5, double hi = 1.5) {
    Md m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

// Independent scalar GRU cell (plain double arithmetic), H = D = 1.
double scalar_gru_cell(double x, double h, double wz, double uz, double bz, double wr, double ur,
                       double br, double wn, double un, double bn) {
    auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    const double z = sig(x * wz + h * uz + bz);
    const double r = sig(x * wr + h * ur + br);
    const double n = std::tanh(x * wn + (r * h) * un + bn);
    return (1.0 - z) * n + z * h;
}

struct TinyGru {
    GruSpec spec;
    ParamStore<double> store;

    explicit TinyGru(Rng& rng) {
        spec = {"gru", 1, 1};
        register_gru(store, spec, rng);
    }
    double p(const char* n) { return store.value(spec.name(n))(0, 0); }
    double cell(double x, double h) {
        return scalar_gru_cell(x, h, p("wz"), p("uz"), p("bz"), p("wr"), p("ur"), p("br"), p("wn"),
                               p("un"), p("bn"));
    }
};

}  // namespace

TEST_CASE("mlp_forward identity and scalar arithmetic") {
    ParamStore<double> store;
    MlpSpec spec{"id", {2, 2}, {Act::Linear}};
    store.add(spec.w(0), Md::Identity(2, 2));
    store.add(spec.b(0), Md::Zero(1, 2));
    Graph<double> g;
    Binder<double> p(g, store);
    const Md x = (Md(3, 2) << 1, 2, 3, 4, 5, 6).finished();
    CHECK((mlp_forward(p, spec, g.leaf(x, false)).value() - x).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0));

    ParamStore<double> s2;
    MlpSpec m2{"s", {1, 1}, {Act::Linear}};
    s2.add(m2.w(0), Md::Constant(1, 1, 2.0));
    s2.add(m2.b(0), Md::Constant(1, 1, 1.0));
    Graph<double> g2;
    Binder<double> p2(g2, s2);
    CHECK(mlp_forward(p2, m2, g2.leaf(Md::Constant(1, 1, 3.0), false)).value()(0, 0) ==
          doctest::Approx(7.0));

    CHECK_THROWS_WITH_AS(mlp_forward(p2, m2, g2.leaf(Md::Zero(1, 3), false)),
                         doctest::Contains("width"), std::invalid_argument);
}

TEST_CASE("4-layer MLP passes the finite-difference gradient check") {
    Rng rng(41);
    for (int trial = 0; trial < 3; ++trial) {
        ParamStore<double> store;
        MlpSpec spec{"mlp", {4, 6, 5, 3, 1}, {Act::Relu, Act::Tanh, Act::Sigmoid, Act::Linear}};
        register_mlp(store, spec, rng);
        const Md x = random_mat(rng, 2, 4);
        const auto rep = grad_check_params<double>(
            [&](Binder<double>& p) {
                return sum(mlp_forward(p, spec, p.graph().constant(x)));
            },
            store);
        CAPTURE(rep.worst);
        CHECK(rep.checked > 20);
        CHECK(rep.max_rel_err < 1e-4);
    }
}

TEST_CASE("gru_forward matches the scalar oracle at T=1 and T=3") {
    Rng rng(43);
    TinyGru tiny(rng);
    Graph<double> g;
    Binder<double> p(g, tiny.store);

    const Md seq = (Md(3, 1) << 0.7, -0.4, 1.1).finished();
    auto [outs, hT] = gru_forward(p, tiny.spec, g.leaf(seq, false), zeros_row(g, 1));
    double h = 0.0;
    for (int t = 0; t < 3; ++t) {
        h = tiny.cell(seq(t, 0), h);
        CHECK(outs.value()(t, 0) == doctest::Approx(h).epsilon(1e-12));
    }
    CHECK(hT.value()(0, 0) == doctest::Approx(h).epsilon(1e-12));
}

TEST_CASE("gru with zero weights and zero h0 outputs zero") {
    GruSpec spec{"z", 2, 3};
    ParamStore<double> store;
    Rng rng(1);
    register_gru(store, spec, rng);
    for (const auto& name : store.names()) store.value(name).setZero();
    Graph<double> g;
    Binder<double> p(g, store);
    auto [outs, hT] = gru_forward(p, spec, g.leaf(Md::Ones(4, 2), false), zeros_row(g, 3));
    CHECK(outs.value().cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK(hT.value().cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("gru gradient vs finite differences") {
    Rng rng(47);
    for (int trial = 0; trial < 3; ++trial) {
        GruSpec spec{"g", 3, 4};
        ParamStore<double> store;
        register_gru(store, spec, rng);
        const Md seq = random_mat(rng, 4, 3);
        const Md w = random_mat(rng, 4, 4);
        const auto rep = grad_check_params<double>(
            [&](Binder<double>& p) {
                auto [outs, hT] = gru_forward(p, spec, p.graph().constant(seq),
                                              zeros_row(p.graph(), 4));
                (void)hT;
                return sum(cmul(outs, p.graph().constant(w)));
            },
            store);
        CAPTURE(rep.worst);
        CHECK(rep.max_rel_err < 1e-4);
    }
}

TEST_CASE("ugru at T=1 equals two chained cells of the same GRU") {
    Rng rng(53);
    TinyGru tiny(rng);
    Graph<double> g;
    Binder<double> p(g, tiny.store);
    const double x = 0.9, h_init = 0.3;
    auto [outs, h_final] =
        ugru_encode(p, tiny.spec, g.leaf(Md::Constant(1, 1, x), false),
                    g.leaf(Md::Constant(1, 1, h_init), false));
    const double expect = tiny.cell(x, tiny.cell(x, h_init));
    CHECK(outs.value()(0, 0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(h_final.value()(0, 0) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("ugru output shape and bidirectional information flow") {
    Rng rng(59);
    GruSpec spec{"u", 2, 3};
    ParamStore<double> store;
    register_gru(store, spec, rng);
    const int T = 5;
    const Md seq = random_mat(rng, T, 2);
    {
        Graph<double> g;
        Binder<double> p(g, store);
        auto [outs, h_final] = ugru_encode(p, spec, g.constant(seq), zeros_row(g, 3));
        (void)h_final;
        CHECK(outs.rows() == T);
        CHECK(outs.cols() == 3);
    }
    // every output row must be sensitive to every input row in both directions
    for (int out_row : {0, T - 1}) {
        for (int in_row : {0, T - 1}) {
            const auto rep = grad_check<double>(
                [&](Graph<double>& g, Var<double> v) {
                    Binder<double> p(g, store, false);
                    std::vector<Var<double>> rows;
                    for (int t = 0; t < T; ++t)
                        rows.push_back(t == in_row ? v : g.constant(Md(seq.row(t))));
                    auto [outs, hf] = ugru_encode(p, spec, concat_rows(rows), zeros_row(g, 3));
                    (void)hf;
                    return sum(row(outs, out_row));
                },
                Md(seq.row(in_row)));
            double analytic_mag = 0.0;
            {
                Graph<double> g;
                Var<double> v = g.leaf(Md(seq.row(in_row)), true);
                Binder<double> p(g, store, false);
                std::vector<Var<double>> rows;
                for (int t = 0; t < T; ++t) rows.push_back(t == in_row ? v : g.constant(Md(seq.row(t))));
                auto [outs, hf] = ugru_encode(p, spec, concat_rows(rows), zeros_row(g, 3));
                (void)hf;
                g.backward(sum(row(outs, out_row)));
                analytic_mag = g.grad(v.id).cwiseAbs().maxCoeff();
            }
            CHECK(rep.max_rel_err < 1e-4);
            CHECK(analytic_mag > 1e-8);  // information flows both directions
        }
    }
}

TEST_CASE("dot_attention reductions") {
    Graph<double> g;
    Rng rng(61);
    SUBCASE("single key returns V row regardless of scores") {
        const Md q = random_mat(rng, 3, 4);
        const Md k = random_mat(rng, 1, 4);
        const Md v = random_mat(rng, 1, 2);
        const auto out = dot_attention(g.leaf(q, false), g.leaf(k, false), g.leaf(v, false)).value();
        for (int i = 0; i < 3; ++i) {
            CHECK(out(i, 0) == doctest::Approx(v(0, 0)));
            CHECK(out(i, 1) == doctest::Approx(v(0, 1)));
        }
    }
    SUBCASE("identical keys average V rows") {
        const Md q = random_mat(rng, 2, 4);
        Md k(3, 4);
        k.row(0) = random_mat(rng, 1, 4);
        k.row(1) = k.row(0);
        k.row(2) = k.row(0);
        const Md v = random_mat(rng, 3, 2);
        const auto out = dot_attention(g.leaf(q, false), g.leaf(k, false), g.leaf(v, false)).value();
        const Md avg = v.colwise().mean();
        for (int i = 0; i < 2; ++i) {
            CHECK(out(i, 0) == doctest::Approx(avg(0, 0)).epsilon(1e-9));
            CHECK(out(i, 1) == doctest::Approx(avg(0, 1)).epsilon(1e-9));
        }
    }
    SUBCASE("two-key case matches a scalar softmax oracle") {
        Md q(1, 1), k(2, 1), v(2, 1);
        q << 1.0;
        k << 0.0, std::log(3.0);
        v << 10.0, 20.0;
        // scores/sqrt(d): [0, log3]; softmax = [1/(1+3^1), ...] with d=1
        const double s0 = 0.0, s1 = 1.0 * std::log(3.0);
        const double e0 = std::exp(s0), e1 = std::exp(s1);
        const double expect = (e0 * 10.0 + e1 * 20.0) / (e0 + e1);
        const auto out = dot_attention(g.leaf(q, false), g.leaf(k, false), g.leaf(v, false)).value();
        CHECK(out(0, 0) == doctest::Approx(expect).epsilon(1e-12));
    }
    SUBCASE("all keys masked yields a zero row and a flag") {
        const Md q = random_mat(rng, 2, 3);
        const Md k = random_mat(rng, 2, 3);
        const Md v = random_mat(rng, 2, 2);
        std::vector<bool> mask = {false, false};
        std::vector<bool> empty;
        const auto out =
            dot_attention(g.leaf(q, false), g.leaf(k, false), g.leaf(v, false), &mask, &empty)
                .value();
        CHECK(out.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
        CHECK(empty[0]);
        CHECK(empty[1]);
    }
}

TEST_CASE("dot_attention weights rows sum to one (via value reconstruction)") {
    Rng rng(67);
    Graph<double> g;
    const Md q = random_mat(rng, 4, 3);
    const Md k = random_mat(rng, 5, 3);
    // V = all-ones single column: output is exactly the row sum of weights
    const Md v = Md::Ones(5, 1);
    const auto out = dot_attention(g.leaf(q, false), g.leaf(k, false), g.leaf(v, false)).value();
    for (int i = 0; i < 4; ++i) CHECK(out(i, 0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("dot_attention gradient check") {
    Rng rng(71);
    for (int trial = 0; trial < 3; ++trial) {
        const Md k = random_mat(rng, 4, 3);
        const Md v = random_mat(rng, 4, 2);
        const Md w = random_mat(rng, 2, 2);
        const auto rep = grad_check<double>(
            [&](Graph<double>& g, Var<double> q) {
                return sum(cmul(dot_attention(q, g.constant(k), g.constant(v)), g.constant(w)));
            },
            random_mat(rng, 2, 3));
        CHECK(rep.max_rel_err < 1e-4);
    }
}

TEST_CASE("spatial_attention radius gating") {
    Rng rng(73);
    SpatialAttnSpec spec{"sp", 3, 3, 4};
    ParamStore<double> store;
    register_spatial_attention(store, spec, rng);
    const Md dst = random_mat(rng, 3, 3);
    const Md src = random_mat(rng, 2, 3);
    const std::vector<Vec2> dst_pos = {{0, 0}, {5, 0}, {50, 50}};
    const std::vector<Vec2> src_pos = {{1, 0}, {6, 0}};

    SUBCASE("radius 0 is the identity") {
        Graph<double> g;
        Binder<double> p(g, store);
        const auto out = spatial_attention(p, spec, g.leaf(dst, false), dst_pos,
                                           g.leaf(src, false), src_pos, 0.0)
                             .value();
        CHECK((out - dst).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    }
    SUBCASE("out-of-range destination passes through; one source reduces to dot_attention") {
        Graph<double> g;
        Binder<double> p(g, store);
        const auto out = spatial_attention(p, spec, g.leaf(dst, false), dst_pos,
                                           g.leaf(src, false), src_pos, 2.0)
                             .value();
        // dst 2 has no in-radius source
        CHECK((out.row(2) - dst.row(2)).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
        // dst 0 sees exactly source 0: residual + dot_attention with n=1
        Graph<double> g2;
        Binder<double> p2(g2, store);
        const auto attn = dot_attention(matmul(g2.leaf(Md(dst.row(0)), false), p2(spec.wq())),
                                        matmul(g2.leaf(Md(src.row(0)), false), p2(spec.wk())),
                                        matmul(g2.leaf(Md(src.row(0)), false), p2(spec.wv())))
                              .value();
        CHECK((out.row(0) - (dst.row(0) + attn.row(0))).cwiseAbs().maxCoeff() <= 1e-12);
    }
    SUBCASE("neighbor sets match an O(n^2) brute-force radius search") {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Vec2> dp, sp;
            for (int i = 0; i < 6; ++i) dp.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10)});
            for (int j = 0; j < 7; ++j) sp.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10)});
            const double radius = rng.uniform(0.0, 12.0);
            const BoolMat m = radius_mask(dp, sp, radius);
            for (std::size_t i = 0; i < dp.size(); ++i)
                for (std::size_t j = 0; j < sp.size(); ++j) {
                    const bool brute = std::hypot(dp[i].x() - sp[j].x(), dp[i].y() - sp[j].y()) < radius;
                    CHECK(m(static_cast<long>(i), static_cast<long>(j)) == brute);
                }
        }
    }
    SUBCASE("gradient check") {
        const auto rep = grad_check_params<double>(
            [&](Binder<double>& p) {
                return sum(spatial_attention(p, spec, p.graph().constant(dst), dst_pos,
                                             p.graph().constant(src), src_pos, 10.0));
            },
            store);
        CHECK(rep.max_rel_err < 1e-4);
    }
}

TEST_CASE("bigru output is Tx2H and differentiable") {
    Rng rng(79);
    GruSpec fwd{"bf", 2, 3}, bwd{"bb", 2, 3};
    ParamStore<double> store;
    register_gru(store, fwd, rng);
    register_gru(store, bwd, rng);
    const Md seq = random_mat(rng, 4, 2);
    Graph<double> g;
    Binder<double> p(g, store);
    const auto out = bigru_forward(p, fwd, bwd, g.constant(seq));
    CHECK(out.rows() == 4);
    CHECK(out.cols() == 6);
    const auto rep = grad_check_params<double>(
        [&](Binder<double>& b) { return sum(bigru_forward(b, fwd, bwd, b.graph().constant(seq))); },
        store);
    CHECK(rep.max_rel_err < 1e-4);
}
