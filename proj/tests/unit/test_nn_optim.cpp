#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <limits>

#include "otk/common/rng.hpp"
#include "otk/nn/adamw.hpp"
#include "otk/nn/checkpoint.hpp"
#include "otk/nn/layers.hpp"

using namespace otk;
using namespace otk::nn;
using Md = DenseMat<double>;

TEST_CASE("adamw leaves parameters unchanged for zero grad and zero decay") {
    ParamStore<double> store;
    store.add("p", Md::Constant(2, 2, 1.5));
    AdamWConfig cfg;
    cfg.weight_decay = 0.0;
    adamw_step(store, {{"p", Md::Zero(2, 2)}}, cfg);
    CHECK((store.value("p").array() - 1.5).abs().maxCoeff() == doctest::Approx(0.0));
    CHECK(store.step == 1);
}

TEST_CASE("adamw single scalar step matches hand-computed moments") {
    ParamStore<double> store;
    store.add("w", Md::Constant(1, 1, 1.0));
    AdamWConfig cfg;
    cfg.lr = 0.01;
    cfg.weight_decay = 0.01;
    const double g = 0.5;
    adamw_step(store, {{"w", Md::Constant(1, 1, g)}}, cfg);

    // independent scalar evaluation of the decoupled-decay update
    const double m = (1.0 - cfg.beta1) * g;
    const double v = (1.0 - cfg.beta2) * g * g;
    const double m_hat = m / (1.0 - cfg.beta1);
    const double v_hat = v / (1.0 - cfg.beta2);
    const double expect = 1.0 - cfg.lr * (m_hat / (std::sqrt(v_hat) + cfg.eps) + cfg.weight_decay * 1.0);
    CHECK(std::abs(store.value("w")(0, 0) - expect) < 1e-12);
}

TEST_CASE("adamw rejects non-finite gradients naming the parameter") {
    ParamStore<double> store;
    store.add("layer.w", Md::Ones(1, 1));
    CHECK_THROWS_WITH_AS(
        adamw_step(store, {{"layer.w", Md::Constant(1, 1, std::numeric_limits<double>::quiet_NaN())}},
                   AdamWConfig{}),
        doctest::Contains("layer.w"), std::runtime_error);
}

TEST_CASE("learning-rate schedule decays stepwise") {
    CHECK(decayed_lr(1e-3, 0.6, 10, 0) == doctest::Approx(1e-3));
    CHECK(decayed_lr(1e-3, 0.6, 10, 9) == doctest::Approx(1e-3));
    CHECK(decayed_lr(1e-3, 0.6, 10, 10) == doctest::Approx(6e-4));
    CHECK(decayed_lr(1e-3, 0.5, 10, 25) == doctest::Approx(2.5e-4));
}

TEST_CASE("checkpoint save -> load -> save is byte-identical") {
    Rng rng(83);
    ParamStore<float> store;
    MlpSpec spec{"net", {3, 5, 2}, {Act::Relu, Act::Linear}};
    register_mlp(store, spec, rng);
    store.step = 17;
    // make moments nontrivial
    adamw_step(store, {{"net.w0", DenseMat<float>::Constant(3, 5, 0.25f)}}, AdamWConfig{});

    CheckpointMeta meta{"reid-motion", "abc123", 7, 0.125};
    const std::string path1 = "ckpt_test_a.json";
    const std::string path2 = "ckpt_test_b.json";
    save_checkpoint(store, meta, path1);

    ParamStore<float> loaded;
    register_mlp(loaded, spec, rng);  // same shapes, different values
    const CheckpointMeta meta2 = load_checkpoint(loaded, path1);
    CHECK(meta2.model == "reid-motion");
    CHECK(meta2.epoch == 7);
    save_checkpoint(loaded, meta2, path2);

    CHECK(read_text_file(path1) == read_text_file(path2));
    CHECK(loaded.step == store.step);
    for (const auto& name : store.names())
        CHECK((loaded.value(name) - store.value(name)).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    std::remove(path1.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("descent sanity: adamw reduces a quadratic loss") {
    ParamStore<double> store;
    store.add("w", Md::Constant(1, 1, 3.0));
    AdamWConfig cfg;
    cfg.lr = 0.05;
    cfg.weight_decay = 0.0;
    double prev = std::numeric_limits<double>::max();
    for (int i = 0; i < 50; ++i) {
        const double w = store.value("w")(0, 0);
        const double loss = (w - 1.0) * (w - 1.0);
        CHECK(loss <= prev + 1e-9);
        prev = loss;
        adamw_step(store, {{"w", Md::Constant(1, 1, 2.0 * (w - 1.0))}}, cfg);
    }
    CHECK(std::abs(store.value("w")(0, 0) - 1.0) < 0.2);
}
