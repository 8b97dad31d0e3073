// SPDX-License-Identifier: Apache-2.0
// Finite-difference cases shared by the unit suites and the acceptance run.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "support/random.hpp"
#include "ulp/ad/gradcheck.hpp"
#include "ulp/ad/ops.hpp"
#include "ulp/model/predictor.hpp"

namespace ulp::test {

struct OpCase {
    std::string name;
    std::function<ad::ParamStore(Rng&)> make;
    std::function<ad::Var(ad::Graph&, const ad::ParamStore&)> forward;
};

// Weighted sum with fixed random weights: every output element reaches the loss.
inline ad::Var weighted_sum(ad::Graph& g, ad::Var out, std::uint64_t seed) {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    return ad::sum(ad::mul(out, g.constant(random_tensor(rng, out.shape()))));
}

inline std::vector<OpCase> op_cases() {
    using namespace ad;
    using P = ParamStore;
    std::vector<OpCase> c;
    c.push_back({"matmul_bias",
                 [](Rng& r) {
                     return P{{"x", random_tensor(r, {3, 4})}, {"w", random_tensor(r, {4, 2})},
                              {"b", random_tensor(r, {2})}};
                 },
                 [](Graph& g, const P& p) {
                     return matmul_bias(g.param(p.at("x")), g.param(p.at("w")), g.param(p.at("b")));
                 }});
    c.push_back({"matmul", [](Rng& r) { return P{{"a", random_tensor(r, {3, 4})}, {"b", random_tensor(r, {4, 5})}}; },
                 [](Graph& g, const P& p) { return matmul(g.param(p.at("a")), g.param(p.at("b"))); }});
    for (std::size_t pad : {0u, 1u, 2u})
        c.push_back({"conv1d_pad" + std::to_string(pad),
                     [](Rng& r) {
                         return P{{"x", random_tensor(r, {2, 3, 6})}, {"k", random_tensor(r, {4, 3, 3})},
                                  {"b", random_tensor(r, {4})}};
                     },
                     [pad](Graph& g, const P& p) {
                         return add_channel_bias(conv1d(g.param(p.at("x")), g.param(p.at("k")), pad),
                                                 g.param(p.at("b")));
                     }});
    c.push_back({"add_mul_scale",
                 [](Rng& r) {
                     return P{{"a", random_tensor(r, {2, 3, 4})}, {"b", random_tensor(r, {3, 4})},
                              {"c", random_tensor(r, {4})}, {"d", random_tensor(r, {2, 3, 4})}};
                 },
                 [](Graph& g, const P& p) {
                     auto a = g.param(p.at("a"));
                     auto y = mul(add(a, g.param(p.at("b"))), g.param(p.at("c")));
                     return scale(add(mul(y, g.param(p.at("d"))), a), -1.7);
                 }});
    for (auto kind : {Activation::Sigmoid, Activation::Tanh, Activation::Gelu})
        c.push_back({std::string(to_string(kind)),
                     [](Rng& r) { return P{{"x", random_tensor(r, {3, 5}, -3, 3)}}; },
                     [kind](Graph& g, const P& p) { return activate(g.param(p.at("x")), kind); }});
    c.push_back({"relu", [](Rng& r) { return P{{"x", random_away_from_zero(r, {3, 5})}}; },
                 [](Graph& g, const P& p) { return relu(g.param(p.at("x"))); }});
    c.push_back({"softmax_attention",
                 [](Rng& r) {
                     return P{{"q", random_tensor(r, {2, 2, 4, 3})}, {"k", random_tensor(r, {2, 2, 4, 3})},
                              {"v", random_tensor(r, {2, 2, 4, 3})}};
                 },
                 [](Graph& g, const P& p) {
                     return softmax_attention(g.param(p.at("q")), g.param(p.at("k")), g.param(p.at("v")));
                 }});
    c.push_back({"layer_norm",
                 [](Rng& r) {
                     return P{{"x", random_tensor(r, {2, 3, 5}, -2, 2)}, {"gamma", random_tensor(r, {5})},
                              {"beta", random_tensor(r, {5})}};
                 },
                 [](Graph& g, const P& p) {
                     return layer_norm(g.param(p.at("x")), g.param(p.at("gamma")), g.param(p.at("beta")));
                 }});
    c.push_back({"reshape_permute_take", [](Rng& r) { return P{{"x", random_tensor(r, {2, 3, 4})}}; },
                 [](Graph& g, const P& p) {
                     auto x = g.param(p.at("x"));
                     auto z = reshape(permute(x, {2, 0, 1}), {8, 3});
                     return add(take(reshape(z, {2, 4, 3}), 1, 2), take(x, 2, 3));
                 }});
    for (std::size_t axis : {0u, 1u, 2u})
        c.push_back({"mean_axis" + std::to_string(axis), [](Rng& r) { return P{{"x", random_tensor(r, {2, 3, 4})}}; },
                     [axis](Graph& g, const P& p) { return mean(g.param(p.at("x")), axis); }});
    c.push_back({"sum", [](Rng& r) { return P{{"x", random_tensor(r, {2, 3})}}; },
                 [](Graph& g, const P& p) { return sum(g.param(p.at("x"))); }});
    c.push_back({"mse_loss", [](Rng& r) { return P{{"p", random_tensor(r, {7})}, {"t", random_tensor(r, {7})}}; },
                 [](Graph& g, const P& p) { return mse_loss(g.param(p.at("p")), g.param(p.at("t"))); }});
    return c;
}

inline ad::GradCheckResult check_op_case(const OpCase& c, std::uint64_t seed) {
    Rng rng(seed);
    return ad::gradient_check(
        [&](ad::Graph& g, const ad::ParamStore& p) { return weighted_sum(g, c.forward(g, p), seed); }, c.make(rng));
}

inline constexpr model::ModelKind kAllKinds[] = {model::ModelKind::ConvLstm, model::ModelKind::Lstm,
                                                 model::ModelKind::CnnLstm, model::ModelKind::Transformer};

inline model::ModelSpec tiny_spec(model::ModelKind kind, data::FeatureSet fs = data::FeatureSet::AndroidApi) {
    model::ModelSpec s;
    s.kind = kind;
    s.feature_set = fs;
    s.convlstm_channels = 2;
    s.convlstm_fc = 3;
    s.lstm_layers = 2;
    s.lstm_hidden = 3;
    s.lstm_fc = 3;
    s.cnn_channels = 2;
    s.cnn_lstm_hidden = 3;
    s.tf_layers = 2;
    s.tf_heads = 2;
    s.tf_model_dim = 4;
    s.tf_ff_dim = 6;
    return s;
}

// Whole network at tiny dims with perturbed biases, peepholes and norms.
inline ad::GradCheckResult check_architecture(model::ModelKind kind, std::uint64_t seed) {
    Rng rng(seed);
    model::ModelSpec s = tiny_spec(kind);
    s.init_seed = seed;
    ad::ParamStore p = model::init_params(s);
    for (auto& [name, t] : p)
        for (auto& v : t.data()) v += rng.uniform(-0.3, 0.3);
    const ad::Tensor x = random_tensor(rng, {2, 5, s.input_features()}, -2, 2);
    const ad::Tensor y = random_tensor(rng, {2});
    return ad::gradient_check(
        [&](ad::Graph& g, const ad::ParamStore& ps) {
            return ad::mse_loss(model::forward(s, ps, g, g.constant(x)), g.constant(y));
        },
        p);
}

}  // namespace ulp::test
