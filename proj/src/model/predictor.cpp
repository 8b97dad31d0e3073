// SPDX-License-Identifier: Apache-2.0
#include "ulp/model/predictor.hpp"

#include <algorithm>
#include <cmath>

#include "ulp/ad/checkpoint.hpp"
#include "ulp/common/error.hpp"
#include "ulp/common/rng.hpp"

namespace ulp::model {

using ad::Graph;
using ad::ParamStore;
using ad::Shape;
using ad::Tensor;
using ad::Var;

namespace {

constexpr const char* kModule = "predictors";
constexpr std::size_t kGates = 4;
constexpr std::size_t kPredictChunk = 256;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Config, kModule, what); }

Tensor glorot(Rng& rng, Shape shape, std::size_t fan_in, std::size_t fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Tensor t(std::move(shape));
    for (auto& v : t.data()) v = rng.uniform(-limit, limit);
    return t;
}

Tensor glorot2(Rng& rng, std::size_t in, std::size_t out) { return glorot(rng, {in, out}, in, out); }

// Conv kernel [out, in, k].
Tensor glorot_conv(Rng& rng, std::size_t out, std::size_t in, std::size_t k) {
    return glorot(rng, {out, in, k}, in * k, out * k);
}

void add_dense(ParamStore& p, Rng& rng, const std::string& name, std::size_t in, std::size_t out) {
    p.emplace(name + ".w", glorot2(rng, in, out));
    p.emplace(name + ".b", Tensor({out}));
}

void add_lstm(ParamStore& p, Rng& rng, const std::string& name, std::size_t in, std::size_t hidden) {
    p.emplace(name + ".w", glorot2(rng, in, kGates * hidden));
    p.emplace(name + ".u", glorot2(rng, hidden, kGates * hidden));
    p.emplace(name + ".b", Tensor({kGates * hidden}));
}

Var param(Graph& g, const ParamStore& p, const std::string& name) {
    const auto it = p.find(name);
    if (it == p.end()) throw Error(ErrorKind::Contract, kModule, "parameter '" + name + "' missing");
    return g.param(it->second);
}

Var dense(Graph& g, const ParamStore& p, const std::string& name, Var x) {
    return ad::matmul_bias(x, param(g, p, name + ".w"), param(g, p, name + ".b"));
}

// Gate `index` of a stacked pre-activation: [B, 4X, ...] -> [B, X, ...].
Var gate(Var z, std::size_t index) {
    Shape s = z.shape();
    Shape split{s[0], kGates, s[1] / kGates};
    split.insert(split.end(), s.begin() + 2, s.end());
    return ad::take(ad::reshape(z, split), 1, index);
}

std::pair<Var, Var> lstm_step(Graph& g, const ParamStore& p, const std::string& name, Var x, Var h, Var c) {
    Var z = ad::add(ad::add(ad::matmul(x, param(g, p, name + ".w")), ad::matmul(h, param(g, p, name + ".u"))),
                    param(g, p, name + ".b"));
    Var i = ad::sigmoid(gate(z, 0));
    Var f = ad::sigmoid(gate(z, 1));
    Var cand = ad::tanh(gate(z, 2));
    Var o = ad::sigmoid(gate(z, 3));
    Var c_next = ad::add(ad::mul(f, c), ad::mul(i, cand));
    return {ad::mul(o, ad::tanh(c_next)), c_next};
}

// Runs one LSTM layer over a sequence of [B, I] inputs; returns every hidden state.
std::vector<Var> lstm_layer(Graph& g, const ParamStore& p, const std::string& name, const std::vector<Var>& xs,
                            std::size_t hidden) {
    const std::size_t batch = xs.front().shape()[0];
    Var h = g.constant(Tensor({batch, hidden}));
    Var c = g.constant(Tensor({batch, hidden}));
    std::vector<Var> hs;
    for (Var x : xs) {
        std::tie(h, c) = lstm_step(g, p, name, x, h, c);
        hs.push_back(h);
    }
    return hs;
}

std::vector<Var> time_steps(Var x) {
    std::vector<Var> xs;
    for (std::size_t t = 0; t < x.shape()[1]; ++t) xs.push_back(ad::take(x, 1, t));
    return xs;
}

Var to_vector(Var y) { return ad::reshape(y, {y.shape()[0]}); }

Var forward_convlstm(const ModelSpec& s, const ParamStore& p, Graph& g, Var x) {
    const std::size_t batch = x.shape()[0], feats = x.shape()[2], ch = s.convlstm_channels;
    const ConvLstmWeights w{param(g, p, "convlstm.wx"),  param(g, p, "convlstm.wh"),  param(g, p, "convlstm.b"),
                            param(g, p, "convlstm.wci"), param(g, p, "convlstm.wcf"), param(g, p, "convlstm.wco")};
    Var h = g.constant(Tensor({batch, ch, feats}));
    Var c = g.constant(Tensor({batch, ch, feats}));
    for (Var xt : time_steps(x)) std::tie(h, c) = convlstm_cell(w, ad::reshape(xt, {batch, 1, feats}), h, c);
    Var z = ad::activate(dense(g, p, "fc1", ad::reshape(h, {batch, ch * feats})), fc_activation(s.kind));
    return to_vector(dense(g, p, "out", z));
}

Var forward_lstm(const ModelSpec& s, const ParamStore& p, Graph& g, Var x) {
    std::vector<Var> seq = time_steps(x);
    for (std::size_t l = 0; l < s.lstm_layers; ++l)
        seq = lstm_layer(g, p, "lstm" + std::to_string(l), seq, s.lstm_hidden);
    Var z = ad::activate(dense(g, p, "fc1", seq.back()), fc_activation(s.kind));
    return to_vector(dense(g, p, "out", z));
}

Var forward_cnn_lstm(const ModelSpec& s, const ParamStore& p, Graph& g, Var x) {
    const std::size_t batch = x.shape()[0], steps = x.shape()[1], feats = x.shape()[2];
    // every timestep through the same conv at once
    Var rows = ad::reshape(x, {batch * steps, 1, feats});
    Var conv = ad::conv1d(rows, param(g, p, "cnn.k"), s.cnn_kernel / 2);
    conv = ad::activate(ad::add_channel_bias(conv, param(g, p, "cnn.b")), fc_activation(s.kind));
    Var seq = ad::reshape(conv, {batch, steps, s.cnn_channels * feats});
    const auto hs = lstm_layer(g, p, "lstm0", time_steps(seq), s.cnn_lstm_hidden);
    return to_vector(dense(g, p, "out", hs.back()));
}

Var forward_transformer(const ModelSpec& s, const ParamStore& p, Graph& g, Var x) {
    const std::size_t batch = x.shape()[0], steps = x.shape()[1], feats = x.shape()[2];
    const std::size_t d = s.tf_model_dim, heads = s.tf_heads, dh = d / heads, tokens = batch * steps;

    Var e = dense(g, p, "tf.in", ad::reshape(x, {tokens, feats}));
    e = ad::reshape(ad::add(ad::reshape(e, {batch, steps, d}), param(g, p, "tf.pos")), {tokens, d});

    auto split_heads = [&](Var v) { return ad::permute(ad::reshape(v, {batch, steps, heads, dh}), {0, 2, 1, 3}); };
    for (std::size_t l = 0; l < s.tf_layers; ++l) {
        const std::string n = "tf" + std::to_string(l) + ".";
        Var q = split_heads(dense(g, p, n + "q", e));
        Var k = split_heads(dense(g, p, n + "k", e));
        Var v = split_heads(dense(g, p, n + "v", e));
        Var att = ad::reshape(ad::permute(ad::softmax_attention(q, k, v), {0, 2, 1, 3}), {tokens, d});
        e = ad::layer_norm(ad::add(e, dense(g, p, n + "o", att)), param(g, p, n + "ln1.g"), param(g, p, n + "ln1.b"));
        Var ff = dense(g, p, n + "ff2", ad::activate(dense(g, p, n + "ff1", e), fc_activation(s.kind)));
        e = ad::layer_norm(ad::add(e, ff), param(g, p, n + "ln2.g"), param(g, p, n + "ln2.b"));
    }
    Var pooled = ad::mean(ad::reshape(e, {batch, steps, d}), 1);
    return to_vector(dense(g, p, "out", pooled));
}

}  // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::ConvLstm: return "convlstm";
        case ModelKind::Lstm: return "lstm";
        case ModelKind::CnnLstm: return "cnn-lstm";
        case ModelKind::Transformer: return "transformer";
    }
    return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view text) {
    if (text == "convlstm") return ModelKind::ConvLstm;
    if (text == "lstm") return ModelKind::Lstm;
    if (text == "cnn-lstm" || text == "cnnlstm") return ModelKind::CnnLstm;
    if (text == "transformer") return ModelKind::Transformer;
    return std::nullopt;
}

ad::Activation fc_activation(ModelKind kind) {
    return kind == ModelKind::Transformer ? ad::Activation::Gelu : ad::Activation::Relu;
}

void ModelSpec::validate() const {
    if (window != data::kDefaultWindow)
        config_error("window is fixed at " + std::to_string(data::kDefaultWindow) + " s (got " +
                     std::to_string(window) + ")");
    auto positive = [](std::size_t v, const char* name) {
        if (v == 0) config_error(std::string(name) + " must be >= 1");
    };
    auto odd = [](std::size_t v, const char* name) {
        if (v % 2 == 0) config_error(std::string(name) + " must be odd");
    };
    switch (kind) {
        case ModelKind::ConvLstm:
            positive(convlstm_channels, "convlstm_channels");
            positive(convlstm_fc, "convlstm_fc");
            odd(convlstm_kernel, "convlstm_kernel");
            break;
        case ModelKind::Lstm:
            positive(lstm_layers, "lstm_layers");
            positive(lstm_hidden, "lstm_hidden");
            positive(lstm_fc, "lstm_fc");
            break;
        case ModelKind::CnnLstm:
            positive(cnn_channels, "cnn_channels");
            positive(cnn_lstm_hidden, "cnn_lstm_hidden");
            odd(cnn_kernel, "cnn_kernel");
            break;
        case ModelKind::Transformer:
            positive(tf_layers, "tf_layers");
            positive(tf_heads, "tf_heads");
            positive(tf_model_dim, "tf_model_dim");
            positive(tf_ff_dim, "tf_ff_dim");
            if (tf_model_dim % tf_heads != 0) config_error("tf_heads must divide tf_model_dim");
            break;
    }
}

nlohmann::json ModelSpec::to_json() const {
    nlohmann::json j{{"kind", std::string(to_string(kind))},
                     {"feature_set", std::string(data::to_string(feature_set))},
                     {"input_features", input_features()},
                     {"window", window},
                     {"init_seed", init_seed}};
    j.update({{"convlstm_channels", convlstm_channels},
              {"convlstm_kernel", convlstm_kernel},
              {"convlstm_fc", convlstm_fc},
              {"lstm_layers", lstm_layers},
              {"lstm_hidden", lstm_hidden},
              {"lstm_fc", lstm_fc},
              {"cnn_channels", cnn_channels},
              {"cnn_kernel", cnn_kernel},
              {"cnn_lstm_hidden", cnn_lstm_hidden},
              {"tf_layers", tf_layers},
              {"tf_heads", tf_heads},
              {"tf_model_dim", tf_model_dim},
              {"tf_ff_dim", tf_ff_dim}});
    j["fc_activation"] = std::string(ad::to_string(fc_activation(kind)));
    return j;
}

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
    try {
        ModelSpec s;
        const auto kind = parse_model_kind(j.at("kind").get<std::string>());
        const auto fs = data::parse_feature_set(j.at("feature_set").get<std::string>());
        if (!kind || !fs) throw Error(ErrorKind::Data, kModule, "unknown model kind or feature set in spec");
        s.kind = *kind;
        s.feature_set = *fs;
        s.window = j.value("window", s.window);
        s.init_seed = j.value("init_seed", s.init_seed);
        s.convlstm_channels = j.value("convlstm_channels", s.convlstm_channels);
        s.convlstm_kernel = j.value("convlstm_kernel", s.convlstm_kernel);
        s.convlstm_fc = j.value("convlstm_fc", s.convlstm_fc);
        s.lstm_layers = j.value("lstm_layers", s.lstm_layers);
        s.lstm_hidden = j.value("lstm_hidden", s.lstm_hidden);
        s.lstm_fc = j.value("lstm_fc", s.lstm_fc);
        s.cnn_channels = j.value("cnn_channels", s.cnn_channels);
        s.cnn_kernel = j.value("cnn_kernel", s.cnn_kernel);
        s.cnn_lstm_hidden = j.value("cnn_lstm_hidden", s.cnn_lstm_hidden);
        s.tf_layers = j.value("tf_layers", s.tf_layers);
        s.tf_heads = j.value("tf_heads", s.tf_heads);
        s.tf_model_dim = j.value("tf_model_dim", s.tf_model_dim);
        s.tf_ff_dim = j.value("tf_ff_dim", s.tf_ff_dim);
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Data, kModule, std::string("malformed model spec: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

std::pair<Var, Var> convlstm_cell(const ConvLstmWeights& w, Var x, Var h, Var c) {
    const Shape& xs = x.shape();
    const Shape& hs = h.shape();
    const Shape& ws = w.wh.shape();
    if (xs.size() != 3 || xs[1] != 1 || hs.size() != 3 || hs != c.shape() || hs[0] != xs[0] || hs[2] != xs[2] ||
        ws.size() != 3 || ws[0] != kGates * hs[1] || ws[1] != hs[1] || w.wci.shape() != Shape{hs[1], hs[2]})
        throw Error(ErrorKind::Dimension, kModule,
                    "convlstm_cell: x " + ad::to_string(xs) + ", h " + ad::to_string(hs) + ", c " +
                        ad::to_string(c.shape()) + ", wh " + ad::to_string(ws) + " are inconsistent");
    const std::size_t pad = ws[2] / 2;
    Var z = ad::add_channel_bias(ad::add(ad::conv1d(x, w.wx, pad), ad::conv1d(h, w.wh, pad)), w.b);
    Var i = ad::sigmoid(ad::add(gate(z, 0), ad::mul(c, w.wci)));
    Var f = ad::sigmoid(ad::add(gate(z, 1), ad::mul(c, w.wcf)));
    Var c_next = ad::add(ad::mul(f, c), ad::mul(i, ad::tanh(gate(z, 2))));
    Var o = ad::sigmoid(ad::add(gate(z, 3), ad::mul(c_next, w.wco)));
    return {ad::mul(o, ad::tanh(c_next)), c_next};
}

ParamStore init_params(const ModelSpec& s) {
    s.validate();
    Rng rng(s.init_seed);
    ParamStore p;
    const std::size_t f = s.input_features();
    switch (s.kind) {
        case ModelKind::ConvLstm: {
            const std::size_t c = s.convlstm_channels, k = s.convlstm_kernel;
            p.emplace("convlstm.wx", glorot_conv(rng, kGates * c, 1, k));
            p.emplace("convlstm.wh", glorot_conv(rng, kGates * c, c, k));
            p.emplace("convlstm.b", Tensor({kGates * c}));
            for (const char* n : {"convlstm.wci", "convlstm.wcf", "convlstm.wco"}) p.emplace(n, Tensor({c, f}));
            add_dense(p, rng, "fc1", c * f, s.convlstm_fc);
            add_dense(p, rng, "out", s.convlstm_fc, 1);
            break;
        }
        case ModelKind::Lstm:
            for (std::size_t l = 0; l < s.lstm_layers; ++l)
                add_lstm(p, rng, "lstm" + std::to_string(l), l == 0 ? f : s.lstm_hidden, s.lstm_hidden);
            add_dense(p, rng, "fc1", s.lstm_hidden, s.lstm_fc);
            add_dense(p, rng, "out", s.lstm_fc, 1);
            break;
        case ModelKind::CnnLstm:
            p.emplace("cnn.k", glorot_conv(rng, s.cnn_channels, 1, s.cnn_kernel));
            p.emplace("cnn.b", Tensor({s.cnn_channels}));
            add_lstm(p, rng, "lstm0", s.cnn_channels * f, s.cnn_lstm_hidden);
            add_dense(p, rng, "out", s.cnn_lstm_hidden, 1);
            break;
        case ModelKind::Transformer: {
            const std::size_t d = s.tf_model_dim;
            add_dense(p, rng, "tf.in", f, d);
            p.emplace("tf.pos", glorot2(rng, s.window, d));
            for (std::size_t l = 0; l < s.tf_layers; ++l) {
                const std::string n = "tf" + std::to_string(l) + ".";
                for (const char* m : {"q", "k", "v", "o"}) add_dense(p, rng, n + m, d, d);
                add_dense(p, rng, n + "ff1", d, s.tf_ff_dim);
                add_dense(p, rng, n + "ff2", s.tf_ff_dim, d);
                for (const char* ln : {"ln1", "ln2"}) {
                    p.emplace(n + ln + ".g", Tensor::filled({d}, 1.0));
                    p.emplace(n + ln + ".b", Tensor({d}));
                }
            }
            add_dense(p, rng, "out", d, 1);
            break;
        }
    }
    return p;
}

std::size_t parameter_count(const ParamStore& params) {
    std::size_t n = 0;
    for (const auto& [name, t] : params) n += t.size();
    return n;
}

Var forward(const ModelSpec& spec, const ParamStore& params, Graph& g, Var x) {
    const Shape& s = x.shape();
    if (s.size() != 3 || s[1] != spec.window || s[2] != spec.input_features())
        throw Error(ErrorKind::Dimension, kModule,
                    "input " + ad::to_string(s) + " does not match [B x " + std::to_string(spec.window) + " x " +
                        std::to_string(spec.input_features()) + "]");
    switch (spec.kind) {
        case ModelKind::ConvLstm: return forward_convlstm(spec, params, g, x);
        case ModelKind::Lstm: return forward_lstm(spec, params, g, x);
        case ModelKind::CnnLstm: return forward_cnn_lstm(spec, params, g, x);
        case ModelKind::Transformer: return forward_transformer(spec, params, g, x);
    }
    throw Error(ErrorKind::Contract, kModule, "unknown model kind");
}

// ---------------------------------------------------------------------------

Model::Model(ModelSpec spec) : spec_(std::move(spec)), params_(init_params(spec_)) {}

Model::Model(ModelSpec spec, ParamStore params) : spec_(std::move(spec)), params_(std::move(params)) {
    const ParamStore expected = init_params(spec_);
    for (const auto& [name, t] : expected) {
        const auto it = params_.find(name);
        if (it == params_.end() || it->second.shape() != t.shape())
            throw Error(ErrorKind::Data, kModule,
                        "parameter '" + name + "' missing or shaped differently from " + ad::to_string(t.shape()));
    }
    if (params_.size() != expected.size())
        throw Error(ErrorKind::Data, kModule, "unexpected extra parameters for a " + std::string(to_string(spec_.kind)));
}

Model build(const ModelSpec& spec) { return Model(spec); }

TrainedModel::TrainedModel(ModelSpec spec, ParamStore params, data::Normalizer normalizer,
                           std::vector<double> history, nlohmann::json train_config)
    : spec_(std::move(spec)),
      params_(Model(spec_, std::move(params)).params()),
      normalizer_(std::move(normalizer)),
      history_(std::move(history)),
      train_config_(std::move(train_config)) {
    if (normalizer_.width() != spec_.input_features())
        throw Error(ErrorKind::Dimension, kModule, "normalizer width does not match the feature set");
}

std::vector<double> predict_batch(const TrainedModel& m, const Tensor& x) {
    const Shape& s = x.shape();
    if (s.size() != 3) throw Error(ErrorKind::Dimension, kModule, "predict_batch expects [N x W x F]");
    const std::size_t n = s[0], row = s[1] * s[2];
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t begin = 0; begin < n; begin += kPredictChunk) {
        const std::size_t len = std::min(kPredictChunk, n - begin);
        std::vector<double> chunk(x.data().begin() + static_cast<std::ptrdiff_t>(begin * row),
                                  x.data().begin() + static_cast<std::ptrdiff_t>((begin + len) * row));
        Graph g;
        Var y = forward(m.spec(), m.params(), g, g.constant(Tensor({len, s[1], s[2]}, std::move(chunk))));
        for (double z : y.value().data()) out.push_back(m.normalizer().denormalize_target(z));
    }
    return data::clamp_nonnegative(out);
}

double predict(const TrainedModel& m, const Tensor& window) {
    const Shape& s = window.shape();
    if (s.size() != 2) throw Error(ErrorKind::Dimension, kModule, "predict expects a [W x F] window");
    return predict_batch(m, window.reshaped({1, s[0], s[1]})).front();
}

void save_model(const std::filesystem::path& path, const TrainedModel& m) {
    ad::Checkpoint c;
    c.meta = {{"artifact", "ulp-model"},
              {"model", m.spec().to_json()},
              {"parameter_count", parameter_count(m.params())},
              {"normalizer", m.normalizer().to_json()},
              {"history", m.history()},
              {"train", m.train_config()}};
    c.tensors = m.params();
    ad::save_checkpoint(path, c);
}

TrainedModel load_model(const std::filesystem::path& path) {
    ad::Checkpoint c = ad::load_checkpoint(path);
    try {
        if (c.meta.value("artifact", "") != "ulp-model")
            throw Error(ErrorKind::Data, kModule, path.string() + " is not a model checkpoint");
        return TrainedModel(ModelSpec::from_json(c.meta.at("model")), std::move(c.tensors),
                            data::Normalizer::from_json(c.meta.at("normalizer")),
                            c.meta.at("history").get<std::vector<double>>(), c.meta.value("train", nlohmann::json::object()));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Data, kModule, "malformed model checkpoint " + path.string() + ": " + e.what());
    }
}

}  // namespace ulp::model
