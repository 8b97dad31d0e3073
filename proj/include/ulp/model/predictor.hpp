// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ulp/ad/graph.hpp"
#include "ulp/ad/ops.hpp"
#include "ulp/data/dataset.hpp"
#include "ulp/data/trace.hpp"

namespace ulp::model {

enum class ModelKind { ConvLstm, Lstm, CnnLstm, Transformer };

std::string_view to_string(ModelKind kind);
/// Accepts "convlstm", "lstm", "cnn-lstm" / "cnnlstm", "transformer".
std::optional<ModelKind> parse_model_kind(std::string_view text);

/// Architecture and width settings. Widths are defaults, not measured values.
struct ModelSpec {
    ModelKind kind = ModelKind::ConvLstm;
    data::FeatureSet feature_set = data::FeatureSet::AndroidApi;
    std::size_t window = data::kDefaultWindow;
    std::uint64_t init_seed = 1;

    // ConvLSTM: one layer over the feature axis, then flatten -> FC -> FC(1)
    std::size_t convlstm_channels = 32;
    std::size_t convlstm_kernel = 3;
    std::size_t convlstm_fc = 64;

    // stacked LSTM -> FC -> FC(1)
    std::size_t lstm_layers = 2;
    std::size_t lstm_hidden = 128;
    std::size_t lstm_fc = 64;

    // per-step conv1d over features -> LSTM -> FC(1)
    std::size_t cnn_channels = 16;
    std::size_t cnn_kernel = 3;
    std::size_t cnn_lstm_hidden = 128;

    // post-LN encoder, learned positions, mean-pool -> FC(1)
    std::size_t tf_layers = 2;
    std::size_t tf_heads = 4;
    std::size_t tf_model_dim = 256;
    std::size_t tf_ff_dim = 512;

    std::size_t input_features() const { return data::feature_count(feature_set); }
    /// Throws a configuration error (window must be 5, widths >= 1, odd
    /// kernels, heads dividing the model dimension).
    void validate() const;

    nlohmann::json to_json() const;
    static ModelSpec from_json(const nlohmann::json& j);

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Activation of the hidden fully-connected / feed-forward layers.
ad::Activation fc_activation(ModelKind kind);

// ---- ConvLSTM cell ---------------------------------------------------------

/// Gate order along the stacked channel axis: input, forget, candidate, output.
struct ConvLstmWeights {
    ad::Var wx;   // [4C, 1, K]
    ad::Var wh;   // [4C, C, K]
    ad::Var b;    // [4C]
    ad::Var wci;  // [C, F] peepholes
    ad::Var wcf;  // [C, F]
    ad::Var wco;  // [C, F]
};

/// One ConvLSTM step with "same" padding over the feature axis.
///   i = sig(Wxi*x + Whi*h + wci.c + bi)      f = sig(Wxf*x + Whf*h + wcf.c + bf)
///   c' = f.c + i.tanh(Wxc*x + Whc*h + bc)   o = sig(Wxo*x + Who*h + wco.c' + bo)
///   h' = o.tanh(c')
/// x: [B, 1, F]; h, c: [B, C, F]. Returns (h', c').
std::pair<ad::Var, ad::Var> convlstm_cell(const ConvLstmWeights& w, ad::Var x, ad::Var h, ad::Var c);

// ---- models ----------------------------------------------------------------

/// Fresh parameters for a spec: Glorot-uniform weights from `init_seed`,
/// zero biases and peepholes, unit LayerNorm gains.
ad::ParamStore init_params(const ModelSpec& spec);

std::size_t parameter_count(const ad::ParamStore& params);

/// Forward pass on a batch of normalized windows x [B, W, F]; returns the
/// normalized one-step prediction [B].
ad::Var forward(const ModelSpec& spec, const ad::ParamStore& params, ad::Graph& g, ad::Var x);

/// An untrained network: spec plus its parameter map.
class Model {
public:
    explicit Model(ModelSpec spec);
    Model(ModelSpec spec, ad::ParamStore params);

    const ModelSpec& spec() const noexcept { return spec_; }
    const ad::ParamStore& params() const noexcept { return params_; }
    ad::ParamStore& params() noexcept { return params_; }
    std::size_t parameter_count() const { return model::parameter_count(params_); }

    ad::Var forward(ad::Graph& g, ad::Var x) const { return model::forward(spec_, params_, g, x); }

private:
    ModelSpec spec_;
    ad::ParamStore params_;
};

Model build(const ModelSpec& spec);

/// Frozen result of training. All members are read-only, so one instance
/// may serve predictions from several threads.
class TrainedModel {
public:
    TrainedModel(ModelSpec spec, ad::ParamStore params, data::Normalizer normalizer, std::vector<double> history,
                 nlohmann::json train_config = nlohmann::json::object());

    const ModelSpec& spec() const noexcept { return spec_; }
    const ad::ParamStore& params() const noexcept { return params_; }
    const data::Normalizer& normalizer() const noexcept { return normalizer_; }
    const std::vector<double>& history() const noexcept { return history_; }
    const nlohmann::json& train_config() const noexcept { return train_config_; }

private:
    ModelSpec spec_;
    ad::ParamStore params_;
    data::Normalizer normalizer_;
    std::vector<double> history_;
    nlohmann::json train_config_;
};

/// One prediction in Mbps from a normalized [W, F] window, clamped at zero.
double predict(const TrainedModel& model, const ad::Tensor& window);

/// Predictions in Mbps for normalized windows x [N, W, F], clamped at zero.
std::vector<double> predict_batch(const TrainedModel& model, const ad::Tensor& x);

void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace ulp::model
