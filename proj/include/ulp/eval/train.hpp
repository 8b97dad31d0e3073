// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>

#include "json.hpp"
#include "ulp/ad/adam.hpp"
#include "ulp/data/dataset.hpp"
#include "ulp/model/predictor.hpp"

namespace ulp::eval {

/// Default epochs per architecture: ConvLSTM 10, LSTM 125, CNN-LSTM 100,
/// Transformer 150.
std::size_t default_epochs(model::ModelKind kind);

inline constexpr std::size_t kDefaultBatchSize = 32;

struct TrainConfig {
    std::size_t epochs = 10;
    std::size_t batch_size = kDefaultBatchSize;
    ad::AdamConfig optimizer;
    std::uint64_t shuffle_seed = 1;
    /// Share of traces (not windows) held out to report a validation loss.
    /// Needs at least two traces; 0 disables the split.
    double validation_fraction = 0.1;
    /// Return the parameters of the epoch with the lowest validation loss
    /// instead of the last epoch's. Every epoch still runs. Ignored without
    /// a validation split.
    bool restore_best = true;

    static TrainConfig defaults(model::ModelKind kind);
    /// Throws a configuration error.
    void validate() const;
    nlohmann::json to_json() const;
};

struct EpochStats {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    std::optional<double> validation_loss;
    std::size_t steps = 0;  // optimizer steps so far
};

using EpochCallback = std::function<void(const EpochStats&)>;

/// Shuffled mini-batch Adam on MSE over normalized targets. The last batch
/// of an epoch may be smaller. Deterministic given the model's init seed and
/// `cfg.shuffle_seed`.
///
/// Throws a data error for an empty dataset and a numeric error (with epoch
/// and batch) when the loss stops being finite.
model::TrainedModel train(const model::Model& model, const data::WindowedDataset& dataset, const TrainConfig& cfg,
                          const EpochCallback& on_epoch = {});

/// Fits a normalizer on every sample of `traces` and windows them.
data::WindowedDataset prepare_dataset(std::span<const data::Trace> traces, data::FeatureSet fs);

}  // namespace ulp::eval
