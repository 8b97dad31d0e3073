// SPDX-License-Identifier: Apache-2.0
#include "ulp/eval/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ulp/ad/ops.hpp"
#include "ulp/common/error.hpp"
#include "ulp/common/format.hpp"
#include "ulp/common/rng.hpp"

namespace ulp::eval {

namespace {

constexpr const char* kModule = "train-eval";

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

// Trace ids held out for validation.
std::set<std::size_t> validation_traces(const data::WindowedDataset& ds, const TrainConfig& cfg) {
    std::vector<std::size_t> ids(ds.trace_id.begin(), ds.trace_id.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (cfg.validation_fraction <= 0.0 || ids.size() < 2) return {};
    const auto n = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(cfg.validation_fraction * static_cast<double>(ids.size()))), 1,
        ids.size() - 1);
    Rng rng(cfg.shuffle_seed ^ 0x5eedULL);
    shuffle(ids, rng);
    return {ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n)};
}

double batch_loss(const model::ModelSpec& spec, const ad::ParamStore& params, const data::WindowedDataset& ds,
                  std::span<const std::size_t> idx) {
    auto [bx, by] = ds.batch(idx);
    ad::Graph g;
    return ad::mse_loss(model::forward(spec, params, g, g.constant(std::move(bx))), g.constant(std::move(by)))
        .value()
        .item();
}

}  // namespace

std::size_t default_epochs(model::ModelKind kind) {
    switch (kind) {
        case model::ModelKind::ConvLstm: return 10;
        case model::ModelKind::Lstm: return 125;
        case model::ModelKind::CnnLstm: return 100;
        case model::ModelKind::Transformer: return 150;
    }
    return 10;
}

TrainConfig TrainConfig::defaults(model::ModelKind kind) {
    TrainConfig c;
    c.epochs = default_epochs(kind);
    return c;
}

void TrainConfig::validate() const {
    if (epochs < 1) throw Error(ErrorKind::Config, kModule, "epochs must be >= 1");
    if (batch_size < 1) throw Error(ErrorKind::Config, kModule, "batch_size must be >= 1");
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
        throw Error(ErrorKind::Config, kModule, "validation_fraction must lie in [0, 1)");
    ad::AdamState check(optimizer);
    (void)check;
}

nlohmann::json TrainConfig::to_json() const {
    return {{"epochs", epochs},
            {"batch_size", batch_size},
            {"optimizer",
             {{"name", "adam"},
              {"lr", optimizer.lr},
              {"beta1", optimizer.beta1},
              {"beta2", optimizer.beta2},
              {"epsilon", optimizer.epsilon}}},
            {"shuffle_seed", shuffle_seed},
            {"validation_fraction", validation_fraction},
            {"restore_best", restore_best},
            {"loss", "mse"}};
}

model::TrainedModel train(const model::Model& mdl, const data::WindowedDataset& ds, const TrainConfig& cfg,
                          const EpochCallback& on_epoch) {
    cfg.validate();
    if (ds.size() == 0) throw Error(ErrorKind::Data, kModule, "cannot train on an empty dataset");
    const model::ModelSpec& spec = mdl.spec();
    if (ds.features() != spec.input_features() || ds.x.dim(1) != spec.window)
        throw Error(ErrorKind::Dimension, kModule,
                    "dataset windows " + ad::to_string(ds.x.shape()) + " do not fit the " +
                        std::string(model::to_string(spec.kind)) + " spec");

    const auto held_out = validation_traces(ds, cfg);
    std::vector<std::size_t> train_idx, val_idx;
    for (std::size_t i = 0; i < ds.size(); ++i) (held_out.count(ds.trace_id[i]) ? val_idx : train_idx).push_back(i);

    ad::ParamStore params = mdl.params();
    ad::AdamState opt(cfg.optimizer);
    Rng rng(cfg.shuffle_seed);
    std::vector<double> history, val_history;
    ad::ParamStore best = params;
    std::size_t best_epoch = 0;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        shuffle(train_idx, rng);
        double total = 0.0;
        for (std::size_t begin = 0, batch_no = 0; begin < train_idx.size(); begin += cfg.batch_size, ++batch_no) {
            const std::span<const std::size_t> idx(train_idx.data() + begin,
                                                   std::min(cfg.batch_size, train_idx.size() - begin));
            auto [bx, by] = ds.batch(idx);
            ad::ParamStore grads;
            double loss = 0.0;
            try {
                ad::Graph g;
                ad::Var l = ad::mse_loss(model::forward(spec, params, g, g.constant(std::move(bx))),
                                         g.constant(std::move(by)));
                loss = l.value().item();
                g.backward(l);
                grads = g.grads_of(params);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::Numeric) throw;
                throw Error(ErrorKind::Numeric, kModule,
                            "training diverged at epoch " + std::to_string(epoch) + ", batch " +
                                std::to_string(batch_no) + " (lr " + format_double(cfg.optimizer.lr) +
                                "): " + e.what());
            }
            opt.step(params, grads);
            total += loss * static_cast<double>(idx.size());
        }
        history.push_back(total / static_cast<double>(train_idx.size()));

        EpochStats stats{epoch, history.back(), std::nullopt, opt.step_count()};
        if (!val_idx.empty()) {
            double vt = 0.0;
            for (std::size_t begin = 0; begin < val_idx.size(); begin += 256) {
                const std::span<const std::size_t> idx(val_idx.data() + begin, std::min<std::size_t>(256, val_idx.size() - begin));
                vt += batch_loss(spec, params, ds, idx) * static_cast<double>(idx.size());
            }
            val_history.push_back(vt / static_cast<double>(val_idx.size()));
            stats.validation_loss = val_history.back();
            if (cfg.restore_best &&
                (best_epoch == 0 || val_history.back() < val_history[best_epoch - 1])) {
                best = params;
                best_epoch = epoch;
            }
        }
        if (on_epoch) on_epoch(stats);
    }

    nlohmann::json meta = cfg.to_json();
    meta["optimizer_steps"] = opt.step_count();
    meta["train_windows"] = train_idx.size();
    meta["validation_windows"] = val_idx.size();
    meta["validation_loss"] = val_history;
    if (best_epoch > 0) {
        meta["best_epoch"] = best_epoch;
        params = std::move(best);
    }
    return model::TrainedModel(spec, std::move(params), ds.normalizer, std::move(history), std::move(meta));
}

data::WindowedDataset prepare_dataset(std::span<const data::Trace> traces, data::FeatureSet fs) {
    std::vector<ad::Tensor> matrices;
    for (const auto& t : traces)
        if (!t.samples.empty()) matrices.push_back(data::project_features(t, fs));
    const auto names = data::features_of(fs);
    const auto norm = data::Normalizer::fit(matrices, data::target_column(fs), names);
    return data::make_windows(traces, fs, norm);
}

}  // namespace ulp::eval
