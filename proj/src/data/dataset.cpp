// SPDX-License-Identifier: Apache-2.0
#include "ulp/data/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "ulp/common/error.hpp"
#include "ulp/nr/band.hpp"

namespace ulp::data {

namespace {

constexpr const char* kModule = "trace-data";

double feature_value(const TelemetrySample& s, Feature f) {
    auto need = [&](const auto& opt) -> double {
        if (!opt)
            throw Error(ErrorKind::Schema, kModule,
                        "sample t=" + std::to_string(s.t) + " lacks " + std::string(to_string(f)));
        return static_cast<double>(*opt);
    };
    switch (f) {
        case Feature::Rsrp: return s.rsrp_dbm;
        case Feature::Rsrq: return s.rsrq_db;
        case Feature::Sinr: return s.sinr_db;
        case Feature::FrequencyMhz: return nr::arfcn_to_mhz(s.ssb_arfcn);
        case Feature::Throughput: return s.thpt_mbps;
        case Feature::RbAlloc: return need(s.rb_alloc);
        case Feature::SchedCount: return need(s.sched_count);
        case Feature::PucchTx: return need(s.pucch_tx_dbm);
        case Feature::Bandwidth: return need(s.bw_mhz);
    }
    return 0.0;
}

}  // namespace

std::vector<double> project_sample(const TelemetrySample& s, FeatureSet fs) {
    std::vector<double> row;
    for (auto f : features_of(fs)) row.push_back(feature_value(s, f));
    return row;
}

ad::Tensor project_features(const Trace& trace, FeatureSet fs) {
    if (trace.samples.empty()) throw Error(ErrorKind::Data, kModule, "trace '" + trace.meta.name + "' has no samples");
    const std::size_t width = feature_count(fs);
    ad::Tensor m({trace.samples.size(), width});
    for (std::size_t r = 0; r < trace.samples.size(); ++r) {
        const auto row = project_sample(trace.samples[r], fs);
        std::copy(row.begin(), row.end(), m.data().begin() + static_cast<std::ptrdiff_t>(r * width));
    }
    return m;
}

// ---------------------------------------------------------------------------

Normalizer::Normalizer(std::vector<double> mean, std::vector<double> stddev, double target_mean, double target_std)
    : mean_(std::move(mean)), std_(std::move(stddev)), target_mean_(target_mean), target_std_(target_std) {
    if (mean_.size() != std_.size()) throw Error(ErrorKind::Dimension, kModule, "normalizer mean/std widths differ");
    for (double s : std_)
        if (!(s > 0.0)) throw Error(ErrorKind::Data, kModule, "normalizer standard deviation must be positive");
    if (!(target_std_ > 0.0)) throw Error(ErrorKind::Data, kModule, "target standard deviation must be positive");
}

Normalizer Normalizer::fit(std::span<const ad::Tensor> matrices, std::size_t target_column,
                           std::span<const Feature> names) {
    if (matrices.empty()) throw Error(ErrorKind::Data, kModule, "cannot fit a normalizer on no data");
    const std::size_t width = matrices.front().dim(1);
    if (target_column >= width) throw Error(ErrorKind::Dimension, kModule, "target column out of range");
    std::vector<double> sum(width, 0.0);
    std::size_t rows = 0;
    for (const auto& m : matrices) {
        if (m.rank() != 2 || m.dim(1) != width)
            throw Error(ErrorKind::Dimension, kModule, "normalizer inputs have differing widths");
        for (std::size_t r = 0; r < m.dim(0); ++r)
            for (std::size_t c = 0; c < width; ++c) sum[c] += m[r * width + c];
        rows += m.dim(0);
    }
    std::vector<double> mean(width), var(width, 0.0);
    for (std::size_t c = 0; c < width; ++c) mean[c] = sum[c] / static_cast<double>(rows);
    for (const auto& m : matrices)
        for (std::size_t r = 0; r < m.dim(0); ++r)
            for (std::size_t c = 0; c < width; ++c) {
                const double d = m[r * width + c] - mean[c];
                var[c] += d * d;
            }
    std::vector<double> stddev(width);
    for (std::size_t c = 0; c < width; ++c) {
        stddev[c] = std::sqrt(var[c] / static_cast<double>(rows));
        // relative threshold: a column that only varies by rounding noise is constant
        if (!(stddev[c] > 1e-12 * std::max(1.0, std::fabs(mean[c])))) {
            const std::string label = c < names.size() ? std::string(to_string(names[c])) : "#" + std::to_string(c);
            throw Error(ErrorKind::Data, kModule, "feature " + label + " is constant in the training data");
        }
    }
    return Normalizer(mean, stddev, mean[target_column], stddev[target_column]);
}

void Normalizer::check_width(const ad::Tensor& m) const {
    if (m.shape().back() != width())
        throw Error(ErrorKind::Dimension, kModule,
                    "matrix " + ad::to_string(m.shape()) + " does not match normalizer width " +
                        std::to_string(width()));
}

ad::Tensor Normalizer::normalize(const ad::Tensor& matrix) const {
    check_width(matrix);
    ad::Tensor out = matrix;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t c = i % width();
        out[i] = (out[i] - mean_[c]) / std_[c];
    }
    return out;
}

ad::Tensor Normalizer::denormalize(const ad::Tensor& matrix) const {
    check_width(matrix);
    ad::Tensor out = matrix;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t c = i % width();
        out[i] = out[i] * std_[c] + mean_[c];
    }
    return out;
}

nlohmann::json Normalizer::to_json() const {
    return {{"mean", mean_}, {"std", std_}, {"target_mean", target_mean_}, {"target_std", target_std_}};
}

Normalizer Normalizer::from_json(const nlohmann::json& j) {
    try {
        return Normalizer(j.at("mean").get<std::vector<double>>(), j.at("std").get<std::vector<double>>(),
                          j.at("target_mean").get<double>(), j.at("target_std").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Data, kModule, std::string("malformed normalizer: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

std::pair<ad::Tensor, ad::Tensor> WindowedDataset::batch(std::span<const std::size_t> indices) const {
    const std::size_t w = x.dim(1), f = x.dim(2), row = w * f;
    ad::Tensor bx({indices.size(), w, f});
    ad::Tensor by({indices.size()});
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const std::size_t n = indices[i];
        if (n >= size()) throw Error(ErrorKind::Range, kModule, "window index out of range");
        std::copy_n(x.data().begin() + static_cast<std::ptrdiff_t>(n * row), row,
                    bx.data().begin() + static_cast<std::ptrdiff_t>(i * row));
        by[i] = y[n];
    }
    return {std::move(bx), std::move(by)};
}

std::size_t count_windows(std::size_t length, std::size_t window, std::size_t horizon) {
    return length >= window + horizon ? length - window - horizon + 1 : 0;
}

WindowedDataset make_windows(std::span<const Trace> traces, FeatureSet fs, const Normalizer& norm,
                             std::size_t window, std::size_t horizon) {
    if (window == 0 || horizon == 0) throw Error(ErrorKind::Range, kModule, "window and horizon must be >= 1");
    const std::size_t width = feature_count(fs);
    if (norm.width() != width)
        throw Error(ErrorKind::Dimension, kModule, "normalizer width does not match feature set");

    std::vector<double> xs, ys;
    std::vector<std::size_t> ids, starts;
    for (std::size_t ti = 0; ti < traces.size(); ++ti) {
        const Trace& tr = traces[ti];
        if (tr.samples.empty()) continue;
        const ad::Tensor m = norm.normalize(project_features(tr, fs));
        for (auto [begin, end] : tr.segments()) {
            const std::size_t n = count_windows(end - begin, window, horizon);
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t s = begin + k;
                xs.insert(xs.end(), m.data().begin() + static_cast<std::ptrdiff_t>(s * width),
                          m.data().begin() + static_cast<std::ptrdiff_t>((s + window) * width));
                ys.push_back(norm.normalize_target(tr.samples[s + window + horizon - 1].thpt_mbps));
                ids.push_back(ti);
                starts.push_back(s);
            }
        }
    }
    if (ids.empty())
        throw Error(ErrorKind::Data, kModule,
                    "no trace is long enough for a " + std::to_string(window) + "+" + std::to_string(horizon) +
                        " s window");

    WindowedDataset ds;
    ds.x = ad::Tensor({ids.size(), window, width}, std::move(xs));
    ds.y = ad::Tensor({ids.size()}, std::move(ys));
    ds.trace_id = std::move(ids);
    ds.start = std::move(starts);
    ds.window = window;
    ds.horizon = horizon;
    ds.normalizer = norm;
    return ds;
}

std::vector<double> clamp_nonnegative(std::span<const double> predictions) {
    std::vector<double> out(predictions.begin(), predictions.end());
    for (double& v : out) v = std::max(0.0, v);
    return out;
}

}  // namespace ulp::data
