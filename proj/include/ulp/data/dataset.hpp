// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "json.hpp"
#include "ulp/ad/tensor.hpp"
#include "ulp/data/trace.hpp"

namespace ulp::data {

inline constexpr std::size_t kDefaultWindow = 5;
inline constexpr std::size_t kDefaultHorizon = 1;

/// One row per sample (gaps skipped), columns in the feature set's order.
/// The SSB ARFCN column is converted to carrier frequency in MHz.
/// Throws a schema error if a sample lacks an optional field the set needs.
ad::Tensor project_features(const Trace& trace, FeatureSet fs);
std::vector<double> project_sample(const TelemetrySample& s, FeatureSet fs);

/// Per-feature z-score with population standard deviation, plus the
/// statistics of the throughput target.
class Normalizer {
public:
    Normalizer() = default;
    Normalizer(std::vector<double> mean, std::vector<double> stddev, double target_mean, double target_std);

    /// Fits over the rows of every matrix. `target_column` selects the
    /// column whose statistics also normalize the prediction target.
    /// Throws a data error for a constant column.
    static Normalizer fit(std::span<const ad::Tensor> matrices, std::size_t target_column,
                          std::span<const Feature> names = {});

    std::size_t width() const noexcept { return mean_.size(); }
    const std::vector<double>& mean() const noexcept { return mean_; }
    const std::vector<double>& stddev() const noexcept { return std_; }
    double target_mean() const noexcept { return target_mean_; }
    double target_std() const noexcept { return target_std_; }

    ad::Tensor normalize(const ad::Tensor& matrix) const;
    ad::Tensor denormalize(const ad::Tensor& matrix) const;
    double normalize_target(double mbps) const { return (mbps - target_mean_) / target_std_; }
    double denormalize_target(double z) const { return z * target_std_ + target_mean_; }

    nlohmann::json to_json() const;
    static Normalizer from_json(const nlohmann::json& j);

    friend bool operator==(const Normalizer&, const Normalizer&) = default;

private:
    void check_width(const ad::Tensor& m) const;

    std::vector<double> mean_;
    std::vector<double> std_;
    double target_mean_ = 0.0;
    double target_std_ = 1.0;
};

/// Sliding windows of W normalized feature rows; the target is the
/// normalized throughput `horizon` seconds after the window's last row.
struct WindowedDataset {
    ad::Tensor x;  // [N, W, F]
    ad::Tensor y;  // [N]
    std::vector<std::size_t> trace_id;
    std::vector<std::size_t> start;  // sample index of the first window row
    std::size_t window = kDefaultWindow;
    std::size_t horizon = kDefaultHorizon;
    Normalizer normalizer;  // the statistics x and y were scaled with

    std::size_t size() const noexcept { return trace_id.size(); }
    std::size_t features() const { return x.dim(2); }
    /// Rows `indices` as a batch ([B, W, F] and [B]).
    std::pair<ad::Tensor, ad::Tensor> batch(std::span<const std::size_t> indices) const;
};

/// Windows available in a gap-free run of `length` seconds.
std::size_t count_windows(std::size_t length, std::size_t window = kDefaultWindow,
                          std::size_t horizon = kDefaultHorizon);

/// Windows never cross a trace boundary or a gap. Throws a data error when
/// no trace is long enough to yield a single window.
WindowedDataset make_windows(std::span<const Trace> traces, FeatureSet fs, const Normalizer& norm,
                             std::size_t window = kDefaultWindow, std::size_t horizon = kDefaultHorizon);

/// max(0, x) elementwise; throughput cannot be negative.
std::vector<double> clamp_nonnegative(std::span<const double> predictions);

}  // namespace ulp::data
