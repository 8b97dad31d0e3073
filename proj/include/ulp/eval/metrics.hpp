// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ulp/data/trace.hpp"
#include "ulp/model/predictor.hpp"

namespace ulp::eval {

/// sqrt(mean((p - t)^2)). Throws a dimension error on length mismatch or
/// empty input.
double rmse(std::span<const double> pred, std::span<const double> truth);

/// 100 |sum(p) - sum(t)| / sum(t), volumes taken as rate * interval.
/// Throws a numeric error when the true volume is zero.
double cumulative_mape(std::span<const double> pred, std::span<const double> truth, double interval_s = 1.0);

/// Teacher-forced one-step predictions in Mbps, one per window of the
/// trace (T - 5 for a gap-free trace), clamped at zero.
std::vector<double> predict_trace(const model::TrainedModel& model, const data::Trace& trace);

/// Ground-truth throughput aligned with predict_trace.
std::vector<double> aligned_truth(const data::Trace& trace, std::size_t window = data::kDefaultWindow);

/// Timestamp of each target second, aligned with predict_trace.
std::vector<std::int64_t> target_times(const data::Trace& trace, std::size_t window = data::kDefaultWindow);

/// The previous second's throughput, aligned with predict_trace.
std::vector<double> persistence_baseline(const data::Trace& trace, std::size_t window = data::kDefaultWindow);

struct TraceReport {
    std::string name;
    std::string scenario;
    double rmse_mbps = 0.0;
    double cum_mape_pct = 0.0;
    double accuracy_pct = 100.0;  // 100 - cum_mape_pct
    double persistence_rmse_mbps = 0.0;
    std::size_t n_points = 0;

    nlohmann::json to_json() const;
};

/// Metrics of one prediction series.
TraceReport score(std::string name, std::string scenario, std::span<const double> pred, std::span<const double> truth,
                  std::span<const double> persistence = {});

/// Weighted mean of each metric (weights default to n_points); accuracy is
/// recomputed as 100 - mape and n_points is summed.
TraceReport aggregate(std::span<const TraceReport> reports, std::span<const double> weights = {},
                      std::string name = "weighted");

/// Named groups of "similar" traces. A member matches a trace's name or its
/// scenario label.
using Groups = std::map<std::string, std::vector<std::string>>;

struct EvalReport {
    nlohmann::json config;
    std::string model_kind;
    std::string feature_set;
    std::string tag;  // "seen", "unseen", ...
    std::vector<TraceReport> traces;
    TraceReport overall;
    std::vector<TraceReport> groups;

    /// Stable keys; the same report always serializes to the same bytes.
    nlohmann::json to_json() const;
};

TraceReport evaluate_trace(const model::TrainedModel& model, const data::Trace& trace);

/// Throws a configuration error for a group that matches no trace.
EvalReport evaluate(const model::TrainedModel& model, std::span<const data::Trace> traces, std::string tag = "unseen",
                    const Groups& groups = {}, nlohmann::json config = nlohmann::json::object());

}  // namespace ulp::eval
