// SPDX-License-Identifier: Apache-2.0
#include "ulp/eval/metrics.hpp"

#include <cmath>
#include <numeric>

#include "ulp/common/error.hpp"

namespace ulp::eval {

namespace {

constexpr const char* kModule = "train-eval";

void check_lengths(std::span<const double> a, std::span<const double> b, const char* what) {
    if (a.size() != b.size())
        throw Error(ErrorKind::Dimension, kModule,
                    std::string(what) + ": " + std::to_string(a.size()) + " predictions vs " +
                        std::to_string(b.size()) + " truths");
    if (a.empty()) throw Error(ErrorKind::Dimension, kModule, std::string(what) + ": empty series");
}

// Sample indices (into trace.samples) of every window target.
std::vector<std::size_t> target_indices(const data::Trace& trace, std::size_t window) {
    std::vector<std::size_t> out;
    for (auto [begin, end] : trace.segments())
        for (std::size_t k = 0; k < data::count_windows(end - begin, window); ++k) out.push_back(begin + k + window);
    if (out.empty())
        throw Error(ErrorKind::Data, kModule,
                    "trace '" + trace.meta.name + "' is too short: needs more than " + std::to_string(window) +
                        " consecutive seconds");
    return out;
}

}  // namespace

double rmse(std::span<const double> pred, std::span<const double> truth) {
    check_lengths(pred, truth, "rmse");
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) s += (pred[i] - truth[i]) * (pred[i] - truth[i]);
    return std::sqrt(s / static_cast<double>(pred.size()));
}

double cumulative_mape(std::span<const double> pred, std::span<const double> truth, double interval_s) {
    check_lengths(pred, truth, "cumulative_mape");
    if (!(interval_s > 0.0)) throw Error(ErrorKind::Range, kModule, "interval must be positive");
    const double p = std::accumulate(pred.begin(), pred.end(), 0.0) * interval_s;
    const double t = std::accumulate(truth.begin(), truth.end(), 0.0) * interval_s;
    if (!(t > 0.0))
        throw Error(ErrorKind::Numeric, kModule, "cumulative MAPE is undefined when no data was transferred");
    return 100.0 * std::fabs(p - t) / t;
}

std::vector<double> predict_trace(const model::TrainedModel& m, const data::Trace& trace) {
    const std::size_t w = m.spec().window;
    const auto targets = target_indices(trace, w);
    const ad::Tensor feats = m.normalizer().normalize(data::project_features(trace, m.spec().feature_set));
    const std::size_t f = feats.dim(1);
    ad::Tensor x({targets.size(), w, f});
    for (std::size_t n = 0; n < targets.size(); ++n)
        std::copy_n(feats.data().begin() + static_cast<std::ptrdiff_t>((targets[n] - w) * f), w * f,
                    x.data().begin() + static_cast<std::ptrdiff_t>(n * w * f));
    return model::predict_batch(m, x);
}

std::vector<double> aligned_truth(const data::Trace& trace, std::size_t window) {
    std::vector<double> out;
    for (std::size_t i : target_indices(trace, window)) out.push_back(trace.samples[i].thpt_mbps);
    return out;
}

std::vector<std::int64_t> target_times(const data::Trace& trace, std::size_t window) {
    std::vector<std::int64_t> out;
    for (std::size_t i : target_indices(trace, window)) out.push_back(trace.samples[i].t);
    return out;
}

std::vector<double> persistence_baseline(const data::Trace& trace, std::size_t window) {
    std::vector<double> out;
    for (std::size_t i : target_indices(trace, window)) out.push_back(trace.samples[i - 1].thpt_mbps);
    return out;
}

nlohmann::json TraceReport::to_json() const {
    return {{"name", name},
            {"scenario", scenario},
            {"rmse_mbps", rmse_mbps},
            {"cum_mape_pct", cum_mape_pct},
            {"accuracy_pct", accuracy_pct},
            {"persistence_rmse_mbps", persistence_rmse_mbps},
            {"n_points", n_points}};
}

TraceReport score(std::string name, std::string scenario, std::span<const double> pred, std::span<const double> truth,
                  std::span<const double> persistence) {
    TraceReport r;
    r.name = std::move(name);
    r.scenario = std::move(scenario);
    r.rmse_mbps = rmse(pred, truth);
    r.cum_mape_pct = cumulative_mape(pred, truth);
    r.accuracy_pct = 100.0 - r.cum_mape_pct;
    if (!persistence.empty()) r.persistence_rmse_mbps = rmse(persistence, truth);
    r.n_points = pred.size();
    return r;
}

TraceReport aggregate(std::span<const TraceReport> reports, std::span<const double> weights, std::string name) {
    if (reports.empty()) throw Error(ErrorKind::Contract, kModule, "aggregate needs at least one report");
    if (!weights.empty() && weights.size() != reports.size())
        throw Error(ErrorKind::Dimension, kModule, "one weight per report expected");
    double wsum = 0.0, rm = 0.0, mp = 0.0, pr = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const double w = weights.empty() ? static_cast<double>(reports[i].n_points) : weights[i];
        if (!(w >= 0.0)) throw Error(ErrorKind::Range, kModule, "aggregate weights must be >= 0");
        wsum += w;
        rm += w * reports[i].rmse_mbps;
        mp += w * reports[i].cum_mape_pct;
        pr += w * reports[i].persistence_rmse_mbps;
        n += reports[i].n_points;
    }
    if (!(wsum > 0.0)) throw Error(ErrorKind::Range, kModule, "aggregate weights sum to zero");
    if (reports.size() == 1) {
        TraceReport r = reports.front();
        r.name = std::move(name);
        return r;
    }
    TraceReport r;
    r.name = std::move(name);
    r.scenario = "aggregate";
    r.rmse_mbps = rm / wsum;
    r.cum_mape_pct = mp / wsum;
    r.accuracy_pct = 100.0 - r.cum_mape_pct;
    r.persistence_rmse_mbps = pr / wsum;
    r.n_points = n;
    return r;
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json per_trace = nlohmann::json::array();
    for (const auto& t : traces) per_trace.push_back(t.to_json());
    nlohmann::json grp = nlohmann::json::array();
    for (const auto& g : groups) grp.push_back(g.to_json());
    return {{"report", "ulp-eval"},
            {"version", 1},
            {"config", config},
            {"model_kind", model_kind},
            {"feature_set", feature_set},
            {"tag", tag},
            {"traces", per_trace},
            {"groups", grp},
            {"overall", overall.to_json()}};
}

TraceReport evaluate_trace(const model::TrainedModel& m, const data::Trace& trace) {
    const auto pred = predict_trace(m, trace);
    const auto truth = aligned_truth(trace, m.spec().window);
    const auto base = persistence_baseline(trace, m.spec().window);
    return score(trace.meta.name, trace.meta.scenario, pred, truth, base);
}

EvalReport evaluate(const model::TrainedModel& m, std::span<const data::Trace> traces, std::string tag,
                    const Groups& groups, nlohmann::json config) {
    if (traces.empty()) throw Error(ErrorKind::Data, kModule, "no traces to evaluate");
    EvalReport r;
    r.config = std::move(config);
    r.model_kind = std::string(model::to_string(m.spec().kind));
    r.feature_set = std::string(data::to_string(m.spec().feature_set));
    r.tag = std::move(tag);
    for (const auto& t : traces) r.traces.push_back(evaluate_trace(m, t));
    r.overall = aggregate(r.traces, {}, "weighted");
    for (const auto& [name, members] : groups) {
        std::vector<TraceReport> picked;
        for (const auto& t : r.traces)
            if (std::find(members.begin(), members.end(), t.name) != members.end() ||
                std::find(members.begin(), members.end(), t.scenario) != members.end())
                picked.push_back(t);
        if (picked.empty()) throw Error(ErrorKind::Config, kModule, "group '" + name + "' matches no trace");
        r.groups.push_back(aggregate(picked, {}, name));
    }
    return r;
}

}  // namespace ulp::eval
