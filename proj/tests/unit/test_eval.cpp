// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ulp/common/error.hpp"
#include "ulp/common/rng.hpp"
#include "ulp/eval/metrics.hpp"
#include "ulp/eval/train.hpp"
#include "ulp/synth/generator.hpp"

using namespace ulp;
using namespace ulp::eval;

namespace {

data::Trace throughput_trace(const std::vector<double>& thpt, const std::string& name = "t") {
    data::Trace t;
    t.meta.name = name;
    t.meta.scenario = "unit";
    for (std::size_t i = 0; i < thpt.size(); ++i) {
        data::TelemetrySample s;
        s.t = static_cast<std::int64_t>(i);
        s.rsrp_dbm = -90.0 - static_cast<double>(i % 4);
        s.rsrq_db = -14.0 + static_cast<double>(i % 3);
        s.sinr_db = 10.0 + static_cast<double>(i % 5);
        s.ssb_arfcn = i % 2 ? 627328 : 368410;
        s.thpt_mbps = thpt[i];
        t.samples.push_back(s);
    }
    return t;
}

model::ModelSpec small(model::ModelKind kind) {
    model::ModelSpec s;
    s.kind = kind;
    s.convlstm_channels = 4;
    s.convlstm_fc = 8;
    s.lstm_hidden = 6;
    s.lstm_fc = 6;
    s.cnn_channels = 3;
    s.cnn_lstm_hidden = 6;
    s.tf_model_dim = 8;
    s.tf_heads = 2;
    s.tf_ff_dim = 8;
    return s;
}

std::vector<data::Trace> corpus(std::size_t n, std::int64_t duration) {
    std::vector<data::Trace> out;
    for (std::size_t i = 0; i < n; ++i) {
        auto s = synth::preset("train");
        s.seed = 500 + i;
        s.duration_s = duration;
        out.push_back(synth::synth_trace(s));
    }
    return out;
}

}  // namespace

TEST(Rmse, Examples) {
    const std::vector<double> a{1, 2, 3};
    EXPECT_EQ(rmse(a, a), 0.0);
    EXPECT_NEAR(rmse(std::vector<double>{0, 0}, std::vector<double>{3, 4}), 3.5355, 5e-5);
    EXPECT_EQ(rmse(std::vector<double>{0, 0}, std::vector<double>{3, 4}), std::sqrt(12.5));
    EXPECT_EQ(rmse(std::vector<double>{5}, std::vector<double>{3}), 2.0);
    EXPECT_THROW(rmse(std::vector<double>{1}, std::vector<double>{1, 2}), Error);
}

TEST(Rmse, SymmetricAndNonNegative) {
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> p(7), t(7);
        for (auto& v : p) v = rng.uniform(0, 50);
        for (auto& v : t) v = rng.uniform(0, 50);
        EXPECT_EQ(rmse(p, t), rmse(t, p));
        EXPECT_GT(rmse(p, t), 0.0);
    }
}

TEST(CumulativeMape, Examples) {
    EXPECT_EQ(cumulative_mape(std::vector<double>{10, 10}, std::vector<double>{10, 30}), 50.0);
    EXPECT_EQ(cumulative_mape(std::vector<double>{5, 15}, std::vector<double>{15, 5}), 0.0);
    try {
        cumulative_mape(std::vector<double>{1, 2}, std::vector<double>{0, 0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Numeric);
    }
    // interval scales both volumes
    EXPECT_EQ(cumulative_mape(std::vector<double>{10, 10}, std::vector<double>{10, 30}, 2.0), 50.0);
}

TEST(CumulativeMape, DependsOnlyOnSums) {
    Rng rng(9);
    for (int i = 0; i < 30; ++i) {
        std::vector<double> p(9), t(9);
        for (auto& v : p) v = std::floor(rng.uniform(0, 40));
        for (auto& v : t) v = std::floor(rng.uniform(1, 40));
        const double base = cumulative_mape(p, t);
        std::vector<double> ps = p, ts = t;
        std::reverse(ps.begin(), ps.end());
        std::rotate(ts.begin(), ts.begin() + 4, ts.end());
        EXPECT_EQ(cumulative_mape(ps, ts), base);
    }
}

TEST(Score, AccuracyIsComplement) {
    Rng rng(12);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> p(10), t(10);
        for (auto& v : p) v = rng.uniform(0, 30);
        for (auto& v : t) v = rng.uniform(0, 30);
        const TraceReport r = score("x", "y", p, t);
        EXPECT_EQ(r.accuracy_pct, 100.0 - r.cum_mape_pct);
        EXPECT_EQ(r.n_points, 10u);
    }
}

TEST(Aggregate, Weighting) {
    TraceReport a, b;
    a.rmse_mbps = 1;
    a.cum_mape_pct = 2;
    a.n_points = 1;
    b.rmse_mbps = 3;
    b.cum_mape_pct = 6;
    b.n_points = 3;
    const std::vector<TraceReport> both{a, b};
    EXPECT_EQ(aggregate(both).rmse_mbps, 2.5);
    EXPECT_EQ(aggregate(both).n_points, 4u);
    EXPECT_EQ(aggregate(both, std::vector<double>{1, 1}).rmse_mbps, 2.0);
    EXPECT_EQ(aggregate(both, std::vector<double>{1, 1}).cum_mape_pct, 4.0);
    const TraceReport one = aggregate(std::vector<TraceReport>{b});
    EXPECT_EQ(one.rmse_mbps, 3.0);
    EXPECT_EQ(one.cum_mape_pct, 6.0);
    EXPECT_EQ(one.accuracy_pct, b.accuracy_pct);
    EXPECT_THROW(aggregate(std::vector<TraceReport>{}), Error);
}

TEST(Aggregate, EqualWeightsIsUnweightedMean) {
    Rng rng(4);
    std::vector<TraceReport> rs(6);
    double sum = 0.0;
    for (auto& r : rs) {
        r.rmse_mbps = rng.uniform(0, 10);
        r.n_points = 17;
        sum += r.rmse_mbps;
    }
    EXPECT_NEAR(aggregate(rs).rmse_mbps, sum / 6.0, 1e-12);
}

TEST(Persistence, Examples) {
    const auto flat = throughput_trace(std::vector<double>(12, 7.5));
    EXPECT_EQ(rmse(persistence_baseline(flat), aligned_truth(flat)), 0.0);
    std::vector<double> alt;
    for (int i = 0; i < 20; ++i) alt.push_back(i % 2 ? 10.0 : 0.0);
    const auto tr = throughput_trace(alt);
    EXPECT_EQ(rmse(persistence_baseline(tr), aligned_truth(tr)), 10.0);
    EXPECT_EQ(persistence_baseline(tr).size(), 15u);
    EXPECT_THROW(persistence_baseline(throughput_trace(std::vector<double>(5, 1.0))), Error);
}

TEST(PredictTrace, LengthsClampingDeterminism) {
    const auto tr = throughput_trace({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    const auto ms = small(model::ModelKind::ConvLstm);
    ad::ParamStore p = model::init_params(ms);
    p.at("out.b")[0] = -5.0;
    const model::TrainedModel m(ms, p, data::Normalizer(std::vector<double>(5, 0.0), std::vector<double>(5, 1.0), 1, 1),
                                {});
    const auto pred = predict_trace(m, tr);
    ASSERT_EQ(pred.size(), 5u);
    for (double v : pred) EXPECT_GE(v, 0.0);
    EXPECT_EQ(pred, predict_trace(m, tr));
    EXPECT_EQ(pred.size(), persistence_baseline(tr).size());
    EXPECT_THROW(predict_trace(m, throughput_trace({1, 2, 3, 4, 5})), Error);
}

TEST(Train, SixtyFourWindowsTwoSteps) {
    // 69 s gives exactly 64 windows
    const std::vector<data::Trace> one = corpus(1, 69);
    const auto ds = prepare_dataset(one, data::FeatureSet::AndroidApi);
    ASSERT_EQ(ds.size(), 64u);
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.validation_fraction = 0.0;
    const auto m = train(model::build(small(model::ModelKind::Lstm)), ds, cfg);
    EXPECT_EQ(m.train_config().at("optimizer_steps"), 2);
    EXPECT_EQ(m.history().size(), 1u);
    cfg.batch_size = 30;  // 30 + 30 + 4
    EXPECT_EQ(train(model::build(small(model::ModelKind::Lstm)), ds, cfg).train_config().at("optimizer_steps"), 3);
}

TEST(Train, HistoryLengthDeterminismAndProgress) {
    const auto traces = corpus(4, 200);
    const auto ds = prepare_dataset(traces, data::FeatureSet::AndroidApi);
    for (auto kind : {model::ModelKind::ConvLstm, model::ModelKind::Lstm, model::ModelKind::CnnLstm,
                      model::ModelKind::Transformer}) {
        TrainConfig cfg;
        cfg.epochs = 3;
        std::size_t calls = 0;
        const auto a = train(model::build(small(kind)), ds, cfg, [&](const EpochStats& s) {
            ++calls;
            EXPECT_TRUE(s.validation_loss.has_value());
        });
        const auto b = train(model::build(small(kind)), ds, cfg);
        EXPECT_EQ(a.history().size(), 3u);
        EXPECT_EQ(calls, 3u);
        EXPECT_EQ(a.history(), b.history());
        EXPECT_EQ(a.params(), b.params());
        EXPECT_LT(a.history().back(), a.history().front()) << model::to_string(kind);
    }
}

TEST(Train, DefaultsAndValidation) {
    EXPECT_EQ(TrainConfig::defaults(model::ModelKind::ConvLstm).epochs, 10u);
    EXPECT_EQ(TrainConfig::defaults(model::ModelKind::Lstm).epochs, 125u);
    EXPECT_EQ(TrainConfig::defaults(model::ModelKind::CnnLstm).epochs, 100u);
    EXPECT_EQ(TrainConfig::defaults(model::ModelKind::Transformer).epochs, 150u);
    EXPECT_EQ(TrainConfig{}.batch_size, 32u);
    TrainConfig bad;
    bad.epochs = 0;
    EXPECT_THROW(bad.validate(), Error);
    bad = TrainConfig{};
    bad.batch_size = 0;
    EXPECT_THROW(bad.validate(), Error);
}

TEST(Train, DivergenceIsNumericErrorWithContext) {
    const auto traces = corpus(2, 120);
    const auto ds = prepare_dataset(traces, data::FeatureSet::AndroidApi);
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.optimizer.lr = 1e300;
    try {
        train(model::build(small(model::ModelKind::Lstm)), ds, cfg);
        FAIL() << "expected divergence";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Numeric);
        EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos) << e.what();
    }
}

TEST(Evaluate, ReportInvariantsAndGroups) {
    const auto traces = corpus(3, 150);
    const auto ds = prepare_dataset(traces, data::FeatureSet::AndroidApi);
    TrainConfig cfg;
    cfg.epochs = 2;
    const auto m = train(model::build(small(model::ModelKind::ConvLstm)), ds, cfg);
    const Groups groups{{"pair", {traces[0].meta.name, traces[2].meta.name}}, {"all-train", {"train"}}};
    const EvalReport r = evaluate(m, traces, "seen", groups, {{"run", "unit"}});
    ASSERT_EQ(r.traces.size(), 3u);
    for (const auto& t : r.traces) {
        EXPECT_EQ(t.accuracy_pct, 100.0 - t.cum_mape_pct);
        EXPECT_EQ(t.n_points, 145u);
    }
    EXPECT_EQ(r.overall.n_points, 435u);
    ASSERT_EQ(r.groups.size(), 2u);
    EXPECT_EQ(r.groups[1].n_points, 290u);  // "pair" sorts after "all-train"
    EXPECT_EQ(r.to_json().dump(), evaluate(m, traces, "seen", groups, {{"run", "unit"}}).to_json().dump());
    EXPECT_THROW(evaluate(m, traces, "seen", Groups{{"none", {"metro"}}}), Error);
}
