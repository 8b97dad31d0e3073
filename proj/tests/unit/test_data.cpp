// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sstream>

#include "ulp/common/error.hpp"
#include "ulp/common/rng.hpp"
#include "ulp/data/csv.hpp"
#include "ulp/data/dataset.hpp"

using namespace ulp;
using namespace ulp::data;

namespace {

const char* kHeader = "t,rsrp_dbm,rsrq_db,sinr_db,ssb_arfcn,thpt_mbps\n";

std::string rows(int n, int t0 = 0) {
    std::string s;
    for (int i = 0; i < n; ++i)
        s += std::to_string(t0 + i) + ",-90." + std::to_string(i) + ",-14." + std::to_string(i % 7) + ",12." + std::to_string(i % 3) + "," + (i % 2 ? "368410" : "627328") + "," + std::to_string(10 + i) + "\n";
    return s;
}

Trace parse(const std::string& text, std::optional<FeatureSet> fs = std::nullopt) {
    std::istringstream in(text);
    return parse_trace_csv(in, fs, "test.csv");
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::Usage;
}

Trace synthetic(std::size_t n, std::uint64_t seed = 1) {
    Rng rng(seed);
    Trace t;
    t.meta.name = "s" + std::to_string(seed);
    for (std::size_t i = 0; i < n; ++i) {
        TelemetrySample s;
        s.t = static_cast<std::int64_t>(i);
        s.rsrp_dbm = rng.uniform(-110, -70);
        s.rsrq_db = rng.uniform(-20, -10);
        s.sinr_db = rng.uniform(0, 25);
        s.ssb_arfcn = rng.bernoulli(0.5) ? 627328 : 368410;
        s.thpt_mbps = rng.uniform(0, 50);
        t.samples.push_back(s);
    }
    return t;
}

}  // namespace

TEST(Csv, WellFormedFile) {
    const Trace t = parse(std::string(kHeader) + rows(10), FeatureSet::AndroidApi);
    EXPECT_EQ(t.samples.size(), 10u);
    EXPECT_EQ(t.samples[3].rsrp_dbm, -90.3);
    EXPECT_EQ(t.samples[9].thpt_mbps, 19.0);
}

TEST(Csv, MissingColumnForFeatureSetNamesIt) {
    try {
        parse(std::string(kHeader) + rows(10), FeatureSet::Full);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Schema);
        EXPECT_NE(std::string(e.what()).find("rb_alloc"), std::string::npos);
    }
}

TEST(Csv, DuplicateTimestampReportsLine) {
    try {
        parse(std::string(kHeader) + rows(3) + rows(1, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Data);
        EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos) << e.what();
    }
}

TEST(Csv, Rejections) {
    EXPECT_EQ(kind_of([] { parse("t,rsrp_dbm,rsrq_db,sinr_db,thpt_mbps\n0,-90,-14,10,5\n"); }), ErrorKind::Schema);
    EXPECT_EQ(kind_of([] { parse("t,rsrp_dbm,rsrq_db,sinr_db,ssb_arfcn,thpt_mbps,colour\n"); }), ErrorKind::Schema);
    EXPECT_EQ(kind_of([] { parse(kHeader); }), ErrorKind::Data);
    EXPECT_EQ(kind_of([] { parse(std::string(kHeader) + "0,-90,-14,10,627328,-1\n"); }), ErrorKind::Data);
    EXPECT_EQ(kind_of([] { parse(std::string(kHeader) + "0,-20,-14,10,627328,1\n"); }), ErrorKind::Data);
    EXPECT_EQ(kind_of([] { parse(std::string(kHeader) + rows(2) + rows(2, 3)); }), ErrorKind::Data);
    EXPECT_EQ(kind_of([] { parse(std::string(kHeader) + "0,abc,-14,10,627328,1\n"); }), ErrorKind::Data);
}

TEST(Csv, GapRowsSplitSegments) {
    const Trace t = parse(std::string(kHeader) + rows(7) + "7,GAP\n" + rows(6, 8));
    EXPECT_EQ(t.gaps, std::vector<std::int64_t>{7});
    ASSERT_EQ(t.segments().size(), 2u);
    const Normalizer norm = Normalizer::fit(std::vector<ad::Tensor>{project_features(t, FeatureSet::AndroidApi)}, 4);
    const auto ds = make_windows(std::span(&t, 1), FeatureSet::AndroidApi, norm);
    EXPECT_EQ(ds.size(), 2u + 1u);
}

TEST(Csv, RoundTripIsFieldIdentical) {
    Trace t = synthetic(20);
    t.meta.scenario = "unit";
    t.meta.source = "test";
    for (auto& s : t.samples) {
        s.rb_alloc = 12;
        s.pucch_tx_dbm = 3.25;
        s.speed_kmh = 1.0 / 3.0;
    }
    t.samples.erase(t.samples.begin() + 5);
    for (std::size_t i = 5; i < t.samples.size(); ++i) EXPECT_EQ(t.samples[i].t, static_cast<std::int64_t>(i + 1));
    t.gaps = {5};
    std::stringstream ss;
    write_trace_csv(ss, t);
    const Trace back = parse_trace_csv(ss, std::nullopt, "rt");
    EXPECT_EQ(back, t);
}

TEST(Features, Widths) {
    EXPECT_EQ(feature_count(FeatureSet::AndroidApi), 5u);
    EXPECT_EQ(feature_count(FeatureSet::Full), 9u);
    EXPECT_EQ(feature_count(FeatureSet::Sure), 4u);
    const Trace t = synthetic(8);
    const auto m = project_features(t, FeatureSet::AndroidApi);
    EXPECT_EQ(m.dim(1), 5u);
    EXPECT_EQ(m[0 * 5 + target_column(FeatureSet::AndroidApi)], t.samples[0].thpt_mbps);
    EXPECT_EQ(kind_of([&] { project_features(t, FeatureSet::Sure); }), ErrorKind::Schema);
}

TEST(Features, ArfcnBecomesMegahertz) {
    const Trace t = parse(std::string(kHeader) + rows(6));
    const auto m = project_features(t, FeatureSet::AndroidApi);
    EXPECT_DOUBLE_EQ(m[3], 3409.92);
}

TEST(Normalizer, HandZScore) {
    const Normalizer n = Normalizer::fit(std::vector<ad::Tensor>{ad::Tensor({2, 2}, {0, 5, 2, 7})}, 1);
    EXPECT_EQ(n.mean()[0], 1.0);
    EXPECT_EQ(n.stddev()[0], 1.0);
    const auto z = n.normalize(ad::Tensor({2, 2}, {0, 5, 2, 7}));
    EXPECT_EQ(z[0], -1.0);
    EXPECT_EQ(z[2], 1.0);
    EXPECT_EQ(n.target_mean(), 6.0);
    EXPECT_EQ(n.denormalize_target(n.normalize_target(3.5)), 3.5);
}

TEST(Normalizer, StandardizedDataUnchangedAndInvertible) {
    const ad::Tensor m({4, 1}, {-1, 1, -1, 1});
    const Normalizer n = Normalizer::fit(std::vector<ad::Tensor>{m}, 0);
    const auto z = n.normalize(m);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(z[i], m[i], 1e-15);
    Rng rng(2);
    ad::Tensor r({5, 1});
    for (auto& v : r.data()) v = rng.uniform(-50, 50);
    const auto back = n.denormalize(n.normalize(r));
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(back[i], r[i], 1e-12);
    EXPECT_EQ(Normalizer::from_json(n.to_json()), n);
}

TEST(Normalizer, ConstantColumnRejected) {
    EXPECT_EQ(kind_of([] { Normalizer::fit(std::vector<ad::Tensor>{ad::Tensor({3, 2}, {1, 4, 2, 4, 3, 4})}, 0); }),
              ErrorKind::Data);
}

TEST(Windows, Counting) {
    EXPECT_EQ(count_windows(7), 2u);
    EXPECT_EQ(count_windows(5), 0u);
    EXPECT_EQ(count_windows(6), 1u);

    const std::vector<Trace> two{synthetic(6, 1), synthetic(6, 2)};
    std::vector<ad::Tensor> ms;
    for (const auto& t : two) ms.push_back(project_features(t, FeatureSet::AndroidApi));
    const Normalizer norm = Normalizer::fit(ms, 4);
    const auto ds = make_windows(two, FeatureSet::AndroidApi, norm);
    ASSERT_EQ(ds.size(), 2u);
    EXPECT_EQ(ds.trace_id, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(ds.x.shape(), (ad::Shape{2, 5, 5}));
    EXPECT_DOUBLE_EQ(norm.denormalize_target(ds.y[1]), two[1].samples[5].thpt_mbps);

    const std::vector<Trace> short_one{synthetic(5, 3)};
    EXPECT_EQ(kind_of([&] { make_windows(short_one, FeatureSet::AndroidApi, norm); }), ErrorKind::Data);
}

TEST(Windows, CountPropertyOverRandomLengths) {
    Rng rng(17);
    for (int round = 0; round < 20; ++round) {
        std::vector<Trace> traces;
        std::size_t expected = 0;
        for (int i = 0; i < 4; ++i) {
            const std::size_t len = 6 + rng.below(20);
            traces.push_back(synthetic(len, rng.next_u64()));
            expected += len - 5;
        }
        std::vector<ad::Tensor> ms;
        for (const auto& t : traces) ms.push_back(project_features(t, FeatureSet::AndroidApi));
        const auto ds = make_windows(traces, FeatureSet::AndroidApi, Normalizer::fit(ms, 4));
        EXPECT_EQ(ds.size(), expected);
    }
}

TEST(Clamp, Examples) {
    EXPECT_EQ(clamp_nonnegative(std::vector<double>{-5, 10}), (std::vector<double>{0, 10}));
    EXPECT_EQ(clamp_nonnegative(std::vector<double>{1, 2}), (std::vector<double>{1, 2}));
    EXPECT_EQ(clamp_nonnegative(std::vector<double>{-1, -2}), (std::vector<double>{0, 0}));
}
