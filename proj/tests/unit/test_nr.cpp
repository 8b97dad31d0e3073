// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ulp/common/error.hpp"
#include "ulp/nr/band.hpp"
#include "ulp/nr/throughput.hpp"

using namespace ulp;
using namespace ulp::nr;

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

double carrier_rate(Duplex d, double bw, int scs) {
    return max_ul_throughput(make_ul_config(d, bw, scs, PrbTable::builtin()));
}

// Independent evaluation of the TS 38.306 approximate data rate with one
// component carrier: 1e-6 * v * Qm * f * Rmax * 12 N / Ts * (1 - OH) * frac,
// Ts = 1e-3 / (14 * 2^mu).
double oracle_mbps(int n_prb, int scs_khz, double fraction) {
    const double mu = std::log2(scs_khz / 15.0);
    const double ts = 1e-3 / (14.0 * std::pow(2.0, mu));
    return 1e-6 * 1 * 8 * 1.0 * (948.0 / 1024.0) * (n_prb * 12.0 / ts) * (1.0 - 0.08) * fraction;
}

}  // namespace

TEST(Arfcn, RasterExamples) {
    EXPECT_EQ(arfcn_to_mhz(0), 0.0);
    EXPECT_EQ(arfcn_to_khz(140000), 700000);
    EXPECT_EQ(arfcn_to_khz(600000), 3000000);
    EXPECT_EQ(arfcn_to_khz(653333), 3799995);
    EXPECT_DOUBLE_EQ(arfcn_to_mhz(653333), 3799.995);
    EXPECT_THROW(arfcn_to_mhz(-1), Error);
    EXPECT_THROW(arfcn_to_mhz(kMaxNrArfcn + 1), Error);
}

TEST(Arfcn, MonotoneAndContinuousAcrossSegments) {
    EXPECT_EQ(arfcn_to_khz(599999), 2999995);
    EXPECT_EQ(arfcn_to_khz(600001), 3000015);
    EXPECT_EQ(arfcn_to_khz(2016667), 24250080);
    for (std::int64_t n = 0; n + 997 <= kMaxNrArfcn; n += 997) EXPECT_LE(arfcn_to_khz(n), arfcn_to_khz(n + 997));
}

TEST(Bands, Classification) {
    EXPECT_EQ(classify_band(700), BandClass::N28_700);
    EXPECT_EQ(classify_band(1842.05), BandClass::N3_1800);
    EXPECT_EQ(classify_band(3400), BandClass::N77_3400);
    EXPECT_EQ(classify_band(3900), BandClass::N77_3900);
    EXPECT_EQ(classify_band(2600), BandClass::Other);
    for (const auto& b : band_table()) EXPECT_EQ(classify_band(arfcn_to_mhz(b.ssb_arfcn)), b.band) << b.id;
    EXPECT_EQ(parse_band_class("n77_3900"), BandClass::N77_3900);
    EXPECT_FALSE(parse_band_class("n1").has_value());
}

TEST(Tdd, UlFraction) {
    EXPECT_EQ(tdd_ul_fraction(TddPattern::default_7_2()), Rational(32, 140));
    EXPECT_EQ(tdd_ul_fraction(TddPattern::parse("UUUU")), Rational(1));
    EXPECT_THROW(TddPattern::parse("DDDS", 10, 4, 0), Error);
    EXPECT_THROW(TddPattern::parse("DDSU", 6, 4, 5), Error);
}

TEST(MaxThroughput, DeployedCarrierRates) {
    EXPECT_EQ(round2(carrier_rate(Duplex::Fdd, 15, 15)), 90.43);
    EXPECT_EQ(round2(carrier_rate(Duplex::Tdd, 100, 30)), 142.86);
    EXPECT_EQ(round2(carrier_rate(Duplex::Tdd, 40, 30)), 55.47);
    EXPECT_EQ(round2(carrier_rate(Duplex::Fdd, 10, 15)), 59.52);
    EXPECT_LT(std::fabs(carrier_rate(Duplex::Fdd, 10, 15) - 59.72) / 59.72, 0.005);
}

TEST(MaxThroughput, MatchesIndependentOracle) {
    EXPECT_NEAR(carrier_rate(Duplex::Fdd, 15, 15), oracle_mbps(79, 15, 1.0), 1e-9);
    EXPECT_NEAR(carrier_rate(Duplex::Tdd, 100, 30), oracle_mbps(273, 30, 32.0 / 140.0), 1e-9);
    EXPECT_NEAR(carrier_rate(Duplex::Tdd, 40, 30), oracle_mbps(106, 30, 32.0 / 140.0), 1e-9);
    EXPECT_NEAR(carrier_rate(Duplex::Fdd, 10, 15), oracle_mbps(52, 15, 1.0), 1e-9);
}

TEST(MaxThroughput, LinearInLayersModulationAndOverhead) {
    auto cfg = make_ul_config(Duplex::Fdd, 15, 15, PrbTable::builtin());
    const Rational base = max_ul_bitrate(cfg);
    auto two = cfg;
    two.layers = 2;
    EXPECT_EQ(max_ul_bitrate(two), base * 2);
    auto qm = cfg;
    qm.modulation_order = 4;
    EXPECT_EQ(max_ul_bitrate(qm) * 2, base);
    auto oh = cfg;
    oh.overhead = Rational(54, 100);  // (1 - 0.54) = 0.5 (1 - 0.08)
    EXPECT_EQ(max_ul_bitrate(oh) * 2, base);
}

TEST(MaxThroughput, InvalidPrbPairIsConfigError) {
    auto cfg = make_ul_config(Duplex::Fdd, 15, 15, PrbTable::builtin());
    cfg.n_prb = 80;
    try {
        max_ul_throughput(cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Config);
    }
    EXPECT_THROW(make_ul_config(Duplex::Fdd, 20, 15, PrbTable::builtin()), Error);
}

TEST(PrbTable, ExtensibleFromJson) {
    const auto path = std::filesystem::temp_directory_path() / "ulp_prb_test.json";
    std::ofstream(path) << R"([{"scs_khz": 15, "bw_mhz": 20, "n_prb": 106}])";
    PrbTable t = PrbTable::builtin();
    t.load_json(path);
    EXPECT_EQ(t.lookup(15, 20), 106);
    EXPECT_EQ(t.size(), 5u);
    std::filesystem::remove(path);
}

TEST(BandCap, MatchesTable) {
    EXPECT_EQ(round2(band_cap_mbps(BandClass::N3_1800)), 90.43);
    EXPECT_EQ(round2(band_cap_mbps(BandClass::N77_3900)), 142.86);
    EXPECT_THROW(band_cap_mbps(BandClass::Other), Error);
}
