// SPDX-License-Identifier: Apache-2.0
#include "ulp/synth/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ulp/common/rng.hpp"
#include "ulp/nr/throughput.hpp"

namespace ulp::synth {

double model::efficiency(double sinr_db) {
    return 1.0 / (1.0 + std::exp(-(sinr_db - kEfficiencyMidpointDb) / kEfficiencyWidthDb));
}

namespace {

struct BandState {
    nr::BandInfo info;
    double cap_mbps;
    double ul_slots_per_s;  // slots that carry any UL symbol
    std::int64_t n_prb;
};

BandState band_state(nr::BandClass b) {
    const nr::BandInfo info = *nr::band_info(b);
    const double slots = 1000.0 * info.scs_khz / 15.0;
    double ul_slots = slots;
    if (info.duplex == nr::Duplex::Tdd) {
        const auto pattern = nr::TddPattern::default_7_2();
        const auto n = std::count_if(pattern.slots.begin(), pattern.slots.end(),
                                     [](nr::SlotKind k) { return k != nr::SlotKind::Downlink; });
        ul_slots = slots * static_cast<double>(n) / static_cast<double>(pattern.slots.size());
    }
    const auto prbs = nr::PrbTable::builtin().lookup(info.scs_khz, info.bandwidth_mhz);
    return {info, nr::band_cap_mbps(b), ul_slots, prbs.value_or(0)};
}

std::size_t draw_band(Rng& rng, const std::array<double, 4>& mix) {
    const double total = std::accumulate(mix.begin(), mix.end(), 0.0);
    double u = rng.uniform() * total;
    for (std::size_t i = 0; i < mix.size(); ++i) {
        if (u < mix[i]) return i;
        u -= mix[i];
    }
    // rounding: fall back to the last band with weight
    for (std::size_t i = mix.size(); i-- > 0;)
        if (mix[i] > 0.0) return i;
    return 0;
}

}  // namespace

data::Trace synth_trace(const Scenario& s) {
    using namespace model;
    s.validate();

    std::array<BandState, 4> bands{band_state(nr::BandClass::N28_700), band_state(nr::BandClass::N3_1800),
                                   band_state(nr::BandClass::N77_3400), band_state(nr::BandClass::N77_3900)};

    Rng rng(s.seed);
    const bool locked = s.locked_band.has_value();
    const double p_handover = s.handover_rate_per_min / 60.0;
    const double rsrp_sigma = kRsrpSigmaBase + kRsrpSigmaPerKmh * s.mean_speed_kmh;
    const double rsrp_sd = rsrp_sigma / std::sqrt(1.0 - (1.0 - kRsrpReversion) * (1.0 - kRsrpReversion));
    const double sinr_sd = kSinrSigma / std::sqrt(1.0 - (1.0 - kSinrReversion) * (1.0 - kSinrReversion));

    std::size_t band = locked ? static_cast<std::size_t>(*s.locked_band) : draw_band(rng, s.band_mix);
    double rsrp_dev = rng.normal(0.0, rsrp_sd);
    double sinr_dev = rng.normal(0.0, sinr_sd);
    double load = std::clamp(rng.normal(s.load_mean, 0.5 * s.load_sigma), s.load_floor, 1.0);
    double speed = s.mean_speed_kmh;
    int outage = 0;

    data::Trace trace;
    trace.meta.name = s.name + "-" + std::to_string(s.seed);
    trace.meta.scenario = s.name;
    trace.meta.band_lock = locked ? std::string(nr::to_string(*s.locked_band)) : "all";
    trace.meta.source = "synth";
    trace.samples.reserve(static_cast<std::size_t>(s.duration_s));

    for (std::int64_t t = 0; t < s.duration_s; ++t) {
        if (t > 0) {
            if (p_handover > 0.0 && rng.bernoulli(p_handover)) {
                if (!locked) band = draw_band(rng, s.band_mix);
                rsrp_dev = rng.normal(0.0, kRsrpHandoverSpread);
                sinr_dev = rng.normal(0.0, kSinrHandoverSpread);
                if (s.dropout_prob > 0.0 && rng.bernoulli(s.dropout_prob))
                    outage = 1 + static_cast<int>(rng.below(3));
            } else {
                rsrp_dev = (1.0 - kRsrpReversion) * rsrp_dev + rng.normal(0.0, rsrp_sigma);
                sinr_dev = (1.0 - kSinrReversion) * sinr_dev + rng.normal(0.0, kSinrSigma);
            }
            load += s.load_reversion * (s.load_mean - load) + rng.normal(0.0, s.load_sigma);
            load = std::clamp(load, s.load_floor, 1.0);
            speed = std::max(0.0, speed + 0.1 * (s.mean_speed_kmh - speed) + rng.normal(0.0, 0.05 * s.mean_speed_kmh));
        }
        const BandState& b = bands[band];

        data::TelemetrySample x;
        x.t = t;
        x.rsrp_dbm = std::clamp(kRsrpMean[band] + s.rsrp_offset_db + rsrp_dev, -140.0, -44.0);
        x.sinr_db = std::clamp(kSinrMean[band] + s.sinr_offset_db + kSinrRsrpCoupling * rsrp_dev + sinr_dev, -10.0, 35.0);
        x.rsrq_db = std::clamp(kRsrqBase + kRsrqSinrSlope * (x.sinr_db - kRsrqSinrRef) -
                                   kRsrqLoadSlope * (load - 0.5) + rng.normal(0.0, kRsrqNoise),
                               -30.0, -3.0);
        x.ssb_arfcn = b.info.ssb_arfcn;

        const double fading = std::exp(rng.normal(-0.5 * kThroughputLogSigma * kThroughputLogSigma, kThroughputLogSigma));
        const bool active = outage == 0;
        x.thpt_mbps = active ? std::min(b.cap_mbps, b.cap_mbps * efficiency(x.sinr_db) * load * fading) : 0.0;
        x.rb_alloc = active ? std::max<std::int64_t>(1, std::llround(static_cast<double>(b.n_prb) * load)) : 0;
        x.sched_count = active ? std::llround(b.ul_slots_per_s * std::min(1.0, load + 0.1)) : 0;
        x.pucch_tx_dbm = std::clamp(kPucchP0 - x.rsrp_dbm + rng.normal(0.0, kPucchNoise), -40.0, 23.0);
        x.bw_mhz = b.info.bandwidth_mhz;
        x.speed_kmh = speed;
        trace.samples.push_back(x);
        if (outage > 0) --outage;
    }
    return trace;
}

}  // namespace ulp::synth
