// SPDX-License-Identifier: Apache-2.0
#include "ulp/synth/scenario.hpp"

#include <cmath>
#include <numeric>

#include "ulp/common/error.hpp"
#include "ulp/synth/generator.hpp"

namespace ulp::synth {

namespace {

constexpr const char* kModule = "trace-synth";

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::Config, kModule, what);
}

// Shifts the band means so the mix-weighted long-run RSRP/SINR hit the
// scenario's measured averages.
void calibrate(Scenario& s, double rsrp_dbm, double sinr_db) {
    double rsrp = 0.0, sinr = 0.0;
    if (s.locked_band) {
        const auto i = static_cast<std::size_t>(*s.locked_band);
        rsrp = model::kRsrpMean[i];
        sinr = model::kSinrMean[i];
    } else {
        const double total = std::accumulate(s.band_mix.begin(), s.band_mix.end(), 0.0);
        for (std::size_t i = 0; i < 4; ++i) {
            rsrp += s.band_mix[i] / total * model::kRsrpMean[i];
            sinr += s.band_mix[i] / total * model::kSinrMean[i];
        }
    }
    s.rsrp_offset_db = rsrp_dbm - rsrp;
    s.sinr_offset_db = sinr_db - sinr;
}

}  // namespace

std::string_view to_string(Mobility m) {
    switch (m) {
        case Mobility::Walking: return "walking";
        case Mobility::Driving: return "driving";
        case Mobility::Tram: return "tram";
        case Mobility::Metro: return "metro";
        case Mobility::Train: return "train";
    }
    return "?";
}

void Scenario::validate() const {
    require(duration_s >= 60, "duration_s must be >= 60 (got " + std::to_string(duration_s) + ")");
    require(std::isfinite(mean_speed_kmh) && mean_speed_kmh >= 0.0, "mean_speed_kmh must be >= 0");
    if (locked_band) {
        require(*locked_band != nr::BandClass::Other, "cannot lock to band 'other'");
    } else {
        double total = 0.0;
        for (double w : band_mix) {
            require(std::isfinite(w) && w >= 0.0, "band_mix weights must be >= 0");
            total += w;
        }
        require(total > 0.0, "band_mix must have a positive weight");
    }
    require(std::isfinite(handover_rate_per_min) && handover_rate_per_min >= 0.0 && handover_rate_per_min <= 60.0,
            "handover_rate_per_min must be in [0, 60]");
    require(dropout_prob >= 0.0 && dropout_prob <= 1.0, "dropout_prob must be in [0, 1]");
    require(load_floor > 0.0 && load_floor <= 1.0, "load_floor must be in (0, 1]");
    require(load_mean >= load_floor && load_mean <= 1.0, "load_mean must be in [load_floor, 1]");
    require(load_reversion > 0.0 && load_reversion <= 1.0, "load_reversion must be in (0, 1]");
    require(std::isfinite(load_sigma) && load_sigma >= 0.0, "load_sigma must be >= 0");
    require(std::isfinite(rsrp_offset_db) && std::isfinite(sinr_offset_db), "offsets must be finite");
}

nlohmann::json Scenario::to_json() const {
    return {{"name", name},
            {"mobility", std::string(to_string(mobility))},
            {"mean_speed_kmh", mean_speed_kmh},
            {"band_policy", locked_band ? "locked(" + std::string(nr::to_string(*locked_band)) + ")" : "all"},
            {"band_mix", band_mix},
            {"duration_s", duration_s},
            {"handover_rate_per_min", handover_rate_per_min},
            {"dropout_prob", dropout_prob},
            {"load_mean", load_mean},
            {"load_reversion", load_reversion},
            {"load_sigma", load_sigma},
            {"load_floor", load_floor},
            {"rsrp_offset_db", rsrp_offset_db},
            {"sinr_offset_db", sinr_offset_db},
            {"seed", seed}};
}

std::vector<std::string_view> preset_names() {
    return {"train", "walk", "drive", "tram", "metro", "n3_locked", "n28_locked"};
}

Scenario preset(std::string_view name) {
    Scenario s;
    s.name = std::string(name);
    if (name == "train") {
        s.mobility = Mobility::Train;
        s.mean_speed_kmh = 50.45;
        s.band_mix = {0.1214, 0.2416, 0.5963, 0.0408};
        s.handover_rate_per_min = 1.0;
        calibrate(s, -92.96, 12.36);
    } else if (name == "walk") {
        s.mobility = Mobility::Walking;
        s.mean_speed_kmh = 3.29;
        s.band_mix = {0.4478, 0.2283, 0.0220, 0.3019};
        s.handover_rate_per_min = 0.3;
        s.load_mean = 0.6;
        calibrate(s, -82.29, 14.48);
    } else if (name == "drive") {
        s.mobility = Mobility::Driving;
        s.mean_speed_kmh = 16.5;
        s.band_mix = {0.0234, 0.7311, 0.2455, 0.0};
        s.handover_rate_per_min = 0.8;
        calibrate(s, -85.3, 16.0);
    } else if (name == "tram") {
        s.mobility = Mobility::Tram;
        s.mean_speed_kmh = 12.06;
        s.band_mix = {0.0887, 0.6694, 0.2032, 0.0386};
        s.handover_rate_per_min = 0.6;
        calibrate(s, -81.27, 14.52);
    } else if (name == "metro") {
        s.mobility = Mobility::Metro;
        s.mean_speed_kmh = 26.05;
        s.band_mix = {0.2151, 0.5476, 0.0862, 0.1512};
        s.handover_rate_per_min = 1.2;
        calibrate(s, -78.6, 9.8);
    } else if (name == "n3_locked") {
        s.mobility = Mobility::Train;
        s.mean_speed_kmh = 53.28;
        s.locked_band = nr::BandClass::N3_1800;
        s.handover_rate_per_min = 1.0;
        calibrate(s, -95.61, 7.59);
    } else if (name == "n28_locked") {
        s.mobility = Mobility::Train;
        s.mean_speed_kmh = 53.94;
        s.locked_band = nr::BandClass::N28_700;
        s.handover_rate_per_min = 1.0;
        calibrate(s, -97.64, 5.35);
    } else {
        std::string known;
        for (auto n : preset_names()) known += (known.empty() ? "" : ", ") + std::string(n);
        throw Error(ErrorKind::Usage, kModule, "unknown preset '" + std::string(name) + "' (known: " + known + ")");
    }
    return s;
}

}  // namespace ulp::synth
