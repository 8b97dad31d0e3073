// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ulp/data/trace.hpp"
#include "ulp/nr/band.hpp"

namespace ulp::synth {

enum class Mobility { Walking, Driving, Tram, Metro, Train };

std::string_view to_string(Mobility m);

/// Parameters of one synthetic drive trace.
struct Scenario {
    std::string name = "custom";
    Mobility mobility = Mobility::Train;
    double mean_speed_kmh = 50.0;

    /// nullopt: every carrier may serve; otherwise the UE never leaves this band.
    std::optional<nr::BandClass> locked_band;
    /// Long-run share of time on 700 / 1800 / 3400 / 3900 MHz (normalized internally).
    std::array<double, 4> band_mix{0.25, 0.25, 0.25, 0.25};

    std::int64_t duration_s = 1800;
    double handover_rate_per_min = 1.0;
    /// Chance that a handover's random access fails and throughput drops to
    /// zero for 1-3 s.
    double dropout_prob = 0.3;

    // Cell load: discrete Ornstein-Uhlenbeck process clipped to [floor, 1].
    double load_mean = 0.55;
    double load_reversion = 0.05;
    double load_sigma = 0.04;
    double load_floor = 0.05;

    /// Shift of the band-dependent long-run RSRP / SINR means.
    double rsrp_offset_db = 0.0;
    double sinr_offset_db = 0.0;

    std::uint64_t seed = 1;

    /// Throws a configuration error on invalid parameters.
    void validate() const;
    nlohmann::json to_json() const;
};

/// Names accepted by preset().
std::vector<std::string_view> preset_names();

/// Documented parameter sets modeled on the measured scenario inventory
/// (commuter train, walking, driving, tram, elevated metro, band-locked
/// train runs). Throws a usage error for an unknown name.
Scenario preset(std::string_view name);

}  // namespace ulp::synth
