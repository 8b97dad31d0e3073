// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ulp/data/trace.hpp"
#include "ulp/synth/scenario.hpp"

namespace ulp::synth {

/// Generator constants. None of these come from measurements of waveform
/// physics; they are tuned so that the default train preset lands on the
/// measured aggregate statistics (mean RSRP near -93 dBm, mean uplink
/// throughput near 12 Mbps).
namespace model {

/// Long-run RSRP [dBm] per band (700, 1800, 3400, 3900 MHz).
inline constexpr std::array<double, 4> kRsrpMean{-87.0, -89.5, -96.0, -98.0};
/// Long-run SINR [dB] per band.
inline constexpr std::array<double, 4> kSinrMean{10.5, 12.0, 12.5, 14.0};

inline constexpr double kRsrpReversion = 0.02;
inline constexpr double kRsrpSigmaBase = 0.5;       // dB per step
inline constexpr double kRsrpSigmaPerKmh = 0.006;   // extra dB per step per km/h
inline constexpr double kRsrpHandoverSpread = 3.0;  // dB, deviation after a cell change

inline constexpr double kSinrReversion = 0.05;
inline constexpr double kSinrSigma = 0.4;
inline constexpr double kSinrRsrpCoupling = 0.5;    // dB SINR per dB RSRP deviation
inline constexpr double kSinrHandoverSpread = 1.5;

/// RSRQ = kRsrqBase + kRsrqSinrSlope (SINR - kRsrqSinrRef) - kRsrqLoadSlope (load - 0.5) + noise
inline constexpr double kRsrqBase = -15.2;
inline constexpr double kRsrqSinrRef = 12.4;
inline constexpr double kRsrqSinrSlope = 0.15;
inline constexpr double kRsrqLoadSlope = 4.0;
inline constexpr double kRsrqNoise = 0.3;

/// Fraction of the TS 38.306 cap reached at a given SINR:
/// 1 / (1 + exp(-(SINR - midpoint) / width)).
inline constexpr double kEfficiencyMidpointDb = 15.0;
inline constexpr double kEfficiencyWidthDb = 4.0;

/// Per-second multiplicative fast-fading / scheduling noise, log-normal with
/// unit mean.
inline constexpr double kThroughputLogSigma = 0.5;

/// Open-loop PUCCH power: P = kPucchP0 - RSRP + noise, clipped to [-40, 23] dBm.
inline constexpr double kPucchP0 = -85.0;
inline constexpr double kPucchNoise = 1.5;

double efficiency(double sinr_db);

}  // namespace model

/// Seeded trace: identical scenario (including seed) gives an identical trace.
data::Trace synth_trace(const Scenario& scenario);

}  // namespace ulp::synth
