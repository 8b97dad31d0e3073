// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ulp::data {

/// One second of radio telemetry plus the uplink throughput achieved in it.
struct TelemetrySample {
    std::int64_t t = 0;  // seconds since trace start
    double rsrp_dbm = 0.0;  // CSI-RSRP
    double rsrq_db = 0.0;   // CSI-RSRQ
    double sinr_db = 0.0;   // CSI-SINR
    std::int64_t ssb_arfcn = 0;
    double thpt_mbps = 0.0;

    std::optional<std::int64_t> rb_alloc;
    std::optional<std::int64_t> sched_count;
    std::optional<double> pucch_tx_dbm;
    std::optional<double> bw_mhz;

    std::optional<double> lat;
    std::optional<double> lon;
    std::optional<double> speed_kmh;

    friend bool operator==(const TelemetrySample&, const TelemetrySample&) = default;
};

inline constexpr double kMinRsrpDbm = -156.0;
inline constexpr double kMaxRsrpDbm = -31.0;

struct TraceMeta {
    std::string name;
    std::string scenario;
    std::string band_lock = "all";
    std::string source;

    friend bool operator==(const TraceMeta&, const TraceMeta&) = default;
};

/// Samples in strictly increasing time order. Missing seconds are listed in
/// `gaps`; together, samples and gaps cover a contiguous run of seconds.
struct Trace {
    TraceMeta meta;
    std::vector<TelemetrySample> samples;
    std::vector<std::int64_t> gaps;

    /// Half-open sample index ranges of gap-free runs.
    std::vector<std::pair<std::size_t, std::size_t>> segments() const;

    friend bool operator==(const Trace&, const Trace&) = default;
};

enum class Feature { Rsrp, Rsrq, Sinr, FrequencyMhz, Throughput, RbAlloc, SchedCount, PucchTx, Bandwidth };

/// Named input projections of a sample.
enum class FeatureSet { AndroidApi, Full, Sure };

std::span<const Feature> features_of(FeatureSet fs);
std::size_t feature_count(FeatureSet fs);
/// Position of the throughput feature inside the set.
std::size_t target_column(FeatureSet fs);

std::string_view to_string(Feature f);
std::string_view to_string(FeatureSet fs);
std::optional<FeatureSet> parse_feature_set(std::string_view text);

/// CSV column backing a feature ("ssb_arfcn" for FrequencyMhz).
std::string_view column_of(Feature f);
/// Whether the feature comes from an optional CSV column.
bool is_optional(Feature f);

}  // namespace ulp::data
