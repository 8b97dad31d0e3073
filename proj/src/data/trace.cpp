// SPDX-License-Identifier: Apache-2.0
#include "ulp/data/trace.hpp"

#include <algorithm>
#include <array>

namespace ulp::data {

namespace {

constexpr std::array kAndroidApi{Feature::Rsrp, Feature::Rsrq, Feature::Sinr, Feature::FrequencyMhz,
                                 Feature::Throughput};
constexpr std::array kFull{Feature::Rsrp,       Feature::Rsrq,    Feature::Sinr,
                           Feature::FrequencyMhz, Feature::Throughput, Feature::RbAlloc,
                           Feature::SchedCount, Feature::PucchTx, Feature::Bandwidth};
constexpr std::array kSure{Feature::Rsrp, Feature::RbAlloc, Feature::PucchTx, Feature::Throughput};

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> Trace::segments() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= samples.size(); ++i) {
        if (i == samples.size() || samples[i].t != samples[i - 1].t + 1) {
            if (i > begin) out.emplace_back(begin, i);
            begin = i;
        }
    }
    return out;
}

std::span<const Feature> features_of(FeatureSet fs) {
    switch (fs) {
        case FeatureSet::AndroidApi: return kAndroidApi;
        case FeatureSet::Full: return kFull;
        case FeatureSet::Sure: return kSure;
    }
    return {};
}

std::size_t feature_count(FeatureSet fs) { return features_of(fs).size(); }

std::size_t target_column(FeatureSet fs) {
    const auto f = features_of(fs);
    return static_cast<std::size_t>(std::find(f.begin(), f.end(), Feature::Throughput) - f.begin());
}

std::string_view to_string(Feature f) {
    switch (f) {
        case Feature::Rsrp: return "rsrp_dbm";
        case Feature::Rsrq: return "rsrq_db";
        case Feature::Sinr: return "sinr_db";
        case Feature::FrequencyMhz: return "frequency_mhz";
        case Feature::Throughput: return "thpt_mbps";
        case Feature::RbAlloc: return "rb_alloc";
        case Feature::SchedCount: return "sched_count";
        case Feature::PucchTx: return "pucch_tx_dbm";
        case Feature::Bandwidth: return "bw_mhz";
    }
    return "?";
}

std::string_view column_of(Feature f) { return f == Feature::FrequencyMhz ? "ssb_arfcn" : to_string(f); }

bool is_optional(Feature f) {
    return f == Feature::RbAlloc || f == Feature::SchedCount || f == Feature::PucchTx || f == Feature::Bandwidth;
}

std::string_view to_string(FeatureSet fs) {
    switch (fs) {
        case FeatureSet::AndroidApi: return "android-api";
        case FeatureSet::Full: return "full";
        case FeatureSet::Sure: return "sure";
    }
    return "?";
}

std::optional<FeatureSet> parse_feature_set(std::string_view text) {
    for (auto fs : {FeatureSet::AndroidApi, FeatureSet::Full, FeatureSet::Sure})
        if (text == to_string(fs)) return fs;
    return std::nullopt;
}

}  // namespace ulp::data
