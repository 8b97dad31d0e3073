// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ulp/nr/band.hpp"

namespace ulp::nr {

using Rational = boost::rational<std::int64_t>;

enum class SlotKind { Downlink, Special, Uplink };

/// TDD frame pattern, e.g. DDDDDDDSUU with a 6:4:4 special slot.
struct TddPattern {
    std::vector<SlotKind> slots;
    int special_dl_symbols = 6;
    int special_gap_symbols = 4;
    int special_ul_symbols = 4;

    /// Seven downlink slots, one special, two uplink (the 7:2 operator
    /// configuration) with a 6:4:4 special slot.
    static TddPattern default_7_2();
    /// "DDDSU"-style string; throws a configuration error on bad characters.
    static TddPattern parse(std::string_view slots, int dl_sym = 6, int gap_sym = 4, int ul_sym = 4);

    std::string to_string() const;
    /// Throws a configuration error when the invariants do not hold.
    void validate() const;
};

/// Fraction of OFDM symbols available for uplink:
/// (14 #U + ul_sym #S) / (14 #slots), exact.
Rational tdd_ul_fraction(const TddPattern& pattern);

/// Maps (subcarrier spacing, channel bandwidth) to the maximum transmission
/// bandwidth in PRBs. Ships only the configurations of the four deployed
/// carriers; more rows can be added or loaded from a JSON file
///   [ { "scs_khz": 30, "bw_mhz": 50, "n_prb": 133 }, ... ].
class PrbTable {
public:
    static PrbTable builtin();

    void add(int scs_khz, double bw_mhz, int n_prb);
    void load_json(const std::filesystem::path& path);
    std::optional<int> lookup(int scs_khz, double bw_mhz) const;
    std::size_t size() const noexcept { return rows_.size(); }

private:
    std::map<std::pair<int, std::int64_t>, int> rows_;  // (scs kHz, bw kHz) -> n_prb
};

struct UlLinkConfig {
    Duplex duplex = Duplex::Fdd;
    double bandwidth_mhz = 0.0;
    int scs_khz = 15;
    int n_prb = 0;
    int layers = 1;  // UL-1Tx
    int modulation_order = 8;  // 256QAM
    Rational code_rate_max{948, 1024};
    Rational overhead{8, 100};  // FR1 uplink
    Rational scaling{1, 1};
    Rational ul_symbol_fraction{1, 1};

    /// Throws a configuration error if n_prb disagrees with `prbs`, the
    /// duplex/fraction pairing is inconsistent, or any field is out of range.
    void validate(const PrbTable& prbs) const;
};

/// Builds a consistent config: n_prb from the table, fraction 1 for FDD or
/// tdd_ul_fraction(pattern) for TDD.
UlLinkConfig make_ul_config(Duplex duplex, double bandwidth_mhz, int scs_khz, const PrbTable& prbs,
                            const TddPattern& pattern = TddPattern::default_7_2());

/// Exact peak uplink bit rate in bit/s:
///   layers * Qm * f * Rmax * (n_prb * 12 / Ts) * (1 - OH) * ul_fraction,
///   Ts = 1e-3 / (14 * 2^mu).
Rational max_ul_bitrate(const UlLinkConfig& cfg, const PrbTable& prbs = PrbTable::builtin());

/// max_ul_bitrate in Mbps at full double precision.
double max_ul_throughput(const UlLinkConfig& cfg, const PrbTable& prbs = PrbTable::builtin());

/// Peak rate of one of the deployed carriers (Other has no cap and throws).
double band_cap_mbps(BandClass band);

}  // namespace ulp::nr
