// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace ulp::nr {

/// Highest NR-ARFCN of the global frequency raster.
inline constexpr std::int64_t kMaxNrArfcn = 3279165;

/// Carrier frequency of an NR-ARFCN on the global raster:
///   N <  600000           F = 0.005 N MHz
///   N < 2016667           F = 3000 + 0.015 (N - 600000) MHz
///   N <= 3279165          F = 24250.08 + 0.06 (N - 2016667) MHz
/// Throws a range error outside [0, 3279165].
double arfcn_to_mhz(std::int64_t arfcn);

/// Same as arfcn_to_mhz in integer kHz (exact).
std::int64_t arfcn_to_khz(std::int64_t arfcn);

/// Bands of the modeled operator, keyed by carrier range.
enum class BandClass { N28_700, N3_1800, N77_3400, N77_3900, Other };

enum class Duplex { Fdd, Tdd };

struct BandInfo {
    BandClass band;
    std::string_view id;     // "n28_700"
    std::string_view nr_band;  // "n28"
    std::string_view label;  // "700 MHz"
    double lo_mhz;           // inclusive
    double hi_mhz;           // exclusive
    Duplex duplex;
    double bandwidth_mhz;    // deployed channel bandwidth
    int scs_khz;
    std::int64_t ssb_arfcn;  // representative SSB position inside the range
};

/// The four deployed carriers; ranges are disjoint.
const std::array<BandInfo, 4>& band_table();

/// Total: frequencies outside every configured range map to Other.
BandClass classify_band(double freq_mhz);

/// Info for a configured band; nullopt for Other.
std::optional<BandInfo> band_info(BandClass band);

std::string_view to_string(BandClass band);
std::optional<BandClass> parse_band_class(std::string_view text);
std::string_view to_string(Duplex duplex);

}  // namespace ulp::nr
