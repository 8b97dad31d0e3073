// SPDX-License-Identifier: Apache-2.0
#include "ulp/nr/band.hpp"

#include <string>

#include "ulp/common/error.hpp"

namespace ulp::nr {

std::int64_t arfcn_to_khz(std::int64_t arfcn) {
    if (arfcn < 0 || arfcn > kMaxNrArfcn)
        throw Error(ErrorKind::Range, "nr-phy",
                    "NR-ARFCN " + std::to_string(arfcn) + " outside raster domain [0, " + std::to_string(kMaxNrArfcn) +
                        "]");
    if (arfcn < 600000) return 5 * arfcn;
    if (arfcn < 2016667) return 3000000 + 15 * (arfcn - 600000);
    return 24250080 + 60 * (arfcn - 2016667);
}

double arfcn_to_mhz(std::int64_t arfcn) { return static_cast<double>(arfcn_to_khz(arfcn)) / 1000.0; }

const std::array<BandInfo, 4>& band_table() {
    // SSB positions are representative raster points inside each range.
    static const std::array<BandInfo, 4> table{{
        {BandClass::N28_700, "n28_700", "n28", "700 MHz", 690.0, 810.0, Duplex::Fdd, 10.0, 15, 151600},
        {BandClass::N3_1800, "n3_1800", "n3", "1800 MHz", 1710.0, 1880.0, Duplex::Fdd, 15.0, 15, 368410},
        {BandClass::N77_3400, "n77_3400", "n77", "3400 MHz", 3300.0, 3800.0, Duplex::Tdd, 40.0, 30, 627328},
        {BandClass::N77_3900, "n77_3900", "n77", "3900 MHz", 3800.0, 4200.0, Duplex::Tdd, 100.0, 30, 663333},
    }};
    return table;
}

BandClass classify_band(double freq_mhz) {
    for (const auto& b : band_table())
        if (freq_mhz >= b.lo_mhz && freq_mhz < b.hi_mhz) return b.band;
    return BandClass::Other;
}

std::optional<BandInfo> band_info(BandClass band) {
    for (const auto& b : band_table())
        if (b.band == band) return b;
    return std::nullopt;
}

std::string_view to_string(BandClass band) {
    if (auto info = band_info(band)) return info->id;
    return "other";
}

std::optional<BandClass> parse_band_class(std::string_view text) {
    for (const auto& b : band_table())
        if (text == b.id) return b.band;
    if (text == "other") return BandClass::Other;
    return std::nullopt;
}

std::string_view to_string(Duplex duplex) { return duplex == Duplex::Fdd ? "FDD" : "TDD"; }

}  // namespace ulp::nr
