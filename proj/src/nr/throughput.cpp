// SPDX-License-Identifier: Apache-2.0
#include "ulp/nr/throughput.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "ulp/common/error.hpp"
#include "ulp/common/format.hpp"

namespace ulp::nr {

namespace {

constexpr const char* kModule = "nr-phy";

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Config, kModule, what); }

std::int64_t to_khz(double mhz) { return std::llround(mhz * 1000.0); }

int numerology(int scs_khz) {
    switch (scs_khz) {
        case 15: return 0;
        case 30: return 1;
        default: config_error("unsupported subcarrier spacing " + std::to_string(scs_khz) + " kHz (15 or 30)");
    }
}

}  // namespace

TddPattern TddPattern::default_7_2() { return parse("DDDDDDDSUU", 6, 4, 4); }

TddPattern TddPattern::parse(std::string_view slots, int dl_sym, int gap_sym, int ul_sym) {
    TddPattern p;
    for (char c : slots) {
        switch (c) {
            case 'D': p.slots.push_back(SlotKind::Downlink); break;
            case 'S': p.slots.push_back(SlotKind::Special); break;
            case 'U': p.slots.push_back(SlotKind::Uplink); break;
            default: config_error(std::string("invalid TDD slot '") + c + "' in pattern " + std::string(slots));
        }
    }
    p.special_dl_symbols = dl_sym;
    p.special_gap_symbols = gap_sym;
    p.special_ul_symbols = ul_sym;
    p.validate();
    return p;
}

std::string TddPattern::to_string() const {
    std::string s;
    for (auto k : slots) s += k == SlotKind::Downlink ? 'D' : k == SlotKind::Special ? 'S' : 'U';
    return s;
}

void TddPattern::validate() const {
    if (slots.empty()) config_error("empty TDD pattern");
    if (special_dl_symbols < 0 || special_gap_symbols < 0 || special_ul_symbols < 0 ||
        special_dl_symbols + special_gap_symbols + special_ul_symbols != 14)
        config_error("special slot split must be non-negative and sum to 14 symbols");
    bool has_ul = false;
    for (auto k : slots)
        has_ul = has_ul || k == SlotKind::Uplink || (k == SlotKind::Special && special_ul_symbols > 0);
    if (!has_ul) config_error("TDD pattern " + to_string() + " has no uplink symbols");
}

Rational tdd_ul_fraction(const TddPattern& pattern) {
    pattern.validate();
    std::int64_t ul = 0, special = 0;
    for (auto k : pattern.slots) {
        ul += k == SlotKind::Uplink;
        special += k == SlotKind::Special;
    }
    const auto total = static_cast<std::int64_t>(pattern.slots.size());
    return Rational(14 * ul + pattern.special_ul_symbols * special, 14 * total);
}

// ---------------------------------------------------------------------------

PrbTable PrbTable::builtin() {
    PrbTable t;
    t.add(15, 10, 52);
    t.add(15, 15, 79);
    t.add(30, 40, 106);
    t.add(30, 100, 273);
    return t;
}

void PrbTable::add(int scs_khz, double bw_mhz, int n_prb) {
    numerology(scs_khz);
    if (!(bw_mhz > 0.0) || n_prb <= 0) config_error("PRB table rows need positive bandwidth and PRB count");
    rows_[{scs_khz, to_khz(bw_mhz)}] = n_prb;
}

void PrbTable::load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, kModule, "cannot read PRB table " + path.string());
    try {
        for (const auto& row : nlohmann::json::parse(in))
            add(row.at("scs_khz").get<int>(), row.at("bw_mhz").get<double>(), row.at("n_prb").get<int>());
    } catch (const nlohmann::json::exception& e) {
        config_error("malformed PRB table " + path.string() + ": " + e.what());
    }
}

std::optional<int> PrbTable::lookup(int scs_khz, double bw_mhz) const {
    auto it = rows_.find({scs_khz, to_khz(bw_mhz)});
    if (it == rows_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------

void UlLinkConfig::validate(const PrbTable& prbs) const {
    numerology(scs_khz);
    if (!(bandwidth_mhz > 0.0)) config_error("channel bandwidth must be positive");
    if (layers < 1) config_error("layers must be >= 1");
    if (modulation_order < 1) config_error("modulation order must be >= 1");
    if (code_rate_max <= Rational(0) || code_rate_max > Rational(1)) config_error("code rate must lie in (0, 1]");
    if (overhead < Rational(0) || overhead >= Rational(1)) config_error("overhead must lie in [0, 1)");
    if (scaling <= Rational(0) || scaling > Rational(1)) config_error("scaling factor must lie in (0, 1]");
    if (ul_symbol_fraction <= Rational(0) || ul_symbol_fraction > Rational(1)) config_error("UL symbol fraction must lie in (0, 1]");
    if ((duplex == Duplex::Fdd) != (ul_symbol_fraction == Rational(1)))
        config_error("UL symbol fraction must be 1 for FDD and below 1 for TDD");

    const auto expected = prbs.lookup(scs_khz, bandwidth_mhz);
    if (!expected)
        config_error("no PRB entry for " + format_double(bandwidth_mhz) + " MHz at " + std::to_string(scs_khz) +
                     " kHz SCS");
    if (*expected != n_prb)
        config_error("n_prb " + std::to_string(n_prb) + " inconsistent with " + format_double(bandwidth_mhz) +
                     " MHz at " + std::to_string(scs_khz) + " kHz SCS (expected " + std::to_string(*expected) + ")");
}

UlLinkConfig make_ul_config(Duplex duplex, double bandwidth_mhz, int scs_khz, const PrbTable& prbs,
                            const TddPattern& pattern) {
    UlLinkConfig cfg;
    cfg.duplex = duplex;
    cfg.bandwidth_mhz = bandwidth_mhz;
    cfg.scs_khz = scs_khz;
    const auto n = prbs.lookup(scs_khz, bandwidth_mhz);
    if (!n)
        config_error("no PRB entry for " + format_double(bandwidth_mhz) + " MHz at " + std::to_string(scs_khz) +
                     " kHz SCS");
    cfg.n_prb = *n;
    cfg.ul_symbol_fraction = duplex == Duplex::Fdd ? Rational(1) : tdd_ul_fraction(pattern);
    cfg.validate(prbs);
    return cfg;
}

Rational max_ul_bitrate(const UlLinkConfig& cfg, const PrbTable& prbs) {
    cfg.validate(prbs);
    // 1 / Ts = 14 * 2^mu * 1000 symbols per second
    const std::int64_t symbols_per_s = 14 * (std::int64_t{1} << numerology(cfg.scs_khz)) * 1000;
    Rational rate(std::int64_t{cfg.layers} * cfg.modulation_order);
    rate *= cfg.scaling;
    rate *= cfg.code_rate_max;
    rate *= Rational(std::int64_t{cfg.n_prb} * 12 * symbols_per_s);
    rate *= Rational(1) - cfg.overhead;
    rate *= cfg.ul_symbol_fraction;
    return rate;
}

double max_ul_throughput(const UlLinkConfig& cfg, const PrbTable& prbs) {
    return boost::rational_cast<double>(max_ul_bitrate(cfg, prbs) / Rational(1000000));
}

double band_cap_mbps(BandClass band) {
    const auto info = band_info(band);
    if (!info) throw Error(ErrorKind::Range, kModule, "no throughput cap for band class 'other'");
    const auto prbs = PrbTable::builtin();
    return max_ul_throughput(make_ul_config(info->duplex, info->bandwidth_mhz, info->scs_khz, prbs), prbs);
}

}  // namespace ulp::nr
