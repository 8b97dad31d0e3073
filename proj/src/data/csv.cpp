// SPDX-License-Identifier: Apache-2.0
#include "ulp/data/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ulp/common/error.hpp"
#include "ulp/common/format.hpp"
#include "ulp/nr/band.hpp"

namespace ulp::data {

namespace {

constexpr const char* kModule = "trace-data";
constexpr std::size_t kMaxReportedRows = 10;

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool is_known_column(std::string_view name) {
    return std::find(kRequiredColumns.begin(), kRequiredColumns.end(), name) != kRequiredColumns.end() ||
           std::find(kOptionalColumns.begin(), kOptionalColumns.end(), name) != kOptionalColumns.end();
}

// Field-level parse failure; converted into a line-numbered row issue.
struct RowError {
    std::string what;
};

double real_field(std::string_view text, std::string_view column) {
    auto v = parse_double(text);
    if (!v || !std::isfinite(*v)) throw RowError{"bad number '" + std::string(text) + "' in " + std::string(column)};
    return *v;
}

std::int64_t int_field(std::string_view text, std::string_view column) {
    auto v = parse_int(text);
    if (!v) throw RowError{"bad integer '" + std::string(text) + "' in " + std::string(column)};
    return *v;
}

void check_sample(const TelemetrySample& s) {
    if (s.thpt_mbps < 0.0) throw RowError{"negative throughput"};
    if (s.rsrp_dbm < kMinRsrpDbm || s.rsrp_dbm > kMaxRsrpDbm)
        throw RowError{"rsrp_dbm " + format_double(s.rsrp_dbm) + " outside [-156, -31]"};
    if (s.ssb_arfcn < 0 || s.ssb_arfcn > nr::kMaxNrArfcn) throw RowError{"ssb_arfcn outside the NR raster"};
    if (s.rb_alloc && *s.rb_alloc < 0) throw RowError{"negative rb_alloc"};
    if (s.sched_count && *s.sched_count < 0) throw RowError{"negative sched_count"};
    if (s.bw_mhz && !(*s.bw_mhz > 0.0)) throw RowError{"non-positive bw_mhz"};
}

template <class T>
void put(std::ostream& out, const std::optional<T>& v) {
    out << ',';
    if (!v) return;
    if constexpr (std::is_floating_point_v<T>)
        out << format_double(*v);
    else
        out << *v;
}

}  // namespace

Trace parse_trace_csv(std::istream& in, std::optional<FeatureSet> schema, const std::string& source_name) {
    Trace trace;
    trace.meta.source = source_name;

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) continue;
        if (text.front() == '#') {
            const auto body = trim(text.substr(1));
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) continue;
            const auto key = trim(body.substr(0, eq));
            const std::string value(trim(body.substr(eq + 1)));
            if (key == "name") trace.meta.name = value;
            else if (key == "scenario") trace.meta.scenario = value;
            else if (key == "band_lock") trace.meta.band_lock = value;
            else if (key == "source") trace.meta.source = value;
            continue;
        }
        for (auto col : split(text)) header.emplace_back(col);
        break;
    }
    if (header.empty()) throw Error(ErrorKind::Schema, kModule, source_name + ": missing header row");

    std::map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!is_known_column(header[i]))
            throw Error(ErrorKind::Schema, kModule, source_name + ": unknown column '" + header[i] + "'");
        if (!index.emplace(header[i], i).second)
            throw Error(ErrorKind::Schema, kModule, source_name + ": duplicate column '" + header[i] + "'");
    }
    for (auto col : kRequiredColumns)
        if (!index.count(col))
            throw Error(ErrorKind::Schema, kModule, source_name + ": missing required column '" + std::string(col) + "'");
    std::vector<std::string_view> schema_columns;
    if (schema) {
        for (auto f : features_of(*schema)) {
            if (!is_optional(f)) continue;
            const auto col = column_of(f);
            if (!index.count(col))
                throw Error(ErrorKind::Schema, kModule,
                            source_name + ": feature set " + std::string(to_string(*schema)) +
                                " needs missing column '" + std::string(col) + "'");
            schema_columns.push_back(col);
        }
    }

    std::vector<std::string> issues;
    std::size_t issue_count = 0;
    auto report = [&](std::size_t ln, const std::string& what) {
        ++issue_count;
        if (issues.size() < kMaxReportedRows) issues.push_back("line " + std::to_string(ln) + ": " + what);
    };

    std::optional<std::int64_t> prev_t;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) continue;
        const auto fields = split(text);
        try {
            const std::int64_t t = int_field(fields[0], "t");
            if (t < 0) throw RowError{"negative timestamp"};
            if (prev_t) {
                if (t <= *prev_t)
                    throw Error(ErrorKind::Data, kModule,
                                source_name + ": line " + std::to_string(line_no) + ": non-monotonic timestamp " +
                                    std::to_string(t) + " after " + std::to_string(*prev_t));
                if (t != *prev_t + 1)
                    throw Error(ErrorKind::Data, kModule,
                                source_name + ": line " + std::to_string(line_no) + ": seconds " +
                                    std::to_string(*prev_t + 1) + ".." + std::to_string(t - 1) +
                                    " missing; mark them with GAP rows");
            }
            prev_t = t;

            if (fields.size() == 2 && fields[1] == "GAP") {
                trace.gaps.push_back(t);
                continue;
            }
            if (fields.size() != header.size())
                throw RowError{"expected " + std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size())};

            auto cell = [&](std::string_view col) -> std::optional<std::string_view> {
                auto it = index.find(col);
                if (it == index.end() || fields[it->second].empty()) return std::nullopt;
                return fields[it->second];
            };
            auto required = [&](std::string_view col) {
                auto c = cell(col);
                if (!c) throw RowError{"empty " + std::string(col)};
                return *c;
            };
            auto opt_real = [&](std::string_view col) -> std::optional<double> {
                if (auto c = cell(col)) return real_field(*c, col);
                return std::nullopt;
            };
            auto opt_int = [&](std::string_view col) -> std::optional<std::int64_t> {
                if (auto c = cell(col)) return int_field(*c, col);
                return std::nullopt;
            };

            TelemetrySample s;
            s.t = t;
            s.rsrp_dbm = real_field(required("rsrp_dbm"), "rsrp_dbm");
            s.rsrq_db = real_field(required("rsrq_db"), "rsrq_db");
            s.sinr_db = real_field(required("sinr_db"), "sinr_db");
            s.ssb_arfcn = int_field(required("ssb_arfcn"), "ssb_arfcn");
            s.thpt_mbps = real_field(required("thpt_mbps"), "thpt_mbps");
            s.rb_alloc = opt_int("rb_alloc");
            s.sched_count = opt_int("sched_count");
            s.pucch_tx_dbm = opt_real("pucch_tx_dbm");
            s.bw_mhz = opt_real("bw_mhz");
            s.lat = opt_real("lat");
            s.lon = opt_real("lon");
            s.speed_kmh = opt_real("speed_kmh");
            for (auto col : schema_columns)
                if (!cell(col))
                    throw RowError{"empty " + std::string(col) + " required by feature set " +
                                   std::string(to_string(*schema))};
            check_sample(s);
            trace.samples.push_back(std::move(s));
        } catch (const RowError& e) {
            report(line_no, e.what);
        }
    }

    if (issue_count > 0) {
        std::string msg = source_name + ": " + std::to_string(issue_count) + " invalid row(s)";
        for (const auto& i : issues) msg += "\n  " + i;
        if (issue_count > issues.size()) msg += "\n  ...";
        throw Error(ErrorKind::Data, kModule, msg);
    }
    if (trace.samples.empty()) throw Error(ErrorKind::Data, kModule, source_name + ": no samples");
    return trace;
}

Trace parse_trace_csv(const std::filesystem::path& path, std::optional<FeatureSet> schema) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, kModule, "cannot read " + path.string());
    Trace t = parse_trace_csv(in, schema, path.string());
    if (t.meta.name.empty()) t.meta.name = path.stem().string();
    return t;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
    const auto& m = trace.meta;
    if (!m.name.empty()) out << "# name=" << m.name << '\n';
    if (!m.scenario.empty()) out << "# scenario=" << m.scenario << '\n';
    if (!m.band_lock.empty()) out << "# band_lock=" << m.band_lock << '\n';
    if (!m.source.empty()) out << "# source=" << m.source << '\n';

    auto any = [&](auto member) {
        return std::any_of(trace.samples.begin(), trace.samples.end(),
                           [&](const TelemetrySample& s) { return (s.*member).has_value(); });
    };
    const bool rb = any(&TelemetrySample::rb_alloc), sc = any(&TelemetrySample::sched_count),
               pu = any(&TelemetrySample::pucch_tx_dbm), bw = any(&TelemetrySample::bw_mhz),
               la = any(&TelemetrySample::lat), lo = any(&TelemetrySample::lon),
               sp = any(&TelemetrySample::speed_kmh);

    out << "t,rsrp_dbm,rsrq_db,sinr_db,ssb_arfcn,thpt_mbps";
    if (rb) out << ",rb_alloc";
    if (sc) out << ",sched_count";
    if (pu) out << ",pucch_tx_dbm";
    if (bw) out << ",bw_mhz";
    if (la) out << ",lat";
    if (lo) out << ",lon";
    if (sp) out << ",speed_kmh";
    out << '\n';

    std::size_t gi = 0;
    for (const auto& s : trace.samples) {
        while (gi < trace.gaps.size() && trace.gaps[gi] < s.t) out << trace.gaps[gi++] << ",GAP\n";
        out << s.t << ',' << format_double(s.rsrp_dbm) << ',' << format_double(s.rsrq_db) << ','
            << format_double(s.sinr_db) << ',' << s.ssb_arfcn << ',' << format_double(s.thpt_mbps);
        if (rb) put(out, s.rb_alloc);
        if (sc) put(out, s.sched_count);
        if (pu) put(out, s.pucch_tx_dbm);
        if (bw) put(out, s.bw_mhz);
        if (la) put(out, s.lat);
        if (lo) put(out, s.lon);
        if (sp) put(out, s.speed_kmh);
        out << '\n';
    }
    while (gi < trace.gaps.size()) out << trace.gaps[gi++] << ",GAP\n";
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, kModule, "cannot write " + path.string());
    write_trace_csv(out, trace);
    if (!out) throw Error(ErrorKind::Io, kModule, "write failed for " + path.string());
}

std::vector<std::filesystem::path> list_trace_files(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::is_regular_file(path, ec)) return {path};
    if (!fs::is_directory(path, ec)) throw Error(ErrorKind::Io, kModule, "no such file or directory: " + path.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(ErrorKind::Data, kModule, "no .csv traces in " + path.string());
    return files;
}

}  // namespace ulp::data
