// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <string>
#include <vector>

#include "ulp/data/trace.hpp"

namespace ulp::data {

/// Trace CSV layout. A UTF-8 text file, one row per second:
///
///   # name=chuo-rapid-1          (optional metadata lines, key=value)
///   t,rsrp_dbm,rsrq_db,sinr_db,ssb_arfcn,thpt_mbps[,rb_alloc,sched_count,pucch_tx_dbm,bw_mhz,lat,lon,speed_kmh]
///   0,-92.5,-15.1,12.0,368410,10.25,...
///   1,GAP
///
/// The header is mandatory; the six leading columns are required, the rest
/// optional and may appear in any order. A missing second is written as an
/// explicit `t,GAP` row. Empty cells in optional columns mean "not recorded".
inline constexpr std::array<std::string_view, 6> kRequiredColumns{"t",       "rsrp_dbm",  "rsrq_db",
                                                                  "sinr_db", "ssb_arfcn", "thpt_mbps"};
inline constexpr std::array<std::string_view, 7> kOptionalColumns{"rb_alloc", "sched_count", "pucch_tx_dbm", "bw_mhz",
                                                                  "lat",      "lon",         "speed_kmh"};

/// Parses and validates a trace. When `schema` is given, the optional columns
/// its features need must be present and filled in every sample row.
/// Throws schema errors for missing/unknown columns and data errors (with
/// line numbers) for rows that violate the sample invariants or break the
/// unit-step time sequence.
Trace parse_trace_csv(std::istream& in, std::optional<FeatureSet> schema = std::nullopt,
                      const std::string& source_name = "<stream>");
Trace parse_trace_csv(const std::filesystem::path& path, std::optional<FeatureSet> schema = std::nullopt);

void write_trace_csv(std::ostream& out, const Trace& trace);
void write_trace_csv(const std::filesystem::path& path, const Trace& trace);

/// All *.csv files of a directory, sorted by file name, or the file itself.
std::vector<std::filesystem::path> list_trace_files(const std::filesystem::path& path);

}  // namespace ulp::data
