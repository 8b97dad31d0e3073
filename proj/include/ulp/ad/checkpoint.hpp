// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>

#include "json.hpp"
#include "ulp/ad/tensor.hpp"

namespace ulp::ad {

inline constexpr const char* kCheckpointFormat = "ulp-checkpoint";
inline constexpr int kCheckpointVersion = 1;

/// Parameter container: free-form metadata plus named row-major tensors.
///
/// On disk this is a single JSON document
///
///   { "format": "ulp-checkpoint", "version": 1,
///     "meta": { ... },
///     "tensors": [ { "name": ..., "shape": [...], "data": [...] }, ... ] }
///
/// with tensors sorted by name. Doubles are written in shortest round-trip
/// form, so save/load is lossless.
struct Checkpoint {
    nlohmann::json meta = nlohmann::json::object();
    ParamStore tensors;
};

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace ulp::ad
