// SPDX-License-Identifier: Apache-2.0
#include "ulp/ad/checkpoint.hpp"

#include <fstream>

#include "ulp/common/error.hpp"

namespace ulp::ad {

namespace {
constexpr const char* kModule = "tensor-autodiff";
}

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
    nlohmann::json doc;
    doc["format"] = kCheckpointFormat;
    doc["version"] = kCheckpointVersion;
    doc["meta"] = ckpt.meta;
    auto& tensors = doc["tensors"] = nlohmann::json::array();
    for (const auto& [name, t] : ckpt.tensors)
        tensors.push_back({{"name", name}, {"shape", t.shape()}, {"data", t.values()}});
    out << doc.dump(1) << '\n';
}

Checkpoint read_checkpoint(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Data, kModule, std::string("malformed checkpoint: ") + e.what());
    }
    if (doc.value("format", "") != kCheckpointFormat)
        throw Error(ErrorKind::Data, kModule, "not a checkpoint file (format tag missing)");
    if (doc.value("version", 0) != kCheckpointVersion)
        throw Error(ErrorKind::Data, kModule,
                    "unsupported checkpoint version " + doc.value("version", nlohmann::json()).dump());

    Checkpoint ckpt;
    ckpt.meta = doc.value("meta", nlohmann::json::object());
    try {
        for (const auto& entry : doc.at("tensors")) {
            auto name = entry.at("name").get<std::string>();
            auto shape = entry.at("shape").get<Shape>();
            auto data = entry.at("data").get<std::vector<double>>();
            if (!ckpt.tensors.emplace(name, Tensor(std::move(shape), std::move(data))).second)
                throw Error(ErrorKind::Data, kModule, "duplicate tensor '" + name + "' in checkpoint");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Data, kModule, std::string("malformed checkpoint tensor: ") + e.what());
    }
    return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, kModule, "cannot write " + path.string());
    write_checkpoint(out, ckpt);
    if (!out) throw Error(ErrorKind::Io, kModule, "write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, kModule, "cannot read " + path.string());
    return read_checkpoint(in);
}

}  // namespace ulp::ad
