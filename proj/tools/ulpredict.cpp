// SPDX-License-Identifier: Apache-2.0
// ulpredict: synth / train / eval / predict / maxthpt / arfcn.
//
// Exit codes: 0 ok, 2 usage or configuration, 3 data or I/O, 4 numeric
// failure, 1 anything unexpected.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ulp/common/error.hpp"
#include "ulp/common/format.hpp"
#include "ulp/data/csv.hpp"
#include "ulp/eval/metrics.hpp"
#include "ulp/eval/train.hpp"
#include "ulp/model/predictor.hpp"
#include "ulp/nr/band.hpp"
#include "ulp/nr/throughput.hpp"
#include "ulp/synth/generator.hpp"
#include "ulp/synth/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using ulp::Error;
using ulp::ErrorKind;

namespace {

constexpr const char* kModule = "cli";
constexpr const char* kDataEnv = "ULP_DATA_DIR";

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Usage:
        case ErrorKind::Config:
        case ErrorKind::Range: return 2;
        case ErrorKind::Schema:
        case ErrorKind::Data:
        case ErrorKind::Io: return 3;
        case ErrorKind::Numeric:
        case ErrorKind::Dimension:
        case ErrorKind::Contract: return 4;
    }
    return 1;
}

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorKind::Usage, kModule, what); }

// Writes to `path`, or stdout for "-".
void emit(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text << std::flush;
        return;
    }
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, kModule, "cannot write '" + path + "'");
    out << text;
    if (!out) throw Error(ErrorKind::Io, kModule, "write to '" + path + "' failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string resolve_data(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kDataEnv); env && *env) return env;
    usage(std::string("no --data given and ") + kDataEnv + " is not set");
}

std::vector<ulp::data::Trace> load_traces(const std::string& path, std::vector<std::string>& files) {
    std::vector<ulp::data::Trace> out;
    for (const auto& f : ulp::data::list_trace_files(path)) {
        files.push_back(f.string());
        out.push_back(ulp::data::parse_trace_csv(f));
    }
    if (out.empty()) throw Error(ErrorKind::Data, kModule, "no *.csv traces under '" + path + "'");
    return out;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::string preset = "train";
    std::uint64_t seed = 1;
    std::size_t count = 1;
    std::optional<std::int64_t> duration;
    std::optional<double> handover_rate;
    std::optional<double> dropout_prob;
    std::string out;
};

void add_synth(CLI::App& app, SynthArgs& a) {
    auto* c = app.add_subcommand("synth", "Generate synthetic uplink traces (trace CSV)");
    std::string presets;
    for (auto n : ulp::synth::preset_names()) presets += (presets.empty() ? "" : ", ") + std::string(n);
    c->add_option("--preset", a.preset, "Scenario preset: " + presets)->capture_default_str();
    c->add_option("--seed", a.seed, "Seed of the first trace")->capture_default_str();
    c->add_option("--count", a.count, "Number of traces (seeds seed, seed+1, ...)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    c->add_option("--duration", a.duration, "Trace length in seconds (default: preset)");
    c->add_option("--handover-rate", a.handover_rate, "Handovers per minute (default: preset)");
    c->add_option("--dropout-prob", a.dropout_prob, "Probability that a handover drops throughput to zero");
    c->add_option("--out", a.out,
                  "Output CSV file, '-' for stdout, or a directory (required when --count > 1)")
        ->required();
}

int run_synth(const SynthArgs& a) {
    ulp::synth::Scenario base = ulp::synth::preset(a.preset);
    if (a.duration) base.duration_s = *a.duration;
    if (a.handover_rate) base.handover_rate_per_min = *a.handover_rate;
    if (a.dropout_prob) base.dropout_prob = *a.dropout_prob;
    const bool to_dir = a.count > 1 || (a.out != "-" && fs::is_directory(a.out));
    if (a.out == "-" && a.count > 1) usage("--out - writes a single trace; use a directory with --count");

    json outputs = json::array();
    for (std::size_t i = 0; i < a.count; ++i) {
        ulp::synth::Scenario s = base;
        s.seed = a.seed + i;
        s.validate();
        const auto trace = ulp::synth::synth_trace(s);
        double rsrp = 0.0, thpt = 0.0;
        for (const auto& x : trace.samples) {
            rsrp += x.rsrp_dbm;
            thpt += x.thpt_mbps;
        }
        const auto n = static_cast<double>(trace.samples.size());
        std::string path = a.out;
        if (to_dir) path = (fs::path(a.out) / (trace.meta.name + ".csv")).string();
        if (path == "-") {
            ulp::data::write_trace_csv(std::cout, trace);
        } else {
            std::ostringstream os;
            ulp::data::write_trace_csv(os, trace);
            emit(path, os.str());
        }
        outputs.push_back({{"path", path},
                           {"name", trace.meta.name},
                           {"seed", s.seed},
                           {"samples", trace.samples.size()},
                           {"mean_rsrp_dbm", rsrp / n},
                           {"mean_thpt_mbps", thpt / n}});
    }
    if (a.out != "-") {
        json cfg = base.to_json();
        cfg.erase("seed");
        std::cout << dump({{"command", "synth"},
                           {"config", {{"scenario", cfg}, {"seed", a.seed}, {"count", a.count}, {"out", a.out}}},
                           {"traces", outputs}});
    }
    return 0;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
    std::string model = "convlstm";
    std::string features = "android-api";
    std::string data;
    std::string out;
    std::optional<std::size_t> epochs;
    std::size_t batch_size = ulp::eval::kDefaultBatchSize;
    double lr = ulp::ad::AdamConfig{}.lr;
    std::uint64_t seed = 1;
    double validation_fraction = 0.1;
    bool last_epoch = false;
    bool progress = false;
    std::optional<std::size_t> convlstm_channels, convlstm_kernel, fc, lstm_layers, hidden, cnn_channels, cnn_kernel,
        tf_layers, tf_heads, tf_model_dim, tf_ff_dim;
};

void add_train(CLI::App& app, TrainArgs& a) {
    auto* c = app.add_subcommand("train", "Train a predictor on a directory of trace CSVs");
    c->add_option("--model", a.model, "convlstm | lstm | cnn-lstm | transformer")->capture_default_str();
    c->add_option("--features", a.features, "android-api | full | sure")->capture_default_str();
    c->add_option("--data", a.data, std::string("Trace CSV file or directory (default: $") + kDataEnv + ")");
    c->add_option("--out", a.out, "Checkpoint path")->required();
    c->add_option("--epochs", a.epochs, "Epochs (default: 10 / 125 / 100 / 150 by architecture)");
    c->add_option("--batch-size", a.batch_size, "Mini-batch size")->capture_default_str();
    c->add_option("--lr", a.lr, "Adam learning rate")->capture_default_str();
    c->add_option("--seed", a.seed, "Initialization and shuffle seed")->capture_default_str();
    c->add_option("--validation-fraction", a.validation_fraction, "Share of traces held out for validation")
        ->capture_default_str();
    c->add_flag("--last-epoch", a.last_epoch, "Keep the last epoch's weights, not the best validation epoch's");
    c->add_flag("--progress", a.progress, "Print one line per epoch to stderr");
    c->add_option("--convlstm-channels", a.convlstm_channels, "ConvLSTM channels (32)");
    c->add_option("--convlstm-kernel", a.convlstm_kernel, "ConvLSTM kernel width (3)");
    c->add_option("--fc", a.fc, "Dense layer width of ConvLSTM and LSTM (64)");
    c->add_option("--lstm-layers", a.lstm_layers, "Stacked LSTM layers (2)");
    c->add_option("--hidden", a.hidden, "LSTM hidden size of LSTM and CNN-LSTM (128)");
    c->add_option("--cnn-channels", a.cnn_channels, "CNN-LSTM convolution channels (16)");
    c->add_option("--cnn-kernel", a.cnn_kernel, "CNN-LSTM kernel width (3)");
    c->add_option("--tf-layers", a.tf_layers, "Transformer encoder layers (2)");
    c->add_option("--tf-heads", a.tf_heads, "Attention heads (4)");
    c->add_option("--tf-model-dim", a.tf_model_dim, "Transformer model width (256)");
    c->add_option("--tf-ff-dim", a.tf_ff_dim, "Transformer feed-forward width (512)");
}

int run_train(const TrainArgs& a) {
    const auto kind = ulp::model::parse_model_kind(a.model);
    if (!kind) usage("unknown --model '" + a.model + "'");
    const auto feats = ulp::data::parse_feature_set(a.features);
    if (!feats) usage("unknown --features '" + a.features + "'");

    ulp::model::ModelSpec spec;
    spec.kind = *kind;
    spec.feature_set = *feats;
    spec.init_seed = a.seed;
    auto set = [](std::size_t& field, const std::optional<std::size_t>& v) {
        if (v) field = *v;
    };
    set(spec.convlstm_channels, a.convlstm_channels);
    set(spec.convlstm_kernel, a.convlstm_kernel);
    set(spec.convlstm_fc, a.fc);
    set(spec.lstm_fc, a.fc);
    set(spec.lstm_layers, a.lstm_layers);
    set(spec.lstm_hidden, a.hidden);
    set(spec.cnn_lstm_hidden, a.hidden);
    set(spec.cnn_channels, a.cnn_channels);
    set(spec.cnn_kernel, a.cnn_kernel);
    set(spec.tf_layers, a.tf_layers);
    set(spec.tf_heads, a.tf_heads);
    set(spec.tf_model_dim, a.tf_model_dim);
    set(spec.tf_ff_dim, a.tf_ff_dim);
    spec.validate();

    auto cfg = ulp::eval::TrainConfig::defaults(*kind);
    if (a.epochs) cfg.epochs = *a.epochs;
    cfg.batch_size = a.batch_size;
    cfg.optimizer.lr = a.lr;
    cfg.shuffle_seed = a.seed;
    cfg.validation_fraction = a.validation_fraction;
    cfg.restore_best = !a.last_epoch;
    cfg.validate();

    const std::string data = resolve_data(a.data);
    std::vector<std::string> files;
    const auto traces = load_traces(data, files);
    const auto ds = ulp::eval::prepare_dataset(traces, *feats);
    const auto model = ulp::eval::train(ulp::model::build(spec), ds, cfg, [&](const ulp::eval::EpochStats& s) {
        if (!a.progress) return;
        std::cerr << "epoch " << s.epoch << "/" << cfg.epochs << " loss " << ulp::format_fixed(s.train_loss, 6);
        if (s.validation_loss) std::cerr << " val " << ulp::format_fixed(*s.validation_loss, 6);
        std::cerr << "\n";
    });
    ulp::model::save_model(a.out, model);

    std::cout << dump({{"command", "train"},
                       {"config",
                        {{"data", data},
                         {"files", files},
                         {"model", spec.to_json()},
                         {"train", cfg.to_json()},
                         {"out", a.out}}},
                       {"windows", ds.size()},
                       {"parameters", ulp::model::parameter_count(model.params())},
                       {"history", model.history()},
                       {"train_meta", model.train_config()}});
    return 0;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::string model;
    std::string data;
    std::string report = "-";
    std::string tag = "unseen";
    std::vector<std::string> groups;
};

void add_eval(CLI::App& app, EvalArgs& a) {
    auto* c = app.add_subcommand("eval", "Score a checkpoint on trace CSVs (RMSE, cumulative MAPE)");
    c->add_option("--model", a.model, "Checkpoint written by train")->required();
    c->add_option("--data", a.data, std::string("Trace CSV file or directory (default: $") + kDataEnv + ")");
    c->add_option("--report", a.report, "Report path, '-' for stdout")->capture_default_str();
    c->add_option("--tag", a.tag, "Label stored in the report, e.g. seen / unseen")->capture_default_str();
    c->add_option("--group", a.groups,
                  "Named group of similar traces, NAME=member,member (members match trace names or scenarios)");
}

ulp::eval::Groups parse_groups(const std::vector<std::string>& specs) {
    ulp::eval::Groups out;
    for (const auto& g : specs) {
        const auto eq = g.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == g.size())
            usage("--group expects NAME=member[,member...], got '" + g + "'");
        auto& members = out[g.substr(0, eq)];
        std::stringstream ss(g.substr(eq + 1));
        for (std::string m; std::getline(ss, m, ',');)
            if (!m.empty()) members.push_back(m);
    }
    return out;
}

int run_eval(const EvalArgs& a) {
    const auto groups = parse_groups(a.groups);
    const std::string data = resolve_data(a.data);
    const auto model = ulp::model::load_model(a.model);
    std::vector<std::string> files;
    const auto traces = load_traces(data, files);
    json grp = json::object();
    for (const auto& [k, v] : groups) grp[k] = v;
    const json config{{"command", "eval"},
                      {"model_path", a.model},
                      {"data", data},
                      {"files", files},
                      {"tag", a.tag},
                      {"groups", grp},
                      {"model", model.spec().to_json()},
                      {"train", model.train_config()}};
    emit(a.report, dump(ulp::eval::evaluate(model, traces, a.tag, groups, config).to_json()));
    return 0;
}

// ---------------------------------------------------------------- predict

struct PredictArgs {
    std::string model;
    std::string trace;
    std::string out = "-";
};

void add_predict(CLI::App& app, PredictArgs& a) {
    auto* c = app.add_subcommand("predict", "Per-second one-step forecasts for one trace (CSV)");
    c->add_option("--model", a.model, "Checkpoint written by train")->required();
    c->add_option("--trace", a.trace, "Trace CSV")->required();
    c->add_option("--out", a.out, "Output CSV, '-' for stdout")->capture_default_str();
}

int run_predict(const PredictArgs& a) {
    const auto model = ulp::model::load_model(a.model);
    const auto trace = ulp::data::parse_trace_csv(a.trace);
    const std::size_t w = model.spec().window;
    const auto pred = ulp::eval::predict_trace(model, trace);
    const auto truth = ulp::eval::aligned_truth(trace, w);
    const auto base = ulp::eval::persistence_baseline(trace, w);
    const auto times = ulp::eval::target_times(trace, w);

    std::ofstream file;
    if (a.out != "-") {
        if (fs::path(a.out).has_parent_path()) fs::create_directories(fs::path(a.out).parent_path());
        file.open(a.out, std::ios::binary);
        if (!file) throw Error(ErrorKind::Io, kModule, "cannot write '" + a.out + "'");
    }
    std::ostream& os = a.out == "-" ? std::cout : file;
    const json config{{"command", "predict"},
                      {"model_path", a.model},
                      {"trace", a.trace},
                      {"model", model.spec().to_json()}};
    os << "# config " << config.dump() << "\n";
    os << "t,pred_mbps,truth_mbps,persistence_mbps\n";
    for (std::size_t i = 0; i < pred.size(); ++i)
        os << times[i] << ',' << ulp::format_double(pred[i]) << ',' << ulp::format_double(truth[i]) << ','
           << ulp::format_double(base[i]) << '\n';
    os.flush();
    if (!os) throw Error(ErrorKind::Io, kModule, "write to '" + a.out + "' failed");
    return 0;
}

// ---------------------------------------------------------------- maxthpt

struct MaxThptArgs {
    std::string band;
    std::optional<double> bw;
    std::optional<std::string> duplex;
    std::optional<int> scs;
    std::string pattern = "DDDDDDDSUU";
    std::string special = "6:4:4";
    int layers = 1;
    int qm = 8;
    std::string prb_table;
    bool all = false;
    bool as_json = false;
};

void add_maxthpt(CLI::App& app, MaxThptArgs& a) {
    auto* c = app.add_subcommand("maxthpt", "Peak uplink throughput of an NR carrier");
    c->add_option("--band", a.band, "n28 | n3 | n77, or a carrier id (n28_700, n3_1800, n77_3400, n77_3900)");
    c->add_option("--bw", a.bw, "Channel bandwidth in MHz (default: the band's deployed carrier)");
    c->add_option("--duplex", a.duplex, "fdd | tdd (default: the band's)");
    c->add_option("--scs", a.scs, "Subcarrier spacing in kHz (default: the band's, else 15 for FDD, 30 for TDD)");
    c->add_option("--tdd-pattern", a.pattern, "TDD slot pattern of D/S/U")->capture_default_str();
    c->add_option("--special", a.special, "Special slot DL:gap:UL symbols")->capture_default_str();
    c->add_option("--layers", a.layers, "MIMO layers")->capture_default_str();
    c->add_option("--qm", a.qm, "Modulation order (bits per symbol)")->capture_default_str();
    c->add_option("--prb-table", a.prb_table, "JSON rows [{scs_khz, bw_mhz, n_prb}] added to the built-in table");
    c->add_flag("--all", a.all, "All four deployed carriers");
    c->add_flag("--json", a.as_json, "JSON output with the exact rational bit rate");
}

std::optional<ulp::nr::BandInfo> find_band(const std::string& name, std::optional<double> bw) {
    std::optional<ulp::nr::BandInfo> hit;
    for (const auto& b : ulp::nr::band_table()) {
        if (name != b.id && name != b.nr_band) continue;
        if (name == b.id || (bw && *bw == b.bandwidth_mhz)) return b;
        if (!hit) hit = b;
    }
    return hit;
}

int run_maxthpt(const MaxThptArgs& a) {
    auto prbs = ulp::nr::PrbTable::builtin();
    if (!a.prb_table.empty()) prbs.load_json(a.prb_table);
    int dl = 0, gap = 0, ul = 0;
    {
        char c1 = 0, c2 = 0;
        std::istringstream ss(a.special);
        if (!(ss >> dl >> c1 >> gap >> c2 >> ul) || c1 != ':' || c2 != ':' || !ss.eof())
            usage("--special expects DL:GAP:UL, got '" + a.special + "'");
    }
    const auto pattern = ulp::nr::TddPattern::parse(a.pattern, dl, gap, ul);

    struct Row {
        std::string label;
        ulp::nr::UlLinkConfig cfg;
    };
    std::vector<Row> rows;
    auto make = [&](const std::string& label, ulp::nr::Duplex d, double bw, int scs) {
        auto cfg = ulp::nr::make_ul_config(d, bw, scs, prbs, pattern);
        cfg.layers = a.layers;
        cfg.modulation_order = a.qm;
        cfg.validate(prbs);
        rows.push_back({label, cfg});
    };

    if (a.all) {
        if (!a.band.empty() || a.bw || a.duplex || a.scs) usage("--all cannot be combined with --band/--bw/--duplex/--scs");
        for (const auto& b : ulp::nr::band_table())
            make(std::string(b.id), b.duplex, b.bandwidth_mhz, b.scs_khz);
    } else {
        std::optional<ulp::nr::BandInfo> info;
        if (!a.band.empty()) {
            info = find_band(a.band, a.bw);
            if (!info) usage("unknown --band '" + a.band + "'");
        }
        std::optional<ulp::nr::Duplex> duplex;
        if (a.duplex) {
            if (*a.duplex == "fdd" || *a.duplex == "FDD") duplex = ulp::nr::Duplex::Fdd;
            else if (*a.duplex == "tdd" || *a.duplex == "TDD") duplex = ulp::nr::Duplex::Tdd;
            else usage("--duplex must be fdd or tdd");
            if (info && *duplex != info->duplex)
                throw Error(ErrorKind::Config, kModule,
                            a.band + " is " + std::string(ulp::nr::to_string(info->duplex)));
        } else if (info) {
            duplex = info->duplex;
        } else {
            usage("give --band or --duplex (or --all)");
        }
        double bw = 0.0;
        if (a.bw) bw = *a.bw;
        else if (info) bw = info->bandwidth_mhz;
        else usage("--bw is required without --band");
        int scs = *duplex == ulp::nr::Duplex::Fdd ? 15 : 30;
        if (a.scs) scs = *a.scs;
        else if (info) scs = info->scs_khz;
        make(info ? std::string(info->nr_band) : std::string("custom"), *duplex, bw, scs);
    }

    json items = json::array();
    for (const auto& r : rows) {
        const auto exact = ulp::nr::max_ul_bitrate(r.cfg, prbs);
        items.push_back({{"band", r.label},
                         {"duplex", ulp::nr::to_string(r.cfg.duplex)},
                         {"bw_mhz", r.cfg.bandwidth_mhz},
                         {"scs_khz", r.cfg.scs_khz},
                         {"n_prb", r.cfg.n_prb},
                         {"layers", r.cfg.layers},
                         {"qm", r.cfg.modulation_order},
                         {"ul_fraction",
                          std::to_string(r.cfg.ul_symbol_fraction.numerator()) + "/" +
                              std::to_string(r.cfg.ul_symbol_fraction.denominator())},
                         {"bitrate_bps",
                          std::to_string(exact.numerator()) + "/" + std::to_string(exact.denominator())},
                         {"max_ul_mbps", ulp::nr::max_ul_throughput(r.cfg, prbs)}});
    }
    const json config{{"command", "maxthpt"},
                      {"band", a.band},
                      {"all", a.all},
                      {"tdd_pattern", pattern.to_string()},
                      {"special", a.special},
                      {"layers", a.layers},
                      {"qm", a.qm},
                      {"prb_table", a.prb_table}};
    if (a.as_json) {
        std::cout << dump({{"config", config}, {"rows", items}});
        return 0;
    }
    std::cout << "# config " << config.dump() << "\n";
    for (const auto& it : items)
        std::cout << it["band"].get<std::string>() << ' ' << it["duplex"].get<std::string>() << ' '
                  << ulp::format_double(it["bw_mhz"].get<double>()) << " MHz SCS " << it["scs_khz"].get<int>()
                  << " kHz " << it["n_prb"].get<int>() << " PRB UL " << it["ul_fraction"].get<std::string>() << ": "
                  << ulp::format_fixed(it["max_ul_mbps"].get<double>(), 2) << " Mbps\n";
    return 0;
}

// ---------------------------------------------------------------- arfcn

struct ArfcnArgs {
    std::vector<std::int64_t> values;
};

void add_arfcn(CLI::App& app, ArfcnArgs& a) {
    auto* c = app.add_subcommand("arfcn", "NR-ARFCN to carrier frequency (MHz) and deployed band");
    c->add_option("arfcn", a.values, "One or more NR-ARFCN values")->required();
}

int run_arfcn(const ArfcnArgs& a) {
    std::cout << "# config " << json{{"command", "arfcn"}, {"arfcn", a.values}}.dump() << "\n";
    for (auto v : a.values) {
        const double mhz = ulp::nr::arfcn_to_mhz(v);
        std::cout << v << ' ' << ulp::format_double(mhz) << " MHz " << ulp::nr::to_string(ulp::nr::classify_band(mhz))
                  << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uplink throughput prediction toolkit"};
    app.name("ulpredict");
    app.require_subcommand(1);
    SynthArgs synth;
    TrainArgs train;
    EvalArgs eval;
    PredictArgs predict;
    MaxThptArgs maxthpt;
    ArfcnArgs arfcn;
    add_synth(app, synth);
    add_train(app, train);
    add_eval(app, eval);
    add_predict(app, predict);
    add_maxthpt(app, maxthpt);
    add_arfcn(app, arfcn);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand("synth")) return run_synth(synth);
        if (app.got_subcommand("train")) return run_train(train);
        if (app.got_subcommand("eval")) return run_eval(eval);
        if (app.got_subcommand("predict")) return run_predict(predict);
        if (app.got_subcommand("maxthpt")) return run_maxthpt(maxthpt);
        if (app.got_subcommand("arfcn")) return run_arfcn(arfcn);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << kModule << ": " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << kModule << ": " << e.what() << "\n";
        return 1;
    }
    return 2;
}
