// mlsim: multilayer interaction networks — weighted similarity (ICC),
// significance via reshuffled reference layers, bootstrap envelopes, layer
// overlap, synthetic data generation, and graph export.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mlsim/attributes.hpp"
#include "mlsim/errors.hpp"
#include "mlsim/events.hpp"
#include "mlsim/icc.hpp"
#include "mlsim/io.hpp"
#include "mlsim/network.hpp"
#include "mlsim/nodes.hpp"
#include "mlsim/overlap.hpp"
#include "mlsim/resampling.hpp"
#include "mlsim/rng.hpp"
#include "mlsim/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mlsim;

namespace {

struct Options {
    // inputs
    std::string events_path;
    std::string counts_path;
    std::string attrs_path;
    std::vector<std::string> layer_filter;
    std::vector<std::string> variables;
    std::vector<std::string> encodings; // var=label:code,label:code,...

    // ingest
    double min_span_days = 90.0;
    long min_calls = 170;
    long min_sms = 950;
    double min_proximity_hours = 200.0;
    bool no_participant_filter = false;
    bool all_hours = false;
    double rssi_threshold = -75.0;
    std::string tz_offset = "+01:00";
    double gap_cap = 600.0;

    // analysis
    double alpha = 1.0;
    bool alpha_given = false;
    std::string alpha_grid;
    std::string convention = "canonical";
    std::string null_model = "link-reshuffle";
    std::string sidedness = "greater";
    std::string estimator = "literal";
    std::string pair_domain = "union";
    std::size_t replicas = 10000;
    std::size_t bootstrap_replicas = 1000;
    double prune = 0.0;

    // synth
    std::size_t synth_nodes = 100;
    std::vector<std::string> synth_layers;     // name:rate:dispersion
    std::vector<std::string> synth_attrs;      // name:kind
    std::vector<std::string> synth_homophily;  // layer:attr:strength
    double synth_coupling = 0.0;
    bool cross_links = false;

    // run
    std::uint64_t seed = 42;
    std::string out_dir;
    std::string format = "csv";
    unsigned threads = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw InputError("bad " + what + " '" + s + "'");
    return v;
}

// "+01:00" / "-05:30" -> signed seconds
std::int64_t parse_tz_offset(const std::string& s) {
    const std::string msg = "bad timezone offset '" + s + "' (expected +HH:MM)";
    if (s.size() != 6 || (s[0] != '+' && s[0] != '-') || s[3] != ':') throw InputError(msg);
    for (std::size_t i : {1u, 2u, 4u, 5u})
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw InputError(msg);
    const std::int64_t hours = (s[1] - '0') * 10 + (s[2] - '0');
    const std::int64_t minutes = (s[4] - '0') * 10 + (s[5] - '0');
    if (hours > 14 || minutes > 59) throw InputError(msg);
    const std::int64_t total = hours * 3600 + minutes * 60;
    return s[0] == '-' ? -total : total;
}

// "start:stop:step" -> inclusive grid, snapped to 1e-9 to keep 0.1-steps tidy
std::vector<double> parse_alpha_grid(const std::string& s) {
    auto parts = split(s, ':');
    if (parts.size() != 3) throw InputError("bad alpha grid '" + s + "' (expected start:stop:step)");
    const double start = parse_double(parts[0], "grid start");
    const double stop = parse_double(parts[1], "grid stop");
    const double step = parse_double(parts[2], "grid step");
    if (step <= 0.0) throw InputError("alpha grid step must be > 0");
    if (stop < start) throw InputError("alpha grid stop must be >= start");
    std::vector<double> out;
    for (int k = 0;; ++k) {
        double v = start + k * step;
        v = std::round(v * 1e9) / 1e9;
        if (v > stop + 1e-9) break;
        out.push_back(std::min(v, stop));
    }
    return out;
}

std::vector<double> alpha_points(const Options& o, bool default_grid) {
    if (!o.alpha_grid.empty()) return parse_alpha_grid(o.alpha_grid);
    if (o.alpha_given || !default_grid) return {o.alpha};
    return parse_alpha_grid("0:2:0.1");
}

struct Dataset {
    NodeTable nodes;
    std::vector<DirectedCountLayer> layers;
    AttributeTable attrs;
    std::optional<std::size_t> participants; // events input only
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return in;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    return out;
}

Dataset load_dataset(const Options& o, bool need_attrs) {
    if (o.events_path.empty() == o.counts_path.empty())
        throw InputError("exactly one of --events or --counts is required");

    Dataset data;
    if (!o.events_path.empty()) {
        auto in = open_input(o.events_path);
        const auto events = parse_events(in, o.events_path, data.nodes);

        std::vector<NodeId> kept;
        if (o.no_participant_filter) {
            std::set<NodeId> seen;
            for (const auto& e : events) {
                seen.insert(e.source);
                seen.insert(e.target);
            }
            kept.assign(seen.begin(), seen.end());
        } else {
            ActivityThresholds t;
            t.min_span_days = o.min_span_days;
            t.min_calls = o.min_calls;
            t.min_sms = o.min_sms;
            t.min_proximity_hours = o.min_proximity_hours;
            kept = filter_participants(events, t).first;
        }
        data.participants = kept.size();

        std::vector<InteractionEvent> prox;
        bool has_call = false, has_sms = false;
        for (const auto& e : events) {
            if (e.channel == Channel::proximity)
                prox.push_back(e);
            else if (e.channel == Channel::call)
                has_call = true;
            else
                has_sms = true;
        }
        if (!o.all_hours && !prox.empty())
            prox = filter_proximity_window(prox, parse_tz_offset(o.tz_offset));

        if (has_call) data.layers.push_back(aggregate_counts(events, Channel::call, kept));
        if (has_sms) data.layers.push_back(aggregate_counts(events, Channel::sms, kept));
        if (!prox.empty())
            data.layers.push_back(aggregate_proximity(prox, kept, o.rssi_threshold, o.gap_cap));
    } else {
        auto in = open_input(o.counts_path);
        data.layers = io::read_counts_csv(in, o.counts_path, data.nodes).layers;
    }

    if (!o.layer_filter.empty()) {
        std::vector<DirectedCountLayer> picked;
        for (const auto& want : o.layer_filter) {
            auto it = std::find_if(data.layers.begin(), data.layers.end(),
                                   [&](const auto& l) { return l.name == want; });
            if (it == data.layers.end()) throw InputError("no layer named '" + want + "'");
            picked.push_back(std::move(*it));
        }
        data.layers = std::move(picked);
    }
    if (data.layers.empty()) throw InputError("no layers in input");

    if (need_attrs) {
        if (o.attrs_path.empty()) throw InputError("--attrs is required for this command");
        auto in = open_input(o.attrs_path);
        io::read_attributes_csv(in, o.attrs_path, data.nodes, data.attrs);
        for (const auto& spec : o.encodings) {
            auto eq = spec.find('=');
            if (eq == std::string::npos)
                throw InputError("bad encoding '" + spec + "' (expected var=label:code,...)");
            std::map<std::string, double> enc;
            for (const auto& pair : split(spec.substr(eq + 1), ',')) {
                auto colon = pair.rfind(':');
                if (colon == std::string::npos)
                    throw InputError("bad encoding entry '" + pair + "' (expected label:code)");
                enc[pair.substr(0, colon)] =
                    parse_double(pair.substr(colon + 1), "encoding code");
            }
            data.attrs.declare_encoding(spec.substr(0, eq), std::move(enc));
        }
        data.attrs.finalize(&std::cerr);
    }
    return data;
}

std::vector<std::string> pick_variables(const Options& o, const AttributeTable& attrs) {
    if (!o.variables.empty()) return o.variables;
    auto all = attrs.variable_names();
    if (all.empty()) throw InputError("attribute table has no variables");
    return all;
}

// Everything that determines results goes into the hashed snapshot; --out
// and --threads deliberately do not (outputs are invariant to them).
json input_snapshot(const Options& o) {
    json j;
    if (!o.events_path.empty()) {
        j["events"] = o.events_path;
        j["min_span_days"] = o.min_span_days;
        j["min_calls"] = o.min_calls;
        j["min_sms"] = o.min_sms;
        j["min_proximity_hours"] = o.min_proximity_hours;
        j["participant_filter"] = !o.no_participant_filter;
        j["proximity_window"] = !o.all_hours;
        j["rssi_threshold"] = o.rssi_threshold;
        j["tz_offset"] = o.tz_offset;
        j["gap_cap"] = o.gap_cap;
    }
    if (!o.counts_path.empty()) j["counts"] = o.counts_path;
    if (!o.attrs_path.empty()) j["attrs"] = o.attrs_path;
    if (!o.layer_filter.empty()) j["layers"] = o.layer_filter;
    if (!o.encodings.empty()) j["encodings"] = o.encodings;
    return j;
}

void write_run_config(const Options& o, json snapshot, const std::string& hash) {
    snapshot["config_hash"] = hash;
    snapshot["out"] = o.out_dir;
    snapshot["threads"] = o.threads;
    auto out = open_output(fs::path(o.out_dir) / "run_config.json");
    out << snapshot.dump(2) << '\n';
}

int run_build(const Options& o) {
    json snapshot = input_snapshot(o);
    snapshot["subcommand"] = "build";
    snapshot["alpha"] = o.alpha;
    const std::string hash = io::config_hash_hex(snapshot.dump());

    Dataset data = load_dataset(o, false);
    fs::create_directories(o.out_dir);

    json manifest;
    manifest["config_hash"] = hash;
    manifest["alpha"] = o.alpha;
    if (data.participants) manifest["participants"] = *data.participants;
    manifest["layers"] = json::array();
    for (const auto& counts : data.layers) {
        WeightedLayer layer = build_layer(counts, o.alpha);
        auto out = open_output(fs::path(o.out_dir) / ("layer_" + layer.name + ".csv"));
        io::write_edges_csv(out, layer, data.nodes, 0.0, hash);
        json l;
        l["name"] = layer.name;
        l["nodes"] = layer.node_set.size();
        l["edges"] = layer.edges.size();
        manifest["layers"].push_back(std::move(l));
    }
    auto mout = open_output(fs::path(o.out_dir) / "manifest.json");
    mout << manifest.dump(2) << '\n';
    write_run_config(o, std::move(snapshot), hash);
    return 0;
}

int run_similarity(const Options& o) {
    json snapshot = input_snapshot(o);
    snapshot["subcommand"] = "similarity";
    snapshot["alpha"] = o.alpha;
    snapshot["convention"] = o.convention;
    if (!o.variables.empty()) snapshot["variables"] = o.variables;
    const std::string hash = io::config_hash_hex(snapshot.dump());

    const IccConvention convention = icc_convention_from_name(o.convention);
    Dataset data = load_dataset(o, true);
    const auto variables = pick_variables(o, data.attrs);

    std::vector<io::IccRow> rows;
    std::size_t defined = 0;
    for (const auto& counts : data.layers) {
        WeightedLayer layer = build_layer(counts, o.alpha);
        for (const auto& variable : variables) {
            io::IccRow row;
            row.layer = counts.name;
            row.variable = variable;
            row.alpha = o.alpha;
            row.convention = convention;
            try {
                row.result = weighted_icc(layer, data.attrs, variable, convention);
                ++defined;
            } catch (const UndefinedStatError& e) {
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }

    fs::create_directories(o.out_dir);
    if (o.format == "json") {
        auto out = open_output(fs::path(o.out_dir) / "icc_results.json");
        io::write_icc_json(out, rows, false, hash);
    } else {
        auto out = open_output(fs::path(o.out_dir) / "icc_results.csv");
        io::write_icc_csv(out, rows, false, hash);
    }
    write_run_config(o, std::move(snapshot), hash);
    if (defined == 0) {
        std::cerr << "error: every requested statistic is undefined\n";
        return 3;
    }
    return 0;
}

int run_pvalues(const Options& o) {
    json snapshot = input_snapshot(o);
    snapshot["subcommand"] = "pvalues";
    snapshot["alpha"] = o.alpha;
    snapshot["convention"] = o.convention;
    snapshot["null_model"] = o.null_model;
    snapshot["sidedness"] = o.sidedness;
    snapshot["estimator"] = o.estimator;
    snapshot["replicas"] = o.replicas;
    snapshot["seed"] = o.seed;
    if (!o.variables.empty()) snapshot["variables"] = o.variables;
    const std::string hash = io::config_hash_hex(snapshot.dump());

    const IccConvention convention = icc_convention_from_name(o.convention);
    const NullModel null_model = null_model_from_name(o.null_model);
    const Sidedness sidedness = sidedness_from_name(o.sidedness);
    const PValueEstimator estimator = estimator_from_name(o.estimator);
    Dataset data = load_dataset(o, true);
    const auto variables = pick_variables(o, data.attrs);

    std::vector<io::PValueRow> rows;
    for (const auto& counts : data.layers) {
        WeightedLayer layer = build_layer(counts, o.alpha);
        for (const auto& variable : variables) {
            const std::uint64_t row_seed =
                rng::derive_seed(o.seed, "pvalues:" + counts.name + ":" + variable);
            try {
                io::PValueRow row;
                row.layer = counts.name;
                row.variable = variable;
                row.alpha = o.alpha;
                row.sig = icc_p_value(layer, data.attrs, variable, o.replicas, row_seed,
                                      null_model, sidedness, estimator, convention, o.threads);
                if (row.sig.replicas_discarded > 0)
                    std::cerr << "note: " << counts.name << "/" << variable << ": "
                              << row.sig.replicas_discarded
                              << " undefined null replicas discarded\n";
                rows.push_back(std::move(row));
            } catch (const UndefinedStatError& e) {
                std::cerr << "note: skipping " << counts.name << "/" << variable << ": "
                          << e.what() << '\n';
            }
        }
    }

    fs::create_directories(o.out_dir);
    if (o.format == "json") {
        auto out = open_output(fs::path(o.out_dir) / "pvalues.json");
        io::write_pvalues_json(out, rows, hash);
    } else {
        auto out = open_output(fs::path(o.out_dir) / "pvalues.csv");
        io::write_pvalues_csv(out, rows, hash);
    }
    write_run_config(o, std::move(snapshot), hash);
    if (rows.empty()) {
        std::cerr << "error: every requested statistic is undefined\n";
        return 3;
    }
    return 0;
}

int run_sweep(const Options& o) {
    json snapshot = input_snapshot(o);
    snapshot["subcommand"] = "sweep";
    snapshot["convention"] = o.convention;
    snapshot["bootstrap_replicas"] = o.bootstrap_replicas;
    snapshot["seed"] = o.seed;
    if (!o.variables.empty()) snapshot["variables"] = o.variables;
    const auto alphas = alpha_points(o, true);
    snapshot["alphas"] = alphas;
    const std::string hash = io::config_hash_hex(snapshot.dump());

    const IccConvention convention = icc_convention_from_name(o.convention);
    Dataset data = load_dataset(o, true);
    const auto variables = pick_variables(o, data.attrs);
    const bool with_std = o.bootstrap_replicas >= 2;

    std::vector<io::IccRow> rows;
    std::size_t defined = 0;
    for (const auto& counts : data.layers) {
        for (const auto& variable : variables) {
            auto points = icc_alpha_sweep(counts, data.attrs, variable, alphas, convention);
            for (std::size_t k = 0; k < points.size(); ++k) {
                io::IccRow row;
                row.layer = counts.name;
                row.variable = variable;
                row.alpha = points[k].alpha;
                row.convention = convention;
                row.result = points[k].result;
                row.error = points[k].error;
                if (points[k].result) ++defined;
                if (with_std && points[k].result) {
                    const std::uint64_t env_seed = rng::derive_seed(
                        o.seed, "sweep-envelope:" + counts.name + ":" + variable, k);
                    try {
                        row.r_std = icc_std_envelope(counts, data.attrs, variable,
                                                     points[k].alpha, o.bootstrap_replicas,
                                                     env_seed, convention, o.threads);
                    } catch (const UndefinedStatError&) {
                    }
                }
                rows.push_back(std::move(row));
            }
        }
    }

    fs::create_directories(o.out_dir);
    if (o.format == "json") {
        auto out = open_output(fs::path(o.out_dir) / "sweep.json");
        io::write_icc_json(out, rows, with_std, hash);
    } else {
        auto out = open_output(fs::path(o.out_dir) / "sweep.csv");
        io::write_icc_csv(out, rows, with_std, hash);
    }
    write_run_config(o, std::move(snapshot), hash);
    if (defined == 0) {
        std::cerr << "error: every sweep point is undefined\n";
        return 3;
    }
    return 0;
}

int run_overlap(const Options& o) {
    json snapshot = input_snapshot(o);
    snapshot["subcommand"] = "overlap";
    snapshot["pair_domain"] = o.pair_domain;
    const auto alphas = alpha_points(o, true);
    snapshot["alphas"] = alphas;
    const std::string hash = io::config_hash_hex(snapshot.dump());

    const PairDomain domain = pair_domain_from_name(o.pair_domain);
    Dataset data = load_dataset(o, false);
    const auto matrices = overlap_alpha_sweep(data.layers, alphas, domain, o.threads);

    std::size_t defined = 0;
    for (const auto& m : matrices) {
        const std::size_t n = m.layer_names.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (!std::isnan(m.r_p[m.index(i, j)])) ++defined;
    }

    fs::create_directories(o.out_dir);
    if (o.format == "json") {
        auto out = open_output(fs::path(o.out_dir) / "overlap.json");
        io::write_overlap_json(out, matrices, hash);
    } else {
        auto out = open_output(fs::path(o.out_dir) / "overlap.csv");
        io::write_overlap_csv(out, matrices, hash);
    }
    write_run_config(o, std::move(snapshot), hash);
    if (defined == 0) {
        std::cerr << "error: every layer pair is undefined at every alpha\n";
        return 3;
    }
    return 0;
}

SynthConfig make_synth_config(const Options& o) {
    SynthConfig cfg;
    cfg.n_nodes = o.synth_nodes;
    cfg.seed = o.seed;
    cfg.layer_coupling = o.synth_coupling;
    cfg.cross_link_mode = o.cross_links;

    auto layer_specs = o.synth_layers;
    if (layer_specs.empty())
        layer_specs = {"call:0.5:1", "sms:1:1", "proximity:2:1"};
    for (const auto& s : layer_specs) {
        auto f = split(s, ':');
        if (f.size() != 3)
            throw InputError("bad layer spec '" + s + "' (expected name:rate:dispersion)");
        cfg.layers.push_back(
            {f[0], parse_double(f[1], "layer rate"), parse_double(f[2], "layer dispersion")});
    }

    auto attr_specs = o.synth_attrs;
    if (attr_specs.empty()) attr_specs = {"gender:categorical", "score:numeric"};
    for (const auto& s : attr_specs) {
        auto f = split(s, ':');
        if (f.size() != 2) throw InputError("bad attribute spec '" + s + "' (expected name:kind)");
        if (f[1] != "numeric" && f[1] != "categorical")
            throw InputError("bad attribute kind '" + f[1] + "' (numeric | categorical)");
        cfg.attributes.push_back(
            {f[0], f[1] == "numeric" ? AttrKind::numeric : AttrKind::categorical});
    }

    for (const auto& s : o.synth_homophily) {
        auto f = split(s, ':');
        if (f.size() != 3)
            throw InputError("bad homophily spec '" + s + "' (expected layer:attribute:strength)");
        cfg.homophily.push_back({f[0], f[1], parse_double(f[2], "homophily strength")});
    }
    return cfg;
}

int run_synth(const Options& o) {
    const SynthConfig cfg = make_synth_config(o);

    json snapshot;
    snapshot["subcommand"] = "synth";
    snapshot["nodes"] = cfg.n_nodes;
    snapshot["seed"] = cfg.seed;
    snapshot["coupling"] = cfg.layer_coupling;
    snapshot["cross_links"] = cfg.cross_link_mode;
    snapshot["layers"] = json::array();
    for (const auto& l : cfg.layers)
        snapshot["layers"].push_back({{"name", l.name}, {"rate", l.rate},
                                      {"dispersion", l.dispersion}});
    snapshot["attributes"] = json::array();
    for (const auto& a : cfg.attributes)
        snapshot["attributes"].push_back(
            {{"name", a.name}, {"kind", a.kind == AttrKind::numeric ? "numeric" : "categorical"}});
    snapshot["homophily"] = json::array();
    for (const auto& h : cfg.homophily)
        snapshot["homophily"].push_back(
            {{"layer", h.layer}, {"attribute", h.attribute}, {"strength", h.strength}});
    const std::string hash = io::config_hash_hex(snapshot.dump());

    SynthData data = generate(cfg);
    fs::create_directories(o.out_dir);
    {
        auto out = open_output(fs::path(o.out_dir) / "counts.csv");
        io::write_counts_csv(out, data.layers, data.nodes, hash);
    }
    {
        auto out = open_output(fs::path(o.out_dir) / "attrs.csv");
        io::write_attributes_csv(out, data.attrs, data.nodes, hash);
    }
    write_run_config(o, std::move(snapshot), hash);
    return 0;
}

int run_export_graph(const Options& o) {
    json snapshot = input_snapshot(o);
    snapshot["subcommand"] = "export-graph";
    snapshot["alpha"] = o.alpha;
    snapshot["prune"] = o.prune;
    const std::string hash = io::config_hash_hex(snapshot.dump());

    Dataset data = load_dataset(o, false);
    fs::create_directories(o.out_dir);
    for (const auto& counts : data.layers) {
        WeightedLayer layer = build_layer(counts, o.alpha);
        {
            auto out = open_output(fs::path(o.out_dir) / ("edges_" + layer.name + ".csv"));
            io::write_edges_csv(out, layer, data.nodes, o.prune, hash);
        }
        {
            auto out = open_output(fs::path(o.out_dir) / ("nodes_" + layer.name + ".csv"));
            io::write_strengths_csv(out, layer, data.nodes, hash);
        }
    }
    write_run_config(o, std::move(snapshot), hash);
    return 0;
}

void add_input_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--events", o.events_path,
                    "events CSV (timestamp,source,target,layer,magnitude)");
    cmd->add_option("--counts", o.counts_path,
                    "pre-aggregated counts CSV (layer,source,target,value)");
    cmd->add_option("--layer", o.layer_filter, "restrict to named layers (repeatable)");
    cmd->add_option("--min-span-days", o.min_span_days,
                    "participant filter: required recording span, exclusive")
        ->capture_default_str();
    cmd->add_option("--min-calls", o.min_calls, "participant filter: minimum calls")
        ->capture_default_str();
    cmd->add_option("--min-sms", o.min_sms, "participant filter: minimum text messages")
        ->capture_default_str();
    cmd->add_option("--min-proximity-hours", o.min_proximity_hours,
                    "participant filter: minimum co-presence hours")
        ->capture_default_str();
    cmd->add_flag("--no-participant-filter", o.no_participant_filter,
                  "keep every node seen in the events file");
    cmd->add_flag("--all-hours", o.all_hours,
                  "keep proximity events at all local times (default: weekends plus "
                  "weekday evenings 18:00-24:00)");
    cmd->add_option("--rssi-threshold", o.rssi_threshold,
                    "minimum scan signal strength counted as co-presence")
        ->capture_default_str();
    cmd->add_option("--tz-offset", o.tz_offset, "fixed UTC offset for local time, +HH:MM")
        ->capture_default_str();
    cmd->add_option("--gap-cap", o.gap_cap,
                    "max seconds between scans that still count as contiguous presence")
        ->capture_default_str();
}

void add_attr_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--attrs", o.attrs_path, "attribute CSV (node,variable,value,kind)");
    cmd->add_option("--variable", o.variables, "variables to analyze (default: all; repeatable)");
    cmd->add_option("--encoding", o.encodings,
                    "categorical encoding, var=label:code,label:code (repeatable)");
    cmd->add_option("--convention", o.convention,
                    "r denominator: canonical (|r|<=1) or strict-literal (|r|<=1/2)")
        ->capture_default_str()
        ->check(CLI::IsMember({"canonical", "strict-literal"}));
}

} // namespace

int main(int argc, char** argv) {
    Options o;
    const char* env_out = std::getenv("MLSIM_OUT");
    o.out_dir = env_out && *env_out ? env_out : ".";

    CLI::App app{"multilayer interaction network similarity toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--out", o.out_dir, "output directory (default: $MLSIM_OUT or .)")
        ->envname("MLSIM_OUT");
    app.add_option("--format", o.format, "output format for result tables")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", o.seed, "master seed; all randomness derives from it")
        ->capture_default_str();
    app.add_option("--threads", o.threads, "worker threads (0 = hardware)")
        ->capture_default_str();

    auto* build = app.add_subcommand("build", "build weighted layers and a manifest");
    add_input_flags(build, o);
    build->add_option("--alpha", o.alpha, "link weight exponent")->capture_default_str();

    auto* similarity =
        app.add_subcommand("similarity", "weighted intraclass correlation per layer/variable");
    add_input_flags(similarity, o);
    add_attr_flags(similarity, o);
    similarity->add_option("--alpha", o.alpha, "link weight exponent")->capture_default_str();

    auto* pvalues =
        app.add_subcommand("pvalues", "significance against reshuffled reference layers");
    add_input_flags(pvalues, o);
    add_attr_flags(pvalues, o);
    pvalues->add_option("--alpha", o.alpha, "link weight exponent")->capture_default_str();
    pvalues->add_option("--replicas", o.replicas, "reference layers per statistic")
        ->capture_default_str();
    pvalues->add_option("--null-model", o.null_model, "reference model")
        ->capture_default_str()
        ->check(CLI::IsMember({"link-reshuffle", "attribute-permutation"}));
    pvalues->add_option("--sidedness", o.sidedness, "p-value sidedness")
        ->capture_default_str()
        ->check(CLI::IsMember({"greater", "two-sided"}));
    pvalues->add_option("--estimator", o.estimator,
                        "literal count/B or smoothed (1+count)/(B+1)")
        ->capture_default_str()
        ->check(CLI::IsMember({"literal", "smoothed"}));

    auto* sweep = app.add_subcommand("sweep", "ICC versus alpha with a bootstrap std envelope");
    add_input_flags(sweep, o);
    add_attr_flags(sweep, o);
    sweep->add_option("--alpha", o.alpha, "single alpha instead of a grid");
    sweep->add_option("--alpha-grid", o.alpha_grid, "start:stop:step (default 0:2:0.1)");
    sweep->add_option("--bootstrap-replicas", o.bootstrap_replicas,
                      "edge resamples per envelope point (< 2 disables the envelope)")
        ->capture_default_str();

    auto* overlap = app.add_subcommand("overlap", "Pearson correlation of link weights per layer pair");
    add_input_flags(overlap, o);
    overlap->add_option("--alpha", o.alpha, "single alpha instead of a grid");
    overlap->add_option("--alpha-grid", o.alpha_grid, "start:stop:step (default 0:2:0.1)");
    overlap->add_option("--pair-domain", o.pair_domain,
                        "pairs entering the correlation: union of linked pairs, their "
                        "intersection, or all node pairs")
        ->capture_default_str()
        ->check(CLI::IsMember({"union", "intersection", "all"}));

    auto* synth = app.add_subcommand("synth", "generate synthetic counts and attributes");
    synth->add_option("--nodes", o.synth_nodes, "node count")->capture_default_str();
    synth->add_option("--layer-spec", o.synth_layers,
                      "layer as name:rate:dispersion (repeatable; default "
                      "call:0.5:1 sms:1:1 proximity:2:1)");
    synth->add_option("--attr-spec", o.synth_attrs,
                      "attribute as name:kind (repeatable; default gender:categorical "
                      "score:numeric)");
    synth->add_option("--homophily", o.synth_homophily,
                      "planted assortativity as layer:attribute:strength (repeatable)");
    synth->add_option("--coupling", o.synth_coupling,
                      "shared latent rate across layers, 0..1")
        ->capture_default_str();
    synth->add_flag("--cross-links", o.cross_links,
                    "plant each node's strongest link on an opposite-group node");

    auto* exportg = app.add_subcommand("export-graph", "edge and node-strength tables for plotting");
    add_input_flags(exportg, o);
    exportg->add_option("--alpha", o.alpha, "link weight exponent")->capture_default_str();
    exportg->add_option("--prune", o.prune, "omit edges below this weight from the edge table")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (auto* cmd : {sweep, overlap})
        if (cmd->parsed() && cmd->count("--alpha") > 0) o.alpha_given = true;

    try {
        if (build->parsed()) return run_build(o);
        if (similarity->parsed()) return run_similarity(o);
        if (pvalues->parsed()) return run_pvalues(o);
        if (sweep->parsed()) return run_sweep(o);
        if (overlap->parsed()) return run_overlap(o);
        if (synth->parsed()) return run_synth(o);
        if (exportg->parsed()) return run_export_graph(o);
    } catch (const UndefinedStatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
