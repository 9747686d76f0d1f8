#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sqlab/experiments.hpp"

using namespace sqlab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_out(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
}

struct CommonOpts {
    std::string config, out, format = "json";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "JSON config file");
    cmd->add_option("--out", o.out, "output file (stdout when omitted)");
    cmd->add_option("--format", o.format, "json, csv or svg");
    cmd->add_option("--seed", o.seed, "override the config seed")
        ->each([&](const std::string&) { o.seed_set = true; });
}

ExperimentConfig load_config(const CommonOpts& o, const std::string& kind) {
    ExperimentConfig cfg =
        o.config.empty() ? ExperimentConfig{} : ExperimentConfig::from_json(slurp(o.config));
    cfg.kind = kind;
    if (o.seed_set) cfg.seed = o.seed;
    if (kind == "counterexample" && o.config.empty()) {
        cfg.n = 8192;
        cfg.p = 1.5;
        cfg.q = 2.0;
    }
    if (kind == "tile-audit" && o.config.empty()) {
        cfg.n = 512;
        cfg.length = 8;
        cfg.trials = 20;
    }
    return cfg;
}

// signal fields may be inline containers or paths to one
Signal load_signal(const nlohmann::json& j) {
    if (j.is_string()) return signal_from_json(slurp(j.get<std::string>()));
    return signal_from_json(j.dump());
}

int run_square(const CommonOpts& o) {
    if (o.config.empty()) throw std::runtime_error("square needs --config");
    if (o.format != "json") throw std::runtime_error("square only emits json signals");
    auto j = nlohmann::json::parse(slurp(o.config));
    std::string op = j.at("op").get<std::string>();
    Signal result;
    if (op == "linear_square") {
        Signal f = load_signal(j.at("f"));
        result = linear_square_unit(f, j.at("n_from").get<long long>(),
                                    j.at("n_to").get<long long>());
    } else if (op == "bilinear_project" || op == "bilinear_square") {
        Signal f = load_signal(j.at("f"));
        Signal g = load_signal(j.at("g"));
        if (op == "bilinear_project") {
            auto iv = j.at("interval");
            result = bilinear_project(
                f, g, FreqInterval(iv[0].get<long long>(), iv[1].get<long long>(), f.grid.length));
        } else {
            auto s = j.at("strips");
            StripFamily strips(s.at("a0").get<long long>(), s.at("width").get<long long>(),
                               s.value("gap", 0LL), s.at("n_min").get<int>(),
                               s.at("n_max").get<int>(), f.grid.length);
            result = bilinear_square(f, g, strips);
        }
    } else {
        throw std::runtime_error("square: unknown op " + op);
    }
    write_out(o.out, to_json(result));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"square function laboratory"};
    app.require_subcommand(1);

    CommonOpts oc, ob, ot, os, orep;
    CLI::App* counter = app.add_subcommand("counterexample", "indicator-pair scaling run");
    add_common(counter, oc);
    CLI::App* bound = app.add_subcommand("boundedness", "ratio sweep over random inputs");
    add_common(bound, ob);
    CLI::App* audit = app.add_subcommand("tile-audit", "collection and decomposition audits");
    add_common(audit, ot);
    CLI::App* square = app.add_subcommand("square", "one-shot operator evaluation");
    add_common(square, os);
    CLI::App* report = app.add_subcommand("report", "re-emit a saved json report");
    add_common(report, orep);

    CLI11_PARSE(app, argc, argv);

    try {
        if (counter->parsed()) {
            ExperimentReport rep = run_counterexample(load_config(oc, "counterexample"));
            write_out(oc.out, emit(rep, oc.format));
            return rep.pass() ? 0 : 1;
        }
        if (bound->parsed()) {
            ExperimentReport rep = run_boundedness(load_config(ob, "boundedness"));
            write_out(ob.out, emit(rep, ob.format));
            return rep.pass() ? 0 : 1;
        }
        if (audit->parsed()) {
            ExperimentConfig cfg = load_config(ot, "tile-audit");
            if (ot.format == "svg") {
                const CollectionParams& cp = cfg.collection;
                Collection C = build_collection(
                    cfg.grid(),
                    StripFamily(cp.a0, cp.width, cp.gap, cp.n_min, cp.n_max, cfg.length),
                    cp.depth, cp.extent, cp.seeds);
                write_out(ot.out, svg_tile_picture(C));
                return 0;
            }
            ExperimentReport rep = run_tile_audit(cfg);
            write_out(ot.out, emit(rep, ot.format));
            return rep.pass() ? 0 : 1;
        }
        if (square->parsed()) return run_square(os);
        if (report->parsed()) {
            if (orep.config.empty()) throw std::runtime_error("report needs --config");
            ExperimentReport rep = report_from_json(slurp(orep.config));
            write_out(orep.out, emit(rep, orep.format));
            return rep.pass() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
