#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ringbif/parallel.hpp"
#include "serialize.hpp"
#include "svg.hpp"

#ifndef RINGBIF_VERSION
#define RINGBIF_VERSION "0.0.0"
#endif

namespace ringbif::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string model = "normal";
    int n = 3;
    double r = 0.0;
    double p = 0.0;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string output_dir = ".";
    std::string format;

    double box = 0.0;
    int starts = -1;
    int grid = -1;
    double dedup_tol = 1e-6;

    double r_min = -1.0;
    double r_max = 2.0;
    bool svg = false;
    std::string var = "x1";
    int max_branches = 100;

    std::string r_grid = "-2:5:0.05";
    std::string p_grid = "0:2:0.05";

    long samples = 10'000;
    bool mirror = false;

    std::string r_list = "-1,0,1,2";
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

ModelKind kind_of(const Options& o) {
    return o.model == "repressor" ? ModelKind::MutualRepressorRing : ModelKind::NormalFormRing;
}

int resolved_threads(const Options& o) { return o.threads > 0 ? o.threads : default_thread_count(); }

std::vector<double> parse_list(const std::string& text, char sep) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + item + "'");
        }
        if (used != item.size() || !std::isfinite(v)) throw UsageError("not a number: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<double> parse_axis(const std::string& spec, const char* name) {
    const auto parts = parse_list(spec, ':');
    if (parts.size() != 3 || std::count(spec.begin(), spec.end(), ':') != 2) {
        throw UsageError(std::string("--") + name + " expects min:max:step");
    }
    auto axis = make_axis(parts[0], parts[1], parts[2]);
    if (axis.size() < 2) {
        throw UsageError(std::string("--") + name + " '" + spec + "' yields fewer than two grid points");
    }
    return axis;
}

std::size_t coordinate_index(const Options& o) {
    const ModelKind kind = kind_of(o);
    if (o.var.size() >= 2 && (o.var[0] == 'x' || o.var[0] == 'y')) {
        int idx = 0;
        try {
            std::size_t used = 0;
            idx = std::stoi(o.var.substr(1), &used);
            if (used != o.var.size() - 1) idx = 0;
        } catch (const std::exception&) {
            idx = 0;
        }
        if (idx >= 1 && idx <= o.n) {
            if (o.var[0] == 'x') return static_cast<std::size_t>(idx - 1);
            if (kind == ModelKind::MutualRepressorRing) return static_cast<std::size_t>(o.n + idx - 1);
        }
    }
    throw UsageError("--var must name a coordinate such as x1" +
                     std::string(kind == ModelKind::MutualRepressorRing ? " or y1" : ""));
}

SearchConfig search_config(const Options& o, SearchConfig base) {
    if (o.box > 0.0) base.box_half_width = o.box;
    if (o.starts >= 0) base.random_starts = o.starts;
    if (o.grid >= 0) base.grid_points_per_axis = o.grid;
    base.dedup_tol = o.dedup_tol;
    base.rng_seed = o.seed;
    return base;
}

class Run {
public:
    Run(std::string command, const Options& o, std::ostream& out)
        : command_(std::move(command)), dir_(o.output_dir), out_(out), start_(std::chrono::steady_clock::now()) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw UsageError("cannot create output directory '" + dir_.string() + "': " + ec.message());
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path path = dir_ / name;
        std::ofstream f(path, std::ios::binary);
        f << content;
        f.close();
        if (!f) throw std::runtime_error("could not write " + path.string());
        outputs_.push_back(name);
        out_ << "wrote " << path.string() << "\n";
    }

    void finish(const std::string& base, json parameters, std::vector<std::uint64_t> seeds) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        const std::string name = base + ".manifest.json";
        outputs_.push_back(name);
        json m{{"command", command_},
               {"parameters", std::move(parameters)},
               {"seeds", seeds},
               {"version", RINGBIF_VERSION},
               {"duration_seconds", secs},
               {"outputs", outputs_}};
        const fs::path path = dir_ / name;
        std::ofstream f(path, std::ios::binary);
        f << dump(m);
        if (!f) throw std::runtime_error("could not write " + path.string());
        out_ << "wrote " << path.string() << "\n";
    }

private:
    std::string command_;
    fs::path dir_;
    std::ostream& out_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> outputs_;
};

json common_parameters(const Options& o) {
    return json{{"model", o.model}, {"n", o.n}, {"threads", resolved_threads(o)}, {"output_dir", o.output_dir}};
}

std::string pick_format(const Options& o, std::initializer_list<const char*> allowed) {
    if (o.format.empty()) return *allowed.begin();
    for (const char* a : allowed)
        if (o.format == a) return o.format;
    throw UsageError("--format " + o.format + " is not available for this command");
}

int cmd_steady_states(const Options& o, std::ostream& out) {
    const std::string fmt = pick_format(o, {"json", "csv"});
    const ModelSpec model = ModelSpec::make(kind_of(o), o.n, o.r, o.p);
    SearchConfig cfg = search_config(o, SearchConfig{});
    cfg.threads = resolved_threads(o);

    Run run("steady-states", o, out);
    const auto states = find_all(model, cfg);
    if (fmt == "json") {
        run.write("steady_states.json", dump(states_json(model, states)));
    } else {
        run.write("steady_states.csv", states_csv(model, states));
    }
    out << states.size() << " steady states, " << count_stable(states) << " stable\n";

    json params = common_parameters(o);
    params.update({{"r", o.r}, {"p", o.p}, {"seed", o.seed}, {"box", cfg.resolved_box(model)},
                   {"random_starts", cfg.random_starts}, {"grid_points_per_axis", cfg.resolved_grid(model)},
                   {"dedup_tol", cfg.dedup_tol}, {"format", fmt}});
    run.finish("steady_states", params, {o.seed});
    return kSuccess;
}

int cmd_continue(const Options& o, std::ostream& out) {
    pick_format(o, {"json"});
    const ModelKind kind = kind_of(o);
    (void)ModelSpec::make(kind, o.n, o.r_min, o.p);
    const std::size_t coord = o.svg ? coordinate_index(o) : 0;
    if (!(o.r_min < o.r_max)) throw UsageError("--r-min must be below --r-max");
    if (o.max_branches < 1) throw UsageError("--max-branches must be positive");

    ContinuationControls controls;
    controls.max_branches = o.max_branches;
    SearchConfig seeds = sweep_search_defaults(kind, o.n);
    controls.search = search_config(o, seeds);
    controls.search.threads = resolved_threads(o);

    Run run("continue", o, out);
    const Diagram d = build_diagram(kind, o.n, o.p, o.r_min, o.r_max, controls);
    run.write("diagram.json", dump(diagram_json(d)));
    if (o.svg) run.write("diagram.svg", diagram_svg(d, coord, o.var));
    out << d.branches.size() << " branches, " << d.special_points(SpecialKind::BranchPoint).size() << " BP, "
        << d.special_points(SpecialKind::LimitPoint).size() << " LP" << (d.truncated ? " (truncated)" : "") << "\n";

    json params = common_parameters(o);
    params.update({{"p", o.p}, {"r_min", o.r_min}, {"r_max", o.r_max}, {"seed", o.seed}, {"svg", o.svg},
                   {"var", o.var}, {"max_branches", o.max_branches},
                   {"random_starts", controls.search.random_starts},
                   {"grid_points_per_axis", controls.search.grid_points_per_axis}});
    run.finish("diagram", params, {o.seed});
    return kSuccess;
}

int cmd_phase_diagram(const Options& o, std::ostream& out) {
    const std::string fmt = pick_format(o, {"csv", "json"});
    const ModelKind kind = kind_of(o);
    const auto r_axis = parse_axis(o.r_grid, "r-grid");
    const auto p_axis = parse_axis(o.p_grid, "p-grid");
    SearchConfig cfg = search_config(o, sweep_search_defaults(kind, o.n));
    cfg.threads = resolved_threads(o);

    Run run("phase-diagram", o, out);
    const PhaseDiagram d = run_sweep(kind, o.n, r_axis, p_axis, cfg);
    if (fmt == "csv") {
        run.write("phase_diagram.csv", phase_csv(d));
    } else {
        run.write("phase_diagram.json", dump(phase_json(d)));
    }
    if (o.svg) run.write("phase_diagram.svg", phase_svg(d));
    out << r_axis.size() * p_axis.size() << " cells swept\n";

    json params = common_parameters(o);
    params.update({{"r_grid", o.r_grid}, {"p_grid", o.p_grid}, {"seed", o.seed}, {"svg", o.svg}, {"format", fmt},
                   {"random_starts", cfg.random_starts}, {"grid_points_per_axis", cfg.grid_points_per_axis},
                   {"box", o.box}, {"dedup_tol", cfg.dedup_tol}});
    run.finish("phase_diagram", params, {o.seed});
    return kSuccess;
}

int cmd_patterns(const Options& o, std::ostream& out) {
    const std::string fmt = pick_format(o, {"csv", "json"});
    if (kind_of(o) != ModelKind::NormalFormRing) throw UsageError("patterns supports --model normal only");
    if (o.samples < 1) throw UsageError("--samples must be at least 1");
    const ModelSpec model = ModelSpec::make(kind_of(o), o.n, o.r, o.p);
    SampleOptions opts;
    opts.threads = resolved_threads(o);
    opts.mirror = o.mirror;

    Run run("patterns", o, out);
    const auto dist = sample(model, o.samples, o.box, o.seed, opts);
    if (fmt == "csv") {
        run.write("patterns.csv", patterns_csv(dist));
    } else {
        run.write("patterns.json", dump(patterns_json(dist)));
    }
    out << dist.entries.size() << " signatures, " << dist.unconverged_count << " unconverged"
        << (dist.flagged() ? " (flagged)" : "") << "\n";

    json params = common_parameters(o);
    params.update({{"r", o.r}, {"p", o.p}, {"seed", o.seed}, {"samples", o.samples}, {"ic_box", dist.ic_box},
                   {"mirror", o.mirror}, {"format", fmt}, {"unconverged_count", dist.unconverged_count}});
    run.finish("patterns", params, {o.seed});
    return kSuccess;
}

int cmd_predict(const Options& o, std::ostream& out) {
    pick_format(o, {"json"});
    if (kind_of(o) != ModelKind::NormalFormRing) {
        throw UsageError("predict covers the normal-form ring only; use continue for repressor thresholds");
    }
    (void)ModelSpec::normal_form(o.n, 0.0, o.p);
    const auto r_values = parse_list(o.r_list, ',');

    Run run("predict", o, out);
    run.write("predict.json", dump(prediction_json(o.n, o.p, r_values)));
    json params = common_parameters(o);
    params.update({{"p", o.p}, {"r_list", r_values}});
    run.finish("predict", params, {});
    return kSuccess;
}

void add_model(CLI::App* sub, Options& o) {
    sub->add_option("--model", o.model, "normal or repressor")
        ->check(CLI::IsMember({"normal", "repressor"}))
        ->capture_default_str();
    sub->add_option("--n", o.n, "number of cells (>= 3)")->capture_default_str();
}

void add_output(CLI::App* sub, Options& o) {
    sub->add_option("--output-dir", o.output_dir, "directory for artifacts")->capture_default_str();
    sub->add_option("--threads", o.threads, "worker cap (0: RINGBIF_THREADS or all cores)")->capture_default_str();
}

void add_search(CLI::App* sub, Options& o) {
    sub->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    sub->add_option("--box", o.box, "start box half-width (0: automatic)");
    sub->add_option("--starts", o.starts, "random Newton starts (default depends on command)");
    sub->add_option("--grid", o.grid, "grid starts per axis (default depends on command)");
    sub->add_option("--dedup-tol", o.dedup_tol, "merge radius for roots")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady states, bifurcations and patterns of coupled-cell rings", "ringbif"};
    app.require_subcommand(1);
    app.set_version_flag("--version", RINGBIF_VERSION);
    Options o;

    auto* ss = app.add_subcommand("steady-states", "all steady states at fixed (r, p)");
    add_model(ss, o);
    ss->add_option("--r", o.r, "bifurcation parameter")->required();
    ss->add_option("--p", o.p, "coupling constant")->required();
    add_search(ss, o);
    ss->add_option("--format", o.format, "json or csv");
    add_output(ss, o);

    auto* cont = app.add_subcommand("continue", "bifurcation diagram in r at fixed p");
    add_model(cont, o);
    cont->add_option("--p", o.p, "coupling constant")->required();
    cont->add_option("--r-min", o.r_min, "lower end of r")->capture_default_str();
    cont->add_option("--r-max", o.r_max, "upper end of r")->capture_default_str();
    cont->add_flag("--svg", o.svg, "also write diagram.svg");
    cont->add_option("--var", o.var, "plotted coordinate, e.g. x1 or y2")->capture_default_str();
    cont->add_option("--max-branches", o.max_branches, "branch cap")->capture_default_str();
    add_search(cont, o);
    cont->add_option("--format", o.format, "json");
    add_output(cont, o);

    auto* phase = app.add_subcommand("phase-diagram", "stable-state counts over an (r, p) grid");
    add_model(phase, o);
    phase->add_option("--r-grid", o.r_grid, "min:max:step")->capture_default_str();
    phase->add_option("--p-grid", o.p_grid, "min:max:step")->capture_default_str();
    phase->add_flag("--svg", o.svg, "also write phase_diagram.svg");
    add_search(phase, o);
    phase->add_option("--format", o.format, "csv or json");
    add_output(phase, o);

    auto* pat = app.add_subcommand("patterns", "basin sampling and pattern classes");
    add_model(pat, o);
    pat->add_option("--r", o.r, "bifurcation parameter")->required();
    pat->add_option("--p", o.p, "coupling constant")->required();
    pat->add_option("--samples", o.samples, "number of initial conditions")->capture_default_str();
    pat->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    pat->add_option("--box", o.box, "initial-condition half-width (0: automatic)");
    pat->add_flag("--mirror", o.mirror, "negate every initial condition");
    pat->add_option("--format", o.format, "csv or json");
    add_output(pat, o);

    auto* pred = app.add_subcommand("predict", "closed-form thresholds of the normal-form ring");
    add_model(pred, o);
    pred->add_option("--p", o.p, "coupling constant")->required();
    pred->add_option("--r-list", o.r_list, "comma-separated r values for synchronous states")
        ->capture_default_str();
    pred->add_option("--format", o.format, "json");
    add_output(pred, o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*ss) return cmd_steady_states(o, out);
        if (*cont) return cmd_continue(o, out);
        if (*phase) return cmd_phase_diagram(o, out);
        if (*pat) return cmd_patterns(o, out);
        if (*pred) return cmd_predict(o, out);
    } catch (const std::invalid_argument& e) {  // UsageError, ContractViolation
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
    return kUsageError;
}

}  // namespace ringbif::cli
