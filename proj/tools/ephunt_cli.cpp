// Command-line front end: parameter sweeps, finite-size scaling, EP
// hunting, and the cross-module verification suite.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ephunt/ephunt.hpp"

namespace fs = std::filesystem;
using namespace ephunt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

RunConfig preload_config(int argc, char** argv) {
    RunConfig cfg;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream is(argv[i + 1]);
            if (!is) throw InvalidSpec(std::string("cannot read config file ") + argv[i + 1]);
            json j;
            is >> j;
            cfg = j.get<RunConfig>();
        }
    }
    return cfg;
}

std::vector<double> build_grid(double lo, double hi, double step) {
    auto grid = SweepSpec::make_grid(lo, hi, step);
    if (grid.empty()) throw InvalidSpec("empty sweep grid");
    return grid;
}

int cmd_toy_sweep(const RunConfig& cfg) {
    auto grid = build_grid(cfg.lambda_min, cfg.lambda_max, cfg.step);
    ToyFamily family;
    SweepSpec spec;
    spec.grid = grid;
    spec.band = cfg.band;
    spec.epsilon = cfg.epsilon;
    spec.richardson = cfg.richardson;
    spec.threads = cfg.threads;
    if (grid.size() == 1) {
        // single-point run: evaluate the one sample without the >= 2 point rule
        spec.grid.push_back(grid[0] + cfg.step);
    }
    auto curve = run_sweep(family, spec);
    if (curve.samples.size() > grid.size()) curve.samples.resize(grid.size());

    fs::create_directories(cfg.out_dir);
    const bool as_json = cfg.format == "json";
    const fs::path out_path =
        fs::path(cfg.out_dir) / (as_json ? "toy_sweep.json" : "toy_sweep.csv");
    write_file(out_path, as_json ? toy_curve_json(curve).dump(2) + "\n"
                                 : toy_curve_csv(curve));
    std::cout << "wrote " << out_path.string() << " (" << curve.samples.size() << " rows)\n";

    if (cfg.find_eps) {
        auto report = detect_eps(curve, family);
        const fs::path ep_path = fs::path(cfg.out_dir) / "toy_eps.json";
        write_file(ep_path, ep_report_json(report).dump(2) + "\n");
        std::cout << "wrote " << ep_path.string() << " (" << report.candidates.size()
                  << " candidates)\n";
    }
    if (cfg.plot) {
        std::vector<std::pair<double, double>> xy;
        for (const auto& s : curve.samples) xy.emplace_back(s.lambda, s.chi.real());
        emit_plot_data(xy, fs::path(cfg.out_dir) / "toy_sweep.dat");
    }
    return kExitOk;
}

int cmd_ssh_sweep(const RunConfig& cfg) {
    auto grid = build_grid(cfg.lambda_min, cfg.lambda_max, cfg.step);
    std::vector<SshCurveRow> rows;
    rows.reserve(grid.size());
    for (double w : grid) {
        SshCurveRow row;
        row.w = w;
        try {
            row.chi0 = ssh_chi0_density({cfg.u, cfg.v, w, cfg.n_cells});
            row.status = SampleStatus::Ok;
        } catch (const AtExceptionalPoint&) {
            row.chi0 = std::numeric_limits<double>::quiet_NaN();
            row.status = SampleStatus::SkippedAtEp;
        }
        rows.push_back(row);
    }

    fs::create_directories(cfg.out_dir);
    const bool as_json = cfg.format == "json";
    const fs::path out_path =
        fs::path(cfg.out_dir) / (as_json ? "ssh_sweep.json" : "ssh_sweep.csv");
    write_file(out_path, as_json ? ssh_curve_json(rows).dump(2) + "\n" : ssh_curve_csv(rows));
    std::cout << "wrote " << out_path.string() << " (" << rows.size() << " rows)\n";

    if (cfg.find_eps) {
        SusceptibilityCurve curve;
        for (const auto& r : rows) {
            CurveSample s;
            s.lambda = r.w;
            s.chi = Complex(r.chi0, 0.0);
            s.status = r.status;
            curve.samples.push_back(s);
        }
        SshChainFamily family(cfg.u, cfg.v, cfg.n_cells);
        auto report = detect_eps(curve, family);
        const fs::path ep_path = fs::path(cfg.out_dir) / "ssh_eps.json";
        write_file(ep_path, ep_report_json(report).dump(2) + "\n");
        std::cout << "wrote " << ep_path.string() << " (" << report.candidates.size()
                  << " candidates)\n";
    }
    if (cfg.plot) {
        std::vector<std::pair<double, double>> xy;
        for (const auto& r : rows) xy.emplace_back(r.w, r.chi0);
        emit_plot_data(xy, fs::path(cfg.out_dir) / "ssh_sweep.dat");
    }
    return kExitOk;
}

int cmd_scaling(const RunConfig& cfg) {
    if (cfg.n_list.empty()) throw InvalidSpec("scaling: --n list required");
    ScalingFit fit;
    try {
        fit = scaling_run(cfg.v, cfg.n_list);
    } catch (const EvenNRejected& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    fs::create_directories(cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / "scaling.csv", scaling_csv(fit));
    write_file(fs::path(cfg.out_dir) / "scaling_fit.json",
               scaling_fit_json(fit).dump(2) + "\n");
    if (fit.fitted)
        std::cout << "slope " << fmt17(fit.slope) << " intercept " << fmt17(fit.intercept)
                  << "\n";
    else
        std::cout << "single point, fit skipped; chi0 = " << fmt17(fit.points[0].chi0)
                  << "\n";
    return kExitOk;
}

SusceptibilityCurve load_curve_csv(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot read " + path.string());
    std::string line;
    if (!std::getline(is, line)) throw Error("empty file " + path.string());
    // toy CSV carries chi in column 3, ssh CSV in column 1
    const bool toy = line.rfind("lambda,", 0) == 0;
    const bool ssh = line.rfind("w,", 0) == 0;
    if (!toy && !ssh) throw Error("unrecognized CSV header in " + path.string());
    SusceptibilityCurve curve;
    while (std::getline(is, line)) {
        std::stringstream ss(line);
        std::vector<std::string> fields;
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() < 3) continue;
        CurveSample s;
        s.lambda = std::stod(fields[0]);
        s.chi = Complex(std::stod(fields[toy ? 3 : 1]), toy ? std::stod(fields[4]) : 0.0);
        const std::string status = fields.back();
        s.status = status == "skipped-at-ep" ? SampleStatus::SkippedAtEp
                   : status == "near-ep"     ? SampleStatus::NearEp
                                             : SampleStatus::Ok;
        curve.samples.push_back(s);
    }
    return curve;
}

int cmd_ep_find(const RunConfig& cfg, const std::string& input, const std::string& model) {
    auto curve = load_curve_csv(input);
    std::unique_ptr<HamiltonianFamily> family;
    if (model == "toy")
        family = std::make_unique<ToyFamily>();
    else if (model == "ssh")
        family = std::make_unique<SshChainFamily>(cfg.u, cfg.v, cfg.n_cells);
    else
        throw InvalidSpec("ep-find: --model must be toy or ssh");
    auto report = detect_eps(curve, *family);
    fs::create_directories(cfg.out_dir);
    const fs::path ep_path = fs::path(cfg.out_dir) / "ep_report.json";
    write_file(ep_path, ep_report_json(report).dump(2) + "\n");
    std::cout << ep_report_json(report).dump(2) << "\n";
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
    auto results = run_verification(cfg.seed, cfg.perturb_metric);
    bool all = true;
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    for (const auto& r : results) {
        all = all && r.pass;
        std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name
                  << std::string(width - r.name.size() + 2, ' ') << r.detail << "\n";
    }
    std::cout << (all ? "all checks passed\n" : "verification FAILED\n");
    return all ? kExitOk : kExitRuntime;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    try {
        cfg = preload_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    CLI::App app{"Generalized fidelity susceptibility and exceptional-point hunting "
                 "for non-Hermitian Hamiltonians"};
    app.require_subcommand(1);
    std::string config_path; // consumed by preload; registered so CLI11 accepts it
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--format", cfg.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--epsilon", cfg.epsilon, "finite-difference parameter step");
    app.add_option("--richardson", cfg.richardson, "Richardson extrapolation on/off");
    app.add_option("--threads", cfg.threads, "worker threads for grid evaluation")
        ->envname("EPHUNT_THREADS");

    auto* toy = app.add_subcommand("toy-sweep", "sweep the PT-symmetric 2x2 toy model in r");
    toy->add_option("--r-min", cfg.lambda_min, "sweep start")->required();
    toy->add_option("--r-max", cfg.lambda_max, "sweep end")->required();
    toy->add_option("--step", cfg.step, "grid step")->required();
    toy->add_option("--band", cfg.band, "tracked eigenstate index");
    toy->add_flag("--find-eps", cfg.find_eps, "detect and refine EPs on the curve");
    toy->add_flag("--plot", cfg.plot, "emit plot data + gnuplot script");

    auto* ssh = app.add_subcommand("ssh-sweep", "sweep the non-Hermitian SSH chain in w");
    ssh->add_option("--n", cfg.n_cells, "number of unit cells")->required();
    ssh->add_option("--u", cfg.u, "gain/loss strength");
    ssh->add_option("--v", cfg.v, "intra-cell hopping");
    ssh->add_option("--w-min", cfg.lambda_min, "sweep start")->required();
    ssh->add_option("--w-max", cfg.lambda_max, "sweep end")->required();
    ssh->add_option("--step", cfg.step, "grid step")->required();
    ssh->add_flag("--find-eps", cfg.find_eps, "detect and refine EPs on the curve");
    ssh->add_flag("--plot", cfg.plot, "emit plot data + gnuplot script");

    auto* scal = app.add_subcommand("scaling", "finite-size scaling at the Hermitian critical point");
    scal->add_option("--n", cfg.n_list, "odd system sizes (comma separated)")
        ->required()
        ->delimiter(',');
    scal->add_option("--v", cfg.v, "hopping (critical point is w = v)");

    std::string ep_input, ep_model = "ssh";
    auto* epf = app.add_subcommand("ep-find", "detect EPs on an existing sweep CSV");
    epf->add_option("--input", ep_input, "sweep CSV file")->required();
    epf->add_option("--model", ep_model, "model behind the curve: toy or ssh");
    epf->add_option("--n", cfg.n_cells, "number of unit cells (ssh)");
    epf->add_option("--u", cfg.u, "gain/loss strength (ssh)");
    epf->add_option("--v", cfg.v, "intra-cell hopping (ssh)");

    auto* ver = app.add_subcommand("verify", "run the cross-module invariant suite");
    ver->add_option("--seed", cfg.seed, "RNG seed for randomized checks");
    ver->add_option("--perturb-metric", cfg.perturb_metric,
                    "inject a metric perturbation (self-test; nonzero must fail)");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (toy->parsed()) return cmd_toy_sweep(cfg);
        if (ssh->parsed()) return cmd_ssh_sweep(cfg);
        if (scal->parsed()) return cmd_scaling(cfg);
        if (epf->parsed()) return cmd_ep_find(cfg, ep_input, ep_model);
        if (ver->parsed()) return cmd_verify(cfg);
    } catch (const InvalidSpec& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
