#pragma once

// Serialization: run configuration (JSON, lossless round-trip), curve and
// report output as CSV/JSON, and plot-ready data files with a companion
// gnuplot script. Numeric formatting is fixed at 17 significant digits so
// identical runs produce bitwise-identical files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ephunt/sweep.hpp"

namespace ephunt {

using nlohmann::json;

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct RunConfig {
    std::string command;          // toy-sweep | ssh-sweep | scaling | ep-find | verify
    // model parameters
    double u = 0.0, v = 1.0;
    int n_cells = 101;
    // sweep spec
    double lambda_min = 0.0, lambda_max = 1.0, step = 0.01;
    int band = 0;
    double epsilon = 1e-4;
    bool richardson = true;
    bool find_eps = false;
    std::vector<int> n_list;
    // io
    std::string out_dir = ".";
    std::string format = "csv"; // csv | json
    bool plot = false;
    int threads = 1;
    // verify knobs
    unsigned seed = 1;
    double perturb_metric = 0.0;
};

inline void to_json(json& j, const RunConfig& c) {
    j = json{{"command", c.command},
             {"u", c.u},
             {"v", c.v},
             {"n_cells", c.n_cells},
             {"lambda_min", c.lambda_min},
             {"lambda_max", c.lambda_max},
             {"step", c.step},
             {"band", c.band},
             {"epsilon", c.epsilon},
             {"richardson", c.richardson},
             {"find_eps", c.find_eps},
             {"n_list", c.n_list},
             {"out_dir", c.out_dir},
             {"format", c.format},
             {"plot", c.plot},
             {"threads", c.threads},
             {"seed", c.seed},
             {"perturb_metric", c.perturb_metric}};
}

inline void from_json(const json& j, RunConfig& c) {
    RunConfig defaults;
    c.command = j.value("command", defaults.command);
    c.u = j.value("u", defaults.u);
    c.v = j.value("v", defaults.v);
    c.n_cells = j.value("n_cells", defaults.n_cells);
    c.lambda_min = j.value("lambda_min", defaults.lambda_min);
    c.lambda_max = j.value("lambda_max", defaults.lambda_max);
    c.step = j.value("step", defaults.step);
    c.band = j.value("band", defaults.band);
    c.epsilon = j.value("epsilon", defaults.epsilon);
    c.richardson = j.value("richardson", defaults.richardson);
    c.find_eps = j.value("find_eps", defaults.find_eps);
    c.n_list = j.value("n_list", defaults.n_list);
    c.out_dir = j.value("out_dir", defaults.out_dir);
    c.format = j.value("format", defaults.format);
    c.plot = j.value("plot", defaults.plot);
    c.threads = j.value("threads", defaults.threads);
    c.seed = j.value("seed", defaults.seed);
    c.perturb_metric = j.value("perturb_metric", defaults.perturb_metric);
}

// ------------------------------------------------------------------ curves

/// Toy sweep CSV: lambda, re_f, im_f, re_chi, im_chi, chi_exact, rigidity, status.
inline std::string toy_curve_csv(const SusceptibilityCurve& curve) {
    std::ostringstream os;
    os << "lambda,re_f,im_f,re_chi,im_chi,chi_exact,rigidity,status\n";
    for (const auto& s : curve.samples) {
        double exact = std::numeric_limits<double>::quiet_NaN();
        if (std::abs(s.lambda) != 1.0) exact = toy_chi_exact({s.lambda});
        os << fmt17(s.lambda) << ',' << fmt17(s.f.real()) << ',' << fmt17(s.f.imag())
           << ',' << fmt17(s.chi.real()) << ',' << fmt17(s.chi.imag()) << ','
           << fmt17(exact) << ',' << fmt17(s.rigidity) << ',' << to_string(s.status)
           << '\n';
    }
    return os.str();
}

/// SSH sweep CSV: w, chi0_density, status.
struct SshCurveRow {
    double w = 0.0;
    double chi0 = 0.0;
    SampleStatus status = SampleStatus::Ok;
};

inline std::string ssh_curve_csv(const std::vector<SshCurveRow>& rows) {
    std::ostringstream os;
    os << "w,chi0_density,status\n";
    for (const auto& r : rows)
        os << fmt17(r.w) << ',' << fmt17(r.chi0) << ',' << to_string(r.status) << '\n';
    return os.str();
}

inline json toy_curve_json(const SusceptibilityCurve& curve) {
    json rows = json::array();
    for (const auto& s : curve.samples) {
        double exact = std::numeric_limits<double>::quiet_NaN();
        if (std::abs(s.lambda) != 1.0) exact = toy_chi_exact({s.lambda});
        rows.push_back({{"lambda", s.lambda},
                        {"re_f", s.f.real()},
                        {"im_f", s.f.imag()},
                        {"re_chi", s.chi.real()},
                        {"im_chi", s.chi.imag()},
                        {"chi_exact", exact},
                        {"rigidity", s.rigidity},
                        {"status", to_string(s.status)}});
    }
    return json{{"samples", rows}};
}

inline json ssh_curve_json(const std::vector<SshCurveRow>& rows) {
    json out = json::array();
    for (const auto& r : rows)
        out.push_back({{"w", r.w}, {"chi0_density", r.chi0}, {"status", to_string(r.status)}});
    return json{{"samples", out}};
}

inline std::string scaling_csv(const ScalingFit& fit) {
    std::ostringstream os;
    os << "n,chi0\n";
    for (const auto& p : fit.points) os << p.n << ',' << fmt17(p.chi0) << '\n';
    return os.str();
}

inline json ep_report_json(const EPReport& report) {
    json arr = json::array();
    for (const auto& c : report.candidates)
        arr.push_back({{"lambda_ep", c.lambda_ep},
                       {"bracket", {c.bracket_lo, c.bracket_hi}},
                       {"min_band_gap", c.min_band_gap},
                       {"divergence_fit_exponent", c.divergence_fit_exponent},
                       {"evidence", c.evidence}});
    return json{{"candidates", arr}};
}

inline json scaling_fit_json(const ScalingFit& fit) {
    return json{{"slope", fit.slope},
                {"intercept", fit.intercept},
                {"max_residual", fit.max_residual},
                {"fitted", fit.fitted}};
}

// -------------------------------------------------------------------- files

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open for writing: " + path.string());
    os << content;
    if (!os) throw Error("write failed: " + path.string());
}

/// Two-column whitespace-delimited (lambda, Re chi) data with divergent
/// samples clipped at +/-1e4, plus a companion gnuplot script.
inline void emit_plot_data(const std::vector<std::pair<double, double>>& xy,
                           const std::filesystem::path& data_path) {
    if (xy.empty()) throw Error("emit_plot_data: empty curve for " + data_path.string());
    constexpr double clip = 1e4;
    std::ostringstream os;
    for (const auto& [x, y] : xy) {
        const double yc = std::isfinite(y) ? std::clamp(y, -clip, clip)
                                           : (y > 0 ? clip : -clip);
        os << fmt17(x) << ' ' << fmt17(yc) << '\n';
    }
    write_file(data_path, os.str());

    std::filesystem::path script = data_path;
    script.replace_extension(".gp");
    std::ostringstream gp;
    gp << "set xlabel 'lambda'\n"
       << "set ylabel 'Re chi'\n"
       << "set yrange [-1e4:1e4]\n"
       << "plot '" << data_path.filename().string() << "' using 1:2 with lines notitle\n"
       << "pause -1\n";
    write_file(script, gp.str());
}

} // namespace ephunt
