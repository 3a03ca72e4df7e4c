// expsum: batch experiments on zeros of exponential sums and the
// convex-geometric densities that predict them.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expsum/ensembles.hpp"
#include "expsum/monge_ampere.hpp"
#include "expsum/parallel.hpp"
#include "expsum/serialize.hpp"
#include "expsum/systems2d.hpp"
#include "expsum/toml_lite.hpp"
#include "expsum/zeros1d.hpp"

namespace {

using namespace expsum;
using Clock = std::chrono::steady_clock;

constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream ss;
    ss << std::hex << v;
    return ss.str();
}

/// Run bookkeeping: every output file is referenced by exactly one manifest,
/// warnings decide the exit code (0 clean, 2 warned, 1 error).
struct Run {
    Json effective = Json::object();
    std::vector<std::string> warnings;
    Json stages = Json::object();
    std::vector<std::string> outputs;
    Clock::time_point started = Clock::now();

    void warn(const std::string& w) { warnings.push_back(w); }

    void stage(const std::string& name, Clock::time_point from) {
        stages[name] =
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - from).count();
    }

    int finish(const std::string& out_path) {
        Json manifest;
        manifest["config_hash"] = hex64(fnv1a(effective.dump()));
        manifest["version"] = kVersion;
        manifest["wall_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
        manifest["stages"] = stages;
        manifest["warnings"] = warnings;
        manifest["effective_config"] = effective;
        manifest["outputs"] = outputs;
        if (!out_path.empty()) save_json_file(out_path + ".manifest.json", manifest);
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        return warnings.empty() ? 0 : 2;
    }
};

void write_text(Run& run, const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    run.outputs.push_back(path);
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

/// CLI flags override TOML keys, which override defaults. CLI11 reports
/// whether a flag was given; TOML presence is checked per key.
struct ConfigLayer {
    CLI::App* cmd;
    TomlTable toml;
    std::string section;

    double number(const std::string& flag, const std::string& key, double def) const {
        if (cmd->count(flag) > 0) return def;  // def already holds the CLI value
        return toml.number(section + "." + key, def);
    }
    std::string str(const std::string& flag, const std::string& key, std::string def) const {
        if (cmd->count(flag) > 0) return def;
        return toml.str(section + "." + key, def);
    }
    bool boolean(const std::string& flag, const std::string& key, bool def) const {
        if (cmd->count(flag) > 0) return def;
        return toml.boolean(section + "." + key, def);
    }
    std::vector<double> numbers(const std::string& flag, const std::string& key,
                                std::vector<double> def) const {
        if (cmd->count(flag) > 0) return def;
        auto v = toml.numbers(section + "." + key);
        return v.empty() ? def : v;
    }
};

struct QuadFlags {
    std::string method = "tensor-grid";
    long samples = 0;
    double radius = 1.0;
    std::string epsilons;  // comma list
    bool no_extrapolate = false;
    std::uint64_t seed = 0;
    int workers = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--method", method, "tensor-grid | low-discrepancy | monte-carlo");
        cmd->add_option("--samples", samples, "quadrature sample budget");
        cmd->add_option("--radius", radius, "ball radius");
        cmd->add_option("--epsilons", epsilons, "comma-separated smoothing schedule");
        cmd->add_flag("--no-extrapolate", no_extrapolate, "report the last epsilon value only");
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--workers", workers, "worker threads (default: EXPSUM_WORKERS)");
    }

    QuadratureSpec resolve(const ConfigLayer& cfg, Run& run) const {
        QuadratureSpec q;
        std::string m = cfg.str("--method", "method", method);
        if (m == "tensor-grid")
            q.method = QuadMethod::TensorGrid;
        else if (m == "low-discrepancy")
            q.method = QuadMethod::LowDiscrepancy;
        else if (m == "monte-carlo")
            q.method = QuadMethod::MonteCarlo;
        else
            throw CLI::ValidationError("--method", "unknown quadrature method: " + m);
        q.samples = static_cast<long>(cfg.number("--samples", "samples", static_cast<double>(samples)));
        q.radius = cfg.number("--radius", "radius", radius);
        std::vector<double> eps = cfg.numbers("--epsilons", "epsilons", parse_list(epsilons));
        q.epsilons = eps;
        q.extrapolate = !cfg.boolean("--no-extrapolate", "no_extrapolate", no_extrapolate);
        if (cfg.toml.contains(cfg.section + ".extrapolate") && cfg.cmd->count("--no-extrapolate") == 0)
            q.extrapolate = cfg.toml.boolean(cfg.section + ".extrapolate", true);
        q.seed = static_cast<std::uint64_t>(cfg.number("--seed", "seed", static_cast<double>(seed)));
        q.workers = workers;
        run.effective["quadrature"] = {{"method", m},
                                       {"samples", q.samples},
                                       {"radius", q.radius},
                                       {"epsilons", q.epsilons},
                                       {"extrapolate", q.extrapolate},
                                       {"seed", q.seed}};
        return q;
    }
};

std::string csv_of_counts(const std::vector<ZeroCountReport>& reports) {
    std::ostringstream csv;
    csv << "radius,count,winding_residual,refinements,jitters\n";
    csv.precision(17);
    for (const auto& r : reports)
        csv << r.radius << "," << r.count << "," << r.winding_residual << "," << r.refinements
            << "," << r.jitters << "\n";
    return csv.str();
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

int cmd_pvol(Run& run, const std::vector<std::string>& spectra, const QuadratureSpec& q,
             const std::string& out, bool mixed) {
    auto t0 = Clock::now();
    PvolResult res;
    if (mixed) {
        std::vector<Spectrum> ks;
        for (const auto& path : spectra) ks.push_back(load_spectrum(path));
        res = mixed_pvol(ks, q);
    } else {
        res = pvol(load_spectrum(spectra.front()), q);
    }
    run.stage("pvol", t0);
    if (res.flagged) run.warn("quadrature variance above the requested tolerance");
    Json j = to_json(res);
    std::cout << (mixed ? "mixed_pvol" : "pvol") << " = " << res.value << " +- " << res.error
              << "\n";
    if (!out.empty()) {
        save_json_file(out, j);
        run.outputs.push_back(out);
    }
    return run.finish(out);
}

int cmd_zeros(Run& run, const std::string& fpath, double radius, double cre, double cim,
              bool locate, const std::string& out, const std::string& format) {
    auto t0 = Clock::now();
    QuasiPolynomial f = load_quasi_polynomial(fpath);
    ContourSpec c;
    c.center = Complex(cre, cim);
    c.radius = radius;
    Json j;
    std::string csv;
    if (locate) {
        LocateResult res = locate_zeros_disk(f, c);
        if (!res.complete) run.warn("located multiplicities do not add up to the disk count");
        if (res.outer.jitters > 0) run.warn("contour jittered away from a nearby zero");
        std::ostringstream ss;
        ss << "re,im,multiplicity,residual\n";
        ss.precision(17);
        for (const auto& zr : res.zeros)
            ss << zr.z.real() << "," << zr.z.imag() << "," << zr.multiplicity << "," << zr.residual
               << "\n";
        csv = csv_of_counts({res.outer}) + ss.str();
        j["count"] = res.outer.count;
        j["zeros"] = Json::array();
        for (const auto& zr : res.zeros)
            j["zeros"].push_back(
                {{"re", zr.z.real()}, {"im", zr.z.imag()}, {"multiplicity", zr.multiplicity}});
        std::cout << "count = " << res.outer.count << ", located " << res.zeros.size()
                  << " distinct zeros\n";
    } else {
        ZeroCountReport rep = count_zeros_disk(f, c);
        if (rep.jitters > 0) run.warn("contour jittered away from a nearby zero");
        csv = csv_of_counts({rep});
        j = {{"radius", rep.radius},
             {"count", rep.count},
             {"winding_residual", rep.winding_residual},
             {"refinements", rep.refinements},
             {"jitters", rep.jitters}};
        std::cout << "count = " << rep.count << " (residual " << rep.winding_residual << ")\n";
    }
    run.stage("zeros", t0);
    if (!out.empty()) {
        if (format == "json")
            save_json_file(out, j), run.outputs.push_back(out);
        else
            write_text(run, out, csv);
    }
    return run.finish(out);
}

int cmd_density(Run& run, const std::string& fpath, const std::vector<double>& radii,
                const std::string& out, const std::string& format) {
    auto t0 = Clock::now();
    QuasiPolynomial f = load_quasi_polynomial(fpath);
    DensityFit fit = density_slope(f, radii);
    run.stage("density", t0);
    for (const auto& rep : fit.counts)
        if (rep.jitters > 0) run.warn("contour jittered at radius " + std::to_string(rep.radius));

    std::ostringstream csv;
    csv.precision(17);
    csv << "radius,count,winding_residual,refinements,jitters,slope,intercept\n";
    for (const auto& r : fit.counts)
        csv << r.radius << "," << r.count << "," << r.winding_residual << "," << r.refinements
            << "," << r.jitters << "," << fit.slope << "," << fit.intercept << "\n";
    std::cout << "slope = " << fit.slope << ", intercept = " << fit.intercept << ", rms residual = "
              << fit.residual << "\n";
    if (!out.empty()) {
        if (format == "json") {
            Json j = {{"slope", fit.slope},
                      {"intercept", fit.intercept},
                      {"residual", fit.residual},
                      {"counts", Json::array()}};
            for (const auto& r : fit.counts)
                j["counts"].push_back({{"radius", r.radius}, {"count", r.count}});
            save_json_file(out, j);
            run.outputs.push_back(out);
        } else {
            write_text(run, out, csv.str());
        }
    }
    return run.finish(out);
}

int cmd_systems(Run& run, const std::string& f1p, const std::string& f2p, double radius,
                double tube, int grid, int workers, const std::string& out) {
    auto t0 = Clock::now();
    QuasiPolynomial f1 = load_quasi_polynomial(f1p);
    QuasiPolynomial f2 = load_quasi_polynomial(f2p);
    SearchRegion region;
    region.rho = tube;
    region.r = radius;
    region.grid_per_pi = grid;
    RootSet2D res = solve_system(f1, f2, region, workers);
    run.stage("solve", t0);
    if (res.empty_flagged) run.warn("no Newton seed converged");
    long in_ball = 0, degenerate = 0, near_tube = 0;
    std::ostringstream csv;
    csv.precision(17);
    csv << "re1,im1,re2,im2,residual,iters,degenerate,near_tube\n";
    for (const auto& root : res.roots) {
        const double norm = std::sqrt(std::norm(root.z[0]) + std::norm(root.z[1]));
        if (norm < radius) ++in_ball;
        degenerate += root.degenerate ? 1 : 0;
        near_tube += root.near_tube ? 1 : 0;
        csv << root.z[0].real() << "," << root.z[0].imag() << "," << root.z[1].real() << ","
            << root.z[1].imag() << "," << root.residual << "," << root.iters << ","
            << (root.degenerate ? 1 : 0) << "," << (root.near_tube ? 1 : 0) << "\n";
    }
    if (degenerate > 0) run.warn(std::to_string(degenerate) + " roots have singular Jacobians");
    if (near_tube > 0)
        run.warn(std::to_string(near_tube) + " roots converged near the |Re| tube bound");
    std::cout << "roots in region = " << res.roots.size() << ", in ball of radius " << radius
              << " = " << in_ball << "\n";
    if (!out.empty()) write_text(run, out, csv.str());
    return run.finish(out);
}

int cmd_theorem1(Run& run, const std::vector<std::string>& spectra,
                 const std::vector<std::string>& functions, const std::vector<double>& radii,
                 double tube, const QuadratureSpec& q, const std::string& out) {
    auto t0 = Clock::now();
    const std::size_t n = spectra.size();
    if (n != 1 && n != 2)
        throw CLI::ValidationError("--spectra", "theorem1 needs 1 or 2 spectra");
    if (functions.size() != n)
        throw CLI::ValidationError("--f", "theorem1 needs one function per spectrum");

    std::vector<Spectrum> ks;
    for (const auto& p : spectra) ks.push_back(load_spectrum(p));
    PvolResult pv = mixed_pvol(ks, q);
    if (pv.flagged) run.warn("quadrature variance above the requested tolerance");
    run.stage("pvol", t0);

    auto t1 = Clock::now();
    std::ostringstream csv;
    csv.precision(17);
    csv << "radius,prediction,count,relative_deviation\n";
    Json rows = Json::array();
    const double pi_pow = std::pow(M_PI, static_cast<double>(n));
    for (double r : radii) {
        double prediction = pv.value / pi_pow * std::pow(r, static_cast<double>(n));
        long count;
        if (n == 1) {
            ContourSpec c;
            c.radius = r;
            count = count_zeros_disk(load_quasi_polynomial(functions[0]), c).count;
        } else {
            count = count_roots_ball(load_quasi_polynomial(functions[0]),
                                     load_quasi_polynomial(functions[1]), r, tube, 8, q.workers);
        }
        const double dev = std::abs(static_cast<double>(count) - prediction) /
                           std::max(prediction, 1e-300);
        csv << r << "," << prediction << "," << count << "," << dev << "\n";
        rows.push_back({{"radius", r},
                        {"prediction", prediction},
                        {"count", count},
                        {"relative_deviation", dev}});
        std::cout << "r = " << r << ": prediction " << prediction << ", count " << count
                  << ", deviation " << dev * 100.0 << "%\n";
    }
    run.stage("counts", t1);
    if (!out.empty()) {
        Json j = {{"mixed_pvol", to_json(pv)}, {"rows", rows}};
        save_json_file(out, j);
        run.outputs.push_back(out);
        write_text(run, out + ".csv", csv.str());
    }
    return run.finish(out);
}

int cmd_average(Run& run, const std::string& space_path, const std::vector<double>& t_list,
                double radius, int trials, std::uint64_t seed, int workers,
                const std::string& out) {
    auto t0 = Clock::now();
    HermitianBasisSpace v = load_space(space_path);
    Json rows = Json::array();
    for (double t : t_list) {
        AveragedCount res = averaged_count_1d(v, t, radius, trials, seed, workers);
        if (res.resampled > 0)
            run.warn(std::to_string(res.resampled) + " trials resampled at t = " +
                     std::to_string(t));
        rows.push_back({{"t", t},
                        {"mean", res.mean},
                        {"stderr", res.stderr_mean},
                        {"trials", res.trials},
                        {"resampled", res.resampled}});
        std::cout << "t = " << t << ": mean " << res.mean << " +- " << res.stderr_mean << "\n";
    }
    run.stage("average", t0);
    if (!out.empty()) {
        save_json_file(out, Json{{"rows", rows}});
        run.outputs.push_back(out);
    }
    return run.finish(out);
}

int cmd_regularity(Run& run, const std::string& space_path, const std::vector<double>& t_list,
                   int samples, std::uint64_t seed, const std::string& out) {
    auto t0 = Clock::now();
    HermitianBasisSpace v = load_space(space_path);
    RegularityProfile prof = regularity_profile(v, t_list, samples, seed);
    run.stage("profile", t0);
    if (prof.bound_violations > 0)
        run.warn(std::to_string(prof.bound_violations) + " upper-bound violations");

    std::ostringstream csv;
    csv.precision(17);
    csv << "t,direction,";
    for (int c = 0; c < v.ambient_dimension(); ++c) csv << "re" << c << ",im" << c << ",";
    csv << "deviation\n";
    for (std::size_t ti = 0; ti < prof.t_list.size(); ++ti)
        for (std::size_t j = 0; j < prof.directions.size(); ++j) {
            csv << prof.t_list[ti] << "," << j << ",";
            for (int c = 0; c < v.ambient_dimension(); ++c)
                csv << prof.directions[j][c].real() << "," << prof.directions[j][c].imag() << ",";
            csv << prof.deviations(static_cast<long>(ti), static_cast<long>(j)) << "\n";
        }
    for (const auto& row : prof.rows)
        std::cout << "t = " << row.t << ": sup deviation " << row.sup_deviation
                  << " (direction " << row.worst_direction << ")\n";
    std::cout << "bound constant C = " << prof.bound_constant << " at epsilon = "
              << prof.bound_epsilon << ", violations = " << prof.bound_violations << "\n";
    if (!out.empty()) {
        write_text(run, out, csv.str());
        Json j = {{"bound_constant", prof.bound_constant},
                  {"bound_epsilon", prof.bound_epsilon},
                  {"bound_violations", prof.bound_violations},
                  {"rows", Json::array()}};
        for (const auto& row : prof.rows)
            j["rows"].push_back({{"t", row.t},
                                 {"sup_deviation", row.sup_deviation},
                                 {"worst_direction", row.worst_direction}});
        save_json_file(out + ".summary.json", j);
        run.outputs.push_back(out + ".summary.json");
    }
    return run.finish(out);
}

int cmd_crofton(Run& run, const std::string& space_path, double radius, int trials,
                std::uint64_t seed, long samples, int workers, const std::string& out) {
    auto t0 = Clock::now();
    HermitianBasisSpace v = load_space(space_path);
    AveragedCount mc = averaged_count_1d(v, 1.0, radius, trials, seed, workers);
    if (mc.resampled > 0) run.warn(std::to_string(mc.resampled) + " trials resampled");
    run.stage("monte_carlo", t0);

    auto t1 = Clock::now();
    QuadratureSpec q;
    q.samples = samples > 0 ? samples : 1 << 17;
    q.radius = radius;
    q.workers = workers;
    BallIntegral quad = integrate_ball(
        [&](const ComplexPoint& z) { return expected_density_exact(v, z[0]); }, 1, q);
    run.stage("quadrature", t1);

    const double sigma = std::hypot(mc.stderr_mean, quad.error);
    const double diff = std::abs(mc.mean - quad.value);
    const bool pass = diff <= 2.0 * sigma;
    if (!pass) run.warn("MC mean and density quadrature disagree beyond 2 sigma");
    Json j = {{"mc_mean", mc.mean},     {"mc_stderr", mc.stderr_mean},
              {"quadrature", quad.value}, {"quadrature_error", quad.error},
              {"difference", diff},     {"two_sigma", 2.0 * sigma},
              {"within_two_sigma", pass}};
    std::cout << "MC mean = " << mc.mean << " +- " << mc.stderr_mean << ", quadrature = "
              << quad.value << " (|diff| = " << diff << ", 2 sigma = " << 2.0 * sigma << ")\n";
    if (!out.empty()) {
        save_json_file(out, j);
        run.outputs.push_back(out);
    }
    return run.finish(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero densities of exponential sums vs convex-geometric predictions"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "csv";
    app.add_option("--config", config_path, "TOML config file")->capture_default_str();

    // ---- pvol / mixed-pvol
    auto* pvol_cmd = app.add_subcommand("pvol", "pseudo-volume of a spectrum");
    std::string pvol_spectrum;
    QuadFlags pvol_quad;
    pvol_cmd->add_option("--spectrum", pvol_spectrum, "spectrum JSON file");
    pvol_quad.attach(pvol_cmd);
    pvol_cmd->add_option("--out", out_path, "output JSON path");

    auto* mixed_cmd = app.add_subcommand("mixed-pvol", "mixed pseudo-volume of n spectra");
    std::vector<std::string> mixed_spectra;
    QuadFlags mixed_quad;
    mixed_cmd->add_option("--spectra", mixed_spectra, "spectrum JSON files")->expected(-1);
    mixed_quad.attach(mixed_cmd);
    mixed_cmd->add_option("--out", out_path, "output JSON path");

    // ---- zeros
    auto* zeros_cmd = app.add_subcommand("zeros", "count (and locate) zeros in a disk");
    std::string zeros_f;
    double zeros_radius = 1.0, zeros_cre = 0.0, zeros_cim = 0.0;
    bool zeros_locate = false;
    zeros_cmd->add_option("--f", zeros_f, "quasi-polynomial JSON file")->required();
    zeros_cmd->add_option("--radius", zeros_radius, "disk radius")->required();
    zeros_cmd->add_option("--center-re", zeros_cre, "disk center, real part");
    zeros_cmd->add_option("--center-im", zeros_cim, "disk center, imaginary part");
    zeros_cmd->add_flag("--locate", zeros_locate, "also locate the zeros");
    zeros_cmd->add_option("--out", out_path, "output path");
    zeros_cmd->add_option("--format", format, "csv | json");

    // ---- density
    auto* density_cmd = app.add_subcommand("density", "zero counts over radii and density slope");
    std::string density_f, density_radii;
    density_cmd->add_option("--f", density_f, "quasi-polynomial JSON file");
    density_cmd->add_option("--radii", density_radii, "comma-separated radii");
    density_cmd->add_option("--out", out_path, "output path");
    density_cmd->add_option("--format", format, "csv | json");

    // ---- systems count
    auto* systems_cmd = app.add_subcommand("systems", "two-variable exponential systems");
    auto* systems_count = systems_cmd->add_subcommand("count", "find and count common roots");
    std::string sys_f1, sys_f2;
    double sys_radius = 10.0, sys_tube = 1.0;
    int sys_grid = 8, sys_workers = 0;
    systems_count->add_option("--f1", sys_f1, "first equation JSON")->required();
    systems_count->add_option("--f2", sys_f2, "second equation JSON")->required();
    systems_count->add_option("--radius", sys_radius, "ball radius");
    systems_count->add_option("--tube", sys_tube, "|Re z_k| bound");
    systems_count->add_option("--grid", sys_grid, "Newton seeds per pi");
    systems_count->add_option("--workers", sys_workers, "worker threads");
    systems_count->add_option("--out", out_path, "output CSV path");

    // ---- theorem1
    auto* theorem_cmd =
        app.add_subcommand("theorem1", "density prediction vs empirical counts");
    std::vector<std::string> th_spectra, th_functions;
    std::string th_radii;
    double th_tube = 1.0;
    QuadFlags th_quad;
    theorem_cmd->add_option("--spectra", th_spectra, "spectrum JSON files")->expected(-1);
    theorem_cmd->add_option("--f", th_functions, "function JSON files")->expected(-1);
    theorem_cmd->add_option("--radii", th_radii, "comma-separated radii");
    theorem_cmd->add_option("--tube", th_tube, "|Re| bound for n = 2 counting");
    th_quad.attach(theorem_cmd);
    theorem_cmd->add_option("--out", out_path, "output JSON path");

    // ---- average
    auto* average_cmd = app.add_subcommand("average", "Monte-Carlo averaged zero counts");
    std::string avg_space, avg_tlist;
    double avg_radius = 1.0;
    int avg_trials = 200, avg_workers = 0;
    std::uint64_t avg_seed = 0;
    average_cmd->add_option("--space", avg_space, "basis-space JSON file");
    average_cmd->add_option("--t", avg_tlist, "comma-separated scale list");
    average_cmd->add_option("--radius", avg_radius, "disk radius");
    average_cmd->add_option("--trials", avg_trials, "Monte-Carlo trials");
    average_cmd->add_option("--seed", avg_seed, "RNG seed");
    average_cmd->add_option("--workers", avg_workers, "worker threads");
    average_cmd->add_option("--out", out_path, "output JSON path");

    // ---- regularity
    auto* reg_cmd = app.add_subcommand("regularity", "deviation profile from the support function");
    std::string reg_space, reg_tlist;
    int reg_samples = 0;
    std::uint64_t reg_seed = 0;
    reg_cmd->add_option("--space", reg_space, "basis-space JSON file");
    reg_cmd->add_option("--t", reg_tlist, "comma-separated scale list");
    reg_cmd->add_option("--samples", reg_samples, "sphere sample size");
    reg_cmd->add_option("--seed", reg_seed, "sample seed");
    reg_cmd->add_option("--out", out_path, "output CSV path");

    // ---- crofton
    auto* crofton_cmd =
        app.add_subcommand("crofton", "MC zero counts vs exact expected-density quadrature");
    std::string cro_space;
    double cro_radius = 20.0;
    int cro_trials = 400, cro_workers = 0;
    long cro_samples = 0;
    std::uint64_t cro_seed = 0;
    crofton_cmd->add_option("--space", cro_space, "basis-space JSON file");
    crofton_cmd->add_option("--radius", cro_radius, "disk radius");
    crofton_cmd->add_option("--trials", cro_trials, "Monte-Carlo trials");
    crofton_cmd->add_option("--seed", cro_seed, "RNG seed");
    crofton_cmd->add_option("--samples", cro_samples, "quadrature samples");
    crofton_cmd->add_option("--workers", cro_workers, "worker threads");
    crofton_cmd->add_option("--out", out_path, "output JSON path");

    CLI11_PARSE(app, argc, argv);

    Run run;
    try {
        TomlTable toml;
        if (!config_path.empty()) toml = TomlTable::parse_file(config_path);

        if (pvol_cmd->parsed()) {
            ConfigLayer cfg{pvol_cmd, toml, "quadrature"};
            std::string spectrum =
                pvol_cmd->count("--spectrum") ? pvol_spectrum : toml.str("pvol.spectrum", pvol_spectrum);
            if (spectrum.empty()) throw CLI::ValidationError("--spectrum", "missing spectrum file");
            QuadratureSpec q = pvol_quad.resolve(cfg, run);
            run.effective["command"] = "pvol";
            run.effective["spectrum"] = spectrum;
            return cmd_pvol(run, {spectrum}, q, out_path, false);
        }
        if (mixed_cmd->parsed()) {
            ConfigLayer cfg{mixed_cmd, toml, "quadrature"};
            QuadratureSpec q = mixed_quad.resolve(cfg, run);
            run.effective["command"] = "mixed-pvol";
            run.effective["spectra"] = mixed_spectra;
            if (mixed_spectra.empty())
                throw CLI::ValidationError("--spectra", "missing spectrum files");
            return cmd_pvol(run, mixed_spectra, q, out_path, true);
        }
        if (zeros_cmd->parsed()) {
            run.effective = {{"command", "zeros"}, {"f", zeros_f},     {"radius", zeros_radius},
                             {"center_re", zeros_cre}, {"center_im", zeros_cim}, {"locate", zeros_locate}};
            return cmd_zeros(run, zeros_f, zeros_radius, zeros_cre, zeros_cim, zeros_locate,
                             out_path, format);
        }
        if (density_cmd->parsed()) {
            ConfigLayer cfg{density_cmd, toml, "density"};
            std::string f = cfg.str("--f", "f", density_f);
            std::vector<double> radii = cfg.numbers("--radii", "radii", parse_list(density_radii));
            run.effective = {{"command", "density"}, {"f", f}, {"radii", radii}};
            return cmd_density(run, f, radii, out_path, format);
        }
        if (systems_count->parsed()) {
            run.effective = {{"command", "systems count"}, {"f1", sys_f1},   {"f2", sys_f2},
                             {"radius", sys_radius},       {"tube", sys_tube}, {"grid", sys_grid}};
            return cmd_systems(run, sys_f1, sys_f2, sys_radius, sys_tube, sys_grid, sys_workers,
                               out_path);
        }
        if (theorem_cmd->parsed()) {
            ConfigLayer cfg{theorem_cmd, toml, "quadrature"};
            QuadratureSpec q = th_quad.resolve(cfg, run);
            std::vector<double> radii = parse_list(th_radii);
            if (radii.empty()) radii = toml.numbers("theorem1.radii");
            run.effective["command"] = "theorem1";
            run.effective["spectra"] = th_spectra;
            run.effective["functions"] = th_functions;
            run.effective["radii"] = radii;
            return cmd_theorem1(run, th_spectra, th_functions, radii, th_tube, q, out_path);
        }
        if (average_cmd->parsed()) {
            ConfigLayer cfg{average_cmd, toml, "experiment"};
            std::string space = cfg.str("--space", "space", avg_space);
            std::vector<double> t_list = cfg.numbers("--t", "t_list", parse_list(avg_tlist));
            double radius = cfg.number("--radius", "radius", avg_radius);
            int trials = static_cast<int>(cfg.number("--trials", "trials", avg_trials));
            std::uint64_t seed =
                static_cast<std::uint64_t>(cfg.number("--seed", "seed", static_cast<double>(avg_seed)));
            if (t_list.empty()) throw CLI::ValidationError("--t", "missing t list");
            run.effective = {{"command", "average"}, {"space", space},   {"t_list", t_list},
                             {"radius", radius},     {"trials", trials}, {"seed", seed}};
            return cmd_average(run, space, t_list, radius, trials, seed, avg_workers, out_path);
        }
        if (reg_cmd->parsed()) {
            ConfigLayer cfg{reg_cmd, toml, "experiment"};
            std::string space = cfg.str("--space", "space", reg_space);
            std::vector<double> t_list = cfg.numbers("--t", "t_list", parse_list(reg_tlist));
            if (t_list.empty()) throw CLI::ValidationError("--t", "missing t list");
            run.effective = {{"command", "regularity"},
                             {"space", space},
                             {"t_list", t_list},
                             {"samples", reg_samples},
                             {"seed", reg_seed}};
            return cmd_regularity(run, space, t_list, reg_samples, reg_seed, out_path);
        }
        if (crofton_cmd->parsed()) {
            ConfigLayer cfg{crofton_cmd, toml, "experiment"};
            std::string space = cfg.str("--space", "space", cro_space);
            double radius = cfg.number("--radius", "radius", cro_radius);
            int trials = static_cast<int>(cfg.number("--trials", "trials", cro_trials));
            std::uint64_t seed =
                static_cast<std::uint64_t>(cfg.number("--seed", "seed", static_cast<double>(cro_seed)));
            run.effective = {{"command", "crofton"},
                             {"space", space},
                             {"radius", radius},
                             {"trials", trials},
                             {"seed", seed}};
            return cmd_crofton(run, space, radius, trials, seed, cro_samples, cro_workers,
                               out_path);
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
