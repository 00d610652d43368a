// cqed-berry: Ramsey fringes, coherent-state sweeps, adiabaticity ladders and
// dressed-state phases for the two-mode cavity model.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cqed/config.hpp"
#include "cqed/csv.hpp"
#include "cqed/parallel.hpp"

namespace fs = std::filesystem;
using namespace cqed;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;
};

struct OutputFile {
    std::string name;
    std::string content;
};

std::string num(double v)
{
    return format_number(v);
}

void write_files(const Options& opt, const std::vector<OutputFile>& files)
{
    fs::create_directories(opt.out_dir);
    for (const auto& f : files) {
        const fs::path path = fs::path(opt.out_dir) / f.name;
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write " + path.string());
        }
        out << f.content;
        std::cout << "wrote " << path.string() << "\n";
    }
}

void warn_about_model(const RunConfig& config)
{
    const auto p = model_params(config);
    if (p.dispersive_warning()) {
        std::cerr << "note: delta < 5 max(g, Omega); the effective Hamiltonian is used outside its "
                     "comfortable dispersive range\n";
    }
    if (std::abs(p.stark_upper() - p.stark_lower()) > 1e-9 * p.stark_upper()) {
        std::cerr << "note: g != Omega, so the vacuum doublet is off resonance\n";
    }
}

int cmd_fringe(const RunConfig& config, const Options& opt)
{
    const auto r = run_experiment(ramsey_config(config));

    std::ostringstream csv;
    write_header(csv, config, "fringe");
    write_comment(csv, "solid_angle", num(r.gamma));
    write_comment(csv, "tau_ms", num(r.tau));
    write_comment(csv, "rabi_cycles", std::to_string(r.rabi_cycles));
    write_row(csv, std::vector<std::string>{"xi", "p2", "p2_fit", "p2_caliber", "p2_caliber_fit"});
    for (std::size_t i = 0; i < r.p2_curve.size(); ++i) {
        const double xi = r.p2_curve[i].xi;
        write_row(csv, {xi, r.p2_curve[i].p2, r.fit(xi), r.caliber_curve[i].p2, r.caliber_fit(xi)});
    }

    std::ostringstream summary;
    write_header(summary, config, "fringe");
    write_row(summary, std::vector<std::string>{
                           "gamma", "fitted_shift", "quarter_gamma", "dark_fringe_p2", "formula_p2",
                           "offset", "amplitude", "fit_residual", "tau_ms", "rabi_cycles",
                           "adiabaticity_ratio", "cyclicity", "max_norm_drift", "non_adiabatic",
                           "poor_fit"});
    const double formula = r.alpha == Complex(0.0) ? p2_vacuum_formula(r.gamma)
                                                   : p2_coherent_formula(r.alpha, r.gamma);
    write_row(summary, std::vector<std::string>{
                           num(r.gamma), num(r.fitted_shift), num(r.gamma / 4), num(r.dark_fringe_p2),
                           num(formula), num(r.fit.offset), num(r.fit.amplitude), num(r.fit.residual),
                           num(r.tau), std::to_string(r.rabi_cycles), num(r.adiabaticity_ratio),
                           num(r.cyclicity), num(r.max_norm_drift), r.non_adiabatic ? "1" : "0",
                           r.poor_fit ? "1" : "0"});

    write_files(opt, {{"fringe.csv", csv.str()}, {"fringe_summary.csv", summary.str()}});
    std::cout << "fringe: gamma=" << num(r.gamma) << " shift=" << num(r.fitted_shift)
              << " adiabaticity_ratio=" << num(r.adiabaticity_ratio) << " cyclicity=" << num(r.cyclicity)
              << (r.non_adiabatic ? " [non-adiabatic]" : "") << (r.poor_fit ? " [poor fit]" : "") << "\n";
    return 0;
}

int cmd_alpha_sweep(const RunConfig& config, const Options& opt)
{
    const auto base = ramsey_config(config);
    std::vector<Complex> alphas;
    for (double a : config.alphas) {
        alphas.push_back(std::polar(a, config.alpha_phase));
    }
    const auto points = effective_shift_vs_alpha(base, alphas, opt.threads);

    std::ostringstream csv;
    write_header(csv, config, "alpha-sweep");
    write_row(csv, std::vector<std::string>{"alpha_re", "alpha_im", "abs_alpha", "fitted_shift",
                                            "formula_shift", "dark_fringe_p2", "formula_p2",
                                            "truncation_tail"});
    for (const auto& p : points) {
        write_row(csv, {p.alpha.real(), p.alpha.imag(), std::abs(p.alpha), p.fitted_shift, p.formula_shift,
                        p.dark_fringe_p2, p.formula_p2, p.truncation_tail});
    }
    write_files(opt, {{"alpha_sweep.csv", csv.str()}});
    for (const auto& p : points) {
        std::cout << "alpha=" << num(std::abs(p.alpha)) << " shift=" << num(p.fitted_shift)
                  << " formula=" << num(p.formula_shift) << "\n";
    }
    return 0;
}

int cmd_adiabaticity(const RunConfig& config, const Options& opt)
{
    auto base = ramsey_config(config);
    const auto study = adiabaticity_study(base, config.time_ladder_ms, opt.threads);

    std::ostringstream csv;
    write_header(csv, config, "adiabaticity");
    write_comment(csv, "monotone_decreasing", study.monotone_decreasing ? "true" : "false");
    write_comment(csv, "loglog_slope_top3", num(study.loglog_slope_top3));
    write_row(csv, std::vector<std::string>{"tau_requested_ms", "tau_ms", "rabi_cycles",
                                            "adiabaticity_ratio", "max_p2_error"});
    for (const auto& p : study.points) {
        write_row(csv, std::vector<std::string>{num(p.tau_requested), num(p.tau),
                                                std::to_string(rabi_cycles(p.tau, base.params)),
                                                num(p.adiabaticity_ratio), num(p.error)});
    }
    write_files(opt, {{"adiabaticity.csv", csv.str()}});
    for (const auto& p : study.points) {
        std::cout << "tau=" << num(p.tau) << " ms error=" << num(p.error) << "\n";
    }
    std::cout << "monotone_decreasing=" << (study.monotone_decreasing ? "true" : "false")
              << " loglog_slope_top3=" << num(study.loglog_slope_top3) << "\n";
    return 0;
}

struct DressedJob {
    double gamma;
    DressedLabel label;
};

struct DressedRow {
    DressedJob job;
    Branch branch;
    double energy = 0.0;
    double reference_arm = 0.0;
    double energy_integral = 0.0;
    double berry = 0.0;
    double cyclicity = 0.0;
    std::string status = "ok";
};

int cmd_dressed_phases(const RunConfig& config, const Options& opt)
{
    const auto space = space_config(config);
    const auto params = model_params(config);
    RunConfig timed = config;
    timed.loop_time_ms = config.transport_time_ms;

    std::vector<DressedJob> jobs;
    for (double g : transport_gammas(config)) {
        for (const auto& d : config.dressed) {
            jobs.push_back({g, d});
        }
    }

    const auto results = parallel_map(jobs, opt.threads, [&](const DressedJob& job) {
        const PathSpec path = config.gamma_list.empty()
                                ? loop_path(timed)
                                : lasso_path(job.gamma, timed.loop_time_ms, config.leg_fractions);
        const auto schedule = make_schedule(path, config.samples_per_leg, config.gauge);
        const BlockHamiltonian blocks(space, params);
        const auto sel = doublet_selectors(blocks, schedule.at(0.0), schedule.drive_phase_at(0.0),
                                           job.label.n, job.label.m);
        const double dt = schedule.duration() / config.transport_steps;
        std::vector<DressedRow> rows;
        for (auto [branch, selector] : {std::pair{Branch::upper, sel[0]}, std::pair{Branch::lower, sel[1]}}) {
            DressedRow row{job, branch};
            try {
                const auto t = adiabatic_eigenstate_transport(space, params, schedule, selector, dt);
                row.energy = t.energy;
                row.reference_arm = t.reference_arm.geometric_phase;
                row.energy_integral = t.energy_integral.geometric_phase;
                row.berry = t.discrete_berry_phase;
                row.cyclicity = t.reference_arm.cyclicity;
            } catch (const DegeneracyError& e) {
                row.status = "degenerate";
                std::cerr << "dressed " << job.label.n << ":" << job.label.m << " gamma=" << num(job.gamma)
                          << (branch == Branch::upper ? " upper" : " lower") << ": " << e.what() << "\n";
            }
            rows.push_back(row);
        }
        return rows;
    });

    // unwrap along the gamma sweep for each (n, m, branch)
    std::vector<DressedRow> rows;
    for (const auto& r : results) {
        rows.insert(rows.end(), r.begin(), r.end());
    }
    std::vector<double> unwrapped(rows.size());
    const std::size_t per_gamma = 2 * config.dressed.size();
    for (std::size_t slot = 0; slot < per_gamma; ++slot) {
        std::vector<double> series;
        for (std::size_t i = slot; i < rows.size(); i += per_gamma) {
            series.push_back(rows[i].reference_arm);
        }
        const auto u = unwrap_phases(series);
        for (std::size_t k = 0, i = slot; i < rows.size(); ++k, i += per_gamma) {
            unwrapped[i] = u[k];
        }
    }

    std::ostringstream csv;
    write_header(csv, config, "dressed-phases");
    write_row(csv, std::vector<std::string>{"n", "m", "gamma", "branch", "energy", "geometric_phase",
                                            "geometric_phase_unwrapped", "energy_integral_phase",
                                            "adiabatic_limit_phase", "analytic_phase", "resonant_doublet_law",
                                            "cyclicity", "status"});
    bool failed = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const int n = r.job.label.n, m = r.job.label.m;
        failed = failed || r.status != "ok";
        write_row(csv, std::vector<std::string>{
                           std::to_string(n), std::to_string(m), num(r.job.gamma),
                           r.branch == Branch::upper ? "upper" : "lower", num(r.energy),
                           num(r.reference_arm), num(unwrapped[i]), num(r.energy_integral), num(r.berry),
                           num(analytic_dressed_phase(n, m, r.job.gamma, r.branch)),
                           num(doublet_phase(n, m, r.job.gamma)), num(r.cyclicity), r.status});
    }
    write_files(opt, {{"dressed_phases.csv", csv.str()}});
    for (const auto& r : rows) {
        std::cout << "dressed " << r.job.label.n << ":" << r.job.label.m << " gamma=" << num(r.job.gamma)
                  << (r.branch == Branch::upper ? " upper " : " lower ") << "phase=" << num(r.reference_arm)
                  << " (" << r.status << ")\n";
    }
    return failed ? 2 : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Geometric phases of a two-mode cavity QED model: Ramsey fringes and sweeps"};
    app.set_version_flag("--version", artifact_version);
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
        sub->add_option("--threads", opt.threads, "worker threads for sweeps")
            ->check(CLI::Range(1, 256))
            ->capture_default_str();
    };
    auto* fringe = app.add_subcommand("fringe", "Ramsey fringe for one loop, with caliber and fit");
    auto* alpha = app.add_subcommand("alpha-sweep", "fitted shift versus coherent amplitude");
    auto* adiabatic = app.add_subcommand("adiabaticity", "fringe error versus loop time");
    auto* dressed = app.add_subcommand("dressed-phases", "geometric phases of transported dressed states");
    for (auto* sub : {fringe, alpha, adiabatic, dressed}) {
        add_common(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        RunConfig config;
        if (!opt.config_path.empty()) {
            config = load_config(opt.config_path);
        }
        const Task task = fringe->parsed()      ? Task::fringe
                          : alpha->parsed()     ? Task::alpha_sweep
                          : adiabatic->parsed() ? Task::adiabaticity
                                                : Task::dressed_phases;
        validate(config, task);
        warn_about_model(config);
        if (fringe->parsed()) {
            return cmd_fringe(config, opt);
        }
        if (alpha->parsed()) {
            return cmd_alpha_sweep(config, opt);
        }
        if (adiabatic->parsed()) {
            return cmd_adiabaticity(config, opt);
        }
        return cmd_dressed_phases(config, opt);
    } catch (const ValidationError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
