#include "cqed/ramsey.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cqed/parallel.hpp"

namespace cqed {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

std::vector<double> detect_curve(const StateVector& state, const std::vector<double>& xi_grid)
{
    std::vector<double> p2;
    p2.reserve(xi_grid.size());
    for (double xi : xi_grid) {
        p2.push_back(close_and_detect(state, xi));
    }
    return p2;
}

std::vector<FringePoint> zip(const std::vector<double>& xi, const std::vector<double>& p2)
{
    std::vector<FringePoint> out;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        out.push_back({xi[i], p2[i]});
    }
    return out;
}

double cavity_tail(const RamseyConfig& config)
{
    return config.cavity.kind == CavityKind::coherent
             ? coherent_tail(config.cavity.alpha, config.space.nmax_plus())
             : 0.0;
}

} // namespace

std::vector<double> uniform_xi_grid(int points)
{
    if (points < 1) {
        throw RangeError("xi grid needs at least one point");
    }
    std::vector<double> grid;
    for (int k = 0; k < points; ++k) {
        grid.push_back(two_pi * k / points);
    }
    return grid;
}

void validate(const RamseyConfig& config)
{
    if (!(config.tau > 0.0) || !std::isfinite(config.tau)) {
        throw ValidationError("tau: interaction time must be positive");
    }
    if (config.xi_grid.size() < static_cast<std::size_t>(min_xi_samples)) {
        throw ValidationError("xi_points: the fringe fit needs at least "
                              + std::to_string(min_xi_samples) + " xi samples");
    }
    if (config.samples_per_leg < 2) {
        throw ValidationError("samples_per_leg: must be at least 2");
    }
    if (config.steps < 1) {
        throw ValidationError("steps: must be positive");
    }
    if (config.mode == RamseyMode::full_dynamics && config.scheme != PhaseScheme::reference_arm) {
        throw ValidationError("scheme: full-dynamics Ramsey runs remove dynamical phases with the "
                              "reference arm; the energy integral is only defined for eigenstates");
    }
    if (config.cavity.kind == CavityKind::fock
        && (config.cavity.photons < 0 || config.cavity.photons > config.space.nmax_plus())) {
        throw ValidationError("fock_n: photon number outside [0, nmax_plus]");
    }
    if (config.cavity.kind == CavityKind::coherent) {
        coherent_amplitudes(config.cavity.alpha, config.space.nmax_plus(), config.cavity.tail_tol);
    }
    if (config.loop.legs.empty()) {
        throw ValidationError("loop: path has no legs");
    }
    if (!is_closed(config.loop)) {
        throw ClosureError("loop: polarization path is not closed");
    }
}

int rabi_cycles(double tau, const ModelParams& params)
{
    return std::max(1, static_cast<int>(std::lround(params.lambda() * tau / two_pi)));
}

double effective_tau(const RamseyConfig& config)
{
    if (!config.round_to_rabi_cycles) {
        return config.tau;
    }
    return two_pi * rabi_cycles(config.tau, config.params) / config.params.lambda();
}

StateVector prepare(const SpaceConfig& space, const CavitySpec& cavity)
{
    Vector plus = Vector::Zero(space.nmax_plus() + 1);
    switch (cavity.kind) {
    case CavityKind::vacuum:
        plus(0) = 1.0;
        break;
    case CavityKind::fock:
        if (cavity.photons < 0 || cavity.photons > space.nmax_plus()) {
            throw RangeError("Fock input n=" + std::to_string(cavity.photons) + " above nmax_plus");
        }
        plus(cavity.photons) = 1.0;
        break;
    case CavityKind::coherent:
        plus = coherent_amplitudes(cavity.alpha, space.nmax_plus(), cavity.tail_tol);
        break;
    }
    Vector minus = Vector::Zero(space.nmax_minus() + 1);
    minus(0) = 1.0;
    const Eigen::Vector2cd atom(1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2);
    return product_state(space, atom, plus, minus);
}

double close_and_detect(const StateVector& state, double xi)
{
    const auto& space = state.space();
    const auto& psi = state.amplitudes();
    const Complex e_xi = std::polar(1.0, xi);
    double p2 = 0.0;
    for (int n = 0; n <= space.nmax_plus(); ++n) {
        for (int m = 0; m <= space.nmax_minus(); ++m) {
            const Complex a1 = psi(static_cast<Eigen::Index>(space.index({Level::one, n, m})));
            const Complex a2 = psi(static_cast<Eigen::Index>(space.index({Level::two, n, m})));
            p2 += 0.5 * std::norm(e_xi * a1 + a2);
        }
    }
    return p2;
}

double FringeFit::operator()(double xi) const
{
    return offset + amplitude * std::cos(xi + phase);
}

FringeFit fit_fringe(const std::vector<double>& xi, const std::vector<double>& p2)
{
    if (xi.size() != p2.size() || xi.size() < 3) {
        throw ValidationError("fringe fit needs at least three (xi, P2) pairs");
    }
    // a + p cos xi + q sin xi, with b cos Phi = p and b sin Phi = -q
    const auto n = static_cast<Eigen::Index>(xi.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(xi[static_cast<std::size_t>(i)]);
        design(i, 2) = std::sin(xi[static_cast<std::size_t>(i)]);
        rhs(i) = p2[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
    FringeFit fit;
    fit.offset = coef(0);
    fit.amplitude = std::hypot(coef(1), coef(2));
    fit.phase = fit.amplitude == 0.0 ? 0.0 : std::atan2(-coef(2), coef(1));
    fit.residual = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(n));
    return fit;
}

RamseyResult run_experiment(const RamseyConfig& config)
{
    validate(config);

    RamseyResult result;
    result.tau = effective_tau(config);
    result.rabi_cycles = rabi_cycles(result.tau, config.params);
    const PathSpec path = with_total_time(config.loop, result.tau);
    const Schedule schedule = make_schedule(path, config.samples_per_leg, config.gauge);
    result.gamma = solid_angle(path);
    result.alpha = config.cavity.kind == CavityKind::coherent ? config.cavity.alpha : Complex(0.0);
    result.adiabaticity_ratio = adiabaticity_ratio(schedule, config.params);
    result.non_adiabatic = result.adiabaticity_ratio > config.adiabaticity_threshold;

    const StateVector initial = prepare(config.space, config.cavity);
    const double dt = result.tau / config.steps;

    std::vector<double> loop_curve;
    std::vector<double> caliber_curve;
    if (config.mode == RamseyMode::full_dynamics) {
        const auto run = evolve(initial, schedule, config.params, dt);
        const auto reference = evolve(initial, frozen_schedule(schedule.at(0.0), result.tau, config.gauge),
                                      config.params, dt);
        result.cyclicity = std::abs(inner_product(initial, run.final_state()));
        result.max_norm_drift = std::max(run.stats.max_norm_drift, reference.stats.max_norm_drift);
        loop_curve = detect_curve(run.final_state(), config.xi_grid);
        caliber_curve = detect_curve(reference.final_state(), config.xi_grid);
    } else {
        const auto mapped = ideal_phase_map(initial, result.gamma);
        result.cyclicity = std::abs(inner_product(initial, mapped));
        loop_curve = detect_curve(mapped, config.xi_grid);
        caliber_curve = detect_curve(initial, config.xi_grid);
    }

    result.p2_curve = zip(config.xi_grid, loop_curve);
    result.caliber_curve = zip(config.xi_grid, caliber_curve);
    result.fit = fit_fringe(config.xi_grid, loop_curve);
    result.caliber_fit = fit_fringe(config.xi_grid, caliber_curve);
    result.fitted_shift = wrap_phase(result.fit.phase - result.caliber_fit.phase);
    result.dark_fringe_p2 = result.fit(pi - result.caliber_fit.phase);
    result.poor_fit = result.fit.residual > config.residual_threshold;
    return result;
}

double p2_vacuum_formula(double gamma)
{
    return 0.5 * (1.0 - std::cos(gamma / 4.0));
}

double p2_coherent_formula(Complex alpha, double gamma)
{
    const double vacuum_weight = std::exp(-std::norm(alpha));
    return 0.5 * ((1.0 - vacuum_weight) * (1.0 - std::cos(gamma / 2.0))
                  + vacuum_weight * (1.0 - std::cos(gamma / 4.0)));
}

double coherent_formula_shift(Complex alpha, double gamma)
{
    const double vacuum_weight = std::exp(-std::norm(alpha));
    return std::arg(vacuum_weight * std::polar(1.0, gamma / 4.0)
                    + (1.0 - vacuum_weight) * std::polar(1.0, gamma / 2.0));
}

std::vector<AlphaPoint> effective_shift_vs_alpha(const RamseyConfig& base,
                                                 const std::vector<Complex>& alphas, int threads)
{
    // Validate every point before computing any of them.
    std::vector<RamseyConfig> configs;
    for (const auto& alpha : alphas) {
        RamseyConfig c = base;
        c.cavity = CavitySpec::coherent(alpha, base.cavity.tail_tol);
        validate(c);
        configs.push_back(std::move(c));
    }
    return parallel_map(configs, threads, [](const RamseyConfig& c) {
        const auto r = run_experiment(c);
        return AlphaPoint{c.cavity.alpha,
                          r.fitted_shift,
                          r.dark_fringe_p2,
                          p2_coherent_formula(c.cavity.alpha, r.gamma),
                          coherent_formula_shift(c.cavity.alpha, r.gamma),
                          cavity_tail(c)};
    });
}

AdiabaticityStudy adiabaticity_study(const RamseyConfig& base, const std::vector<double>& time_ladder,
                                     int threads)
{
    if (time_ladder.empty()) {
        throw ValidationError("time_ladder: needs at least one loop time");
    }
    std::vector<RamseyConfig> configs;
    for (double tau : time_ladder) {
        RamseyConfig c = base;
        c.tau = tau;
        c.mode = RamseyMode::full_dynamics;
        c.scheme = PhaseScheme::reference_arm;
        validate(c);
        configs.push_back(std::move(c));
    }

    AdiabaticityStudy study;
    study.points = parallel_map(configs, threads, [](const RamseyConfig& c) {
        RamseyConfig ideal = c;
        ideal.mode = RamseyMode::ideal_phase;
        const auto full = run_experiment(c);
        const auto reference = run_experiment(ideal);
        double error = 0.0;
        for (std::size_t i = 0; i < full.p2_curve.size(); ++i) {
            error = std::max(error, std::abs(full.p2_curve[i].p2 - reference.p2_curve[i].p2));
        }
        return AdiabaticityPoint{c.tau, full.tau, full.adiabaticity_ratio, error};
    });

    // Monotonicity and the slope are judged against increasing loop time.
    auto sorted = study.points;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.tau < b.tau; });
    study.monotone_decreasing = true;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (!(sorted[i].error < sorted[i - 1].error)) {
            study.monotone_decreasing = false;
        }
    }
    if (sorted.size() >= 3) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const std::size_t first = sorted.size() - 3;
        for (std::size_t i = first; i < sorted.size(); ++i) {
            const double x = std::log(sorted[i].tau);
            const double y = std::log(sorted[i].error);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        study.loglog_slope_top3 = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
    }
    return study;
}

} // namespace cqed
