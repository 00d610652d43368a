#include <doctest.h>

#include <numeric>

#include "cqed/phases.hpp"
#include "oracles.hpp"

using namespace cqed;
using oracle::pi;

namespace {

struct DoubletRun {
    double upper;
    double lower;
    double upper_berry;
    double lower_berry;
};

DoubletRun vacuum_doublet(const SpaceConfig& space, const ModelParams& params, const PathSpec& path,
                          int steps = 20000, PhaseScheme scheme = PhaseScheme::reference_arm)
{
    const auto schedule = make_schedule(path, 64);
    const BlockHamiltonian blocks(space, params);
    const auto sel = doublet_selectors(blocks, schedule.at(0.0), schedule.drive_phase_at(0.0), 0, 0);
    const double dt = schedule.duration() / steps;
    const auto up = adiabatic_eigenstate_transport(space, params, schedule, sel[0], dt);
    const auto lo = adiabatic_eigenstate_transport(space, params, schedule, sel[1], dt);
    return {up.reading(scheme).geometric_phase, lo.reading(scheme).geometric_phase,
            up.discrete_berry_phase, lo.discrete_berry_phase};
}

double slope_through(const std::vector<double>& x, const std::vector<double>& y)
{
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace

TEST_CASE("phase wrapping")
{
    CHECK(wrap_phase(pi) == doctest::Approx(pi));
    CHECK(wrap_phase(-pi) == doctest::Approx(pi));
    CHECK(wrap_phase(3 * pi / 2) == doctest::Approx(-pi / 2));
    CHECK(wrap_phase(0.3 + 8 * pi) == doctest::Approx(0.3));

    const auto r = make_reading(3.0, -3.0, 1.0, PhaseScheme::reference_arm);
    CHECK(r.geometric_phase == doctest::Approx(6.0 - 2 * pi));
}

TEST_CASE("Pancharatnam phase")
{
    const auto space = make_space(2, 2);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
    v(0) = Complex(0.6, 0.0);
    v(5) = Complex(0.0, 0.8);
    const StateVector psi(space, v);

    const auto same = pancharatnam_phase(psi, psi);
    CHECK(same.phase == 0.0);
    CHECK(same.cyclicity == doctest::Approx(1.0));
    CHECK_FALSE(same.non_cyclic);

    const auto shifted = pancharatnam_phase(psi, psi.with_global_phase(pi / 4));
    CHECK(shifted.phase == doctest::Approx(pi / 4));

    const auto orthogonal = pancharatnam_phase(fock_state(space, Level::one, 0, 0),
                                               fock_state(space, Level::two, 0, 0));
    CHECK(orthogonal.cyclicity == 0.0);
    CHECK(orthogonal.non_cyclic);
}

TEST_CASE("reference-arm dynamical phase")
{
    const auto space = make_space(1, 1);
    const auto params = default_params();
    const auto loop = make_schedule(lasso_path(pi, 0.6), 32);

    const auto ground = dynamical_phase_reference(fock_state(space, Level::one, 0, 0), loop, params, 1e-4);
    CHECK(ground.phase == 0.0);

    // whole Rabi cycles return |2,0,0> with the Stark phase only
    for (int k : {1, 3, 10}) {
        const double t = 2 * pi * k / params.lambda();
        const auto sched = frozen_schedule(Polarization(0.0, 0.0), t);
        const auto r = dynamical_phase_reference(fock_state(space, Level::two, 0, 0), sched, params, t / 100);
        CHECK(std::abs(wrap_phase(r.phase + params.stark_upper() * t)) < 1e-10);
        CHECK(r.cyclicity == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("analytic dressed-phase law")
{
    CHECK(analytic_dressed_phase(0, 0, pi, Branch::upper) == doctest::Approx(pi / 4));
    CHECK(analytic_dressed_phase(1, 0, pi, Branch::upper) == doctest::Approx(3 * pi / 4));
    CHECK(analytic_dressed_phase(0, 1, pi, Branch::upper) == doctest::Approx(-pi / 4));
    for (int n = 0; n < 4; ++n) {
        for (int m = 0; m < 4; ++m) {
            CHECK(analytic_dressed_phase(n, m, 0.0, Branch::lower) == 0.0);
            for (double g : {0.5, 2.0, 5.0}) {
                CHECK(analytic_dressed_phase(n, m, g, Branch::upper)
                      == -analytic_dressed_phase(n, m, g, Branch::lower));
                CHECK(analytic_dressed_phase(n, m, 2 * g, Branch::upper)
                      == doctest::Approx(2 * analytic_dressed_phase(n, m, g, Branch::upper)));
            }
            CHECK(doublet_phase(n, m, 1.3) == analytic_dressed_phase(n, m, 1.3, Branch::lower));
        }
    }
    CHECK_THROWS_AS(analytic_dressed_phase(-1, 0, pi, Branch::upper), RangeError);
}

TEST_CASE("ideal phase map")
{
    const auto space = make_space(3, 3);
    const auto ground = fock_state(space, Level::one, 0, 0);
    CHECK((ideal_phase_map(ground, pi).amplitudes() - ground.amplitudes()).norm() == 0.0);

    const auto upper = ideal_phase_map(fock_state(space, Level::two, 0, 0), pi);
    CHECK(std::abs(upper.amplitude({Level::two, 0, 0}) - std::polar(1.0, -pi / 4)) < 1e-15);

    // doublet partners share the phase
    for (int n = 0; n < 3; ++n) {
        for (int m = 0; m <= 3; ++m) {
            CHECK(ideal_component_phase({Level::two, n, m}, 1.1)
                  == ideal_component_phase({Level::one, n + 1, m}, 1.1));
        }
    }
    CHECK(ideal_component_phase({Level::one, 0, 2}, pi) == doctest::Approx(pi));
}

TEST_CASE("ground state transport is trivial")
{
    const auto space = make_space(1, 1);
    const auto loop = make_schedule(lasso_path(pi, 0.6), 32);
    const auto r = adiabatic_eigenstate_transport(space, default_params(), loop, {0, 0}, 1e-4);
    CHECK(r.energy == 0.0);
    CHECK(r.reference_arm.geometric_phase == 0.0);
    CHECK(r.energy_integral.geometric_phase == 0.0);
    CHECK(r.discrete_berry_phase == 0.0);
}

TEST_CASE("vacuum doublet transport")
{
    const auto space = make_space(1, 1);
    const auto params = default_params();

    // both dressed states of the resonant doublet acquire -gamma/4
    std::vector<double> gammas{pi / 2, pi, 3 * pi / 2}, upper, lower;
    for (double g : gammas) {
        const auto run = vacuum_doublet(space, params, lasso_path(g, 24.0));
        CHECK(run.upper == doctest::Approx(-g / 4).epsilon(0.02));
        CHECK(run.lower == doctest::Approx(-g / 4).epsilon(0.02));
        CHECK(std::abs(run.upper_berry + g / 4) < 1e-4);
        CHECK(std::abs(run.lower_berry + g / 4) < 1e-4);
        // leading non-adiabatic corrections are opposite on the two branches
        CHECK(std::abs(0.5 * (run.upper + run.lower) + g / 4) < 2e-3);
        upper.push_back(run.upper);
        lower.push_back(run.lower);
    }
    CHECK(slope_through(gammas, upper) == doctest::Approx(-0.25).epsilon(0.02));
    CHECK(slope_through(gammas, lower) == doctest::Approx(-0.25).epsilon(0.02));
}

TEST_CASE("energy-integral scheme agrees with the reference arm on slow loops")
{
    const auto space = make_space(1, 1);
    const auto params = default_params();
    const auto ref = vacuum_doublet(space, params, lasso_path(pi, 400.0), 40000);
    const auto energy = vacuum_doublet(space, params, lasso_path(pi, 400.0), 40000,
                                       PhaseScheme::energy_integral);
    CHECK(std::abs(ref.upper - energy.upper) < 1e-3);
    CHECK(std::abs(ref.lower - energy.lower) < 1e-3);
}

TEST_CASE("reversal and double traversal")
{
    const auto space = make_space(1, 1);
    const auto params = default_params();
    const auto loop = lasso_path(pi, 24.0);
    const auto forward = vacuum_doublet(space, params, loop);
    const auto backward = vacuum_doublet(space, params, reversed(loop));
    CHECK(backward.upper == doctest::Approx(-forward.upper).epsilon(0.02));
    CHECK(backward.lower == doctest::Approx(-forward.lower).epsilon(0.02));

    const auto twice = vacuum_doublet(space, params, concatenate(loop, loop), 40000);
    CHECK(twice.upper == doctest::Approx(2 * forward.upper).epsilon(0.02));
    CHECK(twice.lower == doctest::Approx(2 * forward.lower).epsilon(0.02));
}

TEST_CASE("rescaling invariance")
{
    const auto space = make_space(1, 1);
    const auto base = default_params();
    const auto loop = lasso_path(pi, 6.0);
    const auto reference = vacuum_doublet(space, base, loop);
    for (double c : {0.5, 2.0, 3.0}) {
        const auto scaled = make_params(c * base.g, c * base.omega_drive, c * base.delta);
        // loop time in units of 1/lambda held fixed
        const auto run = vacuum_doublet(space, scaled, with_total_time(loop, 6.0 / c));
        CHECK(std::abs(run.upper - reference.upper) < 1e-6);
        CHECK(std::abs(run.lower - reference.lower) < 1e-6);
        // the adiabatic limit does not see the time scale at all
        const auto fixed_time = vacuum_doublet(space, scaled, loop);
        CHECK(std::abs(fixed_time.upper_berry - reference.upper_berry) < 1e-6);
        CHECK(std::abs(fixed_time.lower_berry - reference.lower_berry) < 1e-6);
    }
}

TEST_CASE("higher doublet phases are linear in the solid angle")
{
    // sector 2 must be complete in both modes for the polarization rotation to close on it
    const auto space = make_space(2, 2);
    const auto params = default_params();
    std::vector<double> gammas{pi / 2, pi, 3 * pi / 2}, upper, lower;
    for (double g : gammas) {
        const auto schedule = make_schedule(lasso_path(g, 24.0), 64);
        const BlockHamiltonian blocks(space, params);
        const auto sel = doublet_selectors(blocks, schedule.at(0.0), schedule.drive_phase_at(0.0), 1, 0);
        const double dt = schedule.duration() / 20000;
        upper.push_back(adiabatic_eigenstate_transport(space, params, schedule, sel[0], dt)
                            .reference_arm.geometric_phase);
        lower.push_back(adiabatic_eigenstate_transport(space, params, schedule, sel[1], dt)
                            .reference_arm.geometric_phase);
    }
    upper = unwrap_phases(upper);
    lower = unwrap_phases(lower);
    const double su = slope_through(gammas, upper);
    const double sl = slope_through(gammas, lower);
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        CHECK(upper[i] / gammas[i] == doctest::Approx(su).epsilon(0.02));
        CHECK(lower[i] / gammas[i] == doctest::Approx(sl).epsilon(0.02));
    }
    // off-resonant doublet: weights on |2> are 1/3 and 2/3 rather than 1/2
    CHECK(su == doctest::Approx(-5.0 / 6).epsilon(0.02));
    CHECK(sl == doctest::Approx(-2.0 / 3).epsilon(0.02));
}

TEST_CASE("sweep unwrapping")
{
    const auto u = unwrap_phases({3.0, -3.0, 0.5 - 2 * pi});
    CHECK(u[1] == doctest::Approx(2 * pi - 3.0));
    CHECK(u[2] == doctest::Approx(0.5));
    CHECK(unwrap_phases({}).empty());
}

TEST_CASE("fast loops are rejected as non-adiabatic")
{
    const auto space = make_space(1, 1);
    const auto params = default_params();
    const auto schedule = make_schedule(lasso_path(pi, 0.06), 32);
    const BlockHamiltonian blocks(space, params);
    const auto sel = doublet_selectors(blocks, schedule.at(0.0), schedule.drive_phase_at(0.0), 0, 0);
    CHECK_THROWS_AS(adiabatic_eigenstate_transport(space, params, schedule, sel[0], 1e-5),
                    DegeneracyError);
    try {
        adiabatic_eigenstate_transport(space, params, schedule, sel[0], 1e-5);
    } catch (const DegeneracyError& e) {
        CHECK(e.gap() == doctest::Approx(params.lambda())); // dark state sits mid-doublet
        CHECK(e.time_ms() >= 0.0);
    }
    CHECK_THROWS_AS(adiabatic_eigenstate_transport(space, params, schedule, {9, 0}, 1e-5), RangeError);
    CHECK_THROWS_AS(adiabatic_eigenstate_transport(make_space(2, 1), params, schedule, {2, 0}, 1e-5),
                    RangeError);
}
