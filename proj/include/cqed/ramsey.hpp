#pragma once

// Ramsey interferometry of the loop-induced phase.
//
// Protocol: the atom enters in (|1> + |2>)/sqrt(2), mode a+ in the chosen
// cavity state and a- in vacuum; the drive polarization runs once around the
// loop during the interaction time tau; a pi/2 pulse with relative phase xi
//
//     |1> -> (|1> + e^{i xi} |2>)/sqrt(2),   |2> -> (-e^{-i xi} |1> + |2>)/sqrt(2)
//
// closes the interferometer and P2 is summed over all photon sectors. Fringes
// are fitted to a + b cos(xi + Phi) and shifts are reported relative to a
// caliber fringe: the frozen-polarization twin run in full-dynamics mode, the
// bare prepared state in ideal-phase mode. A phase e^{i eta} on |2> relative to
// |1> therefore reads as Phi = -eta.

#include <numbers>
#include <vector>

#include "cqed/phases.hpp"

namespace cqed {

enum class CavityKind { vacuum, fock, coherent };

struct CavitySpec {
    CavityKind kind = CavityKind::vacuum;
    int photons = 0;          // fock
    Complex alpha = 0.0;      // coherent
    double tail_tol = 1e-6;   // coherent

    static CavitySpec vacuum() { return {}; }
    static CavitySpec fock(int n) { return {CavityKind::fock, n, 0.0, 1e-6}; }
    static CavitySpec coherent(Complex alpha, double tail_tol = 1e-6)
    {
        return {CavityKind::coherent, 0, alpha, tail_tol};
    }
};

enum class RamseyMode { full_dynamics, ideal_phase };

inline constexpr int min_xi_samples = 16;
inline constexpr int default_xi_samples = 32;
inline constexpr double default_residual_threshold = 1e-3;

// k * 2 pi / points, k = 0 .. points - 1.
std::vector<double> uniform_xi_grid(int points);

struct RamseyConfig {
    SpaceConfig space{4, 4};
    ModelParams params = default_params();
    CavitySpec cavity;
    PathSpec loop = lasso_path(std::numbers::pi, 1.0);
    double tau = 0.6;                  // ms; the loop is stretched to fill it
    bool round_to_rabi_cycles = true;  // lambda tau = 2 pi k
    std::vector<double> xi_grid = uniform_xi_grid(default_xi_samples);
    RamseyMode mode = RamseyMode::full_dynamics;
    PhaseScheme scheme = PhaseScheme::reference_arm;
    DriveGauge gauge = DriveGauge::plus_locked;
    int samples_per_leg = 64;
    int steps = default_steps_per_schedule; // dt = tau / steps
    double adiabaticity_threshold = non_adiabatic_threshold;
    double residual_threshold = default_residual_threshold;
};

// Throws ValidationError naming the offending field.
void validate(const RamseyConfig& config);

// Interaction time actually used: rounded to the nearest positive whole number
// of vacuum Rabi periods 2 pi / lambda when requested.
double effective_tau(const RamseyConfig& config);
int rabi_cycles(double tau, const ModelParams& params);

StateVector prepare(const SpaceConfig& space, const CavitySpec& cavity);

double close_and_detect(const StateVector& state, double xi);

struct FringeFit {
    double offset = 0.0;
    double amplitude = 0.0; // >= 0
    double phase = 0.0;     // Phi, wrapped
    double residual = 0.0;  // RMS

    double operator()(double xi) const;
};

FringeFit fit_fringe(const std::vector<double>& xi, const std::vector<double>& p2);

struct FringePoint {
    double xi;
    double p2;
};

struct RamseyResult {
    std::vector<FringePoint> p2_curve;
    std::vector<FringePoint> caliber_curve;
    FringeFit fit;
    FringeFit caliber_fit;
    double fitted_shift = 0.0; // wrap(Phi - Phi_caliber)
    double dark_fringe_p2 = 0.0; // fitted P2 where the caliber fringe is dark

    // metadata
    double gamma = 0.0;
    Complex alpha = 0.0;
    double tau = 0.0;
    int rabi_cycles = 0;
    double adiabaticity_ratio = 0.0;
    double cyclicity = 0.0; // |<psi(0)|psi(tau)>| of the loop run
    double max_norm_drift = 0.0;
    bool non_adiabatic = false;
    bool poor_fit = false;
};

RamseyResult run_experiment(const RamseyConfig& config);

// (1 - cos(gamma/4)) / 2
double p2_vacuum_formula(double gamma);

// [(1 - e^{-|a|^2})(1 - cos gamma/2) + e^{-|a|^2}(1 - cos gamma/4)] / 2
double p2_coherent_formula(Complex alpha, double gamma);

// Phase Phi of the fringe whose dark-point value is p2_coherent_formula: a
// mixture of a gamma/4 fringe with weight e^{-|a|^2} and a gamma/2 fringe.
double coherent_formula_shift(Complex alpha, double gamma);

struct AlphaPoint {
    Complex alpha;
    double fitted_shift;
    double dark_fringe_p2;
    double formula_p2;
    double formula_shift;
    double truncation_tail;
};

std::vector<AlphaPoint> effective_shift_vs_alpha(const RamseyConfig& base,
                                                 const std::vector<Complex>& alphas,
                                                 int threads = 1);

struct AdiabaticityPoint {
    double tau_requested;
    double tau;
    double adiabaticity_ratio;
    double error; // max over the xi grid of |P2(full) - P2(ideal)|
};

struct AdiabaticityStudy {
    std::vector<AdiabaticityPoint> points;
    bool monotone_decreasing = false;
    double loglog_slope_top3 = 0.0; // d log(error) / d log(tau) over the three longest times
};

AdiabaticityStudy adiabaticity_study(const RamseyConfig& base, const std::vector<double>& time_ladder,
                                     int threads = 1);

} // namespace cqed
