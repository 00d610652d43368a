#pragma once

// Run configuration for the command-line front end.
//
// Flat key = value file, one entry per line, '#' starts a comment. Lists are
// comma separated. Frequencies are entered in kHz and converted to rad/ms.
// Every key is optional; see README for the full table.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cqed/ramsey.hpp"

namespace cqed {

inline constexpr const char* artifact_version = "cqed-berry 0.1.0";

struct DressedLabel {
    int n = 0;
    int m = 0;
};

struct RunConfig {
    // model
    double g_khz = 50.0;
    double omega_khz = 50.0;
    double delta_ratio = 3.0; // delta / Omega

    // space
    int nmax_plus = 4;
    int nmax_minus = 4;
    double tail_tol = 1e-6;

    // loop: a lasso of solid angle gamma, or explicit knots (theta:phi, ...)
    double gamma = std::numbers::pi;
    std::vector<SpherePoint> path_knots;
    std::vector<double> path_weights; // relative leg durations
    LegFractions leg_fractions = default_leg_fractions;
    double loop_time_ms = 0.6;
    bool rabi_rounding = true;
    int samples_per_leg = 64;
    DriveGauge gauge = DriveGauge::plus_locked;

    // Ramsey
    CavitySpec cavity;
    int xi_points = default_xi_samples;
    RamseyMode mode = RamseyMode::full_dynamics;
    int steps = default_steps_per_schedule;

    // sweeps
    std::vector<double> alphas{0.0, 0.5, 1.0, 1.5, 2.0};
    double alpha_phase = 0.0;
    std::vector<double> time_ladder_ms{0.6, 1.2, 2.4, 4.8, 9.6};
    std::vector<DressedLabel> dressed{{0, 0}, {1, 0}};
    std::vector<double> gamma_list;
    double transport_time_ms = 24.0;
    int transport_steps = default_steps_per_schedule;

    unsigned long seed = 0; // reserved
};

// Throws ValidationError naming the key (and line) on malformed input.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

enum class Task { all, fringe, alpha_sweep, adiabaticity, dressed_phases };

// Cross-field checks against the preconditions of the given task (every task by default).
void validate(const RunConfig& config, Task task = Task::all);

ModelParams model_params(const RunConfig& config);
SpaceConfig space_config(const RunConfig& config);
PathSpec loop_path(const RunConfig& config);
RamseyConfig ramsey_config(const RunConfig& config);

// Solid angles for the dressed-phase sweep: gamma_list, or the loop's own.
std::vector<double> transport_gammas(const RunConfig& config);

// Resolved configuration as "key = value" lines, in a fixed order.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

// Comment header echoing the version, the subcommand and the resolved config.
void write_header(std::ostream& out, const RunConfig& config, const std::string& subcommand);

} // namespace cqed
