#pragma once

// Time-dependent Schrodinger evolution under H(theta(t), phi(t)).
//
// Each step of length dt applies exp(-i H(t + dt/2) dt), the exact propagator of
// the Hamiltonian frozen at the step midpoint. The exponential is taken per
// excitation sector by Hermitian eigendecomposition, so every step is unitary
// to rounding. Trajectories keep raw amplitudes; no gauge is fixed here.

#include <iosfwd>
#include <optional>
#include <vector>

#include "cqed/model.hpp"
#include "cqed/poincare.hpp"

namespace cqed {

inline constexpr int default_steps_per_schedule = 20000;
inline constexpr double convergence_threshold = 1e-8;

struct TrajectorySample {
    double t;
    StateVector state;
};

struct StepStats {
    double dt = 0.0; // step actually used (duration / steps)
    std::size_t steps = 0;
    double max_norm_drift = 0.0; // largest single-step norm change, removed after each step
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    Schedule schedule;
    ModelParams params;
    StepStats stats;
    double energy_integral = 0.0; // int <psi|H(t)|psi> dt over the run

    const StateVector& initial_state() const { return samples.front().state; }
    const StateVector& final_state() const { return samples.back().state; }
};

// Exact sector-wise propagator; caches the last step's blocks so frozen
// stretches of a schedule cost one eigendecomposition.
class Propagator {
public:
    Propagator(const SpaceConfig& space, const ModelParams& params);

    const BlockHamiltonian& hamiltonian() const { return blocks_; }

    // psi <- exp(-i H(pol, drive_phase) dt) psi. Returns <psi|H|psi> for the step.
    double step(Vector& psi, const Polarization& pol, double drive_phase, double dt);

private:
    struct CachedStep {
        double theta, phi, drive_phase, dt;
        std::vector<DenseMatrix> unitaries;
        std::vector<DenseMatrix> hamiltonians;
    };

    BlockHamiltonian blocks_;
    std::optional<CachedStep> cache_;
};

double default_dt(const Schedule& schedule);

// Evolves over the whole schedule, or over [t_begin, t_end] when given. The step
// count is ceil(window / dt) so the last sample lands exactly on t_end.
// sample_stride = k records every k-th step; 0 keeps only the endpoints.
Trajectory evolve(const StateVector& initial, const Schedule& schedule, const ModelParams& params,
                  double dt, int sample_stride = 0);
Trajectory evolve(const StateVector& initial, const Schedule& schedule, const ModelParams& params,
                  double dt, int sample_stride, double t_begin, double t_end);

struct ConvergenceReport {
    double dt = 0.0;
    double max_discrepancy = 0.0; // max_i |psi_dt(T)_i - psi_{dt/2}(T)_i|
    bool passed = false;
};

ConvergenceReport convergence_check(const StateVector& initial, const Schedule& schedule,
                                    const ModelParams& params, double dt,
                                    double threshold = convergence_threshold);

// t, Re/Im of each selected amplitude, then P(level 1), P(level 2), <n+>, <n->.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const std::vector<BasisLabel>& selected);

} // namespace cqed
