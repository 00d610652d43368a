#include "cqed/dynamics.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>

#include "cqed/csv.hpp"

namespace cqed {

Propagator::Propagator(const SpaceConfig& space, const ModelParams& params)
    : blocks_(space, params)
{
}

double Propagator::step(Vector& psi, const Polarization& pol, double drive_phase, double dt)
{
    const bool hit = cache_ && cache_->theta == pol.theta() && cache_->phi == pol.phi()
                  && cache_->drive_phase == drive_phase && cache_->dt == dt;
    if (!hit) {
        CachedStep fresh{pol.theta(), pol.phi(), drive_phase, dt, {}, {}};
        for (std::size_t k = 0; k < blocks_.sector_count(); ++k) {
            DenseMatrix h = blocks_.block(k, pol, drive_phase);
            Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(h);
            const Vector phases = (eig.eigenvalues().cast<Complex>() * Complex(0.0, -dt)).array().exp();
            fresh.unitaries.push_back(eig.eigenvectors() * phases.asDiagonal()
                                      * eig.eigenvectors().adjoint());
            fresh.hamiltonians.push_back(std::move(h));
        }
        cache_ = std::move(fresh);
    }

    double energy = 0.0;
    for (std::size_t k = 0; k < blocks_.sector_count(); ++k) {
        const auto& indices = blocks_.sector(k);
        Vector local(static_cast<Eigen::Index>(indices.size()));
        for (std::size_t r = 0; r < indices.size(); ++r) {
            local(static_cast<Eigen::Index>(r)) = psi(static_cast<Eigen::Index>(indices[r]));
        }
        if (local.squaredNorm() == 0.0) {
            continue;
        }
        energy += local.dot(cache_->hamiltonians[k] * local).real();
        local = cache_->unitaries[k] * local;
        for (std::size_t r = 0; r < indices.size(); ++r) {
            psi(static_cast<Eigen::Index>(indices[r])) = local(static_cast<Eigen::Index>(r));
        }
    }
    return energy;
}

double default_dt(const Schedule& schedule)
{
    return schedule.duration() / default_steps_per_schedule;
}

Trajectory evolve(const StateVector& initial, const Schedule& schedule, const ModelParams& params,
                  double dt, int sample_stride)
{
    return evolve(initial, schedule, params, dt, sample_stride, 0.0, schedule.duration());
}

Trajectory evolve(const StateVector& initial, const Schedule& schedule, const ModelParams& params,
                  double dt, int sample_stride, double t_begin, double t_end)
{
    if (!(dt > 0.0)) {
        throw RangeError("time step must be positive");
    }
    if (sample_stride < 0) {
        throw RangeError("sample stride must be non-negative");
    }
    if (!(t_begin >= 0.0 && t_end >= t_begin && t_end <= schedule.duration() * (1.0 + 1e-15))) {
        throw RangeError("evolution window outside the schedule");
    }

    Trajectory traj{{{t_begin, initial}}, schedule, params, {}, 0.0};
    const double window = t_end - t_begin;
    if (window == 0.0) {
        return traj;
    }
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(window / dt - 1e-9)));
    const double h = window / static_cast<double>(steps);
    traj.stats.dt = h;
    traj.stats.steps = steps;

    Propagator propagator(initial.space(), params);
    Vector psi = initial.amplitudes();
    const double norm0 = psi.norm();
    for (std::size_t k = 0; k < steps; ++k) {
        const double t_mid = t_begin + (static_cast<double>(k) + 0.5) * h;
        const Polarization pol = schedule.at(t_mid);
        const double energy = propagator.step(psi, pol, drive_phase(pol, schedule.gauge()), h);
        traj.energy_integral += energy * h;

        const double norm = psi.norm();
        if (!std::isfinite(norm)) {
            throw IntegrationError("non-finite amplitudes after step " + std::to_string(k + 1) + " of "
                                   + std::to_string(steps) + " (t = " + std::to_string(t_mid + 0.5 * h)
                                   + " ms, dt = " + std::to_string(h) + " ms)");
        }
        // per-step rounding drift is recorded, then removed
        traj.stats.max_norm_drift = std::max(traj.stats.max_norm_drift, std::abs(norm - norm0));
        if (norm > 0.0) {
            psi *= norm0 / norm;
        }

        const bool last = k + 1 == steps;
        if (last || (sample_stride > 0 && (k + 1) % static_cast<std::size_t>(sample_stride) == 0)) {
            const double t = last ? t_end : t_begin + static_cast<double>(k + 1) * h;
            traj.samples.push_back({t, StateVector(initial.space(), psi,
                                                   initial.unnormalized() ? Normalization::unnormalized
                                                                          : Normalization::checked)});
        }
    }
    return traj;
}

ConvergenceReport convergence_check(const StateVector& initial, const Schedule& schedule,
                                    const ModelParams& params, double dt, double threshold)
{
    const auto coarse = evolve(initial, schedule, params, dt);
    const auto fine = evolve(initial, schedule, params, 0.5 * dt);
    const Vector diff = coarse.final_state().amplitudes() - fine.final_state().amplitudes();
    ConvergenceReport report;
    report.dt = dt;
    report.max_discrepancy = diff.size() == 0 ? 0.0 : diff.cwiseAbs().maxCoeff();
    report.passed = report.max_discrepancy < threshold;
    return report;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const std::vector<BasisLabel>& selected)
{
    std::vector<std::string> header{"t_ms"};
    for (const auto& l : selected) {
        const std::string tag = std::to_string(static_cast<int>(l.level)) + "_" + std::to_string(l.n)
                              + "_" + std::to_string(l.m);
        header.push_back("re_" + tag);
        header.push_back("im_" + tag);
    }
    for (const char* col : {"p_level1", "p_level2", "mean_n_plus", "mean_n_minus"}) {
        header.emplace_back(col);
    }
    write_row(out, header);

    for (const auto& sample : trajectory.samples) {
        const auto& space = sample.state.space();
        const auto& psi = sample.state.amplitudes();
        std::vector<std::string> row{format_number(sample.t)};
        for (const auto& l : selected) {
            const Complex a = sample.state.amplitude(l);
            row.push_back(format_number(a.real()));
            row.push_back(format_number(a.imag()));
        }
        double p1 = 0.0, p2 = 0.0, n_plus = 0.0, n_minus = 0.0;
        for (std::size_t i = 0; i < space.dimension(); ++i) {
            const auto l = space.label(i);
            const double p = std::norm(psi(static_cast<Eigen::Index>(i)));
            (l.level == Level::one ? p1 : p2) += p;
            n_plus += p * l.n;
            n_minus += p * l.m;
        }
        for (double v : {p1, p2, n_plus, n_minus}) {
            row.push_back(format_number(v));
        }
        write_row(out, row);
    }
}

} // namespace cqed
