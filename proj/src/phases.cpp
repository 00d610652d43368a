#include "cqed/phases.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

namespace cqed {

namespace {

constexpr double pi = std::numbers::pi;

Eigen::SelfAdjointEigenSolver<DenseMatrix> diagonalize(const BlockHamiltonian& h, std::size_t k,
                                                       const Polarization& pol, double chi)
{
    return Eigen::SelfAdjointEigenSolver<DenseMatrix>(h.block(k, pol, chi));
}

// Largest component real and positive.
Vector fix_phase(Vector v)
{
    Eigen::Index arg_max = 0;
    v.cwiseAbs().maxCoeff(&arg_max);
    return v * std::polar(1.0, -std::arg(v(arg_max)));
}

} // namespace

double wrap_phase(double phase)
{
    double w = std::remainder(phase, 2.0 * pi); // [-pi, pi]
    if (w <= -pi) {
        w += 2.0 * pi;
    }
    return w;
}

std::vector<double> unwrap_phases(const std::vector<double>& phases)
{
    std::vector<double> out(phases);
    for (std::size_t i = 1; i < out.size(); ++i) {
        out[i] = out[i - 1] + wrap_phase(phases[i] - phases[i - 1]);
    }
    return out;
}

PhaseReading make_reading(double total_phase, double dynamical_phase, double cyclicity,
                          PhaseScheme scheme)
{
    return {total_phase, dynamical_phase, wrap_phase(total_phase - dynamical_phase), cyclicity, scheme};
}

OverlapPhase pancharatnam_phase(const StateVector& initial, const StateVector& final,
                                double cyclicity_floor)
{
    const Complex overlap = inner_product(initial, final);
    OverlapPhase out;
    out.cyclicity = std::abs(overlap);
    out.phase = out.cyclicity == 0.0 ? 0.0 : std::arg(overlap);
    out.non_cyclic = out.cyclicity < cyclicity_floor;
    return out;
}

OverlapPhase dynamical_phase_reference(const StateVector& initial, const Schedule& schedule,
                                       const ModelParams& params, double dt, double cyclicity_floor)
{
    const auto frozen = frozen_schedule(schedule.at(0.0), schedule.duration(), schedule.gauge());
    if (frozen.duration() == 0.0) {
        return pancharatnam_phase(initial, initial, cyclicity_floor);
    }
    const auto run = evolve(initial, frozen, params, dt);
    return pancharatnam_phase(initial, run.final_state(), cyclicity_floor);
}

double analytic_dressed_phase(int n, int m, double gamma, Branch branch)
{
    if (n < 0 || m < 0) {
        throw RangeError("photon numbers must be non-negative");
    }
    const double magnitude = 0.5 * gamma * (n - m + 0.5);
    return branch == Branch::upper ? magnitude : -magnitude;
}

double doublet_phase(int n, int m, double gamma)
{
    return -0.5 * gamma * (n - m + 0.5);
}

double ideal_component_phase(const BasisLabel& label, double gamma)
{
    if (label.level == Level::two) {
        return doublet_phase(label.n, label.m, gamma);
    }
    if (label.n >= 1) {
        return doublet_phase(label.n - 1, label.m, gamma); // partner of |2, n-1, m>
    }
    return 0.5 * gamma * label.m; // |1,0,m> couples to nothing
}

StateVector ideal_phase_map(const StateVector& state, double gamma)
{
    const auto& space = state.space();
    Vector amps = state.amplitudes();
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        amps(static_cast<Eigen::Index>(i)) *= std::polar(1.0, ideal_component_phase(space.label(i), gamma));
    }
    return StateVector(space, std::move(amps),
                       state.unnormalized() ? Normalization::unnormalized : Normalization::checked);
}

std::array<EigenSelector, 2> doublet_selectors(const BlockHamiltonian& hamiltonian,
                                               const Polarization& pol, double drive_phase, int n,
                                               int m)
{
    const auto& space = hamiltonian.space();
    const auto target = space.index({Level::two, n, m});
    const auto k = static_cast<std::size_t>(n + m + 1);
    const auto& indices = hamiltonian.sector(k);
    const auto row = static_cast<Eigen::Index>(
        std::find(indices.begin(), indices.end(), target) - indices.begin());
    const auto eig = diagonalize(hamiltonian, k, pol, drive_phase);
    if (eig.eigenvalues().size() < 2) {
        throw RangeError("sector " + std::to_string(k) + " is too small to hold a doublet");
    }

    std::vector<std::size_t> ranks(static_cast<std::size_t>(eig.eigenvalues().size()));
    for (std::size_t r = 0; r < ranks.size(); ++r) {
        ranks[r] = r;
    }
    std::stable_sort(ranks.begin(), ranks.end(), [&](std::size_t a, std::size_t b) {
        return std::norm(eig.eigenvectors()(row, static_cast<Eigen::Index>(a)))
             > std::norm(eig.eigenvectors()(row, static_cast<Eigen::Index>(b)));
    });
    const std::size_t hi = std::max(ranks[0], ranks[1]);
    const std::size_t lo = std::min(ranks[0], ranks[1]);
    return {EigenSelector{k, hi}, EigenSelector{k, lo}};
}

TransportResult adiabatic_eigenstate_transport(const SpaceConfig& space, const ModelParams& params,
                                               const Schedule& schedule,
                                               const EigenSelector& selector, double dt,
                                               int tracking_samples)
{
    if (tracking_samples < 1) {
        throw RangeError("tracking needs at least one sample interval");
    }
    const BlockHamiltonian hamiltonian(space, params);
    if (selector.excitation >= hamiltonian.sector_count()) {
        throw RangeError("excitation sector " + std::to_string(selector.excitation)
                         + " not present in the truncated space");
    }
    const std::size_t k = selector.excitation;
    if (static_cast<std::size_t>(std::min(space.nmax_plus(), space.nmax_minus())) < k) {
        throw RangeError("excitation sector " + std::to_string(k)
                         + " is truncated; transport needs nmax_plus and nmax_minus >= "
                         + std::to_string(k));
    }
    const auto& indices = hamiltonian.sector(k);
    if (selector.rank >= indices.size()) {
        throw RangeError("eigenvalue rank " + std::to_string(selector.rank) + " outside sector "
                         + std::to_string(k));
    }

    TransportResult result;
    result.selector = selector;
    result.sweep_rate = schedule.max_rate();
    result.min_gap = std::numeric_limits<double>::infinity();

    const double duration = schedule.duration();
    Vector tracked;
    Vector first;
    for (int j = 0; j <= tracking_samples; ++j) {
        const double t = duration * j / tracking_samples;
        const Polarization pol = schedule.at(t);
        const auto eig = diagonalize(hamiltonian, k, pol, drive_phase(pol, schedule.gauge()));
        Eigen::Index pick = static_cast<Eigen::Index>(selector.rank);
        if (j == 0) {
            first = fix_phase(eig.eigenvectors().col(pick));
            tracked = first;
            result.energy = eig.eigenvalues()(pick);
        } else {
            (eig.eigenvectors().adjoint() * tracked).cwiseAbs().maxCoeff(&pick);
            Vector next = eig.eigenvectors().col(pick);
            const Complex overlap = tracked.dot(next);
            tracked = next * std::polar(1.0, -std::arg(overlap)); // parallel-transport gauge
        }
        for (Eigen::Index r = 0; r < eig.eigenvalues().size(); ++r) {
            if (r == pick) {
                continue;
            }
            const double gap = std::abs(eig.eigenvalues()(r) - eig.eigenvalues()(pick));
            if (gap < result.min_gap) {
                result.min_gap = gap;
                result.min_gap_time = t;
            }
        }
        if (duration == 0.0) {
            break;
        }
    }
    result.discrete_berry_phase = std::arg(first.dot(tracked));

    if (result.min_gap < gap_to_rate_floor * result.sweep_rate) {
        throw DegeneracyError("tracked level (sector " + std::to_string(k) + ", rank "
                                  + std::to_string(selector.rank) + ") comes within "
                                  + std::to_string(result.min_gap) + " rad/ms of a neighbour at t = "
                                  + std::to_string(result.min_gap_time) + " ms; sweep rate "
                                  + std::to_string(result.sweep_rate) + " rad/ms",
                              result.min_gap_time, result.min_gap);
    }

    Vector full = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
    for (std::size_t r = 0; r < indices.size(); ++r) {
        full(static_cast<Eigen::Index>(indices[r])) = first(static_cast<Eigen::Index>(r));
    }
    const StateVector initial(space, full / full.norm());
    const auto run = evolve(initial, schedule, params, dt);
    const auto total = pancharatnam_phase(initial, run.final_state());
    const auto reference = dynamical_phase_reference(initial, schedule, params, dt);

    result.reference_arm = make_reading(total.phase, reference.phase, total.cyclicity,
                                        PhaseScheme::reference_arm);
    result.energy_integral = make_reading(total.phase, -run.energy_integral, total.cyclicity,
                                          PhaseScheme::energy_integral);
    return result;
}

} // namespace cqed
