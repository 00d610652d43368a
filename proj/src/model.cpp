#include "cqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cqed {

bool ModelParams::dispersive_warning() const
{
    return delta < 5.0 * std::max(g, omega_drive);
}

ModelParams make_params(double g, double omega_drive, double delta)
{
    if (!std::isfinite(g) || !std::isfinite(omega_drive) || !std::isfinite(delta)) {
        throw ValidationError("model parameters must be finite");
    }
    if (g < 0.0 || omega_drive < 0.0) {
        throw ValidationError("couplings g and Omega must be non-negative");
    }
    if (!(delta > 0.0)) {
        throw ValidationError("detuning delta must be positive (got " + std::to_string(delta) + ")");
    }
    return ModelParams{g, omega_drive, delta};
}

ModelParams params_from_khz(double g_khz, double omega_khz, double delta_ratio)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double omega = two_pi * omega_khz; // kHz -> rad/ms
    return make_params(two_pi * g_khz, omega, delta_ratio * omega);
}

ModelParams default_params()
{
    return params_from_khz(50.0, 50.0, 3.0);
}

Polarization::Polarization(double theta, double phi)
    : theta_(std::clamp(theta, 0.0, std::numbers::pi)), phi_(phi)
{
}

double drive_phase(const Polarization& pol, DriveGauge gauge)
{
    return gauge == DriveGauge::plus_locked ? -0.5 * pol.phi() : 0.0;
}

std::pair<Complex, Complex> coupling_weights(const Polarization& pol, double drive_phase)
{
    const double half = 0.5 * pol.theta();
    return {std::polar(std::cos(half), drive_phase + 0.5 * pol.phi()),
            std::polar(std::sin(half), drive_phase - 0.5 * pol.phi())};
}

HamiltonianTerms hamiltonian_terms(const SpaceConfig& space, const ModelParams& params)
{
    const auto s11 = atomic_projector(space, Level::one);
    const auto s22 = atomic_projector(space, Level::two);
    const auto s21 = atomic_raise(space);
    const auto n_photons = number_operator(space, Mode::plus) + number_operator(space, Mode::minus);

    SparseMatrix diagonal = params.stark_upper() * s22.entries()
                          + params.stark_lower() * SparseMatrix(n_photons.entries() * s11.entries());
    SparseMatrix lower_plus = annihilation(space, Mode::plus).entries() * s21.entries();
    SparseMatrix lower_minus = annihilation(space, Mode::minus).entries() * s21.entries();
    diagonal.prune(Complex(0.0));
    lower_plus.prune(Complex(0.0));
    lower_minus.prune(Complex(0.0));
    return {space, params, std::move(diagonal), std::move(lower_plus), std::move(lower_minus)};
}

SparseMatrix assemble(const HamiltonianTerms& terms, const Polarization& pol, double drive_phase)
{
    const auto [c_plus, c_minus] = coupling_weights(pol, drive_phase);
    const double lambda = terms.params.lambda();
    const SparseMatrix coupling = (lambda * c_plus) * terms.lower_plus
                                + (lambda * c_minus) * terms.lower_minus;
    SparseMatrix h = terms.diagonal + coupling + SparseMatrix(coupling.adjoint());
    h.makeCompressed();
    return h;
}

OperatorMatrix build_hamiltonian(const SpaceConfig& space, const ModelParams& params,
                                 const Polarization& pol, double drive_phase)
{
    return OperatorMatrix(space, assemble(hamiltonian_terms(space, params), pol, drive_phase), true);
}

int excitation_number(const BasisLabel& label)
{
    return label.n + label.m + (label.level == Level::two ? 1 : 0);
}

OperatorMatrix excitation_operator(const SpaceConfig& space)
{
    return number_operator(space, Mode::plus) + number_operator(space, Mode::minus)
         + atomic_projector(space, Level::two);
}

std::vector<std::vector<std::size_t>> excitation_sectors(const SpaceConfig& space)
{
    std::vector<std::vector<std::size_t>> sectors;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const auto k = static_cast<std::size_t>(excitation_number(space.label(i)));
        if (sectors.size() <= k) {
            sectors.resize(k + 1);
        }
        sectors[k].push_back(i);
    }
    return sectors;
}

BlockHamiltonian::BlockHamiltonian(const SpaceConfig& space, const ModelParams& params)
    : space_(space), params_(params)
{
    const auto terms = hamiltonian_terms(space, params);
    const DenseMatrix diagonal(terms.diagonal);
    const DenseMatrix lower_plus(terms.lower_plus);
    const DenseMatrix lower_minus(terms.lower_minus);
    for (auto& indices : excitation_sectors(space)) {
        const auto d = static_cast<Eigen::Index>(indices.size());
        Sector s{std::move(indices), DenseMatrix(d, d), DenseMatrix(d, d), DenseMatrix(d, d)};
        for (Eigen::Index r = 0; r < d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c) {
                const auto i = static_cast<Eigen::Index>(s.indices[r]);
                const auto j = static_cast<Eigen::Index>(s.indices[c]);
                s.diagonal(r, c) = diagonal(i, j);
                s.lower_plus(r, c) = lower_plus(i, j);
                s.lower_minus(r, c) = lower_minus(i, j);
            }
        }
        sectors_.push_back(std::move(s));
    }
}

DenseMatrix BlockHamiltonian::block(std::size_t k, const Polarization& pol, double drive_phase) const
{
    const auto& s = sectors_.at(k);
    const auto [c_plus, c_minus] = coupling_weights(pol, drive_phase);
    const double lambda = params_.lambda();
    const DenseMatrix coupling = (lambda * c_plus) * s.lower_plus + (lambda * c_minus) * s.lower_minus;
    return s.diagonal + coupling + coupling.adjoint();
}

} // namespace cqed
