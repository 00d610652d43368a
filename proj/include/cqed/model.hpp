#pragma once

// Effective atom / two-mode Hamiltonian (hbar = 1, angular frequencies in rad/ms)
//
//   H = (Omega^2/delta) s22 + (g^2/delta)(n+ + n-) s11
//     + lambda [ e^{i chi} (cos(theta/2) e^{i phi/2} a+ + sin(theta/2) e^{-i phi/2} a-) s21 + h.c. ]
//
// with lambda = g Omega / delta. chi is the global phase of the classical drive;
// chi = 0 reproduces the bare (theta, phi) parameterization. With chi = -phi/2
// ("plus-locked") H is single-valued on the sphere and regular at theta = 0, so
// a closed loop of polarizations starting at the north pole returns H to itself.

#include <utility>
#include <vector>

#include "cqed/hilbert.hpp"

namespace cqed {

struct ModelParams {
    double g = 0.0;           // one-photon vacuum Rabi angular frequency
    double omega_drive = 0.0; // classical-drive coupling
    double delta = 1.0;       // detuning

    double lambda() const { return g * omega_drive / delta; }
    double stark_upper() const { return omega_drive * omega_drive / delta; } // Omega^2/delta
    double stark_lower() const { return g * g / delta; }                     // g^2/delta

    // delta < 5 max(g, Omega): the adiabatic elimination behind H is marginal.
    bool dispersive_warning() const;
};

// Validating constructor. Frequencies in rad/ms.
ModelParams make_params(double g, double omega_drive, double delta);

// From lab units: g/2pi and Omega/2pi in kHz, delta = delta_ratio * Omega.
ModelParams params_from_khz(double g_khz, double omega_khz, double delta_ratio);

// g/2pi = Omega/2pi = 50 kHz, delta = 3 Omega.
ModelParams default_params();

class Polarization {
public:
    Polarization() = default;
    Polarization(double theta, double phi);

    double theta() const { return theta_; }
    double phi() const { return phi_; }

private:
    double theta_ = 0.0;
    double phi_ = 0.0;
};

enum class DriveGauge { plus_locked, symmetric };

double drive_phase(const Polarization& pol, DriveGauge gauge);

// Coefficients (c+, c-) of a+ and a- in the coupling term.
std::pair<Complex, Complex> coupling_weights(const Polarization& pol, double drive_phase);

// H split as diagonal + lambda (c+ K+ + c- K- + h.c.) with K+- = a+- s21.
struct HamiltonianTerms {
    SpaceConfig space;
    ModelParams params;
    SparseMatrix diagonal;
    SparseMatrix lower_plus;  // a+ s21
    SparseMatrix lower_minus; // a- s21
};

HamiltonianTerms hamiltonian_terms(const SpaceConfig& space, const ModelParams& params);

SparseMatrix assemble(const HamiltonianTerms& terms, const Polarization& pol, double drive_phase);

OperatorMatrix build_hamiltonian(const SpaceConfig& space, const ModelParams& params,
                                 const Polarization& pol, double drive_phase = 0.0);

// n+ + n- + s22, conserved by H for every polarization and drive phase.
OperatorMatrix excitation_operator(const SpaceConfig& space);

int excitation_number(const BasisLabel& label);

// Flat indices grouped by excitation number; sector k lists indices in basis order.
std::vector<std::vector<std::size_t>> excitation_sectors(const SpaceConfig& space);

// Dense blocks of H, one per excitation sector. H never couples sectors, so the
// blocks carry the whole operator.
class BlockHamiltonian {
public:
    BlockHamiltonian(const SpaceConfig& space, const ModelParams& params);

    const SpaceConfig& space() const { return space_; }
    const ModelParams& params() const { return params_; }
    std::size_t sector_count() const { return sectors_.size(); }
    const std::vector<std::size_t>& sector(std::size_t k) const { return sectors_[k].indices; }

    DenseMatrix block(std::size_t k, const Polarization& pol, double drive_phase) const;

private:
    struct Sector {
        std::vector<std::size_t> indices;
        DenseMatrix diagonal;
        DenseMatrix lower_plus;
        DenseMatrix lower_minus;
    };

    SpaceConfig space_;
    ModelParams params_;
    std::vector<Sector> sectors_;
};

} // namespace cqed
