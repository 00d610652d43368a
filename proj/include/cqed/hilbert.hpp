#pragma once

// Truncated Hilbert space atom ⊗ mode(+) ⊗ mode(-) with states and operators.
//
// Basis ordering is atom-major, then the photon number n of mode a+, then the
// photon number m of mode a-:
//
//     index(s, n, m) = (s - 1) * (nmax_plus + 1) * (nmax_minus + 1)
//                    + n * (nmax_minus + 1) + m
//
// The ordering is part of the CSV contract and must not change.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cqed/errors.hpp"

namespace cqed {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

enum class Mode { plus, minus };

// Atomic level |1> or |2>; the integer value is the physical label.
enum class Level : int { one = 1, two = 2 };

struct BasisLabel {
    Level level;
    int n; // photons in a+
    int m; // photons in a-

    bool operator==(const BasisLabel&) const = default;
};

class SpaceConfig {
public:
    static constexpr int atom_dim = 2;

    SpaceConfig(int nmax_plus, int nmax_minus);

    int nmax_plus() const { return nmax_plus_; }
    int nmax_minus() const { return nmax_minus_; }
    int nmax(Mode mode) const { return mode == Mode::plus ? nmax_plus_ : nmax_minus_; }

    std::size_t dimension() const;
    std::size_t index(const BasisLabel& label) const;
    BasisLabel label(std::size_t index) const;
    bool contains(const BasisLabel& label) const;

    bool operator==(const SpaceConfig&) const = default;

private:
    int nmax_plus_;
    int nmax_minus_;
};

SpaceConfig make_space(int nmax_plus, int nmax_minus);

enum class Normalization { checked, unnormalized };

// Immutable state vector. Constructing with Normalization::checked asserts unit
// norm within 1e-10; intermediates such as a|psi> must say so explicitly.
class StateVector {
public:
    StateVector(SpaceConfig space, Vector amplitudes,
                Normalization normalization = Normalization::checked);

    const SpaceConfig& space() const { return space_; }
    const Vector& amplitudes() const { return amplitudes_; }
    bool unnormalized() const { return unnormalized_; }

    Complex amplitude(const BasisLabel& label) const;
    double norm() const { return amplitudes_.norm(); }

    StateVector normalized() const;
    StateVector with_global_phase(double phase) const;

private:
    SpaceConfig space_;
    Vector amplitudes_;
    bool unnormalized_;
};

class OperatorMatrix {
public:
    static constexpr double hermitian_tolerance = 1e-12;

    // Throws ValidationError if `hermitian` is asserted but does not hold.
    OperatorMatrix(SpaceConfig space, SparseMatrix entries, bool hermitian = false);

    const SpaceConfig& space() const { return space_; }
    const SparseMatrix& entries() const { return entries_; }
    bool hermitian() const { return hermitian_; }

    DenseMatrix dense() const { return DenseMatrix(entries_); }
    OperatorMatrix adjoint() const;
    StateVector apply(const StateVector& state) const;

private:
    SpaceConfig space_;
    SparseMatrix entries_;
    bool hermitian_;
};

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
OperatorMatrix operator+(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
OperatorMatrix operator-(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
OperatorMatrix commutator(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

// Largest absolute entry of A - A^dagger.
double hermiticity_defect(const SparseMatrix& matrix);
double max_abs_entry(const SparseMatrix& matrix);

StateVector fock_state(const SpaceConfig& space, Level level, int n, int m);

// Product state (atom) ⊗ (mode +) ⊗ (mode -); each factor must match the space.
StateVector product_state(const SpaceConfig& space, const Eigen::Vector2cd& atom,
                          const Vector& plus_mode, const Vector& minus_mode);

// Probability mass of a Poisson(|alpha|^2) distribution above nmax.
double coherent_tail(Complex alpha, int nmax);

// Single-mode coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!) for n <= nmax,
// renormalized. Throws TruncationError when the discarded tail >= tail_tol.
Vector coherent_amplitudes(Complex alpha, int nmax, double tail_tol);

// Coherent state on `mode`, atom in |1>, the other mode in vacuum.
StateVector coherent_state(const SpaceConfig& space, Complex alpha, Mode mode,
                           double tail_tol);

OperatorMatrix annihilation(const SpaceConfig& space, Mode mode);
OperatorMatrix number_operator(const SpaceConfig& space, Mode mode);
OperatorMatrix atomic_projector(const SpaceConfig& space, Level level);
OperatorMatrix atomic_raise(const SpaceConfig& space); // |2><1| ⊗ 1
OperatorMatrix identity(const SpaceConfig& space);

// Conjugate-linear in the first argument.
Complex inner_product(const StateVector& u, const StateVector& v);
Complex expectation(const OperatorMatrix& op, const StateVector& state);

} // namespace cqed
