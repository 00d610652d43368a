#include "cqed/hilbert.hpp"

#include <cmath>
#include <string>

namespace cqed {

namespace {

constexpr double norm_tolerance = 1e-10;

void require_same_space(const SpaceConfig& a, const SpaceConfig& b, const char* where)
{
    if (!(a == b)) {
        throw DimensionError(std::string(where) + ": operands live in different spaces ("
                             + std::to_string(a.dimension()) + " vs "
                             + std::to_string(b.dimension()) + ")");
    }
}

template <typename Entry>
OperatorMatrix from_triplets(const SpaceConfig& space, const std::vector<Entry>& triplets,
                             bool hermitian)
{
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    SparseMatrix m(dim, dim);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return OperatorMatrix(space, std::move(m), hermitian);
}

} // namespace

SpaceConfig::SpaceConfig(int nmax_plus, int nmax_minus)
    : nmax_plus_(nmax_plus), nmax_minus_(nmax_minus)
{
    if (nmax_plus < 0 || nmax_minus < 0) {
        throw RangeError("photon cutoffs must be non-negative (got nmax_plus="
                         + std::to_string(nmax_plus) + ", nmax_minus="
                         + std::to_string(nmax_minus) + ")");
    }
}

std::size_t SpaceConfig::dimension() const
{
    return static_cast<std::size_t>(atom_dim) * static_cast<std::size_t>(nmax_plus_ + 1)
         * static_cast<std::size_t>(nmax_minus_ + 1);
}

bool SpaceConfig::contains(const BasisLabel& label) const
{
    const int s = static_cast<int>(label.level);
    return (s == 1 || s == 2) && label.n >= 0 && label.n <= nmax_plus_ && label.m >= 0
        && label.m <= nmax_minus_;
}

std::size_t SpaceConfig::index(const BasisLabel& label) const
{
    if (!contains(label)) {
        throw RangeError("basis label (" + std::to_string(static_cast<int>(label.level)) + ", "
                         + std::to_string(label.n) + ", " + std::to_string(label.m)
                         + ") outside truncated space with nmax=("
                         + std::to_string(nmax_plus_) + ", " + std::to_string(nmax_minus_) + ")");
    }
    const auto per_level = static_cast<std::size_t>((nmax_plus_ + 1) * (nmax_minus_ + 1));
    return static_cast<std::size_t>(static_cast<int>(label.level) - 1) * per_level
         + static_cast<std::size_t>(label.n * (nmax_minus_ + 1) + label.m);
}

BasisLabel SpaceConfig::label(std::size_t index) const
{
    if (index >= dimension()) {
        throw RangeError("flat index " + std::to_string(index) + " outside dimension "
                         + std::to_string(dimension()));
    }
    const auto per_level = static_cast<std::size_t>((nmax_plus_ + 1) * (nmax_minus_ + 1));
    const auto s = static_cast<int>(index / per_level) + 1;
    const auto rest = static_cast<int>(index % per_level);
    return {static_cast<Level>(s), rest / (nmax_minus_ + 1), rest % (nmax_minus_ + 1)};
}

SpaceConfig make_space(int nmax_plus, int nmax_minus)
{
    return SpaceConfig(nmax_plus, nmax_minus);
}

// ---------------------------------------------------------------------------

StateVector::StateVector(SpaceConfig space, Vector amplitudes, Normalization normalization)
    : space_(space), amplitudes_(std::move(amplitudes)),
      unnormalized_(normalization == Normalization::unnormalized)
{
    if (static_cast<std::size_t>(amplitudes_.size()) != space_.dimension()) {
        throw DimensionError("state has " + std::to_string(amplitudes_.size())
                             + " amplitudes but the space has dimension "
                             + std::to_string(space_.dimension()));
    }
    if (!unnormalized_ && std::abs(amplitudes_.norm() - 1.0) >= norm_tolerance) {
        throw ValidationError("state norm " + std::to_string(amplitudes_.norm())
                              + " differs from 1; construct with Normalization::unnormalized");
    }
}

Complex StateVector::amplitude(const BasisLabel& label) const
{
    return amplitudes_(static_cast<Eigen::Index>(space_.index(label)));
}

StateVector StateVector::normalized() const
{
    const double n = amplitudes_.norm();
    if (n == 0.0) {
        throw ValidationError("cannot normalize the zero vector");
    }
    return StateVector(space_, amplitudes_ / n);
}

StateVector StateVector::with_global_phase(double phase) const
{
    return StateVector(space_, amplitudes_ * std::polar(1.0, phase),
                       unnormalized_ ? Normalization::unnormalized : Normalization::checked);
}

// ---------------------------------------------------------------------------

OperatorMatrix::OperatorMatrix(SpaceConfig space, SparseMatrix entries, bool hermitian)
    : space_(space), entries_(std::move(entries)), hermitian_(hermitian)
{
    const auto dim = static_cast<Eigen::Index>(space_.dimension());
    if (entries_.rows() != dim || entries_.cols() != dim) {
        throw DimensionError("operator is " + std::to_string(entries_.rows()) + "x"
                             + std::to_string(entries_.cols()) + " but the space has dimension "
                             + std::to_string(dim));
    }
    if (hermitian_) {
        const double defect = hermiticity_defect(entries_);
        if (defect >= hermitian_tolerance) {
            throw ValidationError("operator flagged Hermitian has max|A - A^dagger| = "
                                  + std::to_string(defect));
        }
    }
}

OperatorMatrix OperatorMatrix::adjoint() const
{
    return OperatorMatrix(space_, SparseMatrix(entries_.adjoint()), hermitian_);
}

StateVector OperatorMatrix::apply(const StateVector& state) const
{
    require_same_space(space_, state.space(), "apply");
    return StateVector(space_, entries_ * state.amplitudes(), Normalization::unnormalized);
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs)
{
    require_same_space(lhs.space(), rhs.space(), "operator product");
    SparseMatrix product = (lhs.entries() * rhs.entries()).pruned();
    return OperatorMatrix(lhs.space(), std::move(product));
}

OperatorMatrix operator+(const OperatorMatrix& lhs, const OperatorMatrix& rhs)
{
    require_same_space(lhs.space(), rhs.space(), "operator sum");
    return OperatorMatrix(lhs.space(), SparseMatrix(lhs.entries() + rhs.entries()),
                          lhs.hermitian() && rhs.hermitian());
}

OperatorMatrix operator-(const OperatorMatrix& lhs, const OperatorMatrix& rhs)
{
    require_same_space(lhs.space(), rhs.space(), "operator difference");
    return OperatorMatrix(lhs.space(), SparseMatrix(lhs.entries() - rhs.entries()),
                          lhs.hermitian() && rhs.hermitian());
}

OperatorMatrix commutator(const OperatorMatrix& lhs, const OperatorMatrix& rhs)
{
    return lhs * rhs - rhs * lhs;
}

double max_abs_entry(const SparseMatrix& matrix)
{
    double worst = 0.0;
    for (Eigen::Index k = 0; k < matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    return worst;
}

double hermiticity_defect(const SparseMatrix& matrix)
{
    const SparseMatrix diff = matrix - SparseMatrix(matrix.adjoint());
    return max_abs_entry(diff);
}

// ---------------------------------------------------------------------------

StateVector fock_state(const SpaceConfig& space, Level level, int n, int m)
{
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
    amps(static_cast<Eigen::Index>(space.index({level, n, m}))) = 1.0;
    return StateVector(space, std::move(amps));
}

StateVector product_state(const SpaceConfig& space, const Eigen::Vector2cd& atom,
                          const Vector& plus_mode, const Vector& minus_mode)
{
    if (plus_mode.size() != space.nmax_plus() + 1 || minus_mode.size() != space.nmax_minus() + 1) {
        throw DimensionError("mode factor sizes (" + std::to_string(plus_mode.size()) + ", "
                             + std::to_string(minus_mode.size())
                             + ") do not match the space cutoffs");
    }
    Vector amps(static_cast<Eigen::Index>(space.dimension()));
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const auto l = space.label(i);
        amps(static_cast<Eigen::Index>(i)) = atom(static_cast<int>(l.level) - 1)
                                           * plus_mode(l.n) * minus_mode(l.m);
    }
    return StateVector(space, std::move(amps), Normalization::unnormalized).normalized();
}

double coherent_tail(Complex alpha, int nmax)
{
    const double mean = std::norm(alpha);
    if (mean == 0.0) {
        return 0.0;
    }
    double kept = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        kept += std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
    }
    return std::max(0.0, 1.0 - kept);
}

Vector coherent_amplitudes(Complex alpha, int nmax, double tail_tol)
{
    if (!(tail_tol > 0.0)) {
        throw RangeError("tail_tol must be positive");
    }
    if (nmax < 0) {
        throw RangeError("nmax must be non-negative");
    }
    const double tail = coherent_tail(alpha, nmax);
    if (tail >= tail_tol) {
        throw TruncationError("coherent state alpha=(" + std::to_string(alpha.real()) + ", "
                              + std::to_string(alpha.imag()) + ") loses probability "
                              + std::to_string(tail) + " above nmax=" + std::to_string(nmax)
                              + " (tail_tol " + std::to_string(tail_tol)
                              + "); increase nmax");
    }
    Vector amps(nmax + 1);
    const double abs_alpha = std::abs(alpha);
    const double arg_alpha = std::arg(alpha);
    for (int n = 0; n <= nmax; ++n) {
        // e^{-|a|^2/2} |a|^n / sqrt(n!) in log space, phase e^{i n arg a}
        const double log_mag = abs_alpha == 0.0
                                 ? (n == 0 ? 0.0 : -INFINITY)
                                 : -0.5 * abs_alpha * abs_alpha + n * std::log(abs_alpha)
                                       - 0.5 * std::lgamma(n + 1.0);
        amps(n) = std::polar(std::exp(log_mag), n * arg_alpha);
    }
    return amps / amps.norm();
}

StateVector coherent_state(const SpaceConfig& space, Complex alpha, Mode mode, double tail_tol)
{
    const Vector field = coherent_amplitudes(alpha, space.nmax(mode), tail_tol);
    const Mode other = mode == Mode::plus ? Mode::minus : Mode::plus;
    Vector vacuum = Vector::Zero(space.nmax(other) + 1);
    vacuum(0) = 1.0;
    const Eigen::Vector2cd ground(1.0, 0.0);
    return mode == Mode::plus ? product_state(space, ground, field, vacuum)
                              : product_state(space, ground, vacuum, field);
}

// ---------------------------------------------------------------------------

OperatorMatrix annihilation(const SpaceConfig& space, Mode mode)
{
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const auto l = space.label(i);
        const int photons = mode == Mode::plus ? l.n : l.m;
        if (photons == 0) {
            continue;
        }
        BasisLabel lowered = l;
        (mode == Mode::plus ? lowered.n : lowered.m) -= 1;
        triplets.emplace_back(static_cast<int>(space.index(lowered)), static_cast<int>(i),
                              std::sqrt(static_cast<double>(photons)));
    }
    return from_triplets(space, triplets, false);
}

OperatorMatrix number_operator(const SpaceConfig& space, Mode mode)
{
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const auto l = space.label(i);
        const int photons = mode == Mode::plus ? l.n : l.m;
        if (photons != 0) {
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), photons);
        }
    }
    return from_triplets(space, triplets, true);
}

OperatorMatrix atomic_projector(const SpaceConfig& space, Level level)
{
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        if (space.label(i).level == level) {
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
        }
    }
    return from_triplets(space, triplets, true);
}

OperatorMatrix atomic_raise(const SpaceConfig& space)
{
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const auto l = space.label(i);
        if (l.level == Level::one) {
            const auto j = space.index({Level::two, l.n, l.m});
            triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), 1.0);
        }
    }
    return from_triplets(space, triplets, false);
}

OperatorMatrix identity(const SpaceConfig& space)
{
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
    }
    return from_triplets(space, triplets, true);
}

Complex inner_product(const StateVector& u, const StateVector& v)
{
    require_same_space(u.space(), v.space(), "inner_product");
    return u.amplitudes().dot(v.amplitudes()); // Eigen's dot conjugates the left operand
}

Complex expectation(const OperatorMatrix& op, const StateVector& state)
{
    require_same_space(op.space(), state.space(), "expectation");
    return state.amplitudes().dot(op.entries() * state.amplitudes());
}

} // namespace cqed
