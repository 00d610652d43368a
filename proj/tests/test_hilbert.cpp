#include <doctest.h>

#include <random>

#include "cqed/hilbert.hpp"
#include "oracles.hpp"

using namespace cqed;

TEST_CASE("make_space dimensions")
{
    CHECK(make_space(0, 0).dimension() == 2);
    CHECK(make_space(1, 0).dimension() == 4);

    std::size_t counted = 0;
    for (int s = 1; s <= 2; ++s)
        for (int n = 0; n <= 12; ++n)
            for (int m = 0; m <= 12; ++m)
                ++counted;
    CHECK(counted == 338);
    CHECK(make_space(12, 12).dimension() == counted);

    CHECK_THROWS_AS(make_space(-1, 0), RangeError);
}

TEST_CASE("index and label are inverse")
{
    for (auto [np, nm] : {std::pair{0, 0}, {3, 2}, {2, 5}}) {
        const auto space = make_space(np, nm);
        std::vector<bool> seen(space.dimension(), false);
        for (int s = 1; s <= 2; ++s) {
            for (int n = 0; n <= np; ++n) {
                for (int m = 0; m <= nm; ++m) {
                    const BasisLabel l{static_cast<Level>(s), n, m};
                    const auto i = space.index(l);
                    REQUIRE(i < space.dimension());
                    CHECK_FALSE(seen[i]);
                    seen[i] = true;
                    CHECK(space.label(i) == l);
                }
            }
        }
    }
    // atom-major, then n, then m
    const auto space = make_space(2, 3);
    CHECK(space.index({Level::one, 0, 1}) == 1);
    CHECK(space.index({Level::one, 1, 0}) == 4);
    CHECK(space.index({Level::two, 0, 0}) == 12);
}

TEST_CASE("fock_state")
{
    const auto space = make_space(3, 2);
    const auto ground = fock_state(space, Level::one, 0, 0);
    CHECK(ground.norm() == doctest::Approx(1.0));
    CHECK(ground.amplitude({Level::one, 0, 0}) == Complex(1.0));

    const auto upper = fock_state(space, Level::two, 0, 0);
    CHECK(std::abs(inner_product(ground, upper)) == 0.0);

    CHECK_THROWS_AS(fock_state(space, Level::two, space.nmax_plus() + 1, 0), RangeError);
    CHECK_THROWS_AS(fock_state(space, Level::one, 0, -1), RangeError);
}

TEST_CASE("coherent_state truncation against Poisson partial sums")
{
    const auto space = make_space(12, 0);
    const auto vac = coherent_state(space, 0.0, Mode::plus, 1e-12);
    CHECK((vac.amplitudes() - fock_state(space, Level::one, 0, 0).amplitudes()).norm() == 0.0);

    const double expected_tail = 1.0 - oracle::poisson_mass(4.0, 12);
    CHECK(coherent_tail(2.0, 12) == doctest::Approx(expected_tail).epsilon(1e-9));
    CHECK(expected_tail < 1e-3);
    const auto psi = coherent_state(space, 2.0, Mode::plus, 1e-3);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);

    // Renormalized mean photon number: partial Poisson mean over retained mass.
    const double mean = expectation(number_operator(space, Mode::plus), psi).real();
    const double expected_mean = oracle::poisson_partial_mean(4.0, 12) / oracle::poisson_mass(4.0, 12);
    CHECK(mean == doctest::Approx(expected_mean).epsilon(1e-12));
    CHECK(mean < 4.0);

    CHECK(1.0 - oracle::poisson_mass(4.0, 3) > 1e-6);
    CHECK_THROWS_AS(coherent_state(make_space(3, 0), 2.0, Mode::plus, 1e-6), TruncationError);
    CHECK_THROWS_AS(coherent_state(space, 2.0, Mode::plus, 0.0), RangeError);

    // Phase of alpha enters as e^{i n arg alpha}
    const auto rotated = coherent_state(space, std::polar(1.5, 0.7), Mode::plus, 1e-6);
    const Complex a3 = rotated.amplitude({Level::one, 3, 0});
    CHECK(std::arg(a3) == doctest::Approx(std::remainder(3 * 0.7, 2 * oracle::pi)));

    const auto minus = coherent_state(make_space(0, 12), 1.0, Mode::minus, 1e-6);
    CHECK(expectation(number_operator(make_space(0, 12), Mode::minus), minus).real()
          == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("ladder operators match matrix elements")
{
    const auto space = make_space(4, 3);
    const auto a_plus = annihilation(space, Mode::plus);
    const auto a_minus = annihilation(space, Mode::minus);

    const auto r1 = a_plus.apply(fock_state(space, Level::one, 1, 0));
    CHECK(r1.unnormalized());
    CHECK((r1.amplitudes() - fock_state(space, Level::one, 0, 0).amplitudes()).norm() < 1e-15);

    const auto r3 = a_plus.apply(fock_state(space, Level::one, 3, 0));
    CHECK((r3.amplitudes() - std::sqrt(3.0) * fock_state(space, Level::one, 2, 0).amplitudes()).norm()
          < 1e-15);

    for (int s = 1; s <= 2; ++s) {
        for (int n = 0; n <= 4; ++n) {
            const auto r = a_minus.apply(fock_state(space, static_cast<Level>(s), n, 0));
            CHECK(r.norm() == 0.0);
        }
    }
}

TEST_CASE("operators agree with dense Kronecker constructions")
{
    for (auto [np, nm] : {std::pair{1, 1}, {2, 1}, {1, 2}, {0, 2}}) {
        const auto space = make_space(np, nm);
        REQUIRE(space.dimension() <= 12);
        const oracle::DenseModel dense(np, nm);
        CHECK((annihilation(space, Mode::plus).dense() - dense.a_plus).norm() == 0.0);
        CHECK((annihilation(space, Mode::minus).dense() - dense.a_minus).norm() == 0.0);
        CHECK((atomic_projector(space, Level::one).dense() - dense.s11).norm() == 0.0);
        CHECK((atomic_projector(space, Level::two).dense() - dense.s22).norm() == 0.0);
        CHECK((atomic_raise(space).dense() - dense.s21).norm() == 0.0);
    }
}

TEST_CASE("canonical commutator away from the top Fock level")
{
    const auto space = make_space(5, 4);
    const auto a = annihilation(space, Mode::plus);
    const auto comm = commutator(a, a.adjoint());
    std::mt19937 rng(7);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 50; ++trial) {
        Vector amps = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
        for (std::size_t i = 0; i < space.dimension(); ++i) {
            if (space.label(i).n < space.nmax_plus()) {
                amps(static_cast<Eigen::Index>(i)) = Complex(normal(rng), normal(rng));
            }
        }
        const StateVector psi(space, amps / amps.norm());
        const Complex value = expectation(comm, psi);
        CHECK(std::abs(value - 1.0) < 1e-12);
    }
}

TEST_CASE("inner products and expectations")
{
    const auto space = make_space(3, 3);
    std::mt19937 rng(11);
    std::normal_distribution<double> normal;
    auto random_state = [&] {
        Vector v(static_cast<Eigen::Index>(space.dimension()));
        for (auto& x : v) {
            x = Complex(normal(rng), normal(rng));
        }
        return StateVector(space, v / v.norm());
    };
    const auto n_plus = number_operator(space, Mode::plus);
    const auto s22 = atomic_projector(space, Level::two);
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = random_state();
        const auto v = random_state();
        CHECK(std::abs(inner_product(u, u) - 1.0) < 1e-12);
        // conjugate-linear in the first argument
        const Complex c(0.3, -1.1);
        const StateVector cu(space, c * u.amplitudes(), Normalization::unnormalized);
        CHECK(std::abs(inner_product(cu, v) - std::conj(c) * inner_product(u, v)) < 1e-12);
        CHECK(std::abs(expectation(n_plus, u).imag()) < 1e-12);
        CHECK(std::abs(expectation(s22, u).imag()) < 1e-12);
    }
    CHECK_THROWS_AS(inner_product(random_state(), fock_state(make_space(1, 1), Level::one, 0, 0)),
                    DimensionError);
}

TEST_CASE("state and operator construction guards")
{
    const auto space = make_space(1, 1);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
    v(0) = 2.0;
    CHECK_THROWS_AS(StateVector(space, v), ValidationError);
    CHECK_NOTHROW(StateVector(space, v, Normalization::unnormalized));
    CHECK_THROWS_AS(StateVector(space, Vector::Zero(3)), DimensionError);

    // a is not Hermitian; asserting it must fail
    CHECK_THROWS_AS(OperatorMatrix(space, annihilation(space, Mode::plus).entries(), true),
                    ValidationError);
}
