#include <doctest.h>

#include <random>

#include "cqed/model.hpp"
#include "oracles.hpp"

using namespace cqed;
using oracle::pi;

TEST_CASE("default parameters")
{
    const auto p = default_params();
    CHECK(p.g / (2 * pi) == doctest::Approx(50.0));
    CHECK(p.omega_drive / (2 * pi) == doctest::Approx(50.0));
    CHECK(p.delta == doctest::Approx(3.0 * p.omega_drive));
    CHECK(p.lambda() == doctest::Approx(p.g / 3.0).epsilon(1e-15));
    CHECK(p.lambda() / (2 * pi) == doctest::Approx(50.0 / 3.0));
    CHECK(p.dispersive_warning()); // delta = 3 Omega < 5 Omega

    CHECK_FALSE(make_params(1.0, 1.0, 10.0).dispersive_warning());
    CHECK_THROWS_AS(make_params(1.0, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(make_params(-1.0, 1.0, 3.0), ValidationError);
}

TEST_CASE("polarization clamps theta")
{
    CHECK(Polarization(-0.2, 1.0).theta() == 0.0);
    CHECK(Polarization(4.0, 1.0).theta() == pi);
    CHECK(Polarization(1.0, 7.0).phi() == 7.0);
}

TEST_CASE("vacuum doublet block is resonant for g = Omega")
{
    const auto space = make_space(2, 2);
    const auto p = make_params(3.0, 3.0, 9.0);
    const auto h = build_hamiltonian(space, p, Polarization(0.0, 0.0)).dense();
    const auto i2 = static_cast<Eigen::Index>(space.index({Level::two, 0, 0}));
    const auto i1 = static_cast<Eigen::Index>(space.index({Level::one, 1, 0}));
    CHECK(std::abs(h(i2, i2) - p.omega_drive * p.omega_drive / p.delta) < 1e-14);
    CHECK(std::abs(h(i1, i1) - p.g * p.g / p.delta) < 1e-14);
    CHECK(std::abs(h(i2, i1) - p.lambda()) < 1e-14);
    CHECK(std::abs(h(i2, i2) - h(i1, i1)) < 1e-14);

    // |1,0,0> is annihilated by every term
    const auto ground = fock_state(space, Level::one, 0, 0);
    const auto h_op = build_hamiltonian(space, p, Polarization(1.1, 2.3), 0.4);
    CHECK(h_op.apply(ground).norm() < 1e-15);
}

TEST_CASE("theta = pi/2 splits the coupling equally")
{
    const auto [cp, cm] = coupling_weights(Polarization(pi / 2, 0.0), 0.0);
    CHECK(std::abs(cp) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(cm) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("plus-locked gauge is single-valued and regular at the north pole")
{
    for (double theta : {0.0, 0.4, 1.3, 2.9}) {
        const Polarization a(theta, 0.3);
        const Polarization b(theta, 0.3 + 2 * pi);
        const auto [ap, am] = coupling_weights(a, drive_phase(a, DriveGauge::plus_locked));
        const auto [bp, bm] = coupling_weights(b, drive_phase(b, DriveGauge::plus_locked));
        CHECK(std::abs(ap - bp) < 1e-12);
        CHECK(std::abs(am - bm) < 1e-12);
    }
    for (double phi : {0.0, 1.0, 2 * pi}) {
        const Polarization pole(0.0, phi);
        const auto [cp, cm] = coupling_weights(pole, drive_phase(pole, DriveGauge::plus_locked));
        CHECK(std::abs(cp - 1.0) < 1e-15);
        CHECK(std::abs(cm) < 1e-15);
    }
    // the bare parameterization flips sign after a full turn
    const Polarization turned(0.0, 2 * pi);
    CHECK(std::abs(coupling_weights(turned, 0.0).first + 1.0) < 1e-15);
}

TEST_CASE("Hamiltonian matches dense construction and is Hermitian on a grid")
{
    const auto p = make_params(2.0, 1.5, 7.0);
    const auto space = make_space(2, 1);
    const oracle::DenseModel dense(2, 1);
    for (int i = 0; i < 32; ++i) {
        for (int j = 0; j < 32; ++j) {
            const double theta = pi * i / 31;
            const double phi = 4 * pi * j / 32 - pi;
            const auto h = build_hamiltonian(space, p, Polarization(theta, phi));
            CHECK(hermiticity_defect(h.entries()) < 1e-12);
            if (i % 8 == 0 && j % 8 == 0) {
                const auto ref = dense.hamiltonian(p.g, p.omega_drive, p.delta, theta, phi);
                CHECK((h.dense() - ref).cwiseAbs().maxCoeff() < 1e-13);
            }
        }
    }
}

TEST_CASE("excitation number is conserved")
{
    const auto space = make_space(3, 3);
    const auto n_exc = excitation_operator(space);
    CHECK(n_exc.apply(fock_state(space, Level::one, 0, 0)).norm() == 0.0);
    const auto upper = fock_state(space, Level::two, 0, 0);
    CHECK((n_exc.apply(upper).amplitudes() - upper.amplitudes()).norm() == 0.0);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> angle(0.0, 2 * pi);
    const auto p = default_params();
    for (int trial = 0; trial < 20; ++trial) {
        const Polarization pol(angle(rng) / 2, angle(rng));
        const auto h = build_hamiltonian(space, p, pol, angle(rng));
        const oracle::Matrix comm = h.dense() * n_exc.dense() - n_exc.dense() * h.dense();
        CHECK(comm.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("matrix elements between excitation sectors vanish")
{
    const auto space = make_space(3, 2);
    const auto h = build_hamiltonian(space, default_params(), Polarization(0.7, 1.9)).dense();
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        for (std::size_t j = 0; j < space.dimension(); ++j) {
            if (excitation_number(space.label(i)) != excitation_number(space.label(j))) {
                CHECK(h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == Complex(0.0));
            }
        }
    }

    // block form reproduces the full matrix
    const BlockHamiltonian blocks(space, default_params());
    oracle::Matrix rebuilt = oracle::Matrix::Zero(h.rows(), h.cols());
    for (std::size_t k = 0; k < blocks.sector_count(); ++k) {
        const auto b = blocks.block(k, Polarization(0.7, 1.9), 0.0);
        const auto& idx = blocks.sector(k);
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c)
                rebuilt(static_cast<Eigen::Index>(idx[r]), static_cast<Eigen::Index>(idx[c])) =
                    b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    CHECK((rebuilt - h).cwiseAbs().maxCoeff() < 1e-12);
}
