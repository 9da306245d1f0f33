#include "reur/error.hpp"
#include "reur/quantum_core.hpp"

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <numbers>

using namespace reur;
using cd = std::complex<double>;

namespace {

ComplexVector ket(int d, int i) {
    ComplexVector v = ComplexVector::Zero(d);
    v(i) = 1.0;
    return v;
}

// Tr rho (log rho - log sigma) through the Schur-Pade matrix logarithm.
double relative_entropy_oracle(const ComplexMatrix &rho, const ComplexMatrix &sigma) {
    const ComplexMatrix lr = rho.log();
    const ComplexMatrix ls = sigma.log();
    return (rho * (lr - ls)).trace().real();
}

double max_abs(const ComplexMatrix &m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("von Neumann entropy of simple spectra") {
    CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(4)) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(std::abs(von_neumann_entropy(DensityMatrix::pure(ket(3, 0)))) <= 1e-14);

    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 0.75;
    m(1, 1) = 0.25;
    const double hand = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
    CHECK(von_neumann_entropy(DensityMatrix(m)) == doctest::Approx(hand).epsilon(1e-14));
    CHECK(hand == doctest::Approx(0.5623).epsilon(1e-4));
}

TEST_CASE("density matrix validation") {
    ComplexMatrix m = ComplexMatrix::Identity(2, 2) * 0.5;
    m(0, 1) = 0.1;  // not Hermitian
    CHECK_THROWS_AS(DensityMatrix{m}, InvalidState);

    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = 1.1;
    neg(1, 1) = -0.1;
    CHECK_THROWS_AS(DensityMatrix{neg}, InvalidState);

    CHECK_THROWS_AS(DensityMatrix{ComplexMatrix::Identity(2, 2)}, InvalidState);
}

TEST_CASE("quantum relative entropy spot values") {
    const auto zero = DensityMatrix::pure(ket(2, 0));
    const auto one = DensityMatrix::pure(ket(2, 1));
    const auto mixed = DensityMatrix::maximally_mixed(2);
    CHECK(quantum_relative_entropy(zero, mixed) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(std::isinf(quantum_relative_entropy(zero, one)));
    CHECK(quantum_relative_entropy(mixed, mixed) == doctest::Approx(0.0));
    CHECK_THROWS_AS(quantum_relative_entropy(mixed, DensityMatrix::maximally_mixed(3)), DimensionMismatch);
}

TEST_CASE("quantum relative entropy against the matrix-logarithm oracle") {
    for (std::uint64_t s = 0; s < 40; ++s) {
        const int d = 2 + static_cast<int>(s % 5);
        const auto rho = random_density_matrix(d, d, 100 + s);
        const auto sigma = random_density_matrix(d, d, 900 + s);
        const double got = quantum_relative_entropy(rho, sigma);
        CHECK(got >= 0.0);
        CHECK(got == doctest::Approx(relative_entropy_oracle(rho.matrix(), sigma.matrix())).epsilon(1e-9));
        CHECK(std::abs(quantum_relative_entropy(rho, rho)) <= 1e-10);
    }
}

TEST_CASE("entropy from the divergence to the maximally mixed state") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const int d = 2 + static_cast<int>(s % 7);
        const auto rho = random_density_matrix(d, 1 + static_cast<int>(s % d), s);
        const double via = -quantum_relative_entropy(rho, DensityMatrix::maximally_mixed(d)) + std::log(d);
        CHECK(von_neumann_entropy(rho) == doctest::Approx(via).epsilon(1e-10));
        CHECK(von_neumann_entropy(rho) >= -1e-12);
        CHECK(von_neumann_entropy(rho) <= std::log(d) + 1e-12);
    }
}

TEST_CASE("projective measurement") {
    const auto zero = DensityMatrix::pure(ket(2, 0));
    auto p = measure_projective(zero, OrthonormalBasis::computational(2));
    CHECK(p.prob(0) == doctest::Approx(1.0));
    CHECK(p.prob(1) == doctest::Approx(0.0));

    p = measure_projective(zero, OrthonormalBasis::fourier(2));
    CHECK(p.prob(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.prob(1) == doctest::Approx(0.5).epsilon(1e-15));

    const auto basis = OrthonormalBasis::random(5, 3);
    p = measure_projective(DensityMatrix::maximally_mixed(5), basis);
    for (double x : p.probs()) CHECK(x == doctest::Approx(0.2).epsilon(1e-12));

    CHECK_THROWS_AS(measure_projective(zero, OrthonormalBasis::computational(3)), DimensionMismatch);
}

TEST_CASE("POVM measurement") {
    const auto mixed = DensityMatrix::maximally_mixed(2);
    auto p = measure_povm(mixed, Povm::from_basis(OrthonormalBasis::computational(2)));
    CHECK(p.prob(0) == doctest::Approx(0.5));

    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto rho = random_density_matrix(4, 2, s);
        const auto b = OrthonormalBasis::random(4, 1000 + s);
        const auto a = measure_projective(rho, b);
        const auto c = measure_povm(rho, Povm::from_basis(b));
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.prob(i) - c.prob(i)) <= 1e-12);
    }

    // trine: (2/3)|psi_j><psi_j| with psi_j = cos(t)|0> + sin(t)|1>, t = 0, 60, 120 degrees
    std::vector<ComplexMatrix> trine;
    for (int j = 0; j < 3; ++j) {
        const double t = j * std::numbers::pi / 3.0;
        ComplexVector v(2);
        v << std::cos(t), std::sin(t);
        trine.push_back((2.0 / 3.0) * v * v.adjoint());
    }
    p = measure_povm(DensityMatrix::pure(ket(2, 0)), Povm(trine, {0, 1, 2}));
    CHECK(p.prob(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(p.prob(1) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(p.prob(2) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

    trine[0] *= 1.01;
    CHECK_THROWS_AS(Povm(trine, {0, 1, 2}), InvalidArgument);
}

TEST_CASE("measured state erases coherences") {
    ComplexVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const auto m = measured_state(DensityMatrix::pure(plus), OrthonormalBasis::computational(2));
    CHECK(max_abs(m.matrix() - 0.5 * ComplexMatrix::Identity(2, 2)) <= 1e-15);

    ComplexMatrix diag = ComplexMatrix::Zero(3, 3);
    diag(0, 0) = 0.2;
    diag(1, 1) = 0.3;
    diag(2, 2) = 0.5;
    CHECK(max_abs(measured_state(DensityMatrix(diag), OrthonormalBasis::computational(3)).matrix() - diag) <= 1e-15);
}

TEST_CASE("measurement never lowers entropy") {
    int n = 0;
    for (int d = 2; d <= 8; ++d) {
        for (std::uint64_t s = 0; s < 150; ++s, ++n) {
            const auto rho = random_density_matrix(d, 1 + static_cast<int>(s % d), 7000 + n);
            const auto b = OrthonormalBasis::random(d, 9000 + n);
            const auto rx = measured_state(rho, b);
            const auto p = measure_projective(rho, b);
            double shannon = 0.0;
            for (double x : p.probs()) shannon -= x > 0 ? x * std::log(x) : 0.0;
            CHECK(von_neumann_entropy(rx) == doctest::Approx(shannon).epsilon(1e-10));
            CHECK(von_neumann_entropy(rho) <= von_neumann_entropy(rx) + 1e-10);
        }
    }
    CHECK(n >= 1000);
}

TEST_CASE("maximum overlap of bases") {
    const auto comp = OrthonormalBasis::computational(2);
    CHECK(max_overlap(comp, comp) == doctest::Approx(1.0));
    CHECK(max_overlap(comp, OrthonormalBasis::fourier(2)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(max_overlap(OrthonormalBasis::computational(5), OrthonormalBasis::fourier(5)) ==
          doctest::Approx(0.2).epsilon(1e-14));
    for (std::uint64_t s = 0; s < 30; ++s) {
        const int d = 2 + static_cast<int>(s % 6);
        const double c = max_overlap(OrthonormalBasis::random(d, s), OrthonormalBasis::random(d, s + 50));
        CHECK(c >= 1.0 / d - 1e-12);
        CHECK(c <= 1.0 + 1e-12);
    }
}

TEST_CASE("maximum overlap of POVMs") {
    const auto pc = Povm::from_basis(OrthonormalBasis::computational(2));
    const auto ph = Povm::from_basis(OrthonormalBasis::fourier(2));
    CHECK(max_overlap(pc, ph) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(max_overlap(pc, pc) == doctest::Approx(1.0).epsilon(1e-12));

    const ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
    const Povm trivial({half, half}, {0, 1});
    CHECK(max_overlap(trivial, ph) == doctest::Approx(0.5).epsilon(1e-12));

    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto a = OrthonormalBasis::random(4, s);
        const auto b = OrthonormalBasis::random(4, s + 77);
        CHECK(std::abs(max_overlap(Povm::from_basis(a), Povm::from_basis(b)) - max_overlap(a, b)) <= 1e-10);
    }
}

TEST_CASE("thermal states") {
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 0) = 0.3;
    h(1, 1) = -1.0;
    h(2, 2) = 2.0;
    h(0, 1) = h(1, 0) = 0.4;
    CHECK(max_abs(thermal_state(h, 0.0).matrix() - ComplexMatrix::Identity(3, 3) / 3.0) <= 1e-15);

    ComplexMatrix h2 = ComplexMatrix::Zero(2, 2);
    h2(1, 1) = 1.0;
    const auto t = thermal_state(h2, 1.0);
    const double z = 1.0 + std::exp(-1.0);
    CHECK(t.matrix()(0, 0).real() == doctest::Approx(1.0 / z).epsilon(1e-14));
    CHECK(t.matrix()(1, 1).real() == doctest::Approx(std::exp(-1.0) / z).epsilon(1e-14));
    CHECK(1.0 / z == doctest::Approx(0.7311).epsilon(1e-4));

    CHECK(von_neumann_entropy(thermal_state(h2, 60.0)) <= 1e-20 + 61.0 * std::exp(-60.0));

    // oracle: the matrix exponential
    const ComplexMatrix e = (-0.7 * h).exp();
    CHECK(max_abs(thermal_state(h, 0.7).matrix() - e / e.trace()) <= 1e-13);

    ComplexMatrix bad = h;
    bad(0, 2) = 1.0;
    CHECK_THROWS_AS(thermal_state(bad, 1.0), InvalidArgument);
}

TEST_CASE("random density matrices") {
    const auto a = random_density_matrix(4, 2, 42);
    const auto b = random_density_matrix(4, 2, 42);
    CHECK(max_abs(a.matrix() - b.matrix()) == 0.0);
    CHECK(von_neumann_entropy(random_density_matrix(5, 1, 3)) <= 1e-10);
    CHECK_THROWS_AS(random_density_matrix(3, 4, 1), InvalidArgument);
    CHECK_THROWS_AS(random_density_matrix(3, 0, 1), InvalidArgument);

    ComplexMatrix mean = ComplexMatrix::Zero(2, 2);
    const int n = 10000;
    for (int s = 0; s < n; ++s) mean += random_density_matrix(2, 2, static_cast<std::uint64_t>(s)).matrix();
    mean /= n;
    CHECK(max_abs(mean - 0.5 * ComplexMatrix::Identity(2, 2)) <= 0.05);
}

TEST_CASE("basis validation") {
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    CHECK_THROWS_AS(OrthonormalBasis(m, {1.0, 1.0}), InvalidArgument);
    m(0, 1) = 0.1;
    CHECK_THROWS_AS(OrthonormalBasis(m, {0.0, 1.0}), InvalidArgument);
    const auto r = OrthonormalBasis::random(6, 11);
    const ComplexMatrix gram = r.vectors().adjoint() * r.vectors();
    CHECK(max_abs(gram - ComplexMatrix::Identity(6, 6)) <= 1e-12);
}
