#include "reur/entropy.hpp"
#include "reur/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace reur;

namespace {

constexpr double kPi = std::numbers::pi;

GriddedDensity gaussian_on(double lo, double hi, double dx, double mu, double sigma) {
    const auto n = static_cast<std::size_t>(std::llround((hi - lo) / dx)) + 1;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = (lo + i * dx - mu) / sigma;
        v[i] = std::exp(-0.5 * z * z) / (sigma * std::sqrt(2 * kPi));
    }
    return GriddedDensity(lo, dx, v, Topology::line);
}

DiscreteDistribution random_distribution(std::mt19937_64 &rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> x(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = static_cast<double>(i);
        w[i] = u(rng);
    }
    return DiscreteDistribution::from_weights(x, w);
}

} // namespace

TEST_CASE("Shannon entropy") {
    CHECK(shannon_entropy(DiscreteDistribution({0, 1, 2}, {1, 0, 0})) == 0.0);
    CHECK(shannon_entropy(DiscreteDistribution::uniform({0, 1, 2, 3, 4, 5, 6, 7})) == doctest::Approx(std::log(8.0)).epsilon(1e-14));
    CHECK(shannon_entropy(DiscreteDistribution({0, 1}, {0.75, 0.25})) == doctest::Approx(0.5623351446188083).epsilon(1e-14));

    // permutation invariance: relabel outcomes in reverse
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        const auto p = random_distribution(rng, 6);
        std::vector<double> x(p.size()), w(p.probs().begin(), p.probs().end());
        for (std::size_t i = 0; i < p.size(); ++i) x[i] = -static_cast<double>(i);
        CHECK(shannon_entropy(DiscreteDistribution::from_weights(x, w)) == doctest::Approx(shannon_entropy(p)).epsilon(1e-14));
    }
}

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS(DiscreteDistribution({0, 1}, {0.6, 0.6}), InvalidArgument);
    CHECK_THROWS_AS(DiscreteDistribution({1, 0}, {0.5, 0.5}), InvalidArgument);
    CHECK_THROWS_AS(DiscreteDistribution({0, 1}, {1.1, -0.1}), InvalidArgument);
    CHECK_THROWS_AS(DiscreteDistribution({}, {}), InvalidArgument);
    const auto p = DiscreteDistribution::from_weights({2, 0, 1}, {6, 2, 2});
    CHECK(p.outcome(0) == 0.0);
    CHECK(p.prob(2) == doctest::Approx(0.6));
}

TEST_CASE("discrete relative and cross entropy") {
    const DiscreteDistribution a({0, 1}, {1, 0});
    const DiscreteDistribution half({0, 1}, {0.5, 0.5});
    CHECK(relative_entropy(half, half) == 0.0);
    CHECK(relative_entropy(a, half) == doctest::Approx(std::log(2.0)));
    CHECK(std::isinf(relative_entropy(half, a)));
    CHECK(cross_entropy(a, half) == doctest::Approx(std::log(2.0)));
    CHECK(cross_entropy(DiscreteDistribution::uniform({0, 1, 2, 3, 4}), DiscreteDistribution::uniform({0, 1, 2, 3, 4})) ==
          doctest::Approx(std::log(5.0)));
    CHECK_THROWS_AS(relative_entropy(half, DiscreteDistribution({0, 2}, {0.5, 0.5})), DimensionMismatch);
    CHECK_THROWS_AS(cross_entropy(half, DiscreteDistribution::uniform({0, 1, 2})), DimensionMismatch);

    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        const auto p = random_distribution(rng, 7);
        const auto q = random_distribution(rng, 7);
        const double kl = relative_entropy(p, q);
        CHECK(kl >= 0.0);
        CHECK(std::abs(kl - (cross_entropy(p, q) - shannon_entropy(p))) <= 1e-10);
    }
}

TEST_CASE("differential entropy") {
    const std::vector<double> flat(256, 1.0 / (2 * kPi));
    CHECK(differential_entropy(GriddedDensity::on_circle(flat)) == doctest::Approx(std::log(2 * kPi)).epsilon(1e-13));

    const auto g = gaussian_on(-8, 8, 1.0 / 512, 0, 1);
    CHECK(std::abs(differential_entropy(g) - 0.5 * std::log(2 * kPi * std::numbers::e)) <= 1e-6);

    // uniform on [0, 1/2]: value 2, trapezoid over 101 points
    const GriddedDensity u(0.0, 0.005, std::vector<double>(101, 2.0), Topology::line);
    CHECK(differential_entropy(u) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("density validation") {
    CHECK_THROWS_AS(GriddedDensity(0.0, 0.1, std::vector<double>(11, 0.5), Topology::line), InvalidArgument);
    CHECK_THROWS_AS(GriddedDensity(0.0, -0.1, std::vector<double>(11, 1.0), Topology::line), InvalidArgument);
    CHECK_THROWS_AS(GriddedDensity(0.0, 0.1, {1, 1, -1, 1, 1, 1, 1, 1, 1, 1, 1}, Topology::line), InvalidArgument);
}

TEST_CASE("continuous relative entropy") {
    const auto f = gaussian_on(-10, 11, 1.0 / 256, 0, 1);
    const auto g = gaussian_on(-10, 11, 1.0 / 256, 1, 1);
    CHECK(relative_entropy(f, f) == 0.0);
    CHECK(std::abs(relative_entropy(f, g) - 0.5) <= 1e-6);

    // closed form for unequal widths
    const auto h = gaussian_on(-10, 11, 1.0 / 256, 0.3, 1.4);
    const double s1 = 1.0, s2 = 1.4, dm = 0.3;
    const double oracle = std::log(s2 / s1) + (s1 * s1 + dm * dm) / (2 * s2 * s2) - 0.5;
    CHECK(std::abs(relative_entropy(f, h) - oracle) <= 1e-8);

    // uniform on [-1, 1] does not cover the Gaussian
    std::vector<double> v(f.size(), 0.0);
    const auto inside = [&](std::size_t i) { return std::abs(f.x(i)) <= 1.0; };
    double count = 0;
    for (std::size_t i = 0; i < f.size(); ++i) count += inside(i);
    for (std::size_t i = 0; i < f.size(); ++i)
        if (inside(i)) v[i] = 1.0 / (count * f.spacing());
    const GriddedDensity box(f.start(), f.spacing(), v, Topology::line);
    CHECK(std::isinf(relative_entropy(f, box)));
    CHECK_THROWS_AS(relative_entropy(f, gaussian_on(-10, 11, 1.0 / 128, 0, 1)), DimensionMismatch);

    // log-density variant agrees
    std::vector<double> lg(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) lg[i] = std::log(h.value(i));
    CHECK(relative_entropy_log(f, lg) == doctest::Approx(relative_entropy(f, h)).epsilon(1e-12));
}

TEST_CASE("continuous relative entropy is non-negative on random pairs") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> mu(-1, 1), sd(0.5, 1.5);
    for (int t = 0; t < 50; ++t) {
        const auto f = gaussian_on(-14, 14, 1.0 / 64, mu(rng), sd(rng));
        const auto g = gaussian_on(-14, 14, 1.0 / 64, mu(rng), sd(rng));
        CHECK(relative_entropy(f, g) >= -1e-8);
    }
}

TEST_CASE("relative entropy survives a nonlinear change of variables") {
    // y = x^3 + x on both densities; the differential entropy shifts, the divergence does not
    const auto f = gaussian_on(-4, 4, 1.0 / 1024, 0.0, 0.5);
    const auto g = gaussian_on(-4, 4, 1.0 / 1024, 0.3, 0.6);
    auto pdf = [](double x, double mu, double s) { return std::exp(-0.5 * (x - mu) * (x - mu) / (s * s)) / (s * std::sqrt(2 * kPi)); };
    auto inverse = [](double y) {
        double x = std::cbrt(y);
        for (int k = 0; k < 60; ++k) x -= (x * x * x + x - y) / (3 * x * x + 1);
        return x;
    };
    const double ylo = -68.0, dy = 1e-3;
    const std::size_t n = 136001;
    std::vector<double> fy(n), gy(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = inverse(ylo + i * dy);
        const double jac = 3 * x * x + 1;
        fy[i] = pdf(x, 0.0, 0.5) / jac;
        gy[i] = pdf(x, 0.3, 0.6) / jac;
    }
    const GriddedDensity fY(ylo, dy, fy, Topology::line), gY(ylo, dy, gy, Topology::line);
    CHECK(std::abs(relative_entropy(fY, gY) - relative_entropy(f, g)) <= 1e-4);
    CHECK(std::abs(differential_entropy(fY) - differential_entropy(f)) > 0.1);
}

TEST_CASE("scaling shifts the differential entropy by ln alpha") {
    const auto f = gaussian_on(-9, 9, 1.0 / 128, 0.2, 1.0);
    for (double alpha : {0.25, 3.0, 10.0}) {
        const auto fa = rescale_density(f, alpha);
        CHECK(std::abs(differential_entropy(fa) - differential_entropy(f) - std::log(alpha)) <= 1e-6);
        CHECK(fa.integral() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("binning") {
    // uniform on [0,1): trapezoid grid with 257 points
    const GriddedDensity u(0.0, 1.0 / 256, std::vector<double>(257, 1.0), Topology::line);
    auto p = bin_density(u, 1.0);
    CHECK(p.size() == 1);
    CHECK(p.prob(0) == doctest::Approx(1.0));
    p = bin_density(u, 0.25);
    REQUIRE(p.size() == 4);
    for (double x : p.probs()) CHECK(x == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(p.outcome(0) == doctest::Approx(0.125));
    CHECK_THROWS_AS(bin_density(u, 0.3), InvalidArgument);

    const auto g = gaussian_on(-8.5, 8.5, 1.0 / 512, 0, 1);
    p = bin_density(g, 1.0);
    const auto centre = std::find_if(p.outcomes().begin(), p.outcomes().end(), [](double x) { return std::abs(x) < 1e-9; });
    REQUIRE(centre != p.outcomes().end());
    const double oracle = std::erf(0.5 / std::sqrt(2.0));
    CHECK(p.prob(static_cast<std::size_t>(centre - p.outcomes().begin())) == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(oracle == doctest::Approx(0.3829).epsilon(1e-4));
}

TEST_CASE("continuum limit of the binned entropy") {
    const auto g = gaussian_on(-8, 8, 1.0 / 1024, 0, 1);
    const std::vector<double> widths{1.0, 0.5, 0.25, 0.125};
    const auto rows = continuum_limit_check(g, widths);
    const double exact = 0.5 * std::log(2 * kPi * std::numbers::e);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double e0 = std::abs(rows[i - 1].corrected_entropy - exact), e1 = std::abs(rows[i].corrected_entropy - exact);
        CHECK(e1 < e0);
        CHECK(e0 / e1 == doctest::Approx(4.0).epsilon(0.1));
    }
    CHECK(std::abs(rows.back().corrected_entropy - exact) <= 1e-3);

    const GriddedDensity u(0.0, 1.0 / 64, std::vector<double>(3 * 64 + 1, 1.0 / 3.0), Topology::line);
    for (const auto &r : continuum_limit_check(u, std::vector<double>{1.0, 0.5, 0.25})) CHECK(std::abs(r.corrected_entropy - std::log(3.0)) <= 1e-10);

    CHECK_THROWS_AS(continuum_limit_check(g, std::vector<double>{0.5, 1.0}), InvalidArgument);
}
