#include "reur/bessel.hpp"

#include "reur/error.hpp"

#include <cmath>
#include <numbers>

namespace reur {

namespace {

constexpr double kSeriesLimit = 15.0;

// sum_k (x/2)^{2k+n} / (k! (k+n)!), all terms positive
double power_series(int n, double x) {
    const double half = 0.5 * x;
    double term = n == 0 ? 1.0 : half;
    double sum = term;
    const double q = half * half;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k + n));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

// e^{-x} I_n(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(n) / x^k, truncated at the smallest term
double asymptotic_scaled(int n, double x) {
    const double mu = 4.0 * n * n;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = -term * (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

void require_nonnegative(double x) {
    if (!(x >= 0.0) || std::isnan(x)) throw InvalidArgument("Bessel argument must be non-negative");
}

} // namespace

double bessel_i0_scaled(double x) {
    require_nonnegative(x);
    if (x <= kSeriesLimit) return std::exp(-x) * power_series(0, x);
    return asymptotic_scaled(0, x);
}

double bessel_i1_scaled(double x) {
    require_nonnegative(x);
    if (x <= kSeriesLimit) return std::exp(-x) * power_series(1, x);
    return asymptotic_scaled(1, x);
}

double log_bessel_i0(double x) {
    require_nonnegative(x);
    if (x <= kSeriesLimit) return std::log(power_series(0, x));
    return x + std::log(asymptotic_scaled(0, x));
}

double bessel_ratio(double x) {
    require_nonnegative(x);
    if (x == 0.0) return 0.0;
    if (x <= kSeriesLimit) return power_series(1, x) / power_series(0, x);
    return asymptotic_scaled(1, x) / asymptotic_scaled(0, x);
}

double bessel_ratio_derivative(double x) {
    if (x == 0.0) return 0.5;
    const double a = bessel_ratio(x);
    return 1.0 - a / x - a * a;
}

} // namespace reur
