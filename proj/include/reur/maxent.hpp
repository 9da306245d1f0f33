#pragma once

#include "reur/entropy.hpp"

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace reur {

/// Real- or complex-valued function of a measurement outcome whose
/// expectation value is constrained.
struct MomentFunction {
    enum class Kind {
        power,      // x^order
        indicator,  // 1 if x == point else 0
        cosine,     // cos(order * x)
        sine,       // sin(order * x)
        circular,   // exp(i * order * x); complex valued
    };

    Kind kind = Kind::power;
    int order = 1;
    double point = 0.0;

    static MomentFunction power(int k) { return {Kind::power, k, 0.0}; }
    static MomentFunction indicator(double at) { return {Kind::indicator, 0, at}; }
    static MomentFunction cosine(int k = 1) { return {Kind::cosine, k, 0.0}; }
    static MomentFunction sine(int k = 1) { return {Kind::sine, k, 0.0}; }
    static MomentFunction circular(int k = 1) { return {Kind::circular, k, 0.0}; }

    bool is_complex() const noexcept { return kind == Kind::circular; }
    double operator()(double x) const;
    std::complex<double> complex_value(double x) const;
    std::string name() const;
};

struct MomentConstraint {
    MomentFunction function;
    std::complex<double> target;
};

enum class MaxEntFamily { uniform, boltzmann, general_moment, gaussian, von_mises };

std::string to_string(MaxEntFamily family);
MaxEntFamily family_from_string(const std::string &name);

struct ModelSupport {
    enum class Kind { discrete, interval, circle, real_line };

    Kind kind = Kind::discrete;
    std::vector<double> outcomes;  // discrete; empty means "any d outcomes"
    double lo = 0.0;
    double hi = 0.0;
};

/// Fitted maximum-entropy reference distribution.
///
/// Parameter layout per family:
///   uniform         discrete {d}, interval {lo, hi}, circle {period}
///   boltzmann       {gamma, Z, model mean}; p(x) = exp(-gamma x) / Z
///   general_moment  {lambda_0, lambda_1, ..., lambda_N}; p(x) = exp(sum_j lambda_j m_j(x)),
///                   m_0 = 1, m_j = moments[j-1], targets[j-1] the constrained values
///   gaussian        {mean, variance}
///   von_mises       {kappa, mu}
struct MaxEntModel {
    MaxEntFamily family = MaxEntFamily::uniform;
    std::vector<double> parameters;
    double entropy = 0.0;
    ModelSupport support;
    std::vector<MomentFunction> moments;
    std::vector<double> targets;
};

MaxEntModel fit_uniform(std::size_t support_size);
MaxEntModel fit_uniform(std::vector<double> outcomes);
MaxEntModel fit_uniform_interval(double lo, double hi);
MaxEntModel fit_uniform_circle(double period);

/// Boltzmann weights exp(-gamma x)/Z whose mean equals target_mean.
MaxEntModel fit_boltzmann(std::vector<double> outcomes, double target_mean);

/// Iteration record of the dual Newton solver.
struct SolverTrace {
    std::vector<double> dual_objective;  // after each accepted step, starting at lambda = 0
    std::vector<double> residual;        // infinity norm of the moment residual, same indexing
    int iterations = 0;
};

/// Exponential-family model exp(sum_j lambda_j m_j(x)) matching every
/// constraint, found by damped Newton on the convex dual. Circular
/// constraints are split into cosine and sine parts.
MaxEntModel fit_general_moments(std::vector<double> outcomes, const std::vector<MomentConstraint> &constraints,
                                SolverTrace *trace = nullptr);

MaxEntModel fit_gaussian(double mean, double variance);

/// Von Mises model exp(kappa cos(phi - mu)) / (2 pi I0(kappa)) with the
/// given first circular moment <exp(i phi)>.
MaxEntModel fit_von_mises(std::complex<double> first_circular_moment);

/// Model probabilities on the given outcomes, which must match the model support.
DiscreteDistribution to_distribution(const MaxEntModel &model, const std::vector<double> &outcomes);
DiscreteDistribution to_distribution(const MaxEntModel &model, const DiscreteDistribution &like);

/// Model density sampled on a grid. Gaussians must have at least 1 - 1e-9
/// of their mass inside the grid.
GriddedDensity to_density(const MaxEntModel &model, const GridSpec &grid);

/// Model log-density on the grid, computed without underflow. Same
/// preconditions as to_density.
std::vector<double> log_density_values(const MaxEntModel &model, const GridSpec &grid);

/// S(f||model) with the model evaluated through its log-density.
double relative_entropy(const GriddedDensity &f, const MaxEntModel &model);

/// Maximum-entropy fit of a continuous family to a density. Only the
/// closed-form families are available: gaussian (line) and von_mises or
/// uniform (circle).
MaxEntModel fit_to_density(MaxEntFamily family, const GriddedDensity &f);

/// Expectation of exp(i phi) over a circular density.
std::complex<double> first_circular_moment(const GriddedDensity &f);

// Named views onto the parameter vector.
double boltzmann_gamma(const MaxEntModel &model);
double gaussian_variance(const MaxEntModel &model);
double von_mises_kappa(const MaxEntModel &model);

} // namespace reur
