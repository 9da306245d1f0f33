#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace reur {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Density values below this are exact zeros for support tests.
inline constexpr double kZeroDensity = 1e-300;

/// Probability vector over distinct real outcomes, stored in ascending
/// outcome order. Construction validates; use from_weights() for raw input.
class DiscreteDistribution {
public:
    DiscreteDistribution(std::vector<double> outcomes, std::vector<double> probs);

    /// Sorts by outcome, clamps entries in [-1e-12, 0) to zero and normalizes.
    /// Works for counts as well as slightly-off probability vectors.
    static DiscreteDistribution from_weights(std::vector<double> outcomes, std::vector<double> weights);
    static DiscreteDistribution uniform(std::vector<double> outcomes);

    std::span<const double> outcomes() const noexcept { return outcomes_; }
    std::span<const double> probs() const noexcept { return probs_; }
    std::size_t size() const noexcept { return probs_.size(); }
    double prob(std::size_t i) const { return probs_.at(i); }
    double outcome(std::size_t i) const { return outcomes_.at(i); }

    double mean() const;
    bool same_outcomes(const DiscreteDistribution &other) const;

private:
    std::vector<double> outcomes_;
    std::vector<double> probs_;
};

enum class Topology { line, circle };

struct GridSpec {
    double start;
    double spacing;
    std::size_t size;
    Topology topology;

    double x(std::size_t i) const { return start + static_cast<double>(i) * spacing; }
};

/// Density sampled on a uniform grid x_i = start + i * spacing.
///
/// On the line the grid includes both end points and integrals use the
/// composite trapezoid rule. On the circle the grid covers exactly one
/// period (period = size * spacing, 2*pi for angles) and integrals use the
/// rectangle rule, which is spectrally accurate for smooth periodic data.
class GriddedDensity {
public:
    GriddedDensity(double start, double spacing, std::vector<double> values, Topology topology);

    /// Uniform circular grid on [start, start + 2*pi) with n points.
    static GriddedDensity on_circle(std::vector<double> values, double start = 0.0);

    double start() const noexcept { return start_; }
    double spacing() const noexcept { return spacing_; }
    std::size_t size() const noexcept { return values_.size(); }
    Topology topology() const noexcept { return topology_; }
    std::span<const double> values() const noexcept { return values_; }
    double value(std::size_t i) const { return values_.at(i); }
    double x(std::size_t i) const { return start_ + static_cast<double>(i) * spacing_; }
    double period() const noexcept { return static_cast<double>(values_.size()) * spacing_; }
    GridSpec grid() const noexcept { return {start_, spacing_, values_.size(), topology_}; }

    /// Quadrature weight of grid point i.
    double weight(std::size_t i) const;
    double integral() const;
    double mean() const;
    double variance() const;

    bool same_grid(const GriddedDensity &other) const;

private:
    double start_;
    double spacing_;
    std::vector<double> values_;
    Topology topology_;
};

double shannon_entropy(const DiscreteDistribution &p);

/// Kullback-Leibler divergence sum p ln(p/q). Returns +inf on support
/// violation; throws DimensionMismatch for different outcome sets.
double relative_entropy(const DiscreteDistribution &p, const DiscreteDistribution &q);

/// -sum p ln q, +inf when q vanishes where p does not.
double cross_entropy(const DiscreteDistribution &p, const DiscreteDistribution &q);

double differential_entropy(const GriddedDensity &f);
double relative_entropy(const GriddedDensity &f, const GriddedDensity &g);
double cross_entropy(const GriddedDensity &f, const GriddedDensity &g);
/// Relative entropy against a reference given by its log-density on the
/// grid of f. Avoids underflow of far tails; -inf entries mark zeros.
double relative_entropy_log(const GriddedDensity &f, std::span<const double> log_g);

/// Integrates f over consecutive bins of width bin_width (an integer
/// multiple of the grid spacing). Outcomes are bin centres.
DiscreteDistribution bin_density(const GriddedDensity &f, double bin_width);

struct ContinuumLimitRow {
    double bin_width;
    double shannon;            // S(p) of the binned distribution
    double corrected_entropy;  // S(p) + ln(bin_width)
};

/// Binned Shannon entropy plus ln(bin width) for each requested width,
/// which approaches the differential entropy as the width shrinks.
std::vector<ContinuumLimitRow> continuum_limit_check(const GriddedDensity &f, std::span<const double> widths);

/// Change of variable x -> factor * x with the Jacobian-correct density.
GriddedDensity rescale_density(const GriddedDensity &f, double factor);

} // namespace reur
