#include "reur/entropy.hpp"

#include "reur/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace reur {

namespace {

constexpr double kNormTolDiscrete = 1e-10;
constexpr double kNormTolDensity = 1e-6;
constexpr double kClampTol = 1e-12;

bool close_labels(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

} // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> outcomes, std::vector<double> probs)
    : outcomes_(std::move(outcomes)), probs_(std::move(probs)) {
    if (probs_.empty()) throw InvalidArgument("distribution has no outcomes");
    if (outcomes_.size() != probs_.size())
        throw DimensionMismatch("outcome and probability vectors differ in length");
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (!std::isfinite(probs_[i]) || probs_[i] < 0.0)
            throw InvalidArgument("probability " + std::to_string(i) + " is negative or not finite");
        if (!std::isfinite(outcomes_[i])) throw InvalidArgument("outcome label is not finite");
        if (i > 0 && !(outcomes_[i] > outcomes_[i - 1]))
            throw InvalidArgument("outcomes must be distinct and ascending");
    }
    const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
    if (std::abs(total - 1.0) > kNormTolDiscrete)
        throw InvalidArgument("probabilities sum to " + std::to_string(total));
}

DiscreteDistribution DiscreteDistribution::from_weights(std::vector<double> outcomes, std::vector<double> weights) {
    if (outcomes.size() != weights.size())
        throw DimensionMismatch("outcome and weight vectors differ in length");
    if (weights.empty()) throw InvalidArgument("distribution has no outcomes");
    std::vector<std::size_t> order(outcomes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return outcomes[a] < outcomes[b]; });

    std::vector<double> xs, ws;
    xs.reserve(order.size());
    ws.reserve(order.size());
    double total = 0.0;
    for (auto i : order) {
        double w = weights[i];
        if (!std::isfinite(w)) throw InvalidArgument("weight is not finite");
        if (w < 0.0) {
            if (w < -kClampTol) throw InvalidArgument("negative weight " + std::to_string(w));
            w = 0.0;
        }
        xs.push_back(outcomes[i]);
        ws.push_back(w);
        total += w;
    }
    if (!(total > 0.0)) throw InvalidArgument("weights sum to zero");
    for (auto &w : ws) w /= total;
    return DiscreteDistribution(std::move(xs), std::move(ws));
}

DiscreteDistribution DiscreteDistribution::uniform(std::vector<double> outcomes) {
    std::vector<double> w(outcomes.size(), 1.0);
    return from_weights(std::move(outcomes), std::move(w));
}

double DiscreteDistribution::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) m += probs_[i] * outcomes_[i];
    return m;
}

bool DiscreteDistribution::same_outcomes(const DiscreteDistribution &other) const {
    if (other.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
        if (!close_labels(outcomes_[i], other.outcomes_[i])) return false;
    return true;
}

GriddedDensity::GriddedDensity(double start, double spacing, std::vector<double> values, Topology topology)
    : start_(start), spacing_(spacing), values_(std::move(values)), topology_(topology) {
    if (!std::isfinite(start_)) throw InvalidArgument("grid start is not finite");
    if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) throw InvalidArgument("grid spacing must be positive");
    const std::size_t min_points = topology_ == Topology::line ? 2 : 1;
    if (values_.size() < min_points) throw InvalidArgument("grid has too few points");
    for (double v : values_)
        if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("density values must be finite and non-negative");
    const double total = integral();
    if (std::abs(total - 1.0) > kNormTolDensity)
        throw InvalidArgument("density integrates to " + std::to_string(total) +
                              " (grid too short or density unnormalized)");
}

GriddedDensity GriddedDensity::on_circle(std::vector<double> values, double start) {
    const double spacing = 2.0 * std::numbers::pi / static_cast<double>(values.size());
    return GriddedDensity(start, spacing, std::move(values), Topology::circle);
}

double GriddedDensity::weight(std::size_t i) const {
    if (topology_ == Topology::line && (i == 0 || i + 1 == values_.size())) return 0.5 * spacing_;
    return spacing_;
}

double GriddedDensity::integral() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) s += weight(i) * values_[i];
    return s;
}

double GriddedDensity::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) s += weight(i) * values_[i] * x(i);
    return s / integral();
}

double GriddedDensity::variance() const {
    const double mu = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double dx = x(i) - mu;
        s += weight(i) * values_[i] * dx * dx;
    }
    return s / integral();
}

bool GriddedDensity::same_grid(const GriddedDensity &other) const {
    return topology_ == other.topology_ && values_.size() == other.values_.size() &&
           std::abs(spacing_ - other.spacing_) <= 1e-12 * spacing_ &&
           std::abs(start_ - other.start_) <= 1e-12 * std::max(1.0, std::abs(start_));
}

double shannon_entropy(const DiscreteDistribution &p) {
    double s = 0.0;
    for (double pi : p.probs()) s -= xlogx(pi);
    return s;
}

double relative_entropy(const DiscreteDistribution &p, const DiscreteDistribution &q) {
    if (!p.same_outcomes(q)) throw DimensionMismatch("relative entropy of distributions over different outcomes");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pi = p.prob(i), qi = q.prob(i);
        if (pi <= 0.0) continue;
        if (qi <= 0.0) return kInfinity;
        s += pi * std::log(pi / qi);
    }
    return s;
}

double cross_entropy(const DiscreteDistribution &p, const DiscreteDistribution &q) {
    if (!p.same_outcomes(q)) throw DimensionMismatch("cross entropy of distributions over different outcomes");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pi = p.prob(i), qi = q.prob(i);
        if (pi <= 0.0) continue;
        if (qi <= 0.0) return kInfinity;
        s -= pi * std::log(qi);
    }
    return s;
}

double differential_entropy(const GriddedDensity &f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double v = f.value(i);
        if (v < kZeroDensity) continue;
        s -= f.weight(i) * v * std::log(v);
    }
    return s;
}

double relative_entropy(const GriddedDensity &f, const GriddedDensity &g) {
    if (!f.same_grid(g)) throw DimensionMismatch("relative entropy of densities on different grids");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double fv = f.value(i), gv = g.value(i);
        if (fv < kZeroDensity) continue;
        if (gv < kZeroDensity) return kInfinity;
        s += f.weight(i) * fv * std::log(fv / gv);
    }
    return s;
}

double relative_entropy_log(const GriddedDensity &f, std::span<const double> log_g) {
    if (log_g.size() != f.size()) throw DimensionMismatch("log-density length differs from grid size");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double fv = f.value(i);
        if (fv < kZeroDensity) continue;
        if (std::isinf(log_g[i]) && log_g[i] < 0.0) return kInfinity;
        s += f.weight(i) * fv * (std::log(fv) - log_g[i]);
    }
    return s;
}

double cross_entropy(const GriddedDensity &f, const GriddedDensity &g) {
    if (!f.same_grid(g)) throw DimensionMismatch("cross entropy of densities on different grids");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double fv = f.value(i), gv = g.value(i);
        if (fv < kZeroDensity) continue;
        if (gv < kZeroDensity) return kInfinity;
        s -= f.weight(i) * fv * std::log(gv);
    }
    return s;
}

DiscreteDistribution bin_density(const GriddedDensity &f, double bin_width) {
    if (!(bin_width > 0.0)) throw InvalidArgument("bin width must be positive");
    const double ratio = bin_width / f.spacing();
    const auto k = static_cast<std::size_t>(std::llround(ratio));
    if (k == 0 || std::abs(ratio - static_cast<double>(k)) > 1e-9 * ratio)
        throw InvalidArgument("bin width is not an integer multiple of the grid spacing");

    const std::size_t n = f.size();
    std::vector<double> centres, mass;
    if (f.topology() == Topology::line) {
        if ((n - 1) % k != 0) throw InvalidArgument("bin width does not tile the grid");
        const std::size_t bins = (n - 1) / k;
        for (std::size_t b = 0; b < bins; ++b) {
            double m = 0.0;
            for (std::size_t i = b * k; i < (b + 1) * k; ++i)
                m += 0.5 * f.spacing() * (f.value(i) + f.value(i + 1));
            centres.push_back(f.start() + (static_cast<double>(b) + 0.5) * bin_width);
            mass.push_back(m);
        }
    } else {
        if (n % k != 0) throw InvalidArgument("bin width does not tile the circle");
        for (std::size_t b = 0; b < n / k; ++b) {
            double m = 0.0;
            for (std::size_t i = b * k; i < (b + 1) * k; ++i) m += f.spacing() * f.value(i);
            centres.push_back(f.x(b * k) + 0.5 * static_cast<double>(k - 1) * f.spacing());
            mass.push_back(m);
        }
    }
    return DiscreteDistribution::from_weights(std::move(centres), std::move(mass));
}

std::vector<ContinuumLimitRow> continuum_limit_check(const GriddedDensity &f, std::span<const double> widths) {
    std::vector<ContinuumLimitRow> rows;
    rows.reserve(widths.size());
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (i > 0 && !(widths[i] < widths[i - 1])) throw InvalidArgument("bin widths must be decreasing");
        const double s = shannon_entropy(bin_density(f, widths[i]));
        rows.push_back({widths[i], s, s + std::log(widths[i])});
    }
    return rows;
}

GriddedDensity rescale_density(const GriddedDensity &f, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw InvalidArgument("rescale factor must be positive");
    std::vector<double> v(f.values().begin(), f.values().end());
    for (auto &x : v) x /= factor;
    return GriddedDensity(f.start() * factor, f.spacing() * factor, std::move(v), f.topology());
}

} // namespace reur
