#include "reur/maxent.hpp"

#include "reur/bessel.hpp"
#include "reur/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace reur {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kResidualTol = 1e-10;
constexpr int kMaxNewtonIterations = 200;

double log_sum_exp(const Eigen::VectorXd &a) {
    const double m = a.maxCoeff();
    return m + std::log((a.array() - m).exp().sum());
}

void require_outcomes(const std::vector<double> &outcomes) {
    if (outcomes.empty()) throw InvalidArgument("empty support");
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!std::isfinite(outcomes[i])) throw InvalidArgument("outcome is not finite");
        if (i > 0 && !(outcomes[i] > outcomes[i - 1])) throw InvalidArgument("outcomes must be distinct and ascending");
    }
}

// Mean and variance of x under weights exp(-gamma x), shifted to avoid overflow.
struct BoltzmannMoments {
    double mean;
    double variance;
    double log_z;
};

BoltzmannMoments boltzmann_moments(const std::vector<double> &x, double gamma) {
    Eigen::VectorXd a(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) a(static_cast<Eigen::Index>(i)) = -gamma * x[i];
    const double log_z = log_sum_exp(a);
    double m = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double p = std::exp(a(static_cast<Eigen::Index>(i)) - log_z);
        m += p * x[i];
        m2 += p * x[i] * x[i];
    }
    return {m, std::max(0.0, m2 - m * m), log_z};
}

bool labels_match(const std::vector<double> &a, const std::vector<double> &b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-12 * std::max(1.0, std::abs(a[i]))) return false;
    return true;
}

double wrap_angle(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

// Dual objective ln sum_x exp(lambda . m(x)) - lambda . c, with m(x) the rows of `features`.
double dual_objective(const Eigen::MatrixXd &features, const Eigen::VectorXd &targets, const Eigen::VectorXd &lambda) {
    return log_sum_exp(features * lambda) - lambda.dot(targets);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

} // namespace

double MomentFunction::operator()(double x) const {
    switch (kind) {
    case Kind::power: return std::pow(x, order);
    case Kind::indicator: return x == point ? 1.0 : 0.0;
    case Kind::cosine: return std::cos(order * x);
    case Kind::sine: return std::sin(order * x);
    case Kind::circular: throw InvalidArgument("circular moment is complex valued");
    }
    return 0.0;
}

std::complex<double> MomentFunction::complex_value(double x) const {
    if (kind == Kind::circular) return std::polar(1.0, order * x);
    return {(*this)(x), 0.0};
}

std::string MomentFunction::name() const {
    switch (kind) {
    case Kind::power: return "power" + std::to_string(order);
    case Kind::indicator: return "indicator";
    case Kind::cosine: return "cos" + std::to_string(order);
    case Kind::sine: return "sin" + std::to_string(order);
    case Kind::circular: return "circular" + std::to_string(order);
    }
    return "";
}

std::string to_string(MaxEntFamily family) {
    switch (family) {
    case MaxEntFamily::uniform: return "uniform";
    case MaxEntFamily::boltzmann: return "boltzmann";
    case MaxEntFamily::general_moment: return "general_moment";
    case MaxEntFamily::gaussian: return "gaussian";
    case MaxEntFamily::von_mises: return "von_mises";
    }
    return "";
}

MaxEntFamily family_from_string(const std::string &name) {
    for (auto f : {MaxEntFamily::uniform, MaxEntFamily::boltzmann, MaxEntFamily::general_moment, MaxEntFamily::gaussian,
                   MaxEntFamily::von_mises})
        if (to_string(f) == name) return f;
    throw InvalidArgument("unknown model family '" + name + "'");
}

MaxEntModel fit_uniform(std::size_t support_size) {
    if (support_size == 0) throw InvalidArgument("empty support");
    MaxEntModel m;
    m.family = MaxEntFamily::uniform;
    m.parameters = {static_cast<double>(support_size)};
    m.entropy = std::log(static_cast<double>(support_size));
    m.support.kind = ModelSupport::Kind::discrete;
    return m;
}

MaxEntModel fit_uniform(std::vector<double> outcomes) {
    require_outcomes(outcomes);
    MaxEntModel m = fit_uniform(outcomes.size());
    m.support.outcomes = std::move(outcomes);
    return m;
}

MaxEntModel fit_uniform_interval(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) throw InvalidArgument("empty interval");
    MaxEntModel m;
    m.family = MaxEntFamily::uniform;
    m.parameters = {lo, hi};
    m.entropy = std::log(hi - lo);
    m.support = {ModelSupport::Kind::interval, {}, lo, hi};
    return m;
}

MaxEntModel fit_uniform_circle(double period) {
    if (!(period > 0.0) || !std::isfinite(period)) throw InvalidArgument("circle period must be positive");
    MaxEntModel m;
    m.family = MaxEntFamily::uniform;
    m.parameters = {period};
    m.entropy = std::log(period);
    m.support = {ModelSupport::Kind::circle, {}, 0.0, period};
    return m;
}

MaxEntModel fit_boltzmann(std::vector<double> outcomes, double target_mean) {
    require_outcomes(outcomes);
    const double lo_x = outcomes.front(), hi_x = outcomes.back();
    if (!(target_mean > lo_x && target_mean < hi_x))
        throw Infeasible("Boltzmann target mean " + std::to_string(target_mean) + " is outside the open hull of the outcomes");

    const double scale = std::max(1.0, hi_x - lo_x);
    auto residual = [&](double g) { return boltzmann_moments(outcomes, g).mean - target_mean; };

    // mean(gamma) decreases strictly; bracket the root first
    double g_lo = 0.0, g_hi = 0.0;
    double step = 1.0 / scale;
    if (residual(0.0) > 0.0) {
        while (residual(g_hi) > 0.0) {
            g_lo = g_hi;
            g_hi += step;
            step *= 2.0;
            if (g_hi > 1e300) throw Infeasible("Boltzmann bracket search failed");
        }
    } else {
        while (residual(g_lo) < 0.0) {
            g_hi = g_lo;
            g_lo -= step;
            step *= 2.0;
            if (g_lo < -1e300) throw Infeasible("Boltzmann bracket search failed");
        }
    }

    double g = 0.5 * (g_lo + g_hi);
    double r = 0.0;
    for (int it = 0; it < kMaxNewtonIterations; ++it) {
        const auto mom = boltzmann_moments(outcomes, g);
        r = mom.mean - target_mean;
        if (std::abs(r) <= 1e-13 * scale) break;
        if (r > 0.0) g_lo = g;
        else g_hi = g;
        double next = mom.variance > 0.0 ? g + r / mom.variance : 0.5 * (g_lo + g_hi);
        if (!(next > g_lo && next < g_hi)) next = 0.5 * (g_lo + g_hi);
        if (next == g) break;
        g = next;
    }
    const auto mom = boltzmann_moments(outcomes, g);
    r = mom.mean - target_mean;
    if (std::abs(r) > kResidualTol) throw Infeasible("Boltzmann fit did not converge", std::abs(r));

    MaxEntModel m;
    m.family = MaxEntFamily::boltzmann;
    m.parameters = {g, std::exp(mom.log_z), mom.mean};
    m.entropy = mom.log_z + g * mom.mean;
    m.support.kind = ModelSupport::Kind::discrete;
    m.support.outcomes = std::move(outcomes);
    m.moments = {MomentFunction::power(1)};
    m.targets = {target_mean};
    return m;
}

MaxEntModel fit_general_moments(std::vector<double> outcomes, const std::vector<MomentConstraint> &constraints,
                                SolverTrace *trace) {
    require_outcomes(outcomes);
    std::vector<MomentFunction> functions;
    std::vector<double> targets;
    for (const auto &c : constraints) {
        if (!std::isfinite(c.target.real()) || !std::isfinite(c.target.imag())) throw InvalidArgument("constraint target is not finite");
        if (c.function.kind == MomentFunction::Kind::circular) {
            functions.push_back(MomentFunction::cosine(c.function.order));
            targets.push_back(c.target.real());
            functions.push_back(MomentFunction::sine(c.function.order));
            targets.push_back(c.target.imag());
        } else {
            if (c.target.imag() != 0.0) throw InvalidArgument("real moment with complex target");
            functions.push_back(c.function);
            targets.push_back(c.target.real());
        }
    }

    const auto n = static_cast<Eigen::Index>(outcomes.size());
    const auto k = static_cast<Eigen::Index>(functions.size());
    Eigen::MatrixXd features(n, k);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < k; ++j) features(i, j) = functions[static_cast<std::size_t>(j)](outcomes[static_cast<std::size_t>(i)]);
    Eigen::VectorXd c(k);
    for (Eigen::Index j = 0; j < k; ++j) c(j) = targets[static_cast<std::size_t>(j)];

    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(k);
    auto model_probs = [&](const Eigen::VectorXd &l) {
        Eigen::VectorXd a = features * l;
        const double lse = log_sum_exp(a);
        return Eigen::VectorXd((a.array() - lse).exp());
    };

    double objective = dual_objective(features, c, lambda);
    Eigen::VectorXd p = model_probs(lambda);
    Eigen::VectorXd grad = features.transpose() * p - c;
    double residual = k > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;
    if (trace) {
        *trace = {};
        trace->dual_objective.push_back(objective);
        trace->residual.push_back(residual);
    }

    int it = 0;
    for (; it < kMaxNewtonIterations && residual > kResidualTol; ++it) {
        const Eigen::MatrixXd centred = features.rowwise() - (features.transpose() * p).transpose();
        const Eigen::MatrixXd hessian = centred.transpose() * p.asDiagonal() * centred;
        Eigen::VectorXd dir;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.vectorD().minCoeff() > 1e-14 * hessian.diagonal().maxCoeff()) {
            dir = -ldlt.solve(grad);
        } else {
            // collinear constraints on this support: minimum-norm Newton step
            dir = -hessian.completeOrthogonalDecomposition().solve(grad);
        }
        if (!dir.allFinite()) break;

        // near the optimum the dual is flat to rounding; allow that much increase
        const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(objective));
        double t = 1.0;
        Eigen::VectorXd trial = lambda + dir;
        double trial_obj = dual_objective(features, c, trial);
        while (!(trial_obj <= objective + slack) && t > 1e-12) {
            t *= 0.5;
            trial = lambda + t * dir;
            trial_obj = dual_objective(features, c, trial);
        }
        if (!(trial_obj <= objective + slack)) break;
        lambda = trial;
        objective = trial_obj;
        p = model_probs(lambda);
        grad = features.transpose() * p - c;
        residual = grad.cwiseAbs().maxCoeff();
        if (trace) {
            trace->dual_objective.push_back(objective);
            trace->residual.push_back(residual);
        }
    }
    if (trace) trace->iterations = it;
    if (!(residual <= kResidualTol))
        throw Infeasible("moment fit did not converge (residual " + std::to_string(residual) +
                             "); targets may lie outside the feasible set",
                         residual);

    const double lambda0 = -log_sum_exp(features * lambda);
    MaxEntModel m;
    m.family = MaxEntFamily::general_moment;
    m.parameters.reserve(static_cast<std::size_t>(k) + 1);
    m.parameters.push_back(lambda0);
    for (Eigen::Index j = 0; j < k; ++j) m.parameters.push_back(lambda(j));
    m.entropy = -lambda0 - lambda.dot(c);
    m.support.kind = ModelSupport::Kind::discrete;
    m.support.outcomes = std::move(outcomes);
    m.moments = std::move(functions);
    m.targets = std::move(targets);
    return m;
}

MaxEntModel fit_gaussian(double mean, double variance) {
    if (!std::isfinite(mean)) throw InvalidArgument("Gaussian mean is not finite");
    if (!(variance > 0.0) || !std::isfinite(variance)) throw InvalidArgument("Gaussian variance must be positive");
    MaxEntModel m;
    m.family = MaxEntFamily::gaussian;
    m.parameters = {mean, variance};
    m.entropy = 0.5 * std::log(kTwoPi * std::numbers::e * variance);
    m.support.kind = ModelSupport::Kind::real_line;
    m.moments = {MomentFunction::power(1), MomentFunction::power(2)};
    m.targets = {mean, variance + mean * mean};
    return m;
}

MaxEntModel fit_von_mises(std::complex<double> moment) {
    const double r = std::abs(moment);
    if (!std::isfinite(r)) throw InvalidArgument("circular moment is not finite");
    if (r >= 1.0) throw Infeasible("circular moment modulus " + std::to_string(r) + " >= 1 has no finite concentration");

    double kappa = 0.0;
    if (r > 0.0) {
        double lo = 0.0, hi = 1.0;
        while (bessel_ratio(hi) < r) {
            lo = hi;
            hi *= 2.0;
        }
        kappa = 0.5 * (lo + hi);
        for (int it = 0; it < kMaxNewtonIterations; ++it) {
            const double f = bessel_ratio(kappa) - r;
            if (f == 0.0) break;
            if (f > 0.0) hi = kappa;
            else lo = kappa;
            double next = kappa - f / bessel_ratio_derivative(kappa);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - kappa) <= 1e-16 * std::max(1.0, kappa)) {
                kappa = next;
                break;
            }
            kappa = next;
        }
        const double res = std::abs(bessel_ratio(kappa) - r);
        if (res > 1e-12) throw Infeasible("von Mises concentration did not converge", res);
    }

    const double mu = r > 0.0 ? wrap_angle(std::arg(moment)) : 0.0;
    MaxEntModel m;
    m.family = MaxEntFamily::von_mises;
    m.parameters = {kappa, mu};
    m.entropy = std::log(kTwoPi) + log_bessel_i0(kappa) - kappa * bessel_ratio(kappa);
    m.support = {ModelSupport::Kind::circle, {}, 0.0, kTwoPi};
    m.moments = {MomentFunction::cosine(1), MomentFunction::sine(1)};
    m.targets = {moment.real(), moment.imag()};
    return m;
}

DiscreteDistribution to_distribution(const MaxEntModel &model, const std::vector<double> &outcomes) {
    if (model.support.kind != ModelSupport::Kind::discrete)
        throw InvalidArgument(to_string(model.family) + " model has no discrete rendering");
    if (!model.support.outcomes.empty() && !labels_match(model.support.outcomes, outcomes))
        throw DimensionMismatch("requested outcomes differ from the model support");

    std::vector<double> w(outcomes.size());
    switch (model.family) {
    case MaxEntFamily::uniform: {
        if (static_cast<double>(outcomes.size()) != model.parameters.at(0))
            throw DimensionMismatch("uniform model support size differs from the outcome count");
        std::fill(w.begin(), w.end(), 1.0);
        break;
    }
    case MaxEntFamily::boltzmann: {
        const double g = model.parameters.at(0);
        const double log_z = std::log(model.parameters.at(1));
        for (std::size_t i = 0; i < outcomes.size(); ++i) w[i] = std::exp(-g * outcomes[i] - log_z);
        break;
    }
    case MaxEntFamily::general_moment: {
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            double a = model.parameters.at(0);
            for (std::size_t j = 0; j < model.moments.size(); ++j) a += model.parameters.at(j + 1) * model.moments[j](outcomes[i]);
            w[i] = std::exp(a);
        }
        break;
    }
    default: throw InvalidArgument(to_string(model.family) + " model has no discrete rendering");
    }
    return DiscreteDistribution::from_weights(outcomes, std::move(w));
}

DiscreteDistribution to_distribution(const MaxEntModel &model, const DiscreteDistribution &like) {
    return to_distribution(model, std::vector<double>(like.outcomes().begin(), like.outcomes().end()));
}

GriddedDensity to_density(const MaxEntModel &model, const GridSpec &grid) {
    if (grid.size == 0) throw InvalidArgument("empty grid");
    std::vector<double> v(grid.size);
    const double period = static_cast<double>(grid.size) * grid.spacing;
    switch (model.family) {
    case MaxEntFamily::uniform: {
        if (model.support.kind == ModelSupport::Kind::circle) {
            if (grid.topology != Topology::circle || std::abs(period - model.parameters.at(0)) > 1e-9 * period)
                throw InvalidArgument("uniform circle model needs a circular grid of the same period");
            std::fill(v.begin(), v.end(), 1.0 / model.parameters.at(0));
        } else if (model.support.kind == ModelSupport::Kind::interval) {
            const double lo = model.support.lo, hi = model.support.hi;
            const double slack = 1e-9 * std::max(1.0, hi - lo);
            for (std::size_t i = 0; i < grid.size; ++i) {
                const double x = grid.x(i);
                v[i] = (x >= lo - slack && x <= hi + slack) ? 1.0 / (hi - lo) : 0.0;
            }
        } else {
            throw InvalidArgument("discrete uniform model has no density rendering");
        }
        break;
    }
    case MaxEntFamily::gaussian: {
        const double mu = model.parameters.at(0), var = model.parameters.at(1), sd = std::sqrt(var);
        const double a = grid.start;
        const double b = grid.topology == Topology::line ? grid.x(grid.size - 1) : grid.start + period;
        const double mass = normal_cdf((b - mu) / sd) - normal_cdf((a - mu) / sd);
        if (mass < 1.0 - 1e-9) throw InvalidArgument("grid captures only " + std::to_string(mass) + " of the Gaussian mass");
        const double norm = 1.0 / std::sqrt(kTwoPi * var);
        for (std::size_t i = 0; i < grid.size; ++i) {
            const double d = grid.x(i) - mu;
            v[i] = norm * std::exp(-0.5 * d * d / var);
        }
        break;
    }
    case MaxEntFamily::von_mises: {
        if (grid.topology != Topology::circle || std::abs(period - kTwoPi) > 1e-9)
            throw InvalidArgument("von Mises model needs a circular grid of period 2*pi");
        const double kappa = model.parameters.at(0), mu = model.parameters.at(1);
        const double norm = 1.0 / (kTwoPi * bessel_i0_scaled(kappa));
        for (std::size_t i = 0; i < grid.size; ++i) v[i] = norm * std::exp(kappa * (std::cos(grid.x(i) - mu) - 1.0));
        break;
    }
    default: throw InvalidArgument(to_string(model.family) + " model has no density rendering");
    }
    return GriddedDensity(grid.start, grid.spacing, std::move(v), grid.topology);
}

std::vector<double> log_density_values(const MaxEntModel &model, const GridSpec &grid) {
    const auto rendered = to_density(model, grid);
    std::vector<double> lv(grid.size);
    switch (model.family) {
    case MaxEntFamily::gaussian: {
        const double mu = model.parameters.at(0), var = model.parameters.at(1);
        const double log_norm = -0.5 * std::log(kTwoPi * var);
        for (std::size_t i = 0; i < grid.size; ++i) {
            const double d = grid.x(i) - mu;
            lv[i] = log_norm - 0.5 * d * d / var;
        }
        break;
    }
    case MaxEntFamily::von_mises: {
        const double kappa = model.parameters.at(0), mu = model.parameters.at(1);
        const double log_norm = -std::log(kTwoPi) - log_bessel_i0(kappa);
        for (std::size_t i = 0; i < grid.size; ++i) lv[i] = log_norm + kappa * std::cos(grid.x(i) - mu);
        break;
    }
    default:
        for (std::size_t i = 0; i < grid.size; ++i) {
            const double v = rendered.value(i);
            lv[i] = v > 0.0 ? std::log(v) : -kInfinity;
        }
    }
    return lv;
}

double relative_entropy(const GriddedDensity &f, const MaxEntModel &model) {
    return relative_entropy_log(f, log_density_values(model, f.grid()));
}

std::complex<double> first_circular_moment(const GriddedDensity &f) {
    if (f.topology() != Topology::circle) throw InvalidArgument("circular moment needs a circular density");
    const double scale = kTwoPi / f.period();
    std::complex<double> m{0.0, 0.0};
    for (std::size_t i = 0; i < f.size(); ++i) m += f.weight(i) * f.value(i) * std::polar(1.0, scale * f.x(i));
    return m / f.integral();
}

MaxEntModel fit_to_density(MaxEntFamily family, const GriddedDensity &f) {
    switch (family) {
    case MaxEntFamily::gaussian: return fit_gaussian(f.mean(), f.variance());
    case MaxEntFamily::von_mises:
        if (f.topology() != Topology::circle) throw InvalidArgument("von Mises fit needs a circular density");
        return fit_von_mises(first_circular_moment(f));
    case MaxEntFamily::uniform:
        if (f.topology() == Topology::circle) return fit_uniform_circle(f.period());
        return fit_uniform_interval(f.start(), f.x(f.size() - 1));
    default:
        throw UnsupportedFamily(to_string(family) +
                                " has no closed-form continuous solution; only gaussian, von_mises and uniform are supported");
    }
}

double boltzmann_gamma(const MaxEntModel &model) {
    if (model.family != MaxEntFamily::boltzmann) throw InvalidArgument("not a Boltzmann model");
    return model.parameters.at(0);
}

double gaussian_variance(const MaxEntModel &model) {
    if (model.family != MaxEntFamily::gaussian) throw InvalidArgument("not a Gaussian model");
    return model.parameters.at(1);
}

double von_mises_kappa(const MaxEntModel &model) {
    if (model.family != MaxEntFamily::von_mises) throw InvalidArgument("not a von Mises model");
    return model.parameters.at(0);
}

} // namespace reur
