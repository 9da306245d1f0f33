#include "reur/angular.hpp"

#include "reur/error.hpp"

#include <cmath>
#include <future>
#include <numbers>

namespace reur {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_dim(const AngularSystem &sys, const DensityMatrix &rho) {
    if (rho.dim() != sys.dim())
        throw DimensionMismatch("state dimension " + std::to_string(rho.dim()) + " differs from 2J+1 = " +
                                std::to_string(sys.dim()));
}

std::vector<double> theta_values(const AngularSystem &sys) {
    std::vector<double> t(sys.dim());
    for (int j = 0; j < sys.dim(); ++j) t[j] = sys.theta0 + kTwoPi * j / sys.dim();
    return t;
}

} // namespace

AngularSystem::AngularSystem(int two_j_, double theta0_) : two_j(two_j_), theta0(theta0_) {
    if (two_j < 0) throw InvalidArgument("2J must be non-negative");
    if (!std::isfinite(theta0)) throw InvalidArgument("theta0 must be finite");
}

std::vector<double> AngularSystem::m_values() const {
    std::vector<double> m(dim());
    for (int i = 0; i < dim(); ++i) m[i] = this->m(i);
    return m;
}

ComplexVector angle_state(const AngularSystem &sys, double phi) {
    const int d = sys.dim();
    ComplexVector v(d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) v(i) = norm * std::polar(1.0, -sys.m(i) * phi);
    return v;
}

std::complex<double> angle_overlap(const AngularSystem &sys, double phi, double varphi) {
    const double delta = phi - varphi;
    const int d = sys.dim();
    const double s = std::sin(0.5 * delta);
    if (std::abs(s) < 1e-4) {
        // near the removable singularity the direct sum is exact enough
        double acc = 0.0;
        for (int i = 0; i < d; ++i) acc += std::cos(sys.m(i) * delta);
        return acc / d;
    }
    return std::sin(0.5 * d * delta) / (d * s);
}

OrthonormalBasis momentum_basis(const AngularSystem &sys) { return OrthonormalBasis::computational(sys.m_values()); }

OrthonormalBasis discrete_angle_basis(const AngularSystem &sys) {
    const auto thetas = theta_values(sys);
    ComplexMatrix vectors(sys.dim(), sys.dim());
    for (int j = 0; j < sys.dim(); ++j) vectors.col(j) = angle_state(sys, thetas[j]);
    return OrthonormalBasis(vectors, thetas);
}

ComplexMatrix rotation(const AngularSystem &sys, double phi) {
    ComplexMatrix u = ComplexMatrix::Zero(sys.dim(), sys.dim());
    for (int i = 0; i < sys.dim(); ++i) u(i, i) = std::polar(1.0, -sys.m(i) * phi);
    return u;
}

double completeness_residual(const AngularSystem &sys, std::size_t quad_points) {
    if (quad_points == 0) throw InvalidArgument("need at least one quadrature point");
    const int d = sys.dim();
    ComplexMatrix acc = ComplexMatrix::Zero(d, d);
    const double dphi = kTwoPi / static_cast<double>(quad_points);
    for (std::size_t k = 0; k < quad_points; ++k) {
        const auto v = angle_state(sys, sys.theta0 + dphi * static_cast<double>(k));
        acc.noalias() += v * v.adjoint();
    }
    acc *= d * dphi / kTwoPi;
    return (acc - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

double verify_completeness(const AngularSystem &sys, std::size_t quad_points) {
    if (quad_points < static_cast<std::size_t>(sys.two_j) + 2)
        throw InvalidArgument("completeness quadrature needs at least 2J+2 points");
    return completeness_residual(sys, quad_points);
}

GriddedDensity angle_povm_density(const DensityMatrix &rho, const AngularSystem &sys, std::size_t grid_points) {
    require_dim(sys, rho);
    if (grid_points < static_cast<std::size_t>(sys.two_j) + 2)
        throw InvalidArgument("angle grid needs at least 2J+2 points");
    const int d = sys.dim();
    const double dphi = kTwoPi / static_cast<double>(grid_points);
    std::vector<double> values(grid_points);
    for (std::size_t k = 0; k < grid_points; ++k) {
        const auto v = angle_state(sys, sys.theta0 + dphi * static_cast<double>(k));
        const double q = (v.adjoint() * rho.matrix() * v)(0, 0).real();
        values[k] = std::max(0.0, d * q / kTwoPi);
    }
    return GriddedDensity(sys.theta0, dphi, std::move(values), Topology::circle);
}

const char *to_string(AngleMode mode) {
    return mode == AngleMode::discrete_pvm ? "discrete_pvm" : "continuous_povm";
}

ReurReport reur_angular_experiment(const AngularSystem &sys, const DensityMatrix &rho, const MaxEntModel &angle_model,
                                   const MaxEntModel &momentum_model, AngleMode mode, double scale_R,
                                   std::size_t grid_points) {
    require_dim(sys, rho);
    if (!(scale_R > 0.0) || !std::isfinite(scale_R)) throw InvalidArgument("scale_R must be positive");

    if (mode == AngleMode::discrete_pvm) {
        if (angle_model.family == MaxEntFamily::von_mises)
            throw UnsupportedFamily("von Mises is a density; use general_moment for the discrete angle");
        auto r = evaluate_reur_discrete(rho, discrete_angle_basis(sys), momentum_basis(sys), angle_model, momentum_model);
        return r;
    }

    if (angle_model.family != MaxEntFamily::uniform && angle_model.family != MaxEntFamily::von_mises)
        throw UnsupportedFamily("continuous angle model must be uniform or von_mises");

    const auto f = angle_povm_density(rho, sys, grid_points);
    auto log_f_max = log_density_values(angle_model, f.grid());
    const auto q = measure_projective(rho, momentum_basis(sys));
    const auto q_max = to_distribution(momentum_model, q);

    // x = R phi; the divergence is evaluated on the stretched circle
    const double log_r = std::log(scale_R);
    const auto f_r = rescale_density(f, scale_R);
    for (auto &v : log_f_max) v -= log_r;
    const double c = 1.0 / (kTwoPi * scale_R);

    auto r = make_report(RelationId::reur_continuous, BoundDirection::upper,
                         {{"S(f||f_max)", relative_entropy_log(f_r, log_f_max)}, {"S(q||q_max)", relative_entropy(q, q_max)}},
                         {{"-ln(1/c)", std::log(c)},
                          {"-S(rho)", -von_neumann_entropy(rho)},
                          {"S(f_max)", angle_model.entropy + log_r},
                          {"S(q_max)", momentum_model.entropy}},
                         c, kContinuousTolerance);
    r.trivial_bound = angle_model.entropy + log_r + momentum_model.entropy;
    r.fingerprint.dimension = sys.dim();
    r.fingerprint.model_families = {to_string(angle_model.family), to_string(momentum_model.family)};
    return r;
}

MaxEntModel fit_angle_model(const AngularSystem &sys, const DensityMatrix &rho, AngleFamily family, AngleMode mode,
                            std::size_t grid_points) {
    require_dim(sys, rho);
    if (mode == AngleMode::continuous_povm) {
        if (family == AngleFamily::uniform) return fit_uniform_circle(kTwoPi);
        return fit_von_mises(first_circular_moment(angle_povm_density(rho, sys, grid_points)));
    }
    const auto p = measure_projective(rho, discrete_angle_basis(sys));
    std::vector<double> outcomes(p.outcomes().begin(), p.outcomes().end());
    if (family == AngleFamily::uniform) return fit_uniform(std::move(outcomes));
    std::complex<double> z = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) z += p.prob(i) * std::polar(1.0, p.outcome(i));
    return fit_general_moments(std::move(outcomes), {{MomentFunction::circular(1), z}});
}

MaxEntModel fit_momentum_model(const AngularSystem &sys, const DensityMatrix &rho, MomentumFamily family) {
    require_dim(sys, rho);
    const auto q = measure_projective(rho, momentum_basis(sys));
    std::vector<double> outcomes(q.outcomes().begin(), q.outcomes().end());
    switch (family) {
    case MomentumFamily::uniform: return fit_uniform(std::move(outcomes));
    case MomentumFamily::boltzmann: return fit_boltzmann(std::move(outcomes), q.mean());
    case MomentumFamily::general_moment: {
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            m1 += q.prob(i) * q.outcome(i);
            m2 += q.prob(i) * q.outcome(i) * q.outcome(i);
        }
        return fit_general_moments(std::move(outcomes),
                                   {{MomentFunction::power(1), m1}, {MomentFunction::power(2), m2}});
    }
    }
    throw UnsupportedFamily("unknown momentum family");
}

DensityMatrix phase_state(const AngularSystem &sys, double center, double width) {
    if (!(width > 0.0)) throw InvalidArgument("phase width must be positive");
    ComplexVector psi(sys.dim());
    for (int i = 0; i < sys.dim(); ++i) {
        const double m = sys.m(i);
        psi(i) = std::polar(std::exp(-m * m * width * width), -m * center);
    }
    return DensityMatrix::pure(psi);
}

std::vector<SweepRow> continuum_sweep(const StateFamily &family, const std::vector<int> &two_j_values,
                                      const SweepOptions &options) {
    auto run = [&](int two_j) {
        const AngularSystem sys(two_j, options.theta0);
        const auto rho = family(sys);
        SweepRow row;
        row.two_j = two_j;
        row.von_neumann_entropy = von_neumann_entropy(rho);
        const auto mq = fit_momentum_model(sys, rho, options.momentum_family);
        const auto ma_d = fit_angle_model(sys, rho, options.angle_family, AngleMode::discrete_pvm);
        const auto ma_c = fit_angle_model(sys, rho, options.angle_family, AngleMode::continuous_povm, options.grid_points);
        row.discrete = reur_angular_experiment(sys, rho, ma_d, mq, AngleMode::discrete_pvm, options.scale_R);
        row.continuous = reur_angular_experiment(sys, rho, ma_c, mq, AngleMode::continuous_povm, options.scale_R,
                                                 options.grid_points);
        row.lhs_difference = std::abs(row.discrete.lhs - row.continuous.lhs);
        row.completeness_residual = verify_completeness(sys, static_cast<std::size_t>(two_j) + 2);
        return row;
    };

    std::vector<std::future<SweepRow>> jobs;
    jobs.reserve(two_j_values.size());
    for (int tj : two_j_values) jobs.push_back(std::async(std::launch::async, run, tj));
    std::vector<SweepRow> rows;
    rows.reserve(jobs.size());
    for (auto &j : jobs) rows.push_back(j.get());
    return rows;
}

} // namespace reur
