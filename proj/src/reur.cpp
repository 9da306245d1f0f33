#include "reur/reur.hpp"

#include "reur/error.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace reur {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sum_terms(const std::vector<Term> &terms) {
    double s = 0.0;
    for (const auto &t : terms) {
        if (std::isinf(t.value) && t.value > 0.0) return kInfinity;
        s += t.value;
    }
    return s;
}

std::vector<std::string> families(const MaxEntModel &a, const MaxEntModel &b) { return {to_string(a.family), to_string(b.family)}; }

void require_gaussian(const MaxEntModel &m) {
    if (m.family != MaxEntFamily::gaussian) throw InvalidArgument("continuous relation needs Gaussian models, got " + to_string(m.family));
}

// Model probabilities indexed like the basis columns.
std::vector<double> model_weights_in_basis_order(const MaxEntModel &model, const OrthonormalBasis &basis) {
    std::vector<double> labels(basis.labels().begin(), basis.labels().end());
    std::vector<double> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    const auto dist = to_distribution(model, sorted);
    std::vector<double> w(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto pos = std::lower_bound(sorted.begin(), sorted.end(), labels[i]) - sorted.begin();
        w[i] = dist.prob(static_cast<std::size_t>(pos));
    }
    return w;
}

} // namespace

std::string to_string(RelationId id) {
    switch (id) {
    case RelationId::robertson: return "robertson";
    case RelationId::birula: return "birula";
    case RelationId::maassen_uffink: return "maassen_uffink";
    case RelationId::frank_lieb: return "frank_lieb";
    case RelationId::reur_discrete: return "reur_discrete";
    case RelationId::reur_continuous: return "reur_continuous";
    case RelationId::reur_relative_only: return "reur_relative_only";
    case RelationId::trivial_bound: return "trivial_bound";
    }
    return "";
}

ReurReport make_report(RelationId relation, BoundDirection direction, std::vector<Term> lhs_terms,
                       std::vector<Term> rhs_terms, double c, double tolerance) {
    ReurReport r;
    r.relation = relation;
    r.direction = direction;
    r.lhs_terms = std::move(lhs_terms);
    r.rhs_terms = std::move(rhs_terms);
    r.lhs = sum_terms(r.lhs_terms);
    r.rhs = sum_terms(r.rhs_terms);
    r.c = c;
    r.tolerance = tolerance;

    const double big = direction == BoundDirection::upper ? r.lhs : r.rhs;
    const double small = direction == BoundDirection::upper ? r.rhs : r.lhs;
    if (std::isinf(big)) {
        r.status = ReportStatus::model_inadmissible;
        r.satisfied = std::isinf(small);
        r.gap = r.satisfied ? 0.0 : -kInfinity;
        return r;
    }
    r.gap = small - big;
    r.satisfied = r.gap >= -tolerance;
    return r;
}

int dim_of(const Measurement &m) {
    return std::visit([](const auto &x) { return x.dim(); }, m);
}

DiscreteDistribution measure(const DensityMatrix &rho, const Measurement &m) {
    if (const auto *b = std::get_if<OrthonormalBasis>(&m)) return measure_projective(rho, *b);
    return measure_povm(rho, std::get<Povm>(m));
}

double incompatibility(const Measurement &a, const Measurement &b) {
    const auto *ba = std::get_if<OrthonormalBasis>(&a);
    const auto *bb = std::get_if<OrthonormalBasis>(&b);
    if (ba && bb) return max_overlap(*ba, *bb);
    const Povm pa = ba ? Povm::from_basis(*ba) : std::get<Povm>(a);
    const Povm pb = bb ? Povm::from_basis(*bb) : std::get<Povm>(b);
    return max_overlap(pa, pb);
}

ReurReport evaluate_maassen_uffink(const DensityMatrix &rho, const Measurement &a, const Measurement &b, double tolerance) {
    const auto p = measure(rho, a);
    const auto q = measure(rho, b);
    const double c = incompatibility(a, b);
    auto r = make_report(RelationId::maassen_uffink, BoundDirection::lower,
                         {{"S(p)", shannon_entropy(p)}, {"S(q)", shannon_entropy(q)}},
                         {{"ln(1/c)", -std::log(c)}, {"S(rho)", von_neumann_entropy(rho)}}, c, tolerance);
    r.fingerprint.dimension = rho.dim();
    return r;
}

ReurReport evaluate_reur_discrete(const DensityMatrix &rho, const Measurement &a, const Measurement &b,
                                  const MaxEntModel &model_p, const MaxEntModel &model_q, double tolerance) {
    const auto p = measure(rho, a);
    const auto q = measure(rho, b);
    const auto p_max = to_distribution(model_p, p);
    const auto q_max = to_distribution(model_q, q);
    const double c = incompatibility(a, b);

    auto r = make_report(RelationId::reur_discrete, BoundDirection::upper,
                         {{"S(p||p_max)", relative_entropy(p, p_max)}, {"S(q||q_max)", relative_entropy(q, q_max)}},
                         {{"-ln(1/c)", std::log(c)},
                          {"-S(rho)", -von_neumann_entropy(rho)},
                          {"S(p_max)", model_p.entropy},
                          {"S(q_max)", model_q.entropy}},
                         c, tolerance);
    r.trivial_bound = model_p.entropy + model_q.entropy;
    if (r.rhs > *r.trivial_bound + 1e-12)
        throw std::logic_error("relation bound exceeds the trivial bound; incompatibility constant above 1?");
    r.fingerprint.dimension = rho.dim();
    r.fingerprint.model_families = families(model_p, model_q);
    return r;
}

ReurReport evaluate_reur_relative_only(const DensityMatrix &rho, const OrthonormalBasis &a, const OrthonormalBasis &b,
                                       const MaxEntModel &model_p, const MaxEntModel &model_q, double tolerance) {
    const auto p = measure_projective(rho, a);
    const auto q = measure_projective(rho, b);
    const auto p_max = to_distribution(model_p, p);
    const auto q_max = to_distribution(model_q, q);
    const double c = max_overlap(a, b);
    const int d = rho.dim();

    const auto rho_x_max = DensityMatrix::diagonal_in(a, model_weights_in_basis_order(model_p, a));
    const auto rho_z_max = DensityMatrix::diagonal_in(b, model_weights_in_basis_order(model_q, b));
    const auto rho_max = DensityMatrix::maximally_mixed(d);

    auto r = make_report(RelationId::reur_relative_only, BoundDirection::upper,
                         {{"S(p||p_max)", relative_entropy(p, p_max)}, {"S(q||q_max)", relative_entropy(q, q_max)}},
                         {{"ln(cd)", std::log(c * d)},
                          {"-S(rho||rho_max)", -quantum_relative_entropy(rho, rho_max)},
                          {"S(rho||rho_X,max)", quantum_relative_entropy(rho, rho_x_max)},
                          {"S(rho||rho_Z,max)", quantum_relative_entropy(rho, rho_z_max)}},
                         c, tolerance);
    r.trivial_bound = model_p.entropy + model_q.entropy;
    r.fingerprint.dimension = d;
    r.fingerprint.model_families = families(model_p, model_q);
    return r;
}

GridSpec balanced_grid(std::size_t n) {
    if (n < 4 || !std::has_single_bit(n)) throw InvalidArgument("grid size must be a power of two >= 4");
    const double dx = std::sqrt(kTwoPi / static_cast<double>(n));
    return {-0.5 * static_cast<double>(n) * dx, dx, n, Topology::line};
}

GridSpec conjugate_grid(const GridSpec &position) {
    const double n = static_cast<double>(position.size);
    const double dk = kTwoPi / (n * position.spacing);
    return {-0.5 * n * dk, dk, position.size, Topology::line};
}

PhaseSpaceDensities wavefunction_to_densities(std::span<const std::complex<double>> psi, const GridSpec &grid) {
    const std::size_t n = psi.size();
    if (n != grid.size) throw DimensionMismatch("wavefunction length differs from grid size");
    if (n < 4 || !std::has_single_bit(n)) throw InvalidArgument("grid size must be a power of two >= 4");
    if (std::abs(grid.start + 0.5 * static_cast<double>(n) * grid.spacing) > 1e-9 * grid.spacing)
        throw InvalidArgument("grid must be symmetric: x_j = (j - N/2) dx");

    double norm = 0.0;
    for (const auto &a : psi) norm += std::norm(a);
    norm *= grid.spacing;
    if (std::abs(norm - 1.0) > 1e-8) throw InvalidArgument("wavefunction norm on grid is " + std::to_string(norm));

    // psi_hat_m = dx/sqrt(2pi) (-1)^{m + N/2} sum_j (-1)^j psi_j e^{-2 pi i m j / N}
    std::vector<std::complex<double>> in(psi.begin(), psi.end());
    for (std::size_t j = 1; j < n; j += 2) in[j] = -in[j];
    std::vector<std::complex<double>> out;
    Eigen::FFT<double> fft;
    fft.fwd(out, in);
    const double sign_half = (n / 2) % 2 == 0 ? 1.0 : -1.0;
    const double scale = grid.spacing / std::sqrt(kTwoPi) * sign_half;

    const GridSpec kgrid = conjugate_grid(grid);
    std::vector<double> f(n), g(n);
    for (std::size_t j = 0; j < n; ++j) {
        f[j] = std::norm(psi[j]);
        g[j] = std::norm(scale * out[j]);
    }

    // adequacy: the outer sixteenth on each side must carry no mass
    const std::size_t edge = n / 16;
    auto tail = [&](const std::vector<double> &v, double h) {
        double t = 0.0;
        for (std::size_t j = 0; j < edge; ++j) t += (v[j] + v[n - 1 - j]) * h;
        return t;
    };
    if (tail(f, grid.spacing) > 1e-9) throw InvalidArgument("position grid too narrow: tail mass above 1e-9");
    if (tail(g, kgrid.spacing) > 1e-9) throw InvalidArgument("position grid too coarse: momentum tail mass above 1e-9");

    return {GriddedDensity(grid.start, grid.spacing, std::move(f), Topology::line),
            GriddedDensity(kgrid.start, kgrid.spacing, std::move(g), Topology::line)};
}

std::vector<double> oscillator_eigenfunction(int n, const GridSpec &grid) {
    if (n < 0) throw InvalidArgument("oscillator level must be non-negative");
    std::vector<double> out(grid.size);
    const double c0 = std::pow(std::numbers::pi, -0.25);
    for (std::size_t i = 0; i < grid.size; ++i) {
        const double x = grid.x(i);
        double prev = 0.0;
        double cur = c0 * std::exp(-0.5 * x * x);
        for (int k = 0; k < n; ++k) {
            const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
            prev = cur;
            cur = next;
        }
        out[i] = cur;
    }
    return out;
}

ThermalOscillator thermal_oscillator(double beta, int levels, const GridSpec &grid) {
    if (levels < 1) throw InvalidArgument("need at least one oscillator level");
    ComplexMatrix h = ComplexMatrix::Zero(levels, levels);
    for (int n = 0; n < levels; ++n) h(n, n) = n + 0.5;
    const auto rho = thermal_state(h, beta);

    std::vector<double> f(grid.size, 0.0), g(grid.size, 0.0);
    GridSpec kgrid = conjugate_grid(grid);
    for (int n = 0; n < levels; ++n) {
        const double w = rho.matrix()(n, n).real();
        const auto psi_real = oscillator_eigenfunction(n, grid);
        std::vector<std::complex<double>> psi(psi_real.begin(), psi_real.end());
        const auto d = wavefunction_to_densities(psi, grid);
        for (std::size_t i = 0; i < grid.size; ++i) {
            f[i] += w * d.position.value(i);
            g[i] += w * d.momentum.value(i);
        }
        kgrid = d.momentum.grid();
    }
    return {{GriddedDensity(grid.start, grid.spacing, std::move(f), Topology::line),
             GriddedDensity(kgrid.start, kgrid.spacing, std::move(g), Topology::line)},
            von_neumann_entropy(rho)};
}

ReurReport evaluate_reur_general_continuous(const GriddedDensity &f, const GriddedDensity &g, double s_rho,
                                            const MaxEntModel &model_f, const MaxEntModel &model_g, double c,
                                            double tolerance) {
    if (!(c > 0.0)) throw InvalidArgument("incompatibility constant must be positive");
    if (!(s_rho >= 0.0)) throw InvalidArgument("von Neumann entropy input must be non-negative");
    auto r = make_report(RelationId::reur_continuous, BoundDirection::upper,
                         {{"S(f||f_max)", relative_entropy(f, model_f)}, {"S(g||g_max)", relative_entropy(g, model_g)}},
                         {{"-ln(1/c)", std::log(c)}, {"-S(rho)", -s_rho}, {"S(f_max)", model_f.entropy}, {"S(g_max)", model_g.entropy}},
                         c, tolerance);
    r.trivial_bound = model_f.entropy + model_g.entropy;
    r.fingerprint.model_families = families(model_f, model_g);
    return r;
}

ReurReport evaluate_reur_continuous(const GriddedDensity &f, const GriddedDensity &g, double s_rho,
                                    const MaxEntModel &model_f, const MaxEntModel &model_g, ContinuousVariant variant,
                                    double tolerance) {
    require_gaussian(model_f);
    require_gaussian(model_g);
    if (f.topology() != Topology::line || g.topology() != Topology::line)
        throw InvalidArgument("position and momentum densities must live on the line");
    if (variant == ContinuousVariant::frank_lieb) {
        auto r = evaluate_reur_general_continuous(f, g, s_rho, model_f, model_g, 1.0 / kTwoPi, tolerance);
        r.relation = RelationId::frank_lieb;
        return r;
    }
    auto r = make_report(RelationId::birula, BoundDirection::upper,
                         {{"S(f||f_max)", relative_entropy(f, model_f)}, {"S(g||g_max)", relative_entropy(g, model_g)}},
                         {{"-(1+ln(pi))", -(1.0 + std::log(std::numbers::pi))},
                          {"S(f_max)", model_f.entropy},
                          {"S(g_max)", model_g.entropy}},
                         1.0 / kTwoPi, tolerance);
    r.trivial_bound = model_f.entropy + model_g.entropy;
    r.fingerprint.model_families = families(model_f, model_g);
    return r;
}

RobertsonStrengthened robertson_strengthened(const GriddedDensity &f, const GriddedDensity &g) {
    const double vx = f.variance(), vk = g.variance();
    if (!(vx > 0.0) || !(vk > 0.0)) throw InvalidArgument("degenerate variance on grid");
    const auto mf = fit_gaussian(f.mean(), vx);
    const auto mg = fit_gaussian(g.mean(), vk);
    const double div = relative_entropy(f, mf) + relative_entropy(g, mg);
    RobertsonStrengthened r{};
    r.sigma_x = std::sqrt(vx);
    r.sigma_k = std::sqrt(vk);
    r.sigma_product = r.sigma_x * r.sigma_k;
    r.divergence_sum = div;
    r.strengthened_bound = 0.5 * std::exp(div);
    r.robertson_bound = 0.5;
    return r;
}

NormalizationCovariance check_normalization_covariance(const GriddedDensity &f, const GriddedDensity &g, double s_rho,
                                                       double c, std::complex<double> alpha, double tolerance) {
    const double a2 = std::norm(alpha);
    if (!(a2 > 0.0)) throw InvalidArgument("normalization factor must be non-zero");
    if (f.topology() != Topology::line) throw InvalidArgument("normalization covariance needs a density on the line");

    const auto mf = fit_to_density(MaxEntFamily::gaussian, f);
    const auto mg = fit_to_density(MaxEntFamily::gaussian, g);
    const auto before = evaluate_reur_general_continuous(f, g, s_rho, mf, mg, c);

    // |x'> = alpha |x>, dx' = dx / |alpha|^2: the density in x' is |alpha|^2 f
    const auto f_scaled = rescale_density(f, 1.0 / a2);
    const auto mf_scaled = fit_to_density(MaxEntFamily::gaussian, f_scaled);
    const auto after = evaluate_reur_general_continuous(f_scaled, g, s_rho, mf_scaled, mg, a2 * c);

    NormalizationCovariance out{};
    out.rhs_before = before.rhs;
    out.rhs_after = after.rhs;
    out.lhs_before = before.lhs;
    out.lhs_after = after.lhs;
    out.model_entropy_shift = mf_scaled.entropy - mf.entropy;
    out.overlap_term_shift = std::log(a2 * c) - std::log(c);
    out.invariant = std::abs(out.rhs_after - out.rhs_before) <= tolerance && std::abs(out.lhs_after - out.lhs_before) <= tolerance;
    return out;
}

} // namespace reur
