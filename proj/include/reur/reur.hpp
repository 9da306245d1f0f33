#pragma once

#include "reur/entropy.hpp"
#include "reur/maxent.hpp"
#include "reur/quantum_core.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace reur {

enum class RelationId {
    robertson,
    birula,
    maassen_uffink,
    frank_lieb,
    reur_discrete,
    reur_continuous,
    reur_relative_only,
    trivial_bound,
};

std::string to_string(RelationId id);

/// upper: lhs <= rhs (the divergence-sum relations).
/// lower: lhs >= rhs (entropy-sum relations such as Maassen-Uffink).
enum class BoundDirection { upper, lower };

enum class ReportStatus { ok, model_inadmissible };

struct Term {
    std::string name;
    double value;
};

struct Fingerprint {
    std::optional<std::uint64_t> seed;
    int dimension = 0;
    std::vector<std::string> model_families;
};

/// Both sides of one relation, with every contribution listed separately.
/// gap is the slack in the direction of the relation (rhs - lhs for upper
/// bounds, lhs - rhs for lower bounds); satisfied <=> gap >= -tolerance.
struct ReurReport {
    RelationId relation = RelationId::reur_discrete;
    BoundDirection direction = BoundDirection::upper;
    std::vector<Term> lhs_terms;
    std::vector<Term> rhs_terms;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    bool satisfied = true;
    double tolerance = 0.0;
    double c = 0.0;
    ReportStatus status = ReportStatus::ok;
    std::optional<double> trivial_bound;
    Fingerprint fingerprint;
};

/// Sums the terms and fills gap/satisfied/status. An infinite divergence
/// on the lhs of an upper bound marks the models inadmissible; the relation
/// then only counts as satisfied if the rhs is infinite too.
ReurReport make_report(RelationId relation, BoundDirection direction, std::vector<Term> lhs_terms,
                       std::vector<Term> rhs_terms, double c, double tolerance);

inline constexpr double kDiscreteTolerance = 1e-9;
inline constexpr double kContinuousTolerance = 1e-5;

using Measurement = std::variant<OrthonormalBasis, Povm>;

int dim_of(const Measurement &m);
DiscreteDistribution measure(const DensityMatrix &rho, const Measurement &m);
/// Incompatibility constant of two measurements (overlap for bases, operator norm otherwise).
double incompatibility(const Measurement &a, const Measurement &b);

/// S(p) + S(q) >= ln(1/c) + S(rho).
ReurReport evaluate_maassen_uffink(const DensityMatrix &rho, const Measurement &a, const Measurement &b,
                                   double tolerance = kDiscreteTolerance);

/// S(p||p_max) + S(q||q_max) <= -ln(1/c) - S(rho) + S(p_max) + S(q_max).
ReurReport evaluate_reur_discrete(const DensityMatrix &rho, const Measurement &a, const Measurement &b,
                                  const MaxEntModel &model_p, const MaxEntModel &model_q,
                                  double tolerance = kDiscreteTolerance);

/// The discrete relation with the right-hand side written through quantum
/// relative entropies: ln(cd) - S(rho||1/d) + S(rho||rho_X,max) + S(rho||rho_Z,max).
ReurReport evaluate_reur_relative_only(const DensityMatrix &rho, const OrthonormalBasis &a, const OrthonormalBasis &b,
                                       const MaxEntModel &model_p, const MaxEntModel &model_q,
                                       double tolerance = kDiscreteTolerance);

/// Position and momentum densities of a wavefunction on a symmetric
/// power-of-two grid x_j = (j - N/2) dx, with psi_hat(k) = (2 pi)^{-1/2} int psi(x) e^{-ikx} dx.
struct PhaseSpaceDensities {
    GriddedDensity position;
    GriddedDensity momentum;
};

/// Symmetric grid of n points with equal position and momentum ranges.
GridSpec balanced_grid(std::size_t n);
/// Momentum grid conjugate to a position grid produced by balanced_grid or similar.
GridSpec conjugate_grid(const GridSpec &position);

PhaseSpaceDensities wavefunction_to_densities(std::span<const std::complex<double>> psi, const GridSpec &grid);

/// Harmonic-oscillator eigenfunction psi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-x^2/2}.
std::vector<double> oscillator_eigenfunction(int n, const GridSpec &grid);

/// Thermal state of the oscillator truncated to `levels` levels, H = diag(n + 1/2).
struct ThermalOscillator {
    PhaseSpaceDensities densities;
    double von_neumann_entropy;
};
ThermalOscillator thermal_oscillator(double beta, int levels, const GridSpec &grid);

enum class ContinuousVariant { birula, frank_lieb };

/// Divergences of f and g from their Gaussian models, bounded by
/// ln 2 + ln(sigma_x sigma_k) (birula) or 1 - S(rho) + ln(sigma_x sigma_k) (frank_lieb).
ReurReport evaluate_reur_continuous(const GriddedDensity &f, const GriddedDensity &g, double s_rho,
                                    const MaxEntModel &model_f, const MaxEntModel &model_g, ContinuousVariant variant,
                                    double tolerance = kContinuousTolerance);

/// General form with an explicit incompatibility constant c, for any
/// closed-form continuous models on the grids of f and g.
ReurReport evaluate_reur_general_continuous(const GriddedDensity &f, const GriddedDensity &g, double s_rho,
                                            const MaxEntModel &model_f, const MaxEntModel &model_g, double c,
                                            double tolerance = kContinuousTolerance);

struct RobertsonStrengthened {
    double sigma_x;
    double sigma_k;
    double sigma_product;
    double divergence_sum;      // S(f||f_max) + S(g||g_max)
    double strengthened_bound;  // exp(divergence_sum) / 2
    double robertson_bound;     // 1/2
};

RobertsonStrengthened robertson_strengthened(const GriddedDensity &f, const GriddedDensity &g);

/// Outcome of rescaling the position basis |x> -> alpha |x> together with
/// dx -> |alpha|^-2 dx.
struct NormalizationCovariance {
    bool invariant;
    double rhs_before;
    double rhs_after;
    double lhs_before;
    double lhs_after;
    double model_entropy_shift;  // change of S(f_max), -ln|alpha|^2
    double overlap_term_shift;   // change of -ln(1/c), +ln|alpha|^2
};

NormalizationCovariance check_normalization_covariance(const GriddedDensity &f, const GriddedDensity &g, double s_rho,
                                                       double c, std::complex<double> alpha, double tolerance = 1e-8);

} // namespace reur
