#pragma once

#include "reur/entropy.hpp"
#include "reur/maxent.hpp"
#include "reur/quantum_core.hpp"
#include "reur/reur.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace reur {

/// Spin-J system spanned by |m>, m = -J, ..., J. J is stored doubled so
/// half-integer spins stay exact.
struct AngularSystem {
    int two_j = 0;
    double theta0 = 0.0;

    AngularSystem() = default;
    AngularSystem(int two_j_, double theta0_ = 0.0);

    int dim() const noexcept { return two_j + 1; }
    double j() const noexcept { return 0.5 * two_j; }
    /// m value of basis index i (i = 0 is m = -J).
    double m(int i) const noexcept { return -0.5 * two_j + i; }
    std::vector<double> m_values() const;
};

/// |phi> = (2J+1)^{-1/2} sum_m exp(-i m phi) |m>.
ComplexVector angle_state(const AngularSystem &sys, double phi);

/// <varphi|phi> = sin((J+1/2) D) / ((2J+1) sin(D/2)), D = phi - varphi.
std::complex<double> angle_overlap(const AngularSystem &sys, double phi, double varphi);

/// Eigenbasis of L_z labelled by m.
OrthonormalBasis momentum_basis(const AngularSystem &sys);

/// Angle states at theta_j = theta0 + 2 pi j / (2J+1), labelled by theta_j.
OrthonormalBasis discrete_angle_basis(const AngularSystem &sys);

/// exp(-i phi L_z).
ComplexMatrix rotation(const AngularSystem &sys, double phi);

/// Max entrywise deviation of the rectangle-rule resolution of identity
/// (2J+1)/(2 pi) sum_k dphi |phi_k><phi_k| from the identity.
double completeness_residual(const AngularSystem &sys, std::size_t quad_points);
/// As completeness_residual, but rejects quad_points < 2J+2.
double verify_completeness(const AngularSystem &sys, std::size_t quad_points);

/// p(phi) = (2J+1)/(2 pi) <phi|rho|phi> on a circular grid starting at theta0.
GriddedDensity angle_povm_density(const DensityMatrix &rho, const AngularSystem &sys, std::size_t grid_points);

enum class AngleMode { discrete_pvm, continuous_povm };

const char *to_string(AngleMode mode);

/// REUR for angle and angular momentum.
///
/// discrete_pvm: angle measured in discrete_angle_basis, c = 1/(2J+1).
/// continuous_povm: angle density from angle_povm_density, c = 1/(2 pi)
/// (density convention). angle_model must be uniform or von_mises here;
/// scale_R stretches the angle to x = R phi, which adds ln R to the model
/// entropy and divides c by R. The momentum side is always the discrete
/// m distribution; relabelling k = m/R leaves it unchanged.
ReurReport reur_angular_experiment(const AngularSystem &sys, const DensityMatrix &rho, const MaxEntModel &angle_model,
                                   const MaxEntModel &momentum_model, AngleMode mode, double scale_R = 1.0,
                                   std::size_t grid_points = 4096);

enum class AngleFamily { uniform, von_mises };
enum class MomentumFamily { uniform, boltzmann, general_moment };

/// Angle reference fitted to rho. von_mises maps to a von Mises density in
/// continuous mode and to the first-circular-moment exponential family on
/// the theta_j in discrete mode.
MaxEntModel fit_angle_model(const AngularSystem &sys, const DensityMatrix &rho, AngleFamily family, AngleMode mode,
                            std::size_t grid_points = 4096);
/// general_moment matches <m> and <m^2> (a discrete Gaussian in m).
MaxEntModel fit_momentum_model(const AngularSystem &sys, const DensityMatrix &rho, MomentumFamily family);

/// Normalized pure state with amplitudes exp(-m^2 width^2 - i m center); its
/// angle density peaks at `center` with standard deviation about `width`.
DensityMatrix phase_state(const AngularSystem &sys, double center, double width);

using StateFamily = std::function<DensityMatrix(const AngularSystem &)>;

struct SweepOptions {
    AngleFamily angle_family = AngleFamily::uniform;
    MomentumFamily momentum_family = MomentumFamily::uniform;
    std::size_t grid_points = 4096;
    double scale_R = 1.0;
    double theta0 = 0.0;
};

struct SweepRow {
    int two_j = 0;
    double von_neumann_entropy = 0.0;
    ReurReport discrete;
    ReurReport continuous;
    /// |lhs_discrete - lhs_continuous|; the ln(dtheta) corrections of the
    /// entropies cancel inside each divergence.
    double lhs_difference = 0.0;
    double completeness_residual = 0.0;
};

std::vector<SweepRow> continuum_sweep(const StateFamily &family, const std::vector<int> &two_j_values,
                                      const SweepOptions &options = {});

} // namespace reur
