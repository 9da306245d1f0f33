#pragma once

#include "reur/entropy.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace reur {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-12;
inline constexpr double kCompletenessTol = 1e-10;

/// Orthonormal eigenbasis of a non-degenerate observable. Column i of
/// vectors() is the eigenvector with eigenvalue labels()[i].
class OrthonormalBasis {
public:
    OrthonormalBasis(ComplexMatrix vectors, std::vector<double> labels);

    static OrthonormalBasis computational(int dim);
    static OrthonormalBasis computational(std::vector<double> labels);
    /// Columns (1/sqrt d) exp(2 pi i j k / d); mutually unbiased to the computational basis.
    static OrthonormalBasis fourier(int dim);
    /// Haar-random basis, labels 0..dim-1.
    static OrthonormalBasis random(int dim, std::uint64_t seed);

    int dim() const noexcept { return static_cast<int>(vectors_.rows()); }
    const ComplexMatrix &vectors() const noexcept { return vectors_; }
    ComplexVector vector(int i) const { return vectors_.col(i); }
    std::span<const double> labels() const noexcept { return labels_; }

private:
    ComplexMatrix vectors_;
    std::vector<double> labels_;
};

/// Hermitian, unit-trace, positive-semidefinite operator. The spectral
/// decomposition is computed once at construction (PSD validation needs it)
/// and shared between copies.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix entries);

    static DensityMatrix pure(const ComplexVector &psi);
    static DensityMatrix maximally_mixed(int dim);
    /// sum_i weights[i] |b_i><b_i| in the given basis (basis column order).
    static DensityMatrix diagonal_in(const OrthonormalBasis &basis, std::span<const double> weights);

    int dim() const noexcept { return static_cast<int>(entries_.rows()); }
    const ComplexMatrix &matrix() const noexcept { return entries_; }
    /// Ascending eigenvalues, entries in [-1e-12, 0) clamped to zero.
    const Eigen::VectorXd &eigenvalues() const noexcept { return eigenvalues_; }
    const ComplexMatrix &eigenvectors() const noexcept { return eigenvectors_; }

private:
    ComplexMatrix entries_;
    Eigen::VectorXd eigenvalues_;
    ComplexMatrix eigenvectors_;
};

/// Finite set of PSD operators summing to the identity, with distinct outcome labels.
class Povm {
public:
    Povm(std::vector<ComplexMatrix> elements, std::vector<double> labels);

    static Povm from_basis(const OrthonormalBasis &basis);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const std::vector<ComplexMatrix> &elements() const noexcept { return elements_; }
    std::span<const double> labels() const noexcept { return labels_; }

private:
    int dim_;
    std::vector<ComplexMatrix> elements_;
    std::vector<double> labels_;
};

/// -Tr rho ln rho in nats.
double von_neumann_entropy(const DensityMatrix &rho);

/// Tr rho (ln rho - ln sigma); +inf when supp(rho) is not inside supp(sigma).
double quantum_relative_entropy(const DensityMatrix &rho, const DensityMatrix &sigma);

/// Outcome distribution <x|rho|x>, labelled by basis labels.
DiscreteDistribution measure_projective(const DensityMatrix &rho, const OrthonormalBasis &basis);

/// Outcome distribution Tr(Lambda_x rho).
DiscreteDistribution measure_povm(const DensityMatrix &rho, const Povm &povm);

/// Non-selective measurement sum_x p(x) |x><x|.
DensityMatrix measured_state(const DensityMatrix &rho, const OrthonormalBasis &basis);

/// max_{x,z} |<x|z>|^2.
double max_overlap(const OrthonormalBasis &a, const OrthonormalBasis &b);

/// max_{x,z} ||sqrt(Lambda_x) sqrt(Gamma_z)||_inf^2.
double max_overlap(const Povm &a, const Povm &b);

/// exp(-beta H) / Tr exp(-beta H), evaluated in the eigenbasis of H.
DensityMatrix thermal_state(const ComplexMatrix &hamiltonian, double beta);

/// G G^dagger / Tr(G G^dagger) with G a dim x rank complex Ginibre matrix.
/// rank 1 gives Haar-random pure states.
DensityMatrix random_density_matrix(int dim, int rank, std::uint64_t seed);

/// Principal square root of a PSD matrix through its eigendecomposition.
ComplexMatrix psd_sqrt(const ComplexMatrix &m);

} // namespace reur
