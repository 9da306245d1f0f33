#include "reur/quantum_core.hpp"

#include "reur/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

namespace reur {

namespace {

using Complex = std::complex<double>;

double max_abs(const ComplexMatrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_square(const ComplexMatrix &m, const char *what) {
    if (m.rows() == 0 || m.rows() != m.cols()) throw InvalidArgument(std::string(what) + " must be a non-empty square matrix");
}

void require_dims(int a, int b, const char *what) {
    if (a != b) throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " + std::to_string(b));
}

ComplexMatrix hermitian_part(const ComplexMatrix &m) { return 0.5 * (m + m.adjoint()); }

void require_distinct(std::vector<double> labels) {
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
        throw InvalidArgument("outcome labels must be distinct (degenerate observables are not supported)");
}

// Eigenvalues below -kPsdTol are an error; those in [-kPsdTol, 0) become 0.
Eigen::VectorXd clamp_spectrum(Eigen::VectorXd values, const char *what) {
    for (auto &v : values) {
        if (v < -kPsdTol) throw InvalidState(std::string(what) + " has eigenvalue " + std::to_string(v));
        if (v < 0.0) v = 0.0;
    }
    return values;
}

double entropy_of_spectrum(const Eigen::VectorXd &values) {
    double s = 0.0;
    for (double v : values)
        if (v > 0.0) s -= v * std::log(v);
    return s;
}

// Probabilities in basis column order.
std::vector<double> basis_probabilities(const DensityMatrix &rho, const OrthonormalBasis &basis) {
    require_dims(rho.dim(), basis.dim(), "state and basis");
    const ComplexMatrix rotated = basis.vectors().adjoint() * rho.matrix() * basis.vectors();
    std::vector<double> p(static_cast<std::size_t>(basis.dim()));
    for (int i = 0; i < basis.dim(); ++i) p[static_cast<std::size_t>(i)] = rotated(i, i).real();
    return p;
}

} // namespace

OrthonormalBasis::OrthonormalBasis(ComplexMatrix vectors, std::vector<double> labels)
    : vectors_(std::move(vectors)), labels_(std::move(labels)) {
    require_square(vectors_, "basis");
    if (labels_.size() != static_cast<std::size_t>(vectors_.cols()))
        throw DimensionMismatch("basis needs one label per vector");
    for (double l : labels_)
        if (!std::isfinite(l)) throw InvalidArgument("basis label is not finite");
    require_distinct(labels_);
    const ComplexMatrix gram = vectors_.adjoint() * vectors_;
    const double dev = max_abs(gram - ComplexMatrix::Identity(gram.rows(), gram.cols()));
    if (dev > kHermitianTol) throw InvalidArgument("basis vectors are not orthonormal (deviation " + std::to_string(dev) + ")");
}

OrthonormalBasis OrthonormalBasis::computational(int dim) {
    if (dim < 1) throw InvalidArgument("dimension must be positive");
    std::vector<double> labels(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) labels[static_cast<std::size_t>(i)] = i;
    return OrthonormalBasis(ComplexMatrix::Identity(dim, dim), std::move(labels));
}

OrthonormalBasis OrthonormalBasis::computational(std::vector<double> labels) {
    const auto dim = static_cast<Eigen::Index>(labels.size());
    return OrthonormalBasis(ComplexMatrix::Identity(dim, dim), std::move(labels));
}

OrthonormalBasis OrthonormalBasis::fourier(int dim) {
    if (dim < 1) throw InvalidArgument("dimension must be positive");
    ComplexMatrix f(dim, dim);
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) {
            // reduce j*k mod dim so the phase argument stays small
            const double phase = 2.0 * std::numbers::pi * static_cast<double>((j * k) % dim) / dim;
            f(j, k) = std::polar(norm, phase);
        }
    std::vector<double> labels(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) labels[static_cast<std::size_t>(i)] = i;
    return OrthonormalBasis(std::move(f), std::move(labels));
}

OrthonormalBasis OrthonormalBasis::random(int dim, std::uint64_t seed) {
    if (dim < 1) throw InvalidArgument("dimension must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix &r = qr.matrixQR();
    // fix column phases so the distribution is Haar
    for (int j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        if (a > 0.0) q.col(j) *= d / a;
    }
    // re-orthonormalize away rounding so the 1e-12 Gram check is comfortable
    Eigen::HouseholderQR<ComplexMatrix> clean(q);
    ComplexMatrix q2 = clean.householderQ();
    for (int j = 0; j < dim; ++j) {
        const Complex d = clean.matrixQR()(j, j);
        const double a = std::abs(d);
        if (a > 0.0) q2.col(j) *= d / a;
    }
    std::vector<double> labels(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) labels[static_cast<std::size_t>(i)] = i;
    return OrthonormalBasis(std::move(q2), std::move(labels));
}

DensityMatrix::DensityMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "density matrix");
    const double herm = max_abs(entries_ - entries_.adjoint());
    if (herm > kHermitianTol) throw InvalidState("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
    const double tr = entries_.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) throw InvalidState("density matrix trace is " + std::to_string(tr));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(entries_));
    if (es.info() != Eigen::Success) throw InvalidState("eigendecomposition failed");
    eigenvalues_ = clamp_spectrum(es.eigenvalues(), "density matrix");
    eigenvectors_ = es.eigenvectors();
}

DensityMatrix DensityMatrix::pure(const ComplexVector &psi) {
    const double n = psi.norm();
    if (!(n > 0.0)) throw InvalidArgument("zero state vector");
    const ComplexVector u = psi / n;
    return DensityMatrix(hermitian_part(u * u.adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    if (dim < 1) throw InvalidArgument("dimension must be positive");
    return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::diagonal_in(const OrthonormalBasis &basis, std::span<const double> weights) {
    if (weights.size() != static_cast<std::size_t>(basis.dim())) throw DimensionMismatch("one weight per basis vector required");
    Eigen::VectorXd w(basis.dim());
    for (int i = 0; i < basis.dim(); ++i) w(i) = weights[static_cast<std::size_t>(i)];
    const ComplexMatrix m = basis.vectors() * w.cast<std::complex<double>>().asDiagonal() * basis.vectors().adjoint();
    return DensityMatrix(hermitian_part(m));
}

Povm::Povm(std::vector<ComplexMatrix> elements, std::vector<double> labels)
    : dim_(0), elements_(std::move(elements)), labels_(std::move(labels)) {
    if (elements_.empty()) throw InvalidArgument("POVM has no elements");
    if (elements_.size() != labels_.size()) throw DimensionMismatch("POVM needs one label per element");
    require_distinct(labels_);
    dim_ = static_cast<int>(elements_.front().rows());
    ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
    for (const auto &e : elements_) {
        require_square(e, "POVM element");
        require_dims(static_cast<int>(e.rows()), dim_, "POVM elements");
        if (max_abs(e - e.adjoint()) > kHermitianTol) throw InvalidArgument("POVM element is not Hermitian");
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(e), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPsdTol) throw InvalidState("POVM element is not positive semidefinite");
        sum += e;
    }
    const double dev = max_abs(sum - ComplexMatrix::Identity(dim_, dim_));
    if (dev > kCompletenessTol) throw InvalidArgument("POVM elements do not sum to identity (deviation " + std::to_string(dev) + ")");
}

Povm Povm::from_basis(const OrthonormalBasis &basis) {
    std::vector<ComplexMatrix> elements;
    elements.reserve(static_cast<std::size_t>(basis.dim()));
    for (int i = 0; i < basis.dim(); ++i) {
        const ComplexVector v = basis.vector(i);
        elements.push_back(v * v.adjoint());
    }
    return Povm(std::move(elements), std::vector<double>(basis.labels().begin(), basis.labels().end()));
}

double von_neumann_entropy(const DensityMatrix &rho) { return entropy_of_spectrum(clamp_spectrum(rho.eigenvalues(), "state")); }

double quantum_relative_entropy(const DensityMatrix &rho, const DensityMatrix &sigma) {
    require_dims(rho.dim(), sigma.dim(), "relative entropy arguments");
    constexpr double kSupportTol = 1e-12;
    double tr_rho_log_rho = -entropy_of_spectrum(rho.eigenvalues());
    double tr_rho_log_sigma = 0.0;
    const ComplexMatrix &v = sigma.eigenvectors();
    const ComplexMatrix rotated = v.adjoint() * rho.matrix() * v;
    for (int j = 0; j < sigma.dim(); ++j) {
        const double mu = sigma.eigenvalues()(j);
        const double w = rotated(j, j).real();
        if (w <= kSupportTol) continue;
        if (mu <= kSupportTol) return kInfinity;
        tr_rho_log_sigma += w * std::log(mu);
    }
    return tr_rho_log_rho - tr_rho_log_sigma;
}

DiscreteDistribution measure_projective(const DensityMatrix &rho, const OrthonormalBasis &basis) {
    auto p = basis_probabilities(rho, basis);
    return DiscreteDistribution::from_weights(std::vector<double>(basis.labels().begin(), basis.labels().end()), std::move(p));
}

DiscreteDistribution measure_povm(const DensityMatrix &rho, const Povm &povm) {
    require_dims(rho.dim(), povm.dim(), "state and POVM");
    std::vector<double> p;
    p.reserve(povm.size());
    for (const auto &e : povm.elements()) p.push_back((e * rho.matrix()).trace().real());
    return DiscreteDistribution::from_weights(std::vector<double>(povm.labels().begin(), povm.labels().end()), std::move(p));
}

DensityMatrix measured_state(const DensityMatrix &rho, const OrthonormalBasis &basis) {
    auto p = basis_probabilities(rho, basis);
    for (auto &x : p)
        if (x < 0.0) x = 0.0;
    return DensityMatrix::diagonal_in(basis, p);
}

double max_overlap(const OrthonormalBasis &a, const OrthonormalBasis &b) {
    require_dims(a.dim(), b.dim(), "bases");
    return (a.vectors().adjoint() * b.vectors()).cwiseAbs2().maxCoeff();
}

ComplexMatrix psd_sqrt(const ComplexMatrix &m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
    const Eigen::VectorXd vals = clamp_spectrum(es.eigenvalues(), "operator").cwiseSqrt();
    return es.eigenvectors() * vals.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
}

double max_overlap(const Povm &a, const Povm &b) {
    require_dims(a.dim(), b.dim(), "POVMs");
    std::vector<ComplexMatrix> roots_b;
    roots_b.reserve(b.size());
    for (const auto &g : b.elements()) roots_b.push_back(psd_sqrt(g));
    double c = 0.0;
    for (const auto &l : a.elements()) {
        const ComplexMatrix root_l = psd_sqrt(l);
        for (const auto &root_g : roots_b) {
            Eigen::JacobiSVD<ComplexMatrix> svd(root_l * root_g);
            const double s = svd.singularValues()(0);
            c = std::max(c, s * s);
        }
    }
    return c;
}

DensityMatrix thermal_state(const ComplexMatrix &hamiltonian, double beta) {
    require_square(hamiltonian, "Hamiltonian");
    if (max_abs(hamiltonian - hamiltonian.adjoint()) > kHermitianTol) throw InvalidArgument("Hamiltonian is not Hermitian");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("inverse temperature must be finite and non-negative");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(hamiltonian));
    const Eigen::VectorXd &e = es.eigenvalues();
    Eigen::VectorXd w = (-beta * (e.array() - e.minCoeff())).exp();
    w /= w.sum();
    const ComplexMatrix m = es.eigenvectors() * w.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
    return DensityMatrix(hermitian_part(m));
}

DensityMatrix random_density_matrix(int dim, int rank, std::uint64_t seed) {
    if (dim < 1) throw InvalidArgument("dimension must be positive");
    if (rank < 1 || rank > dim) throw InvalidArgument("rank must lie in [1, dim]");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    ComplexMatrix g(dim, rank);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < rank; ++j) g(i, j) = Complex(normal(rng), normal(rng));
    ComplexMatrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrix(hermitian_part(m));
}

} // namespace reur
