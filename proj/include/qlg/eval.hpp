// Fréchet Distance between real and generated sample sets:
// FD = ||mu_r - mu_g||^2 + Tr(Sigma_r + Sigma_g - 2 (Sigma_r Sigma_g)^{1/2}),
// computed on Gaussians fitted to the two sets, with an
// eigendecomposition-based PSD matrix square root evaluated on the symmetric
// form sqrt(Sigma_r) Sigma_g sqrt(Sigma_r).

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qlg/errors.hpp"

namespace qlg {

struct GaussianStats {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;  // symmetric, ridge-regularized

    Eigen::Index dim() const { return mu.size(); }
};

inline constexpr double kCovarianceRidge = 1e-6;

// Column means and unbiased covariance (divisor n-1) of n x d row-major
// samples, plus a ridge term lambda*I that keeps near-singular covariances
// (few hundred samples in 784-D) numerically tractable.
inline GaussianStats fit_gaussian(const std::vector<double>& samples, std::size_t n,
                                  std::size_t d) {
    if (n < 2) throw SampleSizeError("fit_gaussian: need at least 2 samples");
    if (d < 1 || samples.size() != n * d) throw ShapeError("fit_gaussian: bad sample matrix");

    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(
        samples.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));

    GaussianStats s;
    s.mu = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - s.mu.transpose();
    s.sigma = (centered.adjoint() * centered) / static_cast<double>(n - 1);
    s.sigma = 0.5 * (s.sigma + s.sigma.transpose());  // exact symmetry
    s.sigma.diagonal().array() += kCovarianceRidge;
    return s;
}

// Square root of a symmetric PSD matrix; eigenvalues below zero (floating-
// point noise) are clamped to zero.
inline Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw ShapeError("sqrtm_psd: matrix must be square");
    if (!a.allFinite()) throw DomainError("sqrtm_psd: non-finite entries");

    const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) throw DomainError("sqrtm_psd: eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = ev[i] > 0.0 ? std::sqrt(ev[i]) : 0.0;
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

inline double frechet_distance(const GaussianStats& real, const GaussianStats& gen) {
    if (real.dim() != gen.dim()) throw ShapeError("frechet_distance: dimension mismatch");

    const double mean_term = (real.mu - gen.mu).squaredNorm();

    // Tr((Sigma_r Sigma_g)^{1/2}) via the symmetric equivalent
    // sqrt(Sigma_r) Sigma_g sqrt(Sigma_r), which keeps the eigenproblem
    // self-adjoint.
    const Eigen::MatrixXd sqrt_r = sqrtm_psd(real.sigma);
    const Eigen::MatrixXd inner = sqrt_r * gen.sigma * sqrt_r;
    const double tr_cross = sqrtm_psd(inner).trace();

    const double fd = mean_term + real.sigma.trace() + gen.sigma.trace() - 2.0 * tr_cross;
    return fd > 0.0 ? fd : 0.0;
}

struct FdReport {
    std::size_t n_real = 0;
    std::size_t n_gen = 0;
    double fd = 0.0;
};

// Pixel-space FD: flattens 28x28 images to 784 features. Inputs are flat
// row-major pixel buffers of n*784 values each.
inline FdReport fd_pixels(const std::vector<double>& real_pixels, std::size_t n_real,
                          const std::vector<double>& gen_pixels, std::size_t n_gen,
                          std::size_t pixels_per_image = 784) {
    if (n_real == 0 || n_gen == 0) throw SampleSizeError("fd_pixels: empty sample set");
    const GaussianStats r = fit_gaussian(real_pixels, n_real, pixels_per_image);
    const GaussianStats g = fit_gaussian(gen_pixels, n_gen, pixels_per_image);
    return FdReport{n_real, n_gen, frechet_distance(r, g)};
}

}  // namespace qlg
