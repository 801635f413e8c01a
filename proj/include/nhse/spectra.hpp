#pragma once

#include "nhse/capmat.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace nhse {

/// Eigenpairs sorted by ascending eigenvalue. Eigenvectors have unit 2-norm
/// and their first non-negligible component positive; residuals[k] is
/// ||T v_k - lambda_k v_k||_2.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> eigenvectors;
    std::vector<double> residuals;

    std::size_t size() const noexcept { return eigenvalues.size(); }
};

/// Diagonal similarity S D with D = diag(scale), S = diag(signature) such
/// that (SD)^{-1} T (SD) is the symmetric tridiagonal matrix with diagonal
/// sym_diag and off-diagonal sym_off = sqrt(sub_i * sup_i) > 0.
///
/// Scales decay or grow geometrically along strongly non-reciprocal chains,
/// so log_scale is kept alongside and used for all conversions; `scale` is
/// its exponential and may underflow to 0 for extreme parameters.
struct Symmetrization {
    std::vector<double> sym_diag;
    std::vector<double> sym_off;
    std::vector<double> scale;
    std::vector<double> log_scale;
    std::vector<double> signature; // +1 / -1

    std::size_t size() const noexcept { return sym_diag.size(); }
    /// Unit-norm y with x proportional to S D y.
    std::vector<double> to_symmetric(std::span<const double> x) const;
    /// Unit-norm x proportional to S D y.
    std::vector<double> from_symmetric(std::span<const double> y) const;
};

/// Closed-form eigenpairs of T_n^{(eta, beta)} with eta + alpha + beta = 0.
/// Eigenvalue 0 has the constant eigenvector; the others are
/// lambda_k = alpha + 2 sqrt(eta beta) cos(pi (k-1) / n), k = 2..n.
SpectralDecomposition closed_form_spectrum(const ToeplitzParams& params, std::size_t n);

/// Unnormalised eigenvector of lambda_k (k = 2..n, 1-based):
/// x^{(j)} = (eta/beta)^{(j-1)/2} (eta sin(j t) - eta sqrt(eta/beta) sin((j-1) t))
/// with t = pi (k-1) / n for eta > 0 and t = pi - pi (k-1) / n for eta < 0.
std::vector<double> closed_form_eigenvector(const ToeplitzParams& params, std::size_t n,
                                            std::size_t k);
double closed_form_eigenvalue(const ToeplitzParams& params, std::size_t n, std::size_t k);

/// Throws NotSymmetrizable naming the first index with sub_i * sup_i <= 0.
Symmetrization symmetrize(const TriMatrix& t);

/// Number of eigenvalues strictly below x of the symmetric tridiagonal
/// matrix (diag, off), from the signs of the LDL^T pivots.
std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double x);

/// All eigenvalues, ascending, each bracketed to width <= tol by bisection.
std::vector<double> symmetric_tridiagonal_eigenvalues(std::span<const double> diag,
                                                      std::span<const double> off, double tol);
std::vector<double> eigenvalues_sturm(const Symmetrization& sym, double tol);

/// Gershgorin interval [lo, hi] of a symmetric tridiagonal matrix.
std::pair<double, double> gershgorin_interval(std::span<const double> diag,
                                              std::span<const double> off);

struct InverseIterationResult {
    std::vector<double> vector; // unit norm, sign-fixed
    double eigenvalue = 0.0;    // shift plus the converged correction
    double residual = 0.0;      // ||T v - eigenvalue v||_2
    int iterations = 0;
};

/// Inverse iteration with partial-pivoting tridiagonal solves on T - lambda I,
/// starting from a seeded random vector. Members of the same eigenvalue
/// cluster (already computed) are projected out in symmetrized coordinates,
/// which requires `sym`. Throws NoConvergence after 10 iterations or when the
/// converged eigenvalue is further than 1e-6 * max|T_ij| from lambda.
InverseIterationResult eigenvector_inverse_iteration(
    const TriMatrix& t, double lambda, std::uint64_t seed, const Symmetrization* sym = nullptr,
    std::span<const std::vector<double>> cluster = {});

SpectralDecomposition full_spectrum(const TriMatrix& t);

/// ||T||_2 of a symmetric tridiagonal matrix (sub == sup within 1e-12).
double spectral_norm(const TriMatrix& t);

/// Residual target used by the solver: 1e-9 * max|T_ij| * n.
double residual_tolerance(const TriMatrix& t);

/// Unit 2-norm, first component with |v_i| > 1e-12 ||v||_inf made positive.
void canonicalize(std::vector<double>& v);

/// `k,lambda,residual` with k starting at 1.
void write_spectrum_csv(std::ostream& out, const SpectralDecomposition& d);
/// Wide eigenvector table `k,v1..vn`.
void write_eigenvector_csv(std::ostream& out, const SpectralDecomposition& d);

} // namespace nhse
