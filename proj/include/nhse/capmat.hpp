#pragma once

#include "nhse/chain.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace nhse {

/// Real tridiagonal matrix. `sub[i]` is entry (i+1, i), `sup[i]` is entry (i, i+1).
struct TriMatrix {
    std::vector<double> diag;
    std::vector<double> sub;
    std::vector<double> sup;

    std::size_t size() const noexcept { return diag.size(); }
    void validate() const;
    double max_abs_entry() const;
    /// y = T x
    std::vector<double> apply(std::span<const double> x) const;
    /// max_i |sum_j T_ij|
    double max_row_sum() const;

    friend bool operator==(const TriMatrix&, const TriMatrix&) = default;
};

/// Tridiagonal Toeplitz matrix with corner corrections: diag = [alpha+a,
/// alpha, ..., alpha, alpha+b], sub = eta, sup = beta, eta*beta > 0.
struct ToeplitzParams {
    double alpha = 0.0;
    double eta = 0.0;
    double beta = 0.0;
    double a = 0.0;
    double b = 0.0;

    void validate() const;
};

/// Row i uses the gauge potential gamma_i and its two adjacent gaps; the
/// missing gap term is dropped at the ends. Every row sums to zero.
/// Throws std::overflow_error when |gamma_i * ell| >= 710.
TriMatrix gauge_capacitance(const ChainConfig& chain);

/// Parameters of the unperturbed uniform chain (a = eta, b = beta).
ToeplitzParams uniform_chain_params(double ell, double s, double gamma);

TriMatrix corner_toeplitz(const ToeplitzParams& params, std::size_t n);

struct PerturbedMatrix {
    TriMatrix matrix;
    double effective_eps = 0.0; // realised max |shift|
    bool sign_warning = false;  // eps >= min(|sub_i|, |sup_i|)
};

/// Shifts every nonzero-pattern entry by an independent U[-eps, eps] draw.
PerturbedMatrix entrywise_perturb(const TriMatrix& t, double eps, std::uint64_t seed);

struct ToeplitzMismatch {
    std::string field; // "diag", "sub", "sup" or "eta*beta"
    std::size_t index = 0;
    double value = 0.0;
    double reference = 0.0;
    std::string message() const;
};

/// Recovers (alpha, eta, beta, a, b) when the interior diagonal and both
/// off-diagonals are constant within `tol`. Requires n >= 3.
std::variant<ToeplitzParams, ToeplitzMismatch> toeplitz_params_of(const TriMatrix& t, double tol);

/// max |A_ij - B_ij| over the tridiagonal pattern.
double max_entry_deviation(const TriMatrix& a, const TriMatrix& b);

/// Three rows `sub`, `diag`, `sup`; the shorter rows are left-padded with one
/// empty field.
void write_csv(std::ostream& out, const TriMatrix& t);

/// Structured text: {"n": ..., "diag": [...], "sub": [...], "sup": [...]}.
std::string to_text(const TriMatrix& t);
TriMatrix tri_matrix_from_text(const std::string& text);

} // namespace nhse
