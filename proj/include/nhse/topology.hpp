#pragma once

#include "nhse/capmat.hpp"

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>

namespace nhse {

/// Symbol f(theta) = alpha + eta e^{i theta} + beta e^{-i theta} of the
/// Toeplitz operator with subdiagonal eta and superdiagonal beta.
struct SymbolSpec {
    double alpha = 0.0;
    double eta = 0.0;
    double beta = 0.0;
    std::size_t samples = 4096;

    void validate() const;
};

SymbolSpec symbol_of(const ToeplitzParams& params, std::size_t samples = 4096);

std::complex<double> symbol_eval(const SymbolSpec& spec, double theta);

struct WindingResult {
    int winding = 0;
    bool boundary = false; // lambda on (or numerically too close to) the curve
    double min_curve_distance = 0.0;
};

/// 1e-8 * (|alpha| + |eta| + |beta|)
double default_boundary_tol(const SymbolSpec& spec);

WindingResult winding_number(const SymbolSpec& spec, std::complex<double> lambda,
                             double boundary_tol);
WindingResult winding_number(const SymbolSpec& spec, std::complex<double> lambda);

/// Real points enclosed by the symbol ellipse and their winding number
/// (-1 when |eta| < |beta|, +1 when |eta| > |beta|).
struct ProtectedInterval {
    double lo = 0.0;
    double hi = 0.0;
    int winding = 0;
};

/// Throws std::invalid_argument when |eta| = |beta|.
ProtectedInterval protected_interval(const SymbolSpec& spec);

/// Share of eigenvalues with nonzero, non-boundary winding. Empty input gives 0.
double protected_fraction(std::span<const double> eigs, const SymbolSpec& spec,
                          double boundary_tol);
double protected_fraction(std::span<const double> eigs, const SymbolSpec& spec);

/// `theta,re,im` over samples + 1 equally spaced angles in [0, 2 pi].
void write_symbol_csv(std::ostream& out, const SymbolSpec& spec);

} // namespace nhse
