#include "nhse/topology.hpp"

#include "nhse/format.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace nhse {

namespace {

constexpr double kMaxArgStep = 0.5;
constexpr int kMaxRefineDepth = 30;

struct ArgAccumulator {
    const SymbolSpec& spec;
    std::complex<double> lambda;
    double min_dist = INFINITY;

    std::complex<double> at(double theta) {
        const auto z = symbol_eval(spec, theta) - lambda;
        min_dist = std::min(min_dist, std::abs(z));
        return z;
    }

    // Argument change of f - lambda over [t0, t1], refining where the curve
    // turns quickly around lambda.
    double sweep(double t0, double t1, std::complex<double> z0, std::complex<double> z1, int depth) {
        const double step = std::arg(z1 / z0);
        if (std::abs(step) <= kMaxArgStep || depth >= kMaxRefineDepth) return step;
        const double tm = 0.5 * (t0 + t1);
        const auto zm = at(tm);
        return sweep(t0, tm, z0, zm, depth + 1) + sweep(tm, t1, zm, z1, depth + 1);
    }
};

} // namespace

void SymbolSpec::validate() const {
    if (!(eta * beta > 0.0)) throw std::invalid_argument("symbol needs eta*beta > 0");
    if (samples < 64) throw std::invalid_argument("symbol needs at least 64 samples");
    if (!std::isfinite(alpha)) throw std::invalid_argument("symbol alpha must be finite");
}

SymbolSpec symbol_of(const ToeplitzParams& params, std::size_t samples) {
    SymbolSpec s{params.alpha, params.eta, params.beta, samples};
    s.validate();
    return s;
}

std::complex<double> symbol_eval(const SymbolSpec& spec, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {spec.alpha + (spec.eta + spec.beta) * c, (spec.eta - spec.beta) * s};
}

double default_boundary_tol(const SymbolSpec& spec) {
    return 1e-8 * (std::abs(spec.alpha) + std::abs(spec.eta) + std::abs(spec.beta));
}

WindingResult winding_number(const SymbolSpec& spec, std::complex<double> lambda,
                             double boundary_tol) {
    spec.validate();
    if (!(boundary_tol > 0.0)) throw std::invalid_argument("boundary tolerance must be positive");
    ArgAccumulator acc{spec, lambda};
    const double two_pi = 2.0 * std::numbers::pi;
    const double m = static_cast<double>(spec.samples);
    double total = 0.0;
    auto z_prev = acc.at(0.0);
    for (std::size_t i = 1; i <= spec.samples; ++i) {
        const double t0 = two_pi * static_cast<double>(i - 1) / m;
        const double t1 = two_pi * static_cast<double>(i) / m;
        const auto z = i == spec.samples ? acc.at(0.0) : acc.at(t1);
        if (acc.min_dist < boundary_tol) break;
        total += acc.sweep(t0, t1, z_prev, z, 0);
        z_prev = z;
    }
    WindingResult r;
    r.min_curve_distance = acc.min_dist;
    if (acc.min_dist < boundary_tol) {
        r.boundary = true;
        return r;
    }
    const double w = total / two_pi;
    const double rounded = std::round(w);
    r.winding = static_cast<int>(rounded);
    r.boundary = std::abs(w - rounded) > 1e-3;
    return r;
}

WindingResult winding_number(const SymbolSpec& spec, std::complex<double> lambda) {
    return winding_number(spec, lambda, default_boundary_tol(spec));
}

ProtectedInterval protected_interval(const SymbolSpec& spec) {
    spec.validate();
    if (std::abs(spec.eta) == std::abs(spec.beta))
        throw std::invalid_argument("degenerate symbol: |eta| = |beta| encloses no region");
    const double half = std::abs(spec.eta + spec.beta);
    return {spec.alpha - half, spec.alpha + half, std::abs(spec.eta) < std::abs(spec.beta) ? -1 : 1};
}

double protected_fraction(std::span<const double> eigs, const SymbolSpec& spec,
                          double boundary_tol) {
    if (eigs.empty()) return 0.0;
    std::size_t count = 0;
    for (double lambda : eigs) {
        const auto w = winding_number(spec, lambda, boundary_tol);
        if (!w.boundary && w.winding != 0) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(eigs.size());
}

double protected_fraction(std::span<const double> eigs, const SymbolSpec& spec) {
    return protected_fraction(eigs, spec, default_boundary_tol(spec));
}

void write_symbol_csv(std::ostream& out, const SymbolSpec& spec) {
    spec.validate();
    out << "theta,re,im\n";
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i <= spec.samples; ++i) {
        const double theta = two_pi * static_cast<double>(i) / static_cast<double>(spec.samples);
        const auto z = symbol_eval(spec, theta);
        out << format_double(theta) << ',' << format_double(z.real()) << ','
            << format_double(z.imag()) << '\n';
    }
}

} // namespace nhse
