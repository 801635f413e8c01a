#include "nhse/chain.hpp"

#include "nhse/format.hpp"
#include "nhse/random.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nhse {

void ChainConfig::validate() const {
    const std::size_t n = gammas.size();
    if (n < 2) throw std::invalid_argument("chain needs at least 2 resonators");
    if (!(ell > 0.0) || !std::isfinite(ell))
        throw std::invalid_argument("resonator length must be positive");
    if (spacings.size() != n - 1)
        throw std::invalid_argument("chain with " + std::to_string(n) + " resonators needs " +
                                    std::to_string(n - 1) + " spacings, got " +
                                    std::to_string(spacings.size()));
    for (std::size_t i = 0; i < spacings.size(); ++i) {
        if (!(spacings[i] > 0.0) || !std::isfinite(spacings[i]))
            throw std::invalid_argument("spacing " + std::to_string(i) +
                                        " must be positive (resonators overlap)");
    }
    for (double g : gammas) {
        if (!std::isfinite(g)) throw std::invalid_argument("gauge potential must be finite");
    }
    if (!(v_b > 0.0)) throw std::invalid_argument("wave speed v_b must be positive");
    if (!(delta > 0.0)) throw std::invalid_argument("contrast delta must be positive");
}

std::vector<double> ChainConfig::left_endpoints() const {
    std::vector<double> x(gammas.size());
    double pos = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = pos;
        if (i < spacings.size()) pos += ell + spacings[i];
    }
    return x;
}

ChainConfig make_uniform_chain(std::size_t n, double ell, double s, double gamma) {
    if (n < 2) throw std::invalid_argument("chain needs at least 2 resonators");
    if (!(ell > 0.0)) throw std::invalid_argument("resonator length must be positive");
    if (!(s > 0.0)) throw std::invalid_argument("spacing must be positive");
    ChainConfig chain;
    chain.ell = ell;
    chain.spacings.assign(n - 1, s);
    chain.gammas.assign(n, gamma);
    return chain;
}

ChainConfig apply_spacing_disorder(const ChainConfig& chain, double eps, std::uint64_t seed) {
    chain.validate();
    if (!(eps >= 0.0)) throw std::invalid_argument("disorder strength must be >= 0");
    const double min_gap = *std::min_element(chain.spacings.begin(), chain.spacings.end());
    if (eps >= min_gap)
        throw std::invalid_argument("spacing disorder " + format_double(eps) +
                                    " would allow overlapping resonators (min gap " +
                                    format_double(min_gap) + ")");
    ChainConfig out = chain;
    if (eps == 0.0) return out;
    const CounterRng rng(derive_seed(seed, StreamTag::spacing, 0));
    for (std::size_t i = 0; i < out.spacings.size(); ++i)
        out.spacings[i] += rng.symmetric(i, eps);
    return out;
}

ChainConfig apply_gauge_disorder(const ChainConfig& chain, double eps, std::uint64_t seed) {
    chain.validate();
    if (!(eps >= 0.0)) throw std::invalid_argument("disorder strength must be >= 0");
    ChainConfig out = chain;
    if (eps == 0.0) return out;
    const CounterRng rng(derive_seed(seed, StreamTag::gauge, 0));
    for (std::size_t i = 0; i < out.gammas.size(); ++i)
        out.gammas[i] += rng.symmetric(i, eps);
    return out;
}

double subwavelength_frequency(double lambda, double v_b, double delta) {
    if (!(lambda >= 0.0))
        throw std::invalid_argument("eigenvalue must be nonnegative, got " + format_double(lambda));
    if (!(v_b > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("v_b and delta must be positive");
    return v_b * std::sqrt(delta * lambda);
}

ModeProfile mode_profile(const ChainConfig& chain, std::span<const double> coeffs,
                         std::size_t samples_per_segment) {
    chain.validate();
    const std::size_t n = chain.size();
    if (coeffs.size() != n)
        throw std::invalid_argument("expected " + std::to_string(n) + " coefficients, got " +
                                    std::to_string(coeffs.size()));
    if (samples_per_segment == 0)
        throw std::invalid_argument("samples_per_segment must be positive");

    const auto left = chain.left_endpoints();
    const double m = static_cast<double>(samples_per_segment);
    ModeProfile p;
    p.grid.reserve((2 * n + 1) * samples_per_segment + 1);
    p.values.reserve(p.grid.capacity());

    // Segment [x0, x1] on which u goes affinely from u0 to u1; sampled
    // left-closed so the grid stays strictly increasing.
    auto segment = [&](double x0, double x1, double u0, double u1) {
        for (std::size_t k = 0; k < samples_per_segment; ++k) {
            const double t = static_cast<double>(k) / m;
            p.grid.push_back(x0 + t * (x1 - x0));
            p.values.push_back(u0 + t * (u1 - u0));
        }
    };

    const double right_end = left[n - 1] + chain.ell;
    segment(-chain.spacings.front(), 0.0, coeffs[0], coeffs[0]);
    for (std::size_t i = 0; i < n; ++i) {
        segment(left[i], left[i] + chain.ell, coeffs[i], coeffs[i]);
        if (i + 1 < n) segment(left[i] + chain.ell, left[i + 1], coeffs[i], coeffs[i + 1]);
    }
    segment(right_end, right_end + chain.spacings.back(), coeffs[n - 1], coeffs[n - 1]);
    p.grid.push_back(right_end + chain.spacings.back());
    p.values.push_back(coeffs[n - 1]);
    return p;
}

void write_csv(std::ostream& out, const ModeProfile& profile) {
    out << "x,u\n";
    for (std::size_t i = 0; i < profile.grid.size(); ++i)
        out << format_double(profile.grid[i]) << ',' << format_double(profile.values[i]) << '\n';
}

} // namespace nhse
