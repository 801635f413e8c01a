#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace nhse {

/// A 1D chain of N identical resonators of length `ell`, separated by gaps
/// `spacings[i]` (between resonator i and i+1), each carrying its own gauge
/// potential `gammas[i]`. Coordinates start at x_1^L = 0.
struct ChainConfig {
    double ell = 1.0;
    std::vector<double> spacings;
    std::vector<double> gammas;
    double v_b = 1.0;    // wave speed inside the resonators
    double delta = 1e-3; // density contrast

    std::size_t size() const noexcept { return gammas.size(); }

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;

    /// x_i^L for every resonator.
    std::vector<double> left_endpoints() const;
};

/// Sampled spatial profile u(x).
struct ModeProfile {
    std::vector<double> grid;
    std::vector<double> values;
};

ChainConfig make_uniform_chain(std::size_t n, double ell, double s, double gamma);

/// Each gap independently shifted by U[-eps, eps]. Requires eps < min gap.
ChainConfig apply_spacing_disorder(const ChainConfig& chain, double eps, std::uint64_t seed);

/// Each gauge potential independently shifted by U[-eps, eps]; sign changes allowed.
ChainConfig apply_gauge_disorder(const ChainConfig& chain, double eps, std::uint64_t seed);

/// Leading-order subwavelength resonance v_b * sqrt(delta * lambda).
double subwavelength_frequency(double lambda, double v_b, double delta);

/// u(x) = sum_j coeffs[j] V_j(x), where V_j is the bounded harmonic function
/// equal to 1 on resonator j and 0 on the others: affine across each gap and
/// constant on the two exterior half-lines. Samples cover
/// [x_1^L - s_1, x_N^R + s_{N-1}], `samples_per_segment` per segment.
ModeProfile mode_profile(const ChainConfig& chain, std::span<const double> coeffs,
                         std::size_t samples_per_segment);

/// CSV with header `x,u`.
void write_csv(std::ostream& out, const ModeProfile& profile);

} // namespace nhse
