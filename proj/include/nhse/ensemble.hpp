#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nhse {

enum class PerturbationKind { spacing, gauge, entrywise, combined };

std::string_view to_string(PerturbationKind kind);
/// Throws ConfigError on an unknown name.
PerturbationKind parse_perturbation_kind(std::string_view name);

struct ExperimentConfig {
    std::size_t n = 50;
    double ell = 1.0;
    double s = 1.0;
    double gamma = 1.0;
    PerturbationKind kind = PerturbationKind::spacing;
    double eps_s = 0.0;
    double eps_gamma = 0.0;
    double eps = 0.0;
    std::size_t trials = 100;
    std::uint64_t master_seed = 1;
    std::size_t edge_sites = 2;
    std::size_t threads = 0; // 0: one per hardware thread

    /// Throws ConfigError.
    void validate() const;
};

struct TrialMetrics {
    std::size_t trial = 0;
    double protected_fraction = 0.0;
    double edge_fraction = 0.0;
    double both_fraction = 0.0;
    std::vector<double> localisation_ratios; // per eigenvector, eigenvalue order
    std::vector<double> decay_rates;         // NaN where the fit is degenerate
    double lambda1_abs = 0.0;
    bool failed = false;
    std::string reason;
};

struct MetricStats {
    double mean = 0.0;
    double std = 0.0; // sample standard deviation, 0 for a single trial
};

struct EnsembleSummary {
    ExperimentConfig config;
    MetricStats protected_fraction;
    MetricStats edge_fraction;
    MetricStats both_fraction;
    MetricStats lambda1_abs;
    /// Mean over successful trials of the ascending-sorted localisation ratios.
    std::vector<double> localisation_profile;
    std::size_t failed = 0;
    std::vector<TrialMetrics> trials;

    std::size_t succeeded() const noexcept { return trials.size() - failed; }
};

/// ||v||_inf / ||v||_2. Throws std::invalid_argument on a zero vector.
double localisation_ratio(std::span<const double> v);

/// The first index attaining max |v_j| is within the first edge_sites sites.
/// Entries within a relative 1e-9 of the maximum count as ties.
bool edge_accumulated(std::span<const double> v, std::size_t edge_sites);

TrialMetrics run_trial(const ExperimentConfig& config, std::size_t trial_index);

/// Trials run in parallel; results are stored and reduced in trial order.
EnsembleSummary run_ensemble(const ExperimentConfig& config);

/// "name:lo:hi:count" with name in {eps_s, eps_gamma, eps, gamma, s}.
struct AxisSpec {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 1;

    std::vector<double> values() const;
};

/// Throws ConfigError.
AxisSpec parse_axis(std::string_view text);
/// Throws ConfigError on an unknown axis name.
void apply_axis(ExperimentConfig& config, std::string_view name, double value);

struct SweepCell {
    double value1 = 0.0;
    double value2 = 0.0;
    double mean_protected = 0.0; // NaN for invalid cells
    double mean_edge = 0.0;
    double mean_both = 0.0;
    std::size_t trials_ok = 0;
    bool valid = true;
    std::string reason;
};

struct SweepResult {
    AxisSpec axis1;
    std::optional<AxisSpec> axis2;
    /// Row-major: cell (i, j) at i * cols() + j, i indexing axis1.
    std::vector<SweepCell> cells;

    std::size_t rows() const noexcept { return axis1.count; }
    std::size_t cols() const noexcept { return axis2 ? axis2->count : 1; }
};

SweepResult sweep_phase_diagram(const ExperimentConfig& base, const AxisSpec& axis1,
                                const std::optional<AxisSpec>& axis2);

} // namespace nhse
