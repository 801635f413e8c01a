#include "nhse/ensemble.hpp"

#include "nhse/capmat.hpp"
#include "nhse/chain.hpp"
#include "nhse/errors.hpp"
#include "nhse/format.hpp"
#include "nhse/random.hpp"
#include "nhse/spectra.hpp"
#include "nhse/stability.hpp"
#include "nhse/topology.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace nhse {

std::string_view to_string(PerturbationKind kind) {
    switch (kind) {
    case PerturbationKind::spacing: return "spacing";
    case PerturbationKind::gauge: return "gauge";
    case PerturbationKind::entrywise: return "entrywise";
    case PerturbationKind::combined: return "combined";
    }
    return "unknown";
}

PerturbationKind parse_perturbation_kind(std::string_view name) {
    if (name == "spacing") return PerturbationKind::spacing;
    if (name == "gauge") return PerturbationKind::gauge;
    if (name == "entrywise") return PerturbationKind::entrywise;
    if (name == "combined") return PerturbationKind::combined;
    throw ConfigError("unknown perturbation kind '" + std::string(name) +
                      "' (expected spacing, gauge, entrywise or combined)");
}

void ExperimentConfig::validate() const {
    if (n < 2) throw ConfigError("n must be at least 2");
    if (!(ell > 0.0) || !std::isfinite(ell)) throw ConfigError("ell must be positive");
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("s must be positive");
    if (!std::isfinite(gamma)) throw ConfigError("gamma must be finite");
    if (!(eps_s >= 0.0) || !(eps_gamma >= 0.0) || !(eps >= 0.0))
        throw ConfigError("perturbation strengths must be >= 0");
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (edge_sites < 1 || edge_sites > n)
        throw ConfigError("edge_sites must lie in [1, n]");
    const bool spacing = kind == PerturbationKind::spacing || kind == PerturbationKind::combined;
    if (spacing && !(eps_s < s))
        throw ConfigError("eps_s = " + format_double(eps_s) +
                          " must be below the spacing s = " + format_double(s) +
                          " so resonators cannot overlap");
    const double worst_gamma =
        std::abs(gamma) + (kind == PerturbationKind::gauge || kind == PerturbationKind::combined
                               ? eps_gamma
                               : 0.0);
    if (!(worst_gamma * ell < 710.0))
        throw ConfigError("|gamma| * ell must stay below 710");
}

double localisation_ratio(std::span<const double> v) {
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    if (vmax == 0.0) throw std::invalid_argument("localisation ratio of a zero vector");
    double acc = 0.0;
    for (double x : v) {
        const double r = x / vmax;
        acc += r * r;
    }
    return 1.0 / std::sqrt(acc);
}

bool edge_accumulated(std::span<const double> v, std::size_t edge_sites) {
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    const double threshold = (1.0 - 1e-9) * vmax;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (std::abs(v[j]) >= threshold) return j < edge_sites;
    }
    return false;
}

namespace {

TriMatrix build_trial_matrix(const ExperimentConfig& config, std::uint64_t seed) {
    const ChainConfig base = make_uniform_chain(config.n, config.ell, config.s, config.gamma);
    switch (config.kind) {
    case PerturbationKind::spacing:
        return gauge_capacitance(apply_spacing_disorder(base, config.eps_s, seed));
    case PerturbationKind::gauge:
        return gauge_capacitance(apply_gauge_disorder(base, config.eps_gamma, seed));
    case PerturbationKind::combined:
        return gauge_capacitance(
            apply_gauge_disorder(apply_spacing_disorder(base, config.eps_s, seed),
                                 config.eps_gamma, seed));
    case PerturbationKind::entrywise:
        return entrywise_perturb(gauge_capacitance(base), config.eps, seed).matrix;
    }
    throw std::logic_error("unhandled perturbation kind");
}

} // namespace

TrialMetrics run_trial(const ExperimentConfig& config, std::size_t trial_index) {
    TrialMetrics m;
    m.trial = trial_index;
    try {
        const std::uint64_t seed = derive_seed(config.master_seed, StreamTag::trial, trial_index);
        const TriMatrix t = build_trial_matrix(config, seed);
        const SpectralDecomposition d = full_spectrum(t);
        const SymbolSpec symbol = symbol_of(uniform_chain_params(config.ell, config.s, config.gamma));
        const double tol = default_boundary_tol(symbol);

        const std::size_t n = d.size();
        std::size_t prot = 0, edge = 0, both = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto w = winding_number(symbol, d.eigenvalues[k], tol);
            const bool p = !w.boundary && w.winding != 0;
            const bool e = edge_accumulated(d.eigenvectors[k], config.edge_sites);
            prot += p;
            edge += e;
            both += p && e;
            m.localisation_ratios.push_back(localisation_ratio(d.eigenvectors[k]));
            try {
                m.decay_rates.push_back(fit_decay_rate(d.eigenvectors[k]));
            } catch (const DegenerateFit&) {
                m.decay_rates.push_back(std::numeric_limits<double>::quiet_NaN());
            }
        }
        const double nd = static_cast<double>(n);
        m.protected_fraction = static_cast<double>(prot) / nd;
        m.edge_fraction = static_cast<double>(edge) / nd;
        m.both_fraction = static_cast<double>(both) / nd;
        m.lambda1_abs = std::abs(d.eigenvalues.front());
    } catch (const std::exception& ex) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        m = TrialMetrics{};
        m.trial = trial_index;
        m.protected_fraction = m.edge_fraction = m.both_fraction = m.lambda1_abs = nan;
        m.failed = true;
        m.reason = ex.what();
    }
    return m;
}

namespace {

MetricStats stats_of(const std::vector<TrialMetrics>& trials, double TrialMetrics::*field) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& t : trials) {
        if (t.failed) continue;
        sum += t.*field;
        ++count;
    }
    if (count == 0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan};
    }
    const double mean = sum / static_cast<double>(count);
    if (count == 1) return {mean, 0.0};
    double ss = 0.0;
    for (const auto& t : trials) {
        if (!t.failed) ss += (t.*field - mean) * (t.*field - mean);
    }
    return {mean, std::sqrt(ss / static_cast<double>(count - 1))};
}

} // namespace

EnsembleSummary run_ensemble(const ExperimentConfig& config) {
    config.validate();
    EnsembleSummary summary;
    summary.config = config;
    summary.trials.resize(config.trials);

    std::size_t workers = config.threads;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, config.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < config.trials; i = next++)
            summary.trials[i] = run_trial(config, i);
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    for (const auto& t : summary.trials) summary.failed += t.failed;
    summary.protected_fraction = stats_of(summary.trials, &TrialMetrics::protected_fraction);
    summary.edge_fraction = stats_of(summary.trials, &TrialMetrics::edge_fraction);
    summary.both_fraction = stats_of(summary.trials, &TrialMetrics::both_fraction);
    summary.lambda1_abs = stats_of(summary.trials, &TrialMetrics::lambda1_abs);

    std::vector<double> profile(config.n, 0.0);
    for (const auto& t : summary.trials) {
        if (t.failed) continue;
        auto sorted = t.localisation_ratios;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 0; k < sorted.size(); ++k) profile[k] += sorted[k];
    }
    if (summary.succeeded() > 0) {
        for (double& x : profile) x /= static_cast<double>(summary.succeeded());
        summary.localisation_profile = std::move(profile);
    }
    return summary;
}

std::vector<double> AxisSpec::values() const {
    if (count == 1) return {lo};
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    v.back() = hi;
    return v;
}

namespace {

bool known_axis(std::string_view name) {
    return name == "eps_s" || name == "eps_gamma" || name == "eps" || name == "gamma" ||
           name == "s";
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    return value;
}

} // namespace

AxisSpec parse_axis(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(':', start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    if (parts.size() != 4)
        throw ConfigError("axis must look like name:lo:hi:count, got '" + std::string(text) + "'");
    AxisSpec a;
    a.name = std::string(parts[0]);
    if (!known_axis(a.name))
        throw ConfigError("unknown axis '" + a.name + "' (expected eps_s, eps_gamma, eps, gamma or s)");
    a.lo = parse_number<double>(parts[1], "axis lower bound");
    a.hi = parse_number<double>(parts[2], "axis upper bound");
    a.count = parse_number<std::size_t>(parts[3], "axis count");
    if (a.count < 1) throw ConfigError("axis count must be at least 1");
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi)) throw ConfigError("axis bounds must be finite");
    return a;
}

void apply_axis(ExperimentConfig& config, std::string_view name, double value) {
    if (name == "eps_s") config.eps_s = value;
    else if (name == "eps_gamma") config.eps_gamma = value;
    else if (name == "eps") config.eps = value;
    else if (name == "gamma") config.gamma = value;
    else if (name == "s") config.s = value;
    else throw ConfigError("unknown axis '" + std::string(name) + "'");
}

SweepResult sweep_phase_diagram(const ExperimentConfig& base, const AxisSpec& axis1,
                                const std::optional<AxisSpec>& axis2) {
    SweepResult result{axis1, axis2, {}};
    const auto v1 = axis1.values();
    const auto v2 = axis2 ? axis2->values() : std::vector<double>{0.0};
    for (double x : v1) {
        for (double y : v2) {
            SweepCell cell;
            cell.value1 = x;
            cell.value2 = axis2 ? y : std::numeric_limits<double>::quiet_NaN();
            ExperimentConfig cfg = base;
            apply_axis(cfg, axis1.name, x);
            if (axis2) apply_axis(cfg, axis2->name, y);
            try {
                cfg.validate();
                const auto summary = run_ensemble(cfg);
                cell.mean_protected = summary.protected_fraction.mean;
                cell.mean_edge = summary.edge_fraction.mean;
                cell.mean_both = summary.both_fraction.mean;
                cell.trials_ok = summary.succeeded();
            } catch (const ConfigError& ex) {
                const double nan = std::numeric_limits<double>::quiet_NaN();
                cell.mean_protected = cell.mean_edge = cell.mean_both = nan;
                cell.valid = false;
                cell.reason = ex.what();
            }
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

} // namespace nhse
