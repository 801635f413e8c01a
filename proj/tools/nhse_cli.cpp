#include "nhse/capmat.hpp"
#include "nhse/chain.hpp"
#include "nhse/config.hpp"
#include "nhse/ensemble.hpp"
#include "nhse/errors.hpp"
#include "nhse/export.hpp"
#include "nhse/format.hpp"
#include "nhse/spectra.hpp"
#include "nhse/stability.hpp"
#include "nhse/svg.hpp"
#include "nhse/topology.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

// Chain flags shared by every subcommand. Only flags given on the command
// line override values from --config.
struct ChainFlags {
    std::string config_path;
    std::size_t n = 50;
    double gamma = 1.0, ell = 1.0, s = 1.0;
    CLI::Option* n_opt = nullptr;
    CLI::Option* gamma_opt = nullptr;
    CLI::Option* ell_opt = nullptr;
    CLI::Option* s_opt = nullptr;

    void add(CLI::App* app) {
        app->add_option("--config", config_path, "key = value experiment file");
        n_opt = app->add_option("--n", n, "number of resonators");
        gamma_opt = app->add_option("--gamma", gamma, "gauge potential");
        ell_opt = app->add_option("--ell", ell, "resonator length");
        s_opt = app->add_option("--s", s, "spacing");
    }

    nhse::ExperimentConfig resolve() const {
        nhse::ExperimentConfig c;
        if (!config_path.empty()) c = nhse::load_config_file(config_path);
        if (n_opt->count()) c.n = n;
        if (gamma_opt->count()) c.gamma = gamma;
        if (ell_opt->count()) c.ell = ell;
        if (s_opt->count()) c.s = s;
        return c;
    }
};

struct DisorderFlags {
    std::string kind;
    double eps_s = 0.0, eps_gamma = 0.0, eps = 0.0;
    std::size_t trials = 0, edge_sites = 0, threads = 0;
    std::uint64_t seed = 0;
    CLI::Option *kind_opt = nullptr, *eps_s_opt = nullptr, *eps_gamma_opt = nullptr,
                *eps_opt = nullptr, *trials_opt = nullptr, *seed_opt = nullptr,
                *edge_opt = nullptr, *threads_opt = nullptr;

    void add(CLI::App* app) {
        kind_opt = app->add_option("--kind", kind, "spacing | gauge | entrywise | combined");
        eps_s_opt = app->add_option("--eps-s", eps_s, "spacing disorder half-width");
        eps_gamma_opt = app->add_option("--eps-gamma", eps_gamma, "gauge disorder half-width");
        eps_opt = app->add_option("--eps", eps, "entrywise perturbation half-width");
        trials_opt = app->add_option("--trials", trials, "number of realisations");
        seed_opt = app->add_option("--seed", seed, "master seed");
        edge_opt = app->add_option("--edge-sites", edge_sites, "sites counted as the edge");
        threads_opt = app->add_option("--threads", threads, "worker threads (0 = all cores)");
    }

    void apply(nhse::ExperimentConfig& c) const {
        if (kind_opt->count()) c.kind = nhse::parse_perturbation_kind(kind);
        if (eps_s_opt->count()) c.eps_s = eps_s;
        if (eps_gamma_opt->count()) c.eps_gamma = eps_gamma;
        if (eps_opt->count()) c.eps = eps;
        if (trials_opt->count()) c.trials = trials;
        if (seed_opt->count()) c.master_seed = seed;
        if (edge_opt->count()) c.edge_sites = edge_sites;
        if (threads_opt->count()) c.threads = threads;
    }
};

nhse::TriMatrix base_matrix(const nhse::ExperimentConfig& c) {
    return nhse::gauge_capacitance(nhse::make_uniform_chain(c.n, c.ell, c.s, c.gamma));
}

int run_spectrum(const ChainFlags& chain, const std::string& out) {
    const auto c = chain.resolve();
    const auto d = nhse::full_spectrum(base_matrix(c));
    if (out.empty()) {
        nhse::write_spectrum_csv(std::cout, d);
        return kExitOk;
    }
    nhse::write_file(fs::path(out) / "spectrum.csv",
                     [&](std::ostream& os) { nhse::write_spectrum_csv(os, d); });
    nhse::write_file(fs::path(out) / "eigenvectors.csv",
                     [&](std::ostream& os) { nhse::write_eigenvector_csv(os, d); });
    std::cout << "wrote " << d.size() << " eigenpairs to " << out << '\n';
    return kExitOk;
}

void print_summary(const nhse::EnsembleSummary& s) {
    std::cout << "trials " << s.trials.size() << ", failed " << s.failed << '\n'
              << "protected_fraction " << nhse::format_double(s.protected_fraction.mean) << " +- "
              << nhse::format_double(s.protected_fraction.std) << '\n'
              << "edge_fraction " << nhse::format_double(s.edge_fraction.mean) << " +- "
              << nhse::format_double(s.edge_fraction.std) << '\n'
              << "both_fraction " << nhse::format_double(s.both_fraction.mean) << " +- "
              << nhse::format_double(s.both_fraction.std) << '\n'
              << "lambda1_abs " << nhse::format_double(s.lambda1_abs.mean) << '\n';
}

int run_ensemble_cmd(const ChainFlags& chain, const DisorderFlags& disorder,
                     const std::string& out_dir) {
    auto c = chain.resolve();
    disorder.apply(c);
    c.validate();
    const auto summary = nhse::run_ensemble(c);
    print_summary(summary);
    if (!out_dir.empty()) {
        const fs::path dir(out_dir);
        nhse::write_file(dir / "trials.csv",
                         [&](std::ostream& os) { nhse::write_trials_csv(os, summary); });
        nhse::write_file(dir / "localisation.csv",
                         [&](std::ostream& os) { nhse::write_localisation_csv(os, summary); });
        nhse::write_file(dir / "summary.json",
                         [&](std::ostream& os) { os << nhse::summary_text(summary); });
    }
    for (const auto& t : summary.trials) {
        if (t.failed) std::cerr << "trial " << t.trial << " failed: " << t.reason << '\n';
    }
    return 2 * summary.failed > summary.trials.size() ? kExitSolver : kExitOk;
}

int run_phase(const ChainFlags& chain, const DisorderFlags& disorder, const std::string& axis1,
              const std::string& axis2, const std::string& out_dir) {
    auto c = chain.resolve();
    if (!disorder.kind_opt->count()) c.kind = nhse::PerturbationKind::combined;
    disorder.apply(c);
    const auto a1 = nhse::parse_axis(axis1);
    std::optional<nhse::AxisSpec> a2;
    if (!axis2.empty()) a2 = nhse::parse_axis(axis2);
    const auto sweep = nhse::sweep_phase_diagram(c, a1, a2);
    nhse::write_sweep_csv(std::cout, sweep);
    if (!out_dir.empty()) {
        const fs::path dir(out_dir);
        nhse::write_file(dir / "sweep.csv",
                         [&](std::ostream& os) { nhse::write_sweep_csv(os, sweep); });
        if (a2) {
            nhse::write_file(dir / "heatmap.svg", [&](std::ostream& os) {
                os << nhse::heatmap_svg(sweep, "mean protected fraction");
            });
        } else {
            nhse::write_file(dir / "curve.csv",
                             [&](std::ostream& os) { nhse::write_curve_csv(os, sweep); });
            std::vector<nhse::LineSeries> series(3);
            series[0].label = "protected";
            series[1].label = "edge";
            series[2].label = "both";
            for (const auto& cell : sweep.cells) {
                for (auto& s : series) s.x.push_back(cell.value1);
                series[0].y.push_back(cell.mean_protected);
                series[1].y.push_back(cell.mean_edge);
                series[2].y.push_back(cell.mean_both);
            }
            nhse::write_file(dir / "curve.svg", [&](std::ostream& os) {
                os << nhse::line_chart_svg("disorder response", a1.name, "mean fraction", series);
            });
        }
    }
    std::size_t ok = 0, expected = 0;
    for (const auto& cell : sweep.cells) {
        if (!cell.valid) continue;
        ok += cell.trials_ok;
        expected += c.trials;
    }
    return 2 * (expected - ok) > expected ? kExitSolver : kExitOk;
}

int run_bounds(const ChainFlags& chain, const DisorderFlags& disorder, const std::string& out_dir) {
    auto c = chain.resolve();
    disorder.apply(c);
    c.validate();
    const auto t = base_matrix(c);
    const auto that = nhse::entrywise_perturb(t, c.eps, c.master_seed).matrix;
    const auto report = nhse::stability_report(t, that);
    std::cout << nhse::to_text(report);
    if (!out_dir.empty()) {
        const fs::path dir(out_dir);
        nhse::write_file(dir / "report.json", [&](std::ostream& os) { os << nhse::to_text(report); });
        nhse::write_file(dir / "bounds.csv", [&](std::ostream& os) { nhse::write_csv(os, report); });
    }
    return kExitOk;
}

int run_modes(const ChainFlags& chain, const DisorderFlags& disorder, const std::string& render,
              const std::string& out_dir, std::size_t k) {
    auto c = chain.resolve();
    disorder.apply(c);
    c.validate();
    auto t = base_matrix(c);
    if (c.eps > 0.0) t = nhse::entrywise_perturb(t, c.eps, c.master_seed).matrix;
    const auto d = nhse::full_spectrum(t);
    if (k < 1 || k > d.size()) throw nhse::ConfigError("--k must lie in [1, n]");
    if (!render.empty()) {
        nhse::write_file(render, [&](std::ostream& os) {
            os << nhse::semilog_overlay_svg("eigenvector magnitudes", d.eigenvectors);
        });
    }
    if (!out_dir.empty()) {
        const fs::path dir(out_dir);
        nhse::write_file(dir / "eigenvectors.csv",
                         [&](std::ostream& os) { nhse::write_eigenvector_csv(os, d); });
        const auto chain_cfg = nhse::make_uniform_chain(c.n, c.ell, c.s, c.gamma);
        const auto profile = nhse::mode_profile(chain_cfg, d.eigenvectors[k - 1], 16);
        nhse::write_file(dir / ("profile_k" + std::to_string(k) + ".csv"),
                         [&](std::ostream& os) { nhse::write_csv(os, profile); });
    }
    std::cout << "computed " << d.size() << " eigenvectors\n";
    return kExitOk;
}

int run_winding(const ChainFlags& chain, const std::string& out_dir) {
    const auto c = chain.resolve();
    const auto params = nhse::uniform_chain_params(c.ell, c.s, c.gamma);
    const auto symbol = nhse::symbol_of(params);
    const auto d = nhse::full_spectrum(base_matrix(c));
    auto spectrum_csv = [&](std::ostream& os) {
        os << "k,lambda,winding,boundary\n";
        for (std::size_t k = 0; k < d.size(); ++k) {
            const auto w = nhse::winding_number(symbol, d.eigenvalues[k]);
            os << k + 1 << ',' << nhse::format_double(d.eigenvalues[k]) << ',' << w.winding << ','
               << (w.boundary ? 1 : 0) << '\n';
        }
    };
    if (out_dir.empty()) {
        spectrum_csv(std::cout);
        return kExitOk;
    }
    const fs::path dir(out_dir);
    nhse::write_file(dir / "symbol.csv", [&](std::ostream& os) { nhse::write_symbol_csv(os, symbol); });
    nhse::write_file(dir / "spectrum_winding.csv", spectrum_csv);
    std::cout << "protected fraction " << nhse::format_double(nhse::protected_fraction(d.eigenvalues, symbol))
              << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gauge capacitance spectra, stability bounds and disorder ensembles"};
    app.require_subcommand(1);

    ChainFlags spectrum_chain, ensemble_chain, phase_chain, bounds_chain, modes_chain, winding_chain;
    DisorderFlags ensemble_dis, phase_dis, bounds_dis, modes_dis;
    std::string spectrum_out, ensemble_out, phase_out, bounds_out, modes_out, modes_render;
    std::string axis1, axis2;
    std::size_t modes_k = 2;

    auto* spectrum = app.add_subcommand("spectrum", "eigenpairs of the uniform chain");
    spectrum_chain.add(spectrum);
    spectrum->add_option("--out", spectrum_out, "output directory (stdout when omitted)");

    auto* ensemble = app.add_subcommand("ensemble", "Monte Carlo disorder ensemble");
    ensemble_chain.add(ensemble);
    ensemble_dis.add(ensemble);
    ensemble->add_option("--out-dir", ensemble_out, "directory for CSV and summary output");

    auto* phase = app.add_subcommand("phase", "phase diagram sweep of mean protected fraction");
    phase_chain.add(phase);
    phase_dis.add(phase);
    phase->add_option("--axis1", axis1, "name:lo:hi:count")->required();
    phase->add_option("--axis2", axis2, "name:lo:hi:count");
    phase->add_option("--out-dir", phase_out, "directory for CSV and SVG output");

    auto* bounds = app.add_subcommand("bounds", "stability constants and certificates");
    bounds_chain.add(bounds);
    bounds_dis.add(bounds);
    bounds->add_option("--out-dir", bounds_out, "directory for report and CSV");

    auto* modes = app.add_subcommand("modes", "eigenvectors and mode profiles");
    modes_chain.add(modes);
    modes_dis.add(modes);
    modes->add_option("--render", modes_render, "write a semi-log eigenvector overlay SVG");
    modes->add_option("--out-dir", modes_out, "directory for eigenvector and profile CSV");
    modes->add_option("--k", modes_k, "mode index for the spatial profile (1-based)");

    auto* winding = app.add_subcommand("winding", "symbol curve and spectrum winding numbers");
    winding_chain.add(winding);
    winding->add_option("--out-dir", phase_out, "directory for symbol and spectrum CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*spectrum) return run_spectrum(spectrum_chain, spectrum_out);
        if (*ensemble) return run_ensemble_cmd(ensemble_chain, ensemble_dis, ensemble_out);
        if (*phase) return run_phase(phase_chain, phase_dis, axis1, axis2, phase_out);
        if (*bounds) return run_bounds(bounds_chain, bounds_dis, bounds_out);
        if (*modes) return run_modes(modes_chain, modes_dis, modes_render, modes_out, modes_k);
        if (*winding) return run_winding(winding_chain, phase_out);
    } catch (const nhse::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const nhse::NoConvergence& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}
