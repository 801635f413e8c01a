#include "nhse/capmat.hpp"
#include "nhse/chain.hpp"
#include "nhse/config.hpp"
#include "nhse/ensemble.hpp"
#include "nhse/errors.hpp"
#include "nhse/export.hpp"
#include "nhse/spectra.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace nhse;

namespace {

ExperimentConfig small_config(PerturbationKind kind) {
    ExperimentConfig c;
    c.n = 30;
    c.kind = kind;
    c.trials = 6;
    c.master_seed = 123;
    c.threads = 1;
    return c;
}

std::string trials_csv(const EnsembleSummary& s) {
    std::ostringstream out;
    write_trials_csv(out, s);
    write_localisation_csv(out, s);
    return out.str();
}

} // namespace

TEST_CASE("localisation ratio") {
    CHECK(localisation_ratio(std::vector<double>(25, 1.0)) == doctest::Approx(0.2));
    CHECK(localisation_ratio(std::vector<double>{0.0, -3.0, 0.0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(localisation_ratio(std::vector<double>(4, 0.0)), std::invalid_argument);
    const auto p = uniform_chain_params(1.0, 1.0, 3.0);
    CHECK(localisation_ratio(closed_form_eigenvector(p, 50, 50)) > 0.9);
}

TEST_CASE("edge accumulation") {
    const auto p = uniform_chain_params(1.0, 1.0, 1.0);
    for (std::size_t k = 2; k <= 30; ++k) {
        auto v = closed_form_eigenvector(p, 30, k);
        CHECK(edge_accumulated(v, 2));
        std::reverse(v.begin(), v.end());
        CHECK_FALSE(edge_accumulated(v, 2));
    }
    CHECK(edge_accumulated(std::vector<double>(30, 1.0), 2));
    CHECK(edge_accumulated(std::vector<double>{0.1, 0.2, 0.5}, 3));
    CHECK_FALSE(edge_accumulated(std::vector<double>{0.1, 0.2, 0.5}, 2));
}

TEST_CASE("undisordered trial") {
    auto c = small_config(PerturbationKind::spacing);
    const auto m = run_trial(c, 0);
    REQUIRE_FALSE(m.failed);
    CHECK(m.protected_fraction == doctest::Approx(29.0 / 30.0));
    CHECK(m.edge_fraction == doctest::Approx(1.0));
    CHECK(m.both_fraction == doctest::Approx(29.0 / 30.0));
    CHECK(m.lambda1_abs <= 1e-10);
    CHECK(m.localisation_ratios.size() == 30);
    CHECK(m.decay_rates.size() == 30);
}

TEST_CASE("disordered trials keep the zero mode and real spectra") {
    auto c = small_config(PerturbationKind::spacing);
    c.eps_s = 0.1;
    for (std::size_t i = 0; i < 5; ++i) {
        const auto m = run_trial(c, i);
        REQUIRE_FALSE(m.failed);
        CHECK(m.lambda1_abs <= 1e-10);
        for (double r : m.localisation_ratios) {
            CHECK(r >= 1.0 / std::sqrt(30.0) - 1e-12);
            CHECK(r <= 1.0 + 1e-12);
        }
    }
    auto g = small_config(PerturbationKind::gauge);
    g.n = 50;
    g.eps_gamma = 2.0;
    for (std::size_t i = 0; i < 5; ++i) {
        const auto m = run_trial(g, i);
        CHECK_FALSE(m.failed);
        CHECK(m.lambda1_abs <= 1e-10);
    }
    auto both = small_config(PerturbationKind::combined);
    both.eps_s = 0.1;
    both.eps_gamma = 0.5;
    CHECK_FALSE(run_trial(both, 0).failed);
    auto ent = small_config(PerturbationKind::entrywise);
    ent.eps = 1e-3;
    CHECK_FALSE(run_trial(ent, 0).failed);
}

TEST_CASE("ensemble aggregation") {
    auto c = small_config(PerturbationKind::spacing);
    c.eps_s = 0.2;
    c.trials = 1;
    const auto one = run_ensemble(c);
    const auto single = run_trial(c, 0);
    CHECK(one.protected_fraction.mean == single.protected_fraction);
    CHECK(one.edge_fraction.mean == single.edge_fraction);
    CHECK(one.protected_fraction.std == 0.0);
    CHECK(one.failed == 0);

    c.trials = 8;
    const auto a = run_ensemble(c);
    double mean = 0.0;
    for (const auto& t : a.trials) mean += t.edge_fraction;
    mean /= 8.0;
    CHECK(a.edge_fraction.mean == doctest::Approx(mean).epsilon(1e-14));
    double ss = 0.0;
    for (const auto& t : a.trials) ss += (t.edge_fraction - mean) * (t.edge_fraction - mean);
    CHECK(a.edge_fraction.std == doctest::Approx(std::sqrt(ss / 7.0)).epsilon(1e-12));
    CHECK(a.localisation_profile.size() == 30);
    CHECK(std::is_sorted(a.localisation_profile.begin(), a.localisation_profile.end()));
}

TEST_CASE("ensembles are deterministic across runs and thread counts") {
    auto c = small_config(PerturbationKind::combined);
    c.eps_s = 0.1;
    c.eps_gamma = 0.3;
    const auto a = run_ensemble(c);
    const auto b = run_ensemble(c);
    c.threads = 3;
    const auto threaded = run_ensemble(c);
    CHECK(trials_csv(a) == trials_csv(b));
    CHECK(trials_csv(a) == trials_csv(threaded));
    CHECK(summary_text(a) == summary_text(b));
    c.master_seed = 124;
    CHECK(trials_csv(run_ensemble(c)) != trials_csv(a));
}

TEST_CASE("experiment config validation") {
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.eps_s = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.kind = PerturbationKind::gauge;
    CHECK_NOTHROW(c.validate());
    c = {};
    c.edge_sites = 51;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.n = 1;
    CHECK_THROWS_AS(run_ensemble(c), ConfigError);
    CHECK_THROWS_AS(parse_perturbation_kind("shear"), ConfigError);
    CHECK(parse_perturbation_kind("entrywise") == PerturbationKind::entrywise);
}

TEST_CASE("axis parsing") {
    const auto a = parse_axis("eps_s:0:0.4:5");
    CHECK(a.name == "eps_s");
    CHECK(a.values() == std::vector<double>{0.0, 0.1, 0.2, 0.30000000000000004, 0.4});
    CHECK(parse_axis("gamma:2:2:1").values() == std::vector<double>{2.0});
    CHECK_THROWS_AS(parse_axis("eps_s:0:1"), ConfigError);
    CHECK_THROWS_AS(parse_axis("delta:0:1:3"), ConfigError);
    CHECK_THROWS_AS(parse_axis("eps:0:x:3"), ConfigError);
    CHECK_THROWS_AS(parse_axis("eps:0:1:0"), ConfigError);
}

TEST_CASE("phase sweep") {
    auto c = small_config(PerturbationKind::combined);
    c.n = 20;
    c.trials = 3;
    const auto one = sweep_phase_diagram(c, parse_axis("eps_s:0.05:0.05:1"), parse_axis("eps_gamma:0.1:0.1:1"));
    REQUIRE(one.cells.size() == 1);
    auto cfg = c;
    cfg.eps_s = 0.05;
    cfg.eps_gamma = 0.1;
    CHECK(one.cells[0].mean_protected == run_ensemble(cfg).protected_fraction.mean);
    CHECK(one.cells[0].trials_ok == 3);

    const auto grid = sweep_phase_diagram(c, parse_axis("eps_s:0:1.5:2"), parse_axis("eps_gamma:0:0.5:3"));
    REQUIRE(grid.cells.size() == 6);
    CHECK(grid.rows() == 2);
    CHECK(grid.cols() == 3);
    CHECK(grid.cells[2].value1 == 0.0);
    CHECK(grid.cells[2].value2 == 0.5);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(grid.cells[j].valid);
        CHECK_FALSE(grid.cells[3 + j].valid);
        CHECK(std::isnan(grid.cells[3 + j].mean_protected));
        CHECK(grid.cells[3 + j].trials_ok == 0);
    }
}

TEST_CASE("config files") {
    const auto c = parse_config_text("# experiment\n n = 30\nkind = gauge # inline\neps_gamma=0.25\n\nseed = 77\n");
    CHECK(c.n == 30);
    CHECK(c.kind == PerturbationKind::gauge);
    CHECK(c.eps_gamma == 0.25);
    CHECK(c.master_seed == 77);
    CHECK(c.trials == ExperimentConfig{}.trials);
    const auto back = parse_config_text(to_config_text(c));
    CHECK(to_config_text(back) == to_config_text(c));
    CHECK_THROWS_AS(parse_config_text("colour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("n = many\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("n 30\n"), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/cfg.txt"), ConfigError);
}
