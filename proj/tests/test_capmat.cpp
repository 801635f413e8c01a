#include "oracles.hpp"

#include "nhse/capmat.hpp"
#include "nhse/chain.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace nhse;

TEST_CASE("uniform gauge capacitance matches the closed-form entries") {
    for (double gamma : {0.5, 1.0, 3.0, -2.0}) {
        const auto t = gauge_capacitance(make_uniform_chain(6, 1.0, 1.0, gamma));
        const auto p = nhse_test::uniform_params(gamma);
        CHECK(t.diag.front() == doctest::Approx(p.alpha + p.eta).epsilon(1e-14));
        CHECK(t.diag.back() == doctest::Approx(p.alpha + p.beta).epsilon(1e-14));
        for (std::size_t i = 1; i + 1 < 6; ++i) CHECK(t.diag[i] == doctest::Approx(p.alpha).epsilon(1e-14));
        for (std::size_t i = 0; i + 1 < 6; ++i) {
            CHECK(t.sub[i] == doctest::Approx(p.eta).epsilon(1e-14));
            CHECK(t.sup[i] == doctest::Approx(p.beta).epsilon(1e-14));
        }
        const auto q = uniform_chain_params(1.0, 1.0, gamma);
        CHECK(q.a == q.eta);
        CHECK(q.b == q.beta);
        CHECK(max_entry_deviation(corner_toeplitz(q, 6), t) <= 1e-14);
    }
}

TEST_CASE("hopping parameters at gamma = 3") {
    const auto t = gauge_capacitance(make_uniform_chain(50, 1.0, 1.0, 3.0));
    CHECK(std::abs(t.sub[0]) == doctest::Approx(0.15718).epsilon(1e-4));
    CHECK(std::abs(t.sup[0]) == doctest::Approx(3.15718).epsilon(1e-5));
    CHECK(std::floor(100 * std::abs(t.sub[0])) / 100 == doctest::Approx(0.15));
    CHECK(std::floor(100 * std::abs(t.sup[0])) / 100 == doctest::Approx(3.15));
    const auto p1 = uniform_chain_params(1.0, 1.0, 1.0);
    CHECK(p1.alpha == doctest::Approx(2.16395).epsilon(1e-5));
    CHECK(p1.eta == doctest::Approx(-0.58198).epsilon(1e-5));
    CHECK(p1.beta == doctest::Approx(-1.58198).epsilon(1e-5));
}

TEST_CASE("row-wise entries of a non-uniform chain") {
    ChainConfig c;
    c.ell = 0.8;
    c.spacings = {0.5, 2.0};
    c.gammas = {1.0, -1.0, 2.0};
    const auto t = gauge_capacitance(c);
    auto bwd = [&](double g) { return g / (std::exp(g * c.ell) - 1.0); };
    auto fwd = [&](double g) { return g * std::exp(g * c.ell) / (std::exp(g * c.ell) - 1.0); };
    CHECK(t.diag[0] == doctest::Approx(fwd(1.0) / 0.5).epsilon(1e-14));
    CHECK(t.sup[0] == doctest::Approx(-fwd(1.0) / 0.5).epsilon(1e-14));
    CHECK(t.sub[0] == doctest::Approx(-bwd(-1.0) / 0.5).epsilon(1e-14));
    CHECK(t.diag[1] == doctest::Approx(bwd(-1.0) / 0.5 + fwd(-1.0) / 2.0).epsilon(1e-14));
    CHECK(t.sup[1] == doctest::Approx(-fwd(-1.0) / 2.0).epsilon(1e-14));
    CHECK(t.sub[1] == doctest::Approx(-bwd(2.0) / 2.0).epsilon(1e-14));
    CHECK(t.diag[2] == doctest::Approx(bwd(2.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("zero row sums and negative couplings under disorder") {
    const auto base = make_uniform_chain(40, 1.0, 1.0, 1.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto chain = apply_gauge_disorder(apply_spacing_disorder(base, 0.5, seed), 2.5, seed);
        const auto t = gauge_capacitance(chain);
        CHECK(t.max_row_sum() <= 1e-12 * t.max_abs_entry());
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            CHECK(t.sub[i] < 0.0);
            CHECK(t.sup[i] < 0.0);
        }
    }
}

TEST_CASE("gamma -> 0 limit is the symmetric Laplacian") {
    const auto t0 = gauge_capacitance(make_uniform_chain(5, 1.0, 2.0, 0.0));
    for (std::size_t i = 0; i + 1 < 5; ++i) {
        CHECK(t0.sub[i] == doctest::Approx(-0.5));
        CHECK(t0.sup[i] == doctest::Approx(-0.5));
    }
    const auto tiny = gauge_capacitance(make_uniform_chain(5, 1.0, 2.0, 1e-9));
    const auto small = gauge_capacitance(make_uniform_chain(5, 1.0, 2.0, 1e-7));
    CHECK(max_entry_deviation(t0, tiny) <= 1e-9);
    CHECK(max_entry_deviation(tiny, small) <= 1e-7);
}

TEST_CASE("overflowing gauge potentials are rejected") {
    CHECK_THROWS_AS(gauge_capacitance(make_uniform_chain(3, 1.0, 1.0, 710.0)), std::overflow_error);
    CHECK_THROWS_AS(gauge_capacitance(make_uniform_chain(3, 1.0, 1.0, -800.0)), std::overflow_error);
    CHECK_NOTHROW(gauge_capacitance(make_uniform_chain(3, 1.0, 1.0, 700.0)));
    CHECK_THROWS_AS(uniform_chain_params(1.0, 1.0, 1000.0), std::overflow_error);
}

TEST_CASE("tridiagonal matrix validation") {
    TriMatrix t{{1.0, 2.0}, {1.0}, {}};
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    TriMatrix u{{1.0, NAN}, {1.0}, {1.0}};
    CHECK_THROWS_AS(u.validate(), std::invalid_argument);
    TriMatrix v{{1.0, 2.0, 3.0}, {4.0, 5.0}, {6.0, 7.0}};
    CHECK(v.apply(std::vector<double>{1.0, 1.0, 1.0}) == std::vector<double>{7.0, 13.0, 8.0});
}

TEST_CASE("entrywise perturbation") {
    const auto t = gauge_capacitance(make_uniform_chain(50, 1.0, 1.0, 3.0));
    const auto same = entrywise_perturb(t, 0.0, 5);
    CHECK(same.matrix == t);
    CHECK(same.effective_eps == 0.0);
    const auto p = entrywise_perturb(t, 1e-3, 5);
    CHECK(p.effective_eps <= 1e-3);
    CHECK(p.effective_eps > 5e-4);
    CHECK(max_entry_deviation(t, p.matrix) == doctest::Approx(p.effective_eps).epsilon(1e-9));
    CHECK_FALSE(p.sign_warning);
    CHECK(entrywise_perturb(t, 1e-3, 5).matrix == p.matrix);
    CHECK_FALSE(entrywise_perturb(t, 1e-3, 6).matrix == p.matrix);
    CHECK(entrywise_perturb(t, 0.2, 5).sign_warning);
    CHECK_THROWS_AS(entrywise_perturb(t, -1.0, 5), std::invalid_argument);
}

TEST_CASE("toeplitz parameter recovery") {
    ToeplitzParams p{2.0, -0.5, -1.5, 0.25, -0.75};
    const auto t = corner_toeplitz(p, 7);
    const auto r = toeplitz_params_of(t, 1e-12);
    REQUIRE(std::holds_alternative<ToeplitzParams>(r));
    const auto q = std::get<ToeplitzParams>(r);
    CHECK(q.alpha == p.alpha);
    CHECK(q.eta == p.eta);
    CHECK(q.beta == p.beta);
    CHECK(q.a == doctest::Approx(p.a));
    CHECK(q.b == doctest::Approx(p.b));

    auto bad = t;
    bad.sup[3] += 1e-3;
    const auto m = toeplitz_params_of(bad, 1e-12);
    REQUIRE(std::holds_alternative<ToeplitzMismatch>(m));
    CHECK(std::get<ToeplitzMismatch>(m).field == "sup");
    CHECK(std::get<ToeplitzMismatch>(m).index == 3);
    CHECK_THROWS_AS(corner_toeplitz(ToeplitzParams{1.0, 1.0, -1.0, 0.0, 0.0}, 4), std::invalid_argument);
}

TEST_CASE("matrix csv and text round trip") {
    const auto t = gauge_capacitance(make_uniform_chain(4, 1.0, 1.0, 1.0));
    std::ostringstream out;
    write_csv(out, t);
    const std::string csv = out.str();
    CHECK(csv.rfind("sub,,", 0) == 0);
    CHECK(csv.find("\ndiag,") != std::string::npos);
    CHECK(tri_matrix_from_text(to_text(t)) == t);
    CHECK_THROWS(tri_matrix_from_text("{\"n\": 3, \"diag\": [1, 2], \"sub\": [1], \"sup\": [1]}"));
}
