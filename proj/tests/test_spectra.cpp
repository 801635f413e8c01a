#include "oracles.hpp"

#include "nhse/capmat.hpp"
#include "nhse/chain.hpp"
#include "nhse/errors.hpp"
#include "nhse/spectra.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace nhse;

namespace {

TriMatrix uniform(std::size_t n, double gamma) {
    return gauge_capacitance(make_uniform_chain(n, 1.0, 1.0, gamma));
}

double trace(const TriMatrix& t) { return std::accumulate(t.diag.begin(), t.diag.end(), 0.0); }

} // namespace

TEST_CASE("closed-form spectrum of the three-resonator chain") {
    const auto p = uniform_chain_params(1.0, 1.0, 1.0);
    const auto d = closed_form_spectrum(p, 3);
    REQUIRE(d.size() == 3);
    const auto brute = nhse_test::brute_force_eigenvalues(corner_toeplitz(p, 3));
    REQUIRE(brute.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(d.eigenvalues[k] - brute[k]) <= 1e-10);
    CHECK(d.eigenvalues[1] == doctest::Approx(1.2044360380711812).epsilon(1e-12));
    CHECK(d.eigenvalues[2] == doctest::Approx(3.1234707894061247).epsilon(1e-12));
    for (double r : d.residuals) CHECK(r <= 1e-12);
}

TEST_CASE("closed-form eigenpairs satisfy the eigen-equation for both gauge signs") {
    for (double gamma : {0.5, 1.0, 3.0, -1.0}) {
        const auto p = uniform_chain_params(1.0, 1.0, gamma);
        const auto t = corner_toeplitz(p, 20);
        const auto d = closed_form_spectrum(p, 20);
        for (std::size_t k = 0; k < 20; ++k) CHECK(d.residuals[k] <= 1e-10);
        CHECK(std::accumulate(d.eigenvalues.begin(), d.eigenvalues.end(), 0.0) ==
              doctest::Approx(trace(t)).epsilon(1e-9));
        CHECK(std::is_sorted(d.eigenvalues.begin(), d.eigenvalues.end()));
    }
    CHECK_THROWS_AS(closed_form_spectrum(ToeplitzParams{2.0, -1.0, -1.0, 0.0, 0.0}, 5),
                    std::invalid_argument);
}

TEST_CASE("symmetrization") {
    const auto t = uniform(8, 3.0);
    const auto s = symmetrize(t);
    for (std::size_t i = 0; i + 1 < 8; ++i) {
        CHECK(s.sym_off[i] == doctest::Approx(std::sqrt(t.sub[i] * t.sup[i])));
        // (SD)^{-1} T (SD) entries (i, i+1) and (i+1, i)
        const double d0 = s.signature[i] * s.scale[i], d1 = s.signature[i + 1] * s.scale[i + 1];
        CHECK(t.sup[i] * d1 / d0 == doctest::Approx(s.sym_off[i]).epsilon(1e-12));
        CHECK(t.sub[i] * d0 / d1 == doctest::Approx(s.sym_off[i]).epsilon(1e-12));
    }
    const std::vector<double> x{1.0, -2.0, 0.5, 0.0, 3.0, 1e-3, -1e-6, 2.0};
    const auto back = s.from_symmetric(s.to_symmetric(x));
    const double nx = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == doctest::Approx(x[i] / nx).epsilon(1e-12));

    TriMatrix bad{{1.0, 1.0, 1.0}, {1.0, 1.0}, {1.0, -1.0}};
    try {
        symmetrize(bad);
        FAIL("expected NotSymmetrizable");
    } catch (const NotSymmetrizable& e) {
        CHECK(e.index() == 1);
    }
    TriMatrix zero{{1.0, 1.0}, {0.0}, {1.0}};
    CHECK_THROWS_AS(symmetrize(zero), NotSymmetrizable);
}

TEST_CASE("sturm counts and bisection") {
    const std::vector<double> diag{0.0, 0.0}, off{1.0};
    CHECK(sturm_count(diag, off, -2.0) == 0);
    CHECK(sturm_count(diag, off, 0.5) == 1);
    CHECK(sturm_count(diag, off, 2.0) == 2);

    const auto p = uniform_chain_params(1.0, 1.0, 1.0);
    const auto eig = eigenvalues_sturm(symmetrize(corner_toeplitz(p, 3)), 1e-12);
    const auto ref = closed_form_spectrum(p, 3).eigenvalues;
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(eig[k] - ref[k]) <= 1e-10);

    const std::vector<double> d4{3.0, -1.0, 2.0, -1.0}, tiny{1e-30, 1e-30, 1e-30};
    const auto e4 = symmetric_tridiagonal_eigenvalues(d4, tiny, 1e-13);
    const std::vector<double> sorted{-1.0, -1.0, 2.0, 3.0};
    for (std::size_t k = 0; k < 4; ++k) CHECK(e4[k] == doctest::Approx(sorted[k]).epsilon(1e-12));

    const auto big = symmetrize(uniform(200, 1.0));
    const auto [lo, hi] = gershgorin_interval(big.sym_diag, big.sym_off);
    CHECK(std::abs(eigenvalues_sturm(big, 1e-13 * (hi - lo)).front()) <= 1e-10);
    CHECK_THROWS_AS(symmetric_tridiagonal_eigenvalues(d4, tiny, 0.0), std::invalid_argument);
}

TEST_CASE("inverse iteration recovers known eigenvectors") {
    const auto t30 = uniform(30, 1.0);
    const auto kernel = eigenvector_inverse_iteration(t30, 0.0, 17);
    for (double x : kernel.vector) CHECK(std::abs(x - 1.0 / std::sqrt(30.0)) <= 1e-9);
    CHECK(kernel.residual <= residual_tolerance(t30));
    CHECK(kernel.iterations <= 5);

    const auto p = uniform_chain_params(1.0, 1.0, 3.0);
    const auto t = corner_toeplitz(p, 50);
    for (std::size_t k = 2; k <= 50; ++k) {
        const double lambda = closed_form_eigenvalue(p, 50, k);
        auto ref = closed_form_eigenvector(p, 50, k);
        canonicalize(ref);
        const auto r = eigenvector_inverse_iteration(t, lambda, k);
        CHECK(nhse_test::max_abs_diff(r.vector, ref) <= 1e-8);
    }
    CHECK_THROWS_AS(eigenvector_inverse_iteration(t, 100.0, 1), NoConvergence);
    CHECK_THROWS_AS(eigenvector_inverse_iteration(t30, 1.0e3, 1), NoConvergence);
}

TEST_CASE("canonical sign and normalisation") {
    std::vector<double> v{0.0, -1e-20, -3.0, 4.0};
    canonicalize(v);
    CHECK(v[2] == doctest::Approx(0.6));
    CHECK(v[3] == doctest::Approx(-0.8));
    CHECK(v[1] > 0.0);
}

TEST_CASE("full spectrum against the closed form") {
    for (double gamma : {0.5, 1.0, 3.0}) {
        const auto t = uniform(50, gamma);
        const auto d = full_spectrum(t);
        const auto ref = closed_form_spectrum(uniform_chain_params(1.0, 1.0, gamma), 50);
        CHECK(nhse_test::max_abs_diff(d.eigenvalues, ref.eigenvalues) <= 1e-10);
        for (std::size_t k = 0; k < 50; ++k) {
            CHECK(d.residuals[k] <= residual_tolerance(t));
            CHECK(nhse_test::max_abs_diff(d.eigenvectors[k], ref.eigenvectors[k]) <= 1e-8);
        }
        CHECK(std::accumulate(d.eigenvalues.begin(), d.eigenvalues.end(), 0.0) ==
              doctest::Approx(trace(t)).epsilon(1e-9));
    }
}

TEST_CASE("full spectrum against the characteristic polynomial") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = nhse_test::random_symmetrizable(rng, 5);
        const auto brute = nhse_test::brute_force_eigenvalues(t);
        REQUIRE(brute.size() == t.size());
        const auto d = full_spectrum(t);
        CHECK(nhse_test::max_abs_diff(d.eigenvalues, brute) <= 1e-9);
        for (double r : d.residuals) CHECK(r <= residual_tolerance(t));
    }
}

TEST_CASE("clustered eigenvalues get orthogonal eigenvectors") {
    TriMatrix t{{1.0, 1.0, 1.0, 2.0, 1.0}, {1e-30, 1e-30, 1e-30, 1e-30}, {1e-30, 1e-30, 1e-30, 1e-30}};
    const auto d = full_spectrum(t);
    CHECK(d.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(d.eigenvalues[3] == doctest::Approx(1.0));
    CHECK(d.eigenvalues[4] == doctest::Approx(2.0));
    for (std::size_t a = 0; a < 5; ++a) {
        for (std::size_t b = 0; b < 5; ++b) {
            const double ip = std::inner_product(d.eigenvectors[a].begin(), d.eigenvectors[a].end(),
                                                 d.eigenvectors[b].begin(), 0.0);
            CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) <= 1e-8);
        }
    }
}

TEST_CASE("strongly non-reciprocal chains stay accurate") {
    const auto t = uniform(200, 3.0);
    const auto d = full_spectrum(t);
    const auto ref = closed_form_spectrum(uniform_chain_params(1.0, 1.0, 3.0), 200);
    CHECK(nhse_test::max_abs_diff(d.eigenvalues, ref.eigenvalues) <= 1e-10 * ref.eigenvalues.back());
    for (std::size_t k = 0; k < 200; ++k) CHECK(nhse_test::max_abs_diff(d.eigenvectors[k], ref.eigenvectors[k]) <= 1e-8);
}

TEST_CASE("decay bound of unperturbed eigenvectors") {
    for (double gl : {0.5, 1.0, 3.0}) {
        for (std::size_t n : {10u, 30u, 50u}) {
            const auto p = uniform_chain_params(1.0, 1.0, gl);
            const auto d = full_spectrum(corner_toeplitz(p, n));
            const double pref = std::pow(1.0 + std::exp(gl / 2.0), 2.0);
            for (std::size_t k = 2; k <= n; ++k) {
                const auto x = closed_form_eigenvector(p, n, k);
                const auto& v = d.eigenvectors[k - 1];
                // Scale the solver vector onto the closed-form normalisation.
                const double c = std::inner_product(x.begin(), x.end(), v.begin(), 0.0) /
                                 std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
                for (std::size_t i = 0; i < n; ++i)
                    CHECK(std::abs(c * v[i]) <= pref * std::exp(-gl * static_cast<double>(i) / 2.0) + 1e-12);
            }
        }
    }
}

TEST_CASE("spectral norm") {
    TriMatrix zero{{0.0, 0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
    CHECK(spectral_norm(zero) == 0.0);
    TriMatrix pair{{0.0, 0.0}, {1.0}, {1.0}};
    CHECK(spectral_norm(pair) == doctest::Approx(1.0).epsilon(1e-13));
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const double eps = 0.01 * (trial + 1);
        const auto e = nhse_test::random_symmetric(rng, 30, eps);
        CHECK(spectral_norm(e) <= 3.0 * eps);
    }
    TriMatrix skew{{0.0, 0.0}, {1.0}, {-1.0}};
    CHECK_THROWS_AS(spectral_norm(skew), std::invalid_argument);
}

TEST_CASE("spectrum csv") {
    const auto d = full_spectrum(uniform(4, 1.0));
    std::ostringstream s, v;
    write_spectrum_csv(s, d);
    write_eigenvector_csv(v, d);
    CHECK(s.str().rfind("k,lambda,residual\n1,", 0) == 0);
    CHECK(v.str().rfind("k,v1,v2,v3,v4\n1,", 0) == 0);
    const std::string text = s.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}
