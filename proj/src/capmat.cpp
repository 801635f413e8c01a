#include "nhse/capmat.hpp"

#include "nhse/format.hpp"
#include "nhse/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace nhse {

namespace {

constexpr double kSmallGamma = 1e-8;
constexpr double kOverflowGamma = 710.0;

// gamma / (e^{gamma ell} - 1): coupling towards the left neighbour.
double backward_factor(double gamma, double ell) {
    const double x = gamma * ell;
    if (std::abs(x) < kSmallGamma) return 1.0 / ell - 0.5 * gamma;
    return gamma / std::expm1(x);
}

// gamma e^{gamma ell} / (e^{gamma ell} - 1): coupling towards the right neighbour.
double forward_factor(double gamma, double ell) {
    const double x = gamma * ell;
    if (std::abs(x) < kSmallGamma) return 1.0 / ell + 0.5 * gamma;
    return -gamma / std::expm1(-x);
}

void check_finite(const std::vector<double>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]))
            throw std::invalid_argument(std::string("non-finite ") + name + " entry at index " +
                                        std::to_string(i));
    }
}

} // namespace

void TriMatrix::validate() const {
    if (diag.empty()) throw std::invalid_argument("empty tridiagonal matrix");
    if (sub.size() + 1 != diag.size() || sup.size() + 1 != diag.size())
        throw std::invalid_argument("inconsistent tridiagonal lengths: diag " +
                                    std::to_string(diag.size()) + ", sub " +
                                    std::to_string(sub.size()) + ", sup " +
                                    std::to_string(sup.size()));
    check_finite(diag, "diag");
    check_finite(sub, "sub");
    check_finite(sup, "sup");
}

double TriMatrix::max_abs_entry() const {
    double m = 0.0;
    for (double x : diag) m = std::max(m, std::abs(x));
    for (double x : sub) m = std::max(m, std::abs(x));
    for (double x : sup) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> TriMatrix::apply(std::span<const double> x) const {
    const std::size_t n = size();
    if (x.size() != n) throw std::invalid_argument("dimension mismatch in TriMatrix::apply");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = diag[i] * x[i];
        if (i > 0) acc += sub[i - 1] * x[i - 1];
        if (i + 1 < n) acc += sup[i] * x[i + 1];
        y[i] = acc;
    }
    return y;
}

double TriMatrix::max_row_sum() const {
    const std::size_t n = size();
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = diag[i];
        if (i > 0) acc += sub[i - 1];
        if (i + 1 < n) acc += sup[i];
        m = std::max(m, std::abs(acc));
    }
    return m;
}

void ToeplitzParams::validate() const {
    if (!(eta * beta > 0.0))
        throw std::invalid_argument("Toeplitz parameters need eta*beta > 0 (eta = " +
                                    format_double(eta) + ", beta = " + format_double(beta) + ")");
}

TriMatrix gauge_capacitance(const ChainConfig& chain) {
    chain.validate();
    const std::size_t n = chain.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(chain.gammas[i] * chain.ell) >= kOverflowGamma)
            throw std::overflow_error("|gamma*ell| >= 710 at resonator " + std::to_string(i) +
                                      " overflows the exponential");
    }
    TriMatrix t;
    t.diag.assign(n, 0.0);
    t.sub.assign(n - 1, 0.0);
    t.sup.assign(n - 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double g = chain.gammas[i];
        if (i > 0) {
            const double left = backward_factor(g, chain.ell) / chain.spacings[i - 1];
            t.diag[i] += left;
            t.sub[i - 1] = -left;
        }
        if (i + 1 < n) {
            const double right = forward_factor(g, chain.ell) / chain.spacings[i];
            t.diag[i] += right;
            t.sup[i] = -right;
        }
    }
    return t;
}

ToeplitzParams uniform_chain_params(double ell, double s, double gamma) {
    if (!(ell > 0.0) || !(s > 0.0))
        throw std::invalid_argument("ell and s must be positive");
    if (std::abs(gamma * ell) >= kOverflowGamma)
        throw std::overflow_error("|gamma*ell| >= 710 overflows the exponential");
    ToeplitzParams p;
    p.eta = -backward_factor(gamma, ell) / s;
    p.beta = -forward_factor(gamma, ell) / s;
    p.alpha = -(p.eta + p.beta);
    p.a = p.eta;
    p.b = p.beta;
    return p;
}

TriMatrix corner_toeplitz(const ToeplitzParams& params, std::size_t n) {
    if (n < 2) throw std::invalid_argument("corner Toeplitz matrix needs n >= 2");
    params.validate();
    TriMatrix t;
    t.diag.assign(n, params.alpha);
    t.diag.front() += params.a;
    t.diag.back() += params.b;
    t.sub.assign(n - 1, params.eta);
    t.sup.assign(n - 1, params.beta);
    return t;
}

PerturbedMatrix entrywise_perturb(const TriMatrix& t, double eps, std::uint64_t seed) {
    t.validate();
    if (!(eps >= 0.0)) throw std::invalid_argument("perturbation level must be >= 0");
    PerturbedMatrix out{t, 0.0, false};
    const std::size_t n = t.size();
    double min_off = INFINITY;
    for (std::size_t i = 0; i + 1 < n; ++i)
        min_off = std::min({min_off, std::abs(t.sub[i]), std::abs(t.sup[i])});
    out.sign_warning = n > 1 && eps >= min_off;
    if (eps == 0.0) return out;

    // Counters: diag at [0, n), sub at [n, 2n-1), sup at [2n, 3n-1).
    const CounterRng rng(derive_seed(seed, StreamTag::entrywise, 0));
    double realised = 0.0;
    auto shift = [&](double& entry, std::uint64_t counter) {
        const double u = rng.symmetric(counter, eps);
        realised = std::max(realised, std::abs(u));
        entry += u;
    };
    for (std::size_t i = 0; i < n; ++i) shift(out.matrix.diag[i], i);
    for (std::size_t i = 0; i + 1 < n; ++i) shift(out.matrix.sub[i], n + i);
    for (std::size_t i = 0; i + 1 < n; ++i) shift(out.matrix.sup[i], 2 * n + i);
    out.effective_eps = realised;
    return out;
}

std::string ToeplitzMismatch::message() const {
    return field + "[" + std::to_string(index) + "] = " + format_double(value) +
           " differs from " + format_double(reference);
}

std::variant<ToeplitzParams, ToeplitzMismatch> toeplitz_params_of(const TriMatrix& t, double tol) {
    t.validate();
    const std::size_t n = t.size();
    if (n < 3) throw std::invalid_argument("toeplitz_params_of needs n >= 3");
    ToeplitzParams p;
    p.alpha = t.diag[1];
    p.eta = t.sub[0];
    p.beta = t.sup[0];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (std::abs(t.diag[i] - p.alpha) > tol) return ToeplitzMismatch{"diag", i, t.diag[i], p.alpha};
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(t.sub[i] - p.eta) > tol) return ToeplitzMismatch{"sub", i, t.sub[i], p.eta};
        if (std::abs(t.sup[i] - p.beta) > tol) return ToeplitzMismatch{"sup", i, t.sup[i], p.beta};
    }
    if (!(p.eta * p.beta > 0.0)) return ToeplitzMismatch{"eta*beta", 0, p.eta * p.beta, 0.0};
    p.a = t.diag.front() - p.alpha;
    p.b = t.diag.back() - p.alpha;
    return p;
}

double max_entry_deviation(const TriMatrix& a, const TriMatrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.diag[i] - b.diag[i]));
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        m = std::max(m, std::abs(a.sub[i] - b.sub[i]));
        m = std::max(m, std::abs(a.sup[i] - b.sup[i]));
    }
    return m;
}

void write_csv(std::ostream& out, const TriMatrix& t) {
    auto row = [&](const char* name, const std::vector<double>& v, bool pad) {
        out << name;
        if (pad) out << ',';
        for (double x : v) out << ',' << format_double(x);
        out << '\n';
    };
    row("sub", t.sub, true);
    row("diag", t.diag, false);
    row("sup", t.sup, true);
}

std::string to_text(const TriMatrix& t) {
    nlohmann::ordered_json j;
    j["n"] = t.size();
    j["diag"] = t.diag;
    j["sub"] = t.sub;
    j["sup"] = t.sup;
    return j.dump(2) + "\n";
}

TriMatrix tri_matrix_from_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    TriMatrix t;
    t.diag = j.at("diag").get<std::vector<double>>();
    t.sub = j.at("sub").get<std::vector<double>>();
    t.sup = j.at("sup").get<std::vector<double>>();
    if (j.at("n").get<std::size_t>() != t.diag.size())
        throw std::invalid_argument("field n does not match diag length");
    t.validate();
    return t;
}

} // namespace nhse
