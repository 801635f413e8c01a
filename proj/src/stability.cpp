#include "nhse/stability.hpp"

#include "nhse/errors.hpp"
#include "nhse/format.hpp"
#include "nhse/spectra.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace nhse {

namespace {

constexpr double kOverflowLimit = 1e300;

double abs_cos(std::size_t k, std::size_t n) {
    return std::abs(std::cos(std::numbers::pi * static_cast<double>(k - 1) / static_cast<double>(n)));
}

void check_index(std::size_t k, const BoundInputs& in) {
    if (k < 2 || k > in.n)
        throw std::out_of_range("k = " + std::to_string(k) + " outside [2, " +
                                std::to_string(in.n) + "]");
}

double contraction_factor(const BoundInputs& in) {
    return in.s() * (in.beta * (in.eta + in.eps)) / ((in.beta - in.eps) * in.eta);
}

} // namespace

void BoundInputs::validate() const {
    if (!(eta > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("bound inputs need eta > 0 and beta > 0");
    if (!(eps >= 0.0)) throw std::invalid_argument("eps must be >= 0");
    if (!(eps < beta))
        throw std::invalid_argument("eps = " + format_double(eps) + " must be below beta = " +
                                    format_double(beta));
    if (eta > beta) throw std::invalid_argument("bound inputs need eta <= beta");
    if (n < 2) throw std::invalid_argument("bound inputs need n >= 2");
}

double BoundInputs::s() const { return std::sqrt(eta / beta); }

double c1(const BoundInputs& in) {
    in.validate();
    return (in.beta + in.eta + in.eps) / std::sqrt(in.beta * in.eta) + 1.0;
}

C2C3 c2_c3(const BoundInputs& in) {
    in.validate();
    const double c2 = (in.beta + in.eta + in.eps) / (2.0 * std::sqrt(in.beta * in.eta)) + 1.0;
    const double s = in.s();
    return {c2, (1.0 + 2.0 * c2 * s + s * s) * (1.0 + s)};
}

CharacteristicRoots characteristic_roots(std::size_t k, const BoundInputs& in) {
    check_index(k, in);
    const double c2 = c2_c3(in).c2;
    const double c = abs_cos(k, in.n) + c2 * in.eps / std::sqrt(in.eta * in.beta);
    const double root = std::sqrt(c * c + 1.0);
    // r- = -1 / r+ avoids cancellation.
    return {c + root, -1.0 / (c + root), c};
}

DecayCondition decay_condition(std::size_t k, const BoundInputs& in) {
    const double rho = contraction_factor(in) * characteristic_roots(k, in).r_plus;
    return {rho, rho < 1.0};
}

std::vector<double> m_sequence(std::size_t k, std::size_t last, const BoundInputs& in) {
    check_index(k, in);
    const auto [c2, c3] = c2_c3(in);
    const double s = in.s();
    const double cosv = abs_cos(k, in.n);
    const double c = characteristic_roots(k, in).c;
    std::vector<double> m{1.0};
    if (last == 0) return m;
    m.push_back(s * (1.0 + s) * (2.0 * c2 + s) + s + 2.0 * cosv +
                2.0 * c2 * in.eps / std::sqrt(in.eta * in.beta));
    for (std::size_t j = 1; j < last; ++j) {
        const double next = 2.0 * c * m[j] + m[j - 1] + c3;
        if (!(next <= kOverflowLimit))
            throw std::overflow_error("M_j exceeds 1e300 at j = " + std::to_string(j + 1));
        m.push_back(next);
    }
    return m;
}

std::vector<double> m_closed_form(std::size_t k, std::size_t last, const BoundInputs& in) {
    const auto roots = characteristic_roots(k, in);
    if (roots.c == 0.0) throw std::domain_error("closed form of M_j needs c != 0");
    const double c3 = c2_c3(in).c3;
    const auto first = m_sequence(k, 1, in);
    const double shift = c3 / (2.0 * roots.c);
    const double m0 = first[0] + shift;
    const double m1 = first[1] + shift;
    const double a_plus = (m1 - roots.r_minus * m0) / (roots.r_plus - roots.r_minus);
    const double a_minus = m0 - a_plus;
    std::vector<double> out(last + 1);
    for (std::size_t j = 0; j <= last; ++j) {
        const double jd = static_cast<double>(j);
        out[j] = a_plus * std::pow(roots.r_plus, jd) + a_minus * std::pow(roots.r_minus, jd) - shift;
    }
    return out;
}

double zeta_bound(std::size_t k, std::size_t j, const BoundInputs& in) {
    if (j >= in.n) throw std::out_of_range("j must be < n");
    const auto m = m_sequence(k, j, in);
    const double z = std::pow(contraction_factor(in), static_cast<double>(j)) * m[j];
    if (!(z <= kOverflowLimit))
        throw std::overflow_error("zeta exceeds 1e300 at j = " + std::to_string(j));
    return z;
}

BoundInputs bound_inputs_of(const ToeplitzParams& params, std::size_t n, double eps) {
    const double e = std::abs(params.eta), b = std::abs(params.beta);
    return {std::min(e, b), std::max(e, b), eps, n};
}

namespace {

ToeplitzParams params_of(const TriMatrix& t) {
    const auto parsed = toeplitz_params_of(t, 1e-12 * std::max(1.0, t.max_abs_entry()));
    if (const auto* mm = std::get_if<ToeplitzMismatch>(&parsed))
        throw std::invalid_argument("reference matrix is not corner-Toeplitz: " + mm->message());
    return std::get<ToeplitzParams>(parsed);
}

} // namespace

EigenvalueCertificate check_eigenvalue_stability(const TriMatrix& t, const TriMatrix& that) {
    if (t.size() != that.size())
        throw std::invalid_argument("dimension mismatch: " + std::to_string(t.size()) + " vs " +
                                    std::to_string(that.size()));
    const ToeplitzParams p = params_of(t);
    EigenvalueCertificate cert;
    cert.eps = max_entry_deviation(t, that);
    const double e = std::abs(p.eta), b = std::abs(p.beta);
    const double c1v = (b + e + cert.eps) / std::sqrt(b * e) + 1.0;
    cert.bound = c1v * cert.eps;

    const auto lam = full_spectrum(t).eigenvalues;
    const auto lam_hat = full_spectrum(that).eigenvalues;
    for (std::size_t k = 0; k < lam.size(); ++k)
        cert.max_dev = std::max(cert.max_dev, std::abs(lam_hat[k] - lam[k]));
    cert.pass = cert.max_dev <= cert.bound + 1e-9;
    return cert;
}

double fit_decay_rate(std::span<const double> v, double floor_rel) {
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    if (vmax == 0.0) throw std::invalid_argument("fit_decay_rate needs a nonzero vector");
    std::vector<double> xs, ys;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (std::abs(v[j]) > floor_rel * vmax) {
            xs.push_back(static_cast<double>(j + 1));
            ys.push_back(std::log(std::abs(v[j]) / vmax));
        }
    }
    if (xs.size() < 3)
        throw DegenerateFit("only " + std::to_string(xs.size()) +
                            " entries above the floor; need at least 3");
    const double count = static_cast<double>(xs.size());
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= count;
    ybar /= count;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
    }
    return sxy / sxx;
}

StabilityReport stability_report(const TriMatrix& t, const TriMatrix& that) {
    const auto cert = check_eigenvalue_stability(t, that);
    const BoundInputs in = bound_inputs_of(params_of(t), t.size(), cert.eps);
    StabilityReport r;
    r.c1 = c1(in);
    const auto [c2v, c3v] = c2_c3(in);
    r.c2 = c2v;
    r.c3 = c3v;
    for (std::size_t k = 2; k <= in.n; ++k) {
        const auto roots = characteristic_roots(k, in);
        const auto dc = decay_condition(k, in);
        r.records.push_back({k, roots.r_plus, roots.r_minus, dc.rho, dc.ok});
    }
    r.eps = cert.eps;
    r.eigenvalue_max_dev = cert.max_dev;
    r.eigenvalue_bound = cert.bound;
    r.pass = cert.pass;
    return r;
}

std::string to_text(const StabilityReport& r) {
    nlohmann::ordered_json j;
    j["c1"] = r.c1;
    j["c2"] = r.c2;
    j["c3"] = r.c3;
    j["eps"] = r.eps;
    j["eigenvalue_max_dev"] = r.eigenvalue_max_dev;
    j["eigenvalue_bound"] = r.eigenvalue_bound;
    j["pass"] = r.pass;
    auto& recs = j["records"] = nlohmann::ordered_json::array();
    for (const auto& rec : r.records) {
        nlohmann::ordered_json e;
        e["k"] = rec.k;
        e["r_plus"] = rec.r_plus;
        e["r_minus"] = rec.r_minus;
        e["rho"] = rec.rho;
        e["decay_ok"] = rec.decay_ok;
        recs.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

void write_csv(std::ostream& out, const StabilityReport& r) {
    out << "k,r_plus,rho,decay_ok\n";
    for (const auto& rec : r.records)
        out << rec.k << ',' << format_double(rec.r_plus) << ',' << format_double(rec.rho) << ','
            << (rec.decay_ok ? 1 : 0) << '\n';
}

} // namespace nhse
