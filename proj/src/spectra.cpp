#include "nhse/spectra.hpp"

#include "nhse/errors.hpp"
#include "nhse/format.hpp"
#include "nhse/random.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace nhse {

namespace {

double norm2(std::span<const double> v) {
    // Scaled accumulation; eigenvectors of non-reciprocal chains span hundreds
    // of orders of magnitude.
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double acc = 0.0;
    for (double x : v) {
        const double r = x / scale;
        acc += r * r;
    }
    return scale * std::sqrt(acc);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double residual_norm(const TriMatrix& t, std::span<const double> v, double lambda) {
    auto tv = t.apply(v);
    for (std::size_t i = 0; i < tv.size(); ++i) tv[i] -= lambda * v[i];
    return norm2(tv);
}

// Values x_i = sign_i * exp(log_i - max log), normalised to unit 2-norm.
std::vector<double> from_logs(const std::vector<double>& logs, const std::vector<double>& signs) {
    double top = -INFINITY;
    for (double l : logs) top = std::max(top, l);
    std::vector<double> out(logs.size(), 0.0);
    if (!std::isfinite(top)) return out;
    for (std::size_t i = 0; i < logs.size(); ++i)
        out[i] = signs[i] == 0.0 ? 0.0 : signs[i] * std::exp(logs[i] - top);
    const double nrm = norm2(out);
    for (double& x : out) x /= nrm;
    return out;
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// LU factorisation of a tridiagonal matrix with partial (row) pivoting; U has
// a second superdiagonal from the interchanges.
class PivotedTridiagonalLU {
public:
    PivotedTridiagonalLU(const TriMatrix& t, double shift, double pivot_floor)
        : n_(t.size()), dl_(t.sub), d_(t.diag), du_(t.sup), du2_(n_ > 2 ? n_ - 2 : 0, 0.0),
          swapped_(n_ > 0 ? n_ - 1 : 0, false) {
        for (double& x : d_) x -= shift;
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (std::abs(d_[i]) >= std::abs(dl_[i])) {
                const double fact = d_[i] != 0.0 ? dl_[i] / d_[i] : 0.0;
                dl_[i] = fact;
                d_[i + 1] -= fact * du_[i];
            } else {
                const double fact = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = fact;
                const double temp = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = temp - fact * d_[i + 1];
                if (i + 2 < n_) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -fact * du_[i + 1];
                }
                swapped_[i] = true;
            }
        }
        for (double& x : d_) {
            if (std::abs(x) < pivot_floor) x = x < 0.0 ? -pivot_floor : pivot_floor;
        }
    }

    void solve(std::vector<double>& b) const {
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (!swapped_[i]) {
                b[i + 1] -= dl_[i] * b[i];
            } else {
                const double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl_[i] * b[i];
            }
        }
        for (std::size_t ii = n_; ii-- > 0;) {
            double acc = b[ii];
            if (ii + 1 < n_) acc -= du_[ii] * b[ii + 1];
            if (ii + 2 < n_) acc -= du2_[ii] * b[ii + 2];
            b[ii] = acc / d_[ii];
        }
    }

private:
    std::size_t n_;
    std::vector<double> dl_, d_, du_, du2_;
    std::vector<bool> swapped_;
};

constexpr int kMaxInverseIterations = 10;
constexpr int kMinInverseIterations = 2;
constexpr std::uint64_t kSpectrumSeed = 0x5eedULL;

} // namespace

std::vector<double> Symmetrization::to_symmetric(std::span<const double> x) const {
    std::vector<double> logs(x.size()), signs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        signs[i] = sign_of(x[i]) * signature[i];
        logs[i] = x[i] == 0.0 ? -INFINITY : std::log(std::abs(x[i])) - log_scale[i];
    }
    return from_logs(logs, signs);
}

std::vector<double> Symmetrization::from_symmetric(std::span<const double> y) const {
    std::vector<double> logs(y.size()), signs(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        signs[i] = sign_of(y[i]) * signature[i];
        logs[i] = y[i] == 0.0 ? -INFINITY : std::log(std::abs(y[i])) + log_scale[i];
    }
    return from_logs(logs, signs);
}

void canonicalize(std::vector<double>& v) {
    const double nrm = norm2(v);
    if (nrm == 0.0 || !std::isfinite(nrm)) return;
    for (double& x : v) x /= nrm;
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    for (double x : v) {
        if (std::abs(x) > 1e-12 * vmax) {
            if (x < 0.0)
                for (double& y : v) y = -y;
            break;
        }
    }
}

double residual_tolerance(const TriMatrix& t) {
    return 1e-9 * t.max_abs_entry() * static_cast<double>(t.size());
}

namespace {

void check_closed_form_params(const ToeplitzParams& p, std::size_t n) {
    if (n < 2) throw std::invalid_argument("closed form needs n >= 2");
    if (!(p.eta * p.beta > 0.0)) throw std::invalid_argument("closed form needs eta*beta > 0");
    const double mag = std::max({std::abs(p.alpha), std::abs(p.eta), std::abs(p.beta)});
    const double tol = 1e-10 * mag;
    if (std::abs(p.a - p.eta) > tol || std::abs(p.b - p.beta) > tol)
        throw std::invalid_argument("closed form needs a = eta and b = beta");
    if (std::abs(p.eta + p.alpha + p.beta) > tol)
        throw std::invalid_argument("closed form needs eta + alpha + beta = 0");
}

} // namespace

double closed_form_eigenvalue(const ToeplitzParams& p, std::size_t n, std::size_t k) {
    check_closed_form_params(p, n);
    if (k < 1 || k > n) throw std::out_of_range("eigenvalue index out of range");
    if (k == 1) return 0.0;
    const double theta = std::numbers::pi * static_cast<double>(k - 1) / static_cast<double>(n);
    return p.alpha + 2.0 * std::sqrt(p.eta * p.beta) * std::cos(theta);
}

std::vector<double> closed_form_eigenvector(const ToeplitzParams& p, std::size_t n, std::size_t k) {
    check_closed_form_params(p, n);
    if (k < 2 || k > n) throw std::out_of_range("closed-form eigenvector index must be in [2, n]");
    double theta = std::numbers::pi * static_cast<double>(k - 1) / static_cast<double>(n);
    // The sine profile belongs to alpha + 2 sgn(eta) sqrt(eta beta) cos(theta);
    // reflect the angle so the vector pairs with eigenvalue k.
    if (p.eta < 0.0) theta = std::numbers::pi - theta;
    const double ratio = std::sqrt(p.eta / p.beta);
    std::vector<double> x(n);
    for (std::size_t j = 1; j <= n; ++j) {
        const double jd = static_cast<double>(j);
        const double pj = p.eta * std::sin(jd * theta) - p.eta * ratio * std::sin((jd - 1.0) * theta);
        x[j - 1] = std::pow(ratio, jd - 1.0) * pj;
    }
    return x;
}

SpectralDecomposition closed_form_spectrum(const ToeplitzParams& params, std::size_t n) {
    check_closed_form_params(params, n);
    const TriMatrix t = corner_toeplitz(params, n);
    std::vector<std::pair<double, std::vector<double>>> pairs;
    pairs.reserve(n);
    pairs.emplace_back(0.0, std::vector<double>(n, 1.0));
    for (std::size_t k = 2; k <= n; ++k)
        pairs.emplace_back(closed_form_eigenvalue(params, n, k),
                           closed_form_eigenvector(params, n, k));
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });
    SpectralDecomposition d;
    for (auto& [lambda, v] : pairs) {
        canonicalize(v);
        d.residuals.push_back(residual_norm(t, v, lambda));
        d.eigenvalues.push_back(lambda);
        d.eigenvectors.push_back(std::move(v));
    }
    return d;
}

Symmetrization symmetrize(const TriMatrix& t) {
    t.validate();
    const std::size_t n = t.size();
    Symmetrization s;
    s.sym_diag = t.diag;
    s.sym_off.resize(n - 1);
    s.log_scale.assign(n, 0.0);
    s.signature.assign(n, 1.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double prod = t.sub[i] * t.sup[i];
        if (!(prod > 0.0)) throw NotSymmetrizable(i, prod);
        s.sym_off[i] = std::sqrt(std::abs(t.sub[i])) * std::sqrt(std::abs(t.sup[i]));
        s.log_scale[i + 1] =
            s.log_scale[i] + 0.5 * (std::log(std::abs(t.sub[i])) - std::log(std::abs(t.sup[i])));
        s.signature[i + 1] = s.signature[i] * sign_of(t.sup[i]);
    }
    s.scale.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.scale[i] = std::exp(s.log_scale[i]);
    return s;
}

std::pair<double, double> gershgorin_interval(std::span<const double> diag,
                                              std::span<const double> off) {
    const std::size_t n = diag.size();
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(off[i - 1]);
        if (i + 1 < n) r += std::abs(off[i]);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    return {lo, hi};
}

namespace {

double pivot_minimum(std::span<const double> off) {
    double m = 1.0;
    for (double e : off) m = std::max(m, e * e);
    return DBL_MIN * m;
}

std::size_t sturm_count_impl(std::span<const double> diag, std::span<const double> off_sq,
                             double x, double pivmin) {
    std::size_t count = 0;
    double q = diag[0] - x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        q = diag[i] - x - off_sq[i - 1] / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

} // namespace

std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double x) {
    std::vector<double> off_sq(off.size());
    for (std::size_t i = 0; i < off.size(); ++i) off_sq[i] = off[i] * off[i];
    return sturm_count_impl(diag, off_sq, x, pivot_minimum(off));
}

std::vector<double> symmetric_tridiagonal_eigenvalues(std::span<const double> diag,
                                                      std::span<const double> off, double tol) {
    const std::size_t n = diag.size();
    if (n == 0) return {};
    if (off.size() + 1 != n) throw std::invalid_argument("off-diagonal length must be n-1");
    if (!(tol > 0.0)) throw std::invalid_argument("bisection tolerance must be positive");
    std::vector<double> off_sq(off.size());
    for (std::size_t i = 0; i < off.size(); ++i) off_sq[i] = off[i] * off[i];
    const double pivmin = pivot_minimum(off);

    auto [glo, ghi] = gershgorin_interval(diag, off);
    const double bnorm = std::max(std::abs(glo), std::abs(ghi));
    const double margin = 2.0 * DBL_EPSILON * bnorm * static_cast<double>(n) + 2.0 * pivmin;
    glo -= margin;
    ghi += margin;

    std::vector<double> eig(n);
    // Brackets shrink monotonically: eigenvalue k >= eigenvalue k-1.
    double floor_lo = glo;
    for (std::size_t k = 0; k < n; ++k) {
        double lo = floor_lo, hi = ghi;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (sturm_count_impl(diag, off_sq, mid, pivmin) > k)
                hi = mid;
            else
                lo = mid;
        }
        eig[k] = 0.5 * (lo + hi);
        floor_lo = lo;
    }
    return eig;
}

std::vector<double> eigenvalues_sturm(const Symmetrization& sym, double tol) {
    return symmetric_tridiagonal_eigenvalues(sym.sym_diag, sym.sym_off, tol);
}

InverseIterationResult eigenvector_inverse_iteration(const TriMatrix& t, double lambda,
                                                     std::uint64_t seed,
                                                     const Symmetrization* sym,
                                                     std::span<const std::vector<double>> cluster) {
    t.validate();
    if (!cluster.empty() && sym == nullptr)
        throw std::invalid_argument("cluster orthogonalisation needs the symmetrization");
    const std::size_t n = t.size();
    const double scale = std::max(t.max_abs_entry(), DBL_MIN);
    const double tol = residual_tolerance(t);
    const PivotedTridiagonalLU lu(t, lambda, DBL_EPSILON * scale);

    std::vector<std::vector<double>> cluster_sym;
    for (const auto& c : cluster) cluster_sym.push_back(sym->to_symmetric(c));

    const CounterRng rng(derive_seed(seed, StreamTag::start_vector, 0));
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = rng.symmetric(i, 1.0);
    {
        const double nz = norm2(z);
        for (double& x : z) x /= nz;
    }

    for (int it = 1; it <= kMaxInverseIterations; ++it) {
        std::vector<double> w = z;
        lu.solve(w);
        if (!std::isfinite(norm2(w))) {
            // Retry with a tiny right-hand side; growth along strongly
            // non-reciprocal chains can exceed the double range.
            w = z;
            for (double& x : w) x *= 0x1.0p-600;
            lu.solve(w);
            if (!std::isfinite(norm2(w))) throw NoConvergence("inverse iteration overflow");
        }
        if (!cluster_sym.empty()) {
            auto y = sym->to_symmetric(w);
            for (const auto& c : cluster_sym) {
                const double proj = dot(y, c);
                for (std::size_t i = 0; i < n; ++i) y[i] -= proj * c[i];
            }
            w = sym->from_symmetric(y);
        }
        const double nw = norm2(w);
        if (nw == 0.0) throw NoConvergence("inverse iteration collapsed to zero");
        // z ~ (lambda_true - lambda) w once converged.
        const double correction = dot(z, w) / (nw * nw);
        for (std::size_t i = 0; i < n; ++i) z[i] = w[i] / nw;
        if (it < kMinInverseIterations) continue;

        const double res = residual_norm(t, z, lambda);
        if (res <= tol) {
            canonicalize(z);
            return {z, lambda, residual_norm(t, z, lambda), it};
        }
        if (std::abs(correction) <= 1e-6 * scale) {
            const double refined = lambda + correction;
            const double res_refined = residual_norm(t, z, refined);
            if (res_refined <= tol) {
                canonicalize(z);
                return {z, refined, res_refined, it};
            }
        }
    }
    throw NoConvergence("inverse iteration did not converge for shift " + format_double(lambda));
}

SpectralDecomposition full_spectrum(const TriMatrix& t) {
    const Symmetrization sym = symmetrize(t);
    auto [lo, hi] = gershgorin_interval(sym.sym_diag, sym.sym_off);
    const double width = std::max(hi - lo, DBL_MIN);
    SpectralDecomposition d;
    d.eigenvalues = eigenvalues_sturm(sym, 1e-13 * width);

    const double cluster_gap = 1e-8 * width;
    std::size_t cluster_start = 0;
    for (std::size_t k = 0; k < d.eigenvalues.size(); ++k) {
        if (k == 0 || d.eigenvalues[k] - d.eigenvalues[k - 1] >= cluster_gap) cluster_start = k;
        std::span<const std::vector<double>> members(d.eigenvectors.data() + cluster_start,
                                                     k - cluster_start);
        auto r = eigenvector_inverse_iteration(t, d.eigenvalues[k], derive_seed(kSpectrumSeed, StreamTag::start_vector, k), &sym, members);
        d.residuals.push_back(residual_norm(t, r.vector, d.eigenvalues[k]));
        d.eigenvectors.push_back(std::move(r.vector));
    }
    return d;
}

double spectral_norm(const TriMatrix& t) {
    t.validate();
    const double tol = 1e-12 * std::max(1.0, t.max_abs_entry());
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (std::abs(t.sub[i] - t.sup[i]) > tol)
            throw std::invalid_argument("spectral_norm needs a symmetric matrix (index " +
                                        std::to_string(i) + ")");
    }
    std::vector<double> off(t.sub.size());
    for (std::size_t i = 0; i < off.size(); ++i) off[i] = std::abs(t.sub[i]);
    auto [lo, hi] = gershgorin_interval(t.diag, off);
    const double width = hi - lo;
    if (width == 0.0) return std::abs(t.diag[0]);
    const auto eig = symmetric_tridiagonal_eigenvalues(t.diag, off, 1e-14 * width);
    return std::max(std::abs(eig.front()), std::abs(eig.back()));
}

void write_spectrum_csv(std::ostream& out, const SpectralDecomposition& d) {
    out << "k,lambda,residual\n";
    for (std::size_t k = 0; k < d.size(); ++k)
        out << k + 1 << ',' << format_double(d.eigenvalues[k]) << ','
            << format_double(d.residuals[k]) << '\n';
}

void write_eigenvector_csv(std::ostream& out, const SpectralDecomposition& d) {
    const std::size_t n = d.size();
    out << 'k';
    for (std::size_t j = 1; j <= n; ++j) out << ",v" << j;
    out << '\n';
    for (std::size_t k = 0; k < n; ++k) {
        out << k + 1;
        for (double x : d.eigenvectors[k]) out << ',' << format_double(x);
        out << '\n';
    }
}

} // namespace nhse
