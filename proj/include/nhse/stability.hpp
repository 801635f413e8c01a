#pragma once

#include "nhse/capmat.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nhse {

/// Magnitudes |eta| <= |beta|, perturbation level eps < |beta| and size n.
struct BoundInputs {
    double eta = 0.0;
    double beta = 0.0;
    double eps = 0.0;
    std::size_t n = 2;

    void validate() const;
    /// sqrt(eta / beta)
    double s() const;
};

struct C2C3 {
    double c2 = 0.0;
    double c3 = 0.0;
};

struct CharacteristicRoots {
    double r_plus = 0.0;
    double r_minus = 0.0;
    double c = 0.0; // |cos((k-1) pi / n)| + C2 eps / sqrt(eta beta)
};

struct DecayCondition {
    double rho = 0.0;
    bool ok = false;
};

/// (beta + eta + eps) / sqrt(beta eta) + 1
double c1(const BoundInputs& in);
C2C3 c2_c3(const BoundInputs& in);
CharacteristicRoots characteristic_roots(std::size_t k, const BoundInputs& in);
/// rho = sqrt(eta/beta) * beta (eta + eps) / ((beta - eps) eta) * r_plus; ok iff rho < 1.
DecayCondition decay_condition(std::size_t k, const BoundInputs& in);

/// M_0..M_last from the three-term recurrence, evaluated directly.
/// Throws std::overflow_error once a term exceeds 1e300.
std::vector<double> m_sequence(std::size_t k, std::size_t last, const BoundInputs& in);
/// Same sequence from the characteristic roots: a+ r+^j + a- r-^j - C3 / (2c).
std::vector<double> m_closed_form(std::size_t k, std::size_t last, const BoundInputs& in);
/// zeta_{k,j} = (sqrt(eta/beta) beta (eta + eps) / ((beta - eps) eta))^j M_j.
double zeta_bound(std::size_t k, std::size_t j, const BoundInputs& in);

/// Bound inputs of a corner-Toeplitz matrix at perturbation level eps.
BoundInputs bound_inputs_of(const ToeplitzParams& params, std::size_t n, double eps);

struct EigenvalueCertificate {
    double eps = 0.0;       // realised max |That_ij - T_ij|
    double max_dev = 0.0;   // max_k |lambda_hat_k - lambda_k|, both sorted
    double bound = 0.0;     // C1 * eps
    bool pass = false;      // max_dev <= bound + 1e-9
};

/// T must be an unperturbed corner-Toeplitz matrix of size >= 3.
EigenvalueCertificate check_eigenvalue_stability(const TriMatrix& t, const TriMatrix& that);

/// Least-squares slope of ln|v_j| against j over the entries above
/// floor_rel * ||v||_inf. Throws DegenerateFit with fewer than 3 entries.
double fit_decay_rate(std::span<const double> v, double floor_rel = 1e-13);

struct DecayRecord {
    std::size_t k = 0;
    double r_plus = 0.0;
    double r_minus = 0.0;
    double rho = 0.0;
    bool decay_ok = false;
};

struct StabilityReport {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    std::vector<DecayRecord> records; // k = 2..n
    double eps = 0.0;
    double eigenvalue_max_dev = 0.0;
    double eigenvalue_bound = 0.0;
    bool pass = false;
};

/// Constants and per-k decay records at the realised eps of `that`, plus the
/// eigenvalue certificate.
StabilityReport stability_report(const TriMatrix& t, const TriMatrix& that);

std::string to_text(const StabilityReport& r);
/// `k,r_plus,rho,decay_ok`
void write_csv(std::ostream& out, const StabilityReport& r);

} // namespace nhse
