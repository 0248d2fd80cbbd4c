#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "frlab/operators.hpp"

namespace frlab {

enum class Family { dg, esfr, eesfr, ssdg, gsfr };

/// Which semi-discrete form the matrix filters: the full DG residual (K) or
/// only the lifted face terms (Q).
enum class Side { fdg, fr };

std::string family_name(Family f);
Family family_from_name(const std::string& s);

/// Scheme description. Parameter layout per family:
///   DG: {}; ESFR: {c_p}; EESFR: {q0, q1}; GSFR: {b_1..b_p};
///   SSDG: {c_1..c_p}, or the two-parameter shorthand {c_p, c_{p-1}} when the
///   length is 2 and p != 2 (at p = 2 a length-2 vector is read as {c_1, c_2}).
struct SchemeSpec {
    Family family = Family::dg;
    int p = 0;
    std::vector<double> params;
    double alpha = 0.0;  // numerical-flux blend: 0 upwind, 1 central

    void validate() const;
    std::vector<double> ssdg_coefficients() const;  // expanded c_1..c_p
};

void to_json(nlohmann::json& j, const SchemeSpec& s);
void from_json(const nlohmann::json& j, SchemeSpec& s);

/// A realized filter (K) or correction (Q) matrix in the Legendre basis,
/// bundled with its operators; the single object all analysis consumes.
struct FilterPair {
    Side side = Side::fdg;
    Eigen::MatrixXd A;   // K or Q
    Eigen::MatrixXd MA;  // M + A
    SchemeSpec spec;
    OperatorSet ops;

    int p() const { return ops.p; }
    /// Rebrand as the other form. Meaningful when the matrix is dual-valid
    /// (DG and ESFR); tests assert that property rather than the type.
    FilterPair with_side(Side s) const;
};

/// K = Q = c_p/2 (D^p)^T M D^p: a single (p,p) entry equal to k_p^2 c_p.
FilterPair esfr_filter(const OperatorSet& ops, double c_p);

/// K = 1/2 sum_k c_k (D^k)^T M D^k, c = {c_1..c_p}. Diagonal whenever only
/// c_{p-1}, c_p are nonzero; lower-order coefficients introduce symmetric
/// off-diagonal couplings between modes of equal parity.
FilterPair ssdg_filter(const OperatorSet& ops, const std::vector<double>& c);

/// Two-parameter symmetric Q: (p-1,p-1) = q1, (p,p) = q0,
/// (p-2,p) = (p,p-2) = -q1 (2p-1)/(2p-3). Requires p >= 2.
FilterPair eesfr_q(const OperatorSet& ops, double q0, double q1);

/// Q = sum_k b_k (D^k)^T M D^k, b = {b_1..b_p} (no 1/2 factor).
FilterPair gsfr_q(const OperatorSet& ops, const std::vector<double>& b);

FilterPair make_filter(const OperatorSet& ops, const SchemeSpec& spec);

enum class Canonical { dg, sd, hu, lower };

/// Named ESFR parameter values: 0, the spectral-difference and Huynh g2
/// recoveries, and the stability lower bound -2/((2p+1) k_p^2).
double canonical_c(int p, Canonical kind);

/// q0 = k_p^2 c_p, the ESFR -> EESFR parameter map at q1 = 0.
double esfr_to_eesfr_q0(int p, double c_p);

/// Positive definiteness of the symmetrized M + A (eigenvalues > 1e-12).
bool is_linearly_stable(const FilterPair& fp);

/// FDG side: first row of A vanishes; FR side: first row and column.
bool is_conservative(const FilterPair& fp);

/// Symmetry, Q D + D^T Q^T = 0, and commutation with J = diag((-1)^{i+1}).
bool eesfr_structure_check(const FilterPair& fp);

/// K D = 0 and M + K invertible (condition number < 1e12).
bool fdg_expressible_as_fr(const FilterPair& fp);

struct FdgRecovery {
    bool expressible = false;
    Eigen::MatrixXd K;
    double residual = 0.0;
};

/// Searches the K D = 0 family (free last column) for a filter matching the
/// lift vectors of Q; for alpha = 0 only the left-trace lift constrains K and
/// a match always exists.
FdgRecovery fr_expressible_as_fdg(const FilterPair& fp, double alpha);

// Closed-form stability bounds, used to cross-check the eigenvalue verdict.
double esfr_c_lower(int p);
double eesfr_q1_lower(int p);              // -2/(2p-1)
double eesfr_q1_upper(int p, double q0);   // sqrt(2(2p-3)/(2p-1)^2 (2/(2p+1)+q0))
double ssdg_cpm1_lower(int p);             // -2/(k_{p-1}^2 (2p-1))
double ssdg_cp_lower(int p, double c_pm1); // -c_{p-1}/3 - 2/(k_p^2 (2p+1))
/// The c_{p-1} stability bound as a function of c_p: the larger of the
/// dedicated bound and the rearranged c_p constraint.
double ssdg_cpm1_lower(int p, double c_p);

/// Names the violated closed-form bound (or the failed PD check), or nullopt
/// when the scheme is stable.
std::optional<std::string> stability_violation(const SchemeSpec& spec);

}  // namespace frlab
