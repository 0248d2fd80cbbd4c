#include "frlab/schemes.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace frlab {

namespace {

constexpr double pd_eig_threshold = 1e-12;
constexpr double zero_row_tol = 1e-14;
constexpr double structure_tol = 1e-12;
constexpr double kd_tol = 1e-12;
constexpr double cond_limit = 1e12;
constexpr double recovery_tol = 1e-10;

void require_legendre(const OperatorSet& ops, const char* who) {
    if (ops.basis != Basis::legendre)
        throw std::invalid_argument(std::string(who) + ": operators must be in the Legendre basis");
}

double condition_number(const Eigen::MatrixXd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / (s(s.size() - 1));
}

FilterPair finish(const OperatorSet& ops, Eigen::MatrixXd A, Side side, SchemeSpec spec) {
    FilterPair fp;
    fp.side = side;
    fp.MA = ops.M + A;
    fp.A = std::move(A);
    fp.spec = std::move(spec);
    fp.ops = ops;
    return fp;
}

// sum_k coeff_k (D^k)^T M D^k, the shared SSDG/GSFR kernel.
Eigen::MatrixXd sobolev_sum(const OperatorSet& ops, const std::vector<double>& coeff) {
    const int n = ops.p + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd Dk = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t k = 0; k < coeff.size(); ++k) {
        Dk = (Dk * ops.D).eval();
        if (coeff[k] != 0.0) A += coeff[k] * (Dk.transpose() * ops.M * Dk);
    }
    return A;
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::dg: return "DG";
        case Family::esfr: return "ESFR";
        case Family::eesfr: return "EESFR";
        case Family::ssdg: return "SSDG";
        case Family::gsfr: return "GSFR";
    }
    throw std::logic_error("family_name: bad tag");
}

Family family_from_name(const std::string& s) {
    if (s == "DG") return Family::dg;
    if (s == "ESFR") return Family::esfr;
    if (s == "EESFR") return Family::eesfr;
    if (s == "SSDG") return Family::ssdg;
    if (s == "GSFR") return Family::gsfr;
    throw std::invalid_argument("unknown scheme family '" + s + "'");
}

void SchemeSpec::validate() const {
    if (p < 0 || p > max_degree) throw std::invalid_argument("SchemeSpec: p out of range");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("SchemeSpec: alpha must lie in [0,1]");
    const auto n = params.size();
    switch (family) {
        case Family::dg:
            if (n != 0) throw std::invalid_argument("SchemeSpec: DG takes no parameters");
            break;
        case Family::esfr:
            if (n != 1) throw std::invalid_argument("SchemeSpec: ESFR takes params {c_p}");
            break;
        case Family::eesfr:
            if (n != 2) throw std::invalid_argument("SchemeSpec: EESFR takes params {q0, q1}");
            if (p < 2) throw std::invalid_argument("SchemeSpec: EESFR requires p >= 2");
            break;
        case Family::ssdg:
            if (n != static_cast<std::size_t>(p) && !(n == 2 && p >= 2))
                throw std::invalid_argument(
                    "SchemeSpec: SSDG takes params {c_1..c_p} or the two-parameter form {c_p, c_{p-1}}");
            break;
        case Family::gsfr:
            if (n != static_cast<std::size_t>(p))
                throw std::invalid_argument("SchemeSpec: GSFR takes params {b_1..b_p}");
            break;
    }
}

std::vector<double> SchemeSpec::ssdg_coefficients() const {
    if (family != Family::ssdg) throw std::logic_error("ssdg_coefficients: not an SSDG spec");
    if (params.size() == static_cast<std::size_t>(p)) return params;
    // two-parameter shorthand {c_p, c_{p-1}}; unambiguous only for p > 2
    std::vector<double> c(static_cast<std::size_t>(p), 0.0);
    c[p - 1] = params[0];
    c[p - 2] = params[1];
    return c;
}

void to_json(nlohmann::json& j, const SchemeSpec& s) {
    j = nlohmann::json{{"family", family_name(s.family)},
                       {"p", s.p},
                       {"params", s.params},
                       {"alpha", s.alpha}};
}

void from_json(const nlohmann::json& j, SchemeSpec& s) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "family" && key != "p" && key != "params" && key != "alpha")
            throw std::invalid_argument("SchemeSpec: unknown key '" + key + "'");
    }
    s.family = family_from_name(j.at("family").get<std::string>());
    s.p = j.at("p").get<int>();
    s.params = j.value("params", std::vector<double>{});
    s.alpha = j.value("alpha", 0.0);
    s.validate();
}

FilterPair FilterPair::with_side(Side s) const {
    FilterPair fp = *this;
    fp.side = s;
    return fp;
}

FilterPair esfr_filter(const OperatorSet& ops, double c_p) {
    require_legendre(ops, "esfr_filter");
    // closed form of c_p/2 (D^p)^T M D^p: D^p has the single entry k_p at (0,p)
    const int n = ops.p + 1;
    const double kp = kp_constant(ops.p);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    A(ops.p, ops.p) = kp * kp * c_p;
    SchemeSpec spec{Family::esfr, ops.p, {c_p}, 0.0};
    return finish(ops, std::move(A), Side::fdg, std::move(spec));
}

FilterPair ssdg_filter(const OperatorSet& ops, const std::vector<double>& c) {
    require_legendre(ops, "ssdg_filter");
    if (c.size() != static_cast<std::size_t>(ops.p))
        throw std::invalid_argument("ssdg_filter: expected p coefficients c_1..c_p");
    std::vector<double> half(c);
    for (double& v : half) v *= 0.5;
    SchemeSpec spec{Family::ssdg, ops.p, c, 0.0};
    return finish(ops, sobolev_sum(ops, half), Side::fdg, std::move(spec));
}

FilterPair eesfr_q(const OperatorSet& ops, double q0, double q1) {
    require_legendre(ops, "eesfr_q");
    const int p = ops.p;
    if (p < 2) throw std::invalid_argument("eesfr_q: requires p >= 2");
    const int n = p + 1;
    const double beta = (2.0 * p - 1.0) / (2.0 * p - 3.0);
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
    Q(p - 1, p - 1) = q1;
    Q(p, p) = q0;
    Q(p - 2, p) = Q(p, p - 2) = -beta * q1;
    SchemeSpec spec{Family::eesfr, p, {q0, q1}, 0.0};
    return finish(ops, std::move(Q), Side::fr, std::move(spec));
}

FilterPair gsfr_q(const OperatorSet& ops, const std::vector<double>& b) {
    require_legendre(ops, "gsfr_q");
    if (b.size() != static_cast<std::size_t>(ops.p))
        throw std::invalid_argument("gsfr_q: expected p coefficients b_1..b_p");
    SchemeSpec spec{Family::gsfr, ops.p, b, 0.0};
    return finish(ops, sobolev_sum(ops, b), Side::fr, std::move(spec));
}

FilterPair make_filter(const OperatorSet& ops, const SchemeSpec& spec) {
    spec.validate();
    if (spec.p != ops.p) throw std::invalid_argument("make_filter: degree mismatch");
    FilterPair fp;
    switch (spec.family) {
        case Family::dg: {
            const int n = ops.p + 1;
            fp = finish(ops, Eigen::MatrixXd::Zero(n, n), Side::fdg, spec);
            return fp;
        }
        case Family::esfr: fp = esfr_filter(ops, spec.params[0]); break;
        case Family::eesfr: fp = eesfr_q(ops, spec.params[0], spec.params[1]); break;
        case Family::ssdg: fp = ssdg_filter(ops, spec.ssdg_coefficients()); break;
        case Family::gsfr: fp = gsfr_q(ops, spec.params); break;
    }
    fp.spec = spec;  // keep the caller's alpha and parameter layout
    return fp;
}

double canonical_c(int p, Canonical kind) {
    if (p < 1) throw std::invalid_argument("canonical_c: requires p >= 1");
    const double kp2 = kp_constant(p) * kp_constant(p);
    switch (kind) {
        case Canonical::dg: return 0.0;
        case Canonical::sd: return 2.0 * p / ((2.0 * p + 1.0) * (p + 1.0) * kp2);
        case Canonical::hu: return 2.0 * (p + 1.0) / ((2.0 * p + 1.0) * p * kp2);
        case Canonical::lower: return -2.0 / ((2.0 * p + 1.0) * kp2);
    }
    throw std::logic_error("canonical_c: bad tag");
}

double esfr_to_eesfr_q0(int p, double c_p) {
    if (p < 1) throw std::invalid_argument("esfr_to_eesfr_q0: requires p >= 1");
    const double kp = kp_constant(p);
    return kp * kp * c_p;
}

bool is_linearly_stable(const FilterPair& fp) {
    const Eigen::MatrixXd sym = 0.5 * (fp.MA + fp.MA.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > pd_eig_threshold;
}

bool is_conservative(const FilterPair& fp) {
    const bool row0 = fp.A.row(0).lpNorm<Eigen::Infinity>() < zero_row_tol;
    if (fp.side == Side::fdg) return row0;
    return row0 && fp.A.col(0).lpNorm<Eigen::Infinity>() < zero_row_tol;
}

bool eesfr_structure_check(const FilterPair& fp) {
    const Eigen::MatrixXd& Q = fp.A;
    if ((Q - Q.transpose()).lpNorm<Eigen::Infinity>() >= structure_tol) return false;
    const Eigen::MatrixXd anti = Q * fp.ops.D + fp.ops.D.transpose() * Q.transpose();
    if (anti.lpNorm<Eigen::Infinity>() >= structure_tol) return false;
    const int n = fp.p() + 1;
    Eigen::VectorXd jdiag(n);
    for (int i = 0; i < n; ++i) jdiag(i) = (i % 2 == 0) ? -1.0 : 1.0;
    const Eigen::MatrixXd J = jdiag.asDiagonal();
    return (J * Q - Q * J).lpNorm<Eigen::Infinity>() < structure_tol;
}

bool fdg_expressible_as_fr(const FilterPair& fp) {
    if ((fp.A * fp.ops.D).lpNorm<Eigen::Infinity>() >= kd_tol) return false;
    return condition_number(fp.MA) < cond_limit;
}

FdgRecovery fr_expressible_as_fdg(const FilterPair& fp, double alpha) {
    const int n = fp.p() + 1;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(fp.MA);
    if (!lu.isInvertible()) throw std::runtime_error("fr_expressible_as_fdg: singular M + Q");
    const Eigen::VectorXd x = lu.solve(fp.ops.r);  // (M+Q)^{-1} r
    const Eigen::VectorXd y = lu.solve(fp.ops.l);  // (M+Q)^{-1} l

    // K D = 0 forces K = kappa e_p^T (free last column); each lift constraint
    // (M+K)^{-1} v = (M+Q)^{-1} v becomes kappa * v_p = v - M v'.
    const bool both = alpha != 0.0;
    const int rows = both ? 2 * n : n;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(rows, n);
    Eigen::VectorXd rhs(rows);
    // upwind lifts only through l; the r constraint drops out at alpha = 0
    C.topLeftCorner(n, n) = y(n - 1) * Eigen::MatrixXd::Identity(n, n);
    rhs.head(n) = fp.ops.l - fp.ops.M * y;
    if (both) {
        C.bottomLeftCorner(n, n) = x(n - 1) * Eigen::MatrixXd::Identity(n, n);
        rhs.tail(n) = fp.ops.r - fp.ops.M * x;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0 || sv(0) / sv(sv.size() - 1) > cond_limit)
        throw std::runtime_error("fr_expressible_as_fdg: ill-conditioned constraint system");
    const Eigen::VectorXd kappa = svd.solve(rhs);

    FdgRecovery out;
    out.residual = (C * kappa - rhs).lpNorm<Eigen::Infinity>();
    out.K = Eigen::MatrixXd::Zero(n, n);
    out.K.col(n - 1) = kappa;
    Eigen::FullPivLU<Eigen::MatrixXd> lu_mk(fp.ops.M + out.K);
    out.expressible = out.residual < recovery_tol && lu_mk.isInvertible();
    return out;
}

double esfr_c_lower(int p) { return canonical_c(p, Canonical::lower); }

double eesfr_q1_lower(int p) { return -2.0 / (2.0 * p - 1.0); }

double eesfr_q1_upper(int p, double q0) {
    const double arg = 2.0 * (2.0 * p - 3.0) / ((2.0 * p - 1.0) * (2.0 * p - 1.0)) *
                       (2.0 / (2.0 * p + 1.0) + q0);
    return arg < 0.0 ? std::numeric_limits<double>::quiet_NaN() : std::sqrt(arg);
}

double ssdg_cpm1_lower(int p) {
    const double km1 = kp_constant(p - 1);
    return -2.0 / (km1 * km1 * (2.0 * p - 1.0));
}

double ssdg_cp_lower(int p, double c_pm1) {
    const double kp = kp_constant(p);
    return -c_pm1 / 3.0 - 2.0 / (kp * kp * (2.0 * p + 1.0));
}

double ssdg_cpm1_lower(int p, double c_p) {
    const double kp = kp_constant(p);
    return std::max(ssdg_cpm1_lower(p), -3.0 * c_p - 6.0 / (kp * kp * (2.0 * p + 1.0)));
}

std::optional<std::string> stability_violation(const SchemeSpec& spec) {
    spec.validate();
    std::ostringstream msg;
    switch (spec.family) {
        case Family::dg:
            return std::nullopt;
        case Family::esfr: {
            const double lo = esfr_c_lower(spec.p);
            if (spec.params[0] > lo) return std::nullopt;
            msg << "ESFR requires c_p > -2/((2p+1) k_p^2) = " << lo << "; got c_p = " << spec.params[0];
            return msg.str();
        }
        case Family::eesfr: {
            const double q0 = spec.params[0], q1 = spec.params[1];
            const double lo = eesfr_q1_lower(spec.p);
            if (!(q1 > lo)) {
                msg << "EESFR requires q1 > -2/(2p-1) = " << lo << "; got q1 = " << q1;
                return msg.str();
            }
            const double hi = eesfr_q1_upper(spec.p, q0);
            if (!(q1 * q1 < hi * hi)) {
                msg << "EESFR requires q1^2 < 2(2p-3)/(2p-1)^2 (2/(2p+1)+q0); |q1| bound = " << hi
                    << ", got q1 = " << q1;
                return msg.str();
            }
            return std::nullopt;
        }
        case Family::ssdg: {
            const auto c = spec.ssdg_coefficients();
            bool two_param = true;
            for (int k = 0; k + 2 < spec.p; ++k)
                if (c[k] != 0.0) two_param = false;
            if (two_param && spec.p >= 2) {
                const double c_pm1 = c[spec.p - 2], c_p = c[spec.p - 1];
                const double lo1 = ssdg_cpm1_lower(spec.p);
                if (!(c_pm1 > lo1)) {
                    msg << "SSDG requires c_{p-1} > -2/(k_{p-1}^2 (2p-1)) = " << lo1 << "; got c_{p-1} = "
                        << c_pm1;
                    return msg.str();
                }
                const double lo2 = ssdg_cp_lower(spec.p, c_pm1);
                if (!(c_p > lo2)) {
                    msg << "SSDG requires c_p > -c_{p-1}/3 - 2/(k_p^2 (2p+1)) = " << lo2 << "; got c_p = "
                        << c_p;
                    return msg.str();
                }
                return std::nullopt;
            }
            break;  // general sequence: fall through to the PD check
        }
        case Family::gsfr:
            break;  // only the PD check applies
    }
    const FilterPair fp = make_filter(build_operators(spec.p), spec);
    if (is_linearly_stable(fp)) return std::nullopt;
    msg << family_name(spec.family) << " filter violates M + " << (fp.side == Side::fdg ? "K" : "Q")
        << " > 0 (positive definiteness)";
    return msg.str();
}

}  // namespace frlab
