#include "frlab/timestepping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frlab {

namespace {

constexpr double neutral_margin = 1e-9;  // the constant mode maps to exactly 1

// Eigenvalues of H over a uniform theta sweep of [-pi, pi], one row per sample.
Eigen::MatrixXcd eigenvalue_table(const FilterPair& fp, double alpha, int theta_samples,
                                  Exec exec, Eigen::VectorXd* thetas_out = nullptr) {
    if (theta_samples < 3) throw std::invalid_argument("cfl: need at least 3 theta samples");
    HAssembler hasm(fp.ops, fp.A, fp.side, alpha);
    const int n = theta_samples;
    Eigen::VectorXd thetas(n);
    for (int i = 0; i < n; ++i)
        thetas(i) = -std::numbers::pi + 2.0 * std::numbers::pi * i / (n - 1);
    Eigen::MatrixXcd lam(n, hasm.dim());
    std::vector<char> failed(static_cast<std::size_t>(n), 0);
    for_each_index(n, exec, [&](std::ptrdiff_t i) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(hasm.at(thetas(i)), false);
        if (es.info() != Eigen::Success) {
            failed[i] = 1;
            return;
        }
        lam.row(i) = es.eigenvalues().transpose();
    });
    if (std::find(failed.begin(), failed.end(), 1) != failed.end())
        throw std::runtime_error("cfl: eigen decomposition failed");
    if (thetas_out) *thetas_out = thetas;
    return lam;
}

double radius_of_row(const Eigen::VectorXcd& lam, double tau, const RkMethod& rk) {
    return stability_poly_radius(lam, tau, rk);
}

}  // namespace

std::string rk_name(RkScheme rk) {
    switch (rk) {
        case RkScheme::rk33: return "RK33";
        case RkScheme::rk44: return "RK44";
        case RkScheme::rk45: return "RK45";
    }
    throw std::logic_error("rk_name: bad tag");
}

RkScheme rk_from_name(const std::string& s) {
    if (s == "RK33") return RkScheme::rk33;
    if (s == "RK44") return RkScheme::rk44;
    if (s == "RK45") return RkScheme::rk45;
    throw std::invalid_argument("unknown RK scheme '" + s + "'");
}

RkMethod RkMethod::get(RkScheme rk) {
    switch (rk) {
        case RkScheme::rk33: return {rk, {1.0, -1.0, 1.0 / 2.0, -1.0 / 6.0}};
        case RkScheme::rk44: return {rk, {1.0, -1.0, 1.0 / 2.0, -1.0 / 6.0, 1.0 / 24.0}};
        case RkScheme::rk45:
            return {rk, {1.0, -1.0, 1.0 / 2.0, -1.0 / 6.0, 1.0 / 24.0, -1.0 / 200.0}};
    }
    throw std::logic_error("RkMethod::get: bad tag");
}

Eigen::MatrixXcd amplification(const Eigen::MatrixXcd& H, double tau, const RkMethod& rk) {
    if (!(tau > 0.0)) throw std::invalid_argument("amplification: tau must be positive");
    const Eigen::MatrixXcd X = 2.0 * tau * H;
    const auto n = H.rows();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd R = rk.coeffs.back() * I;
    for (auto k = rk.coeffs.size() - 1; k-- > 0;) R = (R * X + rk.coeffs[k] * I).eval();
    return R;
}

double stability_poly_radius(const Eigen::VectorXcd& lambdas, double tau, const RkMethod& rk) {
    double rho = 0.0;
    for (Eigen::Index j = 0; j < lambdas.size(); ++j) {
        const std::complex<double> z = 2.0 * tau * lambdas(j);
        std::complex<double> acc = rk.coeffs.back();
        for (auto k = rk.coeffs.size() - 1; k-- > 0;) acc = acc * z + rk.coeffs[k];
        rho = std::max(rho, std::abs(acc));
    }
    return rho;
}

double max_spectral_radius(const FilterPair& fp, double alpha, double tau, const RkMethod& rk,
                           int theta_samples, Exec exec) {
    if (!(tau > 0.0)) throw std::invalid_argument("max_spectral_radius: tau must be positive");
    const Eigen::MatrixXcd lam = eigenvalue_table(fp, alpha, theta_samples, exec);
    double rho = 0.0;
    for (Eigen::Index i = 0; i < lam.rows(); ++i)
        rho = std::max(rho, radius_of_row(lam.row(i), tau, rk));
    return rho;
}

CflResult cfl_limit(const FilterPair& fp, double alpha, const RkMethod& rk, double tol,
                    int theta_samples, Exec exec) {
    if (!(tol > 0.0)) throw std::invalid_argument("cfl_limit: tol must be positive");
    if (!is_linearly_stable(fp))
        throw std::runtime_error("cfl_limit: scheme is not linearly stable; no positive tau exists");

    Eigen::VectorXd thetas;
    const Eigen::MatrixXcd lam = eigenvalue_table(fp, alpha, theta_samples, exec, &thetas);
    const auto rho_at = [&](double tau) {
        double rho = 0.0;
        for (Eigen::Index i = 0; i < lam.rows(); ++i)
            rho = std::max(rho, radius_of_row(lam.row(i), tau, rk));
        return rho;
    };
    const auto unstable = [&](double tau) { return rho_at(tau) > 1.0 + neutral_margin; };

    CflResult res;
    if (unstable(tol)) throw std::runtime_error("cfl_limit: unstable scheme (rho > 1 at tau = tol)");
    double lo = 0.0, hi = 0.1;
    while (!unstable(hi)) {
        lo = hi;
        hi *= 2.0;
        ++res.iterations;
        if (hi > 1e3) throw std::runtime_error("cfl_limit: no instability found up to tau = 1e3");
    }
    while (hi - lo > 0.5 * tol) {
        const double mid = 0.5 * (lo + hi);
        (unstable(mid) ? hi : lo) = mid;
        ++res.iterations;
    }
    res.tau_cfl = 0.5 * (lo + hi);

    // critical wavenumber: probe at the just-unstable bracket end (at tau_cfl
    // itself the neutral constant mode ties everything at rho = 1), discrete
    // argmax first, then one golden-section pass over the bracketing interval
    const double tau_probe = hi;
    Eigen::Index imax = 0;
    double rmax = -1.0;
    for (Eigen::Index i = 0; i < lam.rows(); ++i) {
        const double r = radius_of_row(lam.row(i), tau_probe, rk);
        if (r > rmax) {
            rmax = r;
            imax = i;
        }
    }
    HAssembler hasm(fp.ops, fp.A, fp.side, alpha);
    const auto rho_theta = [&](double th) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(hasm.at(th), false);
        return stability_poly_radius(es.eigenvalues(), tau_probe, rk);
    };
    double a = thetas(std::max<Eigen::Index>(imax - 1, 0));
    double b = thetas(std::min<Eigen::Index>(imax + 1, thetas.size() - 1));
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = rho_theta(x1), f2 = rho_theta(x2);
    for (int it = 0; it < 60 && b - a > 1e-6; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = rho_theta(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = rho_theta(x1);
        }
    }
    res.argmax_theta = 0.5 * (a + b);
    return res;
}

}  // namespace frlab
