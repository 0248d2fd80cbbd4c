#include "frlab/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace frlab {

double legendre_eval(int n, double xi) {
    if (n < 0) throw std::invalid_argument("legendre_eval: negative degree");
    if (n == 0) return 1.0;
    if (n == 1) return xi;
    double pm2 = 1.0, pm1 = xi, pk = xi;
    for (int k = 2; k <= n; ++k) {
        pk = ((2.0 * k - 1.0) * xi * pm1 - (k - 1.0) * pm2) / k;
        pm2 = pm1;
        pm1 = pk;
    }
    return pk;
}

double legendre_deriv(int n, double xi) {
    if (n < 0) throw std::invalid_argument("legendre_deriv: negative degree");
    // dP_{k}/dxi = (2k-1) P_{k-1} + dP_{k-2}/dxi
    double dp = 0.0;
    double dpm1 = 0.0, dpm2 = 0.0;
    for (int k = 1; k <= n; ++k) {
        dp = (2.0 * k - 1.0) * legendre_eval(k - 1, xi) + dpm2;
        dpm2 = dpm1;
        dpm1 = dp;
    }
    return n == 0 ? 0.0 : dp;
}

double kp_constant(int p) {
    if (p < 0) throw std::invalid_argument("kp_constant: negative degree");
    double v = 1.0;
    for (int j = 1; j <= p; ++j) v *= (2.0 * j - 1.0);
    return v;
}

Quadrature gauss_legendre(int npts) {
    if (npts < 1) throw std::invalid_argument("gauss_legendre: npts must be positive");
    Quadrature q;
    q.nodes.resize(npts);
    q.weights.resize(npts);
    for (int i = 0; i < npts; ++i) {
        // Chebyshev-like initial guess, then Newton on P_npts.
        double x = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
        for (int it = 0; it < 100; ++it) {
            const double f = legendre_eval(npts, x);
            const double df = legendre_deriv(npts, x);
            const double dx = f / df;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double dp = legendre_deriv(npts, x);
        q.nodes(npts - 1 - i) = x;  // ascending order
        q.weights(npts - 1 - i) = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return q;
}

namespace {

OperatorSet legendre_operators(int p) {
    OperatorSet ops;
    ops.p = p;
    ops.basis = Basis::legendre;
    const int n = p + 1;
    ops.M = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) ops.M(i, i) = 2.0 / (2.0 * i + 1.0);
    ops.D = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((i + j) % 2 == 1) ops.D(i, j) = 2.0 * i + 1.0;
    ops.r = Eigen::VectorXd::Ones(n);
    ops.l.resize(n);
    for (int i = 0; i < n; ++i) ops.l(i) = (i % 2 == 0) ? 1.0 : -1.0;
    ops.V = Eigen::MatrixXd::Identity(n, n);
    return ops;
}

}  // namespace

OperatorSet build_operators(int p, Basis basis) {
    if (p < 0) throw std::invalid_argument("build_operators: p must be non-negative");
    if (p > max_degree)
        throw std::invalid_argument("build_operators: p = " + std::to_string(p) +
                                    " exceeds supported maximum " + std::to_string(max_degree));
    OperatorSet leg = legendre_operators(p);
    if (basis == Basis::legendre) return leg;

    // Lagrange basis at the p+1 Gauss-Legendre nodes, obtained from the
    // Legendre operators via the generalized Vandermonde V_ij = P_j(x_i):
    //   coefficient maps conjugate (D), bilinear forms transform by congruence
    //   (M and the filter matrices), trace vectors by V^{-T}.
    const int n = p + 1;
    OperatorSet ops;
    ops.p = p;
    ops.basis = Basis::nodal_lagrange;
    ops.nodes = gauss_legendre(n).nodes;
    ops.V.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ops.V(i, j) = legendre_eval(j, ops.nodes(i));
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(ops.V);
    const Eigen::MatrixXd Vinv = lu.inverse();
    ops.M = Vinv.transpose() * leg.M * Vinv;
    ops.D = ops.V * leg.D * Vinv;
    ops.r = Vinv.transpose() * leg.r;
    ops.l = Vinv.transpose() * leg.l;
    return ops;
}

}  // namespace frlab
