#pragma once

#include <Eigen/Dense>

namespace frlab {

enum class Basis { legendre, nodal_lagrange };

/// Reference-element operators for degree p on [-1,1]. The Legendre (modal)
/// basis is canonical; the Gauss-node Lagrange basis exists to test basis
/// invariance of the Bloch-symbol spectrum. Immutable after construction.
struct OperatorSet {
    int p = 0;
    Basis basis = Basis::legendre;
    Eigen::MatrixXd M;      // mass matrix, (M)_ij = integral of chi_i chi_j
    Eigen::MatrixXd D;      // differentiation matrix on coefficient vectors
    Eigen::VectorXd r;      // basis traces at xi = +1
    Eigen::VectorXd l;      // basis traces at xi = -1
    Eigen::MatrixXd V;      // generalized Vandermonde V_ij = P_j(x_i); identity for Legendre
    Eigen::VectorXd nodes;  // Gauss-Legendre nodes (nodal basis only, else empty)
};

inline constexpr int max_degree = 12;

/// P_n(xi) by the three-term recurrence.
double legendre_eval(int n, double xi);
double legendre_deriv(int n, double xi);

/// k_p = (2p)! / (2^p p!) = (2p-1)!!, exact in double for p <= 12.
double kp_constant(int p);

struct Quadrature {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// npts-point Gauss-Legendre rule on [-1,1]; nodes from Newton iteration on
/// P_npts, converged to 1e-14.
Quadrature gauss_legendre(int npts);

OperatorSet build_operators(int p, Basis basis = Basis::legendre);

}  // namespace frlab
