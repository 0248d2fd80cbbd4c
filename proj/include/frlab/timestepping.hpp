#pragma once

#include <string>

#include "frlab/vonneumann.hpp"

namespace frlab {

enum class RkScheme { rk33, rk44, rk45 };

std::string rk_name(RkScheme rk);
RkScheme rk_from_name(const std::string& s);

/// Explicit RK amplification as a polynomial in (2 tau H): R = sum coeffs[k] X^k.
/// RK33/RK44 are the truncated exponentials; RK45 is the five-stage low-storage
/// variant whose final coefficient is -1/200 instead of -1/120.
struct RkMethod {
    RkScheme tag;
    std::vector<double> coeffs;
    static RkMethod get(RkScheme rk);
};

Eigen::MatrixXcd amplification(const Eigen::MatrixXcd& H, double tau, const RkMethod& rk);

/// max |R| over the given H-eigenvalues via the spectral mapping
/// lambda(R) = poly(2 tau lambda(H)); the cheap inner kernel of the CFL search.
double stability_poly_radius(const Eigen::VectorXcd& lambdas, double tau, const RkMethod& rk);

/// max over sampled theta in [-pi, pi] of the spectral radius of R(H(theta), tau).
double max_spectral_radius(const FilterPair& fp, double alpha, double tau, const RkMethod& rk,
                           int theta_samples = 400, Exec exec = Exec::parallel);

struct CflResult {
    double tau_cfl = 0.0;
    double argmax_theta = 0.0;  // critical wavenumber at the limit
    int iterations = 0;
};

/// Largest tau keeping the amplification spectral radius within 1 + 1e-9 over
/// all sampled wavenumbers; bisection bracketed by doubling from 0.1,
/// converged to tol. The scheme must be linearly stable.
CflResult cfl_limit(const FilterPair& fp, double alpha, const RkMethod& rk, double tol = 1e-4,
                    int theta_samples = 400, Exec exec = Exec::parallel);

}  // namespace frlab
