#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "frlab/parallel.hpp"
#include "frlab/schemes.hpp"

namespace frlab {

/// Bloch symbol of a scheme: H(theta) = base + e^{i theta} C+ + e^{-i theta} C-.
/// The FDG form lifts everything through (M+K)^{-1}; the FR form keeps the
/// bare differentiation matrix and lifts only the face terms through (M+Q)^{-1}.
class HAssembler {
public:
    HAssembler(const OperatorSet& ops, const Eigen::MatrixXd& A, Side side, double alpha);
    Eigen::MatrixXcd at(double theta) const;
    int dim() const { return static_cast<int>(base_.rows()); }

private:
    Eigen::MatrixXcd base_, cplus_, cminus_;
};

Eigen::MatrixXcd assemble_H(const FilterPair& fp, double alpha, double theta);

/// Uniform grid on [-(p+1)pi, (p+1)pi]; sample count is forced odd so the
/// grid contains 0 and is symmetric.
Eigen::VectorXd default_theta_grid(int p, int samples = 401);

struct WaveAnalysis {
    Eigen::VectorXd theta;
    std::vector<Eigen::VectorXcd> omega_all;  // p+1 numerical frequencies per theta
    std::vector<Eigen::MatrixXcd> eigvecs;    // matching unit eigenvector columns
    Eigen::VectorXcd omega_phys;
    std::vector<int> phys_index;
};

/// Physical-branch selection: seeded at the smallest |theta| > 0 by nearness
/// of omega to the exact frequency, then continued outward by maximal
/// eigenvector overlap. Throws when the two best overlaps are within 1e-6.
std::vector<int> track_physical_mode(const Eigen::VectorXd& theta,
                                     const std::vector<Eigen::VectorXcd>& omega,
                                     const std::vector<Eigen::MatrixXcd>& vecs);

/// Eigenpairs of the Bloch symbol over a symmetric theta grid containing 0;
/// omega = -2i lambda(H). Per-theta solves run in the requested execution
/// mode; results are identical for both.
WaveAnalysis solve_modes(const FilterPair& fp, double alpha, const Eigen::VectorXd& theta_grid,
                         Exec exec = Exec::parallel);

/// Single-theta physical frequency (nearest admissible omega to theta).
std::complex<double> physical_omega_at(const FilterPair& fp, double alpha, double theta);

/// |omega_phys(theta) - theta|; theta must be a grid point of the analysis.
double spectral_error(const WaveAnalysis& wa, double theta);

/// Two-point spectral order at theta_R and theta_R/2. Throws "below
/// round-off" when either error underflows 1e-15.
double spectral_order(const FilterPair& fp, double alpha, double theta_R = std::numbers::pi / 4);

}  // namespace frlab
