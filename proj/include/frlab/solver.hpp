#pragma once

#include <functional>
#include <utility>

#include "frlab/timestepping.hpp"

namespace frlab {

struct Mesh1D {
    double x_left = 0.0;
    double x_right = 1.0;
    int N = 2;
    bool periodic = true;

    double width() const { return (x_right - x_left) / N; }
    void validate() const;
};

/// Per-element Legendre coefficients of the discrete solution; column k holds
/// the modes of element k.
struct SolutionField {
    Mesh1D mesh;
    SchemeSpec spec;
    Eigen::MatrixXd modes;  // (p+1) x N
    double t = 0.0;

    double total_mass() const;  // sum_k |Omega_k| (u_k)_0
};

/// Semi-discrete advection operator for one (scheme, mesh, speed) triple.
/// Periodic coupling is block tridiagonal: one self block plus one block per
/// neighbor, derived from the blended interface flux.
class AdvectionOperator {
public:
    AdvectionOperator(const FilterPair& fp, const Mesh1D& mesh, double a);

    Eigen::MatrixXd rhs(const Eigen::MatrixXd& modes, Exec exec = Exec::serial) const;

    const Eigen::MatrixXd& self_block() const { return b_self_; }
    const Eigen::MatrixXd& left_block() const { return b_left_; }
    const Eigen::MatrixXd& right_block() const { return b_right_; }

private:
    Eigen::MatrixXd body_, b_self_, b_left_, b_right_;
    Eigen::VectorXd lift_r_, lift_l_, r_, l_;
    double c_right_ = 0.0, c_left_ = 0.0;
    int N_ = 0;
};

SolutionField project_initial(const std::function<double(double)>& u0, const Mesh1D& mesh,
                              const SchemeSpec& spec);

Eigen::MatrixXd rhs(const SolutionField& field, double a, Exec exec = Exec::serial);

/// One explicit RK step. RK33/RK44 use the classical stage forms; RK45 applies
/// its stability polynomial to the (linear) semi-discrete operator.
SolutionField step(const SolutionField& field, double a, double tau, RkScheme rk);

double l2_error(const SolutionField& field,
                const std::function<double(double, double)>& u_exact);

/// Instantaneous half-rate of energy change sum_k u_k^T (M+A) du_k/dt;
/// non-positive for a stable scheme under a dissipative flux.
double energy_diagnostic(const SolutionField& field, double a);

struct ConvergenceRecord {
    struct Level {
        int N = 0;
        double dx = 0.0;
        double l2_error = 0.0;
        double observed_order = 0.0;  // NaN on the coarsest level
    };
    std::vector<Level> levels;
    double tau_cfl = 0.0;
    double coarse_error_half_tau = 0.0;
    bool temporal_ok = false;  // half-step rerun moved the coarse error < 1%
};

inline double sine_wave(double x) { return std::sin(x); }

/// h-refinement study for periodic linear advection with exact solution
/// u0(x - a t); time step tau_safety * tau_cfl * dx / |a| per level.
ConvergenceRecord convergence_study(
    const SchemeSpec& spec, RkScheme rk, double a = 2.0,
    std::pair<double, double> domain = {-std::numbers::pi, std::numbers::pi},
    const std::function<double(double)>& u0 = sine_wave, double t_final = std::numbers::pi,
    const std::vector<int>& N_list = {16, 32, 64, 128, 256}, double tau_safety = 0.1,
    Exec exec = Exec::parallel);

struct SystemMatrix {
    Eigen::MatrixXd A;                          // (p+1)N x (p+1)N
    Eigen::VectorXcd eigenvalues;               // sorted by descending real part
    std::complex<double> max_re_eigenvalue{};
};

/// Global periodic system matrix and its spectrum; rejects (p+1) N > 2000.
SystemMatrix assemble_system_matrix(const SchemeSpec& spec, const Mesh1D& mesh, double a);

}  // namespace frlab
