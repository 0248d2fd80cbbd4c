#include "frlab/vonneumann.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace frlab {

namespace {

using cplx = std::complex<double>;
constexpr cplx iu{0.0, 1.0};

void check_grid(const Eigen::VectorXd& theta) {
    const auto n = theta.size();
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("solve_modes: theta grid must have odd size >= 3");
    for (Eigen::Index i = 1; i < n; ++i)
        if (!(theta(i) > theta(i - 1)))
            throw std::invalid_argument("solve_modes: theta grid must be strictly increasing");
    if (std::abs(theta(n / 2)) > 1e-14)
        throw std::invalid_argument("solve_modes: theta grid must contain 0 at its center");
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(theta(i) + theta(n - 1 - i)) > 1e-12)
            throw std::invalid_argument("solve_modes: theta grid must be symmetric about 0");
}

int nearest_mode(const Eigen::VectorXcd& omega, double target) {
    int best = 0;
    double dist = std::abs(omega(0) - cplx(target, 0.0));
    for (int j = 1; j < omega.size(); ++j) {
        const double d = std::abs(omega(j) - cplx(target, 0.0));
        if (d < dist) {
            dist = d;
            best = j;
        }
    }
    return best;
}

int continue_by_overlap(const Eigen::VectorXcd& prev, const Eigen::MatrixXcd& vecs, double theta) {
    const int m = static_cast<int>(vecs.cols());
    int best = 0, second = -1;
    double s_best = -1.0, s_second = -1.0;
    for (int j = 0; j < m; ++j) {
        const double s = std::abs(prev.dot(vecs.col(j)));
        if (s > s_best) {
            s_second = s_best;
            second = best;
            s_best = s;
            best = j;
        } else if (s > s_second) {
            s_second = s;
            second = j;
        }
    }
    if (second >= 0 && s_best - s_second < 1e-6) {
        std::ostringstream msg;
        msg << "mode tracking ambiguity at theta = " << theta << " (overlaps " << s_best << " vs "
            << s_second << ")";
        throw std::runtime_error(msg.str());
    }
    return best;
}

}  // namespace

HAssembler::HAssembler(const OperatorSet& ops, const Eigen::MatrixXd& A, Side side, double alpha) {
    const Eigen::MatrixXd MA = ops.M + A;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(MA);
    if (!lu.isInvertible()) throw std::runtime_error("assemble_H: singular M + A");
    const Eigen::VectorXd Sr = lu.solve(ops.r);
    const Eigen::VectorXd Sl = lu.solve(ops.l);
    const Eigen::MatrixXd body = (side == Side::fdg) ? lu.solve(ops.M * ops.D).eval() : ops.D;
    const Eigen::MatrixXd base = body - 0.5 * alpha * Sr * ops.r.transpose() +
                                 0.5 * (2.0 - alpha) * Sl * ops.l.transpose();
    base_ = base.cast<cplx>();
    cplus_ = (0.5 * alpha * Sr * ops.l.transpose()).cast<cplx>();
    cminus_ = (-0.5 * (2.0 - alpha) * Sl * ops.r.transpose()).cast<cplx>();
}

Eigen::MatrixXcd HAssembler::at(double theta) const {
    return base_ + std::exp(iu * theta) * cplus_ + std::exp(-iu * theta) * cminus_;
}

Eigen::MatrixXcd assemble_H(const FilterPair& fp, double alpha, double theta) {
    return HAssembler(fp.ops, fp.A, fp.side, alpha).at(theta);
}

Eigen::VectorXd default_theta_grid(int p, int samples) {
    if (samples < 3) throw std::invalid_argument("default_theta_grid: need at least 3 samples");
    if (samples % 2 == 0) ++samples;
    const double lim = (p + 1) * std::numbers::pi;
    Eigen::VectorXd grid(samples);
    for (int i = 0; i < samples; ++i)
        grid(i) = -lim + 2.0 * lim * i / (samples - 1);
    grid((samples - 1) / 2) = 0.0;
    return grid;
}

std::vector<int> track_physical_mode(const Eigen::VectorXd& theta,
                                     const std::vector<Eigen::VectorXcd>& omega,
                                     const std::vector<Eigen::MatrixXcd>& vecs) {
    const auto n = theta.size();
    const auto mid = n / 2;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    idx[mid] = nearest_mode(omega[mid], 0.0);
    // seed each half at its smallest |theta|, then continue outward
    if (mid + 1 < n) {
        idx[mid + 1] = nearest_mode(omega[mid + 1], theta(mid + 1));
        for (Eigen::Index i = mid + 2; i < n; ++i)
            idx[i] = continue_by_overlap(vecs[i - 1].col(idx[i - 1]), vecs[i], theta(i));
    }
    if (mid >= 1) {
        idx[mid - 1] = nearest_mode(omega[mid - 1], theta(mid - 1));
        for (Eigen::Index i = static_cast<Eigen::Index>(mid) - 2; i >= 0; --i)
            idx[i] = continue_by_overlap(vecs[i + 1].col(idx[i + 1]), vecs[i], theta(i));
    }
    return idx;
}

WaveAnalysis solve_modes(const FilterPair& fp, double alpha, const Eigen::VectorXd& theta_grid,
                         Exec exec) {
    check_grid(theta_grid);
    const auto n = theta_grid.size();
    HAssembler hasm(fp.ops, fp.A, fp.side, alpha);

    WaveAnalysis wa;
    wa.theta = theta_grid;
    wa.omega_all.resize(static_cast<std::size_t>(n));
    wa.eigvecs.resize(static_cast<std::size_t>(n));
    std::vector<char> failed(static_cast<std::size_t>(n), 0);  // no throwing inside the parallel loop
    for_each_index(n, exec, [&](std::ptrdiff_t i) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(hasm.at(theta_grid(i)), true);
        if (es.info() != Eigen::Success) {
            failed[i] = 1;
            return;
        }
        wa.omega_all[i] = -2.0 * iu * es.eigenvalues();
        wa.eigvecs[i] = es.eigenvectors();
    });
    if (std::find(failed.begin(), failed.end(), 1) != failed.end())
        throw std::runtime_error("solve_modes: eigen decomposition failed");
    wa.phys_index = track_physical_mode(theta_grid, wa.omega_all, wa.eigvecs);
    wa.omega_phys.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) wa.omega_phys(i) = wa.omega_all[i](wa.phys_index[i]);
    return wa;
}

std::complex<double> physical_omega_at(const FilterPair& fp, double alpha, double theta) {
    const Eigen::MatrixXcd H = assemble_H(fp, alpha, theta);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("physical_omega_at: eigen decomposition failed");
    const Eigen::VectorXcd omega = -2.0 * iu * es.eigenvalues();
    return omega(nearest_mode(omega, theta));
}

double spectral_error(const WaveAnalysis& wa, double theta) {
    for (Eigen::Index i = 0; i < wa.theta.size(); ++i)
        if (std::abs(wa.theta(i) - theta) < 1e-12)
            return std::abs(wa.omega_phys(i) - cplx(theta, 0.0));
    throw std::invalid_argument("spectral_error: theta is not a grid point");
}

double spectral_order(const FilterPair& fp, double alpha, double theta_R) {
    const double e_full = std::abs(physical_omega_at(fp, alpha, theta_R) - cplx(theta_R, 0.0));
    const double e_half =
        std::abs(physical_omega_at(fp, alpha, theta_R / 2.0) - cplx(theta_R / 2.0, 0.0));
    if (e_full < 1e-15 || e_half < 1e-15)
        throw std::runtime_error(
            "spectral_order: spectral error below round-off; lower p or raise theta_R");
    return (std::log(e_full) - std::log(e_half)) / std::numbers::ln2 - 1.0;
}

}  // namespace frlab
