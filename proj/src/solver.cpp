#include "frlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace frlab {

namespace {

Eigen::MatrixXd reconstruct_at(const Eigen::VectorXd& nodes, int p) {
    // row q, column j: P_j at quadrature node q
    Eigen::MatrixXd P(nodes.size(), p + 1);
    for (Eigen::Index q = 0; q < nodes.size(); ++q)
        for (int j = 0; j <= p; ++j) P(q, j) = legendre_eval(j, nodes(q));
    return P;
}

FilterPair filter_for(const SolutionField& field) {
    return make_filter(build_operators(field.spec.p), field.spec);
}

}  // namespace

void Mesh1D::validate() const {
    if (N < 2) throw std::invalid_argument("Mesh1D: need at least 2 elements");
    if (!(x_right > x_left)) throw std::invalid_argument("Mesh1D: empty domain");
    if (!periodic) throw std::invalid_argument("Mesh1D: only periodic meshes are supported");
}

double SolutionField::total_mass() const {
    return mesh.width() * modes.row(0).sum();
}

AdvectionOperator::AdvectionOperator(const FilterPair& fp, const Mesh1D& mesh, double a) {
    mesh.validate();
    N_ = mesh.N;
    const double ahat = 2.0 * a / mesh.width();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(fp.MA);
    if (!lu.isInvertible()) throw std::runtime_error("AdvectionOperator: singular M + A");
    const OperatorSet& ops = fp.ops;
    r_ = ops.r;
    l_ = ops.l;
    lift_r_ = lu.solve(ops.r);
    lift_l_ = lu.solve(ops.l);
    body_ = (fp.side == Side::fdg) ? (-ahat * lu.solve(ops.M * ops.D)).eval()
                                   : (-ahat * ops.D).eval();
    const double s = (a > 0.0) - (a < 0.0);
    c_right_ = 0.5 * ahat * (1.0 - (1.0 - fp.spec.alpha) * s);
    c_left_ = 0.5 * ahat * (1.0 + (1.0 - fp.spec.alpha) * s);
    b_self_ = body_ + c_right_ * lift_r_ * r_.transpose() - c_left_ * lift_l_ * l_.transpose();
    b_right_ = -c_right_ * lift_r_ * l_.transpose();
    b_left_ = c_left_ * lift_l_ * r_.transpose();
}

Eigen::MatrixXd AdvectionOperator::rhs(const Eigen::MatrixXd& modes, Exec exec) const {
    const int N = N_;
    if (modes.cols() != N) throw std::invalid_argument("rhs: element count mismatch");
    const Eigen::RowVectorXd trace_r = r_.transpose() * modes;  // u_k(+1)
    const Eigen::RowVectorXd trace_l = l_.transpose() * modes;  // u_k(-1)
    Eigen::MatrixXd out(modes.rows(), N);
    for_each_index(N, exec, [&](std::ptrdiff_t k) {
        const int kr = (static_cast<int>(k) + 1) % N;
        const int kl = (static_cast<int>(k) + N - 1) % N;
        const double jump_r = trace_r(k) - trace_l(kr);   // right interface
        const double jump_l = trace_l(k) - trace_r(kl);   // left interface
        out.col(k) = body_ * modes.col(k) + (c_right_ * jump_r) * lift_r_ -
                     (c_left_ * jump_l) * lift_l_;
    });
    return out;
}

SolutionField project_initial(const std::function<double(double)>& u0, const Mesh1D& mesh,
                              const SchemeSpec& spec) {
    mesh.validate();
    spec.validate();
    const int p = spec.p;
    const Quadrature q = gauss_legendre(p + 3);
    const Eigen::MatrixXd P = reconstruct_at(q.nodes, p);
    SolutionField field;
    field.mesh = mesh;
    field.spec = spec;
    field.modes.resize(p + 1, mesh.N);
    const double w = mesh.width();
    for (int k = 0; k < mesh.N; ++k) {
        const double xk = mesh.x_left + k * w;
        Eigen::VectorXd uq(q.nodes.size());
        for (Eigen::Index i = 0; i < q.nodes.size(); ++i)
            uq(i) = u0(xk + 0.5 * w * (1.0 + q.nodes(i)));
        for (int j = 0; j <= p; ++j)
            field.modes(j, k) = 0.5 * (2.0 * j + 1.0) * q.weights.dot(uq.cwiseProduct(P.col(j)));
    }
    return field;
}

Eigen::MatrixXd rhs(const SolutionField& field, double a, Exec exec) {
    return AdvectionOperator(filter_for(field), field.mesh, a).rhs(field.modes, exec);
}

SolutionField step(const SolutionField& field, double a, double tau, RkScheme rk) {
    if (tau < 0.0) throw std::invalid_argument("step: negative tau");
    SolutionField out = field;
    if (tau == 0.0) return out;
    const AdvectionOperator op(filter_for(field), field.mesh, a);
    const Eigen::MatrixXd& u = field.modes;
    switch (rk) {
        case RkScheme::rk33: {
            const Eigen::MatrixXd k1 = op.rhs(u);
            const Eigen::MatrixXd k2 = op.rhs(u + 0.5 * tau * k1);
            const Eigen::MatrixXd k3 = op.rhs(u - tau * k1 + 2.0 * tau * k2);
            out.modes = u + tau / 6.0 * (k1 + 4.0 * k2 + k3);
            break;
        }
        case RkScheme::rk44: {
            const Eigen::MatrixXd k1 = op.rhs(u);
            const Eigen::MatrixXd k2 = op.rhs(u + 0.5 * tau * k1);
            const Eigen::MatrixXd k3 = op.rhs(u + 0.5 * tau * k2);
            const Eigen::MatrixXd k4 = op.rhs(u + tau * k3);
            out.modes = u + tau / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            break;
        }
        case RkScheme::rk45: {
            // stability polynomial applied to the linear operator
            static const double gamma[] = {1.0, 1.0 / 2.0, 1.0 / 6.0, 1.0 / 24.0, 1.0 / 200.0};
            Eigen::MatrixXd v = u;
            out.modes = u;
            for (double g : gamma) {
                v = (tau * op.rhs(v)).eval();
                out.modes += g * v;
            }
            break;
        }
    }
    out.t = field.t + tau;
    return out;
}

double l2_error(const SolutionField& field,
                const std::function<double(double, double)>& u_exact) {
    const int p = field.spec.p;
    const Quadrature q = gauss_legendre(p + 5);
    const Eigen::MatrixXd P = reconstruct_at(q.nodes, p);
    const double w = field.mesh.width();
    double acc = 0.0;
    for (int k = 0; k < field.mesh.N; ++k) {
        const double xk = field.mesh.x_left + k * w;
        const Eigen::VectorXd uh = P * field.modes.col(k);
        for (Eigen::Index i = 0; i < q.nodes.size(); ++i) {
            const double x = xk + 0.5 * w * (1.0 + q.nodes(i));
            const double d = uh(i) - u_exact(x, field.t);
            acc += 0.5 * w * q.weights(i) * d * d;
        }
    }
    return std::sqrt(acc);
}

double energy_diagnostic(const SolutionField& field, double a) {
    const FilterPair fp = filter_for(field);
    const Eigen::MatrixXd dudt = AdvectionOperator(fp, field.mesh, a).rhs(field.modes);
    return (field.modes.cwiseProduct(fp.MA * dudt)).sum();
}

ConvergenceRecord convergence_study(const SchemeSpec& spec, RkScheme rk, double a,
                                    std::pair<double, double> domain,
                                    const std::function<double(double)>& u0, double t_final,
                                    const std::vector<int>& N_list, double tau_safety, Exec exec) {
    spec.validate();
    if (N_list.empty()) throw std::invalid_argument("convergence_study: empty refinement list");
    for (std::size_t i = 1; i < N_list.size(); ++i)
        if (N_list[i] != 2 * N_list[i - 1])
            throw std::invalid_argument("convergence_study: N must double between levels");
    if (a == 0.0) throw std::invalid_argument("convergence_study: zero advection speed");

    const FilterPair fp = make_filter(build_operators(spec.p), spec);
    const double tau_cfl = cfl_limit(fp, spec.alpha, RkMethod::get(rk), 1e-4, 400, exec).tau_cfl;

    struct Task {
        int N = 0;
        double dt_scale = 1.0;
        double error = 0.0;
        std::string failure;
    };
    std::vector<Task> tasks(N_list.size() + 1);
    for (std::size_t i = 0; i < N_list.size(); ++i) tasks[i].N = N_list[i];
    tasks.back().N = N_list.front();  // temporal-error verification rerun
    tasks.back().dt_scale = 0.5;

    for_each_index(static_cast<std::ptrdiff_t>(tasks.size()), exec, [&](std::ptrdiff_t ti) {
        Task& task = tasks[ti];
        try {
            Mesh1D mesh{domain.first, domain.second, task.N};
            SolutionField field = project_initial(u0, mesh, spec);
            const double norm0 = field.modes.norm();
            const AdvectionOperator op(fp, mesh, a);
            double dt = task.dt_scale * tau_safety * tau_cfl * mesh.width() / std::abs(a);
            const int nsteps = static_cast<int>(std::ceil(t_final / dt));
            dt = t_final / nsteps;
            Eigen::MatrixXd u = field.modes;
            for (int n = 0; n < nsteps; ++n) {
                const Eigen::MatrixXd k1 = op.rhs(u);
                switch (rk) {
                    case RkScheme::rk33: {
                        const Eigen::MatrixXd k2 = op.rhs(u + 0.5 * dt * k1);
                        const Eigen::MatrixXd k3 = op.rhs(u - dt * k1 + 2.0 * dt * k2);
                        u += dt / 6.0 * (k1 + 4.0 * k2 + k3);
                        break;
                    }
                    case RkScheme::rk44: {
                        const Eigen::MatrixXd k2 = op.rhs(u + 0.5 * dt * k1);
                        const Eigen::MatrixXd k3 = op.rhs(u + 0.5 * dt * k2);
                        const Eigen::MatrixXd k4 = op.rhs(u + dt * k3);
                        u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                        break;
                    }
                    case RkScheme::rk45: {
                        static const double gamma[] = {1.0, 1.0 / 2.0, 1.0 / 6.0, 1.0 / 24.0,
                                                       1.0 / 200.0};
                        Eigen::MatrixXd v = dt * k1;
                        Eigen::MatrixXd acc = u + gamma[0] * v;
                        for (int s = 1; s < 5; ++s) {
                            v = (dt * op.rhs(v)).eval();
                            acc += gamma[s] * v;
                        }
                        u = acc;
                        break;
                    }
                }
                if ((n & 63) == 0 && u.norm() > 1e6 * norm0) {
                    std::ostringstream msg;
                    msg << "solution norm grew by > 1e6 at t = " << (n + 1) * dt << " (N = "
                        << task.N << ")";
                    throw std::runtime_error(msg.str());
                }
            }
            field.modes = u;
            field.t = t_final;
            task.error =
                l2_error(field, [&](double x, double t) { return u0(x - a * t); });
        } catch (const std::exception& e) {
            task.failure = e.what();
        }
    });
    for (const Task& task : tasks)
        if (!task.failure.empty())
            throw std::runtime_error("convergence_study: " + task.failure);

    ConvergenceRecord rec;
    rec.tau_cfl = tau_cfl;
    const auto nlev = N_list.size();
    for (std::size_t i = 0; i < nlev; ++i) {
        ConvergenceRecord::Level lev;
        lev.N = tasks[i].N;
        lev.dx = (domain.second - domain.first) / tasks[i].N;
        lev.l2_error = tasks[i].error;
        lev.observed_order = (i == 0) ? std::numeric_limits<double>::quiet_NaN()
                                      : std::log2(tasks[i - 1].error / tasks[i].error);
        rec.levels.push_back(lev);
    }
    rec.coarse_error_half_tau = tasks[nlev].error;
    rec.temporal_ok =
        std::abs(rec.coarse_error_half_tau - rec.levels.front().l2_error) <
        0.01 * rec.levels.front().l2_error;
    return rec;
}

SystemMatrix assemble_system_matrix(const SchemeSpec& spec, const Mesh1D& mesh, double a) {
    spec.validate();
    mesh.validate();
    const int p = spec.p;
    const int n = (p + 1) * mesh.N;
    if (n > 2000)
        throw std::invalid_argument("assemble_system_matrix: (p+1) N exceeds the 2000-row cap");
    const FilterPair fp = make_filter(build_operators(p), spec);
    const AdvectionOperator op(fp, mesh, a);

    SystemMatrix sys;
    sys.A = Eigen::MatrixXd::Zero(n, n);
    const int b = p + 1;
    for (int k = 0; k < mesh.N; ++k) {
        const int kr = (k + 1) % mesh.N;
        const int kl = (k + mesh.N - 1) % mesh.N;
        sys.A.block(k * b, k * b, b, b) = op.self_block();
        sys.A.block(k * b, kr * b, b, b) += op.right_block();
        sys.A.block(k * b, kl * b, b, b) += op.left_block();
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(sys.A, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("assemble_system_matrix: eigen decomposition failed");
    sys.eigenvalues = es.eigenvalues();
    std::sort(sys.eigenvalues.data(), sys.eigenvalues.data() + sys.eigenvalues.size(),
              [](std::complex<double> x, std::complex<double> y) {
                  return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
              });
    sys.max_re_eigenvalue = sys.eigenvalues(0);
    return sys;
}

}  // namespace frlab
