// Serial vs OpenMP timing for the data-parallel kernels: Bloch-symbol mode
// sweeps, CFL parameter maps, and the per-element advection rhs.

#include <chrono>
#include <cstdio>

#include "frlab/cli.hpp"

using namespace frlab;
namespace chrono = std::chrono;

namespace {

template <class F>
double time_ms(F&& fn, int reps = 1) {
    const auto t0 = chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = chrono::steady_clock::now();
    return chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
    std::printf("threads: %d\n", max_threads());

    {  // mode sweep, p = 4, dense grid
        const OperatorSet ops = build_operators(4);
        const FilterPair fp = make_filter(ops, cli::table1_scheme(cli::table1_entries()[8]));
        const Eigen::VectorXd grid = default_theta_grid(4, 4001);
        report("solve_modes p=4, 4001 pts",
               time_ms([&] { solve_modes(fp, 0.0, grid, Exec::serial); }),
               time_ms([&] { solve_modes(fp, 0.0, grid, Exec::parallel); }));
    }

    {  // CFL sweep over a 21x21 SSDG grid, p = 3, RK44
        const OperatorSet ops = build_operators(3);
        const RkMethod rk = RkMethod::get(RkScheme::rk44);
        const auto sweep = [&](Exec exec) {
            std::vector<double> tau(21 * 21);
            for_each_index(21 * 21, exec, [&](std::ptrdiff_t c) {
                const double cp = -2.0e-2 + 4.0e-2 * (c / 21) / 20.0;
                const double cpm1 = 1.0e-3 + 9.0e-2 * (c % 21) / 20.0;
                std::vector<double> coeff{0.0, cpm1, cp};
                const FilterPair fp = ssdg_filter(ops, coeff);
                tau[c] = is_linearly_stable(fp)
                             ? cfl_limit(fp, 0.0, rk, 1e-4, 400, Exec::serial).tau_cfl
                             : 0.0;
            });
        };
        report("cfl map 21x21 p=3 RK44", time_ms([&] { sweep(Exec::serial); }),
               time_ms([&] { sweep(Exec::parallel); }));
    }

    {  // advection rhs on a large mesh
        const SchemeSpec spec{Family::esfr, 3, {canonical_c(3, Canonical::sd)}, 0.0};
        const Mesh1D mesh{0.0, 1.0, 20000};
        const FilterPair fp = make_filter(build_operators(3), spec);
        const AdvectionOperator op(fp, mesh, 1.0);
        SolutionField field = project_initial([](double x) { return std::sin(40.0 * x); }, mesh, spec);
        Eigen::MatrixXd out;
        report("rhs N=20000 p=3 (x50)",
               time_ms([&] { out = op.rhs(field.modes, Exec::serial); }, 50),
               time_ms([&] { out = op.rhs(field.modes, Exec::parallel); }, 50));
    }
    return 0;
}
