// Test-side oracles, independent of the library implementation paths they
// check: quadrature by composite Simpson, Legendre algebra on monomial
// coefficients, characteristic-polynomial eigenvalues via Faddeev-LeVerrier +
// Durand-Kerner, and random stable-scheme generators for property tests.
#pragma once

#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "frlab/schemes.hpp"

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int intervals = 20000) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double acc = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Monomial coefficients of P_n (index = power), exact by recurrence.
inline std::vector<double> legendre_monomial(int n) {
    std::vector<double> pm2{1.0}, pm1{0.0, 1.0};
    if (n == 0) return pm2;
    if (n == 1) return pm1;
    for (int k = 2; k <= n; ++k) {
        std::vector<double> pk(k + 1, 0.0);
        for (std::size_t i = 0; i < pm1.size(); ++i) pk[i + 1] += (2.0 * k - 1.0) / k * pm1[i];
        for (std::size_t i = 0; i < pm2.size(); ++i) pk[i] -= (k - 1.0) / k * pm2[i];
        pm2 = std::move(pm1);
        pm1 = std::move(pk);
    }
    return pm1;
}

inline std::vector<double> differentiate(const std::vector<double>& poly) {
    if (poly.size() <= 1) return {0.0};
    std::vector<double> d(poly.size() - 1);
    for (std::size_t i = 1; i < poly.size(); ++i) d[i - 1] = i * poly[i];
    return d;
}

inline double eval_monomial(const std::vector<double>& poly, double x) {
    double acc = 0.0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// Expansion of a monomial-form polynomial in Legendre polynomials by
// subtracting leading terms; stable for the low degrees used in tests.
inline std::vector<double> monomial_to_legendre(std::vector<double> poly) {
    const int deg = static_cast<int>(poly.size()) - 1;
    std::vector<double> out(deg + 1, 0.0);
    for (int k = deg; k >= 0; --k) {
        const std::vector<double> pk = legendre_monomial(k);
        const double coeff = poly[k] / pk[k];
        out[k] = coeff;
        for (int i = 0; i <= k; ++i) poly[i] -= coeff * pk[i];
    }
    return out;
}

// Characteristic polynomial coefficients (ascending powers) by
// Faddeev-LeVerrier; det(zI - A) = z^n + c_{n-1} z^{n-1} + ... + c_0.
inline std::vector<std::complex<double>> char_poly(const Eigen::MatrixXcd& A) {
    const int n = static_cast<int>(A.rows());
    std::vector<std::complex<double>> c(n + 1);
    c[n] = 1.0;
    Eigen::MatrixXcd Mk = Eigen::MatrixXcd::Zero(n, n);
    std::complex<double> ck = 1.0;
    for (int k = 1; k <= n; ++k) {
        Mk = (A * Mk + ck * Eigen::MatrixXcd::Identity(n, n)).eval();
        ck = -(A * Mk).trace() / static_cast<double>(k);
        c[n - k] = ck;
    }
    return c;
}

// Durand-Kerner simultaneous root iteration on a monic-normalizable polynomial.
inline std::vector<std::complex<double>> poly_roots(std::vector<std::complex<double>> c) {
    const int n = static_cast<int>(c.size()) - 1;
    for (auto& v : c) v /= c[n];
    std::vector<std::complex<double>> z(n);
    const std::complex<double> seed{0.4, 0.9};
    std::complex<double> zk = 1.0;
    for (int i = 0; i < n; ++i) {
        zk *= seed;
        z[i] = zk;
    }
    for (int it = 0; it < 500; ++it) {
        double moved = 0.0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> num = 0.0;
            for (int k = n; k >= 0; --k) num = num * z[i] + c[k];
            std::complex<double> den = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) den *= z[i] - z[j];
            const std::complex<double> dz = num / den;
            z[i] -= dz;
            moved = std::max(moved, std::abs(dz));
        }
        if (moved < 1e-14) break;
    }
    return z;
}

inline std::vector<std::complex<double>> eigenvalues_by_charpoly(const Eigen::MatrixXcd& A) {
    return poly_roots(char_poly(A));
}

// Greatest distance from each oracle root to its nearest counterpart.
inline double set_distance(std::vector<std::complex<double>> a, const Eigen::VectorXcd& b) {
    double worst = 0.0;
    std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
    for (const auto& x : a) {
        int best = -1;
        double dist = 1e300;
        for (Eigen::Index j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(x - b(j));
            if (d < dist) {
                dist = d;
                best = static_cast<int>(j);
            }
        }
        used[best] = true;
        worst = std::max(worst, dist);
    }
    return worst;
}

// Random schemes drawn strictly inside the closed-form stability regions.
inline frlab::SchemeSpec random_stable_spec(std::mt19937& rng) {
    using namespace frlab;
    std::uniform_int_distribution<int> fam_pick(0, 3);
    std::uniform_int_distribution<int> p_pick(2, 4);
    std::uniform_int_distribution<int> alpha_pick(0, 2);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    const int p = p_pick(rng);
    const double alpha = 0.5 * alpha_pick(rng);
    SchemeSpec spec;
    spec.p = p;
    spec.alpha = alpha;
    switch (fam_pick(rng)) {
        case 0:
            spec.family = Family::dg;
            break;
        case 1: {
            spec.family = Family::esfr;
            const double lo = esfr_c_lower(p);
            const double hi = 10.0 * canonical_c(p, Canonical::hu);
            spec.params = {lo + unit(rng) * (hi - lo)};
            break;
        }
        case 2: {
            spec.family = Family::eesfr;
            if (spec.p == 2) spec.p = 3;  // the two-parameter pattern is nonconservative at p = 2
            const int pe = spec.p;
            const double q0 = -0.9 * 2.0 / (2.0 * pe + 1.0) + unit(rng) * 30.0;
            const double hi = eesfr_q1_upper(pe, q0);
            const double lo = std::max(eesfr_q1_lower(pe), -hi);
            const double q1 = lo + unit(rng) * (hi - lo);
            spec.params = {q0, q1};
            break;
        }
        default: {
            spec.family = Family::ssdg;
            std::vector<double> c(static_cast<std::size_t>(p), 0.0);
            const double lo1 = ssdg_cpm1_lower(p);
            c[p - 2] = lo1 + unit(rng) * (0.1 - lo1);
            const double lo2 = ssdg_cp_lower(p, c[p - 2]);
            // span stays positive even when lo2 itself is positive (p = 2)
            c[p - 1] = lo2 + unit(rng) * std::max(0.05 - lo2, 0.02);
            spec.params = c;
            break;
        }
    }
    spec.validate();
    return spec;
}

}  // namespace oracle
