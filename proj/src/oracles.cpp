#include "fsl/oracles.hpp"

#include <cmath>

namespace fsl::oracles {

using numerics::bessel_j;

// ---------------------------------------------------------------------------
// Ideal DTQW
// ---------------------------------------------------------------------------

double IdealWalkState::prob(int j) const {
    if (j < -m || j > m) return 0.0;
    Eigen::Index i = j + m;
    return std::norm(up[i]) + std::norm(dn[i]);
}

double IdealWalkState::total() const {
    return up.squaredNorm() + dn.squaredNorm();
}

double IdealWalkState::sigma() const {
    double mu = 0.0, m2 = 0.0;
    for (int j = -m; j <= m; ++j) {
        double p = prob(j);
        mu += p * j;
        m2 += p * j * j;
    }
    return std::sqrt(std::max(m2 - mu * mu, 0.0));
}

IdealWalkState ideal_dtqw(int m, const Eigen::Vector2cd& coin_init) {
    if (m < 0) throw std::invalid_argument("ideal_dtqw: m must be >= 0");
    if (std::abs(coin_init.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("ideal_dtqw: coin init not normalized");
    const double s = 1.0 / std::sqrt(2.0);
    IdealWalkState w;
    w.m = m;
    Eigen::Index n = 2 * m + 1;
    w.up = Eigen::VectorXcd::Zero(n);
    w.dn = Eigen::VectorXcd::Zero(n);
    w.up[m] = coin_init[0];
    w.dn[m] = coin_init[1];
    Eigen::VectorXcd nu(n), nd(n);
    for (int t = 0; t < m; ++t) {
        nu.setZero();
        nd.setZero();
        for (Eigen::Index i = 0; i < n; ++i) {
            Complex a = s * (w.up[i] + w.dn[i]);   // coin
            Complex b = s * (w.up[i] - w.dn[i]);
            if (i + 1 < n) nu[i + 1] += a;          // shift: up right, down left
            if (i >= 1) nd[i - 1] += b;
        }
        w.up.swap(nu);
        w.dn.swap(nd);
    }
    return w;
}

// ---------------------------------------------------------------------------
// e(2)
// ---------------------------------------------------------------------------

double E2Kernel::prob(int j) const {
    if (j < -window || j > window) return 0.0;
    double k = kernel[j + window];
    return k * k;
}

E2Kernel e2_kernel(int m, double beta, int window) {
    if (m < 0) throw std::invalid_argument("e2_kernel: m must be >= 0");
    if (window < 1) throw std::invalid_argument("e2_kernel: window must be >= 1");
    // one-step kernel A_l = J_l(2 beta), truncated where negligible
    int L = 0;
    while (L < 4 * window && std::abs(bessel_j(L + 1, 2.0 * beta)) > 1e-18) ++L;
    std::vector<double> A(static_cast<std::size_t>(2 * L + 1));
    for (int l = -L; l <= L; ++l) A[static_cast<std::size_t>(l + L)] = bessel_j(l, 2.0 * beta);

    const Eigen::Index n = 2 * window + 1;
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::VectorXcd up = Eigen::VectorXcd::Zero(n), dn = Eigen::VectorXcd::Zero(n);
    up[window] = 1.0;  // coin-independent; start in the up component
    Eigen::VectorXcd cu(n), cd(n), nu(n), nd(n);
    for (int t = 0; t < m; ++t) {
        cu = s * (up + dn);
        cd = s * (up - dn);
        nu.setZero();
        nd.setZero();
        for (int l = -L; l <= L; ++l) {
            double a = A[static_cast<std::size_t>(l + L)];
            double ar = A[static_cast<std::size_t>(-l + L)];  // D(-beta) kernel is reflected
            if (a == 0.0 && ar == 0.0) continue;
            Eigen::Index lo = std::max<Eigen::Index>(0, l);
            Eigen::Index hi = std::min<Eigen::Index>(n, n + l);
            for (Eigen::Index j = lo; j < hi; ++j) {
                nu[j] += a * cu[j - l];
                nd[j] += ar * cd[j - l];
            }
        }
        up.swap(nu);
        dn.swap(nd);
    }
    E2Kernel out;
    out.m = m;
    out.beta = beta;
    out.window = window;
    out.kernel.resize(n);
    double mass = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        double p = std::norm(up[j]) + std::norm(dn[j]);
        out.kernel[j] = std::sqrt(p);
        mass += p;
    }
    if (1.0 - mass > 1e-14)
        throw std::runtime_error("e2_kernel: window too small, tail mass " +
                                 std::to_string(1.0 - mass));
    return out;
}

std::vector<double> e2_momentum_distribution(int m, double beta, int window,
                                             const Eigen::Vector2cd& coin_init,
                                             int k_points) {
    if (k_points < 64) throw std::invalid_argument("e2_momentum_distribution: too few k points");
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<Complex> cu(static_cast<std::size_t>(k_points)),
        cd(static_cast<std::size_t>(k_points));
    std::vector<double> theta(static_cast<std::size_t>(k_points));
    for (int i = 0; i < k_points; ++i) {
        double k = -M_PI + 2.0 * M_PI * i / k_points;
        theta[static_cast<std::size_t>(i)] = 2.0 * beta * std::sin(k);
        cu[static_cast<std::size_t>(i)] = coin_init[0];
        cd[static_cast<std::size_t>(i)] = coin_init[1];
    }
    for (int t = 0; t < m; ++t)
        for (int i = 0; i < k_points; ++i) {
            Complex a = s * (cu[static_cast<std::size_t>(i)] + cd[static_cast<std::size_t>(i)]);
            Complex b = s * (cu[static_cast<std::size_t>(i)] - cd[static_cast<std::size_t>(i)]);
            Complex ph = std::polar(1.0, theta[static_cast<std::size_t>(i)]);
            cu[static_cast<std::size_t>(i)] = ph * a;
            cd[static_cast<std::size_t>(i)] = std::conj(ph) * b;
        }
    std::vector<double> out(static_cast<std::size_t>(2 * window + 1));
    for (int j = -window; j <= window; ++j) {
        Complex au = 0.0, ad = 0.0;
        for (int i = 0; i < k_points; ++i) {
            double k = -M_PI + 2.0 * M_PI * i / k_points;
            Complex ph = std::polar(1.0, k * j);
            au += ph * cu[static_cast<std::size_t>(i)];
            ad += ph * cd[static_cast<std::size_t>(i)];
        }
        au /= double(k_points);
        ad /= double(k_points);
        out[static_cast<std::size_t>(j + window)] = std::norm(au) + std::norm(ad);
    }
    return out;
}

E2Dispersion e2_dispersion(double beta, int k_points) {
    if (k_points < 16) throw std::invalid_argument("e2_dispersion: too few k points");
    E2Dispersion d;
    d.k.reserve(static_cast<std::size_t>(k_points) + 1);
    d.omega.reserve(static_cast<std::size_t>(k_points) + 1);
    d.v_group.reserve(static_cast<std::size_t>(k_points) + 1);
    const double r2 = std::sqrt(2.0);
    for (int i = 0; i <= k_points; ++i) {
        double k = -M_PI + 2.0 * M_PI * i / k_points;
        double th = 2.0 * beta * std::sin(k);
        double c = std::cos(th) / r2;
        double om = std::acos(std::clamp(c, -1.0, 1.0));
        double sinom = std::sqrt(std::max(1.0 - c * c, 0.0));
        double vg = sinom > 0.0
                        ? 2.0 * beta * std::cos(k) * std::sin(th) / (r2 * sinom)
                        : 0.0;
        d.k.push_back(k);
        d.omega.push_back(om);
        d.v_group.push_back(vg);
        d.v_max = std::max(d.v_max, std::abs(vg));
        // Hadamard band: sin mu = sin(th)/sqrt(2)
        double sm = std::sin(th) / r2;
        double cm = std::sqrt(std::max(1.0 - sm * sm, 0.0));
        if (cm > 0.0)
            d.v_front = std::max(d.v_front,
                                 std::abs(2.0 * beta * std::cos(k) * std::cos(th) / (r2 * cm)));
    }
    d.v_light = 2.0 * std::abs(beta);
    return d;
}

// ---------------------------------------------------------------------------
// su(1,1)
// ---------------------------------------------------------------------------

Su11Moments su11_moments(double beta) {
    if (beta < 0.0) throw std::invalid_argument("su11_moments: beta must be >= 0");
    double s2 = std::sinh(beta) * std::sinh(beta);
    return {s2, 2.0 * s2 * (s2 + 1.0)};
}

double su11_growth_rate(double beta) { return 4.0 * beta; }

double su11_even_probability(int n, double beta) {
    if (n < 0) throw std::invalid_argument("su11_even_probability: n must be >= 0");
    if (beta == 0.0) return n == 0 ? 1.0 : 0.0;
    // (2n)! / (2^{2n} (n!)^2) tanh^{2n} / cosh, in logs
    double lnp = std::lgamma(2.0 * n + 1.0) - 2.0 * n * std::log(2.0) -
                 2.0 * std::lgamma(n + 1.0) + 2.0 * n * std::log(std::tanh(beta)) -
                 std::log(std::cosh(beta));
    return std::exp(lnp);
}

// ---------------------------------------------------------------------------
// Overlap formulas
// ---------------------------------------------------------------------------

double glauber_line_overlap(double beta, int k, int l) {
    double d = double(k - l);
    return std::exp(-beta * beta * d * d / 2.0);
}

double number_overlap_log(double alpha_abs) { return -alpha_abs * alpha_abs / 2.0; }

double su2_neighbor_overlap_sq(double S, double d_theta) {
    if (S <= 0.0) throw std::invalid_argument("su2_neighbor_overlap_sq: S must be > 0");
    return std::exp(4.0 * S * std::log(std::cos(d_theta / 2.0)));
}

Complex circle_overlap(double beta0, double phi, int k, int l) {
    double b2 = beta0 * beta0;
    Complex expo = -b2 + b2 * std::polar(1.0, (l - k) * phi);
    return std::exp(expo);
}

}  // namespace fsl::oracles
