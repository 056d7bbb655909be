#pragma once

// Independent analytic and brute-force references used for acceptance:
// the ideal 1D walk recursion, e(2) Bessel-kernel and momentum-space
// solutions, su(1,1) closed-form moments, and overlap formulas.

#include "fsl/numerics.hpp"

#include <vector>

namespace fsl::oracles {

using numerics::Complex;

// ---------------------------------------------------------------------------
// Ideal 1D DTQW
// ---------------------------------------------------------------------------

/// Exact amplitudes of the orthogonal-site Hadamard walk after m steps,
/// on j in [-m, m] (index j + m).
struct IdealWalkState {
    int m = 0;
    Eigen::VectorXcd up, dn;

    double prob(int j) const;
    double total() const;
    /// Std-dev of the site index.
    double sigma() const;
};

IdealWalkState ideal_dtqw(int m, const Eigen::Vector2cd& coin_init);

// ---------------------------------------------------------------------------
// e(2) walk
// ---------------------------------------------------------------------------

/// m-step walk kernel on j in [-window, window], built by iterating the
/// Hadamard toss and the Bessel one-step displacement kernel
/// A_l = J_l(2 beta). P(j, m) = |K_{j - j0}(m)|^2 and is independent of
/// the initial coin state; K stores the (nonnegative) magnitudes sqrt(P).
struct E2Kernel {
    int m = 0;
    double beta = 0.0;
    int window = 0;
    Eigen::VectorXd kernel;  // K_j, index j + window

    double prob(int j) const;
};

E2Kernel e2_kernel(int m, double beta, int window);

/// Same distribution evaluated from the momentum-space solution
/// (trapezoidal quadrature over >= k_points wavenumbers).
std::vector<double> e2_momentum_distribution(int m, double beta, int window,
                                             const Eigen::Vector2cd& coin_init,
                                             int k_points = 4096);

/// Band structure of the one-step operator.
struct E2Dispersion {
    std::vector<double> k;        // sample points in [-pi, pi]
    std::vector<double> omega;    // arccos[cos(2 beta sin k)/sqrt(2)]
    std::vector<double> v_group;  // analytic d omega / dk
    double v_max = 0.0;           // max |v_group|
    /// Front velocity of the Hadamard step operator (eigenphase band
    /// sin mu = sin(2 beta sin k)/sqrt(2)); the printed omega band carries
    /// a det = +1 coin and underestimates the walk front.
    double v_front = 0.0;
    /// Light-cone velocity of the displacement kernel itself (= 2 beta);
    /// the walk support stays inside v_light * m up to super-exponentially
    /// small tails, and this is the bound used for support checks.
    double v_light = 0.0;
};

E2Dispersion e2_dispersion(double beta, int k_points = 4096);

// ---------------------------------------------------------------------------
// su(1,1)
// ---------------------------------------------------------------------------

struct Su11Moments {
    double mean_n = 0.0;
    double var_n = 0.0;
};

/// Closed-form squeezed-vacuum moments for real squeezing parameter:
/// <n> = sinh^2, Dn^2 = 2 sinh^2 (sinh^2 + 1).
Su11Moments su11_moments(double beta);

/// Predicted continuum growth rate d(ln Dn^2)/dm = 4 beta.
double su11_growth_rate(double beta);

/// P(2n) of the squeezed vacuum.
double su11_even_probability(int n, double beta);

// ---------------------------------------------------------------------------
// Overlap formulas
// ---------------------------------------------------------------------------

/// <k beta | l beta> = exp(-beta^2 (k-l)^2 / 2) for real beta.
double glauber_line_overlap(double beta, int k, int l);

/// log of the number-distribution overlap O_l = exp(-|alpha|^2/2)
/// (returned in log form; underflows for the paper's alpha = 40).
double number_overlap_log(double alpha_abs);

/// |<theta + d_theta, phi | theta, phi>|^2 = cos(d_theta/2)^{4S}.
double su2_neighbor_overlap_sq(double S, double d_theta);

/// <beta0 e^{i k phi} | beta0 e^{i l phi}> for the circle walk.
Complex circle_overlap(double beta0, double phi, int k, int l);

}  // namespace fsl::oracles
