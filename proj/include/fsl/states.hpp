#pragma once

// Initial walker states (Fock, Glauber/spin/su(3) coherent, Gaussian,
// squeezed vacuum), overlaps, geodesic distances, and Husimi projections.

#include "fsl/algebra.hpp"
#include "fsl/numerics.hpp"

#include <span>
#include <variant>

namespace fsl::states {

using algebra::AlgebraKind;
using algebra::AlgebraRep;
using algebra::SiteLabel;
using numerics::Complex;
using numerics::ComplexVector;

struct Fock {
    SiteLabel label;
};
struct GlauberCoherent {
    Complex alpha;
};
struct SpinCoherent {
    double theta = 0.0;  // [0, pi]
    double phi = 0.0;    // [0, 2 pi)
};
struct Su3Coherent {
    std::array<Complex, 3> beta;  // sum |beta_i|^2 = 1
};
struct GaussianFsl {
    SiteLabel center;
    double sigma = 1.0;  // in Cartan-coordinate units
};
struct SqueezedVacuum {
    Complex beta;
};
struct E2Site {
    int j = 0;
};

using StateSpec = std::variant<Fock, GlauberCoherent, SpinCoherent, Su3Coherent,
                               GaussianFsl, SqueezedVacuum, E2Site>;

/// Normalized walker amplitude vector (length rep.site_count).
ComplexVector make_state(const AlgebraRep& rep, const StateSpec& spec);

// ---------------------------------------------------------------------------
// Coin initialization
// ---------------------------------------------------------------------------

struct CoinInit {
    enum class Kind { SymmetricPlusI, GroverSymmetric, Custom };
    Kind kind = Kind::SymmetricPlusI;
    Eigen::VectorXcd custom;

    static CoinInit symmetric_plus_i() { return {Kind::SymmetricPlusI, {}}; }
    static CoinInit grover_symmetric() { return {Kind::GroverSymmetric, {}}; }
    static CoinInit custom_amplitudes(Eigen::VectorXcd amps);
};

/// Normalized coin vector of the requested dimension.
Eigen::VectorXcd coin_init_vector(const CoinInit& init, int coin_dim);

/// Tensor product walker (x) coin, coin index fastest.
ComplexVector compose(const ComplexVector& walker, const Eigen::VectorXcd& coin);

// ---------------------------------------------------------------------------
// Overlaps / geometry
// ---------------------------------------------------------------------------

/// <a|b> with conjugation on a.
Complex overlap(const ComplexVector& a, const ComplexVector& b);

/// Geodesic displacement distance on the phase space of the algebra.
/// extra: S for su(2), Bargmann index k for su(1,1); ignored otherwise.
double geodesic_distance(AlgebraKind kind, Complex beta, double extra = 0.0);

/// Husimi function Q(theta, phi) = |<theta,phi|state>|^2 on a grid
/// (rows = theta samples, cols = phi samples). su(2) representations only.
Eigen::MatrixXd husimi_su2(const AlgebraRep& rep, const ComplexVector& state,
                           std::span<const double> thetas,
                           std::span<const double> phis);

}  // namespace fsl::states
