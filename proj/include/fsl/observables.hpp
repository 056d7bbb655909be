#pragma once

// FSL distributions, moments, widths, entanglement, asymmetry, and
// localization metrics extracted from walker states.

#include "fsl/algebra.hpp"
#include "fsl/numerics.hpp"

#include <span>
#include <vector>

namespace fsl::observables {

using algebra::AlgebraRep;
using numerics::ComplexVector;

/// Probability over FSL sites (coin marginalized). `leakage` is the mass
/// sitting inside the truncation guard band.
struct Distribution {
    const AlgebraRep* rep = nullptr;
    std::vector<double> p;
    double leakage = 0.0;

    double total() const;
};

struct SpreadReport {
    std::vector<double> mean;  // per Cartan axis
    double sigma = 0.0;        // 1D: std-dev; 2D: radial std-dev
    int m = 0;                 // step index (filled by callers)
};

/// P(site) = sum_coin |amplitude(site, coin)|^2.
Distribution fsl_distribution(const ComplexVector& state, const AlgebraRep& rep);

SpreadReport spread(const Distribution& dist);

/// Normalized signed L1 asymmetry of mirrored bins about `center`
/// (1D representations; center must be a lattice label).
double asymmetry(const Distribution& dist, const algebra::SiteLabel& center);

/// Max Cartan-space distance from the distribution mean over sites with
/// P > threshold.
double support_radius(const Distribution& dist, double threshold);

/// Von Neumann entropy (bits) of the reduced coin state.
double coin_entropy(const ComplexVector& state, const AlgebraRep& rep);

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

struct PowerLawFit {
    double exponent = 0.0;
    double prefactor_log = 0.0;
    double r_squared = 0.0;
};

/// Least-squares fit of log y against log x.
PowerLawFit power_law_fit(std::span<const double> xs, std::span<const double> ys);

/// Least-squares fit of log y against x (exponential growth rate).
PowerLawFit exponential_fit(std::span<const double> xs, std::span<const double> ys);

}  // namespace fsl::observables
