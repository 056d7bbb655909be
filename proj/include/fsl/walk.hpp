#pragma once

// Coin operators, coin-conditioned displacement unitaries, stroboscopic
// evolution, the small-step continuum reference, and stochastic coin
// dephasing with reproducible ensemble averaging.

#include "fsl/algebra.hpp"
#include "fsl/numerics.hpp"
#include "fsl/observables.hpp"
#include "fsl/states.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fsl::walk {

using algebra::AlgebraRep;
using numerics::Complex;
using numerics::ComplexVector;

// ---------------------------------------------------------------------------
// Coins
// ---------------------------------------------------------------------------

struct CoinSpec {
    enum class Kind { Hadamard, Grover, Custom };
    Kind kind = Kind::Hadamard;
    Eigen::MatrixXcd custom;

    static CoinSpec hadamard() { return {Kind::Hadamard, {}}; }
    static CoinSpec grover() { return {Kind::Grover, {}}; }
    static CoinSpec custom_unitary(Eigen::MatrixXcd u);
};

/// Exact coin matrix of dimension d. Hadamard requires d == 2; the Grover
/// diffusion matrix has diagonal 2/d - 1 and off-diagonal 2/d.
Eigen::MatrixXcd coin_matrix(const CoinSpec& spec, int d);

// ---------------------------------------------------------------------------
// Walk configuration
// ---------------------------------------------------------------------------

enum class NoisePlacement { AfterCoin, BeforeCoin };

struct WalkConfig {
    Complex beta{0.0, 0.0};
    int steps = 0;
    CoinSpec coin = CoinSpec::hadamard();
    states::CoinInit coin_init = states::CoinInit::symmetric_plus_i();
    double leakage_threshold = 1e-8;
    NoisePlacement noise_placement = NoisePlacement::AfterCoin;
};

struct NoiseSpec {
    double epsilon = 0.0;   // std-dev of the per-step sigma_z rotation angle
    int realizations = 1;
    std::uint64_t master_seed = 0;
};

// ---------------------------------------------------------------------------
// Conditional shift
// ---------------------------------------------------------------------------

/// Coin-conditioned displacement: coin state 2i is displaced by
/// D_{alpha_i}(+beta), coin state 2i+1 by D_{alpha_i}(-beta). Blocks are
/// independent, so the transformation is block-exact and unitary.
class ConditionalShift {
public:
    ConditionalShift(const AlgebraRep& rep, Complex beta);

    void apply(ComplexVector& state) const;           // D(+beta)/D(-beta) blocks
    void apply_inverse(ComplexVector& state) const;   // beta -> -beta

    /// Leakage (guard-band probability) of the current state; the walk
    /// aborts when this exceeds the configured threshold.
    double leakage(const ComplexVector& state) const;

    const AlgebraRep& rep() const { return *rep_; }

private:
    void displace(ComplexVector& state, bool inverse) const;

    const AlgebraRep* rep_;
    Complex beta_;
    std::vector<numerics::SparseOperator> gens_;  // beta E+ - conj(beta) E- per root
    numerics::ExpmOptions opts_;
};

// ---------------------------------------------------------------------------
// Evolution
// ---------------------------------------------------------------------------

struct StepRecord {
    int m = 0;
    double norm = 0.0;
    std::vector<double> mean;
    double sigma = 0.0;
    double entropy_bits = 0.0;
    double leakage = 0.0;
};

struct Snapshot {
    int m = 0;
    observables::Distribution dist;
};

struct Trajectory {
    std::vector<StepRecord> per_step;   // m = 0 .. steps
    std::vector<Snapshot> snapshots;    // cadence-spaced, m = 0 first
};

/// One step: coin matrix site-wise, then the conditional shift.
ComplexVector step(const ComplexVector& state, const AlgebraRep& rep,
                   const WalkConfig& config);

/// Deterministic m-step evolution, recording per-step scalars and
/// cadence-spaced distribution snapshots.
Trajectory evolve(ComplexVector state, const AlgebraRep& rep, const WalkConfig& config,
                  int record_every);

struct NoisyResult {
    std::vector<double> mean;    // per step, of the ensemble-averaged distribution
    std::vector<double> sigma;   // per step
    std::vector<Snapshot> snapshots;  // ensemble-averaged distributions
};

/// Stochastic coin dephasing: a sigma_z rotation by an angle drawn from
/// Normal(0, epsilon^2) joins every coin toss. Realizations use
/// counter-based streams keyed by (master_seed, realization, step) and are
/// reduced in fixed chunk order, so results do not depend on thread count.
/// Two-state coins only. threads = 0 picks hardware concurrency.
NoisyResult evolve_noisy(const ComplexVector& state, const AlgebraRep& rep,
                         const WalkConfig& config, const NoiseSpec& noise,
                         int record_every, int threads = 0);

/// Small-step reference evolution exp(-i H_eff T) for single-root,
/// two-coin walks, applied on the doubled space.
ComplexVector continuum_reference(const ComplexVector& state, const AlgebraRep& rep,
                                  double T);

}  // namespace fsl::walk
