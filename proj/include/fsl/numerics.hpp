#pragma once

// Deterministic complex sparse linear algebra: operator application,
// unitary exponential action of anti-Hermitian generators, and
// small-matrix spectral utilities.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace fsl::numerics {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using Triplet = Eigen::Triplet<Complex>;

/// d x d coin density matrix, d in [2, 8].
using DensityMatrix = Eigen::MatrixXcd;

// ---------------------------------------------------------------------------
// SparseOperator
// ---------------------------------------------------------------------------

/// Immutable sparse complex operator built from coordinate triplets.
/// Duplicate coordinates are rejected; entries with |value| <= drop_tol
/// are discarded at construction (default keeps everything).
class SparseOperator {
public:
    SparseOperator() = default;
    SparseOperator(Eigen::Index rows, Eigen::Index cols,
                   std::vector<Triplet> entries, double drop_tol = 0.0);

    static SparseOperator identity(Eigen::Index n);

    Eigen::Index rows() const { return mat_.rows(); }
    Eigen::Index cols() const { return mat_.cols(); }
    Eigen::Index nonzeros() const { return mat_.nonZeros(); }

    SparseOperator adjoint() const;
    SparseOperator transpose() const;

    SparseOperator operator+(const SparseOperator& o) const;
    SparseOperator operator-(const SparseOperator& o) const;
    SparseOperator scaled(Complex s) const;
    /// Operator composition (this * o).
    SparseOperator compose(const SparseOperator& o) const;

    /// y = A x (fresh vector).
    ComplexVector apply(const ComplexVector& x) const;
    /// y = A x into preallocated storage; x and y must not alias.
    void apply_into(const ComplexVector& x, ComplexVector& y) const;

    /// Max column sum of absolute values (induced 1-norm).
    double one_norm() const;
    /// Largest absolute entry of A + A^dagger; 0 for exactly anti-Hermitian A.
    double anti_hermitian_defect() const;
    /// Largest absolute entry.
    double max_abs() const;

    /// Entrywise equality defect max|A - B|.
    double max_abs_diff(const SparseOperator& o) const;

    DenseMatrix dense() const { return DenseMatrix(mat_); }

    /// Writes one line per entry: "row col re im".
    void dump_triplets(std::ostream& os) const;

    const Eigen::SparseMatrix<Complex>& matrix() const { return mat_; }

private:
    explicit SparseOperator(Eigen::SparseMatrix<Complex> m) : mat_(std::move(m)) {}
    Eigen::SparseMatrix<Complex> mat_;
};

// ---------------------------------------------------------------------------
// Exponential action
// ---------------------------------------------------------------------------

struct ExpmOptions {
    /// Relative truncation target for the polynomial expansion.
    double tolerance = 1e-15;
    /// Budget of generator applications per call; exceeded -> error.
    int max_applications = 500;
    /// Caller asserts scale*gen is anti-Hermitian (enables the Chebyshev
    /// path and the unitarity expectations documented below).
    bool anti_hermitian = false;
    /// Taylor sub-step norm target; ||scale*gen||/theta sub-steps are used.
    double taylor_theta = 3.5;
    /// Norm threshold above which the anti-Hermitian path switches from
    /// sub-stepped Taylor to a Chebyshev expansion.
    double chebyshev_threshold = 8.0;
};

struct ExpmReport {
    int applications = 0;
    int substeps = 0;
    double residual = 0.0;   // last relative term magnitude
};

/// Computes exp(scale*gen) * v.
///
/// gen must be square. For anti-Hermitian scale*gen the result norm matches
/// ||v|| to ~1e-11 and the expansion is unconditionally stable; for general
/// generators the sub-stepped Taylor scheme is best-effort. Throws if the
/// application budget is exhausted before the series converges.
ComplexVector expm_apply(const SparseOperator& gen, const ComplexVector& v,
                         Complex scale, const ExpmOptions& opts = {},
                         ExpmReport* report = nullptr);

/// Number of generator applications expm_apply will need for a generator
/// of the given 1-norm under opts (used to size budgets up front).
int expm_planned_applications(double scaled_norm, const ExpmOptions& opts);

// ---------------------------------------------------------------------------
// Coin reduced density / entropy
// ---------------------------------------------------------------------------

/// Partial trace over the walker index for a state stored coin-fastest
/// (index = site*coin_dim + coin). The state must be normalized to 1e-8;
/// the result is normalized to unit trace.
DensityMatrix reduced_coin_density(const ComplexVector& state,
                                   Eigen::Index site_count, int coin_dim);

/// Von Neumann entropy in bits. Eigenvalues below 1e-14 are clamped to 0;
/// an eigenvalue below -1e-9 or a non-Hermitian input is an error.
double von_neumann_entropy(const DensityMatrix& rho);

// ---------------------------------------------------------------------------
// Small utilities
// ---------------------------------------------------------------------------

/// J_0(x) .. J_max_order(x) for x >= 0 via Miller's downward recurrence.
std::vector<double> bessel_j_array(double x, int max_order);

/// Bessel J_l(x) for any integer order (J_{-l} = (-1)^l J_l).
double bessel_j(int order, double x);

}  // namespace fsl::numerics
