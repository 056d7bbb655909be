#include "fsl/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace fsl::numerics {

namespace {

void check_finite(const std::vector<Triplet>& ts) {
    for (const auto& t : ts) {
        if (!std::isfinite(t.value().real()) || !std::isfinite(t.value().imag()))
            throw std::invalid_argument("SparseOperator: non-finite entry");
    }
}

}  // namespace

SparseOperator::SparseOperator(Eigen::Index rows, Eigen::Index cols,
                               std::vector<Triplet> entries, double drop_tol) {
    if (rows <= 0 || cols <= 0)
        throw std::invalid_argument("SparseOperator: dimensions must be positive");
    check_finite(entries);
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.col() != b.col() ? a.col() < b.col() : a.row() < b.row();
    });
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].row() == entries[i - 1].row() && entries[i].col() == entries[i - 1].col())
            throw std::invalid_argument("SparseOperator: duplicate coordinate (" +
                                        std::to_string(entries[i].row()) + "," +
                                        std::to_string(entries[i].col()) + ")");
    }
    if (drop_tol > 0.0) {
        std::erase_if(entries, [drop_tol](const Triplet& t) {
            return std::abs(t.value()) <= drop_tol;
        });
    }
    mat_.resize(rows, cols);
    mat_.setFromTriplets(entries.begin(), entries.end());
    mat_.makeCompressed();
}

SparseOperator SparseOperator::identity(Eigen::Index n) {
    std::vector<Triplet> ts;
    ts.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) ts.emplace_back(i, i, Complex(1.0, 0.0));
    return SparseOperator(n, n, std::move(ts));
}

SparseOperator SparseOperator::adjoint() const {
    Eigen::SparseMatrix<Complex> m = mat_.adjoint();
    m.makeCompressed();
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::transpose() const {
    Eigen::SparseMatrix<Complex> m = mat_.transpose();
    m.makeCompressed();
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::operator+(const SparseOperator& o) const {
    if (rows() != o.rows() || cols() != o.cols())
        throw std::invalid_argument("SparseOperator: dimension mismatch in +");
    Eigen::SparseMatrix<Complex> m = mat_ + o.mat_;
    m.makeCompressed();
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::operator-(const SparseOperator& o) const {
    if (rows() != o.rows() || cols() != o.cols())
        throw std::invalid_argument("SparseOperator: dimension mismatch in -");
    Eigen::SparseMatrix<Complex> m = mat_ - o.mat_;
    m.makeCompressed();
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::scaled(Complex s) const {
    Eigen::SparseMatrix<Complex> m = s * mat_;
    m.makeCompressed();
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::compose(const SparseOperator& o) const {
    if (cols() != o.rows())
        throw std::invalid_argument("SparseOperator: dimension mismatch in compose");
    Eigen::SparseMatrix<Complex> m = (mat_ * o.mat_).pruned(0.0, 0.0);
    m.makeCompressed();
    return SparseOperator(std::move(m));
}

ComplexVector SparseOperator::apply(const ComplexVector& x) const {
    if (cols() != x.size())
        throw std::invalid_argument("SparseOperator::apply: dimension mismatch (op cols " +
                                    std::to_string(cols()) + ", vector length " +
                                    std::to_string(x.size()) + ")");
    return mat_ * x;
}

void SparseOperator::apply_into(const ComplexVector& x, ComplexVector& y) const {
    if (cols() != x.size())
        throw std::invalid_argument("SparseOperator::apply_into: dimension mismatch");
    y.noalias() = mat_ * x;
}

double SparseOperator::one_norm() const {
    double best = 0.0;
    for (Eigen::Index c = 0; c < mat_.outerSize(); ++c) {
        double s = 0.0;
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(mat_, c); it; ++it)
            s += std::abs(it.value());
        best = std::max(best, s);
    }
    return best;
}

double SparseOperator::anti_hermitian_defect() const {
    if (rows() != cols()) return std::numeric_limits<double>::infinity();
    Eigen::SparseMatrix<Complex> d = mat_ + Eigen::SparseMatrix<Complex>(mat_.adjoint());
    double best = 0.0;
    for (Eigen::Index c = 0; c < d.outerSize(); ++c)
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(d, c); it; ++it)
            best = std::max(best, std::abs(it.value()));
    return best;
}

double SparseOperator::max_abs() const {
    double best = 0.0;
    for (Eigen::Index c = 0; c < mat_.outerSize(); ++c)
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(mat_, c); it; ++it)
            best = std::max(best, std::abs(it.value()));
    return best;
}

double SparseOperator::max_abs_diff(const SparseOperator& o) const {
    if (rows() != o.rows() || cols() != o.cols())
        throw std::invalid_argument("SparseOperator: dimension mismatch in max_abs_diff");
    Eigen::SparseMatrix<Complex> d = mat_ - o.mat_;
    double best = 0.0;
    for (Eigen::Index c = 0; c < d.outerSize(); ++c)
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(d, c); it; ++it)
            best = std::max(best, std::abs(it.value()));
    return best;
}

void SparseOperator::dump_triplets(std::ostream& os) const {
    for (Eigen::Index c = 0; c < mat_.outerSize(); ++c)
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(mat_, c); it; ++it)
            os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' '
               << it.value().imag() << '\n';
}

// ---------------------------------------------------------------------------
// expm_apply
// ---------------------------------------------------------------------------

namespace {

// Taylor terms needed so that theta^j / j! drops below tol.
int taylor_terms(double theta, double tol) {
    double t = 1.0;
    for (int j = 1; j <= 120; ++j) {
        t *= theta / j;
        if (t < tol) return j;
    }
    return 120;
}

// Chebyshev expansion length for exp(i R x) on [-1, 1].
int chebyshev_terms(double R) {
    int k = static_cast<int>(std::ceil(R + 12.0 * std::cbrt(std::max(R, 1.0)) + 24.0));
    return std::max(k, 8);
}

ComplexVector expm_taylor(const SparseOperator& gen, const ComplexVector& v,
                          Complex scale, double norm, const ExpmOptions& opts,
                          ExpmReport& rep) {
    int substeps = std::max(1, static_cast<int>(std::ceil(norm / opts.taylor_theta)));
    Complex step_scale = scale / static_cast<double>(substeps);
    rep.substeps = substeps;

    ComplexVector y = v;
    ComplexVector term(v.size()), next(v.size());
    for (int s = 0; s < substeps; ++s) {
        term = y;
        double ynorm = y.norm();
        int small_streak = 0;
        for (int j = 1;; ++j) {
            if (rep.applications >= opts.max_applications) {
                rep.residual = term.norm() / std::max(ynorm, 1e-300);
                throw std::runtime_error(
                    "expm_apply: Taylor series did not converge within budget (" +
                    std::to_string(opts.max_applications) + " applications, residual " +
                    std::to_string(rep.residual) + ")");
            }
            gen.apply_into(term, next);
            next *= step_scale / static_cast<double>(j);
            term.swap(next);
            ++rep.applications;
            y += term;
            double tnorm = term.norm();
            ynorm = y.norm();
            rep.residual = tnorm / std::max(ynorm, 1e-300);
            small_streak = (rep.residual <= opts.tolerance) ? small_streak + 1 : 0;
            if (small_streak >= 2) break;
        }
    }
    return y;
}

ComplexVector expm_chebyshev(const SparseOperator& gen, const ComplexVector& v,
                             Complex scale, double R, const ExpmOptions& opts,
                             ExpmReport& rep) {
    // exp(A)v with A = scale*gen anti-Hermitian: A = i H, spec(H) in [-R, R].
    // exp(iRx) = sum_k (2 - delta_k0) i^k J_k(R) T_k(x).
    int K = chebyshev_terms(R);
    if (K > opts.max_applications)
        throw std::runtime_error("expm_apply: Chebyshev expansion needs " + std::to_string(K) +
                                 " applications, budget is " +
                                 std::to_string(opts.max_applications));
    std::vector<double> J = bessel_j_array(R, K);
    // H/R applied as (-i*scale/R) * gen
    Complex h_scale = Complex(0.0, -1.0) * scale / R;

    const Complex ik[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    ComplexVector t_prev = v;
    ComplexVector t_cur(v.size()), tmp(v.size());
    ComplexVector y = J[0] * v;

    gen.apply_into(v, t_cur);
    t_cur *= h_scale;
    ++rep.applications;
    y += 2.0 * ik[1] * J[1] * t_cur;

    for (int k = 2; k <= K; ++k) {
        gen.apply_into(t_cur, tmp);
        tmp = 2.0 * h_scale * tmp - t_prev;
        t_prev.swap(t_cur);
        t_cur.swap(tmp);
        ++rep.applications;
        double c = 2.0 * J[static_cast<std::size_t>(k)];
        if (c != 0.0) y += ik[k % 4] * c * t_cur;
    }
    rep.substeps = 1;
    rep.residual = std::abs(J[static_cast<std::size_t>(K)]);
    return y;
}

}  // namespace

int expm_planned_applications(double scaled_norm, const ExpmOptions& opts) {
    if (opts.anti_hermitian && scaled_norm > opts.chebyshev_threshold)
        return chebyshev_terms(scaled_norm);
    int substeps = std::max(1, static_cast<int>(std::ceil(scaled_norm / opts.taylor_theta)));
    return substeps * taylor_terms(opts.taylor_theta, opts.tolerance);
}

ComplexVector expm_apply(const SparseOperator& gen, const ComplexVector& v,
                         Complex scale, const ExpmOptions& opts, ExpmReport* report) {
    if (gen.rows() != gen.cols())
        throw std::invalid_argument("expm_apply: generator must be square");
    if (gen.cols() != v.size())
        throw std::invalid_argument("expm_apply: dimension mismatch");
    if (!std::isfinite(scale.real()) || !std::isfinite(scale.imag()))
        throw std::invalid_argument("expm_apply: non-finite scale");

    ExpmReport rep;
    ComplexVector y;
    if (scale == Complex(0.0, 0.0)) {
        y = v;
    } else {
        double norm = std::abs(scale) * gen.one_norm();
        if (opts.anti_hermitian && norm > opts.chebyshev_threshold)
            y = expm_chebyshev(gen, v, scale, norm, opts, rep);
        else
            y = expm_taylor(gen, v, scale, norm, opts, rep);
    }
    if (report) *report = rep;
    return y;
}

// ---------------------------------------------------------------------------
// Reduced coin density / entropy
// ---------------------------------------------------------------------------

DensityMatrix reduced_coin_density(const ComplexVector& state,
                                   Eigen::Index site_count, int coin_dim) {
    if (coin_dim < 2 || coin_dim > 8)
        throw std::invalid_argument("reduced_coin_density: coin_dim must be in [2, 8]");
    if (state.size() != site_count * coin_dim)
        throw std::invalid_argument("reduced_coin_density: state length != site_count*coin_dim");
    double n2 = state.squaredNorm();
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-8)
        throw std::invalid_argument("reduced_coin_density: state not normalized (norm " +
                                    std::to_string(std::sqrt(n2)) + ")");
    DensityMatrix rho = DensityMatrix::Zero(coin_dim, coin_dim);
    for (Eigen::Index s = 0; s < site_count; ++s) {
        const Complex* block = state.data() + s * coin_dim;
        for (int c = 0; c < coin_dim; ++c)
            for (int d = 0; d < coin_dim; ++d)
                rho(c, d) += block[c] * std::conj(block[d]);
    }
    rho /= n2;
    return rho;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    if (rho.rows() != rho.cols() || rho.rows() < 2 || rho.rows() > 8)
        throw std::invalid_argument("von_neumann_entropy: dimension must be in [2, 8]");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("von_neumann_entropy: matrix not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-12 || std::abs(rho.trace().imag()) > 1e-12)
        throw std::invalid_argument("von_neumann_entropy: trace != 1");
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        double lam = es.eigenvalues()[i];
        if (lam < -1e-9)
            throw std::invalid_argument("von_neumann_entropy: negative eigenvalue " +
                                        std::to_string(lam));
        if (lam < 1e-14) continue;  // 0 log 0 := 0
        s -= lam * std::log2(lam);
    }
    return std::max(s, 0.0);
}

// ---------------------------------------------------------------------------
// Bessel
// ---------------------------------------------------------------------------

std::vector<double> bessel_j_array(double x, int max_order) {
    if (max_order < 0) throw std::invalid_argument("bessel_j_array: negative order");
    if (x < 0.0) throw std::invalid_argument("bessel_j_array: x must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    // Miller downward recurrence, normalized by J_0 + 2 sum J_{2k} = 1.
    int start = max_order + static_cast<int>(std::ceil(1.2 * x)) + 40;
    if (start % 2) ++start;
    double jp = 0.0, jc = 1e-300;
    double norm = 0.0;
    for (int k = start; k >= 1; --k) {
        double jm = (2.0 * k / x) * jc - jp;
        jp = jc;
        jc = jm;
        if (k - 1 <= max_order) out[static_cast<std::size_t>(k - 1)] = jc;
        if (((k - 1) % 2) == 0) norm += (k - 1 == 0 ? 1.0 : 2.0) * jc;
        // rescale to avoid overflow
        if (std::abs(jc) > 1e250) {
            jc *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            for (auto& v : out) v *= 1e-250;
        }
    }
    for (auto& v : out) v /= norm;
    return out;
}

double bessel_j(int order, double x) {
    int a = std::abs(order);
    double sign = 1.0;
    if (order < 0 && (a % 2)) sign = -sign;
    if (x < 0.0) {
        x = -x;
        if (a % 2) sign = -sign;
    }
    auto arr = bessel_j_array(x, a);
    return sign * arr[static_cast<std::size_t>(a)];
}

}  // namespace fsl::numerics
