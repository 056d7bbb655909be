#include "fsl/walk.hpp"

#include "fsl/rng.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace fsl::walk {

using numerics::ExpmOptions;
using numerics::SparseOperator;
using numerics::Triplet;

namespace {

using RowMajorMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using StateMap = Eigen::Map<RowMajorMatrix>;

void apply_coin(ComplexVector& state, const Eigen::MatrixXcd& coin, Eigen::Index sites) {
    StateMap m(state.data(), sites, coin.rows());
    m = m * coin.transpose();
}

void apply_coin_phase(ComplexVector& state, double angle, Eigen::Index sites) {
    if (angle == 0.0) return;
    Complex up = std::polar(1.0, angle);
    Complex dn = std::conj(up);
    StateMap m(state.data(), sites, 2);
    m.col(0) *= up;
    m.col(1) *= dn;
}

}  // namespace

CoinSpec CoinSpec::custom_unitary(Eigen::MatrixXcd u) {
    CoinSpec s;
    s.kind = Kind::Custom;
    s.custom = std::move(u);
    return s;
}

Eigen::MatrixXcd coin_matrix(const CoinSpec& spec, int d) {
    if (d < 2) throw std::invalid_argument("coin_matrix: dimension must be >= 2");
    switch (spec.kind) {
        case CoinSpec::Kind::Hadamard: {
            if (d != 2) throw std::invalid_argument("coin_matrix: Hadamard requires d == 2");
            Eigen::MatrixXcd h(2, 2);
            const double s = 1.0 / std::sqrt(2.0);
            h << s, s, s, -s;
            return h;
        }
        case CoinSpec::Kind::Grover: {
            Eigen::MatrixXcd g =
                Eigen::MatrixXcd::Constant(d, d, Complex(2.0 / d, 0.0)) -
                Eigen::MatrixXcd::Identity(d, d);
            return g;
        }
        case CoinSpec::Kind::Custom: {
            if (spec.custom.rows() != d || spec.custom.cols() != d)
                throw std::invalid_argument("coin_matrix: custom matrix has wrong dimension");
            Eigen::MatrixXcd uu = spec.custom.adjoint() * spec.custom;
            if ((uu - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12)
                throw std::invalid_argument("coin_matrix: custom matrix is not unitary");
            return spec.custom;
        }
    }
    throw std::logic_error("coin_matrix: unreachable");
}

// ---------------------------------------------------------------------------
// ConditionalShift
// ---------------------------------------------------------------------------

ConditionalShift::ConditionalShift(const AlgebraRep& rep, Complex beta)
    : rep_(&rep), beta_(beta) {
    if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag()))
        throw std::invalid_argument("ConditionalShift: beta must be finite");
    gens_.reserve(static_cast<std::size_t>(rep.root_count));
    double worst_norm = 0.0;
    for (int i = 0; i < rep.root_count; ++i) {
        SparseOperator g = rep.root_raise[static_cast<std::size_t>(i)].scaled(beta) -
                           rep.root_lower[static_cast<std::size_t>(i)].scaled(std::conj(beta));
        worst_norm = std::max(worst_norm, g.one_norm());
        gens_.push_back(std::move(g));
    }
    opts_.anti_hermitian = true;
    opts_.max_applications =
        std::max(500, numerics::expm_planned_applications(worst_norm, opts_) + 32);
}

void ConditionalShift::displace(ComplexVector& state, bool inverse) const {
    const Eigen::Index sites = rep_->site_count;
    const int cd = rep_->coin_dim;
    if (state.size() != sites * cd)
        throw std::invalid_argument("ConditionalShift: state length mismatch");
    if (beta_ == Complex(0.0, 0.0)) return;
    ComplexVector block(sites), out(sites);
    for (int i = 0; i < rep_->root_count; ++i) {
        for (int half = 0; half < 2; ++half) {
            const int c = 2 * i + half;
            for (Eigen::Index s = 0; s < sites; ++s) block[s] = state[s * cd + c];
            double sign = (half == 0) ? 1.0 : -1.0;
            if (inverse) sign = -sign;
            out = numerics::expm_apply(gens_[static_cast<std::size_t>(i)], block, sign, opts_);
            for (Eigen::Index s = 0; s < sites; ++s) state[s * cd + c] = out[s];
        }
    }
}

void ConditionalShift::apply(ComplexVector& state) const { displace(state, false); }
void ConditionalShift::apply_inverse(ComplexVector& state) const { displace(state, true); }

double ConditionalShift::leakage(const ComplexVector& state) const {
    if (!rep_->truncated()) return 0.0;
    const Eigen::Index sites = rep_->site_count;
    const int cd = rep_->coin_dim;
    double leak = 0.0;
    for (Eigen::Index s = 0; s < sites; ++s) {
        if (!rep_->in_guard_band(s)) continue;
        for (int c = 0; c < cd; ++c) leak += std::norm(state[s * cd + c]);
    }
    return leak;
}

// ---------------------------------------------------------------------------
// Evolution
// ---------------------------------------------------------------------------

namespace {

void check_leakage(const ConditionalShift& shift, const ComplexVector& state,
                   double threshold, int m) {
    double leak = shift.leakage(state);
    if (leak > threshold)
        throw std::runtime_error("walk: leakage " + std::to_string(leak) +
                                 " exceeded threshold at step " + std::to_string(m) +
                                 "; enlarge the truncation");
}

StepRecord record_step(int m, const ComplexVector& state, const AlgebraRep& rep) {
    StepRecord r;
    r.m = m;
    r.norm = state.norm();
    observables::Distribution d = observables::fsl_distribution(state, rep);
    observables::SpreadReport s = observables::spread(d);
    r.mean = std::move(s.mean);
    r.sigma = s.sigma;
    r.leakage = d.leakage;
    r.entropy_bits = observables::coin_entropy(state, rep);
    return r;
}

}  // namespace

ComplexVector step(const ComplexVector& state, const AlgebraRep& rep,
                   const WalkConfig& config) {
    ComplexVector s = state;
    Eigen::MatrixXcd coin = coin_matrix(config.coin, rep.coin_dim);
    ConditionalShift shift(rep, config.beta);
    apply_coin(s, coin, rep.site_count);
    shift.apply(s);
    check_leakage(shift, s, config.leakage_threshold, 1);
    return s;
}

Trajectory evolve(ComplexVector state, const AlgebraRep& rep, const WalkConfig& config,
                  int record_every) {
    if (record_every < 1) throw std::invalid_argument("evolve: record_every must be >= 1");
    if (config.steps < 0) throw std::invalid_argument("evolve: steps must be >= 0");
    Eigen::MatrixXcd coin = coin_matrix(config.coin, rep.coin_dim);
    ConditionalShift shift(rep, config.beta);

    Trajectory traj;
    traj.per_step.push_back(record_step(0, state, rep));
    traj.snapshots.push_back({0, observables::fsl_distribution(state, rep)});
    for (int m = 1; m <= config.steps; ++m) {
        apply_coin(state, coin, rep.site_count);
        shift.apply(state);
        check_leakage(shift, state, config.leakage_threshold, m);
        traj.per_step.push_back(record_step(m, state, rep));
        if (m % record_every == 0)
            traj.snapshots.push_back({m, observables::fsl_distribution(state, rep)});
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Dephasing ensemble
// ---------------------------------------------------------------------------

namespace {

struct RealizationMoments {
    std::vector<double> mean, m2;           // per step, of this realization
    std::vector<std::vector<double>> dists; // snapshot distributions
};

RealizationMoments run_realization(const ComplexVector& init, const AlgebraRep& rep,
                                   const WalkConfig& config, const ConditionalShift& shift,
                                   const Eigen::MatrixXcd& coin, const NoiseSpec& noise,
                                   std::uint64_t realization, int record_every) {
    RealizationMoments out;
    out.mean.reserve(static_cast<std::size_t>(config.steps) + 1);
    out.m2.reserve(static_cast<std::size_t>(config.steps) + 1);
    ComplexVector state = init;
    auto accumulate = [&](int m) {
        observables::Distribution d = observables::fsl_distribution(state, rep);
        double mu = 0.0, m2 = 0.0;
        for (Eigen::Index s = 0; s < rep.site_count; ++s) {
            double x = rep.cartan_coords(s)[0];
            double p = d.p[static_cast<std::size_t>(s)];
            mu += p * x;
            m2 += p * x * x;
        }
        out.mean.push_back(mu);
        out.m2.push_back(m2);
        if (m % record_every == 0) out.dists.push_back(std::move(d.p));
    };
    accumulate(0);
    for (int m = 1; m <= config.steps; ++m) {
        double angle = noise.epsilon > 0.0
                           ? noise.epsilon * rng::standard_normal(noise.master_seed,
                                                                  realization,
                                                                  static_cast<std::uint64_t>(m))
                           : 0.0;
        if (config.noise_placement == NoisePlacement::BeforeCoin)
            apply_coin_phase(state, angle, rep.site_count);
        apply_coin(state, coin, rep.site_count);
        if (config.noise_placement == NoisePlacement::AfterCoin)
            apply_coin_phase(state, angle, rep.site_count);
        shift.apply(state);
        check_leakage(shift, state, config.leakage_threshold, m);
        accumulate(m);
    }
    return out;
}

}  // namespace

NoisyResult evolve_noisy(const ComplexVector& state, const AlgebraRep& rep,
                         const WalkConfig& config, const NoiseSpec& noise,
                         int record_every, int threads) {
    if (rep.coin_dim != 2)
        throw std::invalid_argument("evolve_noisy: sigma_z dephasing needs a two-state coin");
    if (noise.realizations < 1)
        throw std::invalid_argument("evolve_noisy: realizations must be >= 1");
    if (record_every < 1) throw std::invalid_argument("evolve_noisy: record_every must be >= 1");

    Eigen::MatrixXcd coin = coin_matrix(config.coin, rep.coin_dim);
    ConditionalShift shift(rep, config.beta);

    // epsilon == 0: every realization is the same trajectory; the average
    // equals (bitwise) the single deterministic run.
    const int R = (noise.epsilon == 0.0) ? 1 : noise.realizations;

    const int chunks = std::min(16, R);
    std::vector<RealizationMoments> chunk_acc(static_cast<std::size_t>(chunks));
    const int n_snap = config.steps / record_every + 1;
    for (auto& acc : chunk_acc) {
        acc.mean.assign(static_cast<std::size_t>(config.steps) + 1, 0.0);
        acc.m2.assign(static_cast<std::size_t>(config.steps) + 1, 0.0);
        acc.dists.assign(static_cast<std::size_t>(n_snap),
                         std::vector<double>(static_cast<std::size_t>(rep.site_count), 0.0));
    }

    std::atomic<int> next_chunk{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            int c = next_chunk.fetch_add(1);
            if (c >= chunks) return;
            try {
                const int lo = static_cast<int>(static_cast<long long>(c) * R / chunks);
                const int hi = static_cast<int>(static_cast<long long>(c + 1) * R / chunks);
                auto& acc = chunk_acc[static_cast<std::size_t>(c)];
                for (int r = lo; r < hi; ++r) {
                    RealizationMoments one =
                        run_realization(state, rep, config, shift, coin, noise,
                                        static_cast<std::uint64_t>(r), record_every);
                    for (std::size_t i = 0; i < one.mean.size(); ++i) {
                        acc.mean[i] += one.mean[i];
                        acc.m2[i] += one.m2[i];
                    }
                    for (std::size_t k = 0; k < one.dists.size(); ++k)
                        for (std::size_t s = 0; s < one.dists[k].size(); ++s)
                            acc.dists[k][s] += one.dists[k][s];
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    int n_threads = threads > 0 ? threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::clamp(n_threads, 1, chunks);
    if (n_threads == 1 || R == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    // Fixed chunk-order reduction keeps results independent of scheduling.
    NoisyResult res;
    res.mean.assign(static_cast<std::size_t>(config.steps) + 1, 0.0);
    res.sigma.assign(static_cast<std::size_t>(config.steps) + 1, 0.0);
    std::vector<double> m2(static_cast<std::size_t>(config.steps) + 1, 0.0);
    std::vector<std::vector<double>> dists(
        static_cast<std::size_t>(n_snap),
        std::vector<double>(static_cast<std::size_t>(rep.site_count), 0.0));
    for (const auto& acc : chunk_acc) {
        for (std::size_t i = 0; i <= static_cast<std::size_t>(config.steps); ++i) {
            res.mean[i] += acc.mean[i];
            m2[i] += acc.m2[i];
        }
        for (std::size_t k = 0; k < acc.dists.size(); ++k)
            for (std::size_t s = 0; s < acc.dists[k].size(); ++s)
                dists[k][s] += acc.dists[k][s];
    }
    if (R > 1) {
        for (std::size_t i = 0; i <= static_cast<std::size_t>(config.steps); ++i) {
            res.mean[i] /= R;
            m2[i] /= R;
        }
        for (auto& d : dists)
            for (auto& p : d) p /= R;
    }
    for (std::size_t i = 0; i <= static_cast<std::size_t>(config.steps); ++i)
        res.sigma[i] = std::sqrt(std::max(m2[i] - res.mean[i] * res.mean[i], 0.0));
    res.snapshots.reserve(dists.size());
    for (int k = 0; k < n_snap; ++k) {
        observables::Distribution d;
        d.rep = &rep;
        d.p = std::move(dists[static_cast<std::size_t>(k)]);
        for (Eigen::Index s = 0; s < rep.site_count; ++s)
            if (rep.in_guard_band(s)) d.leakage += d.p[static_cast<std::size_t>(s)];
        res.snapshots.push_back({k * record_every, std::move(d)});
    }
    return res;
}

// ---------------------------------------------------------------------------
// Continuum reference
// ---------------------------------------------------------------------------

ComplexVector continuum_reference(const ComplexVector& state, const AlgebraRep& rep,
                                  double T) {
    if (rep.root_count != 1 || rep.coin_dim != 2)
        throw std::invalid_argument(
            "continuum_reference: supported for single-root, two-coin walks only");
    if (state.size() != rep.site_count * 2)
        throw std::invalid_argument("continuum_reference: state length mismatch");
    if (T == 0.0) return state;

    // Step-averaged coin conditioning of the Hadamard walk: alternating
    // coin frames contribute sigma_z and sigma_x in equal measure.
    const double cb[2][2] = {{0.5, 0.5}, {0.5, -0.5}};
    SparseOperator xop = rep.root_raise[0] - rep.root_lower[0];  // E+ - E-
    std::vector<Triplet> ts;
    ts.reserve(static_cast<std::size_t>(xop.nonzeros()) * 4);
    const auto& m = xop.matrix();
    for (Eigen::Index c = 0; c < m.outerSize(); ++c)
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(m, c); it; ++it)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    ts.emplace_back(it.row() * 2 + a, it.col() * 2 + b,
                                    it.value() * cb[a][b]);
    SparseOperator gen(rep.site_count * 2, rep.site_count * 2, std::move(ts));

    numerics::ExpmOptions opts;
    opts.anti_hermitian = true;
    opts.max_applications =
        std::max(500, numerics::expm_planned_applications(T * gen.one_norm(), opts) + 32);
    return numerics::expm_apply(gen, state, T, opts);
}

}  // namespace fsl::walk
