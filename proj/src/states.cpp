#include "fsl/states.hpp"

#include <cmath>

namespace fsl::states {

namespace {

void require_kind(const AlgebraRep& rep, AlgebraKind k, const char* what) {
    if (rep.kind != k)
        throw std::invalid_argument(std::string(what) + ": incompatible algebra kind " +
                                    algebra::kind_name(rep.kind));
}

ComplexVector normalized(ComplexVector v) {
    double n = v.norm();
    if (n <= 0.0 || !std::isfinite(n))
        throw std::runtime_error("make_state: degenerate state norm");
    v /= n;
    return v;
}

ComplexVector make_fock(const AlgebraRep& rep, const SiteLabel& label) {
    ComplexVector v = ComplexVector::Zero(rep.site_count);
    v[rep.index_of(label)] = 1.0;
    return v;
}

ComplexVector make_glauber(const AlgebraRep& rep, Complex alpha) {
    require_kind(rep, AlgebraKind::HeisenbergWeyl, "GlauberCoherent");
    if (alpha == Complex(0.0, 0.0)) return make_fock(rep, {0.0});
    const double a = std::abs(alpha);
    const double ph = std::arg(alpha);
    ComplexVector v(rep.site_count);
    double mass = 0.0;
    for (Eigen::Index i = 0; i < rep.site_count; ++i) {
        double n = rep.site_labels[static_cast<std::size_t>(i)][0];
        double ln = -a * a / 2.0 + n * std::log(a) - 0.5 * std::lgamma(n + 1.0);
        double mag = std::exp(ln);
        v[i] = std::polar(mag, n * ph);
        mass += mag * mag;
    }
    if (1.0 - mass > 1e-12)
        throw std::runtime_error("GlauberCoherent: Poisson tail beyond n_max is " +
                                 std::to_string(1.0 - mass) + " (> 1e-12); increase n_max");
    return normalized(std::move(v));
}

ComplexVector make_spin_coherent(const AlgebraRep& rep, const SpinCoherent& sc) {
    require_kind(rep, AlgebraKind::Su2, "SpinCoherent");
    if (sc.theta < 0.0 || sc.theta > M_PI || sc.phi < 0.0 || sc.phi >= 2.0 * M_PI)
        throw std::invalid_argument("SpinCoherent: angles out of range");
    const int twoS = rep.params.two_S;
    const double S = twoS / 2.0;
    // poles map exactly onto the reference Fock states
    if (sc.theta == 0.0) return make_fock(rep, {S});
    if (sc.theta == M_PI) return make_fock(rep, {-S});
    const double lc = std::log(std::cos(sc.theta / 2.0));
    const double ls = std::log(std::sin(sc.theta / 2.0));
    ComplexVector v(rep.site_count);
    for (Eigen::Index i = 0; i < rep.site_count; ++i) {
        double l = rep.site_labels[static_cast<std::size_t>(i)][0];
        double lnb = 0.5 * (std::lgamma(twoS + 1.0) - std::lgamma(S + l + 1.0) -
                            std::lgamma(S - l + 1.0));
        double mag = std::exp(lnb + (S + l) * lc + (S - l) * ls);
        v[i] = std::polar(mag, -(S - l) * sc.phi);
    }
    return normalized(std::move(v));
}

ComplexVector make_su3_coherent(const AlgebraRep& rep, const Su3Coherent& sp) {
    require_kind(rep, AlgebraKind::Su3, "Su3Coherent");
    double nrm = 0.0;
    for (const auto& b : sp.beta) nrm += std::norm(b);
    if (std::abs(nrm - 1.0) > 1e-12)
        throw std::invalid_argument("Su3Coherent: sum |beta_i|^2 must be 1");
    const int N = rep.params.boson_number;
    ComplexVector v(rep.site_count);
    for (Eigen::Index i = 0; i < rep.site_count; ++i) {
        const SiteLabel& lab = rep.site_labels[static_cast<std::size_t>(i)];
        double lnm = 0.5 * (std::lgamma(N + 1.0) - std::lgamma(lab[0] + 1.0) -
                            std::lgamma(lab[1] + 1.0) - std::lgamma(lab[2] + 1.0));
        Complex amp = std::exp(lnm);
        for (int m = 0; m < 3; ++m) {
            int n = static_cast<int>(lab[static_cast<std::size_t>(m)]);
            Complex b = sp.beta[static_cast<std::size_t>(m)];
            for (int k = 0; k < n; ++k) amp *= b;
        }
        v[i] = amp;
    }
    return normalized(std::move(v));
}

ComplexVector make_gaussian(const AlgebraRep& rep, const GaussianFsl& g) {
    if (g.sigma <= 0.0) throw std::invalid_argument("GaussianFsl: sigma must be > 0");
    Eigen::Index center = rep.index_of(g.center);
    std::vector<double> c0 = rep.cartan_coords(center);
    ComplexVector v(rep.site_count);
    for (Eigen::Index i = 0; i < rep.site_count; ++i) {
        std::vector<double> c = rep.cartan_coords(i);
        double d2 = 0.0;
        for (std::size_t a = 0; a < c.size(); ++a) d2 += (c[a] - c0[a]) * (c[a] - c0[a]);
        v[i] = std::exp(-d2 / (2.0 * g.sigma * g.sigma));
    }
    return normalized(std::move(v));
}

ComplexVector make_squeezed(const AlgebraRep& rep, const SqueezedVacuum& sq) {
    require_kind(rep, AlgebraKind::Su11, "SqueezedVacuum");
    if (rep.params.sector != algebra::Su11Sector::Even)
        throw std::invalid_argument("SqueezedVacuum: requires the even (k=1/4) sector");
    ComplexVector v0 = ComplexVector::Zero(rep.site_count);
    v0[*rep.reference_site] = 1.0;
    numerics::SparseOperator gen =
        rep.root_raise[0].scaled(sq.beta) - rep.root_lower[0].scaled(std::conj(sq.beta));
    numerics::ExpmOptions opts;
    opts.anti_hermitian = true;
    opts.max_applications =
        std::max(500, numerics::expm_planned_applications(gen.one_norm(), opts) + 16);
    ComplexVector v = numerics::expm_apply(gen, v0, 1.0, opts);
    // truncation-tail check via the guard band
    double leak = 0.0;
    for (Eigen::Index i = 0; i < rep.site_count; ++i)
        if (rep.in_guard_band(i)) leak += std::norm(v[i]);
    if (leak > 1e-10)
        throw std::runtime_error("SqueezedVacuum: truncation leakage " + std::to_string(leak) +
                                 "; increase n_max");
    return normalized(std::move(v));
}

}  // namespace

ComplexVector make_state(const AlgebraRep& rep, const StateSpec& spec) {
    return std::visit(
        [&](const auto& s) -> ComplexVector {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Fock>) return make_fock(rep, s.label);
            else if constexpr (std::is_same_v<T, GlauberCoherent>) return make_glauber(rep, s.alpha);
            else if constexpr (std::is_same_v<T, SpinCoherent>) return make_spin_coherent(rep, s);
            else if constexpr (std::is_same_v<T, Su3Coherent>) return make_su3_coherent(rep, s);
            else if constexpr (std::is_same_v<T, GaussianFsl>) return make_gaussian(rep, s);
            else if constexpr (std::is_same_v<T, SqueezedVacuum>) return make_squeezed(rep, s);
            else {
                require_kind(rep, AlgebraKind::Euclidean2, "E2Site");
                return make_fock(rep, {double(s.j)});
            }
        },
        spec);
}

CoinInit CoinInit::custom_amplitudes(Eigen::VectorXcd amps) {
    CoinInit c;
    c.kind = Kind::Custom;
    c.custom = std::move(amps);
    return c;
}

Eigen::VectorXcd coin_init_vector(const CoinInit& init, int coin_dim) {
    if (coin_dim < 2) throw std::invalid_argument("coin_init_vector: coin_dim must be >= 2");
    switch (init.kind) {
        case CoinInit::Kind::SymmetricPlusI: {
            if (coin_dim != 2)
                throw std::invalid_argument("SymmetricPlusI coin init requires coin_dim 2");
            Eigen::VectorXcd c(2);
            c << Complex(1.0, 0.0), Complex(0.0, 1.0);
            return c / std::sqrt(2.0);
        }
        case CoinInit::Kind::GroverSymmetric:
            return Eigen::VectorXcd::Constant(coin_dim, Complex(1.0, 0.0)) /
                   std::sqrt(double(coin_dim));
        case CoinInit::Kind::Custom: {
            if (init.custom.size() != coin_dim)
                throw std::invalid_argument("custom coin init has wrong dimension");
            double n = init.custom.norm();
            if (std::abs(n - 1.0) > 1e-12)
                throw std::invalid_argument("custom coin init not normalized");
            return init.custom / n;
        }
    }
    throw std::logic_error("coin_init_vector: unreachable");
}

ComplexVector compose(const ComplexVector& walker, const Eigen::VectorXcd& coin) {
    ComplexVector full(walker.size() * coin.size());
    for (Eigen::Index s = 0; s < walker.size(); ++s)
        for (Eigen::Index c = 0; c < coin.size(); ++c)
            full[s * coin.size() + c] = walker[s] * coin[c];
    return full;
}

Complex overlap(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("overlap: dimension mismatch");
    return a.dot(b);  // Eigen conjugates the left factor
}

double geodesic_distance(AlgebraKind kind, Complex beta, double extra) {
    switch (kind) {
        case AlgebraKind::Euclidean2:
        case AlgebraKind::HeisenbergWeyl:
            return std::abs(beta);
        case AlgebraKind::Su2: {
            // printed for real beta; evaluated with |beta|
            double S = extra;
            if (S <= 0.0) throw std::invalid_argument("geodesic_distance: su2 needs S > 0");
            double c = std::pow(std::cos(std::abs(beta)), 2.0 * S);
            return std::acos(std::clamp(c, -1.0, 1.0));
        }
        case AlgebraKind::Su11: {
            double k = extra;
            if (k <= 0.0) throw std::invalid_argument("geodesic_distance: su11 needs k > 0");
            double b2 = std::norm(beta);
            if (b2 >= 1.0)
                throw std::invalid_argument("geodesic_distance: su11 requires |beta| < 1");
            return std::acos(std::clamp(std::pow(1.0 - b2, k), -1.0, 1.0));
        }
        default:
            throw std::invalid_argument("geodesic_distance: no closed form for this kind");
    }
}

Eigen::MatrixXd husimi_su2(const AlgebraRep& rep, const ComplexVector& state,
                           std::span<const double> thetas,
                           std::span<const double> phis) {
    if (rep.kind != AlgebraKind::Su2)
        throw std::invalid_argument("husimi_su2: representation is not su2");
    if (state.size() != rep.site_count)
        throw std::invalid_argument("husimi_su2: state length mismatch");
    Eigen::MatrixXd q(thetas.size(), phis.size());
    for (std::size_t it = 0; it < thetas.size(); ++it)
        for (std::size_t ip = 0; ip < phis.size(); ++ip) {
            ComplexVector probe =
                make_state(rep, SpinCoherent{thetas[it], phis[ip]});
            q(static_cast<Eigen::Index>(it), static_cast<Eigen::Index>(ip)) =
                std::norm(overlap(probe, state));
        }
    return q;
}

}  // namespace fsl::states
