#include "fsl/observables.hpp"

#include <cmath>
#include <numeric>

namespace fsl::observables {

double Distribution::total() const {
    return std::accumulate(p.begin(), p.end(), 0.0);
}

Distribution fsl_distribution(const ComplexVector& state, const AlgebraRep& rep) {
    if (state.size() != rep.site_count * rep.coin_dim)
        throw std::invalid_argument("fsl_distribution: state length mismatch");
    Distribution d;
    d.rep = &rep;
    d.p.assign(static_cast<std::size_t>(rep.site_count), 0.0);
    for (Eigen::Index s = 0; s < rep.site_count; ++s) {
        double ps = 0.0;
        const auto* block = state.data() + s * rep.coin_dim;
        for (int c = 0; c < rep.coin_dim; ++c) ps += std::norm(block[c]);
        d.p[static_cast<std::size_t>(s)] = ps;
        if (rep.in_guard_band(s)) d.leakage += ps;
    }
    return d;
}

SpreadReport spread(const Distribution& dist) {
    const AlgebraRep& rep = *dist.rep;
    double total = dist.total();
    if (total <= 0.0) throw std::invalid_argument("spread: empty distribution");
    SpreadReport r;
    r.mean.assign(static_cast<std::size_t>(rep.rank), 0.0);
    for (Eigen::Index s = 0; s < rep.site_count; ++s) {
        auto c = rep.cartan_coords(s);
        for (int a = 0; a < rep.rank; ++a)
            r.mean[static_cast<std::size_t>(a)] +=
                dist.p[static_cast<std::size_t>(s)] * c[static_cast<std::size_t>(a)];
    }
    for (auto& m : r.mean) m /= total;
    double var = 0.0;
    for (Eigen::Index s = 0; s < rep.site_count; ++s) {
        auto c = rep.cartan_coords(s);
        double d2 = 0.0;
        for (int a = 0; a < rep.rank; ++a) {
            double d = c[static_cast<std::size_t>(a)] - r.mean[static_cast<std::size_t>(a)];
            d2 += d * d;
        }
        var += dist.p[static_cast<std::size_t>(s)] * d2;
    }
    r.sigma = std::sqrt(std::max(var / total, 0.0));
    return r;
}

double asymmetry(const Distribution& dist, const algebra::SiteLabel& center) {
    const AlgebraRep& rep = *dist.rep;
    if (rep.rank != 1)
        throw std::invalid_argument("asymmetry: defined for 1D representations only");
    Eigen::Index c = rep.index_of(center);
    double c0 = rep.cartan_coords(c)[0];
    double right = 0.0, left = 0.0;
    for (Eigen::Index s = 0; s < rep.site_count; ++s) {
        double x = rep.cartan_coords(s)[0] - c0;
        if (x > 0) right += dist.p[static_cast<std::size_t>(s)];
        else if (x < 0) left += dist.p[static_cast<std::size_t>(s)];
    }
    double den = right + left;
    return den > 0.0 ? (right - left) / den : 0.0;
}

double support_radius(const Distribution& dist, double threshold) {
    if (threshold <= 0.0 || threshold >= 1.0)
        throw std::invalid_argument("support_radius: threshold must be in (0, 1)");
    const AlgebraRep& rep = *dist.rep;
    SpreadReport r = spread(dist);
    double best = 0.0;
    for (Eigen::Index s = 0; s < rep.site_count; ++s) {
        if (dist.p[static_cast<std::size_t>(s)] <= threshold) continue;
        auto c = rep.cartan_coords(s);
        double d2 = 0.0;
        for (int a = 0; a < rep.rank; ++a) {
            double d = c[static_cast<std::size_t>(a)] - r.mean[static_cast<std::size_t>(a)];
            d2 += d * d;
        }
        best = std::max(best, d2);
    }
    return std::sqrt(best);
}

double coin_entropy(const ComplexVector& state, const AlgebraRep& rep) {
    return numerics::von_neumann_entropy(
        numerics::reduced_coin_density(state, rep.site_count, rep.coin_dim));
}

namespace {

PowerLawFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit: need at least two matched samples");
    const double n = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit: degenerate abscissae");
    PowerLawFit f;
    f.exponent = (n * sxy - sx * sy) / denom;
    f.prefactor_log = (sy - f.exponent * sx) / n;
    double ss_res = 0, ss_tot = 0, ymean = sy / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double pred = f.prefactor_log + f.exponent * xs[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - ymean) * (ys[i] - ymean);
    }
    f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

}  // namespace

PowerLawFit power_law_fit(std::span<const double> xs, std::span<const double> ys) {
    std::vector<double> lx(xs.size()), ly(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 0.0 || ys[i] <= 0.0)
            throw std::invalid_argument("power_law_fit: samples must be positive");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    return linear_fit(lx, ly);
}

PowerLawFit exponential_fit(std::span<const double> xs, std::span<const double> ys) {
    std::vector<double> ly(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (ys[i] <= 0.0)
            throw std::invalid_argument("exponential_fit: samples must be positive");
        ly[i] = std::log(ys[i]);
    }
    return linear_fit(xs, ly);
}

}  // namespace fsl::observables
