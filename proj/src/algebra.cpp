#include "fsl/algebra.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <ostream>

namespace fsl::algebra {

using numerics::Triplet;

const char* kind_name(AlgebraKind k) {
    switch (k) {
        case AlgebraKind::HeisenbergWeyl: return "heisenberg_weyl";
        case AlgebraKind::Su2: return "su2";
        case AlgebraKind::Su3: return "su3";
        case AlgebraKind::So5: return "so5";
        case AlgebraKind::Euclidean2: return "euclidean2";
        case AlgebraKind::Su11: return "su11";
    }
    return "?";
}

AlgebraParams AlgebraParams::heisenberg_weyl(int n_max, int guard) {
    AlgebraParams p;
    p.n_max = n_max;
    p.guard_band = guard;
    return p;
}
AlgebraParams AlgebraParams::su2(int two_S) {
    AlgebraParams p;
    p.two_S = two_S;
    return p;
}
AlgebraParams AlgebraParams::su3(int N) {
    AlgebraParams p;
    p.boson_number = N;
    return p;
}
AlgebraParams AlgebraParams::so5(int N) {
    AlgebraParams p;
    p.boson_number = N;
    return p;
}
AlgebraParams AlgebraParams::euclidean2(int J, int guard) {
    AlgebraParams p;
    p.window = J;
    p.guard_band = guard;
    return p;
}
AlgebraParams AlgebraParams::su11(Su11Sector sector, int n_max, int guard) {
    AlgebraParams p;
    p.sector = sector;
    p.n_max = n_max;
    p.guard_band = guard;
    return p;
}

std::vector<double> AlgebraRep::cartan_coords(Eigen::Index site) const {
    const SiteLabel& lab = site_labels[static_cast<std::size_t>(site)];
    switch (kind) {
        case AlgebraKind::HeisenbergWeyl:
        case AlgebraKind::Su11:
        case AlgebraKind::Su2:
        case AlgebraKind::Euclidean2:
            return {lab[0]};
        case AlgebraKind::Su3:
            return {lab[0] - lab[1], (lab[0] + lab[1] - 2.0 * lab[2]) / std::sqrt(3.0)};
        case AlgebraKind::So5:
            return {(lab[0] - lab[1]) / 2.0, (lab[2] - lab[3]) / 2.0};
    }
    return {};
}

Eigen::Index AlgebraRep::index_of(const SiteLabel& label) const {
    auto it = label_index.find(label);
    if (it == label_index.end())
        throw std::out_of_range("AlgebraRep: label not present in lattice");
    return it->second;
}

namespace {

struct Builder {
    AlgebraRep rep;

    void finalize_labels() {
        std::sort(rep.site_labels.begin(), rep.site_labels.end());
        rep.site_count = static_cast<Eigen::Index>(rep.site_labels.size());
        if (rep.site_count > rep.params.max_sites)
            throw std::invalid_argument("build_algebra: site count " +
                                        std::to_string(rep.site_count) +
                                        " exceeds max_sites limit");
        for (Eigen::Index i = 0; i < rep.site_count; ++i)
            rep.label_index[rep.site_labels[static_cast<std::size_t>(i)]] = i;
    }

    SparseOperator diagonal(const std::vector<double>& d) const {
        std::vector<Triplet> ts;
        ts.reserve(d.size());
        for (Eigen::Index i = 0; i < rep.site_count; ++i)
            ts.emplace_back(i, i, Complex(d[static_cast<std::size_t>(i)], 0.0));
        return SparseOperator(rep.site_count, rep.site_count, std::move(ts));
    }
};

AlgebraRep build_hw(const AlgebraParams& p) {
    if (p.n_max < 1) throw std::invalid_argument("heisenberg_weyl: n_max must be >= 1");
    Builder b;
    b.rep.kind = AlgebraKind::HeisenbergWeyl;
    b.rep.params = p;
    b.rep.rank = 1;
    for (int n = 0; n <= p.n_max; ++n) b.rep.site_labels.push_back({double(n)});
    b.finalize_labels();

    std::vector<double> diag(static_cast<std::size_t>(b.rep.site_count));
    std::vector<Triplet> raise;
    for (int n = 0; n <= p.n_max; ++n) {
        diag[static_cast<std::size_t>(n)] = n;
        if (n < p.n_max) raise.emplace_back(n + 1, n, Complex(std::sqrt(n + 1.0), 0.0));
    }
    b.rep.cartan_ops.push_back(b.diagonal(diag));
    b.rep.root_raise.emplace_back(b.rep.site_count, b.rep.site_count, std::move(raise));
    b.rep.root_vectors.push_back({1.0, 0.0});
    b.rep.reference_site = 0;  // vacuum
    b.rep.truncation_distance.resize(static_cast<std::size_t>(b.rep.site_count));
    for (int n = 0; n <= p.n_max; ++n)
        b.rep.truncation_distance[static_cast<std::size_t>(n)] = p.n_max - n;
    return std::move(b.rep);
}

AlgebraRep build_su2(const AlgebraParams& p) {
    if (p.two_S < 1) throw std::invalid_argument("su2: two_S must be >= 1");
    Builder b;
    b.rep.kind = AlgebraKind::Su2;
    b.rep.params = p;
    b.rep.rank = 1;
    const double S = p.two_S / 2.0;
    for (int i = 0; i <= p.two_S; ++i) b.rep.site_labels.push_back({i - S});
    b.finalize_labels();

    std::vector<double> diag(static_cast<std::size_t>(b.rep.site_count));
    std::vector<Triplet> raise;
    for (int i = 0; i <= p.two_S; ++i) {
        double l = i - S;
        diag[static_cast<std::size_t>(i)] = l;
        if (i < p.two_S)
            raise.emplace_back(i + 1, i, Complex(std::sqrt(S * (S + 1) - l * (l + 1)), 0.0));
    }
    b.rep.cartan_ops.push_back(b.diagonal(diag));
    b.rep.root_raise.emplace_back(b.rep.site_count, b.rep.site_count, std::move(raise));
    b.rep.root_vectors.push_back({1.0, 0.0});
    b.rep.reference_site = 0;  // |S, -S>: killed by S- under the raising convention
    b.rep.truncation_distance.assign(static_cast<std::size_t>(b.rep.site_count), INT_MAX);
    return std::move(b.rep);
}

// Bosonic hop a_dst^dagger a_src on a fixed-total-N label set.
SparseOperator mode_hop(const AlgebraRep& rep, int dst, int src) {
    std::vector<Triplet> ts;
    for (Eigen::Index i = 0; i < rep.site_count; ++i) {
        const SiteLabel& lab = rep.site_labels[static_cast<std::size_t>(i)];
        if (lab[static_cast<std::size_t>(src)] <= 0.0) continue;
        SiteLabel to = lab;
        to[static_cast<std::size_t>(src)] -= 1.0;
        to[static_cast<std::size_t>(dst)] += 1.0;
        auto it = rep.label_index.find(to);
        if (it == rep.label_index.end()) continue;
        double amp = std::sqrt((lab[static_cast<std::size_t>(dst)] + 1.0) *
                               lab[static_cast<std::size_t>(src)]);
        ts.emplace_back(it->second, i, Complex(amp, 0.0));
    }
    return SparseOperator(rep.site_count, rep.site_count, std::move(ts));
}

AlgebraRep build_su3(const AlgebraParams& p) {
    const int N = p.boson_number;
    if (N < 1) throw std::invalid_argument("su3: N must be >= 1");
    Builder b;
    b.rep.kind = AlgebraKind::Su3;
    b.rep.params = p;
    b.rep.rank = 2;
    for (int n1 = 0; n1 <= N; ++n1)
        for (int n2 = 0; n2 <= N - n1; ++n2)
            b.rep.site_labels.push_back({double(n1), double(n2), double(N - n1 - n2)});
    b.finalize_labels();

    std::vector<double> c1(static_cast<std::size_t>(b.rep.site_count)),
        c2(static_cast<std::size_t>(b.rep.site_count));
    for (Eigen::Index i = 0; i < b.rep.site_count; ++i) {
        const SiteLabel& lab = b.rep.site_labels[static_cast<std::size_t>(i)];
        c1[static_cast<std::size_t>(i)] = lab[0] - lab[1];
        c2[static_cast<std::size_t>(i)] = (lab[0] + lab[1] - 2.0 * lab[2]) / std::sqrt(3.0);
    }
    b.rep.cartan_ops.push_back(b.diagonal(c1));
    b.rep.cartan_ops.push_back(b.diagonal(c2));
    b.rep.root_raise.push_back(mode_hop(b.rep, 0, 1));  // a1^d a2
    b.rep.root_raise.push_back(mode_hop(b.rep, 1, 2));  // a2^d a3
    b.rep.root_raise.push_back(mode_hop(b.rep, 0, 2));  // a1^d a3
    b.rep.root_vectors = {{2.0, 0.0}, {-1.0, std::sqrt(3.0)}, {1.0, std::sqrt(3.0)}};
    b.rep.reference_site = b.rep.label_index.at({0.0, 0.0, double(N)});
    b.rep.truncation_distance.assign(static_cast<std::size_t>(b.rep.site_count), INT_MAX);
    return std::move(b.rep);
}

AlgebraRep build_so5(const AlgebraParams& p) {
    const int N = p.boson_number;
    if (N < 1) throw std::invalid_argument("so5: N must be >= 1");
    Builder b;
    b.rep.kind = AlgebraKind::So5;
    b.rep.params = p;
    b.rep.rank = 2;
    // modes: 0 = a_up, 1 = a_dn, 2 = b_up, 3 = b_dn
    std::int64_t est = std::int64_t(N + 1) * (N + 2) * (N + 3) / 6;
    if (est > p.max_sites)
        throw std::invalid_argument("so5: site count " + std::to_string(est) +
                                    " exceeds max_sites limit");
    for (int n0 = 0; n0 <= N; ++n0)
        for (int n1 = 0; n1 <= N - n0; ++n1)
            for (int n2 = 0; n2 <= N - n0 - n1; ++n2)
                b.rep.site_labels.push_back(
                    {double(n0), double(n1), double(n2), double(N - n0 - n1 - n2)});
    b.finalize_labels();

    std::vector<double> h1(static_cast<std::size_t>(b.rep.site_count)),
        h2(static_cast<std::size_t>(b.rep.site_count));
    for (Eigen::Index i = 0; i < b.rep.site_count; ++i) {
        const SiteLabel& lab = b.rep.site_labels[static_cast<std::size_t>(i)];
        h1[static_cast<std::size_t>(i)] = (lab[0] - lab[1]) / 2.0;
        h2[static_cast<std::size_t>(i)] = (lab[2] - lab[3]) / 2.0;
    }
    b.rep.cartan_ops.push_back(b.diagonal(h1));
    b.rep.cartan_ops.push_back(b.diagonal(h2));
    b.rep.root_raise.push_back(mode_hop(b.rep, 0, 1));  // a_up^d a_dn
    b.rep.root_raise.push_back(mode_hop(b.rep, 2, 3));  // b_up^d b_dn
    b.rep.root_raise.push_back(mode_hop(b.rep, 0, 3));  // a_up^d b_dn
    b.rep.root_raise.push_back(mode_hop(b.rep, 1, 2));  // a_dn^d b_up
    b.rep.root_vectors = {{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}, {-0.5, -0.5}};
    b.rep.reference_site = b.rep.label_index.at({0.0, 0.0, 0.0, double(N)});
    b.rep.truncation_distance.assign(static_cast<std::size_t>(b.rep.site_count), INT_MAX);
    return std::move(b.rep);
}

AlgebraRep build_e2(const AlgebraParams& p) {
    const int J = p.window;
    if (J < 1) throw std::invalid_argument("euclidean2: window J must be >= 1");
    Builder b;
    b.rep.kind = AlgebraKind::Euclidean2;
    b.rep.params = p;
    b.rep.rank = 1;
    for (int j = -J; j <= J; ++j) b.rep.site_labels.push_back({double(j)});
    b.finalize_labels();

    std::vector<double> diag(static_cast<std::size_t>(b.rep.site_count));
    std::vector<Triplet> raise;
    for (int i = 0; i <= 2 * J; ++i) {
        diag[static_cast<std::size_t>(i)] = i - J;
        if (i < 2 * J) raise.emplace_back(i + 1, i, Complex(1.0, 0.0));
    }
    b.rep.cartan_ops.push_back(b.diagonal(diag));
    b.rep.root_raise.emplace_back(b.rep.site_count, b.rep.site_count, std::move(raise));
    b.rep.root_vectors.push_back({1.0, 0.0});
    b.rep.reference_site = std::nullopt;  // noncompact, no state killed by E-
    b.rep.truncation_distance.resize(static_cast<std::size_t>(b.rep.site_count));
    for (int i = 0; i <= 2 * J; ++i)
        b.rep.truncation_distance[static_cast<std::size_t>(i)] = std::min(i, 2 * J - i);
    return std::move(b.rep);
}

AlgebraRep build_su11(const AlgebraParams& p) {
    if (p.n_max < 2) throw std::invalid_argument("su11: n_max must be >= 2");
    const int first = (p.sector == Su11Sector::Even) ? 0 : 1;
    if ((p.n_max % 2) != (first % 2))
        throw std::invalid_argument("su11: n_max parity must match the sector");
    Builder b;
    b.rep.kind = AlgebraKind::Su11;
    b.rep.params = p;
    b.rep.rank = 1;
    for (int n = first; n <= p.n_max; n += 2) b.rep.site_labels.push_back({double(n)});
    b.finalize_labels();

    std::vector<double> diag(static_cast<std::size_t>(b.rep.site_count));
    std::vector<Triplet> raise;
    for (Eigen::Index i = 0; i < b.rep.site_count; ++i) {
        double n = b.rep.site_labels[static_cast<std::size_t>(i)][0];
        diag[static_cast<std::size_t>(i)] = 0.5 * (n + 0.5);  // K0
        if (i + 1 < b.rep.site_count)
            raise.emplace_back(i + 1, i, Complex(0.5 * std::sqrt((n + 1.0) * (n + 2.0)), 0.0));
    }
    b.rep.cartan_ops.push_back(b.diagonal(diag));
    b.rep.root_raise.emplace_back(b.rep.site_count, b.rep.site_count, std::move(raise));
    b.rep.root_vectors.push_back({1.0, 0.0});
    b.rep.reference_site = 0;  // sector ground state |0> or |1>
    b.rep.truncation_distance.resize(static_cast<std::size_t>(b.rep.site_count));
    for (Eigen::Index i = 0; i < b.rep.site_count; ++i)
        b.rep.truncation_distance[static_cast<std::size_t>(i)] =
            static_cast<int>(b.rep.site_count - 1 - i);
    return std::move(b.rep);
}

}  // namespace

AlgebraRep build_algebra(AlgebraKind kind, const AlgebraParams& params) {
    AlgebraRep rep;
    switch (kind) {
        case AlgebraKind::HeisenbergWeyl: rep = build_hw(params); break;
        case AlgebraKind::Su2: rep = build_su2(params); break;
        case AlgebraKind::Su3: rep = build_su3(params); break;
        case AlgebraKind::So5: rep = build_so5(params); break;
        case AlgebraKind::Euclidean2: rep = build_e2(params); break;
        case AlgebraKind::Su11: rep = build_su11(params); break;
    }
    rep.root_count = static_cast<int>(rep.root_raise.size());
    rep.coin_dim = 2 * rep.root_count;
    rep.root_lower.reserve(rep.root_raise.size());
    for (const auto& e : rep.root_raise) rep.root_lower.push_back(e.adjoint());
    return rep;
}

// ---------------------------------------------------------------------------
// Relation checks
// ---------------------------------------------------------------------------

namespace {

// Max |entry| of op over rows AND cols whose sites are interior.
double interior_max(const SparseOperator& op, const AlgebraRep& rep, int margin) {
    double best = 0.0;
    const auto& m = op.matrix();
    for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
        if (rep.truncation_distance[static_cast<std::size_t>(c)] < margin) continue;
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(m, c); it; ++it) {
            if (rep.truncation_distance[static_cast<std::size_t>(it.row())] < margin) continue;
            best = std::max(best, std::abs(it.value()));
        }
    }
    return best;
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
    return a.compose(b) - b.compose(a);
}

}  // namespace

double CommutatorReport::worst() const {
    double w = 0.0;
    for (const auto& r : relations) w = std::max(w, r.max_abs_error);
    return w;
}

CommutatorReport verify_commutators(const AlgebraRep& rep, int interior_margin) {
    if (interior_margin < 0)
        throw std::invalid_argument("verify_commutators: margin must be >= 0");
    CommutatorReport out;
    auto add = [&](std::string name, const SparseOperator& defect) {
        out.relations.push_back({std::move(name), interior_max(defect, rep, interior_margin)});
    };
    const auto& Ep = rep.root_raise;
    const auto& Em = rep.root_lower;
    const auto& C = rep.cartan_ops;

    // Cartan ladder relations hold for every kind: [C_a, E_{+i}] = (alpha_i)_a E_{+i}.
    for (int i = 0; i < rep.root_count; ++i)
        for (int a = 0; a < rep.rank; ++a)
            add("[C" + std::to_string(a + 1) + ",E+" + std::to_string(i + 1) + "] - a*E+",
                commutator(C[static_cast<std::size_t>(a)], Ep[static_cast<std::size_t>(i)]) -
                    Ep[static_cast<std::size_t>(i)].scaled(
                        rep.root_vectors[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)]));

    switch (rep.kind) {
        case AlgebraKind::HeisenbergWeyl:
            add("[a,a+] - I", commutator(Em[0], Ep[0]) - SparseOperator::identity(rep.site_count));
            break;
        case AlgebraKind::Su2:
            add("[S+,S-] - 2Sz", commutator(Ep[0], Em[0]) - C[0].scaled(2.0));
            break;
        case AlgebraKind::Su3: {
            // [E+i, E-i] equals the corresponding Cartan combination.
            const double s3 = std::sqrt(3.0);
            add("[E+1,E-1] - C1", commutator(Ep[0], Em[0]) - C[0]);
            add("[E+2,E-2] - (s3*C2-C1)/2",
                commutator(Ep[1], Em[1]) - (C[1].scaled(s3) - C[0]).scaled(0.5));
            add("[E+3,E-3] - (s3*C2+C1)/2",
                commutator(Ep[2], Em[2]) - (C[1].scaled(s3) + C[0]).scaled(0.5));
            break;
        }
        case AlgebraKind::So5:
            add("[S+1,S-1] - 2H1", commutator(Ep[0], Em[0]) - C[0].scaled(2.0));
            add("[S+2,S-2] - 2H2", commutator(Ep[1], Em[1]) - C[1].scaled(2.0));
            break;
        case AlgebraKind::Euclidean2:
            add("[E-,E+]", commutator(Em[0], Ep[0]));
            break;
        case AlgebraKind::Su11:
            add("[K+,K-] + 2K0", commutator(Ep[0], Em[0]) + C[0].scaled(2.0));
            break;
    }
    return out;
}

CasimirReport casimir_check(const AlgebraRep& rep) {
    CasimirReport out;
    switch (rep.kind) {
        case AlgebraKind::Su2: {
            // Sx^2 + Sy^2 + Sz^2 = (S+S- + S-S+)/2 + Sz^2
            const double S = rep.params.two_S / 2.0;
            SparseOperator cas =
                (rep.root_raise[0].compose(rep.root_lower[0]) +
                 rep.root_lower[0].compose(rep.root_raise[0])).scaled(0.5) +
                rep.cartan_ops[0].compose(rep.cartan_ops[0]);
            SparseOperator expect = SparseOperator::identity(rep.site_count).scaled(S * (S + 1));
            out.description = "Sx^2+Sy^2+Sz^2 - S(S+1)I";
            out.max_abs_error = cas.max_abs_diff(expect);
            return out;
        }
        case AlgebraKind::Su3:
        case AlgebraKind::So5: {
            double worst = 0.0;
            for (const auto& lab : rep.site_labels) {
                double s = 0.0;
                for (double x : lab) s += x;
                worst = std::max(worst, std::abs(s - rep.params.boson_number));
            }
            out.description = "sum(label) - N";
            out.max_abs_error = worst;
            return out;
        }
        default:
            throw std::invalid_argument("casimir_check: unsupported kind");
    }
}

void dump_generators(const AlgebraRep& rep, std::ostream& os) {
    for (std::size_t a = 0; a < rep.cartan_ops.size(); ++a) {
        os << "# cartan " << a + 1 << "\n";
        rep.cartan_ops[a].dump_triplets(os);
    }
    for (std::size_t i = 0; i < rep.root_raise.size(); ++i) {
        os << "# raise " << i + 1 << "\n";
        rep.root_raise[i].dump_triplets(os);
    }
}

}  // namespace fsl::algebra
