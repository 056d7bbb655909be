#pragma once

// Truncated matrix representations of the supported Lie algebras, site
// enumeration of the associated Fock-state lattices, and relation checks.

#include "fsl/numerics.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fsl::algebra {

using numerics::Complex;
using numerics::SparseOperator;

enum class AlgebraKind { HeisenbergWeyl, Su2, Su3, So5, Euclidean2, Su11 };
enum class Su11Sector { Even, Odd };

const char* kind_name(AlgebraKind k);

struct AlgebraParams {
    int n_max = 0;          // HeisenbergWeyl, Su11: Fock cutoff
    int two_S = 0;          // Su2: 2S
    int boson_number = 0;   // Su3, So5: total boson number N
    int window = 0;         // Euclidean2: j in [-J, J]
    Su11Sector sector = Su11Sector::Even;
    int guard_band = 8;     // sites next to a truncation edge counted as leakage
    std::int64_t max_sites = 2'000'000;

    static AlgebraParams heisenberg_weyl(int n_max, int guard = 8);
    static AlgebraParams su2(int two_S);
    static AlgebraParams su3(int N);
    static AlgebraParams so5(int N);
    static AlgebraParams euclidean2(int J, int guard = 8);
    static AlgebraParams su11(Su11Sector sector, int n_max, int guard = 8);
};

/// Site label: occupation / weight tuple (half-integers arise for su(2)
/// with odd 2S, stored exactly in doubles).
using SiteLabel = std::vector<double>;

struct AlgebraRep {
    AlgebraKind kind{};
    AlgebraParams params{};
    Eigen::Index site_count = 0;
    int rank = 0;
    int root_count = 0;
    int coin_dim = 0;

    std::vector<SiteLabel> site_labels;               // site -> label (lexicographic)
    std::map<SiteLabel, Eigen::Index> label_index;    // label -> site
    std::vector<SparseOperator> cartan_ops;           // rank diagonal operators
    std::vector<SparseOperator> root_raise;           // E_{+alpha_i}
    std::vector<SparseOperator> root_lower;           // adjoints, cached
    std::vector<std::array<double, 2>> root_vectors;  // Cartan shift per root
    std::optional<Eigen::Index> reference_site;       // annihilated by all E_{-alpha}

    /// Hop distance from a site to the nearest truncation edge; INT_MAX for
    /// exact (untruncated) representations.
    std::vector<int> truncation_distance;

    /// Cartan coordinates used for spreading measures (rank components;
    /// HW and su(1,1) report the boson number n).
    std::vector<double> cartan_coords(Eigen::Index site) const;
    Eigen::Index index_of(const SiteLabel& label) const;
    bool in_guard_band(Eigen::Index site) const {
        return truncation_distance[static_cast<std::size_t>(site)] < params.guard_band;
    }
    bool truncated() const {
        return kind == AlgebraKind::HeisenbergWeyl || kind == AlgebraKind::Euclidean2 ||
               kind == AlgebraKind::Su11;
    }
};

/// Builds the representation; throws on invalid parameters or if the site
/// count exceeds params.max_sites.
AlgebraRep build_algebra(AlgebraKind kind, const AlgebraParams& params);

struct RelationError {
    std::string relation;
    double max_abs_error = 0.0;
};

struct CommutatorReport {
    std::vector<RelationError> relations;
    double worst() const;
};

/// Evaluates the defining commutators entrywise on sites at least
/// interior_margin hops away from truncation edges.
CommutatorReport verify_commutators(const AlgebraRep& rep, int interior_margin);

struct CasimirReport {
    std::string description;
    double max_abs_error = 0.0;
};

/// su(2): S^2 = S(S+1) on every basis state; su(3)/so(5): label sums equal N.
CasimirReport casimir_check(const AlgebraRep& rep);

/// Debug dump: every generator as "row col re im" triplet text.
void dump_generators(const AlgebraRep& rep, std::ostream& os);

}  // namespace fsl::algebra
