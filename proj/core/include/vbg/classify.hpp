#pragma once

#include <cstdint>
#include <vector>

#include "vbg/ruth.hpp"

namespace vbg {

struct RankReport {
    bool regular = true;
    bool orbitwise_constant = true;
    std::vector<std::size_t> ranks;  // rank of partial per object
};
RankReport is_regular(const Ruth2& r);

// Block form of a regular 2-term object. Primed coordinates are C = K + S
// and E = N + dS; K and Q are canonical, S and N depend on the pivot seed.
struct RegularDecomposition {
    std::vector<Matrix> K, S, N, Q;  // per object
    std::vector<Matrix> PC, PE;      // primed -> original coordinates
    TransformationCochain sigma;     // gauge_apply(sigma, r) is block diagonal
    TransformationCochain sigma_primed;
    Ruth2 primed;  // gauge_apply(sigma_primed, r in primed coordinates)
    QuasiAction deltaK, deltaNu, deltaF;
    TransformationCochain omega;  // nu -> K
    TransformationCochain RF;     // curvature block on F
};

// pivot_seed 0 scans coordinates in natural order; other seeds permute them.
// Throws NotRegular, or BlockSolveFailed if the input was invalid.
RegularDecomposition normal_form(const Ruth2& r, std::uint64_t pivot_seed = 0);

struct SubquotientReps {
    QuasiAction deltaK, deltaNu;
};
SubquotientReps canonical_subquotient_reps(const Ruth2& r);

// Solves D sigma = omega1 - omega2 for normalized sigma in C^1(G; nu -> K).
Equivalence class_equal(const QuasiAction& deltaNu, const QuasiAction& deltaK, const TransformationCochain& omega1,
                        const TransformationCochain& omega2);
// Throws RepresentationMismatch if the two decompositions carry different reps.
Equivalence class_equal(const RegularDecomposition& a, const RegularDecomposition& b);

// Gauge-equivalence over fixed bundle identifications; the witness sigma
// satisfies gauge_apply(sigma, r1) == r2. Throws NotRegular, DifferentCoreAnchor.
Equivalence decide_equiv_regular(const Ruth2& r1, const Ruth2& r2, std::uint64_t pivot_seed = 0);

// The same 2-term object written in new coordinates: PC, PE map new to old.
Ruth2 change_basis(const Ruth2& r, const std::vector<Matrix>& PC, const std::vector<Matrix>& PE);

}  // namespace vbg
