#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vbg/ruth.hpp"

namespace vbg {

// Fiberwise-linear groupoid over G. Structure maps are matrices; mtilde is
// indexed by nerve(2) and only its restriction to the compatibility space
// {(a, b) : stilde a = ttilde b} carries meaning.
struct VBGroupoid {
    FiniteGroupoid G;
    VectorBundle E;                   // side bundle
    std::vector<std::size_t> fibers;  // dim of the fiber over each arrow
    std::vector<Matrix> stilde, ttilde, itilde;
    std::vector<Matrix> utilde;  // per object, E_x -> fiber over the unit
    std::vector<Matrix> mtilde;  // per composable pair
    std::string provenance;

    Field field() const { return E.field; }
};

std::vector<Violation> check_vbg(const VBGroupoid& v);
const VBGroupoid& validate_vbg(const VBGroupoid& v);

// Basis (as columns) of the compatibility space over nerve(2) tuple k.
Matrix compatible_pairs(const VBGroupoid& v, std::size_t k);
// mtilde over (g1, g2) applied to a compatible pair.
Vector multiply(const VBGroupoid& v, ArrowId g1, ArrowId g2, const Vector& a, const Vector& b);
Matrix multiply(const VBGroupoid& v, ArrowId g1, ArrowId g2, const Matrix& a, const Matrix& b);

enum class Side { right, left };

struct CoreData {
    Side side = Side::right;
    VectorBundle bundle;
    std::vector<Matrix> vertical;  // per arrow: kernel of stilde (right) or ttilde (left)
    std::vector<Matrix> core;      // per object: the vertical basis at the unit
    std::vector<Matrix> j;         // per arrow: core over t(g) (right) or s(g) (left) into the fiber
};

CoreData compute_core(const VBGroupoid& v, Side side = Side::right);

struct CoreInvolution {
    std::vector<Matrix> to_left;   // C^R_x -> C^L_x
    std::vector<Matrix> to_right;  // C^L_x -> C^R_x
};
CoreInvolution core_involution(const VBGroupoid& v);

struct HorizontalLift {
    std::vector<Matrix> h;  // per arrow, E_{s(g)} -> fiber
    friend bool operator==(const HorizontalLift& a, const HorizontalLift& b) { return a.h == b.h; }
};

// Pivoted right inverse of stilde off the units, utilde on them; sigma
// (normalized, E -> C) shifts the choice by its core translate.
HorizontalLift choose_lift(const VBGroupoid& v, const TransformationCochain* sigma = nullptr);
std::vector<Violation> check_lift(const VBGroupoid& v, const HorizontalLift& h);
TransformationCochain lift_difference(const VBGroupoid& v, const HorizontalLift& h, const HorizontalLift& h2);

Ruth2 extract_components(const VBGroupoid& v, const HorizontalLift& h);
// Throws InvalidRuth unless check is false (used to build counterexamples).
VBGroupoid build_from_ruth(const Ruth2& r, bool check = true);
HorizontalLift canonical_lift(const Ruth2& r);
// Fiberwise maps from build_from_ruth(extract_components(v, h)) to v.
std::vector<Matrix> decomposition_isomorphism(const VBGroupoid& v, const HorizontalLift& h);

VBGroupoid trivial_vbg(const FiniteGroupoid& G, const VectorBundle& E);
VBGroupoid action_vbg(const QuasiAction& delta);
VBGroupoid semidirect_vbg(const QuasiAction& delta);
VBGroupoid direct_sum(const VBGroupoid& a, const VBGroupoid& b);

// Fiberwise maps phi_g from a to b over the side map psi_x (identity when
// omitted). Every structure map is checked, plus invertibility.
std::vector<Violation> check_isomorphism(const VBGroupoid& a, const VBGroupoid& b, const std::vector<Matrix>& phi,
                                         const std::vector<Matrix>* side_map = nullptr);
// An isomorphism that is the identity on E and on the computed right cores.
std::optional<std::vector<Matrix>> find_isomorphism(const VBGroupoid& a, const VBGroupoid& b);

struct FatElement {
    ArrowId g = 0;
    Matrix H;  // columns span a complement of the right-vertical space
};

FatElement fat_section(const VBGroupoid& v, const HorizontalLift& h, ArrowId g);
// Action on the side bundle: E_{s(g)} -> E_{t(g)}.
Matrix fat_psi_e(const VBGroupoid& v, const FatElement& x);
// Action on the right core: C_{s(g)} -> C_{t(g)}.
Matrix fat_psi_c(const VBGroupoid& v, const CoreData& core, const FatElement& x);
FatElement fat_mult(const VBGroupoid& v, const FatElement& a, const FatElement& b);
// Core coordinates of the section's multiplicativity defect over (g1, g2).
Matrix fat_defect(const VBGroupoid& v, const CoreData& core, const HorizontalLift& h, ArrowId g1, ArrowId g2);

}  // namespace vbg
