#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "vbg/vbgroupoid.hpp"

namespace vbg {

// Fiberwise dual over the same groupoid: side bundle C*, core E*.
// Throws MultiplicationNotSurjective or WellDefinednessFails.
VBGroupoid dualize(const VBGroupoid& v);

// (Delta_{g^{-1}})^T on the dual bundle.
QuasiAction dual_representation(const QuasiAction& delta);

struct DoubleDual {
    VBGroupoid dd;
    std::vector<Matrix> fiber_map;  // per arrow, into the double dual
    std::vector<Matrix> side_map;   // per object, E_x -> side of the double dual
};
// Throws StructureMismatch if evaluation fails to intertwine a structure map.
DoubleDual double_dual_check(const VBGroupoid& v);

// Hat form: degree 0 holds a core vector per object, degree p >= 1 a vector
// in the fiber over g_1 for each tuple (g_1, ..., g_p).
struct VBCochain {
    int degree = 0;
    std::vector<Vector> hat;
    friend bool operator==(const VBCochain& a, const VBCochain& b) {
        return a.degree == b.degree && a.hat == b.hat;
    }
};

// Everything the coboundary needs, computed once per VB-groupoid.
class VBComplex {
public:
    explicit VBComplex(VBGroupoid v);

    const VBGroupoid& vbg() const { return v_; }
    const VBGroupoid& dual() const { return dual_; }
    const CoreData& core() const { return core_; }

    std::size_t dim(int p) const;
    VBCochain zero(int p) const;
    Vector flatten(const VBCochain& phi) const;
    VBCochain unflatten(int p, const Vector& x) const;

    // Rows are the linear conditions cutting out left-projectable cochains.
    Matrix projectability_constraints(int p) const;
    Matrix left_projectable_basis(int p) const;
    bool is_left_projectable(const VBCochain& phi) const;

    // Throws NotLeftProjectable on bad input, LiftDependence if the value
    // depends on the composable completion (never for valid input).
    VBCochain coboundary(const VBCochain& phi) const;

    // Matrix of the coboundary between left-projectable bases.
    Matrix coboundary_matrix(int p) const;
    CochainComplex complex(int max_degree) const;

private:
    VBGroupoid v_, dual_;
    CoreData core_;
    // Per composable pair (g0, g1): a completion Gamma*_{g0} -> Gamma*_{g1}, the
    // resulting composite, and the same for the kernel of the dual target.
    std::vector<Matrix> completion_, composite_, shift_, shift_composite_;
    mutable std::mutex mu_;
    mutable std::map<int, Matrix> constraints_;
};

VBCochain vb_coboundary(const VBGroupoid& v, const VBCochain& phi);
std::vector<std::size_t> vb_cohomology(const VBGroupoid& v, int max_degree);

// The splitting of hat cochains along h into (E, C) parts and its inverse.
MixedCochain psi(const VBComplex& cx, const HorizontalLift& h, const VBCochain& phi);
VBCochain psi_inverse(const VBComplex& cx, const HorizontalLift& h, const MixedCochain& x);
// -delta conjugated through psi.
MixedCochain transferred_operator(const VBComplex& cx, const HorizontalLift& h, const MixedCochain& x);

namespace detail {
// Pairing identities of the dual along a lift; each returns its failures.
std::vector<Violation> check_dual_pairing(const VBGroupoid& v, const VBGroupoid& dual, const HorizontalLift& h);
std::vector<Violation> check_source_pairing(const VBGroupoid& v, const VBGroupoid& dual, const HorizontalLift& h);
std::vector<Violation> check_target_pairing(const VBGroupoid& v, const VBGroupoid& dual, const HorizontalLift& h);
}  // namespace detail

}  // namespace vbg
