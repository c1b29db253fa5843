#pragma once

#include <functional>
#include <optional>
#include <string>

#include "vbg/cochains.hpp"
#include "vbg/errors.hpp"

namespace vbg {

// A 2-term representation up to homotopy on C[1] -> E as the 4-tuple
// (partial, deltaC, deltaE, omega). Plain data; validity is established by
// validate_ruth2.
struct Ruth2 {
    FiniteGroupoid G;
    VectorBundle C, E;
    std::vector<Matrix> partial;  // per object, C_x -> E_x
    QuasiAction deltaC, deltaE;
    TransformationCochain omega;  // degree 2, E -> C

    friend bool operator==(const Ruth2& a, const Ruth2& b) {
        return a.C == b.C && a.E == b.E && a.partial == b.partial && a.deltaC == b.deltaC &&
               a.deltaE == b.deltaE && a.omega == b.omega;
    }
};

// Every failed condition with its witnessing arrows; empty iff valid.
std::vector<Violation> check_ruth2(const Ruth2& r);
const Ruth2& validate_ruth2(const Ruth2& r);

// Pure representation as a 2-term object with C = E, partial = id and
// omega the curvature of delta.
Ruth2 type1_ruth(const QuasiAction& delta);
// partial = 0 with the given representations and cocycle.
Ruth2 type0_ruth(const QuasiAction& dC, const QuasiAction& dE, const TransformationCochain& omega);
TransformationCochain curvature(const QuasiAction& delta);
// Block sum with C = C1 + C2 and E = E1 + E2.
Ruth2 direct_sum(const Ruth2& a, const Ruth2& b);
QuasiAction direct_sum(const QuasiAction& a, const QuasiAction& b);

enum class Parity { even, odd };
using CochainOperator = std::function<VectorCochain(const VectorCochain&)>;

CochainOperator operator_from_quasiaction(const QuasiAction& delta, Parity parity);
// Recovers the quasi-action from a degree-1 operator; throws NotLeibniz.
QuasiAction quasiaction_from_operator(const FiniteGroupoid& G, const VectorBundle& E, const CochainOperator& D,
                                      Parity parity);

// Element of C^p(G;E) + C^{p+1}(G;C); degree -1 has an empty E part.
struct MixedCochain {
    int degree = 0;
    VectorCochain e, c;
    friend bool operator==(const MixedCochain& a, const MixedCochain& b) {
        return a.degree == b.degree && a.e == b.e && a.c == b.c;
    }
};

MixedCochain zero_mixed(const Ruth2& r, int p);
std::size_t mixed_dim(const Ruth2& r, int p);
Vector flatten(const MixedCochain& x);
MixedCochain unflatten_mixed(const Ruth2& r, int p, const Vector& v);
std::vector<std::size_t> normalized_mixed_coordinates(const Ruth2& r, int p);
bool is_normalized(const FiniteGroupoid& G, const MixedCochain& x);
MixedCochain star_product(const FiniteGroupoid& G, const MixedCochain& x, const ScalarCochain& f);

MixedCochain total_operator_apply(const Ruth2& r, const MixedCochain& x);
// (x_E, x_C + coef * sigma^(x_E)); coef = 1 is the gauge 1 + sigma^.
MixedCochain gauge_operator_apply(const Ruth2& r, const TransformationCochain& sigma, const MixedCochain& x,
                                  const Scalar& coef = Scalar(1));

struct OperatorCheck {
    bool squares_to_zero = true;
    bool preserves_normalized = true;
    bool ok() const { return squares_to_zero && preserves_normalized; }
};
// The total complex in degrees -1 .. max_degree + 1; entry k of dims is degree k - 1.
CochainComplex total_complex(const Ruth2& r, int max_degree, bool normalized = false);

// Operator-level characterisation on basis cochains of degree -1 .. max_degree.
OperatorCheck check_total_operator(const Ruth2& r, int max_degree = 1);

Ruth2 gauge_apply(const TransformationCochain& sigma, const Ruth2& r);

struct Equivalence {
    bool equivalent = false;
    std::optional<TransformationCochain> witness;  // sigma with gauge_apply(sigma, r1) == r2
    std::string reason;
};

Equivalence decide_equiv_type0(const Ruth2& r1, const Ruth2& r2);

// Normalized sigma in C^1(G; E -> C) with D sigma = target, if any.
std::optional<TransformationCochain> solve_coboundary(const QuasiAction& dE, const QuasiAction& dC,
                                                      const TransformationCochain& target);

}  // namespace vbg
