#pragma once

#include <array>
#include <functional>
#include <vector>

#include "vbg/groupoid.hpp"
#include "vbg/matrix.hpp"

namespace vbg {

struct VectorBundle {
    std::vector<std::size_t> dims;  // per object
    Field field;

    std::size_t dim(ObjectId x) const { return dims.at(x); }
    static VectorBundle constant(const FiniteGroupoid& G, std::size_t n, Field f);
    friend bool operator==(const VectorBundle& a, const VectorBundle& b) {
        return a.dims == b.dims && a.field == b.field;
    }
};

VectorBundle direct_sum(const VectorBundle& a, const VectorBundle& b);

struct ScalarCochain {
    int degree = 0;
    Field field;
    std::vector<Scalar> values;  // indexed by nerve(degree)
};

// values[k] lies in the fiber over the first vertex tgt(g_1) of tuple k.
struct VectorCochain {
    int degree = 0;
    std::vector<Vector> values;
    friend bool operator==(const VectorCochain& a, const VectorCochain& b) {
        return a.degree == b.degree && a.values == b.values;
    }
};

// values[k] maps E over src(g_p) to C over tgt(g_1).
struct TransformationCochain {
    int degree = 0;
    std::vector<Matrix> values;
    friend bool operator==(const TransformationCochain& a, const TransformationCochain& b) {
        return a.degree == b.degree && a.values == b.values;
    }
};

// Per-arrow matrices E_{s(g)} -> E_{t(g)}, not necessarily flat or unital.
class QuasiAction {
public:
    QuasiAction() = default;
    QuasiAction(FiniteGroupoid G, VectorBundle E, std::vector<Matrix> maps);
    static QuasiAction identity(const FiniteGroupoid& G, const VectorBundle& E);

    const FiniteGroupoid& groupoid() const { return G_; }
    const VectorBundle& bundle() const { return E_; }
    const Matrix& operator[](ArrowId g) const { return maps_.at(g); }
    const std::vector<Matrix>& maps() const { return maps_; }

    bool is_unital() const { return unital_; }
    bool is_flat() const { return flat_failures_.empty(); }
    bool is_representation() const { return unital_ && is_flat(); }
    const std::vector<std::array<ArrowId, 2>>& flatness_failures() const { return flat_failures_; }

    friend bool operator==(const QuasiAction& a, const QuasiAction& b) { return a.maps_ == b.maps_ && a.E_ == b.E_; }

private:
    FiniteGroupoid G_;
    VectorBundle E_;
    std::vector<Matrix> maps_;
    bool unital_ = true;
    std::vector<std::array<ArrowId, 2>> flat_failures_;
};

ScalarCochain zero_scalar_cochain(const FiniteGroupoid& G, int p, Field f);
VectorCochain zero_cochain(const FiniteGroupoid& G, const VectorBundle& E, int p);
TransformationCochain zero_transformation(const FiniteGroupoid& G, const VectorBundle& E, const VectorBundle& C, int p);

std::size_t cochain_dim(const FiniteGroupoid& G, const VectorBundle& E, int p);
Vector flatten(const VectorCochain& x);
VectorCochain unflatten(const FiniteGroupoid& G, const VectorBundle& E, int p, const Vector& v);
std::size_t transformation_dim(const FiniteGroupoid& G, const VectorBundle& E, const VectorBundle& C, int p);
Vector flatten(const TransformationCochain& x);
TransformationCochain unflatten_transformation(const FiniteGroupoid& G, const VectorBundle& E, const VectorBundle& C,
                                               int p, const Vector& v);
// Coordinates of the flattened cochain that belong to nondegenerate tuples.
std::vector<std::size_t> normalized_coordinates(const FiniteGroupoid& G, const VectorBundle& E, int p);
std::vector<std::size_t> normalized_transformation_coordinates(const FiniteGroupoid& G, const VectorBundle& E,
                                                               const VectorBundle& C, int p);

VectorCochain add(const VectorCochain& a, const VectorCochain& b);
VectorCochain sub(const VectorCochain& a, const VectorCochain& b);
VectorCochain scale(const Scalar& s, const VectorCochain& a);
bool is_zero(const VectorCochain& a);
TransformationCochain add(const TransformationCochain& a, const TransformationCochain& b);
TransformationCochain sub(const TransformationCochain& a, const TransformationCochain& b);
TransformationCochain scale(const Scalar& s, const TransformationCochain& a);
bool is_zero(const TransformationCochain& a);

bool is_normalized(const FiniteGroupoid& G, const ScalarCochain& f);
bool is_normalized(const FiniteGroupoid& G, const VectorCochain& x);
bool is_normalized(const FiniteGroupoid& G, const TransformationCochain& x);

ScalarCochain scalar_coboundary(const FiniteGroupoid& G, const ScalarCochain& f);
ScalarCochain star_product(const FiniteGroupoid& G, const ScalarCochain& f1, const ScalarCochain& f2);
VectorCochain star_product(const FiniteGroupoid& G, const VectorCochain& x, const ScalarCochain& f);

// The differential built from a quasi-action; squares to zero iff flat.
VectorCochain vector_coboundary(const QuasiAction& delta, const VectorCochain& x);

// The module morphism induced by a transformation cochain E -> C.
VectorCochain transformation_apply(const FiniteGroupoid& G, const TransformationCochain& w, const VectorBundle& C,
                                   const VectorCochain& x);

// Differential on C(G; E -> C); throws NotFlat unless both actions are representations.
TransformationCochain transformation_coboundary(const QuasiAction& dE, const QuasiAction& dC,
                                                const TransformationCochain& w);
// Same formula without the representation check.
TransformationCochain transformation_coboundary_unchecked(const QuasiAction& dE, const QuasiAction& dC,
                                                          const TransformationCochain& w);

// d[k] maps degree k to degree k+1; dims has one more entry than d.
struct CochainComplex {
    Field field;
    std::vector<std::size_t> dims;
    std::vector<Matrix> d;
};

// dim H^k for k = 0 .. d.size()-1; throws NotAComplex if d[k+1] d[k] != 0.
std::vector<std::size_t> cohomology_dims(const CochainComplex& c);

// Matrix of a linear map given by its action on flattened coordinates.
Matrix operator_matrix(std::size_t in_dim, std::size_t out_dim, Field f,
                       const std::function<Vector(const Vector&)>& apply);

// Truncated complexes through degree max_degree + 1 (so H^0..H^max_degree are defined).
CochainComplex representation_complex(const QuasiAction& delta, int max_degree, bool normalized = true);
CochainComplex transformation_complex(const QuasiAction& dE, const QuasiAction& dC, int max_degree,
                                      bool normalized = true);

}  // namespace vbg
