#include "vbg/cochains.hpp"

#include "vbg/errors.hpp"

namespace vbg {
namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error("ShapeMismatch", what);
}

Scalar sign(int i) { return (i % 2 == 0) ? Scalar(1) : Scalar(-1); }

// Index in nerve(t.size()-1) of the i-th face of t; degree-0 faces are objects.
std::size_t face_index(const FiniteGroupoid& G, std::span<const ArrowId> t, int i) {
    if (t.size() == 1) return i == 0 ? G.src(t[0]) : G.tgt(t[0]);
    auto f = face(G, t, i);
    return G.nerve(static_cast<int>(t.size()) - 1).index(f);
}

// Split a (p+q)-tuple into the indices of its first p and last q arrows.
std::pair<std::size_t, std::size_t> split_index(const FiniteGroupoid& G, const Nerve& n, std::size_t k, int p, int q) {
    if (p + q == 0) return {k, k};
    auto t = n.tuple(k);
    std::size_t front = p == 0 ? G.tgt(t[0]) : G.nerve(p).index(t.subspan(0, p));
    std::size_t back = q == 0 ? G.src(t[p - 1]) : G.nerve(q).index(t.subspan(p, q));
    return {front, back};
}

}  // namespace

VectorBundle VectorBundle::constant(const FiniteGroupoid& G, std::size_t n, Field f) {
    return {std::vector<std::size_t>(G.num_objects(), n), f};
}

VectorBundle direct_sum(const VectorBundle& a, const VectorBundle& b) {
    require(a.dims.size() == b.dims.size() && a.field == b.field, "direct sum of bundles over different bases");
    VectorBundle r = a;
    for (std::size_t x = 0; x < r.dims.size(); ++x) r.dims[x] += b.dims[x];
    return r;
}

QuasiAction::QuasiAction(FiniteGroupoid G, VectorBundle E, std::vector<Matrix> maps)
    : G_(std::move(G)), E_(std::move(E)), maps_(std::move(maps)) {
    require(E_.dims.size() == G_.num_objects(), "bundle has wrong number of fibers");
    require(maps_.size() == G_.num_arrows(), "quasi-action needs one matrix per arrow");
    for (ArrowId g = 0; g < G_.num_arrows(); ++g) {
        require(maps_[g].rows() == E_.dim(G_.tgt(g)) && maps_[g].cols() == E_.dim(G_.src(g)),
                "quasi-action matrix has wrong shape at arrow " + G_.arrow_name(g));
        if (G_.is_unit(g) && !maps_[g].is_identity()) unital_ = false;
    }
    const Nerve& n2 = G_.nerve(2);
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        if (maps_[t[0]] * maps_[t[1]] != maps_[G_.compose(t[0], t[1])]) flat_failures_.push_back({t[0], t[1]});
    }
}

QuasiAction QuasiAction::identity(const FiniteGroupoid& G, const VectorBundle& E) {
    std::vector<Matrix> maps;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        require(E.dim(G.src(g)) == E.dim(G.tgt(g)), "identity action needs equal fiber dimensions along arrows");
        maps.push_back(Matrix::identity(E.dim(G.src(g)), E.field));
    }
    return QuasiAction(G, E, std::move(maps));
}

ScalarCochain zero_scalar_cochain(const FiniteGroupoid& G, int p, Field f) {
    return {p, f, std::vector<Scalar>(G.nerve(p).size(), Scalar(0))};
}

VectorCochain zero_cochain(const FiniteGroupoid& G, const VectorBundle& E, int p) {
    const Nerve& n = G.nerve(p);
    VectorCochain x{p, {}};
    for (std::size_t k = 0; k < n.size(); ++k) x.values.push_back(zero_vector(E.dim(n.first_vertex(k))));
    return x;
}

TransformationCochain zero_transformation(const FiniteGroupoid& G, const VectorBundle& E, const VectorBundle& C, int p) {
    const Nerve& n = G.nerve(p);
    TransformationCochain x{p, {}};
    for (std::size_t k = 0; k < n.size(); ++k)
        x.values.emplace_back(C.dim(n.first_vertex(k)), E.dim(n.last_vertex(k)), C.field);
    return x;
}

std::size_t cochain_dim(const FiniteGroupoid& G, const VectorBundle& E, int p) {
    const Nerve& n = G.nerve(p);
    std::size_t d = 0;
    for (std::size_t k = 0; k < n.size(); ++k) d += E.dim(n.first_vertex(k));
    return d;
}

Vector flatten(const VectorCochain& x) {
    Vector v;
    for (const auto& b : x.values) v.insert(v.end(), b.begin(), b.end());
    return v;
}

VectorCochain unflatten(const FiniteGroupoid& G, const VectorBundle& E, int p, const Vector& v) {
    const Nerve& n = G.nerve(p);
    VectorCochain x{p, {}};
    std::size_t off = 0;
    for (std::size_t k = 0; k < n.size(); ++k) {
        std::size_t d = E.dim(n.first_vertex(k));
        require(off + d <= v.size(), "flattened cochain too short");
        x.values.emplace_back(v.begin() + static_cast<long>(off), v.begin() + static_cast<long>(off + d));
        off += d;
    }
    require(off == v.size(), "flattened cochain too long");
    return x;
}

std::size_t transformation_dim(const FiniteGroupoid& G, const VectorBundle& E, const VectorBundle& C, int p) {
    const Nerve& n = G.nerve(p);
    std::size_t d = 0;
    for (std::size_t k = 0; k < n.size(); ++k) d += C.dim(n.first_vertex(k)) * E.dim(n.last_vertex(k));
    return d;
}

Vector flatten(const TransformationCochain& x) {
    Vector v;
    for (const auto& m : x.values)
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
    return v;
}

TransformationCochain unflatten_transformation(const FiniteGroupoid& G, const VectorBundle& E, const VectorBundle& C,
                                               int p, const Vector& v) {
    TransformationCochain x = zero_transformation(G, E, C, p);
    std::size_t off = 0;
    for (auto& m : x.values)
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                require(off < v.size(), "flattened transformation cochain too short");
                m(i, j) = v[off++];
            }
    require(off == v.size(), "flattened transformation cochain too long");
    return x;
}

std::vector<std::size_t> normalized_coordinates(const FiniteGroupoid& G, const VectorBundle& E, int p) {
    const Nerve& n = G.nerve(p);
    std::vector<std::size_t> idx;
    std::size_t off = 0;
    for (std::size_t k = 0; k < n.size(); ++k) {
        std::size_t d = E.dim(n.first_vertex(k));
        if (!n.degenerate(k))
            for (std::size_t i = 0; i < d; ++i) idx.push_back(off + i);
        off += d;
    }
    return idx;
}

std::vector<std::size_t> normalized_transformation_coordinates(const FiniteGroupoid& G, const VectorBundle& E,
                                                               const VectorBundle& C, int p) {
    const Nerve& n = G.nerve(p);
    std::vector<std::size_t> idx;
    std::size_t off = 0;
    for (std::size_t k = 0; k < n.size(); ++k) {
        std::size_t d = C.dim(n.first_vertex(k)) * E.dim(n.last_vertex(k));
        if (!n.degenerate(k))
            for (std::size_t i = 0; i < d; ++i) idx.push_back(off + i);
        off += d;
    }
    return idx;
}

VectorCochain add(const VectorCochain& a, const VectorCochain& b) {
    require(a.degree == b.degree && a.values.size() == b.values.size(), "cochain sum of different degrees");
    VectorCochain r = a;
    for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] = add(a.values[k], b.values[k]);
    return r;
}

VectorCochain sub(const VectorCochain& a, const VectorCochain& b) { return add(a, scale(Scalar(-1), b)); }

VectorCochain scale(const Scalar& s, const VectorCochain& a) {
    VectorCochain r = a;
    for (auto& v : r.values) v = scale(s, v);
    return r;
}

bool is_zero(const VectorCochain& a) {
    for (const auto& v : a.values)
        if (!is_zero(v)) return false;
    return true;
}

TransformationCochain add(const TransformationCochain& a, const TransformationCochain& b) {
    require(a.degree == b.degree && a.values.size() == b.values.size(), "cochain sum of different degrees");
    TransformationCochain r = a;
    for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] = a.values[k] + b.values[k];
    return r;
}

TransformationCochain sub(const TransformationCochain& a, const TransformationCochain& b) {
    return add(a, scale(Scalar(-1), b));
}

TransformationCochain scale(const Scalar& s, const TransformationCochain& a) {
    TransformationCochain r = a;
    for (auto& m : r.values) m = s * m;
    return r;
}

bool is_zero(const TransformationCochain& a) {
    for (const auto& m : a.values)
        if (!m.is_zero()) return false;
    return true;
}

bool is_normalized(const FiniteGroupoid& G, const ScalarCochain& f) {
    const Nerve& n = G.nerve(f.degree);
    for (std::size_t k = 0; k < n.size(); ++k)
        if (n.degenerate(k) && !f.values[k].is_zero()) return false;
    return true;
}

bool is_normalized(const FiniteGroupoid& G, const VectorCochain& x) {
    const Nerve& n = G.nerve(x.degree);
    for (std::size_t k = 0; k < n.size(); ++k)
        if (n.degenerate(k) && !is_zero(x.values[k])) return false;
    return true;
}

bool is_normalized(const FiniteGroupoid& G, const TransformationCochain& x) {
    const Nerve& n = G.nerve(x.degree);
    for (std::size_t k = 0; k < n.size(); ++k)
        if (n.degenerate(k) && !x.values[k].is_zero()) return false;
    return true;
}

ScalarCochain scalar_coboundary(const FiniteGroupoid& G, const ScalarCochain& f) {
    int p = f.degree;
    const Nerve& n = G.nerve(p + 1);
    require(f.values.size() == G.nerve(p).size(), "scalar cochain has wrong length");
    ScalarCochain r = zero_scalar_cochain(G, p + 1, f.field);
    for (std::size_t k = 0; k < n.size(); ++k) {
        auto t = n.tuple(k);
        Scalar v(0);
        for (int i = 0; i <= p + 1; ++i) v += sign(i) * f.values[face_index(G, t, i)];
        r.values[k] = v;
    }
    return r;
}

ScalarCochain star_product(const FiniteGroupoid& G, const ScalarCochain& f1, const ScalarCochain& f2) {
    int p = f1.degree, q = f2.degree;
    const Nerve& n = G.nerve(p + q);
    ScalarCochain r = zero_scalar_cochain(G, p + q, f1.field);
    for (std::size_t k = 0; k < n.size(); ++k) {
        auto [a, b] = split_index(G, n, k, p, q);
        r.values[k] = f1.values[a] * f2.values[b];
    }
    return r;
}

VectorCochain star_product(const FiniteGroupoid& G, const VectorCochain& x, const ScalarCochain& f) {
    int p = x.degree, q = f.degree;
    const Nerve& n = G.nerve(p + q);
    VectorCochain r{p + q, {}};
    for (std::size_t k = 0; k < n.size(); ++k) {
        auto [a, b] = split_index(G, n, k, p, q);
        r.values.push_back(scale(f.values[b], x.values[a]));
    }
    return r;
}

VectorCochain vector_coboundary(const QuasiAction& delta, const VectorCochain& x) {
    const FiniteGroupoid& G = delta.groupoid();
    int p = x.degree;
    require(x.values.size() == G.nerve(p).size(), "vector cochain has wrong length");
    const Nerve& n = G.nerve(p + 1);
    VectorCochain r{p + 1, {}};
    r.values.reserve(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) {
        auto t = n.tuple(k);
        Vector v = delta[t[0]] * x.values[face_index(G, t, 0)];
        for (int i = 1; i <= p + 1; ++i) {
            const Vector& w = x.values[face_index(G, t, i)];
            v = (i % 2 == 0) ? add(v, w) : sub(v, w);
        }
        r.values.push_back(std::move(v));
    }
    return r;
}

VectorCochain transformation_apply(const FiniteGroupoid& G, const TransformationCochain& w, const VectorBundle& C,
                                   const VectorCochain& x) {
    int p = w.degree, q = x.degree;
    const Nerve& n = G.nerve(p + q);
    VectorCochain r{p + q, {}};
    r.values.reserve(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) {
        auto [a, b] = split_index(G, n, k, p, q);
        const Matrix& m = w.values.at(a);
        require(m.rows() == C.dim(n.first_vertex(k)), "transformation cochain lands in the wrong fiber");
        r.values.push_back(m * x.values.at(b));
    }
    return r;
}

TransformationCochain transformation_coboundary_unchecked(const QuasiAction& dE, const QuasiAction& dC,
                                                          const TransformationCochain& w) {
    const FiniteGroupoid& G = dE.groupoid();
    int p = w.degree;
    require(w.values.size() == G.nerve(p).size(), "transformation cochain has wrong length");
    const Nerve& n = G.nerve(p + 1);
    TransformationCochain r{p + 1, {}};
    r.values.reserve(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) {
        auto t = n.tuple(k);
        Matrix m = dC[t[0]] * w.values[face_index(G, t, 0)];
        for (int i = 1; i <= p; ++i) {
            const Matrix& f = w.values[face_index(G, t, i)];
            m = (i % 2 == 0) ? m + f : m - f;
        }
        Matrix last = w.values[face_index(G, t, p + 1)] * dE[t[p]];
        m = (p % 2 == 1) ? m + last : m - last;
        r.values.push_back(std::move(m));
    }
    return r;
}

TransformationCochain transformation_coboundary(const QuasiAction& dE, const QuasiAction& dC,
                                                const TransformationCochain& w) {
    if (!dE.is_representation() || !dC.is_representation())
        throw Error("NotFlat", "transformation coboundary needs flat unital actions on both bundles");
    return transformation_coboundary_unchecked(dE, dC, w);
}

std::vector<std::size_t> cohomology_dims(const CochainComplex& c) {
    require(c.dims.size() == c.d.size() + 1, "complex needs one more space than differentials");
    std::vector<std::size_t> ranks;
    for (std::size_t k = 0; k < c.d.size(); ++k) {
        require(c.d[k].cols() == c.dims[k] && c.d[k].rows() == c.dims[k + 1], "differential has wrong shape");
        if (k + 1 < c.d.size() && !(c.d[k + 1] * c.d[k]).is_zero())
            throw Error("NotAComplex", "d^" + std::to_string(k + 1) + " d^" + std::to_string(k) + " != 0");
        ranks.push_back(rank(c.d[k]));
    }
    std::vector<std::size_t> h;
    for (std::size_t k = 0; k < c.d.size(); ++k) h.push_back(c.dims[k] - ranks[k] - (k ? ranks[k - 1] : 0));
    return h;
}

Matrix operator_matrix(std::size_t in_dim, std::size_t out_dim, Field f,
                       const std::function<Vector(const Vector&)>& apply) {
    Matrix m(out_dim, in_dim, f);
    for (std::size_t j = 0; j < in_dim; ++j) {
        Vector col = apply(unit_vector(in_dim, j, f));
        require(col.size() == out_dim, "operator output has wrong length");
        m.set_col(j, col);
    }
    return m;
}

namespace {

// Restrict a full-complex differential to normalized coordinates, checking
// that normalized inputs stay normalized.
Matrix restrict_normalized(const Matrix& full, const std::vector<std::size_t>& in, const std::vector<std::size_t>& out) {
    Matrix cols = full.columns(in);
    std::vector<bool> keep(full.rows(), false);
    for (std::size_t i : out) keep[i] = true;
    for (std::size_t i = 0; i < full.rows(); ++i)
        if (!keep[i])
            for (std::size_t j = 0; j < cols.cols(); ++j)
                if (!cols(i, j).is_zero())
                    throw Error("NotNormalizedPreserving", "differential leaves the normalized subcomplex");
    return cols.rows_of(out);
}

}  // namespace

CochainComplex representation_complex(const QuasiAction& delta, int max_degree, bool normalized) {
    const FiniteGroupoid& G = delta.groupoid();
    const VectorBundle& E = delta.bundle();
    CochainComplex c;
    c.field = E.field;
    for (int p = 0; p <= max_degree; ++p) {
        std::size_t in = cochain_dim(G, E, p), out = cochain_dim(G, E, p + 1);
        Matrix full = operator_matrix(in, out, E.field, [&](const Vector& v) {
            return flatten(vector_coboundary(delta, unflatten(G, E, p, v)));
        });
        if (normalized) {
            auto ci = normalized_coordinates(G, E, p), co = normalized_coordinates(G, E, p + 1);
            c.d.push_back(restrict_normalized(full, ci, co));
            if (p == 0) c.dims.push_back(ci.size());
            c.dims.push_back(co.size());
        } else {
            c.d.push_back(std::move(full));
            if (p == 0) c.dims.push_back(in);
            c.dims.push_back(out);
        }
    }
    return c;
}

CochainComplex transformation_complex(const QuasiAction& dE, const QuasiAction& dC, int max_degree, bool normalized) {
    const FiniteGroupoid& G = dE.groupoid();
    const VectorBundle& E = dE.bundle();
    const VectorBundle& C = dC.bundle();
    CochainComplex c;
    c.field = E.field;
    for (int p = 0; p <= max_degree; ++p) {
        std::size_t in = transformation_dim(G, E, C, p), out = transformation_dim(G, E, C, p + 1);
        Matrix full = operator_matrix(in, out, E.field, [&](const Vector& v) {
            return flatten(transformation_coboundary(dE, dC, unflatten_transformation(G, E, C, p, v)));
        });
        if (normalized) {
            auto ci = normalized_transformation_coordinates(G, E, C, p);
            auto co = normalized_transformation_coordinates(G, E, C, p + 1);
            c.d.push_back(restrict_normalized(full, ci, co));
            if (p == 0) c.dims.push_back(ci.size());
            c.dims.push_back(co.size());
        } else {
            c.d.push_back(std::move(full));
            if (p == 0) c.dims.push_back(in);
            c.dims.push_back(out);
        }
    }
    return c;
}

}  // namespace vbg
