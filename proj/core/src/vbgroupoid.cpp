#include "vbg/vbgroupoid.hpp"

#include <array>

namespace vbg {
namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error("ShapeMismatch", what);
}

std::size_t pair_index(const FiniteGroupoid& G, ArrowId g1, ArrowId g2) {
    const std::array<ArrowId, 2> t{g1, g2};
    return G.nerve(2).index(t);
}

Matrix zeros(std::size_t r, std::size_t c, Field f) { return Matrix(r, c, f); }

std::vector<std::string> arrows(const FiniteGroupoid& G, std::initializer_list<ArrowId> gs) {
    std::vector<std::string> out;
    for (ArrowId g : gs) out.push_back(G.arrow_name(g));
    return out;
}

void check_shapes(const VBGroupoid& v) {
    const FiniteGroupoid& G = v.G;
    require(v.E.dims.size() == G.num_objects(), "side bundle over the wrong base");
    require(v.fibers.size() == G.num_arrows() && v.stilde.size() == G.num_arrows() &&
                v.ttilde.size() == G.num_arrows() && v.itilde.size() == G.num_arrows(),
            "one fiber, source, target and inverse per arrow expected");
    require(v.utilde.size() == G.num_objects(), "one unit map per object expected");
    require(v.mtilde.size() == G.nerve(2).size(), "one multiplication per composable pair expected");
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        const std::string& n = G.arrow_name(g);
        require(v.stilde[g].rows() == v.E.dim(G.src(g)) && v.stilde[g].cols() == v.fibers[g], "stilde shape at " + n);
        require(v.ttilde[g].rows() == v.E.dim(G.tgt(g)) && v.ttilde[g].cols() == v.fibers[g], "ttilde shape at " + n);
        require(v.itilde[g].rows() == v.fibers[G.inv(g)] && v.itilde[g].cols() == v.fibers[g], "itilde shape at " + n);
    }
    for (ObjectId x = 0; x < G.num_objects(); ++x)
        require(v.utilde[x].rows() == v.fibers[G.unit(x)] && v.utilde[x].cols() == v.E.dim(x),
                "utilde shape at " + G.object_name(x));
    const Nerve& n2 = G.nerve(2);
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        require(v.mtilde[k].rows() == v.fibers[G.compose(t[0], t[1])] &&
                    v.mtilde[k].cols() == v.fibers[t[0]] + v.fibers[t[1]],
                "mtilde shape at " + G.tuple_key(2, k));
    }
}

Matrix top(const Matrix& w, std::size_t n) { return w.block(0, 0, n, w.cols()); }
Matrix bottom(const Matrix& w, std::size_t n) { return w.block(n, 0, w.rows() - n, w.cols()); }

}  // namespace

Matrix compatible_pairs(const VBGroupoid& v, std::size_t k) {
    auto t = v.G.nerve(2).tuple(k);
    return kernel(Matrix::hstack(v.stilde[t[0]], -v.ttilde[t[1]]));
}

Matrix multiply(const VBGroupoid& v, ArrowId g1, ArrowId g2, const Matrix& a, const Matrix& b) {
    return v.mtilde[pair_index(v.G, g1, g2)] * Matrix::vstack(a, b);
}

Vector multiply(const VBGroupoid& v, ArrowId g1, ArrowId g2, const Vector& a, const Vector& b) {
    Vector ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    return v.mtilde[pair_index(v.G, g1, g2)] * ab;
}

std::vector<Violation> check_vbg(const VBGroupoid& v) {
    check_shapes(v);
    const FiniteGroupoid& G = v.G;
    Field f = v.field();
    std::vector<Violation> bad;

    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        if (rank(v.stilde[g]) != v.E.dim(G.src(g))) bad.push_back({"SourceNotSurjective", arrows(G, {g}), ""});
        if (rank(v.ttilde[g]) != v.E.dim(G.tgt(g))) bad.push_back({"TargetNotSurjective", arrows(G, {g}), ""});
    }
    if (!bad.empty()) return bad;

    const Nerve& n2 = G.nerve(2);
    std::vector<Matrix> W(n2.size());
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        ArrowId g1 = t[0], g2 = t[1], g12 = G.compose(g1, g2);
        W[k] = compatible_pairs(v, k);
        Matrix prod = v.mtilde[k] * W[k];
        Matrix a = top(W[k], v.fibers[g1]), b = bottom(W[k], v.fibers[g1]);
        if (v.stilde[g12] * prod != v.stilde[g2] * b || v.ttilde[g12] * prod != v.ttilde[g1] * a)
            bad.push_back({"SourceTargetNotLinearOverBase", arrows(G, {g1, g2}), ""});
        if (rank(prod) != v.fibers[g12]) bad.push_back({"MultiplicationNotSurjective", arrows(G, {g1, g2}), ""});
    }

    for (ObjectId x = 0; x < G.num_objects(); ++x) {
        ArrowId u = G.unit(x);
        if (!(v.stilde[u] * v.utilde[x]).is_identity() || !(v.ttilde[u] * v.utilde[x]).is_identity())
            bad.push_back({"UnitFails", {G.object_name(x)}, "unit is not a section of source and target"});
    }
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        ObjectId s = G.src(g), t = G.tgt(g);
        Matrix I = Matrix::identity(v.fibers[g], f);
        if (!multiply(v, G.unit(t), g, v.utilde[t] * v.ttilde[g], I).is_identity() ||
            !multiply(v, g, G.unit(s), I, v.utilde[s] * v.stilde[g]).is_identity())
            bad.push_back({"UnitFails", arrows(G, {g}), "unit does not act trivially"});

        ArrowId gi = G.inv(g);
        const Matrix& i = v.itilde[g];
        bool ok = v.stilde[gi] * i == v.ttilde[g] && v.ttilde[gi] * i == v.stilde[g] &&
                  multiply(v, g, gi, I, i) == v.utilde[t] * v.ttilde[g] &&
                  multiply(v, gi, g, i, I) == v.utilde[s] * v.stilde[g];
        if (!ok) bad.push_back({"InverseFails", arrows(G, {g}), ""});
    }

    const Nerve& n3 = G.nerve(3);
    for (std::size_t k = 0; k < n3.size(); ++k) {
        auto t = n3.tuple(k);
        ArrowId g1 = t[0], g2 = t[1], g3 = t[2];
        std::size_t n1 = v.fibers[g1], n2f = v.fibers[g2], n3f = v.fibers[g3];
        Matrix c(v.E.dim(G.src(g1)) + v.E.dim(G.src(g2)), n1 + n2f + n3f, f);
        c.set_block(0, 0, v.stilde[g1]);
        c.set_block(0, n1, -v.ttilde[g2]);
        c.set_block(v.E.dim(G.src(g1)), n1, v.stilde[g2]);
        c.set_block(v.E.dim(G.src(g1)), n1 + n2f, -v.ttilde[g3]);
        Matrix w3 = kernel(c);
        Matrix a = w3.block(0, 0, n1, w3.cols()), b = w3.block(n1, 0, n2f, w3.cols()),
               d = w3.block(n1 + n2f, 0, n3f, w3.cols());
        Matrix left = multiply(v, G.compose(g1, g2), g3, multiply(v, g1, g2, a, b), d);
        Matrix right = multiply(v, g1, G.compose(g2, g3), a, multiply(v, g2, g3, b, d));
        if (left != right) bad.push_back({"NotAssociative", arrows(G, {g1, g2, g3}), ""});
    }
    return bad;
}

const VBGroupoid& validate_vbg(const VBGroupoid& v) {
    auto bad = check_vbg(v);
    if (!bad.empty()) throw ValidationError("not a VB-groupoid", std::move(bad));
    return v;
}

CoreData compute_core(const VBGroupoid& v, Side side) {
    const FiniteGroupoid& G = v.G;
    CoreData c;
    c.side = side;
    c.bundle.field = v.field();
    for (ArrowId g = 0; g < G.num_arrows(); ++g)
        c.vertical.push_back(kernel(side == Side::right ? v.stilde[g] : v.ttilde[g]));
    for (ObjectId x = 0; x < G.num_objects(); ++x) {
        c.core.push_back(c.vertical[G.unit(x)]);
        c.bundle.dims.push_back(c.core.back().cols());
    }
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        if (side == Side::right) {
            const Matrix& K = c.core[G.tgt(g)];
            c.j.push_back(multiply(v, G.unit(G.tgt(g)), g, K, zeros(v.fibers[g], K.cols(), v.field())));
        } else {
            const Matrix& K = c.core[G.src(g)];
            c.j.push_back(multiply(v, g, G.unit(G.src(g)), zeros(v.fibers[g], K.cols(), v.field()), K));
        }
    }
    return c;
}

CoreInvolution core_involution(const VBGroupoid& v) {
    CoreData r = compute_core(v, Side::right), l = compute_core(v, Side::left);
    CoreInvolution out;
    for (ObjectId x = 0; x < v.G.num_objects(); ++x) {
        ArrowId u = v.G.unit(x);
        Matrix I = Matrix::identity(v.fibers[u], v.field());
        out.to_left.push_back(solve(l.core[x], (I - v.utilde[x] * v.ttilde[u]) * r.core[x]).value());
        out.to_right.push_back(solve(r.core[x], (I - v.utilde[x] * v.stilde[u]) * l.core[x]).value());
    }
    return out;
}

HorizontalLift choose_lift(const VBGroupoid& v, const TransformationCochain* sigma) {
    const FiniteGroupoid& G = v.G;
    HorizontalLift h;
    for (ArrowId g = 0; g < G.num_arrows(); ++g)
        h.h.push_back(G.is_unit(g) ? v.utilde[G.src(g)] : right_inverse(v.stilde[g]));
    if (sigma) {
        require(sigma->degree == 1 && sigma->values.size() == G.num_arrows(), "lift offset must be a 1-cochain");
        CoreData core = compute_core(v);
        for (ArrowId g = 0; g < G.num_arrows(); ++g) {
            if (G.is_unit(g) && !sigma->values[g].is_zero())
                throw Error("NotNormalizedSigma", "lift offset does not vanish at " + G.arrow_name(g));
            h.h[g] += core.j[g] * sigma->values[g];
        }
    }
    return h;
}

std::vector<Violation> check_lift(const VBGroupoid& v, const HorizontalLift& h) {
    const FiniteGroupoid& G = v.G;
    require(h.h.size() == G.num_arrows(), "lift needs one matrix per arrow");
    std::vector<Violation> bad;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        require(h.h[g].rows() == v.fibers[g] && h.h[g].cols() == v.E.dim(G.src(g)), "lift shape at " + G.arrow_name(g));
        if (!(v.stilde[g] * h.h[g]).is_identity()) bad.push_back({"LiftNotSection", arrows(G, {g}), ""});
    }
    for (ObjectId x = 0; x < G.num_objects(); ++x)
        if (h.h[G.unit(x)] != v.utilde[x]) bad.push_back({"LiftNotUnital", {G.object_name(x)}, ""});
    return bad;
}

TransformationCochain lift_difference(const VBGroupoid& v, const HorizontalLift& h, const HorizontalLift& h2) {
    CoreData core = compute_core(v);
    TransformationCochain sigma{1, {}};
    for (ArrowId g = 0; g < v.G.num_arrows(); ++g) {
        auto s = solve(core.j[g], h2.h[g] - h.h[g]);
        if (!s) throw Error("NotVertical", "lifts differ by a non-vertical amount at " + v.G.arrow_name(g));
        sigma.values.push_back(std::move(*s));
    }
    return sigma;
}

Ruth2 extract_components(const VBGroupoid& v, const HorizontalLift& h) {
    const FiniteGroupoid& G = v.G;
    Field f = v.field();
    CoreData core = compute_core(v);
    const auto& K = core.core;

    std::vector<Matrix> partial;
    for (ObjectId x = 0; x < G.num_objects(); ++x) partial.push_back(v.ttilde[G.unit(x)] * K[x]);

    // Right translation by the zero over g^{-1}, back into core coordinates.
    auto to_core = [&](ArrowId g, const Matrix& y) {
        ArrowId gi = G.inv(g);
        Matrix z = multiply(v, g, gi, y, zeros(v.fibers[gi], y.cols(), f));
        return solve(K[G.tgt(g)], z).value();
    };

    std::vector<Matrix> dc, de;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        ObjectId s = G.src(g);
        de.push_back(v.ttilde[g] * h.h[g]);
        dc.push_back(to_core(g, multiply(v, g, G.unit(s), h.h[g] * partial[s], K[s])));
    }
    QuasiAction deltaE(G, v.E, std::move(de));
    const Nerve& n2 = G.nerve(2);
    TransformationCochain omega{2, {}};
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        ArrowId g1 = t[0], g2 = t[1], g12 = G.compose(g1, g2);
        Matrix defect = h.h[g12] - multiply(v, g1, g2, h.h[g1] * deltaE[g2], h.h[g2]);
        omega.values.push_back(to_core(g12, defect));
    }
    return Ruth2{G, core.bundle, v.E, std::move(partial), QuasiAction(G, core.bundle, std::move(dc)),
                 std::move(deltaE), std::move(omega)};
}

VBGroupoid build_from_ruth(const Ruth2& r, bool check) {
    if (check) {
        auto bad = check_ruth2(r);
        if (!bad.empty()) throw Error("InvalidRuth", "input is not a 2-term representation up to homotopy", bad);
    }
    const FiniteGroupoid& G = r.G;
    Field f = r.E.field;
    VBGroupoid v{G, r.E, {}, {}, {}, {}, {}, {}, "build"};
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        ObjectId s = G.src(g), t = G.tgt(g);
        std::size_t ct = r.C.dim(t), es = r.E.dim(s);
        v.fibers.push_back(ct + es);
        v.stilde.push_back(Matrix::hstack(zeros(es, ct, f), Matrix::identity(es, f)));
        v.ttilde.push_back(Matrix::hstack(r.partial[t], r.deltaE[g]));
        ArrowId gi = G.inv(g);
        const std::array<ArrowId, 2> back{gi, g};
        const Matrix& w = r.omega.values[G.nerve(2).index(back)];
        Matrix i(r.C.dim(s) + r.E.dim(t), ct + es, f);
        i.set_block(0, 0, -r.deltaC[gi]);
        i.set_block(0, ct, w);
        i.set_block(r.C.dim(s), 0, r.partial[t]);
        i.set_block(r.C.dim(s), ct, r.deltaE[g]);
        v.itilde.push_back(std::move(i));
    }
    for (ObjectId x = 0; x < G.num_objects(); ++x)
        v.utilde.push_back(Matrix::vstack(zeros(r.C.dim(x), r.E.dim(x), f), Matrix::identity(r.E.dim(x), f)));
    const Nerve& n2 = G.nerve(2);
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        ArrowId g1 = t[0], g2 = t[1];
        std::size_t c1 = r.C.dim(G.tgt(g1)), e1 = r.E.dim(G.src(g1)), c2 = r.C.dim(G.tgt(g2)),
                    e2 = r.E.dim(G.src(g2));
        Matrix m(c1 + e2, c1 + e1 + c2 + e2, f);
        m.set_block(0, 0, Matrix::identity(c1, f));
        m.set_block(0, c1 + e1, r.deltaC[g1]);
        m.set_block(0, c1 + e1 + c2, -r.omega.values[k]);
        m.set_block(c1, c1 + e1 + c2, Matrix::identity(e2, f));
        v.mtilde.push_back(std::move(m));
    }
    return v;
}

HorizontalLift canonical_lift(const Ruth2& r) {
    const FiniteGroupoid& G = r.G;
    HorizontalLift h;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        std::size_t es = r.E.dim(G.src(g));
        h.h.push_back(Matrix::vstack(zeros(r.C.dim(G.tgt(g)), es, r.E.field), Matrix::identity(es, r.E.field)));
    }
    return h;
}

std::vector<Matrix> decomposition_isomorphism(const VBGroupoid& v, const HorizontalLift& h) {
    CoreData core = compute_core(v);
    std::vector<Matrix> phi;
    for (ArrowId g = 0; g < v.G.num_arrows(); ++g) phi.push_back(Matrix::hstack(core.j[g], h.h[g]));
    return phi;
}

VBGroupoid trivial_vbg(const FiniteGroupoid& G, const VectorBundle& E) {
    Field f = E.field;
    VBGroupoid v{G, E, {}, {}, {}, {}, {}, {}, "trivial"};
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        std::size_t s = E.dim(G.src(g)), t = E.dim(G.tgt(g));
        v.fibers.push_back(t + s);
        v.stilde.push_back(Matrix::hstack(zeros(s, t, f), Matrix::identity(s, f)));
        v.ttilde.push_back(Matrix::hstack(Matrix::identity(t, f), zeros(t, s, f)));
        Matrix swap(s + t, t + s, f);
        swap.set_block(0, t, Matrix::identity(s, f));
        swap.set_block(s, 0, Matrix::identity(t, f));
        v.itilde.push_back(std::move(swap));
    }
    for (ObjectId x = 0; x < G.num_objects(); ++x)
        v.utilde.push_back(Matrix::vstack(Matrix::identity(E.dim(x), f), Matrix::identity(E.dim(x), f)));
    const Nerve& n2 = G.nerve(2);
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        std::size_t a1 = E.dim(G.tgt(t[0])), b1 = E.dim(G.src(t[0])), a2 = E.dim(G.tgt(t[1])),
                    b2 = E.dim(G.src(t[1]));
        Matrix m(a1 + b2, a1 + b1 + a2 + b2, f);
        m.set_block(0, 0, Matrix::identity(a1, f));
        m.set_block(a1, a1 + b1 + a2, Matrix::identity(b2, f));
        v.mtilde.push_back(std::move(m));
    }
    return v;
}

VBGroupoid action_vbg(const QuasiAction& delta) {
    if (!delta.is_representation()) throw Error("NotARepresentation", "action VB-groupoid needs a flat unital action");
    const FiniteGroupoid& G = delta.groupoid();
    const VectorBundle& E = delta.bundle();
    Field f = E.field;
    VBGroupoid v{G, E, {}, {}, {}, {}, {}, {}, "action"};
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        std::size_t s = E.dim(G.src(g));
        v.fibers.push_back(s);
        v.stilde.push_back(Matrix::identity(s, f));
        v.ttilde.push_back(delta[g]);
        v.itilde.push_back(delta[g]);
    }
    for (ObjectId x = 0; x < G.num_objects(); ++x) v.utilde.push_back(Matrix::identity(E.dim(x), f));
    const Nerve& n2 = G.nerve(2);
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        std::size_t e1 = E.dim(G.src(t[0])), e2 = E.dim(G.src(t[1]));
        v.mtilde.push_back(Matrix::hstack(zeros(e2, e1, f), Matrix::identity(e2, f)));
    }
    return v;
}

VBGroupoid semidirect_vbg(const QuasiAction& delta) {
    if (!delta.is_representation())
        throw Error("NotARepresentation", "semidirect VB-groupoid needs a flat unital action");
    const FiniteGroupoid& G = delta.groupoid();
    const VectorBundle& C = delta.bundle();
    Field f = C.field;
    VBGroupoid v{G, VectorBundle{std::vector<std::size_t>(G.num_objects(), 0), f}, {}, {}, {}, {}, {}, {},
                 "semidirect"};
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        std::size_t t = C.dim(G.tgt(g));
        v.fibers.push_back(t);
        v.stilde.push_back(zeros(0, t, f));
        v.ttilde.push_back(zeros(0, t, f));
        v.itilde.push_back(-delta[G.inv(g)]);
    }
    for (ObjectId x = 0; x < G.num_objects(); ++x) v.utilde.push_back(zeros(C.dim(x), 0, f));
    const Nerve& n2 = G.nerve(2);
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        v.mtilde.push_back(Matrix::hstack(Matrix::identity(C.dim(G.tgt(t[0])), f), delta[t[0]]));
    }
    return v;
}

VBGroupoid direct_sum(const VBGroupoid& a, const VBGroupoid& b) {
    require(a.G == b.G, "direct sum over different groupoids");
    const FiniteGroupoid& G = a.G;
    Field f = a.field();
    VBGroupoid v{G, direct_sum(a.E, b.E), {}, {}, {}, {}, {}, {}, "direct-sum"};
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        v.fibers.push_back(a.fibers[g] + b.fibers[g]);
        v.stilde.push_back(Matrix::diag(a.stilde[g], b.stilde[g]));
        v.ttilde.push_back(Matrix::diag(a.ttilde[g], b.ttilde[g]));
        v.itilde.push_back(Matrix::diag(a.itilde[g], b.itilde[g]));
    }
    for (ObjectId x = 0; x < G.num_objects(); ++x) v.utilde.push_back(Matrix::diag(a.utilde[x], b.utilde[x]));
    const Nerve& n2 = G.nerve(2);
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        std::size_t a1 = a.fibers[t[0]], b1 = b.fibers[t[0]], a2 = a.fibers[t[1]];
        const Matrix &ma = a.mtilde[k], &mb = b.mtilde[k];
        Matrix m(ma.rows() + mb.rows(), ma.cols() + mb.cols(), f);
        m.set_block(0, 0, ma.block(0, 0, ma.rows(), a1));
        m.set_block(0, a1 + b1, ma.block(0, a1, ma.rows(), a2));
        m.set_block(ma.rows(), a1, mb.block(0, 0, mb.rows(), b1));
        m.set_block(ma.rows(), a1 + b1 + a2, mb.block(0, b1, mb.rows(), mb.cols() - b1));
        v.mtilde.push_back(std::move(m));
    }
    return v;
}

std::vector<Violation> check_isomorphism(const VBGroupoid& a, const VBGroupoid& b, const std::vector<Matrix>& phi,
                                         const std::vector<Matrix>* side_map) {
    require(a.G == b.G, "isomorphism between VB-groupoids over different groupoids");
    const FiniteGroupoid& G = a.G;
    require(phi.size() == G.num_arrows(), "isomorphism needs one matrix per arrow");
    std::vector<Matrix> psi;
    if (side_map) {
        psi = *side_map;
    } else {
        require(a.E == b.E, "side bundles differ");
        for (ObjectId x = 0; x < G.num_objects(); ++x) psi.push_back(Matrix::identity(a.E.dim(x), a.field()));
    }
    std::vector<Violation> bad;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        require(phi[g].rows() == b.fibers[g] && phi[g].cols() == a.fibers[g], "isomorphism shape at " + G.arrow_name(g));
        if (!inverse(phi[g])) bad.push_back({"NotInvertible", arrows(G, {g}), ""});
        if (b.stilde[g] * phi[g] != psi[G.src(g)] * a.stilde[g])
            bad.push_back({"SourceMismatch", arrows(G, {g}), ""});
        if (b.ttilde[g] * phi[g] != psi[G.tgt(g)] * a.ttilde[g])
            bad.push_back({"TargetMismatch", arrows(G, {g}), ""});
        if (phi[G.inv(g)] * a.itilde[g] != b.itilde[g] * phi[g])
            bad.push_back({"InverseMismatch", arrows(G, {g}), ""});
    }
    for (ObjectId x = 0; x < G.num_objects(); ++x) {
        if (!inverse(psi[x])) bad.push_back({"NotInvertible", {G.object_name(x)}, "side map"});
        if (phi[G.unit(x)] * a.utilde[x] != b.utilde[x] * psi[x])
            bad.push_back({"UnitMismatch", {G.object_name(x)}, ""});
    }
    const Nerve& n2 = G.nerve(2);
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        ArrowId g1 = t[0], g2 = t[1];
        Matrix W = compatible_pairs(a, k);
        Matrix x = top(W, a.fibers[g1]), y = bottom(W, a.fibers[g1]);
        if (phi[G.compose(g1, g2)] * (a.mtilde[k] * W) != multiply(b, g1, g2, phi[g1] * x, phi[g2] * y))
            bad.push_back({"MultiplicationMismatch", arrows(G, {g1, g2}), ""});
    }
    return bad;
}

namespace {

// Linear equations in the entries of a family of unknown matrices.
class LinearSystem {
public:
    LinearSystem(std::vector<std::pair<std::size_t, std::size_t>> shapes, Field f) : shapes_(std::move(shapes)), f_(f) {
        for (auto [r, c] : shapes_) {
            offset_.push_back(unknowns_);
            unknowns_ += r * c;
        }
    }

    struct Term {
        Matrix left;
        std::size_t var;
        Matrix right;
    };

    // sum of left * X_var * right == rhs
    void add(const std::vector<Term>& terms, const Matrix& rhs) {
        for (std::size_t r = 0; r < rhs.rows(); ++r)
            for (std::size_t c = 0; c < rhs.cols(); ++c) {
                Vector row(unknowns_ + 1, Scalar(0).in(f_));
                for (const Term& t : terms) {
                    auto [nr, nc] = shapes_[t.var];
                    for (std::size_t p = 0; p < nr; ++p) {
                        if (t.left(r, p).is_zero()) continue;
                        for (std::size_t q = 0; q < nc; ++q)
                            if (!t.right(q, c).is_zero())
                                row[offset_[t.var] + p * nc + q] += t.left(r, p) * t.right(q, c);
                    }
                }
                row[unknowns_] = rhs(r, c);
                if (!is_zero(row)) rows_.push_back(std::move(row));
            }
    }

    std::optional<std::vector<Matrix>> solve_all() const {
        Matrix a(rows_.size(), unknowns_, f_);
        Vector b;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            for (std::size_t j = 0; j < unknowns_; ++j) a(i, j) = rows_[i][j];
            b.push_back(rows_[i][unknowns_]);
        }
        auto x = solve(a, b);
        if (!x) return std::nullopt;
        std::vector<Matrix> out;
        for (std::size_t v = 0; v < shapes_.size(); ++v) {
            auto [nr, nc] = shapes_[v];
            Matrix m(nr, nc, f_);
            for (std::size_t p = 0; p < nr; ++p)
                for (std::size_t q = 0; q < nc; ++q) m(p, q) = (*x)[offset_[v] + p * nc + q];
            out.push_back(std::move(m));
        }
        return out;
    }

private:
    std::vector<std::pair<std::size_t, std::size_t>> shapes_;
    Field f_;
    std::vector<std::size_t> offset_;
    std::size_t unknowns_ = 0;
    std::vector<Vector> rows_;
};

}  // namespace

std::optional<std::vector<Matrix>> find_isomorphism(const VBGroupoid& a, const VBGroupoid& b) {
    require(a.G == b.G && a.E == b.E, "VB-groupoids over different bases");
    const FiniteGroupoid& G = a.G;
    Field f = a.field();
    if (a.fibers != b.fibers) return std::nullopt;
    CoreData ca = compute_core(a), cb = compute_core(b);
    if (ca.bundle.dims != cb.bundle.dims) return std::nullopt;

    std::vector<std::pair<std::size_t, std::size_t>> shapes;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) shapes.emplace_back(b.fibers[g], a.fibers[g]);
    LinearSystem sys(shapes, f);
    auto I = [&](std::size_t n) { return Matrix::identity(n, f); };
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        std::size_t n = a.fibers[g];
        sys.add({{b.stilde[g], g, I(n)}}, a.stilde[g]);
        sys.add({{b.ttilde[g], g, I(n)}}, a.ttilde[g]);
    }
    for (ObjectId x = 0; x < G.num_objects(); ++x) {
        ArrowId u = G.unit(x);
        sys.add({{I(b.fibers[u]), u, a.utilde[x]}}, b.utilde[x]);
        sys.add({{I(b.fibers[u]), u, ca.core[x]}}, cb.core[x]);
    }
    const Nerve& n2 = G.nerve(2);
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        ArrowId g1 = t[0], g2 = t[1], g12 = G.compose(g1, g2);
        Matrix W = compatible_pairs(a, k);
        Matrix x = top(W, a.fibers[g1]), y = bottom(W, a.fibers[g1]);
        const Matrix& m = b.mtilde[k];
        Matrix m1 = m.block(0, 0, m.rows(), b.fibers[g1]), m2 = m.block(0, b.fibers[g1], m.rows(), b.fibers[g2]);
        sys.add({{I(b.fibers[g12]), g12, a.mtilde[k] * W}, {-m1, g1, x}, {-m2, g2, y}},
                zeros(b.fibers[g12], W.cols(), f));
    }
    auto phi = sys.solve_all();
    if (!phi || !check_isomorphism(a, b, *phi).empty()) return std::nullopt;
    return phi;
}

namespace {

Matrix normalized_span(const VBGroupoid& v, const FatElement& x) {
    require(x.H.rows() == v.fibers[x.g], "fat element has wrong ambient dimension");
    auto inv = inverse(v.stilde[x.g] * x.H);
    if (!inv) throw Error("NotTransverse", "subspace is not complementary to the vertical space over " + v.G.arrow_name(x.g));
    return x.H * *inv;
}

}  // namespace

FatElement fat_section(const VBGroupoid& v, const HorizontalLift& h, ArrowId g) {
    (void)v;
    return {g, h.h[g]};
}

Matrix fat_psi_e(const VBGroupoid& v, const FatElement& x) { return v.ttilde[x.g] * normalized_span(v, x); }

Matrix fat_psi_c(const VBGroupoid& v, const CoreData& core, const FatElement& x) {
    const FiniteGroupoid& G = v.G;
    ArrowId g = x.g, gi = G.inv(g);
    ObjectId s = G.src(g);
    const Matrix& K = core.core[s];
    Matrix lift = normalized_span(v, x) * (v.ttilde[G.unit(s)] * K);
    Matrix y = multiply(v, g, G.unit(s), lift, K);
    Matrix z = multiply(v, g, gi, y, zeros(v.fibers[gi], y.cols(), v.field()));
    return solve(core.core[G.tgt(g)], z).value();
}

FatElement fat_mult(const VBGroupoid& v, const FatElement& a, const FatElement& b) {
    Matrix la = normalized_span(v, a), lb = normalized_span(v, b);
    return {v.G.compose(a.g, b.g), multiply(v, a.g, b.g, la * (v.ttilde[b.g] * lb), lb)};
}

Matrix fat_defect(const VBGroupoid& v, const CoreData& core, const HorizontalLift& h, ArrowId g1, ArrowId g2) {
    FatElement prod = fat_mult(v, fat_section(v, h, g1), fat_section(v, h, g2));
    Matrix d = h.h[prod.g] - normalized_span(v, prod);
    auto c = solve(core.j[prod.g], d);
    if (!c) throw Error("NotVertical", "section defect is not vertical");
    return *c;
}

}  // namespace vbg
