#include "vbg/ruth.hpp"

namespace vbg {
namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error("ShapeMismatch", what);
}

std::vector<std::string> names(const FiniteGroupoid& G, std::span<const ArrowId> t) {
    std::vector<std::string> out;
    for (ArrowId g : t) out.push_back(G.arrow_name(g));
    return out;
}

void check_shapes(const Ruth2& r) {
    const FiniteGroupoid& G = r.G;
    require(r.C.dims.size() == G.num_objects() && r.E.dims.size() == G.num_objects(), "bundles over the wrong base");
    require(r.partial.size() == G.num_objects(), "one partial matrix per object expected");
    for (ObjectId x = 0; x < G.num_objects(); ++x)
        require(r.partial[x].rows() == r.E.dim(x) && r.partial[x].cols() == r.C.dim(x),
                "partial has wrong shape at " + G.object_name(x));
    require(r.deltaC.bundle() == r.C && r.deltaE.bundle() == r.E, "quasi-actions act on the wrong bundles");
    require(r.omega.degree == 2 && r.omega.values.size() == G.nerve(2).size(), "omega must be a 2-cochain");
    const Nerve& n2 = G.nerve(2);
    for (std::size_t k = 0; k < n2.size(); ++k)
        require(r.omega.values[k].rows() == r.C.dim(n2.first_vertex(k)) &&
                    r.omega.values[k].cols() == r.E.dim(n2.last_vertex(k)),
                "omega has wrong shape at " + G.tuple_key(2, k));
}

const Matrix& omega_at(const Ruth2& r, ArrowId g1, ArrowId g2) {
    const ArrowId t[2] = {g1, g2};
    return r.omega.values[r.G.nerve(2).index(t)];
}

}  // namespace

std::vector<Violation> check_ruth2(const Ruth2& r) {
    check_shapes(r);
    const FiniteGroupoid& G = r.G;
    std::vector<Violation> bad;
    for (ObjectId x = 0; x < G.num_objects(); ++x) {
        ArrowId u = G.unit(x);
        if (!r.deltaC[u].is_identity()) bad.push_back({"NotUnital", {"deltaC", G.object_name(x)}, ""});
        if (!r.deltaE[u].is_identity()) bad.push_back({"NotUnital", {"deltaE", G.object_name(x)}, ""});
    }
    const Nerve& n2 = G.nerve(2);
    for (std::size_t k = 0; k < n2.size(); ++k)
        if (n2.degenerate(k) && !r.omega.values[k].is_zero())
            bad.push_back({"OmegaNotNormalized", names(G, n2.tuple(k)), ""});

    for (ArrowId g = 0; g < G.num_arrows(); ++g)
        if (r.deltaE[g] * r.partial[G.src(g)] != r.partial[G.tgt(g)] * r.deltaC[g])
            bad.push_back({"Fails4eq1", {G.arrow_name(g)}, ""});
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        ArrowId g1 = t[0], g2 = t[1], g12 = G.compose(g1, g2);
        const Matrix& w = r.omega.values[k];
        if (!(r.deltaC[g1] * r.deltaC[g2] - r.deltaC[g12] + w * r.partial[G.src(g2)]).is_zero())
            bad.push_back({"Fails4eq2", names(G, t), ""});
        if (!(r.deltaE[g1] * r.deltaE[g2] - r.deltaE[g12] + r.partial[G.tgt(g1)] * w).is_zero())
            bad.push_back({"Fails4eq3", names(G, t), ""});
    }
    const Nerve& n3 = G.nerve(3);
    for (std::size_t k = 0; k < n3.size(); ++k) {
        auto t = n3.tuple(k);
        ArrowId g1 = t[0], g2 = t[1], g3 = t[2];
        Matrix lhs = r.deltaC[g1] * omega_at(r, g2, g3) - omega_at(r, G.compose(g1, g2), g3) +
                     omega_at(r, g1, G.compose(g2, g3)) - omega_at(r, g1, g2) * r.deltaE[g3];
        if (!lhs.is_zero()) bad.push_back({"Fails4eq4", names(G, t), ""});
    }
    return bad;
}

const Ruth2& validate_ruth2(const Ruth2& r) {
    auto bad = check_ruth2(r);
    if (!bad.empty()) throw ValidationError("not a 2-term representation up to homotopy", std::move(bad));
    return r;
}

TransformationCochain curvature(const QuasiAction& delta) {
    const FiniteGroupoid& G = delta.groupoid();
    const Nerve& n2 = G.nerve(2);
    TransformationCochain w{2, {}};
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        w.values.push_back(delta[G.compose(t[0], t[1])] - delta[t[0]] * delta[t[1]]);
    }
    return w;
}

Ruth2 type1_ruth(const QuasiAction& delta) {
    const FiniteGroupoid& G = delta.groupoid();
    Ruth2 r{G, delta.bundle(), delta.bundle(), {}, delta, delta, curvature(delta)};
    for (ObjectId x = 0; x < G.num_objects(); ++x) r.partial.push_back(Matrix::identity(r.E.dim(x), r.E.field));
    return r;
}

Ruth2 type0_ruth(const QuasiAction& dC, const QuasiAction& dE, const TransformationCochain& omega) {
    const FiniteGroupoid& G = dC.groupoid();
    Ruth2 r{G, dC.bundle(), dE.bundle(), {}, dC, dE, omega};
    for (ObjectId x = 0; x < G.num_objects(); ++x) r.partial.emplace_back(r.E.dim(x), r.C.dim(x), r.E.field);
    return r;
}

QuasiAction direct_sum(const QuasiAction& a, const QuasiAction& b) {
    std::vector<Matrix> maps;
    for (ArrowId g = 0; g < a.groupoid().num_arrows(); ++g) maps.push_back(Matrix::diag(a[g], b[g]));
    return QuasiAction(a.groupoid(), direct_sum(a.bundle(), b.bundle()), std::move(maps));
}

Ruth2 direct_sum(const Ruth2& a, const Ruth2& b) {
    require(a.G == b.G, "direct sum over different groupoids");
    Ruth2 r{a.G, direct_sum(a.C, b.C), direct_sum(a.E, b.E), {}, direct_sum(a.deltaC, b.deltaC),
            direct_sum(a.deltaE, b.deltaE), {2, {}}};
    for (std::size_t x = 0; x < a.partial.size(); ++x) r.partial.push_back(Matrix::diag(a.partial[x], b.partial[x]));
    for (std::size_t k = 0; k < a.omega.values.size(); ++k)
        r.omega.values.push_back(Matrix::diag(a.omega.values[k], b.omega.values[k]));
    return r;
}

CochainOperator operator_from_quasiaction(const QuasiAction& delta, Parity parity) {
    return [delta, parity](const VectorCochain& x) {
        VectorCochain y = vector_coboundary(delta, x);
        return parity == Parity::even ? y : scale(Scalar(-1), y);
    };
}

QuasiAction quasiaction_from_operator(const FiniteGroupoid& G, const VectorBundle& E, const CochainOperator& D,
                                      Parity parity) {
    Scalar sgn = parity == Parity::even ? Scalar(1) : Scalar(-1);
    std::vector<Matrix> maps;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) maps.emplace_back(E.dim(G.tgt(g)), E.dim(G.src(g)), E.field);

    std::vector<Violation> bad;
    for (ObjectId x = 0; x < G.num_objects(); ++x) {
        for (std::size_t i = 0; i < E.dim(x); ++i) {
            VectorCochain eps = zero_cochain(G, E, 0);
            eps.values[x] = unit_vector(E.dim(x), i, E.field);
            VectorCochain d_eps = D(eps);
            require(d_eps.degree == 1 && d_eps.values.size() == G.num_arrows(), "operator must raise degree by one");
            for (ArrowId g = 0; g < G.num_arrows(); ++g) {
                if (G.src(g) != x) continue;
                maps[g].set_col(i, add(scale(sgn, d_eps.values[g]), eps.values[G.tgt(g)]));
            }
            // Leibniz against indicator functions on objects.
            for (ObjectId y = 0; y < G.num_objects(); ++y) {
                ScalarCochain f = zero_scalar_cochain(G, 0, E.field);
                f.values[y] = Scalar(1).in(E.field);
                VectorCochain lhs = D(star_product(G, eps, f));
                VectorCochain rhs = add(star_product(G, d_eps, f),
                                        scale(sgn, star_product(G, eps, scalar_coboundary(G, f))));
                if (!is_zero(sub(lhs, rhs)))
                    bad.push_back({"NotLeibniz", {G.object_name(x), std::to_string(i), G.object_name(y)},
                                   "D(eps * f) != D(eps) * f +- eps * df"});
            }
        }
    }
    if (!bad.empty()) throw ValidationError("operator is not a derivation", std::move(bad));
    return QuasiAction(G, E, std::move(maps));
}

MixedCochain zero_mixed(const Ruth2& r, int p) {
    MixedCochain x{p, {p, {}}, zero_cochain(r.G, r.C, p + 1)};
    if (p >= 0) x.e = zero_cochain(r.G, r.E, p);
    return x;
}

std::size_t mixed_dim(const Ruth2& r, int p) {
    return (p >= 0 ? cochain_dim(r.G, r.E, p) : 0) + cochain_dim(r.G, r.C, p + 1);
}

Vector flatten(const MixedCochain& x) {
    Vector v = flatten(x.e), w = flatten(x.c);
    v.insert(v.end(), w.begin(), w.end());
    return v;
}

MixedCochain unflatten_mixed(const Ruth2& r, int p, const Vector& v) {
    std::size_t ne = p >= 0 ? cochain_dim(r.G, r.E, p) : 0;
    require(v.size() == mixed_dim(r, p), "mixed cochain has wrong length");
    MixedCochain x{p, {p, {}}, {}};
    if (p >= 0) x.e = unflatten(r.G, r.E, p, Vector(v.begin(), v.begin() + static_cast<long>(ne)));
    x.c = unflatten(r.G, r.C, p + 1, Vector(v.begin() + static_cast<long>(ne), v.end()));
    return x;
}

std::vector<std::size_t> normalized_mixed_coordinates(const Ruth2& r, int p) {
    std::vector<std::size_t> idx;
    std::size_t ne = 0;
    if (p >= 0) {
        idx = normalized_coordinates(r.G, r.E, p);
        ne = cochain_dim(r.G, r.E, p);
    }
    for (std::size_t i : normalized_coordinates(r.G, r.C, p + 1)) idx.push_back(ne + i);
    return idx;
}

bool is_normalized(const FiniteGroupoid& G, const MixedCochain& x) {
    return (x.degree < 0 || is_normalized(G, x.e)) && is_normalized(G, x.c);
}

MixedCochain star_product(const FiniteGroupoid& G, const MixedCochain& x, const ScalarCochain& f) {
    MixedCochain y{x.degree + f.degree, {x.degree + f.degree, {}}, star_product(G, x.c, f)};
    if (x.degree >= 0) y.e = star_product(G, x.e, f);
    return y;
}

MixedCochain total_operator_apply(const Ruth2& r, const MixedCochain& x) {
    const FiniteGroupoid& G = r.G;
    int p = x.degree;
    const Nerve& n = G.nerve(p + 1);
    require(x.c.degree == p + 1 && x.c.values.size() == n.size(), "mixed cochain has a malformed C part");

    VectorCochain e{p + 1, {}};
    for (std::size_t k = 0; k < n.size(); ++k) e.values.push_back(r.partial[n.first_vertex(k)] * x.c.values[k]);
    VectorCochain c = scale(Scalar(-1), vector_coboundary(r.deltaC, x.c));
    if (p >= 0) {
        e = add(e, vector_coboundary(r.deltaE, x.e));
        c = add(c, transformation_apply(G, r.omega, r.C, x.e));
    }
    return {p + 1, std::move(e), std::move(c)};
}

MixedCochain gauge_operator_apply(const Ruth2& r, const TransformationCochain& sigma, const MixedCochain& x,
                                  const Scalar& coef) {
    if (x.degree < 0) return x;
    MixedCochain y = x;
    y.c = add(x.c, scale(coef, transformation_apply(r.G, sigma, r.C, x.e)));
    return y;
}

OperatorCheck check_total_operator(const Ruth2& r, int max_degree) {
    check_shapes(r);
    OperatorCheck out;
    Field f = r.E.field;
    for (int p = -1; p <= max_degree; ++p) {
        std::size_t n = mixed_dim(r, p);
        std::vector<bool> normal(n, false);
        for (std::size_t i : normalized_mixed_coordinates(r, p)) normal[i] = true;
        for (std::size_t i = 0; i < n; ++i) {
            MixedCochain x = unflatten_mixed(r, p, unit_vector(n, i, f));
            MixedCochain y = total_operator_apply(r, x);
            if (normal[i] && !is_normalized(r.G, y)) out.preserves_normalized = false;
            MixedCochain z = total_operator_apply(r, y);
            if (!is_zero(z.e) || !is_zero(z.c)) out.squares_to_zero = false;
        }
    }
    return out;
}

CochainComplex total_complex(const Ruth2& r, int max_degree, bool normalized) {
    CochainComplex c{r.E.field, {}, {}};
    for (int p = -1; p <= max_degree; ++p) {
        std::size_t in = mixed_dim(r, p), out = mixed_dim(r, p + 1);
        Matrix full = operator_matrix(in, out, r.E.field, [&](const Vector& v) {
            return flatten(total_operator_apply(r, unflatten_mixed(r, p, v)));
        });
        if (normalized) {
            auto ci = normalized_mixed_coordinates(r, p), co = normalized_mixed_coordinates(r, p + 1);
            full = full.rows_of(co).columns(ci);
        }
        if (p == -1) c.dims.push_back(full.cols());
        c.dims.push_back(full.rows());
        c.d.push_back(std::move(full));
    }
    return c;
}

Ruth2 gauge_apply(const TransformationCochain& sigma, const Ruth2& r) {
    const FiniteGroupoid& G = r.G;
    require(sigma.degree == 1 && sigma.values.size() == G.num_arrows(), "gauge must be a transformation 1-cochain");
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        require(sigma.values[g].rows() == r.C.dim(G.tgt(g)) && sigma.values[g].cols() == r.E.dim(G.src(g)),
                "gauge has wrong shape at " + G.arrow_name(g));
        if (G.is_unit(g) && !sigma.values[g].is_zero())
            throw Error("NotNormalizedSigma", "gauge does not vanish at " + G.arrow_name(g));
    }
    const auto& s = sigma.values;
    std::vector<Matrix> dc, de;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        dc.push_back(r.deltaC[g] + s[g] * r.partial[G.src(g)]);
        de.push_back(r.deltaE[g] + r.partial[G.tgt(g)] * s[g]);
    }
    const Nerve& n2 = G.nerve(2);
    TransformationCochain w{2, {}};
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        ArrowId g1 = t[0], g2 = t[1];
        w.values.push_back(r.omega.values[k] - s[g1] * r.deltaE[g2] - r.deltaC[g1] * s[g2] + s[G.compose(g1, g2)] -
                           s[g1] * r.partial[G.src(g1)] * s[g2]);
    }
    Ruth2 out{G, r.C, r.E, r.partial, QuasiAction(G, r.C, std::move(dc)), QuasiAction(G, r.E, std::move(de)),
              std::move(w)};
    return validate_ruth2(out);
}

std::optional<TransformationCochain> solve_coboundary(const QuasiAction& dE, const QuasiAction& dC,
                                                      const TransformationCochain& target) {
    const FiniteGroupoid& G = dE.groupoid();
    const VectorBundle &E = dE.bundle(), &C = dC.bundle();
    if (!is_normalized(G, target)) return std::nullopt;
    auto in = normalized_transformation_coordinates(G, E, C, 1);
    auto out = normalized_transformation_coordinates(G, E, C, 2);
    std::size_t n1 = transformation_dim(G, E, C, 1);
    Matrix d(out.size(), in.size(), E.field);
    for (std::size_t j = 0; j < in.size(); ++j) {
        Vector full = flatten(transformation_coboundary(
            dE, dC, unflatten_transformation(G, E, C, 1, unit_vector(n1, in[j], E.field))));
        for (std::size_t i = 0; i < out.size(); ++i) d(i, j) = full[out[i]];
    }
    Vector t = flatten(target), rhs;
    for (std::size_t i : out) rhs.push_back(t[i]);
    auto x = solve(d, rhs);
    if (!x) return std::nullopt;
    Vector full(n1, Scalar(0));
    for (std::size_t j = 0; j < in.size(); ++j) full[in[j]] = (*x)[j];
    return unflatten_transformation(G, E, C, 1, full);
}

Equivalence decide_equiv_type0(const Ruth2& r1, const Ruth2& r2) {
    for (const Ruth2* r : {&r1, &r2})
        for (const Matrix& m : r->partial)
            if (!m.is_zero()) throw Error("NotType0", "core-anchor is not zero");
    if (!(r1.C == r2.C) || !(r1.E == r2.E)) throw Error("ShapeMismatch", "different bundles");
    if (!(r1.deltaC == r2.deltaC)) return {false, std::nullopt, "core quasi-actions differ"};
    if (!(r1.deltaE == r2.deltaE)) return {false, std::nullopt, "side quasi-actions differ"};
    auto sigma = solve_coboundary(r1.deltaE, r1.deltaC, sub(r1.omega, r2.omega));
    if (!sigma) return {false, std::nullopt, "curvature classes differ"};
    return {true, std::move(sigma), ""};
}

}  // namespace vbg
