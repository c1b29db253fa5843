#include "vbg/duality.hpp"

#include <array>

namespace vbg {
namespace {

std::size_t pair_index(const FiniteGroupoid& G, ArrowId g1, ArrowId g2) {
    const std::array<ArrowId, 2> t{g1, g2};
    return G.nerve(2).index(t);
}

Matrix zeros(std::size_t r, std::size_t c, Field f) { return Matrix(r, c, f); }

}  // namespace

VBGroupoid dualize(const VBGroupoid& v) {
    const FiniteGroupoid& G = v.G;
    Field f = v.field();
    CoreData core = compute_core(v);
    VBGroupoid d{G, core.bundle, v.fibers, {}, {}, {}, {}, {}, "dual-of:" + v.provenance};

    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        ObjectId s = G.src(g);
        ArrowId us = G.unit(s);
        d.ttilde.push_back(core.j[g].transpose());
        Matrix inv_core = v.itilde[us] * core.core[s];
        Matrix zero_times = multiply(v, g, us, zeros(v.fibers[g], inv_core.cols(), f), inv_core);
        d.stilde.push_back(-zero_times.transpose());
        d.itilde.push_back(-v.itilde[G.inv(g)].transpose());
    }
    for (ObjectId x = 0; x < G.num_objects(); ++x) {
        ArrowId u = G.unit(x);
        Matrix I = Matrix::identity(v.fibers[u], f);
        d.utilde.push_back(solve(core.core[x], I - v.utilde[x] * v.stilde[u]).value().transpose());
    }

    const Nerve& n2 = G.nerve(2);
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        ArrowId g1 = t[0], g2 = t[1];
        Matrix B = compatible_pairs(v, k);
        Matrix M = v.mtilde[k] * B;
        if (rank(M) != M.rows())
            throw Error("MultiplicationNotSurjective", "products do not cover the fiber over " + G.tuple_key(2, k));
        d.mtilde.push_back((B * right_inverse(M)).transpose());

        // Compatible dual pairs must annihilate compatible pairs with zero product.
        Matrix dual_pairs = kernel(Matrix::hstack(d.stilde[g1], -d.ttilde[g2]));
        Matrix null_products = B * kernel(M);
        if (!(dual_pairs.transpose() * null_products).is_zero())
            throw Error("WellDefinednessFails", "dual product depends on the factorization over " + G.tuple_key(2, k));
    }
    return validate_vbg(d);
}

QuasiAction dual_representation(const QuasiAction& delta) {
    const FiniteGroupoid& G = delta.groupoid();
    std::vector<Matrix> maps;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) maps.push_back(delta[G.inv(g)].transpose());
    return QuasiAction(G, delta.bundle(), std::move(maps));
}

DoubleDual double_dual_check(const VBGroupoid& v) {
    DoubleDual out{dualize(dualize(v)), {}, {}};
    const FiniteGroupoid& G = v.G;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) out.fiber_map.push_back(Matrix::identity(v.fibers[g], v.field()));
    for (ObjectId x = 0; x < G.num_objects(); ++x)
        out.side_map.push_back(out.dd.stilde[G.unit(x)] * v.utilde[x]);
    auto bad = check_isomorphism(v, out.dd, out.fiber_map, &out.side_map);
    if (!bad.empty()) throw Error("StructureMismatch", "evaluation does not intertwine the double dual", bad);
    return out;
}

VBComplex::VBComplex(VBGroupoid v) : v_(std::move(v)), dual_(dualize(v_)), core_(compute_core(v_)) {
    const FiniteGroupoid& G = v_.G;
    const Nerve& n2 = G.nerve(2);
    Field f = v_.field();
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        ArrowId g0 = t[0], g1 = t[1];
        Matrix x1 = solve(dual_.ttilde[g1], dual_.stilde[g0]).value();
        composite_.push_back(dual_.mtilde[k] * Matrix::vstack(Matrix::identity(v_.fibers[g0], f), x1));
        completion_.push_back(std::move(x1));
        Matrix z = kernel(dual_.ttilde[g1]);
        shift_composite_.push_back(dual_.mtilde[k] * Matrix::vstack(zeros(v_.fibers[g0], z.cols(), f), z));
        shift_.push_back(std::move(z));
    }
}

std::size_t VBComplex::dim(int p) const {
    const FiniteGroupoid& G = v_.G;
    std::size_t n = 0;
    if (p == 0) {
        for (std::size_t d : core_.bundle.dims) n += d;
        return n;
    }
    const Nerve& nv = G.nerve(p);
    for (std::size_t k = 0; k < nv.size(); ++k) n += v_.fibers[nv.tuple(k)[0]];
    return n;
}

VBCochain VBComplex::zero(int p) const {
    VBCochain phi{p, {}};
    if (p == 0) {
        for (std::size_t d : core_.bundle.dims) phi.hat.push_back(zero_vector(d));
        return phi;
    }
    const Nerve& nv = v_.G.nerve(p);
    for (std::size_t k = 0; k < nv.size(); ++k) phi.hat.push_back(zero_vector(v_.fibers[nv.tuple(k)[0]]));
    return phi;
}

Vector VBComplex::flatten(const VBCochain& phi) const {
    Vector out;
    for (const Vector& x : phi.hat) out.insert(out.end(), x.begin(), x.end());
    return out;
}

VBCochain VBComplex::unflatten(int p, const Vector& x) const {
    VBCochain phi = zero(p);
    if (x.size() != dim(p)) throw Error("ShapeMismatch", "VB cochain has wrong length");
    std::size_t at = 0;
    for (Vector& h : phi.hat)
        for (Scalar& s : h) s = x[at++];
    return phi;
}

Matrix VBComplex::projectability_constraints(int p) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = constraints_.find(p);
        if (it != constraints_.end()) return it->second;
    }
    const FiniteGroupoid& G = v_.G;
    Field f = v_.field();
    std::size_t n = dim(p);
    if (p == 0) return Matrix(0, n, f);
    const Nerve& nv = G.nerve(p);
    std::vector<std::size_t> offset;
    std::size_t at = 0;
    for (std::size_t k = 0; k < nv.size(); ++k) {
        offset.push_back(at);
        at += v_.fibers[nv.tuple(k)[0]];
    }
    std::vector<Vector> rows;
    std::vector<ArrowId> t;
    for (std::size_t k = 0; k < nv.size(); ++k) {
        auto tk = nv.tuple(k);
        ArrowId g1 = tk[0];
        if (G.is_unit(g1)) continue;
        ArrowId u = G.unit(G.src(g1));
        t.assign(tk.begin(), tk.end());
        t[0] = u;
        std::size_t ku = nv.index(t);
        const Matrix &a = v_.stilde[g1], &b = v_.stilde[u];
        for (std::size_t r = 0; r < a.rows(); ++r) {
            Vector row(n, Scalar(0).in(f));
            for (std::size_t c = 0; c < a.cols(); ++c) row[offset[k] + c] = a(r, c);
            for (std::size_t c = 0; c < b.cols(); ++c) row[offset[ku] + c] -= b(r, c);
            rows.push_back(std::move(row));
        }
    }
    Matrix m(rows.size(), n, f);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
    std::lock_guard<std::mutex> lock(mu_);
    return constraints_.emplace(p, std::move(m)).first->second;
}

Matrix VBComplex::left_projectable_basis(int p) const { return kernel(projectability_constraints(p)); }

bool VBComplex::is_left_projectable(const VBCochain& phi) const {
    return is_zero(projectability_constraints(phi.degree) * flatten(phi));
}

VBCochain VBComplex::coboundary(const VBCochain& phi) const {
    const FiniteGroupoid& G = v_.G;
    int p = phi.degree;
    if (phi.hat.size() != zero(p).hat.size()) throw Error("ShapeMismatch", "VB cochain has wrong number of values");
    if (!is_left_projectable(phi)) throw Error("NotLeftProjectable", "cochain is not left-projectable");
    VBCochain out = zero(p + 1);
    if (p == 0) {
        for (ArrowId g = 0; g < G.num_arrows(); ++g)
            out.hat[g] = sub(dual_.stilde[g].transpose() * phi.hat[G.src(g)],
                             dual_.ttilde[g].transpose() * phi.hat[G.tgt(g)]);
        return out;
    }
    const Nerve &from = G.nerve(p), &to = G.nerve(p + 1);
    std::vector<ArrowId> face_buf;
    for (std::size_t k = 0; k < to.size(); ++k) {
        auto t = to.tuple(k);
        std::size_t pk = pair_index(G, t[0], t[1]);
        const Vector& tail = phi.hat[from.index(t.subspan(1))];
        face_buf = face(G, t, 1);
        const Vector& head = phi.hat[from.index(face_buf)];

        Vector drift = sub(shift_[pk].transpose() * tail, shift_composite_[pk].transpose() * head);
        if (!is_zero(drift)) throw Error("LiftDependence", "coboundary depends on the completion at " + G.tuple_key(p + 1, k));

        Vector val = sub(completion_[pk].transpose() * tail, composite_[pk].transpose() * head);
        for (int i = 2; i <= p + 1; ++i) {
            face_buf = face(G, t, i);
            const Vector& term = phi.hat[from.index(face_buf)];
            val = i % 2 == 0 ? add(val, term) : sub(val, term);
        }
        out.hat[k] = std::move(val);
    }
    return out;
}

Matrix VBComplex::coboundary_matrix(int p) const {
    Matrix from = left_projectable_basis(p), to = left_projectable_basis(p + 1);
    Matrix images(dim(p + 1), from.cols(), v_.field());
    for (std::size_t c = 0; c < from.cols(); ++c) images.set_col(c, flatten(coboundary(unflatten(p, from.col(c)))));
    auto coords = solve(to, images);
    if (!coords) throw Error("NotLeftProjectable", "coboundary left the left-projectable subspace");
    return *coords;
}

CochainComplex VBComplex::complex(int max_degree) const {
    CochainComplex c{v_.field(), {}, {}};
    for (int p = 0; p <= max_degree + 1; ++p) {
        Matrix d = coboundary_matrix(p);
        if (p == 0) c.dims.push_back(d.cols());
        c.dims.push_back(d.rows());
        c.d.push_back(std::move(d));
    }
    return c;
}

VBCochain vb_coboundary(const VBGroupoid& v, const VBCochain& phi) { return VBComplex(v).coboundary(phi); }

std::vector<std::size_t> vb_cohomology(const VBGroupoid& v, int max_degree) {
    auto dims = cohomology_dims(VBComplex(v).complex(max_degree));
    dims.resize(max_degree + 1);
    return dims;
}

MixedCochain psi(const VBComplex& cx, const HorizontalLift& h, const VBCochain& phi) {
    const VBGroupoid& v = cx.vbg();
    const FiniteGroupoid& G = v.G;
    const CoreData& core = cx.core();
    int p = phi.degree;
    MixedCochain x{p - 1, {p - 1, {}}, {p, {}}};
    if (p == 0) {
        x.c.values = phi.hat;
        return x;
    }
    const Nerve &np = G.nerve(p), &nq = G.nerve(p - 1);
    std::vector<ArrowId> t;
    for (std::size_t q = 0; q < nq.size(); ++q) {
        ObjectId y = nq.first_vertex(q);
        t.assign(1, G.unit(y));
        if (p > 1) {
            auto rest = nq.tuple(q);
            t.insert(t.end(), rest.begin(), rest.end());
        }
        x.e.values.push_back(v.stilde[G.unit(y)] * phi.hat[np.index(t)]);
    }
    for (std::size_t k = 0; k < np.size(); ++k) {
        auto tk = np.tuple(k);
        ArrowId g1 = tk[0];
        std::size_t rest = p == 1 ? G.src(g1) : nq.index(tk.subspan(1));
        Vector vert = sub(phi.hat[k], h.h[g1] * x.e.values[rest]);
        auto c = solve(core.j[g1], vert);
        if (!c) throw Error("NotLeftProjectable", "hat value is not split by the lift at " + G.tuple_key(p, k));
        x.c.values.push_back(std::move(*c));
    }
    return x;
}

VBCochain psi_inverse(const VBComplex& cx, const HorizontalLift& h, const MixedCochain& x) {
    const VBGroupoid& v = cx.vbg();
    const FiniteGroupoid& G = v.G;
    const CoreData& core = cx.core();
    int p = x.degree + 1;
    VBCochain phi{p, {}};
    if (p == 0) {
        phi.hat = x.c.values;
        return phi;
    }
    const Nerve &np = G.nerve(p), &nq = G.nerve(p - 1);
    for (std::size_t k = 0; k < np.size(); ++k) {
        auto tk = np.tuple(k);
        ArrowId g1 = tk[0];
        std::size_t rest = p == 1 ? G.src(g1) : nq.index(tk.subspan(1));
        phi.hat.push_back(add(h.h[g1] * x.e.values[rest], core.j[g1] * x.c.values[k]));
    }
    return phi;
}

MixedCochain transferred_operator(const VBComplex& cx, const HorizontalLift& h, const MixedCochain& x) {
    VBCochain d = cx.coboundary(psi_inverse(cx, h, x));
    for (Vector& val : d.hat) val = scale(Scalar(-1), val);
    return psi(cx, h, d);
}

namespace detail {

namespace {

Matrix vertical_projection(const VBGroupoid& v, const CoreData& core, const HorizontalLift& h, ArrowId g) {
    Matrix I = Matrix::identity(v.fibers[g], v.field());
    return solve(core.j[g], I - h.h[g] * v.stilde[g]).value();
}

}  // namespace

std::vector<Violation> check_dual_pairing(const VBGroupoid& v, const VBGroupoid& dual, const HorizontalLift& h) {
    const FiniteGroupoid& G = v.G;
    Field f = v.field();
    CoreData core = compute_core(v);
    std::vector<Violation> bad;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        ObjectId s = G.src(g);
        ArrowId us = G.unit(s);
        Matrix V = vertical_projection(v, core, h, g);
        Matrix eta = V.transpose();
        Matrix I = Matrix::identity(v.fibers[g], f);
        if (h.h[g] * v.stilde[g] + dual.ttilde[g].transpose() * V != I)
            bad.push_back({"PairingSplitFails", {G.arrow_name(g)}, "<xi, gamma> != <xi^V, gamma^H> + <xi^H, gamma^V>"});
        if (!(dual.ttilde[g] * eta).is_identity())
            bad.push_back({"PairingSplitFails", {G.arrow_name(g)}, "eta is not a section of the dual target"});
        Matrix tau = v.stilde[us].transpose();
        Matrix embedded = multiply(dual, g, us, zeros(v.fibers[g], tau.cols(), f), tau);
        if (embedded != v.stilde[g].transpose())
            bad.push_back({"PairingSplitFails", {G.arrow_name(g)}, "zero times left core is not the dual of the source"});
    }
    return bad;
}

std::vector<Violation> check_source_pairing(const VBGroupoid& v, const VBGroupoid& dual, const HorizontalLift& h) {
    const FiniteGroupoid& G = v.G;
    Ruth2 r = extract_components(v, h);
    std::vector<Violation> bad;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        Matrix rhs = -(h.h[g] * r.partial[G.src(g)]) + dual.ttilde[g].transpose() * r.deltaC[g];
        if (dual.stilde[g].transpose() != rhs) bad.push_back({"SourcePairingFails", {G.arrow_name(g)}, ""});
    }
    return bad;
}

std::vector<Violation> check_target_pairing(const VBGroupoid& v, const VBGroupoid& dual, const HorizontalLift& h) {
    const FiniteGroupoid& G = v.G;
    Field f = v.field();
    CoreData core = compute_core(v);
    std::vector<Violation> bad;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        ObjectId s = G.src(g), t = G.tgt(g);
        ArrowId ut = G.unit(t), gi = G.inv(g);
        Matrix V = vertical_projection(v, core, h, g);
        Matrix tau = v.stilde[ut].transpose();
        Matrix src_tau = dual.stilde[ut] * tau;
        Matrix y = multiply(dual, ut, g, tau, V.transpose() * src_tau);
        Matrix z = multiply(dual, gi, g, zeros(v.fibers[gi], y.cols(), f), y);
        Matrix rhs = -(src_tau.transpose() * V) + z.transpose() * v.utilde[s] * v.stilde[g];
        if (v.ttilde[g] != rhs) bad.push_back({"TargetPairingFails", {G.arrow_name(g)}, ""});
    }
    return bad;
}

}  // namespace detail

}  // namespace vbg
