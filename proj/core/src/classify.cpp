#include "vbg/classify.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace vbg {
namespace {

std::vector<std::size_t> pivot_order(std::size_t n, std::mt19937_64* rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (rng) std::shuffle(order.begin(), order.end(), *rng);
    return order;
}

TransformationCochain conjugate_cochain(const FiniteGroupoid& G, const TransformationCochain& w, int p,
                                        const std::vector<Matrix>& left, const std::vector<Matrix>& right) {
    const Nerve& n = G.nerve(p);
    TransformationCochain out{p, {}};
    for (std::size_t k = 0; k < n.size(); ++k)
        out.values.push_back(left[n.first_vertex(k)] * w.values[k] * right[n.last_vertex(k)]);
    return out;
}

QuasiAction conjugate_action(const QuasiAction& d, const std::vector<Matrix>& left, const std::vector<Matrix>& right) {
    const FiniteGroupoid& G = d.groupoid();
    std::vector<Matrix> maps;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) maps.push_back(left[G.tgt(g)] * d[g] * right[G.src(g)]);
    return QuasiAction(G, d.bundle(), std::move(maps));
}

std::vector<Matrix> inverses(const std::vector<Matrix>& ms) {
    std::vector<Matrix> out;
    for (const Matrix& m : ms) {
        auto i = inverse(m);
        if (!i) throw Error("NotInvertible", "change of basis is singular");
        out.push_back(std::move(*i));
    }
    return out;
}

QuasiAction block_action(const QuasiAction& d, const std::vector<std::size_t>& r0, const std::vector<std::size_t>& c0,
                         const VectorBundle& B) {
    const FiniteGroupoid& G = d.groupoid();
    std::vector<Matrix> maps;
    for (ArrowId g = 0; g < G.num_arrows(); ++g)
        maps.push_back(d[g].block(r0[G.tgt(g)], c0[G.src(g)], B.dim(G.tgt(g)), B.dim(G.src(g))));
    return QuasiAction(G, B, std::move(maps));
}

}  // namespace

RankReport is_regular(const Ruth2& r) {
    RankReport rep;
    for (const Matrix& m : r.partial) rep.ranks.push_back(rank(m));
    for (std::size_t x = 1; x < rep.ranks.size(); ++x)
        if (rep.ranks[x] != rep.ranks[0]) rep.regular = false;
    for (ArrowId g = 0; g < r.G.num_arrows(); ++g)
        if (rep.ranks[r.G.src(g)] != rep.ranks[r.G.tgt(g)]) rep.orbitwise_constant = false;
    return rep;
}

Ruth2 change_basis(const Ruth2& r, const std::vector<Matrix>& PC, const std::vector<Matrix>& PE) {
    auto iC = inverses(PC), iE = inverses(PE);
    Ruth2 out{r.G, r.C, r.E, {}, conjugate_action(r.deltaC, iC, PC), conjugate_action(r.deltaE, iE, PE),
              conjugate_cochain(r.G, r.omega, 2, iC, PE)};
    for (ObjectId x = 0; x < r.G.num_objects(); ++x) out.partial.push_back(iE[x] * r.partial[x] * PC[x]);
    return out;
}

RegularDecomposition normal_form(const Ruth2& r, std::uint64_t pivot_seed) {
    RankReport rep = is_regular(r);
    if (!rep.regular) throw Error("NotRegular", "core-anchor rank varies over objects");
    const FiniteGroupoid& G = r.G;
    Field f = r.E.field;
    std::mt19937_64 rng(pivot_seed);
    std::mt19937_64* shuffle = pivot_seed ? &rng : nullptr;

    RegularDecomposition out;
    VectorBundle bK{{}, f}, bNu{{}, f}, bF{{}, f};
    for (ObjectId x = 0; x < G.num_objects(); ++x) {
        const Matrix& d = r.partial[x];
        Matrix K = canonical_basis(kernel(d));
        Matrix S = complement(K, pivot_order(r.C.dim(x), shuffle));
        Matrix F = d * S;
        Matrix Q = canonical_basis(kernel(d.transpose())).transpose();
        Matrix N0 = complement(F, pivot_order(r.E.dim(x), shuffle));
        Matrix N = N0 * inverse(Q * N0).value();
        out.PC.push_back(Matrix::hstack(K, S));
        out.PE.push_back(Matrix::hstack(N, F));
        bK.dims.push_back(K.cols());
        bNu.dims.push_back(N.cols());
        bF.dims.push_back(S.cols());
        out.K.push_back(std::move(K));
        out.S.push_back(std::move(S));
        out.N.push_back(std::move(N));
        out.Q.push_back(std::move(Q));
    }

    Ruth2 rp = change_basis(r, out.PC, out.PE);
    out.sigma_primed = TransformationCochain{1, {}};
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        ObjectId s = G.src(g), t = G.tgt(g);
        std::size_t kt = bK.dim(t), ks = bK.dim(s), ft = bF.dim(t), fs = bF.dim(s), ns = bNu.dim(s), nt = bNu.dim(t);
        Matrix sg(kt + ft, ns + fs, f);
        sg.set_block(0, ns, -rp.deltaC[g].block(0, ks, kt, fs));
        sg.set_block(kt, 0, -rp.deltaE[g].block(nt, 0, ft, ns));
        out.sigma_primed.values.push_back(std::move(sg));
    }
    try {
        out.primed = gauge_apply(out.sigma_primed, rp);
    } catch (const Error& e) {
        throw Error("BlockSolveFailed", std::string("normalizing gauge is invalid: ") + e.what());
    }
    const Ruth2& n = out.primed;

    std::vector<std::size_t> zero(G.num_objects(), 0);
    auto bad_block = [&](const Matrix& m, std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) {
        return !m.block(r0, c0, nr, nc).is_zero();
    };
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        ObjectId s = G.src(g), t = G.tgt(g);
        if (bad_block(n.deltaC[g], 0, bK.dim(s), bK.dim(t), bF.dim(s)) ||
            bad_block(n.deltaC[g], bK.dim(t), 0, bF.dim(t), bK.dim(s)) ||
            bad_block(n.deltaE[g], 0, bNu.dim(s), bNu.dim(t), bF.dim(s)) ||
            bad_block(n.deltaE[g], bNu.dim(t), 0, bF.dim(t), bNu.dim(s)))
            throw Error("BlockSolveFailed", "quasi-actions are not block diagonal at " + G.arrow_name(g));
    }
    out.deltaK = block_action(n.deltaC, zero, zero, bK);
    out.deltaNu = block_action(n.deltaE, zero, zero, bNu);
    out.deltaF = block_action(n.deltaC, bK.dims, bK.dims, bF);
    if (!out.deltaK.is_representation() || !out.deltaNu.is_representation())
        throw Error("BlockSolveFailed", "kernel or cokernel action is not a representation");

    const Nerve& n2 = G.nerve(2);
    out.omega = TransformationCochain{2, {}};
    out.RF = TransformationCochain{2, {}};
    for (std::size_t k = 0; k < n2.size(); ++k) {
        ObjectId t = n2.first_vertex(k), s = n2.last_vertex(k);
        const Matrix& w = n.omega.values[k];
        if (bad_block(w, 0, bNu.dim(s), bK.dim(t), bF.dim(s)) || bad_block(w, bK.dim(t), 0, bF.dim(t), bNu.dim(s)))
            throw Error("BlockSolveFailed", "curvature is not block diagonal at " + G.tuple_key(2, k));
        out.omega.values.push_back(w.block(0, 0, bK.dim(t), bNu.dim(s)));
        out.RF.values.push_back(w.block(bK.dim(t), bNu.dim(s), bF.dim(t), bF.dim(s)));
    }
    if (!is_zero(transformation_coboundary(out.deltaNu, out.deltaK, out.omega)))
        throw Error("BlockSolveFailed", "omega block is not closed");

    out.sigma = conjugate_cochain(G, out.sigma_primed, 1, out.PC, inverses(out.PE));
    return out;
}

SubquotientReps canonical_subquotient_reps(const Ruth2& r) {
    RegularDecomposition d = normal_form(r);
    return {d.deltaK, d.deltaNu};
}

Equivalence class_equal(const QuasiAction& deltaNu, const QuasiAction& deltaK, const TransformationCochain& omega1,
                        const TransformationCochain& omega2) {
    auto sigma = solve_coboundary(deltaNu, deltaK, sub(omega1, omega2));
    if (!sigma) return {false, std::nullopt, "omega classes differ"};
    return {true, std::move(sigma), ""};
}

Equivalence class_equal(const RegularDecomposition& a, const RegularDecomposition& b) {
    if (!(a.deltaK == b.deltaK) || !(a.deltaNu == b.deltaNu))
        throw Error("RepresentationMismatch", "omega blocks live over different representations");
    return class_equal(a.deltaNu, a.deltaK, a.omega, b.omega);
}

Equivalence decide_equiv_regular(const Ruth2& r1, const Ruth2& r2, std::uint64_t pivot_seed) {
    if (!(r1.C == r2.C) || !(r1.E == r2.E) || r1.partial != r2.partial)
        throw Error("DifferentCoreAnchor", "gauge equivalence needs identical bundles and core-anchor");
    RegularDecomposition a = normal_form(r1, pivot_seed), b = normal_form(r2, pivot_seed);
    if (!(a.deltaK == b.deltaK)) return {false, std::nullopt, "kernel representations differ"};
    if (!(a.deltaNu == b.deltaNu)) return {false, std::nullopt, "cokernel representations differ"};
    Equivalence c = class_equal(a, b);
    if (!c.equivalent) return c;

    const FiniteGroupoid& G = r1.G;
    Field f = r1.E.field;
    TransformationCochain mid{1, {}};
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        const Matrix& s0 = c.witness->values[g];
        const Matrix& dF = b.deltaF[g];
        Matrix m(s0.rows() + dF.rows(), s0.cols() + dF.cols(), f);
        m.set_block(0, 0, s0);
        m.set_block(s0.rows(), s0.cols(), dF - a.deltaF[g]);
        mid.values.push_back(std::move(m));
    }
    TransformationCochain total = sub(add(a.sigma_primed, mid), b.sigma_primed);
    std::vector<Matrix> iE;
    for (const Matrix& m : a.PE) iE.push_back(inverse(m).value());
    TransformationCochain sigma = conjugate_cochain(G, total, 1, a.PC, iE);
    if (!(gauge_apply(sigma, r1) == r2)) throw Error("WitnessFailed", "assembled gauge does not relate the inputs");
    return {true, std::move(sigma), ""};
}

}  // namespace vbg
