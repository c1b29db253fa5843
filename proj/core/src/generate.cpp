#include "vbg/generate.hpp"

#include <algorithm>
#include <numeric>

#include "vbg/classify.hpp"

namespace vbg {
namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Arrow root -> y for each object, units at the roots.
std::vector<ArrowId> spanning_arrows(const FiniteGroupoid& G, const std::vector<ObjectId>& root) {
    std::vector<ArrowId> a(G.num_objects());
    for (ObjectId y = 0; y < G.num_objects(); ++y) a[y] = G.unit(y);
    for (ArrowId g = G.num_arrows(); g-- > 0;)
        if (G.src(g) == root[G.tgt(g)] && G.tgt(g) != root[G.tgt(g)]) a[G.tgt(g)] = g;
    return a;
}

std::vector<ObjectId> roots(const FiniteGroupoid& G) {
    std::vector<ObjectId> root(G.num_objects());
    for (const auto& comp : components(G))
        for (ObjectId x : comp) root[x] = comp.front();
    return root;
}

// All homomorphisms from the isotropy group at x into {+1, -1}, as sign maps.
std::vector<std::vector<bool>> sign_characters(const FiniteGroupoid& G, ObjectId x) {
    std::vector<ArrowId> iso;
    for (ArrowId g = 0; g < G.num_arrows(); ++g)
        if (G.src(g) == x && G.tgt(g) == x) iso.push_back(g);
    std::vector<std::vector<bool>> out;
    if (iso.size() > 12) {
        out.push_back(std::vector<bool>(G.num_arrows(), false));
        return out;
    }
    for (std::uint32_t mask = 0; mask < (1u << iso.size()); ++mask) {
        std::vector<bool> neg(G.num_arrows(), false);
        for (std::size_t i = 0; i < iso.size(); ++i) neg[iso[i]] = (mask >> i) & 1u;
        bool hom = true;
        for (ArrowId a : iso)
            for (ArrowId b : iso)
                if (neg[G.compose(a, b)] != (neg[a] != neg[b])) hom = false;
        if (hom) out.push_back(std::move(neg));
    }
    return out;
}

std::vector<Matrix> random_frames(Rng& rng, const VectorBundle& E) {
    std::vector<Matrix> out;
    for (std::size_t n : E.dims) out.push_back(random_invertible(rng, n, E.field));
    return out;
}

std::vector<std::size_t> per_component(Rng& rng, const FiniteGroupoid& G, std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> out(G.num_objects());
    for (const auto& comp : components(G)) {
        std::size_t d = uniform(rng, lo, hi);
        for (ObjectId x : comp) out[x] = d;
    }
    return out;
}

}  // namespace

Scalar random_scalar(Rng& rng, Field f, int bound) {
    if (f.is_rational()) return Scalar(std::uniform_int_distribution<long>(-bound, bound)(rng));
    return Scalar::residue(std::uniform_int_distribution<long>(0, f.p - 1)(rng), f.p);
}

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, Field f) {
    Matrix m(rows, cols, f);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_scalar(rng, f);
    return m;
}

Matrix random_invertible(Rng& rng, std::size_t n, Field f) {
    for (;;) {
        Matrix m = random_matrix(rng, n, n, f);
        if (rank(m) == n) return m;
    }
}

std::vector<std::vector<ObjectId>> components(const FiniteGroupoid& G) {
    std::vector<ObjectId> parent(G.num_objects());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](ObjectId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        ObjectId a = find(G.src(g)), b = find(G.tgt(g));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::vector<ObjectId>> out;
    std::vector<std::size_t> slot(G.num_objects(), SIZE_MAX);
    for (ObjectId x = 0; x < G.num_objects(); ++x) {
        ObjectId r = find(x);
        if (slot[r] == SIZE_MAX) {
            slot[r] = out.size();
            out.emplace_back();
        }
        out[slot[r]].push_back(x);
    }
    return out;
}

QuasiAction random_quasiaction(Rng& rng, const FiniteGroupoid& G, const VectorBundle& E) {
    std::vector<Matrix> maps;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        std::size_t s = E.dim(G.src(g)), t = E.dim(G.tgt(g));
        maps.push_back(G.is_unit(g) ? Matrix::identity(s, E.field) : random_matrix(rng, t, s, E.field));
    }
    return QuasiAction(G, E, std::move(maps));
}

QuasiAction random_representation(Rng& rng, const FiniteGroupoid& G, const VectorBundle& E) {
    std::vector<ObjectId> root = roots(G);
    for (ObjectId x = 0; x < G.num_objects(); ++x)
        if (E.dim(x) != E.dim(root[x]))
            throw Error("NotARepresentation", "fiber dimension varies within a component");
    std::vector<ArrowId> a = spanning_arrows(G, root);

    // rho[x] holds one character per coordinate of the fiber at the root x.
    std::vector<std::vector<std::vector<bool>>> rho(G.num_objects());
    for (ObjectId x = 0; x < G.num_objects(); ++x) {
        if (root[x] != x) continue;
        auto chars = sign_characters(G, x);
        for (std::size_t i = 0; i < E.dim(x); ++i) rho[x].push_back(chars[uniform(rng, 0, chars.size() - 1)]);
    }
    std::vector<Matrix> T = random_frames(rng, E), Tinv;
    for (const Matrix& m : T) Tinv.push_back(inverse(m).value());

    std::vector<Matrix> maps;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        ObjectId x = G.src(g), y = G.tgt(g), r = root[x];
        ArrowId k = G.compose(G.inv(a[y]), G.compose(g, a[x]));
        Matrix d(E.dim(r), E.dim(r), E.field);
        for (std::size_t i = 0; i < E.dim(r); ++i) d(i, i) = rho[r][i][k] ? Scalar(-1).in(E.field) : Scalar(1).in(E.field);
        maps.push_back(G.is_unit(g) ? Matrix::identity(E.dim(x), E.field) : T[y] * d * Tinv[x]);
    }
    return QuasiAction(G, E, std::move(maps));
}

TransformationCochain random_sigma(Rng& rng, const FiniteGroupoid& G, const VectorBundle& E, const VectorBundle& C) {
    TransformationCochain s{1, {}};
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        std::size_t rows = C.dim(G.tgt(g)), cols = E.dim(G.src(g));
        s.values.push_back(G.is_unit(g) ? Matrix(rows, cols, E.field) : random_matrix(rng, rows, cols, E.field));
    }
    return s;
}

TransformationCochain random_cocycle(Rng& rng, const QuasiAction& dE, const QuasiAction& dC) {
    const FiniteGroupoid& G = dE.groupoid();
    const VectorBundle &E = dE.bundle(), &C = dC.bundle();
    Field f = E.field;
    auto coords = normalized_transformation_coordinates(G, E, C, 2);
    std::size_t full = transformation_dim(G, E, C, 2);
    auto embed = [&](const Vector& v) {
        Vector x(full, Scalar(0).in(f));
        for (std::size_t i = 0; i < coords.size(); ++i) x[coords[i]] = v[i];
        return x;
    };
    Matrix D = operator_matrix(coords.size(), transformation_dim(G, E, C, 3), f, [&](const Vector& v) {
        return flatten(transformation_coboundary(dE, dC, unflatten_transformation(G, E, C, 2, embed(v))));
    });
    Matrix Z = kernel(D);
    Vector c(coords.size(), Scalar(0).in(f));
    for (std::size_t j = 0; j < Z.cols(); ++j) c = add(c, scale(random_scalar(rng, f), Z.col(j)));
    return unflatten_transformation(G, E, C, 2, embed(c));
}

RuthShape random_shape(Rng& rng, const FiniteGroupoid& G, std::size_t max_block) {
    return {per_component(rng, G, 0, max_block), per_component(rng, G, 0, max_block),
            per_component(rng, G, 0, max_block)};
}

Ruth2 random_ruth2(Rng& rng, const FiniteGroupoid& G, Field f, const RuthShape& shape) {
    VectorBundle K{shape.k, f}, Nu{shape.nu, f}, F{shape.f, f};
    QuasiAction dK = random_representation(rng, G, K), dNu = random_representation(rng, G, Nu);
    Ruth2 r = direct_sum(type0_ruth(dK, dNu, random_cocycle(rng, dNu, dK)), type1_ruth(random_quasiaction(rng, G, F)));
    r = change_basis(r, random_frames(rng, r.C), random_frames(rng, r.E));
    return gauge_apply(random_sigma(rng, G, r.E, r.C), r);
}

Ruth2 random_ruth2(Rng& rng, const FiniteGroupoid& G, Field f) {
    return random_ruth2(rng, G, f, random_shape(rng, G));
}

Ruth2 perturb(Rng& rng, const Ruth2& r) {
    Ruth2 out = r;
    Field f = r.E.field;
    std::vector<Matrix*> slots;
    for (Matrix& m : out.partial) slots.push_back(&m);
    std::vector<Matrix> dC = out.deltaC.maps(), dE = out.deltaE.maps();
    for (Matrix& m : dC) slots.push_back(&m);
    for (Matrix& m : dE) slots.push_back(&m);
    for (Matrix& m : out.omega.values) slots.push_back(&m);
    std::erase_if(slots, [](const Matrix* m) { return m->rows() == 0 || m->cols() == 0; });
    if (slots.empty()) return out;
    Matrix& m = *slots[uniform(rng, 0, slots.size() - 1)];
    Scalar bump(0);
    while (bump.in(f).is_zero()) bump = random_scalar(rng, f);
    m(uniform(rng, 0, m.rows() - 1), uniform(rng, 0, m.cols() - 1)) += bump.in(f);
    out.deltaC = QuasiAction(r.G, r.C, std::move(dC));
    out.deltaE = QuasiAction(r.G, r.E, std::move(dE));
    return out;
}

HorizontalLift random_lift(Rng& rng, const VBGroupoid& v) {
    TransformationCochain s = random_sigma(rng, v.G, v.E, compute_core(v).bundle);
    return choose_lift(v, &s);
}

std::vector<NamedGroupoid> corpus_groupoids() {
    FiniteGroupoid z2 = cyclic_group(2);
    return {
        {"pair2", pair_groupoid(2)},
        {"pair3", pair_groupoid(3)},
        {"cyclic2", z2},
        {"cyclic3", cyclic_group(3)},
        {"cyclic4", cyclic_group(4)},
        {"z2_on_2pts", action_groupoid(z2, 2, {{0, 1}, {1, 0}})},
        {"pair2+cyclic2", disjoint_union(pair_groupoid(2), z2)},
    };
}

std::vector<Field> corpus_fields() { return {Field::rationals(), Field::prime(2), Field::prime(3)}; }

std::vector<NamedVBGroupoid> corpus_vbgroupoids(Rng& rng, const FiniteGroupoid& G, Field f) {
    VectorBundle one = VectorBundle::constant(G, 1, f);
    QuasiAction rep = random_representation(rng, G, one);
    std::vector<NamedVBGroupoid> out;
    out.push_back({"trivial", trivial_vbg(G, one)});
    out.push_back({"action", action_vbg(rep)});
    out.push_back({"semidirect", semidirect_vbg(rep)});
    out.push_back({"action+semidirect", direct_sum(action_vbg(rep), semidirect_vbg(rep))});
    out.push_back({"built", build_from_ruth(random_ruth2(rng, G, f))});
    return out;
}

}  // namespace vbg
