#include <doctest.h>

#include "support.hpp"
#include "vbg/generate.hpp"

using namespace vt;

namespace {

// Lift of the trivial VB-groupoid whose side action is the given quasi-action.
HorizontalLift lift_from_action(const VBGroupoid& v, const QuasiAction& d) {
    HorizontalLift h;
    for (ArrowId g = 0; g < v.G.num_arrows(); ++g) {
        std::size_t s = v.E.dim(v.G.src(g));
        h.h.push_back(Matrix::vstack(d[g], Matrix::identity(s, v.field())));
    }
    return h;
}

}  // namespace

TEST_CASE("validation of standard VB-groupoids") {
    Rng rng(1);
    for (const auto& [name, G] : corpus_groupoids())
        for (Field f : corpus_fields())
            for (const auto& [kind, v] : corpus_vbgroupoids(rng, G, f)) {
                CAPTURE(name);
                CAPTURE(kind);
                CHECK(check_vbg(v).empty());
            }
}

TEST_CASE("trivial VB-groupoid on pair(2) has fibers of dimension 2") {
    FiniteGroupoid G = pair_groupoid(2);
    VBGroupoid v = trivial_vbg(G, VectorBundle::constant(G, 1, Q));
    for (std::size_t d : v.fibers) CHECK(d == 2);
}

TEST_CASE("a broken cocycle shows up as non-associativity") {
    FiniteGroupoid G = cyclic_group(3);
    VectorBundle one = VectorBundle::constant(G, 1, Q);
    QuasiAction id = QuasiAction::identity(G, one);
    TransformationCochain w = zero_transformation(G, one, one, 2);
    w.values[tuple_index(G, {arrow(G, "a"), arrow(G, "a")})] = one_by_one(1);
    Ruth2 r = type0_ruth(id, id, w);
    CHECK_THROWS_AS(build_from_ruth(r), Error);
    auto bad = check_vbg(build_from_ruth(r, false));
    REQUIRE_FALSE(bad.empty());
    CHECK(has_code(bad, "NotAssociative"));
    CHECK_FALSE(bad.front().witness.empty());
}

TEST_CASE("corrupted structure maps are caught") {
    FiniteGroupoid G = pair_groupoid(2);
    VBGroupoid v = trivial_vbg(G, VectorBundle::constant(G, 1, Q));
    SUBCASE("unit") {
        v.utilde[0] = mat({{1}, {2}});
        CHECK_FALSE(check_vbg(v).empty());
    }
    SUBCASE("source") {
        v.stilde[arrow(G, "(1,0)")] = mat({{0, 0}});
        CHECK(has_code(check_vbg(v), "SourceNotSurjective"));
    }
    SUBCASE("inverse") {
        v.itilde[arrow(G, "(1,0)")] = Matrix::identity(2);
        CHECK(has_code(check_vbg(v), "InverseFails"));
    }
}

TEST_CASE("cores") {
    FiniteGroupoid z2 = cyclic_group(2);
    QuasiAction id = QuasiAction::identity(z2, VectorBundle::constant(z2, 1, F2));

    SUBCASE("action VB-groupoids have no core") {
        VBGroupoid v = action_vbg(id);
        for (std::size_t d : v.fibers) CHECK(d == 1);
        CHECK(compute_core(v).bundle.dims == std::vector<std::size_t>{0});
    }
    SUBCASE("semidirect VB-groupoids are all core") {
        VBGroupoid v = semidirect_vbg(id);
        CHECK(v.E.dims == std::vector<std::size_t>{0});
        CHECK(compute_core(v).bundle.dims == std::vector<std::size_t>{1});
    }
    SUBCASE("the trivial VB-groupoid has core E") {
        FiniteGroupoid G = pair_groupoid(3);
        VBGroupoid v = trivial_vbg(G, VectorBundle::constant(G, 2, Q));
        for (Side s : {Side::right, Side::left}) CHECK(compute_core(v, s).bundle.dims == std::vector<std::size_t>{2, 2, 2});
    }
    SUBCASE("direct sums add cores and sides") {
        FiniteGroupoid G = pair_groupoid(2);
        Rng rng(2);
        QuasiAction a = random_representation(rng, G, VectorBundle::constant(G, 2, Q));
        QuasiAction c = random_representation(rng, G, VectorBundle::constant(G, 1, Q));
        VBGroupoid v = direct_sum(action_vbg(a), semidirect_vbg(c));
        CHECK(v.E.dims == std::vector<std::size_t>{2, 2});
        CHECK(compute_core(v).bundle.dims == std::vector<std::size_t>{1, 1});
        Ruth2 r = extract_components(v, choose_lift(v));
        CHECK(r.deltaE == a);
        CHECK(r.deltaC == c);
    }
}

TEST_CASE("core involution") {
    SUBCASE("identity on a double vector bundle") {
        FiniteGroupoid G = unit_groupoid(2);
        VBGroupoid v = direct_sum(action_vbg(QuasiAction::identity(G, VectorBundle::constant(G, 1, Q))),
                                  semidirect_vbg(QuasiAction::identity(G, VectorBundle::constant(G, 2, Q))));
        for (const Matrix& m : core_involution(v).to_left) CHECK(m.is_identity());
    }
    SUBCASE("identity over a group with trivial side") {
        FiniteGroupoid G = cyclic_group(3);
        Rng rng(3);
        VBGroupoid v = semidirect_vbg(random_representation(rng, G, VectorBundle::constant(G, 2, F3)));
        for (const Matrix& m : core_involution(v).to_left) CHECK(m.is_identity());
    }
    SUBCASE("an involution on random VB-groupoids") {
        Rng rng(4);
        for (const auto& [name, G] : corpus_groupoids()) {
            VBGroupoid v = build_from_ruth(random_ruth2(rng, G, Q));
            CoreInvolution c = core_involution(v);
            for (std::size_t x = 0; x < c.to_left.size(); ++x) CHECK((c.to_right[x] * c.to_left[x]).is_identity());
        }
    }
}

TEST_CASE("horizontal lifts") {
    Rng rng(5);
    FiniteGroupoid G = pair_groupoid(3);
    Ruth2 r = random_ruth2(rng, G, Q, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
    VBGroupoid v = build_from_ruth(r);

    CHECK(choose_lift(v) == canonical_lift(r));
    for (int i = 0; i < 5; ++i) {
        auto s = random_sigma(rng, G, v.E, compute_core(v).bundle);
        HorizontalLift h = choose_lift(v, &s);
        CHECK(check_lift(v, h).empty());
        TransformationCochain d = lift_difference(v, choose_lift(v), h);
        CHECK(d == s);
        for (ObjectId x = 0; x < G.num_objects(); ++x) CHECK(d.values[G.unit(x)].is_zero());
        CHECK(extract_components(v, h) == gauge_apply(d, extract_components(v, choose_lift(v))));
    }
    CHECK(is_zero(lift_difference(v, choose_lift(v), choose_lift(v))));

    HorizontalLift bad = choose_lift(v);
    ArrowId g = arrow(G, "(1,0)");
    bad.h[g] = bad.h[g] + bad.h[g];
    CHECK(has_code(check_lift(v, bad), "LiftNotSection"));
    HorizontalLift shifted = choose_lift(v);
    shifted.h[G.unit(1)] = shifted.h[G.unit(1)] + compute_core(v).j[G.unit(1)] * random_matrix(rng, r.C.dim(1), r.E.dim(1), Q);
    if (shifted.h[G.unit(1)] != choose_lift(v).h[G.unit(1)]) CHECK(has_code(check_lift(v, shifted), "LiftNotUnital"));
}

TEST_CASE("extraction") {
    SUBCASE("trivial VB-groupoid along a quasi-action") {
        FiniteGroupoid G = pair_groupoid(2);
        VectorBundle E = VectorBundle::constant(G, 1, Q);
        QuasiAction d = scalar_action(G, {{"(1,0)", 2}, {"(0,1)", 3}});
        VBGroupoid v = trivial_vbg(G, E);
        Ruth2 r = extract_components(v, lift_from_action(v, d));
        CHECK(r.deltaE == d);
        CHECK(r.deltaC == d);
        CHECK(r.omega.values[tuple_index(G, {arrow(G, "(0,1)"), arrow(G, "(1,0)")})] == one_by_one(-5));
        CHECK(r.omega == curvature(d));
    }
    SUBCASE("action VB-groupoid") {
        FiniteGroupoid G = action_groupoid(cyclic_group(2), 2, {{0, 1}, {1, 0}});
        Rng rng(6);
        QuasiAction d = random_representation(rng, G, VectorBundle::constant(G, 2, Q));
        Ruth2 r = extract_components(action_vbg(d), choose_lift(action_vbg(d)));
        CHECK(r.deltaE == d);
        CHECK(is_zero(r.omega));
    }
}

TEST_CASE("building from 2-term objects") {
    Rng rng(7);

    SUBCASE("roundtrip through the canonical lift") {
        for (const auto& [name, G] : corpus_groupoids())
            for (Field f : corpus_fields()) {
                CAPTURE(name);
                Ruth2 r = random_ruth2(rng, G, f);
                CHECK(extract_components(build_from_ruth(r), canonical_lift(r)) == r);
            }
    }

    SUBCASE("roundtrip through an arbitrary lift") {
        FiniteGroupoid G = cyclic_group(4);
        VBGroupoid v = build_from_ruth(random_ruth2(rng, G, F3));
        HorizontalLift h = random_lift(rng, v);
        VBGroupoid w = build_from_ruth(extract_components(v, h));
        CHECK(check_isomorphism(w, v, decomposition_isomorphism(v, h)).empty());
    }

    SUBCASE("flat type 1 is the trivial VB-groupoid") {
        FiniteGroupoid G = pair_groupoid(2);
        VectorBundle E = VectorBundle::constant(G, 1, Q);
        QuasiAction d = random_representation(rng, G, E);
        auto iso = find_isomorphism(build_from_ruth(type1_ruth(d)), trivial_vbg(G, E));
        CHECK(iso.has_value());
    }

    SUBCASE("a nontrivial class is not the split one") {
        FiniteGroupoid z2 = cyclic_group(2);
        VectorBundle one = VectorBundle::constant(z2, 1, F2);
        QuasiAction id = QuasiAction::identity(z2, one);
        VBGroupoid split = build_from_ruth(type0_ruth(id, id, zero_transformation(z2, one, one, 2)));
        VBGroupoid twisted = build_from_ruth(type0_ruth(id, id, z2_generator(z2, F2)));
        CHECK_FALSE(find_isomorphism(split, twisted).has_value());
        CHECK(find_isomorphism(split, direct_sum(action_vbg(id), semidirect_vbg(id))).has_value());
    }

    SUBCASE("invalid input is refused") {
        FiniteGroupoid G = pair_groupoid(2);
        Ruth2 r = perturb(rng, type1_ruth(random_representation(rng, G, VectorBundle::constant(G, 1, Q))));
        if (!check_ruth2(r).empty()) CHECK_THROWS_AS(build_from_ruth(r), Error);
    }
}

TEST_CASE("fat category") {
    Rng rng(8);
    for (const auto& [name, G] : corpus_groupoids()) {
        CAPTURE(name);
        VBGroupoid v = build_from_ruth(random_ruth2(rng, G, F3));
        HorizontalLift h = random_lift(rng, v);
        Ruth2 r = extract_components(v, h);
        CoreData core = compute_core(v);
        for (ArrowId g = 0; g < G.num_arrows(); ++g) {
            FatElement x = fat_section(v, h, g);
            CHECK(fat_psi_e(v, x) == r.deltaE[g]);
            CHECK(fat_psi_c(v, core, x) == r.deltaC[g]);
        }
        const Nerve& n2 = G.nerve(2);
        for (std::size_t k = 0; k < n2.size(); ++k) {
            auto t = n2.tuple(k);
            CHECK(fat_defect(v, core, h, t[0], t[1]) == r.omega.values[k]);
            FatElement p = fat_mult(v, fat_section(v, h, t[0]), fat_section(v, h, t[1]));
            CHECK(p.g == G.compose(t[0], t[1]));
        }
    }
}
