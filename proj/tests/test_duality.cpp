#include <doctest.h>

#include "bar_oracle.hpp"
#include "support.hpp"
#include "vbg/duality.hpp"
#include "vbg/generate.hpp"

using namespace vt;

namespace {

VBCochain basis_cochain(const VBComplex& cx, int p, std::size_t i) {
    Matrix B = cx.left_projectable_basis(p);
    return cx.unflatten(p, B.col(i));
}

}  // namespace

TEST_CASE("duals of the standard examples") {
    for (Field f : corpus_fields()) {
        CAPTURE(f.to_string());
        FiniteGroupoid G = pair_groupoid(2);
        VectorBundle E = VectorBundle::constant(G, 2, f);

        VBGroupoid dt = dualize(trivial_vbg(G, E));
        CHECK(dt.provenance.find("dual") != std::string::npos);
        CHECK(find_isomorphism(dt, trivial_vbg(G, E)).has_value());

        Rng rng(1);
        FiniteGroupoid H = action_groupoid(cyclic_group(2), 2, {{0, 1}, {1, 0}});
        QuasiAction d = random_representation(rng, H, VectorBundle::constant(H, 2, f));
        VBGroupoid da = dualize(action_vbg(d));
        CHECK(find_isomorphism(da, semidirect_vbg(dual_representation(d))).has_value());
        VBGroupoid ds = dualize(semidirect_vbg(d));
        CHECK(find_isomorphism(ds, action_vbg(dual_representation(d))).has_value());
    }
}

TEST_CASE("dual bundles") {
    Rng rng(2);
    FiniteGroupoid G = pair_groupoid(3);
    Ruth2 r = random_ruth2(rng, G, Q, {{1, 1, 1}, {2, 2, 2}, {1, 1, 1}});
    VBGroupoid v = build_from_ruth(r);
    VBGroupoid d = dualize(v);
    CHECK(d.E.dims == r.C.dims);
    CHECK(compute_core(d).bundle.dims == r.E.dims);
    CHECK(check_vbg(d).empty());
}

TEST_CASE("dual representation") {
    FiniteGroupoid G = pair_groupoid(2);
    QuasiAction d = scalar_action(G, {{"(1,0)", 2}, {"(0,1)", 3}});
    QuasiAction dd = dual_representation(d);
    CHECK(dd[arrow(G, "(1,0)")] == one_by_one(3));
    CHECK(dual_representation(dd) == d);
}

TEST_CASE("double dual") {
    SUBCASE("trivial VB-groupoid evaluates identically") {
        FiniteGroupoid G = pair_groupoid(2);
        DoubleDual w = double_dual_check(trivial_vbg(G, VectorBundle::constant(G, 1, Q)));
        for (const Matrix& m : w.fiber_map) CHECK(m.is_identity());
    }
    SUBCASE("built VB-groupoids over F3") {
        Rng rng(3);
        for (const auto& [name, G] : corpus_groupoids()) {
            CAPTURE(name);
            VBGroupoid v = build_from_ruth(random_ruth2(rng, G, F3));
            DoubleDual w = double_dual_check(v);
            CHECK(check_isomorphism(v, w.dd, w.fiber_map, &w.side_map).empty());
        }
    }
    SUBCASE("semidirect goes to action and back") {
        FiniteGroupoid G = cyclic_group(3);
        Rng rng(4);
        QuasiAction d = random_representation(rng, G, VectorBundle::constant(G, 2, Q));
        VBGroupoid once = dualize(semidirect_vbg(d));
        CHECK(find_isomorphism(once, action_vbg(dual_representation(d))).has_value());
        CHECK(find_isomorphism(dualize(once), semidirect_vbg(d)).has_value());
    }
}

TEST_CASE("pairing identities along any lift") {
    Rng rng(5);
    for (Field f : corpus_fields()) {
        FiniteGroupoid G = pair_groupoid(2);
        VBGroupoid v = build_from_ruth(random_ruth2(rng, G, f));
        VBGroupoid d = dualize(v);
        HorizontalLift h = random_lift(rng, v);
        CHECK(detail::check_dual_pairing(v, d, h).empty());
        CHECK(detail::check_source_pairing(v, d, h).empty());
        CHECK(detail::check_target_pairing(v, d, h).empty());
    }
}

TEST_CASE("VB complex") {
    SUBCASE("squares to zero on the trivial VB-groupoid") {
        FiniteGroupoid G = pair_groupoid(2);
        VBComplex cx(trivial_vbg(G, VectorBundle::constant(G, 1, Q)));
        for (int p = 0; p <= 2; ++p)
            for (std::size_t i = 0; i < cx.left_projectable_basis(p).cols(); ++i) {
                VBCochain phi = basis_cochain(cx, p, i);
                CHECK(cx.coboundary(cx.coboundary(phi)) == cx.zero(p + 2));
            }
    }

    SUBCASE("degree 0 reproduces the core representation") {
        FiniteGroupoid G = cyclic_group(3);
        Rng rng(6);
        QuasiAction d = random_representation(rng, G, VectorBundle::constant(G, 2, Q));
        VBComplex cx(semidirect_vbg(d));
        QuasiAction dual = dual_representation(d);
        for (std::size_t i = 0; i < cx.dim(0); ++i) {
            VBCochain a = cx.unflatten(0, unit_vector(cx.dim(0), i, Q));
            VectorCochain x{0, a.hat};
            VectorCochain expect = vector_coboundary(dual, x);
            VBCochain got = cx.coboundary(a);
            for (ArrowId g = 0; g < G.num_arrows(); ++g) CHECK(got.hat[g] == scale(Scalar(-1), expect.values[g]));
        }
    }

    SUBCASE("left-projectability is enforced") {
        FiniteGroupoid G = pair_groupoid(2);
        VBComplex cx(trivial_vbg(G, VectorBundle::constant(G, 1, Q)));
        VBCochain phi = cx.zero(1);
        phi.hat[arrow(G, "(1,0)")] = {Scalar(0), Scalar(1)};
        CHECK_FALSE(cx.is_left_projectable(phi));
        CHECK_THROWS_AS(cx.coboundary(phi), Error);
    }

    SUBCASE("cohomology of the standard examples") {
        FiniteGroupoid G = pair_groupoid(3);
        CHECK(vb_cohomology(trivial_vbg(G, VectorBundle::constant(G, 2, Q)), 3) == std::vector<std::size_t>{0, 0, 0, 0});

        FiniteGroupoid z2 = cyclic_group(2);
        for (Field f : corpus_fields()) {
            CAPTURE(f.to_string());
            QuasiAction id = QuasiAction::identity(z2, VectorBundle::constant(z2, 1, f));
            auto rep = cohomology_dims(representation_complex(id, 3));
            auto semi = vb_cohomology(semidirect_vbg(id), 3);
            CHECK(semi == rep);
            auto act = vb_cohomology(action_vbg(id), 3);
            CHECK(act[0] == 0);
            for (int p = 1; p <= 3; ++p) CHECK(act[p] == rep[p - 1]);
        }
        CHECK(vb_cohomology(semidirect_vbg(QuasiAction::identity(z2, VectorBundle::constant(z2, 1, F2))), 2)[2] ==
              bar::cyclic_cohomology(2, 2, 2)[2]);
    }

    SUBCASE("VB cohomology is the shifted total cohomology") {
        Rng rng(7);
        FiniteGroupoid G = cyclic_group(2);
        for (Field f : corpus_fields()) {
            VBGroupoid v = build_from_ruth(random_ruth2(rng, G, f, {{1}, {1}, {1}}));
            auto vb = vb_cohomology(v, 2);
            auto tot = cohomology_dims(total_complex(extract_components(v, choose_lift(v)), 1));
            CHECK(vb == tot);
        }
    }
}

TEST_CASE("transfer through a lift") {
    Rng rng(8);
    FiniteGroupoid G = pair_groupoid(2);
    Ruth2 r = random_ruth2(rng, G, Q);
    VBGroupoid v = build_from_ruth(r);
    VBComplex cx(v);

    SUBCASE("canonical lift reproduces the input operator") {
        HorizontalLift h = canonical_lift(r);
        for (int p = 0; p <= 1; ++p)
            for (std::size_t i = 0; i < mixed_dim(r, p); ++i) {
                MixedCochain x = unflatten_mixed(r, p, unit_vector(mixed_dim(r, p), i, Q));
                CHECK(psi(cx, h, psi_inverse(cx, h, x)) == x);
                CHECK(transferred_operator(cx, h, x) == total_operator_apply(r, x));
            }
    }

    SUBCASE("changing the lift is the gauge") {
        HorizontalLift h = choose_lift(v), h2 = random_lift(rng, v);
        TransformationCochain s = lift_difference(v, h, h2);
        Ruth2 rh = extract_components(v, h);
        for (int p = 0; p <= 1; ++p)
            for (std::size_t i = 0; i < mixed_dim(r, p); ++i) {
                MixedCochain x = unflatten_mixed(r, p, unit_vector(mixed_dim(r, p), i, Q));
                CHECK(psi(cx, h2, psi_inverse(cx, h, x)) == gauge_operator_apply(rh, s, x, Scalar(-1)));
            }
    }

    SUBCASE("the core-anchor component is the target map") {
        HorizontalLift h = random_lift(rng, v);
        Ruth2 rh = extract_components(v, h);
        for (std::size_t i = 0; i < mixed_dim(r, -1); ++i) {
            MixedCochain x = unflatten_mixed(r, -1, unit_vector(mixed_dim(r, -1), i, Q));
            MixedCochain y = transferred_operator(cx, h, x);
            for (ObjectId o = 0; o < G.num_objects(); ++o) CHECK(y.e.values[o] == rh.partial[o] * x.c.values[o]);
        }
    }
}
