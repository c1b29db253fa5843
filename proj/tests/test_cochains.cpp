#include <doctest.h>

#include "bar_oracle.hpp"
#include "support.hpp"
#include "vbg/generate.hpp"

using namespace vt;

namespace {

ScalarCochain basis_scalar(const FiniteGroupoid& G, int p, std::size_t k, Field f) {
    ScalarCochain c = zero_scalar_cochain(G, p, f);
    c.values[k] = Scalar(1).in(f);
    return c;
}

bool all_zero(const ScalarCochain& c) {
    for (const Scalar& s : c.values)
        if (!s.is_zero()) return false;
    return true;
}

}  // namespace

TEST_CASE("scalar coboundary of an object indicator on pair(2)") {
    FiniteGroupoid G = pair_groupoid(2);
    ScalarCochain f = basis_scalar(G, 0, 0, Q);
    ScalarCochain df = scalar_coboundary(G, f);
    CHECK(df.values[arrow(G, "(0,1)")] == Scalar(-1));
    CHECK(df.values[arrow(G, "(1,0)")] == Scalar(1));
    CHECK(df.values[arrow(G, "(0,0)")].is_zero());
}

TEST_CASE("scalar coboundary squares to zero through degree 3") {
    for (const auto& [name, G] : corpus_groupoids()) {
        CAPTURE(name);
        for (int p = 0; p <= 2; ++p)
            for (std::size_t k = 0; k < G.nerve(p).size(); ++k)
                CHECK(all_zero(scalar_coboundary(G, scalar_coboundary(G, basis_scalar(G, p, k, Q)))));
    }
}

TEST_CASE("the generator of Z/2 over F2 is a 1-cocycle") {
    FiniteGroupoid G = cyclic_group(2);
    ScalarCochain f = zero_scalar_cochain(G, 1, F2);
    f.values[arrow(G, "a")] = Scalar(1).in(F2);
    CHECK(all_zero(scalar_coboundary(G, f)));
}

TEST_CASE("star product in degree zero is pointwise") {
    FiniteGroupoid G = pair_groupoid(2);
    ScalarCochain a = zero_scalar_cochain(G, 0, Q), b = zero_scalar_cochain(G, 0, Q);
    a.values = {Scalar(2), Scalar(3)};
    b.values = {Scalar(5), Scalar(-1)};
    ScalarCochain c = star_product(G, a, b);
    CHECK(c.values[0] == Scalar(10));
    CHECK(c.values[1] == Scalar(-3));

    VectorBundle E = VectorBundle::constant(G, 2, Q);
    VectorCochain eps = zero_cochain(G, E, 0);
    eps.values = {{Scalar(1), Scalar(2)}, {Scalar(0), Scalar(1)}};
    VectorCochain scaled = star_product(G, eps, a);
    CHECK(scaled.values[0] == Vector{Scalar(2), Scalar(4)});
    CHECK(scaled.values[1] == Vector{Scalar(0), Scalar(3)});
}

TEST_CASE("normalized cochains are closed under star product and coboundary") {
    FiniteGroupoid p2 = pair_groupoid(2);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            ScalarCochain a = basis_scalar(p2, 1, i, Q), b = basis_scalar(p2, 1, j, Q);
            if (!is_normalized(p2, a) || !is_normalized(p2, b)) continue;
            CHECK(is_normalized(p2, star_product(p2, a, b)));
        }

    FiniteGroupoid c3 = cyclic_group(3);
    for (int p = 0; p <= 2; ++p)
        for (std::size_t k = 0; k < c3.nerve(p).size(); ++k) {
            ScalarCochain f = basis_scalar(c3, p, k, Q);
            if (is_normalized(c3, f)) CHECK(is_normalized(c3, scalar_coboundary(c3, f)));
        }
}

TEST_CASE("normalization") {
    FiniteGroupoid z2 = cyclic_group(2);
    ScalarCochain zero_deg = zero_scalar_cochain(z2, 0, Q);
    zero_deg.values[0] = Scalar(7);
    CHECK(is_normalized(z2, zero_deg));
    ScalarCochain f = zero_scalar_cochain(z2, 1, Q);
    f.values[arrow(z2, "1")] = Scalar(1);
    CHECK_FALSE(is_normalized(z2, f));
}

TEST_CASE("vector coboundary") {
    FiniteGroupoid G = pair_groupoid(2);
    VectorBundle E = VectorBundle::constant(G, 1, Q);

    SUBCASE("identity action kills constant sections") {
        VectorCochain eps = zero_cochain(G, E, 0);
        eps.values = {{Scalar(4)}, {Scalar(4)}};
        CHECK(is_zero(vector_coboundary(QuasiAction::identity(G, E), eps)));
    }

    SUBCASE("curvature of a non-flat action appears in D squared") {
        QuasiAction d = scalar_action(G, {{"(1,0)", 2}, {"(0,1)", 3}});
        CHECK_FALSE(d.is_flat());
        VectorCochain eps = zero_cochain(G, E, 0);
        eps.values = {{Scalar(1)}, {Scalar(1)}};
        VectorCochain dd = vector_coboundary(d, vector_coboundary(d, eps));
        CHECK(dd.values[tuple_index(G, {arrow(G, "(0,1)"), arrow(G, "(1,0)")})] == Vector{Scalar(5)});
    }

    SUBCASE("flat unital actions square to zero through degree 2") {
        Rng rng(11);
        VectorBundle E2 = VectorBundle::constant(G, 2, Q);
        QuasiAction d = random_representation(rng, G, E2);
        REQUIRE(d.is_representation());
        for (int p = 0; p <= 2; ++p)
            for (std::size_t i = 0; i < cochain_dim(G, E2, p); ++i) {
                VectorCochain x = unflatten(G, E2, p, unit_vector(cochain_dim(G, E2, p), i, Q));
                CHECK(is_zero(vector_coboundary(d, vector_coboundary(d, x))));
            }
    }
}

TEST_CASE("transformation apply") {
    FiniteGroupoid G = pair_groupoid(2);
    VectorBundle E = VectorBundle::constant(G, 2, Q);

    SUBCASE("identity in degree zero acts as the identity") {
        TransformationCochain id{0, {Matrix::identity(2), Matrix::identity(2)}};
        Rng rng(3);
        for (int p = 0; p <= 2; ++p) {
            Vector v;
            for (std::size_t i = 0; i < cochain_dim(G, E, p); ++i) v.push_back(random_scalar(rng, Q));
            VectorCochain x = unflatten(G, E, p, v);
            CHECK(transformation_apply(G, id, E, x) == x);
        }
    }

    SUBCASE("module morphism") {
        Rng rng(5);
        TransformationCochain w = random_sigma(rng, G, E, E);
        for (std::size_t k = 0; k < 4; ++k) {
            VectorCochain eps = unflatten(G, E, 0, unit_vector(4, k, Q));
            for (std::size_t j = 0; j < 4; ++j) {
                ScalarCochain f = basis_scalar(G, 1, j, Q);
                CHECK(transformation_apply(G, w, E, star_product(G, eps, f)) ==
                      star_product(G, transformation_apply(G, w, E, eps), f));
            }
        }
    }

    SUBCASE("degree 2 on degree 1 over Z/2") {
        FiniteGroupoid z2 = cyclic_group(2);
        VectorBundle one = VectorBundle::constant(z2, 1, Q);
        TransformationCochain w = zero_transformation(z2, one, one, 2);
        for (std::size_t k = 0; k < 4; ++k) w.values[k] = one_by_one(static_cast<long>(k + 2));
        VectorCochain x = zero_cochain(z2, one, 1);
        x.values = {{Scalar(3)}, {Scalar(-1)}};
        VectorCochain y = transformation_apply(z2, w, one, x);
        REQUIRE(y.degree == 3);
        const Nerve& n3 = z2.nerve(3);
        for (std::size_t k = 0; k < n3.size(); ++k) {
            auto t = n3.tuple(k);
            Scalar expect = w.values[tuple_index(z2, {t[0], t[1]})](0, 0) * x.values[t[2]][0];
            CHECK(y.values[k][0] == expect);
        }
    }
}

TEST_CASE("transformation coboundary") {
    FiniteGroupoid z2 = cyclic_group(2);
    VectorBundle one = VectorBundle::constant(z2, 1, F2);
    QuasiAction id = QuasiAction::identity(z2, one);

    SUBCASE("trivial actions give the bar formula") {
        Rng rng(2);
        TransformationCochain w = random_sigma(rng, z2, one, one);
        w.values[arrow(z2, "1")] = one_by_one(1, F2);
        TransformationCochain dw = transformation_coboundary(id, id, w);
        const Nerve& n2 = z2.nerve(2);
        for (std::size_t k = 0; k < n2.size(); ++k) {
            auto t = n2.tuple(k);
            Matrix expect = w.values[t[1]] - w.values[z2.compose(t[0], t[1])] + w.values[t[0]];
            CHECK(dw.values[k] == expect);
        }
    }

    SUBCASE("squares to zero on cyclic(3) over Q") {
        FiniteGroupoid c3 = cyclic_group(3);
        VectorBundle E = VectorBundle::constant(c3, 1, Q);
        Rng rng(9);
        QuasiAction a = random_representation(rng, c3, E);
        for (std::size_t i = 0; i < transformation_dim(c3, E, E, 1); ++i) {
            auto s = unflatten_transformation(c3, E, E, 1, unit_vector(3, i, Q));
            CHECK(is_zero(transformation_coboundary(a, a, transformation_coboundary(a, a, s))));
        }
    }

    SUBCASE("the Z/2 generator is closed and not exact over F2") {
        TransformationCochain w = z2_generator(z2, F2);
        CHECK(is_zero(transformation_coboundary(id, id, w)));
        CHECK_FALSE(solve_coboundary(id, id, w).has_value());
    }
}

TEST_CASE("cohomology dimensions") {
    SUBCASE("pair groupoids are acyclic above degree 0") {
        Rng rng(4);
        for (std::size_t n : {2, 3}) {
            FiniteGroupoid G = pair_groupoid(n);
            QuasiAction d = random_representation(rng, G, VectorBundle::constant(G, 2, Q));
            auto h = cohomology_dims(representation_complex(d, 3));
            CHECK(h == std::vector<std::size_t>{2, 0, 0, 0});
        }
    }

    SUBCASE("Z/2 with trivial coefficients") {
        FiniteGroupoid z2 = cyclic_group(2);
        auto f2 = cohomology_dims(representation_complex(QuasiAction::identity(z2, VectorBundle::constant(z2, 1, F2)), 3));
        CHECK(f2 == std::vector<std::size_t>{1, 1, 1, 1});
        CHECK(f2 == bar::cyclic_cohomology(2, 2, 3));
        auto q = cohomology_dims(representation_complex(QuasiAction::identity(z2, VectorBundle::constant(z2, 1, Q)), 3));
        CHECK(q == std::vector<std::size_t>{1, 0, 0, 0});
    }

    SUBCASE("cyclic groups against the bar oracle") {
        for (long n : {3, 4})
            for (long p : {2, 3}) {
                FiniteGroupoid G = cyclic_group(static_cast<std::size_t>(n));
                Field f = Field::prime(static_cast<std::uint32_t>(p));
                auto h = cohomology_dims(representation_complex(QuasiAction::identity(G, VectorBundle::constant(G, 1, f)), 3));
                CHECK(h == bar::cyclic_cohomology(n, p, 3));
            }
    }

    SUBCASE("normalized and full complexes agree") {
        FiniteGroupoid G = action_groupoid(cyclic_group(2), 2, {{0, 1}, {1, 0}});
        QuasiAction id = QuasiAction::identity(G, VectorBundle::constant(G, 1, F2));
        CHECK(cohomology_dims(representation_complex(id, 3, true)) ==
              cohomology_dims(representation_complex(id, 3, false)));
    }
}
