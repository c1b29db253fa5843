#pragma once

#include <random>
#include <string>
#include <vector>

#include "vbg/vbgroupoid.hpp"

namespace vbg {

using Rng = std::mt19937_64;

// Small entries: integers in [-bound, bound] over Q, uniform residues over F_p.
Scalar random_scalar(Rng& rng, Field f, int bound = 3);
Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, Field f);
Matrix random_invertible(Rng& rng, std::size_t n, Field f);

// Connected components as lists of objects, each starting with its root.
std::vector<std::vector<ObjectId>> components(const FiniteGroupoid& G);

// Unital with arbitrary matrices elsewhere; usually not flat.
QuasiAction random_quasiaction(Rng& rng, const FiniteGroupoid& G, const VectorBundle& E);
// Flat and unital: sign characters of the isotropy at each root, spread
// along direct arrows and conjugated by random frames. Fiber dims must be
// constant on components.
QuasiAction random_representation(Rng& rng, const FiniteGroupoid& G, const VectorBundle& E);
TransformationCochain random_sigma(Rng& rng, const FiniteGroupoid& G, const VectorBundle& E, const VectorBundle& C);
// Random normalized cocycle in C^2(G; E -> C) for representations dE, dC.
TransformationCochain random_cocycle(Rng& rng, const QuasiAction& dE, const QuasiAction& dC);

// Per-object block sizes: C = K + F and E = nu + F.
struct RuthShape {
    std::vector<std::size_t> k, nu, f;
};
RuthShape random_shape(Rng& rng, const FiniteGroupoid& G, std::size_t max_block = 1);
// Type 0 + type 1 block form, conjugated by random frames and gauged.
Ruth2 random_ruth2(Rng& rng, const FiniteGroupoid& G, Field f, const RuthShape& shape);
Ruth2 random_ruth2(Rng& rng, const FiniteGroupoid& G, Field f);
// Adds a nonzero amount to one entry of one component.
Ruth2 perturb(Rng& rng, const Ruth2& r);

HorizontalLift random_lift(Rng& rng, const VBGroupoid& v);

struct NamedGroupoid {
    std::string name;
    FiniteGroupoid G;
};
std::vector<NamedGroupoid> corpus_groupoids();
std::vector<Field> corpus_fields();

struct NamedVBGroupoid {
    std::string name;
    VBGroupoid v;
};
// Standard and built VB-groupoids over G: trivial, action, semidirect,
// a direct sum and one built from a random 2-term object.
std::vector<NamedVBGroupoid> corpus_vbgroupoids(Rng& rng, const FiniteGroupoid& G, Field f);

}  // namespace vbg
