#pragma once

#include <doctest.h>

#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "vbg/vbgroupoid.hpp"

namespace vt {

using namespace vbg;

inline const Field Q = Field::rationals();
inline const Field F2 = Field::prime(2);
inline const Field F3 = Field::prime(3);

inline Matrix mat(std::initializer_list<std::initializer_list<long>> rows, Field f = Q) {
    std::vector<std::vector<Scalar>> r;
    for (auto row : rows) {
        std::vector<Scalar> v;
        for (long x : row) v.push_back(Scalar(x).in(f));
        r.push_back(std::move(v));
    }
    return Matrix::from_rows(r, f);
}

inline Matrix one_by_one(long v, Field f = Q) { return mat({{v}}, f); }

inline ArrowId arrow(const FiniteGroupoid& G, const std::string& name) { return G.find_arrow(name).value(); }

inline std::size_t tuple_index(const FiniteGroupoid& G, std::vector<ArrowId> t) {
    return G.nerve(static_cast<int>(t.size())).index(t);
}

inline bool has_code(const std::vector<Violation>& vs, const std::string& code) {
    for (const auto& v : vs)
        if (v.code == code) return true;
    return false;
}

// Rank-1 quasi-action given by one scalar per arrow, listed by name.
inline QuasiAction scalar_action(const FiniteGroupoid& G, std::initializer_list<std::pair<const char*, long>> vals,
                                 Field f = Q) {
    VectorBundle E = VectorBundle::constant(G, 1, f);
    std::vector<Matrix> maps;
    for (ArrowId g = 0; g < G.num_arrows(); ++g) maps.push_back(one_by_one(1, f));
    for (auto [name, v] : vals) maps[arrow(G, name)] = one_by_one(v, f);
    return QuasiAction(G, E, std::move(maps));
}

// The normalized 2-cocycle of Z/2 supported on (a, a).
inline TransformationCochain z2_generator(const FiniteGroupoid& z2, Field f) {
    VectorBundle one = VectorBundle::constant(z2, 1, f);
    TransformationCochain w = zero_transformation(z2, one, one, 2);
    ArrowId a = arrow(z2, "a");
    w.values[tuple_index(z2, {a, a})] = one_by_one(1, f);
    return w;
}

}  // namespace vt

namespace doctest {
template <>
struct StringMaker<std::vector<std::size_t>> {
    static String convert(const std::vector<std::size_t>& v) {
        std::ostringstream out;
        out << '{';
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
        out << '}';
        return out.str().c_str();
    }
};
}  // namespace doctest
