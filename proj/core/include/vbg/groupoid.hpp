#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vbg {

using ObjectId = std::size_t;
using ArrowId = std::size_t;

// Structure tables as read from a document: everything keyed by name.
struct GroupoidTables {
    struct Arrow {
        std::string id, src, tgt;
    };
    std::vector<std::string> objects;
    std::vector<Arrow> arrows;
    std::vector<std::array<std::string, 3>> comp;  // (g1, g2, g1 g2)
    std::map<std::string, std::string> unit;       // may be empty: inferred
    std::map<std::string, std::string> inv;        // may be empty: inferred
};

// Composable p-tuples (g_1, ..., g_p) with src(g_i) = tgt(g_{i+1}), in
// lexicographic order of arrow indices. Degree 0 lists the objects.
class Nerve {
public:
    Nerve(int degree, std::vector<ArrowId> flat, std::vector<ObjectId> first, std::vector<ObjectId> last,
          std::vector<bool> degenerate);

    int degree() const { return degree_; }
    std::size_t size() const { return first_.size(); }
    std::span<const ArrowId> tuple(std::size_t k) const;
    ObjectId first_vertex(std::size_t k) const { return first_[k]; }  // tgt(g_1)
    ObjectId last_vertex(std::size_t k) const { return last_[k]; }    // src(g_p)
    bool degenerate(std::size_t k) const { return degenerate_[k]; }   // contains a unit
    std::size_t index(std::span<const ArrowId> t) const;              // degree >= 1

private:
    int degree_;
    std::vector<ArrowId> flat_;
    std::vector<ObjectId> first_, last_;
    std::vector<bool> degenerate_;
};

class FiniteGroupoid {
public:
    FiniteGroupoid();

    std::size_t num_objects() const;
    std::size_t num_arrows() const;
    const std::string& object_name(ObjectId x) const;
    const std::string& arrow_name(ArrowId g) const;
    std::optional<ObjectId> find_object(const std::string& name) const;
    std::optional<ArrowId> find_arrow(const std::string& name) const;

    ObjectId src(ArrowId g) const;
    ObjectId tgt(ArrowId g) const;
    ArrowId unit(ObjectId x) const;
    ArrowId inv(ArrowId g) const;
    bool is_unit(ArrowId g) const;
    bool composable(ArrowId g1, ArrowId g2) const;
    ArrowId compose(ArrowId g1, ArrowId g2) const;  // throws NotComposable

    const Nerve& nerve(int p) const;
    std::string tuple_key(int p, std::size_t k) const;  // "g1,g2,..." or object name
    GroupoidTables tables() const;

    friend bool operator==(const FiniteGroupoid& a, const FiniteGroupoid& b);

private:
    struct Data;
    explicit FiniteGroupoid(std::shared_ptr<const Data> d);
    std::shared_ptr<const Data> d_;

    friend FiniteGroupoid validate_groupoid(const GroupoidTables& raw);
};

// Throws ValidationError listing MissingUnit, NonAssociative, BadInverse and
// CompositionDomainMismatch violations.
FiniteGroupoid validate_groupoid(const GroupoidTables& raw);

ArrowId compose(const FiniteGroupoid& G, ArrowId g1, ArrowId g2);
const Nerve& nerve(const FiniteGroupoid& G, int p);

// Face d_i of a tuple: i = 0 drops g_1, i = p drops g_p, otherwise composes g_i g_{i+1}.
std::vector<ArrowId> face(const FiniteGroupoid& G, std::span<const ArrowId> t, int i);

FiniteGroupoid pair_groupoid(std::size_t n);
FiniteGroupoid cyclic_group(std::size_t n);
// action[g][x] is the image of object x under group arrow g (group has one object).
FiniteGroupoid action_groupoid(const FiniteGroupoid& group, std::size_t points,
                               const std::vector<std::vector<std::size_t>>& action);
FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b);
FiniteGroupoid unit_groupoid(std::size_t n);

}  // namespace vbg
