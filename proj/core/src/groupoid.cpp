#include "vbg/groupoid.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "vbg/errors.hpp"

namespace vbg {

struct FiniteGroupoid::Data {
    std::vector<std::string> objects, arrows;
    std::map<std::string, ObjectId> object_index;
    std::map<std::string, ArrowId> arrow_index;
    std::vector<ObjectId> src, tgt;
    std::vector<ArrowId> unit, inv;
    std::vector<long> comp;  // num_arrows^2, -1 where undefined

    mutable std::mutex mu;
    mutable std::vector<std::unique_ptr<Nerve>> nerves;
};

Nerve::Nerve(int degree, std::vector<ArrowId> flat, std::vector<ObjectId> first, std::vector<ObjectId> last,
             std::vector<bool> degenerate)
    : degree_(degree),
      flat_(std::move(flat)),
      first_(std::move(first)),
      last_(std::move(last)),
      degenerate_(std::move(degenerate)) {}

std::span<const ArrowId> Nerve::tuple(std::size_t k) const {
    return {flat_.data() + k * static_cast<std::size_t>(degree_), static_cast<std::size_t>(degree_)};
}

std::size_t Nerve::index(std::span<const ArrowId> t) const {
    std::size_t p = static_cast<std::size_t>(degree_);
    if (t.size() != p || p == 0) throw Error("NotInNerve", "tuple length does not match nerve degree");
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        auto m = tuple(mid);
        if (std::lexicographical_compare(m.begin(), m.end(), t.begin(), t.end()))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == size() || !std::equal(t.begin(), t.end(), tuple(lo).begin()))
        throw Error("NotInNerve", "tuple is not composable");
    return lo;
}

FiniteGroupoid::FiniteGroupoid() : d_(std::make_shared<Data>()) {}
FiniteGroupoid::FiniteGroupoid(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

std::size_t FiniteGroupoid::num_objects() const { return d_->objects.size(); }
std::size_t FiniteGroupoid::num_arrows() const { return d_->arrows.size(); }
const std::string& FiniteGroupoid::object_name(ObjectId x) const { return d_->objects.at(x); }
const std::string& FiniteGroupoid::arrow_name(ArrowId g) const { return d_->arrows.at(g); }

std::optional<ObjectId> FiniteGroupoid::find_object(const std::string& name) const {
    auto it = d_->object_index.find(name);
    if (it == d_->object_index.end()) return std::nullopt;
    return it->second;
}

std::optional<ArrowId> FiniteGroupoid::find_arrow(const std::string& name) const {
    auto it = d_->arrow_index.find(name);
    if (it == d_->arrow_index.end()) return std::nullopt;
    return it->second;
}

ObjectId FiniteGroupoid::src(ArrowId g) const { return d_->src[g]; }
ObjectId FiniteGroupoid::tgt(ArrowId g) const { return d_->tgt[g]; }
ArrowId FiniteGroupoid::unit(ObjectId x) const { return d_->unit[x]; }
ArrowId FiniteGroupoid::inv(ArrowId g) const { return d_->inv[g]; }
bool FiniteGroupoid::is_unit(ArrowId g) const { return d_->unit[d_->src[g]] == g; }
bool FiniteGroupoid::composable(ArrowId g1, ArrowId g2) const { return d_->src[g1] == d_->tgt[g2]; }

ArrowId FiniteGroupoid::compose(ArrowId g1, ArrowId g2) const {
    if (!composable(g1, g2))
        throw Error("NotComposable", arrow_name(g1) + " . " + arrow_name(g2) + ": source of the first is not the target of the second");
    return static_cast<ArrowId>(d_->comp[g1 * num_arrows() + g2]);
}

const Nerve& FiniteGroupoid::nerve(int p) const {
    if (p < 0) throw Error("BadDegree", "negative nerve degree");
    std::lock_guard<std::mutex> lock(d_->mu);
    auto& cache = d_->nerves;
    if (cache.size() <= static_cast<std::size_t>(p)) cache.resize(p + 1);
    if (cache[p]) return *cache[p];

    std::vector<ArrowId> flat;
    std::vector<ObjectId> first, last;
    std::vector<bool> degenerate;
    if (p == 0) {
        for (ObjectId x = 0; x < num_objects(); ++x) {
            first.push_back(x);
            last.push_back(x);
            degenerate.push_back(false);
        }
    } else {
        std::vector<ArrowId> cur;
        auto rec = [&](auto&& self) -> void {
            if (cur.size() == static_cast<std::size_t>(p)) {
                flat.insert(flat.end(), cur.begin(), cur.end());
                first.push_back(tgt(cur.front()));
                last.push_back(src(cur.back()));
                degenerate.push_back(std::any_of(cur.begin(), cur.end(), [&](ArrowId g) { return is_unit(g); }));
                return;
            }
            for (ArrowId g = 0; g < num_arrows(); ++g) {
                if (!cur.empty() && src(cur.back()) != tgt(g)) continue;
                cur.push_back(g);
                self(self);
                cur.pop_back();
            }
        };
        rec(rec);
    }
    cache[p] = std::make_unique<Nerve>(p, std::move(flat), std::move(first), std::move(last), std::move(degenerate));
    return *cache[p];
}

std::string FiniteGroupoid::tuple_key(int p, std::size_t k) const {
    const Nerve& n = nerve(p);
    if (p == 0) return object_name(n.first_vertex(k));
    std::string key;
    for (ArrowId g : n.tuple(k)) key += (key.empty() ? "" : ",") + arrow_name(g);
    return key;
}

GroupoidTables FiniteGroupoid::tables() const {
    GroupoidTables t;
    t.objects = d_->objects;
    for (ArrowId g = 0; g < num_arrows(); ++g) t.arrows.push_back({arrow_name(g), object_name(src(g)), object_name(tgt(g))});
    for (ArrowId g1 = 0; g1 < num_arrows(); ++g1)
        for (ArrowId g2 = 0; g2 < num_arrows(); ++g2)
            if (composable(g1, g2)) t.comp.push_back({arrow_name(g1), arrow_name(g2), arrow_name(compose(g1, g2))});
    for (ObjectId x = 0; x < num_objects(); ++x) t.unit[object_name(x)] = arrow_name(unit(x));
    for (ArrowId g = 0; g < num_arrows(); ++g) t.inv[arrow_name(g)] = arrow_name(inv(g));
    return t;
}

bool operator==(const FiniteGroupoid& a, const FiniteGroupoid& b) {
    if (a.d_ == b.d_) return true;
    return a.d_->objects == b.d_->objects && a.d_->arrows == b.d_->arrows && a.d_->src == b.d_->src &&
           a.d_->tgt == b.d_->tgt && a.d_->comp == b.d_->comp;
}

FiniteGroupoid validate_groupoid(const GroupoidTables& raw) {
    auto d = std::make_shared<FiniteGroupoid::Data>();
    auto unknown = [](const std::string& what) { throw Error("UnknownId", what); };

    for (const auto& x : raw.objects) {
        if (d->object_index.count(x)) unknown("duplicate object id '" + x + "'");
        d->object_index[x] = d->objects.size();
        d->objects.push_back(x);
    }
    for (const auto& a : raw.arrows) {
        if (d->arrow_index.count(a.id)) unknown("duplicate arrow id '" + a.id + "'");
        auto s = d->object_index.find(a.src), t = d->object_index.find(a.tgt);
        if (s == d->object_index.end() || t == d->object_index.end())
            unknown("arrow '" + a.id + "' references an undeclared object");
        d->arrow_index[a.id] = d->arrows.size();
        d->arrows.push_back(a.id);
        d->src.push_back(s->second);
        d->tgt.push_back(t->second);
    }
    auto arrow = [&](const std::string& id) {
        auto it = d->arrow_index.find(id);
        if (it == d->arrow_index.end()) unknown("undeclared arrow id '" + id + "'");
        return it->second;
    };

    std::size_t m = d->arrows.size();
    std::vector<Violation> bad;
    d->comp.assign(m * m, -1);
    for (const auto& c : raw.comp) {
        ArrowId g1 = arrow(c[0]), g2 = arrow(c[1]), g12 = arrow(c[2]);
        if (d->src[g1] != d->tgt[g2]) {
            bad.push_back({"CompositionDomainMismatch", {c[0], c[1]}, "entry for a non-composable pair"});
            continue;
        }
        if (d->src[g12] != d->src[g2] || d->tgt[g12] != d->tgt[g1]) {
            bad.push_back({"CompositionDomainMismatch", {c[0], c[1], c[2]}, "composite has wrong endpoints"});
            continue;
        }
        long& slot = d->comp[g1 * m + g2];
        if (slot >= 0 && slot != static_cast<long>(g12))
            bad.push_back({"CompositionDomainMismatch", {c[0], c[1]}, "conflicting entries"});
        slot = static_cast<long>(g12);
    }
    bool complete = bad.empty();
    for (ArrowId g1 = 0; g1 < m; ++g1)
        for (ArrowId g2 = 0; g2 < m; ++g2)
            if (d->src[g1] == d->tgt[g2] && d->comp[g1 * m + g2] < 0) {
                bad.push_back({"CompositionDomainMismatch", {d->arrows[g1], d->arrows[g2]}, "missing composite"});
                complete = false;
            }
    if (!complete) throw ValidationError("composition table is not a partial composition on G", bad);

    auto comp = [&](ArrowId a, ArrowId b) { return static_cast<ArrowId>(d->comp[a * m + b]); };

    for (ArrowId g1 = 0; g1 < m; ++g1)
        for (ArrowId g2 = 0; g2 < m; ++g2) {
            if (d->src[g1] != d->tgt[g2]) continue;
            for (ArrowId g3 = 0; g3 < m; ++g3)
                if (d->src[g2] == d->tgt[g3] && comp(comp(g1, g2), g3) != comp(g1, comp(g2, g3)))
                    bad.push_back({"NonAssociative", {d->arrows[g1], d->arrows[g2], d->arrows[g3]}, ""});
        }

    auto is_left_right_unit = [&](ArrowId u, ObjectId x) {
        if (d->src[u] != x || d->tgt[u] != x) return false;
        for (ArrowId g = 0; g < m; ++g) {
            if (d->tgt[g] == x && comp(u, g) != g) return false;
            if (d->src[g] == x && comp(g, u) != g) return false;
        }
        return true;
    };
    bool units_ok = true;
    d->unit.assign(d->objects.size(), 0);
    for (ObjectId x = 0; x < d->objects.size(); ++x) {
        auto it = raw.unit.find(d->objects[x]);
        if (it != raw.unit.end()) {
            ArrowId u = arrow(it->second);
            if (!is_left_right_unit(u, x)) {
                bad.push_back({"MissingUnit", {d->objects[x]}, "declared unit '" + it->second + "' is not a two-sided unit"});
                units_ok = false;
            }
            d->unit[x] = u;
            continue;
        }
        bool found = false;
        for (ArrowId u = 0; u < m && !found; ++u)
            if (is_left_right_unit(u, x)) d->unit[x] = u, found = true;
        if (!found) {
            bad.push_back({"MissingUnit", {d->objects[x]}, "no two-sided unit"});
            units_ok = false;
        }
    }

    d->inv.assign(m, 0);
    if (units_ok) {
        auto is_inverse = [&](ArrowId g, ArrowId h) {
            return d->src[h] == d->tgt[g] && d->tgt[h] == d->src[g] && comp(g, h) == d->unit[d->tgt[g]] &&
                   comp(h, g) == d->unit[d->src[g]];
        };
        for (ArrowId g = 0; g < m; ++g) {
            auto it = raw.inv.find(d->arrows[g]);
            if (it != raw.inv.end()) {
                ArrowId h = arrow(it->second);
                if (!is_inverse(g, h)) bad.push_back({"BadInverse", {d->arrows[g]}, "declared inverse fails"});
                d->inv[g] = h;
                continue;
            }
            bool found = false;
            for (ArrowId h = 0; h < m && !found; ++h)
                if (is_inverse(g, h)) d->inv[g] = h, found = true;
            if (!found) bad.push_back({"BadInverse", {d->arrows[g]}, "no inverse"});
        }
    }
    if (!bad.empty()) throw ValidationError("groupoid axioms fail", bad);
    return FiniteGroupoid(std::shared_ptr<const FiniteGroupoid::Data>(std::move(d)));
}

ArrowId compose(const FiniteGroupoid& G, ArrowId g1, ArrowId g2) { return G.compose(g1, g2); }

const Nerve& nerve(const FiniteGroupoid& G, int p) { return G.nerve(p); }

std::vector<ArrowId> face(const FiniteGroupoid& G, std::span<const ArrowId> t, int i) {
    int p = static_cast<int>(t.size());
    std::vector<ArrowId> out;
    out.reserve(t.size());
    for (int k = 0; k < p; ++k) {
        if (k == i - 1 && i >= 1 && i < p) {
            out.push_back(G.compose(t[k], t[k + 1]));
            ++k;
        } else if (!((i == 0 && k == 0) || (i == p && k == p - 1))) {
            out.push_back(t[k]);
        }
    }
    return out;
}

FiniteGroupoid pair_groupoid(std::size_t n) {
    GroupoidTables t;
    auto name = [](std::size_t y, std::size_t x) { return "(" + std::to_string(y) + "," + std::to_string(x) + ")"; };
    for (std::size_t x = 0; x < n; ++x) t.objects.push_back(std::to_string(x));
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x) t.arrows.push_back({name(y, x), std::to_string(x), std::to_string(y)});
    for (std::size_t z = 0; z < n; ++z)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t x = 0; x < n; ++x) t.comp.push_back({name(z, y), name(y, x), name(z, x)});
    return validate_groupoid(t);
}

FiniteGroupoid cyclic_group(std::size_t n) {
    if (n == 0) throw Error("BadParameter", "cyclic group of order 0");
    GroupoidTables t;
    auto name = [](std::size_t k) { return k == 0 ? std::string("1") : k == 1 ? std::string("a") : "a^" + std::to_string(k); };
    t.objects.push_back("*");
    for (std::size_t k = 0; k < n; ++k) t.arrows.push_back({name(k), "*", "*"});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t.comp.push_back({name(i), name(j), name((i + j) % n)});
    return validate_groupoid(t);
}

FiniteGroupoid action_groupoid(const FiniteGroupoid& group, std::size_t points,
                               const std::vector<std::vector<std::size_t>>& action) {
    if (group.num_objects() != 1) throw Error("BadActionTable", "acting groupoid must have exactly one object");
    std::size_t m = group.num_arrows();
    std::vector<Violation> bad;
    if (action.size() != m) throw Error("BadActionTable", "one row per group element expected");
    for (const auto& row : action)
        if (row.size() != points || std::any_of(row.begin(), row.end(), [&](std::size_t y) { return y >= points; }))
            throw Error("BadActionTable", "action row has wrong length or image out of range");
    ArrowId e = group.unit(0);
    for (std::size_t x = 0; x < points; ++x)
        if (action[e][x] != x) bad.push_back({"BadActionTable", {group.arrow_name(e), std::to_string(x)}, "unit moves a point"});
    for (ArrowId h = 0; h < m; ++h)
        for (ArrowId g = 0; g < m; ++g)
            for (std::size_t x = 0; x < points; ++x)
                if (action[group.compose(h, g)][x] != action[h][action[g][x]])
                    bad.push_back({"BadActionTable", {group.arrow_name(h), group.arrow_name(g), std::to_string(x)},
                                   "(hg).x != h.(g.x)"});
    if (!bad.empty()) throw ValidationError("not a group action", bad);

    GroupoidTables t;
    auto name = [&](ArrowId g, std::size_t x) { return "(" + group.arrow_name(g) + "," + std::to_string(x) + ")"; };
    for (std::size_t x = 0; x < points; ++x) t.objects.push_back(std::to_string(x));
    for (ArrowId g = 0; g < m; ++g)
        for (std::size_t x = 0; x < points; ++x)
            t.arrows.push_back({name(g, x), std::to_string(x), std::to_string(action[g][x])});
    for (ArrowId h = 0; h < m; ++h)
        for (ArrowId g = 0; g < m; ++g)
            for (std::size_t x = 0; x < points; ++x)
                t.comp.push_back({name(h, action[g][x]), name(g, x), name(group.compose(h, g), x)});
    return validate_groupoid(t);
}

FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b) {
    GroupoidTables t;
    auto add = [&](const FiniteGroupoid& G, const std::string& tag) {
        GroupoidTables s = G.tables();
        for (const auto& x : s.objects) t.objects.push_back(tag + x);
        for (const auto& g : s.arrows) t.arrows.push_back({tag + g.id, tag + g.src, tag + g.tgt});
        for (const auto& c : s.comp) t.comp.push_back({tag + c[0], tag + c[1], tag + c[2]});
    };
    add(a, "L");
    add(b, "R");
    return validate_groupoid(t);
}

FiniteGroupoid unit_groupoid(std::size_t n) {
    GroupoidTables t;
    for (std::size_t x = 0; x < n; ++x) {
        t.objects.push_back(std::to_string(x));
        t.arrows.push_back({"1_" + std::to_string(x), std::to_string(x), std::to_string(x)});
        t.comp.push_back({"1_" + std::to_string(x), "1_" + std::to_string(x), "1_" + std::to_string(x)});
    }
    return validate_groupoid(t);
}

}  // namespace vbg
