#include "vbg/io.hpp"

#include <fstream>
#include <map>

namespace vbg::io {
namespace {

[[noreturn]] void malformed(const std::string& msg) { throw Error("MalformedInput", msg); }

const json& member(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) malformed(std::string("missing key \"") + key + "\"");
    return j.at(key);
}

const json& object_member(const json& j, const char* key) {
    const json& m = member(j, key);
    if (!m.is_object()) malformed(std::string("\"") + key + "\" must be an object");
    return m;
}

std::string as_string(const json& j, const std::string& where) {
    if (!j.is_string()) malformed(where + " must be a string");
    return j.get<std::string>();
}

Field field_from(const json& j, Field fallback) {
    if (!j.contains("field")) return fallback;
    try {
        return Field::parse(as_string(j.at("field"), "field"));
    } catch (const Error& e) {
        if (e.code() == "MalformedInput") throw;
        malformed(e.what());
    }
}

ObjectId object_id(const FiniteGroupoid& G, const std::string& name) {
    auto x = G.find_object(name);
    if (!x) malformed("unknown object '" + name + "'");
    return *x;
}

// Values keyed by tuple key; every tuple of the nerve must be present.
std::vector<const json*> by_tuple(const json& values, const FiniteGroupoid& G, int p, const std::string& what) {
    if (!values.is_object()) malformed(what + " must be an object keyed by tuples");
    const Nerve& n = G.nerve(p);
    std::map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < n.size(); ++k) index[G.tuple_key(p, k)] = k;
    std::vector<const json*> out(n.size(), nullptr);
    for (const auto& [key, val] : values.items()) {
        auto it = index.find(key);
        if (it == index.end()) malformed(what + ": '" + key + "' is not a composable " + std::to_string(p) + "-tuple");
        out[it->second] = &val;
    }
    for (std::size_t k = 0; k < n.size(); ++k)
        if (!out[k]) malformed(what + ": missing entry for '" + G.tuple_key(p, k) + "'");
    return out;
}

std::vector<const json*> by_arrow(const json& values, const FiniteGroupoid& G, const std::string& what) {
    return by_tuple(values, G, 1, what);
}

std::vector<const json*> by_object(const json& values, const FiniteGroupoid& G, const std::string& what) {
    if (!values.is_object()) malformed(what + " must be an object keyed by objects");
    std::vector<const json*> out(G.num_objects(), nullptr);
    for (const auto& [key, val] : values.items()) out[object_id(G, key)] = &val;
    for (ObjectId x = 0; x < G.num_objects(); ++x)
        if (!out[x]) malformed(what + ": missing entry for object '" + G.object_name(x) + "'");
    return out;
}

json arrow_map(const FiniteGroupoid& G, const std::vector<Matrix>& ms) {
    json out = json::object();
    for (ArrowId g = 0; g < G.num_arrows(); ++g) out[G.arrow_name(g)] = to_json(ms[g]);
    return out;
}

json object_map(const FiniteGroupoid& G, const std::vector<Matrix>& ms) {
    json out = json::object();
    for (ObjectId x = 0; x < G.num_objects(); ++x) out[G.object_name(x)] = to_json(ms[x]);
    return out;
}

std::size_t as_size(const json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long>() >= 0))
        malformed(where + " must be a nonnegative integer");
    return j.get<std::size_t>();
}

}  // namespace

json to_json(const FiniteGroupoid& G) {
    GroupoidTables t = G.tables();
    json arrows = json::array();
    for (const auto& a : t.arrows) arrows.push_back({{"id", a.id}, {"src", a.src}, {"tgt", a.tgt}});
    json comp = json::array();
    for (const auto& c : t.comp) comp.push_back({c[0], c[1], c[2]});
    return {{"objects", t.objects}, {"arrows", arrows}, {"comp", comp}, {"unit", t.unit}, {"inv", t.inv}};
}

FiniteGroupoid groupoid_from_json(const json& j) {
    GroupoidTables t;
    const json& objs = member(j, "objects");
    if (!objs.is_array()) malformed("\"objects\" must be an array");
    for (const json& o : objs) t.objects.push_back(as_string(o, "object id"));
    const json& arrows = member(j, "arrows");
    if (!arrows.is_array()) malformed("\"arrows\" must be an array");
    for (const json& a : arrows)
        t.arrows.push_back({as_string(member(a, "id"), "arrow id"), as_string(member(a, "src"), "arrow src"),
                            as_string(member(a, "tgt"), "arrow tgt")});
    const json& comp = member(j, "comp");
    if (!comp.is_array()) malformed("\"comp\" must be an array");
    for (const json& c : comp) {
        if (!c.is_array() || c.size() != 3) malformed("composition entries are [g1, g2, g1g2] triples");
        t.comp.push_back({as_string(c[0], "comp entry"), as_string(c[1], "comp entry"), as_string(c[2], "comp entry")});
    }
    for (const char* key : {"unit", "inv"}) {
        if (!j.contains(key)) continue;
        auto& table = std::string(key) == "unit" ? t.unit : t.inv;
        for (const auto& [k, v] : object_member(j, key).items()) table[k] = as_string(v, key);
    }
    return validate_groupoid(t);
}

json to_json(const Scalar& s) { return s.to_string(); }

Scalar scalar_from_json(const json& j, Field f) {
    std::string text;
    if (j.is_string())
        text = j.get<std::string>();
    else if (j.is_number_integer())
        text = std::to_string(j.get<long>());
    else
        malformed("field elements must be strings or integers, got " + j.dump());
    try {
        return Scalar::parse(text, f);
    } catch (const Error& e) {
        malformed(e.what());
    }
}

json to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).to_string());
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols, Field f) {
    auto shape = [&] { return std::to_string(rows) + "x" + std::to_string(cols); };
    if (!j.is_array() || j.size() != rows) malformed("expected a " + shape() + " matrix, got " + j.dump());
    Matrix m(rows, cols, f);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) malformed("expected a " + shape() + " matrix, got " + j.dump());
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = scalar_from_json(j[i][k], f);
    }
    return m;
}

json to_json(const FiniteGroupoid& G, const VectorBundle& E) {
    json dims = json::object();
    for (ObjectId x = 0; x < G.num_objects(); ++x) dims[G.object_name(x)] = E.dim(x);
    return {{"dims", dims}, {"field", E.field.to_string()}};
}

VectorBundle bundle_from_json(const json& j, const FiniteGroupoid& G, Field fallback) {
    VectorBundle E{std::vector<std::size_t>(G.num_objects()), field_from(j, fallback)};
    auto dims = by_object(member(j, "dims"), G, "dims");
    for (ObjectId x = 0; x < G.num_objects(); ++x) E.dims[x] = as_size(*dims[x], "dimension");
    return E;
}

json to_json(const FiniteGroupoid& G, const VectorCochain& x) {
    json values = json::object();
    for (std::size_t k = 0; k < x.values.size(); ++k) {
        json v = json::array();
        for (const Scalar& s : x.values[k]) v.push_back(s.to_string());
        values[G.tuple_key(x.degree, k)] = v;
    }
    return {{"degree", x.degree}, {"values", values}};
}

VectorCochain vector_cochain_from_json(const json& j, const FiniteGroupoid& G, const VectorBundle& E) {
    int p = static_cast<int>(as_size(member(j, "degree"), "degree"));
    auto vals = by_tuple(member(j, "values"), G, p, "cochain values");
    const Nerve& n = G.nerve(p);
    VectorCochain x{p, {}};
    for (std::size_t k = 0; k < n.size(); ++k) {
        const json& v = *vals[k];
        std::size_t d = E.dim(n.first_vertex(k));
        if (!v.is_array() || v.size() != d) malformed("cochain value at '" + G.tuple_key(p, k) + "' has wrong length");
        Vector vec;
        for (const json& e : v) vec.push_back(scalar_from_json(e, E.field));
        x.values.push_back(std::move(vec));
    }
    return x;
}

json to_json(const FiniteGroupoid& G, const TransformationCochain& w) {
    json values = json::object();
    for (std::size_t k = 0; k < w.values.size(); ++k) values[G.tuple_key(w.degree, k)] = to_json(w.values[k]);
    return {{"degree", w.degree}, {"values", values}};
}

TransformationCochain transformation_from_json(const json& j, const FiniteGroupoid& G, const VectorBundle& E,
                                               const VectorBundle& C) {
    int p = static_cast<int>(as_size(member(j, "degree"), "degree"));
    auto vals = by_tuple(member(j, "values"), G, p, "cochain values");
    const Nerve& n = G.nerve(p);
    TransformationCochain w{p, {}};
    for (std::size_t k = 0; k < n.size(); ++k)
        w.values.push_back(matrix_from_json(*vals[k], C.dim(n.first_vertex(k)), E.dim(n.last_vertex(k)), E.field));
    return w;
}

json to_json(const QuasiAction& d) {
    const FiniteGroupoid& G = d.groupoid();
    return {{"bundle", to_json(G, d.bundle())}, {"maps", arrow_map(G, d.maps())}};
}

QuasiAction quasiaction_from_json(const json& j, const FiniteGroupoid& G, Field fallback) {
    VectorBundle E = bundle_from_json(member(j, "bundle"), G, fallback);
    auto maps = by_arrow(member(j, "maps"), G, "maps");
    std::vector<Matrix> ms;
    for (ArrowId g = 0; g < G.num_arrows(); ++g)
        ms.push_back(matrix_from_json(*maps[g], E.dim(G.tgt(g)), E.dim(G.src(g)), E.field));
    return QuasiAction(G, E, std::move(ms));
}

json to_json(const Ruth2& r) {
    return {{"base", to_json(r.G)},
            {"C", to_json(r.G, r.C)},
            {"E", to_json(r.G, r.E)},
            {"partial", object_map(r.G, r.partial)},
            {"deltaC", to_json(r.deltaC)},
            {"deltaE", to_json(r.deltaE)},
            {"omega", to_json(r.G, r.omega)}};
}

Ruth2 ruth2_from_json(const json& j, Field fallback) {
    FiniteGroupoid G = groupoid_from_json(member(j, "base"));
    Ruth2 r;
    r.G = G;
    r.deltaC = quasiaction_from_json(member(j, "deltaC"), G, fallback);
    r.deltaE = quasiaction_from_json(member(j, "deltaE"), G, fallback);
    r.C = j.contains("C") ? bundle_from_json(j.at("C"), G, fallback) : r.deltaC.bundle();
    r.E = j.contains("E") ? bundle_from_json(j.at("E"), G, fallback) : r.deltaE.bundle();
    if (!(r.C == r.deltaC.bundle()) || !(r.E == r.deltaE.bundle()))
        malformed("bundles of deltaC/deltaE disagree with C/E");
    if (!(r.C.field == r.E.field)) malformed("C and E live over different fields");
    auto part = by_object(member(j, "partial"), G, "partial");
    for (ObjectId x = 0; x < G.num_objects(); ++x)
        r.partial.push_back(matrix_from_json(*part[x], r.E.dim(x), r.C.dim(x), r.E.field));
    r.omega = transformation_from_json(member(j, "omega"), G, r.E, r.C);
    if (r.omega.degree != 2) malformed("omega must have degree 2");
    return r;
}

json to_json(const VBGroupoid& v) {
    const FiniteGroupoid& G = v.G;
    json fibers = json::object();
    for (ArrowId g = 0; g < G.num_arrows(); ++g) fibers[G.arrow_name(g)] = v.fibers[g];
    json mt = json::object();
    for (std::size_t k = 0; k < v.mtilde.size(); ++k) mt[G.tuple_key(2, k)] = to_json(v.mtilde[k]);
    json out = {{"base", to_json(G)},           {"side", to_json(G, v.E)},
                {"fibers", fibers},             {"stilde", arrow_map(G, v.stilde)},
                {"ttilde", arrow_map(G, v.ttilde)}, {"itilde", arrow_map(G, v.itilde)},
                {"utilde", object_map(G, v.utilde)}, {"mtilde", mt}};
    if (!v.provenance.empty()) out["provenance"] = v.provenance;
    return out;
}

VBGroupoid vbg_from_json(const json& j, Field fallback) {
    VBGroupoid v;
    v.G = groupoid_from_json(member(j, "base"));
    const FiniteGroupoid& G = v.G;
    v.E = bundle_from_json(member(j, "side"), G, fallback);
    Field f = v.E.field;
    auto fib = by_arrow(member(j, "fibers"), G, "fibers");
    for (ArrowId g = 0; g < G.num_arrows(); ++g) v.fibers.push_back(as_size(*fib[g], "fiber dimension"));
    auto st = by_arrow(member(j, "stilde"), G, "stilde");
    auto tt = by_arrow(member(j, "ttilde"), G, "ttilde");
    auto it = by_arrow(member(j, "itilde"), G, "itilde");
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        v.stilde.push_back(matrix_from_json(*st[g], v.E.dim(G.src(g)), v.fibers[g], f));
        v.ttilde.push_back(matrix_from_json(*tt[g], v.E.dim(G.tgt(g)), v.fibers[g], f));
        v.itilde.push_back(matrix_from_json(*it[g], v.fibers[G.inv(g)], v.fibers[g], f));
    }
    auto ut = by_object(member(j, "utilde"), G, "utilde");
    for (ObjectId x = 0; x < G.num_objects(); ++x)
        v.utilde.push_back(matrix_from_json(*ut[x], v.fibers[G.unit(x)], v.E.dim(x), f));
    auto mt = by_tuple(member(j, "mtilde"), G, 2, "mtilde");
    const Nerve& n2 = G.nerve(2);
    for (std::size_t k = 0; k < n2.size(); ++k) {
        auto t = n2.tuple(k);
        ArrowId g12 = G.compose(t[0], t[1]);
        v.mtilde.push_back(matrix_from_json(*mt[k], v.fibers[g12], v.fibers[t[0]] + v.fibers[t[1]], f));
    }
    if (j.contains("provenance")) v.provenance = as_string(j.at("provenance"), "provenance");
    return v;
}

json to_json(const FiniteGroupoid& G, const HorizontalLift& h) { return arrow_map(G, h.h); }

HorizontalLift lift_from_json(const json& j, const VBGroupoid& v) {
    const FiniteGroupoid& G = v.G;
    auto hs = by_arrow(j, G, "lift");
    HorizontalLift h;
    for (ArrowId g = 0; g < G.num_arrows(); ++g)
        h.h.push_back(matrix_from_json(*hs[g], v.fibers[g], v.E.dim(G.src(g)), v.field()));
    return h;
}

json to_json(const std::vector<Violation>& vs) {
    json out = json::array();
    for (const Violation& v : vs) {
        json e = {{"code", v.code}, {"witness", v.witness}};
        if (!v.detail.empty()) e["detail"] = v.detail;
        out.push_back(std::move(e));
    }
    return out;
}

Kind detect_kind(const json& j) {
    if (!j.is_object()) return Kind::unknown;
    if (j.contains("stilde")) return Kind::vbgroupoid;
    if (j.contains("partial")) return Kind::ruth2;
    if (j.contains("maps")) return Kind::quasiaction;
    if (j.contains("objects")) return Kind::groupoid;
    return Kind::unknown;
}

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::groupoid: return "groupoid";
        case Kind::quasiaction: return "quasiaction";
        case Kind::ruth2: return "ruth2";
        case Kind::vbgroupoid: return "vbgroupoid";
        default: return "unknown";
    }
}

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) malformed("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        malformed("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("IoError", "cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

}  // namespace vbg::io
