#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vbg/classify.hpp"
#include "vbg/duality.hpp"
#include "vbg/generate.hpp"
#include "vbg/io.hpp"

namespace {

using namespace vbg;
using io::json;

struct Flags {
    std::string in, in2, field, lift = "auto", out;
    std::optional<int> max_degree;
    bool vb = false;
};

// Exit code 2: the input could not be read as a document at all.
struct Malformed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int truncation(const Flags& f) {
    if (f.max_degree) return *f.max_degree;
    if (const char* env = std::getenv("VBG_TRUNCATION")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
            throw Malformed(std::string("VBG_TRUNCATION is not an integer: ") + env);
        }
    }
    return 3;
}

Field fallback_field(const Flags& f) {
    if (f.field.empty()) return Field::rationals();
    try {
        return Field::parse(f.field);
    } catch (const Error& e) {
        throw Malformed(std::string("--field: ") + e.what());
    }
}

json load(const std::string& path, const char* flag) {
    if (path.empty()) throw Malformed(std::string(flag) + " is required");
    return io::read_file(path);
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

HorizontalLift lift_for(const VBGroupoid& v, const Flags& f) {
    HorizontalLift h;
    if (f.lift == "auto") {
        h = choose_lift(v);
    } else if (f.lift.rfind("random:", 0) == 0) {
        std::uint64_t seed;
        try {
            seed = std::stoull(f.lift.substr(7));
        } catch (const std::exception&) {
            throw Malformed("--lift: bad seed in '" + f.lift + "'");
        }
        Rng rng(seed);
        h = random_lift(rng, v);
    } else {
        h = io::lift_from_json(io::read_file(f.lift), v);
    }
    auto bad = check_lift(v, h);
    if (!bad.empty()) throw ValidationError("lift is not a unital section of the source", std::move(bad));
    return h;
}

// A Ruth2 document as is, or a VB-groupoid document split along the lift.
Ruth2 ruth_from(const json& j, const Flags& f) {
    Field fb = fallback_field(f);
    switch (io::detect_kind(j)) {
        case io::Kind::ruth2: return validate_ruth2(io::ruth2_from_json(j, fb));
        case io::Kind::vbgroupoid: {
            VBGroupoid v = io::vbg_from_json(j, fb);
            validate_vbg(v);
            return extract_components(v, lift_for(v, f));
        }
        default: throw Malformed("expected a ruth2 or vbgroupoid document");
    }
}

VBGroupoid vbg_from(const json& j, const Flags& f) {
    if (io::detect_kind(j) != io::Kind::vbgroupoid) throw Malformed("expected a vbgroupoid document");
    VBGroupoid v = io::vbg_from_json(j, fallback_field(f));
    validate_vbg(v);
    return v;
}

json betti(const std::vector<std::size_t>& dims, int first_degree) {
    json out = json::object();
    for (std::size_t k = 0; k < dims.size(); ++k) out[std::to_string(first_degree + static_cast<int>(k))] = dims[k];
    return out;
}

json cmd_validate(const Flags& f, int& code) {
    json j = load(f.in, "--in");
    io::Kind kind = io::detect_kind(j);
    Field fb = fallback_field(f);
    std::vector<Violation> bad;
    json out = {{"kind", io::kind_name(kind)}};
    try {
        switch (kind) {
            case io::Kind::groupoid: io::groupoid_from_json(j); break;
            case io::Kind::quasiaction: {
                QuasiAction d = io::quasiaction_from_json(j, io::groupoid_from_json(j.at("base")), fb);
                out["unital"] = d.is_unital();
                out["flat"] = d.is_flat();
                break;
            }
            case io::Kind::ruth2: bad = check_ruth2(io::ruth2_from_json(j, fb)); break;
            case io::Kind::vbgroupoid: bad = check_vbg(io::vbg_from_json(j, fb)); break;
            case io::Kind::unknown: throw Malformed("unrecognized document kind");
        }
    } catch (const ValidationError& e) {
        bad = e.violations();
    }
    out["valid"] = bad.empty();
    if (!bad.empty()) {
        out["violations"] = io::to_json(bad);
        code = 1;
    }
    return out;
}

json cmd_build(const Flags& f) {
    json j = load(f.in, "--in");
    if (io::detect_kind(j) != io::Kind::ruth2) throw Malformed("expected a ruth2 document");
    VBGroupoid v = build_from_ruth(io::ruth2_from_json(j, fallback_field(f)));
    v.provenance = "built-from:" + stem(f.in);
    return io::to_json(v);
}

json cmd_extract(const Flags& f) {
    VBGroupoid v = vbg_from(load(f.in, "--in"), f);
    HorizontalLift h = lift_for(v, f);
    json out = io::to_json(extract_components(v, h));
    out["lift"] = io::to_json(v.G, h);
    return out;
}

json cmd_dualize(const Flags& f) {
    VBGroupoid v = vbg_from(load(f.in, "--in"), f);
    std::string id = v.provenance.empty() ? stem(f.in) : v.provenance;
    VBGroupoid d = dualize(v);
    d.provenance = "dual-of:" + id;
    return io::to_json(d);
}

json cmd_cohomology(const Flags& f) {
    json j = load(f.in, "--in");
    int n = truncation(f);
    switch (io::detect_kind(j)) {
        case io::Kind::vbgroupoid:
            if (f.vb) return betti(vb_cohomology(vbg_from(j, f), n), 0);
            return betti(cohomology_dims(total_complex(ruth_from(j, f), n)), -1);
        case io::Kind::ruth2: return betti(cohomology_dims(total_complex(ruth_from(j, f), n)), -1);
        case io::Kind::quasiaction: {
            QuasiAction d = io::quasiaction_from_json(j, io::groupoid_from_json(j.at("base")), fallback_field(f));
            if (!d.is_representation()) throw Error("NotARepresentation", "cohomology needs a flat unital action");
            return betti(cohomology_dims(representation_complex(d, n)), 0);
        }
        default: throw Malformed("expected a vbgroupoid, ruth2 or quasiaction document");
    }
}

json cmd_classify(const Flags& f) {
    Ruth2 r = ruth_from(load(f.in, "--in"), f);
    RankReport rep = is_regular(r);
    json ranks = json::object();
    for (ObjectId x = 0; x < r.G.num_objects(); ++x) ranks[r.G.object_name(x)] = rep.ranks[x];
    json out = {{"regular", rep.regular}, {"orbitwise_constant", rep.orbitwise_constant}, {"ranks", ranks}};
    if (!rep.regular) return out;
    RegularDecomposition d = normal_form(r);
    TransformationCochain zero = zero_transformation(r.G, d.deltaNu.bundle(), d.deltaK.bundle(), 2);
    out["deltaK"] = io::to_json(d.deltaK);
    out["deltaNu"] = io::to_json(d.deltaNu);
    out["omega"] = io::to_json(r.G, d.omega);
    out["omega_is_trivial"] = class_equal(d.deltaNu, d.deltaK, d.omega, zero).equivalent;
    return out;
}

json cmd_equiv(const Flags& f) {
    Ruth2 a = ruth_from(load(f.in, "--in"), f);
    Ruth2 b = ruth_from(load(f.in2, "--in2"), f);
    Equivalence e = decide_equiv_regular(a, b);
    json out = {{"equivalent", e.equivalent}, {"notion", "gauge equivalence over fixed bundle identifications"}};
    out["witness"] = e.witness ? io::to_json(a.G, *e.witness) : json(nullptr);
    if (!e.reason.empty()) out["reason"] = e.reason;
    return out;
}

json cmd_examples(const Flags& f) {
    Field k = fallback_field(f);
    FiniteGroupoid z2 = cyclic_group(2), p2 = pair_groupoid(2);
    VectorBundle one = VectorBundle::constant(z2, 1, k);
    Matrix sign = Matrix::identity(1, k);
    sign(0, 0) = Scalar(-1).in(k);
    QuasiAction rho(z2, one, {Matrix::identity(1, k), sign});
    QuasiAction triv = QuasiAction::identity(z2, one);

    TransformationCochain w0 = zero_transformation(z2, one, one, 2), w1 = w0;
    ArrowId a = *z2.find_arrow("a");
    w1.values[z2.nerve(2).index(std::vector<ArrowId>{a, a})](0, 0) = Scalar(1).in(k);

    Rng rng(1);
    return {
        {"pair2", io::to_json(p2)},
        {"cyclic2", io::to_json(z2)},
        {"trivial_pair2", io::to_json(trivial_vbg(p2, VectorBundle::constant(p2, 1, k)))},
        {"action_cyclic2_sign", io::to_json(action_vbg(rho))},
        {"semidirect_cyclic2_sign", io::to_json(semidirect_vbg(rho))},
        {"type0_cyclic2_zero", io::to_json(type0_ruth(triv, triv, w0))},
        {"type0_cyclic2_generator", io::to_json(type0_ruth(triv, triv, w1))},
        {"random_pair2", io::to_json(random_ruth2(rng, p2, k))},
    };
}

void emit(const json& out, const Flags& f) {
    if (f.out.empty())
        std::cout << out.dump(2) << '\n';
    else
        io::write_file(f.out, out);
}

json error_report(const Error& e) {
    json out = {{"error", e.code()}, {"message", e.what()}};
    if (!e.violations().empty()) out["violations"] = io::to_json(e.violations());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite VB-groupoids and 2-term representations up to homotopy"};
    app.require_subcommand(1);
    Flags flags;

    auto common = [&](CLI::App* sub, bool second_input = false) {
        sub->add_option("--in", flags.in, "input document")->required();
        if (second_input) sub->add_option("--in2", flags.in2, "second input document")->required();
        sub->add_option("--field", flags.field, "q or fp:P; used when a bundle omits its field");
        sub->add_option("--lift", flags.lift, "auto, random:SEED or a lift file");
        sub->add_option("--out", flags.out, "write the result here instead of stdout");
        return sub;
    };
    common(app.add_subcommand("validate", "check a groupoid, quasi-action, ruth2 or VB-groupoid document"));
    common(app.add_subcommand("build", "VB-groupoid from a ruth2 document"));
    common(app.add_subcommand("extract", "ruth2 of a VB-groupoid along a lift"));
    common(app.add_subcommand("dualize", "dual VB-groupoid"));
    auto* coh = common(app.add_subcommand("cohomology", "Betti numbers through the truncation degree"));
    coh->add_option("--max-degree", flags.max_degree, "truncation degree (default VBG_TRUNCATION or 3)");
    coh->add_flag("--vb", flags.vb, "use the VB-groupoid complex instead of the total complex");
    common(app.add_subcommand("classify", "regular normal form and invariants"));
    common(app.add_subcommand("equiv", "gauge equivalence of two regular objects"), true);
    auto* ex = app.add_subcommand("examples", "standard example documents");
    ex->add_option("--field", flags.field, "q or fp:P");
    ex->add_option("--out", flags.out, "write the result here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::string cmd = app.get_subcommands().front()->get_name();
    int code = 0;
    try {
        json out;
        if (cmd == "validate") out = cmd_validate(flags, code);
        else if (cmd == "build") out = cmd_build(flags);
        else if (cmd == "extract") out = cmd_extract(flags);
        else if (cmd == "dualize") out = cmd_dualize(flags);
        else if (cmd == "cohomology") out = cmd_cohomology(flags);
        else if (cmd == "classify") out = cmd_classify(flags);
        else if (cmd == "equiv") out = cmd_equiv(flags);
        else out = cmd_examples(flags);
        emit(out, flags);
        return code;
    } catch (const Malformed& e) {
        std::cerr << "vbg: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        if (e.code() == "MalformedInput") {
            std::cerr << "vbg: " << e.what() << '\n';
            return 2;
        }
        std::cout << error_report(e).dump(2) << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "vbg: " << e.what() << '\n';
        return 2;
    }
}
