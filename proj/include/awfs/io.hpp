#pragma once
// Instance files: parsing, exhaustive validation, canonical JSON and hashing.

#include <openssl/evp.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "awfs/transport.hpp"

namespace awfs {

using nlohmann::json;

inline constexpr const char* kEngineVersion = "awfs-forge 0.1.0";

/// Parse or validation failure, located by a dotted path into the document.
class InstanceError : public Error {
public:
    InstanceError(std::string location, const std::string& message)
        : Error(location + ": " + message), location_(std::move(location)) {}
    const std::string& location() const { return location_; }

private:
    std::string location_;
};

/// Sorted keys, no whitespace.
inline std::string canonical_dump(const json& j) { return j.dump(); }

inline std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

inline std::string json_hash(const json& j) { return sha256_hex(canonical_dump(j)); }

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InstanceError(path, "cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InstanceError(path, e.what());
    }
}

// Tables as they appear in certificates: self-contained, with every action listed.

inline json to_json(const Presheaf& p) { return json{{"sizes", p.sizes}, {"actions", p.action}}; }

inline json to_json(const PresheafMap& m) {
    return json{{"src", to_json(m.src)}, {"dst", to_json(m.dst)}, {"components", m.comp}};
}

inline Presheaf presheaf_from_json(const json& j, const BasePtr& base) {
    Presheaf p{base, j.at("sizes").get<std::vector<int>>(), j.at("actions").get<std::vector<Table>>()};
    return p;
}

inline PresheafMap map_from_json(const json& j, const BasePtr& base) {
    return PresheafMap{presheaf_from_json(j.at("src"), base), presheaf_from_json(j.at("dst"), base),
                       j.at("components").get<std::vector<Table>>()};
}

/// A base with named presheaves and maps, as in an instance or adjunction target block.
struct Universe {
    BasePtr base;
    std::map<std::string, Presheaf> presheaves;
    std::map<std::string, PresheafMap> maps;
    std::vector<std::string> arrows;

    const Presheaf& presheaf(const std::string& name, const std::string& where) const {
        auto it = presheaves.find(name);
        if (it == presheaves.end()) throw InstanceError(where, "unknown presheaf '" + name + "'");
        return it->second;
    }

    const PresheafMap& map(const std::string& name, const std::string& where) const {
        auto it = maps.find(name);
        if (it == maps.end()) throw InstanceError(where, "unknown map '" + name + "'");
        return it->second;
    }

    std::vector<std::pair<std::string, PresheafMap>> named_arrows() const {
        std::vector<std::pair<std::string, PresheafMap>> out;
        for (const auto& a : arrows) out.emplace_back(a, maps.at(a));
        return out;
    }

    std::vector<std::pair<std::string, Presheaf>> named_presheaves() const {
        return {presheaves.begin(), presheaves.end()};
    }
};

struct ModelSpec {
    std::string trivial;
    std::string cofibrations;
    std::vector<int> tau;
    std::optional<std::vector<std::string>> replacement;  // objects for R, Q and χ; default all
};

struct AdjunctionSpec {
    std::string kind;
    Universe target;
    std::optional<BaseFunctor> functor;
    std::shared_ptr<Adjunction> adjunction;
};

struct InstanceOptions {
    Variant variant = Variant::monic;
    int max_steps = 64;
    int max_elements = 4096;
    std::string generators;
};

struct Instance {
    json source;
    Universe universe;
    std::map<std::string, GeneratorDiagram> generators;
    std::vector<std::string> weq_names;
    bool weq_all = false;
    std::optional<ModelSpec> model;
    std::optional<AdjunctionSpec> adjunction;
    InstanceOptions options;

    std::string hash() const { return json_hash(source); }

    Weq weq() const {
        Weq w;
        w.all = weq_all;
        for (const auto& n : weq_names) w.arrows.push_back(universe.maps.at(n));
        return w;
    }

    const GeneratorDiagram& generator(const std::string& name, const std::string& where) const {
        auto it = generators.find(name);
        if (it == generators.end()) throw InstanceError(where, "unknown generator diagram '" + name + "'");
        return it->second;
    }

    /// The diagram named in the options, else the trivial-cofibration generators, else the only one.
    std::string default_generators() const {
        if (!options.generators.empty()) return options.generators;
        if (model) return model->trivial;
        if (generators.size() == 1) return generators.begin()->first;
        throw InstanceError("options.generators", "no generator diagram selected");
    }
};

namespace detail {

inline std::string at_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

template <class T>
T get_as(const json& j, const std::string& where) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw InstanceError(where, e.what());
    }
}

inline const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw InstanceError(path, "missing key '" + key + "'");
    return j.at(key);
}

inline FiniteCategory parse_category(const json& j, const std::string& path) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "terminal") return FiniteCategory::terminal();
        if (s == "walking_arrow") return FiniteCategory::walking_arrow();
        if (s == "graph") return FiniteCategory::graph_base();
        throw InstanceError(path, "unknown built-in base '" + s + "'");
    }
    auto objects = get_as<std::vector<std::string>>(require(j, "objects", path), at_path(path, "objects"));
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < objects.size(); ++i)
        if (!index.emplace(objects[i], static_cast<int>(i)).second)
            throw InstanceError(at_path(path, "objects"), "duplicate object '" + objects[i] + "'");
    std::vector<Morphism> arrows;
    if (j.contains("morphisms")) {
        int i = 0;
        for (const auto& m : j.at("morphisms")) {
            auto where = at_path(path, "morphisms[" + std::to_string(i++) + "]");
            auto name = get_as<std::string>(require(m, "name", where), where);
            auto src = get_as<std::string>(require(m, "src", where), where);
            auto dst = get_as<std::string>(require(m, "dst", where), where);
            if (!index.count(src) || !index.count(dst)) throw InstanceError(where, "unknown endpoint");
            arrows.push_back({name, index[src], index[dst]});
        }
    }
    std::vector<std::tuple<std::string, std::string, std::string>> comps;
    if (j.contains("composition"))
        for (const auto& c : j.at("composition")) {
            auto t = get_as<std::vector<std::string>>(c, at_path(path, "composition"));
            if (t.size() != 3) throw InstanceError(at_path(path, "composition"), "entries are [g, f, g∘f]");
            comps.emplace_back(t[0], t[1], t[2]);
        }
    try {
        auto cat = FiniteCategory::generate(objects, arrows, comps);
        if (auto e = cat.validate()) throw InstanceError(path, *e);
        return cat;
    } catch (const InstanceError&) {
        throw;
    } catch (const Error& e) {
        throw InstanceError(path, e.what());
    }
}

inline Presheaf parse_presheaf(const json& j, const BasePtr& base, const std::string& path) {
    const auto& C = *base;
    std::vector<int> sizes(C.object_count(), 0);
    const auto& js = require(j, "sizes", path);
    if (js.is_array()) {
        sizes = get_as<std::vector<int>>(js, at_path(path, "sizes"));
        if (static_cast<int>(sizes.size()) != C.object_count())
            throw InstanceError(at_path(path, "sizes"), "one size per base object expected");
    } else {
        for (const auto& [k, v] : js.items()) {
            auto o = C.find_object(k);
            if (!o) throw InstanceError(at_path(path, "sizes"), "unknown object '" + k + "'");
            sizes[*o] = get_as<int>(v, at_path(path, "sizes." + k));
        }
    }
    for (int s : sizes)
        if (s < 0) throw InstanceError(at_path(path, "sizes"), "negative size");
    std::map<int, Table> tables;
    if (j.contains("actions"))
        for (const auto& [k, v] : j.at("actions").items()) {
            auto m = C.find_morphism(k);
            if (!m) throw InstanceError(at_path(path, "actions"), "unknown morphism '" + k + "'");
            tables[*m] = get_as<Table>(v, at_path(path, "actions." + k));
        }
    for (int m = 0; m < C.morphism_count(); ++m)
        if (!C.is_identity(m) && !tables.count(m))
            throw InstanceError(at_path(path, "actions"), "missing action of '" + C.morphism(m).name + "'");
    Presheaf p;
    try {
        p = Presheaf::make(base, sizes, tables);
    } catch (const Error& e) {
        throw InstanceError(path, e.what());
    }
    if (auto w = p.validate()) throw InstanceError(path, "not a presheaf: " + describe(*w));
    return p;
}

inline Universe parse_universe(const json& j, const std::string& path) {
    Universe u;
    u.base = make_base(parse_category(require(j, "base", path), at_path(path, "base")));
    if (j.contains("presheaves"))
        for (const auto& [name, pj] : j.at("presheaves").items())
            u.presheaves.emplace(name, parse_presheaf(pj, u.base, at_path(path, "presheaves." + name)));
    if (j.contains("maps"))
        for (const auto& [name, mj] : j.at("maps").items()) {
            auto where = at_path(path, "maps." + name);
            const auto& src = u.presheaf(get_as<std::string>(require(mj, "src", where), where), where);
            const auto& dst = u.presheaf(get_as<std::string>(require(mj, "dst", where), where), where);
            PresheafMap m{src, dst, get_as<std::vector<Table>>(require(mj, "components", where), where)};
            if (auto w = m.validate()) throw InstanceError(where, "not a natural map: " + describe(*w));
            u.maps.emplace(name, std::move(m));
        }
    if (j.contains("arrows"))
        for (const auto& a : j.at("arrows")) {
            auto name = get_as<std::string>(a, at_path(path, "arrows"));
            u.map(name, at_path(path, "arrows"));
            u.arrows.push_back(name);
        }
    return u;
}

inline GeneratorDiagram parse_generators(const json& j, const Universe& u, const std::string& path) {
    GeneratorDiagram g;
    std::vector<std::string> objects;
    const auto& objs = require(j, "objects", path);
    int i = 0;
    for (const auto& o : objs) {
        auto where = at_path(path, "objects[" + std::to_string(i++) + "]");
        auto name = get_as<std::string>(require(o, "name", where), where);
        objects.push_back(name);
        g.names.push_back(name);
        g.arrows.push_back(u.map(get_as<std::string>(require(o, "arrow", where), where), where));
    }
    std::vector<Morphism> arrows;
    std::map<std::string, std::pair<std::string, std::string>> square_maps;
    std::map<std::string, int> index;
    for (std::size_t k = 0; k < objects.size(); ++k) index[objects[k]] = static_cast<int>(k);
    if (j.contains("morphisms")) {
        i = 0;
        for (const auto& m : j.at("morphisms")) {
            auto where = at_path(path, "morphisms[" + std::to_string(i++) + "]");
            auto name = get_as<std::string>(require(m, "name", where), where);
            auto src = get_as<std::string>(require(m, "src", where), where);
            auto dst = get_as<std::string>(require(m, "dst", where), where);
            if (!index.count(src) || !index.count(dst)) throw InstanceError(where, "unknown generator endpoint");
            arrows.push_back({name, index[src], index[dst]});
            square_maps[name] = {get_as<std::string>(require(m, "top", where), where),
                                 get_as<std::string>(require(m, "bottom", where), where)};
        }
    }
    std::vector<std::tuple<std::string, std::string, std::string>> comps;
    if (j.contains("composition"))
        for (const auto& c : j.at("composition")) {
            auto t = get_as<std::vector<std::string>>(c, at_path(path, "composition"));
            if (t.size() != 3) throw InstanceError(at_path(path, "composition"), "entries are [g, f, g∘f]");
            comps.emplace_back(t[0], t[1], t[2]);
        }
    try {
        g.shape = make_base(FiniteCategory::generate(objects, arrows, comps));
    } catch (const Error& e) {
        throw InstanceError(path, e.what());
    }
    for (int m = 0; m < g.shape->morphism_count(); ++m) {
        const auto& mor = g.shape->morphism(m);
        const auto& src = g.arrows[mor.src];
        const auto& dst = g.arrows[mor.dst];
        if (g.shape->is_identity(m)) {
            g.squares.push_back(identity_square(src));
            continue;
        }
        auto where = at_path(path, "morphisms." + mor.name);
        const auto& [top, bottom] = square_maps.at(mor.name);
        g.squares.push_back(Square{src, dst, u.map(top, where), u.map(bottom, where)});
    }
    if (!g.arrows.empty() && !same_base(g.arrows[0].src.base, u.base)) throw InstanceError(path, "generators over the wrong base");
    if (auto e = g.validate()) throw InstanceError(path, *e);
    return g;
}

inline BaseFunctor parse_functor(const json& j, const BasePtr& from, const BasePtr& to, const std::string& path) {
    BaseFunctor f{from, to, std::vector<int>(from->object_count(), -1), std::vector<int>(from->morphism_count(), -1)};
    const auto& objs = require(j, "objects", path);
    for (int o = 0; o < from->object_count(); ++o) {
        const auto& name = from->object_name(o);
        if (!objs.contains(name)) throw InstanceError(at_path(path, "objects"), "object '" + name + "' is not mapped");
        auto target = get_as<std::string>(objs.at(name), at_path(path, "objects." + name));
        auto t = to->find_object(target);
        if (!t) throw InstanceError(at_path(path, "objects." + name), "unknown target object '" + target + "'");
        f.object_map[o] = *t;
    }
    json mors = j.contains("morphisms") ? j.at("morphisms") : json::object();
    for (int m = 0; m < from->morphism_count(); ++m) {
        const auto& mor = from->morphism(m);
        if (from->is_identity(m)) {
            f.morphism_map[m] = to->identity(f.object_map[mor.src]);
            continue;
        }
        if (!mors.contains(mor.name)) throw InstanceError(at_path(path, "morphisms"), "morphism '" + mor.name + "' is not mapped");
        auto target = get_as<std::string>(mors.at(mor.name), at_path(path, "morphisms." + mor.name));
        auto t = to->find_morphism(target);
        if (!t) throw InstanceError(at_path(path, "morphisms." + mor.name), "unknown target morphism '" + target + "'");
        f.morphism_map[m] = *t;
    }
    if (auto e = f.validate()) throw InstanceError(path, *e);
    return f;
}

inline std::shared_ptr<TabulatedAdjunction> parse_tabulated(const json& j, const Universe& m, const Universe& k,
                                                            const std::string& path) {
    auto adj = std::make_shared<TabulatedAdjunction>(m.base, k.base);
    auto pairs = [&](const char* key) {
        std::vector<std::pair<std::string, std::string>> out;
        const auto& block = require(j, key, path);
        for (const auto& [a, b] : block.items()) out.emplace_back(a, get_as<std::string>(b, at_path(path, std::string(key) + "." + a)));
        return out;
    };
    auto sub = [&](const char* key, const char* inner) {
        std::vector<std::pair<std::string, std::string>> out;
        const auto& block = require(require(j, key, path), inner, at_path(path, key));
        auto where = at_path(path, std::string(key) + "." + inner);
        for (const auto& [a, b] : block.items()) out.emplace_back(a, get_as<std::string>(b, at_path(where, a)));
        return out;
    };
    auto w = [&](const std::string& s) { return at_path(path, s); };
    for (const auto& [a, b] : sub("T", "objects")) adj->add_T(m.presheaf(a, w("T")), k.presheaf(b, w("T")));
    for (const auto& [a, b] : sub("T", "maps")) adj->add_T(m.map(a, w("T")), k.map(b, w("T")));
    for (const auto& [a, b] : sub("S", "objects")) adj->add_S(k.presheaf(a, w("S")), m.presheaf(b, w("S")));
    for (const auto& [a, b] : sub("S", "maps")) adj->add_S(k.map(a, w("S")), m.map(b, w("S")));
    for (const auto& [a, b] : pairs("unit")) adj->add_unit(m.presheaf(a, w("unit")), m.map(b, w("unit")));
    for (const auto& [a, b] : pairs("counit")) adj->add_counit(k.presheaf(a, w("counit")), k.map(b, w("counit")));
    return adj;
}

}  // namespace detail

/// Parses and exhaustively validates an instance document.
inline Instance parse_instance(const json& doc) {
    using namespace detail;
    if (!doc.is_object()) throw InstanceError("$", "instance must be a JSON object");
    Instance in;
    in.source = doc;
    json core = doc;
    if (!core.contains("base")) core["base"] = "terminal";
    in.universe = parse_universe(core, "");
    const auto& u = in.universe;
    if (doc.contains("generators"))
        for (const auto& [name, gj] : doc.at("generators").items())
            in.generators.emplace(name, parse_generators(gj, u, "generators." + name));
    if (doc.contains("weq")) {
        const auto& w = doc.at("weq");
        if (w.is_string()) {
            if (w.get<std::string>() != "all") throw InstanceError("weq", "expected \"all\" or a list of arrow names");
            in.weq_all = true;
        } else {
            for (const auto& n : w) {
                auto name = get_as<std::string>(n, "weq");
                u.map(name, "weq");
                in.weq_names.push_back(name);
            }
        }
    }
    if (doc.contains("model")) {
        const auto& mj = doc.at("model");
        ModelSpec ms;
        ms.trivial = get_as<std::string>(require(mj, "trivial", "model"), "model.trivial");
        ms.cofibrations = get_as<std::string>(require(mj, "cofibrations", "model"), "model.cofibrations");
        const auto& J = in.generator(ms.trivial, "model.trivial");
        const auto& I = in.generator(ms.cofibrations, "model.cofibrations");
        const auto& tj = require(mj, "tau", "model");
        for (int j = 0; j < J.size(); ++j) {
            if (!tj.contains(J.names[j])) throw InstanceError("model.tau", "generator '" + J.names[j] + "' is not mapped");
            auto target = get_as<std::string>(tj.at(J.names[j]), "model.tau." + J.names[j]);
            auto it = std::find(I.names.begin(), I.names.end(), target);
            if (it == I.names.end()) throw InstanceError("model.tau." + J.names[j], "unknown generator '" + target + "'");
            ms.tau.push_back(static_cast<int>(it - I.names.begin()));
        }
        if (auto e = validate_inclusion(J, I, GeneratorInclusion{ms.tau})) throw InstanceError("model.tau", *e);
        if (mj.contains("replacement")) {
            ms.replacement = get_as<std::vector<std::string>>(mj.at("replacement"), "model.replacement");
            for (const auto& x : *ms.replacement) u.presheaf(x, "model.replacement");
        }
        in.model = ms;
    }
    if (doc.contains("adjunction")) {
        const auto& aj = doc.at("adjunction");
        AdjunctionSpec as;
        as.kind = get_as<std::string>(require(aj, "kind", "adjunction"), "adjunction.kind");
        if (as.kind == "identity") {
            as.target = u;
            as.adjunction = std::make_shared<IdentityAdjunction>(u.base);
        } else if (as.kind == "lan_res" || as.kind == "explicit") {
            as.target = parse_universe(require(aj, "target", "adjunction"), "adjunction.target");
            if (as.kind == "lan_res") {
                as.functor = parse_functor(require(aj, "functor", "adjunction"), u.base, as.target.base, "adjunction.functor");
                as.adjunction = std::make_shared<LanRestriction>(*as.functor);
            } else {
                auto tab = parse_tabulated(aj, u, as.target, "adjunction");
                // Only the tabulated objects and maps can be checked.
                std::vector<std::pair<std::string, Presheaf>> mo, ko;
                for (const auto& [a, b] : require(require(aj, "T", "adjunction"), "objects", "adjunction.T").items())
                    mo.emplace_back(a, u.presheaf(a, "adjunction.T"));
                for (const auto& [a, b] : require(require(aj, "S", "adjunction"), "objects", "adjunction.S").items())
                    ko.emplace_back(a, as.target.presheaf(a, "adjunction.S"));
                std::vector<std::pair<std::string, PresheafMap>> mt, kt;
                for (const auto& [a, b] : aj.at("T").value("maps", json::object()).items()) mt.emplace_back(a, u.maps.at(a));
                for (const auto& [a, b] : aj.at("S").value("maps", json::object()).items()) kt.emplace_back(a, as.target.maps.at(a));
                auto report = verify_adjunction(*tab, mo, ko, mt, kt);
                if (!report.all_passed()) {
                    auto f = report.failures().front();
                    throw InstanceError("adjunction", f.law + " fails at " + f.probe + ": " + describe(*f.witness));
                }
                as.adjunction = tab;
            }
        } else {
            throw InstanceError("adjunction.kind", "expected identity, lan_res or explicit");
        }
        in.adjunction = std::move(as);
    }
    if (doc.contains("options")) {
        const auto& oj = doc.at("options");
        if (oj.contains("variant")) {
            auto v = get_as<std::string>(oj.at("variant"), "options.variant");
            if (v == "monic") in.options.variant = Variant::monic;
            else if (v == "standard") in.options.variant = Variant::standard;
            else throw InstanceError("options.variant", "expected monic or standard");
        }
        if (oj.contains("max_steps")) in.options.max_steps = get_as<int>(oj.at("max_steps"), "options.max_steps");
        if (oj.contains("max_elements"))
            in.options.max_elements = get_as<int>(oj.at("max_elements"), "options.max_elements");
        if (in.options.max_steps < 1) throw InstanceError("options.max_steps", "must be positive");
        if (in.options.max_elements < 1) throw InstanceError("options.max_elements", "must be positive");
        if (oj.contains("generators")) {
            in.options.generators = get_as<std::string>(oj.at("generators"), "options.generators");
            in.generator(in.options.generators, "options.generators");
        }
    }
    if (doc.contains("lifts"))
        for (std::size_t i = 0; i < doc.at("lifts").size(); ++i) {
            const auto& l = doc.at("lifts")[i];
            auto where = "lifts[" + std::to_string(i) + "]";
            for (const char* key : {"left", "right", "top", "bottom"})
                u.map(get_as<std::string>(require(l, key, where), where), where);
            Square sq{u.maps.at(l.at("left")), u.maps.at(l.at("right")), u.maps.at(l.at("top")), u.maps.at(l.at("bottom"))};
            if (auto w = square_defect(sq.src, sq.dst, sq.top, sq.bottom))
                throw InstanceError(where, "square does not commute: " + describe(*w));
        }
    return in;
}

inline Instance load_instance(const std::string& path) { return parse_instance(read_json_file(path)); }

}  // namespace awfs
