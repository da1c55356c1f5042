#pragma once
// Certificates: named tables, checkable claims about them, law reports, and a
// verifier that rechecks claims with direct composition and the lifting oracle.

#include "awfs/io.hpp"

namespace awfs {

/// Hash of a square's (top, bottom) tables, as used in lifting-function entries.
inline std::string square_hash(const Square& sq) {
    return sha256_hex(canonical_dump(json{sq.top.comp, sq.bottom.comp}));
}

class CertificateBuilder {
public:
    /// Registers a table on the source ("M") or target ("K") base; returns its name.
    std::string table(const std::string& name, const PresheafMap& m, const char* side = "M") {
        json t = to_json(m);
        t["base"] = side;
        tables_[name] = std::move(t);
        return name;
    }

    /// lhs[0] ∘ lhs[1] ∘ … equals rhs[0] ∘ rhs[1] ∘ ….
    void equal(std::vector<std::string> lhs, std::vector<std::string> rhs) {
        claims_.push_back(json{{"kind", "equal"}, {"lhs", std::move(lhs)}, {"rhs", std::move(rhs)}});
    }

    /// The composite is an identity map.
    void identity(std::vector<std::string> lhs) { claims_.push_back(json{{"kind", "identity"}, {"lhs", std::move(lhs)}}); }

    /// `fill` is a diagonal of the square (top, bottom): left ⇒ right.
    void lift(const std::string& fill, const std::string& left, const std::string& right, const std::string& top,
              const std::string& bottom) {
        claims_.push_back(json{{"kind", "lift"},
                               {"fill", fill},
                               {"left", left},
                               {"right", right},
                               {"top", top},
                               {"bottom", bottom}});
    }

    void injective(const std::string& name) { claims_.push_back(json{{"kind", "injective"}, {"map", name}}); }

    /// A lifting function for the table `target` against a generator diagram of the instance.
    void lifting_function(const std::string& generators, const std::string& target, const GeneratorDiagram& gen,
                          const LiftingFunction& lf) {
        json entries = json::array();
        for (int j = 0; j < gen.size(); ++j)
            for (std::size_t i = 0; i < lf.squares(j).size(); ++i)
                entries.push_back(json{{"j", j}, {"square_hash", square_hash(lf.squares(j)[i])}, {"fill", lf.fill_at(j, i).comp}});
        lifting_.push_back(json{{"generators", generators}, {"target", target}, {"entries", std::move(entries)}});
    }

    void report(const LawReport& r) { reports_.merge(r); }
    const LawReport& reports() const { return reports_; }

    json build(const std::string& command, const std::string& input_hash, json options, json summary) const {
        json c{{"command", command},
               {"engine", kEngineVersion},
               {"input_hash", input_hash},
               {"options", std::move(options)},
               {"summary", std::move(summary)},
               {"tables", tables_},
               {"claims", claims_},
               {"lifting_functions", lifting_},
               {"reports", reports_.to_json()}};
        c["result_digest"] = result_digest(c);
        return c;
    }

    /// SHA-256 of the canonical certificate without its digest field.
    static std::string result_digest(json c) {
        c.erase("result_digest");
        return json_hash(c);
    }

private:
    json tables_ = json::object();
    json claims_ = json::array();
    json lifting_ = json::array();
    LawReport reports_;
};

/**
 * Rechecks a certificate against its instance: input hash, digest, every table's
 * naturality, every claim by composition or by the filler oracle, and every
 * lifting-function entry against the canonical square enumeration.
 * Returns the first failing claim, or nothing.
 */
inline std::optional<std::string> verify_certificate(const Instance& instance, const json& cert) {
    if (cert.is_object() && cert.empty()) return std::nullopt;
    try {
        if (cert.at("engine") != kEngineVersion) return "engine version mismatch";
        if (cert.at("input_hash") != instance.hash()) return "input hash does not match the instance";
        if (cert.at("result_digest") != CertificateBuilder::result_digest(cert)) return "result digest mismatch";
        BasePtr m_base = instance.universe.base;
        BasePtr k_base = instance.adjunction ? instance.adjunction->target.base : m_base;
        std::map<std::string, PresheafMap> tables;
        for (const auto& [name, t] : cert.at("tables").items()) {
            auto side = t.at("base").get<std::string>();
            if (side != "M" && side != "K") return "table " + name + ": unknown base";
            auto m = map_from_json(t, side == "M" ? m_base : k_base);
            if (auto w = m.src.validate()) return "table " + name + ": domain is not a presheaf: " + describe(*w);
            if (auto w = m.dst.validate()) return "table " + name + ": codomain is not a presheaf: " + describe(*w);
            if (auto w = m.validate()) return "table " + name + ": not natural: " + describe(*w);
            tables.emplace(name, std::move(m));
        }
        auto get = [&](const std::string& n) -> const PresheafMap& {
            auto it = tables.find(n);
            if (it == tables.end()) throw InstanceError("claims", "unknown table '" + n + "'");
            return it->second;
        };
        auto chain = [&](const json& names) {
            std::optional<PresheafMap> acc;
            for (const auto& n : names) {
                const auto& m = get(n.get<std::string>());
                acc = acc ? compose(*acc, m) : m;
            }
            return acc;
        };
        std::size_t index = 0;
        for (const auto& c : cert.at("claims")) {
            auto where = "claim " + std::to_string(index++) + " (" + c.dump() + ")";
            auto kind = c.at("kind").get<std::string>();
            if (kind == "equal") {
                auto l = chain(c.at("lhs"));
                auto r = chain(c.at("rhs"));
                if (!l || !r) return where + ": empty composite";
                if (auto w = map_difference(*l, *r)) return where + ": " + describe(*w);
            } else if (kind == "identity") {
                auto l = chain(c.at("lhs"));
                if (!l) return where + ": empty composite";
                if (auto w = map_difference(*l, identity_map(l->src))) return where + ": " + describe(*w);
            } else if (kind == "lift") {
                Square sq{get(c.at("left")), get(c.at("right")), get(c.at("top")), get(c.at("bottom"))};
                if (auto w = square_defect(sq.src, sq.dst, sq.top, sq.bottom)) return where + ": square does not commute";
                const auto& fill = get(c.at("fill"));
                auto fills = oracle_lift(sq);
                if (std::find(fills.begin(), fills.end(), fill) == fills.end()) return where + ": not among the oracle fillers";
            } else if (kind == "injective") {
                if (!is_injective(get(c.at("map")))) return where + ": not injective";
            } else {
                return where + ": unknown claim kind";
            }
        }
        for (const auto& lfj : cert.at("lifting_functions")) {
            auto gname = lfj.at("generators").get<std::string>();
            const auto& gen = instance.generator(gname, "lifting_functions");
            const auto& g = get(lfj.at("target").get<std::string>());
            const auto& entries = lfj.at("entries");
            std::size_t k = 0;
            std::vector<std::vector<Square>> squares;
            std::vector<std::vector<PresheafMap>> fills;
            for (int j = 0; j < gen.size(); ++j) {
                squares.push_back(enumerate_squares(gen.arrows[j], g));
                fills.emplace_back();
                for (const auto& sq : squares.back()) {
                    auto where = "lifting function for " + lfj.at("target").get<std::string>() + ", entry " + std::to_string(k);
                    if (k >= entries.size()) return where + ": missing";
                    const auto& e = entries[k++];
                    if (e.at("j") != j) return where + ": generator out of order";
                    if (e.at("square_hash") != square_hash(sq)) return where + ": square out of order";
                    PresheafMap w{sq.src.dst, sq.dst.src, e.at("fill").get<std::vector<Table>>()};
                    if (auto d = w.validate()) return where + ": fill is not natural";
                    auto all = oracle_lift(sq);
                    if (std::find(all.begin(), all.end(), w) == all.end()) return where + ": not among the oracle fillers";
                    fills.back().push_back(std::move(w));
                }
            }
            if (k != entries.size()) return "lifting function for " + lfj.at("target").get<std::string>() + ": extra entries";
            for (int m = 0; m < gen.shape->morphism_count(); ++m) {
                if (gen.shape->is_identity(m)) continue;
                const auto& mor = gen.shape->morphism(m);
                const auto& ab = gen.squares[m];
                for (std::size_t i = 0; i < squares[mor.dst].size(); ++i) {
                    const auto& s = squares[mor.dst][i];
                    Square pre{gen.arrows[mor.src], g, compose(s.top, ab.top), compose(s.bottom, ab.bottom)};
                    auto h = square_hash(pre);
                    std::size_t p = 0;
                    while (p < squares[mor.src].size() && square_hash(squares[mor.src][p]) != h) ++p;
                    if (p == squares[mor.src].size()) return "lifting function: missing restricted square";
                    if (!(fills[mor.src][p] == compose(fills[mor.dst][i], ab.bottom)))
                        return "lifting function for " + lfj.at("target").get<std::string>() + ": incoherent along " + mor.name;
                }
            }
        }
    } catch (const std::exception& e) {
        return std::string("malformed certificate: ") + e.what();
    }
    return std::nullopt;
}

}  // namespace awfs
