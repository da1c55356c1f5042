#pragma once
// The arrow category: squares, functorial factorizations, awfs interfaces and
// exhaustive law verification.

#include <json.hpp>

#include "awfs/core.hpp"

namespace awfs {

/// Commutative square (top, bottom): src ⇒ dst, i.e. dst∘top = bottom∘src.
struct Square {
    PresheafMap src;
    PresheafMap dst;
    PresheafMap top;
    PresheafMap bottom;
};

inline std::optional<Witness> square_defect(const PresheafMap& f, const PresheafMap& g, const PresheafMap& u,
                                            const PresheafMap& v) {
    if (!(u.src == f.src)) return Witness{-1, -1, "top map does not start at the source domain"};
    if (!(u.dst == g.src)) return Witness{-1, -1, "top map does not end at the target domain"};
    if (!(v.src == f.dst)) return Witness{-1, -1, "bottom map does not start at the source codomain"};
    if (!(v.dst == g.dst)) return Witness{-1, -1, "bottom map does not end at the target codomain"};
    return map_difference(compose(g, u), compose(v, f));
}

inline Square make_square(const PresheafMap& f, const PresheafMap& g, const PresheafMap& u, const PresheafMap& v) {
    if (auto w = square_defect(f, g, u, v)) throw ValidationError("square does not commute", *w);
    return Square{f, g, u, v};
}

inline Square identity_square(const PresheafMap& f) { return Square{f, f, identity_map(f.src), identity_map(f.dst)}; }

/// b∘a for a: f ⇒ g and b: g ⇒ h.
inline Square compose_squares_v(const Square& a, const Square& b) {
    if (!(a.dst == b.src)) throw ShapeMismatch("compose_squares_v: squares are not composable");
    return Square{a.src, b.dst, compose(b.top, a.top), compose(b.bottom, a.bottom)};
}

inline std::string square_key(const Square& sq) { return table_key(sq.top) + "|" + table_key(sq.bottom); }

struct Factored {
    PresheafMap left;
    PresheafMap right;

    const Presheaf& middle() const { return left.dst; }
};

class FunctorialFactorization {
public:
    virtual ~FunctorialFactorization() = default;
    virtual Factored factor(const PresheafMap& f) const = 0;
    /// E(u, v): Ef → Eg.
    virtual PresheafMap on_square(const Square& sq) const = 0;

    PresheafMap left(const PresheafMap& f) const { return factor(f).left; }
    PresheafMap right(const PresheafMap& f) const { return factor(f).right; }
    Presheaf middle(const PresheafMap& f) const { return factor(f).left.dst; }

    PresheafMap on_square(const PresheafMap& f, const PresheafMap& g, const PresheafMap& u,
                          const PresheafMap& v) const {
        return on_square(make_square(f, g, u, v));
    }
};

class Awfs : public FunctorialFactorization {
public:
    /// δ_f: Ef → ELf.
    virtual PresheafMap delta(const PresheafMap& f) const = 0;
    /// μ_f: ERf → Ef.
    virtual PresheafMap mu(const PresheafMap& f) const = 0;
};

/// Component family ξ_f: Ef → E′f.
struct AwfsMorphism {
    std::function<PresheafMap(const PresheafMap&)> xi;
};

struct LawEntry {
    std::string law;
    std::string probe;
    bool passed = true;
    std::optional<Witness> witness;
};

inline nlohmann::json witness_json(const Witness& w) {
    return nlohmann::json{{"object", w.object}, {"element", w.element}, {"detail", w.detail}};
}

class LawReport {
public:
    void add(std::string law, std::string probe, std::optional<Witness> failure) {
        LawEntry e{std::move(law), std::move(probe), !failure.has_value(), std::move(failure)};
        entries_.push_back(std::move(e));
    }

    /// Evaluates `check`, recording an exception as a failure.
    template <class F>
    void check(const std::string& law, const std::string& probe, F&& check) {
        try {
            add(law, probe, check());
        } catch (const std::exception& ex) {
            add(law, probe, Witness{-1, -1, ex.what()});
        }
    }

    void merge(const LawReport& other) {
        entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
    }

    bool all_passed() const {
        for (const auto& e : entries_)
            if (!e.passed) return false;
        return true;
    }

    std::vector<LawEntry> failures() const {
        std::vector<LawEntry> out;
        for (const auto& e : entries_)
            if (!e.passed) out.push_back(e);
        return out;
    }

    bool failed(const std::string& law) const {
        for (const auto& e : entries_)
            if (!e.passed && e.law == law) return true;
        return false;
    }

    const std::vector<LawEntry>& entries() const { return entries_; }

    nlohmann::json to_json() const {
        auto arr = nlohmann::json::array();
        for (const auto& e : entries_) {
            nlohmann::json j{{"law", e.law}, {"probe", e.probe}, {"status", e.passed ? "pass" : "fail"}};
            if (e.witness) j["witness"] = witness_json(*e.witness);
            arr.push_back(std::move(j));
        }
        return arr;
    }

    std::string summary() const {
        std::string s;
        for (const auto& e : failures()) {
            s += e.law + " [" + e.probe + "]";
            if (e.witness) s += ": " + describe(*e.witness);
            s += "\n";
        }
        return s;
    }

private:
    std::vector<LawEntry> entries_;
};

/// A named arrow or square on which laws are evaluated.
struct Probe {
    std::string name;
    std::optional<PresheafMap> arrow;
    std::optional<Square> square;

    static Probe of_arrow(std::string name, PresheafMap f) { return Probe{std::move(name), std::move(f), std::nullopt}; }
    static Probe of_square(std::string name, Square s) { return Probe{std::move(name), std::nullopt, std::move(s)}; }
};

inline std::optional<Witness> equal_maps(const PresheafMap& a, const PresheafMap& b) { return map_difference(a, b); }

inline std::optional<Witness> natural_map(const PresheafMap& m) { return m.validate(); }

inline void verify_arrow_laws(const Awfs& a, const std::string& name, const PresheafMap& f, LawReport& r) {
    r.check("factorization", name, [&]() -> std::optional<Witness> {
        auto fa = a.factor(f);
        if (!(fa.left.src == f.src)) return Witness{-1, -1, "left factor has the wrong domain"};
        if (!(fa.right.dst == f.dst)) return Witness{-1, -1, "right factor has the wrong codomain"};
        return equal_maps(compose(fa.right, fa.left), f);
    });
    r.check("functor_identity", name, [&] {
        return equal_maps(a.on_square(identity_square(f)), identity_map(a.middle(f)));
    });
    r.check("comonad_delta_square", name, [&]() -> std::optional<Witness> {
        auto d = a.delta(f);
        if (auto w = natural_map(d)) return w;
        auto lf = a.left(f);
        return equal_maps(compose(d, lf), a.left(lf));
    });
    r.check("comonad_counit_left", name, [&] {
        auto lf = a.left(f);
        return equal_maps(compose(a.right(lf), a.delta(f)), identity_map(lf.dst));
    });
    r.check("comonad_counit_right", name, [&] {
        auto fa = a.factor(f);
        auto e = a.on_square(fa.left, f, identity_map(f.src), fa.right);
        return equal_maps(compose(e, a.delta(f)), identity_map(fa.middle()));
    });
    r.check("comonad_coassociativity", name, [&] {
        auto lf = a.left(f);
        auto d = a.delta(f);
        auto llf = a.left(lf);
        auto e = a.on_square(lf, llf, identity_map(f.src), d);
        return equal_maps(compose(a.delta(lf), d), compose(e, d));
    });
    r.check("monad_mu_square", name, [&]() -> std::optional<Witness> {
        auto m = a.mu(f);
        if (auto w = natural_map(m)) return w;
        auto rf = a.right(f);
        return equal_maps(compose(rf, m), a.right(rf));
    });
    r.check("monad_unit_left", name, [&] {
        auto rf = a.right(f);
        return equal_maps(compose(a.mu(f), a.left(rf)), identity_map(rf.src));
    });
    r.check("monad_unit_right", name, [&] {
        auto fa = a.factor(f);
        auto e = a.on_square(f, fa.right, fa.left, identity_map(f.dst));
        return equal_maps(compose(a.mu(f), e), identity_map(fa.middle()));
    });
    r.check("monad_associativity", name, [&] {
        auto rf = a.right(f);
        auto m = a.mu(f);
        auto rrf = a.right(rf);
        auto e = a.on_square(rrf, rf, m, identity_map(f.dst));
        return equal_maps(compose(m, a.mu(rf)), compose(m, e));
    });
    r.check("distributive_law", name, [&] {
        auto fa = a.factor(f);
        auto d = a.delta(f);
        auto m = a.mu(f);
        auto lrf = a.left(fa.right);
        auto rlf = a.right(fa.left);
        auto e = a.on_square(lrf, rlf, d, m);
        return equal_maps(compose(d, m), compose(a.mu(fa.left), e, a.delta(fa.right)));
    });
}

inline void verify_square_laws(const Awfs& a, const std::string& name, const Square& sq, LawReport& r) {
    r.check("functor_square", name, [&]() -> std::optional<Witness> {
        if (auto w = square_defect(sq.src, sq.dst, sq.top, sq.bottom)) return w;
        auto e = a.on_square(sq);
        if (auto w = natural_map(e)) return w;
        if (auto w = equal_maps(compose(e, a.left(sq.src)), compose(a.left(sq.dst), sq.top))) return w;
        return equal_maps(compose(a.right(sq.dst), e), compose(sq.bottom, a.right(sq.src)));
    });
    r.check("delta_naturality", name, [&] {
        auto e = a.on_square(sq);
        auto lsq = a.on_square(a.left(sq.src), a.left(sq.dst), sq.top, e);
        return equal_maps(compose(a.delta(sq.dst), e), compose(lsq, a.delta(sq.src)));
    });
    r.check("mu_naturality", name, [&] {
        auto e = a.on_square(sq);
        auto rsq = a.on_square(a.right(sq.src), a.right(sq.dst), e, sq.bottom);
        return equal_maps(compose(a.mu(sq.dst), rsq), compose(e, a.mu(sq.src)));
    });
}

/// Comonad, monad and distributive laws on every probe, plus functoriality of E on
/// composable probe squares. Failures are data.
inline LawReport verify_awfs(const Awfs& a, const std::vector<Probe>& probes) {
    LawReport r;
    for (const auto& p : probes) {
        if (p.arrow) verify_arrow_laws(a, p.name, *p.arrow, r);
        if (p.square) verify_square_laws(a, p.name, *p.square, r);
    }
    for (const auto& p : probes) {
        if (!p.square) continue;
        for (const auto& q : probes) {
            if (!q.square || !(p.square->dst == q.square->src)) continue;
            r.check("functor_composition", p.name + ";" + q.name, [&] {
                auto c = compose_squares_v(*p.square, *q.square);
                return equal_maps(a.on_square(c), compose(a.on_square(*q.square), a.on_square(*p.square)));
            });
        }
    }
    return r;
}

/// Triangles, comonad-morphism and monad-morphism conditions, naturality on squares.
inline LawReport verify_awfs_morphism(const AwfsMorphism& m, const Awfs& from, const Awfs& to,
                                      const std::vector<Probe>& probes) {
    LawReport r;
    for (const auto& p : probes) {
        if (p.arrow) {
            const auto& f = *p.arrow;
            r.check("morphism_triangle_left", p.name, [&]() -> std::optional<Witness> {
                auto x = m.xi(f);
                if (auto w = natural_map(x)) return w;
                return equal_maps(compose(x, from.left(f)), to.left(f));
            });
            r.check("morphism_triangle_right", p.name,
                    [&] { return equal_maps(compose(to.right(f), m.xi(f)), from.right(f)); });
            r.check("morphism_comonad", p.name, [&] {
                auto x = m.xi(f);
                auto lf = from.left(f);
                auto l2f = to.left(f);
                auto e = to.on_square(lf, l2f, identity_map(f.src), x);
                return equal_maps(compose(to.delta(f), x), compose(e, m.xi(lf), from.delta(f)));
            });
            r.check("morphism_monad", p.name, [&] {
                auto x = m.xi(f);
                auto rf = from.right(f);
                auto r2f = to.right(f);
                auto e = from.on_square(rf, r2f, x, identity_map(f.dst));
                return equal_maps(compose(to.mu(f), m.xi(r2f), e), compose(x, from.mu(f)));
            });
        }
        if (p.square) {
            const auto& sq = *p.square;
            r.check("morphism_naturality", p.name, [&] {
                return equal_maps(compose(m.xi(sq.dst), from.on_square(sq)), compose(to.on_square(sq), m.xi(sq.src)));
            });
        }
    }
    return r;
}

}  // namespace awfs
