#pragma once
// Generator diagrams, lifting functions, algebra and coalgebra structures, the
// canonical lift and the exhaustive filler oracle.

#include <unordered_map>

#include "awfs/arrow.hpp"

namespace awfs {

/**
 * A functor from a finite shape category into the arrow category: an arrow per
 * shape object and a square per shape morphism m: j′ → j, running arrow(j′) ⇒ arrow(j).
 */
struct GeneratorDiagram {
    BasePtr shape;
    std::vector<std::string> names;
    std::vector<PresheafMap> arrows;
    std::vector<Square> squares;

    int size() const { return static_cast<int>(arrows.size()); }

    static GeneratorDiagram discrete(std::vector<std::string> names, std::vector<PresheafMap> arrows) {
        if (names.size() != arrows.size()) throw ShapeMismatch("generator names and arrows differ in number");
        GeneratorDiagram g;
        g.shape = make_base(FiniteCategory::discrete(names));
        g.names = std::move(names);
        g.arrows = std::move(arrows);
        for (const auto& a : g.arrows) g.squares.push_back(identity_square(a));
        return g;
    }

    static GeneratorDiagram empty() { return discrete({}, {}); }

    bool is_discrete() const {
        for (int m = 0; m < shape->morphism_count(); ++m)
            if (!shape->is_identity(m)) return false;
        return true;
    }

    std::optional<std::string> validate() const {
        if (!shape) return "generator diagram has no shape";
        if (auto e = shape->validate()) return e;
        if (static_cast<int>(arrows.size()) != shape->object_count()) return "one arrow per shape object expected";
        if (static_cast<int>(squares.size()) != shape->morphism_count()) return "one square per shape morphism expected";
        if (names.size() != arrows.size()) return "one name per generator expected";
        for (std::size_t i = 0; i < arrows.size(); ++i) {
            if (auto w = arrows[i].validate()) return "generator " + names[i] + ": " + describe(*w);
            if (i > 0 && !same_base(arrows[i].src.base, arrows[0].src.base))
                return "generators live over different bases";
        }
        for (int m = 0; m < shape->morphism_count(); ++m) {
            const auto& mor = shape->morphism(m);
            const auto& sq = squares[m];
            if (!(sq.src == arrows[mor.src]) || !(sq.dst == arrows[mor.dst]))
                return "square of " + mor.name + " has wrong endpoints";
            if (auto w = square_defect(sq.src, sq.dst, sq.top, sq.bottom))
                return "square of " + mor.name + " does not commute: " + describe(*w);
            if (shape->is_identity(m) && (!(sq.top == identity_map(sq.src.src)) || !(sq.bottom == identity_map(sq.src.dst))))
                return "identity " + mor.name + " is not sent to an identity square";
        }
        for (int g = 0; g < shape->morphism_count(); ++g)
            for (int f = 0; f < shape->morphism_count(); ++f) {
                if (shape->morphism(f).dst != shape->morphism(g).src) continue;
                int h = shape->compose(g, f);
                auto c = compose_squares_v(squares[f], squares[g]);
                if (!(c.top == squares[h].top) || !(c.bottom == squares[h].bottom))
                    return "composite " + shape->morphism(h).name + " is not preserved";
            }
        return std::nullopt;
    }
};

/// All squares j ⇒ g in lexicographic order of (top, bottom) tables.
inline std::vector<Square> enumerate_squares(const PresheafMap& j, const PresheafMap& g) {
    std::vector<Square> out;
    for_each_map(j.src, g.src, {}, [&](const PresheafMap& u) {
        std::vector<Table> fixed;
        for (std::size_t o = 0; o < j.dst.sizes.size(); ++o) fixed.emplace_back(j.dst.sizes[o], -1);
        for (std::size_t o = 0; o < j.comp.size(); ++o)
            for (std::size_t x = 0; x < j.comp[o].size(); ++x) {
                int want = g.comp[o][u.comp[o][x]];
                int& slot = fixed[o][j.comp[o][x]];
                if (slot >= 0 && slot != want) return true;
                slot = want;
            }
        for_each_map(j.dst, g.dst, fixed, [&](const PresheafMap& v) {
            out.push_back(Square{j, g, u, v});
            return true;
        });
        return true;
    });
    return out;
}

/// Failure of w to be a diagonal filler of sq: w∘j = top and g∘w = bottom.
inline std::optional<Witness> fill_defect(const PresheafMap& w, const Square& sq) {
    if (!(w.src == sq.src.dst) || !(w.dst == sq.dst.src)) return Witness{-1, -1, "filler has the wrong type"};
    if (auto e = w.validate()) return e;
    if (auto e = map_difference(compose(w, sq.src), sq.top)) {
        e->detail = "upper triangle: " + e->detail;
        return e;
    }
    if (auto e = map_difference(compose(sq.dst, w), sq.bottom)) {
        e->detail = "lower triangle: " + e->detail;
        return e;
    }
    return std::nullopt;
}

/// Every diagonal filler of sq, in canonical order.
inline std::vector<PresheafMap> oracle_lift(const PresheafMap& j, const PresheafMap& g, const Square& sq) {
    std::vector<PresheafMap> out;
    std::vector<Table> fixed;
    for (std::size_t o = 0; o < j.dst.sizes.size(); ++o) fixed.emplace_back(j.dst.sizes[o], -1);
    for (std::size_t o = 0; o < j.comp.size(); ++o)
        for (std::size_t x = 0; x < j.comp[o].size(); ++x) {
            int want = sq.top.comp[o][x];
            int& slot = fixed[o][j.comp[o][x]];
            if (slot >= 0 && slot != want) return out;
            slot = want;
        }
    for_each_map(
        j.dst, g.src, fixed, [&](int o, int x, int v) { return g.comp[o][v] == sq.bottom.comp[o][x]; },
        [&](const PresheafMap& w) {
            out.push_back(w);
            return true;
        });
    return out;
}

inline std::vector<PresheafMap> oracle_lift(const Square& sq) { return oracle_lift(sq.src, sq.dst, sq); }

class FillFailure : public Error {
public:
    FillFailure(const std::string& what, Witness w) : Error(what + " (" + describe(w) + ")"), witness(std::move(w)) {}
    Witness witness;
};

/**
 * A lifting function against the generators of a diagram for a fixed arrow g,
 * stored densely over the canonical enumeration of squares j ⇒ g.
 */
class LiftingFunction {
public:
    using Fn = std::function<PresheafMap(int, const Square&)>;

    LiftingFunction() = default;

    LiftingFunction(const GeneratorDiagram& gen, PresheafMap g, const Fn& fill) : g_(std::move(g)) {
        for (int j = 0; j < gen.size(); ++j) {
            squares_.push_back(enumerate_squares(gen.arrows[j], g_));
            std::vector<PresheafMap> fills;
            std::unordered_map<std::string, std::size_t> index;
            for (std::size_t i = 0; i < squares_.back().size(); ++i) {
                fills.push_back(fill(j, squares_.back()[i]));
                index.emplace(square_key(squares_.back()[i]), i);
            }
            fills_.push_back(std::move(fills));
            index_.push_back(std::move(index));
        }
    }

    const PresheafMap& target() const { return g_; }
    int generator_count() const { return static_cast<int>(squares_.size()); }
    const std::vector<Square>& squares(int j) const { return squares_.at(j); }
    const PresheafMap& fill_at(int j, std::size_t i) const { return fills_.at(j).at(i); }
    void set_fill(int j, std::size_t i, PresheafMap w) { fills_.at(j).at(i) = std::move(w); }

    std::optional<std::size_t> index_of(int j, const Square& sq) const {
        auto it = index_.at(j).find(square_key(sq));
        if (it == index_.at(j).end()) return std::nullopt;
        return it->second;
    }

    const PresheafMap& fill(int j, const Square& sq) const {
        auto i = index_of(j, sq);
        if (!i) throw ShapeMismatch("lifting function has no square with this key");
        return fills_[j][*i];
    }

    const PresheafMap& fill(int j, const PresheafMap& u, const PresheafMap& v) const {
        auto it = index_.at(j).find(table_key(u) + "|" + table_key(v));
        if (it == index_.at(j).end()) throw ShapeMismatch("lifting function has no square with this key");
        return fills_[j][it->second];
    }

private:
    PresheafMap g_;
    std::vector<std::vector<Square>> squares_;
    std::vector<std::vector<PresheafMap>> fills_;
    std::vector<std::unordered_map<std::string, std::size_t>> index_;
};

/// R-algebra (g, t) with t: Eg → dom g.
struct AlgebraStructure {
    PresheafMap g;
    PresheafMap t;
};

/// L-coalgebra (f, s) with s: cod f → Ef.
struct CoalgebraStructure {
    PresheafMap f;
    PresheafMap s;
};

/// Every fill is a filler, and φ(j′, u·a, v·b) = φ(j, u, v)·b for each shape morphism.
inline LawReport check_lifting_function(const GeneratorDiagram& gen, const LiftingFunction& lf) {
    LawReport r;
    for (int j = 0; j < gen.size(); ++j) {
        const auto& sqs = lf.squares(j);
        for (std::size_t i = 0; i < sqs.size(); ++i)
            r.check("lifting_fill", gen.names[j] + "#" + std::to_string(i),
                    [&] { return fill_defect(lf.fill_at(j, i), sqs[i]); });
    }
    for (int m = 0; m < gen.shape->morphism_count(); ++m) {
        if (gen.shape->is_identity(m)) continue;
        const auto& mor = gen.shape->morphism(m);
        const auto& ab = gen.squares[m];
        const auto& sqs = lf.squares(mor.dst);
        for (std::size_t i = 0; i < sqs.size(); ++i)
            r.check("lifting_coherence", gen.shape->morphism(m).name + "#" + std::to_string(i), [&] {
                const auto& s = sqs[i];
                const auto& lhs = lf.fill(mor.src, compose(s.top, ab.top), compose(s.bottom, ab.bottom));
                return map_difference(lhs, compose(lf.fill_at(mor.dst, i), ab.bottom));
            });
    }
    return r;
}

/// w = t ∘ E(u, v) ∘ s, checked to fill the square.
inline PresheafMap solve_lift(const CoalgebraStructure& c, const AlgebraStructure& a, const Square& sq,
                              const FunctorialFactorization& F) {
    auto w = compose(a.t, F.on_square(sq), c.s);
    if (auto e = fill_defect(w, sq)) throw FillFailure("canonical lift does not fill", *e);
    return w;
}

/// Retract data exhibiting h as a retract of g: squares (i1, i2): h ⇒ g and (r1, r2): g ⇒ h.
struct RetractData {
    PresheafMap i1, i2, r1, r2;
};

inline LiftingFunction retract_transfer(const GeneratorDiagram& gen, const LiftingFunction& phi, const PresheafMap& h,
                                        const RetractData& d) {
    const auto& g = phi.target();
    if (auto w = square_defect(h, g, d.i1, d.i2)) throw ValidationError("retract: (i1, i2) is not a square", *w);
    if (auto w = square_defect(g, h, d.r1, d.r2)) throw ValidationError("retract: (r1, r2) is not a square", *w);
    if (auto w = map_difference(compose(d.r1, d.i1), identity_map(h.src)))
        throw ValidationError("retract: r1 i1 is not the identity", *w);
    if (auto w = map_difference(compose(d.r2, d.i2), identity_map(h.dst)))
        throw ValidationError("retract: r2 i2 is not the identity", *w);
    return LiftingFunction(gen, h, [&](int j, const Square& sq) {
        return compose(d.r1, phi.fill(j, compose(d.i1, sq.top), compose(d.i2, sq.bottom)));
    });
}

/// (ψ•φ)(j, a, b) = φ(j, a, ψ(j, f·a, b)) for the composite g∘f.
inline LiftingFunction compose_lifting(const GeneratorDiagram& gen, const LiftingFunction& phi,
                                       const LiftingFunction& psi) {
    const auto& f = phi.target();
    const auto& g = psi.target();
    if (!(f.dst == g.src)) throw ShapeMismatch("compose_lifting: arrows are not composable");
    return LiftingFunction(gen, compose(g, f), [&](int j, const Square& sq) {
        const auto& inner = psi.fill(j, compose(f, sq.top), sq.bottom);
        return phi.fill(j, sq.top, inner);
    });
}

/// (g∘f, s ∘ E(1, t·E(f, 1)) ∘ δ_{gf}).
inline AlgebraStructure compose_algebras_free(const AlgebraStructure& af, const AlgebraStructure& ag, const Awfs& a) {
    const auto& f = af.g;
    const auto& g = ag.g;
    if (!(f.dst == g.src)) throw ShapeMismatch("compose_algebras_free: arrows are not composable");
    auto gf = compose(g, f);
    auto e_f1 = a.on_square(gf, g, f, identity_map(g.dst));
    auto bottom = compose(ag.t, e_f1);
    auto e = a.on_square(a.left(gf), f, identity_map(f.src), bottom);
    return AlgebraStructure{gf, compose(af.t, e, a.delta(gf))};
}

/// s′ · E(u, v) = u · s.
inline bool check_algebra_map(const Square& sq, const AlgebraStructure& af, const AlgebraStructure& ag,
                              const FunctorialFactorization& F) {
    try {
        return !map_difference(compose(ag.t, F.on_square(sq)), compose(sq.top, af.t)).has_value();
    } catch (const Error&) {
        return false;
    }
}

/// Unit laws, and associativity against μ.
inline LawReport check_algebra_laws(const AlgebraStructure& a, const Awfs& F, const std::string& name = "algebra") {
    LawReport r;
    const auto& g = a.g;
    r.check("algebra_unit", name, [&]() -> std::optional<Witness> {
        if (auto w = a.t.validate()) return w;
        return map_difference(compose(a.t, F.left(g)), identity_map(g.src));
    });
    r.check("algebra_square", name, [&] { return map_difference(compose(g, a.t), F.right(g)); });
    r.check("algebra_associativity", name, [&] {
        auto rg = F.right(g);
        auto e = F.on_square(rg, g, a.t, identity_map(g.dst));
        return map_difference(compose(a.t, F.mu(g)), compose(a.t, e));
    });
    return r;
}

/// Unit laws, and coassociativity against δ.
inline LawReport check_coalgebra_laws(const CoalgebraStructure& c, const Awfs& F, const std::string& name = "coalgebra") {
    LawReport r;
    const auto& f = c.f;
    r.check("coalgebra_unit", name, [&]() -> std::optional<Witness> {
        if (auto w = c.s.validate()) return w;
        return map_difference(compose(F.right(f), c.s), identity_map(f.dst));
    });
    r.check("coalgebra_square", name, [&] { return map_difference(compose(c.s, f), F.left(f)); });
    r.check("coalgebra_coassociativity", name, [&] {
        auto e = F.on_square(f, F.left(f), identity_map(f.src), c.s);
        return map_difference(compose(F.delta(f), c.s), compose(e, c.s));
    });
    return r;
}

/// First section of Rf under f (in oracle order) that satisfies the coalgebra laws.
inline std::optional<CoalgebraStructure> find_coalgebra(const PresheafMap& f, const Awfs& F) {
    auto fa = F.factor(f);
    for (auto& s : oracle_lift(make_square(f, fa.right, fa.left, identity_map(f.dst)))) {
        CoalgebraStructure c{f, std::move(s)};
        if (check_coalgebra_laws(c, F).all_passed()) return c;
    }
    return std::nullopt;
}

/// First retraction of Lg over g (in oracle order) that satisfies the algebra laws.
inline std::optional<AlgebraStructure> find_algebra(const PresheafMap& g, const Awfs& F) {
    auto fa = F.factor(g);
    for (auto& t : oracle_lift(make_square(fa.left, g, identity_map(g.src), fa.right))) {
        AlgebraStructure a{g, std::move(t)};
        if (check_algebra_laws(a, F).all_passed()) return a;
    }
    return std::nullopt;
}

}  // namespace awfs
