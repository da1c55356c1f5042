#pragma once
// Algebraic model structures: the comparison map, two-lift agreement, replacement
// (co)monads, the comparison χ: RQ ⇒ QR and generator pruning.

#include "awfs/soa.hpp"

namespace awfs {

/// The class of weak equivalences: every arrow, or arrows table-equal to a listed one.
struct Weq {
    bool all = true;
    std::vector<PresheafMap> arrows;

    static Weq everything() { return Weq{true, {}}; }
    static Weq listed(std::vector<PresheafMap> arrows) { return Weq{false, std::move(arrows)}; }

    bool contains(const PresheafMap& f) const {
        if (all) return true;
        for (const auto& a : arrows)
            if (a == f) return true;
        return false;
    }
};

/// Full inclusion of generator diagrams over the arrow category, given on objects.
struct GeneratorInclusion {
    std::vector<int> object_map;
};

inline std::optional<std::string> validate_inclusion(const GeneratorDiagram& j, const GeneratorDiagram& i,
                                                     const GeneratorInclusion& tau) {
    if (static_cast<int>(tau.object_map.size()) != j.size()) return "inclusion must map every generator";
    std::vector<int> seen(i.size(), 0);
    for (int a = 0; a < j.size(); ++a) {
        int b = tau.object_map[a];
        if (b < 0 || b >= i.size()) return "inclusion target out of range for " + j.names[a];
        if (seen[b]++) return "inclusion is not injective at " + i.names[b];
        if (!(j.arrows[a] == i.arrows[b])) return "generator " + j.names[a] + " is not sent to an equal arrow";
    }
    for (int m = 0; m < j.shape->morphism_count(); ++m) {
        const auto& mor = j.shape->morphism(m);
        const auto& sq = j.squares[m];
        bool found = false;
        for (int n : i.shape->hom(tau.object_map[mor.src], tau.object_map[mor.dst]))
            if (i.squares[n].top == sq.top && i.squares[n].bottom == sq.bottom) found = true;
        if (!found) return "morphism " + mor.name + " has no image square";
    }
    for (int a = 0; a < j.size(); ++a)
        for (int b = 0; b < j.size(); ++b) {
            auto hj = j.shape->hom(a, b).size();
            auto hi = i.shape->hom(tau.object_map[a], tau.object_map[b]).size();
            if (hj != hi) return "inclusion is not full between " + j.names[a] + " and " + j.names[b];
        }
    return std::nullopt;
}

inline CoalgebraStructure coalgebra_from_cellular(const GeneratedAwfs& gen,
                                           const std::function<std::optional<CoalgebraStructure>(int)>& zeta,
                                           const Factorization& cells);

/**
 * An algebraic model structure at instance level: the (C_t, F) awfs generated by J,
 * the (C, F_t) awfs generated by I, the inclusion τ: J → I and the class of weak
 * equivalences. The comparison map ξ is built by the canonical lift.
 */
class AlgebraicModelStructure {
public:
    AlgebraicModelStructure(std::shared_ptr<const GeneratedAwfs> trivial, std::shared_ptr<const GeneratedAwfs> cof,
                            GeneratorInclusion tau, Weq weq = Weq::everything())
        : gen_t_(std::move(trivial)), gen_(std::move(cof)), tau_(std::move(tau)), weq_(std::move(weq)) {
        if (auto e = validate_inclusion(gen_t_->generators(), gen_->generators(), tau_))
            throw ValidationError("generator inclusion rejected: " + *e);
    }

    const GeneratedAwfs& trivial() const { return *gen_t_; }
    const GeneratedAwfs& cofibrant() const { return *gen_; }
    std::shared_ptr<const GeneratedAwfs> trivial_ptr() const { return gen_t_; }
    std::shared_ptr<const GeneratedAwfs> cofibrant_ptr() const { return gen_; }
    const GeneratorInclusion& tau() const { return tau_; }
    const Weq& weq() const { return weq_; }

    /// ζ(j) = λ^I(τ j): the C-coalgebra structure of a J-generator.
    CoalgebraStructure zeta(int j) const { return gen_->lambda(tau_.object_map.at(j)); }

    /// C-coalgebra structure on C_t f assembled cell by cell from ζ.
    CoalgebraStructure cellular_coalgebra(const PresheafMap& f) const {
        return coalgebra_from_cellular(*gen_, [&](int j) { return std::optional<CoalgebraStructure>(zeta(j)); },
                                       gen_t_->factorization(f));
    }

    /// ξ_f: E_t f → Qf, the canonical lift of (Cf, Ff): C_t f ⇒ F_t f.
    PresheafMap xi(const PresheafMap& f) const {
        auto key = arrow_key(f);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = xi_.find(key);
            if (it != xi_.end()) return it->second;
        }
        auto c = cellular_coalgebra(f);
        const auto& Ft = gen_t_->factorization(f);
        auto fi = gen_->factor(f);
        Square sq = make_square(Ft.left, fi.right, fi.left, Ft.right);
        auto w = solve_lift(c, gen_->free_algebra(f), sq, *gen_);
        std::lock_guard<std::mutex> lock(mutex_);
        return xi_.emplace(key, w).first->second;
    }

    AwfsMorphism comparison() const {
        return AwfsMorphism{[this](const PresheafMap& f) { return xi(f); }};
    }

    /// ξ_f recomputed by extending Cf over the J-cells of f with I-fills.
    PresheafMap xi_by_cells(const PresheafMap& f) const {
        const auto& Ft = gen_t_->factorization(f);
        const auto& Fi = gen_->factorization(f);
        return extend_cellular(Ft, Fi.middle(), Fi.left, [&](const CellRecord& c, const PresheafMap& mu) {
            return Fi.fill(tau_.object_map[c.j], mu, c.v);
        });
    }

    /// ξ_*: C_t-coalgebras to C-coalgebras.
    CoalgebraStructure push_coalgebra(const CoalgebraStructure& c) const {
        return CoalgebraStructure{c.f, compose(xi(c.f), c.s)};
    }

    /// ξ^*: F_t-algebras to F-algebras.
    AlgebraStructure pull_algebra(const AlgebraStructure& a) const {
        return AlgebraStructure{a.g, compose(a.t, xi(a.g))};
    }

    /// Lift of sq for a C_t-coalgebra and an F_t-algebra, computed in (C, F_t) and in (C_t, F).
    std::pair<PresheafMap, PresheafMap> two_lifts(const CoalgebraStructure& c, const AlgebraStructure& a,
                                                  const Square& sq) const {
        auto first = solve_lift(push_coalgebra(c), a, sq, *gen_);
        auto second = solve_lift(c, pull_algebra(a), sq, *gen_t_);
        return {first, second};
    }

    bool two_lift_agreement(const CoalgebraStructure& c, const AlgebraStructure& a, const Square& sq) const {
        auto [x, y] = two_lifts(c, a, sq);
        return x == y;
    }

private:
    std::shared_ptr<const GeneratedAwfs> gen_t_;
    std::shared_ptr<const GeneratedAwfs> gen_;
    GeneratorInclusion tau_;
    Weq weq_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, PresheafMap> xi_;
};

/**
 * Coalgebra structure for the cellular arrow C_t f of a factorization whose cells are
 * generators with ζ-structures: each cell is sent to the canonical lift of ζ(j)
 * against the free algebra on the right factor of C_t f.
 */
inline CoalgebraStructure coalgebra_from_cellular(const GeneratedAwfs& gen,
                                                  const std::function<std::optional<CoalgebraStructure>(int)>& zeta,
                                                  const Factorization& cells) {
    const auto& h = cells.left;
    auto fh = gen.factor(h);
    auto alg = gen.free_algebra(h);
    std::map<int, CoalgebraStructure> structures;
    auto s = extend_cellular(cells, fh.middle(), fh.left, [&](const CellRecord& c, const PresheafMap& mu) {
        auto it = structures.find(c.j);
        if (it == structures.end()) {
            auto z = zeta(c.j);
            if (!z) throw ValidationError("no coalgebra structure for generator " + std::to_string(c.j));
            it = structures.emplace(c.j, *z).first;
        }
        Square sq = make_square(it->second.f, fh.right, mu, c.injection);
        return solve_lift(it->second, alg, sq, gen);
    });
    return CoalgebraStructure{h, s};
}

/// Checks 2-of-3 on composable pairs, acyclicity of C_t-coalgebras and the
/// trivial-fibration condition on the listed arrows.
inline LawReport check_model_axioms(const AlgebraicModelStructure& ms,
                                    const std::vector<std::pair<std::string, PresheafMap>>& arrows) {
    LawReport r;
    const auto& w = ms.weq();
    for (const auto& [fn, f] : arrows)
        for (const auto& [gn, g] : arrows) {
            if (!(f.dst == g.src)) continue;
            r.check("two_of_three", fn + ";" + gn, [&]() -> std::optional<Witness> {
                int n = w.contains(f) + w.contains(g) + w.contains(compose(g, f));
                if (n == 2) return Witness{-1, -1, "exactly two of f, g, gf are weak equivalences"};
                return std::nullopt;
            });
        }
    const auto& J = ms.trivial().generators();
    for (int j = 0; j < J.size(); ++j)
        r.check("acyclicity", J.names[j], [&]() -> std::optional<Witness> {
            if (!w.contains(J.arrows[j])) return Witness{-1, -1, "generator is not a weak equivalence"};
            return std::nullopt;
        });
    auto has_lifts = [](const GeneratorDiagram& gen, const PresheafMap& g) {
        for (int j = 0; j < gen.size(); ++j)
            for (const auto& sq : enumerate_squares(gen.arrows[j], g))
                if (oracle_lift(sq).empty()) return false;
        return true;
    };
    for (const auto& [name, f] : arrows) {
        r.check("acyclicity", name, [&]() -> std::optional<Witness> {
            if (find_coalgebra(f, ms.trivial()) && !w.contains(f))
                return Witness{-1, -1, "arrow carries a coalgebra structure but is not a weak equivalence"};
            return std::nullopt;
        });
        r.check("trivial_fibration", name, [&]() -> std::optional<Witness> {
            if (!w.contains(f)) return std::nullopt;
            if (!has_lifts(ms.trivial().generators(), f)) return std::nullopt;
            if (!has_lifts(ms.cofibrant().generators(), f))
                return Witness{-1, -1, "weak equivalence with right lifting against J lacks lifts against I"};
            return std::nullopt;
        });
    }
    return r;
}

/// Fibrant replacement monad R (from the terminal object) and cofibrant replacement
/// comonad Q (from the initial object).
class Replacement {
public:
    explicit Replacement(const AlgebraicModelStructure& ms) : ms_(ms) {}

    Presheaf R(const Presheaf& x) const { return ms_.trivial().middle(terminal_map(x)); }
    PresheafMap eta(const Presheaf& x) const { return ms_.trivial().left(terminal_map(x)); }
    PresheafMap mu(const Presheaf& x) const { return ms_.trivial().mu(terminal_map(x)); }
    PresheafMap R(const PresheafMap& h) const {
        return ms_.trivial().on_square(terminal_map(h.src), terminal_map(h.dst), h, identity_map(Presheaf::terminal(h.src.base)));
    }

    Presheaf Q(const Presheaf& x) const { return ms_.cofibrant().middle(initial_map(x)); }
    PresheafMap epsilon(const Presheaf& x) const { return ms_.cofibrant().right(initial_map(x)); }
    PresheafMap delta(const Presheaf& x) const { return ms_.cofibrant().delta(initial_map(x)); }
    PresheafMap Q(const PresheafMap& h) const {
        return ms_.cofibrant().on_square(initial_map(h.src), initial_map(h.dst),
                                         identity_map(Presheaf::empty(h.src.base)), h);
    }

    /// The two lifts of (Qη_X, Rε_X): η_{QX} ⇒ ε_{RX}.
    std::pair<PresheafMap, PresheafMap> chi_lifts(const Presheaf& x) const {
        auto qx = Q(x);
        auto rx = R(x);
        auto j = eta(qx);
        auto q = epsilon(rx);
        Square sq = make_square(j, q, Q(eta(x)), R(epsilon(x)));
        const auto& T = ms_.trivial();
        CoalgebraStructure c{j, T.delta(terminal_map(qx))};
        AlgebraStructure a{q, ms_.cofibrant().mu(initial_map(rx))};
        return ms_.two_lifts(c, a, sq);
    }

    PresheafMap chi(const Presheaf& x) const {
        auto [first, second] = chi_lifts(x);
        if (auto w = map_difference(first, second)) throw FillFailure("the two lifts defining chi differ", *w);
        return first;
    }

    const AlgebraicModelStructure& model() const { return ms_; }

private:
    const AlgebraicModelStructure& ms_;
};

/// Monad laws for R, comonad laws for Q, naturality on maps.
inline LawReport verify_replacement(const Replacement& rep, const std::vector<std::pair<std::string, Presheaf>>& objects,
                                    const std::vector<std::pair<std::string, PresheafMap>>& maps) {
    LawReport r;
    for (const auto& [name, x] : objects) {
        r.check("R_unit_left", name, [&] {
            auto rx = rep.R(x);
            return map_difference(compose(rep.mu(x), rep.eta(rx)), identity_map(rx));
        });
        r.check("R_unit_right", name, [&] {
            auto rx = rep.R(x);
            return map_difference(compose(rep.mu(x), rep.R(rep.eta(x))), identity_map(rx));
        });
        r.check("R_associativity", name, [&] {
            auto rx = rep.R(x);
            return map_difference(compose(rep.mu(x), rep.mu(rx)), compose(rep.mu(x), rep.R(rep.mu(x))));
        });
        r.check("Q_counit_left", name, [&] {
            auto qx = rep.Q(x);
            return map_difference(compose(rep.epsilon(qx), rep.delta(x)), identity_map(qx));
        });
        r.check("Q_counit_right", name, [&] {
            auto qx = rep.Q(x);
            return map_difference(compose(rep.Q(rep.epsilon(x)), rep.delta(x)), identity_map(qx));
        });
        r.check("Q_coassociativity", name, [&] {
            auto qx = rep.Q(x);
            return map_difference(compose(rep.delta(qx), rep.delta(x)), compose(rep.Q(rep.delta(x)), rep.delta(x)));
        });
    }
    for (const auto& [name, h] : maps) {
        r.check("eta_naturality", name,
                [&] { return map_difference(compose(rep.R(h), rep.eta(h.src)), compose(rep.eta(h.dst), h)); });
        r.check("mu_naturality", name, [&] {
            return map_difference(compose(rep.R(h), rep.mu(h.src)), compose(rep.mu(h.dst), rep.R(rep.R(h))));
        });
        r.check("epsilon_naturality", name, [&] {
            return map_difference(compose(h, rep.epsilon(h.src)), compose(rep.epsilon(h.dst), rep.Q(h)));
        });
        r.check("delta_naturality", name, [&] {
            return map_difference(compose(rep.delta(h.dst), rep.Q(h)), compose(rep.Q(rep.Q(h)), rep.delta(h.src)));
        });
    }
    return r;
}

/// χ fills its defining square, both lifts agree, and χ is compatible with μ, δ and maps.
inline LawReport verify_chi(const Replacement& rep, const std::vector<std::pair<std::string, Presheaf>>& objects,
                            const std::vector<std::pair<std::string, PresheafMap>>& maps) {
    LawReport r;
    for (const auto& [name, x] : objects) {
        r.check("chi_two_lifts", name, [&] {
            auto [a, b] = rep.chi_lifts(x);
            return map_difference(a, b);
        });
        r.check("chi_unit", name, [&] {
            return map_difference(compose(rep.chi(x), rep.eta(rep.Q(x))), rep.Q(rep.eta(x)));
        });
        r.check("chi_counit", name, [&] {
            return map_difference(compose(rep.epsilon(rep.R(x)), rep.chi(x)), rep.R(rep.epsilon(x)));
        });
        r.check("chi_multiplication", name, [&] {
            auto qx = rep.Q(x);
            auto rx = rep.R(x);
            return map_difference(compose(rep.chi(x), rep.mu(qx)),
                                  compose(rep.Q(rep.mu(x)), rep.chi(rx), rep.R(rep.chi(x))));
        });
        r.check("chi_comultiplication", name, [&] {
            auto qx = rep.Q(x);
            auto rx = rep.R(x);
            return map_difference(compose(rep.delta(rx), rep.chi(x)),
                                  compose(rep.Q(rep.chi(x)), rep.chi(qx), rep.R(rep.delta(x))));
        });
    }
    for (const auto& [name, h] : maps)
        r.check("chi_naturality", name, [&] {
            return map_difference(compose(rep.chi(h.dst), rep.R(rep.Q(h))), compose(rep.Q(rep.R(h)), rep.chi(h.src)));
        });
    return r;
}

/// J′ = {Cj}, each with its free coalgebra structure δ_j and the section s of
/// F_t j found by the oracle, s∘j = Cj and F_t j∘s = 1.
struct PrunedGenerators {
    GeneratorDiagram diagram;
    std::vector<CoalgebraStructure> zeta;
    std::vector<PresheafMap> sections;
};

inline PrunedGenerators prune_generators(const GeneratedAwfs& gen, const GeneratorDiagram& J) {
    if (!J.is_discrete()) throw ValidationError("prune_generators expects a discrete generator diagram");
    PrunedGenerators out;
    std::vector<PresheafMap> arrows;
    for (int j = 0; j < J.size(); ++j) {
        const auto& a = J.arrows[j];
        auto fa = gen.factor(a);
        arrows.push_back(fa.left);
        out.zeta.push_back(gen.free_coalgebra(a));
        Square sq = make_square(a, fa.right, fa.left, identity_map(a.dst));
        auto fills = oracle_lift(sq);
        if (fills.empty()) throw ValidationError("no section for generator " + J.names[j]);
        out.sections.push_back(fills.front());
    }
    std::vector<std::string> names;
    for (const auto& n : J.names) names.push_back("C(" + n + ")");
    out.diagram = GeneratorDiagram::discrete(names, arrows);
    return out;
}

/// φ(j, u, v) = ψ(Cj, u, v·F_t j)·s from a lifting function ψ against J′.
inline LiftingFunction transfer_from_pruned(const GeneratedAwfs& gen, const GeneratorDiagram& J,
                                            const PrunedGenerators& pruned, const LiftingFunction& psi) {
    return LiftingFunction(J, psi.target(), [&](int j, const Square& sq) {
        auto ft = gen.right(J.arrows[j]);
        return compose(psi.fill(j, sq.top, compose(sq.bottom, ft)), pruned.sections[j]);
    });
}

}  // namespace awfs
