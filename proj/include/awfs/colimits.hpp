#pragma once
// Pointwise finite colimits: coproducts, pushouts, coequalizers, and evaluation
// of the universal property.

#include <numeric>

#include "awfs/core.hpp"

namespace awfs {

/// Union–find whose representative is always the smallest element of its class.
class UnionFind {
public:
    explicit UnionFind(int n = 0) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    int find(int x) {
        int r = x;
        while (parent_[r] != r) r = parent_[r];
        while (parent_[x] != r) {
            int next = parent_[x];
            parent_[x] = r;
            x = next;
        }
        return r;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a < b) parent_[b] = a;
        else parent_[a] = b;
        return true;
    }

    int size() const { return static_cast<int>(parent_.size()); }

private:
    std::vector<int> parent_;
};

/// Quotient of a presheaf by relations, closed up to a congruence.
struct QuotientResult {
    Presheaf object;
    PresheafMap map;
};

/**
 * Quotients `p` by the congruence generated by `relations` (per object, pairs of
 * elements). Classes are labelled by their smallest element, renumbered in order
 * of first appearance.
 */
inline QuotientResult quotient(const Presheaf& p, const std::vector<std::vector<std::pair<int, int>>>& relations) {
    const auto& base = *p.base;
    const int n_obj = base.object_count();
    std::vector<UnionFind> uf;
    for (int o = 0; o < n_obj; ++o) uf.emplace_back(p.sizes[o]);
    for (int o = 0; o < static_cast<int>(relations.size()); ++o)
        for (auto [a, b] : relations[o]) uf.at(o).unite(a, b);
    // Close under the action so the quotient action is well defined.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int m = 0; m < base.morphism_count(); ++m) {
            if (base.is_identity(m)) continue;
            const auto& mor = base.morphism(m);
            for (int y = 0; y < p.sizes[mor.dst]; ++y) {
                int r = uf[mor.dst].find(y);
                if (r == y) continue;
                if (uf[mor.src].unite(p.action[m][y], p.action[m][r])) changed = true;
            }
        }
    }
    QuotientResult out;
    out.object.base = p.base;
    out.map.src = p;
    std::vector<Table> label(n_obj);
    for (int o = 0; o < n_obj; ++o) {
        label[o].assign(p.sizes[o], -1);
        int next = 0;
        for (int x = 0; x < p.sizes[o]; ++x) {
            int r = uf[o].find(x);
            if (r == x) label[o][x] = next++;
            label[o][x] = label[o][r];
        }
        out.object.sizes.push_back(next);
    }
    for (int m = 0; m < base.morphism_count(); ++m) {
        const auto& mor = base.morphism(m);
        Table t(out.object.sizes[mor.dst], -1);
        for (int y = 0; y < p.sizes[mor.dst]; ++y) t[label[mor.dst][y]] = label[mor.src][p.action[m][y]];
        out.object.action.push_back(std::move(t));
    }
    out.map.dst = out.object;
    out.map.comp = std::move(label);
    return out;
}

/**
 * A computed colimit: the colimit object together with one leg per summand of the
 * underlying coproduct. The legs are jointly surjective.
 */
struct ColimitRecord {
    Presheaf colimit;
    std::vector<PresheafMap> legs;
};

struct CoproductResult {
    Presheaf object;
    std::vector<PresheafMap> injections;
};

inline CoproductResult coproduct(const std::vector<Presheaf>& parts, const BasePtr& base) {
    for (const auto& p : parts)
        if (!same_base(p.base, base)) throw BaseMismatch("coproduct: parts over different bases");
    CoproductResult out;
    out.object.base = base;
    out.object.sizes.assign(base->object_count(), 0);
    std::vector<std::vector<int>> offsets;
    for (const auto& p : parts) {
        offsets.push_back(out.object.sizes);
        for (int o = 0; o < base->object_count(); ++o) out.object.sizes[o] += p.sizes[o];
    }
    for (int m = 0; m < base->morphism_count(); ++m) {
        const auto& mor = base->morphism(m);
        Table t;
        for (std::size_t i = 0; i < parts.size(); ++i)
            for (int y : parts[i].action[m]) t.push_back(y + offsets[i][mor.src]);
        out.object.action.push_back(std::move(t));
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        PresheafMap inj{parts[i], out.object, {}};
        for (int o = 0; o < base->object_count(); ++o) {
            Table t(parts[i].sizes[o]);
            std::iota(t.begin(), t.end(), offsets[i][o]);
            inj.comp.push_back(std::move(t));
        }
        out.injections.push_back(std::move(inj));
    }
    return out;
}

inline CoproductResult coproduct(const std::vector<Presheaf>& parts) {
    if (parts.empty()) throw ShapeMismatch("coproduct: empty list needs an explicit base");
    return coproduct(parts, parts.front().base);
}

inline ColimitRecord coproduct_record(const CoproductResult& c) { return ColimitRecord{c.object, c.injections}; }

struct PushoutResult {
    Presheaf object;
    PresheafMap left;   // B → P
    PresheafMap right;  // C → P
    ColimitRecord record;
};

/// Pushout of B ← A → C, as (B ⊔ C)/(f(a) ∼ g(a)).
inline PushoutResult pushout(const PresheafMap& f, const PresheafMap& g) {
    if (!same_base(f.src.base, g.src.base)) throw BaseMismatch("pushout: maps over different bases");
    if (!(f.src == g.src)) throw ShapeMismatch("pushout: maps have different sources");
    auto sum = coproduct({f.dst, g.dst}, f.src.base);
    std::vector<std::vector<std::pair<int, int>>> rel(f.src.sizes.size());
    for (std::size_t o = 0; o < f.src.sizes.size(); ++o)
        for (int a = 0; a < f.src.sizes[o]; ++a)
            rel[o].emplace_back(sum.injections[0].comp[o][f.comp[o][a]], sum.injections[1].comp[o][g.comp[o][a]]);
    auto q = quotient(sum.object, rel);
    PushoutResult out{q.object, compose(q.map, sum.injections[0]), compose(q.map, sum.injections[1]), {}};
    out.record = ColimitRecord{out.object, {out.left, out.right}};
    return out;
}

struct CoequalizerResult {
    Presheaf object;
    PresheafMap map;
    ColimitRecord record;
};

inline CoequalizerResult coequalizer(const PresheafMap& f, const PresheafMap& g) {
    if (!same_base(f.src.base, g.src.base)) throw BaseMismatch("coequalizer: maps over different bases");
    if (!(f.src == g.src) || !(f.dst == g.dst)) throw ShapeMismatch("coequalizer: maps are not parallel");
    std::vector<std::vector<std::pair<int, int>>> rel(f.src.sizes.size());
    for (std::size_t o = 0; o < f.src.sizes.size(); ++o)
        for (int a = 0; a < f.src.sizes[o]; ++a) rel[o].emplace_back(f.comp[o][a], g.comp[o][a]);
    auto q = quotient(f.dst, rel);
    return CoequalizerResult{q.object, q.map, ColimitRecord{q.object, {q.map}}};
}

struct FactorResult {
    std::optional<PresheafMap> map;
    std::optional<Witness> failure;
};

/// Unique map out of the colimit through which the cocone factors, or the first
/// colimit element on which the cocone legs disagree.
inline FactorResult check_cocone_factor(const ColimitRecord& rec, const std::vector<PresheafMap>& cocone) {
    if (cocone.size() != rec.legs.size()) return {std::nullopt, Witness{-1, -1, "cocone has wrong number of legs"}};
    if (cocone.empty()) {
        if (rec.colimit.total() != 0) return {std::nullopt, Witness{-1, -1, "empty cocone on nonempty colimit"}};
        return {std::nullopt, Witness{-1, -1, "empty cocone has no target"}};
    }
    const Presheaf& target = cocone.front().dst;
    for (std::size_t i = 0; i < cocone.size(); ++i) {
        if (!(cocone[i].dst == target)) return {std::nullopt, Witness{-1, -1, "cocone legs have different targets"}};
        if (!(cocone[i].src == rec.legs[i].src))
            return {std::nullopt, Witness{-1, -1, "cocone leg " + std::to_string(i) + " has the wrong source"}};
    }
    PresheafMap h{rec.colimit, target, {}};
    for (int s : rec.colimit.sizes) h.comp.emplace_back(s, -1);
    for (std::size_t i = 0; i < cocone.size(); ++i)
        for (std::size_t o = 0; o < cocone[i].comp.size(); ++o)
            for (std::size_t x = 0; x < cocone[i].comp[o].size(); ++x) {
                int e = rec.legs[i].comp[o][x];
                int v = cocone[i].comp[o][x];
                int& slot = h.comp[o][e];
                if (slot < 0) slot = v;
                else if (slot != v)
                    return {std::nullopt, Witness{static_cast<int>(o), e, "cocone does not commute"}};
            }
    for (std::size_t o = 0; o < h.comp.size(); ++o)
        for (std::size_t e = 0; e < h.comp[o].size(); ++e)
            if (h.comp[o][e] < 0)
                return {std::nullopt, Witness{static_cast<int>(o), static_cast<int>(e), "colimit legs not jointly surjective"}};
    if (auto w = h.naturality_defect()) return {std::nullopt, w};
    return {h, std::nullopt};
}

}  // namespace awfs
