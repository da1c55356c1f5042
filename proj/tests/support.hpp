#pragma once
// Shared fixtures and brute-force oracles for the test suites. The oracles use
// plain odometer enumeration and direct table arithmetic, never the engine's search.

#include <functional>
#include <string>
#include <vector>

#include "awfs/commands.hpp"

#ifndef AWFS_FIXTURE_DIR
#define AWFS_FIXTURE_DIR "fixtures"
#endif

namespace awfs::testing {

inline BasePtr finset_base() {
    static const BasePtr base = make_base(FiniteCategory::terminal());
    return base;
}

inline Presheaf set(int n) { return Presheaf::constant(finset_base(), n); }

inline PresheafMap fn(int n, int m, Table t) { return PresheafMap{set(n), set(m), {std::move(t)}}; }

inline BasePtr graph_base() {
    static const BasePtr base = make_base(FiniteCategory::graph_base());
    return base;
}

/// Graph with `v` vertices and one edge per (source, target) pair.
inline Presheaf make_graph(int v, const std::vector<std::pair<int, int>>& edges) {
    Table s, t;
    for (auto [a, b] : edges) {
        s.push_back(a);
        t.push_back(b);
    }
    return Presheaf::make(graph_base(), {v, static_cast<int>(edges.size())}, {{2, s}, {3, t}});
}

/// Every function n → m in lexicographic order.
inline std::vector<Table> all_functions(int n, int m) {
    std::vector<Table> out;
    if (n == 0) return {Table{}};
    if (m == 0) return out;
    Table t(n, 0);
    while (true) {
        out.push_back(t);
        int i = n - 1;
        while (i >= 0 && ++t[i] == m) t[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

inline Instance fixture(const std::string& name) {
    return load_instance(std::string(AWFS_FIXTURE_DIR) + "/" + name + ".json");
}

/// Naturality checked entry by entry against the action tables.
inline bool natural(const Presheaf& p, const Presheaf& q, const std::vector<Table>& comp) {
    const auto& base = *p.base;
    for (int m = 0; m < base.morphism_count(); ++m) {
        const auto& mor = base.morphism(m);
        for (int y = 0; y < p.sizes[mor.dst]; ++y)
            if (comp[mor.src][p.action[m][y]] != q.action[m][comp[mor.dst][y]]) return false;
    }
    return true;
}

/// All natural maps p → q by exhaustive odometer over component tables.
inline std::vector<std::vector<Table>> brute_maps(const Presheaf& p, const Presheaf& q) {
    std::vector<std::pair<int, int>> slots;
    for (std::size_t o = 0; o < p.sizes.size(); ++o)
        for (int x = 0; x < p.sizes[o]; ++x) {
            if (q.sizes[o] == 0) return {};
            slots.emplace_back(static_cast<int>(o), x);
        }
    std::vector<std::vector<Table>> out;
    std::vector<Table> comp;
    for (int s : p.sizes) comp.emplace_back(s, 0);
    while (true) {
        if (natural(p, q, comp)) out.push_back(comp);
        int i = static_cast<int>(slots.size()) - 1;
        while (i >= 0) {
            auto [o, x] = slots[i];
            if (++comp[o][x] < q.sizes[o]) break;
            comp[o][x] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

inline std::vector<Table> after(const std::vector<Table>& g, const std::vector<Table>& f) {
    std::vector<Table> h(f.size());
    for (std::size_t o = 0; o < f.size(); ++o)
        for (int x : f[o]) h[o].push_back(g[o][x]);
    return h;
}

/// Diagonal fillers of sq by brute force: w∘src = top and dst∘w = bottom.
inline std::vector<std::vector<Table>> brute_fillers(const Square& sq) {
    std::vector<std::vector<Table>> out;
    for (auto& w : brute_maps(sq.src.dst, sq.dst.src))
        if (after(w, sq.src.comp) == sq.top.comp && after(sq.dst.comp, w) == sq.bottom.comp) out.push_back(w);
    return out;
}

/// Squares j ⇒ g by brute force, as (top, bottom) component pairs.
inline std::vector<std::pair<std::vector<Table>, std::vector<Table>>> brute_squares(const PresheafMap& j, const PresheafMap& g) {
    std::vector<std::pair<std::vector<Table>, std::vector<Table>>> out;
    for (auto& u : brute_maps(j.src, g.src))
        for (auto& v : brute_maps(j.dst, g.dst))
            if (after(g.comp, u) == after(v, j.comp)) out.emplace_back(u, v);
    return out;
}

inline bool injective(const std::vector<Table>& comp, const Presheaf& dst) {
    for (std::size_t o = 0; o < comp.size(); ++o) {
        std::vector<int> hits(dst.sizes[o], 0);
        for (int y : comp[o])
            if (hits[y]++) return false;
    }
    return true;
}

/// Arrows between every ordered pair of named objects, named "src>dst#k".
inline std::vector<std::pair<std::string, PresheafMap>> maps_between(
    const std::vector<std::pair<std::string, Presheaf>>& objects) {
    std::vector<std::pair<std::string, PresheafMap>> out;
    for (const auto& [a, p] : objects)
        for (const auto& [b, q] : objects) {
            int k = 0;
            for (auto& c : brute_maps(p, q)) out.emplace_back(a + ">" + b + "#" + std::to_string(k++), PresheafMap{p, q, c});
        }
    return out;
}

/// Replaces δ or μ on one arrow by a given table and defers everything else.
class MutatedAwfs : public Awfs {
public:
    MutatedAwfs(const Awfs& base, PresheafMap arrow, std::optional<PresheafMap> delta, std::optional<PresheafMap> mu)
        : base_(base), key_(arrow_key(arrow)), delta_(std::move(delta)), mu_(std::move(mu)) {}

    using FunctorialFactorization::on_square;
    Factored factor(const PresheafMap& f) const override { return base_.factor(f); }
    PresheafMap on_square(const Square& sq) const override { return base_.on_square(sq); }
    PresheafMap delta(const PresheafMap& f) const override {
        return delta_ && arrow_key(f) == key_ ? *delta_ : base_.delta(f);
    }
    PresheafMap mu(const PresheafMap& f) const override { return mu_ && arrow_key(f) == key_ ? *mu_ : base_.mu(f); }

private:
    const Awfs& base_;
    std::string key_;
    std::optional<PresheafMap> delta_;
    std::optional<PresheafMap> mu_;
};

/// Every table obtained by changing exactly one component entry to another in-range value.
inline std::vector<PresheafMap> single_entry_mutations(const PresheafMap& m) {
    std::vector<PresheafMap> out;
    for (std::size_t o = 0; o < m.comp.size(); ++o)
        for (std::size_t x = 0; x < m.comp[o].size(); ++x)
            for (int v = 0; v < m.dst.sizes[o]; ++v) {
                if (v == m.comp[o][x]) continue;
                auto c = m;
                c.comp[o][x] = v;
                out.push_back(std::move(c));
            }
    return out;
}

/// Square probes between listed arrows, at most `per_pair` per ordered pair.
inline std::vector<Probe> square_probes(const std::vector<std::pair<std::string, PresheafMap>>& arrows,
                                        std::size_t per_pair) {
    std::vector<Probe> out;
    for (const auto& [a, f] : arrows)
        for (const auto& [b, g] : arrows) {
            auto sqs = enumerate_squares(f, g);
            for (std::size_t i = 0; i < sqs.size() && i < per_pair; ++i)
                out.push_back(Probe::of_square(a + "=>" + b + "#" + std::to_string(i), sqs[i]));
        }
    return out;
}

inline std::vector<Probe> arrow_probes(const std::vector<std::pair<std::string, PresheafMap>>& arrows) {
    std::vector<Probe> out;
    for (const auto& [n, f] : arrows) out.push_back(Probe::of_arrow(n, f));
    return out;
}

}  // namespace awfs::testing
