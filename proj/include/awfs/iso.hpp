#pragma once
// Isomorphism search by exhaustive bijection enumeration.

#include "awfs/core.hpp"

namespace awfs {

/// First componentwise-bijective natural map P → Q respecting `fixed` and `allowed`.
inline std::optional<PresheafMap> find_isomorphism(const Presheaf& p, const Presheaf& q,
                                                   const std::vector<Table>& fixed = {},
                                                   const std::function<bool(int, int, int)>& allowed = nullptr) {
    if (!same_base(p.base, q.base) || p.sizes != q.sizes) return std::nullopt;
    std::optional<PresheafMap> found;
    for_each_map(
        p, q, fixed, allowed,
        [&](const PresheafMap& m) {
            if (is_iso(m)) {
                found = m;
                return false;
            }
            return true;
        });
    return found;
}

/// Isomorphism of arrows under a common domain: φ: cod f → cod g with φ∘f = g.
inline std::optional<PresheafMap> find_isomorphism_under(const PresheafMap& f, const PresheafMap& g) {
    if (!(f.src == g.src)) return std::nullopt;
    std::vector<Table> fixed;
    for (std::size_t o = 0; o < f.dst.sizes.size(); ++o) {
        Table t(f.dst.sizes[o], -1);
        for (std::size_t x = 0; x < f.comp[o].size(); ++x) {
            int& slot = t[f.comp[o][x]];
            if (slot >= 0 && slot != g.comp[o][x]) return std::nullopt;
            slot = g.comp[o][x];
        }
        fixed.push_back(std::move(t));
    }
    return find_isomorphism(f.dst, g.dst, fixed);
}

/// Every isomorphism φ: cod l1 → cod l2 with φ∘l1 = l2 and r2∘φ = r1.
inline std::vector<PresheafMap> isomorphisms_under_over(const PresheafMap& l1, const PresheafMap& r1,
                                                        const PresheafMap& l2, const PresheafMap& r2) {
    std::vector<PresheafMap> out;
    if (!(l1.src == l2.src) || !(r1.dst == r2.dst) || l1.dst.sizes != l2.dst.sizes) return out;
    std::vector<Table> fixed;
    for (std::size_t o = 0; o < l1.dst.sizes.size(); ++o) {
        Table t(l1.dst.sizes[o], -1);
        for (std::size_t x = 0; x < l1.comp[o].size(); ++x) {
            int& slot = t[l1.comp[o][x]];
            if (slot >= 0 && slot != l2.comp[o][x]) return out;
            slot = l2.comp[o][x];
        }
        fixed.push_back(std::move(t));
    }
    auto allowed = [&](int o, int x, int y) { return r2.comp[o][y] == r1.comp[o][x]; };
    for_each_map(l1.dst, l2.dst, fixed, allowed, [&](const PresheafMap& m) {
        if (is_iso(m)) out.push_back(m);
        return true;
    });
    return out;
}

}  // namespace awfs
