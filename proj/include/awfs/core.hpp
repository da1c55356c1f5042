#pragma once
// Finite categories, finite-set-valued presheaves and their maps.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace awfs {

using Table = std::vector<int>;

/// Location of a failed equation: base object, element, free-form detail.
struct Witness {
    int object = -1;
    int element = -1;
    std::string detail;
};

inline std::string describe(const Witness& w) {
    std::string s = "object " + std::to_string(w.object) + ", element " + std::to_string(w.element);
    if (!w.detail.empty()) s += ": " + w.detail;
    return s;
}

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BaseMismatch : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    ValidationError(const std::string& what, Witness w) : Error(what + " (" + describe(w) + ")"), witness(std::move(w)) {}
    explicit ValidationError(const std::string& what) : Error(what) {}
    Witness witness;
};

struct Morphism {
    std::string name;
    int src = 0;
    int dst = 0;
};

/**
 * A finite category given by its full list of morphisms (identities included)
 * and a total composition table on composable pairs.
 */
class FiniteCategory {
public:
    FiniteCategory() = default;

    FiniteCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms, std::vector<int> identities,
                   std::vector<std::vector<int>> composition)
        : objects_(std::move(objects)), morphisms_(std::move(morphisms)), identities_(std::move(identities)),
          composition_(std::move(composition)) {
        check_shape();
    }

    /// Builds a category from non-identity morphisms and the composites g∘f of
    /// every composable non-identity pair, given as (g, f, g∘f) name triples.
    static FiniteCategory generate(const std::vector<std::string>& objects, const std::vector<Morphism>& arrows,
                                   const std::vector<std::tuple<std::string, std::string, std::string>>& composites) {
        std::vector<Morphism> ms;
        std::vector<int> ids;
        for (std::size_t o = 0; o < objects.size(); ++o) {
            ids.push_back(static_cast<int>(ms.size()));
            ms.push_back({"id_" + objects[o], static_cast<int>(o), static_cast<int>(o)});
        }
        for (const auto& m : arrows) ms.push_back(m);
        std::map<std::string, int> by_name;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            if (!by_name.emplace(ms[i].name, static_cast<int>(i)).second)
                throw ValidationError("duplicate morphism name '" + ms[i].name + "'");
        }
        const int n = static_cast<int>(ms.size());
        std::vector<std::vector<int>> comp(n, std::vector<int>(n, -1));
        for (int g = 0; g < n; ++g)
            for (int f = 0; f < n; ++f) {
                if (ms[f].dst != ms[g].src) continue;
                if (g == ids[ms[g].src]) comp[g][f] = f;
                else if (f == ids[ms[f].dst]) comp[g][f] = g;
            }
        for (const auto& [gn, fn, hn] : composites) {
            auto gi = by_name.find(gn), fi = by_name.find(fn), hi = by_name.find(hn);
            if (gi == by_name.end() || fi == by_name.end() || hi == by_name.end())
                throw ValidationError("composite refers to unknown morphism: " + gn + " o " + fn + " = " + hn);
            const auto& g = ms[gi->second];
            const auto& f = ms[fi->second];
            const auto& h = ms[hi->second];
            if (f.dst != g.src || h.src != f.src || h.dst != g.dst)
                throw ValidationError("ill-typed composite " + gn + " o " + fn + " = " + hn);
            comp[gi->second][fi->second] = hi->second;
        }
        for (int g = 0; g < n; ++g)
            for (int f = 0; f < n; ++f)
                if (ms[f].dst == ms[g].src && comp[g][f] < 0)
                    throw ValidationError("missing composite " + ms[g].name + " o " + ms[f].name);
        return FiniteCategory(objects, std::move(ms), std::move(ids), std::move(comp));
    }

    static FiniteCategory terminal() { return generate({"*"}, {}, {}); }

    static FiniteCategory discrete(const std::vector<std::string>& names) { return generate(names, {}, {}); }

    /// 0 → 1 with one non-identity morphism.
    static FiniteCategory walking_arrow() { return generate({"0", "1"}, {{"a", 0, 1}}, {}); }

    /// V ⇉ E, so that presheaves are directed multigraphs (action of s, t: E → V).
    static FiniteCategory graph_base() { return generate({"V", "E"}, {{"s", 0, 1}, {"t", 0, 1}}, {}); }

    static FiniteCategory opposite(const FiniteCategory& c) {
        std::vector<Morphism> ms;
        for (const auto& m : c.morphisms_) ms.push_back({m.name, m.dst, m.src});
        const int n = c.morphism_count();
        std::vector<std::vector<int>> comp(n, std::vector<int>(n, -1));
        for (int g = 0; g < n; ++g)
            for (int f = 0; f < n; ++f)
                if (c.composition_[f][g] >= 0) comp[g][f] = c.composition_[f][g];
        return FiniteCategory(c.objects_, std::move(ms), c.identities_, std::move(comp));
    }

    /// Product category; object (a, b) has index a * |B| + b.
    static FiniteCategory product(const FiniteCategory& a, const FiniteCategory& b) {
        std::vector<std::string> objs;
        for (const auto& x : a.objects_)
            for (const auto& y : b.objects_) objs.push_back("(" + x + "," + y + ")");
        const int nb = b.object_count();
        const int mb = b.morphism_count();
        std::vector<Morphism> ms;
        for (const auto& f : a.morphisms_)
            for (const auto& g : b.morphisms_)
                ms.push_back({"(" + f.name + "," + g.name + ")", f.src * nb + g.src, f.dst * nb + g.dst});
        std::vector<int> ids;
        for (int x = 0; x < a.object_count(); ++x)
            for (int y = 0; y < nb; ++y) ids.push_back(a.identities_[x] * mb + b.identities_[y]);
        const int n = static_cast<int>(ms.size());
        std::vector<std::vector<int>> comp(n, std::vector<int>(n, -1));
        for (int g = 0; g < n; ++g)
            for (int f = 0; f < n; ++f) {
                int ga = a.composition_[g / mb][f / mb];
                int gb = b.composition_[g % mb][f % mb];
                if (ga >= 0 && gb >= 0) comp[g][f] = ga * mb + gb;
            }
        return FiniteCategory(std::move(objs), std::move(ms), std::move(ids), std::move(comp));
    }

    int object_count() const { return static_cast<int>(objects_.size()); }
    int morphism_count() const { return static_cast<int>(morphisms_.size()); }
    const std::string& object_name(int o) const { return objects_.at(o); }
    const std::vector<std::string>& objects() const { return objects_; }
    const Morphism& morphism(int m) const { return morphisms_.at(m); }
    const std::vector<Morphism>& morphisms() const { return morphisms_; }
    int identity(int o) const { return identities_.at(o); }
    bool is_identity(int m) const { return identities_.at(morphisms_.at(m).src) == m; }

    /// g∘f; throws when the pair is not composable.
    int compose(int g, int f) const {
        int h = composition_.at(g).at(f);
        if (h < 0) throw ShapeMismatch("morphisms " + morphisms_[g].name + " and " + morphisms_[f].name + " are not composable");
        return h;
    }

    /// Morphisms a → b in list order.
    std::vector<int> hom(int a, int b) const {
        std::vector<int> out;
        for (int m = 0; m < morphism_count(); ++m)
            if (morphisms_[m].src == a && morphisms_[m].dst == b) out.push_back(m);
        return out;
    }

    std::optional<int> find_object(const std::string& name) const {
        for (int o = 0; o < object_count(); ++o)
            if (objects_[o] == name) return o;
        return std::nullopt;
    }

    std::optional<int> find_morphism(const std::string& name) const {
        for (int m = 0; m < morphism_count(); ++m)
            if (morphisms_[m].name == name) return m;
        return std::nullopt;
    }

    /// Exhaustive check of identity and associativity laws.
    std::optional<std::string> validate() const {
        const int n = morphism_count();
        for (int o = 0; o < object_count(); ++o) {
            const auto& id = morphisms_[identities_[o]];
            if (id.src != o || id.dst != o) return "identity of " + objects_[o] + " has wrong type";
        }
        for (int g = 0; g < n; ++g)
            for (int f = 0; f < n; ++f) {
                bool composable = morphisms_[f].dst == morphisms_[g].src;
                int h = composition_[g][f];
                if (composable != (h >= 0))
                    return "composition table wrong at " + morphisms_[g].name + " o " + morphisms_[f].name;
                if (h >= 0 && (morphisms_[h].src != morphisms_[f].src || morphisms_[h].dst != morphisms_[g].dst))
                    return "composite " + morphisms_[g].name + " o " + morphisms_[f].name + " has wrong type";
            }
        for (int f = 0; f < n; ++f) {
            if (composition_[f][identities_[morphisms_[f].src]] != f ||
                composition_[identities_[morphisms_[f].dst]][f] != f)
                return "identity law fails at " + morphisms_[f].name;
        }
        for (int h = 0; h < n; ++h)
            for (int g = 0; g < n; ++g) {
                if (composition_[h][g] < 0) continue;
                for (int f = 0; f < n; ++f) {
                    if (composition_[g][f] < 0) continue;
                    if (composition_[composition_[h][g]][f] != composition_[h][composition_[g][f]])
                        return "associativity fails at " + morphisms_[h].name + ", " + morphisms_[g].name + ", " +
                               morphisms_[f].name;
                }
            }
        return std::nullopt;
    }

    friend bool operator==(const FiniteCategory& a, const FiniteCategory& b) {
        if (a.objects_ != b.objects_ || a.identities_ != b.identities_ || a.composition_ != b.composition_) return false;
        if (a.morphisms_.size() != b.morphisms_.size()) return false;
        for (std::size_t i = 0; i < a.morphisms_.size(); ++i) {
            const auto& x = a.morphisms_[i];
            const auto& y = b.morphisms_[i];
            if (x.name != y.name || x.src != y.src || x.dst != y.dst) return false;
        }
        return true;
    }

private:
    void check_shape() const {
        const std::size_t n = morphisms_.size();
        if (identities_.size() != objects_.size()) throw ValidationError("identity list does not match objects");
        if (composition_.size() != n) throw ValidationError("composition table has wrong size");
        for (const auto& row : composition_)
            if (row.size() != n) throw ValidationError("composition table has wrong size");
        for (const auto& m : morphisms_)
            if (m.src < 0 || m.dst < 0 || m.src >= static_cast<int>(objects_.size()) ||
                m.dst >= static_cast<int>(objects_.size()))
                throw ValidationError("morphism " + m.name + " has endpoints out of range");
        for (int id : identities_)
            if (id < 0 || id >= static_cast<int>(n)) throw ValidationError("identity index out of range");
        for (const auto& row : composition_)
            for (int h : row)
                if (h < -1 || h >= static_cast<int>(n)) throw ValidationError("composition entry out of range");
    }

    std::vector<std::string> objects_;
    std::vector<Morphism> morphisms_;
    std::vector<int> identities_;
    std::vector<std::vector<int>> composition_;
};

using BasePtr = std::shared_ptr<const FiniteCategory>;

inline BasePtr make_base(FiniteCategory c) { return std::make_shared<const FiniteCategory>(std::move(c)); }

inline bool same_base(const BasePtr& a, const BasePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

/**
 * A presheaf on a finite base: a finite set per object and, for each morphism
 * m: a → b, the action table of length size(b) with entries in size(a).
 */
struct Presheaf {
    BasePtr base;
    std::vector<int> sizes;
    std::vector<Table> action;

    int size(int o) const { return sizes.at(o); }

    int total() const {
        int t = 0;
        for (int s : sizes) t += s;
        return t;
    }

    int act(int m, int y) const { return action.at(m).at(y); }

    /// Empty presheaf (identity actions of length zero).
    static Presheaf empty(const BasePtr& base) { return constant(base, 0); }

    static Presheaf terminal(const BasePtr& base) { return constant(base, 1); }

    static Presheaf constant(const BasePtr& base, int n) {
        Presheaf p;
        p.base = base;
        p.sizes.assign(base->object_count(), n);
        for (int m = 0; m < base->morphism_count(); ++m) {
            Table t(n);
            for (int i = 0; i < n; ++i) t[i] = i;
            p.action.push_back(std::move(t));
        }
        return p;
    }

    /// Presheaf with identity actions filled in from explicit non-identity tables.
    static Presheaf make(const BasePtr& base, std::vector<int> sizes, const std::map<int, Table>& tables) {
        Presheaf p;
        p.base = base;
        p.sizes = std::move(sizes);
        for (int m = 0; m < base->morphism_count(); ++m) {
            auto it = tables.find(m);
            if (it != tables.end()) {
                p.action.push_back(it->second);
            } else if (base->is_identity(m)) {
                Table t(p.sizes.at(base->morphism(m).src));
                for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<int>(i);
                p.action.push_back(std::move(t));
            } else {
                throw ValidationError("missing action table for morphism " + base->morphism(m).name);
            }
        }
        return p;
    }

    /// Exhaustive check: table shapes, ranges, identities and composition.
    std::optional<Witness> validate() const {
        if (!base) return Witness{-1, -1, "presheaf has no base"};
        if (static_cast<int>(sizes.size()) != base->object_count()) return Witness{-1, -1, "wrong number of sizes"};
        if (static_cast<int>(action.size()) != base->morphism_count())
            return Witness{-1, -1, "wrong number of action tables"};
        for (int o = 0; o < base->object_count(); ++o)
            if (sizes[o] < 0) return Witness{o, -1, "negative size"};
        for (int m = 0; m < base->morphism_count(); ++m) {
            const auto& mor = base->morphism(m);
            if (static_cast<int>(action[m].size()) != sizes[mor.dst])
                return Witness{mor.dst, -1, "action of " + mor.name + " has wrong length"};
            for (int y = 0; y < sizes[mor.dst]; ++y)
                if (action[m][y] < 0 || action[m][y] >= sizes[mor.src])
                    return Witness{mor.dst, y, "action of " + mor.name + " out of range"};
            if (base->is_identity(m))
                for (int y = 0; y < sizes[mor.dst]; ++y)
                    if (action[m][y] != y) return Witness{mor.dst, y, "identity acts nontrivially"};
        }
        for (int g = 0; g < base->morphism_count(); ++g)
            for (int f = 0; f < base->morphism_count(); ++f) {
                if (base->morphism(f).dst != base->morphism(g).src) continue;
                int h = base->compose(g, f);
                int c = base->morphism(g).dst;
                for (int z = 0; z < sizes[c]; ++z)
                    if (action[h][z] != action[f][action[g][z]])
                        return Witness{c, z,
                                       "action of " + base->morphism(h).name + " differs from composite action"};
            }
        return std::nullopt;
    }

    friend bool operator==(const Presheaf& a, const Presheaf& b) {
        return a.sizes == b.sizes && a.action == b.action && same_base(a.base, b.base);
    }
};

inline void require_same_base(const Presheaf& a, const Presheaf& b, const char* where) {
    if (!same_base(a.base, b.base)) throw BaseMismatch(std::string(where) + ": presheaves over different bases");
}

/// Natural transformation src → dst given by one component table per base object.
struct PresheafMap {
    Presheaf src;
    Presheaf dst;
    std::vector<Table> comp;

    int operator()(int o, int x) const { return comp.at(o).at(x); }

    std::optional<Witness> validate() const {
        if (!same_base(src.base, dst.base)) return Witness{-1, -1, "source and target over different bases"};
        if (comp.size() != src.sizes.size()) return Witness{-1, -1, "wrong number of components"};
        for (std::size_t o = 0; o < comp.size(); ++o) {
            int oi = static_cast<int>(o);
            if (static_cast<int>(comp[o].size()) != src.sizes[o]) return Witness{oi, -1, "component has wrong length"};
            for (int x = 0; x < src.sizes[o]; ++x)
                if (comp[o][x] < 0 || comp[o][x] >= dst.sizes[o]) return Witness{oi, x, "component entry out of range"};
        }
        return naturality_defect();
    }

    std::optional<Witness> naturality_defect() const {
        const auto& base = *src.base;
        for (int m = 0; m < base.morphism_count(); ++m) {
            const auto& mor = base.morphism(m);
            for (int y = 0; y < src.sizes[mor.dst]; ++y)
                if (comp[mor.src][src.action[m][y]] != dst.action[m][comp[mor.dst][y]])
                    return Witness{mor.dst, y, "naturality fails for " + mor.name};
        }
        return std::nullopt;
    }

    friend bool operator==(const PresheafMap& a, const PresheafMap& b) {
        return a.comp == b.comp && a.src == b.src && a.dst == b.dst;
    }
};

inline PresheafMap identity_map(const Presheaf& p) {
    PresheafMap m{p, p, {}};
    for (int s : p.sizes) {
        Table t(s);
        for (int i = 0; i < s; ++i) t[i] = i;
        m.comp.push_back(std::move(t));
    }
    return m;
}

/// g∘f.
inline PresheafMap compose(const PresheafMap& g, const PresheafMap& f) {
    if (!(f.dst == g.src)) {
        if (!same_base(f.dst.base, g.src.base)) throw BaseMismatch("compose: maps over different bases");
        throw ShapeMismatch("compose: target of first map is not the source of the second");
    }
    PresheafMap h{f.src, g.dst, {}};
    h.comp.resize(f.comp.size());
    for (std::size_t o = 0; o < f.comp.size(); ++o) {
        h.comp[o].resize(f.comp[o].size());
        for (std::size_t x = 0; x < f.comp[o].size(); ++x) h.comp[o][x] = g.comp[o][f.comp[o][x]];
    }
    return h;
}

inline PresheafMap compose(const PresheafMap& h, const PresheafMap& g, const PresheafMap& f) {
    return compose(h, compose(g, f));
}

/// ∅ → X.
inline PresheafMap initial_map(const Presheaf& x) {
    return PresheafMap{Presheaf::empty(x.base), x, std::vector<Table>(x.sizes.size())};
}

/// X → 1.
inline PresheafMap terminal_map(const Presheaf& x) {
    PresheafMap m{x, Presheaf::terminal(x.base), {}};
    for (int s : x.sizes) m.comp.emplace_back(s, 0);
    return m;
}

inline bool is_injective(const PresheafMap& f) {
    for (std::size_t o = 0; o < f.comp.size(); ++o) {
        std::vector<char> seen(f.dst.sizes[o], 0);
        for (int y : f.comp[o]) {
            if (seen[y]) return false;
            seen[y] = 1;
        }
    }
    return true;
}

inline bool is_surjective(const PresheafMap& f) {
    for (std::size_t o = 0; o < f.comp.size(); ++o) {
        std::vector<char> seen(f.dst.sizes[o], 0);
        for (int y : f.comp[o]) seen[y] = 1;
        for (char c : seen)
            if (!c) return false;
    }
    return true;
}

inline bool is_iso(const PresheafMap& f) { return is_injective(f) && is_surjective(f); }

/// Inverse of a componentwise bijection.
inline PresheafMap inverse(const PresheafMap& f) {
    if (!is_iso(f)) throw ShapeMismatch("inverse: map is not a bijection");
    PresheafMap g{f.dst, f.src, {}};
    for (std::size_t o = 0; o < f.comp.size(); ++o) {
        Table t(f.dst.sizes[o]);
        for (std::size_t x = 0; x < f.comp[o].size(); ++x) t[f.comp[o][x]] = static_cast<int>(x);
        g.comp.push_back(std::move(t));
    }
    return g;
}

/// First position where two parallel maps differ.
inline std::optional<Witness> map_difference(const PresheafMap& a, const PresheafMap& b) {
    if (a.comp.size() != b.comp.size()) return Witness{-1, -1, "maps have different shapes"};
    if (!(a.src == b.src)) return Witness{-1, -1, "maps have different sources"};
    if (!(a.dst == b.dst)) return Witness{-1, -1, "maps have different targets"};
    for (std::size_t o = 0; o < a.comp.size(); ++o)
        for (std::size_t x = 0; x < a.comp[o].size(); ++x)
            if (a.comp[o][x] != b.comp[o][x])
                return Witness{static_cast<int>(o), static_cast<int>(x),
                               std::to_string(a.comp[o][x]) + " != " + std::to_string(b.comp[o][x])};
    return std::nullopt;
}

/// Compact serialization of component tables, used as a lookup key.
inline std::string table_key(const PresheafMap& f) {
    std::string s;
    for (const auto& t : f.comp) {
        for (int v : t) {
            s += std::to_string(v);
            s += ',';
        }
        s += ';';
    }
    return s;
}

/// Restriction of a presheaf along an object and morphism reindexing of the base.
inline Presheaf restrict_presheaf(const Presheaf& p, const BasePtr& base, const std::vector<int>& object_of,
                                  const std::vector<int>& morphism_of) {
    Presheaf q;
    q.base = base;
    for (int o = 0; o < base->object_count(); ++o) q.sizes.push_back(p.sizes.at(object_of[o]));
    for (int m = 0; m < base->morphism_count(); ++m) q.action.push_back(p.action.at(morphism_of[m]));
    return q;
}

inline PresheafMap restrict_map(const PresheafMap& f, const BasePtr& base, const std::vector<int>& object_of,
                                const std::vector<int>& morphism_of) {
    PresheafMap g{restrict_presheaf(f.src, base, object_of, morphism_of),
                  restrict_presheaf(f.dst, base, object_of, morphism_of),
                  {}};
    for (int o = 0; o < base->object_count(); ++o) g.comp.push_back(f.comp.at(object_of[o]));
    return g;
}

namespace detail {

struct Position {
    int object;
    int element;
};

// A naturality equation h_a(P_m(y)) = Q_m(h_b(y)) for m: a → b, y ∈ P(b).
struct Equation {
    int morphism;
    int y_pos;
    int x_pos;
};

struct SearchPlan {
    std::vector<Position> positions;
    std::vector<int> offset;
    std::vector<std::vector<Equation>> forcing;  // equations whose later position is x_pos
    std::vector<std::vector<Equation>> checks;   // equations whose later position is y_pos
};

inline SearchPlan plan_search(const Presheaf& p) {
    SearchPlan plan;
    const auto& base = *p.base;
    for (int o = 0; o < base.object_count(); ++o) {
        plan.offset.push_back(static_cast<int>(plan.positions.size()));
        for (int x = 0; x < p.sizes[o]; ++x) plan.positions.push_back({o, x});
    }
    plan.forcing.resize(plan.positions.size());
    plan.checks.resize(plan.positions.size());
    for (int m = 0; m < base.morphism_count(); ++m) {
        if (base.is_identity(m)) continue;
        const auto& mor = base.morphism(m);
        for (int y = 0; y < p.sizes[mor.dst]; ++y) {
            int yp = plan.offset[mor.dst] + y;
            int xp = plan.offset[mor.src] + p.action[m][y];
            Equation e{m, yp, xp};
            if (xp > yp) plan.forcing[xp].push_back(e);
            else plan.checks[yp].push_back(e);
        }
    }
    return plan;
}

}  // namespace detail

/**
 * Visits every natural transformation P → Q in lexicographic order of the
 * concatenated component tables (objects in base order). Entries of `fixed`
 * that are ≥ 0 pin a component value; `allowed` may prune candidates.
 * The visitor returns false to stop the enumeration.
 */
inline void for_each_map(const Presheaf& p, const Presheaf& q, const std::vector<Table>& fixed,
                         const std::function<bool(int, int, int)>& allowed,
                         const std::function<bool(const PresheafMap&)>& visit) {
    require_same_base(p, q, "for_each_map");
    const auto plan = detail::plan_search(p);
    const int n = static_cast<int>(plan.positions.size());
    std::vector<int> value(n, -1);
    PresheafMap current{p, q, {}};
    for (int s : p.sizes) current.comp.emplace_back(s, -1);

    auto fixed_at = [&](const detail::Position& pos) {
        if (fixed.empty()) return -1;
        const auto& t = fixed.at(pos.object);
        return t.empty() ? -1 : t.at(pos.element);
    };

    bool stop = false;
    std::function<void(int)> go = [&](int i) {
        if (stop) return;
        if (i == n) {
            for (int k = 0; k < n; ++k) current.comp[plan.positions[k].object][plan.positions[k].element] = value[k];
            if (!visit(current)) stop = true;
            return;
        }
        const auto& pos = plan.positions[i];
        int forced = fixed_at(pos);
        for (const auto& e : plan.forcing[i]) {
            int v = q.action[e.morphism][value[e.y_pos]];
            if (forced >= 0 && forced != v) return;
            forced = v;
        }
        int lo = 0, hi = q.sizes[pos.object];
        if (forced >= 0) {
            if (forced >= hi) return;
            lo = forced;
            hi = forced + 1;
        }
        for (int v = lo; v < hi && !stop; ++v) {
            if (allowed && !allowed(pos.object, pos.element, v)) continue;
            value[i] = v;
            bool ok = true;
            for (const auto& e : plan.checks[i]) {
                if (value[e.x_pos] != q.action[e.morphism][value[e.y_pos]]) {
                    ok = false;
                    break;
                }
            }
            if (ok) go(i + 1);
        }
        value[i] = -1;
    };
    go(0);
}

inline void for_each_map(const Presheaf& p, const Presheaf& q, const std::vector<Table>& fixed,
                         const std::function<bool(const PresheafMap&)>& visit) {
    for_each_map(p, q, fixed, nullptr, visit);
}

/// All maps P → Q in canonical order.
inline std::vector<PresheafMap> hom(const Presheaf& p, const Presheaf& q) {
    std::vector<PresheafMap> out;
    for_each_map(p, q, {}, [&](const PresheafMap& m) {
        out.push_back(m);
        return true;
    });
    return out;
}

}  // namespace awfs
