#pragma once
// Adjunctions between presheaf categories, transport of generators, lifted functors,
// mates, pointwise and projective generators, and algebraic Quillen checks.

#include "awfs/iso.hpp"
#include "awfs/model.hpp"

namespace awfs {

/// A functor between finite base categories, given on objects and morphisms.
struct BaseFunctor {
    BasePtr from;
    BasePtr to;
    std::vector<int> object_map;
    std::vector<int> morphism_map;

    std::optional<std::string> validate() const {
        if (static_cast<int>(object_map.size()) != from->object_count()) return "functor must map every object";
        if (static_cast<int>(morphism_map.size()) != from->morphism_count()) return "functor must map every morphism";
        for (int o : object_map)
            if (o < 0 || o >= to->object_count()) return "object image out of range";
        for (int m = 0; m < from->morphism_count(); ++m) {
            int n = morphism_map[m];
            if (n < 0 || n >= to->morphism_count()) return "morphism image out of range";
            const auto& a = from->morphism(m);
            const auto& b = to->morphism(n);
            if (b.src != object_map[a.src] || b.dst != object_map[a.dst])
                return "morphism " + a.name + " is sent to a morphism of the wrong type";
        }
        for (int o = 0; o < from->object_count(); ++o)
            if (morphism_map[from->identity(o)] != to->identity(object_map[o])) return "identities not preserved";
        for (int g = 0; g < from->morphism_count(); ++g)
            for (int f = 0; f < from->morphism_count(); ++f) {
                if (from->morphism(f).dst != from->morphism(g).src) continue;
                if (morphism_map[from->compose(g, f)] != to->compose(morphism_map[g], morphism_map[f]))
                    return "composition not preserved";
            }
        return std::nullopt;
    }

    static BaseFunctor identity(const BasePtr& b) {
        BaseFunctor u{b, b, {}, {}};
        for (int o = 0; o < b->object_count(); ++o) u.object_map.push_back(o);
        for (int m = 0; m < b->morphism_count(); ++m) u.morphism_map.push_back(m);
        return u;
    }
};

inline std::string presheaf_key(const Presheaf& p) {
    return arrow_key(PresheafMap{p, p, {}});
}

/// T ⊣ S with T: M → K, unit ι_X: X → STX and counit ν_Y: TSY → Y.
class Adjunction {
public:
    virtual ~Adjunction() = default;
    virtual BasePtr source_base() const = 0;
    virtual BasePtr target_base() const = 0;
    virtual Presheaf T(const Presheaf& x) const = 0;
    virtual PresheafMap T(const PresheafMap& h) const = 0;
    virtual Presheaf S(const Presheaf& y) const = 0;
    virtual PresheafMap S(const PresheafMap& k) const = 0;
    virtual PresheafMap unit(const Presheaf& x) const = 0;
    virtual PresheafMap counit(const Presheaf& y) const = 0;

    Square T(const Square& sq) const { return Square{T(sq.src), T(sq.dst), T(sq.top), T(sq.bottom)}; }
    Square S(const Square& sq) const { return Square{S(sq.src), S(sq.dst), S(sq.top), S(sq.bottom)}; }

    /// (ι, ι): f ⇒ STf.
    Square unit_square(const PresheafMap& f) const {
        return Square{f, S(T(f)), unit(f.src), unit(f.dst)};
    }

    /// (ν, ν): TSg ⇒ g.
    Square counit_square(const PresheafMap& g) const {
        return Square{T(S(g)), g, counit(g.src), counit(g.dst)};
    }
};

class IdentityAdjunction : public Adjunction {
public:
    explicit IdentityAdjunction(BasePtr base) : base_(std::move(base)) {}
    BasePtr source_base() const override { return base_; }
    BasePtr target_base() const override { return base_; }
    Presheaf T(const Presheaf& x) const override { return x; }
    PresheafMap T(const PresheafMap& h) const override { return h; }
    Presheaf S(const Presheaf& y) const override { return y; }
    PresheafMap S(const PresheafMap& k) const override { return k; }
    PresheafMap unit(const Presheaf& x) const override { return identity_map(x); }
    PresheafMap counit(const Presheaf& y) const override { return identity_map(y); }
    using Adjunction::S;
    using Adjunction::T;

private:
    BasePtr base_;
};

/**
 * Lan_u ⊣ u^* for u: A₀ → A. (Lan_u X)(a) is the set of pairs (m: a → u c, x ∈ X(c))
 * modulo (u(k)∘m, x′) ∼ (m, X(k)x′), with action by precomposition.
 */
class LanRestriction : public Adjunction {
public:
    explicit LanRestriction(BaseFunctor u) : u_(std::move(u)) {
        if (auto e = u_.validate()) throw ValidationError("invalid base functor: " + *e);
        const auto& A = *u_.to;
        position_.assign(A.morphism_count(), -1);
        for (int a = 0; a < A.object_count(); ++a)
            for (int b = 0; b < A.object_count(); ++b) {
                auto h = A.hom(a, b);
                for (std::size_t i = 0; i < h.size(); ++i) position_[h[i]] = static_cast<int>(i);
            }
    }

    using Adjunction::S;
    using Adjunction::T;

    const BaseFunctor& functor() const { return u_; }
    BasePtr source_base() const override { return u_.from; }
    BasePtr target_base() const override { return u_.to; }

    Presheaf T(const Presheaf& x) const override { return build(x)->q.object; }

    PresheafMap T(const PresheafMap& h) const override {
        auto bx = build(h.src);
        auto by = build(h.dst);
        PresheafMap free{bx->free, by->q.object, {}};
        const auto& A = *u_.to;
        for (int a = 0; a < A.object_count(); ++a) {
            Table t(bx->free.sizes[a]);
            for (const auto& blk : bx->blocks[a])
                for (int x = 0; x < h.src.sizes[blk.c]; ++x)
                    t[blk.offset + x] = by->q.map.comp[a][by->offset(a, blk.c, blk.pos) + h.comp[blk.c][x]];
            free.comp.push_back(std::move(t));
        }
        return factor(*bx, free);
    }

    Presheaf S(const Presheaf& y) const override {
        return restrict_presheaf(y, u_.from, u_.object_map, u_.morphism_map);
    }

    PresheafMap S(const PresheafMap& k) const override {
        return restrict_map(k, u_.from, u_.object_map, u_.morphism_map);
    }

    PresheafMap unit(const Presheaf& x) const override {
        auto bx = build(x);
        auto stx = S(bx->q.object);
        PresheafMap m{x, stx, {}};
        const auto& A = *u_.to;
        for (int c = 0; c < u_.from->object_count(); ++c) {
            int a = u_.object_map[c];
            int pos = position_[A.identity(a)];
            Table t(x.sizes[c]);
            for (int e = 0; e < x.sizes[c]; ++e) t[e] = bx->q.map.comp[a][bx->offset(a, c, pos) + e];
            m.comp.push_back(std::move(t));
        }
        return m;
    }

    PresheafMap counit(const Presheaf& y) const override {
        auto sy = S(y);
        auto b = build(sy);
        const auto& A = *u_.to;
        PresheafMap free{b->free, y, {}};
        for (int a = 0; a < A.object_count(); ++a) {
            Table t(b->free.sizes[a]);
            for (const auto& blk : b->blocks[a])
                for (int e = 0; e < sy.sizes[blk.c]; ++e) t[blk.offset + e] = y.act(blk.m, e);
            free.comp.push_back(std::move(t));
        }
        return factor(*b, free);
    }

private:
    struct Block {
        int c, m, pos, offset;
    };

    struct Built {
        Presheaf free;
        QuotientResult q;
        std::vector<std::vector<Block>> blocks;
        std::vector<std::map<std::pair<int, int>, int>> index;

        int offset(int a, int c, int pos) const { return index[a].at({c, pos}); }
    };

    PresheafMap factor(const Built& b, const PresheafMap& free) const {
        auto r = check_cocone_factor(ColimitRecord{b.q.object, {b.q.map}}, {free});
        if (!r.map) throw ValidationError("left Kan extension: map is not compatible with the coend", *r.failure);
        return *r.map;
    }

    std::shared_ptr<const Built> build(const Presheaf& x) const {
        if (!same_base(x.base, u_.from)) throw BaseMismatch("left Kan extension: presheaf over the wrong base");
        auto key = presheaf_key(x);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        const auto& A = *u_.to;
        const auto& A0 = *u_.from;
        auto b = std::make_shared<Built>();
        b->free.base = u_.to;
        b->blocks.resize(A.object_count());
        b->index.resize(A.object_count());
        for (int a = 0; a < A.object_count(); ++a) {
            int size = 0;
            for (int c = 0; c < A0.object_count(); ++c) {
                auto h = A.hom(a, u_.object_map[c]);
                for (std::size_t i = 0; i < h.size(); ++i) {
                    b->blocks[a].push_back({c, h[i], static_cast<int>(i), size});
                    b->index[a][{c, static_cast<int>(i)}] = size;
                    size += x.sizes[c];
                }
            }
            b->free.sizes.push_back(size);
        }
        for (int n = 0; n < A.morphism_count(); ++n) {
            const auto& mor = A.morphism(n);  // n: a′ → a, acting free(a) → free(a′)
            Table t(b->free.sizes[mor.dst]);
            for (const auto& blk : b->blocks[mor.dst]) {
                int mn = A.compose(blk.m, n);
                int off = b->offset(mor.src, blk.c, position_[mn]);
                for (int e = 0; e < x.sizes[blk.c]; ++e) t[blk.offset + e] = off + e;
            }
            b->free.action.push_back(std::move(t));
        }
        std::vector<std::vector<std::pair<int, int>>> rel(A.object_count());
        for (int k = 0; k < A0.morphism_count(); ++k) {
            if (A0.is_identity(k)) continue;
            const auto& km = A0.morphism(k);  // k: c → c′
            int uk = u_.morphism_map[k];
            for (int a = 0; a < A.object_count(); ++a)
                for (int m : A.hom(a, u_.object_map[km.src])) {
                    int ukm = A.compose(uk, m);
                    int lhs = b->offset(a, km.dst, position_[ukm]);
                    int rhs = b->offset(a, km.src, position_[m]);
                    for (int e = 0; e < x.sizes[km.dst]; ++e) rel[a].emplace_back(lhs + e, rhs + x.act(k, e));
                }
        }
        b->q = quotient(b->free, rel);
        std::lock_guard<std::mutex> lock(mutex_);
        return cache_.emplace(key, b).first->second;
    }

    BaseFunctor u_;
    std::vector<int> position_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, std::shared_ptr<const Built>> cache_;
};

/// An adjunction given by explicit tables on finitely many objects and maps.
class TabulatedAdjunction : public Adjunction {
public:
    TabulatedAdjunction(BasePtr m, BasePtr k) : m_(std::move(m)), k_(std::move(k)) {}

    using Adjunction::S;
    using Adjunction::T;

    void add_T(const Presheaf& x, const Presheaf& tx) { tobj_[presheaf_key(x)] = tx; }
    void add_T(const PresheafMap& h, const PresheafMap& th) { tmap_[arrow_key(h)] = th; }
    void add_S(const Presheaf& y, const Presheaf& sy) { sobj_[presheaf_key(y)] = sy; }
    void add_S(const PresheafMap& k, const PresheafMap& sk) { smap_[arrow_key(k)] = sk; }
    void add_unit(const Presheaf& x, const PresheafMap& i) { unit_[presheaf_key(x)] = i; }
    void add_counit(const Presheaf& y, const PresheafMap& n) { counit_[presheaf_key(y)] = n; }

    BasePtr source_base() const override { return m_; }
    BasePtr target_base() const override { return k_; }
    Presheaf T(const Presheaf& x) const override { return get(tobj_, presheaf_key(x), "T on an object"); }
    PresheafMap T(const PresheafMap& h) const override {
        if (h.src == h.dst && h == identity_map(h.src)) return identity_map(T(h.src));
        return get(tmap_, arrow_key(h), "T on a map");
    }
    Presheaf S(const Presheaf& y) const override { return get(sobj_, presheaf_key(y), "S on an object"); }
    PresheafMap S(const PresheafMap& k) const override {
        if (k.src == k.dst && k == identity_map(k.src)) return identity_map(S(k.src));
        return get(smap_, arrow_key(k), "S on a map");
    }
    PresheafMap unit(const Presheaf& x) const override { return get(unit_, presheaf_key(x), "the unit"); }
    PresheafMap counit(const Presheaf& y) const override { return get(counit_, presheaf_key(y), "the counit"); }

private:
    template <class V>
    static V get(const std::map<std::string, V>& m, const std::string& key, const char* what) {
        auto it = m.find(key);
        if (it == m.end()) throw ValidationError(std::string("tabulated adjunction does not define ") + what);
        return it->second;
    }

    BasePtr m_, k_;
    std::map<std::string, Presheaf> tobj_, sobj_;
    std::map<std::string, PresheafMap> tmap_, smap_, unit_, counit_;
};

/// Triangle identities and naturality of ι, ν on the given objects and maps.
inline LawReport verify_adjunction(const Adjunction& adj, const std::vector<std::pair<std::string, Presheaf>>& m_objects,
                                   const std::vector<std::pair<std::string, Presheaf>>& k_objects,
                                   const std::vector<std::pair<std::string, PresheafMap>>& m_maps,
                                   const std::vector<std::pair<std::string, PresheafMap>>& k_maps) {
    LawReport r;
    for (const auto& [name, x] : m_objects)
        r.check("triangle_left", name, [&]() -> std::optional<Witness> {
            auto tx = adj.T(x);
            auto i = adj.unit(x);
            if (auto w = i.validate()) return w;
            return map_difference(compose(adj.counit(tx), adj.T(i)), identity_map(tx));
        });
    for (const auto& [name, y] : k_objects)
        r.check("triangle_right", name, [&]() -> std::optional<Witness> {
            auto sy = adj.S(y);
            auto n = adj.counit(y);
            if (auto w = n.validate()) return w;
            return map_difference(compose(adj.S(n), adj.unit(sy)), identity_map(sy));
        });
    for (const auto& [name, h] : m_maps)
        r.check("unit_naturality", name, [&] {
            return map_difference(compose(adj.unit(h.dst), h), compose(adj.S(adj.T(h)), adj.unit(h.src)));
        });
    for (const auto& [name, k] : k_maps)
        r.check("counit_naturality", name, [&] {
            return map_difference(compose(adj.counit(k.dst), adj.T(adj.S(k))), compose(k, adj.counit(k.src)));
        });
    return r;
}

/// TJ: the same shape, arrows and squares pushed through T.
inline GeneratorDiagram transport_generators(const Adjunction& adj, const GeneratorDiagram& J) {
    GeneratorDiagram out;
    out.shape = J.shape;
    for (const auto& n : J.names) out.names.push_back("T(" + n + ")");
    for (const auto& a : J.arrows) out.arrows.push_back(adj.T(a));
    for (const auto& s : J.squares) out.squares.push_back(adj.T(s));
    return out;
}

/// ψ^♯(j, a, b) = S(ψ(Tj, ν·Ta, ν·Tb))·ι, for ψ a lifting function of f against TJ.
inline FillFn sharp(const Adjunction& adj, const PresheafMap& f, const FillFn& psi) {
    return [&adj, f, psi](int j, const PresheafMap& a, const PresheafMap& b) {
        auto ta = compose(adj.counit(f.src), adj.T(a));
        auto tb = compose(adj.counit(f.dst), adj.T(b));
        return compose(adj.S(psi(j, ta, tb)), adj.unit(b.src));
    };
}

/// ζ^♭(Tj, u, v) = ν·T(ζ(j, Su·ι, Sv·ι)), for ζ a lifting function of Sf against J.
inline FillFn flat(const Adjunction& adj, const PresheafMap& f, const FillFn& zeta, const GeneratorDiagram& J) {
    return [&adj, f, zeta, &J](int j, const PresheafMap& u, const PresheafMap& v) {
        auto su = compose(adj.S(u), adj.unit(J.arrows[j].src));
        auto sv = compose(adj.S(v), adj.unit(J.arrows[j].dst));
        return compose(adj.counit(f.src), adj.T(zeta(j, su, sv)));
    };
}

inline FillFn fill_fn(const LiftingFunction& lf) {
    return [&lf](int j, const PresheafMap& u, const PresheafMap& v) { return lf.fill(j, u, v); };
}

/// (Sf, ψ^♯) tabulated over the squares J ⇒ Sf.
inline LiftingFunction adjunct_lifting_S(const Adjunction& adj, const GeneratorDiagram& J, const LiftingFunction& psi) {
    auto fn = sharp(adj, psi.target(), fill_fn(psi));
    return LiftingFunction(J, adj.S(psi.target()), [&](int j, const Square& sq) { return fn(j, sq.top, sq.bottom); });
}

/// (f, ζ^♭) tabulated over the squares TJ ⇒ f.
inline LiftingFunction adjunct_lifting_T(const Adjunction& adj, const GeneratorDiagram& J, const GeneratorDiagram& TJ,
                                         const PresheafMap& f, const LiftingFunction& zeta) {
    auto fn = flat(adj, f, fill_fn(zeta), J);
    return LiftingFunction(TJ, f, [&](int j, const Square& sq) { return fn(j, sq.top, sq.bottom); });
}

/// Per-arrow natural transformations ρ_g: QSg → SEg (g in K) and γ_f: TQf → ETf (f in M).
struct MateData {
    std::function<PresheafMap(const PresheafMap&)> rho;
    std::function<PresheafMap(const PresheafMap&)> gamma;
};

/**
 * An adjunction T ⊣ S together with awfs on M (generated by J) and on K (generated by
 * TJ, or any generators for which TJ-lifting data is available).
 */
class AwfsAdjunction {
public:
    /// `tau` sends each M generator j to the K generator equal to Tj; empty means j itself.
    AwfsAdjunction(const Adjunction& adj, std::shared_ptr<const GeneratedAwfs> m, std::shared_ptr<const GeneratedAwfs> k,
                   std::vector<int> tau = {})
        : adj_(adj), m_(std::move(m)), k_(std::move(k)), tau_(std::move(tau)) {
        const auto& J = m_->generators();
        const auto& K = k_->generators();
        if (tau_.empty())
            for (int j = 0; j < J.size(); ++j) tau_.push_back(j);
        if (static_cast<int>(tau_.size()) != J.size()) throw ShapeMismatch("generator map has the wrong length");
        for (int j = 0; j < J.size(); ++j)
            if (tau_[j] < 0 || tau_[j] >= K.size() || !(K.arrows[tau_[j]] == adj_.T(J.arrows[j])))
                throw ShapeMismatch("generator " + J.names[j] + " is not sent to its transport");
    }

    int tau(int j) const { return tau_.at(j); }

    const Adjunction& adjunction() const { return adj_; }
    const GeneratedAwfs& M() const { return *m_; }
    const GeneratedAwfs& K() const { return *k_; }

    /// S̃ on the free algebra (Rg, μ_g): the M-algebra on S(Rg) of the ♯ lifting function.
    AlgebraStructure S_tilde_free(const PresheafMap& g) const {
        const auto& Fg = k_->factorization(g);
        FillFn psi = [&](int j, const PresheafMap& u, const PresheafMap& v) { return Fg.fill(tau(j), u, v); };
        auto srg = adj_.S(Fg.right);
        return m_->lifting_function_to_algebra(srg, sharp(adj_, Fg.right, psi));
    }

    /// S̃ on an arbitrary algebra via its lifting function.
    AlgebraStructure S_tilde(const AlgebraStructure& a) const {
        FillFn psi = [&](int j, const PresheafMap& u, const PresheafMap& v) {
            Square sq = make_square(k_->generators().arrows[tau(j)], a.g, u, v);
            return solve_lift(k_->lambda(tau(j)), a, sq, *k_);
        };
        return m_->lifting_function_to_algebra(adj_.S(a.g), sharp(adj_, a.g, psi));
    }

    /// ρ_g = (structure of S̃(Rg, μ_g)) ∘ Q(SLg, 1).
    PresheafMap rho(const PresheafMap& g) const {
        return cached(rho_, g, [&] {
            auto t = S_tilde_free(g).t;
            auto fk = k_->factor(g);
            auto sg = adj_.S(g);
            auto e = m_->on_square(sg, adj_.S(fk.right), adj_.S(fk.left), identity_map(sg.dst));
            return compose(t, e);
        });
    }

    /// γ_f = ν_{ETf} ∘ T(ρ_{Tf}) ∘ T(Q(ι_f)).
    PresheafMap gamma(const PresheafMap& f) const {
        return cached(gamma_, f, [&] { return gamma_from(f, [&](const PresheafMap& g) { return rho(g); }); });
    }

    PresheafMap gamma_from(const PresheafMap& f, const std::function<PresheafMap(const PresheafMap&)>& rho_fn) const {
        auto tf = adj_.T(f);
        auto us = adj_.unit_square(f);
        auto qi = m_->on_square(us);
        return compose(adj_.counit(k_->middle(tf)), adj_.T(rho_fn(tf)), adj_.T(qi));
    }

    /// ρ_g = S E(ν_g) ∘ S γ_{Sg} ∘ ι_{QSg}.
    PresheafMap rho_from(const PresheafMap& g, const std::function<PresheafMap(const PresheafMap&)>& gamma_fn) const {
        auto sg = adj_.S(g);
        auto e = k_->on_square(adj_.counit_square(g));
        return compose(adj_.S(e), adj_.S(gamma_fn(sg)), adj_.unit(m_->middle(sg)));
    }

    MateData mates() const {
        return MateData{[this](const PresheafMap& g) { return rho(g); },
                        [this](const PresheafMap& f) { return gamma(f); }};
    }

    /// The mate of a ρ family, and of a γ family.
    MateData mate_of_rho(const std::function<PresheafMap(const PresheafMap&)>& rho_fn) const {
        return MateData{rho_fn, [this, rho_fn](const PresheafMap& f) { return gamma_from(f, rho_fn); }};
    }

    MateData mate_of_gamma(const std::function<PresheafMap(const PresheafMap&)>& gamma_fn) const {
        return MateData{[this, gamma_fn](const PresheafMap& g) { return rho_from(g, gamma_fn); }, gamma_fn};
    }

    /// T̃(f, s) = (Tf, γ_f ∘ Ts).
    CoalgebraStructure lift_T_coalg(const CoalgebraStructure& c, const MateData& md) const {
        return CoalgebraStructure{adj_.T(c.f), compose(md.gamma(c.f), adj_.T(c.s))};
    }

    CoalgebraStructure lift_T_coalg(const CoalgebraStructure& c) const { return lift_T_coalg(c, mates()); }

    /// S̃(g, t) = (Sg, St ∘ ρ_g).
    AlgebraStructure lift_S_alg(const AlgebraStructure& a, const MateData& md) const {
        return AlgebraStructure{adj_.S(a.g), compose(adj_.S(a.t), md.rho(a.g))};
    }

private:
    using Cache = std::map<std::string, PresheafMap>;

    template <class Make>
    PresheafMap cached(Cache& c, const PresheafMap& f, Make&& make) const {
        auto key = arrow_key(f);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = c.find(key);
            if (it != c.end()) return it->second;
        }
        auto v = make();
        std::lock_guard<std::mutex> lock(mutex_);
        return c.emplace(key, v).first->second;
    }

    const Adjunction& adj_;
    std::shared_ptr<const GeneratedAwfs> m_;
    std::shared_ptr<const GeneratedAwfs> k_;
    std::vector<int> tau_;
    mutable std::mutex mutex_;
    mutable Cache rho_, gamma_;
};

enum class Side { lax, colax };

/**
 * Lax side: ρ against L, R and the comultiplication and multiplication, per K-arrow.
 * Colax side: γ likewise, per M-arrow.
 */
inline LawReport verify_lax_colax(const AwfsAdjunction& aa, const MateData& md, Side side,
                                  const std::vector<std::pair<std::string, PresheafMap>>& arrows) {
    LawReport r;
    const auto& adj = aa.adjunction();
    const auto& M = aa.M();
    const auto& K = aa.K();
    for (const auto& [name, a] : arrows) {
        if (side == Side::lax) {
            const auto& g = a;
            r.check("lax_left", name, [&]() -> std::optional<Witness> {
                auto p = md.rho(g);
                if (auto w = p.validate()) return w;
                return map_difference(compose(p, M.left(adj.S(g))), adj.S(K.left(g)));
            });
            r.check("lax_right", name, [&] {
                return map_difference(compose(adj.S(K.right(g)), md.rho(g)), M.right(adj.S(g)));
            });
            r.check("lax_comultiplication", name, [&] {
                auto sg = adj.S(g);
                auto p = md.rho(g);
                auto lk = K.left(g);
                auto e = M.on_square(M.left(sg), adj.S(lk), identity_map(sg.src), p);
                return map_difference(compose(adj.S(K.delta(g)), p), compose(md.rho(lk), e, M.delta(sg)));
            });
            r.check("lax_multiplication", name, [&] {
                auto sg = adj.S(g);
                auto p = md.rho(g);
                auto rk = K.right(g);
                auto e = M.on_square(M.right(sg), adj.S(rk), p, identity_map(sg.dst));
                return map_difference(compose(p, M.mu(sg)), compose(adj.S(K.mu(g)), md.rho(rk), e));
            });
        } else {
            const auto& f = a;
            r.check("colax_left", name, [&]() -> std::optional<Witness> {
                auto c = md.gamma(f);
                if (auto w = c.validate()) return w;
                return map_difference(compose(c, adj.T(M.left(f))), K.left(adj.T(f)));
            });
            r.check("colax_right", name, [&] {
                return map_difference(compose(K.right(adj.T(f)), md.gamma(f)), adj.T(M.right(f)));
            });
            r.check("colax_comultiplication", name, [&] {
                auto tf = adj.T(f);
                auto c = md.gamma(f);
                auto lf = M.left(f);
                auto e = K.on_square(adj.T(lf), K.left(tf), identity_map(tf.src), c);
                return map_difference(compose(K.delta(tf), c), compose(e, md.gamma(lf), adj.T(M.delta(f))));
            });
            r.check("colax_multiplication", name, [&] {
                auto tf = adj.T(f);
                auto c = md.gamma(f);
                auto rf = M.right(f);
                auto e = K.on_square(adj.T(rf), K.right(tf), c, identity_map(tf.dst));
                return map_difference(compose(c, adj.T(M.mu(f))), compose(K.mu(tf), e, md.gamma(rf)));
            });
        }
    }
    return r;
}

/// The five adjunctions of awfs of an algebraic Quillen adjunction, from two model
/// structures whose K-side generators are the transports of the M-side ones.
struct QuillenData {
    const AlgebraicModelStructure& m;
    const AlgebraicModelStructure& k;
    const AwfsAdjunction& trivial;  // between (C_t, F) on both sides
    const AwfsAdjunction& cof;      // between (C, F_t) on both sides
    MateData mates_t;
    MateData mates;
};

/**
 * (a) both comparison squares ξ^K·γ_t = γ·Tξ^M and Sξ^K·ρ_t = ρ·ξ^M S, (b) the lifted
 * functors commute with ξ_* and ξ^* on the given structures, (c) T̃ carries the unit
 * coalgebras of generators to those of the transported generators.
 */
inline LawReport verify_algebraic_quillen(const QuillenData& q,
                                          const std::vector<std::pair<std::string, PresheafMap>>& m_arrows,
                                          const std::vector<std::pair<std::string, PresheafMap>>& k_arrows,
                                          const std::vector<std::pair<std::string, CoalgebraStructure>>& coalgebras,
                                          const std::vector<std::pair<std::string, AlgebraStructure>>& algebras,
                                          bool generator_units = true) {
    LawReport r;
    const auto& adj = q.trivial.adjunction();
    for (const auto& [name, f] : m_arrows)
        r.check("quillen_left_square", name, [&] {
            auto tf = adj.T(f);
            return map_difference(compose(q.k.xi(tf), q.mates_t.gamma(f)), compose(q.mates.gamma(f), adj.T(q.m.xi(f))));
        });
    for (const auto& [name, g] : k_arrows)
        r.check("quillen_right_square", name, [&] {
            auto sg = adj.S(g);
            return map_difference(compose(adj.S(q.k.xi(g)), q.mates_t.rho(g)), compose(q.mates.rho(g), q.m.xi(sg)));
        });
    for (const auto& [name, c] : coalgebras)
        r.check("quillen_lifted_coalgebra", name, [&] {
            auto lhs = q.cof.lift_T_coalg(q.m.push_coalgebra(c), q.mates);
            auto rhs = q.k.push_coalgebra(q.trivial.lift_T_coalg(c, q.mates_t));
            return map_difference(lhs.s, rhs.s);
        });
    for (const auto& [name, a] : algebras)
        r.check("quillen_lifted_algebra", name, [&] {
            auto lhs = q.m.pull_algebra(q.cof.lift_S_alg(a, q.mates));
            auto rhs = q.trivial.lift_S_alg(q.k.pull_algebra(a), q.mates_t);
            return map_difference(lhs.t, rhs.t);
        });
    auto units = [&](const AwfsAdjunction& aa, const MateData& md, const char* law) {
        const auto& J = aa.M().generators();
        for (int j = 0; j < J.size(); ++j)
            r.check(law, J.names[j], [&] {
                auto lifted = aa.lift_T_coalg(aa.M().lambda(j), md);
                return map_difference(lifted.s, aa.K().lambda(aa.tau(j)).s);
            });
    };
    if (generator_units) {
        units(q.trivial, q.mates_t, "quillen_unit_trivial");
        units(q.cof, q.mates, "quillen_unit");
    }
    return r;
}

/// A(a, −)·X as a presheaf on A^op × C; element (g, x) at (b, c) has index g·|X(c)| + x.
inline Presheaf representable_copower(const FiniteCategory& A, const BasePtr& product_base, const Presheaf& x, int a) {
    const auto& C = *x.base;
    const int nc = C.object_count();
    const int mc = C.morphism_count();
    Presheaf p;
    p.base = product_base;
    for (int b = 0; b < A.object_count(); ++b)
        for (int c = 0; c < nc; ++c) p.sizes.push_back(static_cast<int>(A.hom(a, b).size()) * x.sizes[c]);
    for (int n = 0; n < A.morphism_count(); ++n) {
        const auto& mor = A.morphism(n);  // acts P(src n, −) → P(dst n, −)
        auto from = A.hom(a, mor.src);
        auto to = A.hom(a, mor.dst);
        for (int k = 0; k < mc; ++k) {
            const auto& km = C.morphism(k);
            Table t;
            for (int g : from) {
                int ng = A.compose(n, g);
                int pos = static_cast<int>(std::find(to.begin(), to.end(), ng) - to.begin());
                for (int e = 0; e < x.sizes[km.dst]; ++e) t.push_back(pos * x.sizes[km.src] + x.act(k, e));
            }
            p.action.push_back(std::move(t));
        }
    }
    return p;
}

/// A(a, −)·h.
inline PresheafMap representable_copower(const FiniteCategory& A, const BasePtr& product_base, const PresheafMap& h,
                                         int a) {
    PresheafMap m{representable_copower(A, product_base, h.src, a), representable_copower(A, product_base, h.dst, a), {}};
    const int nc = h.src.base->object_count();
    for (int b = 0; b < A.object_count(); ++b)
        for (int c = 0; c < nc; ++c) {
            Table t;
            int n = static_cast<int>(A.hom(a, b).size());
            for (int g = 0; g < n; ++g)
                for (int e = 0; e < h.src.sizes[c]; ++e) t.push_back(g * h.dst.sizes[c] + h.comp[c][e]);
            m.comp.push_back(std::move(t));
        }
    return m;
}

/// f^*: A(b, −)·X → A(a, −)·X for f: a → b.
inline PresheafMap precompose_copower(const FiniteCategory& A, const BasePtr& product_base, const Presheaf& x, int f) {
    const auto& mor = A.morphism(f);
    PresheafMap m{representable_copower(A, product_base, x, mor.dst), representable_copower(A, product_base, x, mor.src), {}};
    const int nc = x.base->object_count();
    for (int d = 0; d < A.object_count(); ++d) {
        auto from = A.hom(mor.dst, d);
        auto to = A.hom(mor.src, d);
        for (int c = 0; c < nc; ++c) {
            Table t;
            for (int g : from) {
                int gf = A.compose(g, f);
                int pos = static_cast<int>(std::find(to.begin(), to.end(), gf) - to.begin());
                for (int e = 0; e < x.sizes[c]; ++e) t.push_back(pos * x.sizes[c] + e);
            }
            m.comp.push_back(std::move(t));
        }
    }
    return m;
}

/// Base A^op × C for diagrams A → Psh(C).
inline BasePtr diagram_base(const FiniteCategory& A, const FiniteCategory& C) {
    return make_base(FiniteCategory::product(FiniteCategory::opposite(A), C));
}

namespace detail {

inline GeneratorDiagram copower_generators(const GeneratorDiagram& J, const FiniteCategory& A, const BasePtr& base,
                                           bool with_precomposition) {
    GeneratorDiagram out;
    auto outer = with_precomposition ? FiniteCategory::opposite(A) : FiniteCategory::discrete(A.objects());
    out.shape = make_base(FiniteCategory::product(outer, *J.shape));
    const int nj = J.size();
    for (int a = 0; a < A.object_count(); ++a)
        for (int j = 0; j < nj; ++j) {
            out.names.push_back("A(" + A.object_name(a) + ",-)." + J.names[j]);
            out.arrows.push_back(representable_copower(A, base, J.arrows[j], a));
        }
    const int mj = J.shape->morphism_count();
    for (int n = 0; n < outer.morphism_count(); ++n)
        for (int m = 0; m < mj; ++m) {
            const auto& sq = J.squares[m];
            const auto& om = outer.morphism(n);
            // (n, m): (a, j′) → (a′, j); the square is A(a′,−)·(top, bottom) after f^*.
            int a_src = om.src, a_dst = om.dst;
            auto top = representable_copower(A, base, sq.top, a_dst);
            auto bottom = representable_copower(A, base, sq.bottom, a_dst);
            if (with_precomposition) {
                // n in A^op from a_src to a_dst is f: a_dst → a_src in A.
                top = compose(top, precompose_copower(A, base, sq.src.src, n));
                bottom = compose(bottom, precompose_copower(A, base, sq.src.dst, n));
            }
            out.squares.push_back(Square{out.arrows[a_src * nj + J.shape->morphism(m).src],
                                         out.arrows[a_dst * nj + J.shape->morphism(m).dst], top, bottom});
        }
    return out;
}

}  // namespace detail

/// J_A on A^op × C: objects A(a, −)·j, morphisms from J and from precomposition.
inline GeneratorDiagram pointwise_generators(const GeneratorDiagram& J, const FiniteCategory& A, const BasePtr& base) {
    return detail::copower_generators(J, A, base, true);
}

/// I_proj on A^op × C: objects A(a, −)·i, morphisms from I only.
inline GeneratorDiagram projective_generators(const GeneratorDiagram& I, const FiniteCategory& A, const BasePtr& base) {
    return detail::copower_generators(I, A, base, false);
}

/// Restriction of a diagram-valued presheaf on A^op × C to the object a of A.
inline PresheafMap evaluate_at(const PresheafMap& f, const FiniteCategory& A, const BasePtr& c_base, int a) {
    const int nc = c_base->object_count();
    const int mc = c_base->morphism_count();
    std::vector<int> objects, morphisms;
    for (int c = 0; c < nc; ++c) objects.push_back(a * nc + c);
    for (int k = 0; k < mc; ++k) morphisms.push_back(A.identity(a) * mc + k);
    return restrict_map(f, c_base, objects, morphisms);
}

inline Presheaf evaluate_at(const Presheaf& p, const FiniteCategory& A, const BasePtr& c_base, int a) {
    return evaluate_at(identity_map(p), A, c_base, a).src;
}

/// The action P(n): P(a) → P(a′) of n: a → a′ in A, as a map of presheaves on C.
inline PresheafMap diagram_action(const Presheaf& p, const FiniteCategory& A, const BasePtr& c_base, int n) {
    const auto& mor = A.morphism(n);
    const int nc = c_base->object_count();
    const int mc = c_base->morphism_count();
    PresheafMap m{evaluate_at(p, A, c_base, mor.src), evaluate_at(p, A, c_base, mor.dst), {}};
    for (int c = 0; c < nc; ++c) m.comp.push_back(p.action.at(n * mc + c_base->identity(c)));
    return m;
}

/**
 * For α over A^op × C: at every a, the J_A factorization of α restricted to a is
 * isomorphic under L and over R to the J factorization of α_a, and the isomorphisms
 * can be chosen natural in a.
 */
inline LawReport compare_pointwise(const GeneratedAwfs& ja, const GeneratedAwfs& j, const FiniteCategory& A,
                                   const BasePtr& c_base, const std::string& name, const PresheafMap& alpha) {
    LawReport r;
    const int na = A.object_count();
    auto f = ja.factor(alpha);
    auto mid = f.middle();
    std::vector<PresheafMap> pieces;
    std::vector<std::vector<PresheafMap>> candidates(na);
    for (int a = 0; a < na; ++a) {
        auto alpha_a = evaluate_at(alpha, A, c_base, a);
        pieces.push_back(alpha_a);
        auto fa = j.factor(alpha_a);
        auto la = evaluate_at(f.left, A, c_base, a);
        auto ra = evaluate_at(f.right, A, c_base, a);
        candidates[a] = isomorphisms_under_over(fa.left, fa.right, la, ra);
        r.check("pointwise_iso", name + "@" + A.object_name(a), [&]() -> std::optional<Witness> {
            if (candidates[a].empty()) return Witness{a, -1, "no isomorphism under L and over R"};
            return std::nullopt;
        });
    }
    std::vector<int> arrows;
    for (int n = 0; n < A.morphism_count(); ++n)
        if (!A.is_identity(n)) arrows.push_back(n);
    std::vector<PresheafMap> e_action, j_action;
    for (int n : arrows) {
        const auto& m = A.morphism(n);
        e_action.push_back(diagram_action(mid, A, c_base, n));
        j_action.push_back(j.on_square(pieces[m.src], pieces[m.dst], diagram_action(alpha.src, A, c_base, n),
                                       diagram_action(alpha.dst, A, c_base, n)));
    }
    std::vector<int> choice(na, -1);
    std::function<bool(int)> search = [&](int a) {
        if (a == na) return true;
        for (std::size_t c = 0; c < candidates[a].size(); ++c) {
            choice[a] = static_cast<int>(c);
            bool ok = true;
            for (std::size_t i = 0; i < arrows.size() && ok; ++i) {
                const auto& m = A.morphism(arrows[i]);
                if (std::max(m.src, m.dst) != a) continue;
                const auto& ps = candidates[m.src][choice[m.src]];
                const auto& pd = candidates[m.dst][choice[m.dst]];
                ok = compose(pd, j_action[i]) == compose(e_action[i], ps);
            }
            if (ok && search(a + 1)) return true;
        }
        choice[a] = -1;
        return false;
    };
    r.check("pointwise_naturality", name, [&]() -> std::optional<Witness> {
        for (const auto& c : candidates)
            if (c.empty()) return Witness{-1, -1, "no componentwise isomorphism"};
        if (!search(0)) return Witness{-1, -1, "no natural choice of componentwise isomorphisms"};
        return std::nullopt;
    });
    return r;
}

}  // namespace awfs
