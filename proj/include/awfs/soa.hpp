#pragma once
// The small object argument on finite presheaves: density comonad, step one,
// iterated stages, and the free algebraic structure extracted from cell records.

#include <mutex>

#include "awfs/colimits.hpp"
#include "awfs/lifting.hpp"

namespace awfs {

enum class Variant { monic, standard };

inline const char* variant_name(Variant v) { return v == Variant::monic ? "monic" : "standard"; }

struct SoaOptions {
    Variant variant = Variant::monic;
    int max_steps = 64;
    int max_elements = 4096;  // stage size beyond which the run counts as divergent
};

class NonConvergence : public Error {
public:
    NonConvergence(int max_steps, std::vector<int> trace)
        : Error("small object argument did not converge within " + std::to_string(max_steps) + " steps"),
          max_steps(max_steps), trace(std::move(trace)) {}
    NonConvergence(const std::string& what, int max_steps, std::vector<int> trace)
        : Error(what), max_steps(max_steps), trace(std::move(trace)) {}
    int max_steps;
    std::vector<int> trace;
};

class MonicityViolation : public Error {
public:
    explicit MonicityViolation(const std::string& where) : Error("monic variant inapplicable: " + where) {}
};

class UnconvergedArrow : public Error {
public:
    using Error::Error;
};

/// Full serialization of a map including both endpoints; cache key.
inline std::string arrow_key(const PresheafMap& f) {
    std::string s;
    auto put = [&](const Presheaf& p) {
        for (int n : p.sizes) s += std::to_string(n) + ",";
        s += "/";
        for (const auto& t : p.action) {
            for (int v : t) s += std::to_string(v) + ",";
            s += ";";
        }
        s += "/";
    };
    put(f.src);
    put(f.dst);
    return s + table_key(f);
}

/// A cell attached at `stage` for the square (u, v): j ⇒ R^{stage−1}f, with its maps
/// reindexed into the final middle object Ef.
struct CellRecord {
    int j = 0;
    int stage = 0;
    int index = 0;  // position in the canonical square enumeration of its stage
    PresheafMap u;
    PresheafMap v;
    PresheafMap injection;
};

/**
 * The result of running the small object argument on one arrow f: the factorization
 * f = Rf∘Lf, the stage trace and every attached cell.
 */
struct Factorization {
    PresheafMap f;
    PresheafMap left;
    PresheafMap right;
    Variant variant = Variant::monic;
    std::vector<int> trace;
    std::vector<std::vector<int>> stage_sizes;
    std::vector<PresheafMap> stage_maps;  // E^k → E^{k+1}, k < N
    std::vector<CellRecord> cells;        // in stage order
    std::vector<CellRecord> closing;      // standard variant: cells of the comparison stage
    std::unordered_map<std::string, std::size_t> fill_index;

    const Presheaf& middle() const { return left.dst; }
    int stages() const { return static_cast<int>(trace.size()) - 1; }

    const std::vector<CellRecord>& fill_cells() const { return variant == Variant::monic ? cells : closing; }

    static std::string fill_key(int j, const PresheafMap& u, const PresheafMap& v) {
        return std::to_string(j) + "#" + table_key(u) + "|" + table_key(v);
    }

    /// Free lifting function of Rf: the cell attached for (u, v) at its minimal stage.
    const CellRecord* find_cell(int j, const PresheafMap& u, const PresheafMap& v) const {
        auto it = fill_index.find(fill_key(j, u, v));
        if (it == fill_index.end()) return nullptr;
        return &fill_cells()[it->second];
    }

    const PresheafMap& fill(int j, const PresheafMap& u, const PresheafMap& v) const {
        auto c = find_cell(j, u, v);
        if (!c) throw FillFailure("no cell for this square into the right factor", Witness{-1, -1, fill_key(j, u, v)});
        return c->injection;
    }
};

using CellFill = std::function<PresheafMap(const CellRecord&, const PresheafMap&)>;

/**
 * Extends `base`: dom f → X along Lf by walking the cells of f in stage order; each
 * cell's image is `fill(cell, m∘u_cell)`. Disagreements raise FillFailure.
 */
inline PresheafMap extend_cellular(const Factorization& F, const Presheaf& x, const PresheafMap& base,
                                   const CellFill& fill) {
    const auto& e = F.middle();
    PresheafMap m{e, x, {}};
    for (int s : e.sizes) m.comp.emplace_back(s, -1);
    auto assign = [&](int o, int el, int v, const char* what) {
        int& slot = m.comp[o][el];
        if (slot < 0) slot = v;
        else if (slot != v) throw FillFailure(std::string("cellular extension is inconsistent on ") + what, Witness{o, el, ""});
    };
    for (std::size_t o = 0; o < F.left.comp.size(); ++o)
        for (std::size_t a = 0; a < F.left.comp[o].size(); ++a)
            assign(static_cast<int>(o), F.left.comp[o][a], base.comp[o][a], "the domain");
    for (const auto& c : F.cells) {
        PresheafMap mu{c.u.src, x, {}};
        for (std::size_t o = 0; o < c.u.comp.size(); ++o) {
            Table t;
            for (int el : c.u.comp[o]) {
                int v = m.comp[o][el];
                if (v < 0) throw FillFailure("cell attached before its boundary", Witness{static_cast<int>(o), el, ""});
                t.push_back(v);
            }
            mu.comp.push_back(std::move(t));
        }
        auto w = fill(c, mu);
        for (std::size_t o = 0; o < c.injection.comp.size(); ++o)
            for (std::size_t y = 0; y < c.injection.comp[o].size(); ++y)
                assign(static_cast<int>(o), c.injection.comp[o][y], w.comp[o][y], "a cell");
    }
    for (std::size_t o = 0; o < m.comp.size(); ++o)
        for (std::size_t el = 0; el < m.comp[o].size(); ++el)
            if (m.comp[o][el] < 0) throw FillFailure("cellular extension left an element unassigned",
                                                     Witness{static_cast<int>(o), static_cast<int>(el), ""});
    if (auto w = m.naturality_defect()) throw FillFailure("cellular extension is not natural", *w);
    return m;
}

namespace detail {

struct PendingCell {
    int j;
    int index;
    Square square;  // into the current stage's right factor
};

inline void check_generators_monic(const GeneratorDiagram& gen) {
    for (int j = 0; j < gen.size(); ++j)
        if (!is_injective(gen.arrows[j])) throw MonicityViolation("generator " + gen.names[j] + " is not injective");
}

inline bool within_prefix(const PresheafMap& u, const std::vector<int>& sizes) {
    for (std::size_t o = 0; o < u.comp.size(); ++o)
        for (int v : u.comp[o])
            if (v >= sizes[o]) return false;
    return true;
}

inline PresheafMap with_target(PresheafMap m, const Presheaf& dst) {
    m.dst = dst;
    return m;
}

struct StageResult {
    Presheaf object;
    PresheafMap inclusion;               // E^β → E^{β+1}
    std::vector<PresheafMap> injections;  // cod j_s → E^{β+1}
    PresheafMap right;
};

// Glues cod j_s onto E^β along attaching maps, with coherence relations between
// cells and extra relations supplied by the caller.
inline StageResult glue_stage(const GeneratorDiagram& gen, const Presheaf& prev, const PresheafMap& prev_right,
                              const std::vector<PendingCell>& pending,
                              const std::function<void(std::size_t, std::vector<std::vector<std::pair<int, int>>>&,
                                                       const CoproductResult&)>& extra) {
    std::vector<Presheaf> parts{prev};
    for (const auto& p : pending) parts.push_back(gen.arrows[p.j].dst);
    auto sum = coproduct(parts, prev.base);
    std::vector<std::vector<std::pair<int, int>>> rel(prev.sizes.size());
    for (std::size_t i = 0; i < pending.size(); ++i) {
        const auto& p = pending[i];
        const auto& j = gen.arrows[p.j];
        const auto& inj = sum.injections[i + 1];
        for (std::size_t o = 0; o < j.comp.size(); ++o)
            for (std::size_t x = 0; x < j.comp[o].size(); ++x)
                rel[o].emplace_back(inj.comp[o][j.comp[o][x]], sum.injections[0].comp[o][p.square.top.comp[o][x]]);
        extra(i, rel, sum);
    }
    auto q = quotient(sum.object, rel);
    StageResult out;
    out.object = q.object;
    out.inclusion = compose(q.map, sum.injections[0]);
    ColimitRecord rec{q.object, {out.inclusion}};
    std::vector<PresheafMap> cocone{prev_right};
    for (std::size_t i = 0; i < pending.size(); ++i) {
        out.injections.push_back(compose(q.map, sum.injections[i + 1]));
        rec.legs.push_back(out.injections.back());
        cocone.push_back(pending[i].square.bottom);
    }
    auto r = check_cocone_factor(rec, cocone);
    if (!r.map) throw FillFailure("stage right factor is not induced", *r.failure);
    out.right = *r.map;
    return out;
}

}  // namespace detail

/**
 * Runs the small object argument for J on f. In the monic variant a cell is attached
 * once, at the first stage whose right factor admits its square with a top not
 * factoring through the stage before; in the standard variant every square is
 * attached at every stage and cells already present are identified with their
 * earlier copies.
 */
inline Factorization factorize(const GeneratorDiagram& gen, const PresheafMap& f, const SoaOptions& opts = {}) {
    if (!same_base(f.src.base, f.dst.base)) throw BaseMismatch("factorize: arrow over mixed bases");
    for (const auto& a : gen.arrows)
        if (!same_base(a.src.base, f.src.base)) throw BaseMismatch("factorize: generators and arrow over different bases");
    if (opts.max_steps < 1) throw ValidationError("max_steps must be positive");
    if (opts.max_elements < 1) throw ValidationError("max_elements must be positive");
    const bool monic = opts.variant == Variant::monic;
    if (monic) detail::check_generators_monic(gen);

    Factorization F;
    F.f = f;
    F.variant = opts.variant;
    Presheaf cur = f.src;
    PresheafMap right = f;
    std::vector<Presheaf> stage_objects{cur};
    F.stage_sizes.push_back(cur.sizes);
    F.trace.push_back(cur.total());

    // Raw cells: maps into the stage presheaves, reindexed to the final object at the end.
    struct RawCell {
        int j, stage, index;
        PresheafMap u, v, injection;
    };
    std::vector<RawCell> raw;
    std::vector<RawCell> closing;
    // Monic variant: square key → raw cell index (tables are stage independent).
    std::unordered_map<std::string, std::size_t> monic_index;
    // Standard variant: cells of the previous stage.
    std::vector<std::size_t> previous_stage_cells;

    bool converged = false;
    for (int step = 0; step < opts.max_steps; ++step) {
        const int stage = step + 1;
        std::vector<detail::PendingCell> pending;
        std::unordered_map<std::string, std::size_t> pending_index;
        for (int j = 0; j < gen.size(); ++j) {
            auto sqs = enumerate_squares(gen.arrows[j], right);
            for (std::size_t i = 0; i < sqs.size(); ++i) {
                if (monic && step > 0 && detail::within_prefix(sqs[i].top, F.stage_sizes[step - 1])) continue;
                pending_index.emplace(Factorization::fill_key(j, sqs[i].top, sqs[i].bottom), pending.size());
                pending.push_back({j, static_cast<int>(i), std::move(sqs[i])});
            }
        }
        if (monic && pending.empty()) {
            converged = true;
            break;
        }

        auto extra = [&](std::size_t i, std::vector<std::vector<std::pair<int, int>>>& rel, const CoproductResult& sum) {
            const auto& p = pending[i];
            const auto& inj = sum.injections[i + 1];
            for (int m = 0; m < gen.shape->morphism_count(); ++m) {
                const auto& mor = gen.shape->morphism(m);
                if (gen.shape->is_identity(m) || mor.dst != p.j) continue;
                const auto& ab = gen.squares[m];
                auto u2 = compose(p.square.top, ab.top);
                auto v2 = compose(p.square.bottom, ab.bottom);
                auto key = Factorization::fill_key(mor.src, u2, v2);
                std::function<int(int, int)> other;
                auto pit = pending_index.find(key);
                if (pit != pending_index.end()) {
                    const auto& oinj = sum.injections[pit->second + 1];
                    other = [&oinj](int o, int y) { return oinj.comp[o][y]; };
                } else if (monic) {
                    auto mit = monic_index.find(key);
                    if (mit == monic_index.end())
                        throw FillFailure("reindexed square has no earlier cell", Witness{-1, -1, key});
                    const auto& w = raw[mit->second].injection;
                    const auto& base_inj = sum.injections[0];
                    other = [&w, &base_inj](int o, int y) { return base_inj.comp[o][w.comp[o][y]]; };
                } else {
                    throw FillFailure("reindexed square missing from the stage", Witness{-1, -1, key});
                }
                const auto& cj = gen.arrows[mor.src].dst;
                for (int o = 0; o < static_cast<int>(cj.sizes.size()); ++o)
                    for (int y = 0; y < cj.sizes[o]; ++y)
                        rel[o].emplace_back(inj.comp[o][ab.bottom.comp[o][y]], other(o, y));
            }
        };

        auto glue_extra = [&](std::size_t i, std::vector<std::vector<std::pair<int, int>>>& rel,
                              const CoproductResult& sum) {
            extra(i, rel, sum);
            // Standard variant: identify the reindexed copy of each previous cell with that cell.
            if (monic || step == 0 || i + 1 != pending.size()) return;
            const auto& prev_map = F.stage_maps.back();
            for (std::size_t c : previous_stage_cells) {
                const auto& cell = raw[c];
                auto key = Factorization::fill_key(cell.j, compose(prev_map, cell.u), cell.v);
                auto pit = pending_index.find(key);
                if (pit == pending_index.end())
                    throw FillFailure("previous cell has no reindexed square", Witness{-1, -1, key});
                const auto& inj = sum.injections[pit->second + 1];
                for (std::size_t o = 0; o < cell.injection.comp.size(); ++o)
                    for (std::size_t y = 0; y < cell.injection.comp[o].size(); ++y)
                        rel[o].emplace_back(inj.comp[o][y], sum.injections[0].comp[o][cell.injection.comp[o][y]]);
            }
        };

        auto st = detail::glue_stage(gen, cur, right, pending, glue_extra);
        if (monic) {
            if (!is_injective(st.inclusion))
                throw MonicityViolation("inclusion of stage " + std::to_string(step) + " into stage " +
                                        std::to_string(stage) + " is not injective");
        } else if (is_iso(st.inclusion)) {
            for (std::size_t i = 0; i < pending.size(); ++i) {
                auto inv = inverse(st.inclusion);
                closing.push_back(RawCell{pending[i].j, stage, pending[i].index, pending[i].square.top,
                                          pending[i].square.bottom, compose(inv, st.injections[i])});
            }
            converged = true;
            break;
        }

        if (!monic) previous_stage_cells.clear();
        for (std::size_t i = 0; i < pending.size(); ++i) {
            auto u = detail::with_target(pending[i].square.top, cur);
            if (monic) monic_index.emplace(Factorization::fill_key(pending[i].j, u, pending[i].square.bottom), raw.size());
            else previous_stage_cells.push_back(raw.size());
            raw.push_back(RawCell{pending[i].j, stage, pending[i].index, u, pending[i].square.bottom, st.injections[i]});
        }
        F.stage_maps.push_back(st.inclusion);
        cur = st.object;
        right = st.right;
        stage_objects.push_back(cur);
        F.stage_sizes.push_back(cur.sizes);
        F.trace.push_back(cur.total());
        if (cur.total() > opts.max_elements)
            throw NonConvergence("small object argument exceeded " + std::to_string(opts.max_elements) +
                                     " elements at stage " + std::to_string(stage),
                                 opts.max_steps, F.trace);
    }
    if (!converged) throw NonConvergence(opts.max_steps, F.trace);

    // Reindex every stage into the final object.
    const int n = static_cast<int>(stage_objects.size()) - 1;
    std::vector<PresheafMap> to_final(n + 1);
    to_final[n] = identity_map(cur);
    for (int k = n - 1; k >= 0; --k) to_final[k] = compose(to_final[k + 1], F.stage_maps[k]);
    F.left = to_final[0];
    F.right = right;
    for (const auto& c : raw) {
        CellRecord r{c.j, c.stage, c.index, compose(to_final[c.stage - 1], c.u), c.v, compose(to_final[c.stage], c.injection)};
        F.cells.push_back(std::move(r));
    }
    for (const auto& c : closing)
        F.closing.push_back(CellRecord{c.j, c.stage, c.index, c.u, c.v, c.injection});
    const auto& fc = F.fill_cells();
    for (std::size_t i = 0; i < fc.size(); ++i) F.fill_index.emplace(Factorization::fill_key(fc[i].j, fc[i].u, fc[i].v), i);
    return F;
}

/// L⁰f and the counit square L⁰f ⇒ f, via the coend of squares j ⇒ f.
struct DensityResult {
    PresheafMap arrow;
    Square counit;
};

inline DensityResult density_comonad(const GeneratorDiagram& gen, const PresheafMap& f) {
    const auto& base = f.src.base;
    std::vector<std::vector<Square>> sq(gen.size());
    for (int j = 0; j < gen.size(); ++j) sq[j] = enumerate_squares(gen.arrows[j], f);

    // One copy of j per square, in generator then square order.
    std::vector<Presheaf> dom_parts, cod_parts;
    std::vector<std::pair<int, std::size_t>> copy_of;
    std::map<std::pair<int, std::string>, std::size_t> copy_index;
    for (int j = 0; j < gen.size(); ++j)
        for (std::size_t i = 0; i < sq[j].size(); ++i) {
            copy_index[{j, square_key(sq[j][i])}] = copy_of.size();
            copy_of.emplace_back(j, i);
            dom_parts.push_back(gen.arrows[j].src);
            cod_parts.push_back(gen.arrows[j].dst);
        }
    auto dom_sum = coproduct(dom_parts, base);
    auto cod_sum = coproduct(cod_parts, base);

    // Relation copies: one per (non-identity morphism m: j′ → j, square into f from j).
    std::vector<Presheaf> rdom_parts, rcod_parts;
    std::vector<std::pair<int, std::size_t>> rel_of;
    for (int m = 0; m < gen.shape->morphism_count(); ++m) {
        if (gen.shape->is_identity(m)) continue;
        const auto& mor = gen.shape->morphism(m);
        for (std::size_t i = 0; i < sq[mor.dst].size(); ++i) {
            rel_of.emplace_back(m, i);
            rdom_parts.push_back(gen.arrows[mor.src].src);
            rcod_parts.push_back(gen.arrows[mor.src].dst);
        }
    }
    auto rdom = coproduct(rdom_parts, base);
    auto rcod = coproduct(rcod_parts, base);

    auto parallel = [&](const CoproductResult& rsum, const CoproductResult& sum, bool domain) {
        PresheafMap reindex{rsum.object, sum.object, {}}, act{rsum.object, sum.object, {}};
        for (int s : rsum.object.sizes) {
            reindex.comp.emplace_back(s, -1);
            act.comp.emplace_back(s, -1);
        }
        for (std::size_t r = 0; r < rel_of.size(); ++r) {
            auto [m, i] = rel_of[r];
            const auto& mor = gen.shape->morphism(m);
            const auto& ab = gen.squares[m];
            const auto& s = sq[mor.dst][i];
            Square s2{gen.arrows[mor.src], f, compose(s.top, ab.top), compose(s.bottom, ab.bottom)};
            std::size_t target_copy = copy_index.at({mor.src, square_key(s2)});
            std::size_t source_copy = copy_index.at({mor.dst, square_key(s)});
            const auto& map = domain ? ab.top : ab.bottom;
            for (std::size_t o = 0; o < map.comp.size(); ++o)
                for (std::size_t x = 0; x < map.comp[o].size(); ++x) {
                    int at = rsum.injections[r].comp[o][x];
                    reindex.comp[o][at] = sum.injections[target_copy].comp[o][x];
                    act.comp[o][at] = sum.injections[source_copy].comp[o][map.comp[o][x]];
                }
        }
        return coequalizer(reindex, act);
    };
    auto dq = parallel(rdom, dom_sum, true);
    auto cq = parallel(rcod, cod_sum, false);

    std::vector<PresheafMap> arrow_legs, udom_legs, vcod_legs;
    for (std::size_t c = 0; c < copy_of.size(); ++c) {
        auto [j, i] = copy_of[c];
        arrow_legs.push_back(compose(cq.map, cod_sum.injections[c], gen.arrows[j]));
        udom_legs.push_back(sq[j][i].top);
        vcod_legs.push_back(sq[j][i].bottom);
    }
    std::vector<PresheafMap> dom_legs, cod_legs;
    for (std::size_t c = 0; c < copy_of.size(); ++c) {
        dom_legs.push_back(compose(dq.map, dom_sum.injections[c]));
        cod_legs.push_back(compose(cq.map, cod_sum.injections[c]));
    }
    auto factor = [&](const Presheaf& colim, const std::vector<PresheafMap>& legs, const std::vector<PresheafMap>& cocone,
                      const Presheaf& target) {
        if (legs.empty()) return initial_map(target);
        auto r = check_cocone_factor(ColimitRecord{colim, legs}, cocone);
        if (!r.map) throw FillFailure("density comonad: cocone does not factor", *r.failure);
        return *r.map;
    };
    auto l0 = factor(dq.object, dom_legs, arrow_legs, cq.object);
    auto u = factor(dq.object, dom_legs, udom_legs, f.src);
    auto v = factor(cq.object, cod_legs, vcod_legs, f.dst);
    return DensityResult{l0, make_square(l0, f, u, v)};
}

struct StepOne {
    PresheafMap left;
    PresheafMap right;
    const Presheaf& middle() const { return left.dst; }
};

/// L¹f as the pushout of L⁰f along the domain counit; R¹f induced by (f, codomain counit).
inline StepOne step_one(const GeneratorDiagram& gen, const PresheafMap& f) {
    auto d = density_comonad(gen, f);
    auto po = pushout(d.counit.top, d.arrow);
    auto r = check_cocone_factor(po.record, {f, d.counit.bottom});
    if (!r.map) throw FillFailure("step one: cocone does not factor", *r.failure);
    return StepOne{po.left, *r.map};
}

/// Lifting function given as a function of (generator, top, bottom).
using FillFn = std::function<PresheafMap(int, const PresheafMap&, const PresheafMap&)>;

/**
 * An awfs cofibrantly generated by a diagram of generators, computed lazily per arrow
 * and cached. Safe to use from several threads.
 */
class GeneratedAwfs : public Awfs {
public:
    GeneratedAwfs(GeneratorDiagram gen, SoaOptions opts = {}) : gen_(std::move(gen)), opts_(opts) {
        if (auto e = gen_.validate()) throw ValidationError("invalid generator diagram: " + *e);
        if (opts_.variant == Variant::monic) detail::check_generators_monic(gen_);
    }

    using FunctorialFactorization::on_square;

    const GeneratorDiagram& generators() const { return gen_; }
    const SoaOptions& options() const { return opts_; }

    const Factorization& factorization(const PresheafMap& f) const {
        auto key = arrow_key(f);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = facts_.find(key);
            if (it != facts_.end()) return *it->second;
        }
        auto fact = std::make_shared<const Factorization>(factorize(gen_, f, opts_));
        std::lock_guard<std::mutex> lock(mutex_);
        return *facts_.emplace(key, std::move(fact)).first->second;
    }

    Factored factor(const PresheafMap& f) const override {
        const auto& F = factorization(f);
        return Factored{F.left, F.right};
    }

    PresheafMap on_square(const Square& sq) const override {
        if (auto w = square_defect(sq.src, sq.dst, sq.top, sq.bottom)) throw ValidationError("not a square", *w);
        const auto& Ff = factorization(sq.src);
        const auto& Fg = factorization(sq.dst);
        return extend_cellular(Ff, Fg.middle(), compose(Fg.left, sq.top), [&](const CellRecord& c, const PresheafMap& mu) {
            return Fg.fill(c.j, mu, compose(sq.bottom, c.v));
        });
    }

    /// Stage collapse ERf → Ef: each cell of Rf goes to the cell of f for the same square.
    PresheafMap mu(const PresheafMap& f) const override {
        return cached(mu_cache_, f, [&] {
            const auto& Ff = factorization(f);
            const auto& Fr = factorization(Ff.right);
            return extend_cellular(Fr, Ff.middle(), identity_map(Ff.middle()),
                                   [&](const CellRecord& c, const PresheafMap& mu) { return Ff.fill(c.j, mu, c.v); });
        });
    }

    PresheafMap delta(const PresheafMap& f) const override {
        return cached(delta_cache_, f, [&] { return delta_from_composition(f); });
    }

    /// Free lifting function of Rf, evaluated on one square.
    PresheafMap free_fill(const PresheafMap& f, int j, const PresheafMap& u, const PresheafMap& v) const {
        return factorization(f).fill(j, u, v);
    }

    LiftingFunction free_lifting_function(const PresheafMap& f) const {
        const auto& F = factorization(f);
        return LiftingFunction(gen_, F.right, [&](int j, const Square& sq) { return F.fill(j, sq.top, sq.bottom); });
    }

    /// t: Eh → dom h defined cell by cell from a lifting function for h.
    AlgebraStructure lifting_function_to_algebra(const PresheafMap& h, const FillFn& lf) const {
        const auto& F = factorization(h);
        auto t = extend_cellular(F, h.src, identity_map(h.src),
                                 [&](const CellRecord& c, const PresheafMap& mu) { return lf(c.j, mu, c.v); });
        return AlgebraStructure{h, t};
    }

    AlgebraStructure lifting_function_to_algebra(const LiftingFunction& lf) const {
        return lifting_function_to_algebra(
            lf.target(), [&](int j, const PresheafMap& u, const PresheafMap& v) { return lf.fill(j, u, v); });
    }

    /// The lifting function underlying an algebra: (j, u, v) ↦ t ∘ E(u, v) ∘ λ(j).
    LiftingFunction algebra_to_lifting_function(const AlgebraStructure& a) const {
        return LiftingFunction(gen_, a.g, [&](int j, const Square& sq) {
            return solve_lift(lambda(j), a, sq, *this);
        });
    }

    /// δ_f = (free structure of Rf∘RLf as a composite) ∘ E(L²f, 1).
    PresheafMap delta_from_composition(const PresheafMap& f) const {
        const auto& Ff = factorization(f);
        const auto& Fl = factorization(Ff.left);
        auto comp = compose(Ff.right, Fl.right);
        FillFn composite = [&](int j, const PresheafMap& a, const PresheafMap& b) {
            const auto& inner = Ff.fill(j, compose(Fl.right, a), b);
            return Fl.fill(j, a, inner);
        };
        auto t = lifting_function_to_algebra(comp, composite).t;
        return compose(t, on_square(f, comp, Fl.left, identity_map(f.dst)));
    }

    /// Free coalgebra structure of a generator: the cell filling (Lj, 1): j ⇒ Rj.
    CoalgebraStructure lambda(int j) const {
        const auto& a = gen_.arrows.at(j);
        const auto& F = factorization(a);
        return CoalgebraStructure{a, F.fill(j, F.left, identity_map(a.dst))};
    }

    CoalgebraStructure free_coalgebra(const PresheafMap& f) const { return CoalgebraStructure{left(f), delta(f)}; }

    AlgebraStructure free_algebra(const PresheafMap& f) const { return AlgebraStructure{right(f), mu(f)}; }

private:
    using Cache = std::map<std::string, std::shared_ptr<const PresheafMap>>;

    template <class Make>
    PresheafMap cached(Cache& cache, const PresheafMap& f, Make&& make) const {
        auto key = arrow_key(f);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache.find(key);
            if (it != cache.end()) return *it->second;
        }
        auto value = std::make_shared<const PresheafMap>(make());
        std::lock_guard<std::mutex> lock(mutex_);
        return *cache.emplace(key, std::move(value)).first->second;
    }

    GeneratorDiagram gen_;
    SoaOptions opts_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, std::shared_ptr<const Factorization>> facts_;
    mutable Cache mu_cache_;
    mutable Cache delta_cache_;
};

}  // namespace awfs
