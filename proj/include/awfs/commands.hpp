#pragma once
// Command drivers: each turns a validated instance into a certificate and an exit code.

#include <exception>
#include <thread>

#include "awfs/certificate.hpp"

namespace awfs {

enum ExitCode { kOk = 0, kFailure = 1, kNonConvergence = 2, kLawFailure = 3, kMonicity = 4 };

struct CommandOptions {
    std::optional<Variant> variant;
    std::optional<int> max_steps;
    std::optional<int> max_elements;
    std::optional<std::string> generators;
    int threads = 1;
};

struct CommandResult {
    json certificate;
    int exit_code = kOk;
    std::string message;
};

/// Runs f(0..n-1) on up to `threads` workers; rethrows the failure of the lowest index.
template <class F>
void parallel_for(int n, int threads, F&& f) {
    std::vector<std::exception_ptr> errors(n);
    auto run = [&](int i) {
        try {
            f(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) run(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (int i = next++; i < n; i = next++) run(i);
            });
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

namespace detail {

inline SoaOptions soa_options(const Instance& in, const CommandOptions& o) {
    SoaOptions s;
    s.variant = o.variant.value_or(in.options.variant);
    s.max_steps = o.max_steps.value_or(in.options.max_steps);
    s.max_elements = o.max_elements.value_or(in.options.max_elements);
    return s;
}

inline std::string generators_name(const Instance& in, const CommandOptions& o) {
    if (o.generators) {
        in.generator(*o.generators, "--generators");
        return *o.generators;
    }
    return in.default_generators();
}

inline json options_json(const SoaOptions& s, const std::string& gens) {
    return json{{"variant", variant_name(s.variant)},
                {"max_steps", s.max_steps},
                {"max_elements", s.max_elements},
                {"generators", gens}};
}

inline std::vector<std::pair<std::string, PresheafMap>> instance_arrows(const Universe& u) {
    if (!u.arrows.empty()) return u.named_arrows();
    return {u.maps.begin(), u.maps.end()};
}

inline int report_exit(const LawReport& r) { return r.all_passed() ? kOk : kLawFailure; }

inline std::string first_failure(const LawReport& r) {
    for (const auto& e : r.entries())
        if (!e.passed) return e.law + " fails at " + e.probe + (e.witness ? ": " + describe(*e.witness) : "");
    return "";
}

/// Tables and claims tying a factorization to its arrow: f = R∘L.
inline void factorization_claims(CertificateBuilder& b, const std::string& prefix, const PresheafMap& f, const Factored& fa,
                                 const char* side = "M") {
    auto a = b.table(prefix, f, side);
    auto l = b.table(prefix + "/L", fa.left, side);
    auto r = b.table(prefix + "/R", fa.right, side);
    b.equal({r, l}, {a});
}

inline CommandResult finish(CertificateBuilder& b, const std::string& command, const Instance& in, json options,
                            json summary, int exit_code = kOk, std::string message = {}) {
    CommandResult res;
    res.certificate = b.build(command, in.hash(), std::move(options), std::move(summary));
    res.exit_code = exit_code != kOk ? exit_code : report_exit(b.reports());
    res.message = message.empty() ? first_failure(b.reports()) : std::move(message);
    return res;
}

}  // namespace detail

/// Factorizes every instance arrow and records stages, cells, δ, μ and λ.
inline CommandResult cmd_soa(const Instance& in, const CommandOptions& o) {
    using namespace detail;
    auto opts = soa_options(in, o);
    auto gname = generators_name(in, o);
    const auto& J = in.generator(gname, "generators");
    GeneratedAwfs awfs(J, opts);
    auto arrows = instance_arrows(in.universe);
    const int n = static_cast<int>(arrows.size());

    struct Outcome {
        std::optional<std::vector<int>> diverged;
        std::string divergence;
        std::optional<std::string> monicity;
        LawReport laws;
    };
    std::vector<Outcome> out(n);
    parallel_for(n, o.threads, [&](int i) {
        const auto& [name, f] = arrows[i];
        try {
            awfs.factorization(f);
        } catch (const NonConvergence& e) {
            out[i].diverged = e.trace;
            out[i].divergence = e.what();
            return;
        } catch (const MonicityViolation& e) {
            out[i].monicity = e.what();
            return;
        }
        const auto& F = awfs.factorization(f);
        awfs.factorization(F.left);
        awfs.factorization(F.right);
        verify_arrow_laws(awfs, name, f, out[i].laws);
    });

    CertificateBuilder b;
    json summary{{"generators", gname}, {"arrows", json::object()}};
    int exit_code = kOk;
    std::string message;
    for (int i = 0; i < n; ++i) {
        const auto& [name, f] = arrows[i];
        auto& s = summary["arrows"][name];
        if (out[i].diverged) {
            s = json{{"status", "nonconvergence"}, {"trace", *out[i].diverged}, {"reason", out[i].divergence}};
            if (exit_code == kOk) {
                exit_code = kNonConvergence;
                message = name + ": " + out[i].divergence;
            }
            continue;
        }
        if (out[i].monicity) {
            s = json{{"status", "monicity_violation"}, {"reason", *out[i].monicity}};
            if (exit_code == kOk) {
                exit_code = kMonicity;
                message = name + ": " + *out[i].monicity;
            }
            continue;
        }
        const auto& F = awfs.factorization(f);
        const auto& FL = awfs.factorization(F.left);
        const auto& FR = awfs.factorization(F.right);
        factorization_claims(b, name, f, Factored{F.left, F.right});
        factorization_claims(b, name + "/L", F.left, Factored{FL.left, FL.right});
        factorization_claims(b, name + "/R", F.right, Factored{FR.left, FR.right});
        auto d = b.table(name + "/delta", awfs.delta(f));
        auto m = b.table(name + "/mu", awfs.mu(f));
        b.equal({d, name + "/L"}, {name + "/L/L"});
        b.identity({name + "/L/R", d});
        b.identity({m, name + "/R/L"});
        b.equal({name + "/R", m}, {name + "/R/R"});
        json cells = json::array();
        for (std::size_t k = 0; k < F.cells.size(); ++k) {
            const auto& c = F.cells[k];
            auto cn = name + "/cell" + std::to_string(k);
            auto inj = b.table(cn, c.injection);
            auto u = b.table(cn + "/u", c.u);
            auto v = b.table(cn + "/v", c.v);
            auto jn = b.table("generator/" + J.names[c.j], J.arrows[c.j]);
            b.equal({inj, jn}, {u});
            b.equal({name + "/R", inj}, {v});
            cells.push_back(json{{"stage", c.stage},
                                 {"generator", J.names[c.j]},
                                 {"square_hash", square_hash(Square{J.arrows[c.j], F.right, c.u, c.v})},
                                 {"index", c.index}});
        }
        s = json{{"status", "converged"}, {"trace", F.trace}, {"cells", std::move(cells)}};
        b.report(out[i].laws);
    }
    if (exit_code != kMonicity) {
        json lambdas = json::object();
        for (int j = 0; j < J.size(); ++j) {
            try {
                auto lam = awfs.lambda(j);
                const auto& F = awfs.factorization(J.arrows[j]);
                auto jn = "generator/" + J.names[j];
                factorization_claims(b, jn, J.arrows[j], Factored{F.left, F.right});
                auto sn = b.table(jn + "/lambda", lam.s);
                b.identity({jn + "/R", sn});
                b.equal({sn, jn}, {jn + "/L"});
                b.report(check_coalgebra_laws(lam, awfs, "lambda(" + J.names[j] + ")"));
                lambdas[J.names[j]] = "converged";
            } catch (const NonConvergence&) {
                lambdas[J.names[j]] = "nonconvergence";
            }
        }
        summary["lambda"] = lambdas;
    }
    return finish(b, "soa", in, options_json(opts, gname), std::move(summary), exit_code, message);
}

/// Free lifting functions of every right factor, and canonical lifts for the instance's squares.
inline CommandResult cmd_lift(const Instance& in, const CommandOptions& o) {
    using namespace detail;
    auto opts = soa_options(in, o);
    auto gname = generators_name(in, o);
    const auto& J = in.generator(gname, "generators");
    GeneratedAwfs awfs(J, opts);
    auto arrows = instance_arrows(in.universe);
    const int n = static_cast<int>(arrows.size());
    std::vector<LiftingFunction> lfs(n);
    std::vector<LawReport> reports(n);
    parallel_for(n, o.threads, [&](int i) {
        lfs[i] = awfs.free_lifting_function(arrows[i].second);
        reports[i] = check_lifting_function(J, lfs[i]);
    });
    CertificateBuilder b;
    json summary{{"generators", gname}, {"lifting_functions", json::object()}, {"lifts", json::array()}};
    for (int i = 0; i < n; ++i) {
        const auto& [name, f] = arrows[i];
        auto r = b.table(name + "/R", lfs[i].target());
        b.lifting_function(gname, r, J, lfs[i]);
        std::size_t count = 0;
        for (int j = 0; j < J.size(); ++j) count += lfs[i].squares(j).size();
        summary["lifting_functions"][name] = count;
        b.report(reports[i]);
    }
    const auto& lifts = in.source.value("lifts", json::array());
    for (std::size_t i = 0; i < lifts.size(); ++i) {
        const auto& l = lifts[i];
        auto p = "lift" + std::to_string(i);
        const auto& u = in.universe.maps;
        Square sq{u.at(l.at("left")), u.at(l.at("right")), u.at(l.at("top")), u.at(l.at("bottom"))};
        auto c = find_coalgebra(sq.src, awfs);
        auto a = find_algebra(sq.dst, awfs);
        LawReport r;
        r.check("coalgebra_exists", p, [&]() -> std::optional<Witness> {
            if (!c) return Witness{-1, -1, "left arrow carries no coalgebra structure"};
            return std::nullopt;
        });
        r.check("algebra_exists", p, [&]() -> std::optional<Witness> {
            if (!a) return Witness{-1, -1, "right arrow carries no algebra structure"};
            return std::nullopt;
        });
        b.report(r);
        if (!c || !a) {
            summary["lifts"].push_back(json{{"status", "no_structure"}});
            continue;
        }
        auto w = solve_lift(*c, *a, sq, awfs);
        factorization_claims(b, p + "/left", sq.src, awfs.factor(sq.src));
        factorization_claims(b, p + "/right", sq.dst, awfs.factor(sq.dst));
        auto top = b.table(p + "/top", sq.top);
        auto bottom = b.table(p + "/bottom", sq.bottom);
        auto s = b.table(p + "/coalgebra", c->s);
        auto t = b.table(p + "/algebra", a->t);
        auto fill = b.table(p + "/fill", w);
        b.identity({p + "/left/R", s});
        b.equal({s, p + "/left"}, {p + "/left/L"});
        b.identity({t, p + "/right/L"});
        b.equal({p + "/right", t}, {p + "/right/R"});
        b.lift(fill, p + "/left", p + "/right", top, bottom);
        summary["lifts"].push_back(json{{"status", "solved"}, {"fill", w.comp}});
    }
    return finish(b, "lift", in, options_json(opts, gname), std::move(summary));
}

/// The comparison map, model axioms, replacement (co)monads and χ.
inline CommandResult cmd_model(const Instance& in, const CommandOptions& o) {
    using namespace detail;
    if (!in.model) throw InstanceError("model", "the instance has no model block");
    auto opts = soa_options(in, o);
    const auto& ms_spec = *in.model;
    auto J = std::make_shared<GeneratedAwfs>(in.generator(ms_spec.trivial, "model"), opts);
    auto I = std::make_shared<GeneratedAwfs>(in.generator(ms_spec.cofibrations, "model"), opts);
    AlgebraicModelStructure ms(J, I, GeneratorInclusion{ms_spec.tau}, in.weq());
    Replacement rep(ms);
    auto arrows = instance_arrows(in.universe);
    auto objects = in.universe.named_presheaves();
    if (ms_spec.replacement) {
        objects.clear();
        for (const auto& x : *ms_spec.replacement) objects.emplace_back(x, in.universe.presheaves.at(x));
    }
    const int n = static_cast<int>(arrows.size());
    const int no = static_cast<int>(objects.size());

    std::vector<LawReport> arrow_reports(n), object_reports(no);
    std::vector<PresheafMap> xis(n), chis(no);
    parallel_for(n, o.threads, [&](int i) {
        const auto& [name, f] = arrows[i];
        xis[i] = ms.xi(f);
        arrow_reports[i] = verify_awfs_morphism(ms.comparison(), *J, *I, {Probe::of_arrow(name, f)});
        arrow_reports[i].merge(check_coalgebra_laws(ms.cellular_coalgebra(f), *I, "cellular(" + name + ")"));
    });
    parallel_for(no, o.threads, [&](int i) {
        const auto& [name, x] = objects[i];
        chis[i] = rep.chi(x);
        object_reports[i] = verify_replacement(rep, {objects[i]}, {});
        object_reports[i].merge(verify_chi(rep, {objects[i]}, {}));
    });

    CertificateBuilder b;
    json summary{{"trivial", ms_spec.trivial}, {"cofibrations", ms_spec.cofibrations}, {"xi", json::object()}, {"chi", json::object()}};
    for (int i = 0; i < n; ++i) {
        const auto& [name, f] = arrows[i];
        factorization_claims(b, name + "/t", f, J->factor(f));
        factorization_claims(b, name, f, I->factor(f));
        auto x = b.table(name + "/xi", xis[i]);
        b.equal({x, name + "/t/L"}, {name + "/L"});
        b.equal({name + "/R", x}, {name + "/t/R"});
        summary["xi"][name] = json{{"injective", is_injective(xis[i])}};
        b.report(arrow_reports[i]);
    }
    for (int i = 0; i < no; ++i) {
        const auto& [name, x] = objects[i];
        auto p = "object/" + name;
        auto qx = rep.Q(x);
        auto rx = rep.R(x);
        auto c = b.table(p + "/chi", chis[i]);
        auto l = b.table(p + "/eta_Q", rep.eta(qx));
        auto r = b.table(p + "/epsilon_R", rep.epsilon(rx));
        auto top = b.table(p + "/Q_eta", rep.Q(rep.eta(x)));
        auto bottom = b.table(p + "/R_epsilon", rep.R(rep.epsilon(x)));
        b.lift(c, l, r, top, bottom);
        summary["chi"][name] = chis[i].comp;
        b.report(object_reports[i]);
    }
    std::vector<std::pair<std::string, PresheafMap>> replaced;
    for (const auto& a : arrows) {
        auto listed = [&](const Presheaf& p) {
            return std::any_of(objects.begin(), objects.end(), [&](const auto& x) { return x.second == p; });
        };
        if (listed(a.second.src) && listed(a.second.dst)) replaced.push_back(a);
    }
    LawReport global = verify_replacement(rep, {}, replaced);
    global.merge(verify_chi(rep, {}, replaced));
    global.merge(check_model_axioms(ms, arrows));
    for (const auto& [cn, f] : arrows)
        for (const auto& [an, g] : arrows) {
            auto c = J->free_coalgebra(f);
            auto a = I->free_algebra(g);
            global.check("two_lift_agreement", cn + ";" + an, [&]() -> std::optional<Witness> {
                std::size_t k = 0;
                for (const auto& sq : enumerate_squares(c.f, a.g)) {
                    if (!ms.two_lift_agreement(c, a, sq)) return Witness{-1, static_cast<int>(k), "square " + std::to_string(k)};
                    ++k;
                }
                return std::nullopt;
            });
        }
    b.report(global);
    return finish(b, "model", in, options_json(opts, ms_spec.trivial), std::move(summary));
}

namespace detail {

inline std::vector<std::pair<std::string, PresheafMap>> target_arrows(const Instance& in) {
    return instance_arrows(in.adjunction->target);
}

/// ρ tables with the unit and multiplication boundary claims; γ likewise.
inline void mate_claims(CertificateBuilder& b, const std::string& prefix, const AwfsAdjunction& aa, const MateData& md,
                        const std::vector<std::pair<std::string, PresheafMap>>& m_arrows,
                        const std::vector<std::pair<std::string, PresheafMap>>& k_arrows) {
    const auto& adj = aa.adjunction();
    for (const auto& [name, f] : m_arrows) {
        auto p = prefix + "/gamma/" + name;
        auto g = b.table(p, md.gamma(f), "K");
        auto tl = b.table(p + "/T_L", adj.T(aa.M().left(f)), "K");
        auto lt = b.table(p + "/L_T", aa.K().left(adj.T(f)), "K");
        auto rt = b.table(p + "/R_T", aa.K().right(adj.T(f)), "K");
        auto tr = b.table(p + "/T_R", adj.T(aa.M().right(f)), "K");
        b.equal({g, tl}, {lt});
        b.equal({rt, g}, {tr});
    }
    for (const auto& [name, k] : k_arrows) {
        auto p = prefix + "/rho/" + name;
        auto r = b.table(p, md.rho(k));
        auto ls = b.table(p + "/L_S", aa.M().left(adj.S(k)));
        auto sl = b.table(p + "/S_L", adj.S(aa.K().left(k)));
        auto sr = b.table(p + "/S_R", adj.S(aa.K().right(k)));
        auto rs = b.table(p + "/R_S", aa.M().right(adj.S(k)));
        b.equal({r, ls}, {sl});
        b.equal({sr, r}, {rs});
    }
}

}  // namespace detail

/// (ψ•φ)^♯ = ψ^♯•φ^♯ for the free lifting functions of the composable pairs
/// (R L g, R g) and (R L L g, R L g).
inline LawReport verify_sharp_composition(const Adjunction& adj, const GeneratorDiagram& J, const GeneratedAwfs& K,
                                          const std::vector<std::pair<std::string, PresheafMap>>& k_arrows) {
    LawReport r;
    const auto& TJ = K.generators();
    for (const auto& [name, g] : k_arrows) {
        auto fa = K.factor(g);
        auto lg = fa.left;
        auto llg = K.left(lg);
        for (const auto& [tag, first, second] : {std::tuple<std::string, const PresheafMap*, const PresheafMap*>{"RL;R", &lg, &g},
                                                 std::tuple<std::string, const PresheafMap*, const PresheafMap*>{"RLL;RL", &llg, &lg}}) {
            r.check("sharp_composition", name + "/" + tag, [&, first = first, second = second]() -> std::optional<Witness> {
                auto phi = K.free_lifting_function(*first);
                auto psi = K.free_lifting_function(*second);
                auto lhs = adjunct_lifting_S(adj, J, compose_lifting(TJ, phi, psi));
                auto rhs = compose_lifting(J, adjunct_lifting_S(adj, J, phi), adjunct_lifting_S(adj, J, psi));
                for (int j = 0; j < J.size(); ++j)
                    for (std::size_t i = 0; i < lhs.squares(j).size(); ++i)
                        if (auto w = map_difference(lhs.fill_at(j, i), rhs.fill_at(j, i))) return w;
                return std::nullopt;
            });
        }
        r.check("sharp_lifting", name, [&]() -> std::optional<Witness> {
            auto rep = check_lifting_function(J, adjunct_lifting_S(adj, J, K.free_lifting_function(g)));
            if (!rep.all_passed()) return rep.failures().front().witness;
            return std::nullopt;
        });
        r.check("flat_lifting", name, [&]() -> std::optional<Witness> {
            auto sharp_lf = adjunct_lifting_S(adj, J, K.free_lifting_function(g));
            auto rep = check_lifting_function(TJ, adjunct_lifting_T(adj, J, TJ, fa.right, sharp_lf));
            if (!rep.all_passed()) return rep.failures().front().witness;
            return std::nullopt;
        });
    }
    return r;
}

/// Mate round trips in both directions on the given arrows.
inline LawReport verify_mate_round_trip(const AwfsAdjunction& aa, const MateData& md,
                                        const std::vector<std::pair<std::string, PresheafMap>>& m_arrows,
                                        const std::vector<std::pair<std::string, PresheafMap>>& k_arrows) {
    LawReport r;
    auto from_gamma = aa.mate_of_gamma(md.gamma);
    auto from_rho = aa.mate_of_rho(md.rho);
    for (const auto& [name, g] : k_arrows)
        r.check("mate_round_trip_rho", name, [&] { return map_difference(from_gamma.rho(g), md.rho(g)); });
    for (const auto& [name, f] : m_arrows)
        r.check("mate_round_trip_gamma", name, [&] { return map_difference(from_rho.gamma(f), md.gamma(f)); });
    return r;
}

/// λ^K(Tj) = T̃(λ^M(j)) and T̃ carries free coalgebras to coalgebras.
inline LawReport verify_unit_compatibility(const AwfsAdjunction& aa, const MateData& md,
                                           const std::vector<std::pair<std::string, PresheafMap>>& m_arrows,
                                           bool generator_units = true) {
    LawReport r;
    const auto& J = aa.M().generators();
    for (int j = 0; j < J.size() && generator_units; ++j)
        r.check("unit_compatibility", J.names[j], [&] {
            return map_difference(aa.lift_T_coalg(aa.M().lambda(j), md).s, aa.K().lambda(aa.tau(j)).s);
        });
    for (const auto& [name, f] : m_arrows) {
        auto c = aa.lift_T_coalg(aa.M().free_coalgebra(f), md);
        r.merge(check_coalgebra_laws(c, aa.K(), "T(free(" + name + "))"));
    }
    return r;
}

/// Transported generators, ρ and γ, lax and colax diagrams, mates and unit compatibility.
inline CommandResult cmd_transport(const Instance& in, const CommandOptions& o) {
    using namespace detail;
    if (!in.adjunction) throw InstanceError("adjunction", "the instance has no adjunction block");
    auto opts = soa_options(in, o);
    auto gname = generators_name(in, o);
    const auto& adj = *in.adjunction->adjunction;
    const auto& J = in.generator(gname, "generators");
    auto M = std::make_shared<GeneratedAwfs>(J, opts);
    auto K = std::make_shared<GeneratedAwfs>(transport_generators(adj, J), opts);
    AwfsAdjunction aa(adj, M, K);
    auto md = aa.mates();
    auto m_arrows = instance_arrows(in.universe);
    auto k_arrows = target_arrows(in);

    const int nm = static_cast<int>(m_arrows.size());
    const int nk = static_cast<int>(k_arrows.size());
    std::vector<LawReport> mr(nm), kr(nk);
    parallel_for(nm, o.threads, [&](int i) {
        std::vector<std::pair<std::string, PresheafMap>> one{m_arrows[i]};
        mr[i] = verify_lax_colax(aa, md, Side::colax, one);
        mr[i].merge(verify_mate_round_trip(aa, md, one, {}));
        mr[i].merge(verify_unit_compatibility(aa, md, one, false));
    });
    parallel_for(nk, o.threads, [&](int i) {
        std::vector<std::pair<std::string, PresheafMap>> one{k_arrows[i]};
        kr[i] = verify_lax_colax(aa, md, Side::lax, one);
        kr[i].merge(verify_mate_round_trip(aa, md, {}, one));
        kr[i].merge(verify_sharp_composition(adj, J, *K, one));
    });

    CertificateBuilder b;
    b.report(verify_adjunction(adj, in.universe.named_presheaves(), in.adjunction->target.named_presheaves(),
                               {in.universe.maps.begin(), in.universe.maps.end()},
                               {in.adjunction->target.maps.begin(), in.adjunction->target.maps.end()}));
    for (auto& r : mr) b.report(r);
    for (auto& r : kr) b.report(r);
    b.report(verify_unit_compatibility(aa, md, {}));
    json summary{{"generators", gname}, {"kind", in.adjunction->kind}, {"transported", json::array()}};
    const auto& TJ = K->generators();
    for (int j = 0; j < TJ.size(); ++j) {
        b.table("transported/" + TJ.names[j], TJ.arrows[j], "K");
        summary["transported"].push_back(TJ.names[j]);
    }
    mate_claims(b, "adjunction", aa, md, m_arrows, k_arrows);
    return finish(b, "transport", in, options_json(opts, gname), std::move(summary));
}

/// The five adjunctions of awfs of an algebraic Quillen adjunction, checked on the instance.
inline CommandResult cmd_quillen_check(const Instance& in, const CommandOptions& o) {
    using namespace detail;
    if (!in.adjunction) throw InstanceError("adjunction", "the instance has no adjunction block");
    if (!in.model) throw InstanceError("model", "the instance has no model block");
    auto opts = soa_options(in, o);
    const auto& adj = *in.adjunction->adjunction;
    const auto& spec = *in.model;
    const auto& Jd = in.generator(spec.trivial, "model");
    const auto& Id = in.generator(spec.cofibrations, "model");
    auto JM = std::make_shared<GeneratedAwfs>(Jd, opts);
    auto IM = std::make_shared<GeneratedAwfs>(Id, opts);
    auto JK = std::make_shared<GeneratedAwfs>(transport_generators(adj, Jd), opts);
    auto IK = std::make_shared<GeneratedAwfs>(transport_generators(adj, Id), opts);
    GeneratorInclusion tau{spec.tau};
    AlgebraicModelStructure mM(JM, IM, tau), mK(JK, IK, tau);
    AwfsAdjunction trivial(adj, JM, JK), cof(adj, IM, IK);
    QuillenData q{mM, mK, trivial, cof, trivial.mates(), cof.mates()};
    auto m_arrows = instance_arrows(in.universe);
    auto k_arrows = target_arrows(in);

    std::vector<std::pair<std::string, CoalgebraStructure>> coalgebras;
    for (const auto& [name, f] : m_arrows) coalgebras.emplace_back("free(" + name + ")", JM->free_coalgebra(f));
    for (int j = 0; j < Jd.size(); ++j) coalgebras.emplace_back("lambda(" + Jd.names[j] + ")", JM->lambda(j));
    std::vector<std::pair<std::string, AlgebraStructure>> algebras;
    for (const auto& [name, g] : k_arrows) algebras.emplace_back("free(" + name + ")", IK->free_algebra(g));

    const int nm = static_cast<int>(m_arrows.size());
    const int nk = static_cast<int>(k_arrows.size());
    std::vector<LawReport> mr(nm), kr(nk);
    parallel_for(nm, o.threads, [&](int i) {
        std::vector<std::pair<std::string, PresheafMap>> one{m_arrows[i]};
        mr[i] = verify_lax_colax(trivial, q.mates_t, Side::colax, one);
        mr[i].merge(verify_lax_colax(cof, q.mates, Side::colax, one));
        mr[i].merge(verify_algebraic_quillen(q, one, {}, {coalgebras[i]}, {}, false));
    });
    parallel_for(nk, o.threads, [&](int i) {
        std::vector<std::pair<std::string, PresheafMap>> one{k_arrows[i]};
        kr[i] = verify_lax_colax(trivial, q.mates_t, Side::lax, one);
        kr[i].merge(verify_lax_colax(cof, q.mates, Side::lax, one));
        kr[i].merge(verify_algebraic_quillen(q, {}, one, {}, {algebras[i]}, false));
    });

    CertificateBuilder b;
    for (auto& r : mr) b.report(r);
    for (auto& r : kr) b.report(r);
    std::vector<std::pair<std::string, CoalgebraStructure>> units(coalgebras.begin() + nm, coalgebras.end());
    b.report(verify_algebraic_quillen(q, {}, {}, units, {}));
    mate_claims(b, "trivial", trivial, q.mates_t, m_arrows, k_arrows);
    mate_claims(b, "cofibrant", cof, q.mates, m_arrows, k_arrows);
    for (const auto& [name, f] : m_arrows) {
        auto p = "left_square/" + name;
        auto tf = adj.T(f);
        auto xk = b.table(p + "/xi_K", mK.xi(tf), "K");
        auto txm = b.table(p + "/T_xi_M", adj.T(mM.xi(f)), "K");
        b.equal({xk, "trivial/gamma/" + name}, {"cofibrant/gamma/" + name, txm});
    }
    for (const auto& [name, g] : k_arrows) {
        auto p = "right_square/" + name;
        auto sxk = b.table(p + "/S_xi_K", adj.S(mK.xi(g)));
        auto xm = b.table(p + "/xi_M", mM.xi(adj.S(g)));
        b.equal({sxk, "trivial/rho/" + name}, {"cofibrant/rho/" + name, xm});
    }
    json summary{{"kind", in.adjunction->kind}, {"trivial", spec.trivial}, {"cofibrations", spec.cofibrations}};
    return finish(b, "quillen-check", in, options_json(opts, spec.trivial), std::move(summary));
}

/// Exhaustive validation; the parse itself performs every check.
inline CommandResult cmd_validate(const json& doc) {
    CommandResult r;
    try {
        auto in = parse_instance(doc);
        r.certificate = json{{"status", "valid"}, {"input_hash", in.hash()}};
    } catch (const InstanceError& e) {
        r.exit_code = kFailure;
        r.message = e.what();
        r.certificate = json{{"status", "invalid"}, {"location", e.location()}, {"message", e.what()}};
    }
    return r;
}

inline CommandResult run_command(const std::string& command, const Instance& in, const CommandOptions& o) {
    try {
        if (command == "soa") return cmd_soa(in, o);
        if (command == "lift") return cmd_lift(in, o);
        if (command == "model") return cmd_model(in, o);
        if (command == "transport") return cmd_transport(in, o);
        if (command == "quillen-check") return cmd_quillen_check(in, o);
    } catch (const NonConvergence& e) {
        CertificateBuilder b;
        auto s = detail::soa_options(in, o);
        auto opts = json{{"variant", variant_name(s.variant)}, {"max_steps", s.max_steps}, {"max_elements", s.max_elements}};
        json summary{{"status", "nonconvergence"}, {"trace", e.trace}};
        return CommandResult{b.build(command, in.hash(), opts, summary), kNonConvergence, e.what()};
    } catch (const MonicityViolation& e) {
        CertificateBuilder b;
        auto opts = json{{"variant", variant_name(detail::soa_options(in, o).variant)}};
        json summary{{"status", "monicity_violation"}, {"message", e.what()}};
        return CommandResult{b.build(command, in.hash(), opts, summary), kMonicity, e.what()};
    }
    throw InstanceError("command", "unknown command '" + command + "'");
}

}  // namespace awfs
