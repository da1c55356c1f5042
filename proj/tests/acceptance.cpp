// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <iostream>
#include <numeric>
#include <sstream>

#include "support.hpp"

using namespace awfs;
using namespace awfs::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

Outcome fail(std::string why) { return Outcome{false, std::move(why)}; }

Table iota(int n, int start = 0) {
    Table t(n);
    std::iota(t.begin(), t.end(), start);
    return t;
}

std::vector<std::pair<std::string, PresheafMap>> all_maps(const Universe& u) { return {u.maps.begin(), u.maps.end()}; }

std::shared_ptr<GeneratedAwfs> generated(const Instance& in, const std::string& name) {
    SoaOptions o;
    o.variant = in.options.variant;
    o.max_steps = in.options.max_steps;
    o.max_elements = in.options.max_elements;
    return std::make_shared<GeneratedAwfs>(in.generator(name, "acceptance"), o);
}

bool same_fills(const LiftingFunction& a, const LiftingFunction& b) {
    if (a.generator_count() != b.generator_count()) return false;
    for (int j = 0; j < a.generator_count(); ++j) {
        if (a.squares(j).size() != b.squares(j).size()) return false;
        for (std::size_t i = 0; i < a.squares(j).size(); ++i)
            if (!(a.fill_at(j, i) == b.fill_at(j, i))) return false;
    }
    return true;
}

// 1. J = {∅ → 1} on finite sets: one stage, E f = dom f ⊔ cod f, valid free lifting function.
Outcome split_epi() {
    auto gen = GeneratorDiagram::discrete({"j"}, {fn(0, 1, {})});
    GeneratedAwfs F(gen);
    int arrows = 0, squares = 0;
    for (int n = 0; n <= 4; ++n)
        for (int m = 0; m <= 4; ++m)
            for (const auto& t : all_functions(n, m)) {
                auto f = fn(n, m, t);
                const auto& fac = F.factorization(f);
                std::ostringstream id;
                id << n << "->" << m << " #" << arrows;
                std::vector<int> trace = m == 0 ? std::vector<int>{n} : std::vector<int>{n, n + m};
                if (fac.trace != trace) return fail(id.str() + ": unexpected stage trace");
                auto rt = t;
                for (int c = 0; c < m; ++c) rt.push_back(c);
                if (!(fac.left == fn(n, n + m, iota(n)))) return fail(id.str() + ": left factor is not the coproduct inclusion");
                if (!(fac.right == fn(n + m, m, rt))) return fail(id.str() + ": right factor is not [f, 1]");
                auto lf = F.free_lifting_function(f);
                auto report = check_lifting_function(gen, lf);
                if (!report.all_passed()) return fail(id.str() + ": " + report.summary());
                auto expected = brute_squares(gen.arrows[0], fac.right);
                if (expected.size() != lf.squares(0).size()) return fail(id.str() + ": square enumeration differs from oracle");
                for (std::size_t i = 0; i < lf.squares(0).size(); ++i) {
                    auto fills = brute_fillers(lf.squares(0)[i]);
                    if (fills.empty()) return fail(id.str() + ": right factor lacks a lift");
                    if (std::find(fills.begin(), fills.end(), lf.fill_at(0, i).comp) == fills.end())
                        return fail(id.str() + ": free fill is not an oracle filler");
                    ++squares;
                }
                ++arrows;
            }
    return Outcome{true, std::to_string(arrows) + " arrows, " + std::to_string(squares) + " squares"};
}

// 2. J = {1 → 2}, f = id₁, ten steps: NonConvergence with trace 1..11.
Outcome divergence() {
    SoaOptions o;
    o.max_steps = 10;
    GeneratedAwfs F(GeneratorDiagram::discrete({"j"}, {fn(1, 2, {0})}), o);
    std::vector<int> expected = iota(11, 1);
    try {
        F.factorization(fn(1, 1, {0}));
        return fail("factorization converged");
    } catch (const NonConvergence& e) {
        if (e.trace != expected) return fail("wrong trace");
    }
    auto in = fixture("FIX-DIV");
    CommandOptions co;
    co.max_steps = 10;
    auto r = run_command("soa", in, co);
    if (r.exit_code != kNonConvergence) return fail("soa command exit " + std::to_string(r.exit_code));
    if (r.certificate.at("summary").at("arrows").at("id1").at("trace") != json(expected))
        return fail("soa command reports a different trace");
    return Outcome{true, "trace [1..11], soa exit 2"};
}

// 3. verify_awfs on FIX-M and FIX-G; every single-entry mutation of δ or μ is caught.
Outcome law_suite() {
    std::size_t entries = 0, mutations = 0;
    for (const char* name : {"FIX-M", "FIX-G"}) {
        auto in = fixture(name);
        auto arrows = all_maps(in.universe);
        for (const auto& [gname, gen] : in.generators) {
            auto F = generated(in, gname);
            auto probes = arrow_probes(arrows);
            for (auto& p : square_probes(arrows, 2)) probes.push_back(std::move(p));
            auto report = verify_awfs(*F, probes);
            if (!report.all_passed()) return fail(std::string(name) + "/" + gname + ": " + report.summary());
            entries += report.entries().size();
            for (const auto& [an, f] : arrows) {
                for (auto& d : single_entry_mutations(F->delta(f))) {
                    MutatedAwfs m(*F, f, d, std::nullopt);
                    LawReport r;
                    verify_arrow_laws(m, an, f, r);
                    if (r.all_passed()) return fail(std::string(name) + "/" + gname + ": δ mutation on " + an + " not caught");
                    ++mutations;
                }
                for (auto& u : single_entry_mutations(F->mu(f))) {
                    MutatedAwfs m(*F, f, std::nullopt, u);
                    LawReport r;
                    verify_arrow_laws(m, an, f, r);
                    if (r.all_passed()) return fail(std::string(name) + "/" + gname + ": μ mutation on " + an + " not caught");
                    ++mutations;
                }
            }
        }
    }
    return Outcome{true, std::to_string(entries) + " law checks, " + std::to_string(mutations) + " mutations caught"};
}

// 4. Algebras and lifting functions correspond, compatibly with composition.
Outcome freeness() {
    auto in = fixture("FIX-M");
    auto F = generated(in, in.default_generators());
    const auto& J = F->generators();
    std::vector<std::pair<std::string, AlgebraStructure>> algebras;
    int round_trips = 0;
    for (const auto& [name, f] : all_maps(in.universe)) {
        auto lf = F->free_lifting_function(f);
        auto alg = F->lifting_function_to_algebra(lf);
        if (!(alg.t == F->mu(f))) return fail(name + ": algebra of the free lifting function is not μ");
        if (!same_fills(F->algebra_to_lifting_function(F->free_algebra(f)), lf))
            return fail(name + ": lifting function of the free algebra differs");
        ++round_trips;
        algebras.emplace_back("free(" + name + ")", F->free_algebra(f));
        algebras.emplace_back("free(L" + name + ")", F->free_algebra(F->left(f)));
        if (auto a = find_algebra(f, *F)) {
            auto back = F->lifting_function_to_algebra(F->algebra_to_lifting_function(*a));
            if (!(back.t == a->t)) return fail(name + ": algebra round trip differs");
            algebras.emplace_back(name, *a);
        }
    }
    int pairs = 0;
    for (const auto& [an, a] : algebras)
        for (const auto& [bn, b] : algebras) {
            if (!(a.g.dst == b.g.src)) continue;
            auto composite = compose_algebras_free(a, b, *F);
            auto lifted = compose_lifting(J, F->algebra_to_lifting_function(a), F->algebra_to_lifting_function(b));
            if (!check_algebra_laws(composite, *F).all_passed()) return fail(an + ";" + bn + ": composite is not an algebra");
            if (!same_fills(F->algebra_to_lifting_function(composite), lifted))
                return fail(an + ";" + bn + ": composite algebra and composite lifting function differ");
            if (!(F->lifting_function_to_algebra(lifted).t == composite.t))
                return fail(an + ";" + bn + ": algebra of the composite lifting function differs");
            ++pairs;
        }
    if (pairs == 0) return fail("no composable pairs");
    return Outcome{true, std::to_string(round_trips) + " round trips, " + std::to_string(pairs) + " composable pairs"};
}

// 5. J_A-factorizations of diagrams over A = 2 agree with pointwise J-factorizations.
Outcome pointwise() {
    auto in = fixture("FIX-M");
    const auto& J = in.generator(in.default_generators(), "acceptance");
    const auto& C = in.universe.base;
    auto A = FiniteCategory::walking_arrow();
    auto B = diagram_base(A, *C);
    GeneratedAwfs ja(pointwise_generators(J, A, B));
    GeneratedAwfs gj(J);
    const int am = *A.find_morphism("a");
    auto diagram = [&](const PresheafMap& h) {
        return Presheaf::make(B, {h.src.sizes[0], h.dst.sizes[0]}, {{am, h.comp[0]}});
    };
    std::vector<std::pair<std::string, PresheafMap>> alphas;
    std::vector<std::pair<std::string, Presheaf>> diagrams;
    for (int x0 = 0; x0 <= 2; ++x0)
        for (int x1 = 0; x1 <= 2; ++x1)
            for (const auto& t : all_functions(x0, x1))
                diagrams.emplace_back("d" + std::to_string(diagrams.size()), diagram(fn(x0, x1, t)));
    for (auto& a : maps_between(diagrams)) alphas.push_back(std::move(a));
    for (const auto& [name, f] : all_maps(in.universe)) {
        auto idx = diagram(identity_map(f.src)), idy = diagram(identity_map(f.dst));
        alphas.emplace_back(name + "@both", PresheafMap{idx, idy, {f.comp[0], f.comp[0]}});
        alphas.emplace_back(name + "@target", PresheafMap{idx, diagram(f), {identity_map(f.src).comp[0], f.comp[0]}});
    }
    std::size_t checks = 0;
    for (const auto& [name, alpha] : alphas) {
        if (auto w = alpha.validate()) return fail(name + ": test diagram map is not natural");
        auto r = compare_pointwise(ja, gj, A, C, name, alpha);
        if (!r.all_passed()) return fail(r.summary());
        checks += r.entries().size();
    }
    return Outcome{true, std::to_string(alphas.size()) + " diagram maps, " + std::to_string(checks) + " checks"};
}

AlgebraicModelStructure model_of(const Instance& in) {
    const auto& spec = *in.model;
    return AlgebraicModelStructure(generated(in, spec.trivial), generated(in, spec.cofibrations),
                                   GeneratorInclusion{spec.tau}, in.weq());
}

// 6. ξ is an awfs morphism, two lifts agree, and on FIX-G ξ is injective with lawful cellular coalgebras.
Outcome comparison() {
    std::size_t lifts = 0;
    {
        auto in = fixture("FIX-M");
        auto ms = model_of(in);
        auto arrows = all_maps(in.universe);
        for (const auto& [name, f] : arrows) {
            auto x = ms.xi(f);
            if (!(x == identity_map(ms.trivial().middle(f)))) return fail(name + ": ξ is not the identity when J = I");
            if (!(ms.xi_by_cells(f) == x)) return fail(name + ": cellular ξ differs");
        }
        auto probes = arrow_probes(arrows);
        for (auto& p : square_probes(arrows, 2)) probes.push_back(std::move(p));
        auto r = verify_awfs_morphism(ms.comparison(), ms.trivial(), ms.cofibrant(), probes);
        if (!r.all_passed()) return fail("FIX-M: " + r.summary());
        for (const auto& [fn_, f] : arrows)
            for (const auto& [gn, g] : arrows) {
                auto c = ms.trivial().free_coalgebra(f);
                auto a = ms.cofibrant().free_algebra(g);
                for (const auto& sq : enumerate_squares(c.f, a.g)) {
                    if (!ms.two_lift_agreement(c, a, sq)) return fail("FIX-M: two lifts differ for " + fn_ + ", " + gn);
                    ++lifts;
                }
            }
    }
    std::size_t injective_checks = 0;
    {
        auto in = fixture("FIX-G");
        auto ms = model_of(in);
        auto arrows = all_maps(in.universe);
        for (const auto& [name, f] : arrows) {
            auto x = ms.xi(f);
            if (!injective(x.comp, x.dst) || !is_injective(x)) return fail("FIX-G: ξ of " + name + " is not injective");
            auto r = check_coalgebra_laws(ms.cellular_coalgebra(f), ms.cofibrant(), name);
            if (!r.all_passed()) return fail("FIX-G: " + r.summary());
            ++injective_checks;
        }
        auto r = verify_awfs_morphism(ms.comparison(), ms.trivial(), ms.cofibrant(), arrow_probes(arrows));
        if (!r.all_passed()) return fail("FIX-G: " + r.summary());
    }
    return Outcome{true, std::to_string(lifts) + " two-lift squares, " + std::to_string(injective_checks) + " injective ξ"};
}

// 7. Replacement (co)monad laws and χ on FIX-M objects of size ≤ 3; χ_∅ and χ_1 tables.
Outcome replacement() {
    auto in = fixture("FIX-M");
    auto ms = model_of(in);
    Replacement rep(ms);
    std::vector<std::pair<std::string, Presheaf>> objects;
    for (const auto& [name, p] : in.universe.presheaves)
        if (p.total() <= 3) objects.emplace_back(name, p);
    auto maps = maps_between(objects);
    auto r = verify_replacement(rep, objects, maps);
    r.merge(verify_chi(rep, objects, maps));
    if (!r.all_passed()) return fail(r.summary());
    auto empty = set(0), one = set(1);
    if (!(rep.Q(empty) == empty) || !(rep.R(empty) == one) || !(rep.Q(rep.R(empty)) == one)) return fail("replacements of ∅");
    if (!(rep.chi(empty) == fn(1, 1, {0}))) return fail("χ_∅ is not the identity of 1");
    if (!(rep.Q(one) == one) || !(rep.R(one) == set(2)) || !(rep.R(rep.Q(one)) == set(2)) || !(rep.Q(rep.R(one)) == set(2)))
        return fail("replacements of 1");
    if (!(rep.chi(one) == fn(2, 2, {0, 1}))) return fail("χ_1 is not the identity of 2");
    return Outcome{true, std::to_string(objects.size()) + " objects, " + std::to_string(maps.size()) + " maps, " +
                             std::to_string(r.entries().size()) + " checks"};
}

// Composable right maps on the K side with oracle-found algebras: ♯ preserves composition.
LawReport sharp_on_algebra_pairs(const Adjunction& adj, const GeneratorDiagram& J, const GeneratedAwfs& K,
                                 const std::vector<std::pair<std::string, PresheafMap>>& k_arrows) {
    LawReport r;
    std::vector<std::pair<std::string, LiftingFunction>> lfs;
    for (const auto& [name, g] : k_arrows)
        if (auto a = find_algebra(g, K)) lfs.emplace_back(name, K.algebra_to_lifting_function(*a));
    for (const auto& [an, phi] : lfs)
        for (const auto& [bn, psi] : lfs) {
            if (!(phi.target().dst == psi.target().src)) continue;
            r.check("sharp_composition", an + ";" + bn, [&, &phi = phi, &psi = psi]() -> std::optional<Witness> {
                auto lhs = adjunct_lifting_S(adj, J, compose_lifting(K.generators(), phi, psi));
                auto rhs = compose_lifting(J, adjunct_lifting_S(adj, J, phi), adjunct_lifting_S(adj, J, psi));
                if (!same_fills(lhs, rhs)) return Witness{-1, -1, "composites differ"};
                return std::nullopt;
            });
        }
    return r;
}

// 8. Transport along the identity adjunction and Lan ⊣ res.
Outcome transport() {
    std::ostringstream summary;
    for (const char* name : {"FIX-M", "FIX-LAN", "FIX-LAN1"}) {
        auto in = fixture(name);
        const auto& adj = *in.adjunction->adjunction;
        const auto& spec = *in.model;
        const auto& Jd = in.generator(spec.trivial, "acceptance");
        const auto& Id = in.generator(spec.cofibrations, "acceptance");
        auto JM = generated(in, spec.trivial);
        auto IM = generated(in, spec.cofibrations);
        auto JK = std::make_shared<GeneratedAwfs>(transport_generators(adj, Jd));
        auto IK = std::make_shared<GeneratedAwfs>(transport_generators(adj, Id));
        GeneratorInclusion tau{spec.tau};
        AlgebraicModelStructure mM(JM, IM, tau), mK(JK, IK, tau);
        AwfsAdjunction trivial(adj, JM, JK), cof(adj, IM, IK);
        QuillenData q{mM, mK, trivial, cof, trivial.mates(), cof.mates()};
        auto m_arrows = detail::instance_arrows(in.universe);
        auto k_arrows = detail::target_arrows(in);
        const auto& target = in.adjunction->target;

        LawReport r = verify_adjunction(adj, in.universe.named_presheaves(), target.named_presheaves(),
                                        all_maps(in.universe), all_maps(target));
        for (const AwfsAdjunction* aa : {&trivial, &cof}) {
            const auto& md = aa == &trivial ? q.mates_t : q.mates;
            r.merge(verify_sharp_composition(adj, aa->M().generators(), aa->K(), k_arrows));
            r.merge(sharp_on_algebra_pairs(adj, aa->M().generators(), aa->K(), k_arrows));
            r.merge(verify_lax_colax(*aa, md, Side::lax, k_arrows));
            r.merge(verify_lax_colax(*aa, md, Side::colax, m_arrows));
            r.merge(verify_mate_round_trip(*aa, md, m_arrows, k_arrows));
            r.merge(verify_unit_compatibility(*aa, md, m_arrows));
        }
        std::vector<std::pair<std::string, CoalgebraStructure>> coalgebras;
        for (const auto& [n, f] : m_arrows) coalgebras.emplace_back("free(" + n + ")", JM->free_coalgebra(f));
        for (int j = 0; j < Jd.size(); ++j) coalgebras.emplace_back("lambda(" + Jd.names[j] + ")", JM->lambda(j));
        std::vector<std::pair<std::string, AlgebraStructure>> algebras;
        for (const auto& [n, g] : k_arrows) algebras.emplace_back("free(" + n + ")", IK->free_algebra(g));
        r.merge(verify_algebraic_quillen(q, m_arrows, k_arrows, coalgebras, algebras));
        if (!r.all_passed()) return fail(std::string(name) + ": " + r.summary());
        summary << name << " " << r.entries().size() << " checks; ";
    }
    return Outcome{true, summary.str()};
}

// 9. Certificates verify, every single flipped entry is rejected, output is thread independent.
Outcome certificates() {
    std::size_t certs = 0, flips = 0;
    for (const char* name : {"FIX-M", "FIX-G", "FIX-LAN", "FIX-LAN1", "FIX-DIV"}) {
        auto in = fixture(name);
        for (const char* command : {"soa", "lift", "model", "transport", "quillen-check"}) {
            std::string where = std::string(command) + " " + name;
            std::vector<std::string> dumps;
            json cert;
            try {
                for (int threads : {1, 2, 8}) {
                    CommandOptions o;
                    o.threads = threads;
                    auto r = run_command(command, in, o);
                    dumps.push_back(canonical_dump(r.certificate));
                    cert = r.certificate;
                }
            } catch (const InstanceError&) {
                continue;  // the fixture lacks the block this command needs
            }
            if (dumps[0] != dumps[1] || dumps[0] != dumps[2]) return fail(where + ": output depends on the thread count");
            if (auto e = verify_certificate(in, cert)) return fail(where + ": rejected: " + *e);
            ++certs;
            for (const auto& [tname, t] : cert.at("tables").items()) {
                auto flip_all = [&](const json::json_pointer& ptr) -> std::optional<std::string> {
                    const auto& rows = cert.at(ptr);
                    for (std::size_t a = 0; a < rows.size(); ++a)
                        for (std::size_t b = 0; b < rows[a].size(); ++b) {
                            auto bad = cert;
                            auto& v = bad.at(ptr)[a][b];
                            v = v.get<int>() + 1;
                            if (!verify_certificate(in, bad)) return where + ": flip in " + ptr.to_string() + " accepted";
                            ++flips;
                        }
                    return std::nullopt;
                };
                auto root = json::json_pointer("/tables") / tname;
                for (auto ptr : {root / "components", root / "src" / "actions", root / "dst" / "actions"})
                    if (auto e = flip_all(ptr)) return fail(*e);
            }
        }
    }
    return Outcome{true, std::to_string(certs) + " certificates, " + std::to_string(flips) + " flips rejected"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
        {"split-epi awfs on finite sets", split_epi},
        {"divergence detection", divergence},
        {"awfs law suite and mutations", law_suite},
        {"algebraic freeness round trip", freeness},
        {"pointwise generation over 2", pointwise},
        {"comparison map", comparison},
        {"replacement and chi", replacement},
        {"transport and Quillen conditions", transport},
        {"certificate integrity", certificates},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
                  << o.detail << " (" << ms << " ms)" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
