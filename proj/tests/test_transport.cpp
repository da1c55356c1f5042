#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace awfs;
using namespace awfs::testing;

namespace {

BasePtr arrow_base() {
    static const BasePtr b = make_base(FiniteCategory::walking_arrow());
    return b;
}

BasePtr discrete_base() {
    static const BasePtr b = make_base(FiniteCategory::discrete({"0", "1"}));
    return b;
}

/// Every presheaf on `base` whose sizes are all at most `k`, by brute force over action tables.
std::vector<Presheaf> all_presheaves(const BasePtr& base, int k) {
    std::vector<Presheaf> out;
    const int no = base->object_count();
    std::vector<int> movers;
    for (int m = 0; m < base->morphism_count(); ++m)
        if (!base->is_identity(m)) movers.push_back(m);
    std::vector<int> sizes(no, 0);
    while (true) {
        std::vector<std::vector<Table>> choices;
        for (int m : movers) {
            const auto& mor = base->morphism(m);
            choices.push_back(all_functions(sizes[mor.dst], sizes[mor.src]));
        }
        std::vector<std::size_t> pick(movers.size(), 0);
        bool any = std::all_of(choices.begin(), choices.end(), [](const auto& c) { return !c.empty(); });
        while (any) {
            std::map<int, Table> tables;
            for (std::size_t i = 0; i < movers.size(); ++i) tables[movers[i]] = choices[i][pick[i]];
            auto p = Presheaf::make(base, sizes, tables);
            if (!p.validate()) out.push_back(p);
            std::size_t i = 0;
            while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
            if (i == pick.size()) break;
        }
        int o = 0;
        while (o < no && ++sizes[o] > k) sizes[o++] = 0;
        if (o == no) break;
    }
    return out;
}

/// y(c)(a) = hom(a, c), acted on by precomposition.
Presheaf representable(const BasePtr& base, int c) {
    const auto& C = *base;
    std::vector<int> sizes;
    for (int a = 0; a < C.object_count(); ++a) sizes.push_back(static_cast<int>(C.hom(a, c).size()));
    std::map<int, Table> tables;
    for (int m = 0; m < C.morphism_count(); ++m) {
        const auto& mor = C.morphism(m);
        auto from = C.hom(mor.dst, c), to = C.hom(mor.src, c);
        Table t;
        for (int k : from) t.push_back(static_cast<int>(std::find(to.begin(), to.end(), C.compose(k, m)) - to.begin()));
        tables[m] = t;
    }
    return Presheaf::make(base, sizes, tables);
}

std::vector<BaseFunctor> sample_functors() {
    auto A = arrow_base();
    auto G = graph_base();
    auto T = finset_base();
    return {
        BaseFunctor{discrete_base(), A, {0, 1}, {0, 1}},
        BaseFunctor{T, A, {0}, {0}},
        BaseFunctor{T, A, {1}, {1}},
        BaseFunctor{A, G, {0, 1}, {0, 1, *G->find_morphism("s")}},
        BaseFunctor{A, G, {0, 1}, {0, 1, *G->find_morphism("t")}},
        BaseFunctor::identity(A),
        BaseFunctor{A, A, {0, 0}, {0, 0, 0}},
        BaseFunctor{A, T, {0, 0}, {0, 0, 0}},
    };
}

std::vector<std::pair<std::string, Presheaf>> named(const std::vector<Presheaf>& ps) {
    std::vector<std::pair<std::string, Presheaf>> out;
    for (std::size_t i = 0; i < ps.size(); ++i) out.emplace_back("p" + std::to_string(i), ps[i]);
    return out;
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

}  // namespace

TEST(BaseFunctor, ValidateRejections) {
    ASSERT_EQ(arrow_base()->identity(0), 0);
    ASSERT_EQ(arrow_base()->identity(1), 1);
    for (const auto& u : sample_functors()) EXPECT_EQ(u.validate(), std::nullopt);
    auto A = arrow_base();
    EXPECT_NE((BaseFunctor{A, A, {0}, {0, 1, 2}}).validate(), std::nullopt);
    EXPECT_NE((BaseFunctor{A, A, {0, 1}, {0, 1}}).validate(), std::nullopt);
    EXPECT_NE((BaseFunctor{A, A, {0, 2}, {0, 1, 2}}).validate(), std::nullopt);
    EXPECT_NE((BaseFunctor{A, A, {1, 0}, {1, 0, 2}}).validate(), std::nullopt);
    EXPECT_EQ((BaseFunctor{A, A, {0, 0}, {0, 0, 0}}).validate(), std::nullopt);
    EXPECT_NE((BaseFunctor{A, A, {0, 0}, {0, 0, 2}}).validate(), std::nullopt);
    EXPECT_NE((BaseFunctor{A, A, {0, 1}, {0, 1, 0}}).validate(), std::nullopt);
    EXPECT_THROW(LanRestriction(BaseFunctor{A, A, {0, 1}, {0, 1, 0}}), ValidationError);
}

TEST(LanRestriction, HomBijectionByCounting) {
    int pairs = 0;
    for (const auto& u : sample_functors()) {
        LanRestriction adj(u);
        auto xs = all_presheaves(u.from, 2);
        auto ys = all_presheaves(u.to, 2);
        for (const auto& x : xs) {
            auto tx = adj.T(x);
            ASSERT_EQ(tx.validate(), std::nullopt);
            auto i = adj.unit(x);
            ASSERT_EQ(i.validate(), std::nullopt);
            for (const auto& y : ys) {
                auto left = brute_maps(tx, y);
                auto right = brute_maps(x, adj.S(y));
                ASSERT_EQ(left.size(), right.size());
                std::set<std::vector<Table>> transposes;
                for (auto& h : left) transposes.insert(after(adj.S(PresheafMap{tx, y, h}).comp, i.comp));
                EXPECT_EQ(transposes.size(), right.size());
                ++pairs;
            }
        }
    }
    EXPECT_GT(pairs, 500);
}

TEST(LanRestriction, RepresentablesGoToRepresentables) {
    for (const auto& u : sample_functors()) {
        LanRestriction adj(u);
        for (int c = 0; c < u.from->object_count(); ++c) {
            auto t = adj.T(representable(u.from, c));
            auto y = representable(u.to, u.object_map[c]);
            EXPECT_TRUE(find_isomorphism(t, y).has_value()) << "object " << c;
        }
    }
}

TEST(LanRestriction, AdjunctionLaws) {
    for (const auto& u : sample_functors()) {
        LanRestriction adj(u);
        auto xs = named(all_presheaves(u.from, 2));
        auto ys = named(all_presheaves(u.to, 1));
        std::vector<std::pair<std::string, Presheaf>> small_x, small_y;
        for (const auto& p : xs)
            if (p.second.total() <= 2) small_x.push_back(p);
        for (const auto& p : ys)
            if (p.second.total() <= 2) small_y.push_back(p);
        auto r = verify_adjunction(adj, xs, ys, maps_between(small_x), maps_between(small_y));
        EXPECT_TRUE(r.all_passed()) << r.summary();
    }
    IdentityAdjunction id(finset_base());
    std::vector<std::pair<std::string, Presheaf>> sets{{"0", set(0)}, {"1", set(1)}, {"2", set(2)}};
    EXPECT_TRUE(verify_adjunction(id, sets, sets, maps_between(sets), maps_between(sets)).all_passed());
}

TEST(TabulatedAdjunction, CorruptedUnitIsCaught) {
    std::vector<std::pair<std::string, Presheaf>> sets{{"0", set(0)}, {"1", set(1)}, {"2", set(2)}};
    auto maps = maps_between(sets);
    auto build = [&](bool corrupt) {
        TabulatedAdjunction t(finset_base(), finset_base());
        for (const auto& [n, x] : sets) {
            t.add_T(x, x);
            t.add_S(x, x);
            t.add_unit(x, identity_map(x));
            t.add_counit(x, identity_map(x));
        }
        for (const auto& [n, h] : maps) {
            t.add_T(h, h);
            t.add_S(h, h);
        }
        if (corrupt) t.add_unit(set(2), fn(2, 2, {1, 0}));
        return t;
    };
    auto good = build(false);
    EXPECT_TRUE(verify_adjunction(good, sets, sets, maps, maps).all_passed());
    auto bad = build(true);
    auto r = verify_adjunction(bad, sets, sets, maps, maps);
    EXPECT_TRUE(r.failed("triangle_left"));
    EXPECT_TRUE(r.failed("unit_naturality"));
    EXPECT_THROW(good.T(set(3)), ValidationError);
}

TEST(AwfsAdjunction, GeneratorMapMustMatchTransport) {
    IdentityAdjunction id(finset_base());
    auto j = fn(0, 1, {});
    auto M = std::make_shared<GeneratedAwfs>(GeneratorDiagram::discrete({"j"}, {j}));
    auto K = std::make_shared<GeneratedAwfs>(GeneratorDiagram::discrete({"j", "k"}, {j, fn(1, 2, {0})}));
    EXPECT_NO_THROW(AwfsAdjunction(id, M, K));
    EXPECT_NO_THROW(AwfsAdjunction(id, M, K, {0}));
    EXPECT_THROW(AwfsAdjunction(id, M, K, {1}), ShapeMismatch);
    EXPECT_THROW(AwfsAdjunction(id, M, K, {0, 0}), ShapeMismatch);
    EXPECT_THROW(AwfsAdjunction(id, M, K, {2}), ShapeMismatch);
}

class LanFixture : public ::testing::Test {
protected:
    void SetUp() override {
        in = fixture("FIX-LAN");
        adj = in.adjunction->adjunction.get();
        const auto& J = in.generator(in.model->trivial, "test");
        M = std::make_shared<GeneratedAwfs>(J);
        K = std::make_shared<GeneratedAwfs>(transport_generators(*adj, J));
        m_arrows = detail::instance_arrows(in.universe);
        k_arrows = detail::target_arrows(in);
    }

    Instance in;
    const Adjunction* adj = nullptr;
    std::shared_ptr<GeneratedAwfs> M, K;
    std::vector<std::pair<std::string, PresheafMap>> m_arrows, k_arrows;
};

TEST_F(LanFixture, AdjunctLiftingRoundTrip) {
    const auto& J = M->generators();
    const auto& TJ = K->generators();
    int round_trips = 0;
    std::vector<PresheafMap> targets;
    for (const auto& [n, g] : k_arrows) targets.push_back(g);
    for (const auto& [n, g] : k_arrows) targets.push_back(K->right(g));
    for (const auto& g : targets) {
        auto alg = find_algebra(g, *K);
        if (!alg) continue;
        auto psi = K->algebra_to_lifting_function(*alg);
        auto phi = adjunct_lifting_S(*adj, J, psi);
        EXPECT_EQ(phi.target(), adj->S(g));
        EXPECT_TRUE(check_lifting_function(J, phi).all_passed());
        auto back = adjunct_lifting_T(*adj, J, TJ, g, phi);
        EXPECT_TRUE(same_fills(back, psi));
        ++round_trips;
    }
    EXPECT_GE(round_trips, 2);
}

TEST_F(LanFixture, LaxAndColaxHoldAndCorruptedRhoFails) {
    AwfsAdjunction aa(*adj, M, K);
    auto md = aa.mates();
    EXPECT_TRUE(verify_lax_colax(aa, md, Side::lax, k_arrows).all_passed());
    EXPECT_TRUE(verify_lax_colax(aa, md, Side::colax, m_arrows).all_passed());

    int caught = 0, tried = 0;
    for (const auto& [name, g] : k_arrows) {
        auto rho = aa.rho(g);
        auto key = arrow_key(g);
        for (const auto& bad : single_entry_mutations(rho)) {
            auto corrupted = aa.mate_of_rho([&](const PresheafMap& h) { return arrow_key(h) == key ? bad : aa.rho(h); });
            auto r = verify_lax_colax(aa, corrupted, Side::lax, {{name, g}});
            caught += !r.all_passed();
            ++tried;
        }
    }
    EXPECT_GT(tried, 0);
    EXPECT_EQ(caught, tried);
}

TEST_F(LanFixture, AlgebraicQuillen) {
    const auto& spec = *in.model;
    const auto& I = in.generator(spec.cofibrations, "test");
    auto IM = std::make_shared<GeneratedAwfs>(I);
    auto IK = std::make_shared<GeneratedAwfs>(transport_generators(*adj, I));
    GeneratorInclusion tau{spec.tau};
    AlgebraicModelStructure mM(M, IM, tau), mK(K, IK, tau);
    AwfsAdjunction trivial(*adj, M, K), cof(*adj, IM, IK);
    QuillenData q{mM, mK, trivial, cof, trivial.mates(), cof.mates()};
    std::vector<std::pair<std::string, CoalgebraStructure>> coalgebras;
    for (const auto& [n, f] : m_arrows) coalgebras.emplace_back(n, M->free_coalgebra(f));
    std::vector<std::pair<std::string, AlgebraStructure>> algebras;
    for (const auto& [n, g] : k_arrows) algebras.emplace_back(n, IK->free_algebra(g));
    auto r = verify_algebraic_quillen(q, m_arrows, k_arrows, coalgebras, algebras);
    EXPECT_TRUE(r.all_passed()) << r.summary();
}

TEST(Pointwise, ProjectiveGeneratorsAreNotPointwise) {
    auto J = GeneratorDiagram::discrete({"j"}, {fn(0, 1, {})});
    auto A = FiniteCategory::walking_arrow();
    auto C = finset_base();
    auto B = diagram_base(A, *C);
    GeneratedAwfs pointwise(pointwise_generators(J, A, B));
    GeneratedAwfs projective(projective_generators(J, A, B));
    GeneratedAwfs gj(J);
    const int am = *A.find_morphism("a");
    auto diagram = [&](const PresheafMap& h) {
        return Presheaf::make(B, {h.src.sizes[0], h.dst.sizes[0]}, {{am, h.comp[0]}});
    };
    std::vector<std::pair<std::string, Presheaf>> diagrams;
    for (int x0 = 0; x0 <= 2; ++x0)
        for (int x1 = 0; x1 <= 2; ++x1)
            for (const auto& t : all_functions(x0, x1))
                diagrams.emplace_back("d" + std::to_string(diagrams.size()), diagram(fn(x0, x1, t)));
    int projective_failures = 0, total = 0;
    for (const auto& [name, alpha] : maps_between(diagrams)) {
        EXPECT_TRUE(compare_pointwise(pointwise, gj, A, C, name, alpha).all_passed()) << name;
        projective_failures += !compare_pointwise(projective, gj, A, C, name, alpha).all_passed();
        ++total;
    }
    EXPECT_GT(projective_failures, 0);
    EXPECT_LT(projective_failures, total);
}

TEST(Pointwise, EvaluationAndAction) {
    auto A = FiniteCategory::walking_arrow();
    auto C = finset_base();
    auto B = diagram_base(A, *C);
    const int am = *A.find_morphism("a");
    auto p = Presheaf::make(B, {3, 2}, {{am, {1, 0, 1}}});
    EXPECT_EQ(evaluate_at(p, A, C, 0), set(3));
    EXPECT_EQ(evaluate_at(p, A, C, 1), set(2));
    EXPECT_EQ(diagram_action(p, A, C, am), fn(3, 2, {1, 0, 1}));
}
