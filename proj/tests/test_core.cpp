#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace awfs;
using namespace awfs::testing;

namespace {

// 0 → 1 → 2 with the composite named "gf".
FiniteCategory chain() { return FiniteCategory::generate({"0", "1", "2"}, {{"f", 0, 1}, {"g", 1, 2}, {"gf", 0, 2}}, {{"g", "f", "gf"}}); }

std::vector<Presheaf> sample_graphs() {
    return {make_graph(0, {}),
            make_graph(1, {}),
            make_graph(1, {{0, 0}}),
            make_graph(2, {{0, 1}}),
            make_graph(2, {{0, 1}, {1, 0}}),
            make_graph(3, {{0, 1}, {1, 2}}),
            make_graph(2, {{0, 1}, {0, 1}})};
}

}  // namespace

TEST(FiniteCategory, BuiltinsValidate) {
    for (const auto& c : {FiniteCategory::terminal(), FiniteCategory::walking_arrow(), FiniteCategory::graph_base(),
                          FiniteCategory::discrete({"a", "b", "c"}), chain()})
        EXPECT_EQ(c.validate(), std::nullopt);
}

TEST(FiniteCategory, WalkingArrowShape) {
    auto c = FiniteCategory::walking_arrow();
    EXPECT_EQ(c.object_count(), 2);
    EXPECT_EQ(c.morphism_count(), 3);
    auto a = *c.find_morphism("a");
    EXPECT_EQ(c.morphism(a).src, 0);
    EXPECT_EQ(c.morphism(a).dst, 1);
    EXPECT_EQ(c.hom(0, 1), std::vector<int>{a});
    EXPECT_TRUE(c.hom(1, 0).empty());
}

TEST(FiniteCategory, GenerateRejectsMissingAndIllTypedComposites) {
    EXPECT_THROW(FiniteCategory::generate({"0", "1", "2"}, {{"f", 0, 1}, {"g", 1, 2}}, {}), ValidationError);
    EXPECT_THROW(FiniteCategory::generate({"0", "1"}, {{"f", 0, 1}, {"f", 0, 1}}, {}), ValidationError);
    EXPECT_THROW(FiniteCategory::generate({"0", "1", "2"}, {{"f", 0, 1}, {"g", 1, 2}, {"h", 0, 2}}, {{"f", "g", "h"}}),
                 ValidationError);
}

TEST(FiniteCategory, ValidateCatchesNonAssociativity) {
    // e∘e = k, e∘k = e, k∘e = k, k∘k = e, so (e∘e)∘k = e but e∘(e∘k) = k.
    std::vector<Morphism> ms{{"id", 0, 0}, {"e", 0, 0}, {"k", 0, 0}};
    std::vector<std::vector<int>> comp{{0, 1, 2}, {1, 2, 1}, {2, 2, 1}};
    FiniteCategory bad({"*"}, ms, {0}, comp);
    EXPECT_NE(bad.validate(), std::nullopt);
}

TEST(FiniteCategory, OppositePreservesIndices) {
    auto c = chain();
    auto op = FiniteCategory::opposite(c);
    EXPECT_EQ(op.validate(), std::nullopt);
    for (int m = 0; m < c.morphism_count(); ++m) {
        EXPECT_EQ(op.morphism(m).name, c.morphism(m).name);
        EXPECT_EQ(op.morphism(m).src, c.morphism(m).dst);
        EXPECT_EQ(op.morphism(m).dst, c.morphism(m).src);
    }
    auto f = *c.find_morphism("f"), g = *c.find_morphism("g");
    EXPECT_EQ(op.compose(f, g), c.compose(g, f));
}

TEST(FiniteCategory, ProductIndexing) {
    auto a = FiniteCategory::walking_arrow();
    auto b = chain();
    auto p = FiniteCategory::product(a, b);
    EXPECT_EQ(p.validate(), std::nullopt);
    EXPECT_EQ(p.object_count(), a.object_count() * b.object_count());
    EXPECT_EQ(p.morphism_count(), a.morphism_count() * b.morphism_count());
    const int mb = b.morphism_count();
    for (int m = 0; m < a.morphism_count(); ++m)
        for (int k = 0; k < mb; ++k) {
            const auto& pm = p.morphism(m * mb + k);
            EXPECT_EQ(pm.src, a.morphism(m).src * b.object_count() + b.morphism(k).src);
            EXPECT_EQ(pm.dst, a.morphism(m).dst * b.object_count() + b.morphism(k).dst);
        }
}

TEST(Presheaf, ValidateFindsEachDefect) {
    auto g = make_graph(2, {{0, 1}});
    EXPECT_EQ(g.validate(), std::nullopt);
    auto bad_range = g;
    bad_range.action[2][0] = 5;
    EXPECT_NE(bad_range.validate(), std::nullopt);
    auto bad_len = g;
    bad_len.action[3].push_back(0);
    EXPECT_NE(bad_len.validate(), std::nullopt);
    auto bad_id = g;
    bad_id.action[0] = {1, 0};
    EXPECT_NE(bad_id.validate(), std::nullopt);

    auto c = make_base(chain());
    auto f = *c->find_morphism("f"), gm = *c->find_morphism("g"), gf = *c->find_morphism("gf");
    auto p = Presheaf::make(c, {2, 1, 1}, {{f, {0}}, {gm, {0}}, {gf, {0}}});
    EXPECT_EQ(p.validate(), std::nullopt);
    auto broken = Presheaf::make(c, {2, 1, 1}, {{f, {0}}, {gm, {0}}, {gf, {1}}});
    auto w = broken.validate();
    ASSERT_NE(w, std::nullopt);
    EXPECT_EQ(w->object, 2);
}

TEST(Presheaf, MakeRequiresNonIdentityTables) {
    EXPECT_THROW(Presheaf::make(graph_base(), {1, 1}, {{2, {0}}}), ValidationError);
}

TEST(PresheafMap, NaturalityWitness) {
    auto a = make_graph(2, {{0, 1}});
    auto b = make_graph(2, {{0, 1}, {1, 0}});
    PresheafMap good{a, b, {{0, 1}, {0}}};
    EXPECT_EQ(good.validate(), std::nullopt);
    PresheafMap bad{a, b, {{1, 0}, {0}}};
    auto w = bad.validate();
    ASSERT_NE(w, std::nullopt);
    EXPECT_EQ(w->object, 1);
    EXPECT_EQ(w->element, 0);
}

TEST(PresheafMap, ComposeMatchesTableArithmetic) {
    std::mt19937 rng(7);
    auto graphs = sample_graphs();
    int checked = 0;
    for (const auto& x : graphs)
        for (const auto& y : graphs)
            for (const auto& z : graphs) {
                auto xy = hom(x, y), yz = hom(y, z);
                if (xy.empty() || yz.empty()) continue;
                const auto& f = xy[rng() % xy.size()];
                const auto& g = yz[rng() % yz.size()];
                auto h = compose(g, f);
                EXPECT_EQ(h.validate(), std::nullopt);
                EXPECT_EQ(h.comp, after(g.comp, f.comp));
                EXPECT_EQ(compose(identity_map(z), h), h);
                EXPECT_EQ(compose(h, identity_map(x)), h);
                ++checked;
            }
    EXPECT_GT(checked, 50);
}

TEST(PresheafMap, ComposeRejectsMismatch) {
    auto a = make_graph(1, {}), b = make_graph(2, {});
    EXPECT_THROW(compose(identity_map(a), identity_map(b)), ShapeMismatch);
    EXPECT_THROW(compose(identity_map(set(1)), identity_map(a)), BaseMismatch);
}

TEST(Hom, MatchesBruteForceInOrder) {
    auto graphs = sample_graphs();
    for (const auto& x : graphs)
        for (const auto& y : graphs) {
            auto engine = hom(x, y);
            auto oracle = brute_maps(x, y);
            ASSERT_EQ(engine.size(), oracle.size());
            for (std::size_t i = 0; i < engine.size(); ++i) EXPECT_EQ(engine[i].comp, oracle[i]);
        }
}

TEST(Hom, FinSetCounts) {
    for (int n = 0; n <= 3; ++n)
        for (int m = 0; m <= 3; ++m) {
            std::size_t expected = 1;
            for (int i = 0; i < n; ++i) expected *= m;
            EXPECT_EQ(hom(set(n), set(m)).size(), expected);
        }
}

TEST(Hom, FixedEntriesPinComponents) {
    auto x = make_graph(2, {{0, 1}});
    auto y = make_graph(3, {{0, 1}, {1, 2}, {2, 2}});
    std::vector<PresheafMap> pinned;
    for_each_map(x, y, {{-1, -1}, {1}}, [&](const PresheafMap& m) {
        pinned.push_back(m);
        return true;
    });
    ASSERT_EQ(pinned.size(), 1u);
    EXPECT_EQ(pinned[0].comp, (std::vector<Table>{{1, 2}, {1}}));
}

TEST(Maps, InjectiveSurjectiveInverse) {
    for (int n = 0; n <= 3; ++n)
        for (int m = 0; m <= 3; ++m)
            for (const auto& t : all_functions(n, m)) {
                auto f = fn(n, m, t);
                std::vector<int> hits(m, 0);
                for (int v : t) ++hits[v];
                bool inj = std::all_of(hits.begin(), hits.end(), [](int h) { return h <= 1; });
                bool sur = std::all_of(hits.begin(), hits.end(), [](int h) { return h >= 1; });
                EXPECT_EQ(is_injective(f), inj);
                EXPECT_EQ(is_surjective(f), sur);
                if (inj && sur) {
                    auto g = inverse(f);
                    EXPECT_EQ(compose(g, f), identity_map(f.src));
                    EXPECT_EQ(compose(f, g), identity_map(f.dst));
                }
            }
}

TEST(Maps, InitialAndTerminal) {
    auto g = make_graph(3, {{0, 1}, {1, 2}});
    EXPECT_EQ(initial_map(g).validate(), std::nullopt);
    EXPECT_EQ(terminal_map(g).validate(), std::nullopt);
    EXPECT_EQ(hom(Presheaf::empty(graph_base()), g).size(), 1u);
    EXPECT_EQ(hom(g, Presheaf::terminal(graph_base())).size(), 1u);
}

TEST(Restriction, AlongObjectInclusion) {
    auto g = make_graph(3, {{0, 1}, {1, 2}});
    auto v = make_base(FiniteCategory::terminal());
    auto vertices = restrict_presheaf(g, v, {0}, {0});
    EXPECT_EQ(vertices.sizes, std::vector<int>{3});
    EXPECT_EQ(vertices.validate(), std::nullopt);
}
