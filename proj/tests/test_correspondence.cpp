#include "doctest.h"

#include <functional>
#include <numeric>

#include "cartan/correspondence.hpp"
#include "cartan/errors.hpp"
#include "fixtures.hpp"

using namespace cartan;

namespace {

std::vector<int> identity_perm(std::size_t n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// [[G]] -> [[G]] sending the bisection U to its image under a groupoid automorphism.
LatticeHom compose_homs(const LatticeHom& a, const LatticeHom& b) { // b ∘ a
    LatticeHom out{a.source, b.target, {}};
    for (int x : a.map) out.map.push_back(b.map[x]);
    return out;
}

} // namespace

TEST_SUITE("correspondence") {

TEST_CASE("full pseudogroup sizes and products") {
    auto u = full_pseudogroup(fx::share(units_only(WeightedSet::uniform(2))));
    CHECK(u->semigroup->size() == 4);
    auto r = full_pseudogroup(fx::share(fx::full_relation(2)));
    CHECK(r->semigroup->size() == 7);
    auto z = full_pseudogroup(fx::share(fx::z2_point()));
    const auto& I = *z->semigroup;
    REQUIRE(I.size() == 3);
    int g = fx::element(*z, {"1:1"}), e = fx::element(*z, {"1:0"});
    CHECK(I.mul(g, g) == e);
    CHECK(validate_csm(I).pass());

    // products agree with bisection composition
    const auto& G = *r->groupoid;
    for (std::size_t x = 0; x < 7; ++x)
        for (std::size_t y = 0; y < 7; ++y)
            CHECK(r->arrow_sets[r->semigroup->mul(x, y)] == compose(G, r->arrow_sets[x], r->arrow_sets[y]));

    bool threw = false;
    try {
        full_pseudogroup(fx::share(fx::full_relation(5)), 1000);
    } catch (const Error& err) {
        threw = err.code() == ErrorCode::CapExceeded;
    }
    CHECK(threw);
}

TEST_CASE("groupoid of germs") {
    auto lat = std::make_shared<const InvSemigroup>(fx::subset_lattice(WeightedSet::uniform(3)));
    auto s0 = groupoid_of(lat, {lat->one()});
    CHECK(s0.groupoid->num_arrows() == 3);
    CHECK(orbits_isotropy(*s0.groupoid).orbits.size() == 3);

    auto r = full_pseudogroup(fx::share(fx::full_relation(2)));
    int id = fx::element(*r, {"(1,1)", "(2,2)"}), swap = fx::element(*r, {"(2,1)", "(1,2)"});
    auto s = groupoid_of(r->semigroup, {id, swap});
    CHECK(s.groupoid->num_arrows() == 4);
    CHECK(is_isomorphic(*s.groupoid, *r->groupoid).witness.has_value());
    CHECK(check_hom(s.gamma).pass());
    CHECK(s.gamma.source->size() == s.pseudogroup->semigroup->size());

    // {0, e, g} with g^2 = e over one atom
    InvSemigroup z(WeightedSet::uniform(1), {"0", "e", "g"}, 0, {0, 0, 0, 0, 1, 2, 0, 2, 1}, {0, 1, 2},
                   {{0, Subset{}}, {1, Subset{1}}});
    REQUIRE(validate_csm(z).pass());
    auto zp = std::make_shared<const InvSemigroup>(z);
    auto sz = groupoid_of(zp, {1, 2});
    CHECK(is_isomorphic(*sz.groupoid, fx::z2_point()).witness.has_value());
    CHECK(check_hom(sz.gamma).pass());

    bool threw = false;
    try {
        groupoid_of(r->semigroup, {id});
    } catch (const Error& err) {
        threw = err.code() == ErrorCode::NotGenerating;
    }
    CHECK(threw);
}

TEST_CASE("lifting lattice isomorphisms") {
    auto g = fx::share(fx::full_relation(2));
    auto p = full_pseudogroup(g);
    LatticeHom id{p->semigroup, p->semigroup, identity_perm(7)};
    auto l = lift_iso(*p, *p, id);
    CHECK(l.report.pass());
    CHECK(l.iso.atoms == identity_perm(2));
    CHECK(l.iso.arrows == identity_perm(4));

    // relabeling the atoms of R_2
    auto rel = fx::share(relabel(*g, {1, 0}, {3, 2, 1, 0}));
    auto q = full_pseudogroup(rel);
    GroupoidIso sw{{1, 0}, {3, 2, 1, 0}};
    REQUIRE(check_groupoid_iso(*g, *rel, sw).pass());
    auto phi = induced_hom(*p, *q, sw);
    auto l2 = lift_iso(*p, *q, phi);
    CHECK(l2.report.pass());
    CHECK(l2.iso.atoms == sw.atoms);
    CHECK(l2.iso.arrows == sw.arrows);

    // [[Z/2 on a point]]: the only automorphism is the identity
    auto z = full_pseudogroup(fx::share(fx::z2_point()));
    int count = 0;
    std::vector<int> perm = identity_perm(3);
    do {
        LatticeHom h{z->semigroup, z->semigroup, perm};
        if (!check_hom(h).pass()) continue;
        ++count;
        auto lz = lift_iso(*z, *z, h);
        CHECK(lz.report.pass());
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(count == 1);

    LatticeHom collapse{p->semigroup, p->semigroup, std::vector<int>(7, p->semigroup->zero())};
    bool threw = false;
    try {
        lift_iso(*p, *p, collapse);
    } catch (const Error& err) {
        threw = err.code() == ErrorCode::NotBijective;
    }
    CHECK(threw);
}

TEST_CASE("functoriality on relabelings") {
    auto g = fx::share(transformation_groupoid(WeightedSet::uniform(3), cyclic_group(3), {0, 1, 2, 1, 2, 0, 2, 0, 1}));
    const std::size_t m = g->num_arrows();
    std::vector<int> a1 = identity_perm(m), a2 = identity_perm(m);
    std::rotate(a1.begin(), a1.begin() + 2, a1.end());
    std::reverse(a2.begin(), a2.end());
    auto g1 = fx::share(relabel(*g, {2, 0, 1}, a1));
    auto g2 = fx::share(relabel(*g1, {1, 2, 0}, a2));
    GroupoidIso i1{{2, 0, 1}, a1}, i2{{1, 2, 0}, a2}, i12;
    for (int x : i1.atoms) i12.atoms.push_back(i2.atoms[x]);
    for (int x : i1.arrows) i12.arrows.push_back(i2.arrows[x]);
    REQUIRE(check_groupoid_iso(*g, *g1, i1).pass());
    REQUIRE(check_groupoid_iso(*g1, *g2, i2).pass());
    auto p = full_pseudogroup(g), p1 = full_pseudogroup(g1), p2 = full_pseudogroup(g2);
    auto h1 = induced_hom(*p, *p1, i1), h2 = induced_hom(*p1, *p2, i2), h12 = induced_hom(*p, *p2, i12);
    CHECK(compose_homs(h1, h2).map == h12.map);
    auto lifted = lift_iso(*p, *p2, compose_homs(h1, h2));
    CHECK(lifted.iso.arrows == i12.arrows);
}

TEST_CASE("round trips") {
    std::vector<GroupoidPtr> gs{fx::share(fx::full_relation(2)), fx::share(fx::z2_point()),
                                fx::share(units_only(WeightedSet::uniform(2))),
                                fx::share(group_bundle(WeightedSet::uniform(2), symmetric_group(3)))};
    for (const auto& g : gs) {
        auto rep = roundtrip_A(g);
        CHECK_MESSAGE(rep.pass(), rep.summary());
        CHECK(rep.find("independent of generating set"));
    }
    auto lat = std::make_shared<const InvSemigroup>(fx::subset_lattice(WeightedSet::uniform(2)));
    CHECK(roundtrip_A_sem(lat, {lat->one()}).pass());
    auto r3 = full_pseudogroup(fx::share(fx::full_relation(3)));
    auto rep = roundtrip_A_sem(r3->semigroup, find_generators(*r3->semigroup));
    CHECK_MESSAGE(rep.pass(), rep.summary());
}

}
