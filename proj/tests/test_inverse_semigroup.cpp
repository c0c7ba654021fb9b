#include "doctest.h"

#include <functional>

#include "cartan/errors.hpp"
#include "cartan/inverse_semigroup.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cartan;

namespace {

struct R2 {
    PseudogroupPtr p = full_pseudogroup(fx::share(fx::full_relation(2)));
    const InvSemigroup& I = *p->semigroup;
    int id = fx::element(*p, {"(1,1)", "(2,2)"});
    int swap = fx::element(*p, {"(2,1)", "(1,2)"});
    int e1 = fx::element(*p, {"(1,1)"});
    int e2 = fx::element(*p, {"(2,2)"});
    int up = fx::element(*p, {"(2,1)"}); // 1 -> 2
};

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::MalformedInput;
}

std::vector<GroupoidPtr> small_corpus() {
    std::vector<GroupoidPtr> out;
    for (int n = 1; n <= 3; ++n) out.push_back(fx::share(fx::full_relation(n)));
    out.push_back(fx::share(principal_groupoid(
        WeightedSet::create({"a", "b", "c", "d"}, {Rational(1, 8), Rational(1, 4), Rational(1, 8), Rational(1, 2)}),
        {{0, 1}, {2, 3}})));
    out.push_back(fx::share(fx::z2_point()));
    out.push_back(fx::share(group_bundle(WeightedSet::create({"p", "q"}, {Rational(1, 3), Rational(2, 3)}),
                                         cyclic_group(3))));
    auto z2 = cyclic_group(2);
    out.push_back(fx::share(transformation_groupoid(WeightedSet::uniform(3), z2, {0, 1, 2, 1, 0, 2})));
    return out;
}

} // namespace

TEST_SUITE("inverse_semigroup") {

TEST_CASE("validate_csm examples") {
    auto lat = fx::subset_lattice(WeightedSet::uniform(2));
    CHECK(validate_csm(lat).pass());
    R2 r;
    CHECK(r.I.size() == 7);
    auto rep = validate_csm(r.I);
    CHECK_MESSAGE(rep.pass(), rep.summary());

    // left-zero band {a, b} with 1 and 0 adjoined: b is a second inverse of a
    std::vector<std::string> ids{"0", "1", "a", "b"};
    std::vector<int> mul(16);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
            int z;
            if (x == 0 || y == 0) z = 0;
            else if (x == 1) z = y;
            else z = x;
            mul[x * 4 + y] = z;
        }
    InvSemigroup band(WeightedSet::uniform(1), ids, 0, mul, {0, 1, 2, 3}, {{0, Subset{}}, {1, Subset{1}}});
    auto bad = validate_csm(band);
    REQUIRE_FALSE(bad.pass());
    auto* c = bad.find("unique inverse");
    REQUIRE(c);
    CHECK_FALSE(c->pass);
    CHECK(c->detail.find("a") != std::string::npos);
}

TEST_CASE("expectation E") {
    R2 r;
    for (int e : oracle::idempotents(r.I)) CHECK(expectation_E(r.I, e) == e);
    CHECK(expectation_E(r.I, r.swap) == r.I.zero());
    CHECK(expectation_E(r.I, r.id) == r.I.one());
    for (const auto& g : small_corpus()) {
        auto p = full_pseudogroup(g);
        const auto& I = *p->semigroup;
        for (int x = 0; x < static_cast<int>(I.size()); ++x) {
            auto ref = oracle::max_fixed_idempotent(I, x);
            REQUIRE(ref);
            CHECK(expectation_E(I, x) == *ref);
            CHECK(expectation_E(I, I.inv(x)) == expectation_E(I, x));
        }
    }
}

TEST_CASE("metric examples") {
    R2 r;
    CHECK(metric_d(r.I, r.id, r.swap) == Rational(2));
    CHECK(metric_d(r.I, r.id, r.e1) == Rational(1));
    for (int x = 0; x < 7; ++x) CHECK(metric_d(r.I, x, x) == Rational(0));
}

TEST_CASE("agreement idempotents, d0 oracle and metric axioms by exhaustion") {
    for (const auto& g : small_corpus()) {
        auto p = full_pseudogroup(g);
        const auto& I = *p->semigroup;
        const int N = static_cast<int>(I.size());
        Metric m(I);
        for (int x = 0; x < N; ++x)
            for (int y = 0; y < N; ++y) {
                int e = expectation_E(I, I.mul(I.inv(x), y));
                auto ref = oracle::max_agreement_idempotent(I, x, y);
                REQUIRE(ref);
                CHECK(e == *ref);
                CHECK(I.embed(e)->subset_of(I.dom(x) | I.dom(y)));
                Subset f = *I.embed(expectation_E(I, I.mul(x, I.inv(y))));
                CHECK(f.subset_of(I.ran(x) | I.ran(y)));

                CHECK(m.d0(x, y) == oracle::d0_units(I, x, y));
                CHECK(m.d(x, y) == m.d0(x, y) + m.d0(I.inv(x), I.inv(y)));
                CHECK(m.d(x, y) == m.d(y, x));
                CHECK((m.d(x, y) == 0) == (x == y));
                CHECK(metric_d(I, x, y) * I.base().denominator() == Rational(m.d(x, y)));
                CHECK(d0(I, x, y) * I.base().denominator() == Rational(m.d0(x, y)));
            }
        for (int x = 0; x < N; ++x)
            for (int y = 0; y < N; ++y)
                for (int z = 0; z < N; ++z) CHECK(m.d(x, z) <= m.d(x, y) + m.d(y, z));
    }
}

TEST_CASE("orthogonal joins") {
    R2 r;
    CHECK(join_orthogonal(r.I, {r.swap}) == r.swap);
    CHECK(join_orthogonal(r.I, {r.e1, r.e2}) == r.id);
    CHECK(code_of([&] { join_orthogonal(r.I, {r.e1, r.id}); }) == ErrorCode::NotOrthogonal);
    for (const auto& g : small_corpus()) {
        auto p = full_pseudogroup(g);
        const auto& I = *p->semigroup;
        const int N = static_cast<int>(I.size());
        for (int x = 0; x < N; ++x)
            for (int y = 0; y < N; ++y)
                if (orthogonal(I, x, y)) {
                    auto ref = oracle::least_upper_bound(I, {x, y});
                    REQUIRE(ref);
                    CHECK(join_orthogonal(I, {x, y}) == *ref);
                }
    }
}

TEST_CASE("normalize_generators") {
    R2 r;
    auto w = normalize_generators(r.I, {r.id, r.swap, r.up});
    CHECK(w == std::vector<int>{r.id, r.swap});
    auto lat = fx::subset_lattice(WeightedSet::uniform(2));
    CHECK(normalize_generators(lat, {lat.one()}) == std::vector<int>{lat.one()});
    CHECK(normalize_generators(r.I, {r.id, r.e1, r.swap}) == std::vector<int>{r.id, r.swap});
    CHECK(code_of([&] { normalize_generators(r.I, {r.id}); }) == ErrorCode::NotGenerating);

    // every element decomposes uniquely over a normalized family
    for (const auto& g : small_corpus()) {
        auto p = full_pseudogroup(g);
        const auto& I = *p->semigroup;
        auto fam = normalize_generators(I, find_generators(I));
        CHECK(fam[0] == I.one());
        Restrictions res(I);
        for (int x = 0; x < static_cast<int>(I.size()); ++x) CHECK_NOTHROW(decompose(I, res, fam, x));
        for (std::size_t a = 0; a < I.base().size(); ++a)
            for (std::size_t i = 0; i < fam.size(); ++i)
                for (std::size_t j = i + 1; j < fam.size(); ++j) {
                    int ri = res.at(fam[i], a);
                    CHECK((ri == I.zero() || ri != res.at(fam[j], a)));
                }
    }
}

TEST_CASE("check_hom") {
    R2 r;
    auto I = r.p->semigroup;
    LatticeHom id{I, I, {}};
    for (int x = 0; x < 7; ++x) id.map.push_back(x);
    CHECK(check_hom(id).pass());

    // 1 and swap to 1, everything else to 0: multiplicative, loses e1 ∨ e2 = 1
    LatticeHom drop{I, I, std::vector<int>(7, I->zero())};
    drop.map[r.id] = r.id;
    drop.map[r.swap] = r.id;
    auto rep = check_hom(drop);
    CHECK(rep.find("multiplicative")->pass);
    CHECK_FALSE(rep.find("join preservation")->pass);
}

TEST_CASE("passing homs preserve order, orthogonality and joins") {
    // automorphism of [[R_3]] induced by an atom relabeling
    auto g = fx::share(fx::full_relation(3));
    auto rel = fx::share(relabel(*g, {1, 2, 0}, [&] {
        std::vector<int> v(g->num_arrows());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
        return v;
    }()));
    auto p1 = full_pseudogroup(g), p2 = full_pseudogroup(rel);
    auto iso = is_isomorphic(*g, *rel);
    REQUIRE(iso.witness);
    auto h = induced_hom(*p1, *p2, *iso.witness);
    REQUIRE(check_hom(h).pass());
    const auto& A = *p1->semigroup;
    const auto& B = *p2->semigroup;
    for (int x = 0; x < static_cast<int>(A.size()); ++x)
        for (int y = 0; y < static_cast<int>(A.size()); ++y) {
            if (leq(A, x, y)) CHECK(leq(B, h(x), h(y)));
            if (orthogonal(A, x, y)) {
                CHECK(orthogonal(B, h(x), h(y)));
                CHECK(h(join_orthogonal(A, {x, y})) == join_orthogonal(B, {h(x), h(y)}));
            }
        }
}

}
