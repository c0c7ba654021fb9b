#include "doctest.h"

#include <boost/rational.hpp>

#include "cartan/equiv_rel.hpp"
#include "cartan/errors.hpp"
#include "oracles.hpp"

using namespace cartan;

namespace {

EquivRel rel(std::size_t n, std::vector<std::vector<int>> classes) {
    return EquivRel(WeightedSet::uniform(n), std::move(classes));
}

SubInclusion two_pairs() { return {rel(4, {{0, 1, 2, 3}}), rel(4, {{0, 1}, {2, 3}})}; }
SubInclusion uneven() { return {rel(3, {{0, 1, 2}}), rel(3, {{0, 1}, {2}})}; }

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::MalformedInput;
}

} // namespace

TEST_SUITE("equiv_rel") {

TEST_CASE("partition validation") {
    CHECK_THROWS_AS(rel(3, {{0, 1}}), Error);
    CHECK_THROWS_AS(rel(3, {{0, 1}, {1, 2}}), Error);
    CHECK_THROWS_AS(SubInclusion(rel(3, {{0, 1}, {2}}), rel(3, {{0, 2}, {1}})), Error);
    auto r = rel(4, {{3, 1}, {2, 0}});
    CHECK(r.classes() == std::vector<std::vector<int>>{{0, 2}, {1, 3}});
    CHECK(r.num_pairs() == 8);
}

TEST_CASE("ergodic decomposition") {
    auto d = ergodic_decomposition(EquivRel::diagonal(WeightedSet::uniform(3)));
    CHECK(d.Z.size() == 3);
    auto p = ergodic_decomposition(rel(4, {{0, 1}, {2, 3}}));
    CHECK(p.Z.size() == 2);
    CHECK(p.Z.weight(0) == Rational(1, 2));
    CHECK(p.Z.weight(1) == Rational(1, 2));
    CHECK(p.pi == std::vector<int>{0, 0, 1, 1});
    CHECK(ergodic_decomposition(EquivRel::full(WeightedSet::uniform(4))).Z.size() == 1);
}

TEST_CASE("strong normality") {
    auto sn = is_strongly_normal(two_pairs());
    CHECK(sn.strongly_normal);
    CHECK(sn.report.pass());
    CHECK(sn.witnesses.size() == 4);

    auto bad = is_strongly_normal(uneven());
    CHECK_FALSE(bad.strongly_normal);
    CHECK(bad.refuting == std::pair<int, int>{0, 2});

    auto r = rel(5, {{0, 1, 2}, {3, 4}});
    CHECK(is_strongly_normal({r, r}).strongly_normal);
    CHECK(is_strongly_normal({r, EquivRel::diagonal(r.base())}).strongly_normal);
    CHECK(code_of([&] { is_strongly_normal({r, EquivRel::diagonal(r.base())}, 2); }) ==
          ErrorCode::SearchBudgetExceeded);
}

TEST_CASE("von Neumann algebras") {
    CHECK(vn_algebra(EquivRel::diagonal(WeightedSet::uniform(3))).blocks() == std::vector<int>{1, 1, 1});
    CHECK(vn_algebra(EquivRel::full(WeightedSet::uniform(2))).blocks() == std::vector<int>{2});
    CHECK(vn_algebra(rel(4, {{0, 1}, {2, 3}})).blocks() == std::vector<int>{2, 2});
    for (const auto& inc : {two_pairs(), uneven()}) {
        auto vi = vn_inclusion(inc);
        INFO(validate_expectation(vi).summary());
        CHECK(validate_expectation(vi).pass());
    }
    auto vi = vn_inclusion(two_pairs());
    CHECK(vi.weights == std::vector<double>{0.5, 0.5});
    Element x = relation_unit(two_pairs().big, 0, 2);
    CHECK(max_abs(vi.E(x)) == doctest::Approx(0.0));
    Element y = relation_unit(two_pairs().big, 3, 2);
    CHECK(max_abs(sub(vi.lift(vi.E(y)), y)) < 1e-12);
    CHECK(validate_expectation(vn_algebra_of(rel(3, {{0, 2}, {1}}))).pass());
}

TEST_CASE("quotient semigroup") {
    auto q = quotient_semigroup_rel({EquivRel::full(WeightedSet::uniform(2)), EquivRel::diagonal(WeightedSet::uniform(2))});
    CHECK(q.quotient->semigroup->size() == 7);
    CHECK(q.report.pass());

    // S = R: only the idempotents of each class
    auto r = rel(4, {{0, 1}, {2, 3}});
    auto same = quotient_semigroup_rel({r, r});
    CHECK(same.quotient->semigroup->size() == 4);

    // a single class of pairs: [[R_2]] on the quotient
    auto one = quotient_semigroup_rel(two_pairs());
    CHECK(one.quotient->semigroup->size() == 7);

    auto partial = quotient_semigroup_rel(uneven());
    CHECK(partial.quotient->semigroup->size() == 4);
}

TEST_CASE("quotient groupoid") {
    auto diag = quotient_groupoid_rel(
        {EquivRel::full(WeightedSet::uniform(3)), EquivRel::diagonal(WeightedSet::uniform(3))});
    INFO(diag.report.summary());
    CHECK(diag.report.pass());
    CHECK(diag.groupoid->num_arrows() == 9);
    CHECK(diag.synthesis.has_value());
    for (const auto& p : diag.action.phi)
        if (!p.empty()) CHECK(p == std::vector<int>{0});

    auto pairs = quotient_groupoid_rel(two_pairs());
    CHECK(pairs.report.pass());
    CHECK(pairs.groupoid->num_arrows() == 4);

    auto rev = quotient_groupoid_rel(two_pairs(), true);
    CHECK(rev.report.pass());
    int g = rev.groupoid->arrow_index("({3,4},{1,2})");
    CHECK(rev.action.alpha[g] == std::vector<int>{1, 0});

    CHECK(code_of([] { quotient_groupoid_rel(uneven()); }) == ErrorCode::NotStronglyNormal);
    auto two = rel(4, {{0, 1}, {2, 3}});
    CHECK(code_of([&] { quotient_groupoid_rel({two, EquivRel::diagonal(two.base())}); }) == ErrorCode::NonErgodic);
}

TEST_CASE("broken fiber action is caught") {
    auto q = quotient_groupoid_rel(
        {EquivRel::full(WeightedSet::uniform(6)), rel(6, {{0, 1, 2}, {3, 4, 5}})});
    CHECK(q.report.pass());
    FiberAction fa = q.action;
    int g = fa.groupoid->arrow_index("({4,5,6},{1,2,3})");
    fa.alpha[g] = {1, 2, 0};
    auto rep = validate_fiber_action(fa);
    CHECK_FALSE(rep.find("alpha_g alpha_h = Phi(g,h) alpha_gh")->pass);
}

TEST_CASE("semidirect product and induced action") {
    for (const auto& inc : {two_pairs(), SubInclusion(EquivRel::full(WeightedSet::uniform(3)),
                                                       EquivRel::diagonal(WeightedSet::uniform(3)))}) {
        auto q = quotient_groupoid_rel(inc);
        auto sd = semidirect_product(inc.big.base(), q.action);
        CHECK(sd.report.pass());
        CHECK(sd.relation == inc.big);
        auto act = induced_matrix_action(q.action);
        INFO(validate_action(act).summary());
        CHECK(validate_action(act).pass());
    }
    auto r = rel(4, {{0, 1, 2, 3}});
    auto q = quotient_groupoid_rel({r, r});
    CHECK(q.groupoid->num_arrows() == 1);
    CHECK(semidirect_product(r.base(), q.action).relation == r);
}

TEST_CASE("U and Omega bridges") {
    for (const auto& inc : {two_pairs(),
                            SubInclusion(EquivRel::full(WeightedSet::uniform(3)),
                                         EquivRel::diagonal(WeightedSet::uniform(3))),
                            SubInclusion(EquivRel::full(WeightedSet::uniform(3)),
                                         EquivRel::full(WeightedSet::uniform(3)))}) {
        auto rep = bridge_checks(inc);
        INFO(rep.summary());
        CHECK(rep.pass());
        CHECK(rep.find("U/U unitary") != nullptr);
        CHECK(rep.find("Omega/bijective") != nullptr);
    }
    auto neg = bridge_checks(uneven());
    CHECK(neg.find("strongly normal iff regular")->pass);
    CHECK(neg.find("U/U unitary") == nullptr);
    CHECK(code_of([] { normalizing_germs(vn_inclusion(uneven())); }) == ErrorCode::IncompleteGermFamily);
}

TEST_CASE("round trip") {
    auto rep = roundtrip_C(two_pairs());
    INFO(rep.summary());
    CHECK(rep.pass());
    CHECK(rep.find("semidirect product equals R")->pass);
    auto big = roundtrip_C({EquivRel::full(WeightedSet::uniform(8)), EquivRel::diagonal(WeightedSet::uniform(8))});
    CHECK(big.pass());
    CHECK_FALSE(roundtrip_C(uneven()).pass());
}

TEST_CASE("agreement with brute force on small inclusions") {
    int count = 0;
    for (int n = 1; n <= 5; ++n)
        for (const auto& R : oracle::set_partitions(n))
            for (const auto& S : oracle::set_partitions(n)) {
                auto rl = oracle::labels(R, n), sl = oracle::labels(S, n);
                bool refines = true;
                for (int x = 0; x < n; ++x)
                    for (int y = 0; y < n; ++y)
                        if (sl[x] == sl[y] && rl[x] != rl[y]) refines = false;
                if (!refines) continue;
                ++count;
                SubInclusion inc(rel(n, R), rel(n, S));
                bool sn = is_strongly_normal(inc).strongly_normal;
                CHECK(sn == oracle::strongly_normal_brute(rl, sl));
                auto q = quotient_semigroup_rel(inc);
                std::set<std::vector<int>> got(q.quotient->maps.begin(), q.quotient->maps.end());
                CHECK(got == oracle::quotient_maps_brute(rl, sl));
            }
    CHECK(count > 100);
}

} // TEST_SUITE
