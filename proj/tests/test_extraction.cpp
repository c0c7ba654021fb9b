#include "doctest.h"
#include <functional>

#include "cartan/errors.hpp"
#include "cartan/extraction.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cartan;

namespace {

CocycleAction identity_action(GroupoidPtr g, std::vector<int> field) {
    std::vector<Mat> V;
    for (std::size_t a = 0; a < g->num_arrows(); ++a) {
        int n = field[g->src(static_cast<int>(a))];
        V.push_back(Mat::Identity(n, n));
    }
    return make_action(g, field, V);
}

Inclusion diagonal_in_m2() {
    MultiMatrixAlgebra M({2}), D({1, 1});
    Mat e = block_diagonal_embedding(M, D, {{0, 1}});
    return make_inclusion(M, D, e, trace_expectation(M, D, e, {1.0}), {0.5, 0.5});
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::MalformedInput;
}

} // namespace

TEST_SUITE("extraction") {

TEST_CASE("diagonal in M2") {
    Inclusion inc = diagonal_in_m2();
    GermFamily g = normalizing_germs(inc);
    CHECK(g.germs.size() == 4);
    CHECK(g.report.pass());
    auto q = quotient_semigroup(inc, g);
    CHECK(q.semigroup->size() == 7);
    CHECK(q.report.pass());

    Extraction ex = extract(inc);
    INFO(ex.report.summary());
    CHECK(ex.report.pass());
    CHECK(is_isomorphic(*ex.action.groupoid, fx::full_relation(2)).witness.has_value());
}

TEST_CASE("B = M gives the units-only groupoid") {
    MultiMatrixAlgebra B({2, 1, 1});
    Mat id = Mat::Identity(B.dim(), B.dim());
    Inclusion inc = make_inclusion(B, B, id, id, {0.5, 0.25, 0.25});
    Extraction ex = extract(inc);
    CHECK(ex.report.pass());
    CHECK(ex.germs.germs.size() == 3);
    CHECK(ex.quotient.semigroup->size() == 8);
    CHECK(ex.action.groupoid->num_arrows() == 3);
    CHECK(ex.cp.inclusion.ambient.blocks() == std::vector<int>{1, 1, 2});
    for (const auto& b : B.matrix_units()) CHECK(max_abs(sub(ex.to_cp(b), ex.cp.inclusion.lift(b))) < 1e-9);
}

TEST_CASE("non-regular and non-free inclusions are rejected") {
    MultiMatrixAlgebra M3({3}), B21({2, 1});
    Mat e = block_diagonal_embedding(M3, B21, {{0, 1}});
    Inclusion bad = make_inclusion(M3, B21, e, trace_expectation(M3, B21, e, {1.0}), {2.0 / 3, 1.0 / 3});
    CHECK(code_of([&] { normalizing_germs(bad); }) == ErrorCode::IncompleteGermFamily);

    auto g = fx::share(fx::z2_point());
    Mat d = Mat::Identity(2, 2);
    d(1, 1) = -1;
    auto inner = crossed_product(make_action(g, {2}, {Mat::Identity(2, 2), d}));
    CHECK(code_of([&] { normalizing_germs(inner.inclusion); }) == ErrorCode::RelativeCommutantViolation);

    Inclusion broken = diagonal_in_m2();
    broken.expect(0, 1) = 0.3;
    CHECK(code_of([&] { normalizing_germs(broken); }) == ErrorCode::MalformedInput);
}

TEST_CASE("quotient semigroup of a disjoint union") {
    auto two = fx::share(principal_groupoid(WeightedSet::uniform(4), {{0, 1}, {2, 3}}));
    auto cp = crossed_product(identity_action(two, {1, 1, 1, 1}));
    auto g = normalizing_germs(cp.inclusion);
    auto q = quotient_semigroup(cp.inclusion, g);
    CHECK(q.semigroup->size() == 49);
    CHECK(q.report.pass());
}

TEST_CASE("quotient semigroup size matches the partial injection count") {
    for (int n = 1; n <= 4; ++n) {
        auto cp = crossed_product(identity_action(fx::share(fx::full_relation(n)), std::vector<int>(n, 1)));
        auto q = quotient_semigroup(cp.inclusion, normalizing_germs(cp.inclusion));
        CHECK(q.semigroup->size() == oracle::partial_injections(n));
    }
}

TEST_CASE("erase labels keeps a valid inclusion with the same shape") {
    std::mt19937_64 rng(2);
    auto a = random_coboundary_action(fx::share(fx::full_relation(3)), {2, 2, 2}, rng);
    auto cp = crossed_product(a);
    Inclusion e = erase_labels(cp.inclusion, 9);
    CHECK(validate_expectation(e).pass());
    CHECK(e.ambient.dim() == cp.inclusion.ambient.dim());
    CHECK(e.sub.dim() == cp.inclusion.sub.dim());
}

TEST_CASE("principal isomorphism respects block sizes") {
    auto r2 = fx::full_relation(2);
    auto two = principal_groupoid(WeightedSet::uniform(4), {{0, 1}, {2, 3}});
    CHECK(principal_iso(r2, {1, 1}, r2, {1, 1}).has_value());
    CHECK(principal_iso(two, {1, 1, 2, 2}, two, {2, 2, 1, 1}).has_value());
    CHECK_FALSE(principal_iso(two, {1, 1, 2, 2}, two, {1, 1, 1, 1}).has_value());
    CHECK_FALSE(principal_iso(fx::z2_point(), {1}, fx::z2_point(), {1}).has_value());
}

TEST_CASE("crossed product round trip") {
    std::mt19937_64 rng(4);
    std::vector<CocycleAction> actions;
    actions.push_back(identity_action(fx::share(fx::full_relation(2)), {1, 1}));
    actions.push_back(random_coboundary_action(fx::share(fx::full_relation(3)), {2, 2, 2}, rng));
    actions.push_back(random_coboundary_action(
        fx::share(principal_groupoid(WeightedSet::uniform(4), {{0, 3}, {1, 2}})), {1, 2, 2, 1}, rng));
    actions.push_back(random_coboundary_action(
        fx::share(principal_groupoid(WeightedSet::create({"a", "b", "c"}, {Rational(1, 2), Rational(1, 3), Rational(1, 6)}),
                                     {{0, 1}, {2}})),
        {2, 2, 3}, rng));
    for (const auto& a : actions) {
        Report r = roundtrip_B(a, 5);
        INFO(r.summary());
        CHECK(r.pass());
    }
}

TEST_CASE("round trip from an unlabeled inclusion") {
    Report r = roundtrip_B_inclusion(erase_labels(diagonal_in_m2(), 3));
    INFO(r.summary());
    CHECK(r.pass());
}

} // TEST_SUITE
