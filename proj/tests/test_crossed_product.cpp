#include "doctest.h"

#include <cmath>

#include "cartan/crossed_product.hpp"
#include "cartan/errors.hpp"
#include "fixtures.hpp"

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

CocycleAction z2_inner() {
    auto g = fx::share(fx::z2_point());
    Mat d = Mat::Identity(2, 2);
    d(1, 1) = -1;
    return make_action(g, {2}, {Mat::Identity(2, 2), d});
}

int expected_dim(const CocycleAction& a) {
    int d = 0;
    for (std::size_t g = 0; g < a.num_arrows(); ++g)
        d += a.field[a.groupoid->src(static_cast<int>(g))] * a.field[a.groupoid->tgt(static_cast<int>(g))];
    return d;
}

std::vector<CocycleAction> corpus() {
    std::mt19937_64 rng(7);
    std::vector<CocycleAction> out;
    out.push_back(identity_action(fx::share(fx::full_relation(2)), {1, 1}));
    out.push_back(random_coboundary_action(fx::share(fx::full_relation(3)), {2, 2, 2}, rng));
    out.push_back(random_coboundary_action(
        fx::share(principal_groupoid(WeightedSet::uniform(4), {{0, 3}, {1, 2}})), {1, 2, 2, 1}, rng));
    out.push_back(identity_action(fx::share(group_bundle(WeightedSet::uniform(2), cyclic_group(3))), {1, 2}));
    out.push_back(z2_inner());
    out.push_back(random_coboundary_action(
        fx::share(transformation_groupoid(WeightedSet::uniform(3), cyclic_group(2), {0, 1, 2, 1, 0, 2})), {2, 2, 1},
        rng));
    return out;
}

} // namespace

TEST_SUITE("crossed_product") {

TEST_CASE("units only gives B back") {
    auto cp = crossed_product(identity_action(fx::share(units_only(WeightedSet::uniform(2))), {2, 3}));
    CHECK(cp.construction.pass());
    CHECK(cp.inclusion.ambient.blocks() == std::vector<int>{2, 3});
}

TEST_CASE("full relation on scalars is a full matrix algebra") {
    auto cp = crossed_product(identity_action(fx::share(fx::full_relation(2)), {1, 1}));
    CHECK(cp.construction.pass());
    CHECK(cp.inclusion.ambient.blocks() == std::vector<int>{2});

    std::mt19937_64 rng(3);
    auto big = crossed_product(random_coboundary_action(fx::share(fx::full_relation(2)), {2, 2}, rng));
    CHECK(big.construction.pass());
    CHECK(big.inclusion.ambient.blocks() == std::vector<int>{4});
}

TEST_CASE("inner z2 action splits into two blocks") {
    auto cp = crossed_product(z2_inner());
    CHECK(cp.construction.pass());
    CHECK(cp.inclusion.ambient.blocks() == std::vector<int>{2, 2});
    CHECK(cp.inclusion.ambient.dim() == 8);
}

TEST_CASE("dimension and identities across the corpus") {
    for (const auto& a : corpus()) {
        auto cp = crossed_product(a);
        INFO(cp.construction.summary());
        CHECK(cp.construction.pass());
        CHECK(cp.inclusion.ambient.dim() == expected_dim(a));
        auto ids = check_identities(cp);
        INFO(ids.summary());
        CHECK(ids.pass());
    }
}

TEST_CASE("block form is a *-isomorphism of the abstract algebra") {
    for (const auto& a : corpus()) {
        auto cp = crossed_product(a);
        std::mt19937_64 rng(11);
        for (int s = 0; s < 5; ++s) {
            Coeffs x = cp_random(a, rng), y = cp_random(a, rng);
            CHECK(max_abs(sub(cp.to_M(cp_mul(a, x, y)), mul(cp.to_M(x), cp.to_M(y)))) < 1e-8);
            CHECK(max_abs(sub(cp.to_M(cp_adjoint(a, x)), adjoint(cp.to_M(x)))) < 1e-8);
            CHECK(max_abs(sub(cp.inclusion.E(cp.to_M(x)), cp_expect(a, x))) < 1e-8);
            Coeffs back = cp.from_M(cp.to_M(x));
            for (std::size_t g = 0; g < x.size(); ++g) CHECK(max_abs(Mat(back[g] - x[g])) < 1e-8);
        }
    }
}

TEST_CASE("corrupted cocycle breaks associativity and is rejected") {
    std::mt19937_64 rng(1);
    auto r2 = fx::share(fx::full_relation(2));
    auto a = random_coboundary_action(r2, {2, 2}, rng);
    CHECK(cp_associativity_residual(a, 1) < kTol);
    int g = r2->arrow_index("(1,2)"), h = r2->arrow_index("(2,1)");
    a.u[g * 4 + h] = a.cocycle(g, h) * cd(0, 1);
    CHECK(cp_associativity_residual(a, 1) > 1e-3);
    CHECK_THROWS_AS(crossed_product(a), Error);
}

TEST_CASE("fourier expansion reconstructs") {
    for (const auto& a : corpus()) {
        auto cp = crossed_product(a);
        std::mt19937_64 rng(5);
        for (bool sym : {false, true}) {
            Basis basis = compute_basis(*a.groupoid, sym);
            Element x = random_element(cp.inclusion.ambient, rng);
            auto coeffs = fourier(cp, x, basis);
            CHECK(max_abs(sub(reconstruct(cp, coeffs, basis), x)) < 1e-8);
        }
    }
    auto cp = crossed_product(identity_action(fx::share(fx::full_relation(2)), {1, 1}));
    Basis basis = compute_basis(*cp.action.groupoid, true);
    Element u = cp.u_set(basis.parts[1]);
    auto c = fourier(cp, u, basis);
    CHECK(max_abs(sub(c[0], cp.inclusion.sub.zero())) < 1e-12);
}

TEST_CASE("sharp norm") {
    auto cp = crossed_product(identity_action(fx::share(fx::full_relation(2)), {1, 1}));
    const auto& M = cp.inclusion.ambient;
    CHECK(sharp_norm(cp.inclusion, M.zero()) == doctest::Approx(0.0));
    CHECK(sharp_norm(cp.inclusion, M.identity()) == doctest::Approx(std::sqrt(2.0)));
    Element u = cp.u_arrow(cp.action.groupoid->arrow_index("(1,2)"));
    // u*u and uu* are the two atom projections, each of weight 1/2
    CHECK(sharp_norm(cp.inclusion, u) == doctest::Approx(1.0));
    CHECK(sharp_norm(cp.inclusion, u, {1.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("regularity") {
    for (const auto& a : corpus()) {
        auto cp = crossed_product(a);
        CHECK(check_regularity(cp).pass());
        auto gr = check_regularity(cp.inclusion);
        INFO(gr.summary());
        CHECK(gr.find("normalizers normalize B")->pass);
        if (is_free(a).free) CHECK(gr.pass());
    }
    MultiMatrixAlgebra M3({3}), B21({2, 1});
    Mat emb = block_diagonal_embedding(M3, B21, {{0, 1}});
    auto bad = make_inclusion(M3, B21, emb, trace_expectation(M3, B21, emb, {1.0}), {2.0 / 3, 1.0 / 3});
    auto rep = check_regularity(bad);
    CHECK_FALSE(rep.pass());
    CHECK_FALSE(rep.find("normalizers generate M")->pass);

    MultiMatrixAlgebra M4({4}), B22({2, 2});
    Mat e4 = block_diagonal_embedding(M4, B22, {{0, 1}});
    CHECK(check_regularity(make_inclusion(M4, B22, e4, trace_expectation(M4, B22, e4, {1.0}))).pass());
}

TEST_CASE("relative commutant matches freeness") {
    auto free_cp = crossed_product(identity_action(fx::share(fx::full_relation(2)), {1, 1}));
    auto rc = check_relative_commutant(free_cp);
    CHECK(rc.commutant_dim == 2);
    CHECK(rc.center_dim == 2);
    CHECK(rc.free);
    CHECK(rc.report.pass());

    auto inner = check_relative_commutant(crossed_product(z2_inner()));
    CHECK(inner.commutant_dim == 2);
    CHECK(inner.center_dim == 1);
    CHECK_FALSE(inner.free);
    CHECK_FALSE(inner.report.find("relative commutant is the center of B")->pass);
    CHECK(inner.report.find("relative commutant condition iff free")->pass);

    for (const auto& a : corpus()) CHECK(check_relative_commutant(crossed_product(a)).report.find("relative commutant condition iff free")->pass);
}

TEST_CASE("center and orbits") {
    auto two = fx::share(principal_groupoid(WeightedSet::uniform(4), {{0, 1}, {2, 3}}));
    auto f = check_factor(crossed_product(identity_action(two, {1, 1, 1, 1})));
    CHECK(f.center_dim == 2);
    CHECK(f.orbits == 2);
    CHECK(f.invariant_dim == 2);
    CHECK(f.report.pass());

    auto units = check_factor(crossed_product(identity_action(fx::share(units_only(WeightedSet::uniform(3))), {1, 2, 1})));
    CHECK(units.center_dim == 3);
    CHECK(units.report.pass());

    auto r3 = check_factor(crossed_product(identity_action(fx::share(fx::full_relation(3)), {2, 2, 2})));
    CHECK(r3.center_dim == 1);
    CHECK(r3.report.pass());

    for (const auto& a : corpus()) {
        auto fc = check_factor(crossed_product(a));
        INFO(fc.report.summary());
        CHECK(fc.report.pass());
    }
}

} // TEST_SUITE
