// One line per acceptance criterion; nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "cartan/errors.hpp"
#include "cartan/generators.hpp"
#include "oracles.hpp"

using namespace cartan;

namespace {

constexpr double kResidual = 1e-9;

struct Outcome {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

GroupoidPtr share(Groupoid g) { return std::make_shared<const Groupoid>(std::move(g)); }

std::vector<GroupoidPtr> groupoid_corpus() {
    std::vector<GroupoidPtr> out;
    for (int n = 1; n <= 5; ++n)
        for (const auto& p : all_partitions(n)) out.push_back(share(principal_groupoid(WeightedSet::uniform(n), p)));
    for (const char* g : {"z2", "z3", "s3"})
        for (int n = 1; n <= 2; ++n) out.push_back(share(random_group_bundle(n, group_by_name(g), 11 + n)));
    // |Γ|·|Y| <= 24
    const std::vector<std::pair<std::string, int>> tg = {{"z2", 2}, {"z2", 3}, {"z2", 4}, {"z3", 3}, {"z3", 4},
                                                         {"z4", 4}, {"s3", 3}, {"s3", 4}, {"z2", 6}, {"z6", 4}};
    std::uint64_t seed = 100;
    for (const auto& [g, y] : tg)
        for (int k = 0; k < 2; ++k) out.push_back(share(random_transformation_groupoid(y, group_by_name(g), seed++)));
    return out;
}

std::vector<CocycleAction> coboundary_corpus(int count, std::uint64_t seed0) {
    std::vector<CocycleAction> out;
    for (int i = 0; i < count; ++i) out.push_back(random_coboundary_instance(1 + i % 4, 3, seed0 + i));
    return out;
}

Outcome criterion_1() {
    Outcome o;
    auto corpus = groupoid_corpus();
    for (const auto& g : corpus) {
        Report r = roundtrip_A(g);
        if (!r.pass() || !r.find("gamma bijective")->pass) o.fail(r.first_failure()->name);
    }
    if (corpus.size() < 50) o.fail("corpus too small");
    if (o.pass) o.detail = std::to_string(corpus.size()) + " groupoids";
    return o;
}

Outcome criterion_2() {
    Outcome o;
    int checked = 0;
    for (const auto& g : groupoid_corpus()) {
        if (count_bisections(*g) > 300) continue;
        auto p = full_pseudogroup(g);
        Report r = check_metric(*p->semigroup);
        if (!r.pass()) o.fail(r.first_failure()->name);
        ++checked;
    }
    if (o.pass) o.detail = std::to_string(checked) + " semigroups, all pairs and triples";
    return o;
}

Outcome criterion_3() {
    Outcome o;
    auto corpus = coboundary_corpus(32, 500);
    double worst = 0;
    for (const auto& a : corpus) {
        CrossedProduct cp = crossed_product(a);
        if (!cp.construction.pass()) o.fail("construction");
        Report ids = check_identities(cp);
        if (!ids.pass()) o.fail(ids.first_failure()->name);
        int d = 0;
        for (std::size_t g = 0; g < a.num_arrows(); ++g)
            d += a.field[a.groupoid->src(static_cast<int>(g))] * a.field[a.groupoid->tgt(static_cast<int>(g))];
        if (cp.inclusion.ambient.dim() != d) o.fail("dim M");
        std::mt19937_64 rng(1);
        for (bool sym : {false, true}) {
            Basis basis = compute_basis(*a.groupoid, sym);
            Element x = random_element(cp.inclusion.ambient, rng);
            double res = max_abs(sub(reconstruct(cp, fourier(cp, x, basis), basis), x));
            worst = std::max(worst, res);
            if (res >= kResidual) o.fail("fourier residual " + std::to_string(res));
        }
        if (!validate_expectation(cp.inclusion).pass()) o.fail("validate_expectation");
    }
    if (o.pass) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%zu actions, fourier residual %.1e", corpus.size(), worst);
        o.detail = buf;
    }
    return o;
}

Outcome criterion_4() {
    Outcome o;
    auto corpus = coboundary_corpus(16, 800);
    std::mt19937_64 rng(3);
    // z/2 swapping 1<->2 and 3<->4: free, two orbits
    corpus.push_back(random_coboundary_action(
        share(transformation_groupoid(WeightedSet::uniform(4), cyclic_group(2), {0, 1, 2, 3, 1, 0, 3, 2})), {2, 2, 1, 1},
        rng));
    int free_count = 0;
    for (const auto& a : corpus) {
        if (!is_free(a).free) continue;
        ++free_count;
        CrossedProduct cp = crossed_product(a);
        auto rc = check_relative_commutant(cp);
        if (rc.commutant_dim != rc.center_dim) o.fail("B'∩M larger than Z(B) on a free action");
        auto f = check_factor(cp);
        if ((f.center_dim == 1) != (f.orbits == 1) || f.center_dim != f.orbits) o.fail("factor iff one orbit");
    }
    auto z2 = share(group_bundle(WeightedSet::uniform(1), cyclic_group(2)));
    Mat d = Mat::Identity(2, 2);
    d(1, 1) = -1;
    auto inner = check_relative_commutant(crossed_product(make_action(z2, {2}, {Mat::Identity(2, 2), d})));
    if (inner.commutant_dim != 2 || inner.center_dim != 1) o.fail("inner z/2 fixture dimensions");
    if (o.pass)
        o.detail = std::to_string(free_count) + " free actions; inner z/2: dim B'∩M = " +
                   std::to_string(inner.commutant_dim) + " > " + std::to_string(inner.center_dim) + " = dim Z(B)";
    return o;
}

Outcome criterion_5() {
    Outcome o;
    std::vector<CocycleAction> corpus;
    for (int i = 0; i < 22; ++i) corpus.push_back(random_coboundary_instance(1 + i % 4, 1 + i % 3, 900 + i));
    double worst = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        Report r = roundtrip_B(corpus[i], 1 + i);
        worst = std::max(worst, r.max_residual());
        if (!r.pass()) o.fail(r.first_failure()->name);
        if (r.max_residual() >= kResidual) o.fail("residual");
        Report back = roundtrip_B_inclusion(crossed_product(corpus[i]).inclusion, 2 + i);
        if (!back.pass()) o.fail("inclusion: " + back.first_failure()->name);
    }
    if (o.pass) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%zu actions, max residual %.1e", corpus.size(), worst);
        o.detail = buf;
    }
    return o;
}

std::vector<SubInclusion> subrelation_corpus() {
    auto out = strongly_normal_ergodic_inclusions(8);
    for (std::uint64_t s = 1; s <= 20; ++s) out.push_back(random_subrelation(2 + s % 7, s, true, true));
    return out;
}

SubInclusion uneven_fixture() {
    WeightedSet b = WeightedSet::uniform(3);
    return {EquivRel::full(b), EquivRel(b, {{0, 1}, {2}})};
}

Outcome criterion_6() {
    Outcome o;
    auto corpus = subrelation_corpus();
    for (const auto& inc : corpus) {
        Report r = roundtrip_C(inc);
        if (!r.pass()) o.fail(r.first_failure()->name);
        auto q = quotient_groupoid_rel(inc);
        if (!(semidirect_product(inc.big.base(), q.action).relation == inc.big)) o.fail("semidirect product");
    }
    auto bad = uneven_fixture();
    if (is_strongly_normal(bad).strongly_normal) o.fail("fixture reported strongly normal");
    try {
        normalizing_germs(vn_inclusion(bad));
        o.fail("fixture extraction succeeded");
    } catch (const Error& e) {
        if (e.code() != ErrorCode::IncompleteGermFamily) o.fail(std::string("fixture: ") + e.what());
    }
    if (o.pass) o.detail = std::to_string(corpus.size()) + " inclusions; fixture refused with IncompleteGermFamily";
    return o;
}

Outcome criterion_7() {
    Outcome o;
    int count = 0;
    for (int n = 1; n <= 6; ++n) {
        auto parts = oracle::set_partitions(n);
        WeightedSet base = WeightedSet::uniform(n);
        for (const auto& R : parts)
            for (const auto& S : parts) {
                auto rl = oracle::labels(R, n), sl = oracle::labels(S, n);
                bool refines = true;
                for (int x = 0; x < n && refines; ++x)
                    for (int y = 0; y < n; ++y)
                        if (sl[x] == sl[y] && rl[x] != rl[y]) refines = false;
                if (!refines) continue;
                ++count;
                SubInclusion inc(EquivRel(base, R), EquivRel(base, S));
                if (is_strongly_normal(inc).strongly_normal != oracle::strongly_normal_brute(rl, sl))
                    o.fail("strong normality disagrees at n=" + std::to_string(n));
                auto q = quotient_semigroup_rel(inc, false, 1 << 20);
                std::set<std::vector<int>> got(q.quotient->maps.begin(), q.quotient->maps.end());
                if (got.size() != q.quotient->maps.size() || got != oracle::quotient_maps_brute(rl, sl))
                    o.fail("quotient semigroup disagrees at n=" + std::to_string(n));
            }
    }
    if (o.pass) o.detail = std::to_string(count) + " inclusions, exhaustive";
    return o;
}

Outcome criterion_8() {
    Outcome o;
    std::vector<SubInclusion> corpus;
    for (auto& inc : strongly_normal_ergodic_inclusions(6))
        if (oracle::partial_injections(static_cast<int>(inc.small.classes().size())) <= kDefaultCap)
            corpus.push_back(inc);
    for (std::uint64_t s = 1; s <= 10; ++s) {
        auto inc = random_subrelation(2 + s % 5, 40 + s, true, true);
        if (oracle::partial_injections(static_cast<int>(inc.small.classes().size())) <= kDefaultCap)
            corpus.push_back(inc);
    }
    double worst = 0;
    for (const auto& inc : corpus) {
        Report r = bridge_checks(inc);
        if (!r.pass()) o.fail(r.first_failure()->name);
        const Check* u = r.find("U/U lambda(x) U* = rho(theta(x)) on generators");
        if (!u || u->residual >= kResidual) o.fail("U residual");
        else worst = std::max(worst, u->residual);
        if (!r.find("Omega/bijective") || !r.find("Omega/bijective")->pass) o.fail("Omega not bijective");
    }
    if (o.pass) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%zu inclusions, U residual %.1e", corpus.size(), worst);
        o.detail = buf;
    }
    return o;
}

} // namespace

int main() {
    struct Item {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Item> items = {
        {1, "groupoid <-> inverse semigroup round trip", 10, criterion_1},
        {2, "metric suite", 30, criterion_2},
        {3, "crossed product identities", 30, criterion_3},
        {4, "relative commutant and factoriality", 10, criterion_4},
        {5, "action <-> regular inclusion round trip", 60, criterion_5},
        {6, "subrelation round trip", 30, criterion_6},
        {7, "oracle equivalences on all inclusions over <= 6 atoms", 300, criterion_7},
        {8, "unitary U and lattice isomorphism Omega", 60, criterion_8},
    };
    int failed = 0;
    for (const auto& it : items) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = it.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s > it.budget_s) o.fail(o.detail + "; over time budget");
        std::printf("[%s] criterion %d: %s | %s | %.2f s (budget %.0f s)\n", o.pass ? "PASS" : "FAIL", it.id, it.name,
                    o.detail.c_str(), s, it.budget_s);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
