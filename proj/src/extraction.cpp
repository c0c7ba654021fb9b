#include "cartan/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "cartan/errors.hpp"

namespace cartan {

GermFamily normalizing_germs(const Inclusion& inc, double tol) {
    GermFamily out;
    Report& r = out.report;
    Report val = validate_expectation(inc, 1, tol);
    if (!val.pass()) throw Error(ErrorCode::MalformedInput, "expectation: " + val.summary());
    r.merge("expectation", val);

    const auto& M = inc.ambient;
    const auto& B = inc.sub;
    const int k = B.num_blocks();
    std::vector<Element> S;
    for (const auto& b : B.matrix_units()) S.push_back(inc.lift(b));
    const int comm = static_cast<int>(commutant_in(M, S, tol).size());
    if (comm != k)
        throw Error(ErrorCode::RelativeCommutantViolation,
                    "dim B'∩M = " + std::to_string(comm) + " but dim Z(B) = " + std::to_string(k));
    r.add("relative commutant is the center of B", true, std::to_string(comm));

    out.index.assign(k, std::vector<int>(k, -1));
    double norm_res = 0;
    for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y) {
            if (B.block(x) != B.block(y)) continue;
            const int n = B.block(x);
            auto ints = intertwiners(inc, x, y, Mat::Identity(n, n), tol);
            if (ints.empty()) continue;
            if (ints.size() > 1)
                throw Error(ErrorCode::RelativeCommutantViolation, "intertwiner space of dimension " +
                                                                      std::to_string(ints.size()) + " between blocks");
            Element v = x == y ? inc.central(x) : polar_unitary(ints[0], tol);
            norm_res = std::max(norm_res, max_abs(sub(mul(adjoint(v), v), inc.central(y))));
            norm_res = std::max(norm_res, max_abs(sub(mul(v, adjoint(v)), inc.central(x))));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Element lhs = mul(mul(v, inc.lift(B.unit(y, i, j))), adjoint(v));
                    norm_res = std::max(norm_res, max_abs(sub(lhs, inc.lift(B.unit(x, i, j)))));
                }
            out.index[x][y] = static_cast<int>(out.germs.size());
            out.germs.push_back({y, x, std::move(v)});
        }
    r.add("germ reps normalize B", norm_res <= 1e-8, {}, norm_res);

    double orth = 0, ez = 0;
    const std::size_t G = out.germs.size();
    for (std::size_t m = 0; m < G; ++m) {
        const Germ& a = out.germs[m];
        Element e = inc.E(a.rep);
        Element want = a.src == a.tgt ? B.block_indicator(a.src) : B.zero();
        ez = std::max(ez, max_abs(sub(e, want)));
        for (std::size_t q = m + 1; q < G; ++q) {
            if (out.germs[q].tgt != a.tgt) continue; // disjoint ranges multiply to 0
            orth = std::max(orth, max_abs(inc.E(mul(adjoint(a.rep), out.germs[q].rep))));
        }
    }
    r.add("germ reps orthogonal under E", orth <= 1e-8, {}, orth);
    r.add("E(v) = v z", ez <= 1e-8, {}, ez);

    bool transitive = true;
    for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y)
            for (int z = 0; z < k; ++z)
                if (out.index[z][y] >= 0 && out.index[y][x] >= 0 && out.index[z][x] < 0) transitive = false;
    r.add("germ relation is an equivalence relation", transitive);

    int covered = 0;
    for (const auto& g : out.germs) covered += B.block(g.src) * B.block(g.tgt);
    if (covered != M.dim())
        throw Error(ErrorCode::IncompleteGermFamily,
                    "germs cover " + std::to_string(covered) + " of dim M = " + std::to_string(M.dim()));
    Mat span(M.dim(), covered);
    int c = 0;
    for (const auto& g : out.germs)
        for (int i = 0; i < B.block(g.tgt); ++i)
            for (int j = 0; j < B.block(g.tgt); ++j) span.col(c++) = M.vec(mul(inc.lift(B.unit(g.tgt, i, j)), g.rep));
    const int rank = static_cast<int>(orthonormal_span(span, tol).cols());
    r.add("germs span M", rank == M.dim(), std::to_string(covered) + " = dim M, rank " + std::to_string(rank));
    if (rank != M.dim()) throw Error(ErrorCode::IncompleteGermFamily, "germ products do not span M");
    return out;
}

WeightedSet block_base(const Inclusion& inc) {
    const int k = inc.sub.num_blocks();
    std::vector<std::string> ids;
    for (int x = 0; x < k; ++x) ids.push_back("x" + std::to_string(x));
    if (inc.weights.empty()) return WeightedSet::uniform(ids);
    std::vector<Rational> w;
    for (double d : inc.weights) w.push_back(approximate(d));
    return WeightedSet::create(ids, w, true);
}

QuotientSemigroup partial_injection_semigroup(const WeightedSet& base, const std::vector<std::vector<char>>& allowed,
                                              std::size_t cap) {
    QuotientSemigroup out;
    const int k = static_cast<int>(base.size());
    std::vector<std::vector<int>>& maps = out.maps;
    std::vector<int> cur(k, -1);
    std::vector<char> used(k, 0);
    std::function<void(int)> rec = [&](int x) {
        if (x == k) {
            if (maps.size() >= cap)
                throw Error(ErrorCode::CapExceeded, "quotient semigroup exceeds cap " + std::to_string(cap));
            maps.push_back(cur);
            return;
        }
        cur[x] = -1;
        rec(x + 1);
        for (int y = 0; y < k; ++y) {
            if (used[y] || !allowed[y][x]) continue;
            used[y] = 1;
            cur[x] = y;
            rec(x + 1);
            used[y] = 0;
            cur[x] = -1;
        }
    };
    rec(0);

    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < maps.size(); ++i) index.emplace(maps[i], static_cast<int>(i));
    const std::size_t N = maps.size();
    std::vector<std::string> ids(N);
    std::vector<int> table(N * N), inv(N);
    std::vector<std::pair<int, Subset>> embed;
    int zero = -1;
    for (std::size_t i = 0; i < N; ++i) {
        const auto& s = maps[i];
        std::string id;
        std::vector<int> iv(k, -1);
        bool idem = true;
        Subset dom;
        for (int x = 0; x < k; ++x) {
            if (s[x] < 0) continue;
            if (!id.empty()) id += ";";
            id += base.id(x) + "->" + base.id(s[x]);
            iv[s[x]] = x;
            idem = idem && s[x] == x;
            dom = dom | Subset::single(x);
        }
        ids[i] = id.empty() ? "0" : "{" + id + "}";
        if (id.empty()) zero = static_cast<int>(i);
        inv[i] = index.at(iv);
        if (idem) embed.emplace_back(static_cast<int>(i), dom);
    }
    std::vector<int> prod(k);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            for (int x = 0; x < k; ++x) prod[x] = maps[j][x] < 0 ? -1 : maps[i][maps[j][x]];
            table[i * N + j] = index.at(prod);
        }
    out.semigroup = std::make_shared<InvSemigroup>(base, std::move(ids), zero, std::move(table), std::move(inv), embed);
    out.report.merge("csm", validate_csm(*out.semigroup));
    return out;
}

QuotientSemigroup quotient_semigroup(const Inclusion& inc, const GermFamily& germs, std::size_t cap, double tol) {
    const double res_tol = std::max(tol, 1e-8);
    const int k = inc.sub.num_blocks();
    std::vector<std::vector<char>> allowed(k, std::vector<char>(k, 0));
    for (int y = 0; y < k; ++y)
        for (int x = 0; x < k; ++x) allowed[y][x] = germs.at(y, x) >= 0;
    QuotientSemigroup out = partial_injection_semigroup(block_base(inc), allowed, cap);

    // products of germ reps land on the composed germ up to a unitary of B
    const auto& B = inc.sub;
    double res = 0;
    for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y) {
            if (germs.at(y, x) < 0) continue;
            for (int z = 0; z < k; ++z) {
                if (germs.at(z, y) < 0) continue;
                const Element& vzx = germs.germs[germs.at(z, x)].rep;
                Element p = mul(germs.germs[germs.at(z, y)].rep, germs.germs[germs.at(y, x)].rep);
                Element u = inc.E(mul(p, adjoint(vzx)));
                res = std::max(res, max_abs(sub(p, mul(inc.lift(u), vzx))));
                Mat uz = u[z];
                res = std::max(res, max_abs(Mat(uz * uz.adjoint() - Mat::Identity(B.block(z), B.block(z)))));
            }
        }
    out.report.add("germ products resolve through unitaries of B", res <= res_tol, {}, res);
    return out;
}

// ---------------------------------------------------------------------------

Element Extraction::to_cp(const Element& x) const {
    return cp.inclusion.ambient.unvec(theta * source.ambient.vec(x));
}

Element Extraction::from_cp(const Element& y) const {
    return source.ambient.unvec(theta_inv * cp.inclusion.ambient.vec(y));
}

namespace {

// V with E(v ε(e_ij) v*) = V e_ij V* in block t, first column phase fixed.
Mat implementing_unitary(const Inclusion& inc, const Element& v, int s, int t) {
    const auto& B = inc.sub;
    const int n = B.block(s);
    auto image = [&](int i, int j) { return Mat(inc.E(mul(mul(v, inc.lift(B.unit(s, i, j))), adjoint(v)))[t]); };
    Mat P = image(0, 0);
    Eigen::Index k = 0;
    for (Eigen::Index i = 1; i < n; ++i)
        if (std::abs(P(i, i)) > std::abs(P(k, k))) k = i;
    if (std::abs(P(k, k)) < 1e-6) throw Error(ErrorCode::NumericallySingular, "germ rep kills a matrix unit");
    Vec w = P.col(k) / std::sqrt(std::abs(P(k, k)));
    Mat V(n, n);
    for (int i = 0; i < n; ++i) V.col(i) = image(i, 0) * w;
    return V;
}

} // namespace

Extraction extract(const Inclusion& inc, const ExtractOptions& opt) {
    Extraction ex;
    ex.source = inc;
    ex.germs = normalizing_germs(inc, opt.tol);
    Report& r = ex.report;
    r.merge("germs", ex.germs.report);
    const auto& B = inc.sub;

    if (opt.perturb_seed) {
        std::mt19937_64 rng(opt.perturb_seed);
        std::uniform_real_distribution<double> ph(0, 2 * M_PI);
        for (auto& g : ex.germs.germs) {
            if (g.src == g.tgt) continue;
            Element w = B.zero();
            w[g.tgt] = random_unitary(B.block(g.tgt), rng);
            g.rep = scale(mul(inc.lift(w), g.rep), std::polar(1.0, ph(rng)));
        }
    }

    ex.quotient = quotient_semigroup(inc, ex.germs, opt.cap, opt.tol);
    r.merge("quotient", ex.quotient.report);
    ex.synthesis = groupoid_of(ex.quotient.semigroup, find_generators(*ex.quotient.semigroup), opt.cap);
    GroupoidPtr G = ex.synthesis.groupoid;
    const int m = static_cast<int>(G->num_arrows());

    std::vector<int> field(B.blocks());
    std::vector<Mat> alpha;
    for (int g = 0; g < m; ++g) {
        int at = ex.germs.at(G->tgt(g), G->src(g));
        if (at < 0) throw Error(ErrorCode::DecompositionFailure, "arrow without germ: " + G->arrow_id(g));
        ex.lifts.push_back(ex.germs.germs[at].rep);
        const int n = field[G->src(g)];
        alpha.push_back(G->is_unit(g) ? Mat(Mat::Identity(n, n)) : implementing_unitary(inc, ex.lifts[g], G->src(g), G->tgt(g)));
    }
    CocycleAction a = make_action(G, field, alpha);
    double lift_res = 0;
    for (int g = 0; g < m; ++g)
        for (int h = 0; h < m; ++h) {
            int gh = G->compose(g, h);
            if (gh < 0) continue;
            Element p = mul(ex.lifts[g], ex.lifts[h]);
            Element u = inc.E(mul(p, adjoint(ex.lifts[gh])));
            lift_res = std::max(lift_res, max_abs(sub(p, mul(inc.lift(u), ex.lifts[gh]))));
            a.u[static_cast<std::size_t>(g) * m + h] = u[G->tgt(g)];
        }
    r.add("lift defect lies in B", lift_res <= 1e-8, {}, lift_res);
    ex.action = a;
    r.merge("action", validate_action(ex.action, opt.tol));
    Freeness fr = is_free(ex.action, opt.tol);
    r.add("extracted action is free", fr.free);

    ex.cp = crossed_product(ex.action, opt.seed);
    r.merge("crossed product", ex.cp.construction);

    // θ⁻¹(X u_g) = ε(X) L_g in abstract coordinates, then to block form
    const int N = ex.cp.abstract_dim();
    if (N != inc.ambient.dim()) throw Error(ErrorCode::DimensionMismatch, "crossed product and M differ in dimension");
    Mat T(N, N);
    for (int g = 0; g < m; ++g) {
        const int t = G->tgt(g), n = field[t];
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                T.col(ex.cp.offset[g] + j * n + i) = inc.ambient.vec(mul(inc.lift(B.unit(t, i, j)), ex.lifts[g]));
    }
    ex.theta_inv = T * ex.cp.to_abstract;
    Eigen::PartialPivLU<Mat> lu(ex.theta_inv);
    ex.theta = lu.inverse();
    double bij = max_abs(Mat(ex.theta * ex.theta_inv - Mat::Identity(N, N)));
    r.add("theta bijective", bij <= 1e-8, {}, bij);

    std::mt19937_64 rng(opt.seed);
    double multi = 0, star = 0, expc = 0, bb = 0;
    for (int s = 0; s < 20; ++s) {
        Element x = random_element(inc.ambient, rng), y = random_element(inc.ambient, rng);
        multi = std::max(multi, max_abs(sub(ex.to_cp(mul(x, y)), mul(ex.to_cp(x), ex.to_cp(y)))));
        star = std::max(star, max_abs(sub(ex.to_cp(adjoint(x)), adjoint(ex.to_cp(x)))));
        expc = std::max(expc, max_abs(sub(ex.cp.inclusion.E(ex.to_cp(x)), inc.E(x))));
    }
    for (const auto& b : B.matrix_units()) bb = std::max(bb, max_abs(sub(ex.to_cp(inc.lift(b)), ex.cp.inclusion.lift(b))));
    r.add("theta multiplicative", multi <= 1e-8, {}, multi);
    r.add("theta *-preserving", star <= 1e-8, {}, star);
    r.add("theta(B) = B", bb <= 1e-8, {}, bb);
    r.add("theta intertwines expectations", expc <= 1e-8, {}, expc);
    return ex;
}

Inclusion erase_labels(const Inclusion& inc, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto& M = inc.ambient;
    const auto& B = inc.sub;
    std::vector<int> pm(M.num_blocks()), pb(B.num_blocks());
    std::iota(pm.begin(), pm.end(), 0);
    std::iota(pb.begin(), pb.end(), 0);
    std::shuffle(pm.begin(), pm.end(), rng);
    std::shuffle(pb.begin(), pb.end(), rng);
    std::vector<Mat> U, W;
    for (int b : M.blocks()) U.push_back(random_unitary(b, rng));
    for (int b : B.blocks()) W.push_back(random_unitary(b, rng));

    std::vector<int> mb(M.num_blocks()), bb(B.num_blocks());
    for (int q = 0; q < M.num_blocks(); ++q) mb[pm[q]] = M.block(q);
    for (int q = 0; q < B.num_blocks(); ++q) bb[pb[q]] = B.block(q);
    MultiMatrixAlgebra M2(mb), B2(bb);

    auto phi = [&](const Element& x) {
        Element y(x.size());
        for (std::size_t q = 0; q < x.size(); ++q) y[pm[q]] = U[q] * x[q] * U[q].adjoint();
        return y;
    };
    auto phi_inv = [&](const Element& y) {
        Element x(y.size());
        for (std::size_t q = 0; q < y.size(); ++q) x[q] = U[q].adjoint() * y[pm[q]] * U[q];
        return x;
    };
    auto rho = [&](const Element& b) {
        Element c(b.size());
        for (std::size_t q = 0; q < b.size(); ++q) c[pb[q]] = W[q] * b[q] * W[q].adjoint();
        return c;
    };
    auto rho_inv = [&](const Element& c) {
        Element b(c.size());
        for (std::size_t q = 0; q < c.size(); ++q) b[q] = W[q].adjoint() * c[pb[q]] * W[q];
        return b;
    };
    Mat embed(M2.dim(), B2.dim()), expect(B2.dim(), M2.dim());
    auto bu = B2.matrix_units();
    for (std::size_t c = 0; c < bu.size(); ++c) embed.col(c) = M2.vec(phi(inc.lift(rho_inv(bu[c]))));
    auto mu = M2.matrix_units();
    for (std::size_t c = 0; c < mu.size(); ++c) expect.col(c) = B2.vec(rho(inc.E(phi_inv(mu[c]))));
    std::vector<double> w(inc.weights.size());
    for (std::size_t q = 0; q < inc.weights.size(); ++q) w[pb[q]] = inc.weights[q];
    return make_inclusion(M2, B2, embed, expect, w);
}

std::optional<GroupoidIso> principal_iso(const Groupoid& g1, const std::vector<int>& f1, const Groupoid& g2,
                                         const std::vector<int>& f2) {
    if (g1.num_atoms() != g2.num_atoms() || g1.num_arrows() != g2.num_arrows()) return std::nullopt;
    OrbitData o1 = orbits_isotropy(g1), o2 = orbits_isotropy(g2);
    if (!o1.principal() || !o2.principal()) return std::nullopt;
    using Sig = std::vector<std::pair<Rational, int>>;
    auto sorted_orbit = [](const Groupoid& g, const std::vector<int>& f, std::vector<int> orbit) {
        std::sort(orbit.begin(), orbit.end(), [&](int a, int b) {
            return std::make_pair(g.base().weight(a), f[a]) < std::make_pair(g.base().weight(b), f[b]);
        });
        Sig s;
        for (int a : orbit) s.emplace_back(g.base().weight(a), f[a]);
        return std::make_pair(orbit, s);
    };
    GroupoidIso iso;
    iso.atoms.assign(g1.num_atoms(), -1);
    std::vector<char> taken(o2.orbits.size(), 0);
    for (const auto& orb : o1.orbits) {
        auto [a1, s1] = sorted_orbit(g1, f1, orb);
        bool found = false;
        for (std::size_t q = 0; q < o2.orbits.size() && !found; ++q) {
            if (taken[q]) continue;
            auto [a2, s2] = sorted_orbit(g2, f2, o2.orbits[q]);
            if (s1 != s2) continue;
            taken[q] = 1;
            found = true;
            for (std::size_t i = 0; i < a1.size(); ++i) iso.atoms[a1[i]] = a2[i];
        }
        if (!found) return std::nullopt;
    }
    std::map<std::pair<int, int>, int> by_ends;
    for (std::size_t g = 0; g < g2.num_arrows(); ++g)
        by_ends[{g2.src(static_cast<int>(g)), g2.tgt(static_cast<int>(g))}] = static_cast<int>(g);
    for (std::size_t g = 0; g < g1.num_arrows(); ++g) {
        auto it = by_ends.find({iso.atoms[g1.src(static_cast<int>(g))], iso.atoms[g1.tgt(static_cast<int>(g))]});
        if (it == by_ends.end()) return std::nullopt;
        iso.arrows.push_back(it->second);
    }
    if (!check_groupoid_iso(g1, g2, iso).pass()) return std::nullopt;
    return iso;
}

Report roundtrip_B(const CocycleAction& a, std::uint64_t seed, std::size_t cap) {
    Report r;
    try {
        CrossedProduct cp = crossed_product(a, seed);
        r.merge("crossed product", cp.construction);
        Inclusion erased = erase_labels(cp.inclusion, seed + 1);
        ExtractOptions opt;
        opt.cap = cap;
        opt.seed = seed;
        Extraction ex = extract(erased, opt);
        r.merge("extract", ex.report);

        auto iso = principal_iso(*ex.action.groupoid, ex.action.field, *a.groupoid, a.field);
        r.add("groupoid recovered up to isomorphism", iso.has_value());
        if (iso) {
            CocycleAction moved = transport_action(ex.action, a.groupoid, *iso);
            r.merge("conjugacy", verify_conjugacy(a, moved, find_conjugacy(a, moved)));
        }

        opt.perturb_seed = seed + 7;
        Extraction ex2 = extract(erased, opt);
        r.add("perturbed extraction", ex2.report.pass(), ex2.report.pass() ? std::string{} : ex2.report.summary());
        auto iso2 = principal_iso(*ex2.action.groupoid, ex2.action.field, *ex.action.groupoid, ex.action.field);
        r.add("perturbed extraction gives the same groupoid", iso2.has_value());
        if (iso2) {
            CocycleAction moved = transport_action(ex2.action, ex.action.groupoid, *iso2);
            r.merge("choice independence", verify_conjugacy(ex.action, moved, find_conjugacy(ex.action, moved)));
        }
    } catch (const Error& e) {
        r.add("pipeline", false, e.what());
    }
    return r;
}

Report roundtrip_B_inclusion(const Inclusion& inc, std::uint64_t seed, std::size_t cap) {
    Report r;
    try {
        ExtractOptions opt;
        opt.cap = cap;
        opt.seed = seed;
        Extraction ex = extract(inc, opt);
        r.merge("extract", ex.report);
        r.merge("regularity", check_regularity(ex.cp));
    } catch (const Error& e) {
        r.add("pipeline", false, e.what());
    }
    return r;
}

} // namespace cartan
