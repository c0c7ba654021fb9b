#include "cartan/equiv_rel.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <boost/rational.hpp>

#include "cartan/errors.hpp"

namespace cartan {

namespace {

std::string pair_name(const WeightedSet& b, int x, int y) { return "(" + b.id(x) + "," + b.id(y) + ")"; }

std::vector<int> positions(const std::vector<std::vector<int>>& classes, std::size_t n) {
    std::vector<int> pos(n, -1);
    for (const auto& c : classes)
        for (std::size_t i = 0; i < c.size(); ++i) pos[c[i]] = static_cast<int>(i);
    return pos;
}

std::vector<int> invert(const std::vector<int>& p) {
    std::vector<int> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
    return q;
}

std::vector<int> compose_perm(const std::vector<int>& a, const std::vector<int>& b) { // a ∘ b
    std::vector<int> c(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
    return c;
}

bool is_identity(const std::vector<int>& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != static_cast<int>(i)) return false;
    return true;
}

bool is_permutation(const std::vector<int>& p, std::size_t n) {
    if (p.size() != n) return false;
    std::vector<char> seen(n, 0);
    for (int v : p) {
        if (v < 0 || v >= static_cast<int>(n) || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

Mat permutation_matrix(const std::vector<int>& p) {
    const int n = static_cast<int>(p.size());
    Mat m = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) m(p[i], i) = 1.0;
    return m;
}

std::vector<int> fiber_sizes(const std::vector<std::vector<int>>& fibers) {
    std::vector<int> out;
    for (const auto& f : fibers) out.push_back(static_cast<int>(f.size()));
    return out;
}

} // namespace

// ---------------------------------------------------------------------------

EquivRel::EquivRel(WeightedSet base, std::vector<std::vector<int>> classes) : base_(std::move(base)) {
    const int n = static_cast<int>(base_.size());
    class_of_.assign(n, -1);
    for (auto& c : classes) {
        if (c.empty()) throw Error(ErrorCode::MalformedInput, "empty class");
        std::sort(c.begin(), c.end());
    }
    std::sort(classes.begin(), classes.end());
    for (std::size_t k = 0; k < classes.size(); ++k)
        for (int x : classes[k]) {
            if (x < 0 || x >= n) throw Error(ErrorCode::MalformedInput, "class member out of range");
            if (class_of_[x] != -1) throw Error(ErrorCode::MalformedInput, "atom " + base_.id(x) + " in two classes");
            class_of_[x] = static_cast<int>(k);
        }
    for (int x = 0; x < n; ++x)
        if (class_of_[x] == -1) throw Error(ErrorCode::MalformedInput, "atom " + base_.id(x) + " in no class");
    classes_ = std::move(classes);
}

EquivRel EquivRel::diagonal(const WeightedSet& base) {
    std::vector<std::vector<int>> c;
    for (std::size_t x = 0; x < base.size(); ++x) c.push_back({static_cast<int>(x)});
    return EquivRel(base, c);
}

EquivRel EquivRel::full(const WeightedSet& base) {
    std::vector<int> all(base.size());
    std::iota(all.begin(), all.end(), 0);
    return EquivRel(base, {all});
}

std::size_t EquivRel::num_pairs() const {
    std::size_t n = 0;
    for (const auto& c : classes_) n += c.size() * c.size();
    return n;
}

SubInclusion::SubInclusion(EquivRel r, EquivRel s) : big(std::move(r)), small(std::move(s)) {
    if (!(big.base() == small.base())) throw Error(ErrorCode::MalformedInput, "relations on different bases");
    for (const auto& c : small.classes())
        for (int x : c)
            if (!big.related(c.front(), x))
                throw Error(ErrorCode::MalformedInput,
                            "S is not contained in R: " + pair_name(big.base(), c.front(), x));
}

ErgodicDecomposition ergodic_decomposition(const EquivRel& s) {
    ErgodicDecomposition d;
    std::vector<std::string> ids;
    std::vector<Rational> w;
    for (const auto& c : s.classes()) {
        std::string id;
        Rational m(0);
        for (int x : c) {
            id += (id.empty() ? "" : ",") + s.base().id(x);
            m += s.base().weight(x);
        }
        ids.push_back("{" + id + "}");
        w.push_back(m);
    }
    d.Z = WeightedSet::create(ids, w);
    d.pi.resize(s.num_atoms());
    for (std::size_t x = 0; x < s.num_atoms(); ++x) d.pi[x] = s.class_of(static_cast<int>(x));
    return d;
}

// ---------------------------------------------------------------------------
// A global S-preserving bijection carries each S-class onto an S-class of the
// same size, so R is covered by such graphs exactly when all S-classes inside
// one R-class have equal size. In that case the shifts
//   C_i[j] -> C_{i+a mod k}[j+b mod s]
// over the k classes of size s of each R-class cover every pair.

StrongNormality is_strongly_normal(const SubInclusion& inc, std::size_t budget) {
    const EquivRel& R = inc.big;
    const EquivRel& S = inc.small;
    const int n = static_cast<int>(R.num_atoms());
    StrongNormality out;

    for (int x = 0; x < n && out.refuting.first < 0; ++x)
        for (int y = 0; y < n; ++y)
            if (R.related(x, y) && S.classes()[S.class_of(x)].size() != S.classes()[S.class_of(y)].size()) {
                out.refuting = {x, y};
                break;
            }
    if (out.refuting.first >= 0) {
        auto [x, y] = out.refuting;
        out.report.add("S-classes inside each R-class have equal size", false,
                       pair_name(R.base(), x, y) + " joins S-classes of sizes " +
                           std::to_string(S.classes()[S.class_of(x)].size()) + " and " +
                           std::to_string(S.classes()[S.class_of(y)].size()));
        return out;
    }
    out.report.add("S-classes inside each R-class have equal size", true);

    // S-classes per R-class, ordered
    std::vector<std::vector<int>> inside(R.classes().size());
    for (std::size_t c = 0; c < S.classes().size(); ++c)
        inside[R.class_of(S.classes()[c].front())].push_back(static_cast<int>(c));
    std::size_t count = 0;
    for (const auto& c : R.classes()) count = std::max(count, c.size());
    if (count > budget)
        throw Error(ErrorCode::SearchBudgetExceeded, std::to_string(count) + " witnesses exceed budget " +
                                                         std::to_string(budget));

    for (std::size_t t = 0; t < count; ++t) {
        std::vector<int> w(n);
        std::iota(w.begin(), w.end(), 0);
        for (const auto& cls : inside) {
            const std::size_t k = cls.size(), s = S.classes()[cls.front()].size();
            if (t >= k * s) continue;
            const std::size_t a = t / s, b = t % s;
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < s; ++j)
                    w[S.classes()[cls[i]][j]] = S.classes()[cls[(i + a) % k]][(j + b) % s];
        }
        out.witnesses.push_back(std::move(w));
    }

    bool bij = true, pres = true, in_r = true;
    std::vector<char> covered(static_cast<std::size_t>(n) * n, 0);
    for (const auto& w : out.witnesses) {
        bij = bij && is_permutation(w, n);
        for (int x = 0; x < n; ++x) {
            in_r = in_r && R.related(x, w[x]);
            covered[static_cast<std::size_t>(w[x]) * n + x] = 1;
            for (int y = 0; y < n; ++y) pres = pres && S.related(x, y) == S.related(w[x], w[y]);
        }
    }
    std::size_t hit = std::count(covered.begin(), covered.end(), 1);
    out.report.add("witnesses are bijections", bij);
    out.report.add("witnesses preserve S", pres);
    out.report.add("witness graphs lie in R", in_r);
    out.report.add("witness graphs cover R", hit == R.num_pairs(),
                   std::to_string(hit) + " of " + std::to_string(R.num_pairs()) + " pairs");
    out.strongly_normal = out.report.pass();
    return out;
}

// ---------------------------------------------------------------------------

MultiMatrixAlgebra vn_algebra(const EquivRel& r) {
    std::vector<int> b;
    for (const auto& c : r.classes()) b.push_back(static_cast<int>(c.size()));
    return MultiMatrixAlgebra(b);
}

Element relation_unit(const EquivRel& r, int row_atom, int col_atom) {
    if (!r.related(row_atom, col_atom)) throw Error(ErrorCode::MalformedInput, "pair not in the relation");
    auto pos = positions(r.classes(), r.num_atoms());
    return vn_algebra(r).unit(r.class_of(row_atom), pos[row_atom], pos[col_atom]);
}

Inclusion vn_inclusion(const SubInclusion& inc) {
    const EquivRel& R = inc.big;
    const EquivRel& S = inc.small;
    MultiMatrixAlgebra M = vn_algebra(R), B = vn_algebra(S);
    Mat embed = Mat::Zero(M.dim(), B.dim());
    for (int c = 0; c < B.num_blocks(); ++c) {
        const auto& C = S.classes()[c];
        const int s = B.block(c);
        for (int j = 0; j < s; ++j)
            for (int i = 0; i < s; ++i) embed.col(B.offset(c) + j * s + i) = M.vec(relation_unit(R, C[i], C[j]));
    }
    // entrywise compression onto the S-pairs
    Mat expect = embed.transpose();
    std::vector<double> w;
    for (const auto& C : S.classes()) {
        Rational m(0);
        for (int x : C) m += S.base().weight(x);
        w.push_back(boost::rational_cast<double>(m));
    }
    return make_inclusion(M, B, embed, expect, w);
}

Inclusion vn_algebra_of(const EquivRel& r) { return vn_inclusion(SubInclusion(r, EquivRel::diagonal(r.base()))); }

// ---------------------------------------------------------------------------

RelQuotient relation_germs(const SubInclusion& inc, bool reverse_lifts) {
    const EquivRel& R = inc.big;
    const EquivRel& S = inc.small;
    RelQuotient q;
    q.decomposition = ergodic_decomposition(S);
    q.fibers = S.classes();
    const int k = static_cast<int>(q.fibers.size());
    q.lift.assign(k, std::vector<std::vector<int>>(k));
    bool in_r = true;
    for (int d = 0; d < k; ++d)
        for (int c = 0; c < k; ++c) {
            const auto& C = q.fibers[c];
            const auto& D = q.fibers[d];
            if (C.size() != D.size() || !R.related(C.front(), D.front())) continue;
            std::vector<int> l(C.size());
            std::iota(l.begin(), l.end(), 0);
            if (reverse_lifts && c != d) std::reverse(l.begin(), l.end());
            for (std::size_t p = 0; p < C.size(); ++p) in_r = in_r && R.related(D[l[p]], C[p]);
            q.lift[d][c] = std::move(l);
        }
    q.report.add("lift graphs lie in R", in_r);
    return q;
}

RelQuotient quotient_semigroup_rel(const SubInclusion& inc, bool reverse_lifts, std::size_t cap) {
    RelQuotient q = relation_germs(inc, reverse_lifts);
    const std::size_t k = q.fibers.size();
    std::vector<std::vector<char>> allowed(k, std::vector<char>(k, 0));
    for (std::size_t d = 0; d < k; ++d)
        for (std::size_t c = 0; c < k; ++c) allowed[d][c] = !q.lift[d][c].empty();
    q.quotient = partial_injection_semigroup(q.decomposition.Z, allowed, cap);
    q.report.merge("semigroup", q.quotient->report);
    return q;
}

// ---------------------------------------------------------------------------

Report validate_fiber_action(const FiberAction& a) {
    Report r;
    const Groupoid& G = *a.groupoid;
    const int A = static_cast<int>(G.num_arrows());
    auto fib = [&](int x) { return a.fibers[x].size(); };

    bool shapes = static_cast<int>(a.alpha.size()) == A && a.phi.size() == static_cast<std::size_t>(A) * A;
    for (int g = 0; shapes && g < A; ++g)
        shapes = fib(G.src(g)) == fib(G.tgt(g)) && is_permutation(a.alpha[g], fib(G.src(g)));
    r.add("alpha maps fibers bijectively", shapes);
    if (!shapes) return r;

    bool units = true, full_group = true, comp = true, normal = true, coc = true;
    for (int x = 0; x < static_cast<int>(G.num_atoms()); ++x) units = units && is_identity(a.alpha[G.unit(x)]);
    for (int g = 0; g < A; ++g)
        for (int h = 0; h < A; ++h) {
            int gh = G.compose(g, h);
            if (gh < 0) continue;
            const auto& P = a.Phi(g, h);
            if (!is_permutation(P, fib(G.tgt(g)))) {
                full_group = false;
                continue;
            }
            comp = comp && compose_perm(a.alpha[g], a.alpha[h]) == compose_perm(P, a.alpha[gh]);
            if (G.is_unit(g) || G.is_unit(h)) normal = normal && is_identity(P);
        }
    r.add("unit arrows act trivially", units);
    r.add("Phi lies in the full group of the target fiber", full_group);
    r.add("alpha_g alpha_h = Phi(g,h) alpha_gh", comp);
    r.add("Phi normalized on units", normal);
    if (!full_group) return r;

    for (int g = 0; g < A; ++g) {
        auto ginv = invert(a.alpha[g]);
        for (int h = 0; h < A; ++h) {
            int gh = G.compose(g, h);
            if (gh < 0) continue;
            for (int k = 0; k < A; ++k) {
                int hk = G.compose(h, k);
                if (hk < 0) continue;
                auto lhs = compose_perm(a.alpha[g], compose_perm(a.Phi(h, k), ginv));
                auto rhs = compose_perm(a.Phi(g, h), compose_perm(a.Phi(gh, k), invert(a.Phi(g, hk))));
                coc = coc && lhs == rhs;
            }
        }
    }
    r.add("alpha_g Phi(h,k) alpha_g^-1 = Phi(g,h) Phi(gh,k) Phi(g,hk)^-1", coc);

    // fibers of S are single classes, so an isotropy arrow moves y inside its own class
    bool free = true;
    for (int g = 0; g < A; ++g)
        if (!G.is_unit(g) && G.src(g) == G.tgt(g)) free = false;
    r.add("free", free);
    return r;
}

RelQuotientGroupoid quotient_groupoid_rel(const SubInclusion& inc, bool reverse_lifts, std::size_t semigroup_cap) {
    if (!inc.big.ergodic())
        throw Error(ErrorCode::NonErgodic,
                    "R has " + std::to_string(inc.big.classes().size()) + " classes; restrict to one class");
    auto sn = is_strongly_normal(inc);
    if (!sn.strongly_normal)
        throw Error(ErrorCode::NotStronglyNormal, sn.report.first_failure()->detail);

    RelQuotientGroupoid out;
    out.quotient = relation_germs(inc, reverse_lifts);
    const auto& q = out.quotient;
    const int k = static_cast<int>(q.fibers.size());
    out.report.merge("germs", q.report);

    std::vector<std::vector<int>> classes;
    std::vector<char> seen(k, 0);
    for (int c = 0; c < k; ++c) {
        if (seen[c]) continue;
        classes.emplace_back();
        for (int d = 0; d < k; ++d)
            if (!q.lift[d][c].empty()) {
                seen[d] = 1;
                classes.back().push_back(d);
            }
    }
    out.groupoid = std::make_shared<const Groupoid>(principal_groupoid(q.decomposition.Z, classes));
    const Groupoid& G = *out.groupoid;
    const auto sizes = fiber_sizes(q.fibers);

    try {
        auto withsg = quotient_semigroup_rel(inc, reverse_lifts, semigroup_cap);
        out.quotient.quotient = withsg.quotient;
        out.report.merge("semigroup", withsg.quotient->report);
        auto sem = withsg.quotient->semigroup;
        out.synthesis = groupoid_of(sem, find_generators(*sem), semigroup_cap);
        out.report.add("semigroup route reproduces the germ groupoid",
                       principal_iso(*out.synthesis->groupoid, sizes, G, sizes).has_value());
    } catch (const Error& e) {
        if (e.code() != ErrorCode::CapExceeded) throw;
    }

    const int A = static_cast<int>(G.num_arrows());
    FiberAction& fa = out.action;
    fa.groupoid = out.groupoid;
    fa.fibers = q.fibers;
    for (int g = 0; g < A; ++g) fa.alpha.push_back(q.lift[G.tgt(g)][G.src(g)]);
    fa.phi.assign(static_cast<std::size_t>(A) * A, {});
    for (int g = 0; g < A; ++g)
        for (int h = 0; h < A; ++h) {
            int gh = G.compose(g, h);
            if (gh < 0) continue;
            fa.phi[static_cast<std::size_t>(g) * A + h] =
                compose_perm(fa.alpha[g], compose_perm(fa.alpha[h], invert(fa.alpha[gh])));
        }
    out.report.merge("action", validate_fiber_action(fa));
    return out;
}

// ---------------------------------------------------------------------------

SemidirectProduct semidirect_product(const WeightedSet& base, const FiberAction& a) {
    const Groupoid& G = *a.groupoid;
    const int n = static_cast<int>(base.size());
    std::vector<int> pi(n, -1), pos(n, -1);
    for (std::size_t z = 0; z < a.fibers.size(); ++z)
        for (std::size_t i = 0; i < a.fibers[z].size(); ++i) {
            pi[a.fibers[z][i]] = static_cast<int>(z);
            pos[a.fibers[z][i]] = static_cast<int>(i);
        }
    if (std::count(pi.begin(), pi.end(), -1))
        throw Error(ErrorCode::MalformedInput, "fibers do not cover the base");

    std::vector<char> rel(static_cast<std::size_t>(n) * n, 0); // rel[y2 * n + y1]
    for (int g = 0; g < static_cast<int>(G.num_arrows()); ++g) {
        const auto& src = a.fibers[G.src(g)];
        const auto& tgt = a.fibers[G.tgt(g)];
        for (int y1 : src) {
            int moved = tgt[a.alpha[g][pos[y1]]];
            // the fiber relation is all of tgt × tgt
            for (int y2 : tgt)
                if (pi[moved] == pi[y2]) rel[static_cast<std::size_t>(y2) * n + y1] = 1;
        }
    }
    SemidirectProduct out;
    bool refl = true, sym = true, trans = true;
    for (int x = 0; x < n; ++x) {
        refl = refl && rel[static_cast<std::size_t>(x) * n + x];
        for (int y = 0; y < n; ++y) {
            if (!rel[static_cast<std::size_t>(y) * n + x]) continue;
            sym = sym && rel[static_cast<std::size_t>(x) * n + y];
            for (int z = 0; z < n; ++z)
                if (rel[static_cast<std::size_t>(z) * n + y]) trans = trans && rel[static_cast<std::size_t>(z) * n + x];
        }
    }
    out.report.add("reflexive", refl);
    out.report.add("symmetric", sym);
    out.report.add("transitive", trans);
    if (!out.report.pass()) return out;
    std::vector<std::vector<int>> classes;
    std::vector<char> seen(n, 0);
    for (int x = 0; x < n; ++x) {
        if (seen[x]) continue;
        classes.emplace_back();
        for (int y = 0; y < n; ++y)
            if (rel[static_cast<std::size_t>(y) * n + x]) {
                seen[y] = 1;
                classes.back().push_back(y);
            }
    }
    out.relation = EquivRel(base, classes);
    return out;
}

CocycleAction induced_matrix_action(const FiberAction& a) {
    const Groupoid& G = *a.groupoid;
    const std::size_t A = G.num_arrows();
    std::vector<Mat> V;
    for (const auto& p : a.alpha) V.push_back(permutation_matrix(p));
    CocycleAction out = make_action(a.groupoid, fiber_sizes(a.fibers), V);
    out.u.assign(A * A, Mat());
    for (std::size_t i = 0; i < a.phi.size(); ++i)
        if (!a.phi[i].empty()) out.u[i] = permutation_matrix(a.phi[i]);
    return out;
}

// ---------------------------------------------------------------------------

Report check_U(const SubInclusion& inc, const RelQuotientGroupoid& q, double tol) {
    Report r;
    const EquivRel& R = inc.big;
    const FiberAction& fa = q.action;
    const Groupoid& G = *fa.groupoid;
    const int n = static_cast<int>(R.num_atoms());
    const int A = static_cast<int>(G.num_arrows());
    const CocycleAction act = induced_matrix_action(fa);

    std::vector<int> pi(n), pos(n);
    for (std::size_t z = 0; z < fa.fibers.size(); ++z)
        for (std::size_t i = 0; i < fa.fibers[z].size(); ++i) {
            pi[fa.fibers[z][i]] = static_cast<int>(z);
            pos[fa.fibers[z][i]] = static_cast<int>(i);
        }
    std::vector<int> offset(A + 1, 0);
    for (int g = 0; g < A; ++g) {
        int m = act.n(G.tgt(g));
        offset[g + 1] = offset[g] + m * m;
    }
    const int D = offset[A];
    std::map<std::pair<int, int>, int> arrow; // (tgt, src) -> g
    for (int g = 0; g < A; ++g) arrow[{G.tgt(g), G.src(g)}] = g;

    std::vector<std::pair<int, int>> pairs;
    std::map<std::pair<int, int>, int> pair_index;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (R.related(a, b)) {
                pair_index[{a, b}] = static_cast<int>(pairs.size());
                pairs.push_back({a, b});
            }
    const int P = static_cast<int>(pairs.size());
    r.add("dim h = |R|", D == P, std::to_string(D) + " vs " + std::to_string(P));
    if (D != P) return r;

    Mat U = Mat::Zero(D, P);
    for (int idx = 0; idx < P; ++idx) {
        auto [a, b] = pairs[idx];
        auto it = arrow.find({pi[a], pi[b]});
        if (it == arrow.end()) {
            r.add("every pair of R has an arrow", false, pair_name(R.base(), a, b));
            return r;
        }
        int g = it->second, m = act.n(pi[a]);
        U(offset[g] + fa.alpha[g][pos[b]] * m + pos[a], idx) = 1.0;
    }
    double unit_res = std::max(max_abs(Mat(U.adjoint() * U - Mat::Identity(P, P))),
                               max_abs(Mat(U * U.adjoint() - Mat::Identity(D, D))));
    r.add("U unitary", unit_res <= tol, {}, unit_res);

    auto flat = [&](const Coeffs& c) {
        Vec v = Vec::Zero(D);
        for (int g = 0; g < A; ++g) {
            int m = act.n(G.tgt(g));
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i) v(offset[g] + j * m + i) = c[g](i, j);
        }
        return v;
    };
    auto rho = [&](const Coeffs& x) {
        Mat out(D, D);
        for (int g = 0; g < A; ++g) {
            int m = act.n(G.tgt(g));
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i) {
                    Coeffs e = cp_zero(act);
                    e[g](i, j) = 1.0;
                    out.col(offset[g] + j * m + i) = flat(cp_mul(act, x, e));
                }
        }
        return out;
    };
    double res = 0;
    auto compare = [&](const Mat& lambda, const Coeffs& image) {
        res = std::max(res, max_abs(Mat(U * lambda * U.adjoint() - rho(image))));
    };
    // matrix units of L(S)
    for (std::size_t z = 0; z < fa.fibers.size(); ++z) {
        const auto& F = fa.fibers[z];
        for (std::size_t i = 0; i < F.size(); ++i)
            for (std::size_t j = 0; j < F.size(); ++j) {
                Mat lambda = Mat::Zero(P, P);
                for (int b = 0; b < n; ++b)
                    if (R.related(F[j], b)) lambda(pair_index[{F[i], b}], pair_index[{F[j], b}]) = 1.0;
                Coeffs image = cp_zero(act);
                image[G.unit(static_cast<int>(z))](i, j) = 1.0;
                compare(lambda, image);
            }
    }
    // bisection graphs of the lifts
    for (int g = 0; g < A; ++g) {
        const auto& src = fa.fibers[G.src(g)];
        const auto& tgt = fa.fibers[G.tgt(g)];
        Mat lambda = Mat::Zero(P, P);
        for (std::size_t p = 0; p < src.size(); ++p) {
            int from = src[p], to = tgt[fa.alpha[g][p]];
            for (int b = 0; b < n; ++b)
                if (R.related(from, b)) lambda(pair_index[{to, b}], pair_index[{from, b}]) = 1.0;
        }
        Coeffs image = cp_zero(act);
        image[g] = Mat::Identity(act.n(G.tgt(g)), act.n(G.tgt(g)));
        compare(lambda, image);
    }
    r.add("U lambda(x) U* = rho(theta(x)) on generators", res <= tol, {}, res);
    return r;
}

OmegaMap omega_map(const SubInclusion& inc, const RelQuotient& q, const Extraction& ex, double tol) {
    if (!q.quotient) throw Error(ErrorCode::MalformedInput, "quotient semigroup not computed");
    OmegaMap out;
    const EquivRel& R = inc.big;
    const Inclusion& vi = ex.source;
    const auto& I = *q.quotient;
    const auto& J = ex.quotient;
    const int k = static_cast<int>(q.fibers.size());
    std::map<std::vector<int>, int> jindex;
    for (std::size_t j = 0; j < J.maps.size(); ++j) jindex.emplace(J.maps[j], static_cast<int>(j));

    double norm_res = 0, germ_res = 0;
    bool found = true;
    out.hom.source = I.semigroup;
    out.hom.target = J.semigroup;
    for (const auto& sigma : I.maps) {
        Element u = vi.ambient.zero();
        for (int c = 0; c < k; ++c) {
            if (sigma[c] < 0) continue;
            const auto& C = q.fibers[c];
            const auto& Dd = q.fibers[sigma[c]];
            const auto& l = q.lift[sigma[c]][c];
            for (std::size_t p = 0; p < C.size(); ++p) u = add(u, relation_unit(R, Dd[l[p]], C[p]));
        }
        for (const auto& e : vi.sub.matrix_units()) {
            Element be = vi.lift(e);
            for (const Element& x : {mul(mul(u, be), adjoint(u)), mul(mul(adjoint(u), be), u)})
                norm_res = std::max(norm_res, max_abs(sub(x, vi.lift(vi.E(x)))));
        }
        std::vector<int> tau(k, -1);
        for (int c = 0; c < k; ++c)
            for (int d = 0; d < k; ++d)
                if (max_abs(mul(mul(vi.central(d), u), vi.central(c))) > 0.5) tau[c] = d;
        for (int c = 0; c < k; ++c) {
            if (tau[c] < 0) continue;
            int at = ex.germs.at(tau[c], c);
            if (at < 0) {
                found = false;
                continue;
            }
            Element part = mul(u, vi.central(c));
            const Element& v = ex.germs.germs[at].rep;
            Element w = vi.E(mul(part, adjoint(v)));
            germ_res = std::max(germ_res, max_abs(sub(part, mul(vi.lift(w), v))));
        }
        auto it = jindex.find(tau);
        if (it == jindex.end()) {
            found = false;
            out.hom.map.push_back(-1);
        } else {
            out.hom.map.push_back(it->second);
        }
    }
    out.report.add("u_phi normalizes L(S)", norm_res <= std::max(tol, 1e-8), {}, norm_res);
    out.report.add("u_phi lies in its germ class", germ_res <= std::max(tol, 1e-8), {}, germ_res);
    out.report.add("image found", found);
    if (!found) return out;
    std::vector<int> sorted = out.hom.map;
    std::sort(sorted.begin(), sorted.end());
    bool bij = J.maps.size() == I.maps.size() && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    out.report.add("bijective", bij, std::to_string(I.maps.size()) + " -> " + std::to_string(J.maps.size()));
    out.report.merge("hom", check_hom(out.hom));
    return out;
}

// ---------------------------------------------------------------------------

Report bridge_checks(const SubInclusion& inc, std::size_t cap) {
    if (!inc.big.ergodic()) throw Error(ErrorCode::NonErgodic, "R has several classes");
    Report r;
    auto sn = is_strongly_normal(inc);
    r.merge("strong normality", sn.report);
    Inclusion vi = vn_inclusion(inc);
    r.merge("expectation", validate_expectation(vi));

    bool regular = true;
    try {
        normalizing_germs(vi);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::IncompleteGermFamily) throw;
        regular = false;
    }
    r.add("strongly normal iff regular", sn.strongly_normal == regular,
          std::string("strongly normal: ") + (sn.strongly_normal ? "yes" : "no") +
              ", regular: " + (regular ? "yes" : "no"));
    if (!sn.strongly_normal) return r;

    auto q = quotient_groupoid_rel(inc, false, cap);
    r.merge("quotient", q.report);
    r.merge("U", check_U(inc, q));
    auto sd = semidirect_product(inc.big.base(), q.action);
    r.merge("semidirect product", sd.report);
    r.add("semidirect product equals R", sd.report.pass() && sd.relation == inc.big);

    auto qs = quotient_semigroup_rel(inc, false, cap);
    ExtractOptions opt;
    opt.cap = cap;
    Extraction ex = extract(vi, opt);
    r.merge("extraction", ex.report);
    r.merge("Omega", omega_map(inc, qs, ex).report);
    return r;
}

Report roundtrip_C(const SubInclusion& inc, std::size_t cap) {
    if (!inc.big.ergodic()) throw Error(ErrorCode::NonErgodic, "R has several classes");
    Report r;
    RelQuotientGroupoid q, q2;
    try {
        q = quotient_groupoid_rel(inc, false, cap);
        q2 = quotient_groupoid_rel(inc, true, cap);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotStronglyNormal) throw;
        r.add("strongly normal", false, e.what());
        return r;
    }
    r.merge("quotient", q.report);
    r.merge("reversed quotient", q2.report);
    for (const auto* qq : {&q, &q2}) {
        auto sd = semidirect_product(inc.big.base(), qq->action);
        std::string pre = qq == &q ? "semidirect product" : "reversed semidirect product";
        r.merge(pre, sd.report);
        r.add(pre + " equals R", sd.report.pass() && sd.relation == inc.big);
    }
    const auto sizes = fiber_sizes(q.action.fibers);
    auto iso = principal_iso(*q2.groupoid, sizes, *q.groupoid, sizes);
    r.add("reversed lifts give an isomorphic quotient groupoid", iso.has_value());
    if (iso) {
        CocycleAction a = induced_matrix_action(q.action);
        CocycleAction b = transport_action(induced_matrix_action(q2.action), q.groupoid, *iso);
        r.merge("reversed lifts give a conjugate action", verify_conjugacy(a, b, find_conjugacy(a, b)));
    }
    return r;
}

} // namespace cartan
