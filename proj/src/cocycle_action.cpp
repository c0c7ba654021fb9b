#include "cartan/cocycle_action.hpp"

#include <algorithm>
#include <cmath>

#include "cartan/errors.hpp"

namespace cartan {

Mat CocycleAction::cocycle(int g, int h) const {
    const Mat& m = u[static_cast<std::size_t>(g) * num_arrows() + h];
    if (m.size()) return m;
    int n = field[groupoid->tgt(g)];
    return Mat::Identity(n, n);
}

bool CocycleAction::cocycle_trivial(double tol) const {
    for (const auto& m : u)
        if (m.size() && max_abs(Mat(m - Mat::Identity(m.rows(), m.cols()))) > tol) return false;
    return true;
}

CocycleAction make_action(GroupoidPtr g, std::vector<int> field, std::vector<Mat> alpha) {
    const std::size_t m = g->num_arrows();
    return CocycleAction{std::move(g), std::move(field), std::move(alpha), std::vector<Mat>(m * m)};
}

namespace {

double unitarity(const Mat& v) {
    if (v.rows() != v.cols()) return INFINITY;
    return max_abs(Mat(v * v.adjoint() - Mat::Identity(v.rows(), v.rows())));
}

struct Worst {
    double value = 0;
    std::string where;
    void see(double v, const std::string& w) {
        if (v > value) {
            value = v;
            where = w;
        }
    }
};

} // namespace

Report validate_action(const CocycleAction& a, double tol) {
    Report r;
    const Groupoid& G = *a.groupoid;
    const int m = static_cast<int>(G.num_arrows());
    if (a.field.size() != G.num_atoms() || a.alpha.size() != G.num_arrows() ||
        a.u.size() != G.num_arrows() * G.num_arrows()) {
        r.add("shapes", false, "field/alpha/cocycle table sizes do not match the groupoid");
        return r;
    }
    bool shapes = true;
    std::string sw;
    for (std::size_t x = 0; x < a.field.size(); ++x)
        if (a.field[x] <= 0) {
            shapes = false;
            sw = "nonpositive block size at " + G.base().id(x);
        }
    for (int g = 0; g < m && shapes; ++g) {
        int ns = a.field[G.src(g)], nt = a.field[G.tgt(g)];
        if (ns != nt) {
            shapes = false;
            sw = "block size changes along arrow " + G.arrow_id(g);
        } else if (a.alpha[g].rows() != nt || a.alpha[g].cols() != ns) {
            shapes = false;
            sw = "unitary of arrow " + G.arrow_id(g) + " has the wrong size";
        }
    }
    for (int g = 0; g < m && shapes; ++g)
        for (int h = 0; h < m; ++h) {
            const Mat& c = a.u[static_cast<std::size_t>(g) * m + h];
            if (!c.size()) continue;
            if (G.compose(g, h) < 0 || c.rows() != a.field[G.tgt(g)] || c.cols() != c.rows()) {
                shapes = false;
                sw = "cocycle entry (" + G.arrow_id(g) + "," + G.arrow_id(h) + ")";
                break;
            }
        }
    r.add("shapes", shapes, sw);
    if (!shapes) return r;

    Worst un;
    for (int g = 0; g < m; ++g) un.see(unitarity(a.alpha[g]), G.arrow_id(g));
    for (int g = 0; g < m; ++g)
        for (int h = 0; h < m; ++h)
            if (G.compose(g, h) >= 0) un.see(unitarity(a.cocycle(g, h)), "u(" + G.arrow_id(g) + "," + G.arrow_id(h) + ")");
    r.add("unitary data", un.value <= tol, un.value > tol ? un.where : std::string{}, un.value);

    // (1) α_g α_h = Ad(u(g,h)) α_gh on matrix units of B_{s(h)}
    Worst w1;
    for (int g = 0; g < m; ++g)
        for (int h = 0; h < m; ++h) {
            int k = G.compose(g, h);
            if (k < 0) continue;
            const int n = a.field[G.src(h)];
            Mat lhs = a.alpha[g] * a.alpha[h], c = a.cocycle(g, h), rhs = c * a.alpha[k];
            double res = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Mat e = Mat::Zero(n, n);
                    e(i, j) = 1;
                    res = std::max(res, max_abs(Mat(lhs * e * lhs.adjoint() - rhs * e * rhs.adjoint())));
                }
            w1.see(res, "(" + G.arrow_id(g) + "," + G.arrow_id(h) + ")");
        }
    r.add("composition up to cocycle", w1.value <= tol, w1.value > tol ? w1.where : std::string{}, w1.value);

    // (2) α_g(u(h,k)) u(g,hk) = u(g,h) u(gh,k)
    Worst w2;
    for (int g = 0; g < m; ++g)
        for (int h = 0; h < m; ++h) {
            int gh = G.compose(g, h);
            if (gh < 0) continue;
            for (int k = 0; k < m; ++k) {
                int hk = G.compose(h, k);
                if (hk < 0) continue;
                Mat lhs = a.apply(g, a.cocycle(h, k)) * a.cocycle(g, hk);
                Mat rhs = a.cocycle(g, h) * a.cocycle(gh, k);
                w2.see(max_abs(Mat(lhs - rhs)), "(" + G.arrow_id(g) + "," + G.arrow_id(h) + "," + G.arrow_id(k) + ")");
            }
        }
    r.add("cocycle identity", w2.value <= tol, w2.value > tol ? w2.where : std::string{}, w2.value);

    // (3) units act trivially
    Worst w3;
    for (std::size_t x = 0; x < G.num_atoms(); ++x) {
        int e = G.unit(static_cast<int>(x));
        const int n = a.field[x];
        double res = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Mat b = Mat::Zero(n, n);
                b(i, j) = 1;
                res = std::max(res, max_abs(Mat(a.apply(e, b) - b)));
            }
        w3.see(res, G.arrow_id(e));
    }
    r.add("units act trivially", w3.value <= tol, w3.value > tol ? w3.where : std::string{}, w3.value);

    // (4) normalized cocycle
    Worst w4;
    for (int g = 0; g < m; ++g)
        for (int h = 0; h < m; ++h) {
            if (G.compose(g, h) < 0 || !(G.is_unit(g) || G.is_unit(h))) continue;
            Mat c = a.cocycle(g, h);
            w4.see(max_abs(Mat(c - Mat::Identity(c.rows(), c.cols()))), "(" + G.arrow_id(g) + "," + G.arrow_id(h) + ")");
        }
    r.add("normalized cocycle", w4.value <= tol, w4.value > tol ? w4.where : std::string{}, w4.value);
    return r;
}

Freeness is_free(const CocycleAction& a, double tol) {
    Freeness out;
    const Groupoid& G = *a.groupoid;
    OrbitData od = orbits_isotropy(G);
    for (std::size_t x = 0; x < G.num_atoms(); ++x)
        for (int g : od.isotropy[x]) {
            if (G.is_unit(g)) continue;
            const int n = a.field[x];
            MultiMatrixAlgebra Bx({n});
            std::vector<Element> left, right;
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    Mat e = Mat::Zero(n, n);
                    e(i, j) = 1;
                    left.push_back({e});
                    right.push_back({a.apply(g, e)});
                }
            auto sol = solve_intertwining(Bx, left, right, tol);
            out.free = false;
            out.inner_arrows.push_back(g);
            if (sol.size() == 1) {
                Element v = polar_unitary(sol[0]);
                out.witnesses.push_back(v[0]);
                bool unitary = unitarity(v[0]) <= tol;
                out.report.add("inner " + G.arrow_id(g), unitary, "implemented by a unitary in B_" + G.base().id(x));
            } else {
                out.witnesses.push_back(Mat());
                out.report.add("inner " + G.arrow_id(g), false,
                               "intertwiner space of dimension " + std::to_string(sol.size()));
            }
        }
    out.report.add("free", out.free,
                   out.free ? "no non-unit isotropy" : std::to_string(out.inner_arrows.size()) + " inner isotropy arrows");
    return out;
}

// ---------------------------------------------------------------------------

IsgAction::IsgAction(const CocycleAction& a, PseudogroupPtr p) : a_(a), p_(std::move(p)), B_(a.field) {}

Element IsgAction::alpha(int V, const Element& b) const {
    Element out = B_.zero();
    const Groupoid& G = *a_.groupoid;
    const Bisection& bis = p_->arrow_sets[V];
    for (std::size_t x = 0; x < bis.at.size(); ++x)
        if (int g = bis.at[x]; g >= 0) out[G.tgt(g)] = a_.apply(g, b[x]);
    return out;
}

Element IsgAction::cocycle(int V, int W) const {
    Element out = B_.zero();
    const Groupoid& G = *a_.groupoid;
    const Bisection& v = p_->arrow_sets[V];
    const Bisection& w = p_->arrow_sets[W];
    for (std::size_t x = 0; x < w.at.size(); ++x) {
        int h = w.at[x];
        if (h < 0) continue;
        int g = v.at[G.tgt(h)];
        if (g < 0) continue;
        out[G.tgt(g)] = a_.cocycle(g, h);
    }
    return out;
}

Element IsgAction::corner(Subset s) const {
    Element out = B_.zero();
    for (int x = 0; x < B_.num_blocks(); ++x)
        if (s.contains(x)) out[x].setIdentity();
    return out;
}

IsgAction induce_isg_action(const CocycleAction& a, std::size_t cap) {
    return IsgAction(a, full_pseudogroup(a.groupoid, cap));
}

Report validate_isg_action(const IsgAction& act, std::uint64_t seed, std::size_t samples, std::size_t exhaustive_limit,
                           double tol) {
    Report r;
    const auto& P = act.pseudogroup();
    const InvSemigroup& I = *P.semigroup;
    const int N = static_cast<int>(I.size());
    const auto& B = act.algebra();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, N - 1);
    const std::vector<Element> units = B.matrix_units();
    auto elem = [&](int v) { return I.id(v); };

    const std::size_t NN = static_cast<std::size_t>(N) * N;
    const bool all_pairs = NN <= exhaustive_limit / 10;
    const bool all_triples = NN * N <= exhaustive_limit;
    std::vector<std::pair<int, int>> pairs;
    if (all_pairs) {
        for (int v = 0; v < N; ++v)
            for (int w = 0; w < N; ++w) pairs.push_back({v, w});
    } else {
        for (std::size_t s = 0; s < samples / 10; ++s) pairs.push_back({pick(rng), pick(rng)});
    }

    Worst w1, w4;
    for (auto [V, W] : pairs) {
        int VW = I.mul(V, W);
        Element c = act.cocycle(V, W);
        for (const auto& b : units) {
            Element lhs = act.alpha(V, act.alpha(W, b));
            Element rhs = mul(mul(c, act.alpha(VW, b)), adjoint(c));
            w1.see(max_abs(sub(lhs, rhs)), "(" + elem(V) + ", " + elem(W) + ")");
        }
        if (I.embed(V) || I.embed(W))
            w4.see(max_abs(sub(c, act.corner(I.ran(VW)))), "(" + elem(V) + ", " + elem(W) + ")");
    }
    r.add("composition up to cocycle", w1.value <= tol, w1.value > tol ? w1.where : std::string{}, w1.value);

    Worst w2;
    auto triple = [&](int U, int V, int W) {
        Element lhs = mul(act.alpha(U, act.cocycle(V, W)), act.cocycle(U, I.mul(V, W)));
        Element rhs = mul(act.cocycle(U, V), act.cocycle(I.mul(U, V), W));
        w2.see(max_abs(sub(lhs, rhs)), "(" + elem(U) + ", " + elem(V) + ", " + elem(W) + ")");
    };
    if (all_triples) {
        for (int U = 0; U < N; ++U)
            for (int V = 0; V < N; ++V)
                for (int W = 0; W < N; ++W) triple(U, V, W);
    } else {
        for (std::size_t s = 0; s < samples; ++s) triple(pick(rng), pick(rng), pick(rng));
    }
    r.add("cocycle identity", w2.value <= tol, w2.value > tol ? w2.where : std::string{}, w2.value);

    Worst w3;
    for (const auto& [e, s] : I.embedding())
        for (const auto& b : units) w3.see(max_abs(sub(act.alpha(e, b), mul(b, act.corner(s)))), elem(e));
    r.add("idempotents act by restriction", w3.value <= tol, w3.value > tol ? w3.where : std::string{}, w3.value);
    r.add("normalized cocycle", w4.value <= tol, w4.value > tol ? w4.where : std::string{}, w4.value);
    r.add("coverage", true,
          std::string(all_triples ? "all triples" : "sampled triples") + ", " + (all_pairs ? "all pairs" : "sampled pairs"));
    return r;
}

// ---------------------------------------------------------------------------

Report verify_conjugacy(const CocycleAction& a, const CocycleAction& b, const ConjugacyWitness& W, double tol) {
    Report r;
    const Groupoid& G = *a.groupoid;
    const int m = static_cast<int>(G.num_arrows());
    bool same = b.groupoid->num_arrows() == G.num_arrows() && b.groupoid->num_atoms() == G.num_atoms() &&
                W.theta.size() == G.num_atoms() && W.w.size() == G.num_arrows();
    for (int g = 0; same && g < m; ++g)
        same = b.groupoid->src(g) == G.src(g) && b.groupoid->tgt(g) == G.tgt(g);
    for (std::size_t x = 0; same && x < G.num_atoms(); ++x)
        same = W.theta[x].rows() == b.field[x] && W.theta[x].cols() == a.field[x] && a.field[x] == b.field[x];
    for (int g = 0; same && g < m; ++g) same = W.w[g].rows() == b.field[G.tgt(g)] && W.w[g].cols() == W.w[g].rows();
    r.add("compatible data", same, same ? std::string{} : "groupoids, fields or witness shapes differ");
    if (!same) return r;

    Worst un;
    for (std::size_t x = 0; x < G.num_atoms(); ++x) un.see(unitarity(W.theta[x]), "theta " + G.base().id(x));
    for (int g = 0; g < m; ++g) un.see(unitarity(W.w[g]), "w " + G.arrow_id(g));
    r.add("witness unitary", un.value <= tol, un.value > tol ? un.where : std::string{}, un.value);

    Worst w1;
    for (int g = 0; g < m; ++g) {
        const int n = b.field[G.src(g)];
        Mat lhs = W.theta[G.tgt(g)] * a.alpha[g] * W.theta[G.src(g)].adjoint();
        Mat rhs = W.w[g] * b.alpha[g];
        double res = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Mat e = Mat::Zero(n, n);
                e(i, j) = 1;
                res = std::max(res, max_abs(Mat(lhs * e * lhs.adjoint() - rhs * e * rhs.adjoint())));
            }
        w1.see(res, G.arrow_id(g));
    }
    r.add("actions conjugate", w1.value <= tol, w1.value > tol ? w1.where : std::string{}, w1.value);

    Worst w2;
    for (int g = 0; g < m; ++g)
        for (int h = 0; h < m; ++h) {
            int k = G.compose(g, h);
            if (k < 0) continue;
            const Mat& th = W.theta[G.tgt(g)];
            Mat lhs = th * a.cocycle(g, h) * th.adjoint();
            Mat rhs = W.w[g] * b.apply(g, W.w[h]) * b.cocycle(g, h) * W.w[k].adjoint();
            w2.see(max_abs(Mat(lhs - rhs)), "(" + G.arrow_id(g) + "," + G.arrow_id(h) + ")");
        }
    r.add("cocycles related", w2.value <= tol, w2.value > tol ? w2.where : std::string{}, w2.value);

    if (a.cocycle_trivial(tol) && b.cocycle_trivial(tol)) {
        Worst w3;
        for (int g = 0; g < m; ++g)
            for (int h = 0; h < m; ++h) {
                int k = G.compose(g, h);
                if (k < 0) continue;
                w3.see(max_abs(Mat(W.w[k] - W.w[g] * b.apply(g, W.w[h]))), "(" + G.arrow_id(g) + "," + G.arrow_id(h) + ")");
            }
        r.add("1-cocycle identity", w3.value <= tol, w3.value > tol ? w3.where : std::string{}, w3.value);
    }
    return r;
}

ConjugacyWitness find_conjugacy(const CocycleAction& a, const CocycleAction& b, std::vector<Mat> theta) {
    const Groupoid& G = *a.groupoid;
    const int m = static_cast<int>(G.num_arrows());
    OrbitData od = orbits_isotropy(G);
    if (!od.principal()) throw Error(ErrorCode::NotPrincipal, "conjugacy search needs a principal groupoid");
    if (a.field != b.field) throw Error(ErrorCode::DimensionMismatch, "actions on different fields");
    if (theta.empty())
        for (int n : a.field) theta.push_back(Mat::Identity(n, n));

    ConjugacyWitness W{theta, std::vector<Mat>(m)};
    // w̃_g with Ad(w̃_g) β_g = θ α_g θ⁻¹ exactly
    std::vector<Mat> wt(m);
    for (int g = 0; g < m; ++g) {
        const int n = a.field[G.tgt(g)];
        wt[g] = G.is_unit(g) ? Mat::Identity(n, n)
                             : Mat(theta[G.tgt(g)] * a.alpha[g] * theta[G.src(g)].adjoint() * b.alpha[g].adjoint());
    }
    // scalar 2-cocycle c(g,h) = θ(u(g,h)) X(g,h)*, X = w̃_g β_g(w̃_h) v(g,h) w̃_gh*
    auto c = [&](int g, int h) {
        int k = G.compose(g, h);
        const Mat& th = theta[G.tgt(g)];
        Mat X = wt[g] * b.apply(g, wt[h]) * b.cocycle(g, h) * wt[k].adjoint();
        Mat s = th * a.cocycle(g, h) * th.adjoint() * X.adjoint();
        return s.trace() / static_cast<double>(s.rows());
    };
    // arrows k_x from the orbit root to x
    std::vector<int> k(G.num_atoms(), -1);
    for (const auto& orbit : od.orbits) {
        int root = orbit.front();
        for (int g : G.arrows_from(root)) k[G.tgt(g)] = g;
    }
    for (int g = 0; g < m; ++g) {
        cd lambda = c(g, k[G.src(g)]);
        lambda /= std::abs(lambda);
        W.w[g] = lambda * wt[g];
    }
    return W;
}

CocycleAction perturb(const CocycleAction& a, const std::vector<Mat>& w) {
    const Groupoid& G = *a.groupoid;
    const int m = static_cast<int>(G.num_arrows());
    CocycleAction out = a;
    for (int g = 0; g < m; ++g) out.alpha[g] = w[g] * a.alpha[g];
    for (int g = 0; g < m; ++g)
        for (int h = 0; h < m; ++h) {
            int k = G.compose(g, h);
            if (k < 0) continue;
            out.u[static_cast<std::size_t>(g) * m + h] = w[g] * a.apply(g, w[h]) * a.cocycle(g, h) * w[k].adjoint();
        }
    return out;
}

CocycleAction random_coboundary_action(GroupoidPtr gp, const std::vector<int>& field, std::mt19937_64& rng) {
    const Groupoid& G = *gp;
    if (field.size() != G.num_atoms()) throw Error(ErrorCode::DimensionMismatch, "one block size per atom");
    for (std::size_t g = 0; g < G.num_arrows(); ++g)
        if (field[G.src(static_cast<int>(g))] != field[G.tgt(static_cast<int>(g))])
            throw Error(ErrorCode::MalformedInput, "block size must be constant on orbits");
    std::vector<Mat> Wx;
    for (int n : field) Wx.push_back(random_unitary(n, rng));
    std::vector<Mat> V(G.num_arrows()), w(G.num_arrows());
    for (std::size_t g = 0; g < G.num_arrows(); ++g) {
        int gi = static_cast<int>(g);
        V[g] = G.is_unit(gi) ? Mat::Identity(field[G.src(gi)], field[G.src(gi)]) : Mat(Wx[G.tgt(gi)] * Wx[G.src(gi)].adjoint());
        int n = field[G.tgt(gi)];
        w[g] = G.is_unit(gi) ? Mat::Identity(n, n) : random_unitary(n, rng);
    }
    return perturb(make_action(gp, field, V), w);
}

CocycleAction transport_action(const CocycleAction& a, GroupoidPtr target, const GroupoidIso& iso) {
    const Groupoid& G = *a.groupoid;
    const std::size_t m = G.num_arrows();
    if (target->num_arrows() != m || target->num_atoms() != G.num_atoms())
        throw Error(ErrorCode::DimensionMismatch, "isomorphism target has a different size");
    CocycleAction out{target, std::vector<int>(G.num_atoms()), std::vector<Mat>(m), std::vector<Mat>(m * m)};
    for (std::size_t x = 0; x < G.num_atoms(); ++x) out.field[iso.atoms[x]] = a.field[x];
    for (std::size_t g = 0; g < m; ++g) out.alpha[iso.arrows[g]] = a.alpha[g];
    for (std::size_t g = 0; g < m; ++g)
        for (std::size_t h = 0; h < m; ++h)
            if (a.u[g * m + h].size()) out.u[static_cast<std::size_t>(iso.arrows[g]) * m + iso.arrows[h]] = a.u[g * m + h];
    return out;
}

} // namespace cartan
