#include "cartan/crossed_product.hpp"

#include <algorithm>
#include <cmath>

#include "cartan/errors.hpp"

namespace cartan {

Coeffs cp_zero(const CocycleAction& a) {
    Coeffs c;
    for (std::size_t g = 0; g < a.num_arrows(); ++g) {
        int n = a.field[a.groupoid->tgt(static_cast<int>(g))];
        c.push_back(Mat::Zero(n, n));
    }
    return c;
}

Coeffs cp_mul(const CocycleAction& a, const Coeffs& x, const Coeffs& y) {
    const Groupoid& G = *a.groupoid;
    const int m = static_cast<int>(G.num_arrows());
    Coeffs z = cp_zero(a);
    for (int g = 0; g < m; ++g) {
        if (x[g].isZero(0)) continue;
        for (int h = 0; h < m; ++h) {
            int k = G.compose(g, h);
            if (k < 0 || y[h].isZero(0)) continue;
            z[k] += x[g] * a.apply(g, y[h]) * a.cocycle(g, h);
        }
    }
    return z;
}

Coeffs cp_adjoint(const CocycleAction& a, const Coeffs& x) {
    const Groupoid& G = *a.groupoid;
    Coeffs z = cp_zero(a);
    for (int g = 0; g < static_cast<int>(G.num_arrows()); ++g) {
        int gi = G.inv(g);
        z[gi] = a.cocycle(gi, g).adjoint() * a.apply(gi, x[g].adjoint());
    }
    return z;
}

Element cp_expect(const CocycleAction& a, const Coeffs& x) {
    Element e;
    for (std::size_t v = 0; v < a.field.size(); ++v) e.push_back(x[a.groupoid->unit(static_cast<int>(v))]);
    return e;
}

Coeffs cp_random(const CocycleAction& a, std::mt19937_64& rng) {
    Coeffs c = cp_zero(a);
    for (auto& m : c) m = random_matrix(static_cast<int>(m.rows()), rng);
    return c;
}

double cp_associativity_residual(const CocycleAction& a, std::uint64_t seed, int samples) {
    const Groupoid& G = *a.groupoid;
    const int m = static_cast<int>(G.num_arrows());
    std::vector<std::vector<int>> into(G.num_atoms());
    for (int h = 0; h < m; ++h) into[G.tgt(h)].push_back(h);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> arrow(0, m - 1);
    auto pick = [&](const std::vector<int>& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };
    auto basis = [&](int g) {
        Coeffs c = cp_zero(a);
        c[g] = random_matrix(static_cast<int>(c[g].rows()), rng);
        return c;
    };
    double worst = 0;
    for (int s = 0; s < samples; ++s) {
        int g = arrow(rng);
        int h = pick(into[G.src(g)]);
        int k = pick(into[G.src(h)]);
        Coeffs x = basis(g), y = basis(h), z = basis(k);
        Coeffs l = cp_mul(a, cp_mul(a, x, y), z), r = cp_mul(a, x, cp_mul(a, y, z));
        for (int q = 0; q < m; ++q) worst = std::max(worst, max_abs(Mat(l[q] - r[q])));
    }
    return worst;
}

// ---------------------------------------------------------------------------

Vec CrossedProduct::abstract_vec(const Coeffs& x) const {
    Vec v(abstract_dim());
    for (std::size_t g = 0; g < x.size(); ++g)
        v.segment(offset[g], x[g].size()) = Eigen::Map<const Vec>(x[g].data(), x[g].size());
    return v;
}

Coeffs CrossedProduct::abstract_unvec(const Vec& v) const {
    Coeffs c = cp_zero(action);
    for (std::size_t g = 0; g < c.size(); ++g)
        c[g] = Eigen::Map<const Mat>(v.data() + offset[g], c[g].rows(), c[g].cols());
    return c;
}

Element CrossedProduct::to_M(const Coeffs& x) const { return inclusion.ambient.unvec(to_blocks * abstract_vec(x)); }

Coeffs CrossedProduct::from_M(const Element& x) const { return abstract_unvec(to_abstract * inclusion.ambient.vec(x)); }

Element CrossedProduct::u_arrow(int g) const {
    Coeffs c = cp_zero(action);
    c[g].setIdentity();
    return to_M(c);
}

Element CrossedProduct::u_set(const std::vector<int>& arrows) const {
    Coeffs c = cp_zero(action);
    for (int g : arrows) c[g].setIdentity();
    return to_M(c);
}

namespace {

// Left multiplication on M·p, basis f_{h,i} = e_i ψ_h* u_h with ψ_h = V_h e_1.
class LeftIdealRep {
public:
    explicit LeftIdealRep(const CocycleAction& a) : a_(a) {
        const Groupoid& G = *a.groupoid;
        for (std::size_t h = 0; h < G.num_arrows(); ++h) {
            pos_.push_back(D_);
            D_ += a.field[G.tgt(static_cast<int>(h))];
            psi_.push_back(a.alpha[h].col(0));
        }
    }
    int dim() const { return D_; }
    double consistency() const { return consistency_; }

    // π(X u_k) for a coefficient X ∈ B_{t(k)} on one arrow.
    Mat single(int k, const Mat& X) {
        const Groupoid& G = *a_.groupoid;
        Mat out = Mat::Zero(D_, D_);
        for (std::size_t hh = 0; hh < G.num_arrows(); ++hh) {
            const int h = static_cast<int>(hh);
            const int kh = G.compose(k, h);
            if (kh < 0) continue;
            const int nh = a_.field[G.tgt(h)];
            Mat right = psi_[h].adjoint() * a_.alpha[k].adjoint() * a_.cocycle(k, h); // 1 x n
            for (int i = 0; i < nh; ++i) {
                Mat Y = X * a_.alpha[k].col(i) * right;
                Vec y = Y * psi_[kh];
                consistency_ = std::max(consistency_, max_abs(Mat(Y - y * psi_[kh].adjoint())));
                out.block(pos_[kh], pos_[h] + i, y.size(), 1) = y;
            }
        }
        return out;
    }

private:
    const CocycleAction& a_;
    std::vector<int> pos_;
    std::vector<Vec> psi_;
    int D_ = 0;
    double consistency_ = 0;
};

} // namespace

CrossedProduct crossed_product(const CocycleAction& a, std::uint64_t seed) {
    Report valid = validate_action(a);
    if (!valid.pass()) throw Error(ErrorCode::MalformedInput, "invalid cocycle action: " + valid.summary());
    const Groupoid& G = *a.groupoid;
    const int m = static_cast<int>(G.num_arrows());

    CrossedProduct cp;
    cp.action = a;
    int N = 0;
    for (int g = 0; g < m; ++g) {
        cp.offset.push_back(N);
        int n = a.field[G.tgt(g)];
        N += n * n;
    }
    Report& rep = cp.construction;
    rep.merge("action", valid);
    double assoc = cp_associativity_residual(a, seed);
    rep.add("associativity", assoc <= kTol, {}, assoc);

    LeftIdealRep pi(a);
    std::vector<Mat> span;
    span.reserve(N);
    for (int g = 0; g < m; ++g) {
        const int n = a.field[G.tgt(g)];
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                Mat e = Mat::Zero(n, n);
                e(i, j) = 1;
                span.push_back(pi.single(g, e));
            }
    }
    rep.add("left ideal representation", pi.consistency() <= kTol, {}, pi.consistency());

    cp.rep = realize(span, seed);
    const MultiMatrixAlgebra& M = cp.rep.algebra();
    rep.add("dim M = sum over arrows of n_t n_s", M.dim() == N,
            std::to_string(M.dim()) + " vs " + std::to_string(N));
    if (M.dim() != N) throw Error(ErrorCode::DecompositionFailure, "crossed product realization has the wrong dimension");

    cp.to_blocks.resize(N, N);
    double realize_res = 0;
    for (int c = 0; c < N; ++c) {
        realize_res = std::max(realize_res, cp.rep.residual(span[c]));
        cp.to_blocks.col(c) = M.vec(cp.rep.to_blocks(span[c]));
    }
    rep.add("block realization", realize_res <= kTol, {}, realize_res);
    Eigen::PartialPivLU<Mat> lu(cp.to_blocks);
    cp.to_abstract = lu.inverse();
    double inv_res = max_abs(Mat(cp.to_abstract * cp.to_blocks - Mat::Identity(N, N)));
    rep.add("realization invertible", inv_res <= 1e-8, {}, inv_res);

    MultiMatrixAlgebra B(a.field);
    Mat embed(N, B.dim()), expect(B.dim(), N);
    for (std::size_t x = 0; x < a.field.size(); ++x) {
        const int n = a.field[x];
        const int u = G.unit(static_cast<int>(x));
        for (int q = 0; q < n * n; ++q) {
            embed.col(B.offset(static_cast<int>(x)) + q) = cp.to_blocks.col(cp.offset[u] + q);
            expect.row(B.offset(static_cast<int>(x)) + q) = cp.to_abstract.row(cp.offset[u] + q);
        }
    }
    std::vector<double> w;
    for (const auto& r : G.base().weights()) w.push_back(boost::rational_cast<double>(r));
    cp.inclusion = make_inclusion(M, B, embed, expect, w);
    rep.merge("expectation", validate_expectation(cp.inclusion, seed));
    return cp;
}

// ---------------------------------------------------------------------------

namespace {

struct Worst {
    double value = 0;
    std::string where;
    void see(double v, const std::string& w) {
        if (v > value) {
            value = v;
            where = w;
        }
    }
    void report(Report& r, const std::string& name, double tol) const {
        r.add(name, value <= tol, value > tol ? where : std::string{}, value);
    }
};

} // namespace

Report check_identities(const CrossedProduct& cp, std::size_t cap, std::uint64_t seed, std::size_t pair_limit) {
    Report r;
    PseudogroupPtr P = full_pseudogroup(cp.action.groupoid, cap);
    IsgAction act(cp.action, P);
    const InvSemigroup& I = *P->semigroup;
    const Groupoid& G = *cp.action.groupoid;
    const Inclusion& inc = cp.inclusion;
    const auto& B = inc.sub;
    const int N = static_cast<int>(I.size());

    std::vector<Element> u(N);
    for (int v = 0; v < N; ++v) u[v] = cp.u_bisection(P->arrow_sets[v]);
    std::vector<Element> bu = B.matrix_units(), lifted;
    for (const auto& b : bu) lifted.push_back(inc.lift(b));

    Worst w1, w2, w3, w4;
    for (int v = 0; v < N; ++v) {
        const Bisection& V = P->arrow_sets[v];
        Subset s = source_set(V), t = target_set(G, V);
        w1.see(max_abs(sub(mul(adjoint(u[v]), u[v]), inc.lift(act.corner(s)))), I.id(v));
        w1.see(max_abs(sub(mul(u[v], adjoint(u[v])), inc.lift(act.corner(t)))), I.id(v));
        Subset units;
        for (std::size_t x = 0; x < V.at.size(); ++x)
            if (V.at[x] >= 0 && G.is_unit(V.at[x])) units = units | Subset::single(x);
        Element pu = act.corner(units), ps = act.corner(s);
        for (std::size_t q = 0; q < bu.size(); ++q) {
            Element bs = mul(bu[q], ps);
            Element lhs = mul(mul(u[v], inc.lift(bs)), adjoint(u[v]));
            w3.see(max_abs(sub(lhs, inc.lift(act.alpha(v, bs)))), I.id(v));
            w4.see(max_abs(sub(inc.E(mul(lifted[q], u[v])), mul(bu[q], pu))), I.id(v));
        }
    }
    auto pair = [&](int v, int w) {
        Element lhs = mul(u[v], u[w]);
        Element rhs = mul(inc.lift(act.cocycle(v, w)), u[I.mul(v, w)]);
        w2.see(max_abs(sub(lhs, rhs)), "(" + I.id(v) + ", " + I.id(w) + ")");
    };
    const bool all = static_cast<std::size_t>(N) * N <= pair_limit;
    if (all) {
        for (int v = 0; v < N; ++v)
            for (int w = 0; w < N; ++w) pair(v, w);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> pick(0, N - 1);
        for (std::size_t s = 0; s < pair_limit; ++s) pair(pick(rng), pick(rng));
    }
    w1.report(r, "partial unitaries with source and range supports", kTol);
    w2.report(r, "u(V)u(W) = u_{V,W} u(VW)", kTol);
    w3.report(r, "u(V) b u(V)* = alpha_V(b)", kTol);
    w4.report(r, "E(b u(V)) = b p_(V meets units)", kTol);
    r.add("coverage", true, std::to_string(N) + " bisections, " + (all ? "all pairs" : "sampled pairs"));
    return r;
}

std::vector<Element> fourier(const CrossedProduct& cp, const Element& x, const Basis& basis) {
    std::vector<Element> out;
    Element xs = adjoint(x);
    for (const auto& part : basis.parts) out.push_back(cp.inclusion.E(mul(xs, cp.u_set(part))));
    return out;
}

Element reconstruct(const CrossedProduct& cp, const std::vector<Element>& coeffs, const Basis& basis) {
    Element x = cp.inclusion.ambient.zero();
    for (std::size_t p = 0; p < basis.parts.size(); ++p)
        x = add(x, mul(cp.u_set(basis.parts[p]), adjoint(cp.inclusion.lift(coeffs[p]))));
    return x;
}

double sharp_norm(const Inclusion& inc, const Element& x, const std::vector<double>& weights) {
    auto phi = [&](const Element& y) {
        Element b = inc.E(y);
        cd t = 0;
        for (int k = 0; k < inc.sub.num_blocks(); ++k) t += weights[k] * b[k].trace() / static_cast<double>(inc.sub.block(k));
        return std::abs(t);
    };
    Element xs = adjoint(x);
    return std::sqrt(phi(mul(xs, x)) + phi(mul(x, xs)));
}

double sharp_norm(const Inclusion& inc, const Element& x) { return sharp_norm(inc, x, inc.weights); }

namespace {

struct NormalizerTest {
    const Inclusion& inc;
    Mat Q;
    NormalizerTest(const Inclusion& i, double tol) : inc(i), Q(orthonormal_span(i.embed, tol)) {}
    double off_B(const Element& y) const {
        Vec v = inc.ambient.vec(y);
        return (v - Q * (Q.adjoint() * v)).norm();
    }
    // Largest distance from ε(B) of v*v, vv* and v ε(e) v* over matrix units e.
    std::pair<double, std::string> defect(const Element& v) const {
        std::pair<double, std::string> w{off_B(mul(adjoint(v), v)), "source projection"};
        auto see = [&](double d, const char* what) {
            if (d > w.first) w = {d, what};
        };
        see(off_B(mul(v, adjoint(v))), "range projection");
        for (const auto& b : inc.sub.matrix_units()) see(off_B(mul(mul(v, inc.lift(b)), adjoint(v))), "conjugate of B");
        return w;
    }
};

Report regularity_from(const Inclusion& inc, const std::vector<Element>& normalizers, double tol) {
    Report r;
    NormalizerTest nt(inc, tol);
    std::vector<Element> gens;
    for (const auto& b : inc.sub.matrix_units()) gens.push_back(inc.lift(b));
    Worst w;
    for (std::size_t i = 0; i < normalizers.size(); ++i) {
        auto [d, what] = nt.defect(normalizers[i]);
        w.see(d, what + " of normalizer " + std::to_string(i));
        gens.push_back(normalizers[i]);
    }
    w.report(r, "normalizers normalize B", 1e-8);
    int dim = static_cast<int>(generated_subalgebra(inc.ambient, gens, tol).size());
    r.add("normalizers generate M", dim == inc.ambient.dim(),
          "generated " + std::to_string(dim) + " of " + std::to_string(inc.ambient.dim()));
    return r;
}

} // namespace

// Candidates are polar parts of intertwiner basis elements. When B'∩M is
// larger than the center of B some of these fail to normalize; only the
// genuine normalizers are kept.
Report check_regularity(const Inclusion& inc, double tol) {
    std::vector<Element> norm;
    NormalizerTest nt(inc, tol);
    const auto& B = inc.sub;
    int candidates = 0;
    for (int x = 0; x < B.num_blocks(); ++x)
        for (int y = 0; y < B.num_blocks(); ++y) {
            if (B.block(x) != B.block(y)) continue;
            for (const auto& T : intertwiners(inc, x, y, Mat::Identity(B.block(x), B.block(x)), tol)) {
                ++candidates;
                try {
                    Element v = polar_unitary(T, tol);
                    if (nt.defect(v).first <= 1e-8) norm.push_back(std::move(v));
                } catch (const Error&) {
                }
            }
        }
    Report r = regularity_from(inc, norm, tol);
    r.add("normalizer candidates", true, std::to_string(norm.size()) + " of " + std::to_string(candidates) + " kept");
    return r;
}

Report check_regularity(const CrossedProduct& cp, double tol) {
    std::vector<Element> norm;
    for (const auto& part : compute_basis(*cp.action.groupoid, true).parts) norm.push_back(cp.u_set(part));
    return regularity_from(cp.inclusion, norm, tol);
}

RelativeCommutant check_relative_commutant(const CrossedProduct& cp, double tol) {
    RelativeCommutant out;
    const Inclusion& inc = cp.inclusion;
    std::vector<Element> S;
    for (const auto& b : inc.sub.matrix_units()) S.push_back(inc.lift(b));
    out.commutant_dim = static_cast<int>(commutant_in(inc.ambient, S, tol).size());
    out.center_dim = inc.sub.num_blocks();
    out.free = is_free(cp.action, tol).free;
    bool eq = out.commutant_dim == out.center_dim;
    out.report.add("relative commutant is the center of B", eq,
                   "dim B'∩M = " + std::to_string(out.commutant_dim) + ", dim Z(B) = " + std::to_string(out.center_dim));
    out.report.add("relative commutant condition iff free", eq == out.free,
                   std::string("action is ") + (out.free ? "free" : "not free"));
    return out;
}

FactorCheck check_factor(const CrossedProduct& cp, double tol) {
    FactorCheck out;
    const Inclusion& inc = cp.inclusion;
    const Groupoid& G = *cp.action.groupoid;
    out.center_dim = inc.ambient.num_blocks();
    out.orbits = static_cast<int>(orbits_isotropy(G).orbits.size());
    const int n = static_cast<int>(G.num_atoms());
    const int m = static_cast<int>(G.num_arrows());
    std::vector<Element> z, ug;
    for (int x = 0; x < n; ++x) z.push_back(inc.central(x));
    for (int g = 0; g < m; ++g) ug.push_back(cp.u_arrow(g));
    const int D = inc.ambient.dim();
    Mat sys(static_cast<Eigen::Index>(m) * D, n);
    for (int g = 0; g < m; ++g)
        for (int x = 0; x < n; ++x)
            sys.block(static_cast<Eigen::Index>(g) * D, x, D, 1) = inc.ambient.vec(sub(mul(z[x], ug[g]), mul(ug[g], z[x])));
    out.invariant_dim = static_cast<int>(nullspace(sys, tol).cols());
    out.report.add("invariant central projections match orbits", out.invariant_dim == out.orbits,
                   std::to_string(out.invariant_dim) + " vs " + std::to_string(out.orbits));
    if (is_free(cp.action, tol).free) {
        out.report.add("factor iff ergodic", (out.center_dim == 1) == (out.orbits == 1),
                       "center dim " + std::to_string(out.center_dim) + ", orbits " + std::to_string(out.orbits));
        out.report.add("center dim equals orbit count", out.center_dim == out.orbits,
                       std::to_string(out.center_dim) + " vs " + std::to_string(out.orbits));
    }
    return out;
}

} // namespace cartan
