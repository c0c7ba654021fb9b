#include "cartan/multimatrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cartan/errors.hpp"

namespace cartan {

Element mul(const Element& a, const Element& b) {
    Element c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[k] * b[k];
    return c;
}

Element adjoint(const Element& a) {
    Element c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[k].adjoint();
    return c;
}

Element add(const Element& a, const Element& b) {
    Element c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[k] + b[k];
    return c;
}

Element sub(const Element& a, const Element& b) {
    Element c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[k] - b[k];
    return c;
}

Element scale(const Element& a, cd s) {
    Element c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[k] * s;
    return c;
}

double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double max_abs(const Element& a) {
    double m = 0;
    for (const auto& b : a) m = std::max(m, max_abs(b));
    return m;
}

// ---------------------------------------------------------------------------

MultiMatrixAlgebra::MultiMatrixAlgebra(std::vector<int> blocks) : blocks_(std::move(blocks)) {
    for (int n : blocks_) {
        if (n <= 0) throw Error(ErrorCode::MalformedInput, "block dimensions must be positive");
        offsets_.push_back(dim_);
        dim_ += n * n;
    }
}

Element MultiMatrixAlgebra::zero() const {
    Element e;
    for (int n : blocks_) e.push_back(Mat::Zero(n, n));
    return e;
}

Element MultiMatrixAlgebra::identity() const {
    Element e;
    for (int n : blocks_) e.push_back(Mat::Identity(n, n));
    return e;
}

Element MultiMatrixAlgebra::unit(int k, int i, int j) const {
    Element e = zero();
    e[k](i, j) = 1.0;
    return e;
}

Element MultiMatrixAlgebra::block_indicator(int k) const {
    Element e = zero();
    e[k].setIdentity();
    return e;
}

std::vector<Element> MultiMatrixAlgebra::matrix_units() const {
    std::vector<Element> out;
    for (int k = 0; k < num_blocks(); ++k)
        for (int j = 0; j < blocks_[k]; ++j)
            for (int i = 0; i < blocks_[k]; ++i) out.push_back(unit(k, i, j));
    return out;
}

Vec MultiMatrixAlgebra::vec(const Element& a) const {
    Vec v(dim_);
    for (int k = 0; k < num_blocks(); ++k)
        v.segment(offsets_[k], blocks_[k] * blocks_[k]) =
            Eigen::Map<const Vec>(a[k].data(), blocks_[k] * blocks_[k]);
    return v;
}

Element MultiMatrixAlgebra::unvec(const Vec& v) const {
    Element e;
    for (int k = 0; k < num_blocks(); ++k)
        e.push_back(Eigen::Map<const Mat>(v.data() + offsets_[k], blocks_[k], blocks_[k]));
    return e;
}

std::vector<Element> MultiMatrixAlgebra::center() const {
    std::vector<Element> out;
    for (int k = 0; k < num_blocks(); ++k) out.push_back(block_indicator(k));
    return out;
}

bool MultiMatrixAlgebra::shape_matches(const Element& a) const {
    if (a.size() != blocks_.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].rows() != blocks_[k] || a[k].cols() != blocks_[k]) return false;
    return true;
}

// ---------------------------------------------------------------------------

Mat nullspace(const Mat& a, double tol) {
    const Eigen::Index c = a.cols();
    if (c == 0) return Mat(0, 0);
    if (a.rows() == 0) return Mat::Identity(c, c);
    Mat r;
    if (a.rows() > c) {
        Eigen::HouseholderQR<Mat> qr(a);
        r = qr.matrixQR().topRows(c).triangularView<Eigen::Upper>();
    } else {
        r = a;
    }
    Eigen::BDCSVD<Mat> svd(r, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > cut) ++rank;
    return svd.matrixV().rightCols(c - rank);
}

Mat orthonormal_span(const Mat& a, double tol) {
    if (a.cols() == 0) return Mat(a.rows(), 0);
    Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    const double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > cut) ++rank;
    return svd.matrixU().leftCols(rank);
}

std::vector<Element> solve_intertwining(const MultiMatrixAlgebra& A, const std::vector<Element>& left,
                                        const std::vector<Element>& right, double tol) {
    if (left.size() != right.size()) throw Error(ErrorCode::DimensionMismatch, "constraint lists differ in length");
    std::vector<Element> out;
    for (int k = 0; k < A.num_blocks(); ++k) {
        const int n = A.block(k), nn = n * n;
        Mat sys(static_cast<Eigen::Index>(left.size()) * nn, nn);
        const Mat I = Mat::Identity(n, n);
        for (std::size_t j = 0; j < left.size(); ++j) {
            // vec(T L) = (Lᵀ ⊗ I) vec T,  vec(R T) = (I ⊗ R) vec T
            const Mat& L = left[j][k];
            const Mat& R = right[j][k];
            Mat blk(nn, nn);
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) blk.block(p * n, q * n, n, n) = L(q, p) * I - (p == q ? R : Mat::Zero(n, n));
            sys.middleRows(static_cast<Eigen::Index>(j) * nn, nn) = blk;
        }
        Mat ns = nullspace(sys, tol);
        for (Eigen::Index c = 0; c < ns.cols(); ++c) {
            Element e = A.zero();
            e[k] = Eigen::Map<const Mat>(ns.col(c).data(), n, n);
            out.push_back(std::move(e));
        }
    }
    return out;
}

std::vector<Element> commutant_in(const MultiMatrixAlgebra& M, const std::vector<Element>& S, double tol) {
    return solve_intertwining(M, S, S, tol);
}

namespace {

// Incrementally orthonormalized set of vectors.
class SpanBuilder {
public:
    SpanBuilder(Eigen::Index n, double tol) : basis_(n, 0), tol_(tol) {}
    bool add(Vec v) {
        const double norm0 = v.norm();
        if (norm0 <= tol_) return false;
        for (int pass = 0; pass < 2; ++pass)
            if (basis_.cols()) v -= basis_ * (basis_.adjoint() * v);
        if (v.norm() <= tol_ * std::max(1.0, norm0)) return false;
        basis_.conservativeResize(Eigen::NoChange, basis_.cols() + 1);
        basis_.col(basis_.cols() - 1) = v / v.norm();
        return true;
    }
    const Mat& basis() const { return basis_; }
    Eigen::Index size() const { return basis_.cols(); }

private:
    Mat basis_;
    double tol_;
};

} // namespace

std::vector<Element> generated_subalgebra(const MultiMatrixAlgebra& M, const std::vector<Element>& S, double tol) {
    std::vector<Element> gens;
    for (const auto& s : S) {
        gens.push_back(s);
        gens.push_back(adjoint(s));
    }
    SpanBuilder span(M.dim(), tol);
    span.add(M.vec(M.identity()));
    for (const auto& g : gens) span.add(M.vec(g));
    for (Eigen::Index i = 0; i < span.size(); ++i) {
        Element b = M.unvec(span.basis().col(i));
        for (const auto& g : gens) span.add(M.vec(mul(b, g)));
    }
    std::vector<Element> out;
    for (Eigen::Index i = 0; i < span.size(); ++i) out.push_back(M.unvec(span.basis().col(i)));
    return out;
}

// ---------------------------------------------------------------------------

Element Inclusion::lift(const Element& b) const { return ambient.unvec(embed * sub.vec(b)); }
Element Inclusion::E(const Element& x) const { return sub.unvec(expect * ambient.vec(x)); }
Element Inclusion::central(int k) const { return lift(sub.block_indicator(k)); }

cd Inclusion::omega(const Element& b) const {
    cd t = 0;
    for (int k = 0; k < sub.num_blocks(); ++k) t += weights[k] * b[k].trace() / static_cast<double>(sub.block(k));
    return t;
}

Mat block_diagonal_embedding(const MultiMatrixAlgebra& M, const MultiMatrixAlgebra& B,
                             const std::vector<std::vector<int>>& placement) {
    if (static_cast<int>(placement.size()) != M.num_blocks())
        throw Error(ErrorCode::DimensionMismatch, "one placement list per ambient block");
    Mat emb = Mat::Zero(M.dim(), B.dim());
    for (int k = 0; k < M.num_blocks(); ++k) {
        int pos = 0;
        for (int j : placement[k]) {
            if (j < 0 || j >= B.num_blocks()) throw Error(ErrorCode::MalformedInput, "placement refers to a missing block");
            const int n = B.block(j);
            for (int c = 0; c < n; ++c)
                for (int r = 0; r < n; ++r)
                    if (pos + n <= M.block(k))
                        emb(M.offset(k) + (pos + c) * M.block(k) + pos + r, B.offset(j) + c * n + r) = 1.0;
            pos += n;
        }
        if (pos != M.block(k)) throw Error(ErrorCode::DimensionMismatch, "placed blocks do not fill ambient block");
    }
    return emb;
}

Mat trace_expectation(const MultiMatrixAlgebra& M, const MultiMatrixAlgebra& B, const Mat& embed,
                      const std::vector<double>& tw) {
    if (static_cast<int>(tw.size()) != M.num_blocks()) throw Error(ErrorCode::DimensionMismatch, "trace weights");
    Eigen::VectorXd w(M.dim());
    for (int k = 0; k < M.num_blocks(); ++k) w.segment(M.offset(k), M.block(k) * M.block(k)).setConstant(tw[k]);
    Mat ew = embed.adjoint() * w.asDiagonal();
    Mat gram = ew * embed;
    Eigen::LDLT<Mat> ldlt(gram);
    if (ldlt.info() != Eigen::Success || gram.rows() != B.dim())
        throw Error(ErrorCode::NumericallySingular, "embedding Gram matrix");
    return ldlt.solve(ew);
}

Inclusion make_inclusion(MultiMatrixAlgebra M, MultiMatrixAlgebra B, Mat embed, Mat expect, std::vector<double> weights) {
    if (embed.rows() != M.dim() || embed.cols() != B.dim() || expect.rows() != B.dim() || expect.cols() != M.dim())
        throw Error(ErrorCode::DimensionMismatch, "embedding/expectation matrix shapes");
    if (weights.empty()) weights.assign(B.num_blocks(), 1.0 / B.num_blocks());
    if (static_cast<int>(weights.size()) != B.num_blocks()) throw Error(ErrorCode::DimensionMismatch, "state weights");
    for (double w : weights)
        if (!(w > 0)) throw Error(ErrorCode::NonPositiveWeight, "state weights must be positive");
    return Inclusion{std::move(M), std::move(B), std::move(embed), std::move(expect), std::move(weights)};
}

namespace {

double min_eigen(const Mat& h) {
    if (h.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

std::string unit_name(const MultiMatrixAlgebra& A, int idx) {
    for (int k = 0; k < A.num_blocks(); ++k) {
        const int n = A.block(k);
        if (idx < A.offset(k) + n * n) {
            int r = idx - A.offset(k);
            std::ostringstream os;
            os << "e[" << k << "](" << r % n << "," << r / n << ")";
            return os.str();
        }
    }
    return "?";
}

} // namespace

Report validate_expectation(const Inclusion& inc, std::uint64_t seed, double tol) {
    const auto& M = inc.ambient;
    const auto& B = inc.sub;
    Report r;

    Eigen::JacobiSVD<Mat> svd(inc.embed);
    double smin = B.dim() ? svd.singularValues()(B.dim() - 1) : 1.0;
    r.add("embed injective", smin > tol, "smallest singular value " + std::to_string(smin));

    double unital = max_abs(sub(inc.lift(B.identity()), M.identity()));
    r.add("embed unital", unital <= tol, {}, unital);

    std::vector<Element> bu = B.matrix_units();
    std::vector<Element> lifted;
    for (const auto& b : bu) lifted.push_back(inc.lift(b));
    double star = 0, mult = 0;
    std::string mult_w;
    for (int k = 0, idx = 0; k < B.num_blocks(); ++k) {
        const int n = B.block(k);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i, ++idx) {
                // e_ij at idx; e_ji at offset + i*n + j
                star = std::max(star, max_abs(sub(adjoint(lifted[idx]), lifted[B.offset(k) + i * n + j])));
                for (int l = 0; l < n; ++l) {
                    // e_ij e_jl = e_il
                    double res = max_abs(sub(mul(lifted[idx], lifted[B.offset(k) + l * n + j]), lifted[B.offset(k) + l * n + i]));
                    if (res > mult) {
                        mult = res;
                        mult_w = unit_name(B, idx);
                    }
                }
            }
    }
    // products across blocks vanish
    for (int k = 0; k + 1 < B.num_blocks(); ++k) {
        double res = max_abs(mul(inc.central(k), inc.central(k + 1)));
        if (res > mult) {
            mult = res;
            mult_w = "block indicators " + std::to_string(k) + "," + std::to_string(k + 1);
        }
    }
    r.add("embed *-preserving", star <= tol, {}, star);
    r.add("embed multiplicative", mult <= tol, mult_w, mult);

    double idem = max_abs(Mat(inc.expect * inc.embed - Mat::Identity(B.dim(), B.dim())));
    r.add("E restricts to identity on B", idem <= tol, {}, idem);

    double left = 0, right = 0;
    std::string lw, rw;
    std::vector<Element> mu = M.matrix_units();
    for (std::size_t b = 0; b < bu.size(); ++b)
        for (std::size_t x = 0; x < mu.size(); ++x) {
            Element Ex = inc.E(mu[x]);
            double l = max_abs(sub(inc.E(mul(lifted[b], mu[x])), mul(bu[b], Ex)));
            double rr = max_abs(sub(inc.E(mul(mu[x], lifted[b])), mul(Ex, bu[b])));
            if (l > left) {
                left = l;
                lw = "(" + unit_name(B, static_cast<int>(b)) + ", " + unit_name(M, static_cast<int>(x)) + ", 1)";
            }
            if (rr > right) {
                right = rr;
                rw = "(1, " + unit_name(M, static_cast<int>(x)) + ", " + unit_name(B, static_cast<int>(b)) + ")";
            }
        }
    r.add("left module property", left <= tol, left > tol ? lw : std::string{}, left);
    r.add("right module property", right <= tol, right > tol ? rw : std::string{}, right);

    // positivity on rank-one projections of every ambient block
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    double worst = 0;
    std::string pw;
    auto probe = [&](int k, const Vec& v, const std::string& name) {
        Element p = M.zero();
        p[k] = v * v.adjoint() / v.squaredNorm();
        Element e = inc.E(p);
        for (const auto& blk : e) {
            double m = min_eigen(blk);
            if (-m > worst) {
                worst = -m;
                pw = name;
            }
        }
    };
    for (int k = 0; k < M.num_blocks(); ++k) {
        const int n = M.block(k);
        for (int s = 0; s < n; ++s) {
            Vec v = Vec::Zero(n);
            v(s) = 1;
            probe(k, v, "standard vector");
            for (int t = s + 1; t < n; ++t) {
                Vec a = Vec::Zero(n), c = Vec::Zero(n);
                a(s) = c(s) = 1;
                a(t) = 1;
                c(t) = cd(0, 1);
                probe(k, a, "e_r + e_s");
                probe(k, c, "e_r + i e_s");
            }
        }
        for (int s = 0; s < 4; ++s) {
            Vec v(n);
            for (int i = 0; i < n; ++i) v(i) = cd(nd(rng), nd(rng));
            probe(k, v, "random vector");
        }
    }
    r.add("positive", worst <= tol, worst > tol ? pw : std::string{}, worst);

    // ω∘E has density matrices ρ_k with ρ_k(j,q) = φ(e_qj); faithful iff all PD
    double mineig = INFINITY;
    for (int k = 0; k < M.num_blocks(); ++k) {
        const int n = M.block(k);
        Mat rho(n, n);
        for (int q = 0; q < n; ++q)
            for (int j = 0; j < n; ++j) rho(j, q) = inc.omega(inc.E(M.unit(k, q, j)));
        mineig = std::min(mineig, min_eigen(rho));
    }
    r.add("faithful", mineig > tol, "smallest eigenvalue of the density of omega∘E " + std::to_string(mineig));
    return r;
}

std::vector<Element> intertwiners(const Inclusion& inc, int x, int y, const Mat& U, double tol) {
    const auto& B = inc.sub;
    if (x < 0 || y < 0 || x >= B.num_blocks() || y >= B.num_blocks())
        throw Error(ErrorCode::MalformedInput, "block index out of range");
    const int n = B.block(y);
    if (B.block(x) != n)
        throw Error(ErrorCode::DimensionMismatch,
                    "blocks " + std::to_string(x) + " and " + std::to_string(y) + " have sizes " +
                        std::to_string(B.block(x)) + " and " + std::to_string(n));
    if (U.rows() != n || U.cols() != n) throw Error(ErrorCode::DimensionMismatch, "unitary size");
    std::vector<Element> left, right;
    const Element one = inc.ambient.identity();
    left.push_back(one);
    right.push_back(inc.central(x));
    left.push_back(inc.central(y));
    right.push_back(one);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            Element b = B.zero(), bb = B.zero();
            b[y](i, j) = 1.0;
            bb[x] = U * b[y] * U.adjoint();
            left.push_back(inc.lift(b));
            right.push_back(inc.lift(bb));
        }
    return solve_intertwining(inc.ambient, left, right, tol);
}

Element polar_unitary(const Element& T, double tol) {
    double smax = 0;
    std::vector<Eigen::JacobiSVD<Mat>> svds;
    for (const auto& b : T) {
        svds.emplace_back(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
        if (svds.back().singularValues().size()) smax = std::max(smax, svds.back().singularValues()(0));
    }
    if (smax <= tol) throw Error(ErrorCode::NumericallySingular, "polar part of a (numerically) zero element");
    const double cut = tol * std::max(1.0, smax);
    Element v;
    for (std::size_t k = 0; k < T.size(); ++k) {
        const auto& s = svds[k].singularValues();
        Eigen::Index rank = 0;
        while (rank < s.size() && s(rank) > cut) ++rank;
        v.push_back(svds[k].matrixU().leftCols(rank) * svds[k].matrixV().leftCols(rank).adjoint());
    }
    for (const auto& b : v)
        for (Eigen::Index c = 0; c < b.cols(); ++c)
            for (Eigen::Index r = 0; r < b.rows(); ++r)
                if (std::abs(b(r, c)) > 1e-6) {
                    cd phase = std::conj(b(r, c)) / std::abs(b(r, c));
                    return scale(v, phase);
                }
    return v;
}

bool is_partial_isometry(const Element& v, double tol) {
    return max_abs(sub(mul(mul(v, adjoint(v)), v), v)) <= tol;
}

// ---------------------------------------------------------------------------

Mat random_matrix(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Mat z(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) z(r, c) = cd(nd(rng), nd(rng)) / std::sqrt(2.0);
    return z;
}

Mat random_unitary(int n, std::mt19937_64& rng) {
    Mat z = random_matrix(n, rng);
    Eigen::HouseholderQR<Mat> qr(z);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    for (int i = 0; i < n; ++i) {
        cd d = qr.matrixQR()(i, i);
        if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

Element random_element(const MultiMatrixAlgebra& A, std::mt19937_64& rng) {
    Element e;
    for (int n : A.blocks()) e.push_back(random_matrix(n, rng));
    return e;
}

// ---------------------------------------------------------------------------

Element Realization::to_blocks(const Mat& x) const {
    Element e = alg_.zero();
    for (int k = 0; k < alg_.num_blocks(); ++k) {
        const int m = alg_.block(k);
        for (int r = 0; r < m; ++r)
            for (int s = 0; s < m; ++s)
                // tr(E_1r x E_s1) = tr(x E_sr) = Σ x_ab (E_sr)_ba
                e[k](r, s) = x.cwiseProduct(unit(k, s, r).transpose()).sum() / q_trace_[k];
    }
    return e;
}

Mat Realization::from_blocks(const Element& e) const {
    Mat x = Mat::Zero(D_, D_);
    for (int k = 0; k < alg_.num_blocks(); ++k) {
        const int m = alg_.block(k);
        for (int r = 0; r < m; ++r)
            for (int s = 0; s < m; ++s)
                if (e[k](r, s) != cd(0)) x += e[k](r, s) * unit(k, r, s);
    }
    return x;
}

double Realization::residual(const Mat& x) const { return max_abs(Mat(x - from_blocks(to_blocks(x)))); }

namespace {

Vec flat(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }
Mat unflat(const Vec& v, Eigen::Index D) { return Eigen::Map<const Mat>(v.data(), D, D); }

// Spectral projections of a Hermitian matrix restricted to columns of V,
// grouping eigenvalues closer than `gap`.
std::vector<Mat> spectral_groups(const Mat& h, const Mat& V, double gap) {
    Mat hr = V.adjoint() * h * V;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (hr + hr.adjoint()));
    const auto& ev = es.eigenvalues();
    std::vector<Mat> out;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= ev.size(); ++i)
        if (i == ev.size() || ev(i) - ev(i - 1) > gap) {
            Mat W = V * es.eigenvectors().middleCols(start, i - start);
            out.push_back(W * W.adjoint());
            start = i;
        }
    return out;
}

} // namespace

Realization realize(const std::vector<Mat>& spanning, std::uint64_t seed, double tol) {
    if (spanning.empty()) throw Error(ErrorCode::DecompositionFailure, "empty spanning set");
    const Eigen::Index D = spanning[0].rows();
    Mat cols(D * D, static_cast<Eigen::Index>(spanning.size()));
    for (std::size_t i = 0; i < spanning.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = flat(spanning[i]);
    Mat basis = orthonormal_span(cols, tol);
    const Eigen::Index N = basis.cols();
    auto in_span = [&](const Mat& x) {
        Vec v = flat(x);
        return (v - basis * (basis.adjoint() * v)).norm() <= tol * std::max(1.0, v.norm());
    };
    if (!in_span(Mat::Identity(D, D))) throw Error(ErrorCode::DecompositionFailure, "span does not contain the identity");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    auto random_in = [&](const Mat& B) {
        Vec c(B.cols());
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = cd(nd(rng), nd(rng));
        return unflat(B * c, D);
    };
    for (int t = 0; t < 3; ++t) {
        Mat a = random_in(basis);
        if (!in_span(Mat(a.adjoint())) || !in_span(Mat(a * random_in(basis))))
            throw Error(ErrorCode::DecompositionFailure, "span is not a *-algebra");
    }

    // center: coefficients c with [Σ c_k A_k, r_j] = 0 for generic r_j
    const int probes = 3;
    Mat sys(probes * D * D, N);
    for (int j = 0; j < probes; ++j) {
        Mat r = random_in(basis);
        for (Eigen::Index k = 0; k < N; ++k) {
            Mat a = unflat(basis.col(k), D);
            sys.block(j * D * D, k, D * D, 1) = flat(Mat(a * r - r * a));
        }
    }
    Mat zc = nullspace(sys, tol);
    Mat h = Mat::Zero(D, D);
    for (Eigen::Index k = 0; k < zc.cols(); ++k) h += cd(nd(rng), nd(rng)) * unflat(basis * zc.col(k), D);
    h = (0.5 * (h + h.adjoint())).eval();
    std::vector<Mat> central = spectral_groups(h, Mat::Identity(D, D), 1e-6);
    if (static_cast<Eigen::Index>(central.size()) != zc.cols())
        throw Error(ErrorCode::DecompositionFailure, "center spectrum does not separate summands");

    struct Summand {
        int m, first;
        std::vector<Mat> units;
        double qtr;
    };
    std::vector<Summand> sums;
    for (const Mat& P : central) {
        Mat pc(D * D, N);
        for (Eigen::Index k = 0; k < N; ++k) pc.col(k) = flat(Mat(P * unflat(basis.col(k), D)));
        Mat pb = orthonormal_span(pc, tol);
        const int d = static_cast<int>(pb.cols());
        const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
        if (m * m != d) throw Error(ErrorCode::DecompositionFailure, "summand dimension is not a square");
        Eigen::SelfAdjointEigenSolver<Mat> pe(0.5 * (P + P.adjoint()));
        std::vector<Eigen::Index> range;
        for (Eigen::Index i = 0; i < D; ++i)
            if (pe.eigenvalues()(i) > 0.5) range.push_back(i);
        Mat V(D, static_cast<Eigen::Index>(range.size()));
        for (std::size_t i = 0; i < range.size(); ++i) V.col(static_cast<Eigen::Index>(i)) = pe.eigenvectors().col(range[i]);
        const int rank = static_cast<int>(range.size());
        if (rank % m != 0) throw Error(ErrorCode::DecompositionFailure, "summand rank not a multiple of its size");

        std::vector<Mat> Q;
        for (int attempt = 0; attempt < 5 && static_cast<int>(Q.size()) != m; ++attempt) {
            Mat a = random_in(pb);
            Q = spectral_groups(0.5 * (a + a.adjoint()), V, 1e-6);
        }
        if (static_cast<int>(Q.size()) != m) throw Error(ErrorCode::DecompositionFailure, "no generic element in summand");
        const double qtr = static_cast<double>(rank / m);
        std::vector<Mat> row(m);
        row[0] = Q[0];
        Mat b = random_in(pb);
        for (int j = 1; j < m; ++j) {
            Mat t = Q[0] * b * Q[j];
            double c = (t * t.adjoint()).trace().real() / qtr;
            if (c <= tol) throw Error(ErrorCode::NumericallySingular, "matrix unit construction");
            row[j] = t / std::sqrt(c);
        }
        Summand s{m, 0, std::vector<Mat>(static_cast<std::size_t>(m) * m), qtr};
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) s.units[i * m + j] = row[i].adjoint() * row[j];
        while (s.first < D && std::abs(P(s.first, s.first)) < 1e-6) ++s.first;
        sums.push_back(std::move(s));
    }
    std::sort(sums.begin(), sums.end(), [](const Summand& a, const Summand& b) {
        return a.m != b.m ? a.m < b.m : a.first < b.first;
    });
    Realization out;
    std::vector<int> blocks;
    for (auto& s : sums) {
        blocks.push_back(s.m);
        out.units_.push_back(std::move(s.units));
        out.q_trace_.push_back(s.qtr);
    }
    out.alg_ = MultiMatrixAlgebra(blocks);
    out.D_ = static_cast<int>(D);
    return out;
}

} // namespace cartan
