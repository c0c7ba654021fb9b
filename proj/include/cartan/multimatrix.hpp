#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cartan/report.hpp"

namespace cartan {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr double kTol = 1e-9;

// One matrix per block.
using Element = std::vector<Mat>;

Element mul(const Element& a, const Element& b);
Element adjoint(const Element& a);
Element add(const Element& a, const Element& b);
Element sub(const Element& a, const Element& b);
Element scale(const Element& a, cd s);
double max_abs(const Element& a);
double max_abs(const Mat& a);

class MultiMatrixAlgebra {
public:
    MultiMatrixAlgebra() = default;
    explicit MultiMatrixAlgebra(std::vector<int> blocks); // throws MalformedInput on n <= 0

    const std::vector<int>& blocks() const { return blocks_; }
    int num_blocks() const { return static_cast<int>(blocks_.size()); }
    int block(int k) const { return blocks_[k]; }
    // Σ n_k², the length of vec().
    int dim() const { return dim_; }
    int offset(int k) const { return offsets_[k]; }

    Element zero() const;
    Element identity() const;
    Element unit(int k, int i, int j) const; // matrix unit e_ij of block k
    Element block_indicator(int k) const;
    // Matrix units in vec order (block, then column, then row).
    std::vector<Element> matrix_units() const;

    // Column-major per block, blocks concatenated.
    Vec vec(const Element& a) const;
    Element unvec(const Vec& v) const;

    std::vector<Element> center() const; // block indicators
    bool is_factor() const { return blocks_.size() == 1; }
    bool shape_matches(const Element& a) const;
    bool operator==(const MultiMatrixAlgebra& o) const { return blocks_ == o.blocks_; }

private:
    std::vector<int> blocks_;
    std::vector<int> offsets_;
    int dim_ = 0;
};

// Orthonormal basis (columns) of the kernel of a, with singular values below
// tol * max(1, σ_max) counted as zero.
Mat nullspace(const Mat& a, double tol = kTol);

// Orthonormal basis of span(columns), same rank threshold.
Mat orthonormal_span(const Mat& a, double tol = kTol);

// {T ∈ A : T·left[j] = right[j]·T for all j}, solved blockwise.
std::vector<Element> solve_intertwining(const MultiMatrixAlgebra& A, const std::vector<Element>& left,
                                        const std::vector<Element>& right, double tol = kTol);

std::vector<Element> commutant_in(const MultiMatrixAlgebra& M, const std::vector<Element>& S, double tol = kTol);

// Orthonormal (in vec coordinates) basis of the *-subalgebra generated by S and 1.
std::vector<Element> generated_subalgebra(const MultiMatrixAlgebra& M, const std::vector<Element>& S,
                                          double tol = kTol);

// Unital inclusion B ⊂ M given by the matrix of the embedding and of the
// conditional expectation in vec coordinates. `weights` define the
// faithful trace state ω(b) = Σ w_k tr(b_k)/n_k on B used for
// faithfulness and GNS checks.
struct Inclusion {
    MultiMatrixAlgebra ambient, sub;
    Mat embed;  // ambient.dim() x sub.dim()
    Mat expect; // sub.dim() x ambient.dim()
    std::vector<double> weights;

    Element lift(const Element& b) const;   // ε(b)
    Element E(const Element& x) const;      // E(x) ∈ B
    Element central(int k) const;           // ε(1_k)
    cd omega(const Element& b) const;
};

// ε placing, for each ambient block, the listed sub blocks along the
// diagonal in order (sizes must add up to the ambient block size).
Mat block_diagonal_embedding(const MultiMatrixAlgebra& M, const MultiMatrixAlgebra& B,
                             const std::vector<std::vector<int>>& placement);

// The τ-preserving expectation onto ε(B), τ(x) = Σ t_k tr(x_k).
Mat trace_expectation(const MultiMatrixAlgebra& M, const MultiMatrixAlgebra& B, const Mat& embed,
                      const std::vector<double>& trace_weights);

Inclusion make_inclusion(MultiMatrixAlgebra M, MultiMatrixAlgebra B, Mat embed, Mat expect,
                         std::vector<double> weights = {});

// Embedding: injective, unital, *-preserving, multiplicative on matrix
// units. Expectation: E∘ε = id, left and right B-modularity, positivity on
// rank-one projections (standard, real and imaginary two-vector ones plus
// seeded random ones), faithfulness of ω∘E.
Report validate_expectation(const Inclusion& inc, std::uint64_t seed = 1, double tol = kTol);

// {T ∈ z_x M z_y : T ε(b) = ε(β(b)) T}, β(b) = U b U* from sub block y to x.
std::vector<Element> intertwiners(const Inclusion& inc, int x, int y, const Mat& U, double tol = kTol);

// v = T (T*T)^{-1/2} on the support of T, with the global phase fixed so the
// first entry of modulus above tol is positive real.
Element polar_unitary(const Element& T, double tol = kTol);
bool is_partial_isometry(const Element& v, double tol = kTol);

// ---- random data ----
Mat random_unitary(int n, std::mt19937_64& rng);
Mat random_matrix(int n, std::mt19937_64& rng);
Element random_element(const MultiMatrixAlgebra& A, std::mt19937_64& rng);

// Wedderburn decomposition of a concrete *-subalgebra of M_D spanned by
// `spanning`: the summands with a full system of matrix units each, in a
// deterministic order (size, then first row carried).
class Realization {
public:
    Realization() = default;
    const MultiMatrixAlgebra& algebra() const { return alg_; }
    int ambient_dim() const { return D_; }
    const Mat& unit(int k, int i, int j) const { return units_[k][i * alg_.block(k) + j]; }
    Element to_blocks(const Mat& x) const;
    Mat from_blocks(const Element& e) const;
    // max |x - from_blocks(to_blocks(x))|
    double residual(const Mat& x) const;

    friend Realization realize(const std::vector<Mat>& spanning, std::uint64_t seed, double tol);

private:
    MultiMatrixAlgebra alg_;
    int D_ = 0;
    std::vector<std::vector<Mat>> units_;
    std::vector<double> q_trace_;
};

// Throws DecompositionFailure if the span is not a *-algebra.
Realization realize(const std::vector<Mat>& spanning, std::uint64_t seed = 1, double tol = 1e-8);

} // namespace cartan
