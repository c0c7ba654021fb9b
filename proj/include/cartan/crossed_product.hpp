#pragma once

#include <cstdint>
#include <vector>

#include "cartan/cocycle_action.hpp"
#include "cartan/multimatrix.hpp"

namespace cartan {

// Abstract element Σ_g X_g u_g of the crossed product, X_g ∈ B_{t(g)}.
using Coeffs = std::vector<Mat>;

Coeffs cp_zero(const CocycleAction& a);
// (X u_g)(Y u_h) = X α_g(Y) u(g,h) u_gh when s(g) = t(h), else 0.
Coeffs cp_mul(const CocycleAction& a, const Coeffs& x, const Coeffs& y);
// (X u_g)* = u(g⁻¹,g)* α_{g⁻¹}(X*) u_{g⁻¹}.
Coeffs cp_adjoint(const CocycleAction& a, const Coeffs& x);
// Unit coefficients as an element of B = ⊕ B_x.
Element cp_expect(const CocycleAction& a, const Coeffs& x);
Coeffs cp_random(const CocycleAction& a, std::mt19937_64& rng);

// max |(xy)z - x(yz)| over `samples` random basis triples b·u_g.
double cp_associativity_residual(const CocycleAction& a, std::uint64_t seed, int samples = 200);

struct CrossedProduct {
    CocycleAction action;
    Inclusion inclusion;    // (M, B, E), M in block form
    Realization rep;        // left action on M·p with p = ⊕ e_11
    Mat to_blocks;          // abstract coordinates -> vec of M
    Mat to_abstract;        // inverse
    std::vector<int> offset; // per arrow, into abstract coordinates
    Report construction;

    int abstract_dim() const { return static_cast<int>(to_blocks.cols()); }
    Vec abstract_vec(const Coeffs& x) const;
    Coeffs abstract_unvec(const Vec& v) const;
    Element to_M(const Coeffs& x) const;
    Coeffs from_M(const Element& x) const;
    Element u_arrow(int g) const;
    Element u_set(const std::vector<int>& arrows) const; // u(V) = Σ_{g ∈ V} u_g
    Element u_bisection(const Bisection& v) const { return u_set(v.arrows()); }
};

// Throws MalformedInput (with the failing check) when the action is invalid.
CrossedProduct crossed_product(const CocycleAction& a, std::uint64_t seed = 1);

// The defining identities over [[G]]: partial unitaries with the right
// supports, u(V)u(W) = u_{V,W} u(VW), u(V) b u(V)* = α_V(b), and
// E(b u(V)) = b p_{V∩X}. Products are checked on all pairs when
// |[[G]]|² <= pair_limit, otherwise on seeded samples.
Report check_identities(const CrossedProduct& cp, std::size_t cap = kDefaultCap, std::uint64_t seed = 1,
                        std::size_t pair_limit = 50000);

// x_V = E(x* u(V)) per basis part; x = Σ_V u(V) x_V*.
std::vector<Element> fourier(const CrossedProduct& cp, const Element& x, const Basis& basis);
Element reconstruct(const CrossedProduct& cp, const std::vector<Element>& coeffs, const Basis& basis);

// √(|φ(x*x)| + |φ(xx*)|), φ = ω∘E with ω(b) = Σ w_x tr(b_x)/n_x.
double sharp_norm(const Inclusion& inc, const Element& x, const std::vector<double>& weights);
double sharp_norm(const Inclusion& inc, const Element& x);

// Normalizers adjoined to B generate M. The general form uses polar parts
// of the identity-twisted intertwiners between equal blocks of B.
Report check_regularity(const Inclusion& inc, double tol = kTol);
Report check_regularity(const CrossedProduct& cp, double tol = kTol);

struct RelativeCommutant {
    int commutant_dim = 0;
    int center_dim = 0;
    bool free = false;
    Report report;
};
RelativeCommutant check_relative_commutant(const CrossedProduct& cp, double tol = kTol);

struct FactorCheck {
    int center_dim = 0;
    int orbits = 0;
    int invariant_dim = 0; // central projections of B commuting with every u_g
    Report report;
};
FactorCheck check_factor(const CrossedProduct& cp, double tol = kTol);

} // namespace cartan
