#pragma once

#include <optional>
#include <random>
#include <vector>

#include "cartan/correspondence.hpp"
#include "cartan/groupoid.hpp"
#include "cartan/multimatrix.hpp"
#include "cartan/report.hpp"

namespace cartan {

// Action of a groupoid on the field of matrix factors B_x = M_{n_x}:
// α_g = Ad(V_g): B_{s(g)} -> B_{t(g)} with 2-cocycle u(g,h) ∈ B_{t(g)}.
struct CocycleAction {
    GroupoidPtr groupoid;
    std::vector<int> field;   // n_x per atom
    std::vector<Mat> alpha;   // V_g per arrow
    std::vector<Mat> u;       // [g * arrows + h] for composable pairs; empty means 1

    int n(int atom) const { return field[atom]; }
    Mat V(int g) const { return alpha[g]; }
    Mat cocycle(int g, int h) const;
    Mat apply(int g, const Mat& b) const { return alpha[g] * b * alpha[g].adjoint(); }
    bool cocycle_trivial(double tol = kTol) const;
    std::size_t num_arrows() const { return groupoid->num_arrows(); }
};

// Action with trivial cocycle and the given per-arrow unitaries.
CocycleAction make_action(GroupoidPtr g, std::vector<int> field, std::vector<Mat> alpha);

// Shapes, unitarity, n constant along arrows, and the four action identities:
// composition up to Ad(u), the cocycle identity on triples, trivial unit
// arrows, normalized cocycle.
Report validate_action(const CocycleAction& a, double tol = kTol);

struct Freeness {
    bool free = true;
    std::vector<int> inner_arrows;  // non-unit isotropy arrows
    std::vector<Mat> witnesses;     // unitary implementing α_g inside B_x
    Report report;
};
Freeness is_free(const CocycleAction& a, double tol = kTol);

// The induced action of [[G]] on B = ⊕ B_x.
class IsgAction {
public:
    IsgAction(const CocycleAction& a, PseudogroupPtr p);
    const PseudogroupTag& pseudogroup() const { return *p_; }
    const MultiMatrixAlgebra& algebra() const { return B_; }
    // α_V(b) for b supported on s(V) (the rest of b is ignored).
    Element alpha(int V, const Element& b) const;
    // u_{V,W}, a partial unitary with support 1_{t(VW)}.
    Element cocycle(int V, int W) const;
    // 1_S for the subset of atoms S.
    Element corner(Subset s) const;

private:
    CocycleAction a_;
    PseudogroupPtr p_;
    MultiMatrixAlgebra B_;
};

IsgAction induce_isg_action(const CocycleAction& a, std::size_t cap = kDefaultCap);

// The four inverse-semigroup action identities on all pairs/triples when
// |[[G]]|³ <= exhaustive_limit, otherwise on `samples` seeded random ones.
Report validate_isg_action(const IsgAction& act, std::uint64_t seed = 1, std::size_t samples = 20000,
                           std::size_t exhaustive_limit = 200000, double tol = kTol);

struct ConjugacyWitness {
    std::vector<Mat> theta; // per atom, θ_x = Ad(theta[x]): B_x -> D_x
    std::vector<Mat> w;     // per arrow, in D_{t(g)}
};

// θ_t ∘ α_g ∘ θ_s⁻¹ = Ad(w_g) ∘ β_g and θ_t(u(g,h)) = w_g β_g(w_h) v(g,h) w_gh*,
// plus the 1-cocycle identity when both cocycles are trivial.
Report verify_conjugacy(const CocycleAction& a, const CocycleAction& b, const ConjugacyWitness& w,
                        double tol = kTol);

// Constructs a witness for two actions of the same principal groupoid
// with equal fields, given θ (identity when empty). Throws NotPrincipal.
ConjugacyWitness find_conjugacy(const CocycleAction& a, const CocycleAction& b, std::vector<Mat> theta = {});

// Ad(w_g) ∘ β_g with u(g,h) = w_g β_g(w_h) w_gh*, over the genuine action
// β_g = Ad(W_t(g) W_s(g)*), W_x and w_g Haar-random (w on units = 1).
CocycleAction random_coboundary_action(GroupoidPtr g, const std::vector<int>& field, std::mt19937_64& rng);

// Perturbs an action by a unitary family: α′_g = Ad(w_g) ∘ α_g and
// u′(g,h) = w_g α_g(w_h) u(g,h) w_gh*.
CocycleAction perturb(const CocycleAction& a, const std::vector<Mat>& w);

// Same action moved along a groupoid isomorphism iso: a.groupoid -> target.
CocycleAction transport_action(const CocycleAction& a, GroupoidPtr target, const GroupoidIso& iso);

} // namespace cartan
