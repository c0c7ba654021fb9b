#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cartan/extraction.hpp"

namespace cartan {

// Finite equivalence relation as a partition of the atoms. Classes are
// sorted internally and ordered by their smallest atom.
class EquivRel {
public:
    EquivRel() = default;
    // Throws MalformedInput unless `classes` partition the atoms.
    EquivRel(WeightedSet base, std::vector<std::vector<int>> classes);
    static EquivRel diagonal(const WeightedSet& base);
    static EquivRel full(const WeightedSet& base);

    const WeightedSet& base() const { return base_; }
    std::size_t num_atoms() const { return base_.size(); }
    const std::vector<std::vector<int>>& classes() const { return classes_; }
    int class_of(int x) const { return class_of_[x]; }
    bool related(int x, int y) const { return class_of_[x] == class_of_[y]; }
    bool ergodic() const { return classes_.size() == 1; }
    std::size_t num_pairs() const;
    bool operator==(const EquivRel& o) const { return base_ == o.base_ && classes_ == o.classes_; }

private:
    WeightedSet base_;
    std::vector<std::vector<int>> classes_;
    std::vector<int> class_of_;
};

// S ⊂ R on the same base. Throws MalformedInput otherwise.
struct SubInclusion {
    EquivRel big, small;
    SubInclusion(EquivRel r, EquivRel s);
};

struct ErgodicDecomposition {
    WeightedSet Z;        // one point per S-class, weighted by its mass
    std::vector<int> pi;  // atom -> point of Z
};
ErgodicDecomposition ergodic_decomposition(const EquivRel& s);

struct StrongNormality {
    bool strongly_normal = false;
    // Global bijections of the atoms, each preserving R and S, whose graphs cover R.
    std::vector<std::vector<int>> witnesses;
    std::pair<int, int> refuting{-1, -1}; // a pair of R in no witness graph
    Report report;
};

// Throws SearchBudgetExceeded when more than `budget` witnesses would be needed.
StrongNormality is_strongly_normal(const SubInclusion& inc, std::size_t budget = 100000);

// L(R) = ⊕ M_|C| over R-classes, atoms in class order.
MultiMatrixAlgebra vn_algebra(const EquivRel& r);
// diagonal ⊂ L(R) with the diagonal compression.
Inclusion vn_algebra_of(const EquivRel& r);
// L(S) ⊂ L(R) with the compression onto S-pairs and S-class masses as weights.
Inclusion vn_inclusion(const SubInclusion& inc);
// Row/column of atom x inside its R-class block.
Element relation_unit(const EquivRel& r, int row_atom, int col_atom);

struct RelQuotient {
    ErgodicDecomposition decomposition;
    std::vector<std::vector<int>> fibers;       // point of Z -> atoms (sorted)
    // lift[tgt][src]: bijection fiber(src) -> fiber(tgt) by position, or empty
    std::vector<std::vector<std::vector<int>>> lift;
    std::optional<QuotientSemigroup> quotient;  // over Z
    Report report;
};

// Germs are pairs of S-classes joined by a bijection with graph in R that
// preserves S. With `reverse_lifts` non-unit lifts reverse the member order.
RelQuotient relation_germs(const SubInclusion& inc, bool reverse_lifts = false);
// The same plus the quotient semigroup. Throws CapExceeded.
RelQuotient quotient_semigroup_rel(const SubInclusion& inc, bool reverse_lifts = false,
                                   std::size_t cap = kDefaultCap);

// Cocycle action (α, Φ) of a groupoid on the fibers of S, by positions:
// α_g maps position i of fiber s(g) to alpha[g][i] in fiber t(g), and
// Φ_{g,h} is a permutation of fiber t(g).
struct FiberAction {
    GroupoidPtr groupoid;
    std::vector<std::vector<int>> fibers;
    std::vector<std::vector<int>> alpha;
    std::vector<std::vector<int>> phi; // [g * arrows + h], empty when not composable
    std::vector<int> Phi(int g, int h) const { return phi[static_cast<std::size_t>(g) * alpha.size() + h]; }
};

// The four cocycle-action identities, Φ inside the full group of the
// target fiber, and freeness on non-unit arrows.
Report validate_fiber_action(const FiberAction& a);

struct RelQuotientGroupoid {
    RelQuotient quotient;
    GroupoidPtr groupoid;             // principal groupoid of the germ relation on Z
    std::optional<Synthesis> synthesis; // through the quotient semigroup when it fits the cap
    FiberAction action;
    Report report;
};

// Throws NonErgodic when R has several classes and NotStronglyNormal.
// The semigroup route is taken when it has at most `semigroup_cap` elements
// and must then reproduce the germ relation groupoid.
RelQuotientGroupoid quotient_groupoid_rel(const SubInclusion& inc, bool reverse_lifts = false,
                                          std::size_t semigroup_cap = 1024);

// y₂ ~ y₁ iff an arrow g from π(y₁) to π(y₂) has (α_g(y₁), y₂) in the
// (full) fiber relation. Checks the equivalence axioms on the pair table.
struct SemidirectProduct {
    EquivRel relation;
    Report report;
};
SemidirectProduct semidirect_product(const WeightedSet& base, const FiberAction& a);

// The matrix algebra cocycle action on B_z = L(S_z) = M_|fiber| by
// permutation matrices of α and Φ.
CocycleAction induced_matrix_action(const FiberAction& a);

// U: ℓ²(R) -> ⊕_g ℓ²(fiber t(g))⊗ℓ²(fiber t(g)), δ_(a,b) ↦ δ_(a, α_g b) ⊗ δ_g with
// g the arrow π(b) -> π(a). Checks unitarity and U λ(x) U* = ρ(θ(x)) for
// the generators of L(R), ρ the left regular representation of L(S) ⋊ G.
Report check_U(const SubInclusion& inc, const RelQuotientGroupoid& q, double tol = kTol);

// Ω: quotient semigroup of S ⊂ R -> quotient semigroup of L(S) ⊂ L(R),
// sending a class map to the germ class of u_φ for its lift φ.
struct OmegaMap {
    LatticeHom hom;
    Report report;
};
OmegaMap omega_map(const SubInclusion& inc, const RelQuotient& q, const Extraction& ex, double tol = kTol);

// Strong normality against regularity of L(S) ⊂ L(R), the U bridge, Ω as
// a lattice isomorphism and the semidirect product round trip. Throws
// NonErgodic, and CapExceeded when a quotient semigroup exceeds `cap`.
Report bridge_checks(const SubInclusion& inc, std::size_t cap = kDefaultCap);

// Quotient groupoid, semidirect product, compare with R atom for atom;
// a second run with reversed lifts must give an isomorphic quotient.
Report roundtrip_C(const SubInclusion& inc, std::size_t cap = kDefaultCap);

} // namespace cartan
