#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "cartan/groupoid.hpp"
#include "cartan/inverse_semigroup.hpp"

namespace cartan {

constexpr std::size_t kDefaultCap = 4096;

// [[G]] with every element remembered as its bisection.
struct PseudogroupTag {
    GroupoidPtr groupoid;
    IsgPtr semigroup;
    std::vector<Bisection> arrow_sets;
    std::unordered_map<Bisection, int, BisectionHash> index;

    int element_of(const Bisection& b) const; // throws NotPresent
};
using PseudogroupPtr = std::shared_ptr<const PseudogroupTag>;

PseudogroupPtr full_pseudogroup(GroupoidPtr g, std::size_t cap = kDefaultCap);

struct Synthesis {
    GroupoidPtr groupoid;
    std::vector<int> family;                    // normalized w-family (elements of I)
    std::vector<std::pair<int, int>> label;     // arrow -> (family index n, source atom x)
    PseudogroupPtr pseudogroup;                 // [[G_I]]
    LatticeHom gamma;                           // I -> [[G_I]]
};

// Groupoid of germs of a csm inverse semigroup, with the isomorphism γ.
Synthesis groupoid_of(IsgPtr I, const std::vector<int>& gens, std::size_t cap = kDefaultCap);

// φ̃: [[G1]] -> [[G2]] induced by a groupoid isomorphism.
LatticeHom induced_hom(const PseudogroupTag& p1, const PseudogroupTag& p2, const GroupoidIso& iso);

struct LiftedIso {
    GroupoidIso iso;
    Report report; // groupoid iso table checks and φ̃ = Φ
};
// Throws NotBijective when Φ is not a bijection and NotPseudogroup when
// Φ's endpoints are not the given tagged pseudogroups.
LiftedIso lift_iso(const PseudogroupTag& p1, const PseudogroupTag& p2, const LatticeHom& phi);

Report roundtrip_A(GroupoidPtr g, std::size_t cap = kDefaultCap);
Report roundtrip_A_sem(IsgPtr I, const std::vector<int>& gens, std::size_t cap = kDefaultCap);

} // namespace cartan
