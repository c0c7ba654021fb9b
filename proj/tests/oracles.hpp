// Independent brute-force reference implementations used only by tests.
// They follow the definitions literally and share no code paths with the
// library beyond the data types.
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "cartan/groupoid.hpp"
#include "cartan/inverse_semigroup.hpp"

namespace oracle {

// Σ_k C(n,k)^2 k!  (partial injections of an n-set).
std::uint64_t partial_injections(int n);

// All arrow subsets with injective src and tgt, by subset enumeration.
std::vector<std::vector<int>> bisections_by_subsets(const cartan::Groupoid& g);

// Idempotents of I found by e·e = e.
std::vector<int> idempotents(const cartan::InvSemigroup& I);

// Largest idempotent e with x·e = e, searched over all idempotents; also
// checks that it dominates every other such e (returns nullopt otherwise).
std::optional<int> max_fixed_idempotent(const cartan::InvSemigroup& I, int x);

// min μ(e) over idempotents e with x·eᶜ = y·eᶜ, in mass units.
std::int64_t d0_units(const cartan::InvSemigroup& I, int x, int y);

// Maximal idempotent e <= x⁻¹x ∨ y⁻¹y with x·e = y·e (exhaustive).
std::optional<int> max_agreement_idempotent(const cartan::InvSemigroup& I, int x, int y);

// Least upper bound of an orthogonal family in the natural order.
std::optional<int> least_upper_bound(const cartan::InvSemigroup& I, const std::vector<int>& xs);

// Set partitions of {0..n-1} by restricted growth strings; blocks as atom lists.
std::vector<std::vector<std::vector<int>>> set_partitions(int n);

// Class label per atom for a partition.
std::vector<int> labels(const std::vector<std::vector<int>>& classes, int n);

// Union of graphs of all permutations of the atoms that preserve s and
// have graph inside r equals r. Exhaustive over n! permutations.
bool strongly_normal_brute(const std::vector<int>& r, const std::vector<int>& s);

// Class maps (S-class -> S-class or -1, classes numbered by smallest atom)
// induced by partial injections of the atoms with domain and range unions
// of S-classes, preserving S both ways, graph inside R.
std::set<std::vector<int>> quotient_maps_brute(const std::vector<int>& r, const std::vector<int>& s);

} // namespace oracle
