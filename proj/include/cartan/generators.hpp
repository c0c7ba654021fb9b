#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cartan/cocycle_action.hpp"
#include "cartan/equiv_rel.hpp"

namespace cartan {

// Seeded instance samplers. Same seed, same instance.

// Uniform label per atom, relabelled by first occurrence.
std::vector<std::vector<int>> random_partition(int n, std::mt19937_64& rng);
// Positive weights k/Σk with k uniform in 1..max_units.
WeightedSet random_weights(int n, std::mt19937_64& rng, int max_units = 4);

// "z2", "z3", "s3" and "zN" / "sN".
FiniteGroup group_by_name(const std::string& name);

Groupoid random_principal_groupoid(int atoms, std::uint64_t seed);
Groupoid random_group_bundle(int atoms, const FiniteGroup& group, std::uint64_t seed);
// Γ acting on `atoms` points: a random disjoint union of coset spaces Γ/H,
// H cyclic or Γ itself.
Groupoid random_transformation_groupoid(int atoms, const FiniteGroup& group, std::uint64_t seed);
// Random principal groupoid with a random field (block sizes 1..max_block,
// constant on classes) and a random coboundary action on it.
CocycleAction random_coboundary_instance(int atoms, int max_block, std::uint64_t seed);
// R random, S a random refinement; with `strongly_normal` the S-classes in
// each R-class share one size, and with `ergodic` R is a single class.
SubInclusion random_subrelation(int atoms, std::uint64_t seed, bool strongly_normal = false, bool ergodic = false);

// Every partition of {0..n-1}, by restricted growth strings.
std::vector<std::vector<std::vector<int>>> all_partitions(int n);

// S ⊂ full(n) with all S-classes of one size, for every n <= max_atoms
// and every such S; uniform weights.
std::vector<SubInclusion> strongly_normal_ergodic_inclusions(int max_atoms);

} // namespace cartan
