#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cartan/correspondence.hpp"
#include "cartan/crossed_product.hpp"

namespace cartan {

// Normalizing partial isometry with v*v = z_src, vv* = z_tgt and
// v ε(b) v* = ε(b) for b moved from block src to block tgt.
struct Germ {
    int src = -1, tgt = -1;
    Element rep;
};

struct GermFamily {
    std::vector<Germ> germs;
    std::vector<std::vector<int>> index; // index[tgt][src] -> germ, or -1
    Report report;

    int at(int tgt, int src) const { return index[tgt][src]; }
};

// Throws MalformedInput when the expectation fails validation,
// RelativeCommutantViolation when B'∩M is larger than Z(B), and
// IncompleteGermFamily when the germs do not span M (B not regular).
GermFamily normalizing_germs(const Inclusion& inc, double tol = kTol);

// Atoms "x0".."x{k-1}" for the blocks of B, weighted by inc.weights
// (uniform when empty).
WeightedSet block_base(const Inclusion& inc);

struct QuotientSemigroup {
    IsgPtr semigroup;
    std::vector<std::vector<int>> maps; // element -> image of each block, or -1
    Report report;
};

// Partial injections of the atoms with every pair (image, point) allowed,
// composed as maps; allowed[tgt][src].
QuotientSemigroup partial_injection_semigroup(const WeightedSet& base, const std::vector<std::vector<char>>& allowed,
                                              std::size_t cap = kDefaultCap);

// Partial injections of the blocks whose every pair carries a germ, with
// products resolved through the lifts: v_zy v_yx = u · v_zx, u unitary in B.
QuotientSemigroup quotient_semigroup(const Inclusion& inc, const GermFamily& germs, std::size_t cap = kDefaultCap,
                                     double tol = kTol);

struct ExtractOptions {
    std::size_t cap = kDefaultCap;
    std::uint64_t seed = 1;
    // Nonzero: replace each non-unit germ rep v by c·ε(w)v with w a random
    // unitary of the target block and |c| = 1.
    std::uint64_t perturb_seed = 0;
    double tol = kTol;
};

struct Extraction {
    Inclusion source;
    GermFamily germs;
    QuotientSemigroup quotient;
    Synthesis synthesis;
    CocycleAction action;
    std::vector<Element> lifts; // per arrow of the synthesized groupoid
    CrossedProduct cp;
    Mat theta;     // vec of source M -> vec of cp M
    Mat theta_inv;
    Report report;

    Element to_cp(const Element& x) const;
    Element from_cp(const Element& y) const;
};

Extraction extract(const Inclusion& inc, const ExtractOptions& opt = {});

// Same inclusion with M blocks permuted and conjugated by random
// unitaries, B blocks permuted (weights follow) and conjugated.
Inclusion erase_labels(const Inclusion& inc, std::uint64_t seed);

// Isomorphism of principal groupoids matching weights and block sizes.
std::optional<GroupoidIso> principal_iso(const Groupoid& g1, const std::vector<int>& f1, const Groupoid& g2,
                                         const std::vector<int>& f2);

// Crossed product, erase labels, extract; the extracted groupoid must be
// isomorphic to the source and the transported action cocycle-conjugate
// to it. θ is checked inside extract, and a second extraction with
// perturbed germ reps must give a conjugate action.
Report roundtrip_B(const CocycleAction& a, std::uint64_t seed = 1, std::size_t cap = kDefaultCap);

// Extract, rebuild the crossed product and check θ. Used for unlabeled input.
Report roundtrip_B_inclusion(const Inclusion& inc, std::uint64_t seed = 1, std::size_t cap = kDefaultCap);

} // namespace cartan
