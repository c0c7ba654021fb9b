#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cartan/base_space.hpp"
#include "cartan/report.hpp"

namespace cartan {

class Groupoid {
public:
    struct Arrow {
        std::string id;
        int src = -1;
        int tgt = -1;
    };

    static constexpr std::size_t kMaxArrows = 4096;

    Groupoid() = default;
    // Checks only that the tables are well-shaped (indices in range, ids
    // unique, composition entries on matching src/tgt); the groupoid
    // axioms are checked by validate_groupoid.
    Groupoid(WeightedSet base, std::vector<Arrow> arrows, std::vector<int> units,
             std::vector<int> inv, const std::vector<std::array<int, 3>>& compose);

    const WeightedSet& base() const { return base_; }
    std::size_t num_atoms() const { return base_.size(); }
    std::size_t num_arrows() const { return arrows_.size(); }

    const std::string& arrow_id(int g) const { return arrows_[g].id; }
    int arrow_index(const std::string& id) const; // throws UnknownId
    int src(int g) const { return arrows_[g].src; }
    int tgt(int g) const { return arrows_[g].tgt; }
    int unit(int x) const { return units_[x]; }
    int inv(int g) const { return inv_[g]; }
    bool is_unit(int g) const { return units_[arrows_[g].src] == g; }
    // -1 when (g,h) is not composable or missing from the table.
    int compose(int g, int h) const { return compose_[static_cast<std::size_t>(g) * arrows_.size() + h]; }
    // All arrows with source x (ascending).
    const std::vector<int>& arrows_from(int x) const { return from_[x]; }

    std::vector<std::array<int, 3>> compose_triples() const;

private:
    WeightedSet base_;
    std::vector<Arrow> arrows_;
    std::vector<int> units_, inv_, compose_;
    std::vector<std::vector<int>> from_;
    std::unordered_map<std::string, int> index_;
};

using GroupoidPtr = std::shared_ptr<const Groupoid>;

// A bisection stored by source: at[x] is the arrow leaving x, or -1.
struct Bisection {
    std::vector<int> at;

    bool operator==(const Bisection& o) const { return at == o.at; }
    bool operator<(const Bisection& o) const;
    std::size_t size() const;
    std::vector<int> arrows() const;
};

struct BisectionHash {
    std::size_t operator()(const Bisection& b) const;
};

Report validate_groupoid(const Groupoid& g);

// Throws MalformedInput if the arrows do not form a bisection.
Bisection make_bisection(const Groupoid& g, const std::vector<int>& arrows);
bool is_bisection(const Groupoid& g, const std::vector<int>& arrows);
Bisection empty_bisection(const Groupoid& g);
Bisection units_bisection(const Groupoid& g, Subset s);
Subset source_set(const Bisection& b);
Subset target_set(const Groupoid& g, const Bisection& b);
// UV = {gh : g in U, h in V, src(g) = tgt(h)}.
Bisection compose(const Groupoid& g, const Bisection& u, const Bisection& v);
Bisection inverse(const Groupoid& g, const Bisection& u);

struct SourceTargetMeasures {
    std::vector<Rational> mu_s, mu_t;
    Rational total_s, total_t;
};
SourceTargetMeasures measures_st(const Groupoid& g);

struct Basis {
    std::vector<std::vector<int>> parts; // parts[0] = units
    bool symmetric = false;
};
// First-fit greedy in arrow order. With `symmetric` the family is closed
// under inversion: each part is either self-inverse (involutions only) or
// has its inverse as another part.
Basis compute_basis(const Groupoid& g, bool symmetric);

struct OrbitData {
    std::vector<int> orbit_of;             // atom -> orbit index
    std::vector<std::vector<int>> orbits;  // ascending atoms
    std::vector<std::vector<int>> isotropy; // atom -> arrows with src = tgt = x
    bool ergodic() const { return orbits.size() == 1; }
    bool principal() const;
};
OrbitData orbits_isotropy(const Groupoid& g);

struct GroupoidIso {
    std::vector<int> atoms;  // atom of G1 -> atom of G2
    std::vector<int> arrows; // arrow of G1 -> arrow of G2
};

struct IsoSearchLimits {
    std::size_t max_atoms = 64;
    std::size_t max_arrows = 512;
    std::size_t max_nodes = 2'000'000;
};

struct IsoResult {
    std::optional<GroupoidIso> witness;
    std::string refutation; // set when no witness
};

// Sound and complete: invariant comparison, then backtracking with
// composition propagation. Throws SearchBudgetExceeded past the limits.
IsoResult is_isomorphic(const Groupoid& g1, const Groupoid& g2, const IsoSearchLimits& lim = {});
// Direct table check of a candidate isomorphism (weights included).
Report check_groupoid_iso(const Groupoid& g1, const Groupoid& g2, const GroupoidIso& iso);

// Number of bisections, saturating at UINT64_MAX.
std::uint64_t count_bisections(const Groupoid& g);
// All bisections ordered by size, then by the `at` vector. Throws
// CapExceeded (carrying the predicted count) when the count exceeds cap.
std::vector<Bisection> enumerate_bisections(const Groupoid& g, std::size_t cap);

// ---- standard constructions ----

struct FiniteGroup {
    std::string name;
    std::vector<std::string> elements; // element 0 is the identity
    std::vector<int> table;            // table[a*n+b] = ab
    int order() const { return static_cast<int>(elements.size()); }
    int mul(int a, int b) const { return table[a * order() + b]; }
    int inv(int a) const;
};
FiniteGroup cyclic_group(int n);
FiniteGroup symmetric_group(int n); // permutations of {0..n-1}, n <= 5

// Pair groupoid of the partition (classes as atom indices).
Groupoid principal_groupoid(const WeightedSet& base, const std::vector<std::vector<int>>& classes);
Groupoid units_only(const WeightedSet& base);
// Group bundle with fibre `group` over every atom.
Groupoid group_bundle(const WeightedSet& base, const FiniteGroup& group);
// Transformation groupoid group ⋉ Y; act[a*|Y|+y] = a.y, arrows (a,y): y -> a.y.
Groupoid transformation_groupoid(const WeightedSet& base, const FiniteGroup& group,
                                 const std::vector<int>& act);
// Relabel atoms and arrows through bijections (used for relabeling tests).
Groupoid relabel(const Groupoid& g, const std::vector<int>& atom_perm, const std::vector<int>& arrow_perm);

} // namespace cartan
