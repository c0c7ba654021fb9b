#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cartan/base_space.hpp"
#include "cartan/report.hpp"

namespace cartan {

// Finite inverse semigroup with zero over a finite measure space, as an
// explicit multiplication table. The idempotent embedding identifies
// idempotents with subsets of the base.
class InvSemigroup {
public:
    InvSemigroup() = default;
    // Structural checks only (sizes, ranges, embedded elements distinct);
    // the axioms are checked by validate_csm.
    InvSemigroup(WeightedSet base, std::vector<std::string> ids, int zero, std::vector<int> mul,
                 std::vector<int> inv, const std::vector<std::pair<int, Subset>>& idem_embed);

    std::size_t size() const { return ids_.size(); }
    const WeightedSet& base() const { return base_; }
    const std::string& id(int x) const { return ids_[x]; }
    const std::vector<std::string>& ids() const { return ids_; }
    int index_of(const std::string& id) const; // throws UnknownId
    int zero() const { return zero_; }
    int mul(int x, int y) const { return mul_[static_cast<std::size_t>(x) * ids_.size() + y]; }
    int inv(int x) const { return inv_[x]; }

    // Embedded subset of an idempotent, if x carries one.
    std::optional<Subset> embed(int x) const;
    // Idempotent carrying subset s, or -1.
    int idempotent_of(Subset s) const;
    int one() const { return idempotent_of(base_.full()); }
    int atom_idempotent(std::size_t a) const { return idempotent_of(Subset::single(a)); }
    bool algebraic_idempotent(int x) const { return mul(x, x) == x; }

    // Subsets of x⁻¹x and xx⁻¹; throw DecompositionFailure when those
    // products are not embedded idempotents.
    Subset dom(int x) const;
    Subset ran(int x) const;

    const std::vector<std::pair<int, Subset>>& embedding() const { return embed_list_; }

private:
    WeightedSet base_;
    std::vector<std::string> ids_;
    int zero_ = 0;
    std::vector<int> mul_, inv_;
    std::vector<std::pair<int, Subset>> embed_list_;
    std::vector<int> embed_of_; // element -> index in embed_list_, or -1
    std::unordered_map<std::uint64_t, int> idem_by_bits_;
    std::unordered_map<std::string, int> index_;
};

using IsgPtr = std::shared_ptr<const InvSemigroup>;

// x·e_a for every element and atom (zero when a is outside dom x).
class Restrictions {
public:
    explicit Restrictions(const InvSemigroup& I);
    int at(int x, std::size_t a) const { return table_[static_cast<std::size_t>(x) * n_ + a]; }

private:
    std::size_t n_;
    std::vector<int> table_;
};

bool leq(const InvSemigroup& I, int x, int y);        // x = y·x⁻¹x
bool orthogonal(const InvSemigroup& I, int x, int y); // domains and ranges disjoint

Report validate_csm(const InvSemigroup& I);

// Greedy generating set in the sense of joins of restricted generators:
// starts from 1 and adds elements (largest domain first) until every
// single-atom restriction x·e_a equals g·e_a for some generator g.
std::vector<int> find_generators(const InvSemigroup& I);

// Join of all atom idempotents e_a with x·e_a = e_a.
int expectation_E(const InvSemigroup& I, int x);

// Exact metric. d0 is evaluated atom-wise: x·eᶜ = y·eᶜ holds exactly when e
// contains every atom on which the restrictions of x and y differ.
Rational metric_d(const InvSemigroup& I, int x, int y);
Rational d0(const InvSemigroup& I, int x, int y);

// Bulk evaluation in integer mass units (over base().denominator()).
class Metric {
public:
    explicit Metric(const InvSemigroup& I);
    std::int64_t d(int x, int y) const;
    std::int64_t d0(int x, int y) const;
    std::int64_t E_units(int x) const { return e_units_[x]; }

private:
    const InvSemigroup& I_;
    Restrictions r_;
    std::vector<int> E_;
    std::vector<std::int64_t> e_units_;
};

// Metric axioms over all pairs and triples in exact mass units, the
// identity d = d0(x,y) + d0(x⁻¹,y⁻¹), and the rational metric_d against
// the bulk table. Throws CapExceeded when |I|³ exceeds triple_limit.
Report check_metric(const InvSemigroup& I, std::size_t triple_limit = 64'000'000);

// Throws NotOrthogonal (with the offending pair) or NotPresent.
int join_orthogonal(const InvSemigroup& I, const std::vector<int>& xs);

// gens[0] must be 1. Returns the w-family with zero members dropped.
// Throws NotGenerating naming an element without a decomposition.
std::vector<int> normalize_generators(const InvSemigroup& I, const std::vector<int>& gens);

// Unique decomposition index per atom: out[a] = n with x·e_a = w_n·e_a
// (-1 outside dom x). Throws DecompositionFailure if none or several.
std::vector<int> decompose(const InvSemigroup& I, const Restrictions& r, const std::vector<int>& w, int x);

struct LatticeHom {
    IsgPtr source, target;
    std::vector<int> map;
    int operator()(int x) const { return map[x]; }
};

Report check_hom(const LatticeHom& h);

} // namespace cartan
