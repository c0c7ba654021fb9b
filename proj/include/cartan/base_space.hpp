#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "cartan/rational.hpp"

namespace cartan {

constexpr std::size_t kMaxAtoms = 64;

// Subset of the atoms of a fixed space, as a bit mask (bit i = atom i).
struct Subset {
    std::uint64_t bits = 0;

    static Subset single(std::size_t i) { return Subset{std::uint64_t{1} << i}; }
    bool contains(std::size_t i) const { return (bits >> i) & 1u; }
    bool empty() const { return bits == 0; }
    int count() const { return __builtin_popcountll(bits); }
    bool subset_of(Subset o) const { return (bits & ~o.bits) == 0; }

    Subset operator&(Subset o) const { return {bits & o.bits}; }
    Subset operator|(Subset o) const { return {bits | o.bits}; }
    Subset minus(Subset o) const { return {bits & ~o.bits}; }
    bool operator==(const Subset& o) const { return bits == o.bits; }
    bool operator!=(const Subset& o) const { return bits != o.bits; }
    bool operator<(const Subset& o) const { return bits < o.bits; }
};

class WeightedSet {
public:
    WeightedSet() = default;

    // Validates positivity, distinct ids and total mass 1. With `normalize`
    // the weights are rescaled to sum to 1 instead of being rejected.
    static WeightedSet create(std::vector<std::string> ids, std::vector<Rational> weights,
                              bool normalize = false);
    static WeightedSet uniform(std::vector<std::string> ids);
    // Atoms named "1".."n" with uniform weight.
    static WeightedSet uniform(std::size_t n);

    std::size_t size() const { return ids_.size(); }
    const std::string& id(std::size_t i) const { return ids_[i]; }
    const std::vector<std::string>& ids() const { return ids_; }
    const Rational& weight(std::size_t i) const { return weights_[i]; }
    const std::vector<Rational>& weights() const { return weights_; }
    int index_of(const std::string& id) const; // throws UnknownId
    bool has(const std::string& id) const { return index_.count(id) > 0; }

    Subset full() const;
    Subset complement(Subset a) const { return full().minus(a); }

    Rational mu(Subset a) const;
    // Integer mass of `a` in units of 1/denominator().
    std::int64_t units(Subset a) const;
    std::int64_t unit(std::size_t i) const { return units_[i]; }
    std::int64_t denominator() const { return denom_; }

    bool operator==(const WeightedSet& o) const { return ids_ == o.ids_ && weights_ == o.weights_; }

private:
    std::vector<std::string> ids_;
    std::vector<Rational> weights_;
    std::vector<std::int64_t> units_;
    std::int64_t denom_ = 1;
    std::unordered_map<std::string, int> index_;
};

} // namespace cartan
