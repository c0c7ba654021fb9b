#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cartan/correspondence.hpp"
#include "cartan/groupoid.hpp"
#include "cartan/inverse_semigroup.hpp"

namespace fx {

inline cartan::GroupoidPtr share(cartan::Groupoid g) {
    return std::make_shared<const cartan::Groupoid>(std::move(g));
}

// Pair groupoid on n uniformly weighted atoms, one class.
inline cartan::Groupoid full_relation(int n) {
    std::vector<int> cls;
    for (int i = 0; i < n; ++i) cls.push_back(i);
    return cartan::principal_groupoid(cartan::WeightedSet::uniform(n), {cls});
}

inline cartan::Groupoid z2_point() {
    return cartan::group_bundle(cartan::WeightedSet::uniform(1), cartan::cyclic_group(2));
}

// Idempotent-only semigroup: the subset lattice of `base` under intersection.
inline cartan::InvSemigroup subset_lattice(const cartan::WeightedSet& base) {
    const int n = static_cast<int>(base.size());
    const int N = 1 << n;
    std::vector<std::string> ids;
    std::vector<int> mul(static_cast<std::size_t>(N) * N), inv(N);
    std::vector<std::pair<int, cartan::Subset>> emb;
    for (int s = 0; s < N; ++s) {
        ids.push_back("e" + std::to_string(s));
        inv[s] = s;
        emb.push_back({s, cartan::Subset{static_cast<std::uint64_t>(s)}});
        for (int t = 0; t < N; ++t) mul[s * N + t] = s & t;
    }
    return cartan::InvSemigroup(base, ids, 0, mul, inv, emb);
}

// Bisection index in [[G]] by arrow ids.
inline int element(const cartan::PseudogroupTag& p, const std::vector<std::string>& arrow_ids) {
    std::vector<int> arrows;
    for (const auto& id : arrow_ids) arrows.push_back(p.groupoid->arrow_index(id));
    return p.element_of(cartan::make_bisection(*p.groupoid, arrows));
}

} // namespace fx
