#include "cartan/generators.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "cartan/errors.hpp"

namespace cartan {

std::vector<std::vector<int>> random_partition(int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, std::max(0, n - 1));
    std::vector<int> label(n);
    for (auto& l : label) l = pick(rng);
    std::vector<int> relabel(n, -1);
    std::vector<std::vector<int>> out;
    for (int x = 0; x < n; ++x) {
        if (relabel[label[x]] < 0) {
            relabel[label[x]] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[relabel[label[x]]].push_back(x);
    }
    return out;
}

WeightedSet random_weights(int n, std::mt19937_64& rng, int max_units) {
    std::uniform_int_distribution<int> pick(1, max_units);
    std::vector<std::string> ids;
    std::vector<Rational> w;
    for (int i = 0; i < n; ++i) {
        ids.push_back(std::to_string(i + 1));
        w.push_back(Rational(pick(rng)));
    }
    return WeightedSet::create(ids, w, true);
}

FiniteGroup group_by_name(const std::string& name) {
    if (name.size() >= 2 && (name[0] == 'z' || name[0] == 's')) {
        int k = 0;
        try {
            k = std::stoi(name.substr(1));
        } catch (const std::logic_error&) {
        }
        if (k >= 1 && name[0] == 'z') return cyclic_group(k);
        if (k >= 1 && k <= 5) return symmetric_group(k);
    }
    throw Error(ErrorCode::MalformedInput, "unknown group " + name + " (use zN or sN)");
}

Groupoid random_principal_groupoid(int atoms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto classes = random_partition(atoms, rng);
    return principal_groupoid(random_weights(atoms, rng), classes);
}

Groupoid random_group_bundle(int atoms, const FiniteGroup& group, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return group_bundle(random_weights(atoms, rng), group);
}

// Orbits are coset spaces Γ/H with H cyclic or all of Γ.
Groupoid random_transformation_groupoid(int atoms, const FiniteGroup& group, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int n = group.order();
    std::vector<std::vector<int>> subgroups;
    for (int h = 0; h < n; ++h) {
        std::vector<int> H{0};
        for (int p = h; p != 0; p = group.mul(p, h)) H.push_back(p);
        std::sort(H.begin(), H.end());
        subgroups.push_back(H);
    }
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    subgroups.push_back(all);

    std::vector<int> act(static_cast<std::size_t>(n) * atoms);
    int next = 0;
    while (next < atoms) {
        std::vector<const std::vector<int>*> fit;
        for (const auto& H : subgroups)
            if (n / static_cast<int>(H.size()) <= atoms - next) fit.push_back(&H);
        const auto& H = *fit[std::uniform_int_distribution<std::size_t>(0, fit.size() - 1)(rng)];
        // left cosets gH, labelled by first representative
        std::vector<int> coset_of(n, -1);
        int count = 0;
        for (int g = 0; g < n; ++g) {
            if (coset_of[g] >= 0) continue;
            for (int h : H) coset_of[group.mul(g, h)] = count;
            ++count;
        }
        std::vector<int> rep(count);
        for (int g = n - 1; g >= 0; --g) rep[coset_of[g]] = g;
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < count; ++c)
                act[static_cast<std::size_t>(a) * atoms + next + c] = next + coset_of[group.mul(a, rep[c])];
        next += count;
    }
    return transformation_groupoid(random_weights(atoms, rng), group, act);
}

CocycleAction random_coboundary_instance(int atoms, int max_block, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto classes = random_partition(atoms, rng);
    auto g = std::make_shared<const Groupoid>(principal_groupoid(random_weights(atoms, rng), classes));
    std::vector<int> field(atoms);
    std::uniform_int_distribution<int> pick(1, std::max(1, max_block));
    for (const auto& c : classes) {
        int k = pick(rng);
        for (int x : c) field[x] = k;
    }
    return random_coboundary_action(g, field, rng);
}

SubInclusion random_subrelation(int atoms, std::uint64_t seed, bool strongly_normal, bool ergodic) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> R;
    if (ergodic) {
        R.emplace_back(atoms);
        std::iota(R[0].begin(), R[0].end(), 0);
    } else {
        R = random_partition(atoms, rng);
    }
    std::vector<std::vector<int>> S;
    for (auto c : R) {
        if (strongly_normal) {
            const int m = static_cast<int>(c.size());
            std::vector<int> divisors;
            for (int d = 1; d <= m; ++d)
                if (m % d == 0) divisors.push_back(d);
            int d = divisors[std::uniform_int_distribution<std::size_t>(0, divisors.size() - 1)(rng)];
            std::shuffle(c.begin(), c.end(), rng);
            for (int i = 0; i < m; i += d) S.emplace_back(c.begin() + i, c.begin() + i + d);
        } else {
            for (const auto& part : random_partition(static_cast<int>(c.size()), rng)) {
                S.emplace_back();
                for (int i : part) S.back().push_back(c[i]);
            }
        }
    }
    WeightedSet base = random_weights(atoms, rng);
    return SubInclusion(EquivRel(base, R), EquivRel(base, S));
}

std::vector<std::vector<std::vector<int>>> all_partitions(int n) {
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<int> a(n, 0);
    std::function<void(int, int)> rec = [&](int i, int m) {
        if (i == n) {
            std::vector<std::vector<int>> p(m);
            for (int x = 0; x < n; ++x) p[a[x]].push_back(x);
            out.push_back(std::move(p));
            return;
        }
        for (int v = 0; v <= m; ++v) {
            a[i] = v;
            rec(i + 1, std::max(m, v + 1));
        }
    };
    rec(0, 0);
    return out;
}

std::vector<SubInclusion> strongly_normal_ergodic_inclusions(int max_atoms) {
    std::vector<SubInclusion> out;
    for (int n = 1; n <= max_atoms; ++n) {
        WeightedSet base = WeightedSet::uniform(static_cast<std::size_t>(n));
        EquivRel full = EquivRel::full(base);
        for (const auto& p : all_partitions(n)) {
            bool equal = std::all_of(p.begin(), p.end(), [&](const auto& c) { return c.size() == p[0].size(); });
            if (equal) out.emplace_back(full, EquivRel(base, p));
        }
    }
    return out;
}

} // namespace cartan
