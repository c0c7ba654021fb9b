#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace oracle {

using namespace cartan;

std::uint64_t partial_injections(int n) {
    std::uint64_t total = 0;
    for (int k = 0; k <= n; ++k) {
        std::uint64_t c = 1;
        for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
        std::uint64_t f = 1;
        for (int i = 2; i <= k; ++i) f *= i;
        total += c * c * f;
    }
    return total;
}

std::vector<std::vector<int>> bisections_by_subsets(const Groupoid& g) {
    const int m = static_cast<int>(g.num_arrows());
    std::vector<std::vector<int>> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        std::uint64_t seen_s = 0, seen_t = 0;
        bool ok = true;
        std::vector<int> arrows;
        for (int a = 0; a < m && ok; ++a) {
            if (!((mask >> a) & 1u)) continue;
            std::uint64_t s = std::uint64_t{1} << g.src(a), t = std::uint64_t{1} << g.tgt(a);
            if ((seen_s & s) || (seen_t & t)) ok = false;
            seen_s |= s;
            seen_t |= t;
            arrows.push_back(a);
        }
        if (ok) out.push_back(arrows);
    }
    return out;
}

std::vector<int> idempotents(const InvSemigroup& I) {
    std::vector<int> out;
    for (int x = 0; x < static_cast<int>(I.size()); ++x)
        if (I.mul(x, x) == x) out.push_back(x);
    return out;
}

static bool idem_leq(const InvSemigroup& I, int e, int f) { return I.mul(e, f) == e; }

std::optional<int> max_fixed_idempotent(const InvSemigroup& I, int x) {
    std::vector<int> fixed;
    for (int e : idempotents(I))
        if (I.mul(x, e) == e) fixed.push_back(e);
    for (int c : fixed) {
        bool top = true;
        for (int e : fixed) top = top && idem_leq(I, e, c);
        if (top) return c;
    }
    return std::nullopt;
}

std::int64_t d0_units(const InvSemigroup& I, int x, int y) {
    std::int64_t best = -1;
    for (int e : idempotents(I)) {
        Subset s = *I.embed(e);
        int ec = I.idempotent_of(I.base().complement(s));
        if (I.mul(x, ec) != I.mul(y, ec)) continue;
        std::int64_t m = I.base().units(s);
        if (best < 0 || m < best) best = m;
    }
    return best;
}

std::optional<int> max_agreement_idempotent(const InvSemigroup& I, int x, int y) {
    int bound = I.idempotent_of(*I.embed(I.mul(I.inv(x), x)) | *I.embed(I.mul(I.inv(y), y)));
    std::vector<int> ok;
    for (int e : idempotents(I))
        if (idem_leq(I, e, bound) && I.mul(x, e) == I.mul(y, e)) ok.push_back(e);
    for (int c : ok) {
        bool top = true;
        for (int e : ok) top = top && idem_leq(I, e, c);
        if (top) return c;
    }
    return std::nullopt;
}

std::optional<int> least_upper_bound(const InvSemigroup& I, const std::vector<int>& xs) {
    auto le = [&](int a, int b) { return a == I.mul(b, I.mul(I.inv(a), a)); };
    std::vector<int> ub;
    for (int u = 0; u < static_cast<int>(I.size()); ++u) {
        bool all = true;
        for (int x : xs) all = all && le(x, u);
        if (all) ub.push_back(u);
    }
    for (int c : ub) {
        bool least = true;
        for (int u : ub) least = least && le(c, u);
        if (least) return c;
    }
    return std::nullopt;
}

} // namespace oracle

namespace oracle {

std::vector<std::vector<std::vector<int>>> set_partitions(int n) {
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<int> a(n, 0);
    std::function<void(int, int)> rec = [&](int i, int m) {
        if (i == n) {
            std::vector<std::vector<int>> p(m);
            for (int x = 0; x < n; ++x) p[a[x]].push_back(x);
            out.push_back(p);
            return;
        }
        for (int v = 0; v <= m; ++v) {
            a[i] = v;
            rec(i + 1, std::max(m, v + 1));
        }
    };
    if (n == 0) return {{}};
    rec(0, 0);
    return out;
}

std::vector<int> labels(const std::vector<std::vector<int>>& classes, int n) {
    std::vector<int> l(n, -1);
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (int x : classes[c]) l[x] = static_cast<int>(c);
    return l;
}

bool strongly_normal_brute(const std::vector<int>& r, const std::vector<int>& s) {
    const int n = static_cast<int>(r.size());
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<char> covered(static_cast<std::size_t>(n) * n, 0);
    do {
        bool ok = true;
        for (int x = 0; x < n && ok; ++x) {
            if (r[x] != r[p[x]]) ok = false;
            for (int y = 0; y < n && ok; ++y)
                if ((s[x] == s[y]) != (s[p[x]] == s[p[y]])) ok = false;
        }
        if (!ok) continue;
        for (int x = 0; x < n; ++x) covered[static_cast<std::size_t>(p[x]) * n + x] = 1;
    } while (std::next_permutation(p.begin(), p.end()));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (r[x] == r[y] && !covered[static_cast<std::size_t>(y) * n + x]) return false;
    return true;
}

std::set<std::vector<int>> quotient_maps_brute(const std::vector<int>& r, const std::vector<int>& s) {
    const int n = static_cast<int>(r.size());
    // renumber S-classes by smallest atom
    std::vector<int> cls(n, -1), first;
    std::map<int, int> seen;
    for (int x = 0; x < n; ++x) {
        auto it = seen.find(s[x]);
        if (it == seen.end()) {
            it = seen.emplace(s[x], static_cast<int>(first.size())).first;
            first.push_back(x);
        }
        cls[x] = it->second;
    }
    const int k = static_cast<int>(first.size());
    std::set<std::vector<int>> out;
    std::vector<int> psi(n, -1);
    std::vector<char> used(n, 0);
    std::function<void(int)> rec = [&](int x) {
        if (x == n) {
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    if (cls[a] != cls[b]) continue;
                    // domain and range are unions of S-classes
                    if ((psi[a] < 0) != (psi[b] < 0)) return;
                    if (used[a] != used[b]) return;
                }
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    if (psi[a] >= 0 && psi[b] >= 0 && (cls[a] == cls[b]) != (cls[psi[a]] == cls[psi[b]])) return;
            std::vector<int> m(k, -1);
            for (int c = 0; c < k; ++c)
                if (psi[first[c]] >= 0) m[c] = cls[psi[first[c]]];
            out.insert(m);
            return;
        }
        psi[x] = -1;
        rec(x + 1);
        for (int y = 0; y < n; ++y) {
            if (used[y] || r[y] != r[x]) continue;
            used[y] = 1;
            psi[x] = y;
            rec(x + 1);
            used[y] = 0;
        }
        psi[x] = -1;
    };
    rec(0);
    return out;
}

} // namespace oracle
