#include "cartan/groupoid.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "cartan/errors.hpp"

namespace cartan {

Groupoid::Groupoid(WeightedSet base, std::vector<Arrow> arrows, std::vector<int> units,
                   std::vector<int> inv, const std::vector<std::array<int, 3>>& compose)
    : base_(std::move(base)), arrows_(std::move(arrows)), units_(std::move(units)), inv_(std::move(inv)) {
    const int n = static_cast<int>(base_.size());
    const int m = static_cast<int>(arrows_.size());
    if (arrows_.size() > kMaxArrows) throw Error(ErrorCode::MalformedInput, "too many arrows");
    if (static_cast<int>(units_.size()) != n) throw Error(ErrorCode::MalformedInput, "units table size");
    if (static_cast<int>(inv_.size()) != m) throw Error(ErrorCode::MalformedInput, "inverse table size");
    from_.assign(n, {});
    for (int g = 0; g < m; ++g) {
        const auto& a = arrows_[g];
        if (a.src < 0 || a.src >= n || a.tgt < 0 || a.tgt >= n)
            throw Error(ErrorCode::MalformedInput, "arrow " + a.id + " has an endpoint outside the base");
        if (!index_.emplace(a.id, g).second) throw Error(ErrorCode::MalformedInput, "duplicate arrow " + a.id);
        if (inv_[g] < 0 || inv_[g] >= m) throw Error(ErrorCode::MalformedInput, "inverse of " + a.id);
        from_[a.src].push_back(g);
    }
    for (int x = 0; x < n; ++x) {
        int u = units_[x];
        if (u < 0 || u >= m || arrows_[u].src != x || arrows_[u].tgt != x)
            throw Error(ErrorCode::MalformedInput, "unit of atom " + base_.id(x));
    }
    compose_.assign(static_cast<std::size_t>(m) * m, -1);
    for (const auto& t : compose) {
        for (int v : t)
            if (v < 0 || v >= m) throw Error(ErrorCode::MalformedInput, "composition entry out of range");
        if (arrows_[t[0]].src != arrows_[t[1]].tgt)
            throw Error(ErrorCode::MalformedInput,
                        "composition of non-composable pair " + arrows_[t[0]].id + "," + arrows_[t[1]].id);
        int& slot = compose_[static_cast<std::size_t>(t[0]) * m + t[1]];
        if (slot != -1 && slot != t[2])
            throw Error(ErrorCode::MalformedInput, "conflicting composition entries");
        slot = t[2];
    }
}

int Groupoid::arrow_index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorCode::UnknownId, "arrow \"" + id + "\"");
    return it->second;
}

std::vector<std::array<int, 3>> Groupoid::compose_triples() const {
    std::vector<std::array<int, 3>> out;
    const int m = static_cast<int>(num_arrows());
    for (int g = 0; g < m; ++g)
        for (int h = 0; h < m; ++h)
            if (int k = compose(g, h); k >= 0) out.push_back({g, h, k});
    return out;
}

// ---------------------------------------------------------------- axioms

Report validate_groupoid(const Groupoid& G) {
    Report r;
    const int m = static_cast<int>(G.num_arrows());
    const int n = static_cast<int>(G.num_atoms());
    auto name = [&](int g) { return G.arrow_id(g); };

    std::string bad;
    for (int g = 0; g < m && bad.empty(); ++g)
        for (int h = 0; h < m && bad.empty(); ++h) {
            bool composable = G.src(g) == G.tgt(h);
            int k = G.compose(g, h);
            if (composable && k < 0) bad = "(" + name(g) + "," + name(h) + ") missing";
            else if (composable && (G.src(k) != G.src(h) || G.tgt(k) != G.tgt(g)))
                bad = "(" + name(g) + "," + name(h) + ") -> " + name(k) + " has wrong endpoints";
        }
    r.add("composition total on composable pairs", bad.empty(), bad);

    bad.clear();
    for (int g = 0; g < m && bad.empty(); ++g)
        for (int h = 0; h < m && bad.empty(); ++h) {
            int gh = G.compose(g, h);
            if (gh < 0) continue;
            for (int k = 0; k < m && bad.empty(); ++k) {
                if (G.tgt(k) != G.src(h)) continue;
                int hk = G.compose(h, k);
                int l = G.compose(gh, k), rr = hk >= 0 ? G.compose(g, hk) : -1;
                if (l < 0 || rr < 0 || l != rr)
                    bad = "(" + name(g) + "," + name(h) + "," + name(k) + ")";
            }
        }
    r.add("associativity", bad.empty(), bad);

    bad.clear();
    for (int g = 0; g < m && bad.empty(); ++g) {
        if (G.compose(g, G.unit(G.src(g))) != g || G.compose(G.unit(G.tgt(g)), g) != g) bad = name(g);
    }
    r.add("units neutral", bad.empty(), bad);

    bad.clear();
    for (int g = 0; g < m && bad.empty(); ++g) {
        int i = G.inv(g);
        if (G.src(i) != G.tgt(g) || G.tgt(i) != G.src(g) || G.compose(i, g) != G.unit(G.src(g)) ||
            G.compose(g, i) != G.unit(G.tgt(g)))
            bad = name(g);
    }
    r.add("inverse axiom", bad.empty(), bad);

    // Quasi-invariance is automatic: every atom has positive mass, so the
    // source and target measures share the empty null set.
    bool positive = true;
    for (int x = 0; x < n; ++x) positive = positive && G.base().weight(x) > Rational(0);
    r.add("quasi-invariance (null sets empty)", positive);
    return r;
}

// ------------------------------------------------------------ bisections

bool Bisection::operator<(const Bisection& o) const {
    std::size_t a = size(), b = o.size();
    if (a != b) return a < b;
    return at < o.at;
}

std::size_t Bisection::size() const {
    return static_cast<std::size_t>(std::count_if(at.begin(), at.end(), [](int g) { return g >= 0; }));
}

std::vector<int> Bisection::arrows() const {
    std::vector<int> out;
    for (int g : at)
        if (g >= 0) out.push_back(g);
    return out;
}

std::size_t BisectionHash::operator()(const Bisection& b) const {
    std::size_t h = 1469598103934665603ull;
    for (int g : b.at) h = (h ^ static_cast<std::size_t>(g + 1)) * 1099511628211ull;
    return h;
}

bool is_bisection(const Groupoid& G, const std::vector<int>& arrows) {
    std::vector<char> s(G.num_atoms(), 0), t(G.num_atoms(), 0);
    for (int g : arrows) {
        if (g < 0 || g >= static_cast<int>(G.num_arrows())) return false;
        if (s[G.src(g)]++ || t[G.tgt(g)]++) return false;
    }
    return true;
}

Bisection make_bisection(const Groupoid& G, const std::vector<int>& arrows) {
    if (!is_bisection(G, arrows)) throw Error(ErrorCode::MalformedInput, "arrow set is not a bisection");
    Bisection b = empty_bisection(G);
    for (int g : arrows) b.at[G.src(g)] = g;
    return b;
}

Bisection empty_bisection(const Groupoid& G) { return Bisection{std::vector<int>(G.num_atoms(), -1)}; }

Bisection units_bisection(const Groupoid& G, Subset s) {
    Bisection b = empty_bisection(G);
    for (std::size_t x = 0; x < G.num_atoms(); ++x)
        if (s.contains(x)) b.at[x] = G.unit(static_cast<int>(x));
    return b;
}

Subset source_set(const Bisection& b) {
    Subset s;
    for (std::size_t x = 0; x < b.at.size(); ++x)
        if (b.at[x] >= 0) s.bits |= std::uint64_t{1} << x;
    return s;
}

Subset target_set(const Groupoid& G, const Bisection& b) {
    Subset s;
    for (int g : b.at)
        if (g >= 0) s.bits |= std::uint64_t{1} << G.tgt(g);
    return s;
}

Bisection compose(const Groupoid& G, const Bisection& u, const Bisection& v) {
    Bisection out = empty_bisection(G);
    for (std::size_t x = 0; x < v.at.size(); ++x) {
        int h = v.at[x];
        if (h < 0) continue;
        int g = u.at[G.tgt(h)];
        if (g < 0) continue;
        out.at[x] = G.compose(g, h);
    }
    return out;
}

Bisection inverse(const Groupoid& G, const Bisection& u) {
    Bisection out = empty_bisection(G);
    for (int g : u.at)
        if (g >= 0) out.at[G.tgt(g)] = G.inv(g);
    return out;
}

SourceTargetMeasures measures_st(const Groupoid& G) {
    SourceTargetMeasures m;
    for (std::size_t g = 0; g < G.num_arrows(); ++g) {
        m.mu_s.push_back(G.base().weight(G.src(static_cast<int>(g))));
        m.mu_t.push_back(G.base().weight(G.tgt(static_cast<int>(g))));
        m.total_s += m.mu_s.back();
        m.total_t += m.mu_t.back();
    }
    return m;
}

Basis compute_basis(const Groupoid& G, bool symmetric) {
    const int n = static_cast<int>(G.num_atoms());
    Basis b;
    b.symmetric = symmetric;
    std::vector<std::vector<char>> used_s, used_t;
    std::vector<int> partner; // symmetric mode: index of the inverse part
    std::vector<int> placed(G.num_arrows(), 0);

    auto open = [&] {
        b.parts.emplace_back();
        used_s.emplace_back(n, 0);
        used_t.emplace_back(n, 0);
        partner.push_back(-1);
        return b.parts.size() - 1;
    };
    auto fits = [&](std::size_t p, int a) { return !used_s[p][G.src(a)] && !used_t[p][G.tgt(a)]; };
    auto put = [&](std::size_t p, int a) {
        b.parts[p].push_back(a);
        used_s[p][G.src(a)] = used_t[p][G.tgt(a)] = 1;
        placed[a] = 1;
    };

    open();
    partner[0] = 0;
    for (int x = 0; x < n; ++x) put(0, G.unit(x));
    for (int g = 0; g < static_cast<int>(G.num_arrows()); ++g) {
        if (placed[g]) continue;
        const int h = G.inv(g);
        if (!symmetric) {
            std::size_t p = 1;
            while (p < b.parts.size() && !fits(p, g)) ++p;
            if (p == b.parts.size()) open();
            put(p, g);
            continue;
        }
        // Parts come as self-inverse parts (for involutions) or as pairs
        // P, P⁻¹; g goes to the first part whose partner also takes inv(g).
        std::size_t p = 1;
        for (; p < b.parts.size(); ++p) {
            const std::size_t q = static_cast<std::size_t>(partner[p]);
            if (h == g ? (q == p && fits(p, g)) : (q != p && fits(p, g) && fits(q, h))) break;
        }
        if (p == b.parts.size()) {
            p = open();
            if (h == g) {
                partner[p] = static_cast<int>(p);
            } else {
                std::size_t q = open();
                partner[p] = static_cast<int>(q);
                partner[q] = static_cast<int>(p);
            }
        }
        put(p, g);
        if (h != g) put(static_cast<std::size_t>(partner[p]), h);
    }
    for (auto& part : b.parts) std::sort(part.begin(), part.end());
    return b;
}

bool OrbitData::principal() const {
    for (const auto& iso : isotropy)
        if (iso.size() != 1) return false;
    return true;
}

OrbitData orbits_isotropy(const Groupoid& G) {
    const int n = static_cast<int>(G.num_atoms());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    OrbitData d;
    d.isotropy.assign(n, {});
    for (int g = 0; g < static_cast<int>(G.num_arrows()); ++g) {
        int a = find(G.src(g)), b = find(G.tgt(g));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
        if (G.src(g) == G.tgt(g)) d.isotropy[G.src(g)].push_back(g);
    }
    d.orbit_of.assign(n, -1);
    std::map<int, int> root_to_orbit;
    for (int x = 0; x < n; ++x) {
        int r = find(x);
        auto [it, fresh] = root_to_orbit.emplace(r, static_cast<int>(d.orbits.size()));
        if (fresh) d.orbits.emplace_back();
        d.orbit_of[x] = it->second;
        d.orbits[it->second].push_back(x);
    }
    return d;
}

// ----------------------------------------------------------- isomorphism

namespace {

struct AtomSignature {
    std::int64_t weight_num, weight_den;
    std::size_t orbit_size, isotropy, out_degree;
    std::vector<std::int64_t> orbit_weights; // sorted, as fractions scaled
    bool operator<(const AtomSignature& o) const {
        return std::tie(weight_num, weight_den, orbit_size, isotropy, out_degree, orbit_weights) <
               std::tie(o.weight_num, o.weight_den, o.orbit_size, o.isotropy, o.out_degree, o.orbit_weights);
    }
    bool operator==(const AtomSignature& o) const { return !(*this < o) && !(o < *this); }
};

std::vector<AtomSignature> atom_signatures(const Groupoid& G, const OrbitData& od) {
    std::vector<AtomSignature> sig(G.num_atoms());
    for (std::size_t x = 0; x < G.num_atoms(); ++x) {
        auto& s = sig[x];
        s.weight_num = G.base().weight(x).numerator();
        s.weight_den = G.base().weight(x).denominator();
        const auto& orb = od.orbits[od.orbit_of[x]];
        s.orbit_size = orb.size();
        s.isotropy = od.isotropy[x].size();
        s.out_degree = G.arrows_from(static_cast<int>(x)).size();
        for (int y : orb) {
            // weight as a comparable pair folded into one integer key
            s.orbit_weights.push_back(G.base().weight(y).numerator() * 1000003 + G.base().weight(y).denominator());
        }
        std::sort(s.orbit_weights.begin(), s.orbit_weights.end());
    }
    return sig;
}

std::vector<std::size_t> fiber_counts(const Groupoid& G) {
    std::map<std::pair<int, int>, std::size_t> c;
    for (std::size_t g = 0; g < G.num_arrows(); ++g) c[{G.src(static_cast<int>(g)), G.tgt(static_cast<int>(g))}]++;
    std::vector<std::size_t> out;
    for (auto& [k, v] : c) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

class IsoSearch {
public:
    IsoSearch(const Groupoid& a, const Groupoid& b, std::vector<AtomSignature> sa, std::vector<AtomSignature> sb,
              std::size_t max_nodes)
        : A(a), B(b), sigA(std::move(sa)), sigB(std::move(sb)), max_nodes_(max_nodes) {}

    std::optional<GroupoidIso> run() {
        State s;
        s.atom.assign(A.num_atoms(), -1);
        s.atom_rev.assign(B.num_atoms(), -1);
        s.arrow.assign(A.num_arrows(), -1);
        s.arrow_rev.assign(B.num_arrows(), -1);
        if (dfs(s)) return GroupoidIso{result_.atom, result_.arrow};
        return std::nullopt;
    }

private:
    struct State {
        std::vector<int> atom, atom_rev, arrow, arrow_rev;
        std::vector<int> assigned; // arrows of A in assignment order
    };

    bool map_atom(State& s, int x, int y) {
        if (s.atom[x] == y) return true;
        if (s.atom[x] != -1 || s.atom_rev[y] != -1) return false;
        if (!(sigA[x] == sigB[y])) return false;
        s.atom[x] = y;
        s.atom_rev[y] = x;
        return true;
    }

    // Assigns g -> h and closes under inverse, units, and composition.
    bool assign(State& s, int g0, int h0) {
        std::vector<std::pair<int, int>> work{{g0, h0}};
        while (!work.empty()) {
            auto [g, h] = work.back();
            work.pop_back();
            if (s.arrow[g] == h) continue;
            if (s.arrow[g] != -1 || s.arrow_rev[h] != -1) return false;
            if (A.is_unit(g) != B.is_unit(h)) return false;
            if (!map_atom(s, A.src(g), B.src(h)) || !map_atom(s, A.tgt(g), B.tgt(h))) return false;
            s.arrow[g] = h;
            s.arrow_rev[h] = g;
            s.assigned.push_back(g);
            work.push_back({A.inv(g), B.inv(h)});
            work.push_back({A.unit(A.src(g)), B.unit(B.src(h))});
            work.push_back({A.unit(A.tgt(g)), B.unit(B.tgt(h))});
            for (int k : s.assigned) {
                int hk = s.arrow[k];
                if (int c = A.compose(g, k); c >= 0) {
                    int d = B.compose(h, hk);
                    if (d < 0) return false;
                    work.push_back({c, d});
                }
                if (int c = A.compose(k, g); c >= 0) {
                    int d = B.compose(hk, h);
                    if (d < 0) return false;
                    work.push_back({c, d});
                }
            }
        }
        return true;
    }

    bool dfs(State& s) {
        if (++nodes_ > max_nodes_)
            throw Error(ErrorCode::SearchBudgetExceeded, "isomorphism search exceeded node budget");
        // Pick the most constrained unassigned arrow.
        int best = -1, best_score = -1;
        for (int g = 0; g < static_cast<int>(A.num_arrows()); ++g) {
            if (s.arrow[g] != -1) continue;
            int score = (s.atom[A.src(g)] != -1) + (s.atom[A.tgt(g)] != -1);
            if (score > best_score) {
                best = g;
                best_score = score;
                if (score == 2) break;
            }
        }
        if (best == -1) {
            result_ = s;
            return true;
        }
        for (int h = 0; h < static_cast<int>(B.num_arrows()); ++h) {
            if (s.arrow_rev[h] != -1 || A.is_unit(best) != B.is_unit(h)) continue;
            int xs = s.atom[A.src(best)], xt = s.atom[A.tgt(best)];
            if (xs != -1 && xs != B.src(h)) continue;
            if (xt != -1 && xt != B.tgt(h)) continue;
            if ((A.src(best) == A.tgt(best)) != (B.src(h) == B.tgt(h))) continue;
            State t = s;
            if (assign(t, best, h) && dfs(t)) return true;
        }
        return false;
    }

    const Groupoid& A;
    const Groupoid& B;
    std::vector<AtomSignature> sigA, sigB;
    std::size_t max_nodes_;
    std::size_t nodes_ = 0;
    State result_;
};

} // namespace

IsoResult is_isomorphic(const Groupoid& A, const Groupoid& B, const IsoSearchLimits& lim) {
    for (const Groupoid* g : {&A, &B})
        if (g->num_atoms() > lim.max_atoms || g->num_arrows() > lim.max_arrows)
            throw Error(ErrorCode::SearchBudgetExceeded, "instance beyond isomorphism search limits");
    IsoResult r;
    if (A.num_atoms() != B.num_atoms()) {
        r.refutation = "atom counts differ (" + std::to_string(A.num_atoms()) + " vs " +
                       std::to_string(B.num_atoms()) + ")";
        return r;
    }
    if (A.num_arrows() != B.num_arrows()) {
        r.refutation = "arrow counts differ (" + std::to_string(A.num_arrows()) + " vs " +
                       std::to_string(B.num_arrows()) + ")";
        return r;
    }
    auto wa = A.base().weights(), wb = B.base().weights();
    std::sort(wa.begin(), wa.end());
    std::sort(wb.begin(), wb.end());
    if (wa != wb) {
        r.refutation = "weight multisets differ";
        return r;
    }
    if (fiber_counts(A) != fiber_counts(B)) {
        r.refutation = "arrow counts per (src,tgt) fiber differ";
        return r;
    }
    OrbitData oa = orbits_isotropy(A), ob = orbits_isotropy(B);
    auto sa = atom_signatures(A, oa), sb = atom_signatures(B, ob);
    {
        std::vector<std::size_t> ia, ib;
        for (auto& s : sa) ia.push_back(s.isotropy);
        for (auto& s : sb) ib.push_back(s.isotropy);
        std::sort(ia.begin(), ia.end());
        std::sort(ib.begin(), ib.end());
        if (ia != ib) {
            r.refutation = "isotropy group orders differ";
            return r;
        }
    }
    auto ssa = sa, ssb = sb;
    std::sort(ssa.begin(), ssa.end());
    std::sort(ssb.begin(), ssb.end());
    if (!(ssa == ssb)) {
        r.refutation = "atom signatures (weight, orbit, isotropy) differ";
        return r;
    }
    IsoSearch search(A, B, std::move(sa), std::move(sb), lim.max_nodes);
    r.witness = search.run();
    if (!r.witness) r.refutation = "exhaustive search found no isomorphism";
    return r;
}

Report check_groupoid_iso(const Groupoid& A, const Groupoid& B, const GroupoidIso& iso) {
    Report r;
    const int n = static_cast<int>(A.num_atoms()), m = static_cast<int>(A.num_arrows());
    auto bijective = [](const std::vector<int>& f, std::size_t target) {
        if (f.size() != target) return false;
        std::vector<char> hit(target, 0);
        for (int v : f) {
            if (v < 0 || v >= static_cast<int>(target) || hit[v]) return false;
            hit[v] = 1;
        }
        return true;
    };
    bool ok = A.num_atoms() == B.num_atoms() && bijective(iso.atoms, B.num_atoms());
    r.add("atom map bijective", ok);
    bool ok2 = A.num_arrows() == B.num_arrows() && bijective(iso.arrows, B.num_arrows());
    r.add("arrow map bijective", ok2);
    if (!ok || !ok2) return r;
    std::string bad;
    for (int x = 0; x < n && bad.empty(); ++x)
        if (A.base().weight(x) != B.base().weight(iso.atoms[x])) bad = A.base().id(x);
    r.add("weights preserved", bad.empty(), bad);
    bad.clear();
    for (int g = 0; g < m && bad.empty(); ++g) {
        int h = iso.arrows[g];
        if (B.src(h) != iso.atoms[A.src(g)] || B.tgt(h) != iso.atoms[A.tgt(g)] || B.inv(h) != iso.arrows[A.inv(g)])
            bad = A.arrow_id(g);
    }
    for (int x = 0; x < n && bad.empty(); ++x)
        if (iso.arrows[A.unit(x)] != B.unit(iso.atoms[x])) bad = "unit of " + A.base().id(x);
    r.add("src/tgt/inv/units preserved", bad.empty(), bad);
    bad.clear();
    for (int g = 0; g < m && bad.empty(); ++g)
        for (int h = 0; h < m && bad.empty(); ++h) {
            int k = A.compose(g, h);
            if (k < 0) continue;
            if (B.compose(iso.arrows[g], iso.arrows[h]) != iso.arrows[k])
                bad = "(" + A.arrow_id(g) + "," + A.arrow_id(h) + ")";
        }
    r.add("composition preserved", bad.empty(), bad);
    return r;
}

// ----------------------------------------------------------- enumeration

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > UINT64_MAX - b ? UINT64_MAX : a + b; }
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return a > UINT64_MAX / b ? UINT64_MAX : a * b;
}

} // namespace

std::uint64_t count_bisections(const Groupoid& G) {
    OrbitData od = orbits_isotropy(G);
    std::uint64_t total = 1;
    for (const auto& orb : od.orbits) {
        const std::size_t k = orb.size();
        if (k > 16) return UINT64_MAX;
        std::vector<int> local(G.num_atoms(), -1);
        for (std::size_t i = 0; i < k; ++i) local[orb[i]] = static_cast<int>(i);
        // mult[i][j]: arrows from orb[i] to orb[j]
        std::vector<std::uint64_t> mult(k * k, 0);
        for (int x : orb)
            for (int g : G.arrows_from(x)) mult[local[x] * k + local[G.tgt(g)]]++;
        std::vector<std::uint64_t> dp(std::size_t{1} << k, 0), next;
        dp[0] = 1;
        for (std::size_t i = 0; i < k; ++i) {
            next = dp; // source i left out
            for (std::size_t mask = 0; mask < dp.size(); ++mask) {
                if (!dp[mask]) continue;
                for (std::size_t j = 0; j < k; ++j) {
                    if ((mask >> j) & 1u || !mult[i * k + j]) continue;
                    std::size_t nm = mask | (std::size_t{1} << j);
                    next[nm] = sat_add(next[nm], sat_mul(dp[mask], mult[i * k + j]));
                }
            }
            dp.swap(next);
        }
        std::uint64_t c = 0;
        for (auto v : dp) c = sat_add(c, v);
        total = sat_mul(total, c);
    }
    return total;
}

std::vector<Bisection> enumerate_bisections(const Groupoid& G, std::size_t cap) {
    std::uint64_t predicted = count_bisections(G);
    if (predicted > cap)
        throw Error(ErrorCode::CapExceeded,
                    "[[G]] has " + (predicted == UINT64_MAX ? std::string(">= 2^64") : std::to_string(predicted)) +
                        " elements, cap " + std::to_string(cap));
    const int n = static_cast<int>(G.num_atoms());
    std::vector<Bisection> out;
    out.reserve(predicted);
    Bisection cur = empty_bisection(G);
    std::vector<char> used(n, 0);
    std::function<void(int)> rec = [&](int x) {
        if (x == n) {
            out.push_back(cur);
            return;
        }
        rec(x + 1);
        for (int g : G.arrows_from(x)) {
            if (used[G.tgt(g)]) continue;
            used[G.tgt(g)] = 1;
            cur.at[x] = g;
            rec(x + 1);
            cur.at[x] = -1;
            used[G.tgt(g)] = 0;
        }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

// -------------------------------------------------------- constructions

int FiniteGroup::inv(int a) const {
    for (int b = 0; b < order(); ++b)
        if (mul(a, b) == 0) return b;
    throw Error(ErrorCode::MalformedInput, "group element without inverse");
}

FiniteGroup cyclic_group(int n) {
    FiniteGroup g;
    g.name = "Z" + std::to_string(n);
    for (int a = 0; a < n; ++a) g.elements.push_back(std::to_string(a));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g.table.push_back((a + b) % n);
    return g;
}

FiniteGroup symmetric_group(int n) {
    if (n < 1 || n > 5) throw Error(ErrorCode::MalformedInput, "symmetric group degree");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    FiniteGroup g;
    g.name = "S" + std::to_string(n);
    for (const auto& q : perms) {
        std::string s;
        for (int v : q) s += std::to_string(v);
        g.elements.push_back(s);
    }
    std::map<std::vector<int>, int> idx;
    for (std::size_t i = 0; i < perms.size(); ++i) idx[perms[i]] = static_cast<int>(i);
    for (const auto& a : perms)
        for (const auto& b : perms) {
            std::vector<int> c(n);
            for (int i = 0; i < n; ++i) c[i] = a[b[i]]; // (ab)(i) = a(b(i))
            g.table.push_back(idx[c]);
        }
    return g;
}

Groupoid principal_groupoid(const WeightedSet& base, const std::vector<std::vector<int>>& classes) {
    const int n = static_cast<int>(base.size());
    std::vector<int> cls(n, -1);
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (int x : classes[c]) {
            if (x < 0 || x >= n || cls[x] != -1) throw Error(ErrorCode::MalformedInput, "not a partition");
            cls[x] = static_cast<int>(c);
        }
    for (int x = 0; x < n; ++x)
        if (cls[x] == -1) throw Error(ErrorCode::MalformedInput, "partition does not cover the base");
    std::vector<Groupoid::Arrow> arrows;
    std::map<std::pair<int, int>, int> idx; // (tgt, src) -> arrow
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            if (cls[x] != cls[y]) continue;
            idx[{y, x}] = static_cast<int>(arrows.size());
            arrows.push_back({"(" + base.id(y) + "," + base.id(x) + ")", x, y});
        }
    std::vector<int> units(n), inv(arrows.size());
    for (int x = 0; x < n; ++x) units[x] = idx[{x, x}];
    std::vector<std::array<int, 3>> comp;
    for (std::size_t g = 0; g < arrows.size(); ++g) {
        inv[g] = idx[{arrows[g].src, arrows[g].tgt}];
        for (std::size_t h = 0; h < arrows.size(); ++h)
            if (arrows[g].src == arrows[h].tgt)
                comp.push_back({static_cast<int>(g), static_cast<int>(h), idx[{arrows[g].tgt, arrows[h].src}]});
    }
    return Groupoid(base, std::move(arrows), std::move(units), std::move(inv), comp);
}

Groupoid units_only(const WeightedSet& base) {
    std::vector<std::vector<int>> classes;
    for (std::size_t x = 0; x < base.size(); ++x) classes.push_back({static_cast<int>(x)});
    return principal_groupoid(base, classes);
}

Groupoid group_bundle(const WeightedSet& base, const FiniteGroup& grp) {
    const int n = static_cast<int>(base.size()), q = grp.order();
    std::vector<Groupoid::Arrow> arrows;
    for (int x = 0; x < n; ++x)
        for (int a = 0; a < q; ++a) arrows.push_back({base.id(x) + ":" + grp.elements[a], x, x});
    std::vector<int> units(n), inv(arrows.size());
    std::vector<std::array<int, 3>> comp;
    for (int x = 0; x < n; ++x) {
        units[x] = x * q;
        for (int a = 0; a < q; ++a) {
            inv[x * q + a] = x * q + grp.inv(a);
            for (int b = 0; b < q; ++b) comp.push_back({x * q + a, x * q + b, x * q + grp.mul(a, b)});
        }
    }
    return Groupoid(base, std::move(arrows), std::move(units), std::move(inv), comp);
}

Groupoid transformation_groupoid(const WeightedSet& base, const FiniteGroup& grp, const std::vector<int>& act) {
    const int n = static_cast<int>(base.size()), q = grp.order();
    if (static_cast<int>(act.size()) != n * q) throw Error(ErrorCode::MalformedInput, "action table size");
    for (int y = 0; y < n; ++y) {
        if (act[y] != y) throw Error(ErrorCode::MalformedInput, "identity must act trivially");
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b)
                if (act[grp.mul(a, b) * n + y] != act[a * n + act[b * n + y]])
                    throw Error(ErrorCode::MalformedInput, "not a group action");
    }
    // arrow (a, y): y -> a.y, index a*n + y
    std::vector<Groupoid::Arrow> arrows;
    for (int a = 0; a < q; ++a)
        for (int y = 0; y < n; ++y) arrows.push_back({grp.elements[a] + "." + base.id(y), y, act[a * n + y]});
    std::vector<int> units(n), inv(arrows.size());
    std::vector<std::array<int, 3>> comp;
    for (int y = 0; y < n; ++y) units[y] = y;
    for (int a = 0; a < q; ++a)
        for (int y = 0; y < n; ++y) {
            int g = a * n + y;
            inv[g] = grp.inv(a) * n + act[a * n + y];
            // (b, a.y) o (a, y) = (ba, y)
            for (int b = 0; b < q; ++b)
                comp.push_back({b * n + act[a * n + y], g, grp.mul(b, a) * n + y});
        }
    return Groupoid(base, std::move(arrows), std::move(units), std::move(inv), comp);
}

Groupoid relabel(const Groupoid& G, const std::vector<int>& ap, const std::vector<int>& gp) {
    const std::size_t n = G.num_atoms(), m = G.num_arrows();
    std::vector<std::string> ids(n);
    std::vector<Rational> w(n);
    for (std::size_t x = 0; x < n; ++x) {
        ids[ap[x]] = G.base().id(x);
        w[ap[x]] = G.base().weight(x);
    }
    std::vector<Groupoid::Arrow> arrows(m);
    std::vector<int> units(n), inv(m);
    for (std::size_t g = 0; g < m; ++g) {
        arrows[gp[g]] = {G.arrow_id(static_cast<int>(g)), ap[G.src(static_cast<int>(g))], ap[G.tgt(static_cast<int>(g))]};
        inv[gp[g]] = gp[G.inv(static_cast<int>(g))];
    }
    for (std::size_t x = 0; x < n; ++x) units[ap[x]] = gp[G.unit(static_cast<int>(x))];
    std::vector<std::array<int, 3>> comp;
    for (auto t : G.compose_triples()) comp.push_back({gp[t[0]], gp[t[1]], gp[t[2]]});
    return Groupoid(WeightedSet::create(ids, w), std::move(arrows), std::move(units), std::move(inv), comp);
}

} // namespace cartan
