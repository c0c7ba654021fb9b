#include "cartan/inverse_semigroup.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "cartan/errors.hpp"

namespace cartan {

InvSemigroup::InvSemigroup(WeightedSet base, std::vector<std::string> ids, int zero, std::vector<int> mul,
                           std::vector<int> inv, const std::vector<std::pair<int, Subset>>& idem_embed)
    : base_(std::move(base)), ids_(std::move(ids)), zero_(zero), mul_(std::move(mul)), inv_(std::move(inv)),
      embed_list_(idem_embed) {
    const std::size_t N = ids_.size();
    if (N == 0) throw Error(ErrorCode::MalformedInput, "empty semigroup");
    if (mul_.size() != N * N) throw Error(ErrorCode::MalformedInput, "multiplication table size");
    if (inv_.size() != N) throw Error(ErrorCode::MalformedInput, "inverse table size");
    if (zero_ < 0 || zero_ >= static_cast<int>(N)) throw Error(ErrorCode::MalformedInput, "zero out of range");
    for (int v : mul_)
        if (v < 0 || v >= static_cast<int>(N)) throw Error(ErrorCode::MalformedInput, "product out of range");
    for (int v : inv_)
        if (v < 0 || v >= static_cast<int>(N)) throw Error(ErrorCode::MalformedInput, "inverse out of range");
    for (std::size_t i = 0; i < N; ++i)
        if (!index_.emplace(ids_[i], static_cast<int>(i)).second)
            throw Error(ErrorCode::MalformedInput, "duplicate element id " + ids_[i]);
    embed_of_.assign(N, -1);
    for (std::size_t k = 0; k < embed_list_.size(); ++k) {
        auto [x, s] = embed_list_[k];
        if (x < 0 || x >= static_cast<int>(N)) throw Error(ErrorCode::MalformedInput, "embedded element out of range");
        if (!s.subset_of(base_.full())) throw Error(ErrorCode::MalformedInput, "embedded subset outside base");
        if (embed_of_[x] != -1) throw Error(ErrorCode::MalformedInput, "element embedded twice: " + ids_[x]);
        embed_of_[x] = static_cast<int>(k);
        if (!idem_by_bits_.emplace(s.bits, x).second)
            throw Error(ErrorCode::MalformedInput, "two idempotents share a subset");
    }
}

int InvSemigroup::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorCode::UnknownId, "element \"" + id + "\"");
    return it->second;
}

std::optional<Subset> InvSemigroup::embed(int x) const {
    int k = embed_of_[x];
    if (k < 0) return std::nullopt;
    return embed_list_[k].second;
}

int InvSemigroup::idempotent_of(Subset s) const {
    auto it = idem_by_bits_.find(s.bits);
    return it == idem_by_bits_.end() ? -1 : it->second;
}

Subset InvSemigroup::dom(int x) const {
    auto e = embed(mul(inv(x), x));
    if (!e) throw Error(ErrorCode::DecompositionFailure, "x⁻¹x is not an embedded idempotent for " + ids_[x]);
    return *e;
}

Subset InvSemigroup::ran(int x) const {
    auto e = embed(mul(x, inv(x)));
    if (!e) throw Error(ErrorCode::DecompositionFailure, "xx⁻¹ is not an embedded idempotent for " + ids_[x]);
    return *e;
}

Restrictions::Restrictions(const InvSemigroup& I) : n_(I.base().size()) {
    std::vector<int> atoms(n_);
    for (std::size_t a = 0; a < n_; ++a) {
        atoms[a] = I.atom_idempotent(a);
        if (atoms[a] < 0) throw Error(ErrorCode::DecompositionFailure, "missing atom idempotent " + I.base().id(a));
    }
    table_.resize(I.size() * n_);
    for (std::size_t x = 0; x < I.size(); ++x)
        for (std::size_t a = 0; a < n_; ++a) table_[x * n_ + a] = I.mul(static_cast<int>(x), atoms[a]);
}

bool leq(const InvSemigroup& I, int x, int y) { return x == I.mul(y, I.mul(I.inv(x), x)); }

bool orthogonal(const InvSemigroup& I, int x, int y) {
    return (I.dom(x) & I.dom(y)).empty() && (I.ran(x) & I.ran(y)).empty();
}

// ------------------------------------------------------------ validation

namespace {

// Semigroup (word) generators: every element is a right-multiplied word.
std::vector<int> word_generators(const InvSemigroup& I) {
    const int N = static_cast<int>(I.size());
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> gens;
    std::vector<char> in(N, 0);
    auto close = [&]() {
        std::fill(in.begin(), in.end(), 0);
        std::vector<int> q;
        for (int g : gens)
            if (!in[g]) {
                in[g] = 1;
                q.push_back(g);
            }
        for (std::size_t i = 0; i < q.size(); ++i)
            for (int g : gens) {
                int p = I.mul(q[i], g);
                if (!in[p]) {
                    in[p] = 1;
                    q.push_back(p);
                }
            }
        return q.size();
    };
    // Larger elements first tends to give short generating sets.
    std::vector<std::size_t> weight(N, 0);
    for (int x = 0; x < N; ++x) {
        auto d = I.embed(I.mul(I.inv(x), x));
        weight[x] = d ? static_cast<std::size_t>(d->count()) : 0;
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weight[a] > weight[b]; });
    std::size_t covered = 0;
    for (int x : order) {
        if (covered == static_cast<std::size_t>(N)) break;
        if (in[x]) continue;
        gens.push_back(x);
        covered = close();
    }
    return gens;
}

std::uint64_t pair_key(int N, int a, int b) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(N) + static_cast<std::uint64_t>(b);
}

// Candidate suprema of orthogonal pairs: for every u and every split of
// dom u into nonempty parts e ⊔ f, u is recorded as the join of (ue, uf).
// A second, different u for the same pair is reported through `clash`.
std::unordered_map<std::uint64_t, int> split_joins(const InvSemigroup& I, std::string* clash) {
    const int N = static_cast<int>(I.size());
    std::unordered_map<std::uint64_t, int> join;
    for (int u = 0; u < N; ++u) {
        std::uint64_t D = I.dom(u).bits;
        if (__builtin_popcountll(D) < 2) continue;
        std::uint64_t low = D & (~D + 1), rest = D & ~low;
        for (std::uint64_t s = rest;; s = (s - 1) & rest) {
            std::uint64_t e = low | s, f = D & ~e;
            if (f) {
                int xe = I.mul(u, I.idempotent_of(Subset{e})), xf = I.mul(u, I.idempotent_of(Subset{f}));
                auto [it, fresh] = join.emplace(pair_key(N, xe, xf), u);
                if (!fresh && it->second != u && clash && clash->empty())
                    *clash = "supremum of (" + I.id(xe) + "," + I.id(xf) + ") not unique: " + I.id(it->second) +
                             ", " + I.id(u);
            }
            if (s == 0) break;
        }
    }
    return join;
}

} // namespace

Report validate_csm(const InvSemigroup& I) {
    Report r;
    const int N = static_cast<int>(I.size());
    const int z = I.zero();
    auto nm = [&](int x) { return I.id(x); };

    std::string bad;
    for (int x = 0; x < N && bad.empty(); ++x)
        if (I.mul(z, x) != z || I.mul(x, z) != z) bad = nm(x);
    r.add("zero absorbing", bad.empty(), bad);

    bad.clear();
    if (N <= 128) {
        for (int x = 0; x < N && bad.empty(); ++x)
            for (int y = 0; y < N && bad.empty(); ++y) {
                int xy = I.mul(x, y);
                for (int w = 0; w < N; ++w)
                    if (I.mul(xy, w) != I.mul(x, I.mul(y, w))) {
                        bad = "(" + nm(x) + "," + nm(y) + "," + nm(w) + ")";
                        break;
                    }
            }
        r.add("associativity", bad.empty(), bad.empty() ? "exhaustive" : bad);
    } else {
        // Light's test against word generators: if (xg)y = x(gy) for every
        // generator g, the operation is associative.
        auto gens = word_generators(I);
        for (int g : gens) {
            for (int x = 0; x < N && bad.empty(); ++x) {
                int xg = I.mul(x, g);
                for (int y = 0; y < N; ++y)
                    if (I.mul(xg, y) != I.mul(x, I.mul(g, y))) {
                        bad = "(" + nm(x) + "," + nm(g) + "," + nm(y) + ")";
                        break;
                    }
            }
            if (!bad.empty()) break;
        }
        r.add("associativity", bad.empty(),
              bad.empty() ? "Light's test over " + std::to_string(gens.size()) + " word generators" : bad);
    }

    bad.clear();
    for (int x = 0; x < N && bad.empty(); ++x) {
        int y = I.inv(x);
        if (I.mul(I.mul(x, y), x) != x || I.mul(I.mul(y, x), y) != y) bad = nm(x);
    }
    r.add("inverse laws", bad.empty(), bad);

    bad.clear();
    for (int x = 0; x < N && bad.empty(); ++x) {
        for (int y = 0; y < N; ++y) {
            if (y == I.inv(x)) continue;
            if (I.mul(I.mul(x, y), x) == x && I.mul(I.mul(y, x), y) == y) {
                bad = "(" + nm(x) + ", " + nm(y) + ") besides " + nm(I.inv(x));
                break;
            }
        }
    }
    r.add("unique inverse", bad.empty(), bad);

    std::vector<int> idems;
    for (int x = 0; x < N; ++x)
        if (I.algebraic_idempotent(x)) idems.push_back(x);
    bad.clear();
    for (std::size_t i = 0; i < idems.size() && bad.empty(); ++i)
        for (std::size_t j = i + 1; j < idems.size(); ++j)
            if (I.mul(idems[i], idems[j]) != I.mul(idems[j], idems[i])) {
                bad = "(" + nm(idems[i]) + "," + nm(idems[j]) + ")";
                break;
            }
    r.add("idempotents commute", bad.empty(), bad);

    // Lattice embedding: defined exactly on idempotents, onto all subsets,
    // products to intersections, zero to the empty set.
    bad.clear();
    const std::size_t n = I.base().size();
    for (int e : idems)
        if (!I.embed(e)) bad = nm(e) + " is idempotent but not embedded";
    for (const auto& [x, s] : I.embedding())
        if (!I.algebraic_idempotent(x)) bad = nm(x) + " is embedded but not idempotent";
    if (bad.empty() && (n >= 31 || idems.size() != (std::size_t{1} << n)))
        bad = std::to_string(idems.size()) + " idempotents for " + std::to_string(n) + " atoms";
    if (bad.empty() && I.embed(z) != Subset{})
        bad = "zero not mapped to the empty set";
    for (std::size_t i = 0; i < idems.size() && bad.empty(); ++i)
        for (std::size_t j = 0; j < idems.size(); ++j) {
            Subset meet = *I.embed(idems[i]) & *I.embed(idems[j]);
            if (I.embed(I.mul(idems[i], idems[j])) != meet) {
                bad = "product of " + nm(idems[i]) + "," + nm(idems[j]) + " is not the intersection";
                break;
            }
        }
    bool lattice_ok = bad.empty();
    r.add("idempotent lattice embedding", lattice_ok, bad);
    if (!lattice_ok || !r.find("inverse laws")->pass) {
        r.add("orthogonal joins", false, "skipped: lattice embedding or inverse laws failed");
        r.add("separability", false, "skipped");
        return r;
    }

    // Every x⁻¹x, xx⁻¹ is an idempotent by the inverse laws checked above.
    std::vector<Subset> dom(N), ran(N);
    for (int x = 0; x < N; ++x) {
        dom[x] = I.dom(x);
        ran[x] = I.ran(x);
    }
    bad.clear();
    auto join = split_joins(I, &bad);
    auto key = [&](int a, int b) { return pair_key(N, a, b); };
    std::size_t pairs = 0;
    for (int x = 0; x < N && bad.empty(); ++x) {
        if (x == z) continue;
        for (int y = x + 1; y < N; ++y) {
            if (y == z || !(dom[x] & dom[y]).empty() || !(ran[x] & ran[y]).empty()) continue;
            ++pairs;
            auto it = join.find(key(x, y));
            if (it == join.end()) {
                bad = "no supremum for orthogonal pair (" + nm(x) + "," + nm(y) + ")";
                break;
            }
            int u = it->second;
            bool ok = I.mul(u, I.mul(I.inv(x), x)) == x && I.mul(I.mul(x, I.inv(x)), u) == x &&
                      I.mul(u, I.mul(I.inv(y), y)) == y && I.mul(I.mul(y, I.inv(y)), u) == y &&
                      dom[u] == (dom[x] | dom[y]) && ran[u] == (ran[x] | ran[y]);
            if (!ok) {
                bad = "join of (" + nm(x) + "," + nm(y) + ") violates the supremum conditions";
                break;
            }
        }
    }
    r.add("orthogonal joins", bad.empty(),
          bad.empty() ? std::to_string(pairs) + " orthogonal pairs; joins unique, additive on domains and ranges"
                      : bad);

    try {
        auto gens = find_generators(I);
        r.add("separability", true, "generating set of size " + std::to_string(gens.size()));
    } catch (const Error& e) {
        r.add("separability", false, e.what());
    }
    return r;
}

std::vector<int> find_generators(const InvSemigroup& I) {
    Restrictions R(I);
    const int N = static_cast<int>(I.size());
    const std::size_t n = I.base().size();
    std::unordered_set<int> atomic, covered;
    for (int x = 0; x < N; ++x)
        for (std::size_t a = 0; a < n; ++a)
            if (int t = R.at(x, a); t != I.zero()) atomic.insert(t);
    std::vector<int> order;
    for (int x = 0; x < N; ++x)
        if (x != I.zero()) order.push_back(x);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return I.dom(a).count() > I.dom(b).count(); });
    std::vector<int> gens;
    int one = I.one();
    if (one < 0) throw Error(ErrorCode::DecompositionFailure, "no unit idempotent");
    auto add = [&](int g) {
        bool fresh = false;
        for (std::size_t a = 0; a < n; ++a)
            if (int t = R.at(g, a); t != I.zero()) fresh |= covered.insert(t).second;
        return fresh;
    };
    add(one);
    gens.push_back(one);
    for (int x : order) {
        if (covered.size() == atomic.size()) break;
        if (add(x)) gens.push_back(x);
    }
    return gens;
}

// ------------------------------------------------------------------ E, d

int expectation_E(const InvSemigroup& I, int x) {
    Subset s;
    for (std::size_t a = 0; a < I.base().size(); ++a) {
        int e = I.atom_idempotent(a);
        if (I.mul(x, e) == e) s = s | Subset::single(a);
    }
    int r = I.idempotent_of(s);
    if (r < 0) throw Error(ErrorCode::DecompositionFailure, "E(x) subset not embedded");
    return r;
}

Metric::Metric(const InvSemigroup& I) : I_(I), r_(I) {
    const std::size_t N = I.size(), n = I.base().size();
    E_.resize(N);
    e_units_.resize(N);
    for (std::size_t x = 0; x < N; ++x) {
        Subset s;
        for (std::size_t a = 0; a < n; ++a)
            if (r_.at(static_cast<int>(x), a) == I.atom_idempotent(a)) s = s | Subset::single(a);
        E_[x] = I.idempotent_of(s);
        e_units_[x] = I.base().units(s);
    }
}

std::int64_t Metric::d(int x, int y) const {
    const auto& B = I_.base();
    std::int64_t first = B.units(I_.dom(x) | I_.dom(y)) - e_units_[I_.mul(I_.inv(x), y)];
    std::int64_t second = B.units(I_.ran(x) | I_.ran(y)) - e_units_[I_.mul(x, I_.inv(y))];
    return first + second;
}

std::int64_t Metric::d0(int x, int y) const {
    std::int64_t t = 0;
    for (std::size_t a = 0; a < I_.base().size(); ++a)
        if (r_.at(x, a) != r_.at(y, a)) t += I_.base().unit(a);
    return t;
}

Rational metric_d(const InvSemigroup& I, int x, int y) {
    const auto& B = I.base();
    Subset Ex = *I.embed(expectation_E(I, I.mul(I.inv(x), y)));
    Subset Ey = *I.embed(expectation_E(I, I.mul(x, I.inv(y))));
    return (B.mu(I.dom(x) | I.dom(y)) - B.mu(Ex)) + (B.mu(I.ran(x) | I.ran(y)) - B.mu(Ey));
}

Rational d0(const InvSemigroup& I, int x, int y) {
    Subset diff;
    for (std::size_t a = 0; a < I.base().size(); ++a) {
        int e = I.atom_idempotent(a);
        if (I.mul(x, e) != I.mul(y, e)) diff = diff | Subset::single(a);
    }
    return I.base().mu(diff);
}

Report check_metric(const InvSemigroup& I, std::size_t triple_limit) {
    const std::size_t N = I.size();
    if (N * N * N > triple_limit)
        throw Error(ErrorCode::CapExceeded, std::to_string(N) + " elements exceed the triple limit");
    Metric m(I);
    std::vector<std::int64_t> d(N * N);
    bool sym = true, indisc = true, split = true, rational = true, tri = true;
    const Rational den(I.base().denominator());
    for (std::size_t x = 0; x < N; ++x)
        for (std::size_t y = 0; y < N; ++y) {
            int a = static_cast<int>(x), b = static_cast<int>(y);
            d[x * N + y] = m.d(a, b);
            split = split && d[x * N + y] == m.d0(a, b) + m.d0(I.inv(a), I.inv(b));
            rational = rational && metric_d(I, a, b) * den == Rational(d[x * N + y]);
            indisc = indisc && ((d[x * N + y] == 0) == (x == y));
        }
    for (std::size_t x = 0; x < N; ++x)
        for (std::size_t y = 0; y < N; ++y) {
            sym = sym && d[x * N + y] == d[y * N + x];
            for (std::size_t z = 0; z < N && tri; ++z) tri = d[x * N + z] <= d[x * N + y] + d[y * N + z];
        }
    Report r;
    r.add("symmetry", sym);
    r.add("identity of indiscernibles", indisc);
    r.add("triangle inequality", tri);
    r.add("d = d0(x,y) + d0(x^-1,y^-1)", split);
    r.add("rational metric matches mass units", rational);
    return r;
}

// ------------------------------------------------------------------ joins

int join_orthogonal(const InvSemigroup& I, const std::vector<int>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            if (!orthogonal(I, xs[i], xs[j]))
                throw Error(ErrorCode::NotOrthogonal, "(" + I.id(xs[i]) + "," + I.id(xs[j]) + ")");
    if (xs.empty()) return I.zero();
    Subset D;
    for (int x : xs) D = D | I.dom(x);
    int found = -1;
    for (int u = 0; u < static_cast<int>(I.size()); ++u) {
        if (I.dom(u) != D) continue;
        bool ok = true;
        for (int x : xs)
            ok = ok && I.mul(u, I.mul(I.inv(x), x)) == x && I.mul(I.mul(x, I.inv(x)), u) == x;
        if (!ok) continue;
        if (found >= 0) throw Error(ErrorCode::NotPresent, "supremum not unique");
        found = u;
    }
    if (found < 0) throw Error(ErrorCode::NotPresent, "no supremum in the semigroup");
    return found;
}

std::vector<int> normalize_generators(const InvSemigroup& I, const std::vector<int>& gens) {
    if (gens.empty() || gens[0] != I.one())
        throw Error(ErrorCode::MalformedInput, "generating family must start with 1");
    Restrictions R(I);
    const std::size_t n = I.base().size();
    std::vector<int> w{gens[0]};
    for (std::size_t k = 1; k < gens.size(); ++k) {
        int v = gens[k];
        Subset keep;
        for (std::size_t a = 0; a < n; ++a) {
            int t = R.at(v, a);
            if (t == I.zero()) continue;
            bool agrees = std::any_of(w.begin(), w.end(), [&](int wi) { return R.at(wi, a) == t; });
            if (!agrees) keep = keep | Subset::single(a);
        }
        if (keep.empty()) continue;
        w.push_back(I.mul(v, I.idempotent_of(keep)));
    }
    for (int x = 0; x < static_cast<int>(I.size()); ++x)
        for (std::size_t a = 0; a < n; ++a) {
            int t = R.at(x, a);
            if (t == I.zero()) continue;
            if (std::none_of(w.begin(), w.end(), [&](int wi) { return R.at(wi, a) == t; }))
                throw Error(ErrorCode::NotGenerating,
                            "element " + I.id(x) + " has no decomposition at atom " + I.base().id(a));
        }
    return w;
}

std::vector<int> decompose(const InvSemigroup& I, const Restrictions& R, const std::vector<int>& w, int x) {
    const std::size_t n = I.base().size();
    std::vector<int> out(n, -1);
    for (std::size_t a = 0; a < n; ++a) {
        int t = R.at(x, a);
        if (t == I.zero()) continue;
        for (std::size_t k = 0; k < w.size(); ++k)
            if (R.at(w[k], a) == t) {
                if (out[a] != -1)
                    throw Error(ErrorCode::DecompositionFailure, "two family members agree at atom " + I.base().id(a));
                out[a] = static_cast<int>(k);
            }
        if (out[a] == -1)
            throw Error(ErrorCode::DecompositionFailure, "no family member restricts to " + I.id(t));
    }
    return out;
}

// ------------------------------------------------------------ hom checks

Report check_hom(const LatticeHom& h) {
    Report r;
    const InvSemigroup& S = *h.source;
    const InvSemigroup& T = *h.target;
    const int N = static_cast<int>(S.size());
    bool total = static_cast<int>(h.map.size()) == N &&
                 std::all_of(h.map.begin(), h.map.end(), [&](int v) { return v >= 0 && v < static_cast<int>(T.size()); });
    r.add("map total", total);
    if (!total) return r;
    auto nm = [&](int x) { return S.id(x); };

    r.add("zero preserved", h(S.zero()) == T.zero());

    std::string bad;
    for (int x = 0; x < N && bad.empty(); ++x)
        for (int y = 0; y < N; ++y)
            if (h(S.mul(x, y)) != T.mul(h(x), h(y))) {
                bad = "(" + nm(x) + "," + nm(y) + ")";
                break;
            }
    r.add("multiplicative", bad.empty(), bad);

    bad.clear();
    for (int x = 0; x < N && bad.empty(); ++x)
        if (h(S.inv(x)) != T.inv(h(x))) bad = nm(x);
    r.add("inverse preserving", bad.empty(), bad);

    std::vector<int> idems;
    for (const auto& [e, s] : S.embedding()) idems.push_back(e);
    bad.clear();
    for (int e : idems)
        if (!T.embed(h(e))) {
            bad = nm(e);
            break;
        }
    r.add("idempotents to idempotents", bad.empty(), bad);
    if (!bad.empty()) return r;

    // Boolean restriction: meets and joins of idempotents.
    bad.clear();
    for (std::size_t i = 0; i < idems.size() && bad.empty(); ++i)
        for (std::size_t j = 0; j < idems.size(); ++j) {
            Subset a = *S.embed(idems[i]), b = *S.embed(idems[j]);
            Subset ha = *T.embed(h(idems[i])), hb = *T.embed(h(idems[j]));
            int meet = S.idempotent_of(a & b), jn = S.idempotent_of(a | b);
            if (meet < 0 || jn < 0 || *T.embed(h(meet)) != (ha & hb) || *T.embed(h(jn)) != (ha | hb)) {
                bad = "(" + nm(idems[i]) + "," + nm(idems[j]) + ")";
                break;
            }
        }
    r.add("Boolean restriction", bad.empty(), bad);

    // Join preservation on orthogonal pairs (finite families reduce to
    // these since joins are additive on domains).
    bad.clear();
    auto joins = split_joins(S, nullptr);
    for (int x = 0; x < N && bad.empty(); ++x) {
        if (x == S.zero()) continue;
        for (int y = x + 1; y < N; ++y) {
            if (y == S.zero() || !orthogonal(S, x, y)) continue;
            auto it = joins.find(pair_key(N, x, y));
            if (it == joins.end()) {
                bad = "source has no join for {" + nm(x) + "," + nm(y) + "}";
                break;
            }
            int u = it->second;
            int hu = h(u), hx = h(x), hy = h(y);
            bool ok = T.dom(hu) == (T.dom(hx) | T.dom(hy)) && T.mul(hu, T.mul(T.inv(hx), hx)) == hx &&
                      T.mul(hu, T.mul(T.inv(hy), hy)) == hy;
            if (!ok) {
                bad = "family {" + nm(x) + "," + nm(y) + "}";
                break;
            }
        }
    }
    r.add("join preservation", bad.empty(), bad);

    bad.clear();
    for (int x = 0; x < N && bad.empty(); ++x)
        for (int y = 0; y < N; ++y) {
            if (leq(S, x, y) && !leq(T, h(x), h(y))) {
                bad = "(" + nm(x) + "," + nm(y) + ")";
                break;
            }
        }
    r.add("order preserving", bad.empty(), bad);

    std::vector<char> hit(T.size(), 0);
    bool bij = S.size() == T.size();
    for (int x = 0; x < N && bij; ++x) {
        if (hit[h(x)]) bij = false;
        hit[h(x)] = 1;
    }
    if (bij) {
        r.add("bijective", true);
        r.add("unit preserved", h(S.one()) == T.one());
        bad.clear();
        for (int e : idems) {
            int c = S.idempotent_of(S.base().complement(*S.embed(e)));
            if (*T.embed(h(c)) != T.base().complement(*T.embed(h(e)))) {
                bad = nm(e);
                break;
            }
        }
        r.add("complements preserved", bad.empty(), bad);
    }
    return r;
}

} // namespace cartan
