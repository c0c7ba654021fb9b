#include "cartan/correspondence.hpp"

#include <algorithm>

#include "cartan/errors.hpp"

namespace cartan {

int PseudogroupTag::element_of(const Bisection& b) const {
    auto it = index.find(b);
    if (it == index.end()) throw Error(ErrorCode::NotPresent, "bisection not in [[G]]");
    return it->second;
}

namespace {

std::string bisection_id(const Groupoid& G, const Bisection& b) {
    if (b.size() == 0) return "0";
    std::string s = "{";
    bool first = true;
    for (int g : b.at) {
        if (g < 0) continue;
        if (!first) s += ";";
        s += G.arrow_id(g);
        first = false;
    }
    return s + "}";
}

} // namespace

PseudogroupPtr full_pseudogroup(GroupoidPtr G, std::size_t cap) {
    auto tag = std::make_shared<PseudogroupTag>();
    tag->groupoid = G;
    tag->arrow_sets = enumerate_bisections(*G, cap);
    const auto& B = tag->arrow_sets;
    const std::size_t N = B.size();
    for (std::size_t i = 0; i < N; ++i) tag->index.emplace(B[i], static_cast<int>(i));

    std::vector<std::string> ids(N);
    std::vector<int> mul(N * N), inv(N);
    std::vector<std::pair<int, Subset>> embed;
    for (std::size_t i = 0; i < N; ++i) {
        ids[i] = bisection_id(*G, B[i]);
        inv[i] = tag->element_of(inverse(*G, B[i]));
        bool units = true;
        for (int g : B[i].at) units = units && (g < 0 || G->is_unit(g));
        if (units) embed.emplace_back(static_cast<int>(i), source_set(B[i]));
    }
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) mul[i * N + j] = tag->element_of(compose(*G, B[i], B[j]));
    int zero = tag->element_of(empty_bisection(*G));
    tag->semigroup = std::make_shared<InvSemigroup>(G->base(), std::move(ids), zero, std::move(mul), std::move(inv), embed);
    return tag;
}

Synthesis groupoid_of(IsgPtr Ip, const std::vector<int>& gens, std::size_t cap) {
    const InvSemigroup& I = *Ip;
    Synthesis out;
    out.family = normalize_generators(I, gens);
    const auto& w = out.family;
    Restrictions R(I);
    const std::size_t n = I.base().size();

    // lookup[x]: restriction element at atom x -> family index
    std::vector<std::unordered_map<int, int>> lookup(n);
    std::vector<Groupoid::Arrow> arrows;
    std::vector<std::vector<int>> arrow_of(w.size(), std::vector<int>(n, -1));
    for (std::size_t k = 0; k < w.size(); ++k) {
        Subset D = I.dom(w[k]);
        for (std::size_t x = 0; x < n; ++x) {
            if (!D.contains(x)) continue;
            int t = R.at(w[k], x);
            // D'_n = D_n: after normalization no earlier member shares a restriction.
            if (!lookup[x].emplace(t, static_cast<int>(k)).second)
                throw Error(ErrorCode::DecompositionFailure, "family members collide at atom " + I.base().id(x));
            Subset r = I.ran(t);
            if (r.count() != 1) throw Error(ErrorCode::DecompositionFailure, "restriction to an atom is not atomic");
            int y = __builtin_ctzll(r.bits);
            arrow_of[k][x] = static_cast<int>(arrows.size());
            arrows.push_back({"w" + std::to_string(k) + "@" + I.base().id(x), static_cast<int>(x), y});
            out.label.emplace_back(static_cast<int>(k), static_cast<int>(x));
        }
    }
    auto index_at = [&](std::size_t x, int t) {
        auto it = lookup[x].find(t);
        if (it == lookup[x].end()) throw Error(ErrorCode::DecompositionFailure, "no family member restricts to " + I.id(t));
        return it->second;
    };
    std::vector<int> units(n), inv(arrows.size());
    for (std::size_t x = 0; x < n; ++x) {
        units[x] = arrow_of[0][x];
        if (units[x] < 0) throw Error(ErrorCode::DecompositionFailure, "w0 is not the unit");
    }
    std::vector<std::array<int, 3>> comp;
    for (std::size_t a = 0; a < arrows.size(); ++a) {
        int m = out.label[a].first;
        int t = R.at(I.inv(w[m]), arrows[a].tgt);
        inv[a] = arrow_of[index_at(arrows[a].tgt, t)][arrows[a].tgt];
    }
    // (m, φ_n(x)) ∘ (n, x) = (k, x) with (w_m w_n) e_x = w_k e_x
    for (std::size_t h = 0; h < arrows.size(); ++h) {
        auto [nh, x] = out.label[h];
        for (std::size_t g = 0; g < arrows.size(); ++g) {
            if (arrows[g].src != arrows[h].tgt) continue;
            int ng = out.label[g].first;
            int t = R.at(I.mul(w[ng], w[nh]), x);
            int k = index_at(x, t);
            comp.push_back({static_cast<int>(g), static_cast<int>(h), arrow_of[k][x]});
        }
    }
    auto G = std::make_shared<Groupoid>(I.base(), std::move(arrows), std::move(units), std::move(inv), comp);
    out.groupoid = G;
    out.pseudogroup = full_pseudogroup(G, cap);

    out.gamma.source = Ip;
    out.gamma.target = out.pseudogroup->semigroup;
    out.gamma.map.resize(I.size());
    for (int e = 0; e < static_cast<int>(I.size()); ++e) {
        Bisection b = empty_bisection(*G);
        for (std::size_t x = 0; x < n; ++x) {
            int t = R.at(e, x);
            if (t == I.zero()) continue;
            b.at[x] = arrow_of[index_at(x, t)][x];
        }
        out.gamma.map[e] = out.pseudogroup->element_of(b);
    }
    return out;
}

LatticeHom induced_hom(const PseudogroupTag& p1, const PseudogroupTag& p2, const GroupoidIso& iso) {
    LatticeHom h{p1.semigroup, p2.semigroup, {}};
    const Groupoid& G2 = *p2.groupoid;
    for (const auto& b : p1.arrow_sets) {
        Bisection img = empty_bisection(G2);
        for (int g : b.at)
            if (g >= 0) img.at[G2.src(iso.arrows[g])] = iso.arrows[g];
        h.map.push_back(p2.element_of(img));
    }
    return h;
}

LiftedIso lift_iso(const PseudogroupTag& p1, const PseudogroupTag& p2, const LatticeHom& phi) {
    if (phi.source != p1.semigroup || phi.target != p2.semigroup)
        throw Error(ErrorCode::NotPseudogroup, "map endpoints are not the given pseudogroups");
    const Groupoid& G1 = *p1.groupoid;
    const Groupoid& G2 = *p2.groupoid;
    const InvSemigroup& S1 = *p1.semigroup;
    const InvSemigroup& S2 = *p2.semigroup;
    {
        std::vector<char> hit(S2.size(), 0);
        bool bij = phi.map.size() == S1.size() && S1.size() == S2.size();
        for (std::size_t i = 0; bij && i < phi.map.size(); ++i) {
            int v = phi.map[i];
            if (v < 0 || v >= static_cast<int>(S2.size()) || hit[v]) bij = false;
            else hit[v] = 1;
        }
        if (!bij) throw Error(ErrorCode::NotBijective, "lattice map is not a bijection");
    }
    LiftedIso out;
    out.iso.atoms.assign(G1.num_atoms(), -1);
    for (std::size_t a = 0; a < G1.num_atoms(); ++a) {
        auto s = S2.embed(phi(S1.atom_idempotent(a)));
        if (!s || s->count() != 1) throw Error(ErrorCode::NotBijective, "atom idempotent not sent to an atom");
        out.iso.atoms[a] = __builtin_ctzll(s->bits);
    }
    out.iso.arrows.assign(G1.num_arrows(), -1);
    Basis basis = compute_basis(G1, false);
    for (const auto& part : basis.parts) {
        int elem = p1.element_of(make_bisection(G1, part));
        const Bisection& img = p2.arrow_sets[phi(elem)];
        for (int g : part) {
            int h = img.at[out.iso.atoms[G1.src(g)]];
            if (h < 0) throw Error(ErrorCode::NotBijective, "image bisection misses the source of " + G1.arrow_id(g));
            out.iso.arrows[g] = h;
        }
    }
    out.report = check_groupoid_iso(G1, G2, out.iso);
    if (out.report.pass()) {
        LatticeHom tilde = induced_hom(p1, p2, out.iso);
        std::string bad;
        for (std::size_t u = 0; u < tilde.map.size() && bad.empty(); ++u)
            if (tilde.map[u] != phi.map[u]) bad = S1.id(static_cast<int>(u));
        out.report.add("lift induces the given map", bad.empty(), bad);
    }
    return out;
}

namespace {

std::vector<int> basis_generators(const PseudogroupTag& p) {
    Basis b = compute_basis(*p.groupoid, true);
    std::vector<int> gens;
    for (const auto& part : b.parts) gens.push_back(p.element_of(make_bisection(*p.groupoid, part)));
    return gens;
}

void add_iso(Report& r, const std::string& name, const Groupoid& a, const Groupoid& b) {
    IsoResult res = is_isomorphic(a, b);
    if (!res.witness) {
        r.add(name, false, res.refutation);
        return;
    }
    Report chk = check_groupoid_iso(a, b, *res.witness);
    r.add(name, chk.pass(), chk.pass() ? "witness verified" : chk.first_failure()->name);
}

} // namespace

Report roundtrip_A(GroupoidPtr G, std::size_t cap) {
    Report r;
    r.merge("groupoid", validate_groupoid(*G));
    auto P = full_pseudogroup(G, cap);
    r.merge("[[G]]", validate_csm(*P->semigroup));
    r.add("[[G]] size", true, std::to_string(P->semigroup->size()) + " elements");

    Synthesis s = groupoid_of(P->semigroup, basis_generators(*P), cap);
    add_iso(r, "groupoid_of([[G]]) isomorphic to G", *G, *s.groupoid);
    Report hom = check_hom(s.gamma);
    r.merge("gamma", hom);
    r.add("gamma bijective", hom.find("bijective") != nullptr);

    LiftedIso lifted = lift_iso(*P, *s.pseudogroup, s.gamma);
    r.merge("lift of gamma", lifted.report);

    Synthesis s2 = groupoid_of(P->semigroup, find_generators(*P->semigroup), cap);
    add_iso(r, "independent of generating set", *s.groupoid, *s2.groupoid);
    return r;
}

Report roundtrip_A_sem(IsgPtr I, const std::vector<int>& gens, std::size_t cap) {
    Report r;
    r.merge("semigroup", validate_csm(*I));
    Synthesis s = groupoid_of(I, gens, cap);
    r.merge("groupoid", validate_groupoid(*s.groupoid));
    Report hom = check_hom(s.gamma);
    r.merge("gamma", hom);
    r.add("gamma bijective", hom.find("bijective") != nullptr);
    Synthesis s2 = groupoid_of(I, find_generators(*I), cap);
    add_iso(r, "independent of generating set", *s.groupoid, *s2.groupoid);
    return r;
}

} // namespace cartan
