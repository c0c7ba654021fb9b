#include "cartan/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "cartan/errors.hpp"

namespace cartan {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::MalformedInput, what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

template <class T>
T get(const json& j, const char* what) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        bad(std::string("bad ") + what);
    }
}

} // namespace

json to_json(const Rational& r) { return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator()); }

Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (!j.is_string()) bad("rational must be a \"p/q\" string");
    const std::string s = j.get<std::string>();
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(std::stoll(s));
        std::int64_t q = std::stoll(s.substr(slash + 1));
        if (q == 0) bad("zero denominator in " + s);
        return Rational(std::stoll(s.substr(0, slash)), q);
    } catch (const std::logic_error&) {
        bad("bad rational " + s);
    }
}

json to_json(const WeightedSet& w) {
    json atoms = json::array();
    for (std::size_t i = 0; i < w.size(); ++i) atoms.push_back({{"id", w.id(i)}, {"weight", to_json(w.weight(i))}});
    return {{"atoms", atoms}};
}

WeightedSet weighted_set_from_json(const json& j) {
    std::vector<std::string> ids;
    std::vector<Rational> w;
    for (const auto& a : field(j, "atoms")) {
        ids.push_back(get<std::string>(field(a, "id"), "atom id"));
        w.push_back(a.contains("weight") ? rational_from_json(a.at("weight")) : Rational(1));
    }
    bool any_weight = std::any_of(field(j, "atoms").begin(), field(j, "atoms").end(),
                                  [](const json& a) { return a.contains("weight"); });
    return any_weight ? WeightedSet::create(ids, w) : WeightedSet::uniform(ids);
}

// ---------------------------------------------------------------------------

json to_json(const Groupoid& g) {
    json arrows = json::array(), units = json::object(), inv = json::object(), comp = json::array();
    const auto& B = g.base();
    for (std::size_t a = 0; a < g.num_arrows(); ++a) {
        int i = static_cast<int>(a);
        arrows.push_back({{"id", g.arrow_id(i)}, {"src", B.id(g.src(i))}, {"tgt", B.id(g.tgt(i))}});
        inv[g.arrow_id(i)] = g.arrow_id(g.inv(i));
    }
    for (std::size_t x = 0; x < g.num_atoms(); ++x) units[B.id(x)] = g.arrow_id(g.unit(static_cast<int>(x)));
    for (const auto& t : g.compose_triples())
        comp.push_back({g.arrow_id(t[0]), g.arrow_id(t[1]), g.arrow_id(t[2])});
    return {{"base", to_json(B)}, {"arrows", arrows}, {"units", units}, {"inv", inv}, {"compose", comp}};
}

Groupoid groupoid_from_json(const json& j) {
    WeightedSet B = weighted_set_from_json(field(j, "base"));
    std::vector<Groupoid::Arrow> arrows;
    std::map<std::string, int> idx;
    for (const auto& a : field(j, "arrows")) {
        std::string id = get<std::string>(field(a, "id"), "arrow id");
        if (!idx.emplace(id, static_cast<int>(arrows.size())).second) bad("duplicate arrow " + id);
        arrows.push_back({id, B.index_of(get<std::string>(field(a, "src"), "src")),
                          B.index_of(get<std::string>(field(a, "tgt"), "tgt"))});
    }
    auto arrow = [&](const json& v) {
        auto it = idx.find(get<std::string>(v, "arrow reference"));
        if (it == idx.end()) bad("unknown arrow " + v.dump());
        return it->second;
    };
    std::vector<int> units(B.size(), -1), inv(arrows.size(), -1);
    for (auto it = field(j, "units").begin(); it != field(j, "units").end(); ++it)
        units[B.index_of(it.key())] = arrow(it.value());
    for (auto it = field(j, "inv").begin(); it != field(j, "inv").end(); ++it) inv[arrow(it.key())] = arrow(it.value());
    if (std::count(units.begin(), units.end(), -1)) bad("every atom needs a unit");
    if (std::count(inv.begin(), inv.end(), -1)) bad("every arrow needs an inverse");
    std::vector<std::array<int, 3>> comp;
    for (const auto& t : field(j, "compose")) {
        if (!t.is_array() || t.size() != 3) bad("compose entries are [g, h, gh]");
        comp.push_back({arrow(t[0]), arrow(t[1]), arrow(t[2])});
    }
    return Groupoid(B, std::move(arrows), std::move(units), std::move(inv), comp);
}

// ---------------------------------------------------------------------------

json to_json(const InvSemigroup& I) {
    const std::size_t N = I.size();
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return I.id(a) < I.id(b); });
    json elements = json::array(), mul = json::array(), inv = json::object(), emb = json::object();
    for (int x : order) {
        elements.push_back(I.id(x));
        inv[I.id(x)] = I.id(I.inv(x));
        for (int y : order) mul.push_back({I.id(x), I.id(y), I.id(I.mul(x, y))});
    }
    for (const auto& [e, s] : I.embedding()) {
        json atoms = json::array();
        for (std::size_t a = 0; a < I.base().size(); ++a)
            if (s.contains(a)) atoms.push_back(I.base().id(a));
        emb[I.id(e)] = atoms;
    }
    return {{"base", to_json(I.base())}, {"elements", elements}, {"zero", I.id(I.zero())},
            {"mul", mul},               {"inv", inv},           {"idem_embed", emb}};
}

InvSemigroup isg_from_json(const json& j) {
    WeightedSet B = weighted_set_from_json(field(j, "base"));
    std::vector<std::string> ids;
    std::map<std::string, int> idx;
    for (const auto& e : field(j, "elements")) {
        ids.push_back(get<std::string>(e, "element id"));
        if (!idx.emplace(ids.back(), static_cast<int>(ids.size()) - 1).second) bad("duplicate element " + ids.back());
    }
    auto el = [&](const json& v) {
        auto it = idx.find(get<std::string>(v, "element reference"));
        if (it == idx.end()) bad("unknown element " + v.dump());
        return it->second;
    };
    const std::size_t N = ids.size();
    std::vector<int> mul(N * N, -1), inv(N, -1);
    for (const auto& t : field(j, "mul")) {
        if (!t.is_array() || t.size() != 3) bad("mul entries are [x, y, xy]");
        mul[static_cast<std::size_t>(el(t[0])) * N + el(t[1])] = el(t[2]);
    }
    if (std::count(mul.begin(), mul.end(), -1)) bad("mul table incomplete");
    for (auto it = field(j, "inv").begin(); it != field(j, "inv").end(); ++it) inv[el(it.key())] = el(it.value());
    if (std::count(inv.begin(), inv.end(), -1)) bad("inv map incomplete");
    std::vector<std::pair<int, Subset>> emb;
    for (auto it = field(j, "idem_embed").begin(); it != field(j, "idem_embed").end(); ++it) {
        Subset s;
        for (const auto& a : it.value()) s = s | Subset::single(B.index_of(get<std::string>(a, "atom id")));
        emb.emplace_back(el(it.key()), s);
    }
    return InvSemigroup(B, ids, el(field(j, "zero")), std::move(mul), std::move(inv), emb);
}

// ---------------------------------------------------------------------------

json to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
        rows.push_back(row);
    }
    return rows;
}

Mat mat_from_json(const json& j) {
    if (!j.is_array()) bad("matrix must be a list of rows");
    const Eigen::Index r = static_cast<Eigen::Index>(j.size());
    const Eigen::Index c = r ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Mat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != c) bad("ragged matrix");
        for (Eigen::Index k = 0; k < c; ++k) {
            const auto& e = j[i][k];
            if (e.is_number()) {
                m(i, k) = e.get<double>();
            } else {
                if (!e.is_array() || e.size() != 2) bad("matrix entries are [re, im]");
                m(i, k) = cd(get<double>(e[0], "real part"), get<double>(e[1], "imaginary part"));
            }
        }
    }
    return m;
}

json to_json(const MultiMatrixAlgebra& a) { return a.blocks(); }

MultiMatrixAlgebra algebra_from_json(const json& j) {
    return MultiMatrixAlgebra(get<std::vector<int>>(j, "block dimension list"));
}

json to_json(const Element& x) {
    json out = json::array();
    for (const auto& b : x) out.push_back(to_json(b));
    return out;
}

json to_json(const Inclusion& inc) {
    return {{"ambient", to_json(inc.ambient)}, {"sub", to_json(inc.sub)},   {"embed", to_json(inc.embed)},
            {"expect", to_json(inc.expect)},   {"weights", inc.weights}};
}

Inclusion inclusion_from_json(const json& j) {
    MultiMatrixAlgebra M = algebra_from_json(field(j, "ambient"));
    MultiMatrixAlgebra B = algebra_from_json(field(j, "sub"));
    Mat embed = mat_from_json(field(j, "embed"));
    Mat expect = mat_from_json(field(j, "expect"));
    if (embed.rows() != M.dim() || embed.cols() != B.dim() || expect.rows() != B.dim() || expect.cols() != M.dim())
        throw Error(ErrorCode::DimensionMismatch, "embed must be dim M x dim B and expect dim B x dim M");
    std::vector<double> w;
    if (j.contains("weights")) w = get<std::vector<double>>(j.at("weights"), "weights");
    if (!w.empty() && static_cast<int>(w.size()) != B.num_blocks())
        throw Error(ErrorCode::DimensionMismatch, "one weight per block of B");
    return make_inclusion(M, B, embed, expect, w);
}

// ---------------------------------------------------------------------------

json to_json(const CocycleAction& a) {
    const Groupoid& G = *a.groupoid;
    json field = json::object(), alpha = json::object(), u = json::array();
    for (std::size_t x = 0; x < G.num_atoms(); ++x) field[G.base().id(x)] = a.field[x];
    for (std::size_t g = 0; g < G.num_arrows(); ++g) alpha[G.arrow_id(static_cast<int>(g))] = to_json(a.alpha[g]);
    const std::size_t A = G.num_arrows();
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        if (!a.u[i].size()) continue;
        int g = static_cast<int>(i / A), h = static_cast<int>(i % A);
        const Mat& m = a.u[i];
        if (m.rows() == m.cols() && max_abs(Mat(m - Mat::Identity(m.rows(), m.cols()))) == 0.0) continue;
        u.push_back({{"g", G.arrow_id(g)}, {"h", G.arrow_id(h)}, {"u", to_json(m)}});
    }
    return {{"groupoid", to_json(G)}, {"field", field}, {"alpha", alpha}, {"cocycle", u}};
}

CocycleAction action_from_json(const json& j) {
    auto G = std::make_shared<const Groupoid>(groupoid_from_json(field(j, "groupoid")));
    std::vector<int> f(G->num_atoms(), 0);
    for (auto it = field(j, "field").begin(); it != field(j, "field").end(); ++it)
        f[G->base().index_of(it.key())] = get<int>(it.value(), "field dimension");
    std::vector<Mat> V(G->num_arrows());
    std::vector<char> seen(G->num_arrows(), 0);
    for (auto it = field(j, "alpha").begin(); it != field(j, "alpha").end(); ++it) {
        int g = G->arrow_index(it.key());
        V[g] = mat_from_json(it.value());
        seen[g] = 1;
    }
    if (std::count(seen.begin(), seen.end(), 0)) bad("alpha missing for some arrow");
    CocycleAction a = make_action(G, f, V);
    const std::size_t A = G->num_arrows();
    a.u.resize(A * A);
    if (j.contains("cocycle"))
        for (const auto& e : j.at("cocycle")) {
            int g = G->arrow_index(get<std::string>(field(e, "g"), "arrow"));
            int h = G->arrow_index(get<std::string>(field(e, "h"), "arrow"));
            a.u[static_cast<std::size_t>(g) * A + h] = mat_from_json(field(e, "u"));
        }
    return a;
}

// ---------------------------------------------------------------------------

namespace {

json classes_json(const EquivRel& r) {
    json out = json::array();
    for (const auto& c : r.classes()) {
        json cls = json::array();
        for (int x : c) cls.push_back(r.base().id(x));
        out.push_back(cls);
    }
    return out;
}

} // namespace

json to_json(const EquivRel& r) { return {{"base", to_json(r.base())}, {"classes", classes_json(r)}}; }

EquivRel relation_from_json(const json& j, const WeightedSet& base) {
    std::vector<std::vector<int>> classes;
    for (const auto& c : j) {
        classes.emplace_back();
        for (const auto& a : c) classes.back().push_back(base.index_of(get<std::string>(a, "atom id")));
    }
    return EquivRel(base, classes);
}

json to_json(const SubInclusion& inc) {
    return {{"base", to_json(inc.big.base())}, {"R", classes_json(inc.big)}, {"S", classes_json(inc.small)}};
}

SubInclusion subinclusion_from_json(const json& j) {
    WeightedSet B = weighted_set_from_json(field(j, "base"));
    return SubInclusion(relation_from_json(field(j, "R"), B), relation_from_json(field(j, "S"), B));
}

json to_json(const Report& r) {
    json checks = json::array();
    for (const auto& c : r.checks) {
        json e = {{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}};
        if (!c.detail.empty()) e["detail"] = c.detail;
        checks.push_back(e);
    }
    return {{"pass", r.pass()}, {"max_residual", r.max_residual()}, {"verdicts", checks}};
}

json to_json(const Extraction& ex) {
    return {{"groupoid", to_json(*ex.action.groupoid)},
            {"action", to_json(ex.action)},
            {"theta", to_json(ex.theta)},
            {"theta_inv", to_json(ex.theta_inv)},
            {"crossed_product", to_json(ex.cp.inclusion)}};
}

// ---------------------------------------------------------------------------

std::string kind_of(const Instance& x) {
    static const char* names[] = {"groupoid", "isg", "inclusion", "action", "subrelation"};
    return names[x.index()];
}

json instance_json(const Instance& x) {
    json j = std::visit([](const auto& v) { return to_json(v); }, x);
    j["kind"] = kind_of(x);
    return j;
}

Instance instance_from_json(const json& j) {
    const std::string k = get<std::string>(field(j, "kind"), "kind");
    if (k == "groupoid") return groupoid_from_json(j);
    if (k == "isg") return isg_from_json(j);
    if (k == "inclusion") return inclusion_from_json(j);
    if (k == "action") return action_from_json(j);
    if (k == "subrelation") return subinclusion_from_json(j);
    bad("unknown kind " + k);
}

std::string digest(const json& j) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace cartan
