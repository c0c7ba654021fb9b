#include "cartan/driver.hpp"

#include <chrono>
#include <functional>
#include <map>

#include "cartan/correspondence.hpp"
#include "cartan/errors.hpp"
#include "cartan/generators.hpp"

namespace cartan {

int exit_code_for(ErrorCode c) {
    switch (c) {
    case ErrorCode::CapExceeded:
    case ErrorCode::SearchBudgetExceeded:
        return 3;
    case ErrorCode::MalformedInput:
    case ErrorCode::UnknownId:
    case ErrorCode::NonPositiveWeight:
    case ErrorCode::WeightSumMismatch:
    case ErrorCode::DuplicateAtom:
    case ErrorCode::TooManyAtoms:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NonErgodic:
        return 2;
    default:
        return 1;
    }
}

namespace {

struct Ctx {
    const Instance& in;
    const RunOptions& opt;
    Report verdicts;
    json output;
};

[[noreturn]] void wrong_kind(const std::string& cmd, const Instance& in) {
    throw Error(ErrorCode::MalformedInput, cmd + " does not accept a " + kind_of(in) + " instance");
}

template <class T>
const T* as(const Instance& in) {
    return std::get_if<T>(&in);
}

json fibers_json(const WeightedSet& base, const std::vector<std::vector<int>>& fibers) {
    json out = json::array();
    for (const auto& f : fibers) {
        json c = json::array();
        for (int x : f) c.push_back(base.id(x));
        out.push_back(c);
    }
    return out;
}

void cmd_validate(Ctx& c) {
    if (auto g = as<Groupoid>(c.in)) c.verdicts = validate_groupoid(*g);
    else if (auto I = as<InvSemigroup>(c.in)) c.verdicts = validate_csm(*I);
    else if (auto inc = as<Inclusion>(c.in)) c.verdicts = validate_expectation(*inc, c.opt.seed, c.opt.tol);
    else if (auto a = as<CocycleAction>(c.in)) {
        c.verdicts.merge("groupoid", validate_groupoid(*a->groupoid));
        c.verdicts.merge("action", validate_action(*a, c.opt.tol));
    } else if (auto s = as<SubInclusion>(c.in)) {
        // parsing already checked both partitions and S ⊂ R
        c.verdicts.add("S refines R", true);
        auto sn = is_strongly_normal(*s);
        c.output["strongly_normal"] = sn.strongly_normal;
        if (!sn.strongly_normal)
            c.output["refuting_pair"] = {s->big.base().id(sn.refuting.first), s->big.base().id(sn.refuting.second)};
        c.output["ergodic"] = s->big.ergodic();
    }
}

void cmd_pseudogroup(Ctx& c) {
    auto g = as<Groupoid>(c.in);
    if (!g) wrong_kind("pseudogroup", c.in);
    c.verdicts.merge("groupoid", validate_groupoid(*g));
    auto p = full_pseudogroup(std::make_shared<const Groupoid>(*g), c.opt.cap);
    c.verdicts.merge("csm", validate_csm(*p->semigroup));
    c.output = to_json(*p->semigroup);
    c.output["kind"] = "isg";
}

void cmd_synthesize(Ctx& c) {
    auto I = as<InvSemigroup>(c.in);
    if (!I) wrong_kind("synthesize", c.in);
    auto ptr = std::make_shared<const InvSemigroup>(*I);
    c.verdicts.merge("csm", validate_csm(*ptr));
    if (!c.verdicts.pass()) return;
    Synthesis s = groupoid_of(ptr, find_generators(*ptr), c.opt.cap);
    c.verdicts.merge("groupoid", validate_groupoid(*s.groupoid));
    c.verdicts.merge("gamma", check_hom(s.gamma));
    c.output = to_json(*s.groupoid);
    c.output["kind"] = "groupoid";
}

void cmd_roundtrip_a(Ctx& c) {
    if (auto g = as<Groupoid>(c.in)) {
        c.verdicts = roundtrip_A(std::make_shared<const Groupoid>(*g), c.opt.cap);
    } else if (auto I = as<InvSemigroup>(c.in)) {
        auto ptr = std::make_shared<const InvSemigroup>(*I);
        c.verdicts = roundtrip_A_sem(ptr, find_generators(*ptr), c.opt.cap);
    } else {
        wrong_kind("roundtrip-a", c.in);
    }
}

void cmd_crossed_product(Ctx& c) {
    auto a = as<CocycleAction>(c.in);
    if (!a) wrong_kind("crossed-product", c.in);
    CrossedProduct cp = crossed_product(*a, c.opt.seed);
    c.verdicts.merge("construction", cp.construction);
    c.verdicts.merge("identities", check_identities(cp, c.opt.cap, c.opt.seed));
    c.verdicts.merge("expectation", validate_expectation(cp.inclusion, c.opt.seed, c.opt.tol));
    c.output = to_json(cp.inclusion);
    c.output["kind"] = "inclusion";
}

void cmd_extract(Ctx& c) {
    auto inc = as<Inclusion>(c.in);
    if (!inc) wrong_kind("extract", c.in);
    ExtractOptions eo;
    eo.cap = c.opt.cap;
    eo.seed = c.opt.seed;
    eo.tol = c.opt.tol;
    Extraction ex = extract(*inc, eo);
    c.verdicts = ex.report;
    c.output = to_json(ex);
}

void cmd_roundtrip_b(Ctx& c) {
    if (auto a = as<CocycleAction>(c.in)) {
        c.verdicts = roundtrip_B(*a, c.opt.seed, c.opt.cap);
    } else if (auto inc = as<Inclusion>(c.in)) {
        c.verdicts = roundtrip_B_inclusion(*inc, c.opt.seed, c.opt.cap);
    } else if (auto g = as<Groupoid>(c.in)) {
        // a bare groupoid gets a seeded coboundary action on M_2 fibers
        std::mt19937_64 rng(c.opt.seed);
        auto G = std::make_shared<const Groupoid>(*g);
        c.verdicts = roundtrip_B(random_coboundary_action(G, std::vector<int>(G->num_atoms(), 2), rng), c.opt.seed,
                                 c.opt.cap);
    } else {
        wrong_kind("roundtrip-b", c.in);
    }
}

void cmd_quotient_rel(Ctx& c) {
    auto s = as<SubInclusion>(c.in);
    if (!s) wrong_kind("quotient-rel", c.in);
    auto sn = is_strongly_normal(*s);
    c.verdicts.merge("strong normality", sn.report);
    if (!sn.strongly_normal) return;
    auto q = quotient_groupoid_rel(*s, false, c.opt.cap);
    c.verdicts.merge("quotient", q.report);
    const Groupoid& G = *q.groupoid;
    json alpha = json::object();
    for (std::size_t g = 0; g < G.num_arrows(); ++g) {
        const auto& src = q.action.fibers[G.src(static_cast<int>(g))];
        const auto& tgt = q.action.fibers[G.tgt(static_cast<int>(g))];
        json m = json::object();
        for (std::size_t p = 0; p < src.size(); ++p)
            m[s->big.base().id(src[p])] = s->big.base().id(tgt[q.action.alpha[g][p]]);
        alpha[G.arrow_id(static_cast<int>(g))] = m;
    }
    c.output = {{"Z", to_json(q.quotient.decomposition.Z)},
                {"fibers", fibers_json(s->big.base(), q.action.fibers)},
                {"groupoid", to_json(G)},
                {"alpha", alpha}};
    if (q.quotient.quotient) c.output["quotient_semigroup_size"] = q.quotient.quotient->semigroup->size();
}

void cmd_roundtrip_c(Ctx& c) {
    auto s = as<SubInclusion>(c.in);
    if (!s) wrong_kind("roundtrip-c", c.in);
    c.verdicts.merge("roundtrip", roundtrip_C(*s, c.opt.cap));
    if (!c.verdicts.pass()) return;
    c.verdicts.merge("bridges", bridge_checks(*s, c.opt.cap));
}

void cmd_metric(Ctx& c) {
    if (auto I = as<InvSemigroup>(c.in)) {
        c.verdicts = check_metric(*I);
    } else if (auto g = as<Groupoid>(c.in)) {
        auto p = full_pseudogroup(std::make_shared<const Groupoid>(*g), c.opt.cap);
        c.verdicts = check_metric(*p->semigroup);
        c.output["elements"] = p->semigroup->size();
    } else {
        wrong_kind("metric", c.in);
    }
}

const std::map<std::string, std::function<void(Ctx&)>>& table() {
    static const std::map<std::string, std::function<void(Ctx&)>> t = {
        {"validate", cmd_validate},       {"pseudogroup", cmd_pseudogroup},
        {"synthesize", cmd_synthesize},   {"roundtrip-a", cmd_roundtrip_a},
        {"crossed-product", cmd_crossed_product}, {"extract", cmd_extract},
        {"roundtrip-b", cmd_roundtrip_b}, {"quotient-rel", cmd_quotient_rel},
        {"roundtrip-c", cmd_roundtrip_c}, {"metric", cmd_metric}};
    return t;
}

} // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, f] : table()) v.push_back(k);
        return v;
    }();
    return names;
}

RunResult run(const std::string& command, const json& input, const RunOptions& opt) {
    auto start = std::chrono::steady_clock::now();
    RunResult res;
    json& rep = res.report;
    rep["schema"] = kReportSchema;
    rep["version"] = kVersion;
    rep["command"] = command;
    rep["seed"] = opt.seed;
    rep["instance"] = {{"digest", digest(input)}};

    Report verdicts;
    json output;
    try {
        auto it = table().find(command);
        if (it == table().end()) throw Error(ErrorCode::MalformedInput, "unknown command " + command);
        Instance in = instance_from_json(input);
        rep["instance"]["kind"] = kind_of(in);
        Ctx ctx{in, opt, {}, json::object()};
        try {
            it->second(ctx);
        } catch (const Error&) {
            verdicts = ctx.verdicts;
            throw;
        }
        verdicts = ctx.verdicts;
        output = ctx.output;
        res.exit_code = verdicts.pass() ? 0 : 1;
    } catch (const Error& e) {
        rep["error"] = {{"code", code_name(e.code())}, {"message", e.what()}};
        res.exit_code = exit_code_for(e.code());
    } catch (const json::exception& e) {
        rep["error"] = {{"code", code_name(ErrorCode::MalformedInput)}, {"message", e.what()}};
        res.exit_code = 2;
    }
    json vj = to_json(verdicts);
    rep["verdicts"] = vj["verdicts"];
    rep["max_residual"] = vj["max_residual"];
    rep["pass"] = res.exit_code == 0;
    if (!output.is_null() && !output.empty()) rep["output"] = output;
    rep["timings"] = {{"total_ms", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()}};
    return res;
}

json random_instance(const RandomOptions& o) {
    if (o.atoms < 1 || o.atoms > 64) throw Error(ErrorCode::MalformedInput, "atoms must be in 1..64");
    Instance x;
    if (o.kind == "principal-groupoid" || o.kind == "principal")
        x = random_principal_groupoid(o.atoms, o.seed);
    else if (o.kind == "group-bundle")
        x = random_group_bundle(o.atoms, group_by_name(o.group), o.seed);
    else if (o.kind == "transformation-groupoid")
        x = random_transformation_groupoid(o.atoms, group_by_name(o.group), o.seed);
    else if (o.kind == "coboundary-action")
        x = random_coboundary_instance(o.atoms, o.max_block, o.seed);
    else if (o.kind == "subrelation")
        x = random_subrelation(o.atoms, o.seed, o.strongly_normal, o.ergodic);
    else
        throw Error(ErrorCode::MalformedInput, "unknown kind " + o.kind);
    return instance_json(x);
}

} // namespace cartan
