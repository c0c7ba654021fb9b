#include "cartan/base_space.hpp"

#include <cctype>
#include <cmath>
#include <numeric>

#include "cartan/errors.hpp"

namespace cartan {

Rational approximate(double x, std::int64_t max_den) {
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        auto ai = static_cast<std::int64_t>(a);
        std::int64_t q2 = q0 + ai * q1;
        if (q2 > max_den) break;
        std::int64_t p2 = p0 + ai * p1;
        p0 = p1, q0 = q1, p1 = p2, q1 = q2;
        if (r - a < 1e-12) break;
        r = 1.0 / (r - a);
    }
    return Rational(p1, q1);
}

Rational parse_rational(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    std::string t = s.substr(b, e - b);
    try {
        auto slash = t.find('/');
        std::size_t used = 0;
        if (slash == std::string::npos) {
            long long p = std::stoll(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return Rational(p);
        }
        std::string ps = t.substr(0, slash), qs = t.substr(slash + 1);
        long long p = std::stoll(ps, &used);
        if (used != ps.size()) throw std::invalid_argument(t);
        long long q = std::stoll(qs, &used);
        if (used != qs.size() || q == 0) throw std::invalid_argument(t);
        return Rational(p, q);
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::MalformedInput, "not a rational: \"" + s + "\"");
    }
}

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

WeightedSet WeightedSet::create(std::vector<std::string> ids, std::vector<Rational> weights,
                                bool normalize) {
    if (ids.size() != weights.size())
        throw Error(ErrorCode::MalformedInput, "atom and weight lists differ in length");
    if (ids.empty()) throw Error(ErrorCode::MalformedInput, "empty space");
    if (ids.size() > kMaxAtoms)
        throw Error(ErrorCode::TooManyAtoms, std::to_string(ids.size()) + " atoms (max 64)");

    WeightedSet s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!s.index_.emplace(ids[i], static_cast<int>(i)).second)
            throw Error(ErrorCode::DuplicateAtom, ids[i]);
        if (weights[i] <= Rational(0))
            throw Error(ErrorCode::NonPositiveWeight, ids[i] + " has weight " + to_string(weights[i]));
    }

    // Common denominator, kept small enough that sums of units never overflow.
    const std::int64_t limit = std::int64_t{1} << 40;
    std::int64_t den = 1;
    for (const auto& w : weights) {
        std::int64_t q = w.denominator();
        std::int64_t g = std::gcd(den, q);
        if (den / g > limit / q) throw Error(ErrorCode::MalformedInput, "weight denominators too large");
        den = den / g * q;
    }
    __int128 total = 0;
    std::vector<std::int64_t> units;
    for (const auto& w : weights) {
        __int128 u = static_cast<__int128>(w.numerator()) * (den / w.denominator());
        if (u > limit) throw Error(ErrorCode::MalformedInput, "weights too large");
        units.push_back(static_cast<std::int64_t>(u));
        total += u;
    }
    if (total != den) {
        if (!normalize) {
            Rational sum(static_cast<std::int64_t>(total), den);
            throw Error(ErrorCode::WeightSumMismatch, "weights sum to " + to_string(sum));
        }
        std::vector<Rational> scaled;
        Rational sum(static_cast<std::int64_t>(total), den);
        for (const auto& w : weights) scaled.push_back(w / sum);
        return create(std::move(ids), std::move(scaled), false);
    }
    s.ids_ = std::move(ids);
    s.weights_ = std::move(weights);
    s.units_ = std::move(units);
    s.denom_ = den;
    return s;
}

WeightedSet WeightedSet::uniform(std::vector<std::string> ids) {
    std::vector<Rational> w(ids.size(), Rational(1, static_cast<std::int64_t>(ids.size())));
    return create(std::move(ids), std::move(w));
}

WeightedSet WeightedSet::uniform(std::size_t n) {
    std::vector<std::string> ids;
    for (std::size_t i = 1; i <= n; ++i) ids.push_back(std::to_string(i));
    return uniform(std::move(ids));
}

int WeightedSet::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorCode::UnknownId, "atom \"" + id + "\"");
    return it->second;
}

Subset WeightedSet::full() const {
    if (ids_.size() == 64) return Subset{~std::uint64_t{0}};
    return Subset{(std::uint64_t{1} << ids_.size()) - 1};
}

std::int64_t WeightedSet::units(Subset a) const {
    std::int64_t t = 0;
    for (std::uint64_t b = a.bits; b; b &= b - 1) t += units_[__builtin_ctzll(b)];
    return t;
}

Rational WeightedSet::mu(Subset a) const { return Rational(units(a), denom_); }

} // namespace cartan
