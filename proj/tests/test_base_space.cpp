#include "doctest.h"

#include "cartan/base_space.hpp"
#include "cartan/errors.hpp"

using namespace cartan;

TEST_SUITE("base_space") {

TEST_CASE("construction and validation") {
    auto s = WeightedSet::create({"a", "b"}, {Rational(1, 2), Rational(1, 2)});
    CHECK(s.size() == 2);
    CHECK(WeightedSet::create({"a"}, {Rational(1)}).size() == 1);

    auto code = [](auto f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::MalformedInput;
    };
    CHECK(code([] { WeightedSet::create({"a", "b"}, {Rational(1), Rational(0)}); }) == ErrorCode::NonPositiveWeight);
    CHECK(code([] { WeightedSet::create({"a", "b"}, {Rational(1, 2), Rational(1, 3)}); }) == ErrorCode::WeightSumMismatch);
    CHECK(code([] { WeightedSet::create({"a", "a"}, {Rational(1, 2), Rational(1, 2)}); }) == ErrorCode::DuplicateAtom);

    auto n = WeightedSet::create({"a", "b"}, {Rational(1), Rational(3)}, true);
    CHECK(n.weight(0) == Rational(1, 4));
    CHECK(n.weight(1) == Rational(3, 4));
}

TEST_CASE("mu") {
    auto u = WeightedSet::uniform(2);
    CHECK(u.mu(Subset::single(0)) == Rational(1, 2));
    CHECK(u.mu(Subset{}) == Rational(0));
    auto w = WeightedSet::create({"1", "2", "3"}, {Rational(1, 6), Rational(1, 3), Rational(1, 2)});
    CHECK(w.mu(Subset::single(0) | Subset::single(2)) == Rational(2, 3));
    CHECK(w.mu(w.full()) == Rational(1));
    CHECK(w.units(w.full()) == w.denominator());
}

TEST_CASE("Boolean laws and additivity by exhaustion") {
    auto w = WeightedSet::create({"1", "2", "3", "4", "5"},
                                 {Rational(1, 10), Rational(1, 5), Rational(3, 10), Rational(1, 4), Rational(3, 20)});
    const std::uint64_t N = 32;
    for (std::uint64_t a = 0; a < N; ++a) {
        Subset A{a};
        CHECK_EQ(w.mu(A) == Rational(0), A.empty());
        CHECK(w.complement(w.complement(A)) == A);
        for (std::uint64_t b = 0; b < N; ++b) {
            Subset B{b};
            CHECK(w.complement(A | B) == (w.complement(A) & w.complement(B)));
            CHECK(w.complement(A & B) == (w.complement(A) | w.complement(B)));
            if ((A & B).empty()) CHECK(w.mu(A | B) == w.mu(A) + w.mu(B));
            for (std::uint64_t c = 0; c < N; c += 3) {
                Subset C{c};
                CHECK((A & (B | C)) == ((A & B) | (A & C)));
                CHECK((A | (B & C)) == ((A | B) & (A | C)));
            }
        }
    }
}

}
