#include "intb/bracket.hpp"

#include <doctest.h>

#include <random>

using namespace intb;

namespace {

// Random tree with m leaves; letters numbered 1..m left to right when canonical.
FormalBracket random_tree(std::mt19937& rng, int m, int& next, bool canonical) {
    if (m == 1) {
        if (canonical) return FormalBracket::leaf(next++);
        return FormalBracket::leaf(std::uniform_int_distribution<int>(1, 40)(rng));
    }
    const int m1 = std::uniform_int_distribution<int>(1, m - 1)(rng);
    FormalBracket l = random_tree(rng, m1, next, canonical);
    FormalBracket r = random_tree(rng, m - m1, next, canonical);
    return FormalBracket::node(l, r);
}

FormalBracket random_canonical(std::mt19937& rng, int m) {
    int next = 1;
    return random_tree(rng, m, next, true);
}

// Right brackets minus left brackets after the unique occurrence of sub in text.
int count_oracle(const std::string& text, const std::string& sub) {
    const auto pos = text.find(sub);
    REQUIRE(pos != std::string::npos);
    REQUIRE(text.find(sub, pos + 1) == std::string::npos);
    int n = 0;
    for (std::size_t i = pos + sub.size(); i < text.size(); ++i) {
        if (text[i] == ']') ++n;
        if (text[i] == '[') --n;
    }
    return n;
}

long factor_oracle(const FormalBracket& b) {
    // Multiflow word length by explicit expansion: leaf is one factor, a node is
    // W1 W2 W1^-1 W2^-1.
    if (b.is_leaf()) return 1;
    const long a = factor_oracle(b.left()), c = factor_oracle(b.right());
    return a + c + a + c;
}

}  // namespace

TEST_CASE("parse examples") {
    const FormalBracket x1 = parse("X1");
    CHECK(x1.is_leaf());
    CHECK(x1.index() == 1);
    CHECK(x1.degree() == 1);

    const FormalBracket b = parse("[[X1,X2],[[X3,X4],X5]]");
    CHECK(b.degree() == 5);
    CHECK(b.letters() == std::vector<int>{1, 2, 3, 4, 5});
    CHECK(b.is_canonical());

    CHECK(parse(" [ X1 ,\n\tX2 ] ") == parse("[X1,X2]"));
    CHECK(parse("X12").index() == 12);
}

TEST_CASE("parse errors carry offsets") {
    CHECK_THROWS_AS(parse("[X1,X2"), ParseError);
    try {
        parse("[X1");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 3);
    }
    try {
        parse("[X1,X2]]");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 7);
    }
    CHECK_THROWS_AS(parse("X0"), ParseError);
    CHECK_THROWS_AS(parse("X-1"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("Y1"), ParseError);
    CHECK_THROWS_AS(parse("[X1 X2]"), ParseError);
}

TEST_CASE("render and parse round-trip on random trees") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = std::uniform_int_distribution<int>(1, 9)(rng);
        int next = 1;
        const FormalBracket b = random_tree(rng, m, next, trial % 2 == 0);
        const std::string s = render(b);
        CHECK(parse(s) == b);
        CHECK(render(parse(s)) == s);
        CHECK(b.degree() == m);
    }
}

TEST_CASE("canonical and semicanonical") {
    CHECK(parse("[[X1,X2],X3]").is_canonical());
    CHECK_FALSE(parse("[X2,X1]").is_canonical());
    CHECK_FALSE(parse("[X2,X1]").is_semicanonical());
    const auto mu = parse("[X2,X3]").semicanonical_shift();
    REQUIRE(mu);
    CHECK(*mu == 1);
    CHECK(*parse("[X1,X2]").semicanonical_shift() == 0);
    CHECK_FALSE(parse("[X1,X3]").is_semicanonical());
}

TEST_CASE("canonical factorization") {
    auto f = canonical_factorization(parse("[[X1,X2],[[X3,X4],X5]]"));
    CHECK(f.left == parse("[X1,X2]"));
    CHECK(f.right == parse("[[X1,X2],X3]"));
    CHECK(f.m1 == 2);

    f = canonical_factorization(parse("[X1,X2]"));
    CHECK(f.left == parse("X1"));
    CHECK(f.right == parse("X1"));
    CHECK(f.m1 == 1);

    f = canonical_factorization(parse("[[X1,X2],X3]"));
    CHECK(f.left == parse("[X1,X2]"));
    CHECK(f.right == parse("X1"));
    CHECK(f.m1 == 2);

    CHECK_THROWS_AS(canonical_factorization(parse("X1")), BracketError);
    CHECK_THROWS_AS(canonical_factorization(parse("[X2,X3]")), BracketError);
}

TEST_CASE("factorization reassembles random canonical brackets") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = std::uniform_int_distribution<int>(2, 10)(rng);
        const FormalBracket b = random_canonical(rng, m);
        const auto f = canonical_factorization(b);
        CHECK(f.left.is_canonical());
        CHECK(f.right.is_canonical());
        CHECK(f.m1 >= 1);
        CHECK(f.m1 < m);
        CHECK(FormalBracket::node(f.left, shift(f.right, f.m1)) == b);
    }
}

TEST_CASE("shift") {
    CHECK(shift(parse("[[[X1,X2],[X3,[X4,X5]]],X6]"), 4) == parse("[[[X5,X6],[X7,[X8,X9]]],X10]"));
    const FormalBracket b = parse("[X1,[X2,X3]]");
    CHECK(shift(b, 0) == b);
    CHECK(shift(parse("[X1,X2]"), 2) == parse("[X3,X4]"));
    CHECK(*shift(b, 5).semicanonical_shift() == 5);
    CHECK_THROWS_AS(shift(parse("[X2,X3]"), 1), BracketError);
    CHECK_THROWS(shift(b, -1));
}

TEST_CASE("delta on the worked example") {
    const FormalBracket b = parse("[X3,[[[[X4,X5],X6],X7],[X8,[X9,X10]]]]");
    const BracketPath p{Side::Right, Side::Left, Side::Left, Side::Left};
    CHECK(b.at(p) == parse("[X4,X5]"));
    CHECK(delta(p, b) == 4);
    CHECK(delta({}, b) == 0);
    CHECK_THROWS_AS(delta({Side::Left, Side::Left}, b), BracketError);
    CHECK_THROWS_AS(delta({}, parse("[X1,X3]")), BracketError);
}

TEST_CASE("delta equals the bracket-count oracle") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = std::uniform_int_distribution<int>(1, 9)(rng);
        const int mu = std::uniform_int_distribution<int>(0, 3)(rng);
        const FormalBracket b = shift(random_canonical(rng, m), mu);
        const std::string text = render(b);
        for (const auto& path : b.occurrences()) {
            CHECK(delta(path, b) == count_oracle(text, render(b.at(path))));
        }
    }
}

TEST_CASE("delta recursion") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const FormalBracket b = random_canonical(rng, std::uniform_int_distribution<int>(2, 8)(rng));
        for (const auto& path : b.occurrences()) {
            if (b.at(path).is_leaf()) continue;
            BracketPath l = path, r = path;
            l.push_back(Side::Left);
            r.push_back(Side::Right);
            CHECK(delta(l, b) == 1 + delta(path, b));
            CHECK(delta(r, b) == 1 + delta(path, b));
        }
    }
}

TEST_CASE("per-letter delta") {
    CHECK(delta_slot(parse("X1"), 1) == 0);
    CHECK(delta_slot(parse("[X1,X2]"), 1) == 1);
    CHECK(delta_slot(parse("[X1,X2]"), 2) == 1);
    CHECK(delta_slot(parse("[[X1,X2],X3]"), 1) == 2);
    CHECK(delta_slot(parse("[X1,[X2,X3]]"), 1) == 1);
    CHECK(delta_slot(parse("[X1,[X2,X3]]"), 2) == 2);
    CHECK(delta_slot(parse("[X1,[X2,X3]]"), 3) == 2);
    CHECK_THROWS(delta_slot(parse("[X1,X2]"), 3));
}

TEST_CASE("regularity profile") {
    const FormalBracket b = parse("[[X1,X2],[[X3,X4],X5]]");
    auto p = regularity_profile(b);
    CHECK(p.orders == std::vector<int>{2, 2, 3, 3, 2});
    CHECK(p.k == 0);
    p = regularity_profile(b, 1);
    CHECK(p.orders == std::vector<int>{3, 3, 4, 4, 3});
    CHECK(regularity_profile(parse("X1")).orders == std::vector<int>{0});
    CHECK_THROWS(regularity_profile(b, -1));
}

TEST_CASE("number of exponential factors") {
    CHECK(num_exponential_factors(parse("X1")) == 1);
    CHECK(num_exponential_factors(parse("[X1,X2]")) == 4);
    CHECK(num_exponential_factors(parse("[[X1,X2],X3]")) == 10);
    std::mt19937 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const FormalBracket b = random_canonical(rng, std::uniform_int_distribution<int>(1, 8)(rng));
        CHECK(num_exponential_factors(b) == factor_oracle(b));
    }
}
