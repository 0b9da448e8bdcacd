#include "intb/bracket.hpp"

#include <cctype>
#include <functional>

namespace intb {

struct FormalBracket::Node {
    int index = 0;  // > 0 for leaves, 0 for nodes
    int degree = 1;
    std::optional<FormalBracket> left;
    std::optional<FormalBracket> right;
};

FormalBracket FormalBracket::leaf(int index) {
    if (index <= 0) {
        throw BracketError("letter index must be positive, got " + std::to_string(index));
    }
    auto n = std::make_shared<Node>();
    n->index = index;
    return FormalBracket(std::move(n));
}

FormalBracket FormalBracket::node(FormalBracket left, FormalBracket right) {
    auto n = std::make_shared<Node>();
    n->degree = left.degree() + right.degree();
    n->left = std::move(left);
    n->right = std::move(right);
    return FormalBracket(std::move(n));
}

bool FormalBracket::is_leaf() const noexcept { return node_->index > 0; }

int FormalBracket::index() const {
    if (!is_leaf()) throw BracketError("index() called on a bracket node");
    return node_->index;
}

const FormalBracket& FormalBracket::left() const {
    if (is_leaf()) throw BracketError("left() called on a single letter");
    return *node_->left;
}

const FormalBracket& FormalBracket::right() const {
    if (is_leaf()) throw BracketError("right() called on a single letter");
    return *node_->right;
}

int FormalBracket::degree() const noexcept { return node_->degree; }

std::vector<int> FormalBracket::letters() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(degree()));
    std::function<void(const FormalBracket&)> walk = [&](const FormalBracket& b) {
        if (b.is_leaf()) {
            out.push_back(b.index());
        } else {
            walk(b.left());
            walk(b.right());
        }
    };
    walk(*this);
    return out;
}

bool FormalBracket::is_canonical() const {
    auto s = semicanonical_shift();
    return s && *s == 0;
}

std::optional<int> FormalBracket::semicanonical_shift() const {
    const auto seq = letters();
    const int mu = seq.front() - 1;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i] != static_cast<int>(i) + 1 + mu) return std::nullopt;
    }
    return mu;
}

const FormalBracket& FormalBracket::at(const BracketPath& path) const {
    const FormalBracket* cur = this;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (cur->is_leaf()) {
            throw BracketError("path step " + std::to_string(i) + " descends below a letter");
        }
        cur = path[i] == Side::Left ? &cur->left() : &cur->right();
    }
    return *cur;
}

std::vector<BracketPath> FormalBracket::occurrences() const {
    std::vector<BracketPath> out;
    BracketPath cur;
    std::function<void(const FormalBracket&)> walk = [&](const FormalBracket& b) {
        out.push_back(cur);
        if (b.is_leaf()) return;
        cur.push_back(Side::Left);
        walk(b.left());
        cur.back() = Side::Right;
        walk(b.right());
        cur.pop_back();
    };
    walk(*this);
    return out;
}

bool operator==(const FormalBracket& a, const FormalBracket& b) {
    if (a.node_ == b.node_) return true;
    if (a.is_leaf() != b.is_leaf()) return false;
    if (a.is_leaf()) return a.index() == b.index();
    return a.degree() == b.degree() && a.left() == b.left() && a.right() == b.right();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    FormalBracket parse_all() {
        FormalBracket b = parse_bracket();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return b;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size()) fail(std::string("expected '") + c + "' but input ended");
        if (s_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    FormalBracket parse_bracket() {
        skip_ws();
        if (pos_ >= s_.size()) fail("expected 'X' or '[' but input ended");
        if (s_[pos_] == '[') {
            ++pos_;
            FormalBracket l = parse_bracket();
            expect(',');
            FormalBracket r = parse_bracket();
            expect(']');
            return FormalBracket::node(std::move(l), std::move(r));
        }
        if (s_[pos_] == 'X') {
            ++pos_;
            skip_ws();
            const std::size_t start = pos_;
            bool negative = false;
            if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
                negative = s_[pos_] == '-';
                ++pos_;
            }
            const std::size_t digits = pos_;
            long value = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                value = value * 10 + (s_[pos_] - '0');
                if (value > 1'000'000) {
                    pos_ = start;
                    fail("letter index too large");
                }
                ++pos_;
            }
            if (pos_ == digits) fail("expected a letter index after 'X'");
            if (negative || value <= 0) {
                pos_ = start;
                fail("letter index must be positive");
            }
            return FormalBracket::leaf(static_cast<int>(value));
        }
        fail(std::string("unexpected character '") + s_[pos_] + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

FormalBracket parse(std::string_view text) { return Parser(text).parse_all(); }

std::string render(const FormalBracket& b) {
    if (b.is_leaf()) return "X" + std::to_string(b.index());
    return "[" + render(b.left()) + "," + render(b.right()) + "]";
}

// ---------------------------------------------------------------------------
// Canonical-bracket calculus

namespace {

FormalBracket relabel(const FormalBracket& b, int offset) {
    if (b.is_leaf()) return FormalBracket::leaf(b.index() + offset);
    return FormalBracket::node(relabel(b.left(), offset), relabel(b.right(), offset));
}

void require_canonical(const FormalBracket& b, const char* op) {
    if (!b.is_canonical()) {
        throw BracketError(std::string(op) + ": bracket " + render(b) + " is not canonical");
    }
}

}  // namespace

FormalBracket shift(const FormalBracket& b, int mu) {
    require_canonical(b, "shift");
    if (mu < 0) throw BracketError("shift: mu must be nonnegative");
    return mu == 0 ? b : relabel(b, mu);
}

CanonicalFactorization canonical_factorization(const FormalBracket& b) {
    if (b.is_leaf()) throw BracketError("canonical_factorization: degree-1 bracket has no factors");
    require_canonical(b, "canonical_factorization");
    const int m1 = b.left().degree();
    // The left factor of a canonical bracket is canonical; the right one is its m1-shift.
    return {b.left(), relabel(b.right(), -m1), m1};
}

int delta(const BracketPath& path, const FormalBracket& b) {
    if (!b.is_semicanonical()) {
        throw BracketError("delta: bracket " + render(b) + " is not semicanonical");
    }
    (void)b.at(path);
    // Each bracketing above the occurrence differentiates it once.
    return static_cast<int>(path.size());
}

int delta_slot(const FormalBracket& b, int j) {
    const auto mu = b.semicanonical_shift();
    if (!mu) throw BracketError("delta_slot: bracket " + render(b) + " is not semicanonical");
    if (j < 1 + *mu || j > b.degree() + *mu) {
        throw BracketError("delta_slot: letter X" + std::to_string(j) + " does not occur in " + render(b));
    }
    int depth = 0;
    const FormalBracket* cur = &b;
    while (!cur->is_leaf()) {
        const int split = cur->left().letters().back();
        cur = j <= split ? &cur->left() : &cur->right();
        ++depth;
    }
    return depth;
}

RegularityProfile regularity_profile(const FormalBracket& b, int k) {
    require_canonical(b, "regularity_profile");
    if (k < 0) throw BracketError("regularity_profile: k must be nonnegative");
    RegularityProfile p;
    p.k = k;
    p.orders.reserve(static_cast<std::size_t>(b.degree()));
    std::function<void(const FormalBracket&, int)> walk = [&](const FormalBracket& s, int depth) {
        if (s.is_leaf()) {
            p.orders.push_back(depth + k);
        } else {
            walk(s.left(), depth + 1);
            walk(s.right(), depth + 1);
        }
    };
    walk(b, 0);
    return p;
}

long num_exponential_factors(const FormalBracket& b) {
    require_canonical(b, "num_exponential_factors");
    std::function<long(const FormalBracket&)> count = [&](const FormalBracket& s) -> long {
        if (s.is_leaf()) return 1;
        return 2 * (count(s.left()) + count(s.right()));
    };
    return count(b);
}

}  // namespace intb
