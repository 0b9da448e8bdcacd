#pragma once

// Formal iterated brackets over the indeterminates X1, X2, ...
//
// A FormalBracket is an immutable binary tree whose leaves carry a positive
// letter index. Concrete syntax:
//
//     bracket := "X" <int> | "[" bracket "," bracket "]"
//
// with whitespace ignored everywhere.

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace intb {

/// Syntax error raised by parse(); carries the byte offset of the offending input.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A bracket was used outside the domain of an operation (e.g. a
/// non-canonical input to shift()).
class BracketError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One step of an AST path: descend into the left or right factor.
enum class Side : unsigned char { Left, Right };
using BracketPath = std::vector<Side>;

class FormalBracket {
public:
    static FormalBracket leaf(int index);
    static FormalBracket node(FormalBracket left, FormalBracket right);

    bool is_leaf() const noexcept;
    /// Letter index of a leaf. Throws BracketError on a node.
    int index() const;
    /// Factors of a node. Throw BracketError on a leaf.
    const FormalBracket& left() const;
    const FormalBracket& right() const;

    int degree() const noexcept;
    /// Letter sequence: leaf indices in left-to-right order.
    std::vector<int> letters() const;

    bool is_canonical() const;
    /// The shift mu >= 0 with letters() == (1+mu, ..., m+mu), if any.
    std::optional<int> semicanonical_shift() const;
    bool is_semicanonical() const { return semicanonical_shift().has_value(); }

    /// The occurrence addressed by `path`. Throws BracketError if the path
    /// leaves the tree.
    const FormalBracket& at(const BracketPath& path) const;
    /// Paths of every subbracket occurrence, in pre-order.
    std::vector<BracketPath> occurrences() const;

    friend bool operator==(const FormalBracket& a, const FormalBracket& b);

private:
    struct Node;
    explicit FormalBracket(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct CanonicalFactorization {
    FormalBracket left;   ///< canonical, degree m1
    FormalBracket right;  ///< canonical; shift(right, m1) is the right factor of B
    int m1;
};

/// Per-slot regularity orders Delta_j(B) + k for a canonical B.
struct RegularityProfile {
    std::vector<int> orders;  ///< orders[j-1] = Delta_j(B) + k
    int k = 0;
};

FormalBracket parse(std::string_view text);
std::string render(const FormalBracket& b);

FormalBracket shift(const FormalBracket& b, int mu);
CanonicalFactorization canonical_factorization(const FormalBracket& b);

/// Number of differentiations Delta(S;B) of the occurrence S at `path` in a
/// semicanonical B.
int delta(const BracketPath& path, const FormalBracket& b);
/// Delta_j(B) = Delta(X_j;B) for the j-th letter (1-based) of a canonical B.
int delta_slot(const FormalBracket& b, int j);

RegularityProfile regularity_profile(const FormalBracket& b, int k = 0);

/// Number of exponential factors in the multiflow word of a canonical B.
long num_exponential_factors(const FormalBracket& b);

}  // namespace intb
