#pragma once

// Involutive alphabets, finite words, eventually periodic infinite words,
// free reduction, the shortlex order and the prefix ultrametric.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vf::words {

using Letter = std::int32_t;

/// A finite word over a doubled alphabet A ∪ A⁻¹.
using Word = std::vector<Letter>;

// Letters are interned small integers: base letter k is encoded as 2k and its
// formal inverse as 2k+1, so the involution does not depend on the alphabet
// instance.
constexpr Letter inverse(Letter a) { return a ^ 1; }
constexpr bool is_inverse_letter(Letter a) { return (a & 1) != 0; }
constexpr Letter base_letter(Letter k) { return k << 1; }

/// A doubled alphabet with a total order used for shortlex comparisons.
/// Base letters print as their name, inverses with a "^-1" suffix.
class InvAlphabet {
public:
    InvAlphabet() = default;

    /// Alphabet from base-letter names, ordered a < a^-1 < b < b^-1 < ...
    /// in declaration order.
    explicit InvAlphabet(const std::vector<std::string>& base_names);

    /// Alphabet with an explicit total order on the doubled alphabet, given
    /// as a permutation of all 2n letter tokens (e.g. "a", "c", "a^-1", ...).
    static InvAlphabet with_order(const std::vector<std::string>& base_names,
                                  const std::vector<std::string>& order_tokens);

    int base_size() const { return static_cast<int>(names_.size()) / 2; }
    int size() const { return static_cast<int>(names_.size()); }

    /// Position of the letter in the shortlex order.
    int rank(Letter a) const { return rank_[static_cast<std::size_t>(a)]; }

    /// Letters of the doubled alphabet sorted by rank.
    const std::vector<Letter>& ordered_letters() const { return by_rank_; }

    const std::string& name(Letter a) const { return names_[static_cast<std::size_t>(a)]; }

    /// Letter for a token such as "a" or "a^-1"; throws UnknownLetterError.
    Letter letter(const std::string& token) const;
    std::optional<Letter> try_letter(const std::string& token) const;

private:
    std::vector<std::string> names_;   // index = letter
    std::vector<int> rank_;            // index = letter
    std::vector<Letter> by_rank_;
};

bool is_reduced(const Word& w);

/// A word with no factor a·a⁻¹; the canonical representative of its class in
/// the free group.
struct ReducedWord {
    Word letters;

    ReducedWord() = default;
    explicit ReducedWord(Word w);   // asserts reducedness

    std::size_t size() const { return letters.size(); }
    bool empty() const { return letters.empty(); }
    bool operator==(const ReducedWord& o) const { return letters == o.letters; }
    bool operator!=(const ReducedWord& o) const { return letters != o.letters; }
};

/// Removes a·a⁻¹ factors until none remain. Independent of removal order.
ReducedWord free_reduce(const Word& w);

/// Reversed word of inverted letters; invert(invert(w)) == w.
Word invert(const Word& w);

/// Reduced product of reduced (or arbitrary) words.
ReducedWord reduced_product(const Word& u, const Word& v);

/// Shortlex: length first, then lexicographic by alphabet rank.
bool shortlex_less(const InvAlphabet& alpha, const Word& u, const Word& v);

/// An eventually periodic right-infinite word, stored in canonical form:
/// the period is primitive and the preperiod is minimal.
struct OmegaWord {
    Word preperiod;
    Word period;      // nonempty

    Letter at(std::size_t i) const;
    bool operator==(const OmegaWord& o) const {
        return preperiod == o.preperiod && period == o.period;
    }
    bool operator!=(const OmegaWord& o) const { return !(*this == o); }

    /// Prefix of length n.
    Word prefix(std::size_t n) const;
};

/// Canonicalizes preperiod·period^ω. Throws Error on empty period.
OmegaWord omega_canonicalize(Word preperiod, Word period);

/// A finite or eventually periodic infinite word.
using AnyWord = std::variant<Word, OmegaWord>;

std::size_t length_or_max(const AnyWord& a);   // SIZE_MAX for infinite

/// |α ∧ β|; nullopt when α = β is infinite (the meet is the word itself).
std::optional<std::size_t> common_prefix_length(const AnyWord& a, const AnyWord& b);

/// The longest common prefix α ∧ β (α itself when α = β is infinite).
AnyWord common_prefix(const AnyWord& a, const AnyWord& b);

/// d₃(α,β) = 2^(−|α∧β|), 0 iff α = β. An ultrametric.
double d3(const AnyWord& a, const AnyWord& b);

// Token syntax: whitespace-separated generator names, "^-1" suffix for
// inverses. The empty word prints as "1".
std::string format_word(const InvAlphabet& alpha, const Word& w);
std::string format_omega(const InvAlphabet& alpha, const OmegaWord& w);
Word parse_word(const InvAlphabet& alpha, const std::string& text);

struct WordHash {
    std::size_t operator()(const Word& w) const;
};

} // namespace vf::words
