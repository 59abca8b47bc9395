#pragma once

// Deterministic automata and transducers over a doubled alphabet:
// language operations, lasso enumeration for the infinite-word language,
// and generator extraction for rational subgroups.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vf/words.hpp"

namespace vf::automata {

using words::Letter;
using words::ReducedWord;
using words::Word;

constexpr int kNoState = -1;

/// Deterministic automaton over a doubled alphabet. Transitions are a dense
/// (state, letter) table with kNoState for absent edges.
struct Dfa {
    int alphabet_size = 0;
    int initial = 0;
    std::vector<char> terminal;      // per state
    std::vector<int> next;           // state * alphabet_size + letter

    int state_count() const { return static_cast<int>(terminal.size()); }

    int add_state(bool is_terminal = false);
    int step(int q, Letter a) const {
        return next[static_cast<std::size_t>(q) * alphabet_size + static_cast<std::size_t>(a)];
    }
    void set_step(int q, Letter a, int to) {
        next[static_cast<std::size_t>(q) * alphabet_size + static_cast<std::size_t>(a)] = to;
    }
    /// State reached from q by w, or kNoState.
    int run(int q, const Word& w) const;
};

bool accepts(const Dfa& a, const Word& w);

/// Removes states not on a path initial -> terminal. Keeps the language.
Dfa trim(const Dfa& a);

/// Minimal automaton of the language, states numbered in BFS order from the
/// initial state (letters in numeric order), so equal languages give
/// identical structures.
Dfa minimize(const Dfa& a);

/// Product automaton, L = L(a) ∩ L(b).
Dfa intersect(const Dfa& a, const Dfa& b);

/// BFS relabel (deterministic numbering) without changing anything else.
Dfa canonicalize(const Dfa& a);

bool isomorphic(const Dfa& a, const Dfa& b);

/// Exactly { w in L(a) : |w| <= n }, in shortlex order of the numeric ranks.
std::vector<Word> enumerate_language(const Dfa& a, int n);

/// Like enumerate_language but restricted to freely reduced words.
std::vector<Word> enumerate_reduced_language(const Dfa& a, int n);

/// stem·cycle^ω, the label of an infinite path.
struct Lasso {
    Word stem;
    Word cycle;
    words::OmegaWord omega() const { return words::omega_canonicalize(stem, cycle); }
};

struct LassoSetResult {
    bool infinite = false;           // L_ω(a) is infinite
    std::vector<Lasso> lassos;       // exact set when finite, witnesses otherwise
    /// Canonical omega words of the lassos, deduplicated and sorted.
    std::vector<words::OmegaWord> omega_words() const;
};

/// Labels of all infinite paths from the initial state. When some reachable
/// cycle state has a second live out-edge the language is uncountable; the
/// result is flagged infinite and carries witness lassos (capped).
LassoSetResult lasso_set(const Dfa& a);

/// Deterministic transducer with total transition and output maps.
struct Transducer {
    int alphabet_size = 0;
    int initial = 0;
    int states = 0;
    std::vector<int> next;           // state * alphabet_size + letter
    std::vector<Word> output;        // same indexing

    int state_count() const { return states; }
    int step(int q, Letter a) const {
        return next[static_cast<std::size_t>(q) * alphabet_size + static_cast<std::size_t>(a)];
    }
    const Word& out(int q, Letter a) const {
        return output[static_cast<std::size_t>(q) * alphabet_size + static_cast<std::size_t>(a)];
    }
    int run(int q, const Word& w) const;
    /// Max output length over all edges.
    int max_output_length() const;
};

/// p --a|u--> q is an edge iff q --a⁻¹|u⁻¹--> p is.
bool is_inverse(const Transducer& t);

/// A transducer validated to have the inverse-edge property.
struct InverseTransducer {
    Transducer t;
    /// Throws NotInverseError when the property fails.
    static InverseTransducer checked(Transducer t);
};

/// Output of the unique run from the initial state.
Word transduce(const Transducer& t, const Word& u);

/// The map induced on the free group: free_reduce(transduce(g)). For inverse
/// transducers this is well defined on reduction classes.
ReducedWord induced_reduced(const InverseTransducer& t, const ReducedWord& g);

/// Callbacks tying automaton words to elements of an ambient group, for
/// generator extraction over a subgroup H.
template <typename Elem>
struct SubgroupOps {
    std::function<Elem(const Word&)> eval;             // accepted word -> element of H
    std::function<bool(const Elem&)> member;           // H-membership
    std::function<Elem(const Elem&, const Elem&)> mul;
    std::function<Elem(const Elem&)> inv;
    std::function<int(const Elem&)> norm;              // radius measure for bounded BFS
    std::function<std::string(const Elem&)> key;       // canonical key
    std::function<std::vector<Elem>(int)> ball;        // ambient ball for verification
    Elem identity;
};

struct SubgroupConfig {
    int verify_radius = 8;     // ball radius for the certification pass
    int slack = 4;             // BFS products may exceed the radius by this
    int length_bonus = 4;      // candidate words up to 2*|states| + bonus
    int stale_levels = 2;      // stop harvesting after this many silent levels
    int max_levels = 40;       // hard cap on harvest depth
    std::size_t level_cap = 20000;  // max candidate words per length level
};

template <typename Elem>
struct SubgroupResult {
    std::vector<Elem> generators;
    bool verified = false;           // every ball element of H is generated
    std::vector<Elem> missed;        // counterexamples when not verified
};

/// Finite generating set of H = eval(L(a)) (Anisimov–Seifert direction).
/// Candidates are harvested from accepted words in shortlex order and pruned
/// greedily against bounded-BFS membership in the span so far; the result is
/// certified against the ball enumeration. A failed certification is reported
/// in the result, never silently dropped.
template <typename Elem>
SubgroupResult<Elem> subgroup_generators(const std::vector<const Dfa*>& sources,
                                         const SubgroupOps<Elem>& ops,
                                         const SubgroupConfig& cfg);

template <typename Elem>
SubgroupResult<Elem> subgroup_generators(const Dfa& a, const SubgroupOps<Elem>& ops,
                                         const SubgroupConfig& cfg) {
    return subgroup_generators<Elem>(std::vector<const Dfa*>{&a}, ops, cfg);
}

/// Bounded-BFS span of a generating set: all products of gens and their
/// inverses whose norm never exceeds radius along the way. Keys returned.
template <typename Elem>
std::vector<Elem> bounded_span(const std::vector<Elem>& gens, const SubgroupOps<Elem>& ops,
                               int radius);

std::string to_dot(const Dfa& a, const words::InvAlphabet& alpha,
                   const std::string& name = "dfa");
std::string to_dot(const Transducer& t, const words::InvAlphabet& alpha,
                   const std::string& name = "transducer");

} // namespace vf::automata

#include "vf/automata_subgroup.ipp"
