#pragma once

// Sections of the pipeline dealing with the word metric: Cayley-ball
// enumeration, shortlex normal forms over the external alphabet, the
// normal-form rewriting system, the word acceptor, boundary points, the
// Gromov product and the left action on the boundary.

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vf/automata.hpp"
#include "vf/group.hpp"
#include "vf/words.hpp"

namespace vf::geodesic {

using group::Element;
using group::ElementHash;
using group::VfPresentation;
using words::Letter;
using words::OmegaWord;
using words::ReducedWord;
using words::Word;

/// The radius-R ball of the Cayley graph with exact geodesic lengths and
/// shortlex normal forms; nf assignment by shortlex-ordered BFS, so every
/// prefix of a normal form is itself a normal form.
struct Ball {
    int radius = 0;
    struct Entry {
        Word nf;
        int d1 = 0;
    };
    std::unordered_map<Element, Entry, ElementHash> table;
    /// Per distance, (nf, element) in shortlex order.
    std::vector<std::vector<std::pair<Word, Element>>> levels;

    bool contains(const Element& e) const { return table.count(e) != 0; }
    const Entry& at(const Element& e) const;
    /// All normal forms up to the given length (whole ball by default).
    std::vector<Word> language(int max_len = -1) const;
};

Ball build_ball(const VfPresentation& p, int radius);

/// Shortlex-minimal geodesic word for g. Throws OutOfBallError.
ReducedWord normal_form(const Ball& b, const Element& g);

struct GeoConstants {
    int fellow_traveller = 0;   // K0
    int geodesic_defect = 1;    // N0
    int rule_length_cap = 0;    // K0*N0 + 1
    int certified_radius = 0;   // scan radius of the certification
};

/// Smallest fellow-traveller and single-letter-defect constants with no
/// counterexample among geodesics within the scan radius (0: pick from the
/// ball radius). Certified-to-radius estimates, not global proofs.
GeoConstants estimate_constants(const VfPresentation& p, const Ball& b, int scan_radius = 0);

struct Rule {
    Word lhs;
    Word rhs;
};

struct RewritingSystem {
    std::vector<Rule> rules;
    int max_lhs = 0;
    std::unordered_map<Word, Word, words::WordHash> by_lhs;

    void add(Word lhs, Word rhs);
};

/// Rules (u, nf(u)) for every external word of length <= cap with u != nf(u).
RewritingSystem build_rewriting(const VfPresentation& p, const Ball& b, int cap);

/// Rewrites to the unique irreducible word (leftmost suffix strategy; the
/// result is policy-independent once the system is confluent).
Word rewrite_nf(const RewritingSystem& rs, const Word& w);

struct ConfluenceReport {
    bool confluent = true;
    std::vector<std::pair<Word, Word>> divergences;   // irreconcilable reducts
    int critical_pairs = 0;
    int words_checked = 0;
};

/// Critical-pair analysis (complete local-confluence test) plus an exhaustive
/// one-step-reduct check over all words up to word_check_len.
ConfluenceReport check_confluence(const RewritingSystem& rs, const VfPresentation& p,
                                  int word_check_len = 5);

struct AcceptorResult {
    automata::Dfa dfa;
    bool stable = true;               // radius R and R-1 data gave isomorphic automata
    automata::Dfa previous;           // the R-1 automaton when unstable
};

/// Word acceptor of the normal-form language, built from right-extension
/// profiles truncated at depth radius/2, with an R-1 stabilization check.
AcceptorResult build_acceptor(const VfPresentation& p, const Ball& b);

/// Lassos of the acceptor: the boundary points of the group.
automata::LassoSetResult boundary_points(const automata::Dfa& acceptor);

/// Everything the later sections need in one bundle.
struct GeoContext {
    const VfPresentation* pres = nullptr;
    Ball ball;
    GeoConstants consts;
    RewritingSystem rewriting;
    automata::Dfa acceptor;
    bool acceptor_stable = true;
    /// Shortlex-normal external words for each free letter and coset, used to
    /// spell arbitrary elements when they fall outside the ball.
    std::vector<Word> free_letter_word;   // per free doubled letter
    std::vector<Word> coset_word;         // per coset
};

GeoContext make_context(const VfPresentation& p, int radius, int scan_radius = 0);

/// Normal form of an arbitrary element: ball lookup when possible, otherwise
/// spell through the section words and rewrite.
Word nf_of_element(const GeoContext& ctx, const Element& e);

/// d1(g, h) = |nf(g^-1 h)|; computed through the rewriting route when the
/// difference leaves the ball.
int distance(const GeoContext& ctx, const Element& g, const Element& h);

/// (g|h) with basepoint 1, from exact geodesic distances. Half-integer.
double gromov_product(const GeoContext& ctx, const Element& g, const Element& h);

struct LeftTranslateConfig {
    int max_steps = 0;       // 0: derived from the radius and period
};

/// The continuous left action on the boundary: the limit of nf(u·α^[n]),
/// detected through certified stable prefixes and the boundary lassos.
OmegaWord left_translate(const GeoContext& ctx, const Word& u, const OmegaWord& alpha,
                         LeftTranslateConfig cfg = {});

/// Evaluation of a (finite) external word, prefix of an omega word, etc.
Element eval_prefix(const VfPresentation& p, const OmegaWord& alpha, std::size_t n);

// Ball persistence: a small text cache keyed by the group digest and radius.
std::string ball_cache_key(const std::string& group_file_bytes, int radius);
void save_ball(const Ball& b, const std::string& path);
std::optional<Ball> load_ball(const VfPresentation& p, const std::string& path);

} // namespace vf::geodesic
