#pragma once

// Virtually free groups as free-by-finite data: normal-form arithmetic over
// the coset decomposition, endomorphism validation, the derived inverse
// transducer, and the fixed-subgroup pipeline.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vf/automata.hpp"
#include "vf/gtfix.hpp"
#include "vf/words.hpp"

namespace vf::group {

using words::InvAlphabet;
using words::Letter;
using words::ReducedWord;
using words::Word;

/// Group element in the normal form (w)·b_i with w reduced over the free
/// basis and i a coset index. The representation is unique.
struct Element {
    ReducedWord w;
    int coset = 0;

    bool operator==(const Element& o) const { return coset == o.coset && w == o.w; }
    bool operator!=(const Element& o) const { return !(*this == o); }
    bool is_identity() const { return coset == 0 && w.empty(); }
};

struct ElementHash {
    std::size_t operator()(const Element& e) const {
        return words::WordHash{}(e.w.letters) * 1000003 + static_cast<std::size_t>(e.coset);
    }
};

std::string element_key(const Element& e);

/// Free-by-finite data: G = F b_0 ∪ F b_1 ∪ ... ∪ F b_m with F free on
/// free_alphabet and b_0 = 1.
struct VfPresentation {
    InvAlphabet free_alphabet;
    int coset_count = 1;

    /// conj[i][x] = reduced word of b_i x b_i⁻¹, for every doubled letter x.
    /// Input files give it for base letters; inverses are derived.
    std::vector<std::vector<ReducedWord>> conj;

    struct CosetProduct {
        ReducedWord f;   // free part of b_i b_j
        int coset = 0;   // index of b_{mu(i,j)}
    };
    std::vector<std::vector<CosetProduct>> mult;   // [i][j]

    /// The user's generating alphabet and the images of its base letters.
    InvAlphabet external_alphabet;
    std::vector<Element> generator_images;   // per external base letter

    /// Coset index with mu(i, inv) = 0 (filled by validate_presentation).
    std::vector<int> coset_inverse;

    Element identity() const { return Element{}; }
    /// Image of one (possibly inverse) external letter.
    Element generator_image(Letter external) const;
};

/// Letterwise extension of conj[i] applied to a word, freely reduced.
ReducedWord conj_apply(const VfPresentation& p, int i, const Word& w);

Element multiply(const VfPresentation& p, const Element& g, const Element& h);
Element invert_elem(const VfPresentation& p, const Element& g);

/// Image of a word over the external alphabet under the matched epimorphism.
Element eval_word(const VfPresentation& p, const Word& external_word);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks the coset identity/inverse axioms, the associativity of the coset
/// tables (cocycle conditions), and that each conj[i] is invertible on F.
/// Fills coset_inverse on success.
ValidationReport validate_presentation(VfPresentation& p);

/// An endomorphism, given by images of the free base letters and of the coset
/// representatives. Images of inverse letters are derived.
struct Endomorphism {
    std::vector<Element> free_images;    // per free base letter
    std::vector<Element> coset_images;   // per coset; index 0 must be identity
};

Element apply_endo(const VfPresentation& p, const Endomorphism& phi, const Element& g);

/// Image of a word over the free doubled alphabet.
Element apply_endo_word(const VfPresentation& p, const Endomorphism& phi, const Word& w);

/// Derives the transducer of the endomorphism: states are cosets, started at
/// coset 0, with b_i (a phi) = h_{i,a} b_{delta(i,a)}; outputs are the
/// reduced h words. Inverse by construction for valid endomorphisms.
automata::Transducer derive_transducer(const VfPresentation& p, const Endomorphism& phi);

/// Acceptor A_j of words whose delta-run from coset 0 ends at j.
automata::Dfa coset_acceptor(const VfPresentation& p, const automata::Transducer& t, int j);

/// Verifies that phi respects the defining relations of the presentation and
/// that the derived transducer is inverse.
ValidationReport validate_endomorphism(const VfPresentation& p, const Endomorphism& phi);

struct FixConfig {
    gtfix::GtConfig gt;
    automata::SubgroupConfig subgroup;
    int oracle_radius = 8;   // brute-force certification radius
};

struct FixSubgroupReport {
    /// Coset pairs (i, j) with b_j (b_i phi) in F b_i, and the free parts z.
    std::vector<std::pair<int, int>> pairs;
    std::vector<ReducedWord> z_words;              // aligned with pairs
    std::vector<gtfix::GtAutomaton> gt_automata;   // aligned with pairs
    std::vector<automata::Dfa> section_automata;   // X_{i,j}, aligned
    std::vector<Element> generators;
    bool partial = false;
    bool verified = false;
    std::vector<Element> missed;
};

/// The full pipeline: Y and z by evaluation, one fixed-equation automaton per
/// pair, intersection with the coset acceptor, generator extraction certified
/// against the brute-force oracle ball.
FixSubgroupReport fix_subgroup(const VfPresentation& p, const Endomorphism& phi,
                               const FixConfig& cfg = {});

/// All g with |g.w| <= n and phi(g) = g, by exhaustive scan.
std::vector<Element> brute_fix_oracle(const VfPresentation& p, const Endomorphism& phi, int n);

/// All elements with free part of length <= n (every coset).
std::vector<Element> ball_elements(const VfPresentation& p, int n);

std::string format_element(const VfPresentation& p, const Element& e);

} // namespace vf::group
