#pragma once

// The fixed-equation automaton for an inverse transducer: given inverse T and
// a target z in the free group, builds a finite automaton whose reduced
// accepted words are exactly { g : T̃(g) = g·z }, together with a brute-force
// oracle used to certify it at desk scale.

#include <cstddef>
#include <string>
#include <vector>

#include "vf/automata.hpp"
#include "vf/words.hpp"

namespace vf::gtfix {

using automata::Dfa;
using automata::InverseTransducer;
using words::Letter;
using words::ReducedWord;
using words::Word;

/// Tracking state of the construction: the discrepancy g⁻¹·T̃(g) between a
/// word and its image, plus the transducer state reached by g.
struct DefectState {
    ReducedWord defect;   // g⁻¹ · T̃(g), reduced
    int tstate = 0;       // transducer state after g

    bool operator==(const DefectState& o) const {
        return tstate == o.tstate && defect == o.defect;
    }
};

/// Defect state of a reduced word, computed from scratch.
DefectState defect_state(const InverseTransducer& t, const ReducedWord& g);

/// One-letter extension: defect' = reduce(a⁻¹ · defect · λ(q,a)), q' = δ(q,a).
/// Agrees with defect_state(g·a) whenever s = defect_state(g).
DefectState defect_step(const InverseTransducer& t, const DefectState& s, Letter a);

struct GtConfig {
    int depth_bound = 0;     // 0: use 10*N + 200
    int merge_horizon = 0;   // 0: use 4*depth_bound
};

enum class EdgeKind { Central, Escape, EscapeInverse };

/// The finite subautomaton recognizing representatives of the fixed-equation
/// language. Sound unconditionally (every accepted reduced word satisfies the
/// equation); complete for words up to completeness_horizon.
struct GtAutomaton {
    Dfa dfa;
    std::vector<DefectState> state_info;        // per dfa state
    std::vector<EdgeKind> edge_kind;            // per (state, letter) with an edge
    int central_radius = 0;                     // N
    int max_output = 0;                         // M
    int completeness_horizon = 0;
    bool partial = false;                       // some walk or merge was truncated

    int find_state(const DefectState& s) const; // kNoState when absent
};

/// Builds the automaton: central closure, escape-path walks with cycle
/// detection, pairwise merge segments, inverse edges; terminals are states
/// with defect == reduce(z).
GtAutomaton build_gt_automaton(const InverseTransducer& t, const Word& z, GtConfig cfg = {});

/// Reduced accepted words of length <= n. Throws PartialAutomatonError when n
/// exceeds the automaton's certified completeness horizon.
std::vector<ReducedWord> gt_fixed_language(const GtAutomaton& b, int n);

/// Exhaustive scan: all reduced g with |g| <= n and T̃(g) = reduce(g·z).
std::vector<ReducedWord> brute_fixed_oracle(const InverseTransducer& t, const Word& z, int n);

std::string to_dot(const GtAutomaton& b, const words::InvAlphabet& alpha,
                   const std::string& name = "gt");

} // namespace vf::gtfix
