#include "vf/gtfix.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>
#include <unordered_map>

#include "vf/errors.hpp"

namespace vf::gtfix {

using words::free_reduce;
using words::inverse;
using words::invert;

DefectState defect_state(const InverseTransducer& t, const ReducedWord& g) {
    Word w = invert(g.letters);
    Word img = transduce(t.t, g.letters);
    w.insert(w.end(), img.begin(), img.end());
    return DefectState{free_reduce(w), t.t.run(t.t.initial, g.letters)};
}

DefectState defect_step(const InverseTransducer& t, const DefectState& s, Letter a) {
    Word w;
    w.reserve(s.defect.size() + 4);
    w.push_back(inverse(a));
    w.insert(w.end(), s.defect.letters.begin(), s.defect.letters.end());
    const Word& lam = t.t.out(s.tstate, a);
    w.insert(w.end(), lam.begin(), lam.end());
    return DefectState{free_reduce(w), t.t.step(s.tstate, a)};
}

namespace {

struct DefectKey {
    std::size_t operator()(const std::pair<Word, int>& k) const {
        return words::WordHash{}(k.first) * 31 + static_cast<std::size_t>(k.second);
    }
};

struct Builder {
    const InverseTransducer& t;
    int alpha_size;
    int central_radius;

    std::vector<DefectState> states;
    std::unordered_map<std::pair<Word, int>, int, DefectKey> index;

    // (state, letter) -> (target, kind); later-retained walk edges override
    // nothing: central wins, then escape, then inverse.
    std::map<std::pair<int, Letter>, std::pair<int, EdgeKind>> edges;

    explicit Builder(const InverseTransducer& tr, int n)
        : t(tr), alpha_size(tr.t.alphabet_size), central_radius(n) {}

    int intern(const DefectState& s) {
        auto [it, fresh] = index.emplace(std::make_pair(s.defect.letters, s.tstate),
                                         static_cast<int>(states.size()));
        if (fresh) states.push_back(s);
        return it->second;
    }

    bool central(int id) const {
        return static_cast<int>(states[static_cast<std::size_t>(id)].defect.size()) <=
               central_radius;
    }

    void add_edge(int from, Letter a, int to, EdgeKind kind) {
        edges.emplace(std::make_pair(from, a), std::make_pair(to, kind));
    }
};

// A maximal compatible walk from a central state: forced letter = first
// letter of the defect, stops on a central edge, on re-entering the central
// zone, or when a state repeats (cycle).
struct Walk {
    int origin;
    std::vector<int> states;          // visited after origin
    std::vector<Letter> letters;      // letters taken, aligned with states
    bool resolved = false;            // cycle closed or walk stopped
};

void extend_walk(Builder& b, Walk& w, int limit) {
    int cur = w.states.empty() ? w.origin : w.states.back();
    std::unordered_map<int, int> on_walk;
    on_walk[w.origin] = 0;
    for (std::size_t i = 0; i < w.states.size(); ++i) on_walk[w.states[i]] = static_cast<int>(i) + 1;

    while (static_cast<int>(w.states.size()) < limit) {
        const DefectState& s = b.states[static_cast<std::size_t>(cur)];
        if (s.defect.empty()) { w.resolved = true; return; }
        Letter a = s.defect.letters.front();
        DefectState nxt = defect_step(b.t, s, a);
        bool edge_central = b.central(cur) &&
                            static_cast<int>(nxt.defect.size()) <= b.central_radius;
        if (edge_central) { w.resolved = true; return; }  // only a central edge leaves
        int nid = b.intern(nxt);
        w.states.push_back(nid);
        w.letters.push_back(a);
        if (on_walk.count(nid)) { w.resolved = true; return; }         // cycle closed
        on_walk[nid] = static_cast<int>(w.states.size());
        if (b.central(nid)) { w.resolved = true; return; }             // re-entered P'
        cur = nid;
    }
}

void retain_walk_prefix(Builder& b, const Walk& w, std::size_t count) {
    int prev = w.origin;
    for (std::size_t i = 0; i < count && i < w.states.size(); ++i) {
        Letter a = w.letters[i];
        int to = w.states[i];
        b.add_edge(prev, a, to, EdgeKind::Escape);
        b.add_edge(to, inverse(a), prev, EdgeKind::EscapeInverse);
        prev = to;
    }
}

} // namespace

GtAutomaton build_gt_automaton(const InverseTransducer& t, const Word& z, GtConfig cfg) {
    const ReducedWord zr = free_reduce(z);
    const int m = t.t.max_output_length();
    const int n = std::max(2 * m + 1, static_cast<int>(zr.size()));
    const int depth_bound = cfg.depth_bound > 0 ? cfg.depth_bound : 10 * n + 200;
    const int merge_horizon = cfg.merge_horizon > 0 ? cfg.merge_horizon : 4 * depth_bound;

    Builder b(t, n);
    GtAutomaton out;
    out.central_radius = n;
    out.max_output = m;

    // All central states: every reduced defect of length <= N paired with
    // every transducer state. A superset of the realizable ones; unrealizable
    // states are unreachable in the result and add no accepted words.
    {
        const std::size_t max_candidates = 4'000'000;
        std::vector<Word> level{{}};
        for (int len = 0; len <= n; ++len) {
            for (const Word& d : level)
                for (int q = 0; q < t.t.state_count(); ++q) {
                    ReducedWord rd;
                    rd.letters = d;
                    b.intern(DefectState{rd, q});
                }
            if (b.states.size() > max_candidates) {
                out.partial = true;
                break;
            }
            if (len == n) break;
            std::vector<Word> nxt;
            for (const Word& d : level)
                for (Letter a = 0; a < b.alpha_size; ++a) {
                    if (!d.empty() && a == inverse(d.back())) continue;
                    Word e = d;
                    e.push_back(a);
                    nxt.push_back(std::move(e));
                }
            level = std::move(nxt);
        }
    }
    const int central_count = static_cast<int>(b.states.size());

    // Central edges: both endpoints within the central radius.
    for (int id = 0; id < central_count; ++id) {
        for (Letter a = 0; a < b.alpha_size; ++a) {
            DefectState nxt = defect_step(t, b.states[static_cast<std::size_t>(id)], a);
            if (static_cast<int>(nxt.defect.size()) <= n)
                b.add_edge(id, a, b.intern(nxt), EdgeKind::Central);
        }
    }

    // Maximal compatible walks from every central state.
    std::vector<Walk> walks;
    for (int id = 0; id < central_count; ++id) {
        Walk w;
        w.origin = id;
        extend_walk(b, w, depth_bound);
        if (!w.states.empty() || !w.resolved) walks.push_back(std::move(w));
    }

    // Resolved walks (finitely many distinct edges) are retained whole, with
    // inverses. Unresolved walks are retained only up to pairwise merge
    // points, found by comparing state sets up to the merge horizon.
    std::vector<std::size_t> unresolved;
    for (std::size_t i = 0; i < walks.size(); ++i) {
        if (walks[i].resolved)
            retain_walk_prefix(b, walks[i], walks[i].states.size());
        else
            unresolved.push_back(i);
    }
    if (!unresolved.empty()) {
        for (std::size_t i : unresolved) extend_walk(b, walks[i], merge_horizon);
        // first-position index per walk
        auto positions = [&](const Walk& w) {
            std::unordered_map<int, std::size_t> pos;
            pos.emplace(w.origin, 0);
            for (std::size_t k = 0; k < w.states.size(); ++k) pos.emplace(w.states[k], k + 1);
            return pos;
        };
        std::vector<std::unordered_map<int, std::size_t>> pos_of(walks.size());
        for (std::size_t i = 0; i < walks.size(); ++i) pos_of[i] = positions(walks[i]);

        for (std::size_t i : unresolved) {
            for (std::size_t j = 0; j < walks.size(); ++j) {
                if (j == i) continue;
                // earliest state of walk i that walk j also visits
                std::size_t best_i = SIZE_MAX, best_j = SIZE_MAX;
                const auto& pj = pos_of[j];
                auto probe = [&](int state, std::size_t at_i) {
                    auto it = pj.find(state);
                    if (it != pj.end() && at_i < best_i) {
                        best_i = at_i;
                        best_j = it->second;
                    }
                };
                probe(walks[i].origin, 0);
                for (std::size_t k = 0; k < walks[i].states.size() && best_i == SIZE_MAX; ++k)
                    probe(walks[i].states[k], k + 1);
                if (best_i == SIZE_MAX) continue;
                retain_walk_prefix(b, walks[i], best_i);
                retain_walk_prefix(b, walks[j], best_j);
            }
        }
    }

    // Assemble the automaton over retained states.
    std::vector<char> retained(b.states.size(), 0);
    for (int id = 0; id < central_count; ++id) retained[static_cast<std::size_t>(id)] = 1;
    for (const auto& [key, val] : b.edges) {
        retained[static_cast<std::size_t>(key.first)] = 1;
        retained[static_cast<std::size_t>(val.first)] = 1;
    }
    std::vector<int> remap(b.states.size(), automata::kNoState);
    Dfa dfa;
    dfa.alphabet_size = b.alpha_size;
    for (std::size_t id = 0; id < b.states.size(); ++id) {
        if (!retained[id]) continue;
        remap[id] = dfa.add_state(b.states[id].defect == zr);
        out.state_info.push_back(b.states[id]);
    }
    dfa.initial = remap[static_cast<std::size_t>(
        b.index.at(std::make_pair(Word{}, t.t.initial)))];
    out.edge_kind.assign(static_cast<std::size_t>(dfa.state_count()) * b.alpha_size,
                         EdgeKind::Central);
    for (const auto& [key, val] : b.edges) {
        int from = remap[static_cast<std::size_t>(key.first)];
        int to = remap[static_cast<std::size_t>(val.first)];
        dfa.set_step(from, key.second, to);
        out.edge_kind[static_cast<std::size_t>(from) * b.alpha_size +
                      static_cast<std::size_t>(key.second)] = val.second;
    }
    out.dfa = std::move(dfa);
    out.completeness_horizon = out.partial ? 0 : std::min(depth_bound, merge_horizon);
    return out;
}

int GtAutomaton::find_state(const DefectState& s) const {
    for (int i = 0; i < static_cast<int>(state_info.size()); ++i)
        if (state_info[static_cast<std::size_t>(i)] == s) return i;
    return automata::kNoState;
}

std::vector<ReducedWord> gt_fixed_language(const GtAutomaton& b, int n) {
    if (b.partial || n > b.completeness_horizon)
        throw PartialAutomatonError(
            "automaton is only certified complete up to length " +
            std::to_string(b.completeness_horizon));
    std::vector<ReducedWord> out;
    for (auto& w : automata::enumerate_reduced_language(b.dfa, n)) {
        ReducedWord r;
        r.letters = std::move(w);
        out.push_back(std::move(r));
    }
    return out;
}

namespace {

void oracle_rec(const InverseTransducer& t, const ReducedWord& zr, int n, Word& g,
                int tstate, Word& image, std::vector<ReducedWord>& out) {
    // image holds the freely reduced transducer output of g.
    {
        // check: reduce(image) == reduce(g z)
        Word gz = g;
        gz.insert(gz.end(), zr.letters.begin(), zr.letters.end());
        if (free_reduce(gz).letters == image) {
            ReducedWord r;
            r.letters = g;
            out.push_back(r);
        }
    }
    if (static_cast<int>(g.size()) >= n) return;
    for (Letter a = 0; a < t.t.alphabet_size; ++a) {
        if (!g.empty() && a == inverse(g.back())) continue;
        const Word& lam = t.t.out(tstate, a);
        // append lam to image with incremental reduction, remembering undo info
        std::size_t popped = 0;
        Word popped_letters;
        std::size_t pushed = 0;
        for (Letter x : lam) {
            if (!image.empty() && image.back() == inverse(x)) {
                if (pushed > 0) {
                    --pushed;
                } else {
                    popped_letters.push_back(image.back());
                    ++popped;
                }
                image.pop_back();
            } else {
                image.push_back(x);
                ++pushed;
            }
        }
        g.push_back(a);
        oracle_rec(t, zr, n, g, t.t.step(tstate, a), image, out);
        g.pop_back();
        image.resize(image.size() - pushed);
        for (auto it = popped_letters.rbegin(); it != popped_letters.rend(); ++it)
            image.push_back(*it);
    }
}

} // namespace

std::vector<ReducedWord> brute_fixed_oracle(const InverseTransducer& t, const Word& z, int n) {
    std::vector<ReducedWord> out;
    Word g, image;
    oracle_rec(t, free_reduce(z), n, g, t.t.initial, image, out);
    std::sort(out.begin(), out.end(), [](const ReducedWord& x, const ReducedWord& y) {
        return x.letters.size() != y.letters.size() ? x.letters.size() < y.letters.size()
                                                    : x.letters < y.letters;
    });
    return out;
}

std::string to_dot(const GtAutomaton& b, const words::InvAlphabet& alpha,
                   const std::string& name) {
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=circle];\n";
    out << "  start [shape=point];\n  start -> s" << b.dfa.initial << ";\n";
    for (int q = 0; q < b.dfa.state_count(); ++q) {
        const auto& info = b.state_info[static_cast<std::size_t>(q)];
        out << "  s" << q << " [label=\"(" << words::format_word(alpha, info.defect.letters)
            << "," << info.tstate << ")\""
            << (b.dfa.terminal[static_cast<std::size_t>(q)] ? ", shape=doublecircle" : "")
            << "];\n";
    }
    for (int q = 0; q < b.dfa.state_count(); ++q)
        for (Letter l = 0; l < b.dfa.alphabet_size; ++l) {
            int to = b.dfa.step(q, l);
            if (to == automata::kNoState) continue;
            EdgeKind kind = b.edge_kind[static_cast<std::size_t>(q) * b.dfa.alphabet_size +
                                        static_cast<std::size_t>(l)];
            out << "  s" << q << " -> s" << to << " [label=\"" << alpha.name(l) << "\""
                << (kind == EdgeKind::Central ? "" : ", style=dashed") << "];\n";
        }
    out << "}\n";
    return out.str();
}

} // namespace vf::gtfix
