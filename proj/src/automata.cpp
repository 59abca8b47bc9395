#include "vf/automata.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "vf/errors.hpp"

namespace vf::automata {

int Dfa::add_state(bool is_terminal) {
    terminal.push_back(is_terminal ? 1 : 0);
    next.resize(terminal.size() * static_cast<std::size_t>(alphabet_size), kNoState);
    return static_cast<int>(terminal.size()) - 1;
}

int Dfa::run(int q, const Word& w) const {
    for (Letter a : w) {
        if (q == kNoState) return kNoState;
        q = step(q, a);
    }
    return q;
}

bool accepts(const Dfa& a, const Word& w) {
    int q = a.run(a.initial, w);
    return q != kNoState && a.terminal[static_cast<std::size_t>(q)];
}

namespace {

std::vector<char> reachable_from_initial(const Dfa& a) {
    std::vector<char> seen(a.state_count(), 0);
    std::deque<int> queue{a.initial};
    seen[static_cast<std::size_t>(a.initial)] = 1;
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (Letter l = 0; l < a.alphabet_size; ++l) {
            int to = a.step(q, l);
            if (to != kNoState && !seen[static_cast<std::size_t>(to)]) {
                seen[static_cast<std::size_t>(to)] = 1;
                queue.push_back(to);
            }
        }
    }
    return seen;
}

std::vector<char> coreachable_to_terminal(const Dfa& a) {
    std::vector<std::vector<int>> rev(a.state_count());
    for (int q = 0; q < a.state_count(); ++q)
        for (Letter l = 0; l < a.alphabet_size; ++l) {
            int to = a.step(q, l);
            if (to != kNoState) rev[static_cast<std::size_t>(to)].push_back(q);
        }
    std::vector<char> seen(a.state_count(), 0);
    std::deque<int> queue;
    for (int q = 0; q < a.state_count(); ++q)
        if (a.terminal[static_cast<std::size_t>(q)]) {
            seen[static_cast<std::size_t>(q)] = 1;
            queue.push_back(q);
        }
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (int p : rev[static_cast<std::size_t>(q)])
            if (!seen[static_cast<std::size_t>(p)]) {
                seen[static_cast<std::size_t>(p)] = 1;
                queue.push_back(p);
            }
    }
    return seen;
}

Dfa restrict_to(const Dfa& a, const std::vector<char>& keep) {
    Dfa out;
    out.alphabet_size = a.alphabet_size;
    std::vector<int> remap(a.state_count(), kNoState);
    for (int q = 0; q < a.state_count(); ++q)
        if (keep[static_cast<std::size_t>(q)])
            remap[static_cast<std::size_t>(q)] = out.add_state(a.terminal[static_cast<std::size_t>(q)]);
    if (remap[static_cast<std::size_t>(a.initial)] == kNoState) {
        // Empty language: single non-terminal initial state.
        out.initial = out.add_state(false);
        return out;
    }
    out.initial = remap[static_cast<std::size_t>(a.initial)];
    for (int q = 0; q < a.state_count(); ++q) {
        if (remap[static_cast<std::size_t>(q)] == kNoState) continue;
        for (Letter l = 0; l < a.alphabet_size; ++l) {
            int to = a.step(q, l);
            if (to != kNoState && remap[static_cast<std::size_t>(to)] != kNoState)
                out.set_step(remap[static_cast<std::size_t>(q)], l, remap[static_cast<std::size_t>(to)]);
        }
    }
    return out;
}

} // namespace

Dfa trim(const Dfa& a) {
    auto fwd = reachable_from_initial(a);
    auto bwd = coreachable_to_terminal(a);
    std::vector<char> keep(a.state_count());
    for (int q = 0; q < a.state_count(); ++q)
        keep[static_cast<std::size_t>(q)] =
            fwd[static_cast<std::size_t>(q)] && bwd[static_cast<std::size_t>(q)];
    return restrict_to(a, keep);
}

Dfa canonicalize(const Dfa& a) {
    std::vector<int> order(a.state_count(), kNoState);
    int count = 0;
    std::deque<int> queue{a.initial};
    order[static_cast<std::size_t>(a.initial)] = count++;
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (Letter l = 0; l < a.alphabet_size; ++l) {
            int to = a.step(q, l);
            if (to != kNoState && order[static_cast<std::size_t>(to)] == kNoState) {
                order[static_cast<std::size_t>(to)] = count++;
                queue.push_back(to);
            }
        }
    }
    Dfa out;
    out.alphabet_size = a.alphabet_size;
    out.initial = 0;
    out.terminal.assign(static_cast<std::size_t>(count), 0);
    out.next.assign(static_cast<std::size_t>(count) * a.alphabet_size, kNoState);
    for (int q = 0; q < a.state_count(); ++q) {
        int nq = order[static_cast<std::size_t>(q)];
        if (nq == kNoState) continue;  // unreachable states are dropped
        out.terminal[static_cast<std::size_t>(nq)] = a.terminal[static_cast<std::size_t>(q)];
        for (Letter l = 0; l < a.alphabet_size; ++l) {
            int to = a.step(q, l);
            if (to != kNoState) out.set_step(nq, l, order[static_cast<std::size_t>(to)]);
        }
    }
    return out;
}

bool isomorphic(const Dfa& a, const Dfa& b) {
    Dfa ca = canonicalize(a), cb = canonicalize(b);
    return ca.alphabet_size == cb.alphabet_size && ca.terminal == cb.terminal &&
           ca.next == cb.next && ca.initial == cb.initial;
}

Dfa minimize(const Dfa& a0) {
    Dfa a = trim(a0);
    const int n = a.state_count();
    const int sink = n;  // implicit dead state completing the partial map

    // Moore partition refinement over the completed automaton.
    std::vector<int> cls(static_cast<std::size_t>(n) + 1);
    for (int q = 0; q < n; ++q) cls[static_cast<std::size_t>(q)] = a.terminal[static_cast<std::size_t>(q)] ? 1 : 0;
    cls[static_cast<std::size_t>(sink)] = 0;

    auto step_c = [&](int q, Letter l) {
        if (q == sink) return sink;
        int to = a.step(q, l);
        return to == kNoState ? sink : to;
    };

    while (true) {
        std::map<std::vector<int>, int> sig_to_class;
        std::vector<int> next_cls(static_cast<std::size_t>(n) + 1);
        for (int q = 0; q <= n; ++q) {
            std::vector<int> sig{cls[static_cast<std::size_t>(q)]};
            for (Letter l = 0; l < a.alphabet_size; ++l)
                sig.push_back(cls[static_cast<std::size_t>(step_c(q, l))]);
            auto [it, _] = sig_to_class.emplace(std::move(sig), static_cast<int>(sig_to_class.size()));
            next_cls[static_cast<std::size_t>(q)] = it->second;
        }
        if (next_cls == cls) break;
        cls = std::move(next_cls);
    }

    const int sink_cls = cls[static_cast<std::size_t>(sink)];
    std::map<int, int> remap;  // class -> new state
    Dfa out;
    out.alphabet_size = a.alphabet_size;
    for (int q = 0; q < n; ++q) {
        int c = cls[static_cast<std::size_t>(q)];
        if (c == sink_cls) continue;
        if (!remap.count(c)) remap[c] = out.add_state(a.terminal[static_cast<std::size_t>(q)]);
    }
    if (n == 0 || !remap.count(cls[static_cast<std::size_t>(a.initial)])) {
        Dfa empty;
        empty.alphabet_size = a0.alphabet_size;
        empty.initial = empty.add_state(false);
        return empty;
    }
    out.initial = remap[cls[static_cast<std::size_t>(a.initial)]];
    for (int q = 0; q < n; ++q) {
        int c = cls[static_cast<std::size_t>(q)];
        if (c == sink_cls) continue;
        for (Letter l = 0; l < a.alphabet_size; ++l) {
            int to = a.step(q, l);
            if (to == kNoState) continue;
            int tc = cls[static_cast<std::size_t>(to)];
            if (tc == sink_cls) continue;
            out.set_step(remap[c], l, remap[tc]);
        }
    }
    return canonicalize(out);
}

Dfa intersect(const Dfa& a, const Dfa& b) {
    assert(a.alphabet_size == b.alphabet_size);
    Dfa out;
    out.alphabet_size = a.alphabet_size;
    std::map<std::pair<int, int>, int> index;
    std::deque<std::pair<int, int>> queue;
    auto intern = [&](int p, int q) {
        auto [it, fresh] = index.emplace(std::make_pair(p, q), static_cast<int>(index.size()));
        if (fresh) {
            out.add_state(a.terminal[static_cast<std::size_t>(p)] &&
                          b.terminal[static_cast<std::size_t>(q)]);
            queue.emplace_back(p, q);
        }
        return it->second;
    };
    out.initial = intern(a.initial, b.initial);
    while (!queue.empty()) {
        auto [p, q] = queue.front();
        queue.pop_front();
        int from = index[{p, q}];
        for (Letter l = 0; l < a.alphabet_size; ++l) {
            int pa = a.step(p, l), qb = b.step(q, l);
            if (pa == kNoState || qb == kNoState) continue;
            out.set_step(from, l, intern(pa, qb));
        }
    }
    return out;
}

namespace {

void enumerate_rec(const Dfa& a, int q, Word& w, int n, bool reduced_only,
                   std::vector<Word>& out) {
    if (a.terminal[static_cast<std::size_t>(q)]) out.push_back(w);
    if (static_cast<int>(w.size()) >= n) return;
    for (Letter l = 0; l < a.alphabet_size; ++l) {
        if (reduced_only && !w.empty() && l == words::inverse(w.back())) continue;
        int to = a.step(q, l);
        if (to == kNoState) continue;
        w.push_back(l);
        enumerate_rec(a, to, w, n, reduced_only, out);
        w.pop_back();
    }
}

} // namespace

std::vector<Word> enumerate_language(const Dfa& a, int n) {
    std::vector<Word> out;
    Word w;
    enumerate_rec(a, a.initial, w, n, false, out);
    std::stable_sort(out.begin(), out.end(), [](const Word& x, const Word& y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    return out;
}

std::vector<Word> enumerate_reduced_language(const Dfa& a, int n) {
    std::vector<Word> out;
    Word w;
    enumerate_rec(a, a.initial, w, n, true, out);
    std::stable_sort(out.begin(), out.end(), [](const Word& x, const Word& y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    return out;
}

std::vector<words::OmegaWord> LassoSetResult::omega_words() const {
    std::vector<words::OmegaWord> out;
    for (const auto& l : lassos) out.push_back(l.omega());
    std::sort(out.begin(), out.end(), [](const words::OmegaWord& x, const words::OmegaWord& y) {
        if (x.preperiod != y.preperiod) return x.preperiod < y.preperiod;
        return x.period < y.period;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// Tarjan SCC; returns component index per state.
struct SccResult {
    std::vector<int> comp;
    int count = 0;
};

SccResult scc(const Dfa& a) {
    const int n = a.state_count();
    SccResult r;
    r.comp.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> low(static_cast<std::size_t>(n)), num(static_cast<std::size_t>(n), -1);
    std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    int counter = 0;

    struct Frame { int q; Letter l; };
    for (int root = 0; root < n; ++root) {
        if (num[static_cast<std::size_t>(root)] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        num[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = 1;
        while (!frames.empty()) {
            auto& [q, l] = frames.back();
            if (l < a.alphabet_size) {
                int to = a.step(q, l++);
                if (to == kNoState) continue;
                if (num[static_cast<std::size_t>(to)] == -1) {
                    num[static_cast<std::size_t>(to)] = low[static_cast<std::size_t>(to)] = counter++;
                    stack.push_back(to);
                    on_stack[static_cast<std::size_t>(to)] = 1;
                    frames.push_back({to, 0});
                } else if (on_stack[static_cast<std::size_t>(to)]) {
                    low[static_cast<std::size_t>(q)] =
                        std::min(low[static_cast<std::size_t>(q)], num[static_cast<std::size_t>(to)]);
                }
            } else {
                if (low[static_cast<std::size_t>(q)] == num[static_cast<std::size_t>(q)]) {
                    while (true) {
                        int s = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(s)] = 0;
                        r.comp[static_cast<std::size_t>(s)] = r.count;
                        if (s == q) break;
                    }
                    ++r.count;
                }
                int done = q;
                frames.pop_back();
                if (!frames.empty()) {
                    int parent = frames.back().q;
                    low[static_cast<std::size_t>(parent)] = std::min(
                        low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(done)]);
                }
            }
        }
    }
    return r;
}

} // namespace

LassoSetResult lasso_set(const Dfa& a) {
    LassoSetResult result;
    const int n = a.state_count();
    if (n == 0) return result;

    // States on a cycle: nontrivial SCC or a self-loop.
    auto s = scc(a);
    std::vector<int> comp_size(static_cast<std::size_t>(s.count), 0);
    for (int q = 0; q < n; ++q) ++comp_size[static_cast<std::size_t>(s.comp[static_cast<std::size_t>(q)])];
    std::vector<char> on_cycle(static_cast<std::size_t>(n), 0);
    for (int q = 0; q < n; ++q) {
        if (comp_size[static_cast<std::size_t>(s.comp[static_cast<std::size_t>(q)])] > 1) {
            on_cycle[static_cast<std::size_t>(q)] = 1;
            continue;
        }
        for (Letter l = 0; l < a.alphabet_size; ++l)
            if (a.step(q, l) == q) on_cycle[static_cast<std::size_t>(q)] = 1;
    }

    // Live states: can reach a cycle state.
    std::vector<std::vector<int>> rev(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q)
        for (Letter l = 0; l < a.alphabet_size; ++l) {
            int to = a.step(q, l);
            if (to != kNoState) rev[static_cast<std::size_t>(to)].push_back(q);
        }
    std::vector<char> live(static_cast<std::size_t>(n), 0);
    std::deque<int> queue;
    for (int q = 0; q < n; ++q)
        if (on_cycle[static_cast<std::size_t>(q)]) {
            live[static_cast<std::size_t>(q)] = 1;
            queue.push_back(q);
        }
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (int p : rev[static_cast<std::size_t>(q)])
            if (!live[static_cast<std::size_t>(p)]) {
                live[static_cast<std::size_t>(p)] = 1;
                queue.push_back(p);
            }
    }
    if (!live[static_cast<std::size_t>(a.initial)]) return result;  // no infinite path

    // Reachable live subgraph from the initial state.
    std::vector<char> reach(static_cast<std::size_t>(n), 0);
    queue.push_back(a.initial);
    reach[static_cast<std::size_t>(a.initial)] = 1;
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (Letter l = 0; l < a.alphabet_size; ++l) {
            int to = a.step(q, l);
            if (to != kNoState && live[static_cast<std::size_t>(to)] &&
                !reach[static_cast<std::size_t>(to)]) {
                reach[static_cast<std::size_t>(to)] = 1;
                queue.push_back(to);
            }
        }
    }

    // L_ω is infinite iff some reachable cycle state has a second live out-edge.
    for (int q = 0; q < n && !result.infinite; ++q) {
        if (!reach[static_cast<std::size_t>(q)] || !on_cycle[static_cast<std::size_t>(q)]) continue;
        int live_edges = 0;
        for (Letter l = 0; l < a.alphabet_size; ++l) {
            int to = a.step(q, l);
            if (to != kNoState && live[static_cast<std::size_t>(to)]) ++live_edges;
        }
        if (live_edges >= 2) result.infinite = true;
    }

    // DFS over live states collecting simple paths until a cycle closes.
    // In the finite case this enumerates L_ω exactly; in the infinite case the
    // collected lassos serve as witnesses (capped).
    const std::size_t witness_cap = result.infinite ? 32 : SIZE_MAX;
    std::vector<int> path_pos(static_cast<std::size_t>(n), -1);
    Word labels;
    std::vector<int> path_states;

    struct DfsFrame { int q; Letter l; };
    std::vector<DfsFrame> frames{{a.initial, 0}};
    path_pos[static_cast<std::size_t>(a.initial)] = 0;
    path_states.push_back(a.initial);
    while (!frames.empty() && result.lassos.size() < witness_cap) {
        if (frames.back().l >= a.alphabet_size) {
            path_pos[static_cast<std::size_t>(frames.back().q)] = -1;
            path_states.pop_back();
            if (!labels.empty()) labels.pop_back();
            frames.pop_back();
            continue;
        }
        const Letter edge = frames.back().l++;
        int to = a.step(frames.back().q, edge);
        if (to == kNoState || !live[static_cast<std::size_t>(to)]) continue;
        int pos = path_pos[static_cast<std::size_t>(to)];
        if (pos >= 0) {
            Lasso lasso;
            lasso.stem.assign(labels.begin(), labels.begin() + pos);
            lasso.cycle.assign(labels.begin() + pos, labels.end());
            lasso.cycle.push_back(edge);
            result.lassos.push_back(std::move(lasso));
            continue;  // the walk around the closed cycle is forced forever
        }
        labels.push_back(edge);
        path_pos[static_cast<std::size_t>(to)] = static_cast<int>(path_states.size());
        path_states.push_back(to);
        frames.push_back({to, 0});
    }

    return result;
}

int Transducer::run(int q, const Word& w) const {
    for (Letter a : w) q = step(q, a);
    return q;
}

int Transducer::max_output_length() const {
    std::size_t m = 0;
    for (const auto& w : output) m = std::max(m, w.size());
    return static_cast<int>(m);
}

bool is_inverse(const Transducer& t) {
    for (int q = 0; q < t.states; ++q)
        for (Letter a = 0; a < t.alphabet_size; ++a) {
            int p = t.step(q, a);
            if (t.step(p, words::inverse(a)) != q) return false;
            if (t.out(p, words::inverse(a)) != words::invert(t.out(q, a))) return false;
        }
    return true;
}

InverseTransducer InverseTransducer::checked(Transducer t) {
    if (!is_inverse(t))
        throw NotInverseError("transducer does not satisfy the inverse-edge property");
    return InverseTransducer{std::move(t)};
}

Word transduce(const Transducer& t, const Word& u) {
    Word out;
    int q = t.initial;
    for (Letter a : u) {
        const Word& o = t.out(q, a);
        out.insert(out.end(), o.begin(), o.end());
        q = t.step(q, a);
    }
    return out;
}

ReducedWord induced_reduced(const InverseTransducer& t, const ReducedWord& g) {
    return words::free_reduce(transduce(t.t, g.letters));
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string to_dot(const Dfa& a, const words::InvAlphabet& alpha, const std::string& name) {
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=circle];\n";
    out << "  start [shape=point];\n  start -> s" << a.initial << ";\n";
    for (int q = 0; q < a.state_count(); ++q) {
        out << "  s" << q << " [label=\"" << q << "\""
            << (a.terminal[static_cast<std::size_t>(q)] ? ", shape=doublecircle" : "") << "];\n";
    }
    for (int q = 0; q < a.state_count(); ++q)
        for (Letter l = 0; l < a.alphabet_size; ++l) {
            int to = a.step(q, l);
            if (to == kNoState) continue;
            out << "  s" << q << " -> s" << to << " [label=\"" << dot_escape(alpha.name(l))
                << "\"];\n";
        }
    out << "}\n";
    return out.str();
}

std::string to_dot(const Transducer& t, const words::InvAlphabet& alpha, const std::string& name) {
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=circle];\n";
    out << "  start [shape=point];\n  start -> s" << t.initial << ";\n";
    for (int q = 0; q < t.states; ++q) out << "  s" << q << " [label=\"" << q << "\"];\n";
    for (int q = 0; q < t.states; ++q)
        for (Letter l = 0; l < t.alphabet_size; ++l) {
            out << "  s" << q << " -> s" << t.step(q, l) << " [label=\""
                << dot_escape(alpha.name(l)) << "|"
                << dot_escape(words::format_word(alpha, t.out(q, l))) << "\"];\n";
        }
    out << "}\n";
    return out.str();
}

} // namespace vf::automata
