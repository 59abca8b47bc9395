#include "vf/geodesic.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "vf/errors.hpp"

namespace vf::geodesic {

using group::eval_word;
using group::invert_elem;
using group::multiply;
using words::free_reduce;
using words::inverse;

const Ball::Entry& Ball::at(const Element& e) const {
    auto it = table.find(e);
    if (it == table.end())
        throw OutOfBallError("element outside the radius-" + std::to_string(radius) + " ball");
    return it->second;
}

std::vector<Word> Ball::language(int max_len) const {
    std::vector<Word> out;
    for (const auto& level : levels) {
        if (max_len >= 0 && !level.empty() &&
            static_cast<int>(level.front().first.size()) > max_len)
            break;
        for (const auto& [nf, e] : level) out.push_back(nf);
    }
    return out;
}

Ball build_ball(const VfPresentation& p, int radius) {
    Ball b;
    b.radius = radius;
    b.levels.resize(static_cast<std::size_t>(radius) + 1);
    b.table[p.identity()] = {Word{}, 0};
    b.levels[0].push_back({Word{}, p.identity()});

    // Generator images for each external letter, in rank order; visiting
    // parents in shortlex order and letters in rank order makes the first
    // assignment the shortlex-minimal geodesic.
    std::vector<std::pair<Letter, Element>> step;
    for (Letter l : p.external_alphabet.ordered_letters())
        step.emplace_back(l, p.generator_image(l));

    for (int d = 0; d < radius; ++d) {
        for (const auto& [nf, e] : b.levels[static_cast<std::size_t>(d)]) {
            for (const auto& [l, img] : step) {
                Element to = multiply(p, e, img);
                if (b.table.count(to)) continue;
                Word nf2 = nf;
                nf2.push_back(l);
                b.table[to] = {nf2, d + 1};
                b.levels[static_cast<std::size_t>(d) + 1].push_back({std::move(nf2), to});
            }
        }
        // parents were already sorted; children appended in order per parent,
        // but different parents interleave, so sort the fresh level
        auto& next = b.levels[static_cast<std::size_t>(d) + 1];
        std::sort(next.begin(), next.end(), [&](const auto& x, const auto& y) {
            return std::lexicographical_compare(
                x.first.begin(), x.first.end(), y.first.begin(), y.first.end(),
                [&](Letter a, Letter c) {
                    return p.external_alphabet.rank(a) < p.external_alphabet.rank(c);
                });
        });
    }
    return b;
}

ReducedWord normal_form(const Ball& b, const Element& g) {
    ReducedWord r;
    r.letters = b.at(g).nf;
    return r;
}

namespace {

// All geodesic words of length <= cap, grouped by endpoint.
struct GeodesicWords {
    std::unordered_map<Element, std::vector<Word>, ElementHash> by_endpoint;
    std::vector<std::pair<Word, Element>> all;
};

GeodesicWords geodesic_words(const VfPresentation& p, const Ball& b, int cap) {
    GeodesicWords g;
    std::vector<std::pair<Word, Element>> frontier{{Word{}, p.identity()}};
    g.by_endpoint[p.identity()].push_back({});
    g.all.push_back({Word{}, p.identity()});
    for (int d = 0; d < cap; ++d) {
        std::vector<std::pair<Word, Element>> next;
        for (const auto& [w, e] : frontier) {
            for (Letter l = 0; l < p.external_alphabet.size(); ++l) {
                Element to = multiply(p, e, p.generator_image(l));
                auto it = b.table.find(to);
                if (it == b.table.end() || it->second.d1 != d + 1) continue;
                Word w2 = w;
                w2.push_back(l);
                g.by_endpoint[to].push_back(w2);
                g.all.push_back({w2, to});
                next.push_back({std::move(w2), to});
            }
        }
        frontier = std::move(next);
    }
    return g;
}

// d1 between two ball elements via the difference, or nullopt if it leaves
// the ball.
std::optional<int> pair_distance(const VfPresentation& p, const Ball& b, const Element& g,
                                 const Element& h) {
    Element diff = multiply(p, invert_elem(p, g), h);
    auto it = b.table.find(diff);
    if (it == b.table.end()) return std::nullopt;
    return it->second.d1;
}

Element prefix_eval(const VfPresentation& p, const Word& w, std::size_t n,
                    std::vector<Element>& cache) {
    // cache[k] = evaluation of w^[k]
    while (cache.size() <= n) {
        std::size_t k = cache.size();
        cache.push_back(multiply(p, cache.back(), p.generator_image(w[k - 1])));
    }
    return cache[n];
}

} // namespace

GeoConstants estimate_constants(const VfPresentation& p, const Ball& b, int scan_radius) {
    if (b.radius < 4) throw Error("constant estimation needs ball radius >= 4");
    int cap = scan_radius > 0 ? scan_radius : std::min(b.radius - 2, 6);
    GeoConstants consts;
    consts.certified_radius = cap;
    auto geo = geodesic_words(p, b, cap);

    // K0: over geodesic pairs with endpoints at distance <= 1, the largest
    // distance between same-length prefixes.
    int k0 = 0;
    for (const auto& [u, gu] : geo.all) {
        std::vector<Element> ucache{p.identity()};
        for (Letter l = 0; l <= p.external_alphabet.size(); ++l) {
            Element h = l < p.external_alphabet.size()
                            ? multiply(p, gu, p.generator_image(l))
                            : gu;
            auto it = geo.by_endpoint.find(h);
            if (it == geo.by_endpoint.end()) continue;
            for (const Word& v : it->second) {
                std::vector<Element> vcache{p.identity()};
                std::size_t len = std::max(u.size(), v.size());
                for (std::size_t n = 1; n <= len; ++n) {
                    Element un = prefix_eval(p, u, std::min(n, u.size()), ucache);
                    Element vn = prefix_eval(p, v, std::min(n, v.size()), vcache);
                    auto d = pair_distance(p, b, un, vn);
                    if (d) k0 = std::max(k0, *d);
                }
            }
        }
    }
    consts.fellow_traveller = std::max(k0, 1);

    // N0: for a geodesic u and letter a, some geodesic of (ua)pi must share a
    // prefix of length >= |u| - N0 with u.
    int n0 = 1;
    for (const auto& [u, gu] : geo.all) {
        std::vector<Element> ucache{p.identity()};
        for (Letter l = 0; l < p.external_alphabet.size(); ++l) {
            Element target = multiply(p, gu, p.generator_image(l));
            auto t_it = b.table.find(target);
            if (t_it == b.table.end()) continue;
            int dt = t_it->second.d1;
            int best_k = -1;
            for (int k = static_cast<int>(u.size()); k >= 0; --k) {
                Element uk = prefix_eval(p, u, static_cast<std::size_t>(k), ucache);
                auto d = pair_distance(p, b, uk, target);
                if (d && k + *d == dt) { best_k = k; break; }
            }
            if (best_k >= 0) n0 = std::max(n0, static_cast<int>(u.size()) - best_k);
        }
    }
    consts.geodesic_defect = n0;
    consts.rule_length_cap = consts.fellow_traveller * consts.geodesic_defect + 1;
    return consts;
}

void RewritingSystem::add(Word lhs, Word rhs) {
    max_lhs = std::max(max_lhs, static_cast<int>(lhs.size()));
    by_lhs.emplace(lhs, rhs);
    rules.push_back({std::move(lhs), std::move(rhs)});
}

RewritingSystem build_rewriting(const VfPresentation& p, const Ball& b, int cap) {
    if (cap > b.radius) throw Error("rewriting cap exceeds the ball radius");
    RewritingSystem rs;
    std::vector<Word> level{{}};
    for (int len = 1; len <= cap; ++len) {
        std::vector<Word> next;
        for (const Word& w : level)
            for (Letter a = 0; a < p.external_alphabet.size(); ++a) {
                Word u = w;
                u.push_back(a);
                const Word& nf = b.at(eval_word(p, u)).nf;
                if (nf != u) rs.add(u, nf);
                next.push_back(std::move(u));
            }
        level = std::move(next);
    }
    return rs;
}

Word rewrite_nf(const RewritingSystem& rs, const Word& w) {
    Word stack;
    std::deque<Letter> pending(w.begin(), w.end());
    while (!pending.empty()) {
        stack.push_back(pending.front());
        pending.pop_front();
        bool replaced = true;
        while (replaced) {
            replaced = false;
            int top = static_cast<int>(stack.size());
            for (int len = 1; len <= std::min(rs.max_lhs, top); ++len) {
                Word suffix(stack.end() - len, stack.end());
                auto it = rs.by_lhs.find(suffix);
                if (it == rs.by_lhs.end()) continue;
                stack.resize(static_cast<std::size_t>(top - len));
                // re-feed the replacement so inner redexes are found
                for (auto rit = it->second.rbegin(); rit != it->second.rend(); ++rit)
                    pending.push_front(*rit);
                replaced = false;
                break;
            }
            break;
        }
    }
    return stack;
}

ConfluenceReport check_confluence(const RewritingSystem& rs, const VfPresentation& p,
                                  int word_check_len) {
    ConfluenceReport report;

    auto join = [&](const Word& x, const Word& y, const Word& source) {
        Word nx = rewrite_nf(rs, x);
        Word ny = rewrite_nf(rs, y);
        ++report.critical_pairs;
        if (nx != ny) {
            report.confluent = false;
            if (report.divergences.size() < 16) report.divergences.push_back({source, x});
        }
    };

    for (const auto& r1 : rs.rules)
        for (const auto& r2 : rs.rules) {
            // proper overlap: a suffix of lhs1 is a prefix of lhs2
            for (std::size_t k = 1; k < std::min(r1.lhs.size(), r2.lhs.size()); ++k) {
                if (!std::equal(r1.lhs.end() - static_cast<long>(k), r1.lhs.end(),
                                r2.lhs.begin()))
                    continue;
                Word super = r1.lhs;
                super.insert(super.end(), r2.lhs.begin() + static_cast<long>(k), r2.lhs.end());
                Word via1 = r1.rhs;
                via1.insert(via1.end(), r2.lhs.begin() + static_cast<long>(k), r2.lhs.end());
                Word via2(r1.lhs.begin(), r1.lhs.end() - static_cast<long>(k));
                via2.insert(via2.end(), r2.rhs.begin(), r2.rhs.end());
                join(via1, via2, super);
            }
            // containment: lhs2 inside lhs1
            if (r2.lhs.size() < r1.lhs.size()) {
                for (std::size_t i = 0; i + r2.lhs.size() <= r1.lhs.size(); ++i) {
                    if (!std::equal(r2.lhs.begin(), r2.lhs.end(),
                                    r1.lhs.begin() + static_cast<long>(i)))
                        continue;
                    Word via2(r1.lhs.begin(), r1.lhs.begin() + static_cast<long>(i));
                    via2.insert(via2.end(), r2.rhs.begin(), r2.rhs.end());
                    via2.insert(via2.end(),
                                r1.lhs.begin() + static_cast<long>(i + r2.lhs.size()),
                                r1.lhs.end());
                    join(r1.rhs, via2, r1.lhs);
                }
            }
        }

    // Exhaustive one-step-reduct check on short words.
    std::vector<Word> level{{}};
    for (int len = 1; len <= word_check_len && report.confluent; ++len) {
        std::vector<Word> next;
        for (const Word& w : level)
            for (Letter a = 0; a < p.external_alphabet.size(); ++a) {
                Word u = w;
                u.push_back(a);
                next.push_back(u);
            }
        level = std::move(next);
        for (const Word& w : level) {
            ++report.words_checked;
            // all one-step reducts must share the normal form
            Word nf0 = rewrite_nf(rs, w);
            for (std::size_t i = 0; i < w.size(); ++i)
                for (std::size_t len2 = 1; len2 + i <= w.size() &&
                                           len2 <= static_cast<std::size_t>(rs.max_lhs);
                     ++len2) {
                    Word factor(w.begin() + static_cast<long>(i),
                                w.begin() + static_cast<long>(i + len2));
                    auto it = rs.by_lhs.find(factor);
                    if (it == rs.by_lhs.end()) continue;
                    Word reduct(w.begin(), w.begin() + static_cast<long>(i));
                    reduct.insert(reduct.end(), it->second.begin(), it->second.end());
                    reduct.insert(reduct.end(), w.begin() + static_cast<long>(i + len2), w.end());
                    if (rewrite_nf(rs, reduct) != nf0) {
                        report.confluent = false;
                        if (report.divergences.size() < 16)
                            report.divergences.push_back({w, reduct});
                    }
                }
        }
    }
    return report;
}

AcceptorResult build_acceptor(const VfPresentation& p, const Ball& b) {
    if (b.radius < 6) throw Error("acceptor construction needs ball radius >= 6");

    auto build_at = [&](int radius) {
        const int depth = radius / 2;
        // normal forms up to the radius, in shortlex order
        std::set<Word> nf_set;
        for (const Word& w : b.language(radius)) nf_set.insert(w);

        auto profile_key = [&](const Word& u) {
            // serialized set of extensions of length <= depth
            std::string key;
            std::vector<std::pair<Word, int>> frontier{{u, 0}};
            std::deque<std::pair<Word, int>> queue{{u, 0}};
            while (!queue.empty()) {
                auto [w, d] = queue.front();
                queue.pop_front();
                if (d == depth) continue;
                for (Letter a = 0; a < p.external_alphabet.size(); ++a) {
                    Word wa = w;
                    wa.push_back(a);
                    if (!nf_set.count(wa)) continue;
                    key += std::to_string(a);
                    key += '.';
                    queue.push_back({std::move(wa), d + 1});
                }
                key += ';';
            }
            return key;
        };

        const int state_word_cap = radius - depth;
        std::map<std::string, int> state_of;
        std::vector<Word> rep;
        automata::Dfa dfa;
        dfa.alphabet_size = p.external_alphabet.size();
        bool consistent = true;

        std::vector<Word> words;
        for (const Word& w : b.language(state_word_cap)) words.push_back(w);
        std::vector<int> word_state(words.size(), -1);
        for (std::size_t i = 0; i < words.size(); ++i) {
            auto key = profile_key(words[i]);
            auto it = state_of.find(key);
            if (it == state_of.end()) {
                int s = dfa.add_state(true);
                state_of.emplace(key, s);
                rep.push_back(words[i]);
                word_state[i] = s;
            } else {
                word_state[i] = it->second;
            }
        }
        dfa.initial = 0;  // the empty word comes first in shortlex order

        // transitions from representatives; every occurrence must agree
        std::map<std::pair<int, Letter>, int> trans;
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (static_cast<int>(words[i].size()) >= state_word_cap) continue;
            for (Letter a = 0; a < p.external_alphabet.size(); ++a) {
                Word wa = words[i];
                wa.push_back(a);
                if (!nf_set.count(wa)) continue;
                auto key = profile_key(wa);
                auto target = state_of.find(key);
                if (target == state_of.end()) { consistent = false; continue; }
                auto edge = std::make_pair(word_state[static_cast<std::size_t>(i)], a);
                auto [it, fresh] = trans.emplace(edge, target->second);
                if (!fresh && it->second != target->second) consistent = false;
            }
        }
        for (const auto& [edge, to] : trans) dfa.set_step(edge.first, edge.second, to);
        return std::make_pair(automata::canonicalize(dfa), consistent);
    };

    AcceptorResult out;
    auto [cur, ok_cur] = build_at(b.radius);
    auto [prev, ok_prev] = build_at(b.radius - 1);
    out.dfa = cur;
    out.stable = ok_cur && ok_prev && automata::isomorphic(cur, prev);
    if (!out.stable) out.previous = prev;
    return out;
}

automata::LassoSetResult boundary_points(const automata::Dfa& acceptor) {
    return automata::lasso_set(acceptor);
}

GeoContext make_context(const VfPresentation& p, int radius, int scan_radius) {
    GeoContext ctx;
    ctx.pres = &p;
    ctx.ball = build_ball(p, radius);
    ctx.consts = estimate_constants(p, ctx.ball, scan_radius);
    ctx.rewriting = build_rewriting(p, ctx.ball, std::min(ctx.consts.rule_length_cap, radius));
    auto acc = build_acceptor(p, ctx.ball);
    ctx.acceptor = std::move(acc.dfa);
    ctx.acceptor_stable = acc.stable;

    ctx.free_letter_word.resize(static_cast<std::size_t>(p.free_alphabet.size()));
    for (Letter x = 0; x < p.free_alphabet.size(); ++x) {
        ReducedWord lw;
        lw.letters = Word{x};
        ctx.free_letter_word[static_cast<std::size_t>(x)] = ctx.ball.at(Element{lw, 0}).nf;
    }
    ctx.coset_word.resize(static_cast<std::size_t>(p.coset_count));
    for (int i = 0; i < p.coset_count; ++i)
        ctx.coset_word[static_cast<std::size_t>(i)] = ctx.ball.at(Element{ReducedWord{}, i}).nf;
    return ctx;
}

Word nf_of_element(const GeoContext& ctx, const Element& e) {
    auto it = ctx.ball.table.find(e);
    if (it != ctx.ball.table.end()) return it->second.nf;
    // spell the element through the section words and rewrite
    Word spelled;
    for (Letter x : e.w.letters) {
        const Word& piece = ctx.free_letter_word[static_cast<std::size_t>(x)];
        spelled.insert(spelled.end(), piece.begin(), piece.end());
    }
    const Word& cw = ctx.coset_word[static_cast<std::size_t>(e.coset)];
    spelled.insert(spelled.end(), cw.begin(), cw.end());
    return rewrite_nf(ctx.rewriting, spelled);
}

int distance(const GeoContext& ctx, const Element& g, const Element& h) {
    Element diff = multiply(*ctx.pres, invert_elem(*ctx.pres, g), h);
    return static_cast<int>(nf_of_element(ctx, diff).size());
}

double gromov_product(const GeoContext& ctx, const Element& g, const Element& h) {
    int dg = static_cast<int>(nf_of_element(ctx, g).size());
    int dh = static_cast<int>(nf_of_element(ctx, h).size());
    int dgh = distance(ctx, g, h);
    return 0.5 * (dg + dh - dgh);
}

Element eval_prefix(const VfPresentation& p, const OmegaWord& alpha, std::size_t n) {
    Element acc = p.identity();
    for (std::size_t i = 0; i < n; ++i) acc = multiply(p, acc, p.generator_image(alpha.at(i)));
    return acc;
}

OmegaWord left_translate(const GeoContext& ctx, const Word& u, const OmegaWord& alpha,
                         LeftTranslateConfig cfg) {
    const VfPresentation& p = *ctx.pres;
    if (u.empty()) return alpha;
    const int penalty =
        ctx.consts.fellow_traveller * ctx.consts.geodesic_defect +
        ctx.consts.geodesic_defect * static_cast<int>(u.size());
    const int period = static_cast<int>(alpha.period.size());
    const int max_steps = cfg.max_steps > 0
                              ? cfg.max_steps
                              : static_cast<int>(alpha.preperiod.size()) + penalty +
                                    8 * std::max(period, 1) + 4 * ctx.ball.radius;

    Element eu = eval_word(p, u);
    // candidates from the boundary language when it is finite
    auto lassos = automata::lasso_set(ctx.acceptor);
    std::vector<OmegaWord> candidates;
    if (!lassos.infinite) candidates = lassos.omega_words();

    Element prefix_elem = eval_prefix(p, alpha, alpha.preperiod.size());
    std::size_t n = alpha.preperiod.size();
    Element cur = multiply(p, eu, prefix_elem);
    std::vector<Word> history;
    std::vector<std::size_t> history_n;
    Word certified_prev;
    for (int step = 0; n <= static_cast<std::size_t>(max_steps); ++step) {
        Word w = nf_of_element(ctx, cur);
        std::size_t cert = 0;
        if (static_cast<int>(n) > penalty)
            cert = std::min(w.size(), static_cast<std::size_t>(static_cast<int>(n) - penalty));
        Word certified(w.begin(), w.begin() + static_cast<long>(cert));

        if (!candidates.empty()) {
            std::vector<OmegaWord> still;
            for (const auto& c : candidates) {
                bool match = true;
                for (std::size_t i = 0; i < certified.size() && match; ++i)
                    if (c.at(i) != certified[i]) match = false;
                if (match) still.push_back(c);
            }
            if (!still.empty()) {
                candidates = std::move(still);
                if (candidates.size() == 1 &&
                    certified.size() >= candidates[0].preperiod.size() +
                                            2 * candidates[0].period.size() + 1)
                    return candidates[0];
            } else {
                candidates.clear();  // fall back to increment detection
            }
        }
        // increment detection over certified prefixes, one period at a time
        if (certified.size() > certified_prev.size() &&
            std::equal(certified_prev.begin(), certified_prev.end(), certified.begin())) {
            history.push_back(certified);
            history_n.push_back(n);
            std::size_t h = history.size();
            if (h >= 3) {
                const Word& c1 = history[h - 3];
                const Word& c2 = history[h - 2];
                const Word& c3 = history[h - 1];
                Word inc1(c2.begin() + static_cast<long>(c1.size()), c2.end());
                Word inc2(c3.begin() + static_cast<long>(c2.size()), c3.end());
                if (!inc1.empty() && inc1 == inc2)
                    return words::omega_canonicalize(c1, inc1);
            }
        }
        certified_prev = certified;

        // advance one full period of alpha
        for (int i = 0; i < std::max(period, 1); ++i) {
            cur = multiply(p, cur, p.generator_image(alpha.at(n)));
            ++n;
        }
    }
    throw NoPeriodError("left translation did not stabilize within the step budget");
}

std::string ball_cache_key(const std::string& group_file_bytes, int radius) {
    std::size_t h = 1469598103934665603ull;
    for (char c : group_file_bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << h << "-r" << std::dec << radius;
    return out.str();
}

void save_ball(const Ball& b, const std::string& path) {
    std::ofstream out(path);
    out << "vfball 1 " << b.radius << "\n";
    for (const auto& level : b.levels)
        for (const auto& [nf, e] : level) {
            out << e.coset << " ";
            for (Letter x : e.w.letters) out << x << ",";
            out << " ";
            for (Letter x : nf) out << x << ",";
            out << "\n";
        }
}

std::optional<Ball> load_ball(const VfPresentation& p, const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string magic;
    int version = 0, radius = 0;
    in >> magic >> version >> radius;
    if (magic != "vfball" || version != 1) return std::nullopt;
    Ball b;
    b.radius = radius;
    b.levels.resize(static_cast<std::size_t>(radius) + 1);
    std::string wfield, nfield;
    int coset;
    auto parse_csv = [](const std::string& s) {
        Word w;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                if (!cur.empty()) w.push_back(std::stoi(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        return w;
    };
    while (in >> coset) {
        in >> wfield;
        if (wfield == ",") wfield.clear();
        if (!(in >> nfield)) nfield.clear();
        Element e;
        e.w.letters = parse_csv(wfield);
        e.coset = coset;
        Word nf = parse_csv(nfield);
        int d1 = static_cast<int>(nf.size());
        if (d1 > radius) return std::nullopt;
        b.table[e] = {nf, d1};
        b.levels[static_cast<std::size_t>(d1)].push_back({nf, e});
    }
    if (!b.table.count(p.identity())) return std::nullopt;
    return b;
}

} // namespace vf::geodesic
