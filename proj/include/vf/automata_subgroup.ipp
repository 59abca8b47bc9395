#pragma once

// Template implementation of generator extraction. Included by automata.hpp.

#include <deque>
#include <map>
#include <set>
#include <unordered_set>

namespace vf::automata {

template <typename Elem>
std::vector<Elem> bounded_span(const std::vector<Elem>& gens, const SubgroupOps<Elem>& ops,
                               int radius) {
    std::vector<Elem> agents;
    for (const auto& g : gens) {
        agents.push_back(g);
        agents.push_back(ops.inv(g));
    }
    std::vector<Elem> out;
    std::unordered_set<std::string> seen;
    std::deque<Elem> queue;
    queue.push_back(ops.identity);
    seen.insert(ops.key(ops.identity));
    while (!queue.empty()) {
        Elem e = queue.front();
        queue.pop_front();
        out.push_back(e);
        for (const auto& g : agents) {
            Elem f = ops.mul(e, g);
            if (ops.norm(f) > radius) continue;
            auto k = ops.key(f);
            if (seen.insert(k).second) queue.push_back(f);
        }
    }
    return out;
}

template <typename Elem>
SubgroupResult<Elem> subgroup_generators(const std::vector<const Dfa*>& sources,
                                         const SubgroupOps<Elem>& ops,
                                         const SubgroupConfig& cfg) {
    SubgroupResult<Elem> result;

    int max_states = 0;
    for (const Dfa* a : sources) max_states = std::max(max_states, a->state_count());
    const int span_radius = cfg.verify_radius + cfg.slack;
    // Candidate words come from lengths up to 2*|states|+bonus, but harvesting
    // past max_levels cannot add certifiable generators (see the norm filter
    // below); the ball certification reports any resulting gap honestly.
    const int length_cap =
        std::min(2 * max_states + cfg.length_bonus, std::max(cfg.max_levels, span_radius));

    // H-elements within the verification ball, the target of the pruning.
    std::vector<Elem> goal;
    std::set<std::string> goal_keys;
    for (const auto& e : ops.ball(cfg.verify_radius)) {
        if (ops.member(e) && goal_keys.insert(ops.key(e)).second) goal.push_back(e);
    }

    // Span of the generators found so far, recomputed only on additions.
    std::set<std::string> span_keys{ops.key(ops.identity)};
    auto refresh_span = [&]() {
        span_keys.clear();
        for (const auto& s : bounded_span(result.generators, ops, span_radius))
            span_keys.insert(ops.key(s));
    };
    auto covered = [&]() {
        for (const auto& k : goal_keys)
            if (!span_keys.count(k)) return false;
        return true;
    };

    // Per-source frontier of (state, word) pairs, advanced level by level in
    // letter order so candidates arrive in shortlex order.
    struct Frontier {
        const Dfa* a;
        std::vector<std::pair<int, Word>> items;
    };
    std::vector<Frontier> fronts;
    for (const Dfa* a : sources)
        fronts.push_back({a, {{a->initial, Word{}}}});

    std::set<std::string> element_seen;
    int silent_levels = 0;
    for (int level = 0; level <= length_cap; ++level) {
        bool added_this_level = false;
        for (auto& f : fronts) {
            for (const auto& [q, w] : f.items) {
                if (!f.a->terminal[static_cast<std::size_t>(q)]) continue;
                Elem e = ops.eval(w);
                auto k = ops.key(e);
                if (!element_seen.insert(k).second) continue;
                if (k == ops.key(ops.identity)) continue;
                if (!ops.member(e)) continue;  // pre-condition violation guard
                // Elements beyond the span radius cannot be checked for
                // redundancy nor help cover the verification ball.
                if (ops.norm(e) > span_radius) continue;
                if (span_keys.count(k)) continue;
                result.generators.push_back(e);
                refresh_span();
                added_this_level = true;
            }
        }
        if (added_this_level)
            silent_levels = 0;
        else if (++silent_levels >= cfg.stale_levels && covered())
            break;

        for (auto& f : fronts) {
            std::vector<std::pair<int, Word>> next_items;
            for (const auto& [q, w] : f.items) {
                for (Letter a = 0; a < f.a->alphabet_size; ++a) {
                    int to = f.a->step(q, a);
                    if (to == kNoState) continue;
                    Word w2 = w;
                    w2.push_back(a);
                    next_items.emplace_back(to, std::move(w2));
                    if (next_items.size() >= cfg.level_cap) break;
                }
                if (next_items.size() >= cfg.level_cap) break;
            }
            f.items = std::move(next_items);
        }
    }

    // Certification: every H-element of the ball must lie in the span.
    for (const auto& g : goal)
        if (!span_keys.count(ops.key(g))) result.missed.push_back(g);
    result.verified = result.missed.empty();
    return result;
}

} // namespace vf::automata
