#include "vf/group.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

#include "vf/errors.hpp"

namespace vf::group {

using words::free_reduce;
using words::inverse;
using words::invert;
using words::is_inverse_letter;

std::string element_key(const Element& e) {
    std::string k = std::to_string(e.coset) + "|";
    for (Letter a : e.w.letters) {
        k += std::to_string(a);
        k += ',';
    }
    return k;
}

Element VfPresentation::generator_image(Letter external) const {
    const Element& base = generator_images[static_cast<std::size_t>(external >> 1)];
    if (!is_inverse_letter(external)) return base;
    // computed lazily; presentations are small
    return invert_elem(*this, base);
}

ReducedWord conj_apply(const VfPresentation& p, int i, const Word& w) {
    if (i == 0) return free_reduce(w);
    Word out;
    for (Letter x : w) {
        const ReducedWord& img = p.conj[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
        out.insert(out.end(), img.letters.begin(), img.letters.end());
    }
    return free_reduce(out);
}

Element multiply(const VfPresentation& p, const Element& g, const Element& h) {
    // (u b_i)(v b_j) = u (b_i v b_i^-1) (b_i b_j) = u conj_i(v) f_{ij} b_{mu(i,j)}
    const auto& mp = p.mult[static_cast<std::size_t>(g.coset)][static_cast<std::size_t>(h.coset)];
    ReducedWord cv = conj_apply(p, g.coset, h.w.letters);
    Word w = g.w.letters;
    w.insert(w.end(), cv.letters.begin(), cv.letters.end());
    w.insert(w.end(), mp.f.letters.begin(), mp.f.letters.end());
    return Element{free_reduce(w), mp.coset};
}

Element invert_elem(const VfPresentation& p, const Element& g) {
    // (u b_i)^-1 = b_i^-1 u^-1 = conj_{iota(i)}(f_{i,iota}^-1 u^-1) b_{iota(i)}
    const int iota = p.coset_inverse[static_cast<std::size_t>(g.coset)];
    const auto& f = p.mult[static_cast<std::size_t>(g.coset)][static_cast<std::size_t>(iota)].f;
    Word w = invert(f.letters);
    Word ui = invert(g.w.letters);
    w.insert(w.end(), ui.begin(), ui.end());
    return Element{conj_apply(p, iota, w), iota};
}

Element eval_word(const VfPresentation& p, const Word& external_word) {
    Element acc = p.identity();
    for (Letter a : external_word) acc = multiply(p, acc, p.generator_image(a));
    return acc;
}

namespace {

// conj[i] must be invertible on F: conj_{iota(i)} ( f^-1 conj_i(x) f ) == x.
bool conj_invertible_on(const VfPresentation& p, int i, Letter x) {
    const int iota = p.coset_inverse[static_cast<std::size_t>(i)];
    const auto& f = p.mult[static_cast<std::size_t>(i)][static_cast<std::size_t>(iota)].f;
    Word w = invert(f.letters);
    const auto& cx = p.conj[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
    w.insert(w.end(), cx.letters.begin(), cx.letters.end());
    w.insert(w.end(), f.letters.begin(), f.letters.end());
    ReducedWord back = conj_apply(p, iota, w);
    return back.letters == Word{x};
}

} // namespace

ValidationReport validate_presentation(VfPresentation& p) {
    ValidationReport report;
    auto complain = [&](const std::string& msg) { report.violations.push_back(msg); };

    const int m = p.coset_count;
    const int fa = p.free_alphabet.size();
    if (static_cast<int>(p.conj.size()) != m || static_cast<int>(p.mult.size()) != m) {
        complain("conj/mult tables do not match coset_count");
        return report;
    }
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(p.conj[static_cast<std::size_t>(i)].size()) != fa)
            complain("conj[" + std::to_string(i) + "] does not cover the doubled free alphabet");
        if (static_cast<int>(p.mult[static_cast<std::size_t>(i)].size()) != m)
            complain("mult[" + std::to_string(i) + "] row has wrong length");
    }
    if (!report.ok()) return report;

    // b_0 = 1: conj[0] is the identity, mult row/column 0 trivial.
    for (Letter x = 0; x < fa; ++x)
        if (p.conj[0][static_cast<std::size_t>(x)].letters != Word{x})
            complain("conj[0] must fix every letter");
    for (int j = 0; j < m; ++j) {
        if (p.mult[0][static_cast<std::size_t>(j)].coset != j ||
            !p.mult[0][static_cast<std::size_t>(j)].f.empty())
            complain("mult(0, " + std::to_string(j) + ") must be trivial");
        if (p.mult[static_cast<std::size_t>(j)][0].coset != j ||
            !p.mult[static_cast<std::size_t>(j)][0].f.empty())
            complain("mult(" + std::to_string(j) + ", 0) must be trivial");
    }

    // Inverse cosets.
    p.coset_inverse.assign(static_cast<std::size_t>(m), -1);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j)
            if (p.mult[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].coset == 0) {
                p.coset_inverse[static_cast<std::size_t>(i)] = j;
                break;
            }
        if (p.coset_inverse[static_cast<std::size_t>(i)] < 0)
            complain("coset " + std::to_string(i) + " has no inverse coset");
    }
    if (!report.ok()) return report;

    // conj[i] respects formal inverses and is invertible on F.
    for (int i = 0; i < m; ++i)
        for (Letter x = 0; x < fa; x += 2) {
            const auto& cx = p.conj[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
            const auto& cxi =
                p.conj[static_cast<std::size_t>(i)][static_cast<std::size_t>(inverse(x))];
            if (cxi.letters != invert(cx.letters))
                complain("conj(" + std::to_string(i) + ", " + p.free_alphabet.name(x) +
                         ") does not respect inverses");
        }
    if (!report.ok()) return report;
    for (int i = 0; i < m; ++i)
        for (Letter x = 0; x < fa; x += 2)
            if (!conj_invertible_on(p, i, x))
                complain("conj(" + std::to_string(i) + ", " + p.free_alphabet.name(x) +
                         ") is not invertible on the free subgroup");

    // Compatibility of conjugation with the coset product:
    // conj_i(conj_j(x)) == f_ij conj_{mu(i,j)}(x) f_ij^-1.
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const auto& mp = p.mult[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            for (Letter x = 0; x < fa; x += 2) {
                ReducedWord lhs = conj_apply(
                    p, i, p.conj[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)].letters);
                Word rhs = mp.f.letters;
                const auto& inner =
                    p.conj[static_cast<std::size_t>(mp.coset)][static_cast<std::size_t>(x)];
                rhs.insert(rhs.end(), inner.letters.begin(), inner.letters.end());
                Word fi = invert(mp.f.letters);
                rhs.insert(rhs.end(), fi.begin(), fi.end());
                if (lhs != free_reduce(rhs))
                    complain("conjugation incompatible with mult at (" + std::to_string(i) + "," +
                             std::to_string(j) + "," + p.free_alphabet.name(x) + ")");
            }
        }

    // Cocycle condition = associativity of (b_i b_j) b_k vs b_i (b_j b_k).
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                Element bi{ReducedWord{}, i}, bj{ReducedWord{}, j}, bk{ReducedWord{}, k};
                Element lhs = multiply(p, multiply(p, bi, bj), bk);
                Element rhs = multiply(p, bi, multiply(p, bj, bk));
                if (lhs != rhs)
                    complain("associativity fails on cosets (" + std::to_string(i) + "," +
                             std::to_string(j) + "," + std::to_string(k) + ")");
            }

    // Generator images must carry valid cosets.
    for (const auto& e : p.generator_images)
        if (e.coset < 0 || e.coset >= m) complain("generator image with invalid coset");

    return report;
}

Element apply_endo_word(const VfPresentation& p, const Endomorphism& phi, const Word& w) {
    Element acc = p.identity();
    for (Letter a : w) {
        const Element& img = phi.free_images[static_cast<std::size_t>(a >> 1)];
        acc = multiply(p, acc, is_inverse_letter(a) ? invert_elem(p, img) : img);
    }
    return acc;
}

Element apply_endo(const VfPresentation& p, const Endomorphism& phi, const Element& g) {
    Element acc = apply_endo_word(p, phi, g.w.letters);
    return multiply(p, acc, phi.coset_images[static_cast<std::size_t>(g.coset)]);
}

automata::Transducer derive_transducer(const VfPresentation& p, const Endomorphism& phi) {
    automata::Transducer t;
    t.alphabet_size = p.free_alphabet.size();
    t.states = p.coset_count;
    t.initial = 0;
    t.next.assign(static_cast<std::size_t>(t.states) * t.alphabet_size, 0);
    t.output.assign(static_cast<std::size_t>(t.states) * t.alphabet_size, Word{});
    for (int i = 0; i < t.states; ++i)
        for (Letter a = 0; a < t.alphabet_size; ++a) {
            // b_i (a phi) = h b_delta
            Element img = phi.free_images[static_cast<std::size_t>(a >> 1)];
            if (is_inverse_letter(a)) img = invert_elem(p, img);
            Element prod = multiply(p, Element{ReducedWord{}, i}, img);
            t.next[static_cast<std::size_t>(i) * t.alphabet_size + static_cast<std::size_t>(a)] =
                prod.coset;
            t.output[static_cast<std::size_t>(i) * t.alphabet_size + static_cast<std::size_t>(a)] =
                prod.w.letters;
        }
    return t;
}

automata::Dfa coset_acceptor(const VfPresentation& p, const automata::Transducer& t, int j) {
    automata::Dfa a;
    a.alphabet_size = t.alphabet_size;
    for (int q = 0; q < p.coset_count; ++q) a.add_state(q == j);
    a.initial = 0;
    for (int q = 0; q < p.coset_count; ++q)
        for (Letter l = 0; l < t.alphabet_size; ++l) a.set_step(q, l, t.step(q, l));
    return a;
}

ValidationReport validate_endomorphism(const VfPresentation& p, const Endomorphism& phi) {
    ValidationReport report;
    auto complain = [&](const std::string& msg) { report.violations.push_back(msg); };

    if (static_cast<int>(phi.free_images.size()) != p.free_alphabet.base_size())
        complain("endomorphism must give one image per free base letter");
    if (static_cast<int>(phi.coset_images.size()) != p.coset_count)
        complain("endomorphism must give one image per coset");
    if (!report.ok()) return report;
    if (!phi.coset_images[0].is_identity()) complain("image of b_0 must be the identity");

    // phi(b_i x b_i^-1) == phi(conj(i,x))
    for (int i = 0; i < p.coset_count; ++i)
        for (Letter x = 0; x < p.free_alphabet.size(); x += 2) {
            Element bi_img = phi.coset_images[static_cast<std::size_t>(i)];
            Element lhs = multiply(
                p, multiply(p, bi_img, apply_endo_word(p, phi, Word{x})), invert_elem(p, bi_img));
            Element rhs = apply_endo_word(
                p, phi, p.conj[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)].letters);
            if (lhs != rhs)
                complain("relation b_" + std::to_string(i) + " " + p.free_alphabet.name(x) +
                         " b_" + std::to_string(i) + "^-1 is not respected");
        }

    // phi(b_i) phi(b_j) == phi(f_ij) phi(b_mu)
    for (int i = 0; i < p.coset_count; ++i)
        for (int j = 0; j < p.coset_count; ++j) {
            const auto& mp = p.mult[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            Element lhs = multiply(p, phi.coset_images[static_cast<std::size_t>(i)],
                                   phi.coset_images[static_cast<std::size_t>(j)]);
            Element rhs = multiply(p, apply_endo_word(p, phi, mp.f.letters),
                                   phi.coset_images[static_cast<std::size_t>(mp.coset)]);
            if (lhs != rhs)
                complain("relation b_" + std::to_string(i) + " b_" + std::to_string(j) +
                         " = f b_mu is not respected");
        }
    if (!report.ok()) return report;

    if (!automata::is_inverse(derive_transducer(p, phi)))
        complain("derived transducer is not inverse");
    return report;
}

std::vector<Element> ball_elements(const VfPresentation& p, int n) {
    std::vector<Element> out;
    std::vector<Word> level{{}};
    for (int len = 0; len <= n; ++len) {
        for (const Word& w : level)
            for (int i = 0; i < p.coset_count; ++i) {
                ReducedWord r;
                r.letters = w;
                out.push_back(Element{r, i});
            }
        if (len == n) break;
        std::vector<Word> nxt;
        for (const Word& w : level)
            for (Letter a = 0; a < p.free_alphabet.size(); ++a) {
                if (!w.empty() && a == inverse(w.back())) continue;
                Word e = w;
                e.push_back(a);
                nxt.push_back(std::move(e));
            }
        level = std::move(nxt);
    }
    return out;
}

std::vector<Element> brute_fix_oracle(const VfPresentation& p, const Endomorphism& phi, int n) {
    std::vector<Element> out;
    for (const auto& e : ball_elements(p, n))
        if (apply_endo(p, phi, e) == e) out.push_back(e);
    return out;
}

FixSubgroupReport fix_subgroup(const VfPresentation& p, const Endomorphism& phi,
                               const FixConfig& cfg) {
    FixSubgroupReport report;
    automata::Transducer raw = derive_transducer(p, phi);
    auto t = automata::InverseTransducer::checked(std::move(raw));

    // Y = { (i,j) : b_j (b_i phi) = z b_i }, with z recorded.
    for (int i = 0; i < p.coset_count; ++i)
        for (int j = 0; j < p.coset_count; ++j) {
            Element v = multiply(p, Element{ReducedWord{}, j},
                                 phi.coset_images[static_cast<std::size_t>(i)]);
            if (v.coset != i) continue;
            report.pairs.emplace_back(i, j);
            report.z_words.push_back(v.w);
        }

    for (std::size_t k = 0; k < report.pairs.size(); ++k) {
        auto [i, j] = report.pairs[k];
        // g b_i fixed iff phi_0(g) = g z^{-1} and the delta-run of g ends at j.
        Word target = invert(report.z_words[k].letters);
        auto gt = gtfix::build_gt_automaton(t, target, cfg.gt);
        report.partial = report.partial || gt.partial;
        automata::Dfa x = automata::intersect(gt.dfa, coset_acceptor(p, t.t, j));
        report.section_automata.push_back(automata::trim(x));
        report.gt_automata.push_back(std::move(gt));
    }

    // Generator extraction over the union of the section languages, one
    // evaluation map per coset.
    automata::SubgroupOps<Element> ops;
    ops.mul = [&p](const Element& a, const Element& b) { return multiply(p, a, b); };
    ops.inv = [&p](const Element& a) { return invert_elem(p, a); };
    ops.member = [&](const Element& e) { return apply_endo(p, phi, e) == e; };
    ops.norm = [](const Element& e) { return static_cast<int>(e.w.size()); };
    ops.key = element_key;
    ops.ball = [&p](int r) { return ball_elements(p, r); };
    ops.identity = p.identity();

    // subgroup_generators takes a single eval; run it per pair and merge, then
    // prune the union greedily once more against the span.
    std::vector<Element> candidates;
    std::set<std::string> seen;
    for (std::size_t k = 0; k < report.pairs.size(); ++k) {
        int i = report.pairs[k].first;
        ops.eval = [i](const Word& w) {
            return Element{free_reduce(w), i};  // the word denotes g b_i
        };
        auto res = automata::subgroup_generators<Element>(report.section_automata[k], ops,
                                                          cfg.subgroup);
        for (auto& g : res.generators)
            if (seen.insert(element_key(g)).second) candidates.push_back(g);
    }
    std::vector<Element> pruned;
    const int span_radius = cfg.subgroup.verify_radius + cfg.subgroup.slack;
    std::set<std::string> span_keys{element_key(p.identity())};
    for (const auto& c : candidates) {
        if (span_keys.count(element_key(c))) continue;
        pruned.push_back(c);
        span_keys.clear();
        for (const auto& s : automata::bounded_span(pruned, ops, span_radius))
            span_keys.insert(element_key(s));
    }
    report.generators = std::move(pruned);

    // Certification against the brute-force ball.
    auto goal = brute_fix_oracle(p, phi, cfg.oracle_radius);
    for (const auto& g : goal)
        if (!span_keys.count(element_key(g))) report.missed.push_back(g);
    report.verified = report.missed.empty() && !report.partial;
    return report;
}

std::string format_element(const VfPresentation& p, const Element& e) {
    std::ostringstream out;
    out << "(" << words::format_word(p.free_alphabet, e.w.letters) << ", b" << e.coset << ")";
    return out.str();
}

} // namespace vf::group
