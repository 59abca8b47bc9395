#pragma once

// Shared corpus builders for tests: random inverse transducers and small
// hand-built ones.

#include <algorithm>
#include <numeric>
#include <random>

#include "vf/automata.hpp"

namespace corpus {

using vf::automata::InverseTransducer;
using vf::automata::Transducer;
using vf::words::Letter;
using vf::words::Word;

inline Transducer identity_transducer(int alpha_size) {
    Transducer t;
    t.alphabet_size = alpha_size;
    t.states = 1;
    t.initial = 0;
    t.next.assign(static_cast<std::size_t>(alpha_size), 0);
    t.output.resize(static_cast<std::size_t>(alpha_size));
    for (Letter a = 0; a < alpha_size; ++a) t.output[static_cast<std::size_t>(a)] = Word{a};
    return t;
}

/// One state over {a, a^-1}: a -> aa.
inline Transducer doubling_transducer() {
    Transducer t;
    t.alphabet_size = 2;
    t.states = 1;
    t.initial = 0;
    t.next.assign(2, 0);
    t.output.resize(2);
    t.output[0] = Word{0, 0};
    t.output[1] = Word{1, 1};
    return t;
}

/// One-state transducer of a free-group endomorphism given by base images.
inline Transducer free_endo_transducer(int base_letters, const std::vector<Word>& images) {
    Transducer t;
    t.alphabet_size = 2 * base_letters;
    t.states = 1;
    t.initial = 0;
    t.next.assign(static_cast<std::size_t>(t.alphabet_size), 0);
    t.output.resize(static_cast<std::size_t>(t.alphabet_size));
    for (int k = 0; k < base_letters; ++k) {
        t.output[static_cast<std::size_t>(2 * k)] = images[static_cast<std::size_t>(k)];
        t.output[static_cast<std::size_t>(2 * k + 1)] =
            vf::words::invert(images[static_cast<std::size_t>(k)]);
    }
    return t;
}

/// Random inverse transducer: each base letter acts as a random permutation
/// of the states; outputs are random reduced words, inverse edges forced.
inline Transducer random_inverse_transducer(std::mt19937& rng, int states, int base_letters,
                                            int max_out) {
    Transducer t;
    t.alphabet_size = 2 * base_letters;
    t.states = states;
    t.initial = 0;
    t.next.assign(static_cast<std::size_t>(states) * t.alphabet_size, 0);
    t.output.assign(static_cast<std::size_t>(states) * t.alphabet_size, Word{});
    auto cell = [&](int q, Letter a) -> std::size_t {
        return static_cast<std::size_t>(q) * t.alphabet_size + static_cast<std::size_t>(a);
    };
    for (int k = 0; k < base_letters; ++k) {
        std::vector<int> perm(static_cast<std::size_t>(states));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int q = 0; q < states; ++q) {
            Letter a = static_cast<Letter>(2 * k);
            int to = perm[static_cast<std::size_t>(q)];
            std::uniform_int_distribution<int> len(0, max_out);
            Word out;
            int n = len(rng);
            while (static_cast<int>(out.size()) < n) {
                Letter x = static_cast<Letter>(
                    std::uniform_int_distribution<int>(0, t.alphabet_size - 1)(rng));
                if (!out.empty() && x == vf::words::inverse(out.back())) continue;
                out.push_back(x);
            }
            t.next[cell(q, a)] = to;
            t.output[cell(q, a)] = out;
            t.next[cell(to, vf::words::inverse(a))] = q;
            t.output[cell(to, vf::words::inverse(a))] = vf::words::invert(out);
        }
    }
    return t;
}

/// Random reduced word for use as a target z.
inline Word random_reduced(std::mt19937& rng, int alpha_size, int len) {
    Word out;
    while (static_cast<int>(out.size()) < len) {
        Letter x =
            static_cast<Letter>(std::uniform_int_distribution<int>(0, alpha_size - 1)(rng));
        if (!out.empty() && x == vf::words::inverse(out.back())) continue;
        out.push_back(x);
    }
    return out;
}

} // namespace corpus
