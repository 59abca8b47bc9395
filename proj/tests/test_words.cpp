#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "vf/errors.hpp"
#include "vf/words.hpp"

using namespace vf::words;

namespace {

InvAlphabet ab() { return InvAlphabet({"a", "b"}); }
InvAlphabet abc() { return InvAlphabet({"a", "b", "c"}); }

Word W(const InvAlphabet& alpha, const std::string& text) { return parse_word(alpha, text); }

Word random_word(std::mt19937& rng, int alpha_size, int max_len) {
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_int_distribution<int> letter(0, alpha_size - 1);
    Word w(static_cast<std::size_t>(len(rng)));
    for (auto& x : w) x = letter(rng);
    return w;
}

OmegaWord random_omega(std::mt19937& rng, int alpha_size, int max_len) {
    Word pre = random_word(rng, alpha_size, max_len);
    Word per = random_word(rng, alpha_size, max_len - 1);
    per.push_back(static_cast<Letter>(
        std::uniform_int_distribution<int>(0, alpha_size - 1)(rng)));
    return omega_canonicalize(pre, per);
}

} // namespace

TEST_CASE("free_reduce removes cancelling factors") {
    auto alpha = abc();
    CHECK(free_reduce(W(alpha, "a a^-1 b")).letters == W(alpha, "b"));
    CHECK(free_reduce(W(alpha, "1")).letters == Word{});
    CHECK(free_reduce(W(alpha, "a b b^-1 a^-1 c")).letters == W(alpha, "c"));
}

TEST_CASE("free_reduce properties") {
    auto alpha = abc();
    std::mt19937 rng(12345);
    for (int i = 0; i < 2000; ++i) {
        Word w = random_word(rng, alpha.size(), 12);
        auto r = free_reduce(w);
        CHECK(is_reduced(r.letters));
        CHECK(r.size() <= w.size());
        // idempotent
        CHECK(free_reduce(r.letters) == r);
        // u u^-1 reduces to the empty word
        Word ui = invert(w);
        Word prod = w;
        prod.insert(prod.end(), ui.begin(), ui.end());
        CHECK(free_reduce(prod).empty());
    }
}

TEST_CASE("invert is an involution and mirrors reducedness") {
    auto alpha = ab();
    CHECK(invert(W(alpha, "a b")) == W(alpha, "b^-1 a^-1"));
    CHECK(invert(Word{}) == Word{});
    std::mt19937 rng(99);
    for (int i = 0; i < 500; ++i) {
        Word w = random_word(rng, alpha.size(), 10);
        CHECK(invert(invert(w)) == w);
        CHECK(is_reduced(invert(free_reduce(w).letters)));
    }
}

TEST_CASE("shortlex basics") {
    auto alpha = abc();
    CHECK(shortlex_less(alpha, W(alpha, "a"), W(alpha, "a a")));
    CHECK(!shortlex_less(alpha, W(alpha, "a b"), W(alpha, "a b")));
    // order a < c under an explicit ordering
    auto custom = InvAlphabet::with_order(
        {"a", "b", "c"}, {"a", "c", "a^-1", "c^-1", "b", "b^-1"});
    CHECK(shortlex_less(custom, W(custom, "a c"), W(custom, "c a")));
    CHECK(!shortlex_less(custom, W(custom, "c a"), W(custom, "a c")));
    // b ranks above a^-1 in that order
    CHECK(shortlex_less(custom, W(custom, "a^-1"), W(custom, "b")));
}

TEST_CASE("shortlex is a strict total order compatible with multiplication") {
    auto alpha = ab();
    std::mt19937 rng(7);
    for (int i = 0; i < 2000; ++i) {
        Word u = random_word(rng, alpha.size(), 6);
        Word v = random_word(rng, alpha.size(), 6);
        Word w = random_word(rng, alpha.size(), 4);
        bool uv = shortlex_less(alpha, u, v);
        bool vu = shortlex_less(alpha, v, u);
        CHECK((u == v ? (!uv && !vu) : (uv != vu)));
        if (uv) {
            Word wu = w, wv = w;
            wu.insert(wu.end(), u.begin(), u.end());
            wv.insert(wv.end(), v.begin(), v.end());
            CHECK(shortlex_less(alpha, wu, wv));
            Word uw = u, vw = v;
            uw.insert(uw.end(), w.begin(), w.end());
            vw.insert(vw.end(), w.begin(), w.end());
            CHECK(shortlex_less(alpha, uw, vw));
        }
    }
}

TEST_CASE("omega canonical form") {
    auto alpha = abc();
    // a·(aa)^ω = a^ω
    auto w1 = omega_canonicalize(W(alpha, "a"), W(alpha, "a a"));
    CHECK(w1.preperiod == Word{});
    CHECK(w1.period == W(alpha, "a"));
    // (abab)^ω has primitive period ab
    auto w2 = omega_canonicalize(Word{}, W(alpha, "a b a b"));
    CHECK(w2.period == W(alpha, "a b"));
    CHECK(w2.preperiod == Word{});
    // ab·(bab)^ω: compare letter streams against the canonical form
    auto w3 = omega_canonicalize(W(alpha, "a b"), W(alpha, "b a b"));
    OmegaWord raw;
    raw.preperiod = W(alpha, "a b");
    raw.period = W(alpha, "b a b");
    for (std::size_t i = 0; i < raw.preperiod.size() + 2 * raw.period.size(); ++i)
        CHECK(w3.at(i) == raw.at(i));
    CHECK(w3.preperiod.empty());  // ab(bab)^ω = (abb)^ω

    CHECK_THROWS_AS(omega_canonicalize(Word{}, Word{}), vf::Error);
}

TEST_CASE("omega equality agrees with letter streams") {
    std::mt19937 rng(2024);
    for (int i = 0; i < 3000; ++i) {
        OmegaWord x = random_omega(rng, 4, 5);
        OmegaWord y = random_omega(rng, 4, 5);
        std::size_t cutoff = std::max(x.preperiod.size(), y.preperiod.size()) +
                             std::lcm(x.period.size(), y.period.size());
        bool streams_equal = true;
        for (std::size_t k = 0; k < cutoff; ++k)
            if (x.at(k) != y.at(k)) { streams_equal = false; break; }
        CHECK((x == y) == streams_equal);
    }
}

TEST_CASE("common prefix") {
    auto alpha = abc();
    AnyWord u = W(alpha, "a b c");
    AnyWord v = W(alpha, "a b c^-1");
    CHECK(std::get<Word>(common_prefix(u, v)) == W(alpha, "a b"));
    CHECK(std::get<Word>(common_prefix(u, u)) == W(alpha, "a b c"));

    OmegaWord aw = omega_canonicalize(Word{}, W(alpha, "a"));
    AnyWord alpha_inf = aw;
    CHECK(std::get<OmegaWord>(common_prefix(alpha_inf, alpha_inf)) == aw);
    // (a^ω, aaac x...) diverges at position 4
    AnyWord fin = W(alpha, "a a a c b");
    CHECK(common_prefix_length(alpha_inf, fin) == std::size_t{3});
}

TEST_CASE("d3 values and ultrametric inequality") {
    auto alpha = abc();
    OmegaWord aw = omega_canonicalize(Word{}, W(alpha, "a"));
    CHECK(d3(aw, aw) == 0.0);
    CHECK(d3(AnyWord{aw}, AnyWord{W(alpha, "a a a c")}) == doctest::Approx(0.125));

    std::mt19937 rng(4242);
    for (int i = 0; i < 10000; ++i) {
        AnyWord x = random_omega(rng, 4, 4);
        AnyWord y = random_omega(rng, 4, 4);
        AnyWord z = random_omega(rng, 4, 4);
        CHECK(d3(x, z) <= std::max(d3(x, y), d3(y, z)) + 1e-15);
        // |x ∧ z| >= min(|x ∧ y|, |y ∧ z|)
        auto xz = common_prefix_length(x, z);
        auto xy = common_prefix_length(x, y);
        auto yz = common_prefix_length(y, z);
        std::size_t lxz = xz.value_or(SIZE_MAX);
        std::size_t lxy = xy.value_or(SIZE_MAX);
        std::size_t lyz = yz.value_or(SIZE_MAX);
        CHECK(lxz >= std::min(lxy, lyz));
    }
}

TEST_CASE("word formatting round trip") {
    auto alpha = abc();
    CHECK(format_word(alpha, Word{}) == "1");
    CHECK(parse_word(alpha, "1") == Word{});
    CHECK(format_word(alpha, W(alpha, "a b^-1 c")) == "a b^-1 c");
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        Word w = random_word(rng, alpha.size(), 8);
        CHECK(parse_word(alpha, format_word(alpha, w)) == w);
    }
    CHECK_THROWS_AS(parse_word(alpha, "a q"), vf::UnknownLetterError);
}
