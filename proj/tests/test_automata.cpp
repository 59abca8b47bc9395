#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "vf/automata.hpp"
#include "vf/errors.hpp"

using namespace vf::automata;
using vf::words::InvAlphabet;
using vf::words::Letter;
using vf::words::Word;

namespace {

// Acceptor of a* over {a, a^-1}: two states, the second a junk-free sink.
Dfa star_a() {
    Dfa a;
    a.alphabet_size = 2;
    a.add_state(true);
    a.initial = 0;
    a.set_step(0, 0, 0);
    return a;
}

Dfa star_aa() {
    Dfa a;
    a.alphabet_size = 2;
    a.add_state(true);
    a.add_state(false);
    a.initial = 0;
    a.set_step(0, 0, 1);
    a.set_step(1, 0, 0);
    return a;
}

Word w(std::initializer_list<Letter> ls) { return Word(ls); }

} // namespace

TEST_CASE("accepts") {
    Dfa a = star_a();
    CHECK(accepts(a, w({0, 0})));
    CHECK(!accepts(a, w({1})));
    CHECK(accepts(a, {}));  // empty word at a terminal initial state
}

TEST_CASE("intersect") {
    Dfa prod = intersect(star_a(), star_aa());
    CHECK(accepts(prod, w({0, 0})));
    CHECK(!accepts(prod, w({0})));
    CHECK(accepts(prod, {}));
}

TEST_CASE("trim removes unreachable and dead states") {
    Dfa a = star_a();
    int dead = a.add_state(false);
    a.set_step(0, 1, dead);
    int unreachable = a.add_state(true);
    a.set_step(unreachable, 0, 0);
    Dfa t = trim(a);
    CHECK(t.state_count() == 1);
    CHECK(accepts(t, w({0, 0})));
    CHECK(!accepts(t, w({1})));
}

TEST_CASE("minimize merges equivalent states") {
    // two equivalent terminal states reached by the two letters
    Dfa a;
    a.alphabet_size = 2;
    a.add_state(false);
    a.add_state(true);
    a.add_state(true);
    a.initial = 0;
    a.set_step(0, 0, 1);
    a.set_step(0, 1, 2);
    Dfa m = minimize(a);
    CHECK(m.state_count() == 2);
    CHECK(accepts(m, w({0})));
    CHECK(accepts(m, w({1})));
    CHECK(!accepts(m, {}));
}

TEST_CASE("enumerate_language") {
    auto words0 = enumerate_language(star_a(), 2);
    CHECK(words0 == std::vector<Word>{{}, {0}, {0, 0}});

    Dfa empty;
    empty.alphabet_size = 2;
    empty.add_state(false);
    empty.initial = 0;
    CHECK(enumerate_language(empty, 3).empty());

    Dfa eps;
    eps.alphabet_size = 2;
    eps.add_state(true);
    eps.initial = 0;
    CHECK(enumerate_language(eps, 0) == std::vector<Word>{{}});
}

TEST_CASE("enumerate_language is stable under minimization") {
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 60; ++trial) {
        Dfa a;
        a.alphabet_size = 3;
        int n = 2 + static_cast<int>(rng() % 5);
        for (int q = 0; q < n; ++q) a.add_state(rng() % 2 == 0);
        a.initial = 0;
        for (int q = 0; q < n; ++q)
            for (Letter l = 0; l < 3; ++l)
                if (rng() % 3) a.set_step(q, l, static_cast<int>(rng() % n));
        Dfa m = minimize(a);
        for (int len = 0; len <= 5; ++len)
            CHECK(enumerate_language(a, len) == enumerate_language(m, len));
    }
}

TEST_CASE("lasso_set: single loop") {
    Dfa a = star_a();
    auto r = lasso_set(a);
    CHECK(!r.infinite);
    auto oms = r.omega_words();
    REQUIRE(oms.size() == 1);
    CHECK(oms[0].preperiod.empty());
    CHECK(oms[0].period == w({0}));
}

TEST_CASE("lasso_set: two loops on one state is uncountable") {
    Dfa a;
    a.alphabet_size = 4;
    a.add_state(true);
    a.initial = 0;
    a.set_step(0, 0, 0);
    a.set_step(0, 2, 0);
    auto r = lasso_set(a);
    CHECK(r.infinite);
    CHECK(!r.lassos.empty());
}

TEST_CASE("lasso_set: tree with two tails") {
    // q0 -a-> q1 (a-loop), q0 -b-> q2 (b-loop): exactly two omega words
    Dfa a;
    a.alphabet_size = 4;
    a.add_state(true);
    a.add_state(true);
    a.add_state(true);
    a.initial = 0;
    a.set_step(0, 0, 1);
    a.set_step(1, 0, 1);
    a.set_step(0, 2, 2);
    a.set_step(2, 2, 2);
    auto r = lasso_set(a);
    CHECK(!r.infinite);
    auto oms = r.omega_words();
    REQUIRE(oms.size() == 2);
    CHECK(oms[0].period == w({0}));
    CHECK(oms[1].period == w({2}));
}

TEST_CASE("lasso omega words are validated by prefix acceptance") {
    // all states terminal: every prefix of an omega word is accepted
    Dfa a;
    a.alphabet_size = 4;
    a.add_state(true);
    a.add_state(true);
    a.initial = 0;
    a.set_step(0, 0, 1);
    a.set_step(1, 2, 0);
    auto r = lasso_set(a);
    CHECK(!r.infinite);
    for (const auto& l : r.lassos) {
        auto om = l.omega();
        for (std::size_t n = 0; n <= l.stem.size() + 3 * l.cycle.size(); ++n)
            CHECK(accepts(a, om.prefix(n)));
    }
}

namespace {

Transducer identity_transducer(int alpha_size) {
    Transducer t;
    t.alphabet_size = alpha_size;
    t.states = 1;
    t.initial = 0;
    t.next.assign(static_cast<std::size_t>(alpha_size), 0);
    t.output.resize(static_cast<std::size_t>(alpha_size));
    for (Letter a = 0; a < alpha_size; ++a) t.output[static_cast<std::size_t>(a)] = Word{a};
    return t;
}

// one state over {a, a^-1}, a -> aa
Transducer doubling_transducer() {
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

} // namespace

TEST_CASE("is_inverse") {
    CHECK(is_inverse(identity_transducer(4)));
    CHECK(is_inverse(doubling_transducer()));
    Transducer bad = identity_transducer(2);
    bad.output[0] = Word{0, 0};  // a -> aa but a^-1 -> a^-1
    CHECK(!is_inverse(bad));
    CHECK_THROWS_AS(InverseTransducer::checked(bad), vf::NotInverseError);
}

TEST_CASE("transduce") {
    auto id = InverseTransducer::checked(identity_transducer(4));
    Word u = {0, 2, 1};
    CHECK(transduce(id.t, u) == u);
    CHECK(transduce(id.t, {}) == Word{});
    auto dbl = InverseTransducer::checked(doubling_transducer());
    CHECK(transduce(dbl.t, {0, 0}) == Word({0, 0, 0, 0}));
}

TEST_CASE("induced_reduced is well defined on reduction classes") {
    auto dbl = InverseTransducer::checked(doubling_transducer());
    vf::words::ReducedWord g;
    g.letters = {0};
    CHECK(induced_reduced(dbl, g).letters == Word({0, 0}));

    std::mt19937 rng(777);
    for (int i = 0; i < 2000; ++i) {
        Word u(static_cast<std::size_t>(rng() % 10));
        for (auto& x : u) x = static_cast<Letter>(rng() % 2);
        auto r = vf::words::free_reduce(u);
        // run state after u equals run state after the reduction of u
        CHECK(dbl.t.run(dbl.t.initial, u) == dbl.t.run(dbl.t.initial, r.letters));
        // reduced image agrees
        CHECK(vf::words::free_reduce(transduce(dbl.t, u)) == induced_reduced(dbl, r));
    }
}

TEST_CASE("transduce respects the defining concatenation recursion") {
    auto dbl = InverseTransducer::checked(doubling_transducer());
    std::mt19937 rng(888);
    for (int i = 0; i < 500; ++i) {
        Word u(static_cast<std::size_t>(rng() % 8));
        for (auto& x : u) x = static_cast<Letter>(rng() % 2);
        Letter a = static_cast<Letter>(rng() % 2);
        Word ua = u;
        ua.push_back(a);
        Word lhs = transduce(dbl.t, ua);
        Word rhs = transduce(dbl.t, u);
        int q = dbl.t.run(dbl.t.initial, u);
        const Word& tail = dbl.t.out(q, a);
        rhs.insert(rhs.end(), tail.begin(), tail.end());
        CHECK(lhs == rhs);
    }
}

TEST_CASE("subgroup_generators on a cyclic language") {
    // automaton accepting b, bb, bbb, ... with H = <b>, b^2 = 1 (Z_2)
    Dfa a;
    a.alphabet_size = 2;
    a.add_state(false);
    a.add_state(true);
    a.initial = 0;
    a.set_step(0, 0, 1);
    a.set_step(1, 0, 1);

    // elements of Z_2 as 0/1
    SubgroupOps<int> ops;
    ops.eval = [](const Word& w_) { return static_cast<int>(w_.size() % 2); };
    ops.member = [](const int&) { return true; };
    ops.mul = [](const int& x, const int& y) { return (x + y) % 2; };
    ops.inv = [](const int& x) { return x; };
    ops.norm = [](const int& x) { return x; };
    ops.key = [](const int& x) { return std::to_string(x); };
    ops.ball = [](int) { return std::vector<int>{0, 1}; };
    ops.identity = 0;

    auto res = subgroup_generators<int>(a, ops, {});
    CHECK(res.verified);
    REQUIRE(res.generators.size() == 1);
    CHECK(res.generators[0] == 1);
}

TEST_CASE("subgroup_generators on the empty-word language") {
    Dfa a;
    a.alphabet_size = 2;
    a.add_state(true);
    a.initial = 0;
    SubgroupOps<int> ops;
    ops.eval = [](const Word&) { return 0; };
    ops.member = [](const int& x) { return x == 0; };
    ops.mul = [](const int& x, const int& y) { return x + y; };
    ops.inv = [](const int& x) { return -x; };
    ops.norm = [](const int& x) { return std::abs(x); };
    ops.key = [](const int& x) { return std::to_string(x); };
    ops.ball = [](int r) {
        std::vector<int> out;
        for (int i = -r; i <= r; ++i) out.push_back(i);
        return out;
    };
    ops.identity = 0;
    auto res = subgroup_generators<int>(a, ops, {});
    CHECK(res.verified);
    CHECK(res.generators.empty());
}

TEST_CASE("DOT export is deterministic and well formed") {
    InvAlphabet alpha({"a"});
    Dfa a = star_a();
    auto d1 = to_dot(a, alpha);
    auto d2 = to_dot(a, alpha);
    CHECK(d1 == d2);
    CHECK(d1.find("digraph") != std::string::npos);
    CHECK(d1.find("doublecircle") != std::string::npos);
}
