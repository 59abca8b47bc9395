#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "vf/errors.hpp"
#include "vf/group.hpp"
#include "vf/group_io.hpp"

using namespace vf::group;
using vf::group_io::GroupFile;
using vf::group_io::load_group_file;
using vf::words::free_reduce;
using vf::words::Word;

namespace {

const std::string kData = VF_DATA_DIR;

GroupFile load(const std::string& name) {
    auto g = load_group_file(kData + "/" + name);
    auto report = validate_presentation(g.presentation);
    REQUIRE(report.ok());
    return g;
}

Element elem(const VfPresentation& p, const std::string& w, int coset) {
    return Element{free_reduce(vf::words::parse_word(p.free_alphabet, w)), coset};
}

std::set<std::string> keys(const std::vector<Element>& v) {
    std::set<std::string> out;
    for (const auto& e : v) out.insert(element_key(e));
    return out;
}

} // namespace

TEST_CASE("zxz2 presentation validates and multiplies per the example") {
    auto g = load("zxz2.group");
    auto& p = g.presentation;

    // b^2 = 1
    Element b = elem(p, "1", 1);
    CHECK(multiply(p, b, b) == p.identity());
    CHECK(invert_elem(p, b) == b);

    // pi(a) = (a, b0), pi(c) = (a, b1), pi(a a^-1) = 1
    auto ext = [&](const std::string& w) {
        return eval_word(p, vf::words::parse_word(p.external_alphabet, w));
    };
    CHECK(ext("a") == elem(p, "a", 0));
    CHECK(ext("c") == elem(p, "a", 1));
    CHECK(ext("a a^-1") == p.identity());
    // c^2 = a^2 in Z x Z2
    CHECK(ext("c c") == elem(p, "a a", 0));
}

TEST_CASE("group axioms on random elements") {
    for (const char* name : {"zxz2.group", "f2_swap.group", "z2z2_swap.group",
                             "f2xz2_shear.group"}) {
        auto g = load(name);
        auto& p = g.presentation;
        auto ball = ball_elements(p, 3);
        std::mt19937 rng(1234);
        std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
        for (int i = 0; i < 2500; ++i) {
            const Element& x = ball[pick(rng)];
            const Element& y = ball[pick(rng)];
            const Element& z = ball[pick(rng)];
            CHECK(multiply(p, multiply(p, x, y), z) == multiply(p, x, multiply(p, y, z)));
            CHECK(multiply(p, x, invert_elem(p, x)) == p.identity());
            CHECK(multiply(p, invert_elem(p, x), x) == p.identity());
            CHECK(multiply(p, x, p.identity()) == x);
        }
    }
}

TEST_CASE("broken tables are reported") {
    auto g = load_group_file(kData + "/zxz2.group");
    SUBCASE("broken mult breaks associativity or inverses") {
        g.presentation.mult[1][1].coset = 1;
        auto report = validate_presentation(g.presentation);
        CHECK(!report.ok());
    }
    SUBCASE("conj a -> a^2 is not invertible on F") {
        g.presentation.conj[1][0] = free_reduce(
            vf::words::parse_word(g.presentation.free_alphabet, "a a"));
        g.presentation.conj[1][1] = free_reduce(
            vf::words::parse_word(g.presentation.free_alphabet, "a^-1 a^-1"));
        auto report = validate_presentation(g.presentation);
        CHECK(!report.ok());
    }
}

TEST_CASE("parse errors carry field diagnostics") {
    CHECK_THROWS_AS(vf::group_io::parse_group_file("{"), vf::ParseError);
    CHECK_THROWS_AS(vf::group_io::parse_group_file("{\"version\": 1}"), vf::ParseError);
    // round trip
    auto g = load("zxz2.group");
    auto text = vf::group_io::format_group_file(g);
    auto g2 = vf::group_io::parse_group_file(text);
    CHECK(g2.presentation.coset_count == 2);
    CHECK(g2.endomorphism.has_value());
}

TEST_CASE("zxz2 doubling endomorphism validates; broken image does not") {
    auto g = load("zxz2.group");
    auto& p = g.presentation;
    REQUIRE(g.endomorphism.has_value());
    CHECK(validate_endomorphism(p, *g.endomorphism).ok());

    // identity is always valid
    auto id = load("zxz2_identity.group");
    CHECK(validate_endomorphism(id.presentation, *id.endomorphism).ok());

    // a -> (a,0), b -> (a,1) violates b^2 = 1
    Endomorphism bad;
    bad.free_images = {elem(p, "a", 0)};
    bad.coset_images = {p.identity(), elem(p, "a", 1)};
    CHECK(!validate_endomorphism(p, bad).ok());
}

TEST_CASE("apply_endo matches the transducer route") {
    for (const char* name :
         {"zxz2.group", "f2_shear.group", "z2z2_inner.group", "f2xz2_swapz.group"}) {
        auto g = load(name);
        auto& p = g.presentation;
        REQUIRE(g.endomorphism.has_value());
        const auto& phi = *g.endomorphism;
        REQUIRE(validate_endomorphism(p, phi).ok());
        auto t = vf::automata::InverseTransducer::checked(derive_transducer(p, phi));
        for (const auto& e : ball_elements(p, 4)) {
            Element img = apply_endo(p, phi, e);
            // free route: phi_0(w) via the transducer, eta via the delta-run
            auto phi0 = induced_reduced(t, e.w);
            int eta = t.t.run(0, e.w.letters);
            Element via = multiply(p, Element{phi0, eta},
                                   phi.coset_images[static_cast<std::size_t>(e.coset)]);
            CHECK(img == via);
        }
    }
}

TEST_CASE("zxz2 doubling: apply_endo on the paper values") {
    auto g = load("zxz2.group");
    auto& p = g.presentation;
    const auto& phi = *g.endomorphism;
    CHECK(apply_endo(p, phi, elem(p, "a", 0)) == elem(p, "a a", 0));
    CHECK(apply_endo(p, phi, p.identity()) == p.identity());
    CHECK(apply_endo(p, phi, elem(p, "1", 1)) == elem(p, "1", 1));  // b fixed
}

TEST_CASE("fix_subgroup on zxz2 doubling finds {1, b}") {
    auto g = load("zxz2.group");
    auto& p = g.presentation;
    auto report = fix_subgroup(p, *g.endomorphism);
    CHECK(report.verified);
    CHECK(!report.partial);
    // Y = {(0,0), (1,0)} with z = 1
    std::set<std::pair<int, int>> pairs(report.pairs.begin(), report.pairs.end());
    CHECK(pairs == std::set<std::pair<int, int>>{{0, 0}, {1, 0}});
    for (const auto& z : report.z_words) CHECK(z.empty());
    // generators: exactly b
    REQUIRE(report.generators.size() == 1);
    CHECK(report.generators[0] == elem(p, "1", 1));
    // oracle cross-check
    CHECK(keys(brute_fix_oracle(p, *g.endomorphism, 5)) ==
          keys({p.identity(), elem(p, "1", 1)}));
}

TEST_CASE("fix_subgroup on the identity endomorphism recovers the group") {
    auto g = load("zxz2_identity.group");
    auto& p = g.presentation;
    auto report = fix_subgroup(p, *g.endomorphism);
    CHECK(report.verified);
    // every ball element is fixed and generated
    CHECK(report.missed.empty());
}

TEST_CASE("fix_subgroup on the F2 swap is trivial") {
    auto g = load("f2_swap.group");
    auto& p = g.presentation;
    auto oracle = brute_fix_oracle(p, *g.endomorphism, 8);
    CHECK(keys(oracle) == keys({p.identity()}));
    auto report = fix_subgroup(p, *g.endomorphism);
    CHECK(report.verified);
    CHECK(report.generators.empty());
}

TEST_CASE("fix_subgroup generators are all fixed") {
    for (const char* name : {"zxz2.group", "f2_shear.group", "z2z2_swap.group",
                             "z2z2_inner.group", "f2xz2_swapz.group", "f2xz2_shear.group"}) {
        auto g = load(name);
        auto& p = g.presentation;
        auto report = fix_subgroup(p, *g.endomorphism);
        CHECK(report.verified);
        for (const auto& e : report.generators)
            CHECK(apply_endo(p, *g.endomorphism, e) == e);
    }
}

TEST_CASE("eta factorization: coset of the image equals the delta-run") {
    auto g = load("f2xz2_shear.group");
    auto& p = g.presentation;
    const auto& phi = *g.endomorphism;
    auto t = vf::automata::InverseTransducer::checked(derive_transducer(p, phi));
    for (const auto& e : ball_elements(p, 5)) {
        if (e.coset != 0) continue;
        CHECK(apply_endo(p, phi, e).coset == t.t.run(0, e.w.letters));
    }
}
