#include "vf/group_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vf/errors.hpp"

namespace vf::group_io {

using json = nlohmann::ordered_json;
using group::Element;
using group::Endomorphism;
using group::VfPresentation;
using words::InvAlphabet;
using words::ReducedWord;
using words::Word;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError("group file, " + where + ": " + what);
}

ReducedWord parse_reduced(const InvAlphabet& alpha, const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a word string");
    Word w;
    try {
        w = words::parse_word(alpha, j.get<std::string>());
    } catch (const Error& e) {
        fail(where, e.what());
    }
    return words::free_reduce(w);
}

Element parse_element(const VfPresentation& p, const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("word") || !j.contains("coset"))
        fail(where, "expected {word, coset}");
    Element e;
    e.w = parse_reduced(p.free_alphabet, j["word"], where + ".word");
    if (!j["coset"].is_number_integer()) fail(where + ".coset", "expected an integer");
    e.coset = j["coset"].get<int>();
    if (e.coset < 0 || e.coset >= p.coset_count) fail(where + ".coset", "out of range");
    return e;
}

Endomorphism parse_endo(const VfPresentation& p, const json& j, const std::string& where) {
    Endomorphism phi;
    if (!j.is_object() || !j.contains("free") || !j.contains("cosets"))
        fail(where, "expected {free, cosets}");
    phi.free_images.resize(static_cast<std::size_t>(p.free_alphabet.base_size()));
    for (const auto& [name, val] : j["free"].items()) {
        auto l = p.free_alphabet.try_letter(name);
        if (!l || words::is_inverse_letter(*l)) fail(where + ".free", "unknown base letter " + name);
        phi.free_images[static_cast<std::size_t>(*l >> 1)] =
            parse_element(p, val, where + ".free." + name);
    }
    phi.coset_images.resize(static_cast<std::size_t>(p.coset_count));
    for (const auto& [key, val] : j["cosets"].items()) {
        int i = -1;
        try {
            i = std::stoi(key);
        } catch (...) {
            fail(where + ".cosets", "keys must be coset indices");
        }
        if (i < 0 || i >= p.coset_count) fail(where + ".cosets", "coset index out of range");
        phi.coset_images[static_cast<std::size_t>(i)] =
            parse_element(p, val, where + ".cosets." + key);
    }
    return phi;
}

} // namespace

GroupFile parse_group_file(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("group file is not valid JSON: ") + e.what());
    }
    GroupFile g;
    VfPresentation& p = g.presentation;

    if (!doc.contains("version") || doc["version"].get<int>() != 1)
        fail("version", "expected version 1");
    if (!doc.contains("free_generators") || !doc["free_generators"].is_array())
        fail("free_generators", "expected an array of names");
    std::vector<std::string> free_names = doc["free_generators"].get<std::vector<std::string>>();
    p.free_alphabet = InvAlphabet(free_names);

    if (!doc.contains("coset_count") || !doc["coset_count"].is_number_integer())
        fail("coset_count", "expected an integer");
    p.coset_count = doc["coset_count"].get<int>();
    if (p.coset_count < 1) fail("coset_count", "must be at least 1");

    // conj: array over cosets of {letter: word}; inverse letters derived.
    if (!doc.contains("conj") || !doc["conj"].is_array() ||
        static_cast<int>(doc["conj"].size()) != p.coset_count)
        fail("conj", "expected one map per coset");
    p.conj.resize(static_cast<std::size_t>(p.coset_count));
    for (int i = 0; i < p.coset_count; ++i) {
        auto& row = p.conj[static_cast<std::size_t>(i)];
        row.resize(static_cast<std::size_t>(p.free_alphabet.size()));
        for (words::Letter x = 0; x < p.free_alphabet.size(); x += 2) {
            const std::string name = p.free_alphabet.name(x);
            const json& cell = doc["conj"][static_cast<std::size_t>(i)];
            if (!cell.contains(name)) fail("conj[" + std::to_string(i) + "]", "missing " + name);
            row[static_cast<std::size_t>(x)] =
                parse_reduced(p.free_alphabet, cell[name], "conj[" + std::to_string(i) + "]." + name);
            ReducedWord invw;
            invw.letters = words::invert(row[static_cast<std::size_t>(x)].letters);
            row[static_cast<std::size_t>(words::inverse(x))] = invw;
        }
    }

    // mult: coset_count x coset_count matrix of {word, coset}.
    if (!doc.contains("mult") || !doc["mult"].is_array() ||
        static_cast<int>(doc["mult"].size()) != p.coset_count)
        fail("mult", "expected a coset_count x coset_count matrix");
    p.mult.resize(static_cast<std::size_t>(p.coset_count));
    for (int i = 0; i < p.coset_count; ++i) {
        const json& row = doc["mult"][static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != p.coset_count)
            fail("mult[" + std::to_string(i) + "]", "row has wrong length");
        auto& out_row = p.mult[static_cast<std::size_t>(i)];
        out_row.resize(static_cast<std::size_t>(p.coset_count));
        for (int j = 0; j < p.coset_count; ++j) {
            const json& cell = row[static_cast<std::size_t>(j)];
            const std::string where = "mult[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            if (!cell.is_object() || !cell.contains("word") || !cell.contains("coset"))
                fail(where, "expected {word, coset}");
            out_row[static_cast<std::size_t>(j)].f =
                parse_reduced(p.free_alphabet, cell["word"], where + ".word");
            out_row[static_cast<std::size_t>(j)].coset = cell["coset"].get<int>();
            if (out_row[static_cast<std::size_t>(j)].coset < 0 ||
                out_row[static_cast<std::size_t>(j)].coset >= p.coset_count)
                fail(where + ".coset", "out of range");
        }
    }

    // generators: external name -> {word, coset}; declaration order defines
    // the external alphabet.
    if (!doc.contains("generators") || !doc["generators"].is_object())
        fail("generators", "expected a map of external names");
    std::vector<std::string> ext_names;
    for (const auto& [name, val] : doc["generators"].items()) ext_names.push_back(name);
    if (doc.contains("letter_order")) {
        p.external_alphabet = InvAlphabet::with_order(
            ext_names, doc["letter_order"].get<std::vector<std::string>>());
    } else {
        p.external_alphabet = InvAlphabet(ext_names);
    }
    for (const auto& [name, val] : doc["generators"].items())
        p.generator_images.push_back(parse_element(p, val, "generators." + name));

    if (doc.contains("endomorphism"))
        g.endomorphism = parse_endo(p, doc["endomorphism"], "endomorphism");
    if (doc.contains("endomorphism_inverse"))
        g.endomorphism_inverse = parse_endo(p, doc["endomorphism_inverse"], "endomorphism_inverse");
    return g;
}

GroupFile load_group_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open group file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_group_file(buf.str());
}

namespace {

json endo_to_json(const VfPresentation& p, const Endomorphism& phi) {
    json free = json::object();
    for (words::Letter x = 0; x < p.free_alphabet.size(); x += 2) {
        const Element& e = phi.free_images[static_cast<std::size_t>(x >> 1)];
        free[p.free_alphabet.name(x)] = {
            {"word", words::format_word(p.free_alphabet, e.w.letters)}, {"coset", e.coset}};
    }
    json cosets = json::object();
    for (int i = 0; i < p.coset_count; ++i) {
        const Element& e = phi.coset_images[static_cast<std::size_t>(i)];
        cosets[std::to_string(i)] = {
            {"word", words::format_word(p.free_alphabet, e.w.letters)}, {"coset", e.coset}};
    }
    return json{{"free", free}, {"cosets", cosets}};
}

} // namespace

std::string format_group_file(const GroupFile& g) {
    const VfPresentation& p = g.presentation;
    json doc;
    doc["version"] = 1;
    std::vector<std::string> free_names;
    for (words::Letter x = 0; x < p.free_alphabet.size(); x += 2)
        free_names.push_back(p.free_alphabet.name(x));
    doc["free_generators"] = free_names;
    doc["coset_count"] = p.coset_count;
    json conj = json::array();
    for (int i = 0; i < p.coset_count; ++i) {
        json row = json::object();
        for (words::Letter x = 0; x < p.free_alphabet.size(); x += 2)
            row[p.free_alphabet.name(x)] = words::format_word(
                p.free_alphabet, p.conj[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)].letters);
        conj.push_back(row);
    }
    doc["conj"] = conj;
    json mult = json::array();
    for (int i = 0; i < p.coset_count; ++i) {
        json row = json::array();
        for (int j = 0; j < p.coset_count; ++j) {
            const auto& mp = p.mult[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            row.push_back({{"word", words::format_word(p.free_alphabet, mp.f.letters)},
                           {"coset", mp.coset}});
        }
        mult.push_back(row);
    }
    doc["mult"] = mult;
    json gens = json::object();
    for (words::Letter x = 0; x < p.external_alphabet.size(); x += 2) {
        const Element& e = p.generator_images[static_cast<std::size_t>(x >> 1)];
        gens[p.external_alphabet.name(x)] = {
            {"word", words::format_word(p.free_alphabet, e.w.letters)}, {"coset", e.coset}};
    }
    doc["generators"] = gens;
    std::vector<std::string> order;
    for (words::Letter l : p.external_alphabet.ordered_letters())
        order.push_back(p.external_alphabet.name(l));
    doc["letter_order"] = order;
    if (g.endomorphism) doc["endomorphism"] = endo_to_json(p, *g.endomorphism);
    if (g.endomorphism_inverse)
        doc["endomorphism_inverse"] = endo_to_json(p, *g.endomorphism_inverse);
    return doc.dump(2) + "\n";
}

} // namespace vf::group_io
