#include "vf/words.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <sstream>

#include "vf/errors.hpp"

namespace vf::words {

InvAlphabet::InvAlphabet(const std::vector<std::string>& base_names) {
    names_.reserve(base_names.size() * 2);
    for (const auto& n : base_names) {
        names_.push_back(n);
        names_.push_back(n + "^-1");
    }
    rank_.resize(names_.size());
    by_rank_.resize(names_.size());
    for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
        rank_[static_cast<std::size_t>(i)] = i;
        by_rank_[static_cast<std::size_t>(i)] = i;
    }
}

InvAlphabet InvAlphabet::with_order(const std::vector<std::string>& base_names,
                                    const std::vector<std::string>& order_tokens) {
    InvAlphabet a(base_names);
    if (order_tokens.size() != a.names_.size())
        throw ParseError("letter order must list every letter of the doubled alphabet exactly once");
    std::vector<int> seen(a.names_.size(), 0);
    for (std::size_t r = 0; r < order_tokens.size(); ++r) {
        Letter l = a.letter(order_tokens[r]);
        if (seen[static_cast<std::size_t>(l)]++)
            throw ParseError("duplicate letter in order: " + order_tokens[r]);
        a.rank_[static_cast<std::size_t>(l)] = static_cast<int>(r);
        a.by_rank_[r] = l;
    }
    return a;
}

Letter InvAlphabet::letter(const std::string& token) const {
    if (auto l = try_letter(token)) return *l;
    throw UnknownLetterError("unknown letter: '" + token + "'");
}

std::optional<Letter> InvAlphabet::try_letter(const std::string& token) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == token) return static_cast<Letter>(i);
    return std::nullopt;
}

bool is_reduced(const Word& w) {
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i] == inverse(w[i - 1])) return false;
    return true;
}

ReducedWord::ReducedWord(Word w) : letters(std::move(w)) {
    assert(is_reduced(letters));
}

ReducedWord free_reduce(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (Letter a : w) {
        if (!out.empty() && out.back() == inverse(a))
            out.pop_back();
        else
            out.push_back(a);
    }
    ReducedWord r;
    r.letters = std::move(out);
    return r;
}

Word invert(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(inverse(*it));
    return out;
}

ReducedWord reduced_product(const Word& u, const Word& v) {
    Word w = u;
    w.insert(w.end(), v.begin(), v.end());
    return free_reduce(w);
}

bool shortlex_less(const InvAlphabet& alpha, const Word& u, const Word& v) {
    if (u.size() != v.size()) return u.size() < v.size();
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] != v[i]) return alpha.rank(u[i]) < alpha.rank(v[i]);
    }
    return false;
}

Letter OmegaWord::at(std::size_t i) const {
    if (i < preperiod.size()) return preperiod[i];
    return period[(i - preperiod.size()) % period.size()];
}

Word OmegaWord::prefix(std::size_t n) const {
    Word out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
    return out;
}

namespace {

// Length of the primitive root of w (the shortest v with w = v^k).
std::size_t primitive_root_length(const Word& w) {
    const std::size_t n = w.size();
    // failure function of KMP
    std::vector<std::size_t> border(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t b = border[i - 1];
        while (b > 0 && w[i] != w[b]) b = border[b - 1];
        if (w[i] == w[b]) ++b;
        border[i] = b;
    }
    const std::size_t p = n - border[n - 1];
    return (n % p == 0) ? p : n;
}

} // namespace

OmegaWord omega_canonicalize(Word preperiod, Word period) {
    if (period.empty()) throw Error("omega word must have a nonempty period");
    const std::size_t root = primitive_root_length(period);
    period.resize(root);
    // Pull the preperiod back while its last letter matches the period's last
    // letter; u·x·(v·x)^ω = u·(x·v)^ω.
    while (!preperiod.empty() && preperiod.back() == period.back()) {
        preperiod.pop_back();
        std::rotate(period.begin(), period.end() - 1, period.end());
    }
    OmegaWord w;
    w.preperiod = std::move(preperiod);
    w.period = std::move(period);
    return w;
}

std::size_t length_or_max(const AnyWord& a) {
    if (std::holds_alternative<Word>(a)) return std::get<Word>(a).size();
    return SIZE_MAX;
}

namespace {

Letter letter_at(const AnyWord& a, std::size_t i) {
    if (std::holds_alternative<Word>(a)) return std::get<Word>(a)[i];
    return std::get<OmegaWord>(a).at(i);
}

// Two eventually periodic streams agree everywhere iff they agree on the
// first max(|p1|,|p2|) + lcm(|v1|,|v2|) letters.
std::size_t equality_cutoff(const AnyWord& a, const AnyWord& b) {
    const auto& wa = std::get<OmegaWord>(a);
    const auto& wb = std::get<OmegaWord>(b);
    std::size_t pre = std::max(wa.preperiod.size(), wb.preperiod.size());
    std::size_t l = std::lcm(wa.period.size(), wb.period.size());
    return pre + l;
}

} // namespace

std::optional<std::size_t> common_prefix_length(const AnyWord& a, const AnyWord& b) {
    const std::size_t la = length_or_max(a), lb = length_or_max(b);
    std::size_t bound = std::min(la, lb);
    if (la == SIZE_MAX && lb == SIZE_MAX) bound = equality_cutoff(a, b);
    for (std::size_t i = 0; i < bound; ++i)
        if (letter_at(a, i) != letter_at(b, i)) return i;
    if (la == SIZE_MAX && lb == SIZE_MAX) return std::nullopt;  // equal infinite words
    return bound;
}

AnyWord common_prefix(const AnyWord& a, const AnyWord& b) {
    auto n = common_prefix_length(a, b);
    if (!n) return a;
    Word out;
    out.reserve(*n);
    for (std::size_t i = 0; i < *n; ++i) out.push_back(letter_at(a, i));
    return out;
}

double d3(const AnyWord& a, const AnyWord& b) {
    auto n = common_prefix_length(a, b);
    if (!n) return 0.0;                                   // equal infinite words
    const std::size_t la = length_or_max(a), lb = length_or_max(b);
    if (*n == la && *n == lb) return 0.0;                 // equal finite words
    return std::ldexp(1.0, -static_cast<int>(*n));
}

std::string format_word(const InvAlphabet& alpha, const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += alpha.name(w[i]);
    }
    return out;
}

std::string format_omega(const InvAlphabet& alpha, const OmegaWord& w) {
    std::string out;
    if (!w.preperiod.empty()) out += format_word(alpha, w.preperiod) + " . ";
    out += "(" + format_word(alpha, w.period) + ")^w";
    return out;
}

Word parse_word(const InvAlphabet& alpha, const std::string& text) {
    Word out;
    std::istringstream in(text);
    std::string token;
    std::vector<std::string> tokens;
    while (in >> token) tokens.push_back(token);
    if (tokens.size() == 1 && tokens[0] == "1" && !alpha.try_letter("1"))
        return out;  // "1" denotes the empty word
    for (const auto& t : tokens) out.push_back(alpha.letter(t));
    return out;
}

std::size_t WordHash::operator()(const Word& w) const {
    std::size_t h = 1469598103934665603ull;
    for (Letter a : w) {
        h ^= static_cast<std::size_t>(a) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace vf::words
