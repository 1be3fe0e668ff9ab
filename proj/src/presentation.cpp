#include "hbg/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "lines.hpp"

namespace hbg {

namespace {

bool valid_label(const std::string& label) {
    if (label.empty())
        return false;
    for (char c : label)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_' && c != '-')
            return false;
    return true;
}

std::string loc(const std::string& where, int line) {
    return where.empty() ? "line " + std::to_string(line) : where + ":" + std::to_string(line);
}

} // namespace

// ------------------------------------------------------------------ RelRef

RelRef RelRef::parse(const std::string& text, const std::string& where) {
    std::string t = detail::trim(text);
    if (!t.empty() && t[0] == '#') {
        std::string digits = t.substr(1);
        if (digits.empty() ||
            !std::all_of(digits.begin(), digits.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw parse_error(where, "malformed relation index '" + t + "'");
        int n = std::stoi(digits);
        if (n < 1)
            throw parse_error(where, "relation index must be at least 1");
        return by_index(n);
    }
    if (!valid_label(t))
        throw parse_error(where, "malformed relation reference '" + t + "'");
    return by_label(t);
}

std::string RelRef::str() const {
    return label.empty() ? "#" + std::to_string(index) : label;
}

// ------------------------------------------------------------ Presentation

Presentation::Presentation(AlphabetPtr alphabet, std::vector<Relation> relations)
    : alphabet_(std::move(alphabet)), relations_(std::move(relations)) {
    if (!alphabet_)
        throw invariant_error("presentation needs an alphabet");
    std::unordered_set<std::string> seen;
    for (Relation& rel : relations_) {
        if (!rel.label.empty()) {
            if (!valid_label(rel.label))
                throw invariant_error("invalid relation label '" + rel.label + "'");
            if (!seen.insert(rel.label).second)
                throw invariant_error("duplicate relation label '" + rel.label + "'");
        }
        const AlphabetPtr& wa = rel.relator.alphabet();
        if (!wa)
            rel.relator = Word(alphabet_);
        else if (wa != alphabet_ && !wa->same_names(*alphabet_))
            throw invariant_error("relator alphabet does not match the presentation");
    }
}

int Presentation::index_of(const RelRef& ref) const {
    if (!ref.label.empty()) {
        for (size_t i = 0; i < relations_.size(); ++i)
            if (relations_[i].label == ref.label)
                return static_cast<int>(i);
        throw lookup_error("no relation labelled '" + ref.label + "'");
    }
    if (ref.index < 1 || ref.index > size())
        throw lookup_error("relation index #" + std::to_string(ref.index) +
                           " out of range (1.." + std::to_string(size()) + ")");
    return ref.index - 1;
}

bool Presentation::has_label(const std::string& label) const {
    return std::any_of(relations_.begin(), relations_.end(),
                       [&](const Relation& r) { return r.label == label; });
}

// ----------------------------------------------------------------- parsing

namespace {

// Splits a relation body on the first top-level connective.  ':' never
// occurs in word expressions, so the label split has already happened.
Word parse_relation_body(const std::string& body, const AlphabetPtr& alpha,
                         const std::string& at) {
    size_t arrow = body.find("<->");
    if (arrow != std::string::npos) {
        Word lhs = parse_word(body.substr(0, arrow), alpha, at);
        Word rhs = parse_word(body.substr(arrow + 3), alpha, at);
        return commutator(lhs, rhs);
    }
    size_t eq = body.find('=');
    if (eq != std::string::npos) {
        Word lhs = parse_word(body.substr(0, eq), alpha, at);
        Word rhs = parse_word(body.substr(eq + 1), alpha, at);
        return multiply(lhs, invert(rhs));
    }
    return parse_word(body, alpha, at);
}

} // namespace

Presentation parse_presentation(const std::string& text, const std::string& where) {
    auto lines = detail::logical_lines(text);
    if (lines.empty())
        throw parse_error(where, "empty presentation: expected a 'gens:' line");

    auto [gens_line, gens_text] = lines.front();
    if (gens_text.rfind("gens:", 0) != 0)
        throw parse_error(loc(where, gens_line), "expected 'gens:' as the first line");
    std::istringstream names_in(gens_text.substr(5));
    std::vector<std::string> names;
    for (std::string n; names_in >> n;)
        names.push_back(n);
    AlphabetPtr alpha;
    try {
        alpha = Alphabet::make(names);
    } catch (const invariant_error& e) {
        throw parse_error(loc(where, gens_line), e.what());
    }

    std::vector<Relation> relations;
    std::unordered_set<std::string> seen;
    for (size_t i = 1; i < lines.size(); ++i) {
        auto [line_no, content] = lines[i];
        const std::string at = loc(where, line_no);
        if (content.rfind("rel", 0) != 0 ||
            (content.size() > 3 && content[3] != ':' &&
             !std::isspace(static_cast<unsigned char>(content[3]))))
            throw parse_error(at, "expected a 'rel' line");

        std::string rest = content.substr(3);
        std::string label;
        std::string body;
        size_t colon = rest.find(':');
        if (colon != std::string::npos) {
            label = detail::trim(rest.substr(0, colon));
            if (!label.empty() && !valid_label(label))
                throw parse_error(at, "invalid relation label '" + label + "'");
            body = rest.substr(colon + 1);
        } else {
            body = rest;
        }
        if (!label.empty() && !seen.insert(label).second)
            throw parse_error(at, "duplicate relation label '" + label + "'");

        relations.push_back(Relation{label, parse_relation_body(body, alpha, at)});
    }
    return Presentation(alpha, std::move(relations));
}

Presentation read_presentation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw parse_error(path, "cannot open presentation file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_presentation(buf.str(), path);
}

std::string render_presentation(const Presentation& p) {
    std::ostringstream out;
    out << "gens:";
    for (const std::string& n : p.alphabet()->names())
        out << ' ' << n;
    out << '\n';
    for (const Relation& rel : p.relations()) {
        out << "rel";
        if (!rel.label.empty())
            out << ' ' << rel.label << ':';
        out << ' ' << render_word(rel.relator) << '\n';
    }
    return out.str();
}

// ------------------------------------------------------------ word rewrites

Word substitute_generator(const Word& w, int gen, const Word& image) {
    std::vector<int> out;
    std::vector<int> img = image.letters();
    std::vector<int> img_inv;
    img_inv.reserve(img.size());
    for (auto it = img.rbegin(); it != img.rend(); ++it)
        img_inv.push_back(-*it);
    for (int l : w.letters()) {
        if (l == gen + 1)
            out.insert(out.end(), img.begin(), img.end());
        else if (l == -(gen + 1))
            out.insert(out.end(), img_inv.begin(), img_inv.end());
        else
            out.push_back(l);
    }
    return Word::from_letters(w.alphabet(), out);
}

Word map_generators(const Word& w, const AlphabetPtr& target, const std::vector<int>& perm) {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(w.length()));
    for (int l : w.letters()) {
        int gen = (l > 0 ? l : -l) - 1;
        if (gen >= static_cast<int>(perm.size()) || perm[static_cast<size_t>(gen)] < 0)
            throw invariant_error("generator '" + w.alphabet()->name(gen) +
                                  "' still occurs in a word being transferred");
        int mapped = perm[static_cast<size_t>(gen)] + 1;
        out.push_back(l > 0 ? mapped : -mapped);
    }
    return Word::from_letters(target, out);
}

// ---------------------------------------------------------- canonical form

Word canonical_relator(const Word& w) {
    auto [core, conj] = cyclic_reduce(w);
    (void)conj;
    std::vector<int> ls = core.letters();
    size_t n = ls.size();
    if (n == 0)
        return core;
    std::vector<int> inv(n);
    for (size_t i = 0; i < n; ++i)
        inv[i] = -ls[n - 1 - i];

    Word best;
    bool have = false;
    for (const std::vector<int>* base : {&ls, &inv}) {
        for (size_t s = 0; s < n; ++s) {
            std::vector<int> rot;
            rot.reserve(n);
            rot.insert(rot.end(), base->begin() + static_cast<std::ptrdiff_t>(s), base->end());
            rot.insert(rot.end(), base->begin(), base->begin() + static_cast<std::ptrdiff_t>(s));
            Word cand = Word::from_letters(w.alphabet(), rot);
            if (!have || word_less(cand, best)) {
                best = cand;
                have = true;
            }
        }
    }
    return best;
}

Presentation canonicalize(const Presentation& p) {
    std::vector<Relation> out;
    for (const Relation& rel : p.relations()) {
        Word cw = canonical_relator(rel.relator);
        if (cw.empty())
            continue;
        bool dup = std::any_of(out.begin(), out.end(),
                               [&](const Relation& r) { return r.relator == cw; });
        if (dup)
            continue;
        out.push_back(Relation{rel.label, cw});
    }
    std::stable_sort(out.begin(), out.end(), [](const Relation& a, const Relation& b) {
        return word_less(a.relator, b.relator);
    });
    return Presentation(p.alphabet(), std::move(out));
}

bool equal_canonical(const Presentation& a, const Presentation& b) {
    if (a.alphabet()->names() != b.alphabet()->names())
        return false;
    Presentation ca = canonicalize(a);
    Presentation cb = canonicalize(b);
    if (ca.size() != cb.size())
        return false;
    for (int i = 0; i < ca.size(); ++i)
        if (ca.relations()[static_cast<size_t>(i)].relator.letters() !=
            cb.relations()[static_cast<size_t>(i)].relator.letters())
            return false;
    return true;
}

} // namespace hbg
