#include "hbg/word.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

namespace hbg {

// ---------------------------------------------------------------- Alphabet

std::shared_ptr<const Alphabet> Alphabet::make(std::vector<std::string> names) {
    auto a = std::shared_ptr<Alphabet>(new Alphabet());
    a->names_ = std::move(names);
    for (size_t i = 0; i < a->names_.size(); ++i) {
        const std::string& n = a->names_[i];
        if (!valid_name(n))
            throw invariant_error("invalid generator name '" + n + "'");
        auto [it, inserted] = a->index_.emplace(n, static_cast<int>(i));
        (void)it;
        if (!inserted)
            throw invariant_error("duplicate generator '" + n + "'");
    }
    return a;
}

std::optional<int> Alphabet::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

int Alphabet::id_of(const std::string& name) const {
    auto id = find(name);
    if (!id)
        throw lookup_error("unknown generator '" + name + "'");
    return *id;
}

bool Alphabet::valid_name(const std::string& name) {
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])))
        return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
            return false;
    return true;
}

// -------------------------------------------------------------------- Word

namespace {

// Appends a run to a reduced run stack, merging and cancelling at the seam.
void push_run(std::vector<Run>& out, int gen, std::int64_t exp) {
    if (exp == 0)
        return;
    if (!out.empty() && out.back().gen == gen) {
        out.back().exp += exp;
        if (out.back().exp == 0)
            out.pop_back();
        return;
    }
    out.push_back(Run{gen, exp});
}

void require_same_alphabet(const Word& u, const Word& v) {
    const auto& a = u.alphabet();
    const auto& b = v.alphabet();
    if (!a || !b || a == b)
        return;
    if (!a->same_names(*b))
        throw invariant_error("alphabet mismatch between words");
}

} // namespace

Word::Word(AlphabetPtr alpha, std::vector<Run> runs) : alpha_(std::move(alpha)) {
    runs_.reserve(runs.size());
    for (const Run& r : runs)
        push_run(runs_, r.gen, r.exp);
}

std::int64_t Word::length() const {
    std::int64_t n = 0;
    for (const Run& r : runs_)
        n += r.exp < 0 ? -r.exp : r.exp;
    return n;
}

std::vector<int> Word::letters() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(length()));
    for (const Run& r : runs_) {
        int letter = r.exp > 0 ? r.gen + 1 : -(r.gen + 1);
        std::int64_t n = r.exp > 0 ? r.exp : -r.exp;
        for (std::int64_t i = 0; i < n; ++i)
            out.push_back(letter);
    }
    return out;
}

Word Word::from_letters(const AlphabetPtr& alpha, const std::vector<int>& letters) {
    std::vector<Run> runs;
    for (int l : letters) {
        int gen = (l > 0 ? l : -l) - 1;
        push_run(runs, gen, l > 0 ? 1 : -1);
    }
    Word w(alpha);
    w = Word(alpha, std::move(runs));
    return w;
}

Word multiply(const Word& u, const Word& v) {
    require_same_alphabet(u, v);
    std::vector<Run> runs = u.runs();
    for (const Run& r : v.runs())
        push_run(runs, r.gen, r.exp);
    return Word(u.alphabet() ? u.alphabet() : v.alphabet(), std::move(runs));
}

Word invert(const Word& w) {
    std::vector<Run> runs;
    runs.reserve(w.runs().size());
    for (auto it = w.runs().rbegin(); it != w.runs().rend(); ++it)
        runs.push_back(Run{it->gen, -it->exp});
    return Word(w.alphabet(), std::move(runs));
}

Word conjugate(const Word& h, const Word& g) {
    return multiply(multiply(h, g), invert(h));
}

Word commutator(const Word& x, const Word& y) {
    return multiply(multiply(x, y), multiply(invert(x), invert(y)));
}

Word power(const Word& w, std::int64_t n) {
    if (n == 0)
        return Word(w.alphabet());
    Word base = n > 0 ? w : invert(w);
    std::int64_t k = n > 0 ? n : -n;
    Word acc(w.alphabet());
    for (std::int64_t i = 0; i < k; ++i)
        acc = multiply(acc, base);
    return acc;
}

std::pair<Word, Word> cyclic_reduce(const Word& w) {
    std::vector<int> ls = w.letters();
    size_t lo = 0, hi = ls.size();
    while (hi - lo >= 2 && ls[lo] == -ls[hi - 1]) {
        ++lo;
        --hi;
    }
    std::vector<int> conj(ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(lo));
    std::vector<int> core(ls.begin() + static_cast<std::ptrdiff_t>(lo),
                          ls.begin() + static_cast<std::ptrdiff_t>(hi));
    return {Word::from_letters(w.alphabet(), core), Word::from_letters(w.alphabet(), conj)};
}

namespace {

// Sort key for a signed letter: generator id first, '+' before '-'.
int letter_key(int l) {
    int gen = (l > 0 ? l : -l) - 1;
    return gen * 2 + (l < 0 ? 1 : 0);
}

} // namespace

bool word_less(const Word& a, const Word& b) {
    std::vector<int> la = a.letters(), lb = b.letters();
    size_t n = std::min(la.size(), lb.size());
    for (size_t i = 0; i < n; ++i) {
        int ka = letter_key(la[i]), kb = letter_key(lb[i]);
        if (ka != kb)
            return ka < kb;
    }
    return la.size() < lb.size();
}

Word gen_word(const AlphabetPtr& alpha, int gen, std::int64_t exp) {
    return Word(alpha, {Run{gen, exp}});
}

// ------------------------------------------------------------------ parser

namespace {

struct Lexer {
    const std::string& text;
    const std::string& where;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg, size_t at) const {
        throw parse_error(where, msg + " at offset " + std::to_string(at));
    }

    void skip_space() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == '#' && !(pos + 1 < text.size() &&
                              std::isdigit(static_cast<unsigned char>(text[pos + 1])))) {
                while (pos < text.size() && text[pos] != '\n')
                    ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    }

    char peek() {
        skip_space();
        return pos < text.size() ? text[pos] : '\0';
    }

    void expect(char c) {
        if (peek() != c)
            fail(std::string("expected '") + c + "'", pos);
        ++pos;
    }

    std::string ident() {
        skip_space();
        size_t start = pos;
        if (pos >= text.size() || !std::isalpha(static_cast<unsigned char>(text[pos])))
            fail("expected generator name", pos);
        while (pos < text.size()) {
            char c = text[pos];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')
                ++pos;
            else
                break;
        }
        return text.substr(start, pos - start);
    }

    std::int64_t integer() {
        skip_space();
        size_t start = pos;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-'))
            ++pos;
        size_t digits = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos == digits)
            fail("expected integer exponent", start);
        return std::strtoll(text.c_str() + start, nullptr, 10);
    }
};

struct Parser {
    Lexer lex;
    const AlphabetPtr& alpha;

    bool at_atom_start() {
        char c = lex.peek();
        return std::isalpha(static_cast<unsigned char>(c)) || c == '(' || c == '[' || c == '1';
    }

    Word atom() {
        char c = lex.peek();
        if (c == '1') {
            ++lex.pos;
            return Word(alpha);
        }
        if (c == '(') {
            ++lex.pos;
            Word w = conjexpr();
            lex.expect(')');
            return w;
        }
        if (c == '[') {
            ++lex.pos;
            Word x = conjexpr();
            lex.expect(',');
            Word y = conjexpr();
            lex.expect(']');
            return commutator(x, y);
        }
        size_t at = lex.pos;
        std::string name = lex.ident();
        auto id = alpha->find(name);
        if (!id)
            throw parse_error(lex.where, "unknown generator '" + name + "' at offset " +
                                             std::to_string(at));
        return gen_word(alpha, *id);
    }

    Word term() {
        Word w = atom();
        if (lex.peek() == '^') {
            ++lex.pos;
            w = power(w, lex.integer());
        }
        return w;
    }

    Word expr() {
        Word w = term();
        while (at_atom_start())
            w = multiply(w, term());
        return w;
    }

    Word conjexpr() {
        Word w = expr();
        while (lex.peek() == '*') {
            ++lex.pos;
            w = conjugate(w, expr());
        }
        return w;
    }
};

} // namespace

Word parse_word(const std::string& text, const AlphabetPtr& alpha, const std::string& where) {
    Parser p{Lexer{text, where, 0}, alpha};
    // An all-blank expression denotes the identity (empty certificate
    // conjugators rely on this).
    if (p.lex.peek() == '\0')
        return Word(alpha);
    Word w = p.conjexpr();
    if (p.lex.peek() != '\0')
        p.lex.fail("unexpected trailing input", p.lex.pos);
    return w;
}

std::vector<std::string> scan_generator_names(const std::string& text,
                                              const std::string& where) {
    Lexer lex{text, where, 0};
    std::vector<std::string> names;
    while (true) {
        char c = lex.peek();
        if (c == '\0')
            break;
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name = lex.ident();
            if (std::find(names.begin(), names.end(), name) == names.end())
                names.push_back(name);
        } else {
            ++lex.pos;
        }
    }
    return names;
}

std::string render_word(const Word& w) {
    if (w.empty())
        return "1";
    std::ostringstream out;
    bool first = true;
    for (const Run& r : w.runs()) {
        if (!first)
            out << ' ';
        first = false;
        out << w.alphabet()->name(r.gen);
        if (r.exp != 1)
            out << '^' << r.exp;
    }
    return out.str();
}

} // namespace hbg
