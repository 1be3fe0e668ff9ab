#ifndef HBG_WORD_HPP
#define HBG_WORD_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hbg/errors.hpp"

namespace hbg {

// An ordered generator alphabet.  Generator ids are positions in
// declaration order; names are unique.  Alphabets are immutable and shared
// by the words built over them.
class Alphabet {
  public:
    static std::shared_ptr<const Alphabet> make(std::vector<std::string> names);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int id) const { return names_.at(static_cast<size_t>(id)); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<int> find(const std::string& name) const;
    // Throws lookup_error if the name is absent.
    int id_of(const std::string& name) const;

    bool same_names(const Alphabet& other) const { return names_ == other.names_; }

    // A valid generator name: leading letter, then letters, digits, '_', '-'.
    static bool valid_name(const std::string& name);

  private:
    Alphabet() = default;
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

// One run of a freely reduced word: generator id with a nonzero signed
// exponent.  Adjacent runs of a Word never share a generator.
struct Run {
    int gen = 0;
    std::int64_t exp = 0;
    friend bool operator==(const Run& a, const Run& b) {
        return a.gen == b.gen && a.exp == b.exp;
    }
};

// A freely reduced word over an alphabet.  Immutable value type: every
// operation returns a fresh word.  The empty sequence is the identity.
class Word {
  public:
    Word() = default;
    explicit Word(AlphabetPtr alpha) : alpha_(std::move(alpha)) {}
    // Normalizes arbitrary run sequences: merges neighbours, drops zeros,
    // cancels across seams (full free reduction).
    Word(AlphabetPtr alpha, std::vector<Run> runs);

    const AlphabetPtr& alphabet() const { return alpha_; }
    const std::vector<Run>& runs() const { return runs_; }
    bool empty() const { return runs_.empty(); }
    // Sum of |exponent| over runs.
    std::int64_t length() const;

    // Signed single-letter view: +(id+1) for g, -(id+1) for g^-1.
    std::vector<int> letters() const;
    static Word from_letters(const AlphabetPtr& alpha, const std::vector<int>& letters);

    friend bool operator==(const Word& a, const Word& b) { return a.runs_ == b.runs_; }
    friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

  private:
    AlphabetPtr alpha_;
    std::vector<Run> runs_;
};

// Requires u, v over the same alphabet (invariant_error otherwise); the
// identity word with a null alphabet is compatible with everything.
Word multiply(const Word& u, const Word& v);
Word invert(const Word& w);
// h g h^-1, freely reduced.
Word conjugate(const Word& h, const Word& g);
// x y x^-1 y^-1, freely reduced.
Word commutator(const Word& x, const Word& y);
Word power(const Word& w, std::int64_t n);
// (core, conjugator) with w = conjugator . core . conjugator^-1 and core
// cyclically reduced.
std::pair<Word, Word> cyclic_reduce(const Word& w);

// Total order used by canonicalization: letterwise by (generator id, sign)
// with positive before negative; a proper prefix sorts first.
bool word_less(const Word& a, const Word& b);

// Single-generator word helper.
Word gen_word(const AlphabetPtr& alpha, int gen, std::int64_t exp = 1);

// Parses the expression grammar:
//   conjexpr := expr { '*' expr }          '*' is h*g = h g h^-1, left-assoc
//   expr     := term { term }              juxtaposition = product
//   term     := atom [ '^' integer ]
//   atom     := generator | '1' | '(' conjexpr ')' | '[' conjexpr ',' conjexpr ']'
// Whitespace separates generator tokens; '#' starts a comment running to
// the end of the line unless immediately followed by a digit.
// `where` names the source (used in error locations, may be empty).
Word parse_word(const std::string& text, const AlphabetPtr& alpha,
                const std::string& where = "");

// Renders a word in the grammar above using only juxtaposition and '^';
// the empty word renders as "1".  parse_word(render_word(w)) == w.
std::string render_word(const Word& w);

// Lexes a word expression and returns the distinct generator names in first
// appearance order ('1' is not a name).  Used to infer an alphabet from raw
// input; the text is not otherwise validated.
std::vector<std::string> scan_generator_names(const std::string& text,
                                              const std::string& where = "");

} // namespace hbg

#endif
