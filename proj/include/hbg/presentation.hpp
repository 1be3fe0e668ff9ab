#ifndef HBG_PRESENTATION_HPP
#define HBG_PRESENTATION_HPP

#include <string>
#include <vector>

#include "hbg/word.hpp"

namespace hbg {

// One relator with an optional label.  Labels, when present, are unique
// within a presentation and match [A-Za-z0-9._-]+.
struct Relation {
    std::string label;
    Word relator;
};

// Reference to a relation: by label ("P4.2") or by 1-based position ("#7").
struct RelRef {
    std::string label;  // nonempty iff referenced by label
    int index = 0;      // 1-based iff referenced by position

    static RelRef by_label(std::string l) { return RelRef{std::move(l), 0}; }
    static RelRef by_index(int i) { return RelRef{{}, i}; }
    static RelRef parse(const std::string& text, const std::string& where = "");
    std::string str() const;
};

// A finite presentation: an ordered generator alphabet and an ordered list
// of relators.  Immutable value type.
class Presentation {
  public:
    Presentation() = default;
    Presentation(AlphabetPtr alphabet, std::vector<Relation> relations);

    const AlphabetPtr& alphabet() const { return alphabet_; }
    const std::vector<Relation>& relations() const { return relations_; }
    int size() const { return static_cast<int>(relations_.size()); }

    // Resolves a reference to a 0-based position; throws lookup_error when
    // the label is absent or the index out of range.
    int index_of(const RelRef& ref) const;
    const Relation& relation(const RelRef& ref) const { return relations_.at(static_cast<size_t>(index_of(ref))); }

    bool has_label(const std::string& label) const;

  private:
    AlphabetPtr alphabet_;
    std::vector<Relation> relations_;
};

// Text format:
//   # comment lines and blank lines are ignored
//   gens: a1 a2 d o t r          (required first content line)
//   rel <label>: <body>          (label optional; "rel:" gives an empty one)
//   rel <body>
// where <body> is one of
//   <expr>                       relator
//   <expr> = <expr>              relator lhs . rhs^-1
//   <expr> <-> <expr>            relator [lhs, rhs]
// A trailing backslash continues a line.
Presentation parse_presentation(const std::string& text, const std::string& where = "");
Presentation read_presentation_file(const std::string& path);
std::string render_presentation(const Presentation& p);

// Rewrites w with generator `gen` replaced by `image` (and its inverse by
// the inverse image).  `image` must be over the same alphabet.
Word substitute_generator(const Word& w, int gen, const Word& image);

// Transfers w onto `target`: generator i maps to target generator perm[i].
// perm[i] < 0 asserts i does not occur in w (invariant_error otherwise).
Word map_generators(const Word& w, const AlphabetPtr& target, const std::vector<int>& perm);

// The canonical representative of a relator up to cyclic rotation and
// inversion: the word_less-least rotation of its cyclic core or of the
// inverse core.
Word canonical_relator(const Word& w);

// Canonical form of a presentation: canonicalize every relator, drop empty
// ones, drop duplicates (keeping the earliest), sort by word_less.  The
// alphabet is untouched.
Presentation canonicalize(const Presentation& p);

// True when canonical forms coincide: identical generator name sequences
// and identical canonical relator lists (labels are ignored).
bool equal_canonical(const Presentation& a, const Presentation& b);

} // namespace hbg

#endif
