#ifndef HBG_TIETZE_HPP
#define HBG_TIETZE_HPP

#include <functional>
#include <string>
#include <vector>

#include "hbg/presentation.hpp"

namespace hbg {

// One factor of a product-of-conjugates certificate: conj . R^sign . conj^-1
// where R is the relator referenced by rel.
struct CertFactor {
    Word conjugator;
    RelRef rel;
    int sign = 1;  // +1 or -1
};

using Certificate = std::vector<CertFactor>;

// The product of the factors, in order, freely reduced.  An empty
// certificate yields the identity.  Throws lookup_error on a dangling
// reference and invariant_error on a sign other than +-1.
Word evaluate_certificate(const Certificate& cert, const Presentation& p);

// --------------------------------------------------------------- the moves
//
// Each returns the transformed presentation and throws if the move is not a
// valid Tietze transformation of p:
//   verify_error     a certificate does not evaluate to the claimed word
//   invariant_error  structural violation (name clash, bad elimination, ...)
//   lookup_error     dangling relation or generator reference

// Appends `relator` under `label` (possibly empty).  The certificate must
// prove the word is a consequence: evaluate_certificate(cert, p) == relator.
Presentation add_relation(const Presentation& p, const std::string& label,
                          const Word& relator, const Certificate& cert);

// Deletes the referenced relation.  The certificate is resolved and checked
// against the presentation WITHOUT that relation, and must evaluate to the
// removed relator; an empty certificate asserts the relator is freely
// trivial.
Presentation remove_relation(const Presentation& p, const RelRef& target,
                             const Certificate& cert);

// Adjoins a fresh generator `name` defined by a word over the existing
// alphabet, appending the definitional relation  name . definition^-1  under
// the label `name`.
Presentation add_generator(const Presentation& p, const std::string& name,
                           const Word& definition);

// Eliminates `name` using the referenced relation, which must contain the
// generator exactly once and with exponent +-1.  Writing that relator as
// u g^e v, the generator's image is u^-1 v^-1 (e=+1) or v u (e=-1); the
// image is substituted into every other relator and the via relation is
// dropped together with the generator.
Presentation remove_generator(const Presentation& p, const std::string& name,
                              const RelRef& via);

// Renames a generator in place; the new name must be unused.
Presentation rename_generator(const Presentation& p, const std::string& old_name,
                              const std::string& new_name);

// ----------------------------------------------------------------- scripts
//
// Script file format (comments and blank lines as in presentation files, a
// trailing backslash continues a line):
//
//   source <path>                      relative to the script's directory
//   target <path>
//   addrel <label>: <expr> by <factors>
//   delrel <ref> by <factors>
//   addgen <name> := <expr>
//   delgen <name> via <ref>
//   rename <old> -> <new>
//
// <factors> is a whitespace-separated sequence of
//   ( <conj-expr> ; <ref> ; <+|-> )
// and may be empty.  <ref> is a relation label or #k (1-based position).
// Word expressions are kept as text and parsed against the alphabet current
// at the move's point in the replay.

struct ScriptFactor {
    std::string conjugator;  // word expression, possibly empty (identity)
    std::string rel;         // relation reference text
    int sign = 1;
};

struct ScriptMove {
    enum class Kind { AddRel, DelRel, AddGen, DelGen, Rename };
    Kind kind = Kind::AddRel;
    int line = 0;            // 1-based line in the script file
    std::string name;        // addrel label / delrel ref / addgen+delgen name / rename old
    std::string arg;         // addrel relator / addgen definition / delgen via-ref / rename new
    std::vector<ScriptFactor> factors;  // addrel and delrel only

    // One-line human description, e.g. "delrel P3".
    std::string describe() const;
};

struct Script {
    std::string source_path;
    std::string target_path;
    std::vector<ScriptMove> moves;
};

Script parse_script(const std::string& text, const std::string& where = "");
Script read_script_file(const std::string& path);

// Called after each successful move with the move's 0-based position and
// the presentation it produced.
using ReplayObserver =
    std::function<void(int index, const ScriptMove& move, const Presentation& after)>;

// Applies one parsed move (resolving its word expressions against p's
// alphabet).  `where` prefixes error messages.
Presentation apply_script_move(const Presentation& p, const ScriptMove& move,
                               const std::string& where = "");

// Replays every move against `source`.  Errors are prefixed with
// "<where>:<line>".
Presentation replay_script(const Script& script, const Presentation& source,
                           const ReplayObserver& observe = {},
                           const std::string& where = "");

struct ReplayOutcome {
    Presentation source;
    Presentation target;
    Presentation final;  // result of the replay, canonically equal to target
    int moves = 0;
};

// Loads the script with its source and target presentations (paths resolved
// relative to the script), replays, and checks the outcome is canonically
// equal to the target; verify_error otherwise.
ReplayOutcome check_script_file(const std::string& path,
                                const ReplayObserver& observe = {});

} // namespace hbg

#endif
