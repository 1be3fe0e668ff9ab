#ifndef HBG_ERRORS_HPP
#define HBG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hbg {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text: word expressions, presentation files, scripts,
// manifests.  Carries a human-readable location ("file:line" or an offset
// into a bare expression) so the CLI can point at the defect.
struct parse_error : error {
    parse_error(const std::string& where, const std::string& what)
        : error(where.empty() ? what : where + ": " + what), location(where) {}
    std::string location;
};

// A name that should resolve but does not: unknown generator, unknown
// relation reference, unknown builtin group, missing assignment.
struct lookup_error : error {
    using error::error;
};

// A structural precondition violated: alphabet mismatch, duplicate
// generator/label, substitution target containing the generator, name
// clash on add/rename, elimination relator not usable.
struct invariant_error : error {
    using error::error;
};

// A certificate or replay check that failed: the input was well-formed but
// the claimed derivation does not hold.
struct verify_error : error {
    using error::error;
};

} // namespace hbg

#endif
