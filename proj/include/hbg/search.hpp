#ifndef HBG_SEARCH_HPP
#define HBG_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "hbg/presentation.hpp"
#include "hbg/tietze.hpp"

namespace hbg {

// Bounds for derive_certificate.  max_factors counts searched factors only;
// the commutation-normalization factors the search interleaves (see
// derive_certificate) are not budgeted, and their conjugators are residual
// prefixes, so max_conjugator_length does not apply to them either.
struct SearchBudget {
    int max_factors = 8;
    int max_conjugator_length = 6;
    int max_intermediate_length = 64;
    double time_limit = 60.0;  // seconds; safety net, not a reproducible bound
};

struct DeriveStats {
    std::uint64_t nodes = 0;       // search tree nodes expanded
    int factors = 0;               // searched factors in the found certificate
    int total_factors = 0;         // including normalization factors
    int depth_reached = 0;         // deepest completed iteration
    bool timed_out = false;
    bool abelian_rejected = false; // provably non-derivable in abelianization
};

// True iff target's exponent-sum vector lies in the integer lattice spanned
// by the relators' exponent-sum vectors.  False proves no certificate can
// exist, since multiplying by a conjugate of a relator shifts the exponent
// vector by that relator's row.
bool abelian_filter(const Presentation& p, const Word& target);

// Searches for a certificate whose evaluation freely equals target, by
// iterative deepening on the number of factors.  At each node the residual
// is first normalized: adjacent letters whose generators have a commutator
// relator in p are bubble-sorted toward alphabet order, each swap emitting
// an exact certificate factor.  A searched factor then rewrites the
// residual by matching a maximal nonempty prefix of a cyclic rotation of a
// relator (or its inverse) at some position; rotations may also be inserted
// unmatched at position 0.  Candidates are expanded in a fixed order (new
// residual length, conjugator length, relation index, sign, rotation,
// position), residuals seen before at the same or larger remaining depth
// are pruned through an LRU-capped memo table, and residuals longer than
// max_intermediate_length are discarded.  Deterministic for a fixed budget
// unless the time limit intervenes.
//
// Empty optional means the budget was exhausted, never that no certificate
// exists (except when stats->abelian_rejected is set).  Every returned
// certificate is re-verified with evaluate_certificate before returning;
// a mismatch would be an internal defect and throws invariant_error.
std::optional<Certificate> derive_certificate(const Presentation& p, const Word& target,
                                              const SearchBudget& budget = {},
                                              DeriveStats* stats = nullptr);

// Expresses word f, which must be freely equal to some c . R^s . c^-1 for a
// relator R of p, as a single certificate factor; empty optional when f is
// not a conjugate of any relator or relator inverse.  Matching is by cyclic
// core rotation, so the result is exact by construction.
std::optional<CertFactor> factor_from_conjugate(const Presentation& p, const Word& f);

} // namespace hbg

#endif
