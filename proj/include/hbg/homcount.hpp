#ifndef HBG_HOMCOUNT_HPP
#define HBG_HOMCOUNT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hbg/abelian.hpp"
#include "hbg/presentation.hpp"

namespace hbg {

// A finite group given by its multiplication table.  Element 0 is the
// identity.  Instances are validated on construction.
class FiniteGroup {
  public:
    // table is row-major: table[a * order + b] = a . b.  Throws
    // invariant_error unless the table is a group with identity 0.
    FiniteGroup(std::string name, int order, std::vector<int> table);

    const std::string& name() const { return name_; }
    int order() const { return order_; }
    int mul(int a, int b) const { return table_[static_cast<size_t>(a) * static_cast<size_t>(order_) + static_cast<size_t>(b)]; }
    int inverse(int a) const { return inverse_[static_cast<size_t>(a)]; }

    // a^e by binary exponentiation (e may be negative or zero).
    int pow(int a, std::int64_t e) const;

    bool is_abelian() const;

  private:
    std::string name_;
    int order_ = 0;
    std::vector<int> table_;
    std::vector<int> inverse_;
};

// The builtin targets, in fixed reporting order:
//   C2 C3 C4 C2xC2 C5 C6 S3 D4 Q8 D5 A4 D6 S4
const std::vector<FiniteGroup>& builtin_groups();
// Throws lookup_error for names not in the list above.
const FiniteGroup& builtin_group(const std::string& name);

// The image of w under the homomorphism sending generator i to images[i].
int evaluate_word(const Word& w, const FiniteGroup& g, const std::vector<int>& images);

// Number of homomorphisms (not necessarily surjective) from the presented
// group to g, by pruned backtracking over generator images.  The count is
// deterministic and independent of `workers`; workers > 1 splits the search
// over the first generator's image.
std::uint64_t count_homomorphisms(const Presentation& p, const FiniteGroup& g,
                                  int workers = 1);

// Closed-form count for maps from an abelianized group into an abelian
// target: |G|^free_rank * prod_i #{x in G : x^(d_i) = identity}.  Throws
// invariant_error if g is not abelian.  Counts homomorphisms from the
// presented group when that group's maps factor through its abelianization,
// i.e. whenever g is abelian.
std::uint64_t count_homomorphisms_abelian(const AbelianInvariants& inv,
                                          const FiniteGroup& g);

} // namespace hbg

#endif
