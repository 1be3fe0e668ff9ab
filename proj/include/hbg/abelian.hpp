#ifndef HBG_ABELIAN_HPP
#define HBG_ABELIAN_HPP

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hbg/presentation.hpp"

namespace hbg {

using Int = boost::multiprecision::cpp_int;

// Dense row-major integer matrix, sized once at construction.
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * static_cast<size_t>(cols)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Int& at(int r, int c) { return a_[static_cast<size_t>(r) * static_cast<size_t>(cols_) + static_cast<size_t>(c)]; }
    const Int& at(int r, int c) const { return a_[static_cast<size_t>(r) * static_cast<size_t>(cols_) + static_cast<size_t>(c)]; }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Int> a_;
};

// Exponent-sum matrix of a presentation: one row per relator, one column
// per generator.
IntMatrix relation_matrix(const Presentation& p);

// Exponent-sum vector of a single word.
std::vector<Int> exponent_vector(const Word& w);

// Smith normal form diagonal of m: nonnegative d1 | d2 | ... | dr followed
// by zeros, length min(rows, cols).
std::vector<Int> smith_diagonal(IntMatrix m);

// Invariants of the abelianized group coker(relations): free rank plus the
// invariant factors greater than one, in divisibility order.
struct AbelianInvariants {
    int free_rank = 0;
    std::vector<Int> torsion;

    friend bool operator==(const AbelianInvariants& x, const AbelianInvariants& y) {
        return x.free_rank == y.free_rank && x.torsion == y.torsion;
    }
    friend bool operator!=(const AbelianInvariants& x, const AbelianInvariants& y) {
        return !(x == y);
    }
};

AbelianInvariants abelianization(const Presentation& p);

// "Z^2 + Z/2 + Z/6", "Z", "Z/2", or "trivial".
std::string format_abelian(const AbelianInvariants& inv);

// Row-style Hermite form of the row lattice of m: echelon basis produced by
// integer row operations only, zero rows dropped, pivots positive.
IntMatrix hnf_row_basis(IntMatrix m);

// Whether v lies in the lattice spanned by the rows of an hnf_row_basis
// result.
bool in_row_lattice(const IntMatrix& hnf, std::vector<Int> v);

} // namespace hbg

#endif
