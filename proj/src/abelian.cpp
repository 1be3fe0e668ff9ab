#include "hbg/abelian.hpp"

#include <algorithm>
#include <sstream>

namespace hbg {

IntMatrix relation_matrix(const Presentation& p) {
    int n = p.alphabet()->size();
    IntMatrix m(p.size(), n);
    for (int r = 0; r < p.size(); ++r)
        for (const Run& run : p.relations()[static_cast<size_t>(r)].relator.runs())
            m.at(r, run.gen) += run.exp;
    return m;
}

std::vector<Int> exponent_vector(const Word& w) {
    std::vector<Int> v(static_cast<size_t>(w.alphabet()->size()));
    for (const Run& run : w.runs())
        v[static_cast<size_t>(run.gen)] += run.exp;
    return v;
}

namespace {

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

void swap_rows(IntMatrix& m, int i, int j) {
    for (int c = 0; c < m.cols(); ++c)
        std::swap(m.at(i, c), m.at(j, c));
}

void swap_cols(IntMatrix& m, int i, int j) {
    for (int r = 0; r < m.rows(); ++r)
        std::swap(m.at(r, i), m.at(r, j));
}

// row_i -= q * row_k, from column c0 onwards.
void row_axpy(IntMatrix& m, int i, int k, const Int& q, int c0) {
    if (q == 0)
        return;
    for (int c = c0; c < m.cols(); ++c)
        m.at(i, c) -= q * m.at(k, c);
}

void col_axpy(IntMatrix& m, int j, int k, const Int& q, int r0) {
    if (q == 0)
        return;
    for (int r = r0; r < m.rows(); ++r)
        m.at(r, j) -= q * m.at(r, k);
}

} // namespace

std::vector<Int> smith_diagonal(IntMatrix m) {
    int n = std::min(m.rows(), m.cols());
    std::vector<Int> diag(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        // Locate the smallest nonzero entry of the trailing submatrix and
        // pivot it to (k, k).  Smallest-first keeps quotients, and hence
        // intermediate entries, small.
        int pr = -1, pc = -1;
        for (int r = k; r < m.rows(); ++r)
            for (int c = k; c < m.cols(); ++c)
                if (m.at(r, c) != 0 &&
                    (pr < 0 || abs_int(m.at(r, c)) < abs_int(m.at(pr, pc)))) {
                    pr = r;
                    pc = c;
                }
        if (pr < 0)
            break;  // trailing submatrix is zero; remaining diagonal stays 0
        if (pr != k)
            swap_rows(m, pr, k);
        if (pc != k)
            swap_cols(m, pc, k);

        for (bool clean = false; !clean;) {
            clean = true;
            // Clear column k below the pivot.  A nonzero remainder becomes
            // the new, strictly smaller pivot, so this terminates.
            for (int r = k + 1; r < m.rows(); ++r) {
                if (m.at(r, k) == 0)
                    continue;
                Int q = m.at(r, k) / m.at(k, k);
                row_axpy(m, r, k, q, k);
                if (m.at(r, k) != 0) {
                    swap_rows(m, r, k);
                    clean = false;
                }
            }
            for (int c = k + 1; c < m.cols(); ++c) {
                if (m.at(k, c) == 0)
                    continue;
                Int q = m.at(k, c) / m.at(k, k);
                col_axpy(m, c, k, q, k);
                if (m.at(k, c) != 0) {
                    swap_cols(m, c, k);
                    clean = false;
                }
            }
            if (!clean)
                continue;
            // Divisibility fix-up: fold a row holding a non-divisible entry
            // into row k and re-eliminate; the pivot strictly shrinks.
            for (int r = k + 1; r < m.rows() && clean; ++r)
                for (int c = k + 1; c < m.cols() && clean; ++c)
                    if (m.at(r, c) % m.at(k, k) != 0) {
                        for (int cc = k; cc < m.cols(); ++cc)
                            m.at(k, cc) += m.at(r, cc);
                        clean = false;
                    }
        }
        if (m.at(k, k) < 0)
            m.at(k, k) = -m.at(k, k);
        diag[static_cast<size_t>(k)] = m.at(k, k);
    }
    return diag;
}

AbelianInvariants abelianization(const Presentation& p) {
    std::vector<Int> diag = smith_diagonal(relation_matrix(p));
    AbelianInvariants inv;
    int rank = 0;
    for (const Int& d : diag) {
        if (d == 0)
            continue;
        ++rank;
        if (d > 1)
            inv.torsion.push_back(d);
    }
    inv.free_rank = p.alphabet()->size() - rank;
    return inv;
}

std::string format_abelian(const AbelianInvariants& inv) {
    std::ostringstream out;
    bool first = true;
    auto sep = [&]() {
        if (!first)
            out << " + ";
        first = false;
    };
    if (inv.free_rank == 1) {
        sep();
        out << "Z";
    } else if (inv.free_rank > 1) {
        sep();
        out << "Z^" << inv.free_rank;
    }
    for (const Int& d : inv.torsion) {
        sep();
        out << "Z/" << d;
    }
    if (first)
        out << "trivial";
    return out.str();
}

IntMatrix hnf_row_basis(IntMatrix m) {
    int pivot_row = 0;
    for (int c = 0; c < m.cols() && pivot_row < m.rows(); ++c) {
        // Gcd-out column c across rows pivot_row.. by repeated reduction
        // modulo the smallest entry.
        while (true) {
            int best = -1;
            for (int r = pivot_row; r < m.rows(); ++r)
                if (m.at(r, c) != 0 &&
                    (best < 0 || abs_int(m.at(r, c)) < abs_int(m.at(best, c))))
                    best = r;
            if (best < 0)
                break;
            bool others = false;
            for (int r = pivot_row; r < m.rows(); ++r) {
                if (r == best || m.at(r, c) == 0)
                    continue;
                Int q = m.at(r, c) / m.at(best, c);
                row_axpy(m, r, best, q, 0);
                if (m.at(r, c) != 0)
                    others = true;
            }
            if (!others) {
                if (best != pivot_row)
                    swap_rows(m, best, pivot_row);
                if (m.at(pivot_row, c) < 0)
                    for (int cc = 0; cc < m.cols(); ++cc)
                        m.at(pivot_row, cc) = -m.at(pivot_row, cc);
                // Reduce the rows above into [0, pivot): floor division makes
                // the result the canonical Hermite form, so equal lattices
                // yield equal matrices.
                for (int r = 0; r < pivot_row; ++r) {
                    Int q = m.at(r, c) / m.at(pivot_row, c);
                    if (m.at(r, c) % m.at(pivot_row, c) < 0)
                        q -= 1;
                    row_axpy(m, r, pivot_row, q, 0);
                }
                ++pivot_row;
                break;
            }
        }
    }
    IntMatrix out(pivot_row, m.cols());
    for (int r = 0; r < pivot_row; ++r)
        for (int c = 0; c < m.cols(); ++c)
            out.at(r, c) = m.at(r, c);
    return out;
}

bool in_row_lattice(const IntMatrix& hnf, std::vector<Int> v) {
    if (static_cast<int>(v.size()) != hnf.cols())
        throw invariant_error("vector length does not match lattice dimension");
    int row = 0;
    for (int c = 0; c < hnf.cols(); ++c) {
        if (row < hnf.rows() && hnf.at(row, c) != 0) {
            Int q = v[static_cast<size_t>(c)] / hnf.at(row, c);
            if (v[static_cast<size_t>(c)] % hnf.at(row, c) != 0)
                return false;
            for (int cc = c; cc < hnf.cols(); ++cc)
                v[static_cast<size_t>(cc)] -= q * hnf.at(row, cc);
            ++row;
        }
        if (v[static_cast<size_t>(c)] != 0)
            return false;
    }
    return true;
}

} // namespace hbg
