#include "hbg/homcount.hpp"

#include "hbg/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <thread>

namespace hbg {

// ------------------------------------------------------------- FiniteGroup

FiniteGroup::FiniteGroup(std::string name, int order, std::vector<int> table)
    : name_(std::move(name)), order_(order), table_(std::move(table)) {
    if (order_ < 1 || table_.size() != static_cast<size_t>(order_) * static_cast<size_t>(order_))
        throw invariant_error("group '" + name_ + "': table size does not match order");
    for (int x : table_)
        if (x < 0 || x >= order_)
            throw invariant_error("group '" + name_ + "': table entry out of range");
    for (int a = 0; a < order_; ++a)
        if (mul(0, a) != a || mul(a, 0) != a)
            throw invariant_error("group '" + name_ + "': element 0 is not an identity");
    inverse_.assign(static_cast<size_t>(order_), -1);
    for (int a = 0; a < order_; ++a) {
        for (int b = 0; b < order_; ++b)
            if (mul(a, b) == 0 && mul(b, a) == 0) {
                inverse_[static_cast<size_t>(a)] = b;
                break;
            }
        if (inverse_[static_cast<size_t>(a)] < 0)
            throw invariant_error("group '" + name_ + "': element without inverse");
    }
    for (int a = 0; a < order_; ++a)
        for (int b = 0; b < order_; ++b)
            for (int c = 0; c < order_; ++c)
                if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                    throw invariant_error("group '" + name_ + "': multiplication not associative");
}

int FiniteGroup::pow(int a, std::int64_t e) const {
    if (e < 0) {
        a = inverse(a);
        e = -e;
    }
    int acc = 0;
    while (e > 0) {
        if (e & 1)
            acc = mul(acc, a);
        a = mul(a, a);
        e >>= 1;
    }
    return acc;
}

bool FiniteGroup::is_abelian() const {
    for (int a = 0; a < order_; ++a)
        for (int b = a + 1; b < order_; ++b)
            if (mul(a, b) != mul(b, a))
                return false;
    return true;
}

// ---------------------------------------------------------------- builtins

namespace {

FiniteGroup cyclic(const std::string& name, int n) {
    std::vector<int> t(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            t[static_cast<size_t>(a * n + b)] = (a + b) % n;
    return FiniteGroup(name, n, std::move(t));
}

FiniteGroup klein_four() {
    std::vector<int> t(16);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            t[static_cast<size_t>(a * 4 + b)] = a ^ b;
    return FiniteGroup("C2xC2", 4, std::move(t));
}

// Elements 0..n-1 are the rotations r^k; n+k is the reflection s r^k.
// From s r s = r^-1:  r^a s r^b = s r^(b-a)  and  (s r^a)(s r^b) = r^(b-a).
FiniteGroup dihedral(const std::string& name, int n) {
    int order = 2 * n;
    auto rot = [n](int k) { return ((k % n) + n) % n; };
    std::vector<int> t(static_cast<size_t>(order) * static_cast<size_t>(order));
    for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b) {
            bool fa = a >= n, fb = b >= n;
            int ka = fa ? a - n : a, kb = fb ? b - n : b;
            int v;
            if (!fa && !fb)
                v = rot(ka + kb);
            else if (!fa && fb)
                v = n + rot(kb - ka);
            else if (fa && !fb)
                v = n + rot(ka + kb);
            else
                v = rot(kb - ka);
            t[static_cast<size_t>(a * order + b)] = v;
        }
    return FiniteGroup(name, order, std::move(t));
}

// Elements: 1,-1,i,-i,j,-j,k,-k at indices basis*2 + (negative ? 1 : 0).
FiniteGroup quaternion8() {
    // basis_mul[a][b] = (sign, basis) for a*b over {1,i,j,k}.
    static const int basis_val[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int basis_sign[4][4] = {
        {+1, +1, +1, +1}, {+1, -1, +1, -1}, {+1, -1, -1, +1}, {+1, +1, -1, -1}};
    std::vector<int> t(64);
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            int ba = a / 2, bb = b / 2;
            int sign = (a % 2 ? -1 : 1) * (b % 2 ? -1 : 1) * basis_sign[ba][bb];
            t[static_cast<size_t>(a * 8 + b)] = basis_val[ba][bb] * 2 + (sign < 0 ? 1 : 0);
        }
    return FiniteGroup("Q8", 8, std::move(t));
}

// Permutations in lexicographic one-line order; the identity is index 0.
// Composition is (p.q)(x) = p(q(x)).
FiniteGroup permutation_group(const std::string& name, int n, bool even_only) {
    std::vector<std::vector<int>> elems;
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (even_only) {
            int inversions = 0;
            for (size_t i = 0; i < perm.size(); ++i)
                for (size_t j = i + 1; j < perm.size(); ++j)
                    if (perm[i] > perm[j])
                        ++inversions;
            if (inversions % 2)
                continue;
        }
        elems.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::map<std::vector<int>, int> index;
    for (size_t i = 0; i < elems.size(); ++i)
        index[elems[i]] = static_cast<int>(i);

    int order = static_cast<int>(elems.size());
    std::vector<int> t(static_cast<size_t>(order) * static_cast<size_t>(order));
    std::vector<int> composed(static_cast<size_t>(n));
    for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b) {
            for (int x = 0; x < n; ++x)
                composed[static_cast<size_t>(x)] =
                    elems[static_cast<size_t>(a)][static_cast<size_t>(
                        elems[static_cast<size_t>(b)][static_cast<size_t>(x)])];
            t[static_cast<size_t>(a * order + b)] = index.at(composed);
        }
    return FiniteGroup(name, order, std::move(t));
}

} // namespace

const std::vector<FiniteGroup>& builtin_groups() {
    static const std::vector<FiniteGroup> groups = [] {
        std::vector<FiniteGroup> g;
        g.push_back(cyclic("C2", 2));
        g.push_back(cyclic("C3", 3));
        g.push_back(cyclic("C4", 4));
        g.push_back(klein_four());
        g.push_back(cyclic("C5", 5));
        g.push_back(cyclic("C6", 6));
        g.push_back(permutation_group("S3", 3, false));
        g.push_back(dihedral("D4", 4));
        g.push_back(quaternion8());
        g.push_back(dihedral("D5", 5));
        g.push_back(permutation_group("A4", 4, true));
        g.push_back(dihedral("D6", 6));
        g.push_back(permutation_group("S4", 4, false));
        return g;
    }();
    return groups;
}

const FiniteGroup& builtin_group(const std::string& name) {
    for (const FiniteGroup& g : builtin_groups())
        if (g.name() == name)
            return g;
    throw lookup_error("unknown builtin group '" + name + "'");
}

// ---------------------------------------------------------- hom evaluation

int evaluate_word(const Word& w, const FiniteGroup& g, const std::vector<int>& images) {
    if (w.alphabet() && images.size() != static_cast<size_t>(w.alphabet()->size()))
        throw invariant_error("image list length does not match the alphabet");
    int acc = 0;
    for (const Run& r : w.runs())
        acc = g.mul(acc, g.pow(images[static_cast<size_t>(r.gen)], r.exp));
    return acc;
}

// --------------------------------------------------------------- the count

namespace {

// Relator letters are rewritten over assignment positions and cut into
// maximal chunks by the position at which their prefix becomes evaluable
// (that threshold is nondecreasing along the word).  During the search each
// chunk extends a checkpointed partial product; the relator is enforced when
// its last chunk closes.
struct Chunk {
    int relator;
    int ordinal;  // chunk number within the relator, 0-based
    int begin, end;
    bool last;
};

struct SearchPlan {
    int positions = 0;                       // number of generators
    int order = 0;                           // group order
    std::vector<std::vector<int>> letters;   // relator -> position-space letters
    std::vector<std::vector<Chunk>> at;      // position -> chunks closing there
};

SearchPlan build_plan(const Presentation& p, const FiniteGroup& g) {
    int n = p.alphabet()->size();

    // Occurrence counts drive the assignment order: most-constrained first.
    std::vector<std::int64_t> occ(static_cast<size_t>(n));
    std::vector<std::vector<int>> relators;
    for (const Relation& rel : p.relations()) {
        Word core = cyclic_reduce(rel.relator).first;
        if (core.empty())
            continue;
        for (const Run& run : core.runs())
            occ[static_cast<size_t>(run.gen)] += run.exp < 0 ? -run.exp : run.exp;
        relators.push_back(core.letters());
    }
    std::vector<int> order_of_gen(static_cast<size_t>(n));
    {
        std::vector<int> by_occ(static_cast<size_t>(n));
        std::iota(by_occ.begin(), by_occ.end(), 0);
        std::stable_sort(by_occ.begin(), by_occ.end(), [&](int a, int b) {
            return occ[static_cast<size_t>(a)] > occ[static_cast<size_t>(b)];
        });
        for (int pos = 0; pos < n; ++pos)
            order_of_gen[static_cast<size_t>(by_occ[static_cast<size_t>(pos)])] = pos;
    }

    SearchPlan plan;
    plan.positions = n;
    plan.order = g.order();
    plan.at.resize(static_cast<size_t>(n));
    for (std::vector<int>& word : relators) {
        for (int& l : word) {
            int gen = (l > 0 ? l : -l) - 1;
            int pos = order_of_gen[static_cast<size_t>(gen)] + 1;
            l = l > 0 ? pos : -pos;
        }
        int r = static_cast<int>(plan.letters.size());
        int m = static_cast<int>(word.size());
        int ordinal = 0;
        int begin = 0;
        int threshold = 0;
        for (int i = 0; i < m; ++i) {
            int pos = word[static_cast<size_t>(i)] > 0 ? word[static_cast<size_t>(i)]
                                                       : -word[static_cast<size_t>(i)];
            threshold = std::max(threshold, pos);
            bool boundary = i + 1 == m ||
                            std::max(threshold,
                                     std::abs(word[static_cast<size_t>(i + 1)])) > threshold;
            if (boundary) {
                plan.at[static_cast<size_t>(threshold - 1)].push_back(
                    Chunk{r, ordinal, begin, i + 1, i + 1 == m});
                ++ordinal;
                begin = i + 1;
            }
        }
        plan.letters.push_back(std::move(word));
    }
    return plan;
}

struct SearchState {
    const SearchPlan& plan;
    const FiniteGroup& g;
    std::vector<int> images;                    // by position
    std::vector<std::vector<int>> checkpoints;  // relator -> chunk ordinal -> value

    explicit SearchState(const SearchPlan& pl, const FiniteGroup& grp) : plan(pl), g(grp) {
        images.assign(static_cast<size_t>(plan.positions), 0);
        checkpoints.resize(plan.letters.size());
        for (size_t r = 0; r < plan.letters.size(); ++r) {
            int chunks = 0;
            for (const auto& at_pos : plan.at)
                for (const Chunk& c : at_pos)
                    if (c.relator == static_cast<int>(r))
                        ++chunks;
            checkpoints[r].assign(static_cast<size_t>(chunks), 0);
        }
    }

    // Extends every chunk closing at `pos`; false if a completed relator
    // does not evaluate to the identity.
    bool extend(int pos) {
        for (const Chunk& c : plan.at[static_cast<size_t>(pos)]) {
            const auto& word = plan.letters[static_cast<size_t>(c.relator)];
            int val = c.ordinal == 0
                          ? 0
                          : checkpoints[static_cast<size_t>(c.relator)]
                                       [static_cast<size_t>(c.ordinal - 1)];
            for (int i = c.begin; i < c.end; ++i) {
                int l = word[static_cast<size_t>(i)];
                int img = images[static_cast<size_t>((l > 0 ? l : -l) - 1)];
                val = g.mul(val, l > 0 ? img : g.inverse(img));
            }
            checkpoints[static_cast<size_t>(c.relator)][static_cast<size_t>(c.ordinal)] = val;
            if (c.last && val != 0)
                return false;
        }
        return true;
    }

    std::uint64_t dfs(int pos) {
        if (pos == plan.positions)
            return 1;
        std::uint64_t total = 0;
        for (int img = 0; img < plan.order; ++img) {
            images[static_cast<size_t>(pos)] = img;
            if (extend(pos))
                total += dfs(pos + 1);
        }
        return total;
    }
};

} // namespace

std::uint64_t count_homomorphisms(const Presentation& p, const FiniteGroup& g, int workers) {
    SearchPlan plan = build_plan(p, g);
    if (plan.positions == 0)
        return 1;
    if (workers < 1)
        workers = 1;
    workers = std::min(workers, g.order());

    // Split the search on the first position's image, round-robin across
    // workers; the total is a sum of per-class counts, so it does not depend
    // on the worker count.
    std::vector<std::uint64_t> partial(static_cast<size_t>(workers), 0);
    auto run_class = [&](int cls) {
        SearchState state(plan, g);
        std::uint64_t total = 0;
        for (int img = cls; img < plan.order; img += workers) {
            state.images[0] = img;
            if (state.extend(0))
                total += state.dfs(1);
        }
        partial[static_cast<size_t>(cls)] = total;
    };
    if (workers == 1) {
        run_class(0);
    } else {
        std::vector<std::thread> pool;
        for (int c = 0; c < workers; ++c)
            pool.emplace_back(run_class, c);
        for (std::thread& t : pool)
            t.join();
    }
    std::uint64_t total = 0;
    for (std::uint64_t x : partial)
        total += x;
    return total;
}

std::uint64_t count_homomorphisms_abelian(const AbelianInvariants& inv, const FiniteGroup& g) {
    if (!g.is_abelian())
        throw invariant_error("group '" + g.name() + "' is not abelian");
    std::uint64_t total = 1;
    for (int i = 0; i < inv.free_rank; ++i)
        total *= static_cast<std::uint64_t>(g.order());
    for (const Int& d : inv.torsion) {
        // #{x : x^d = e}; d always fits a 64-bit int for any realistic input.
        std::int64_t e = static_cast<std::int64_t>(d);
        std::uint64_t solutions = 0;
        for (int x = 0; x < g.order(); ++x)
            if (g.pow(x, e) == 0)
                ++solutions;
        total *= solutions;
    }
    return total;
}

} // namespace hbg
