#include "hbg/search.hpp"

#include "hbg/abelian.hpp"
#include "hbg/errors.hpp"
#include "hbg/word.hpp"

#include <algorithm>
#include <chrono>
#include <list>
#include <string>
#include <unordered_map>
#include <vector>

namespace hbg {

namespace {

// Reference a relation by label when it has one, by 1-based index otherwise.
RelRef ref_for(const Presentation& p, int index0) {
    const Relation& rel = p.relations()[static_cast<size_t>(index0)];
    return rel.label.empty() ? RelRef::by_index(index0 + 1) : RelRef::by_label(rel.label);
}

std::vector<int> rotate_letters(const std::vector<int>& v, size_t j) {
    std::vector<int> out;
    out.reserve(v.size());
    out.insert(out.end(), v.begin() + static_cast<std::ptrdiff_t>(j), v.end());
    out.insert(out.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(j));
    return out;
}

// One usable form of one relator: a cyclic rotation rho of the cyclic core
// of R^sign, together with the reduced conjugator c0 such that
// rho = c0^-1 . R^sign . c0 ... stored inverted: rho = inv_c0 R^s inv_c0^-1.
struct Rotation {
    int rel = 0;             // relation index (0-based)
    int sign = 1;
    int rotation = 0;        // letters rotated off the front of the core
    std::vector<int> rho;    // the rotated core, freely and cyclically reduced
    Word base_conj;          // w: rho = w . R^sign . w^-1 as free words
};

struct Catalog {
    std::vector<Rotation> rotations;
    // commuting_pair[g * n + h]: index of a commutator relation for
    // generators g and h, or -1.
    std::vector<int> commuting_pair;
    int n = 0;

    int commutes(int g, int h) const {
        return commuting_pair[static_cast<size_t>(g) * static_cast<size_t>(n) +
                              static_cast<size_t>(h)];
    }
};

Catalog build_catalog(const Presentation& p) {
    Catalog cat;
    cat.n = p.alphabet()->size();
    cat.commuting_pair.assign(static_cast<size_t>(cat.n) * static_cast<size_t>(cat.n), -1);

    for (size_t r = 0; r < p.relations().size(); ++r) {
        const Word& relator = p.relations()[r].relator;
        for (int sign : {1, -1}) {
            Word signed_rel = sign > 0 ? relator : invert(relator);
            auto [core, pre] = cyclic_reduce(signed_rel);
            std::vector<int> base = core.letters();
            if (base.empty())
                continue;  // a trivial relator contributes nothing
            for (size_t j = 0; j < base.size(); ++j) {
                std::vector<int> rho = rotate_letters(base, j);
                // Skip rotations already seen for this relator and sign
                // (periodic cores such as a^4 repeat).
                bool dup = false;
                for (const Rotation& prev : cat.rotations)
                    if (prev.rel == static_cast<int>(r) && prev.sign == sign &&
                        prev.rho == rho) {
                        dup = true;
                        break;
                    }
                if (dup)
                    continue;
                // rho = P^-1 core P with P the first j letters of the core,
                // and core = pre^-1 . R^sign . pre, so the base conjugator
                // is (pre . P)^-1.
                std::vector<int> pfx(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(j));
                Word conj = invert(
                    multiply(pre, Word::from_letters(p.alphabet(), pfx)));
                cat.rotations.push_back(
                    Rotation{static_cast<int>(r), sign, static_cast<int>(j), std::move(rho),
                             std::move(conj)});
            }
        }

        // Detect two-generator commutator relators: cyclic core e f e^-1 f^-1
        // on distinct generators.  Those drive the normalization pass.
        std::vector<int> c = cyclic_reduce(relator).first.letters();
        if (c.size() == 4 && c[2] == -c[0] && c[3] == -c[1]) {
            int g = std::abs(c[0]) - 1, h = std::abs(c[1]) - 1;
            if (g != h) {
                auto& slot_gh = cat.commuting_pair[static_cast<size_t>(g) *
                                                       static_cast<size_t>(cat.n) +
                                                   static_cast<size_t>(h)];
                auto& slot_hg = cat.commuting_pair[static_cast<size_t>(h) *
                                                       static_cast<size_t>(cat.n) +
                                                   static_cast<size_t>(g)];
                if (slot_gh < 0)
                    slot_gh = static_cast<int>(r);
                if (slot_hg < 0)
                    slot_hg = static_cast<int>(r);
            }
        }
    }
    return cat;
}

// Memo of residuals that failed: residual -> largest remaining depth that
// was exhausted from it.  LRU-capped.
class FailMemo {
  public:
    explicit FailMemo(size_t cap) : cap_(cap) {}

    bool known_failure(const std::string& key, int remaining) {
        auto it = map_.find(key);
        if (it == map_.end())
            return false;
        order_.splice(order_.begin(), order_, it->second.second);
        return it->second.first >= remaining;
    }

    void record_failure(const std::string& key, int remaining) {
        auto it = map_.find(key);
        if (it != map_.end()) {
            it->second.first = std::max(it->second.first, remaining);
            order_.splice(order_.begin(), order_, it->second.second);
            return;
        }
        order_.push_front(key);
        map_.emplace(key, std::make_pair(remaining, order_.begin()));
        if (map_.size() > cap_) {
            map_.erase(order_.back());
            order_.pop_back();
        }
    }

  private:
    size_t cap_;
    std::unordered_map<std::string, std::pair<int, std::list<std::string>::iterator>> map_;
    std::list<std::string> order_;
};

std::string letters_key(const std::vector<int>& letters) {
    std::string key;
    key.reserve(letters.size() * 3);
    for (int l : letters) {
        key += std::to_string(l);
        key += ',';
    }
    return key;
}

struct Searcher {
    const Presentation& p;
    const SearchBudget& budget;
    Catalog cat;
    DeriveStats& stats;
    Certificate path;
    FailMemo memo{200000};
    std::chrono::steady_clock::time_point deadline;
    bool expired = false;

    Searcher(const Presentation& pres, const SearchBudget& b, DeriveStats& st)
        : p(pres), budget(b), cat(build_catalog(pres)), stats(st) {
        deadline = std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(budget.time_limit));
    }

    bool out_of_time() {
        if (expired)
            return true;
        if ((stats.nodes & 1023) == 0 && std::chrono::steady_clock::now() > deadline) {
            expired = true;
            stats.timed_out = true;
        }
        return expired;
    }

    Word word_of(const std::vector<int>& letters) const {
        return Word::from_letters(p.alphabet(), letters);
    }

    // Bubble commuting adjacent letters toward alphabet order, appending one
    // exact factor to `path` per swap.  Returns the normalized letters.
    std::vector<int> normalize(std::vector<int> letters) {
        while (true) {
            size_t swap_at = letters.size();
            for (size_t i = 0; i + 1 < letters.size(); ++i) {
                int g = std::abs(letters[i]) - 1, h = std::abs(letters[i + 1]) - 1;
                if (g > h && cat.commutes(g, h) >= 0) {
                    swap_at = i;
                    break;
                }
            }
            if (swap_at == letters.size())
                return letters;

            int l1 = letters[swap_at], l2 = letters[swap_at + 1];
            // x l1 l2 y  =  (x [l1,l2] x^-1) . (x l2 l1 y)
            std::vector<int> prefix(letters.begin(),
                                    letters.begin() + static_cast<std::ptrdiff_t>(swap_at));
            Word commutator_word =
                word_of(std::vector<int>{l1, l2, -l1, -l2});
            Word factor = conjugate(word_of(prefix), commutator_word);
            std::optional<CertFactor> cf = factor_from_conjugate(p, factor);
            if (!cf)
                throw invariant_error(
                    "normalization produced a swap factor outside the relator set");
            path.push_back(*cf);

            std::swap(letters[swap_at], letters[swap_at + 1]);
            letters = word_of(letters).letters();  // re-reduce after the swap
        }
    }

    struct Candidate {
        std::vector<int> next;  // new residual letters
        Word conj;              // factor conjugator
        int rel;
        int sign;
        int rotation;
        int position;
        std::int64_t conj_len;
    };

    // All one-factor rewrites of the residual permitted by the budget.
    std::vector<Candidate> candidates(const std::vector<int>& letters) {
        std::vector<Candidate> out;
        for (const Rotation& rot : cat.rotations) {
            for (size_t pos = 0; pos <= letters.size(); ++pos) {
                size_t match = 0;
                while (match < rot.rho.size() && pos + match < letters.size() &&
                       rot.rho[match] == letters[pos + match])
                    ++match;
                // Unmatched insertions only at the front; everywhere else the
                // rotation must consume at least one letter maximally.
                if (match == 0 && pos != 0)
                    continue;

                // x (rho tail^-1) y with rho = match-part . tail:
                //   residual = (x rho x^-1) . (x tail^-1 y)
                std::vector<int> x(letters.begin(),
                                   letters.begin() + static_cast<std::ptrdiff_t>(pos));
                std::vector<int> tail(rot.rho.begin() + static_cast<std::ptrdiff_t>(match),
                                      rot.rho.end());
                std::vector<int> y(letters.begin() + static_cast<std::ptrdiff_t>(pos + match),
                                   letters.end());
                Word xw = word_of(x);
                Word conj = multiply(xw, rot.base_conj);
                if (conj.length() > budget.max_conjugator_length)
                    continue;
                Word next = multiply(multiply(xw, invert(word_of(tail))), word_of(y));
                if (next.length() > budget.max_intermediate_length)
                    continue;
                std::int64_t conj_len = conj.length();
                out.push_back(Candidate{next.letters(), std::move(conj), rot.rel, rot.sign,
                                        rot.rotation, static_cast<int>(pos), conj_len});
            }
        }
        std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
            if (a.next.size() != b.next.size())
                return a.next.size() < b.next.size();
            if (a.conj_len != b.conj_len)
                return a.conj_len < b.conj_len;
            if (a.rel != b.rel)
                return a.rel < b.rel;
            if (a.sign != b.sign)
                return a.sign > b.sign;  // +1 before -1
            if (a.rotation != b.rotation)
                return a.rotation < b.rotation;
            return a.position < b.position;
        });
        return out;
    }

    // Depth-limited search; on success `path` holds the full factor list.
    bool dfs(const std::vector<int>& raw, int remaining) {
        ++stats.nodes;
        size_t path_mark = path.size();
        // A residual that is exactly one conjugate of a relator finishes in a
        // single factor; checking the raw word first keeps certificates for
        // such targets free of commuting-normalization noise.
        if (remaining >= 1 && !raw.empty()) {
            if (std::optional<CertFactor> hit = factor_from_conjugate(p, word_of(raw))) {
                path.push_back(std::move(*hit));
                return true;
            }
        }
        std::vector<int> letters = normalize(raw);
        if (letters.empty())
            return true;
        if (remaining >= 1 && !letters.empty()) {
            if (std::optional<CertFactor> hit =
                    factor_from_conjugate(p, word_of(letters))) {
                path.push_back(std::move(*hit));
                return true;
            }
        }
        if (remaining == 0 || out_of_time()) {
            path.resize(path_mark);
            return false;
        }
        std::string key = letters_key(letters);
        if (memo.known_failure(key, remaining)) {
            path.resize(path_mark);
            return false;
        }

        for (Candidate& c : candidates(letters)) {
            path.push_back(CertFactor{c.conj, ref_for(p, c.rel), c.sign});
            if (dfs(c.next, remaining - 1))
                return true;
            path.pop_back();
            if (out_of_time())
                break;
        }

        path.resize(path_mark);
        if (!expired)
            memo.record_failure(key, remaining);
        return false;
    }
};

} // namespace

bool abelian_filter(const Presentation& p, const Word& target) {
    IntMatrix basis = hnf_row_basis(relation_matrix(p));
    std::vector<Int> v = target.alphabet()
                             ? exponent_vector(target)
                             : std::vector<Int>(static_cast<size_t>(p.alphabet()->size()));
    return in_row_lattice(basis, std::move(v));
}

std::optional<CertFactor> factor_from_conjugate(const Presentation& p, const Word& f) {
    auto [core, outer] = cyclic_reduce(f);
    std::vector<int> want = core.letters();
    if (want.empty())
        return std::nullopt;
    for (size_t r = 0; r < p.relations().size(); ++r) {
        for (int sign : {1, -1}) {
            Word signed_rel =
                sign > 0 ? p.relations()[r].relator : invert(p.relations()[r].relator);
            auto [base_core, pre] = cyclic_reduce(signed_rel);
            std::vector<int> base = base_core.letters();
            if (base.size() != want.size() || base.empty())
                continue;
            for (size_t j = 0; j < base.size(); ++j) {
                if (rotate_letters(base, j) != want)
                    continue;
                // want = P^-1 base P (P = first j letters), and
                // base = pre^-1 R^sign pre, so
                // f = outer (pre P)^-1 R^sign (pre P) outer^-1.
                std::vector<int> pfx(base.begin(),
                                     base.begin() + static_cast<std::ptrdiff_t>(j));
                Word conj = multiply(
                    outer, invert(multiply(pre, Word::from_letters(p.alphabet(), pfx))));
                return CertFactor{std::move(conj), ref_for(p, static_cast<int>(r)), sign};
            }
        }
    }
    return std::nullopt;
}

std::optional<Certificate> derive_certificate(const Presentation& p, const Word& target,
                                              const SearchBudget& budget,
                                              DeriveStats* stats) {
    if (budget.max_factors < 1 || budget.max_conjugator_length < 0 ||
        budget.max_intermediate_length < 1 || !(budget.time_limit > 0))
        throw invariant_error("invalid search budget");
    if (target.alphabet() && !target.alphabet()->same_names(*p.alphabet()))
        throw invariant_error("derive target is over a different alphabet");

    DeriveStats local;
    DeriveStats& st = stats ? *stats : local;
    st = DeriveStats{};

    if (!abelian_filter(p, target)) {
        st.abelian_rejected = true;
        return std::nullopt;
    }

    Searcher searcher(p, budget, st);
    std::vector<int> letters = target.letters();

    std::optional<Certificate> found;
    for (int depth = 0; depth <= budget.max_factors && !found; ++depth) {
        searcher.path.clear();
        if (searcher.dfs(letters, depth))
            found = searcher.path;
        else if (searcher.expired)
            break;
        st.depth_reached = depth;
        if (found)
            st.factors = depth;
    }
    if (!found)
        return std::nullopt;

    st.total_factors = static_cast<int>(found->size());
    // The factors were emitted as exact left-to-right peeling steps, so this
    // must reproduce the target on the nose; anything else is a defect.
    Word check = evaluate_certificate(*found, p);
    if (check.letters() != target.letters())
        throw invariant_error("derived certificate failed re-verification");
    return found;
}

} // namespace hbg
