#ifndef HBG_TESTS_SUPPORT_HPP
#define HBG_TESTS_SUPPORT_HPP

#include <random>
#include <string>
#include <vector>

#include "hbg/presentation.hpp"

namespace hbg::testsupport {

inline Word random_word(std::mt19937_64& rng, const AlphabetPtr& alpha, int max_len) {
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_int_distribution<int> gen(0, alpha->size() - 1);
    std::uniform_int_distribution<int> sign(0, 1);
    std::vector<int> letters;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
        int g = gen(rng) + 1;
        letters.push_back(sign(rng) ? g : -g);
    }
    return Word::from_letters(alpha, letters);
}

// A labelled random presentation with up to `max_gens` generators (at least
// one), up to `max_rels` relators of length up to `max_len`.
inline Presentation random_presentation(std::mt19937_64& rng, int max_gens, int max_rels,
                                        int max_len) {
    static const std::vector<std::string> pool = {"a", "b", "c", "d", "e"};
    std::uniform_int_distribution<int> gens(1, max_gens);
    std::uniform_int_distribution<int> rels(0, max_rels);
    int ng = gens(rng);
    AlphabetPtr alpha =
        Alphabet::make(std::vector<std::string>(pool.begin(), pool.begin() + ng));
    std::vector<Relation> relations;
    int nr = rels(rng);
    for (int i = 0; i < nr; ++i)
        relations.push_back(
            Relation{"r" + std::to_string(i + 1), random_word(rng, alpha, max_len)});
    return Presentation(alpha, std::move(relations));
}

} // namespace hbg::testsupport

#endif
