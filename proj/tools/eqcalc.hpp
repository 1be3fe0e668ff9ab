#ifndef HBG_TOOLS_EQCALC_HPP
#define HBG_TOOLS_EQCALC_HPP

// A small self-verifying equality calculus on top of product-of-conjugates
// certificates.  An Eq asserts  lhs = rhs  modulo the relations of a fixed
// presentation and carries a certificate whose evaluation freely equals
// lhs . rhs^-1.  Every operation re-checks that invariant on the value it
// returns, so a chain of operations that constructs without throwing is a
// machine-checked derivation; the final certificate can be handed to
// add_relation / remove_relation unchanged.

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hbg/errors.hpp"
#include "hbg/presentation.hpp"
#include "hbg/search.hpp"
#include "hbg/tietze.hpp"
#include "hbg/word.hpp"

namespace eqcalc {

struct Eq {
    hbg::Word lhs;
    hbg::Word rhs;
    hbg::Certificate cert;
};

// All operations are bound to one presentation; references inside the
// certificates they build are by label whenever the relation has one, so a
// derivation stays valid in any presentation that contains the cited
// relations under the same labels with the same relators.
class Calc {
  public:
    explicit Calc(const hbg::Presentation& p) : p_(p) {
        for (int i = 0; i < p_.size(); ++i) {
            const hbg::Relation& r = p_.relations()[static_cast<size_t>(i)];
            if (auto pair = commuting_pair(r.relator)) commuting_.insert(*pair);
        }
    }

    const hbg::Presentation& presentation() const { return p_; }

    hbg::Word word(const std::string& expr) const {
        return hbg::parse_word(expr, p_.alphabet(), "eqcalc");
    }
    hbg::Word identity() const { return hbg::Word(p_.alphabet()); }

    // w = w with the empty certificate.
    Eq refl(const hbg::Word& w) const { return checked({w, w, {}}); }

    // relator = 1.
    Eq rel(const std::string& label) const {
        hbg::RelRef ref = ref_of(label);
        return checked({p_.relation(ref).relator, identity(), {factor(identity(), ref, +1)}});
    }

    // Splits the relator of `label` after k letters:  prefix = suffix^-1.
    Eq split(const std::string& label, int k) const {
        hbg::RelRef ref = ref_of(label);
        std::vector<int> letters = p_.relation(ref).relator.letters();
        if (k < 0 || k > static_cast<int>(letters.size()))
            throw hbg::invariant_error("eqcalc: split point " + std::to_string(k) +
                                       " outside relator " + label);
        const hbg::AlphabetPtr& alpha = p_.alphabet();
        std::vector<int> head(letters.begin(), letters.begin() + k);
        std::vector<int> tail(letters.begin() + k, letters.end());
        return checked({hbg::Word::from_letters(alpha, head),
                        hbg::invert(hbg::Word::from_letters(alpha, tail)),
                        {factor(identity(), ref, +1)}});
    }

    Eq sym(const Eq& e) const { return checked({e.rhs, e.lhs, inverted(e.cert)}); }

    Eq trans(const Eq& a, const Eq& b) const {
        if (a.rhs != b.lhs)
            throw hbg::invariant_error("eqcalc: trans mismatch: '" + hbg::render_word(a.rhs) +
                                       "' vs '" + hbg::render_word(b.lhs) + "'");
        hbg::Certificate c = a.cert;
        c.insert(c.end(), b.cert.begin(), b.cert.end());
        return checked({a.lhs, b.rhs, std::move(c)});
    }

    // (a.lhs b.lhs) = (a.rhs b.rhs).
    Eq mul(const Eq& a, const Eq& b) const {
        hbg::Certificate c = conjugated(b.cert, a.lhs);
        c.insert(c.end(), a.cert.begin(), a.cert.end());
        return checked({hbg::multiply(a.lhs, b.lhs), hbg::multiply(a.rhs, b.rhs), std::move(c)});
    }

    Eq mul(const Eq& a, const Eq& b, const Eq& c) const { return mul(a, mul(b, c)); }

    Eq lmul(const hbg::Word& w, const Eq& e) const { return mul(refl(w), e); }
    Eq rmul(const Eq& e, const hbg::Word& w) const { return mul(e, refl(w)); }

    // w lhs w^-1 = w rhs w^-1.
    Eq conj(const hbg::Word& w, const Eq& e) const {
        return checked({hbg::conjugate(w, e.lhs), hbg::conjugate(w, e.rhs),
                        conjugated(e.cert, w)});
    }

    // lhs^-1 = rhs^-1.
    Eq inv(const Eq& e) const {
        return checked({hbg::invert(e.lhs), hbg::invert(e.rhs),
                        conjugated(inverted(e.cert), hbg::invert(e.lhs))});
    }

    // u v = v u, certified by a commutator relator of the presentation that
    // factor_from_conjugate can match (any rotation or inverse works).
    Eq comm(const hbg::Word& u, const hbg::Word& v) const {
        std::optional<hbg::CertFactor> f = hbg::factor_from_conjugate(p_, hbg::commutator(u, v));
        if (!f)
            throw hbg::invariant_error("eqcalc: no commutator relator certifies [" +
                                       hbg::render_word(u) + ", " + hbg::render_word(v) + "]");
        return checked({hbg::multiply(u, v), hbg::multiply(v, u), {std::move(*f)}});
    }

    // w = sorted(w): bubble-sorts adjacent letters of commuting generators
    // toward alphabet order, one exact certificate factor per swap.
    Eq sort(const hbg::Word& w) const {
        const hbg::AlphabetPtr& alpha = p_.alphabet();
        std::vector<int> letters = w.letters();
        hbg::Certificate c;
        bool moved = true;
        while (moved) {
            moved = false;
            for (size_t i = 0; i + 1 < letters.size(); ++i) {
                int g = std::abs(letters[i]) - 1;
                int h = std::abs(letters[i + 1]) - 1;
                if (g <= h || !commuting_.count({h, g})) continue;
                std::vector<int> head(letters.begin(), letters.begin() + static_cast<long>(i));
                hbg::Word prefix = hbg::Word::from_letters(alpha, head);
                hbg::Word x = letter_word(letters[i]);
                hbg::Word y = letter_word(letters[i + 1]);
                std::optional<hbg::CertFactor> f =
                    hbg::factor_from_conjugate(p_, hbg::conjugate(prefix, hbg::commutator(x, y)));
                if (!f)
                    throw hbg::invariant_error("eqcalc: sort lost the commutator for [" +
                                               hbg::render_word(x) + ", " + hbg::render_word(y) + "]");
                c.push_back(std::move(*f));
                std::swap(letters[i], letters[i + 1]);
                moved = true;
            }
        }
        return checked({w, hbg::Word::from_letters(alpha, letters), std::move(c)});
    }

    // a = b, valid when both sides sort to the same word.
    Eq mod_comm(const hbg::Word& a, const hbg::Word& b) const {
        Eq sa = sort(a);
        Eq sb = sort(b);
        if (sa.rhs != sb.rhs)
            throw hbg::invariant_error("eqcalc: '" + hbg::render_word(a) + "' and '" +
                                       hbg::render_word(b) + "' differ beyond commutation: '" +
                                       hbg::render_word(sa.rhs) + "' vs '" +
                                       hbg::render_word(sb.rhs) + "'");
        return trans(sa, sym(sb));
    }

    // The certificate of e, re-keyed as a proof of `relator`; requires
    // lhs . rhs^-1 to freely equal it.
    hbg::Certificate relator_cert(const hbg::Word& relator, const Eq& e) const {
        hbg::Word got = hbg::multiply(e.lhs, hbg::invert(e.rhs));
        if (got != relator)
            throw hbg::invariant_error("eqcalc: derivation proves '" + hbg::render_word(got) +
                                       "', wanted '" + hbg::render_word(relator) + "'");
        return e.cert;
    }

  private:
    static hbg::CertFactor factor(hbg::Word conj, hbg::RelRef ref, int sign) {
        hbg::CertFactor f;
        f.conjugator = std::move(conj);
        f.rel = std::move(ref);
        f.sign = sign;
        return f;
    }

    hbg::RelRef ref_of(const std::string& label) const {
        if (!p_.has_label(label))
            throw hbg::lookup_error("eqcalc: no relation labeled '" + label + "'");
        return hbg::RelRef::by_label(label);
    }

    hbg::Word letter_word(int letter) const {
        return hbg::gen_word(p_.alphabet(), std::abs(letter) - 1, letter > 0 ? 1 : -1);
    }

    static hbg::Certificate conjugated(hbg::Certificate c, const hbg::Word& w) {
        for (hbg::CertFactor& f : c) f.conjugator = hbg::multiply(w, f.conjugator);
        return c;
    }

    static hbg::Certificate inverted(hbg::Certificate c) {
        std::reverse(c.begin(), c.end());
        for (hbg::CertFactor& f : c) f.sign = -f.sign;
        return c;
    }

    // {smaller id, larger id} when the relator is a commutator of two
    // distinct single letters, up to rotation.
    static std::optional<std::pair<int, int>> commuting_pair(const hbg::Word& relator) {
        hbg::Word core = hbg::cyclic_reduce(relator).first;
        std::vector<int> l = core.letters();
        if (l.size() != 4 || l[2] != -l[0] || l[3] != -l[1]) return std::nullopt;
        int g = std::abs(l[0]) - 1;
        int h = std::abs(l[1]) - 1;
        if (g == h) return std::nullopt;
        return std::make_pair(std::min(g, h), std::max(g, h));
    }

    Eq checked(Eq e) const {
        hbg::Word got = hbg::evaluate_certificate(e.cert, p_);
        hbg::Word want = hbg::multiply(e.lhs, hbg::invert(e.rhs));
        if (got != want)
            throw hbg::invariant_error("eqcalc: certificate for '" + hbg::render_word(e.lhs) +
                                       " = " + hbg::render_word(e.rhs) + "' evaluates to '" +
                                       hbg::render_word(got) + "'");
        return e;
    }

    hbg::Presentation p_;
    std::set<std::pair<int, int>> commuting_;
};

} // namespace eqcalc

#endif
