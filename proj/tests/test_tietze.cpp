#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>

#include "hbg/abelian.hpp"
#include "hbg/tietze.hpp"
#include "test_support.hpp"

using namespace hbg;
using testsupport::random_presentation;
using testsupport::random_word;

namespace {

Presentation toy() {
    return parse_presentation("gens: a b\n"
                              "rel R1: a^2\n"
                              "rel R2: [a, b]\n",
                              "toy");
}

Word W(const AlphabetPtr& a, const std::string& s) { return parse_word(s, a); }

} // namespace

TEST_CASE("evaluate_certificate") {
    Presentation p = toy();
    auto alpha = p.alphabet();

    CHECK(evaluate_certificate({}, p).empty());

    Certificate one = {{W(alpha, "b"), RelRef::by_label("R1"), 1}};
    CHECK(evaluate_certificate(one, p) == W(alpha, "b a^2 b^-1"));

    Certificate two = {{Word(alpha), RelRef::by_index(2), -1},
                       {W(alpha, "a"), RelRef::by_label("R1"), 1}};
    CHECK(evaluate_certificate(two, p) ==
          multiply(invert(W(alpha, "a b a^-1 b^-1")), W(alpha, "a a^2 a^-1")));

    Certificate dangling = {{Word(alpha), RelRef::by_label("nope"), 1}};
    CHECK_THROWS_AS(evaluate_certificate(dangling, p), lookup_error);
    Certificate bad_sign = {{Word(alpha), RelRef::by_label("R1"), 2}};
    CHECK_THROWS_AS(evaluate_certificate(bad_sign, p), invariant_error);
}

TEST_CASE("add_relation verifies its certificate") {
    Presentation p = toy();
    auto alpha = p.alphabet();

    Certificate cert = {{W(alpha, "b"), RelRef::by_label("R1"), 1}};
    Presentation q = add_relation(p, "C", W(alpha, "b a^2 b^-1"), cert);
    CHECK(q.size() == 3);
    CHECK(q.relations()[2].label == "C");
    CHECK(q.relations()[2].relator == W(alpha, "b a^2 b^-1"));

    CHECK_THROWS_AS(add_relation(p, "C", W(alpha, "b a^3 b^-1"), cert), verify_error);
    CHECK_THROWS_AS(add_relation(q, "C", W(alpha, "b a^2 b^-1"), cert), invariant_error);
}

TEST_CASE("remove_relation checks against the reduced presentation") {
    Presentation p = toy();
    auto alpha = p.alphabet();

    // Add a derived relation, then delete it again with the same certificate.
    Certificate cert = {{W(alpha, "b"), RelRef::by_label("R1"), 1}};
    Presentation q = add_relation(p, "C", W(alpha, "b a^2 b^-1"), cert);
    Presentation r = remove_relation(q, RelRef::by_label("C"), cert);
    CHECK(r.size() == 2);
    CHECK(equal_canonical(r, p));

    // A freely trivial relator needs no certificate.
    Presentation t = add_relation(p, "", W(alpha, "a b b^-1 a^-1"), {});
    CHECK(remove_relation(t, RelRef::by_index(3), {}).size() == 2);

    // Positional references in the certificate use the reduced numbering:
    // once R1 (#1) is being removed, #1 denotes R2.  The certificate below
    // would derive a^2 only under the original numbering, so it must fail.
    Certificate self = {{Word(alpha), RelRef::by_index(1), 1}};
    CHECK_THROWS_AS(remove_relation(p, RelRef::by_index(1), self), verify_error);

    // A certificate naming the removed relation dangles.
    Certificate loop = {{Word(alpha), RelRef::by_label("R1"), 1}};
    CHECK_THROWS_AS(remove_relation(p, RelRef::by_label("R1"), loop), lookup_error);

    // Deleting a relation that is genuinely derivable from the rest.
    Presentation dup = add_relation(p, "R1copy", W(alpha, "b a^2 b^-1"),
                                    {{W(alpha, "b"), RelRef::by_label("R1"), 1}});
    Presentation back =
        remove_relation(dup, RelRef::by_label("R1copy"),
                        {{W(alpha, "b"), RelRef::by_label("R1"), 1}});
    CHECK(equal_canonical(back, p));
}

TEST_CASE("add_generator appends a definitional relation") {
    Presentation p = toy();
    Presentation q = add_generator(p, "z", W(p.alphabet(), "a b^-1"));
    CHECK(q.alphabet()->names() == std::vector<std::string>{"a", "b", "z"});
    CHECK(q.size() == 3);
    CHECK(q.relations()[2].label == "z");
    CHECK(q.relations()[2].relator == W(q.alphabet(), "z b a^-1"));

    CHECK_THROWS_AS(add_generator(p, "a", Word(p.alphabet())), invariant_error);
    CHECK_THROWS_AS(add_generator(p, "R1", Word(p.alphabet())), invariant_error);
    CHECK_THROWS_AS(add_generator(p, "9z", Word(p.alphabet())), invariant_error);
}

TEST_CASE("remove_generator solves the via relation") {
    const char* text = "gens: a g b\n"
                       "rel V: a g b\n"
                       "rel U: g^2 a\n";
    Presentation p = parse_presentation(text, "inline");
    Presentation q = remove_generator(p, "g", RelRef::by_label("V"));
    CHECK(q.alphabet()->names() == std::vector<std::string>{"a", "b"});
    REQUIRE(q.size() == 1);
    // g = a^-1 b^-1, so U becomes a^-1 b^-1 a^-1 b^-1 a.
    CHECK(q.relations()[0].relator == W(q.alphabet(), "a^-1 b^-1 a^-1 b^-1 a"));

    // Inverse occurrence: a g^-1 b = 1 gives g = b a.
    Presentation pi = parse_presentation("gens: a g b\nrel V: a g^-1 b\nrel U: g a\n", "i");
    Presentation qi = remove_generator(pi, "g", RelRef::by_label("V"));
    CHECK(qi.relations()[0].relator == W(qi.alphabet(), "b a^2"));

    // Unusable via relations.
    Presentation two = parse_presentation("gens: a g\nrel V: g a g\n", "t");
    CHECK_THROWS_AS(remove_generator(two, "g", RelRef::by_label("V")), invariant_error);
    Presentation sq = parse_presentation("gens: a g\nrel V: g^2 a\n", "s");
    CHECK_THROWS_AS(remove_generator(sq, "g", RelRef::by_label("V")), invariant_error);
    Presentation none = parse_presentation("gens: a g\nrel V: a^3\n", "n");
    CHECK_THROWS_AS(remove_generator(none, "g", RelRef::by_label("V")), invariant_error);
    CHECK_THROWS_AS(remove_generator(p, "q", RelRef::by_label("V")), lookup_error);

    // A conjugate occurrence g x g^-1 counts as two occurrences.
    Presentation conj = parse_presentation("gens: a g\nrel V: g a g^-1 a\n", "c");
    CHECK_THROWS_AS(remove_generator(conj, "g", RelRef::by_label("V")), invariant_error);
}

TEST_CASE("add_generator then remove_generator is the identity up to canonical form") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 50; ++i) {
        Presentation p = random_presentation(rng, 3, 4, 6);
        Word def = random_word(rng, p.alphabet(), 4);
        Presentation q = add_generator(p, "fresh", def);
        Presentation back = remove_generator(q, "fresh", RelRef::by_label("fresh"));
        CHECK(equal_canonical(back, p));
    }
}

TEST_CASE("rename_generator") {
    Presentation p = toy();
    Presentation q = rename_generator(p, "a", "x");
    CHECK(q.alphabet()->names() == std::vector<std::string>{"x", "b"});
    CHECK(q.relations()[0].relator == W(q.alphabet(), "x^2"));
    CHECK(q.relations()[0].label == "R1");

    CHECK_THROWS_AS(rename_generator(p, "a", "b"), invariant_error);
    CHECK_THROWS_AS(rename_generator(p, "nope", "x"), lookup_error);
    CHECK_THROWS_AS(rename_generator(p, "a", "1x"), invariant_error);

    // Renaming back and forth is the identity.
    CHECK(equal_canonical(rename_generator(q, "x", "a"), p));
}

TEST_CASE("script parsing") {
    const char* text = R"(# reduction script
source before.pres
target after.pres

addrel C: b a^2 b^-1 by (b ; R1 ; +)
delrel C by (b ; R1 ; +)
addrel T: 1 by
delrel #3 by
addgen z := a b^-1
delgen z via z
rename a -> x
addrel L: x^2 x^2 by (1 ; R1 ; +) \
  ( x^2 ; #1 ; + )
)";
    Script s = parse_script(text, "red.tietze");
    CHECK(s.source_path == "before.pres");
    CHECK(s.target_path == "after.pres");
    REQUIRE(s.moves.size() == 8);

    CHECK(s.moves[0].kind == ScriptMove::Kind::AddRel);
    CHECK(s.moves[0].name == "C");
    CHECK(s.moves[0].arg == "b a^2 b^-1");
    REQUIRE(s.moves[0].factors.size() == 1);
    CHECK(s.moves[0].factors[0].conjugator == "b");
    CHECK(s.moves[0].factors[0].rel == "R1");
    CHECK(s.moves[0].factors[0].sign == 1);

    CHECK(s.moves[1].kind == ScriptMove::Kind::DelRel);
    CHECK(s.moves[1].name == "C");
    CHECK(s.moves[2].factors.empty());
    CHECK(s.moves[3].kind == ScriptMove::Kind::DelRel);
    CHECK(s.moves[3].name == "#3");
    CHECK(s.moves[3].factors.empty());

    CHECK(s.moves[4].kind == ScriptMove::Kind::AddGen);
    CHECK(s.moves[4].name == "z");
    CHECK(s.moves[4].arg == "a b^-1");
    CHECK(s.moves[5].kind == ScriptMove::Kind::DelGen);
    CHECK(s.moves[5].name == "z");
    CHECK(s.moves[5].arg == "z");
    CHECK(s.moves[6].kind == ScriptMove::Kind::Rename);
    CHECK(s.moves[6].name == "a");
    CHECK(s.moves[6].arg == "x");

    // Line continuation glued the two factors together.
    REQUIRE(s.moves[7].factors.size() == 2);
    CHECK(s.moves[7].factors[1].conjugator == "x^2");
    CHECK(s.moves[7].factors[1].rel == "#1");
    CHECK(s.moves[7].describe() == "addrel L");
    CHECK(s.moves[5].describe() == "delgen z via z");

    CHECK_THROWS_AS(parse_script("source a\n", "x"), parse_error);
    CHECK_THROWS_AS(parse_script("source a\ntarget b\nfrobnicate c\n", "x"), parse_error);
    CHECK_THROWS_WITH_AS(parse_script("source a\ntarget b\naddrel X: a\n", "x"),
                         doctest::Contains("x:3"), parse_error);
    CHECK_THROWS_AS(parse_script("source a\ntarget b\naddrel X: a by (a ; R1)\n", "x"),
                    parse_error);
    CHECK_THROWS_AS(parse_script("source a\ntarget b\naddrel X: a by (a ; R1 ; *)\n", "x"),
                    parse_error);
}

TEST_CASE("replay_script and check_script_file") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "hbg_tietze_test";
    fs::create_directories(dir);

    {
        std::ofstream(dir / "before.pres") << "gens: a b\n"
                                              "rel R1: a^2\n"
                                              "rel R2: [a, b]\n";
        std::ofstream(dir / "after.pres") << "gens: x b\n"
                                             "rel R2: [x, b]\n"
                                             "rel R1: x^2\n";
        std::ofstream(dir / "ok.tietze") << "source before.pres\n"
                                            "target after.pres\n"
                                            "addrel C: b a^2 b^-1 by (b ; R1 ; +)\n"
                                            "delrel C by (b ; R1 ; +)\n"
                                            "rename a -> x\n";
    }
    int seen = 0;
    ReplayOutcome out = check_script_file((dir / "ok.tietze").string(),
                                          [&](int, const ScriptMove&, const Presentation&) {
                                              ++seen;
                                          });
    CHECK(out.moves == 3);
    CHECK(seen == 3);
    CHECK(out.final.alphabet()->names() == std::vector<std::string>{"x", "b"});
    CHECK(equal_canonical(out.final, out.target));

    // A wrong certificate fails with the script location in the message.
    std::ofstream(dir / "bad.tietze") << "source before.pres\n"
                                         "target after.pres\n"
                                         "addrel C: b a^2 b^-1 by (1 ; R1 ; +)\n";
    CHECK_THROWS_WITH_AS(check_script_file((dir / "bad.tietze").string()),
                         doctest::Contains("bad.tietze:3"), verify_error);

    // A replay that succeeds but lands on the wrong target fails the final
    // comparison.
    std::ofstream(dir / "short.tietze") << "source before.pres\n"
                                           "target after.pres\n"
                                           "addrel C: b a^2 b^-1 by (b ; R1 ; +)\n";
    CHECK_THROWS_AS(check_script_file((dir / "short.tietze").string()), verify_error);
}

TEST_CASE("property: random move sequences preserve the abelianization") {
    std::mt19937_64 rng(22);
    for (int round = 0; round < 200; ++round) {
        Presentation p = random_presentation(rng, 3, 4, 6);
        AbelianInvariants inv = abelianization(p);
        int fresh = 0;

        std::uniform_int_distribution<int> which(0, 3);
        for (int step = 0; step < 6; ++step) {
            switch (which(rng)) {
            case 0: {
                // Derive a relation from a random certificate, add it, and
                // sometimes delete it again right away with the same
                // certificate.
                if (p.size() == 0)
                    break;
                std::uniform_int_distribution<int> nf(0, 3), rel(1, p.size());
                std::uniform_int_distribution<int> sign(0, 1);
                Certificate cert;
                int n = nf(rng);
                for (int i = 0; i < n; ++i)
                    cert.push_back(CertFactor{random_word(rng, p.alphabet(), 3),
                                              RelRef::by_index(rel(rng)),
                                              sign(rng) ? 1 : -1});
                std::string label = "t" + std::to_string(++fresh);
                Word relator = evaluate_certificate(cert, p);
                Presentation q = add_relation(p, label, relator, cert);
                CHECK(abelianization(q) == inv);
                if (sign(rng)) {
                    // References were by position in the full presentation;
                    // removing the appended final relation leaves them valid.
                    q = remove_relation(q, RelRef::by_label(label), cert);
                    CHECK(abelianization(q) == inv);
                }
                p = q;
                break;
            }
            case 1: {
                std::string name = "g" + std::to_string(++fresh);
                Presentation q =
                    add_generator(p, name, random_word(rng, p.alphabet(), 4));
                CHECK(abelianization(q) == inv);
                // Half the time eliminate it again straight away.
                std::uniform_int_distribution<int> coin(0, 1);
                if (coin(rng)) {
                    q = remove_generator(q, name, RelRef::by_label(name));
                    CHECK(abelianization(q) == inv);
                }
                p = q;
                break;
            }
            case 2: {
                std::string name = "n" + std::to_string(++fresh);
                std::uniform_int_distribution<int> pick(0, p.alphabet()->size() - 1);
                p = rename_generator(p, p.alphabet()->name(pick(rng)), name);
                CHECK(abelianization(p) == inv);
                break;
            }
            case 3: {
                // Remove a freely trivial relation if we can find one;
                // otherwise add one to remove later.
                Word triv(p.alphabet());
                Presentation q = add_relation(p, "", triv, {});
                q = remove_relation(q, RelRef::by_index(q.size()), {});
                CHECK(abelianization(q) == inv);
                p = q;
                break;
            }
            }
        }
    }
}
