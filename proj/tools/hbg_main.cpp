// hbg — command-line front end for the handlebody-group verification kit.
//
// Subcommands: reduce, eq, snf, homcount, derive, check, corpus-verify.
// Exit codes: 0 success/verified, 1 definite verification failure,
// 2 unknown (search budget exhausted), 64 usage or input-parse error.
// `--json` replaces the human report with one machine-readable object on
// standard output; timings never appear in JSON so identical invocations
// produce byte-identical output.

#include "hbg/abelian.hpp"
#include "hbg/corpus.hpp"
#include "hbg/errors.hpp"
#include "hbg/homcount.hpp"
#include "hbg/presentation.hpp"
#include "hbg/search.hpp"
#include "hbg/tietze.hpp"
#include "hbg/word.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;
using hbg::Int;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUnknown = 2;
constexpr int kUsage = 64;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string format_seconds(double s) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << s << " s";
    return out.str();
}

std::string torsion_text(const std::vector<Int>& torsion) {
    std::string out = "[";
    for (size_t i = 0; i < torsion.size(); ++i) {
        if (i)
            out += ",";
        out += torsion[i].str();
    }
    return out + "]";
}

json torsion_json(const std::vector<Int>& torsion) {
    json arr = json::array();
    for (const Int& d : torsion) {
        if (d <= std::numeric_limits<std::int64_t>::max())
            arr.push_back(d.convert_to<std::int64_t>());
        else
            arr.push_back(d.str());
    }
    return arr;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// Renders one certificate factor in the script-file factor syntax, so the
// output of `derive` can be pasted into a .tietze move.
std::string factor_text(const hbg::CertFactor& f) {
    return "(" + hbg::render_word(f.conjugator) + " ; " + f.rel.str() + " ; " +
           (f.sign > 0 ? "+" : "-") + ")";
}

std::string trim_copy(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// "LABEL: EXPR" or plain "EXPR" — expressions themselves never contain ':'.
hbg::Relation parse_extra_relation(const std::string& text, const hbg::AlphabetPtr& alpha) {
    hbg::Relation rel;
    std::string body = text;
    size_t colon = text.find(':');
    if (colon != std::string::npos) {
        rel.label = trim_copy(text.substr(0, colon));
        body = text.substr(colon + 1);
    }
    rel.relator = hbg::parse_word(body, alpha, "--with");
    return rel;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"free-group presentation toolkit: Tietze-move replay with certificates,\n"
                 "abelianization, finite-quotient homomorphism counts, and relator search"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 verified/success, 1 verification failure, 2 unknown\n"
               "(budget exhausted), 64 usage or parse error.");

    bool json_out = false;
    app.add_flag("--json", json_out,
                 "emit one JSON object on stdout instead of the human report");

    // reduce ---------------------------------------------------------------
    std::string reduce_expr;
    CLI::App* cmd_reduce =
        app.add_subcommand("reduce", "freely reduce a word expression; the alphabet is "
                                     "inferred from the names that appear");
    cmd_reduce->add_option("expr", reduce_expr, "word expression, e.g. \"o * d\"")
        ->required();

    // eq -------------------------------------------------------------------
    std::string eq_a, eq_b;
    CLI::App* cmd_eq = app.add_subcommand(
        "eq", "test two presentation files for canonical equality (same generators, "
              "same relator set up to rotation/inversion/order)");
    cmd_eq->add_option("a", eq_a, "first .pres file")->required();
    cmd_eq->add_option("b", eq_b, "second .pres file")->required();

    // snf ------------------------------------------------------------------
    std::string snf_file;
    CLI::App* cmd_snf = app.add_subcommand(
        "snf", "abelianization via Smith normal form: free rank and torsion");
    cmd_snf->add_option("file", snf_file, ".pres file")->required();

    // homcount ---------------------------------------------------------------
    std::string hom_file, hom_group;
    int hom_workers = 1;
    CLI::App* cmd_hom = app.add_subcommand(
        "homcount", "count homomorphisms from the presented group into a builtin "
                    "finite group");
    cmd_hom->add_option("file", hom_file, ".pres file")->required();
    cmd_hom->add_option("--group", hom_group, "builtin group name, or 'all'")->required();
    cmd_hom->add_option("--workers", hom_workers, "worker threads (default 1)")
        ->check(CLI::Range(1, 4096));

    // derive -----------------------------------------------------------------
    std::string derive_file, derive_target;
    std::vector<std::string> derive_with;
    int derive_max_factors = 8;
    std::int64_t derive_max_conj = 6;
    std::int64_t derive_max_len = 64;
    double derive_timeout = 60.0;
    CLI::App* cmd_derive = app.add_subcommand(
        "derive", "search for a product-of-conjugates certificate expressing the "
                  "target word as a consequence of the relators");
    cmd_derive->add_option("file", derive_file, ".pres file")->required();
    cmd_derive->add_option("target", derive_target, "target word expression")->required();
    cmd_derive->add_option("--max-factors", derive_max_factors,
                           "essential factor limit (default 8)")
        ->check(CLI::Range(1, 64));
    cmd_derive->add_option("--max-conj", derive_max_conj,
                           "conjugator length limit per factor (default 6)")
        ->check(CLI::Range(std::int64_t{0}, std::int64_t{1024}));
    cmd_derive->add_option("--max-len", derive_max_len,
                           "intermediate word length limit (default 64)")
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{1 << 20}));
    cmd_derive->add_option("--timeout", derive_timeout, "time limit in seconds (default 60)")
        ->check(CLI::PositiveNumber);
    cmd_derive->add_option("--with", derive_with,
                           "extra relation \"LABEL: EXPR\" (or bare EXPR) appended to the "
                           "presentation before searching; repeatable");

    // check ------------------------------------------------------------------
    std::string check_file;
    CLI::App* cmd_check = app.add_subcommand(
        "check", "replay a .tietze script, verifying every move's certificate, and "
                 "compare the result with the target presentation");
    cmd_check->add_option("script", check_file, ".tietze script file")->required();

    // corpus-verify ------------------------------------------------------------
    std::string corpus_dir = "corpus";
    bool corpus_full = false;
    int corpus_workers = 1;
    CLI::App* cmd_corpus = app.add_subcommand(
        "corpus-verify", "audit the bundled corpus: manifest counts, script replay, "
                         "and golden invariant values");
    cmd_corpus->add_option("--dir", corpus_dir, "corpus directory (default 'corpus')");
    cmd_corpus->add_flag("--full", corpus_full,
                         "check homomorphism goldens for every builtin group, not just "
                         "those of order <= 8");
    cmd_corpus->add_option("--workers", corpus_workers,
                           "worker threads for homomorphism counting (default 1)")
        ->check(CLI::Range(1, 4096));

    for (CLI::App* sub : app.get_subcommands(nullptr))
        sub->add_flag("--json", json_out,
                      "emit one JSON object on stdout instead of the human report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*cmd_reduce) {
            std::vector<std::string> names =
                hbg::scan_generator_names(reduce_expr, "<expr>");
            hbg::Word w =
                hbg::parse_word(reduce_expr, hbg::Alphabet::make(names), "<expr>");
            if (json_out)
                emit(json{{"command", "reduce"},
                          {"expression", reduce_expr},
                          {"reduced", hbg::render_word(w)},
                          {"length", w.length()},
                          {"ok", true}});
            else
                std::cout << hbg::render_word(w) << "\n";
            return kOk;
        }

        if (*cmd_eq) {
            hbg::Presentation a = hbg::read_presentation_file(eq_a);
            hbg::Presentation b = hbg::read_presentation_file(eq_b);
            bool equal = hbg::equal_canonical(a, b);
            if (json_out)
                emit(json{{"command", "eq"}, {"a", eq_a}, {"b", eq_b}, {"equal", equal}});
            else
                std::cout << (equal ? "canonically equal" : "not canonically equal")
                          << "\n";
            return equal ? kOk : kFail;
        }

        if (*cmd_snf) {
            hbg::Presentation p = hbg::read_presentation_file(snf_file);
            hbg::AbelianInvariants inv = hbg::abelianization(p);
            if (json_out)
                emit(json{{"command", "snf"},
                          {"file", snf_file},
                          {"free_rank", inv.free_rank},
                          {"torsion", torsion_json(inv.torsion)},
                          {"group", hbg::format_abelian(inv)},
                          {"ok", true}});
            else
                std::cout << "free_rank=" << inv.free_rank
                          << " torsion=" << torsion_text(inv.torsion) << "\n";
            return kOk;
        }

        if (*cmd_hom) {
            hbg::Presentation p = hbg::read_presentation_file(hom_file);
            std::vector<const hbg::FiniteGroup*> groups;
            if (hom_group == "all")
                for (const hbg::FiniteGroup& g : hbg::builtin_groups())
                    groups.push_back(&g);
            else
                groups.push_back(&hbg::builtin_group(hom_group));
            json items = json::array();
            for (const hbg::FiniteGroup* g : groups) {
                auto t0 = std::chrono::steady_clock::now();
                std::uint64_t n = hbg::count_homomorphisms(p, *g, hom_workers);
                double dt = seconds_since(t0);
                if (json_out)
                    items.push_back(json{{"group", g->name()},
                                         {"order", g->order()},
                                         {"count", n}});
                else
                    std::cout << g->name() << " (order " << g->order() << "): " << n
                              << " homomorphisms in " << format_seconds(dt) << "\n";
            }
            if (json_out)
                emit(json{{"command", "homcount"},
                          {"file", hom_file},
                          {"workers", hom_workers},
                          {"groups", items},
                          {"ok", true}});
            return kOk;
        }

        if (*cmd_derive) {
            hbg::Presentation p = hbg::read_presentation_file(derive_file);
            if (!derive_with.empty()) {
                std::vector<hbg::Relation> rels = p.relations();
                for (const std::string& extra : derive_with)
                    rels.push_back(parse_extra_relation(extra, p.alphabet()));
                p = hbg::Presentation(p.alphabet(), std::move(rels));
            }
            hbg::Word target = hbg::parse_word(derive_target, p.alphabet(), "<target>");
            hbg::SearchBudget budget;
            budget.max_factors = derive_max_factors;
            budget.max_conjugator_length = derive_max_conj;
            budget.max_intermediate_length = derive_max_len;
            budget.time_limit = derive_timeout;
            hbg::DeriveStats stats;
            auto t0 = std::chrono::steady_clock::now();
            std::optional<hbg::Certificate> cert =
                hbg::derive_certificate(p, target, budget, &stats);
            double dt = seconds_since(t0);

            json jbudget{{"max_factors", derive_max_factors},
                         {"max_conj", derive_max_conj},
                         {"max_len", derive_max_len},
                         {"timeout", derive_timeout}};
            if (cert) {
                if (json_out) {
                    json factors = json::array();
                    for (const hbg::CertFactor& f : *cert)
                        factors.push_back(json{{"conjugator", hbg::render_word(f.conjugator)},
                                               {"rel", f.rel.str()},
                                               {"sign", f.sign}});
                    emit(json{{"command", "derive"},
                              {"file", derive_file},
                              {"target", hbg::render_word(target)},
                              {"budget", jbudget},
                              {"found", true},
                              {"essential_factors", stats.factors},
                              {"certificate", factors}});
                } else {
                    std::cout << "certificate with " << cert->size() << " factor"
                              << (cert->size() == 1 ? "" : "s") << " ("
                              << stats.factors << " essential):\n";
                    for (const hbg::CertFactor& f : *cert)
                        std::cout << "  " << factor_text(f) << "\n";
                    std::cout << "verified exactly; " << stats.nodes << " nodes in "
                              << format_seconds(dt) << "\n";
                }
                return kOk;
            }
            std::string reason = stats.abelian_rejected
                                     ? "provably non-derivable in abelianization"
                                     : "budget exhausted";
            if (json_out)
                emit(json{{"command", "derive"},
                          {"file", derive_file},
                          {"target", hbg::render_word(target)},
                          {"budget", jbudget},
                          {"found", false},
                          {"definite", stats.abelian_rejected},
                          {"reason", reason}});
            else {
                std::cout << (stats.abelian_rejected ? "non-derivable: " : "unknown: ")
                          << reason;
                if (stats.timed_out)
                    std::cout << " (timed out)";
                std::cout << "; " << stats.nodes << " nodes, depth "
                          << stats.depth_reached << ", " << format_seconds(dt) << "\n";
            }
            // An abelianization obstruction is a definite answer, not an
            // exhausted budget: no certificate exists at any budget.
            return stats.abelian_rejected ? kFail : kUnknown;
        }

        if (*cmd_check) {
            hbg::Script script = hbg::read_script_file(check_file);
            int total = static_cast<int>(script.moves.size());
            hbg::ReplayObserver observe;
            if (!json_out)
                observe = [&](int index, const hbg::ScriptMove& move,
                              const hbg::Presentation& after) {
                    std::cout << "ok " << (index + 1) << "/" << total << "  "
                              << move.describe() << "  [" << after.alphabet()->size()
                              << " gens, " << after.size() << " rels]\n";
                };
            hbg::ReplayOutcome outcome = hbg::check_script_file(check_file, observe);
            if (json_out)
                emit(json{{"command", "check"},
                          {"script", check_file},
                          {"source", script.source_path},
                          {"target", script.target_path},
                          {"moves", outcome.moves},
                          {"equal", true},
                          {"ok", true}});
            else
                std::cout << "final presentation equals target\n";
            return kOk;
        }

        if (*cmd_corpus) {
            hbg::CorpusOptions opt;
            opt.dir = corpus_dir;
            opt.hom_max_order = corpus_full ? 24 : 8;
            opt.workers = corpus_workers;
            hbg::CorpusReport report = hbg::verify_corpus(opt);
            int passed = 0;
            json items = json::array();
            for (const hbg::CorpusItem& item : report.items) {
                passed += item.ok ? 1 : 0;
                if (json_out)
                    items.push_back(json{{"name", item.name},
                                         {"ok", item.ok},
                                         {"detail", item.detail}});
                else
                    std::cout << (item.ok ? "PASS " : "FAIL ") << item.name << ": "
                              << item.detail << "\n";
            }
            bool ok = report.all_ok();
            if (json_out)
                emit(json{{"command", "corpus-verify"},
                          {"dir", corpus_dir},
                          {"items", items},
                          {"passed", passed},
                          {"total", static_cast<int>(report.items.size())},
                          {"ok", ok}});
            else
                std::cout << passed << "/" << report.items.size() << " items verified\n";
            return ok ? kOk : kFail;
        }
    } catch (const hbg::parse_error& e) {
        if (json_out)
            emit(json{{"ok", false}, {"error", e.what()}});
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const hbg::lookup_error& e) {
        if (json_out)
            emit(json{{"ok", false}, {"error", e.what()}});
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        if (json_out)
            emit(json{{"ok", false}, {"error", e.what()}});
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}
