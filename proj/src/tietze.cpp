#include "hbg/tietze.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lines.hpp"

namespace hbg {

// ------------------------------------------------------------ certificates

Word evaluate_certificate(const Certificate& cert, const Presentation& p) {
    Word acc(p.alphabet());
    for (const CertFactor& f : cert) {
        if (f.sign != 1 && f.sign != -1)
            throw invariant_error("certificate factor sign must be +1 or -1");
        Word relator = p.relation(f.rel).relator;
        if (f.sign < 0)
            relator = invert(relator);
        acc = multiply(acc, conjugate(f.conjugator, relator));
    }
    return acc;
}

// ------------------------------------------------------------------- moves

Presentation add_relation(const Presentation& p, const std::string& label,
                          const Word& relator, const Certificate& cert) {
    if (!label.empty() && p.has_label(label))
        throw invariant_error("relation label '" + label + "' already in use");
    Word derived = evaluate_certificate(cert, p);
    if (derived != relator)
        throw verify_error("certificate for '" + (label.empty() ? render_word(relator) : label) +
                           "' evaluates to " + render_word(derived) + ", not " +
                           render_word(relator));
    std::vector<Relation> rels = p.relations();
    rels.push_back(Relation{label, relator});
    return Presentation(p.alphabet(), std::move(rels));
}

Presentation remove_relation(const Presentation& p, const RelRef& target,
                             const Certificate& cert) {
    int idx = p.index_of(target);
    Word removed = p.relations()[static_cast<size_t>(idx)].relator;
    std::vector<Relation> rest;
    for (int i = 0; i < p.size(); ++i)
        if (i != idx)
            rest.push_back(p.relations()[static_cast<size_t>(i)]);
    // The certificate must derive the removed relator from the remaining
    // relations alone, so references are resolved in the reduced
    // presentation (positional ones against its numbering).
    Presentation reduced(p.alphabet(), std::move(rest));
    Word derived = evaluate_certificate(cert, reduced);
    if (derived != removed)
        throw verify_error("certificate for removing '" + target.str() + "' evaluates to " +
                           render_word(derived) + ", not " + render_word(removed));
    return reduced;
}

Presentation add_generator(const Presentation& p, const std::string& name,
                           const Word& definition) {
    if (!Alphabet::valid_name(name))
        throw invariant_error("invalid generator name '" + name + "'");
    if (p.alphabet()->find(name))
        throw invariant_error("name clash: generator '" + name + "' already exists");
    if (p.has_label(name))
        throw invariant_error("name clash: relation label '" + name +
                              "' blocks the definitional relation");

    std::vector<std::string> names = p.alphabet()->names();
    names.push_back(name);
    AlphabetPtr wide = Alphabet::make(std::move(names));
    std::vector<int> keep(static_cast<size_t>(p.alphabet()->size()));
    for (size_t i = 0; i < keep.size(); ++i)
        keep[i] = static_cast<int>(i);

    std::vector<Relation> rels;
    for (const Relation& r : p.relations())
        rels.push_back(Relation{r.label, map_generators(r.relator, wide, keep)});
    Word def = map_generators(definition, wide, keep);
    rels.push_back(
        Relation{name, multiply(gen_word(wide, wide->size() - 1), invert(def))});
    return Presentation(wide, std::move(rels));
}

Presentation remove_generator(const Presentation& p, const std::string& name,
                              const RelRef& via) {
    int gen = p.alphabet()->id_of(name);
    int via_idx = p.index_of(via);
    const Word& relator = p.relations()[static_cast<size_t>(via_idx)].relator;

    std::int64_t occurrences = 0;
    int run_idx = -1;
    const auto& runs = relator.runs();
    for (size_t i = 0; i < runs.size(); ++i)
        if (runs[i].gen == gen) {
            occurrences += runs[i].exp < 0 ? -runs[i].exp : runs[i].exp;
            run_idx = static_cast<int>(i);
        }
    if (occurrences != 1)
        throw invariant_error("cannot eliminate '" + name + "' via '" + via.str() +
                              "': the relator contains it " + std::to_string(occurrences) +
                              " times, need exactly one occurrence with exponent +-1");

    // relator = u g^e v is a relation, so g = u^-1 v^-1 (e=+1) or v u (e=-1).
    std::vector<Run> u_runs(runs.begin(), runs.begin() + run_idx);
    std::vector<Run> v_runs(runs.begin() + run_idx + 1, runs.end());
    Word u(p.alphabet(), std::move(u_runs));
    Word v(p.alphabet(), std::move(v_runs));
    Word image = runs[static_cast<size_t>(run_idx)].exp > 0
                     ? multiply(invert(u), invert(v))
                     : multiply(v, u);

    std::vector<std::string> names;
    std::vector<int> perm(static_cast<size_t>(p.alphabet()->size()), -1);
    for (int i = 0; i < p.alphabet()->size(); ++i)
        if (i != gen) {
            perm[static_cast<size_t>(i)] = static_cast<int>(names.size());
            names.push_back(p.alphabet()->name(i));
        }
    AlphabetPtr narrow = Alphabet::make(std::move(names));

    std::vector<Relation> rels;
    for (int i = 0; i < p.size(); ++i) {
        if (i == via_idx)
            continue;
        const Relation& r = p.relations()[static_cast<size_t>(i)];
        Word substituted = substitute_generator(r.relator, gen, image);
        rels.push_back(Relation{r.label, map_generators(substituted, narrow, perm)});
    }
    return Presentation(narrow, std::move(rels));
}

Presentation rename_generator(const Presentation& p, const std::string& old_name,
                              const std::string& new_name) {
    int gen = p.alphabet()->id_of(old_name);
    if (!Alphabet::valid_name(new_name))
        throw invariant_error("invalid generator name '" + new_name + "'");
    if (p.alphabet()->find(new_name))
        throw invariant_error("name clash: generator '" + new_name + "' already exists");

    std::vector<std::string> names = p.alphabet()->names();
    names[static_cast<size_t>(gen)] = new_name;
    AlphabetPtr renamed = Alphabet::make(std::move(names));
    std::vector<int> identity(static_cast<size_t>(p.alphabet()->size()));
    for (size_t i = 0; i < identity.size(); ++i)
        identity[i] = static_cast<int>(i);

    std::vector<Relation> rels;
    for (const Relation& r : p.relations())
        rels.push_back(Relation{r.label, map_generators(r.relator, renamed, identity)});
    return Presentation(renamed, std::move(rels));
}

// ----------------------------------------------------------------- scripts

namespace {

bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

// Position of keyword `kw` outside any parentheses or brackets and not glued
// to name characters; npos if absent.
size_t find_keyword(const std::string& text, const std::string& kw) {
    int depth = 0;
    for (size_t i = 0; i + kw.size() <= text.size(); ++i) {
        char c = text[i];
        if (c == '(' || c == '[')
            ++depth;
        else if (c == ')' || c == ']')
            --depth;
        else if (depth == 0 && text.compare(i, kw.size(), kw) == 0) {
            bool left_ok = i == 0 || !name_char(text[i - 1]);
            size_t after = i + kw.size();
            bool right_ok = after == text.size() || !name_char(text[after]);
            if (left_ok && right_ok)
                return i;
        }
    }
    return std::string::npos;
}

std::string loc(const std::string& where, int line) {
    return where.empty() ? "line " + std::to_string(line) : where + ":" + std::to_string(line);
}

std::vector<ScriptFactor> parse_factors(const std::string& text, const std::string& at) {
    std::vector<ScriptFactor> out;
    size_t pos = 0;
    while (pos < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
            continue;
        }
        if (text[pos] != '(')
            throw parse_error(at, "expected '(' to open a certificate factor");
        int depth = 1;
        size_t end = pos + 1;
        while (end < text.size() && depth > 0) {
            if (text[end] == '(')
                ++depth;
            else if (text[end] == ')')
                --depth;
            ++end;
        }
        if (depth != 0)
            throw parse_error(at, "unbalanced '(' in certificate factor");
        std::string inside = text.substr(pos + 1, end - pos - 2);

        // Split on the two top-level semicolons.
        std::vector<std::string> parts;
        int d = 0;
        size_t start = 0;
        for (size_t i = 0; i < inside.size(); ++i) {
            char c = inside[i];
            if (c == '(' || c == '[')
                ++d;
            else if (c == ')' || c == ']')
                --d;
            else if (c == ';' && d == 0) {
                parts.push_back(inside.substr(start, i - start));
                start = i + 1;
            }
        }
        parts.push_back(inside.substr(start));
        if (parts.size() != 3)
            throw parse_error(at, "certificate factor needs (conjugator ; relation ; sign)");

        std::string sign = detail::trim(parts[2]);
        if (sign != "+" && sign != "-")
            throw parse_error(at, "certificate factor sign must be '+' or '-'");
        out.push_back(ScriptFactor{detail::trim(parts[0]), detail::trim(parts[1]),
                                   sign == "+" ? 1 : -1});
        pos = end;
    }
    return out;
}

} // namespace

std::string ScriptMove::describe() const {
    switch (kind) {
    case Kind::AddRel:
        return "addrel " + (name.empty() ? arg : name);
    case Kind::DelRel:
        return "delrel " + name;
    case Kind::AddGen:
        return "addgen " + name;
    case Kind::DelGen:
        return "delgen " + name + " via " + arg;
    case Kind::Rename:
        return "rename " + name + " -> " + arg;
    }
    return "?";
}

Script parse_script(const std::string& text, const std::string& where) {
    auto lines = detail::logical_lines(text);
    Script script;
    size_t i = 0;
    if (i < lines.size() && lines[i].second.rfind("source", 0) == 0)
        script.source_path = detail::trim(lines[i++].second.substr(6));
    if (i < lines.size() && lines[i].second.rfind("target", 0) == 0)
        script.target_path = detail::trim(lines[i++].second.substr(6));
    if (script.source_path.empty() || script.target_path.empty())
        throw parse_error(where, "script must begin with 'source <path>' and 'target <path>'");

    for (; i < lines.size(); ++i) {
        auto [line_no, content] = lines[i];
        const std::string at = loc(where, line_no);
        std::istringstream head(content);
        std::string verb;
        head >> verb;
        std::string rest = content.substr(verb.size());

        ScriptMove mv;
        mv.line = line_no;
        if (verb == "addrel") {
            mv.kind = ScriptMove::Kind::AddRel;
            size_t colon = rest.find(':');
            if (colon == std::string::npos)
                throw parse_error(at, "addrel needs '<label>: <relator> by <factors>'");
            mv.name = detail::trim(rest.substr(0, colon));
            std::string tail = rest.substr(colon + 1);
            size_t by = find_keyword(tail, "by");
            if (by == std::string::npos)
                throw parse_error(at, "addrel needs a 'by' clause");
            mv.arg = detail::trim(tail.substr(0, by));
            mv.factors = parse_factors(tail.substr(by + 2), at);
        } else if (verb == "delrel") {
            mv.kind = ScriptMove::Kind::DelRel;
            size_t by = find_keyword(rest, "by");
            if (by == std::string::npos)
                throw parse_error(at, "delrel needs a 'by' clause");
            mv.name = detail::trim(rest.substr(0, by));
            mv.factors = parse_factors(rest.substr(by + 2), at);
        } else if (verb == "addgen") {
            mv.kind = ScriptMove::Kind::AddGen;
            size_t def = rest.find(":=");
            if (def == std::string::npos)
                throw parse_error(at, "addgen needs '<name> := <definition>'");
            mv.name = detail::trim(rest.substr(0, def));
            mv.arg = detail::trim(rest.substr(def + 2));
        } else if (verb == "delgen") {
            mv.kind = ScriptMove::Kind::DelGen;
            size_t via = find_keyword(rest, "via");
            if (via == std::string::npos)
                throw parse_error(at, "delgen needs '<name> via <relation>'");
            mv.name = detail::trim(rest.substr(0, via));
            mv.arg = detail::trim(rest.substr(via + 3));
        } else if (verb == "rename") {
            mv.kind = ScriptMove::Kind::Rename;
            size_t arrow = rest.find("->");
            if (arrow == std::string::npos)
                throw parse_error(at, "rename needs '<old> -> <new>'");
            mv.name = detail::trim(rest.substr(0, arrow));
            mv.arg = detail::trim(rest.substr(arrow + 2));
        } else {
            throw parse_error(at, "unknown script verb '" + verb + "'");
        }
        script.moves.push_back(std::move(mv));
    }
    return script;
}

Script read_script_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw parse_error(path, "cannot open script file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_script(buf.str(), path);
}

Presentation apply_script_move(const Presentation& p, const ScriptMove& move,
                               const std::string& where) {
    const AlphabetPtr& alpha = p.alphabet();
    auto resolve_cert = [&]() {
        Certificate cert;
        for (const ScriptFactor& f : move.factors)
            cert.push_back(CertFactor{parse_word(f.conjugator, alpha, where),
                                      RelRef::parse(f.rel, where), f.sign});
        return cert;
    };

    try {
        switch (move.kind) {
        case ScriptMove::Kind::AddRel:
            return add_relation(p, move.name, parse_word(move.arg, alpha, where),
                                resolve_cert());
        case ScriptMove::Kind::DelRel:
            return remove_relation(p, RelRef::parse(move.name, where), resolve_cert());
        case ScriptMove::Kind::AddGen:
            return add_generator(p, move.name, parse_word(move.arg, alpha, where));
        case ScriptMove::Kind::DelGen:
            return remove_generator(p, move.name, RelRef::parse(move.arg, where));
        case ScriptMove::Kind::Rename:
            return rename_generator(p, move.name, move.arg);
        }
    } catch (const parse_error&) {
        throw;  // already carries its location
    } catch (const verify_error& e) {
        throw verify_error(where.empty() ? e.what() : where + ": " + e.what());
    } catch (const lookup_error& e) {
        throw lookup_error(where.empty() ? e.what() : where + ": " + e.what());
    } catch (const invariant_error& e) {
        throw invariant_error(where.empty() ? e.what() : where + ": " + e.what());
    }
    throw invariant_error("unreachable script move kind");
}

Presentation replay_script(const Script& script, const Presentation& source,
                           const ReplayObserver& observe, const std::string& where) {
    Presentation p = source;
    for (size_t i = 0; i < script.moves.size(); ++i) {
        const ScriptMove& mv = script.moves[i];
        p = apply_script_move(p, mv, loc(where, mv.line));
        if (observe)
            observe(static_cast<int>(i), mv, p);
    }
    return p;
}

ReplayOutcome check_script_file(const std::string& path, const ReplayObserver& observe) {
    Script script = read_script_file(path);
    std::filesystem::path dir = std::filesystem::path(path).parent_path();
    ReplayOutcome out;
    out.source = read_presentation_file((dir / script.source_path).string());
    out.target = read_presentation_file((dir / script.target_path).string());
    out.final = replay_script(script, out.source, observe, path);
    out.moves = static_cast<int>(script.moves.size());
    if (!equal_canonical(out.final, out.target))
        throw verify_error(path + ": replay finished but the result is not canonically equal to '" +
                           script.target_path + "'");
    return out;
}

} // namespace hbg
