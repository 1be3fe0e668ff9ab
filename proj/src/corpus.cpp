#include "hbg/corpus.hpp"

#include "hbg/abelian.hpp"
#include "hbg/errors.hpp"
#include "hbg/homcount.hpp"
#include "hbg/tietze.hpp"

#include "lines.hpp"

#include <fstream>
#include <functional>
#include <sstream>

namespace hbg {

namespace {

std::string loc(const std::string& where, int line) {
    return (where.empty() ? std::string("line ") : where + ":") + std::to_string(line);
}

// "key = value" with a known key; returns the trimmed value.
std::string value_of(const std::string& content, const std::string& where, int line) {
    size_t eq = content.find('=');
    if (eq == std::string::npos)
        throw parse_error(loc(where, line), "expected 'key = value'");
    return detail::trim(content.substr(eq + 1));
}

int int_of(const std::string& text, const std::string& where, int line) {
    try {
        size_t used = 0;
        int v = std::stoi(text, &used);
        if (used != text.size() || v < 0)
            throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw parse_error(loc(where, line), "expected a nonnegative integer, got '" +
                          text + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw parse_error(path, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

// ------------------------------------------------------------- manifest

const ManifestSection* Manifest::section(const std::string& file) const {
    for (const ManifestSection& s : sections)
        if (s.file == file)
            return &s;
    return nullptr;
}

Manifest parse_manifest(const std::string& text, const std::string& where) {
    Manifest m;
    ManifestSection* current = nullptr;
    for (const auto& [line, content] : detail::logical_lines(text)) {
        if (content.front() == '[') {
            if (content.back() != ']')
                throw parse_error(loc(where, line), "unterminated section header");
            std::string name = detail::trim(content.substr(1, content.size() - 2));
            if (name.empty())
                throw parse_error(loc(where, line), "empty section name");
            if (m.section(name))
                throw parse_error(loc(where, line), "duplicate section '" + name + "'");
            m.sections.push_back(ManifestSection{name, -1, -1, {}});
            current = &m.sections.back();
            continue;
        }
        if (!current)
            throw parse_error(loc(where, line), "entry before any [section]");
        std::string key = content.substr(0, content.find_first_of(" \t="));
        std::string rest = value_of(content, where, line);
        if (key == "generators") {
            current->generators = int_of(rest, where, line);
        } else if (key == "relations") {
            current->relations = int_of(rest, where, line);
        } else if (key == "tag") {
            // tag NAME = N
            size_t eq = content.find('=');
            std::string name = detail::trim(content.substr(3, eq - 3));
            if (name.empty())
                throw parse_error(loc(where, line), "tag without a name");
            for (const auto& [t, n] : current->tags)
                if (t == name)
                    throw parse_error(loc(where, line), "duplicate tag '" + name + "'");
            current->tags.emplace_back(name, int_of(rest, where, line));
        } else {
            throw parse_error(loc(where, line), "unknown manifest key '" + key + "'");
        }
    }
    return m;
}

Manifest read_manifest_file(const std::string& path) {
    return parse_manifest(read_file(path), path);
}

std::string tag_of_label(const std::vector<std::pair<std::string, int>>& tags,
                         const std::string& label) {
    std::string best;
    for (const auto& [tag, count] : tags)
        if (label.compare(0, tag.size(), tag) == 0 && tag.size() > best.size())
            best = tag;
    return best;
}

// -------------------------------------------------------------- goldens

const GoldenRecord* Goldens::find(const std::string& id) const {
    for (const GoldenRecord& r : records)
        if (r.id == id)
            return &r;
    return nullptr;
}

Goldens parse_goldens(const std::string& text, const std::string& where) {
    Goldens g;
    GoldenRecord* current = nullptr;
    for (const auto& [line, content] : detail::logical_lines(text)) {
        if (content.front() == '[') {
            if (content.back() != ']')
                throw parse_error(loc(where, line), "unterminated record header");
            std::string id = detail::trim(content.substr(1, content.size() - 2));
            if (id.empty())
                throw parse_error(loc(where, line), "empty golden id");
            if (g.find(id))
                throw parse_error(loc(where, line), "duplicate golden '" + id + "'");
            g.records.push_back(GoldenRecord{id, "", "", ""});
            current = &g.records.back();
            continue;
        }
        if (!current)
            throw parse_error(loc(where, line), "entry before any [record]");
        std::string key = content.substr(0, content.find_first_of(" \t="));
        std::string rest = value_of(content, where, line);
        if (key == "value")
            current->value = rest;
        else if (key == "provenance")
            current->provenance = rest;
        else if (key == "date")
            current->date = rest;
        else
            throw parse_error(loc(where, line), "unknown golden key '" + key + "'");
    }
    for (const GoldenRecord& r : g.records)
        if (r.value.empty() || r.provenance.empty() || r.date.empty())
            throw parse_error(where.empty() ? std::string("goldens") : where,
                              "record '" + r.id + "' is missing value, provenance, or date");
    return g;
}

Goldens read_goldens_file(const std::string& path) {
    return parse_goldens(read_file(path), path);
}

// -------------------------------------------------------- verification

bool CorpusReport::all_ok() const {
    for (const CorpusItem& item : items)
        if (!item.ok)
            return false;
    return true;
}

namespace {

// Runs one named check with error isolation: any exception marks the item
// failed with the exception text, and later items still run.
void run_item(CorpusReport& report, const std::string& name,
              const std::function<std::string()>& check) {
    CorpusItem item;
    item.name = name;
    try {
        item.detail = check();
        item.ok = true;
    } catch (const std::exception& e) {
        item.ok = false;
        item.detail = e.what();
    }
    report.items.push_back(item);
}

std::string check_against_manifest(const Presentation& p, const ManifestSection& sec) {
    std::vector<std::string> problems;
    if (sec.generators >= 0 && p.alphabet()->size() != sec.generators)
        problems.push_back("generator count " + std::to_string(p.alphabet()->size()) +
                           " != manifest " + std::to_string(sec.generators));
    if (sec.relations >= 0 && p.size() != sec.relations)
        problems.push_back("relation count " + std::to_string(p.size()) + " != manifest " +
                           std::to_string(sec.relations));

    std::vector<int> actual(sec.tags.size(), 0);
    for (const Relation& rel : p.relations()) {
        if (rel.label.empty()) {
            problems.push_back("a relation has no label, so no tag");
            continue;
        }
        std::string tag = tag_of_label(sec.tags, rel.label);
        if (tag.empty()) {
            problems.push_back("label '" + rel.label + "' matches no manifest tag");
            continue;
        }
        for (size_t i = 0; i < sec.tags.size(); ++i)
            if (sec.tags[i].first == tag)
                ++actual[i];
    }
    for (size_t i = 0; i < sec.tags.size(); ++i)
        if (actual[i] != sec.tags[i].second)
            problems.push_back("tag " + sec.tags[i].first + ": " +
                               std::to_string(actual[i]) + " relations, manifest says " +
                               std::to_string(sec.tags[i].second));

    if (!problems.empty()) {
        std::string all = problems.front();
        for (size_t i = 1; i < problems.size(); ++i)
            all += "; " + problems[i];
        throw verify_error(all);
    }
    return std::to_string(p.alphabet()->size()) + " generators, " + std::to_string(p.size()) +
           " relations, tags match";
}

} // namespace

CorpusReport verify_corpus(const CorpusOptions& opt) {
    CorpusReport report;

    Manifest manifest;
    bool have_manifest = false;
    run_item(report, "manifest", [&] {
        manifest = read_manifest_file(opt.dir + "/manifest.txt");
        have_manifest = true;
        return std::to_string(manifest.sections.size()) + " sections";
    });

    Goldens goldens;
    bool have_goldens = false;
    run_item(report, "goldens", [&] {
        goldens = read_goldens_file(opt.dir + "/goldens.txt");
        have_goldens = true;
        return std::to_string(goldens.records.size()) + " records";
    });

    // Presentation files: parse, then audit against the manifest.
    std::vector<std::string> files = {"wajnryb_genus2.pres", "simple_genus2.pres",
                                      "genus1.pres"};
    std::vector<Presentation> parsed(files.size());
    std::vector<bool> parsed_ok(files.size(), false);
    for (size_t i = 0; i < files.size(); ++i) {
        run_item(report, files[i], [&] {
            parsed[i] = read_presentation_file(opt.dir + "/" + files[i]);
            parsed_ok[i] = true;
            if (!have_manifest)
                throw verify_error("parsed, but no manifest to audit against");
            const ManifestSection* sec = manifest.section(files[i]);
            if (!sec)
                throw verify_error("no manifest section for this file");
            return check_against_manifest(parsed[i], *sec);
        });
    }

    if (opt.include_script) {
        run_item(report, "genus2_reduction.tietze", [&] {
            ReplayOutcome outcome = check_script_file(opt.dir + "/genus2_reduction.tietze");
            return std::to_string(outcome.moves) + " moves verified; final presentation "
                   "matches the target";
        });
    }

    // Abelianization goldens.
    const std::vector<std::pair<std::string, size_t>> abelian_ids = {
        {"abelian/wajnryb_genus2", 0}, {"abelian/simple_genus2", 1}, {"abelian/genus1", 2}};
    for (const auto& [id, idx] : abelian_ids) {
        run_item(report, "golden " + id, [&, idx = idx, id = id] {
            if (!parsed_ok[idx])
                throw verify_error("presentation unavailable");
            if (!have_goldens)
                throw verify_error("no goldens file");
            const GoldenRecord* rec = goldens.find(id);
            if (!rec)
                throw verify_error("no golden record '" + id + "'");
            std::string got = format_abelian(abelianization(parsed[idx]));
            if (got != rec->value)
                throw verify_error("computed '" + got + "', golden says '" + rec->value +
                                   "'");
            return got;
        });
    }

    // Homomorphism-count goldens: both genus-2 presentations must agree with
    // each other and with the pinned value.
    for (const FiniteGroup& g : builtin_groups()) {
        if (g.order() > opt.hom_max_order)
            continue;
        run_item(report, "golden hom/genus2/" + g.name(), [&] {
            if (!parsed_ok[0] || !parsed_ok[1])
                throw verify_error("presentation unavailable");
            if (!have_goldens)
                throw verify_error("no goldens file");
            const GoldenRecord* rec = goldens.find("hom/genus2/" + g.name());
            if (!rec)
                throw verify_error("no golden record");
            std::uint64_t wide = count_homomorphisms(parsed[0], g, opt.workers);
            std::uint64_t narrow = count_homomorphisms(parsed[1], g, opt.workers);
            if (wide != narrow)
                throw verify_error("presentations disagree: " + std::to_string(wide) +
                                   " vs " + std::to_string(narrow));
            if (std::to_string(wide) != rec->value)
                throw verify_error("computed " + std::to_string(wide) + ", golden says '" +
                                   rec->value + "'");
            return std::to_string(wide) + " homomorphisms from either presentation";
        });
    }

    return report;
}

} // namespace hbg
