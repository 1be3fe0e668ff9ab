#ifndef HBG_CORPUS_HPP
#define HBG_CORPUS_HPP

#include <string>
#include <vector>

#include "hbg/presentation.hpp"

namespace hbg {

// One [filename] section of the relation inventory: expected generator and
// relation counts plus per-tag label counts.  A relation label belongs to
// the longest tag that is a prefix of the label; zero-count tags record
// relation families that are intentionally empty.
struct ManifestSection {
    std::string file;
    int generators = -1;  // -1: not specified
    int relations = -1;
    std::vector<std::pair<std::string, int>> tags;  // (tag, expected count)
};

struct Manifest {
    std::vector<ManifestSection> sections;

    // nullptr when the file has no section.
    const ManifestSection* section(const std::string& file) const;
};

Manifest parse_manifest(const std::string& text, const std::string& where = "");
Manifest read_manifest_file(const std::string& path);

// The longest tag in `tags` that is a prefix of label; empty string if none.
std::string tag_of_label(const std::vector<std::pair<std::string, int>>& tags,
                         const std::string& label);

// A pinned regression value: invariants or a homomorphism count, with the
// oracle run that produced it and the date it was frozen.
struct GoldenRecord {
    std::string id;
    std::string value;
    std::string provenance;
    std::string date;
};

struct Goldens {
    std::vector<GoldenRecord> records;

    const GoldenRecord* find(const std::string& id) const;
};

Goldens parse_goldens(const std::string& text, const std::string& where = "");
Goldens read_goldens_file(const std::string& path);

struct CorpusOptions {
    std::string dir = "corpus";
    // Homomorphism-count goldens are checked for builtin groups up to this
    // order; 24 covers the whole roster (the S4 check on the 14-generator
    // side dominates the runtime).
    int hom_max_order = 8;
    bool include_script = true;
    int workers = 1;
};

struct CorpusItem {
    std::string name;
    bool ok = false;
    std::string detail;  // failure reason, or a short confirmation
};

struct CorpusReport {
    std::vector<CorpusItem> items;

    bool all_ok() const;
};

// Checks the bundled corpus directory end to end: manifest and goldens
// parse, each presentation file parses and matches its manifest section,
// the reduction script replays onto the simple presentation, and every
// golden invariant in range recomputes to its pinned value (with the two
// genus-2 presentations also required to agree with each other).  A failing
// item never aborts the remaining items.
CorpusReport verify_corpus(const CorpusOptions& opt = {});

} // namespace hbg

#endif
