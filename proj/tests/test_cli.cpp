// End-to-end tests of the hbg command-line tool: exit codes, worked
// examples, JSON determinism, and diagnostic routing.  The binary path and
// the repository root come in through compile definitions so the suite can
// run from any working directory.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const std::string kBin = HBG_BIN;
const std::string kRoot = HBG_SOURCE_DIR;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Runs a shell command, capturing the requested streams.
RunResult run(const std::string& args, bool merge_stderr = true) {
    std::string cmd = kBin + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string corpus(const std::string& name) { return kRoot + "/corpus/" + name; }

// A scratch directory for malformed inputs.
struct TempDir {
    fs::path dir;
    TempDir() {
        dir = fs::temp_directory_path() / ("hbg_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string write(const std::string& name, const std::string& text) const {
        fs::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        out << text;
        return p.string();
    }
};

} // namespace

TEST_CASE("reduce matches the worked example") {
    RunResult r = run("reduce \"o * d\"");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("o d o^-1") != std::string::npos);
}

TEST_CASE("snf reports the pinned invariants") {
    RunResult g1 = run("snf " + corpus("genus1.pres"));
    CHECK(g1.exit_code == 0);
    CHECK(g1.out.find("free_rank=1 torsion=[2]") != std::string::npos);

    RunResult big = run("snf " + corpus("wajnryb_genus2.pres"));
    CHECK(big.exit_code == 0);
    CHECK(big.out.find("free_rank=1 torsion=[2,2]") != std::string::npos);

    RunResult small = run("snf " + corpus("simple_genus2.pres"));
    CHECK(small.exit_code == 0);
    CHECK(small.out.find("free_rank=1 torsion=[2,2]") != std::string::npos);
}

TEST_CASE("eq distinguishes canonical equality from inequality") {
    RunResult same = run("eq " + corpus("genus1.pres") + " " + corpus("genus1.pres"));
    CHECK(same.exit_code == 0);
    CHECK(same.out.find("canonically equal") != std::string::npos);

    RunResult diff = run("eq " + corpus("wajnryb_genus2.pres") + " " + corpus("simple_genus2.pres"));
    CHECK(diff.exit_code == 1);
    CHECK(diff.out.find("not canonically equal") != std::string::npos);
}

TEST_CASE("check replays the bundled reduction script") {
    RunResult r = run("check " + corpus("genus2_reduction.tietze"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("ok 49/49") != std::string::npos);
    CHECK(r.out.find("final presentation equals target") != std::string::npos);
}

TEST_CASE("homcount reports the S3 fingerprint") {
    RunResult r = run("homcount " + corpus("simple_genus2.pres") + " --group S3");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("36 homomorphisms") != std::string::npos);
}

TEST_CASE("derive finds a conjugate of a relator immediately") {
    RunResult r = run("derive " + corpus("wajnryb_genus2.pres") + " \"d-11 d-12 d12 a2^-2 a1^-2\"");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("verified exactly") != std::string::npos);
}

TEST_CASE("derive exits 2 when the budget is exhausted") {
    RunResult r = run("derive " + corpus("wajnryb_genus2.pres") +
                      " \"d-11 d-22^-1\" --max-factors 1 --timeout 5");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("unknown") != std::string::npos);
}

TEST_CASE("derive exits 1 on an abelianization obstruction") {
    TempDir tmp;
    std::string pres = tmp.write("toy.pres", "gens: a b\nrel R1: a^2\nrel K1: a <-> b\n");
    RunResult r = run("derive " + pres + " \"b\"");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("non-derivable") != std::string::npos);
}

TEST_CASE("missing files and parse errors exit 64 with locations") {
    RunResult gone = run("snf /nonexistent/thing.pres");
    CHECK(gone.exit_code == 64);
    CHECK(gone.out.find("/nonexistent/thing.pres") != std::string::npos);

    TempDir tmp;
    std::string bad = tmp.write("bad.pres", "gens: a\nrel X1: q\n");
    RunResult parse = run("snf " + bad);
    CHECK(parse.exit_code == 64);
    CHECK(parse.out.find(bad + ":2") != std::string::npos);
}

TEST_CASE("usage errors exit 64") {
    CHECK(run("frobnicate").exit_code == 64);
    CHECK(run("snf").exit_code == 64);
    CHECK(run("homcount " + corpus("genus1.pres")).exit_code == 64);  // --group required
}

TEST_CASE("json output is machine-readable and byte-identical across runs") {
    std::string snf_cmd = "snf " + corpus("genus1.pres") + " --json";
    RunResult a = run(snf_cmd, false);
    RunResult b = run(snf_cmd, false);
    CHECK(a.exit_code == 0);
    REQUIRE(!a.out.empty());
    CHECK(a.out.front() == '{');  // human report suppressed
    CHECK(a.out == b.out);

    std::string derive_cmd =
        "derive " + corpus("wajnryb_genus2.pres") + " \"d-11 d-12 d12 a2^-2 a1^-2\" --json";
    RunResult c = run(derive_cmd, false);
    RunResult d = run(derive_cmd, false);
    CHECK(c.exit_code == 0);
    CHECK(c.out == d.out);

    std::string hom_cmd = "homcount " + corpus("genus1.pres") + " --group S3 --json";
    RunResult e = run(hom_cmd, false);
    RunResult f = run(hom_cmd, false);
    CHECK(e.exit_code == 0);
    CHECK(e.out == f.out);  // timings live outside the JSON report
}

TEST_CASE("corpus-verify passes on the bundled corpus") {
    RunResult r = run("corpus-verify --dir " + kRoot + "/corpus");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("items verified") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
}
