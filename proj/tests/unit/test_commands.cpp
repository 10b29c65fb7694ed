#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <sys/wait.h>

#include "opcomm/commands.hpp"
#include "opcomm/errors.hpp"
#include "opcomm/matrix_io.hpp"
#include "oracles.hpp"

using namespace opcomm;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run_cli(const std::string& args)
{
    const std::string cmd = std::string(OPCOMM_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof buf, pipe))
        r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct TempDir {
    fs::path path;
    TempDir()
    {
        std::random_device rd;
        path = fs::temp_directory_path() / ("opcomm_test_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const std::string& name) const { return path / name; }
};

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

nlohmann::json read_json(const fs::path& p)
{
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

nlohmann::json without_timestamp(nlohmann::json j)
{
    j.erase("timestamp");
    return j;
}

} // namespace

TEST_CASE("construct-halmos")
{
    TempDir dir;
    const Run ok = run_cli("construct-halmos --eps 1 --window 64 --json --out " + (dir / "h.json").string());
    CHECK(ok.code == 0);
    const auto report = nlohmann::json::parse(ok.out);
    CHECK(report["schema_version"] == 1);
    CHECK(report["command"] == "construct-halmos");
    bool nil_three = false;
    for (const auto& v : report["verdicts"]) {
        CHECK(v["passed"] == true);
        nil_three = nil_three || v["claim"].get<std::string>().find("nil") != std::string::npos;
    }
    CHECK(nil_three);

    const auto written = read_json(dir / "h.json");
    const Matrix a = matrix_from_json(written["A_tilde"]);
    CHECK(a.rows() == 64);
    CHECK(a.is_nonnegative());

    CHECK(run_cli("construct-halmos --eps 0").code == 2);
    CHECK(run_cli("construct-halmos --eps 1.5").code == 2);
    CHECK(run_cli("construct-halmos --eps 0.5 --window 8").code == 2);
    CHECK(run_cli("construct-halmos").code == 2);
    CHECK(run_cli("construct-halmos --eps 1 --window 64 --out /nonexistent/dir/x.json").code == 2);
}

TEST_CASE("the scaled N has a smaller majorant than at eps = 1")
{
    ConstructOptions o;
    o.window = 64;
    o.column_depth = 64;
    const RunReport r1 = cmd_construct_halmos(o);
    o.eps = 0.5;
    const RunReport r2 = cmd_construct_halmos(o);
    REQUIRE(r1.tables.size() == 1);
    REQUIRE(r2.tables.size() == 1);
    CHECK(r2.tables[0].norm_N_upper < r1.tables[0].norm_N_upper);
    CHECK(exit_code(r1) == 0);
    CHECK(exit_code(r2) == 0);
}

TEST_CASE("factor")
{
    TempDir dir;
    write_text(dir / "c.csv", "0,0\n1,0\n");
    const Run nil = run_cli("factor nilpotent --input " + (dir / "c.csv").string() + " --eps 1 --out " +
                            (dir / "f.json").string());
    CHECK(nil.code == 0);
    const auto f = read_json(dir / "f.json");
    CHECK(matrix_from_json(f["A"]) == Matrix(2, 2, {1, 0, 0, 2}));
    CHECK(matrix_from_json(f["B"]) == Matrix(2, 2, {0, 0, 1, 0}));

    write_text(dir / "s.json", R"({"rows": 2, "cols": 2, "data": [0, 1, 1, 0]})");
    const Run tz = run_cli("factor tracezero --input " + (dir / "s.json").string() + " --out " +
                           (dir / "t.json").string());
    CHECK(tz.code == 0);
    CHECK(matrix_from_json(read_json(dir / "t.json")["B"]) == Matrix(2, 2, {0, -1, 1, 0}));

    const Run cyc = run_cli("factor nilpotent --input " + (dir / "s.json").string() + " --eps 1");
    CHECK(cyc.code == 2);
    CHECK(cyc.out.find("not nilpotent: cycle 1->2->1") != std::string::npos);

    CHECK(run_cli("factor nilpotent --input " + (dir / "c.csv").string()).code == 2); // eps missing
    CHECK(run_cli("factor bogus --input " + (dir / "c.csv").string()).code == 2);
    CHECK(run_cli("factor tracezero --input " + (dir / "missing.csv").string()).code == 2);
    write_text(dir / "bad.csv", "1,x\n");
    CHECK(run_cli("factor tracezero --input " + (dir / "bad.csv").string()).code == 2);
}

TEST_CASE("factor report verdicts")
{
    TempDir dir;
    std::mt19937_64 rng(12);
    write_matrix(dir / "c.json", oracle::random_nilpotent(rng, 12, 0.5));
    FactorOptions o;
    o.input = dir / "c.json";
    o.eps = 0.5;
    const RunReport r = cmd_factor(o);
    CHECK(r.verdicts.size() == 4);
    CHECK(exit_code(r) == 0);
    o.kind = FactorKind::tracezero;
    o.eps.reset();
    const RunReport t = cmd_factor(o);
    CHECK(t.verdicts.size() == 2);
    CHECK(exit_code(t) == 0);
}

TEST_CASE("verify suites")
{
    TempDir dir;
    const Run popa = run_cli("verify popa --norm-a 1 --norm-b 1 --eps 0.1 --alpha 1 --json");
    CHECK(popa.code == 1);
    const auto j = nlohmann::json::parse(popa.out);
    CHECK(j["verdicts"][0]["witness"]["bound"].get<double>() == doctest::Approx(1.1512925465));

    CHECK(run_cli("verify popa --norm-a 2 --norm-b 1 --eps 0.1").code == 0);
    CHECK(run_cli("verify popa --norm-a 1 --norm-b 1").code == 2);
    CHECK(run_cli("verify popa --norm-a 1 --norm-b 1 --eps 0.1 --alpha 0.5").code == 2);

    write_matrix(dir / "i.json", identity(3));
    CHECK(run_cli("verify obstructions --x " + (dir / "i.json").string()).code == 0);
    CHECK(run_cli("verify obstructions --input " + (dir / "i.json").string()).code == 0);
    write_matrix(dir / "p.json", Matrix::diagonal(std::vector<double>{1, 1, 0}));
    CHECK(run_cli("verify obstructions --x " + (dir / "p.json").string()).code == 1);

    std::mt19937_64 rng(5);
    write_matrix(dir / "a.json", Matrix::diagonal(std::vector<double>{1, 2}));
    write_matrix(dir / "b.json", oracle::random_matrix(rng, 2, 2));
    const Run w = run_cli("verify wielandt --a " + (dir / "a.json").string() + " --b " + (dir / "b.json").string() +
                          " --json");
    CHECK(w.code == 0);
    CHECK(nlohmann::json::parse(w.out)["verdicts"][0]["witness"].contains("row"));

    write_matrix(dir / "z.json", Matrix(2, 2));
    write_matrix(dir / "n.json", -1.0 * identity(2));
    CHECK(run_cli("verify power --a " + (dir / "z.json").string() + " --b " + (dir / "z.json").string() + " --x " +
                  (dir / "n.json").string() + " --n-max 3")
              .code == 0);
    CHECK(run_cli("verify power --a " + (dir / "z.json").string()).code == 2);
    CHECK(run_cli("verify nonsense").code == 2);
}

TEST_CASE("sweep")
{
    TempDir dir;
    const Run one = run_cli("sweep --grid 0.5 --window 64 --json");
    CHECK(one.code == 0);
    const auto j = nlohmann::json::parse(one.out);
    CHECK(j["tables"].size() == 1);
    CHECK(j["notes"].size() == 1);
    CHECK(j["slopes"]["norm_A"].is_null());

    const Run full = run_cli("sweep --window 128 --grid 0.4,0.1,0.2 --out " + (dir / "s.json").string());
    CHECK(full.code == 0);
    const auto s = read_json(dir / "s.json");
    REQUIRE(s["tables"].size() == 3);
    CHECK(s["tables"][0]["eps"] == 0.4);
    CHECK(s["tables"][1]["eps"] == 0.1);
    CHECK(s["slopes"].contains("norm_A"));

    CHECK(run_cli("sweep --grid 0,0.5").code == 2);
    CHECK(run_cli("sweep --grid 0.5 --window 32").code == 2);
    CHECK(run_cli("sweep --grid abc").code == 2);
}

TEST_CASE("reports are deterministic apart from the timestamp")
{
    const Run a = run_cli("sweep --grid 0.2,0.4 --window 64 --json");
    const Run b = run_cli("sweep --grid 0.2,0.4 --window 64 --json");
    CHECK(without_timestamp(nlohmann::json::parse(a.out)) == without_timestamp(nlohmann::json::parse(b.out)));
}

TEST_CASE("matrices written by the CLI re-parse identically")
{
    TempDir dir;
    REQUIRE(run_cli("construct-halmos --eps 0.3 --window 32 --out " + (dir / "h.json").string()).code == 0);
    const auto j = read_json(dir / "h.json");
    const Matrix n = matrix_from_json(j["N_tilde"]);
    write_matrix(dir / "n2.json", n);
    CHECK(read_matrix(dir / "n2.json") == n);
    CHECK(parse_matrix(to_json(n).dump(2)) == n);
}

TEST_CASE("usage errors")
{
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("--help").code == 0);
}
