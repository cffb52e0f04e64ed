#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>
#include <sys/wait.h>

#include <json.hpp>

#include "mfsign/mfsign.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mfsign;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

// fresh working directory per test case
fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "mfsign-cli-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

CliResult run_cli(const fs::path& dir, const std::string& args) {
    std::string cmd = "cd " + dir.string() + " && " + MFSIGN_CLI_PATH + " " + args +
                      " > cli_stdout.txt 2> cli_stderr.txt";
    int ret = std::system(cmd.c_str());
    REQUIRE(ret != -1);
    CliResult r;
    r.code = WEXITSTATUS(ret);
    r.out = textio::read_file(dir / "cli_stdout.txt");
    r.err = textio::read_file(dir / "cli_stderr.txt");
    return r;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

// data rows of one of our CSVs: header skipped, trailing comments skipped
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    auto lines = split_lines(text);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty() || lines[i][0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream in(lines[i]);
        std::string cell;
        while (std::getline(in, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

// a valid synthetic eigenform written in the form file grammar: coefficients
// supported on squares, recovered from a Hecke eigenvalue table
halfint::HalfIntegralForm synth_form(int k, std::uint64_t seed, std::int64_t P) {
    auto A = shimura::synth_hecke_form(k, seed, P, shimura::EigenvalueMode::integer_uniform);
    auto a = shimura::invert_lift(A, chars::principal(4), 4, k, P);
    halfint::HalfIntegralForm f;
    f.level = 4;
    f.k = k;
    f.nebentypus = chars::principal(4);
    f.t = 1;
    f.trunc = P * P;
    for (std::int64_t n = 1; n <= P; ++n)
        if (!a[static_cast<std::size_t>(n)].is_zero())
            f.coeffs[n * n] = a[static_cast<std::size_t>(n)];
    return f;
}

void write_form(const fs::path& path, const halfint::HalfIntegralForm& f) {
    std::ostringstream ss;
    halfint::save_form(ss, f);
    textio::write_file_atomic(path, ss.str());
}

} // namespace

TEST_CASE("cli: cache lifecycle and the tau oracle on disk") {
    auto dir = fresh_dir("gen");

    // consumers demand the cache before it exists
    auto miss = run_cli(dir, "density --X 1200 --cache c --out o");
    REQUIRE(miss.code == 4);
    REQUIRE(miss.err.find("mfsign gen") != std::string::npos);

    auto gen = run_cli(dir, "gen --T 1200 --cache c");
    REQUIRE(gen.code == 0);
    REQUIRE(gen.out.find("cache written (T = 1200)") != std::string::npos);
    REQUIRE(fs::exists(dir / "c" / "delta-preimage.qcache"));

    // the stored coefficients start with the hand-checked eigenvalues
    auto lines = split_lines(textio::read_file(dir / "c" / "delta-preimage.qcache"));
    REQUIRE(lines.size() > 12);
    REQUIRE(lines[7] == "1");
    REQUIRE(lines[8] == "-24");
    REQUIRE(lines[9] == "252");
    REQUIRE(lines[10] == "-1472");
    REQUIRE(lines[11] == "4830");

    // idempotence, extension, and no downgrade
    auto again = run_cli(dir, "gen --T 1200 --cache c");
    REQUIRE(again.code == 0);
    REQUIRE(again.out.find("cache valid (T = 1200)") != std::string::npos);
    auto extend = run_cli(dir, "gen --T 1500 --cache c");
    REQUIRE(extend.code == 0);
    REQUIRE(extend.out.find("cache extended to T = 1500") != std::string::npos);
    auto shrink = run_cli(dir, "gen --T 1300 --cache c");
    REQUIRE(shrink.code == 0);
    REQUIRE(shrink.out.find("cache valid (T = 1500)") != std::string::npos);

    // corruption is caught by the checksum
    auto text = textio::read_file(dir / "c" / "delta-preimage.qcache");
    auto pos = text.find("-24");
    text[pos + 1] = '3';
    textio::write_file_atomic(dir / "c" / "delta-preimage.qcache", text);
    auto bad = run_cli(dir, "density --X 1200 --cache c --out o");
    REQUIRE(bad.code == 4);
    REQUIRE(bad.err.find("checksum") != std::string::npos);
}

TEST_CASE("cli: density report structure") {
    auto dir = fresh_dir("density");
    REQUIRE(run_cli(dir, "gen --T 1500 --cache c").code == 0);

    auto r = run_cli(dir, "density --X 1500 --q 5 --delta-grid 0.2,0.1 --cache c --out o");
    REQUIRE(r.code == 0);

    auto text = textio::read_file(dir / "o" / "density.csv");
    auto lines = split_lines(text);
    REQUIRE(lines[0] ==
            "q,d,X,positive,negative,zero,out_of_class,nonzero,pos_ratio,neg_ratio,"
            "radius,diff_quotient,sum_quotient");
    // trailing metadata block
    REQUIRE(lines[lines.size() - 3] == std::string("# tool ") + version_string);
    REQUIRE(lines[lines.size() - 2].rfind("# config-hash fnv1a64:", 0) == 0);
    REQUIRE(lines[lines.size() - 1].rfind("# config ", 0) == 0);
    REQUIRE(lines[lines.size() - 1].find("cmd=density") != std::string::npos);

    auto rows = csv_rows(text);
    REQUIRE(rows.size() == 4);  // d = 1..4
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(rows[i][0] == "5");
        REQUIRE(rows[i][1] == std::to_string(i + 1));
        std::int64_t d = i + 1;
        std::int64_t members = (1500 - d) / 5 + 1;
        std::int64_t sum = std::stoll(rows[i][3]) + std::stoll(rows[i][4]) +
                           std::stoll(rows[i][5]) + std::stoll(rows[i][6]);
        REQUIRE(sum == members);
    }

    // per-class checkpoint files and the twisted partial sums
    for (int d = 1; d <= 4; ++d)
        REQUIRE(fs::exists(dir / "o" / ("checkpoints_d" + std::to_string(d) + ".csv")));
    auto dd_rows = csv_rows(textio::read_file(dir / "o" / "density_dd.csv"));
    REQUIRE(dd_rows.size() == 8);  // 4 classes x 2 grid points
    auto delange_rows = csv_rows(textio::read_file(dir / "o" / "delange.csv"));
    REQUIRE(delange_rows.size() % 4 == 0);  // the four characters mod 5
    REQUIRE(!delange_rows.empty());
}

TEST_CASE("cli: byte-identical outputs, config hash tracks the config") {
    auto dir = fresh_dir("determinism");
    REQUIRE(run_cli(dir, "gen --T 1200 --cache c").code == 0);

    REQUIRE(run_cli(dir, "density --X 1200 --cache c --out o1").code == 0);
    REQUIRE(run_cli(dir, "density --X 1200 --cache c --out o2").code == 0);
    REQUIRE(textio::read_file(dir / "o1" / "density.csv") ==
            textio::read_file(dir / "o2" / "density.csv"));
    REQUIRE(textio::read_file(dir / "o1" / "delange.csv") ==
            textio::read_file(dir / "o2" / "delange.csv"));

    // the seed is part of the provenance, so the metadata must move
    REQUIRE(run_cli(dir, "density --X 1200 --seed 2 --cache c --out o3").code == 0);
    REQUIRE(textio::read_file(dir / "o1" / "density.csv") !=
            textio::read_file(dir / "o3" / "density.csv"));
}

TEST_CASE("cli: signs and satotate report structure") {
    auto dir = fresh_dir("signs");
    REQUIRE(run_cli(dir, "gen --T 1000 --cache c").code == 0);

    auto s = run_cli(dir, "signs --xmax 1000 --q 4 --cache c --out o");
    REQUIRE(s.code == 0);
    auto srows = csv_rows(textio::read_file(dir / "o" / "signs.csv"));
    REQUIRE(srows.size() == 2);  // d = 1, 3
    REQUIRE(srows[0][1] == "1");
    REQUIRE(srows[1][1] == "3");
    for (const auto& row : srows) {
        double pos = std::stod(row[8]), neg = std::stod(row[9]), zero = std::stod(row[10]);
        REQUIRE(pos + neg + zero == Catch::Approx(1.0).margin(1e-9));
    }

    auto t = run_cli(dir, "satotate --xmax 1000 --q 4 --cache c --out o");
    REQUIRE(t.code == 0);
    auto stat_rows = csv_rows(textio::read_file(dir / "o" / "satotate_stats.csv"));
    REQUIRE(stat_rows.size() == 3);  // all, 1 mod 4, 3 mod 4
    REQUIRE(stat_rows[0][0] == "all");
    auto hist_rows = csv_rows(textio::read_file(dir / "o" / "satotate_hist.csv"));
    REQUIRE(hist_rows.size() == 3 * 20);

    // per restriction, histogram counts add up to the sample size
    for (const auto& stat : stat_rows) {
        std::int64_t total = 0;
        for (const auto& h : hist_rows)
            if (h[0] == stat[0]) total += std::stoll(h[3]);
        // closed intervals share endpoints, so boundary points may be counted
        // twice across rows; the sum can only exceed the sample size
        REQUIRE(total >= std::stoll(stat[2]));
    }
}

TEST_CASE("cli: fit recovers a planted power law") {
    auto dir = fresh_dir("fit");
    std::string csv = "x,E\n";
    for (int i = 0; i < 20; ++i) {
        double x = 10.0 * std::pow(10.0, 4.0 * i / 19.0);
        double e = 2.0 * std::pow(x, -0.5);
        char buf[80];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", x, e);
        csv += buf;
    }
    textio::write_file_atomic(dir / "cp.csv", csv);

    auto r = run_cli(dir, "fit cp.csv --out o");
    REQUIRE(r.code == 0);
    auto fit = json::parse(textio::read_file(dir / "o" / "fit.json"));
    REQUIRE(fit["C"].get<double>() == Catch::Approx(2.0).margin(1e-9));
    REQUIRE(fit["alpha"].get<double>() == Catch::Approx(0.5).margin(1e-9));
    REQUIRE(fit["residual"].get<double>() < 1e-12);
    REQUIRE(fit["points_used"].get<int>() == 20);
    REQUIRE(fit["tool"].get<std::string>() == version_string);
}

TEST_CASE("cli: configuration errors exit with code 2") {
    auto dir = fresh_dir("config-errors");
    REQUIRE(run_cli(dir, "gen --T 1000 --cache c").code == 0);

    REQUIRE(run_cli(dir, "density --X 1000 --q 6 --d 3 --cache c --out o").code == 2);
    REQUIRE(run_cli(dir, "density --X 999 --cache c --out o").code == 2);
    REQUIRE(run_cli(dir, "signs --xmax 999 --cache c --out o").code == 2);
    REQUIRE(run_cli(dir, "density --X 1000 --delta-grid 0.1,0.2 --cache c --out o").code == 2);
    REQUIRE(run_cli(dir, "density --X 1000 --t 4 --cache c --out o").code == 2);
    REQUIRE(run_cli(dir, "density --X 1000 --form missing.form --out o").code == 2);
    REQUIRE(run_cli(dir, "fit absent.csv --out o").code == 2);
    REQUIRE(run_cli(dir, "bogus-subcommand").code == 2);
    REQUIRE(run_cli(dir, "density --no-such-flag").code == 2);
    REQUIRE(run_cli(dir, "").code == 2);

    // an obstructed cache directory is a configuration problem
    textio::write_file_atomic(dir / "blocker", "not a directory\n");
    REQUIRE(run_cli(dir, "gen --T 1000 --cache blocker/sub").code == 2);
}

TEST_CASE("cli: file-backed forms run the full pipeline") {
    auto dir = fresh_dir("form-file");
    auto f = synth_form(2, 321, 1000);
    write_form(dir / "synth.form", f);

    REQUIRE(run_cli(dir, "gen --form synth.form").code == 0);

    auto s = run_cli(dir, "signs --form synth.form --xmax 1000 --q 4 --out o");
    REQUIRE(s.code == 0);
    auto srows = csv_rows(textio::read_file(dir / "o" / "signs.csv"));
    REQUIRE(srows.size() == 2);

    // cross-check one row against the library computed in-process
    auto A = shimura::lift(f, 1, 1000);
    auto a = shimura::invert_lift(A, f.nebentypus, f.level, f.k, 1000);
    auto sf = density::sign_function(a, f.nebentypus, f.level, 1);
    auto primes = arith::sieve_primes(1000);
    std::vector<std::pair<std::int64_t, int>> ps;
    for (std::int64_t p : primes.primes)
        if (std::gcd(p, f.level) == 1) ps.emplace_back(p, sf.at(p));
    auto want = satotate::prime_sign_densities(ps, 1, 4, 1000);
    REQUIRE(want.has_value());
    REQUIRE(std::stoll(srows[0][5]) == want->positive);
    REQUIRE(std::stoll(srows[0][6]) == want->negative);

    REQUIRE(run_cli(dir, "satotate --form synth.form --xmax 1000 --q 4 --out o").code == 0);
    REQUIRE(run_cli(dir, "density --form synth.form --X 1000 --q 5 --out o").code == 0);
}

TEST_CASE("cli: assertion failures exit with code 3 and a machine record") {
    auto dir = fresh_dir("assertion");

    // a coefficient that is not fixed by conjugation
    auto f = synth_form(2, 654, 1000);
    f.coeffs[9] = cyclo::CyclotomicRational::from_root(cyclo::RootOfUnity(5, 1));
    write_form(dir / "bad.form", f);
    auto r = run_cli(dir, "density --form bad.form --X 1000 --out o");
    REQUIRE(r.code == 3);
    auto rec = json::parse(r.err);
    REQUIRE(rec["error"] == "assertion_failure");
    REQUIRE(rec["kind"] == "reality_violation");
    REQUIRE(rec["index"].get<std::int64_t>() == 3);
    auto file_rec = json::parse(textio::read_file(dir / "o" / "failure.json"));
    REQUIRE(file_rec["kind"] == "reality_violation");

    // an eigenvalue far outside the allowed bound
    auto g = synth_form(2, 654, 1000);
    g.coeffs[9] = cyclo::CyclotomicRational(1000000000);
    write_form(dir / "rp.form", g);
    auto r2 = run_cli(dir, "satotate --form rp.form --xmax 1000 --out o2");
    REQUIRE(r2.code == 3);
    auto rec2 = json::parse(r2.err);
    REQUIRE(rec2["kind"] == "rp_violation");
    REQUIRE(rec2["p"].get<std::int64_t>() == 3);
}

TEST_CASE("cli: config file is read and flags win") {
    auto dir = fresh_dir("config-file");
    REQUIRE(run_cli(dir, "gen --T 1500 --cache c").code == 0);
    textio::write_file_atomic(dir / "exp.ini", "X=1500\nq=7\ncache=\"c\"\nout=\"o\"\n");

    auto r = run_cli(dir, "density --config exp.ini --q 5");
    REQUIRE(r.code == 0);
    auto rows = csv_rows(textio::read_file(dir / "o" / "density.csv"));
    REQUIRE(rows.size() == 4);      // q = 5 from the flag, not 7 from the file
    REQUIRE(rows[0][0] == "5");
    REQUIRE(rows[0][2] == "1500");  // X from the file
}

TEST_CASE("cli: report writes the manifest and every listed file") {
    auto dir = fresh_dir("report");
    REQUIRE(run_cli(dir, "gen --T 1200 --cache c").code == 0);
    auto r = run_cli(dir, "report --X 1200 --xmax 1200 --q 5 --cache c --out o");
    REQUIRE(r.code == 0);

    auto manifest = json::parse(textio::read_file(dir / "o" / "report.json"));
    REQUIRE(manifest["tool"].get<std::string>() == version_string);
    REQUIRE(manifest["config_hash"].get<std::string>().rfind("fnv1a64:", 0) == 0);
    auto files = manifest["files"];
    REQUIRE(files.size() >= 8);
    for (const auto& name : files)
        REQUIRE(fs::exists(dir / "o" / name.get<std::string>()));
}
