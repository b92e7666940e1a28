// End-to-end checks of the command-line tool, driven through std::system.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = QCL_CLI_PATH;

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run(const std::string& args) {
    auto out = fs::temp_directory_path() / "qcl_cli_stdout.txt";
    std::string cmd = kCli + " " + args + " > " + out.string() + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    std::ifstream in(out);
    std::ostringstream buf;
    buf << in.rdbuf();
    fs::remove(out);
    return {WEXITSTATUS(rc), buf.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("cli: simulate, fit, predict pipeline") {
    auto dir = fs::temp_directory_path() / "qcl_cli_test";
    fs::create_directories(dir);
    auto prefix = (dir / "s2").string();

    auto sim = run("simulate --scenario lognormal_shift --n 60 --p 5 --seed 9 --out " + prefix);
    REQUIRE(sim.exit_code == 0);
    REQUIRE(fs::exists(prefix + "_train.csv"));
    REQUIRE(fs::exists(prefix + "_test.csv"));
    std::string head = slurp(prefix + "_train.csv").substr(0, 14);
    CHECK(head == "y,x1,x2,x3,x4,");

    auto model_path = (dir / "model.txt").string();
    auto fit = run("fit --train " + prefix + "_train.csv --skew moment --out " + model_path);
    REQUIRE(fit.exit_code == 0);
    CHECK(fit.stdout_text.find("theta_star") != std::string::npos);
    REQUIRE(fs::exists(model_path));

    auto pred_path = (dir / "pred.txt").string();
    auto pred = run("predict --model " + model_path + " --data " + prefix +
                    "_test.csv --out " + pred_path);
    REQUIRE(pred.exit_code == 0);
    std::istringstream preds(slurp(pred_path));
    std::string line;
    int rows = 0, hits = 0;
    std::ifstream truth(prefix + "_test.csv");
    std::string trow;
    std::getline(truth, trow);  // header
    while (std::getline(preds, line)) {
        std::getline(truth, trow);
        ++rows;
        if (!trow.empty() && line == trow.substr(0, trow.find(','))) ++hits;
    }
    CHECK(rows == 60);
    CHECK(hits > 33);  // informative scenario: clearly better than chance

    fs::remove_all(dir);
}

TEST_CASE("cli: experiment determinism across workers and config file override") {
    auto dir = fs::temp_directory_path() / "qcl_cli_exp";
    fs::create_directories(dir);
    auto r1 = (dir / "r1.txt").string();
    auto r4 = (dir / "r4.txt").string();

    std::string base = "experiment --scenario t3_shift --n 30 --p 4 --reps 4 --seed 11";
    REQUIRE(run(base + " --workers 1 --out " + r1).exit_code == 0);
    REQUIRE(run(base + " --workers 4 --out " + r4).exit_code == 0);
    CHECK(slurp(r1) == slurp(r4));

    // config file supplies flags; explicit flags override it
    auto cfg = dir / "exp.ini";
    {
        std::ofstream f(cfg);
        f << "[experiment]\n";
        f << "scenario=t3_shift\n";
        f << "n=30\np=4\nreps=4\nseed=11\nworkers=1\n";
    }
    auto rc = (dir / "rc.txt").string();
    REQUIRE(run("experiment --config " + cfg.string() + " --out " + rc).exit_code == 0);
    CHECK(slurp(rc) == slurp(r1));

    auto rs = (dir / "rs.txt").string();
    REQUIRE(run("experiment --config " + cfg.string() + " --seed 12 --out " + rs).exit_code == 0);
    CHECK(slurp(rs) != slurp(r1));
    CHECK(slurp(rs).find("seed = 12") != std::string::npos);

    fs::remove_all(dir);
}

TEST_CASE("cli: theory and curve emit csv") {
    auto theory = run("theory --problem exponential_shift --grid 25 --tau 0.02");
    REQUIRE(theory.exit_code == 0);
    CHECK(theory.stdout_text.rfind("theta,psi,misclassification\n", 0) == 0);
    int lines = 0;
    for (char c : theory.stdout_text)
        if (c == '\n') ++lines;
    CHECK(lines == 26);

    auto curve = run("curve --scenario lognormal_shift --n 40 --p 3 --seed 3 --grid 15");
    REQUIRE(curve.exit_code == 0);
    CHECK(curve.stdout_text.rfind("theta,", 0) == 0);
}

TEST_CASE("cli: cv subcommand") {
    auto dir = fs::temp_directory_path() / "qcl_cli_cv";
    fs::create_directories(dir);
    auto data = dir / "toy.csv";
    {
        std::ofstream f(data);
        f << "y,x1\n";
        for (int i = 0; i < 5; ++i) f << "0," << 0.01 * i << "\n";
        for (int i = 0; i < 5; ++i) f << "1," << 9.0 + 0.01 * i << "\n";
    }
    auto cv = run("cv --data " + data.string() + " --folds loo");
    REQUIRE(cv.exit_code == 0);
    CHECK(cv.stdout_text.find("rate = 0\n") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cli: exit codes distinguish config and data errors") {
    CHECK(run("cv --data /nonexistent.csv").exit_code == 3);
    CHECK(run("experiment --scenario bogus --n 30 --p 4").exit_code == 2);
    CHECK(run("experiment --scenario t3_shift --n 31 --p 4").exit_code == 2);
    CHECK(run("fit --train /nonexistent.csv --out /tmp/m.txt").exit_code == 3);
    CHECK(run("--no-such-flag").exit_code == 2);
}
