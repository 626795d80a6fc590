#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

std::string g_cli_path;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args, const std::string& stdin_text = "") {
    const std::string in_file = "cli_stdin.tmp";
    const std::string out_file = "cli_stdout.tmp";
    const std::string err_file = "cli_stderr.tmp";
    {
        std::ofstream f(in_file);
        f << stdin_text;
    }
    const std::string cmd =
        g_cli_path + " " + args + " < " + in_file + " > " + out_file + " 2> " + err_file;
    const int status = std::system(cmd.c_str());
    auto slurp = [](const std::string& path) {
        std::ifstream f(path);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    int code = -1;
    if (status != -1) code = WEXITSTATUS(status);
    return RunResult{code, slurp(out_file), slurp(err_file)};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

}  // namespace

TEST_CASE("accelerate: single delta-squared value") {
    RunResult r = run_cli("accelerate --depth 1", "3\n2\n1.5\n");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "n,row_0,row_1,degenerate");
    CHECK(split_csv(lines[1])[2] == "1");
}

TEST_CASE("accelerate: equal values flag the whole degenerate column") {
    RunResult r = run_cli("accelerate --depth 1", "7\n7\n7\n7\n7\n");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    int flagged = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv(lines[i]);
        const std::string& flag = cells.back();
        if (!flag.empty()) {
            CHECK(flag == "true");
            ++flagged;
        }
    }
    CHECK(flagged == 3);
}

TEST_CASE("accelerate: alternating harmonic partial sums at depth 2") {
    std::string input;
    double s = 0.0;
    char buf[64];
    for (int k = 0; k < 9; ++k) {
        s += (k % 2 == 0 ? 1.0 : -1.0) / (k + 1.0);
        std::snprintf(buf, sizeof buf, "%.17g\n", s);
        input += buf;
    }
    RunResult r = run_cli("accelerate --depth 2", input);
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    // last row_2 cell lives on data line for n = 4 (row_2 has 5 entries)
    const auto cells = split_csv(lines[5]);
    CHECK(std::abs(std::stod(cells[3]) - 0.6931471805599453) <= 5e-6);
}

TEST_CASE("accelerate: row_0 echoes the input at 12 significant digits") {
    RunResult r = run_cli("accelerate --depth 1", "3.14159265359\n2.71828182846\n1.41421356237\n");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    CHECK(split_csv(lines[1])[1] == "3.14159265359");
    CHECK(split_csv(lines[2])[1] == "2.71828182846");
    CHECK(split_csv(lines[3])[1] == "1.41421356237");
}

TEST_CASE("accelerate error paths: exit 2 with line number, exit 3 on short input") {
    RunResult bad = run_cli("accelerate --depth 1", "1.0\noops\n3.0\n");
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("line 2") != std::string::npos);

    RunResult shrt = run_cli("accelerate --depth 2", "1\n2\n3\n4\n");
    CHECK(shrt.exit_code == 3);
}

TEST_CASE("steffensen subcommand") {
    RunResult r = run_cli("steffensen --map \"cos(x)\" --x0 0.5");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    // last data line before the summary comment
    const auto cells = split_csv(lines[lines.size() - 2]);
    CHECK(std::abs(std::stod(cells[1]) - 0.7390851332) <= 1e-9);
    CHECK(lines.back().find("# converged=1") == 0);

    RunResult fixed = run_cli("steffensen --map \"x\" --x0 1");
    CHECK(fixed.exit_code == 0);
    CHECK(fixed.out.find("1,1,0,true") != std::string::npos);

    RunResult nofix = run_cli("steffensen --map \"x+1\" --x0 0");
    CHECK(nofix.exit_code == 4);

    RunResult parse = run_cli("steffensen --map \"cos(\" --x0 0");
    CHECK(parse.exit_code == 2);
    CHECK(parse.err.find("position") != std::string::npos);

    RunResult nonfinite = run_cli("steffensen --map \"log(x)\" --x0 -2");
    CHECK(nonfinite.exit_code == 5);
}

TEST_CASE("roots subcommand") {
    RunResult r = run_cli("roots --coeffs \"-8,14,-7,1\" --n 60");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 4);
    const double want[3] = {4.0, 2.0, 1.0};
    for (int i = 0; i < 3; ++i) {
        const auto cells = split_csv(lines[static_cast<std::size_t>(i) + 1]);
        CHECK(std::stoi(cells[0]) == i + 1);
        CHECK(std::abs(std::stod(cells[1]) - want[i]) <= 1e-6);
    }

    RunResult single = run_cli("roots --coeffs \"-5,1\"");
    CHECK(single.exit_code == 0);
    CHECK(split_csv(lines_of(single.out)[1])[1] == "5");

    RunResult quad = run_cli("roots --coeffs \"2,-3,1\" --accelerate");
    REQUIRE(quad.exit_code == 0);
    const auto ql = lines_of(quad.out);
    CHECK(std::abs(std::stod(split_csv(ql[1])[1]) - 2.0) <= 1e-6);
    CHECK(std::abs(std::stod(split_csv(ql[2])[1]) - 1.0) <= 1e-6);

    RunResult bad = run_cli("roots --coeffs \"1,abc,1\"");
    CHECK(bad.exit_code == 2);

    RunResult osc = run_cli("roots --coeffs \"-1.05,-0.05,1\" --n 40");
    CHECK(osc.exit_code == 6);
    CHECK(osc.err.find("m = 1") != std::string::npos);
}

TEST_CASE("shoot subcommand prints the twelve-digit separatrix values") {
    RunResult r3 = run_cli("shoot --x-star 3");
    REQUIRE(r3.exit_code == 0);
    CHECK(r3.out.find("0.618340077402") != std::string::npos);

    RunResult r10 = run_cli("shoot --x-star 10 --trajectory-out cli_traj.tmp");
    REQUIRE(r10.exit_code == 0);
    CHECK(r10.out.find("0.618340077404") != std::string::npos);
    std::ifstream traj("cli_traj.tmp");
    std::string header;
    std::getline(traj, header);
    CHECK(header == "x,y,h_accepted");

    RunResult bad = run_cli("shoot --x-star 0.2");
    CHECK(bad.exit_code == 7);
}

TEST_CASE("replicate subcommand: first row and byte determinism") {
    RunResult a = run_cli("replicate");
    REQUIRE(a.exit_code == 0);
    const auto lines = lines_of(a.out);
    CHECK(lines[0] == "x,y1,y0,y2,y_rational,y_reference,flag_degenerate");
    const auto first = split_csv(lines[1]);
    CHECK(first[0] == "0");
    CHECK(first[1].substr(0, 8) == "0.550321");
    CHECK(first[5] == "0.618340077404");

    RunResult b = run_cli("replicate");
    CHECK(a.out == b.out);
}

TEST_CASE("unknown flags map to the parse-error exit code") {
    RunResult r = run_cli("accelerate --bogus 1", "1\n2\n3\n");
    CHECK(r.exit_code == 2);
}

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];
    doctest::Context ctx;
    ctx.applyCommandLine(1, argv);
    return ctx.run();
}
