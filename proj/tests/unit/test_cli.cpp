#include <doctest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(HICRIT_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

nlohmann::json result_of(const std::string& args) {
    const Run r = run(args);
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("schema") == "hicrit.v1");
    CHECK(j.at("manifest").contains("version"));
    return j.at("result");
}

std::string write_file(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path.string();
}

}  // namespace

TEST_CASE("stat") {
    const std::string four = write_file("hicrit_cli_four.txt", "0.1\n0.3\n0.6\n0.9\n");
    const auto r = result_of("stat " + four + " --kind hc --k1-frac 0.5");
    CHECK(r.at("value").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.at("argmax_k") == 1);

    std::string grid;
    for (int k = 1; k <= 20; ++k) grid += std::to_string(k / 20.0) + "\n";
    const auto g = result_of("stat " + write_file("hicrit_cli_grid.txt", grid) + " --kind bj");
    CHECK(g.at("value").get<double>() == doctest::Approx(0.0).scale(1.0));

    CHECK(run("stat " + write_file("hicrit_cli_empty.txt", "")).code == 2);
    CHECK(run("stat " + write_file("hicrit_cli_range.txt", "0.2\n1.5\n")).code == 2);
    CHECK(run("stat /nonexistent/file.txt").code == 2);
}

TEST_CASE("pvalue and threshold") {
    CHECK(result_of("pvalue --kind hc --n 400 --b 4.83").at("p_value").get<double>() ==
          doctest::Approx(0.05).epsilon(0.02));
    CHECK(result_of("threshold --kind mbj --n 1000 --alpha 0.01").at("threshold").get<double>() ==
          doctest::Approx(3.40).epsilon(0.005));
    CHECK(result_of("pvalue --method de --kind mhc --n 400 --b 3.13").at("p_value").get<double>() ==
          doctest::Approx(0.036).epsilon(0.05));
    const double exact = result_of("pvalue --method exact --kind hc --n 50 --b 3").at("p_value").get<double>();
    CHECK(exact > 0.0);
    CHECK(exact < 0.2);
    CHECK(run("pvalue --kind hc --n 400 --b 4.83 --method nope").code == 2);
    CHECK(run("threshold --kind ks --n 400").code == 2);
    CHECK(run("pvalue --kind hc --n 0 --b 1").code == 2);
    CHECK(run("").code != 0);
}

TEST_CASE("power") {
    CHECK(result_of("power --analytic --kind hc --n 1000 --alpha 0.01 --p 0.02 --mu 2.5")
              .at("power")
              .get<double>() == doctest::Approx(0.68).epsilon(0.03));
    const auto mc = result_of("power --kind mbj --n 400 --b 2.80 --p 0.01 --mu 4.0 --reps 4000 --seed 1");
    CHECK(std::abs(mc.at("power").get<double>() - 0.88) < 0.03);
    const auto null = result_of("power --kind mbj --n 400 --alpha 0.05 --p 0 --mu 4.0 --reps 4000 --seed 2");
    CHECK(null.at("power").get<double>() < 0.07);
}

TEST_CASE("output is byte-identical for an identical manifest") {
    const std::string args = "power --kind hc --n 300 --b 4.5 --p 0.02 --mu 3 --reps 500 --seed 9";
    const Run a = run(args);
    const Run b = run("--threads 1 " + args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(run("--timing " + args).out.find("wall_clock_seconds") != std::string::npos);
}

TEST_CASE("simulate-null and lower-bound") {
    const auto s = result_of("simulate-null --kind hc --n 200 --alpha 0.05 --reps 2000 --seed 3");
    CHECK(s.at("rate").get<double>() < 0.08);

    std::string body;
    for (int k = 1; k <= 200; ++k) body += std::to_string((k - 0.5) / 200.0) + "\n";
    const std::string null_file = write_file("hicrit_cli_null.txt", body);
    CHECK(result_of("lower-bound " + null_file).at("lambda_hat").get<double>() == 0.0);
    CHECK(result_of("lower-bound " + null_file + " --kind mhc").at("lambda_hat").get<double>() == 0.0);

    std::string strong;
    for (int k = 1; k <= 200; ++k) strong += (k <= 60 ? "1e-8" : std::to_string(k / 200.0)) + std::string("\n");
    CHECK(result_of("lower-bound " + write_file("hicrit_cli_strong.txt", strong)).at("lambda_hat").get<double>() > 0.1);
}

TEST_CASE("synth and scan") {
    const auto dir = std::filesystem::temp_directory_path();
    const std::string bin = (dir / "hicrit_cli_scan.bin").string();
    const std::string spec = "\"mu=3,p=0.2,seed=4,n=40,t=4000,l=10\"";
    CHECK(run("synth --synth " + spec + " --out " + bin).code == 0);
    const auto from_file = result_of("scan --data " + bin + " --L 10 --kind mbj");
    const auto direct = result_of("scan --synth " + spec + " --L 10 --kind mbj");
    CHECK(from_file.at("detections").size() == direct.at("detections").size());
    CHECK(!direct.at("detections").empty());
    CHECK(run("scan --data /nonexistent.bin").code == 2);
    CHECK(run("scan --synth \"mu=1,p=0.1,t=30000000\" --L 20").code == 2);
}
