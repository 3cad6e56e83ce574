#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support.hpp"

namespace {

const std::string kCli = TB_CLI_PATH;

int run(const std::string& args) {
    const int status = std::system(("TEXTBENDS_LOG=error '" + kCli + "' " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("exit codes") {
    tbtest::TempDir dir("cli");
    const auto d = dir.path.string();
    CHECK(run("") == 1);
    CHECK(run("generate --sf 0 --out '" + d + "/x.jsonl'") == 1);
    CHECK(run("generate --sf 0.0005 --seed 1 --out '" + d + "/c.jsonl'") == 0);
    CHECK(std::filesystem::exists(dir.path / "c.manifest.json"));
    CHECK(run("run --corpus '" + d + "/missing.jsonl'") == 2);
    CHECK(run("run --corpus '" + d + "/c.jsonl' --engines columnar,oracle") == 1);
    CHECK(run("run --corpus '" + d + "/c.jsonl' --warm-runs 1 --out '" + d + "/r.json'") == 0);
    CHECK(run("report --in '" + d + "/r.json' --format xml") == 1);
    CHECK(run("report --in '" + d + "/r.json' --format csv --out '" + d + "/r.csv'") == 0);
    CHECK(run("verify --corpus '" + d + "/c.jsonl'") == 0);
    CHECK(run("verify --corpus '" + d + "/c.jsonl' --max-docs 100") == 1);

    std::ofstream(dir.path / "bad.jsonl") << "{\"doc_id\":1}\n";
    CHECK(run("ingest --in '" + d + "/bad.jsonl' --out '" + d + "/o.jsonl'") == 2);
}

TEST_CASE("verify flags a corrupted tf column with exit code 3") {
    tbtest::TempDir dir("cli_verify");
    const auto d = dir.path.string();
    REQUIRE(run("generate --sf 0.0005 --seed 2 --out '" + d + "/c.jsonl'") == 0);
    REQUIRE(run("export --corpus '" + d + "/c.jsonl' --out '" + d + "/snow'") == 0);
    const auto facts = dir.path / "snow" / "document_facts.csv";
    std::istringstream in(slurp(facts));
    std::string line, text;
    std::getline(in, line);
    text = line + "\n";
    while (std::getline(in, line)) {
        line.pop_back();
        text += line.substr(0, line.rfind(',') + 1) + "0.999\r\n";
    }
    std::ofstream(facts, std::ios::binary) << text;
    CHECK(run("verify --corpus '" + d + "/snow'") == 3);
    CHECK(run("run --corpus '" + d + "/snow' --warm-runs 1") == 2);
}

TEST_CASE("parameter file wins over flags") {
    tbtest::TempDir dir("cli_params");
    const auto d = dir.path.string();
    REQUIRE(run("generate --sf 0.0002 --seed 3 --out '" + d + "/c.jsonl'") == 0);
    std::ofstream(dir.path / "p.json") << R"({"pGender":"female","pStartDate":"2015-09-17","pEndDate":"2015-09-18",)"
                                       << R"("pStartX":20,"pEndX":40,"pStartY":-100,"pEndY":100,"pWords":["think"]})";
    REQUIRE(run("run --corpus '" + d + "/c.jsonl' --params '" + d + "/p.json' --pGender male --warm-runs 1 --format csv "
                "--out '" + d + "/r.csv'") == 0);
    const auto csv = slurp(dir.path / "r.csv");
    CHECK(csv.find(",female,") != std::string::npos);
    CHECK(csv.find(",male,") == std::string::npos);
}
