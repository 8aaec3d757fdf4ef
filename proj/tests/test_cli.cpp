#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch() {
    auto p = fs::temp_directory_path() / ("meanlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
}

Run run(const std::string& args) {
    const auto err_file = scratch() / "stderr.txt";
    const std::string cmd = std::string(MEANLAB_CLI_PATH) + " " + args + " 2>" + err_file.string();
    Run r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(err_file);
    r.err.assign(std::istreambuf_iterator<char>(in), {});
    return r;
}

Json body_of(const Run& r) { return Json::parse(r.out).at("body"); }

}  // namespace

TEST(Cli, DensityOfProgressionIsExact) {
    auto r = run("density --set 3Z");
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["header"]["version"], "1.0.0");
    EXPECT_EQ(j["header"]["config"]["set"], "3Z");
    EXPECT_EQ(j["header"]["seeds"]["seed"], 7);
    EXPECT_EQ(j["body"]["upper"]["lower"], "1/3");
    EXPECT_EQ(j["body"]["upper"]["upper"], "1/3");
    EXPECT_EQ(j["body"]["upper"]["mode"], "exact");
}

TEST(Cli, NonTransitiveClassifyFails) {
    auto r = run("classify --system sft:11,01");
    EXPECT_EQ(r.code, 1);
    auto e = Json::parse(r.err);
    EXPECT_EQ(e["error"], "precondition");
    EXPECT_NE(e["message"].get<std::string>().find("dichotomy requires transitivity"), std::string::npos);
}

TEST(Cli, SyntaxErrorsAreMachineReadable) {
    auto r = run("density --set '2Z+'");
    EXPECT_EQ(r.code, 1);
    auto e = Json::parse(r.err);
    EXPECT_EQ(e["error"], "syntax");
    EXPECT_EQ(e["position"], 3);
    EXPECT_EQ(e["expected"], "integer");
    EXPECT_EQ(run("nosuchcommand").code, 1);
    EXPECT_EQ(run("verify --suite nosuchsuite").code, 1);
}

TEST(Cli, EntropyCsvSweep) {
    auto r = run("--format csv entropy --system sft:golden --nmax 5");
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "system,n,value");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(line.rfind("sft:golden," + std::to_string(rows) + ",", 0), 0u) << line;
    }
    EXPECT_EQ(rows, 5);
}

TEST(Cli, ConfigFileAndOverrides) {
    const auto cfg = scratch() / "density.json";
    std::ofstream(cfg) << R"js({"command": "density", "set": "union(3Z, shift(3Z, 1))", "nmax": 8})js";
    auto r = run("--config " + cfg.string());
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["header"]["config"]["set"], "union(3Z, 3Z+1)");
    EXPECT_EQ(j["header"]["config"]["nMax"], 8);
    EXPECT_EQ(j["body"]["upper"]["upper"], "2/3");
    auto o = run("--config " + cfg.string() + " --set 5Z");
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(body_of(o)["upper"]["upper"], "1/5");
    std::ofstream(cfg) << "{not json";
    EXPECT_EQ(run("--config " + cfg.string()).code, 1);
}

TEST(Cli, OutputFile) {
    const auto out = scratch() / "report.json";
    auto r = run("--out " + out.string() + " meandist --x periodic:01 --y const:0");
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(out);
    auto j = Json::parse(in);
    EXPECT_EQ(j["body"]["banach"]["upper"], "1/2");
}

TEST(Cli, VerifyIsDeterministicAcrossThreadCounts) {
    auto a = run("--threads 1 verify --suite correspondence");
    auto b = run("--threads 4 verify --suite correspondence");
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(body_of(a).dump(), body_of(b).dump());
    EXPECT_EQ(body_of(a)["pass"], true);
}

TEST(Cli, FiniteIntersectionWitnesses) {
    auto r = run("lemma61 --instances 20");
    ASSERT_EQ(r.code, 0) << r.err;
    auto b = body_of(r);
    EXPECT_EQ(b["instances"], 20);
    EXPECT_EQ(b["found"], 20);
}

TEST(Cli, CorrespondRows) {
    auto r = run("correspond --set 2Z --windows 4,8 --tuple 1..10 --k 2 --eps 1/10");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\"1/2\""), std::string::npos);
}
