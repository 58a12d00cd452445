#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Result
{
    int status = -1;
    std::string out;
};

Result run(const std::string& args, const std::string& env = "")
{
    const std::string cmd = env + " " + ELLCOOP_BIN + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

nlohmann::json run_json(const std::string& args)
{
    const Result r = run(args);
    EXPECT_EQ(r.status, 0) << args;
    return nlohmann::json::parse(r.out);
}

}  // namespace

TEST(Cli, SteenrodQ)
{
    const auto j = run_json("steenrod-q --p 3 --indices 2,3");
    EXPECT_EQ(j["q1q0"], "z2^4 - z1^3*z3");
    EXPECT_EQ(j["sign"], 1);
}

TEST(Cli, Congruence)
{
    const auto j = run_json("congruence --p 3 --n 2");
    EXPECT_TRUE(j["holds"].get<bool>());
    EXPECT_EQ(j["ideal"], "(pu)");
}

TEST(Cli, TorTableFirstTorsion)
{
    const auto j = run_json("tor-table --p 3 --case ell --max-degree 64");
    EXPECT_EQ(j["first_torsion"]["t"], 64);
    EXPECT_EQ(j["first_torsion"]["s"], 0);
    const Result csv = run("tor-table --p 3 --max-degree 64 --format csv");
    EXPECT_EQ(csv.status, 0);
    EXPECT_EQ(csv.out.rfind("case,p,s,t,free,torsion\n", 0), 0u);
    EXPECT_NE(csv.out.find("ell,3,0,64,17,3\n"), std::string::npos);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run("tor-table --p 3 --max-degree 4000").status, 4);
    EXPECT_EQ(run("hazewinkel --n 30").status, 4);
    EXPECT_NE(run("tor-table --bogus").status, 0);
    EXPECT_NE(run("").status, 0);
    EXPECT_EQ(run("hazewinkel --p 9").status, 2);
    EXPECT_EQ(run("steenrod-q --indices 3,2").status, 2);
    EXPECT_NE(run("tor-table --case nope").status, 0);
}

TEST(Cli, ThreadCountsGiveIdenticalBytes)
{
    for (const std::string args : {"tor-table --p 3 --max-degree 72", "crosscheck --p 3 --max-degree 68",
                                   "bockstein --max-degree 20"}) {
        const Result one = run(args + " --threads 1");
        const Result four = run(args + " --threads 4");
        EXPECT_EQ(one.status, 0) << args;
        EXPECT_EQ(one.out, four.out) << args;
    }
}

TEST(Cli, OutputDirectory)
{
    const auto dir = std::filesystem::temp_directory_path() / "ellcoop_cli_test";
    std::filesystem::remove_all(dir);
    const Result r = run("hazewinkel --p 3 --n 2 -o sub/h.json", "ELLCOOP_OUTPUT_DIR=" + dir.string());
    EXPECT_EQ(r.status, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(dir / "sub" / "h.json");
    ASSERT_TRUE(in);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_EQ(nlohmann::json::parse(text.str())["rows"][1]["v_in_l"], "3*l2 - 27*l1^4");
    std::filesystem::remove_all(dir);
}
