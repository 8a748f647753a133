#include <json.hpp>
#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

namespace {

struct CliResult {
    int status = -1;
    std::string out;
};

// stdout only; stderr carries progress lines
CliResult run(const std::string& args)
{
    std::string cmd = std::string(QJD_CLI_PATH) + " " + args + " 2>/dev/null";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), got);
    int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < s.size()) {
        std::size_t end = s.find('\n', start);
        if (end == std::string::npos)
            end = s.size();
        out.push_back(s.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content)
{
    auto p = std::filesystem::temp_directory_path() / ("qjd_cli_test_" + name);
    std::ofstream(p) << content;
    return p;
}

} // namespace

TEST(Cli, Dims)
{
    CliResult r = run("dims --max-degree 7 -f tsv");
    ASSERT_EQ(r.status, 0);
    auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 8u);
    EXPECT_EQ(ls[0], "n\tC\tR\tK\tdim_frc\tconjecture");
    EXPECT_EQ(ls[5], "5\t3\t9\t14\t525\t525");
    EXPECT_EQ(ls[7], "7\t11\t46\t132\t72765\t72765");
}

TEST(Cli, Degree6Table)
{
    CliResult r = run("table -n 6 -f tsv");
    ASSERT_EQ(r.status, 0);
    auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 12u);
    EXPECT_EQ(ls[0], "lambda\td\told_rows\told_cols\told_rank\tall_rows\tall_cols\tall_rank\tnew");
    EXPECT_EQ(ls[1], "6\t1\t21\t20\t17\t20\t26\t17\t0");
    EXPECT_EQ(ls[6], "321\t16\t336\t320\t274\t320\t416\t274\t0");
    EXPECT_EQ(ls[11], "111111\t1\t21\t20\t19\t20\t26\t19\t0");
}

TEST(Cli, GlennieVerify)
{
    CliResult r = run("glennie --var c --verify");
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("# expansion: zero"), std::string::npos);
    std::size_t terms = 0;
    for (const auto& l : lines(r.out))
        if (!l.empty() && l[0] != '#')
            ++terms;
    EXPECT_EQ(terms, 72u);
}

TEST(Cli, VerifyExitCodes)
{
    auto good = temp_file("good.txt", "1 (a(bc))d\n1 (a(bd))c\n1 (a(cd))b\n-1 (ab)(cd)\n-1 (ac)(bd)\n-1 (ad)(bc)\n");
    CliResult ok = run("verify -i " + good.string());
    EXPECT_EQ(ok.status, 0);
    EXPECT_NE(ok.out.find("true"), std::string::npos);
    auto bad = temp_file("bad.txt", "1 (ab)c\n-1 a(bc)\n");
    EXPECT_EQ(run("verify -i " + bad.string()).status, 1);
    auto broken = temp_file("broken.txt", "1 (ab\n");
    EXPECT_EQ(run("verify -i " + broken.string()).status, 2);
    EXPECT_EQ(run("verify -i /nonexistent/identity.txt").status, 2);
}

TEST(Cli, ErrorExitCodes)
{
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("bogus").status, 2);
    EXPECT_EQ(run("--help").status, 0);
    EXPECT_EQ(run("table -n 9").status, 2);
    EXPECT_EQ(run("table -n 6 --partition 43").status, 2);
    EXPECT_EQ(run("-p 4 table -n 6").status, 2);
    EXPECT_EQ(run("-p 5 table -n 6").status, 2);
    EXPECT_EQ(run("find-special --content aaaaaaaaa").status, 3);
    EXPECT_EQ(run("expand -m '(ab'").status, 2);
    EXPECT_EQ(run("dims --max-degree 13").status, 2);
}

TEST(Cli, ExpandAndJson)
{
    CliResult t = run("expand -m '(ab)c'");
    ASSERT_EQ(t.status, 0);
    EXPECT_EQ(lines(t.out)[0], "# expansion: 4 terms");
    CliResult j = run("expand -m '(ab)c' -f json");
    ASSERT_EQ(j.status, 0);
    auto doc = nlohmann::json::parse(j.out);
    ASSERT_TRUE(doc.is_array());
    EXPECT_EQ(doc.size(), 4u);
    CliResult k = run("table -n 5 -f json");
    ASSERT_EQ(k.status, 0);
    auto tab = nlohmann::json::parse(k.out);
    ASSERT_EQ(tab.size(), 7u);
    EXPECT_EQ(tab[0]["lambda"], "5");
    EXPECT_EQ(tab[0]["new"], 0);
}

TEST(Cli, DeterministicAcrossThreadCounts)
{
    CliResult a = run("-t 1 table -n 6 -f tsv"), b = run("-t 3 table -n 6 -f tsv");
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(run("ranks -n 5 --method direct").out, run("ranks -n 5 --method direct").out);
}

TEST(Cli, TypesAndRanks)
{
    CliResult r = run("types -n 5 --kind rc -f tsv");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(lines(r.out).size(), 10u);
    CliResult q = run("ranks -n 5 --method direct");
    EXPECT_NE(q.out.find("# old rank: 250"), std::string::npos);
    EXPECT_NE(q.out.find("# new: 0"), std::string::npos);
    CliResult s = run("ranks -n 6 --method repn --partition 321 -f tsv");
    ASSERT_EQ(s.status, 0);
    EXPECT_NE(s.out.find("274"), std::string::npos);
}
