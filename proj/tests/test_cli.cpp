#include <gtest/gtest.h>

#include <cstdlib>
#include <string>

#include "polaraut/commands.hpp"

using namespace polaraut;

namespace {

RunOptions opts(std::string command)
{
    RunOptions o;
    o.command = std::move(command);
    return o;
}

json run_json(const RunOptions& o, int expect_code = 0)
{
    const CommandResult r = run_command(o);
    EXPECT_EQ(r.exit_code, expect_code);
    return json::parse(r.output);
}

#ifdef POLARAUT_CLI_PATH
int run_binary(const std::string& args)
{
    const std::string cmd = std::string(POLARAUT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

} // namespace

TEST(Construct, PwCode)
{
    RunOptions o = opts("construct");
    o.n = 3;
    o.K = 4;
    o.pw = true;
    const json j = run_json(o);
    EXPECT_EQ(j["masks"], json({0, 1, 2, 4}));
    EXPECT_EQ(j["profile"], json({3}));
    EXPECT_EQ(j["m_min"], json({4}));
    EXPECT_EQ(j["seed"], 1);
    EXPECT_TRUE(j["is_decreasing"].get<bool>());
}

TEST(Construct, FullCodeAndExplicitGenerators)
{
    RunOptions o = opts("construct");
    o.n = 2;
    o.K = 4;
    EXPECT_EQ(run_json(o)["profile"], json({2}));
    RunOptions e = opts("construct");
    e.n = 3;
    e.mmin = {3};
    EXPECT_EQ(run_json(e)["masks"], json({0, 1, 2, 3}));
    RunOptions c = opts("construct");
    c.code = R"({"n": 3, "construction": "bec", "K": 2, "erasure_prob": 0.5})";
    EXPECT_EQ(run_json(c)["code"]["construction"], "bec");
}

TEST(Construct, CodeSpecRoundTrip)
{
    for (const CodeSpec& spec : {construct_pw(5, 11), construct_bec(4, 6, 0.3), code_from_generators(MonomialSet(4, {5, 8}))}) {
        json j = to_json(spec);
        const CodeSpec back = code_from_json(j);
        EXPECT_EQ(back.info, spec.info);
        EXPECT_EQ(back.construction, spec.construction);
    }
    EXPECT_THROW(code_from_json(json{{"n", 3}, {"construction", "explicit"}, {"m_min_masks", {3}}, {"K", 5}}),
                 std::invalid_argument);
    EXPECT_THROW(code_from_json(json{{"construction", "pw"}}), std::invalid_argument);
    EXPECT_THROW(code_from_json(json{{"n", 3}, {"construction", "magic"}, {"K", 2}}), std::invalid_argument);
}

TEST(Profile, ReportsGroupOrders)
{
    RunOptions o = opts("profile");
    o.n = 6;
    o.K = 32;
    const json j = run_json(o);
    EXPECT_EQ(j["profile"], json({1, 2, 2, 1}));
    EXPECT_EQ(j["blta_linear_order"], "294912");
    EXPECT_EQ(j["blta_order"], "18874368");
}

TEST(VerifyTheorem, BatteryAndSingleCode)
{
    RunOptions b = opts("verify-theorem");
    b.battery = "n3";
    const json j = run_json(b);
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["reports"].size(), 10U);

    RunOptions rm = opts("verify-theorem");
    rm.n = 4;
    rm.mmin = {1, 2, 4, 8};
    const json r = run_json(rm);
    EXPECT_EQ(r["reports"][0]["aut_count"], 20160);
}

TEST(VerifyTheorem, RefusesLargeN)
{
    RunOptions o = opts("verify-theorem");
    o.n = 6;
    o.K = 10;
    EXPECT_THROW(run_command(o), UsageError);
    RunOptions bad = opts("verify-theorem");
    bad.battery = "n9";
    EXPECT_THROW(run_command(bad), UsageError);
}

TEST(EnumerateAut, ListsElementsForSmallN)
{
    RunOptions o = opts("enumerate-aut");
    o.n = 3;
    o.mmin = {1};
    const json j = run_json(o);
    EXPECT_EQ(j["aut_count"], 24);
    EXPECT_EQ(j["elements"].size(), 24U);
}

TEST(Witness, AdjacentAndReduction)
{
    RunOptions o = opts("witness");
    o.n = 3;
    o.mmin = {4};
    o.matrix = "3,2,4";
    o.i = 0;
    json j = run_json(o);
    EXPECT_TRUE(j["verdict"].get<bool>());
    EXPECT_EQ(j["trace"]["i"], 0);

    o.matrix = R"({"A": [5, 2, 4], "b": 3})";
    o.j = 2;
    j = run_json(o);
    EXPECT_TRUE(j["reduction"]["holds"].get<bool>());
    EXPECT_EQ(j["reduction"]["chain"].size(), 3U);
}

TEST(Witness, UsageErrors)
{
    RunOptions o = opts("witness");
    o.n = 3;
    o.mmin = {4};
    o.matrix = "1,2,4";
    o.i = 0;
    EXPECT_THROW(run_command(o), UsageError);
    o.matrix = "3,2";
    EXPECT_THROW(run_command(o), UsageError);
    o.matrix = "";
    EXPECT_THROW(run_command(o), UsageError);
}

TEST(SamplePerms, IdentityPresentAndMembersVerified)
{
    RunOptions one = opts("sample-perms");
    one.n = 3;
    one.mmin = {4};
    one.L = 1;
    const json a = run_json(one);
    ASSERT_EQ(a["members"].size(), 1U);
    EXPECT_EQ(a["members"][0]["permutation"], json({0, 1, 2, 3, 4, 5, 6, 7}));

    RunOptions eight = one;
    eight.L = 8;
    const json b = run_json(eight);
    ASSERT_EQ(b["members"].size(), 8U);
    for (const auto& m : b["members"]) EXPECT_TRUE(m["automorphism_verified"].get<bool>());
}

TEST(SamplePerms, LowerTriangularOnlyIsScInvariant)
{
    RunOptions o = opts("sample-perms");
    o.n = 6;
    o.K = 32;
    o.L = 6;
    o.lta_only = true;
    const json j = run_json(o);
    for (const auto& m : j["members"]) {
        EXPECT_TRUE(m["lta"].get<bool>());
        EXPECT_TRUE(m["sc_invariant"].get<bool>());
    }
}

TEST(SamplePerms, ProfileOnly)
{
    RunOptions o = opts("sample-perms");
    o.profile = {1, 2};
    o.L = 3;
    const json j = run_json(o);
    EXPECT_EQ(j["members"].size(), 3U);
    for (const auto& m : j["members"]) EXPECT_TRUE(m["in_blta"].get<bool>());
}

TEST(Simulate, CsvShape)
{
    RunOptions o = opts("simulate");
    o.n = 4;
    o.K = 8;
    o.frames = 200;
    o.epsilon = {0.0, 0.3};
    o.L = 2;
    const CommandResult r = run_command(o);
    EXPECT_EQ(r.exit_code, 0);
    std::istringstream in(r.output);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, csv_header());
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 4);
    EXPECT_NE(r.output.find("200,0,0,"), std::string::npos);
}

TEST(Simulate, UsageErrors)
{
    RunOptions o = opts("simulate");
    o.n = 4;
    o.K = 8;
    EXPECT_THROW(run_command(o), UsageError);
    o.snr = {1.0};
    o.epsilon = {0.1};
    EXPECT_THROW(run_command(o), UsageError);
    o.epsilon.clear();
    o.decoder = "ml";
    EXPECT_THROW(run_command(o), UsageError);
}

TEST(Determinism, OutputDoesNotDependOnJobs)
{
    for (const char* cmd : {"verify-theorem", "enumerate-aut", "simulate"}) {
        RunOptions o = opts(cmd);
        o.n = 4;
        o.K = 7;
        o.frames = 1500;
        o.snr = {1.0};
        o.L = 4;
        o.jobs = 1;
        const std::string a = run_command(o).output;
        o.jobs = 4;
        EXPECT_EQ(a, run_command(o).output) << cmd;
    }
}

TEST(Dispatch, UnknownCommand)
{
    EXPECT_THROW(run_command(opts("nope")), UsageError);
    RunOptions missing = opts("construct");
    EXPECT_THROW(run_command(missing), UsageError);
}

#ifdef POLARAUT_CLI_PATH
TEST(Binary, ExitCodes)
{
    EXPECT_EQ(run_binary("construct --n 3 --K 4 --pw"), 0);
    EXPECT_EQ(run_binary("selftest --seed 3"), 0);
    EXPECT_EQ(run_binary("verify-theorem --n 6 --K 10"), 2);
    EXPECT_EQ(run_binary("construct --n 3 --K 40"), 2);
    EXPECT_EQ(run_binary("construct --bogus"), 2);
    EXPECT_EQ(run_binary(""), 2);
}
#endif
