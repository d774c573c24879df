#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

using json = nlohmann::json;

namespace {

struct Result {
    int status = -1;
    std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " '" STABMETRIC_CLI "' " + args + " 2>/dev/null";
    Result r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int raw = pclose(p);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string l; std::getline(ss, l);) out.push_back(l);
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, DistKronecker) {
    const Result r = run(R"(dist --model kronecker '{"x":[0.2,0,0.5,0.3]}' '{"x":[0.3,-0.1,0.9,0]}')");
    ASSERT_EQ(r.status, 0) << r.out;
    const json j = json::parse(r.out);
    EXPECT_NEAR(j["distance"].get<double>(), 0.4, 1e-15);
    EXPECT_EQ(j["deviation"].get<double>(), 0.0);
}

TEST(Cli, DistCorbitAndIdentical) {
    const json j = json::parse(run("dist --model corbit 0 '[0,1]'").out);
    EXPECT_NEAR(j["distance"].get<double>(), 3.141592653589793, 1e-15);
    for (const char* model : {"corbit", "poincare", "r4", "kronecker"}) {
        const std::string pt = std::string(model) == "r4"          ? "'[0.1,0.2,0.5,0.3]'"
                               : std::string(model) == "kronecker" ? R"('{"x":[0.1,0.2,0.5,0.3]}')"
                                                                   : "'[0.1,0.2]'";
        const Result r = run(std::string("dist --model ") + model + " " + pt + " " + pt);
        ASSERT_EQ(r.status, 0) << model << r.out;
        EXPECT_EQ(json::parse(r.out)["distance"].get<double>(), 0.0) << model;
    }
}

TEST(Cli, InvalidInputGivesErrorJson) {
    const Result r = run(R"(dist --model kronecker '{"x":[0.5,0,0.3,0]}' '{"x":[0.5,0,0.7,0]}')");
    EXPECT_NE(r.status, 0);
    EXPECT_EQ(json::parse(r.out)["error"], "OutsideRegion");
    const Result bad = run("dist --model corbit '[1,' 0");
    EXPECT_NE(bad.status, 0);
    EXPECT_EQ(json::parse(bad.out)["error"], "InvalidInput");
    EXPECT_EQ(json::parse(run("pa '[[2,0],[0,1]]'").out)["error"], "NotUnimodular");
    EXPECT_EQ(json::parse(run("pa").out)["error"], "MissingMatrix");
    EXPECT_EQ(json::parse(run("dist --model nowhere 0 1").out)["error"], "UnknownKind");
}

TEST(Cli, QuotientDistAndHn) {
    const Result q = run("quotient-dist --model r4 '[0,0,0,0]' '[0,0,1,0]'");
    ASSERT_EQ(q.status, 0) << q.out;
    const json j = json::parse(q.out);
    EXPECT_DOUBLE_EQ(j["closed"].get<double>(), 0.5);
    EXPECT_LT(j["deviation"].get<double>(), 1e-6);
    const json h = json::parse(run(R"(hn '{"x":[0.5,0,1,0]}' '{"k":[2,3],"shift":0}')").out);
    EXPECT_DOUBLE_EQ(h["mass"].get<double>(), 5.0);
    EXPECT_EQ(h["factors"].size(), 2u);
}

TEST(Cli, CheckersEmitCertificates) {
    const json c = json::parse(run("cat0-check --model corbit 0 2 '[1,0.3183098861837907]'").out);
    EXPECT_FALSE(c["pass"].get<bool>());
    EXPECT_NEAR(c["certificate"]["margin"].get<double>(), 1.0, 1e-9);
    const json s = json::parse(run("slim-check --model corbit --delta 2 0 8 '[0,2.5464790894703255]'").out);
    EXPECT_NEAR(s["certificate"]["margin"].get<double>(), 2.0, 1e-9);
    const json g = json::parse(run("geodesic-check --model euclidean '[0,0]' '[1,0]' '[2,0]'").out);
    EXPECT_EQ(g["result"]["reject"], "RejectOnGeodesic");
}

TEST(Cli, PaAndGenus) {
    const json p = json::parse(run("pa '{\"A\":[[2,1],[1,1]]}'").out);
    EXPECT_EQ(p["classification"], "PseudoAnosov");
    const json g = json::parse(run("pa --genus 2").out);
    EXPECT_FALSE(g["pseudo_anosov_possible"].get<bool>());
}

TEST(Cli, FixturesFilter) {
    const Result r = run("fixtures d_B-curvature");
    ASSERT_EQ(r.status, 0);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["certificate_count"], 2);
    EXPECT_EQ(j["fixtures"].size(), 2u);
    const json e = json::parse(run("fixtures pA-ell").out);
    EXPECT_EQ(e["fixtures"][0]["inputs"]["table"].size(), 20u);
    const Result all = run("fixtures");
    EXPECT_EQ(all.status, 0);
    EXPECT_EQ(json::parse(all.out)["fixtures"].size(), 13u);
}

TEST(Cli, SweepMassGrowth) {
    const Result r = run("sweep mass-growth -n 200");
    ASSERT_EQ(r.status, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 201u);
    EXPECT_EQ(ls[0], "n,a_n");
    const double last = std::stod(ls.back().substr(ls.back().find(',') + 1));
    EXPECT_NEAR(last, 0.9624, 0.02);
}

TEST(Cli, SweepSlimGridAndIsometry) {
    const auto ls = lines(run("sweep slim-grid").out);
    ASSERT_EQ(ls.size(), 5u);
    EXPECT_EQ(ls[0], "delta,margin");
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const double d = std::stod(ls[i].substr(0, ls[i].find(',')));
        const double m = std::stod(ls[i].substr(ls[i].find(',') + 1));
        EXPECT_NEAR(m, d, 1e-9);
    }
    const Result empty = run("sweep isometry-samples -n 0");
    EXPECT_EQ(empty.out, "index,embed_deviation,quotient_deviation\n");
    const Result bad = run("sweep wobble");
    EXPECT_NE(bad.status, 0);
    EXPECT_EQ(json::parse(bad.out)["error"], "UnknownKind");
}

TEST(Cli, DeterministicOutputFiles) {
    const std::string a = testing::TempDir() + "stabmetric_a.json", b = testing::TempDir() + "stabmetric_b.json";
    ASSERT_EQ(run("fixtures --seed 9 --out " + a).status, 0);
    ASSERT_EQ(run("fixtures --seed 9 --out " + b).status, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_FALSE(slurp(a).empty());
    const std::string c = testing::TempDir() + "stabmetric_c.csv", d = testing::TempDir() + "stabmetric_d.csv";
    run("sweep isometry-samples -n 20 --seed 4 --out " + c);
    run("sweep isometry-samples -n 20 --out " + d, "STABMETRIC_SEED=4");
    EXPECT_EQ(slurp(c), slurp(d));
    EXPECT_EQ(lines(slurp(c)).size(), 21u);
}
