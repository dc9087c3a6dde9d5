#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dissoc/cli.hpp"

using namespace dissoc;

namespace {

struct CliRun {
    int code = 0;
    std::string out, err;
};

CliRun run(std::vector<std::string> args) {
    std::vector<const char*> argv = {"dissoc"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

Json payload(const CliRun& r) { return Json::parse(r.out); }

}  // namespace

TEST_CASE("check reports witnesses with exit 0") {
    CliRun r = run({"check", "--group", "free:1", "--elements", "1;2;3"});
    REQUIRE(r.code == 0);
    Json j = payload(r);
    CHECK(j["dissociated"] == false);
    CHECK(j["witness"]["c"] == Json::array({1, 1, -1}));
    CHECK(j["config"]["command"] == "check");
    CHECK(j["config"]["group"] == "free:1");

    CliRun ok = run({"check", "--group", "free:1", "--elements", "1;2;4", "--method",
                     "sums"});
    CHECK(ok.code == 0);
    CHECK(payload(ok)["dissociated"] == true);
}

TEST_CASE("ln subcommand matches the search fixture") {
    CliRun r = run({"ln", "--n", "2"});
    REQUIRE(r.code == 0);
    Json j = payload(r);
    CHECK(j["L"] == 2);
    CHECK(j["exhausted"] == true);
}

TEST_CASE("construct produces a subset of the binary cube") {
    CliRun r = run({"construct", "--m", "2", "--trials", "100", "--seed", "7"});
    REQUIRE(r.code == 0);
    Json j = payload(r);
    CHECK(j["n"] == 8);  // minimal_n(2)
    CHECK(j["columns"].size() == 2);
    CHECK(j["union_bound"]["passes"] == true);
    for (const Json& e : j["columns"])
        for (const Json& c : e) CHECK((c == 0 || c == 1));
}

TEST_CASE("same argv and seed give byte-identical output") {
    std::vector<std::string> cases[] = {
        {"basis", "--group", "free:1", "--elements", "5;3;8;2;9", "--order", "random",
         "--seed", "12"},
        {"construct", "--m", "3", "--seed", "12"},
        {"stress2", "--instances", "5", "--seed", "12"},
    };
    for (auto& args : cases) {
        CliRun a = run(args);
        CliRun b = run(args);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("exit code 1 flags findings, not input errors") {
    CliRun norep = run({"decompose", "--group", "free:1", "--elements", "2;4",
                        "--target", "1"});
    CHECK(norep.code == 1);
    CHECK(payload(norep)["representable"] == false);

    CliRun rep = run({"decompose", "--group", "free:1", "--elements", "1;3;9",
                      "--target", "-10"});
    CHECK(rep.code == 0);
    CHECK(payload(rep)["c"] == Json::array({-1, 0, -1}));

    CliRun fail = run({"construct", "--m", "3", "--n", "1", "--trials", "2"});
    CHECK(fail.code == 1);
    CHECK(payload(fail)["error"] == "exhausted_trials");
}

TEST_CASE("exit code 2 covers usage and input errors") {
    CHECK(run({"check", "--group", "bad:1", "--elements", "1"}).code == 2);
    CHECK(run({"check", "--group", "free:1"}).code == 2);  // no elements
    CHECK(run({"check", "--group", "free:1", "--elements", "1;x"}).code == 2);
    CHECK(run({"check", "--group", "free:1", "--elements", "1,2"}).code == 2);  // dim
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"decompose", "--group", "free:1", "--elements", "1;2;3", "--target",
               "2"}).code == 2);  // not dissociated
}

TEST_CASE("element files accept comments and blank lines") {
    std::string path = "cli_test_elements.txt";
    {
        std::ofstream f(path);
        f << "# powers of two\n1\n\n2\n4 # trailing comments strip too\n";
    }
    CliRun ok = run({"check", "--group", "free:1", "--file", path});
    CHECK(ok.code == 0);
    CHECK(payload(ok)["dissociated"] == true);
    {
        std::ofstream f(path);
        f << "1\n2x\n";
    }
    CliRun bad = run({"check", "--group", "free:1", "--file", path});
    CHECK(bad.code == 2);
    std::remove(path.c_str());

    CHECK(run({"check", "--group", "free:1", "--file", "no_such_file.txt"}).code == 2);
}

TEST_CASE("bound subcommands use exit 1 for violated properties") {
    CliRun b2 = run({"bound2", "--group", "free:1", "--elements", "1;2;3;4;5;6;7;8"});
    CHECK(b2.code == 0);
    Json j = payload(b2);
    CHECK(j["report"]["holds"] == true);
    CHECK(j["report"]["star_ok"] == true);

    CliRun b3 = run({"bound3", "--group", "mod:2^4", "--elements",
                     "1,0,0,0;0,1,0,0;1,1,0,0;0,0,1,0"});
    CHECK(b3.code == 0);
    CHECK(payload(b3)["report"]["holds"] == true);

    CliRun st = run({"stress2", "--instances", "10", "--set-size", "6"});
    CHECK(st.code == 0);
    CHECK(payload(st)["report"]["violations"] == 0);
}

TEST_CASE("rank and orth-prob and union-bound echo config") {
    CliRun rk = run({"rank", "--group", "mod:4^2", "--elements", "2,0;0,2"});
    CHECK(rk.code == 0);
    CHECK(payload(rk)["rank"] == 2);

    CliRun op = run({"orth-prob", "--plus", "1", "--minus", "1"});
    CHECK(op.code == 0);
    CHECK(payload(op)["probability"]["value"] == 0.5);

    CliRun ub = run({"union-bound", "--m", "1", "--n", "4"});
    CHECK(ub.code == 0);
    CHECK(payload(ub)["report"]["passes"] == true);

    CliRun mn = run({"minimal-n", "--m", "4"});
    CHECK(mn.code == 0);
    CHECK(payload(mn)["minimal_n"] == 11);
}

TEST_CASE("maximal-all lists every maximal subset") {
    CliRun r = run({"maximal-all", "--group", "free:1", "--elements", "1;2;3"});
    REQUIRE(r.code == 0);
    CHECK(payload(r)["count"] == 3);
}

TEST_CASE("text format renders without JSON wrappers") {
    CliRun r = run({"check", "--group", "free:1", "--elements", "1;2;4", "--format",
                    "text"});
    CHECK(r.code == 0);
    CHECK(r.out.find("dissociated: true") != std::string::npos);
    CHECK(r.out.find('{') == std::string::npos);
}

TEST_CASE("max-k flag and environment variable tighten limits") {
    CliRun blocked = run({"check", "--group", "free:1", "--elements", "1;2;4;8;16",
                          "--max-k", "4"});
    CHECK(blocked.code == 2);

    setenv("DISSOC_MAX_K", "4", 1);
    Limits env = Limits::defaults();
    CHECK(env.nullcomb_k == 4);
    CHECK(env.sums_k == 4);
    unsetenv("DISSOC_MAX_K");
    CHECK(Limits::defaults().nullcomb_k > 4);
}

TEST_CASE("help exits zero") {
    CliRun h = run({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("check") != std::string::npos);
}
