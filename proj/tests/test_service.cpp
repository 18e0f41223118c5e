#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "kacres/api.hpp"
#include "kacres/cli.hpp"
#include "kacres/errors.hpp"
#include "kacres/memo_cache.hpp"
#include "kacres/server.hpp"
#include "kacres/verify.hpp"

using namespace kacres;
using namespace kacres::service;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "kacres");
    std::vector<const char*> argv;
    for (auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& stem)
{
    auto p = std::filesystem::temp_directory_path() /
             (stem + "-" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()) + ".jsonl");
    std::filesystem::remove(p);
    return p;
}

Json post(Api& api, const std::string& path, const Json& body, int expect = 200)
{
    auto r = dispatch(api, "POST", path, body.dump());
    CHECK_MESSAGE(r.status == expect, path, " ", r.body);
    return Json::parse(r.body);
}

} // namespace

TEST_CASE("health")
{
    Resolver resolver;
    Api api({}, resolver);
    auto r = dispatch(api, "GET", "/health", "");
    CHECK(r.status == 200);
    auto j = Json::parse(r.body);
    CHECK(j["status"] == "ok");
    CHECK(j["schema_version"] == "1");
    CHECK(dispatch(api, "POST", "/health", "").status == 405);
    CHECK(dispatch(api, "GET", "/api/resolve", "").status == 405);
    CHECK(dispatch(api, "POST", "/api/nothing", "{}").status == 404);
}

TEST_CASE("resolve endpoint")
{
    Resolver resolver;
    Api api({}, resolver);
    auto j = post(api, "/api/resolve", {{"mu", {0, 1, 2}}, {"maxDegree", 1}});
    CHECK(j["schema_version"] == "1");
    CHECK(j["counts"] == Json({1, 2}));
    const auto& d1 = j["terms"][1]["summands"];
    REQUIRE(d1.size() == 2);
    CHECK(d1[0]["lambda"] == Json({-2, 0, 1}));
    CHECK(d1[1]["lambda"] == Json({-1, 0, 2}));
    // the string form is accepted too
    CHECK(post(api, "/api/resolve", {{"mu", "[0,1,2]"}, {"maxDegree", 1}}) == j);
}

TEST_CASE("error statuses")
{
    Resolver resolver;
    JobConfig config;
    config.max_degree_cap = 10;
    Api api(config, resolver);
    CHECK(dispatch(api, "POST", "/api/resolve", "{not json").status == 400);
    auto bad = post(api, "/api/resolve", {{"mu", "[1,0]"}, {"maxDegree", 2}}, 400);
    CHECK(bad["error"]["kind"].is_string());
    post(api, "/api/resolve", {{"maxDegree", 2}}, 400);
    post(api, "/api/resolve", {{"mu", {0, 1}}, {"maxDegree", 11}}, 413);
    post(api, "/api/resolve", {{"mu", {0, 1}}, {"maxDegree", -1}}, 422);
    post(api, "/api/functions", {{"mu", {0, 1}}, {"lambda", {0, 1, 2}}}, 422);
    post(api, "/api/step/custom", {{"mu", {0, 1, 4, 5}}, {"i", 4}, {"j", 1}}, 422);

    Json id{{"source", {0, 1}}, {"target", {0, 1}}, {"pairing", {0, 1}}};
    auto e = post(api, "/api/moves/apply", {{"function", id}, {"move", {{"kind", "Move1"}, {"j", 1}}}}, 422);
    CHECK(!e["error"]["message"].get<std::string>().empty());
    post(api, "/api/moves/apply", {{"function", id}, {"move", {{"kind", "Move9"}, {"j", 1}}}}, 400);
}

TEST_CASE("moves endpoints")
{
    Resolver resolver;
    Api api({}, resolver);
    Json id{{"source", {0, 1}}, {"target", {0, 1}}, {"pairing", {0, 1}}};
    auto app = post(api, "/api/moves/applicable", {{"function", id}});
    REQUIRE(app["moves"].size() == 1);
    CHECK(app["moves"][0] == Json({{"kind", "Move3"}, {"j", 1}}));

    auto r = post(api, "/api/moves/apply", {{"function", id}, {"move", {{"kind", "Move3"}, {"j", 1}}}});
    CHECK(r["function"]["source"] == Json({1, 2}));
    CHECK(r["function"]["pairing"] == Json({0, 1}));
    CHECK(r["function"]["ell"] == 2);
    CHECK(r["function"]["leapfrogs"] == 0);
    CHECK(r["function"]["degree"] == 1);
}

TEST_CASE("parse, series and step endpoints")
{
    Resolver resolver;
    Api api({}, resolver);
    auto p = post(api, "/api/diagram/parse", {{"mu", "[-4,2,4,5]"}});
    CHECK(p["dominant"] == Json({2, 2, 1, -4}));
    CHECK(p["runs"] == Json({2, 1, 1}));
    CHECK(p["dots"][0]["class"] == "isolated");
    CHECK(p["dots"][1]["class"] == "isolated");
    CHECK(p["dots"][2]["class"] == "left_isolated");

    auto s = post(api, "/api/series", {{"runs", "3"}, {"maxDegree", 4}});
    CHECK(s["series"]["coeffs"] == Json({1, 2, 2, 2, 2}));
    CHECK(s["z_complexity"] == 1);
    CHECK(s["complexity"] == 3);

    auto plan = post(api, "/api/step/plan", {{"mu", {0, 1}}});
    CHECK(plan["default"]["variant"] == "2a");
    CHECK(plan["default"]["j"] == 0);
    CHECK(plan["default"]["nu"] == Json({-1, 1}));
    CHECK(plan["default"]["mu_prime"] == Json({-1, 0}));
    auto typical = post(api, "/api/step/plan", {{"mu", {0, 2}}});
    CHECK(typical["default"]["variant"] == "typical");
}

TEST_CASE("functions endpoint on both worked examples")
{
    Resolver resolver;
    Api api({}, resolver);
    auto one = post(api, "/api/functions", {{"mu", "[3,4,5,7,8]"}, {"lambda", "[0,1,3,5,6]"}});
    REQUIRE(one["count"] == 2);
    CHECK(one["functions"][0]["degree"] == 4);
    CHECK(one["functions"][0]["leapfrogs"] == 2);
    CHECK(one["functions"][1]["degree"] == 5);
    CHECK(one["functions"][1]["leapfrogs"] == 1);

    auto two = post(api, "/api/functions",
                    {{"mu", "[0,1,2,3,8,9,10,11]"}, {"lambda", "[-4,-3,0,1,4,5,8,9]"}});
    int at8 = 0;
    for (const auto& f : two["functions"]) {
        CHECK(f["ell"] == 24);
        if (f["degree"] == 8) {
            ++at8;
            CHECK(f["leapfrogs"] == 4);
        }
    }
    CHECK(at8 == 2);

    auto typical = post(api, "/api/functions", {{"mu", {0, 2, 4}}, {"lambda", {0, 2, 4}}});
    REQUIRE(typical["count"] == 1);
    CHECK(typical["functions"][0]["degree"] == 0);
}

TEST_CASE("memo cache round trip is bit exact")
{
    const auto path = temp_file("kacres-cache");
    const WeightDiagram mu{0, 1, 2, 5, 6};
    Resolver cold;
    const auto expected = cold.resolve(mu, 6);
    save_memo_cache(cold, path);

    Resolver warm;
    std::ostringstream warn;
    auto stats = load_memo_cache(warm, path, warn);
    CHECK(stats.loaded == cold.memo_size());
    CHECK(stats.skipped == 0);
    CHECK(warm.memo_size() == cold.memo_size());
    CHECK(warm.resolve(mu, 6) == expected);

    // corrupt a line and append garbage: both are skipped, the rest loads
    {
        std::ifstream in(path);
        std::vector<std::string> lines;
        for (std::string l; std::getline(in, l);)
            lines.push_back(l);
        REQUIRE(lines.size() >= 3);
        lines[1] = "{\"mu\":[0,1],\"depth\":2,\"terms\":[[]]}";
        lines.push_back("not json");
        std::ofstream out(path);
        for (auto& l : lines)
            out << l << "\n";
    }
    Resolver partial;
    std::ostringstream warn2;
    stats = load_memo_cache(partial, path, warn2);
    CHECK(stats.skipped == 2);
    CHECK(stats.loaded == cold.memo_size() - 1);
    CHECK(warn2.str().find("skip") != std::string::npos);
    CHECK(partial.resolve(mu, 6) == expected);

    Resolver none;
    std::ostringstream warn3;
    CHECK(load_memo_cache(none, path.string() + ".missing", warn3).loaded == 0);
    std::filesystem::remove(path);
}

TEST_CASE("cache path resolution")
{
    ::setenv("KACRES_CACHE", "/tmp/from-env.jsonl", 1);
    CHECK(memo_cache_path(std::nullopt) == "/tmp/from-env.jsonl");
    CHECK(memo_cache_path(std::string("/tmp/flag.jsonl")) == "/tmp/flag.jsonl");
    ::setenv("KACRES_CACHE", "", 1);
    CHECK(!memo_cache_path(std::nullopt));
    ::unsetenv("KACRES_CACHE");
    CHECK(!memo_cache_path(std::nullopt));
}

TEST_CASE("cli resolve, series and functions")
{
    auto t = cli({"resolve", "--mu", "[0,1]", "--max-degree", "3", "--format", "table"});
    CHECK(t.code == 0);
    std::istringstream rows(t.out);
    int lines = 0;
    for (std::string l; std::getline(rows, l);)
        ++lines;
    CHECK(lines == 5); // header plus 4 rows

    auto typical = cli({"resolve", "--mu", "[0,2,4]", "--max-degree", "2"});
    REQUIRE(typical.code == 0);
    auto tj = Json::parse(typical.out);
    CHECK(tj["counts"] == Json({1, 0, 0}));

    auto ex1 = cli({"resolve", "--mu", "[3,4,5,7,8]", "--max-degree", "5"});
    REQUIRE(ex1.code == 0);
    auto ej = Json::parse(ex1.out);
    auto contains = [&](int d) {
        for (const auto& s : ej["terms"][d]["summands"])
            if (s["lambda"] == Json({0, 1, 3, 5, 6}))
                return true;
        return false;
    };
    CHECK(contains(4));
    CHECK(contains(5));

    auto s = cli({"series", "--runs", "2", "--max-degree", "5"});
    REQUIRE(s.code == 0);
    auto sj = Json::parse(s.out);
    CHECK(sj["series"]["coeffs"] == Json({1, 1, 1, 1, 1, 1}));
    CHECK(sj["z_complexity"] == 1);
    auto s11 = Json::parse(cli({"series", "--runs", "1,1", "--max-degree", "3"}).out);
    CHECK(s11["series"]["coeffs"] == Json({1, 0, 0, 0}));
    CHECK(s11["z_complexity"] == 0);
    auto st = cli({"series", "--runs", "3", "--max-degree", "4", "--format", "table"});
    CHECK(st.out.find("1,2,2,2,2") != std::string::npos);

    auto f = cli({"functions", "--mu", "[3,4,5,7,8]", "--lambda", "[0,1,3,5,6]", "--format", "table"});
    CHECK(f.code == 0);
    CHECK(f.out.find("2 function(s)") != std::string::npos);
    auto ascii = cli({"functions", "--mu", "[0,1]", "--max-degree", "1", "--format", "ascii"});
    CHECK(ascii.code == 0);
    CHECK(ascii.out.find("degree 1") != std::string::npos);
}

TEST_CASE("cli exit codes")
{
    CHECK(cli({"resolve", "--mu", "[0,0]", "--max-degree", "2"}).code == 2);
    CHECK(cli({"resolve", "--mu", "[0,1]"}).code == 2);
    CHECK(cli({"resolve", "--mu", "[0,1]", "--max-degree", "65"}).code == 3);
    CHECK(cli({"--max-degree-cap", "4", "resolve", "--mu", "[0,1]", "--max-degree", "5"}).code == 3);
    CHECK(cli({"functions", "--mu", "[0,1]", "--lambda", "[0,1,2]"}).code == 2);
    CHECK(cli({"series", "--runs", "0,2", "--max-degree", "2"}).code == 2);
    CHECK(cli({"bogus"}).code == 2);
    auto e = cli({"resolve", "--mu", "[0,1]", "--max-degree", "65"});
    CHECK(Json::parse(e.out)["error"]["kind"].is_string());
    CHECK(e.err.find("error:") != std::string::npos);
}

TEST_CASE("cli and http emit identical bytes")
{
    Api api({}, Resolver::shared());
    auto c = cli({"resolve", "--mu", "[0,1,2,5,6]", "--max-degree", "4"});
    auto h = dispatch(api, "POST", "/api/resolve", R"({"mu":[0,1,2,5,6],"maxDegree":4})");
    CHECK(c.out == h.body);
    auto cs = cli({"series", "--runs", "2,1", "--max-degree", "6"});
    auto hs = dispatch(api, "POST", "/api/series", R"({"runs":[2,1],"maxDegree":6})");
    CHECK(cs.out == hs.body);
    auto cf = cli({"functions", "--mu", "[0,1,2]", "--max-degree", "3"});
    auto hf = dispatch(api, "POST", "/api/functions", R"({"mu":"[0,1,2]","maxDegree":3})");
    CHECK(cf.out == hf.body);
}

TEST_CASE("cli persists the cache")
{
    const auto path = temp_file("kacres-cli-cache");
    auto first = cli({"--cache", path.string(), "resolve", "--mu", "[0,1,2,3]", "--max-degree", "5"});
    REQUIRE(first.code == 0);
    CHECK(std::filesystem::exists(path));
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(Json::parse(header) == Json({{"format", "kacres-memo"}, {"version", 1}}));
    auto second = cli({"--cache", path.string(), "resolve", "--mu", "[0,1,2,3]", "--max-degree", "5"});
    CHECK(second.out == first.out);
    std::filesystem::remove(path);
}

TEST_CASE("http service over a socket")
{
    Resolver resolver;
    Api api({}, resolver);
    HttpService http(api);
    const int port = http.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread server([&] { http.listen(); });

    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(5);
    auto health = client.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");

    const std::string body = R"({"mu":[0,1,2],"maxDegree":3})";
    auto r = client.Post("/api/resolve", body, "application/json");
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(r->body == dispatch(api, "POST", "/api/resolve", body).body);

    auto cap = client.Post("/api/resolve", R"({"mu":[0,1],"maxDegree":100})", "application/json");
    REQUIRE(cap);
    CHECK(cap->status == 413);

    // concurrent identical requests return identical bodies
    std::vector<std::string> bodies(8);
    std::vector<std::thread> workers;
    for (std::size_t k = 0; k < bodies.size(); ++k) {
        workers.emplace_back([&, k] {
            httplib::Client c("127.0.0.1", port);
            if (auto res = c.Post("/api/resolve", R"({"mu":[0,1,2,3,6,7],"maxDegree":6})", "application/json"))
                bodies[k] = res->body;
        });
    }
    for (auto& w : workers)
        w.join();
    for (const auto& b : bodies)
        CHECK(b == bodies[0]);
    CHECK(!bodies[0].empty());

    http.stop();
    server.join();
}

TEST_CASE("verification harness")
{
    Resolver resolver;
    VerifyOptions small;
    small.max_n = 4;
    small.max_degree = 5;
    small.trials = 10;
    auto report = run_verification(small, resolver);
    CHECK(report.passed());
    CHECK(report.checks.size() == check_names().size());
    for (const auto& c : report.checks) {
        CAPTURE(c.name);
        CHECK(c.passed);
        CHECK(c.cases > 0);
    }

    VerifyOptions only = small;
    only.checks = {"order-independence"};
    auto one = run_verification(only, resolver);
    REQUIRE(one.checks.size() == 1);
    CHECK(one.checks[0].name == "order-independence");

    auto code = cli({"verify", "--check", "order-independence", "--trials", "100", "--max-n", "4"});
    CHECK(code.code == 0);
    CHECK(code.err.find("seed") != std::string::npos);
    CHECK(cli({"verify", "--check", "no-such-check"}).code == 2);
}

TEST_CASE("negative control: a flipped Move2 arrow is caught")
{
    Resolver resolver;
    VerifyOptions faulty;
    faulty.max_n = 4;
    faulty.max_degree = 5;
    faulty.trials = 2;
    faulty.labelled_source = [&](const WeightDiagram& mu, int d) {
        return flip_move2_arrow(resolver.resolve_with_functions(mu, d));
    };
    auto report = run_verification(faulty, resolver);
    CHECK_FALSE(report.passed());
    bool carried = false;
    for (const auto& c : report.checks) {
        if (!c.passed) {
            REQUIRE(c.counterexample);
            CHECK(c.counterexample->contains("mu"));
            CHECK(c.counterexample->contains("degree"));
            carried = true;
        }
    }
    CHECK(carried);
}
