#include "kacres/cli.hpp"

#include <atomic>
#include <csignal>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kacres/api.hpp"
#include "kacres/errors.hpp"
#include "kacres/memo_cache.hpp"
#include "kacres/server.hpp"
#include "kacres/verify.hpp"

namespace kacres::service {

namespace {

std::atomic<HttpService*> g_running{nullptr};

extern "C" void on_signal(int)
{
    if (auto* s = g_running.load())
        s->stop();
}

std::string dots_of(const Json& d)
{
    std::string s = "[";
    for (std::size_t i = 0; i < d.size(); ++i)
        s += (i ? "," : "") + std::to_string(d[i].get<Coord>());
    return s + "]";
}

std::string resolve_table(const Json& r)
{
    std::ostringstream os;
    os << std::setw(6) << "degree" << std::setw(8) << "s_d" << "  summands\n";
    for (const auto& t : r["terms"]) {
        os << std::setw(6) << t["degree"].get<int>() << std::setw(8) << t["count"].get<Multiplicity>() << " ";
        for (const auto& s : t["summands"]) {
            os << " ";
            const auto m = s["multiplicity"].get<Multiplicity>();
            if (m != 1)
                os << m << "*";
            os << dots_of(s["lambda"]);
        }
        os << "\n";
    }
    return os.str();
}

std::string resolve_ascii(const Resolution& r)
{
    Coord lo = r.mu.front();
    Coord hi = r.mu.back();
    for (const auto& t : r.terms) {
        for (const auto& [lam, m] : t.summands) {
            lo = std::min(lo, lam.front());
            hi = std::max(hi, lam.back());
        }
    }
    std::ostringstream os;
    os << "mu = " << to_string(r.mu) << "\n" << render_ascii(r.mu, lo - 1, hi + 1);
    for (const auto& t : r.terms) {
        os << "\ndegree " << t.degree << " (s_d = " << t.total() << ")\n";
        for (const auto& [lam, m] : t.summands) {
            os << (m == 1 ? std::string() : std::to_string(m) + " x ") << to_string(lam) << "\n";
            os << render_ascii(lam, lo - 1, hi + 1);
        }
    }
    return os.str();
}

std::string functions_table(const Json& r)
{
    std::ostringstream os;
    os << std::setw(6) << "degree" << std::setw(6) << "ell" << std::setw(6) << "L" << "  " << std::left
       << std::setw(24) << "target" << "pairing\n"
       << std::right;
    for (const auto& f : r["functions"]) {
        os << std::setw(6) << f["degree"].get<std::int64_t>() << std::setw(6) << f["ell"].get<std::int64_t>()
           << std::setw(6) << f["leapfrogs"].get<std::int64_t>() << "  " << std::left << std::setw(24)
           << dots_of(f["target"]) << std::right;
        for (std::size_t i = 0; i < f["pairing"].size(); ++i)
            os << (i ? " " : "") << f["source"][i].get<Coord>() << "->" << f["pairing"][i].get<Coord>();
        os << "\n";
    }
    os << r["count"].get<std::size_t>() << " function(s)\n";
    return os.str();
}

std::string series_table(const Json& r)
{
    auto list = [](const Json& a) {
        std::string s;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += (i ? "," : "") + std::to_string(a[i].get<std::int64_t>());
        return s;
    };
    std::ostringstream os;
    os << std::left;
    os << std::setw(18) << "runs" << list(r["runs"]) << "\n";
    os << std::setw(18) << "n" << r["n"].get<std::int64_t>() << "\n";
    os << std::setw(18) << "o" << r["o"].get<std::int64_t>() << "\n";
    os << std::setw(18) << "series" << list(r["series"]["coeffs"]) << "\n";
    os << std::setw(18) << "f_poly" << to_string(IntPolynomial(r["f_poly"]["coeffs"].get<std::vector<std::int64_t>>()))
       << "\n";
    os << std::setw(18) << "c_z" << r["z_complexity"].get<std::int64_t>() << "\n";
    os << std::setw(18) << "c_F" << r["complexity"].get<std::int64_t>() << "\n";
    os << std::setw(18) << "rank_variety_dim" << r["rank_variety_dim"].get<std::int64_t>() << "\n";
    os << std::setw(18) << "f_support_dim" << r["f_support_dim"].get<std::int64_t>() << "\n";
    os << std::setw(18) << "growth_exponent" << r["growth_exponent"].get<std::int64_t>() << "\n";
    return os.str();
}

struct Cli {
    JobConfig config;
    std::optional<std::string> cache_flag;
    std::string format = "json";

    std::string mu;
    std::optional<std::string> lambda;
    std::optional<int> max_degree;
    std::string runs;

    VerifyOptions verify;
    std::optional<std::uint64_t> seed;
};

void load_cache(Resolver& resolver, const std::optional<std::string>& path, std::ostream& err)
{
    if (path)
        load_memo_cache(resolver, *path, err);
}

void save_cache(const Resolver& resolver, const std::optional<std::string>& path)
{
    if (path)
        save_memo_cache(resolver, *path);
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Cli cli;
    CLI::App app{"Projective resolutions of Kac modules in weight-diagram terms"};
    app.require_subcommand(1);
    app.add_option("--cache", cli.cache_flag, "Memo cache file (JSON lines); defaults to $KACRES_CACHE");
    app.add_option("--max-degree-cap", cli.config.max_degree_cap, "Largest accepted degree")
        ->check(CLI::NonNegativeNumber);

    auto* resolve = app.add_subcommand("resolve", "Terms P_0..P_D of the resolution of Delta(mu)");
    resolve->add_option("--mu", cli.mu, "Diagram, e.g. \"[0,1,2]\"")->required();
    resolve->add_option("--max-degree", cli.max_degree, "Highest degree D")->required();
    resolve->add_option("--format", cli.format)->check(CLI::IsMember({"json", "table", "ascii"}));

    auto* series = app.add_subcommand("series", "Summand counts from the generating function");
    series->add_option("--runs", cli.runs, "Run sizes right to left, e.g. 2,1")->required();
    series->add_option("--max-degree", cli.max_degree, "Truncation order D")->required();
    series->add_option("--format", cli.format)->check(CLI::IsMember({"json", "table"}));

    auto* functions = app.add_subcommand("functions", "Allowable functions from mu");
    functions->add_option("--mu", cli.mu)->required();
    functions->add_option("--lambda", cli.lambda, "Restrict to this target");
    functions->add_option("--max-degree", cli.max_degree);
    functions->add_option("--format", cli.format)->check(CLI::IsMember({"json", "table", "ascii"}));

    auto* verify = app.add_subcommand("verify", "Run the invariant suites");
    verify->add_option("--max-n", cli.verify.max_n, "Largest number of dots in the corpus");
    verify->add_option("--max-degree", cli.max_degree, "Largest degree");
    verify->add_option("--trials", cli.verify.trials, "Random choosers per weight");
    verify->add_option("--seed", cli.seed, "Seed for randomized checks");
    verify->add_option("--check", cli.verify.checks, "Run only the named checks");
    verify->add_option("--format", cli.format)->check(CLI::IsMember({"json", "table"}));

    auto* serve = app.add_subcommand("serve", "JSON over HTTP");
    serve->add_option("--port", cli.config.port)->check(CLI::Range(0, 65535));
    serve->add_option("--host", cli.config.host);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        cli.config.memo_cache_path = memo_cache_path(cli.cache_flag);
        cli.config.output_format = parse_output_format(cli.format);
        Api api(cli.config);
        auto& resolver = api.resolver();
        const auto& cache = cli.config.memo_cache_path;

        if (*resolve) {
            load_cache(resolver, cache, err);
            Json req{{"mu", cli.mu}, {"maxDegree", *cli.max_degree}};
            Json res = api.resolve(req);
            save_cache(resolver, cache);
            switch (cli.config.output_format) {
            case OutputFormat::Json:
                out << dump(res);
                break;
            case OutputFormat::Table:
                out << resolve_table(res);
                break;
            case OutputFormat::Ascii:
                out << resolve_ascii(resolver.resolve(parse_diagram(cli.mu), *cli.max_degree));
                break;
            }
            return 0;
        }
        if (*series) {
            Json res = api.series(Json{{"runs", cli.runs}, {"maxDegree", *cli.max_degree}});
            out << (cli.config.output_format == OutputFormat::Table ? series_table(res) : dump(res));
            return 0;
        }
        if (*functions) {
            Json req{{"mu", cli.mu}};
            if (cli.lambda)
                req["lambda"] = *cli.lambda;
            if (cli.max_degree)
                req["maxDegree"] = *cli.max_degree;
            Json res = api.functions(req);
            switch (cli.config.output_format) {
            case OutputFormat::Json:
                out << dump(res);
                break;
            case OutputFormat::Table:
                out << functions_table(res);
                break;
            case OutputFormat::Ascii:
                for (const auto& f : res["functions"]) {
                    out << "degree " << f["degree"].get<std::int64_t>() << ", ell " << f["ell"].get<std::int64_t>()
                        << ", L " << f["leapfrogs"].get<std::int64_t>() << "\n"
                        << render_ascii(function_from_json(f)) << "\n";
                }
                break;
            }
            return 0;
        }
        if (*verify) {
            if (cli.max_degree)
                cli.verify.max_degree = api.checked_degree(Json(*cli.max_degree));
            if (cli.seed)
                cli.verify.seed = *cli.seed;
            cli.verify.log = &err;
            load_cache(resolver, cache, err);
            auto report = run_verification(cli.verify, resolver);
            out << (cli.config.output_format == OutputFormat::Table ? render_table(report) : dump(to_json(report)));
            return report.passed() ? 0 : 1;
        }
        if (*serve) {
            load_cache(resolver, cache, err);
            HttpService http(api);
            const int port = http.bind(cli.config.host, cli.config.port);
            if (port < 0) {
                err << "error: cannot bind " << cli.config.host << ":" << cli.config.port << "\n";
                return 4;
            }
            err << "listening on http://" << cli.config.host << ":" << port << "\n";
            g_running = &http;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            http.listen();
            g_running = nullptr;
            save_cache(resolver, cache);
            return 0;
        }
    } catch (const std::exception& e) {
        const auto c = classify_current_exception();
        if (cli.config.output_format == OutputFormat::Json)
            out << dump(error_body(c, e.what()));
        err << "error: " << e.what() << "\n";
        return c.exit_code;
    }
    return 0;
}

} // namespace kacres::service
