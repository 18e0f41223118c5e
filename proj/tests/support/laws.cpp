#include "laws.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <thread>

#include "kacres/api.hpp"
#include "kacres/cli.hpp"
#include "kacres/memo_cache.hpp"
#include "kacres/moves.hpp"
#include "kacres/resolution.hpp"
#include "kacres/series.hpp"
#include "kacres/server.hpp"
#include "kacres/verify.hpp"
#include "oracles.hpp"

namespace laws {

using namespace kacres;

namespace {

int uniform(Rng& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Coord ucoord(Rng& rng, Coord lo, Coord hi)
{
    return std::uniform_int_distribution<Coord>(lo, hi)(rng);
}

WeightDiagram random_diagram(Rng& rng, int max_n, Coord lo, Coord hi)
{
    const int n = uniform(rng, 1, max_n);
    std::vector<Coord> pool;
    for (Coord x = lo; x <= hi; ++x)
        pool.push_back(x);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(static_cast<std::size_t>(n));
    std::sort(pool.begin(), pool.end());
    return WeightDiagram(pool);
}

WeightDiagram random_typical(Rng& rng, int max_n)
{
    const int n = uniform(rng, 1, max_n);
    std::vector<Coord> dots;
    Coord x = ucoord(rng, -10, 10);
    for (int i = 0; i < n; ++i) {
        dots.push_back(x);
        x += ucoord(rng, 2, 4);
    }
    return WeightDiagram(dots);
}

RunComposition random_composition(Rng& rng, int max_n)
{
    const int n = uniform(rng, 1, max_n);
    std::vector<int> parts;
    int left = n;
    while (left > 0) {
        const int p = uniform(rng, 1, left);
        parts.push_back(p);
        left -= p;
    }
    return RunComposition{parts};
}

WeightDiagram spaced(Rng& rng, const RunComposition& pi)
{
    std::vector<Coord> gaps(pi.parts.size(), 1);
    for (auto& g : gaps)
        g = ucoord(rng, 1, 5);
    return service::diagram_with_runs(pi, gaps, ucoord(rng, -20, 20));
}

std::string show(const std::vector<std::int64_t>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

std::int64_t choose2(std::int64_t x)
{
    return x * (x - 1) / 2;
}

// --- weight diagrams -------------------------------------------------------

std::string dominant_round_trip(Rng& rng)
{
    const int n = uniform(rng, 1, 12);
    std::vector<Coord> c(static_cast<std::size_t>(n));
    for (auto& x : c)
        x = ucoord(rng, -50, 50);
    std::sort(c.rbegin(), c.rend());
    DominantWeight w(c);
    if (dominant_from_diagram(diagram_from_dominant(w)) != w)
        return "dominant round trip fails for " + show(c);
    auto d = diagram_from_dominant(w);
    if (diagram_from_dominant(dominant_from_diagram(d)) != d)
        return "diagram round trip fails for " + to_string(d);
    return {};
}

std::string ell_two_formulas(Rng& rng)
{
    auto mu = random_diagram(rng, 8, -15, 15);
    auto lam = random_diagram(rng, 8, -15, 15);
    if (lam.size() != mu.size())
        lam = shift(mu, ucoord(rng, -5, 5));
    const Coord lo = std::min(mu.front(), lam.front());
    const Coord hi = std::max(mu.back(), lam.back());
    std::int64_t sum = 0;
    for (Coord t = lo; t <= hi; ++t)
        sum += ell_t(lam, mu, t);
    if (sum != ell(lam, mu))
        return "sum of ell_t differs from ell for " + to_string(lam) + ", " + to_string(mu);
    return {};
}

std::string leq_via_ell_t(Rng& rng)
{
    auto mu = random_diagram(rng, 6, -8, 8);
    std::vector<Coord> b(mu.dots().begin(), mu.dots().end());
    for (auto& x : b)
        x -= ucoord(rng, -1, 4);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    if (b.size() != mu.size())
        return {};
    WeightDiagram lam(b);
    bool all_nonneg = true;
    for (Coord t = std::min(mu.front(), lam.front()); t <= std::max(mu.back(), lam.back()); ++t)
        all_nonneg = all_nonneg && ell_t(lam, mu, t) >= 0;
    if (leq(mu, lam) != all_nonneg)
        return "leq disagrees with ell_t for " + to_string(mu) + " vs " + to_string(lam);
    return {};
}

std::string odd_run_parity(Rng& rng)
{
    auto d = random_diagram(rng, 12, -10, 10);
    if ((static_cast<int>(d.size()) - odd_run_count(d)) % 2 != 0)
        return "n - o odd for " + to_string(d);
    return {};
}

std::string atypicality_from_runs(Rng& rng)
{
    auto d = random_diagram(rng, 12, -10, 10);
    if (atypicality(d) != static_cast<int>(d.size() - runs(d).parts.size()))
        return "atypicality mismatch for " + to_string(d);
    return {};
}

std::string diagram_equivariance(Rng& rng)
{
    auto mu = random_diagram(rng, 8, -10, 10);
    auto lam = shift(mu, -ucoord(rng, 0, 6));
    const Coord c = ucoord(rng, -1000, 1000);
    auto m2 = shift(mu, c);
    if (runs(m2) != runs(mu) || atypicality(m2) != atypicality(mu) || odd_run_count(m2) != odd_run_count(mu))
        return "run data not shift invariant for " + to_string(mu);
    if (ell(shift(lam, c), m2) != ell(lam, mu))
        return "ell not shift invariant for " + to_string(mu);
    return {};
}

// --- moves -----------------------------------------------------------------

std::string move_deltas(Rng& rng)
{
    auto f = AllowableFunction::identity(random_typical(rng, 5));
    const int steps = uniform(rng, 1, 8);
    for (int s = 0; s < steps; ++s) {
        auto moves = applicable_moves(f);
        if (moves.empty())
            break;
        const auto m = moves[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(moves.size()) - 1))];
        auto g = apply_move(f, m);
        const auto de = ell(g.target(), g.source()) - ell(f.target(), f.source());
        const auto dl = leapfrog_count(g) - leapfrog_count(f);
        const auto dd = degree(g) - degree(f);
        const bool ok = (m.kind == MoveKind::Move1 && de == 0 && dl == 0 && dd == 0) ||
                        (m.kind == MoveKind::Move2 && de == 2 && dl == 1 && dd == 0) ||
                        (m.kind == MoveKind::Move3 && de == 2 && dl == 0 && dd == 1);
        if (!ok)
            return to_string(m) + " gave deltas (" + std::to_string(de) + "," + std::to_string(dl) + ")";
        f = g;
    }
    if (!is_allowable(f))
        return "move walk result not allowable: " + render_ascii(f);
    return {};
}

std::string enumerated_well_formed(Rng& rng)
{
    auto mu = random_diagram(rng, 5, 0, 12);
    const int D = uniform(rng, 0, 6);
    for (const auto& [d, fs] : enumerate_allowable(mu, D)) {
        for (const auto& f : fs) {
            for (std::size_t i = 0; i < f.source().size(); ++i)
                if (f.pairing()[i] > f.source()[i])
                    return "f(a) > a in " + render_ascii(f);
            const auto len = ell(f.target(), f.source());
            if (!leq(mu, f.target()) || len % 2 != 0 || degree(f) != d || d < 0)
                return "malformed function at degree " + std::to_string(d) + " for " + to_string(mu);
        }
    }
    return {};
}

std::string enumeration_matches_resolve(Rng& rng)
{
    auto mu = random_diagram(rng, 6, 0, 12);
    const int D = uniform(rng, 0, 8);
    auto fs = enumerate_allowable(mu, D);
    auto r = resolve(mu, D);
    for (int d = 0; d <= D; ++d) {
        SummandMap m;
        for (const auto& f : fs[d])
            ++m[f.target()];
        if (m != r.terms[static_cast<std::size_t>(d)].summands)
            return "degree " + std::to_string(d) + " differs for " + to_string(mu);
    }
    return {};
}

std::string reduction_certificates(Rng& rng)
{
    auto mu = random_diagram(rng, 4, 0, 10);
    const int D = uniform(rng, 0, 5);
    std::vector<AllowableFunction> pool;
    for (auto& [d, fs] : enumerate_allowable(mu, D))
        pool.insert(pool.end(), fs.begin(), fs.end());
    const auto& f = pool[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(pool.size()) - 1))];
    auto cert = reduce_to_identity(f);
    if (!cert)
        return "no reduction for " + render_ascii(f);
    if (!replay(*cert).same_function(f))
        return "replay differs for " + render_ascii(f);
    return {};
}

std::string crossing_counts(Rng& rng)
{
    auto src = random_diagram(rng, 12, -20, 20);
    auto tgt = shift(random_diagram(rng, 12, -20, 20), -100);
    if (tgt.size() != src.size())
        tgt = shift(src, -100);
    std::vector<Coord> pairing(tgt.dots().begin(), tgt.dots().end());
    std::shuffle(pairing.begin(), pairing.end(), rng);
    AllowableFunction f(src, tgt, pairing);
    oracle::Arrows arrows;
    for (std::size_t i = 0; i < src.size(); ++i)
        arrows.emplace_back(src[i], pairing[i]);
    const auto expect = oracle::crossings(arrows);
    if (leapfrog_count(f) != expect || leapfrog_count_merge(f) != expect)
        return "crossing counts disagree";
    return {};
}

// --- resolution ------------------------------------------------------------

std::string degree_theorem(Rng& rng)
{
    auto mu = random_diagram(rng, 6, 0, 12);
    const int D = uniform(rng, 0, 8);
    auto lab = resolve_with_functions(mu, D);
    for (const auto& t : lab.terms)
        for (const auto& f : t.functions)
            if (ell(f.target(), mu) / 2 - leapfrog_count(f) != t.degree)
                return "degree formula fails for " + to_string(mu);
    if (lab.counts() != resolve(mu, D))
        return "labelled counts differ for " + to_string(mu);
    return {};
}

std::string order_independence(Rng& rng)
{
    auto mu = random_diagram(rng, 5, 0, 12);
    const int D = uniform(rng, 0, 8);
    const auto seed = rng();
    if (resolve(mu, D, make_random_chooser(seed)) != resolve(mu, D))
        return "chooser seed " + std::to_string(seed) + " changes " + to_string(mu);
    return {};
}

std::string isolated_dots(Rng& rng)
{
    auto mu = random_diagram(rng, 6, 0, 12);
    const int D = uniform(rng, 0, 8);
    auto r = resolve(mu, D);
    for (Coord k : mu.dots()) {
        if (!is_isolated(mu, k))
            continue;
        for (const auto& t : r.terms)
            for (const auto& [lam, m] : t.summands)
                if (!lam.has_dot(k) || !is_left_isolated(lam, k))
                    return to_string(lam) + " lacks left-isolated " + std::to_string(k);
    }
    return {};
}

std::string resolve_equivariance(Rng& rng)
{
    auto mu = random_diagram(rng, 6, 0, 12);
    const int D = uniform(rng, 0, 8);
    const Coord c = ucoord(rng, -1000, 1000);
    auto a = resolve(mu, D);
    auto b = resolve(shift(mu, c), D);
    for (int d = 0; d <= D; ++d) {
        SummandMap m;
        for (const auto& [lam, k] : a.terms[static_cast<std::size_t>(d)].summands)
            m.emplace(shift(lam, c), k);
        if (m != b.terms[static_cast<std::size_t>(d)].summands)
            return "shift by " + std::to_string(c) + " breaks " + to_string(mu);
    }
    return {};
}

std::string separation_independence(Rng& rng)
{
    auto pi = random_composition(rng, 6);
    const int D = uniform(rng, 0, 8);
    auto a = summand_counts(resolve(spaced(rng, pi), D));
    auto b = summand_counts(resolve(spaced(rng, pi), D));
    if (a != b)
        return "gaps change counts for runs " + to_string(pi);
    return {};
}

std::string run_multiset(Rng& rng)
{
    auto pi = random_composition(rng, 6);
    auto perm = pi;
    std::shuffle(perm.parts.begin(), perm.parts.end(), rng);
    const int D = uniform(rng, 0, 8);
    if (summand_counts(resolve(spaced(rng, pi), D)) != summand_counts(resolve(spaced(rng, perm), D)))
        return "run order changes counts for " + to_string(pi);
    return {};
}

std::string step2a_recursion(Rng& rng)
{
    auto mu = random_diagram(rng, 6, 0, 12);
    const int D = uniform(rng, 1, 8);
    auto plan = plan_step(mu);
    const auto* a = std::get_if<Step2a>(&plan);
    if (!a)
        return {};
    auto s = summand_counts(resolve(mu, D));
    auto s_nu = summand_counts(resolve(a->nu, D));
    auto s_pr = summand_counts(resolve(a->mu_prime, D - 1));
    for (int d = 0; d <= D; ++d) {
        const auto want = s_nu[static_cast<std::size_t>(d)] + (d ? s_pr[static_cast<std::size_t>(d - 1)] : 0);
        if (s[static_cast<std::size_t>(d)] != want)
            return "recursion fails at degree " + std::to_string(d) + " for " + to_string(mu);
    }
    return {};
}

std::string summands_above_mu(Rng& rng)
{
    auto mu = random_diagram(rng, 6, 0, 12);
    const int D = uniform(rng, 0, 8);
    for (const auto& t : resolve(mu, D).terms)
        for (const auto& [lam, m] : t.summands)
            if (!leq(mu, lam) || m <= 0)
                return to_string(lam) + " not above " + to_string(mu);
    return {};
}

// --- series ----------------------------------------------------------------

std::string closed_form(Rng& rng)
{
    const int r = uniform(rng, 0, 30);
    if (f_poly(r) != f_poly_closed(r))
        return "closed form differs at r=" + std::to_string(r);
    if (f_poly(r).coeffs() != oracle::f_coeffs(r))
        return "recursion differs from reference at r=" + std::to_string(r);
    if (f_poly(r).eval_at_one() <= 0)
        return "f_r(1) <= 0 at r=" + std::to_string(r);
    return {};
}

std::string series_matches_resolve(Rng& rng)
{
    auto pi = random_composition(rng, 6);
    const int D = uniform(rng, 0, 8);
    auto s = series_coeffs(pi, D).coeffs;
    if (s != summand_counts(resolve(spaced(rng, pi), D)))
        return "series differs from resolve for " + to_string(pi);
    if (s != oracle::series(pi.parts, D))
        return "series differs from binomial reference for " + to_string(pi);
    return {};
}

std::string product_law(Rng& rng)
{
    auto pi = random_composition(rng, 12);
    const int D = uniform(rng, 0, 20);
    auto prod = truncate(IntPolynomial::constant(1), D);
    for (int p : pi.parts)
        prod = truncated_product(prod, series_coeffs(RunComposition{{p}}, D));
    if (prod != series_coeffs(pi, D))
        return "product law fails for " + to_string(pi);
    return {};
}

std::string permutation_invariance(Rng& rng)
{
    auto pi = random_composition(rng, 12);
    auto perm = pi;
    std::shuffle(perm.parts.begin(), perm.parts.end(), rng);
    const int D = uniform(rng, 0, 20);
    if (series_coeffs(pi, D) != series_coeffs(perm, D))
        return "series depends on part order for " + to_string(pi);
    return {};
}

std::string series_positive(Rng& rng)
{
    auto pi = random_composition(rng, 12);
    auto s = series_coeffs(pi, uniform(rng, 0, 20));
    if (s.coeffs[0] != 1 || std::any_of(s.coeffs.begin(), s.coeffs.end(), [](auto c) { return c < 0; }))
        return "bad series for " + to_string(pi);
    return {};
}

std::string complexity_identity(Rng& rng)
{
    const std::int64_t n = uniform(rng, 0, 20);
    std::int64_t o = uniform(rng, 0, static_cast<int>(n));
    if ((n - o) % 2)
        o = o > 0 ? o - 1 : o + 1;
    if (o > n)
        return {};
    if (complexity(n, o) != rank_variety_dim(n, (n - o) / 2) + 0)
        return "complexity differs at n=" + std::to_string(n) + " o=" + std::to_string(o);
    if (complexity(n, o) != choose2(n) - choose2(o))
        return "complexity formula at n=" + std::to_string(n);
    return {};
}

std::string support_dim(Rng& rng)
{
    auto pi = random_composition(rng, 20);
    const std::int64_t n = pi.total();
    const std::int64_t o = pi.odd_parts();
    if (f_support_dim(n, o) != z_complexity(pi) || growth_exponent(pi) != (n - o) / 2)
        return "support/growth mismatch for " + to_string(pi);
    return {};
}

// --- service ---------------------------------------------------------------

std::string cli_http_identical(Rng& rng)
{
    static service::Api api{service::JobConfig{}};
    std::vector<std::string> args = {"kacres"};
    service::Json req;
    std::string path;
    switch (uniform(rng, 0, 2)) {
    case 0: {
        auto mu = random_diagram(rng, 5, -4, 8);
        const int D = uniform(rng, 0, 6);
        args.insert(args.end(), {"resolve", "--mu", to_string(mu), "--max-degree", std::to_string(D)});
        req = {{"mu", to_string(mu)}, {"maxDegree", D}};
        path = "/api/resolve";
        break;
    }
    case 1: {
        auto pi = random_composition(rng, 8);
        const int D = uniform(rng, 0, 10);
        std::string runs;
        for (std::size_t i = 0; i < pi.parts.size(); ++i)
            runs += (i ? "," : "") + std::to_string(pi.parts[i]);
        args.insert(args.end(), {"series", "--runs", runs, "--max-degree", std::to_string(D)});
        req = {{"runs", runs}, {"maxDegree", D}};
        path = "/api/series";
        break;
    }
    default: {
        auto mu = random_diagram(rng, 4, -2, 6);
        const int D = uniform(rng, 0, 4);
        args.insert(args.end(), {"functions", "--mu", to_string(mu), "--max-degree", std::to_string(D)});
        req = {{"mu", to_string(mu)}, {"maxDegree", D}};
        path = "/api/functions";
        break;
    }
    }
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = service::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    auto reply = service::dispatch(api, "POST", path, req.dump());
    if (code != 0 || reply.status != 200 || out.str() != reply.body)
        return "CLI and HTTP bodies differ for " + req.dump();
    return {};
}

std::string cache_round_trip(Rng& rng)
{
    auto mu = random_diagram(rng, 5, -3, 9);
    const int D = uniform(rng, 0, 8);
    const auto path = std::filesystem::temp_directory_path() / ("kacres-law-" + std::to_string(rng()) + ".jsonl");
    Resolver cold;
    auto a = cold.resolve(mu, D);
    service::save_memo_cache(cold, path);
    Resolver warm;
    std::ostringstream warn;
    service::load_memo_cache(warm, path, warn);
    std::filesystem::remove(path);
    const auto before = warm.memo_size();
    auto b = warm.resolve(mu, D);
    if (!warn.str().empty())
        return "warnings while loading: " + warn.str();
    if (a != b)
        return "warm result differs for " + to_string(mu);
    if (warm.memo_size() != before)
        return "warm cache missed for " + to_string(mu);
    return {};
}

std::string concurrent_identical(Rng& rng)
{
    static service::Api api{service::JobConfig{}};
    auto mu = random_diagram(rng, 6, 0, 12);
    const service::Json req{{"mu", service::to_json(mu)}, {"maxDegree", uniform(rng, 0, 8)}};
    std::vector<std::string> bodies(3);
    std::vector<std::thread> threads;
    for (auto& b : bodies)
        threads.emplace_back([&b, &req] { b = service::dispatch(api, "POST", "/api/resolve", req.dump()).body; });
    for (auto& t : threads)
        t.join();
    if (bodies[0] != bodies[1] || bodies[1] != bodies[2])
        return "concurrent bodies differ for " + to_string(mu);
    return {};
}

} // namespace

const std::vector<Law>& all()
{
    static const std::vector<Law> laws = {
        {"weight_diagrams", "dominant weight round trip", dominant_round_trip},
        {"weight_diagrams", "ell as a sum of ell_t", ell_two_formulas},
        {"weight_diagrams", "leq iff every ell_t is nonnegative", leq_via_ell_t},
        {"weight_diagrams", "n minus odd runs is even", odd_run_parity},
        {"weight_diagrams", "atypicality is n minus run count", atypicality_from_runs},
        {"weight_diagrams", "diagram data is translation invariant", diagram_equivariance},
        {"moves", "move arithmetic deltas and allowability", move_deltas},
        {"moves", "enumerated functions are well formed", enumerated_well_formed},
        {"moves", "enumeration targets match resolve", enumeration_matches_resolve},
        {"moves", "reduction certificates replay", reduction_certificates},
        {"moves", "pair scan and merge count agree", crossing_counts},
        {"resolution", "degree formula for labelled summands", degree_theorem},
        {"resolution", "random choosers agree with default", order_independence},
        {"resolution", "isolated dots stay left isolated", isolated_dots},
        {"resolution", "resolve commutes with shifts", resolve_equivariance},
        {"resolution", "gaps between runs do not matter", separation_independence},
        {"resolution", "run order does not matter", run_multiset},
        {"resolution", "Step 2a count recursion", step2a_recursion},
        {"resolution", "summands lie above mu", summands_above_mu},
        {"series", "closed form equals recursion", closed_form},
        {"series", "series equals resolve counts", series_matches_resolve},
        {"series", "product law", product_law},
        {"series", "part order invariance", permutation_invariance},
        {"series", "coefficients nonnegative with s_0 = 1", series_positive},
        {"series", "complexity equals rank variety dimension", complexity_identity},
        {"series", "support dimension and growth exponent", support_dim},
        {"service_cli", "CLI and HTTP bodies are identical", cli_http_identical},
        {"service_cli", "memo cache round trip", cache_round_trip},
        {"service_cli", "concurrent identical requests", concurrent_identical},
    };
    return laws;
}

Outcome run(const Law& law, std::uint64_t seed, int cases)
{
    Outcome out{law.name, 0, {}, seed};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++out.cases;
        try {
            out.failure = law.check(rng);
        } catch (const std::exception& e) {
            out.failure = std::string("exception: ") + e.what();
        }
        if (!out.failure.empty()) {
            out.failure = "case " + std::to_string(i) + ": " + out.failure;
            break;
        }
    }
    return out;
}

} // namespace laws
