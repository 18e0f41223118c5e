#include "kacres/verify.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "kacres/errors.hpp"
#include "kacres/series.hpp"

namespace kacres::service {

std::vector<RunComposition> compositions(int n)
{
    std::vector<RunComposition> out;
    if (n <= 0)
        return out;
    // Bit i of mask set means a cut after position i.
    for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
        std::vector<int> parts;
        int current = 1;
        for (int i = 0; i < n - 1; ++i) {
            if (mask & (1u << i)) {
                parts.push_back(current);
                current = 1;
            } else {
                ++current;
            }
        }
        parts.push_back(current);
        out.push_back(RunComposition{std::move(parts)});
    }
    std::sort(out.begin(), out.end(), [](const RunComposition& a, const RunComposition& b) { return a.parts < b.parts; });
    return out;
}

WeightDiagram diagram_with_runs(const RunComposition& pi, std::vector<Coord> gaps, Coord start)
{
    if (pi.parts.empty())
        throw DomainError("composition must have at least one part");
    if (gaps.empty())
        gaps = {1};
    std::vector<Coord> dots;
    Coord x = start;
    // Runs are listed right-to-left, so build from the back.
    for (std::size_t r = pi.parts.size(); r-- > 0;) {
        for (int k = 0; k < pi.parts[r]; ++k)
            dots.push_back(x++);
        if (r > 0) {
            const std::size_t g = pi.parts.size() - 1 - r;
            const Coord gap = gaps[std::min(g, gaps.size() - 1)];
            if (gap < 1)
                throw DomainError("gaps between runs must be at least 1");
            x += gap;
        }
    }
    return WeightDiagram(std::move(dots));
}

bool VerificationReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& check_names()
{
    static const std::vector<std::string> names = {
        "oracle-triangle", "degree-theorem", "order-independence", "isolated-dots", "equivariance",
        "separation",      "run-multiset",   "step2a-recursion",   "partial-order", "product-law",
        "f-poly",          "formulas",       "reduction",
    };
    return names;
}

namespace {

using Counts = std::vector<Multiplicity>;

Json counterexample(const WeightDiagram& mu, std::optional<int> degree, std::string detail)
{
    return Json{{"mu", to_json(mu)},
                {"degree", degree ? Json(*degree) : Json(nullptr)},
                {"detail", std::move(detail)}};
}

std::optional<int> first_difference(const Counts& a, const Counts& b)
{
    for (std::size_t d = 0; d < std::max(a.size(), b.size()); ++d) {
        if (d >= a.size() || d >= b.size() || a[d] != b[d])
            return static_cast<int>(d);
    }
    return std::nullopt;
}

std::optional<int> first_difference(const Resolution& a, const Resolution& b)
{
    for (std::size_t d = 0; d < std::max(a.terms.size(), b.terms.size()); ++d) {
        if (d >= a.terms.size() || d >= b.terms.size() || a.terms[d] != b.terms[d])
            return static_cast<int>(d);
    }
    return std::nullopt;
}

std::string join(const Counts& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

class Runner {
public:
    Runner(const VerifyOptions& opt, Resolver& resolver)
        : opt_(opt)
        , resolver_(resolver)
    {
        for (int n = 1; n <= opt.max_n; ++n) {
            for (auto& pi : compositions(n))
                corpus_.push_back(std::move(pi));
        }
    }

    VerificationReport run()
    {
        for (const auto& name : opt_.checks) {
            if (std::find(check_names().begin(), check_names().end(), name) == check_names().end())
                throw ParseError("unknown check '" + name + "'");
        }
        VerificationReport report;
        report.corpus = Json{{"max_n", opt_.max_n},
                             {"max_degree", opt_.max_degree},
                             {"compositions", corpus_.size()},
                             {"trials", opt_.trials},
                             {"seed", opt_.seed}};
        if (opt_.log)
            *opt_.log << "verify: seed=" << opt_.seed << " max_n=" << opt_.max_n << " max_degree=" << opt_.max_degree
                      << " trials=" << opt_.trials << "\n";
        for (const auto& name : check_names()) {
            if (!opt_.checks.empty() && std::find(opt_.checks.begin(), opt_.checks.end(), name) == opt_.checks.end())
                continue;
            CheckResult r;
            r.name = name;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                dispatch(name, r);
            } catch (const std::exception& e) {
                r.passed = false;
                if (!r.counterexample)
                    r.counterexample = Json{{"mu", nullptr}, {"degree", nullptr}, {"detail", e.what()}};
            }
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (opt_.log)
                *opt_.log << "verify: " << name << (r.passed ? " PASS" : " FAIL") << " (" << r.cases << " cases)\n";
            report.checks.push_back(std::move(r));
        }
        return report;
    }

private:
    LabelledResolution labelled(const WeightDiagram& mu, int depth)
    {
        if (opt_.labelled_source)
            return opt_.labelled_source(mu, depth);
        return resolver_.resolve_with_functions(mu, depth);
    }

    static void fail(CheckResult& r, Json cx)
    {
        if (r.passed) {
            r.passed = false;
            r.counterexample = std::move(cx);
        }
    }

    void dispatch(const std::string& name, CheckResult& r)
    {
        if (name == "oracle-triangle")
            oracle_triangle(r);
        else if (name == "degree-theorem")
            degree_theorem(r);
        else if (name == "order-independence")
            order_independence(r);
        else if (name == "isolated-dots")
            isolated_dots(r);
        else if (name == "equivariance")
            equivariance(r);
        else if (name == "separation")
            separation(r);
        else if (name == "run-multiset")
            run_multiset(r);
        else if (name == "step2a-recursion")
            step2a_recursion(r);
        else if (name == "partial-order")
            partial_order(r);
        else if (name == "product-law")
            product_law(r);
        else if (name == "f-poly")
            f_poly_check(r);
        else if (name == "formulas")
            formulas(r);
        else if (name == "reduction")
            reduction(r);
    }

    void oracle_triangle(CheckResult& r)
    {
        const int D = opt_.max_degree;
        for (const auto& pi : corpus_) {
            const auto mu = diagram_with_runs(pi);
            const auto a = summand_counts(resolver_.resolve(mu, D));
            const auto b = series_coeffs(pi, D).coeffs;
            const auto c = summand_counts(labelled(mu, D).counts());
            ++r.cases;
            if (auto d = first_difference(a, b))
                fail(r, counterexample(mu, d, "resolve " + join(a) + " vs series " + join(b)));
            else if (auto d2 = first_difference(a, c))
                fail(r, counterexample(mu, d2, "resolve " + join(a) + " vs enumeration " + join(c)));
        }
    }

    void degree_theorem(CheckResult& r)
    {
        const int D = opt_.max_degree;
        for (const auto& pi : corpus_) {
            const auto mu = diagram_with_runs(pi);
            const auto lab = labelled(mu, D);
            for (const auto& term : lab.terms) {
                for (const auto& f : term.functions) {
                    ++r.cases;
                    const auto len = ell(f.target(), f.source());
                    std::string why;
                    if (f.source() != mu)
                        why = "source differs from mu";
                    else if (!leq(mu, f.target()))
                        why = "target not above mu";
                    else if (len % 2 != 0)
                        why = "odd relative length";
                    else if (len / 2 - leapfrog_count(f) != term.degree)
                        why = "ell/2 - L = " + std::to_string(len / 2 - leapfrog_count(f)) + " for " +
                              to_string(f.target());
                    if (!why.empty()) {
                        fail(r, counterexample(mu, term.degree, why));
                        break;
                    }
                }
            }
            if (lab.counts() != resolver_.resolve(mu, D))
                fail(r, counterexample(mu, first_difference(lab.counts(), resolver_.resolve(mu, D)),
                                       "labelled targets differ from resolve"));
        }
    }

    void order_independence(CheckResult& r)
    {
        const int D = opt_.max_degree;
        std::uint64_t k = 0;
        for (const auto& pi : corpus_) {
            const auto mu = diagram_with_runs(pi);
            if (atypicality(mu) == 0)
                continue;
            const auto reference = resolver_.resolve(mu, D);
            for (int t = 0; t < opt_.trials; ++t, ++k) {
                ++r.cases;
                const auto seed = opt_.seed + k;
                auto got = resolver_.resolve(mu, D, make_random_chooser(seed));
                if (got != reference) {
                    fail(r, counterexample(mu, first_difference(got, reference),
                                           "chooser seed " + std::to_string(seed) + " differs"));
                    break;
                }
            }
        }
    }

    std::vector<WeightDiagram> spread_corpus()
    {
        std::vector<WeightDiagram> out;
        std::mt19937_64 rng(opt_.seed);
        for (const auto& pi : corpus_) {
            out.push_back(diagram_with_runs(pi));
            std::vector<Coord> gaps(pi.parts.size(), 1);
            for (auto& g : gaps)
                g = std::uniform_int_distribution<Coord>(1, 4)(rng);
            out.push_back(diagram_with_runs(pi, gaps, std::uniform_int_distribution<Coord>(-6, 6)(rng)));
        }
        return out;
    }

    void isolated_dots(CheckResult& r)
    {
        const int D = opt_.max_degree;
        for (const auto& mu : spread_corpus()) {
            const auto res = resolver_.resolve(mu, D);
            for (Coord k : mu.dots()) {
                if (!is_isolated(mu, k))
                    continue;
                for (const auto& t : res.terms) {
                    for (const auto& [lam, m] : t.summands) {
                        ++r.cases;
                        if (!lam.has_dot(k) || !is_left_isolated(lam, k))
                            fail(r, counterexample(mu, t.degree,
                                                   to_string(lam) + " lacks a left-isolated dot at " +
                                                       std::to_string(k)));
                    }
                }
            }
        }
    }

    void equivariance(CheckResult& r)
    {
        const int D = opt_.max_degree;
        for (const auto& pi : corpus_) {
            const auto mu = diagram_with_runs(pi);
            const auto base = resolver_.resolve(mu, D);
            for (Coord c : {Coord{-7}, Coord{3}, Coord{11}}) {
                ++r.cases;
                const auto moved = resolver_.resolve(shift(mu, c), D);
                Resolution expect{shift(mu, c), D, {}};
                for (const auto& t : base.terms) {
                    ResolutionTerm s{t.degree, {}};
                    for (const auto& [lam, m] : t.summands)
                        s.summands.emplace(shift(lam, c), m);
                    expect.terms.push_back(std::move(s));
                }
                if (moved != expect)
                    fail(r, counterexample(mu, first_difference(moved, expect), "shift by " + std::to_string(c)));
            }
        }
    }

    void separation(CheckResult& r)
    {
        const int D = opt_.max_degree;
        std::mt19937_64 rng(opt_.seed ^ 0x5eedu);
        for (const auto& pi : corpus_) {
            const auto base = summand_counts(resolver_.resolve(diagram_with_runs(pi), D));
            for (int v = 0; v < 3; ++v) {
                std::vector<Coord> gaps(pi.parts.size(), 1);
                for (auto& g : gaps)
                    g = std::uniform_int_distribution<Coord>(1, 5)(rng);
                const auto mu = diagram_with_runs(pi, gaps);
                ++r.cases;
                const auto got = summand_counts(resolver_.resolve(mu, D));
                if (auto d = first_difference(base, got))
                    fail(r, counterexample(mu, d, "counts " + join(got) + " differ from tight placement " + join(base)));
            }
        }
    }

    void run_multiset(CheckResult& r)
    {
        const int D = opt_.max_degree;
        for (const auto& pi : corpus_) {
            auto sorted = pi.parts;
            std::sort(sorted.begin(), sorted.end());
            const auto base = summand_counts(resolver_.resolve(diagram_with_runs(RunComposition{sorted}), D));
            const auto mu = diagram_with_runs(pi);
            ++r.cases;
            const auto got = summand_counts(resolver_.resolve(mu, D));
            if (auto d = first_difference(base, got))
                fail(r, counterexample(mu, d, "counts depend on run order"));
        }
    }

    void step2a_recursion(CheckResult& r)
    {
        const int D = opt_.max_degree;
        for (const auto& mu : spread_corpus()) {
            const auto plan = plan_step(mu);
            const auto* a = std::get_if<Step2a>(&plan);
            if (!a)
                continue;
            const auto s = summand_counts(resolver_.resolve(mu, D));
            const auto s_nu = summand_counts(resolver_.resolve(a->nu, D));
            const auto s_prime = summand_counts(resolver_.resolve(a->mu_prime, D));
            for (int d = 0; d <= D; ++d) {
                ++r.cases;
                const auto expect = s_nu[static_cast<std::size_t>(d)] + (d ? s_prime[static_cast<std::size_t>(d - 1)] : 0);
                if (s[static_cast<std::size_t>(d)] != expect) {
                    fail(r, counterexample(mu, d, "s_d(mu) != s_d(nu) + s_{d-1}(mu')"));
                    break;
                }
            }
        }
    }

    void partial_order(CheckResult& r)
    {
        const int D = opt_.max_degree;
        for (const auto& mu : spread_corpus()) {
            for (const auto& t : resolver_.resolve(mu, D).terms) {
                for (const auto& [lam, m] : t.summands) {
                    ++r.cases;
                    if (!leq(mu, lam))
                        fail(r, counterexample(mu, t.degree, to_string(lam) + " is not above mu"));
                }
            }
        }
    }

    void product_law(CheckResult& r)
    {
        const int D = opt_.max_degree;
        for (const auto& pi : corpus_) {
            ++r.cases;
            TruncatedSeries prod = truncate(IntPolynomial::constant(1), D);
            for (int part : pi.parts)
                prod = truncated_product(prod, series_coeffs(RunComposition{{part}}, D));
            const auto s = series_coeffs(pi, D);
            if (auto d = first_difference(prod.coeffs, s.coeffs))
                fail(r, counterexample(diagram_with_runs(pi), d, "S_pi differs from product of its runs"));
            if (s.coeffs[0] != 1 || std::any_of(s.coeffs.begin(), s.coeffs.end(), [](auto c) { return c < 0; }))
                fail(r, counterexample(diagram_with_runs(pi), 0, "series must start at 1 with nonnegative terms"));
        }
    }

    void f_poly_check(CheckResult& r)
    {
        for (int k = 0; k <= 30; ++k) {
            ++r.cases;
            const auto rec = f_poly(k);
            if (rec != f_poly_closed(k))
                fail(r, Json{{"mu", nullptr}, {"degree", k}, {"detail", "recursion and closed form differ"}});
            if (rec.eval_at_one() <= 0)
                fail(r, Json{{"mu", nullptr}, {"degree", k}, {"detail", "f_r(1) <= 0"}});
        }
        if (f_poly(2) != IntPolynomial::constant(1))
            fail(r, Json{{"mu", nullptr}, {"degree", 2}, {"detail", "f_2 != 1"}});
    }

    void formulas(CheckResult& r)
    {
        for (std::int64_t n = 0; n <= 20; ++n) {
            for (std::int64_t o = n % 2; o <= n; o += 2) {
                ++r.cases;
                if (complexity(n, o) != rank_variety_dim(n, (n - o) / 2))
                    fail(r, Json{{"n", n}, {"o", o}, {"detail", "complexity != rank variety dimension"}});
                if (n >= 1) {
                    // Any composition with n dots and o odd parts: o ones and a part n - o when nonzero.
                    std::vector<int> parts(static_cast<std::size_t>(o), 1);
                    if (n - o > 0)
                        parts.push_back(static_cast<int>(n - o));
                    if (f_support_dim(n, o) != z_complexity(RunComposition{parts}))
                        fail(r, Json{{"n", n}, {"o", o}, {"detail", "f_support_dim != z_complexity"}});
                }
            }
        }
    }

    void reduction(CheckResult& r)
    {
        const int D = std::min(opt_.max_degree, 5);
        for (const auto& pi : corpus_) {
            if (pi.total() > 4)
                continue;
            const auto mu = diagram_with_runs(pi);
            for (const auto& term : labelled(mu, D).terms) {
                for (const auto& f : term.functions) {
                    ++r.cases;
                    auto cert = reduce_to_identity(f);
                    if (!cert) {
                        fail(r, counterexample(mu, term.degree, "no reduction found for " + to_string(f.target())));
                        continue;
                    }
                    if (!replay(*cert).same_function(f))
                        fail(r, counterexample(mu, term.degree, "replayed certificate differs"));
                }
            }
        }
    }

    const VerifyOptions& opt_;
    Resolver& resolver_;
    std::vector<RunComposition> corpus_;
};

} // namespace

VerificationReport run_verification(const VerifyOptions& options, Resolver& resolver)
{
    return Runner(options, resolver).run();
}

Json to_json(const VerificationReport& report)
{
    Json checks = Json::array();
    for (const auto& c : report.checks) {
        Json j{{"name", c.name}, {"passed", c.passed}, {"cases", c.cases}, {"seconds", c.seconds}};
        j["counterexample"] = c.counterexample ? *c.counterexample : Json(nullptr);
        checks.push_back(std::move(j));
    }
    return Json{{"schema_version", kSchemaVersion},
                {"passed", report.passed()},
                {"corpus", report.corpus},
                {"checks", std::move(checks)}};
}

std::string render_table(const VerificationReport& report)
{
    std::ostringstream os;
    os << std::left << std::setw(22) << "check" << std::setw(8) << "result" << std::right << std::setw(10) << "cases"
       << std::setw(10) << "seconds" << "\n";
    for (const auto& c : report.checks) {
        os << std::left << std::setw(22) << c.name << std::setw(8) << (c.passed ? "PASS" : "FAIL") << std::right
           << std::setw(10) << c.cases << std::setw(10) << std::fixed << std::setprecision(2) << c.seconds << "\n";
        if (c.counterexample)
            os << "    counterexample: " << c.counterexample->dump() << "\n";
    }
    os << (report.passed() ? "all checks passed" : "some checks FAILED") << "\n";
    return os.str();
}

LabelledResolution flip_move2_arrow(LabelledResolution r)
{
    for (auto& term : r.terms) {
        for (auto& f : term.functions) {
            const bool leapt = std::any_of(f.trace().begin(), f.trace().end(),
                                           [](const MoveRecord& m) { return m.kind == MoveKind::Move2; });
            if (!leapt)
                continue;
            auto pairing = f.pairing();
            // Uncrossing a crossing keeps f(a) <= a and lowers L by one or more.
            bool done = false;
            for (std::size_t a = 0; a < pairing.size() && !done; ++a) {
                for (std::size_t b = a + 1; b < pairing.size() && !done; ++b) {
                    if (pairing[a] > pairing[b]) {
                        std::swap(pairing[a], pairing[b]);
                        done = true;
                    }
                }
            }
            f = AllowableFunction(f.source(), f.target(), std::move(pairing));
        }
    }
    return r;
}

} // namespace kacres::service
