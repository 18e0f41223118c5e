#include "kacres/resolution.hpp"

#include <algorithm>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <unordered_map>

#include "kacres/checked.hpp"
#include "kacres/errors.hpp"

namespace kacres {

WeightDiagram theta_projective(Coord j, const WeightDiagram& lam)
{
    if (!lam.has_dot(j - 1))
        throw PreconditionError("theta_projective: no dot at j-1=" + std::to_string(j - 1) + " in " + to_string(lam));
    if (lam.has_dot(j - 2))
        throw PreconditionError("theta_projective: dot at j-2=" + std::to_string(j - 2) + " in " + to_string(lam) +
                                " is outside the supported cases");
    if (!lam.has_dot(j))
        return lam.with_moved(j - 1, j);
    return lam.with_moved(j - 1, j - 2);
}

ThetaStandardResult theta_standard(Coord j, const WeightDiagram& lam)
{
    if (!lam.has_dot(j - 1))
        throw PreconditionError("theta_standard: no dot at j-1=" + std::to_string(j - 1) + " in " + to_string(lam));
    if (lam.has_dot(j))
        throw PreconditionError("theta_standard: dot at j=" + std::to_string(j) + " in " + to_string(lam) +
                                " is outside the supported cases");
    if (!lam.has_dot(j + 1))
        return ThetaSingle{lam.with_moved(j - 1, j)};
    return ThetaPair{lam.with_moved(j + 1, j), lam.with_moved(j - 1, j)};
}

std::string describe(const StepPlan& plan)
{
    struct Visitor {
        std::string operator()(const TypicalStep&) const { return "Typical"; }
        std::string operator()(const Step2a& s) const
        {
            return "Step2a(i=" + std::to_string(s.i) + ", j=" + std::to_string(s.j) + ", nu=" + to_string(s.nu) +
                   ", mu'=" + to_string(s.mu_prime) + ")";
        }
        std::string operator()(const Step2b& s) const
        {
            return "Step2b(i=" + std::to_string(s.i) + ", j=" + std::to_string(s.j) + ", nu=" + to_string(s.nu) + ")";
        }
    };
    return std::visit(Visitor{}, plan);
}

namespace {

bool is_pair_site(const WeightDiagram& mu, Coord i)
{
    return !mu.has_dot(i - 1) && mu.has_dot(i) && mu.has_dot(i + 1);
}

bool is_slide_site(const WeightDiagram& mu, Coord j)
{
    return !mu.has_dot(j - 2) && !mu.has_dot(j - 1) && mu.has_dot(j) && !mu.has_dot(j + 1);
}

Step2a make_2a(const WeightDiagram& mu, Coord j)
{
    Step2a s{j, j, mu.with_moved(j, j - 1), mu.with_moved(j + 1, j - 1)};
    // The standard-module rewrite must reproduce the pair (mu', mu).
    auto check = theta_standard(j, s.nu);
    const auto* pair = std::get_if<ThetaPair>(&check);
    if (!pair || pair->mu_prime != s.mu_prime || pair->mu_double_prime != mu)
        throw InternalError("Step 2a at j=" + std::to_string(j) + " inconsistent with theta_standard for " +
                            to_string(mu));
    return s;
}

Step2b make_2b(const WeightDiagram& mu, Coord i, Coord j)
{
    Step2b s{i, j, mu.with_moved(j, j - 1)};
    auto check = theta_standard(j, s.nu);
    const auto* single = std::get_if<ThetaSingle>(&check);
    if (!single || single->mu != mu)
        throw InternalError("Step 2b at j=" + std::to_string(j) + " inconsistent with theta_standard for " +
                            to_string(mu));
    return s;
}

std::vector<Coord> pair_sites(const WeightDiagram& mu)
{
    std::vector<Coord> out;
    for (Coord a : mu.dots()) {
        if (is_pair_site(mu, a))
            out.push_back(a);
    }
    return out;
}

} // namespace

StepPlan plan_step(const WeightDiagram& mu)
{
    const auto sites = pair_sites(mu);
    if (sites.empty())
        return TypicalStep{};
    const Coord i = sites.front();
    if (!mu.has_dot(i - 2))
        return make_2a(mu, i);
    for (auto it = mu.dots().rbegin(); it != mu.dots().rend(); ++it) {
        if (*it < i && is_slide_site(mu, *it))
            return make_2b(mu, i, *it);
    }
    throw InternalError("no admissible Step 2b slide for " + to_string(mu));
}

std::vector<StepPlan> valid_steps(const WeightDiagram& mu)
{
    std::vector<StepPlan> out;
    for (Coord i : pair_sites(mu)) {
        if (!mu.has_dot(i - 2)) {
            out.emplace_back(make_2a(mu, i));
            continue;
        }
        for (Coord j : mu.dots()) {
            if (j < i && is_slide_site(mu, j))
                out.emplace_back(make_2b(mu, i, j));
        }
    }
    return out;
}

std::string step_violation(const WeightDiagram& mu, Coord i, Coord j)
{
    auto at = [](Coord p) { return std::to_string(p); };
    if (mu.has_dot(i - 1))
        return "Step 1: need no dot at i-1=" + at(i - 1);
    if (!mu.has_dot(i) || !mu.has_dot(i + 1))
        return "Step 1: need dots at i=" + at(i) + " and i+1=" + at(i + 1);
    if (!mu.has_dot(i - 2)) {
        if (j != i)
            return "Step 2a: no dot at i-2, so j must equal i=" + at(i);
        return {};
    }
    if (j >= i)
        return "Step 2b: j must be smaller than i=" + at(i);
    if (mu.has_dot(j - 2))
        return "Step 2b: need no dot at j-2=" + at(j - 2);
    if (mu.has_dot(j - 1))
        return "Step 2b: need no dot at j-1=" + at(j - 1);
    if (!mu.has_dot(j))
        return "Step 2b: need a dot at j=" + at(j);
    if (mu.has_dot(j + 1))
        return "Step 2b: need no dot at j+1=" + at(j + 1);
    return {};
}

StepPlan plan_custom(const WeightDiagram& mu, Coord i, Coord j)
{
    if (auto why = step_violation(mu, i, j); !why.empty())
        throw PreconditionError(why);
    if (!mu.has_dot(i - 2))
        return make_2a(mu, i);
    return make_2b(mu, i, j);
}

StepChooser make_random_chooser(std::uint64_t seed)
{
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng](const WeightDiagram&, std::span<const StepPlan> options) -> StepChoice {
        std::vector<Coord> sites;
        for (const auto& p : options) {
            Coord i = std::visit(
                [](const auto& s) -> Coord {
                    if constexpr (std::is_same_v<std::decay_t<decltype(s)>, TypicalStep>)
                        return 0;
                    else
                        return s.i;
                },
                p);
            if (std::find(sites.begin(), sites.end(), i) == sites.end())
                sites.push_back(i);
        }
        if (sites.empty())
            throw InternalError("random chooser called without options");
        const Coord i = sites[std::uniform_int_distribution<std::size_t>(0, sites.size() - 1)(*rng)];
        std::vector<Coord> js;
        for (const auto& p : options) {
            if (const auto* a = std::get_if<Step2a>(&p); a && a->i == i)
                return {i, a->j};
            if (const auto* b = std::get_if<Step2b>(&p); b && b->i == i)
                js.push_back(b->j);
        }
        std::sort(js.begin(), js.end());
        if (std::uniform_int_distribution<int>(0, 3)(*rng) != 0)
            return {i, js.back()};
        return {i, js[std::uniform_int_distribution<std::size_t>(0, js.size() - 1)(*rng)]};
    };
}

Multiplicity ResolutionTerm::total() const
{
    Multiplicity s = 0;
    for (const auto& [lam, m] : summands)
        s = checked_add(s, m, "summand count");
    return s;
}

std::vector<Multiplicity> summand_counts(const Resolution& r)
{
    std::vector<Multiplicity> out;
    out.reserve(r.terms.size());
    for (const auto& t : r.terms)
        out.push_back(t.total());
    return out;
}

Resolution LabelledResolution::counts() const
{
    Resolution r{mu, max_degree, {}};
    for (const auto& t : terms) {
        ResolutionTerm term{t.degree, {}};
        for (const auto& f : t.functions) {
            auto& m = term.summands[f.target()];
            m = checked_add(m, 1, "multiplicity");
        }
        r.terms.push_back(std::move(term));
    }
    return r;
}

// ---------------------------------------------------------------------------

namespace {

using CountTerms = std::vector<SummandMap>;
using LabelTerms = std::vector<std::vector<AllowableFunction>>;

CountTerms shift_terms(const CountTerms& in, Coord c, int depth)
{
    CountTerms out(static_cast<std::size_t>(depth) + 1);
    for (int d = 0; d <= depth; ++d) {
        for (const auto& [lam, m] : in[static_cast<std::size_t>(d)])
            out[static_cast<std::size_t>(d)].emplace_hint(out[static_cast<std::size_t>(d)].end(), shift(lam, c), m);
    }
    return out;
}

LabelTerms shift_terms(const LabelTerms& in, Coord c, int depth)
{
    LabelTerms out(static_cast<std::size_t>(depth) + 1);
    for (int d = 0; d <= depth; ++d) {
        auto& dst = out[static_cast<std::size_t>(d)];
        dst.reserve(in[static_cast<std::size_t>(d)].size());
        for (const auto& f : in[static_cast<std::size_t>(d)])
            dst.push_back(c == 0 ? f : f.shifted(c));
    }
    return out;
}

void add_summand(SummandMap& into, const WeightDiagram& lam, Multiplicity m)
{
    auto& slot = into[lam];
    slot = checked_add(slot, m, "multiplicity");
}

template <class Terms>
struct MemoTable {
    struct Stored {
        int depth;
        Terms terms;
    };
    std::unordered_map<WeightDiagram, Stored> map;
    mutable std::shared_mutex mutex;
    bool locking = true;

    std::optional<Terms> lookup(const WeightDiagram& key, int depth) const
    {
        std::shared_lock lock(mutex, std::defer_lock);
        if (locking)
            lock.lock();
        auto it = map.find(key);
        if (it == map.end() || it->second.depth < depth)
            return std::nullopt;
        Terms out(it->second.terms.begin(), it->second.terms.begin() + depth + 1);
        return out;
    }

    void store(const WeightDiagram& key, int depth, const Terms& terms)
    {
        std::unique_lock lock(mutex, std::defer_lock);
        if (locking)
            lock.lock();
        auto it = map.find(key);
        if (it != map.end() && it->second.depth >= depth)
            return;
        map.insert_or_assign(key, Stored{depth, terms});
    }
};

std::int64_t chain_limit(const WeightDiagram& mu, int depth)
{
    return static_cast<std::int64_t>(mu.size()) * (mu.back() - mu.front() + 2 * depth + 4);
}

// Shared recursion. Policy supplies the term type and how a single step
// rewrites summands.
template <class Terms, class Policy>
class Engine {
public:
    Engine(MemoTable<Terms>& memo, const StepChooser* chooser)
        : memo_(memo)
        , chooser_(chooser)
    {}

    Terms terms_for(const WeightDiagram& mu, int depth, std::int64_t chain, std::int64_t limit)
    {
        Coord offset = 0;
        const WeightDiagram key = normalize(mu, offset);
        if (auto hit = memo_.lookup(key, depth))
            return shift_terms(*hit, offset, depth);
        if (chain == 0)
            limit = chain_limit(key, depth);
        Terms computed = compute(key, depth, chain, limit);
        memo_.store(key, depth, computed);
        return shift_terms(computed, offset, depth);
    }

private:
    StepPlan choose(const WeightDiagram& mu)
    {
        if (!chooser_ || atypicality(mu) == 0)
            return plan_step(mu);
        const auto options = valid_steps(mu);
        const auto pick = (*chooser_)(mu, options);
        return plan_custom(mu, pick.i, pick.j);
    }

    Terms compute(const WeightDiagram& mu, int depth, std::int64_t chain, std::int64_t limit)
    {
        Terms out(static_cast<std::size_t>(depth) + 1);
        const StepPlan plan = choose(mu);
        if (std::holds_alternative<TypicalStep>(plan)) {
            Policy::seed(out[0], mu);
            return out;
        }
        if (const auto* b = std::get_if<Step2b>(&plan)) {
            if (chain + 1 > limit)
                throw InternalError("Step 2b chain exceeded " + std::to_string(limit) + " applications at " +
                                    to_string(mu));
            Terms inner = terms_for(b->nu, depth, chain + 1, limit);
            for (int d = 0; d <= depth; ++d)
                Policy::translate(out[static_cast<std::size_t>(d)], inner[static_cast<std::size_t>(d)], b->j, mu);
            return out;
        }
        const auto& a = std::get<Step2a>(plan);
        Terms from_nu = terms_for(a.nu, depth, 0, 0);
        for (int d = 0; d <= depth; ++d)
            Policy::translate(out[static_cast<std::size_t>(d)], from_nu[static_cast<std::size_t>(d)], a.j, mu);
        if (depth >= 1) {
            Terms from_prime = terms_for(a.mu_prime, depth - 1, 0, 0);
            for (int d = 1; d <= depth; ++d)
                Policy::slide_pair(out[static_cast<std::size_t>(d)], from_prime[static_cast<std::size_t>(d - 1)], a.j,
                                   mu);
        }
        Policy::finish(out);
        return out;
    }

    MemoTable<Terms>& memo_;
    const StepChooser* chooser_;
};

struct CountPolicy {
    static void seed(SummandMap& t, const WeightDiagram& mu) { t.emplace(mu, 1); }

    static void translate(SummandMap& into, const SummandMap& from, Coord j, const WeightDiagram&)
    {
        for (const auto& [lam, m] : from)
            add_summand(into, theta_projective(j, lam), m);
    }

    static void slide_pair(SummandMap& into, const SummandMap& from, Coord, const WeightDiagram&)
    {
        for (const auto& [lam, m] : from)
            add_summand(into, lam, m);
    }

    static void finish(CountTerms&) {}
};

struct LabelPolicy {
    static void seed(std::vector<AllowableFunction>& t, const WeightDiagram& mu)
    {
        t.push_back(AllowableFunction::identity(mu));
    }

    static void translate(std::vector<AllowableFunction>& into, const std::vector<AllowableFunction>& from, Coord j,
                          const WeightDiagram& mu)
    {
        for (const auto& f : from) {
            const MoveRecord m = f.target().has_dot(j) ? move2(j, f.preimage(j).value_or(j)) : move1(j);
            AllowableFunction g = apply_move(f, m);
            if (g.source() != mu || g.target() != theta_projective(j, f.target()))
                throw InternalError(to_string(m) + " disagrees with the translation functor on " +
                                    to_string(f.target()));
            into.push_back(std::move(g));
        }
        std::sort(into.begin(), into.end());
    }

    static void slide_pair(std::vector<AllowableFunction>& into, const std::vector<AllowableFunction>& from, Coord j,
                           const WeightDiagram& mu)
    {
        for (const auto& f : from) {
            AllowableFunction g = apply_move(f, move3(j));
            if (g.source() != mu || g.target() != f.target())
                throw InternalError("Move3 at j=" + std::to_string(j) + " does not reproduce " + to_string(mu));
            into.push_back(std::move(g));
        }
    }

    static void finish(LabelTerms& terms)
    {
        for (auto& t : terms)
            std::sort(t.begin(), t.end());
    }
};

} // namespace

struct Resolver::Impl {
    MemoTable<CountTerms> counts;
    MemoTable<LabelTerms> labels;
};

Resolver::Resolver()
    : impl_(std::make_unique<Impl>())
{}

Resolver::~Resolver() = default;

namespace {

void check_depth(int max_degree)
{
    if (max_degree < 0)
        throw DomainError("max degree must be nonnegative");
}

Resolution assemble(const WeightDiagram& mu, int max_degree, CountTerms terms)
{
    Resolution r{mu, max_degree, {}};
    for (int d = 0; d <= max_degree; ++d)
        r.terms.push_back(ResolutionTerm{d, std::move(terms[static_cast<std::size_t>(d)])});
    return r;
}

} // namespace

Resolution Resolver::resolve(const WeightDiagram& mu, int max_degree)
{
    check_depth(max_degree);
    Engine<CountTerms, CountPolicy> engine(impl_->counts, nullptr);
    return assemble(mu, max_degree, engine.terms_for(mu, max_degree, 0, 0));
}

Resolution Resolver::resolve(const WeightDiagram& mu, int max_degree, const StepChooser& chooser)
{
    check_depth(max_degree);
    MemoTable<CountTerms> local;
    local.locking = false;
    Engine<CountTerms, CountPolicy> engine(local, chooser ? &chooser : nullptr);
    return assemble(mu, max_degree, engine.terms_for(mu, max_degree, 0, 0));
}

LabelledResolution Resolver::resolve_with_functions(const WeightDiagram& mu, int max_degree)
{
    check_depth(max_degree);
    Engine<LabelTerms, LabelPolicy> engine(impl_->labels, nullptr);
    auto terms = engine.terms_for(mu, max_degree, 0, 0);
    LabelledResolution r{mu, max_degree, {}};
    for (int d = 0; d <= max_degree; ++d)
        r.terms.push_back(LabelledTerm{d, std::move(terms[static_cast<std::size_t>(d)])});
    return r;
}

std::vector<MemoEntry> Resolver::memo_snapshot() const
{
    std::shared_lock lock(impl_->counts.mutex);
    std::vector<MemoEntry> out;
    out.reserve(impl_->counts.map.size());
    for (const auto& [key, stored] : impl_->counts.map)
        out.push_back(MemoEntry{key, stored.depth, stored.terms});
    std::sort(out.begin(), out.end(), [](const MemoEntry& a, const MemoEntry& b) { return a.mu < b.mu; });
    return out;
}

void Resolver::memo_insert(MemoEntry entry)
{
    if (entry.mu.front() != 0)
        throw DomainError("memo entries must be normalized (leftmost dot at 0)");
    if (entry.depth < 0 || entry.terms.size() != static_cast<std::size_t>(entry.depth) + 1)
        throw DomainError("memo entry depth does not match its term count");
    impl_->counts.store(entry.mu, entry.depth, entry.terms);
}

std::size_t Resolver::memo_size() const
{
    std::shared_lock lock(impl_->counts.mutex);
    return impl_->counts.map.size();
}

void Resolver::clear()
{
    {
        std::unique_lock lock(impl_->counts.mutex);
        impl_->counts.map.clear();
    }
    std::unique_lock lock(impl_->labels.mutex);
    impl_->labels.map.clear();
}

Resolver& Resolver::shared()
{
    static Resolver instance;
    return instance;
}

Resolution resolve(const WeightDiagram& mu, int max_degree)
{
    return Resolver::shared().resolve(mu, max_degree);
}

Resolution resolve(const WeightDiagram& mu, int max_degree, const StepChooser& chooser)
{
    return Resolver::shared().resolve(mu, max_degree, chooser);
}

LabelledResolution resolve_with_functions(const WeightDiagram& mu, int max_degree)
{
    return Resolver::shared().resolve_with_functions(mu, max_degree);
}

} // namespace kacres
