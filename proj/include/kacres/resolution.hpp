#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kacres/moves.hpp"
#include "kacres/weight_diagram.hpp"

namespace kacres {

// ---------------------------------------------------------------------------
// Translation functors as diagram rewrites.

/// Theta_{j+1} on the projective P(lam). lam must have a left-isolated dot at
/// j-1. With j free the dot slides to j; with j occupied it jumps to j-2.
/// Anything else is outside the known cases and raises PreconditionError.
WeightDiagram theta_projective(Coord j, const WeightDiagram& lam);

struct ThetaSingle {
    WeightDiagram mu;
};
/// Short exact sequence 0 -> Delta(mu_prime) -> Theta Delta(lam) -> Delta(mu_double_prime) -> 0.
struct ThetaPair {
    WeightDiagram mu_prime;
    WeightDiagram mu_double_prime;
};
using ThetaStandardResult = std::variant<ThetaSingle, ThetaPair>;

/// Theta_{j+1} on the standard Delta(lam); requires a dot at j-1 and none at j.
ThetaStandardResult theta_standard(Coord j, const WeightDiagram& lam);

// ---------------------------------------------------------------------------
// Step planning.

struct TypicalStep {
    friend bool operator==(const TypicalStep&, const TypicalStep&) = default;
};

/// i = j is the left end of a pair with two free positions on its left.
/// nu moves the dot j to j-1; mu_prime moves the pair (j, j+1) to (j-1, j).
struct Step2a {
    Coord i;
    Coord j;
    WeightDiagram nu;
    WeightDiagram mu_prime;
    friend bool operator==(const Step2a&, const Step2a&) = default;
};

/// The pair at i has a dot at i-2; an isolated dot j < i with two free
/// positions on its left moves to j-1, giving nu.
struct Step2b {
    Coord i;
    Coord j;
    WeightDiagram nu;
    friend bool operator==(const Step2b&, const Step2b&) = default;
};

using StepPlan = std::variant<TypicalStep, Step2a, Step2b>;

std::string describe(const StepPlan& plan);

/// Default choice: smallest i, and for Step 2b the largest admissible j.
StepPlan plan_step(const WeightDiagram& mu);

/// Every admissible (i, j) for mu. Empty for typical mu.
std::vector<StepPlan> valid_steps(const WeightDiagram& mu);

/// Empty if (i, j) is an admissible step for mu, else the violated pattern.
std::string step_violation(const WeightDiagram& mu, Coord i, Coord j);

/// Validate and build the plan for (i, j). Throws PreconditionError.
StepPlan plan_custom(const WeightDiagram& mu, Coord i, Coord j);

struct StepChoice {
    Coord i;
    Coord j;
};

/// Picks a step for an atypical diagram from the admissible options. The
/// choice is validated by the resolver.
using StepChooser = std::function<StepChoice(const WeightDiagram& mu, std::span<const StepPlan> options)>;

/// Seeded chooser that picks a random site i and, for Step 2b, usually the
/// largest admissible j below it and occasionally any admissible j.
StepChooser make_random_chooser(std::uint64_t seed);

// ---------------------------------------------------------------------------
// Resolutions.

using Multiplicity = std::int64_t;
using SummandMap = std::map<WeightDiagram, Multiplicity>;

struct ResolutionTerm {
    int degree = 0;
    SummandMap summands;

    Multiplicity total() const;
    friend bool operator==(const ResolutionTerm&, const ResolutionTerm&) = default;
};

struct Resolution {
    WeightDiagram mu;
    int max_degree = 0;
    std::vector<ResolutionTerm> terms;

    friend bool operator==(const Resolution&, const Resolution&) = default;
};

struct LabelledTerm {
    int degree = 0;
    /// One function per summand occurrence, sorted.
    std::vector<AllowableFunction> functions;
};

struct LabelledResolution {
    WeightDiagram mu;
    int max_degree = 0;
    std::vector<LabelledTerm> terms;

    Resolution counts() const;
};

std::vector<Multiplicity> summand_counts(const Resolution& r);

/// Memo entry in translation-normalized coordinates (leftmost dot of mu at 0).
struct MemoEntry {
    WeightDiagram mu;
    int depth = 0;
    std::vector<SummandMap> terms;
};

/// Runs the recursive construction with a translation-normalized memo
/// shared across calls. Lookups and inserts are safe from multiple threads.
class Resolver {
public:
    Resolver();
    ~Resolver();
    Resolver(const Resolver&) = delete;
    Resolver& operator=(const Resolver&) = delete;

    Resolution resolve(const WeightDiagram& mu, int max_degree);
    /// Uses a private memo so the chooser is consulted on every node.
    Resolution resolve(const WeightDiagram& mu, int max_degree, const StepChooser& chooser);
    LabelledResolution resolve_with_functions(const WeightDiagram& mu, int max_degree);

    std::vector<MemoEntry> memo_snapshot() const;
    void memo_insert(MemoEntry entry);
    std::size_t memo_size() const;
    void clear();

    static Resolver& shared();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Resolution resolve(const WeightDiagram& mu, int max_degree);
Resolution resolve(const WeightDiagram& mu, int max_degree, const StepChooser& chooser);
LabelledResolution resolve_with_functions(const WeightDiagram& mu, int max_degree);

} // namespace kacres
