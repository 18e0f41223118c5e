#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kacres/api.hpp"
#include "kacres/resolution.hpp"

namespace kacres::service {

/// All compositions of n (ordered, parts >= 1), in lexicographic order.
std::vector<RunComposition> compositions(int n);

/// A diagram whose run sizes read right-to-left are pi. The leftmost dot
/// sits at `start`; gaps[i] free positions separate consecutive runs (a
/// single value is reused when gaps has one entry).
WeightDiagram diagram_with_runs(const RunComposition& pi, std::vector<Coord> gaps = {1}, Coord start = 0);

using LabelledSource = std::function<LabelledResolution(const WeightDiagram&, int)>;

struct VerifyOptions {
    int max_n = 5;
    int max_degree = 8;
    int trials = 100;
    std::uint64_t seed = 20240601;
    /// Empty selects every check.
    std::vector<std::string> checks;
    /// Replaces resolve_with_functions; used to inject faults in tests.
    LabelledSource labelled_source;
    /// Progress and seed logging; may be null.
    std::ostream* log = nullptr;
};

struct CheckResult {
    std::string name;
    bool passed = true;
    std::size_t cases = 0;
    double seconds = 0;
    /// {"mu", "degree", "detail"} for the first failure found.
    std::optional<Json> counterexample;
};

struct VerificationReport {
    Json corpus;
    std::vector<CheckResult> checks;

    bool passed() const;
};

const std::vector<std::string>& check_names();

VerificationReport run_verification(const VerifyOptions& options, Resolver& resolver = Resolver::shared());

Json to_json(const VerificationReport& report);
std::string render_table(const VerificationReport& report);

/// Negative control: uncross one arrow pair in every function whose trace
/// contains a Move2. The result is no longer a valid labelling.
LabelledResolution flip_move2_arrow(LabelledResolution r);

} // namespace kacres::service
