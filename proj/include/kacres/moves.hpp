#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kacres/weight_diagram.hpp"

namespace kacres {

enum class MoveKind { Move1, Move2, Move3 };

std::string to_string(MoveKind kind);
MoveKind parse_move_kind(std::string_view text);

/// One application of a Move. `j` is the pivot coordinate of the local
/// pattern; `k` is the leaping source dot and is present only for Move2.
struct MoveRecord {
    MoveKind kind = MoveKind::Move1;
    Coord j = 0;
    std::optional<Coord> k;

    friend bool operator==(const MoveRecord&, const MoveRecord&) = default;
};

MoveRecord move1(Coord j);
MoveRecord move2(Coord j, Coord k);
MoveRecord move3(Coord j);

std::string to_string(const MoveRecord& m);

/// A bijection f from the dots of `source` (mu) onto the dots of `target`
/// (lambda), with f(a) <= a for every dot a. `pairing()[i]` is the image of
/// the i-th smallest source dot. The optional trace records the Moves that
/// produced the function.
///
/// Construction enforces the bijection and the pointwise bound (which
/// implies mu <= lambda). Parity of ell(lambda, mu) is not enforced so that
/// candidate functions can be examined and rejected by `degree` and
/// `is_allowable`.
class AllowableFunction {
public:
    AllowableFunction(WeightDiagram source, WeightDiagram target, std::vector<Coord> pairing,
                      std::vector<MoveRecord> trace = {});

    static AllowableFunction identity(const WeightDiagram& d);

    const WeightDiagram& source() const noexcept { return source_; }
    const WeightDiagram& target() const noexcept { return target_; }
    const std::vector<Coord>& pairing() const noexcept { return pairing_; }
    const std::vector<MoveRecord>& trace() const noexcept { return trace_; }

    /// Image of the source dot a. Throws DomainError if a is not a dot.
    Coord image(Coord a) const;
    /// Source dot mapping to b, if b is a target dot.
    std::optional<Coord> preimage(Coord b) const;

    bool is_identity() const noexcept;

    /// Translate source, target, images and trace by c.
    AllowableFunction shifted(Coord c) const;
    AllowableFunction without_trace() const;

    /// Equality of the underlying function; traces are ignored.
    bool same_function(const AllowableFunction& other) const noexcept;

    /// Ordering used for deterministic listings: target, then source, then
    /// pairing. Traces do not participate.
    friend bool operator<(const AllowableFunction& a, const AllowableFunction& b);

private:
    WeightDiagram source_;
    WeightDiagram target_;
    std::vector<Coord> pairing_;
    std::vector<MoveRecord> trace_;
};

std::vector<MoveRecord> applicable_moves(const AllowableFunction& f);

/// Empty string if m applies to f, otherwise a description of the violated
/// local pattern.
std::string move_violation(const AllowableFunction& f, const MoveRecord& m);

/// Apply m and append it to the trace. Throws PreconditionError naming the
/// violated pattern if m does not apply.
AllowableFunction apply_move(const AllowableFunction& f, const MoveRecord& m);

/// Number of leapfrogging pairs (crossings), by scanning all pairs.
std::int64_t leapfrog_count(const AllowableFunction& f);
/// Same quantity via merge-sort inversion counting.
std::int64_t leapfrog_count_merge(const AllowableFunction& f);

/// ell(lambda, mu) / 2 - L(f). Throws DomainError when ell is odd.
std::int64_t degree(const AllowableFunction& f);

/// Degree -> allowable functions of that degree (one entry per summand
/// occurrence, sorted). Degrees without functions map to empty lists.
using FunctionsByDegree = std::map<int, std::vector<AllowableFunction>>;

FunctionsByDegree enumerate_allowable(const WeightDiagram& mu, int max_degree);

bool is_allowable(const AllowableFunction& f);

/// Forward certificate of allowability: starting from the identity on the
/// typical diagram `origin`, replaying `moves` reproduces the function.
struct ReductionCertificate {
    WeightDiagram origin;
    std::vector<MoveRecord> moves;
};

/// Search backwards from f by inverse Moves until an identity on a typical
/// diagram is reached, keeping every intermediate dot inside
/// [min dot - margin, max dot + margin]. The number of inverse Move2/Move3
/// steps in any reduction equals ell/2. A missing certificate means "not
/// found in this window", not "not allowable".
std::optional<ReductionCertificate> reduce_to_identity(const AllowableFunction& f, Coord window_margin,
                                                       std::size_t max_states = 4'000'000);
std::optional<ReductionCertificate> reduce_to_identity(const AllowableFunction& f);

AllowableFunction replay(const ReductionCertificate& cert);

/// Two-row picture of source and target with an arrow list "a -> f(a)".
std::string render_ascii(const AllowableFunction& f);

} // namespace kacres
