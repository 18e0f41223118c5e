#include "kacres/moves.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "kacres/checked.hpp"
#include "kacres/errors.hpp"

namespace kacres {

std::string to_string(MoveKind kind)
{
    switch (kind) {
    case MoveKind::Move1:
        return "Move1";
    case MoveKind::Move2:
        return "Move2";
    case MoveKind::Move3:
        return "Move3";
    }
    throw InternalError("unknown move kind");
}

MoveKind parse_move_kind(std::string_view text)
{
    if (text == "Move1")
        return MoveKind::Move1;
    if (text == "Move2")
        return MoveKind::Move2;
    if (text == "Move3")
        return MoveKind::Move3;
    throw ParseError("unknown move kind '" + std::string(text) + "'");
}

MoveRecord move1(Coord j) { return {MoveKind::Move1, j, std::nullopt}; }
MoveRecord move2(Coord j, Coord k) { return {MoveKind::Move2, j, k}; }
MoveRecord move3(Coord j) { return {MoveKind::Move3, j, std::nullopt}; }

std::string to_string(const MoveRecord& m)
{
    std::string out = to_string(m.kind) + "(j=" + std::to_string(m.j);
    if (m.k)
        out += ",k=" + std::to_string(*m.k);
    return out + ")";
}

AllowableFunction::AllowableFunction(WeightDiagram source, WeightDiagram target, std::vector<Coord> pairing,
                                     std::vector<MoveRecord> trace)
    : source_(std::move(source))
    , target_(std::move(target))
    , pairing_(std::move(pairing))
    , trace_(std::move(trace))
{
    if (source_.size() != target_.size())
        throw DomainError("source and target have different numbers of dots");
    if (pairing_.size() != source_.size())
        throw DomainError("pairing must list one image per source dot");
    std::vector<Coord> sorted = pairing_;
    std::sort(sorted.begin(), sorted.end());
    if (!std::equal(sorted.begin(), sorted.end(), target_.dots().begin()))
        throw DomainError("pairing is not a bijection onto the target dots");
    for (std::size_t i = 0; i < pairing_.size(); ++i) {
        if (pairing_[i] > source_[i])
            throw DomainError("function is not nonincreasing: f(" + std::to_string(source_[i]) +
                              ") = " + std::to_string(pairing_[i]));
    }
    for (const auto& m : trace_) {
        if ((m.kind == MoveKind::Move2) != m.k.has_value())
            throw DomainError("move record parameter k is present exactly for Move2");
    }
}

AllowableFunction AllowableFunction::identity(const WeightDiagram& d)
{
    return AllowableFunction(d, d, std::vector<Coord>(d.dots().begin(), d.dots().end()));
}

Coord AllowableFunction::image(Coord a) const
{
    const auto i = source_.index_of(a);
    if (i == WeightDiagram::npos)
        throw DomainError(std::to_string(a) + " is not a source dot");
    return pairing_[i];
}

std::optional<Coord> AllowableFunction::preimage(Coord b) const
{
    for (std::size_t i = 0; i < pairing_.size(); ++i) {
        if (pairing_[i] == b)
            return source_[i];
    }
    return std::nullopt;
}

bool AllowableFunction::is_identity() const noexcept
{
    return std::equal(pairing_.begin(), pairing_.end(), source_.dots().begin());
}

AllowableFunction AllowableFunction::shifted(Coord c) const
{
    std::vector<Coord> pairing(pairing_.size());
    for (std::size_t i = 0; i < pairing_.size(); ++i)
        pairing[i] = checked_add(pairing_[i], c, "function shift");
    std::vector<MoveRecord> trace = trace_;
    for (auto& m : trace) {
        m.j = checked_add(m.j, c, "trace shift");
        if (m.k)
            m.k = checked_add(*m.k, c, "trace shift");
    }
    return AllowableFunction(shift(source_, c), shift(target_, c), std::move(pairing), std::move(trace));
}

AllowableFunction AllowableFunction::without_trace() const
{
    return AllowableFunction(source_, target_, pairing_);
}

bool AllowableFunction::same_function(const AllowableFunction& other) const noexcept
{
    return source_ == other.source_ && target_ == other.target_ && pairing_ == other.pairing_;
}

bool operator<(const AllowableFunction& a, const AllowableFunction& b)
{
    if (a.target_ != b.target_)
        return a.target_ < b.target_;
    if (a.source_ != b.source_)
        return a.source_ < b.source_;
    return a.pairing_ < b.pairing_;
}

namespace {

std::string at(Coord p) { return std::to_string(p); }

} // namespace

std::string move_violation(const AllowableFunction& f, const MoveRecord& m)
{
    const auto& src = f.source();
    const auto& tgt = f.target();
    const Coord j = m.j;
    if ((m.kind == MoveKind::Move2) != m.k.has_value())
        return "parameter k must be given exactly for Move2";

    switch (m.kind) {
    case MoveKind::Move1:
    case MoveKind::Move2: {
        const char* name = m.kind == MoveKind::Move1 ? "Move1" : "Move2";
        if (!src.has_dot(j - 1))
            return std::string(name) + ": source needs a dot at j-1=" + at(j - 1);
        if (src.has_dot(j - 2))
            return std::string(name) + ": source must have no dot at j-2=" + at(j - 2);
        if (src.has_dot(j))
            return std::string(name) + ": source must have no dot at j=" + at(j);
        if (!tgt.has_dot(j - 1))
            return std::string(name) + ": target needs a dot at j-1=" + at(j - 1);
        if (tgt.has_dot(j - 2))
            return std::string(name) + ": target must have no dot at j-2=" + at(j - 2);
        if (f.image(j - 1) != j - 1)
            return std::string(name) + ": requires f(j-1) = j-1 at j-1=" + at(j - 1);
        if (m.kind == MoveKind::Move1) {
            if (tgt.has_dot(j))
                return "Move1: target must have no dot at j=" + at(j);
            return {};
        }
        if (!tgt.has_dot(j))
            return "Move2: target needs a dot at j=" + at(j);
        const Coord k = *m.k;
        if (k <= j)
            return "Move2: leaping dot k=" + at(k) + " must lie right of j=" + at(j);
        if (!src.has_dot(k))
            return "Move2: k=" + at(k) + " is not a source dot";
        if (f.image(k) != j)
            return "Move2: requires f(k) = j, but f(" + at(k) + ") = " + at(f.image(k));
        return {};
    }
    case MoveKind::Move3:
        if (!src.has_dot(j - 1) || !src.has_dot(j))
            return "Move3: source needs dots at j-1=" + at(j - 1) + " and j=" + at(j);
        if (src.has_dot(j - 2))
            return "Move3: source must have no dot at j-2=" + at(j - 2);
        if (src.has_dot(j + 1))
            return "Move3: source must have no dot at j+1=" + at(j + 1);
        if (!(f.image(j - 1) < f.image(j)))
            return "Move3: requires f(j-1) < f(j)";
        return {};
    }
    return "unknown move kind";
}

std::vector<MoveRecord> applicable_moves(const AllowableFunction& f)
{
    std::vector<MoveRecord> out;
    for (Coord a : f.source().dots()) {
        const Coord j = a + 1;
        if (move_violation(f, move1(j)).empty())
            out.push_back(move1(j));
        if (auto k = f.preimage(j); k && *k > j && move_violation(f, move2(j, *k)).empty())
            out.push_back(move2(j, *k));
        if (f.source().has_dot(j) && move_violation(f, move3(j)).empty())
            out.push_back(move3(j));
    }
    return out;
}

AllowableFunction apply_move(const AllowableFunction& f, const MoveRecord& m)
{
    if (auto why = move_violation(f, m); !why.empty())
        throw PreconditionError(why);

    const Coord j = m.j;
    std::vector<std::pair<Coord, Coord>> arrows;
    arrows.reserve(f.source().size());
    for (std::size_t i = 0; i < f.source().size(); ++i)
        arrows.emplace_back(f.source()[i], f.pairing()[i]);

    auto arrow_from = [&](Coord a) -> std::pair<Coord, Coord>& {
        for (auto& ar : arrows) {
            if (ar.first == a)
                return ar;
        }
        throw InternalError("arrow lookup failed");
    };

    switch (m.kind) {
    case MoveKind::Move1:
        arrow_from(j - 1) = {j, j};
        break;
    case MoveKind::Move2:
        arrow_from(*m.k).second = j - 2;
        arrow_from(j - 1) = {j, j};
        break;
    case MoveKind::Move3: {
        auto& lo = arrow_from(j - 1);
        auto& hi = arrow_from(j);
        hi.first = j + 1;
        lo.first = j;
        break;
    }
    }

    std::sort(arrows.begin(), arrows.end());
    std::vector<Coord> src;
    std::vector<Coord> pairing;
    for (auto [a, b] : arrows) {
        src.push_back(a);
        pairing.push_back(b);
    }
    std::vector<Coord> tgt = pairing;
    std::sort(tgt.begin(), tgt.end());
    std::vector<MoveRecord> trace = f.trace();
    trace.push_back(m);
    AllowableFunction g(WeightDiagram(std::move(src)), WeightDiagram(std::move(tgt)), std::move(pairing),
                        std::move(trace));

    // Each move shifts ell by 0/2/2 and the crossing count by 0/1/0.
    const auto d_ell = ell(g.target(), g.source()) - ell(f.target(), f.source());
    const auto d_cross = leapfrog_count(g) - leapfrog_count(f);
    const std::int64_t want_ell = m.kind == MoveKind::Move1 ? 0 : 2;
    const std::int64_t want_cross = m.kind == MoveKind::Move2 ? 1 : 0;
    if (d_ell != want_ell || d_cross != want_cross)
        throw InternalError(to_string(m) + " changed (ell, L) by (" + std::to_string(d_ell) + ", " +
                            std::to_string(d_cross) + ")");
    return g;
}

std::int64_t leapfrog_count(const AllowableFunction& f)
{
    const auto& p = f.pairing();
    std::int64_t count = 0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        for (std::size_t b = a + 1; b < p.size(); ++b) {
            if (p[a] > p[b])
                ++count;
        }
    }
    return count;
}

namespace {

std::int64_t merge_count(std::vector<Coord>& v, std::vector<Coord>& scratch, std::size_t lo, std::size_t hi)
{
    if (hi - lo < 2)
        return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::int64_t count = merge_count(v, scratch, lo, mid) + merge_count(v, scratch, mid, hi);
    std::size_t a = lo, b = mid, out = lo;
    while (a < mid && b < hi) {
        if (v[b] < v[a]) {
            count += static_cast<std::int64_t>(mid - a);
            scratch[out++] = v[b++];
        } else {
            scratch[out++] = v[a++];
        }
    }
    while (a < mid)
        scratch[out++] = v[a++];
    while (b < hi)
        scratch[out++] = v[b++];
    std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
              v.begin() + static_cast<std::ptrdiff_t>(lo));
    return count;
}

} // namespace

std::int64_t leapfrog_count_merge(const AllowableFunction& f)
{
    std::vector<Coord> v = f.pairing();
    std::vector<Coord> scratch(v.size());
    return merge_count(v, scratch, 0, v.size());
}

std::int64_t degree(const AllowableFunction& f)
{
    const auto l = ell(f.target(), f.source());
    if (l % 2 != 0)
        throw DomainError("relative length " + std::to_string(l) + " is odd; no degree is defined");
    return l / 2 - leapfrog_count(f);
}

bool is_allowable(const AllowableFunction& f)
{
    const auto l = ell(f.target(), f.source());
    if (l % 2 != 0)
        return false;
    const auto d = l / 2 - leapfrog_count(f);
    if (d < 0 || d > std::numeric_limits<int>::max())
        return false;
    const auto table = enumerate_allowable(f.source(), static_cast<int>(d));
    const auto it = table.find(static_cast<int>(d));
    if (it == table.end())
        return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const AllowableFunction& g) { return g.same_function(f); });
}

// ---------------------------------------------------------------------------
// Inverse-move search.

namespace {

struct SearchNode {
    AllowableFunction f;
    std::size_t parent;
    MoveRecord forward; // move that takes this node's f to the parent's f
};

std::vector<Coord> state_key(const AllowableFunction& f)
{
    std::vector<Coord> key(f.source().dots().begin(), f.source().dots().end());
    key.insert(key.end(), f.pairing().begin(), f.pairing().end());
    return key;
}

struct KeyHash {
    std::size_t operator()(const std::vector<Coord>& v) const noexcept
    {
        std::size_t h = 0x84222325cbf29ce4ull;
        for (auto x : v)
            h ^= std::hash<Coord>{}(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }
};

// Build a candidate predecessor from explicit arrows; returns nullopt if it
// is not a valid function of the required shape.
std::optional<AllowableFunction> from_arrows(std::vector<std::pair<Coord, Coord>> arrows)
{
    std::sort(arrows.begin(), arrows.end());
    std::vector<Coord> src, pairing;
    for (auto [a, b] : arrows) {
        if (!src.empty() && src.back() == a)
            return std::nullopt;
        if (b > a)
            return std::nullopt;
        src.push_back(a);
        pairing.push_back(b);
    }
    std::vector<Coord> tgt = pairing;
    std::sort(tgt.begin(), tgt.end());
    if (std::adjacent_find(tgt.begin(), tgt.end()) != tgt.end())
        return std::nullopt;
    return AllowableFunction(WeightDiagram(std::move(src)), WeightDiagram(std::move(tgt)), std::move(pairing));
}

std::vector<std::pair<Coord, Coord>> arrows_of(const AllowableFunction& f)
{
    std::vector<std::pair<Coord, Coord>> out;
    for (std::size_t i = 0; i < f.source().size(); ++i)
        out.emplace_back(f.source()[i], f.pairing()[i]);
    return out;
}

// All (predecessor, forward move) pairs such that apply_move(pred, move) == g.
std::vector<std::pair<AllowableFunction, MoveRecord>> predecessors(const AllowableFunction& g)
{
    std::vector<std::pair<AllowableFunction, MoveRecord>> out;
    const auto& src = g.source();
    const auto& tgt = g.target();

    auto accept = [&](std::optional<AllowableFunction> pred, MoveRecord m) {
        if (!pred || !move_violation(*pred, m).empty())
            return;
        auto fwd = apply_move(*pred, m);
        if (!fwd.same_function(g))
            return;
        out.emplace_back(pred->without_trace(), m);
    };

    for (Coord j : src.dots()) {
        // Inverse Move3: pair (j, j+1) slides back to (j-1, j).
        if (src.has_dot(j + 1) && !src.has_dot(j - 1) && !src.has_dot(j - 2)) {
            auto arrows = arrows_of(g);
            for (auto& ar : arrows) {
                if (ar.first == j)
                    ar.first = j - 1;
                else if (ar.first == j + 1)
                    ar.first = j;
            }
            accept(from_arrows(std::move(arrows)), move3(j));
        }
        if (g.image(j) != j || src.has_dot(j - 1) || src.has_dot(j - 2))
            continue;
        // Inverse Move2: target dots j-2 and j, k -> j-2 with k > j.
        if (tgt.has_dot(j - 2) && !tgt.has_dot(j - 1)) {
            auto k = g.preimage(j - 2);
            if (k && *k > j) {
                auto arrows = arrows_of(g);
                for (auto& ar : arrows) {
                    if (ar.first == j)
                        ar = {j - 1, j - 1};
                    else if (ar.first == *k)
                        ar.second = j;
                }
                accept(from_arrows(std::move(arrows)), move2(j, *k));
            }
        }
        // Inverse Move1: a fixed dot with two free positions on its left.
        if (!tgt.has_dot(j - 1) && !tgt.has_dot(j - 2)) {
            auto arrows = arrows_of(g);
            for (auto& ar : arrows) {
                if (ar.first == j)
                    ar = {j - 1, j - 1};
            }
            accept(from_arrows(std::move(arrows)), move1(j));
        }
    }
    return out;
}

bool is_origin(const AllowableFunction& f)
{
    return f.is_identity() && atypicality(f.source()) == 0;
}

} // namespace

std::optional<ReductionCertificate> reduce_to_identity(const AllowableFunction& f, Coord window_margin,
                                                       std::size_t max_states)
{
    const Coord lo = std::min(f.source().front(), f.target().front()) - window_margin;
    const Coord hi = std::max(f.source().back(), f.target().back()) + window_margin;
    auto inside = [&](const AllowableFunction& g) {
        return g.source().front() >= lo && g.target().front() >= lo && g.source().back() <= hi &&
               g.target().back() <= hi;
    };

    std::vector<SearchNode> nodes;
    nodes.push_back({f.without_trace(), 0, move1(0)});
    std::unordered_set<std::vector<Coord>, KeyHash> seen;
    seen.insert(state_key(nodes[0].f));
    std::vector<std::size_t> stack{0};

    while (!stack.empty()) {
        const std::size_t cur = stack.back();
        stack.pop_back();
        if (is_origin(nodes[cur].f)) {
            ReductionCertificate cert{nodes[cur].f.source(), {}};
            for (std::size_t at = cur; at != 0; at = nodes[at].parent)
                cert.moves.push_back(nodes[at].forward);
            return cert;
        }
        auto preds = predecessors(nodes[cur].f);
        // Move1 candidates are pushed first so the ell-reducing inverses are
        // explored before plain slides.
        std::stable_partition(preds.begin(), preds.end(),
                              [](const auto& p) { return p.second.kind == MoveKind::Move1; });
        for (auto& [pred, m] : preds) {
            if (!inside(pred))
                continue;
            if (!seen.insert(state_key(pred)).second)
                continue;
            if (seen.size() > max_states)
                return std::nullopt;
            nodes.push_back({std::move(pred), cur, m});
            stack.push_back(nodes.size() - 1);
        }
    }
    return std::nullopt;
}

std::optional<ReductionCertificate> reduce_to_identity(const AllowableFunction& f)
{
    return reduce_to_identity(f, 2 * static_cast<Coord>(f.source().size()));
}

AllowableFunction replay(const ReductionCertificate& cert)
{
    if (atypicality(cert.origin) != 0)
        throw DomainError("certificate origin " + to_string(cert.origin) + " is not typical");
    auto f = AllowableFunction::identity(cert.origin);
    for (const auto& m : cert.moves)
        f = apply_move(f, m);
    return f;
}

std::string render_ascii(const AllowableFunction& f)
{
    const Coord lo = std::min(f.source().front(), f.target().front()) - 1;
    const Coord hi = std::max(f.source().back(), f.target().back()) + 1;
    std::ostringstream os;
    auto row = [&](const char* label, const WeightDiagram& d) {
        os << label;
        for (Coord x = lo; x <= hi; ++x)
            os << (d.has_dot(x) ? 'o' : '.');
        os << "\n";
    };
    row("mu     ", f.source());
    row("lambda ", f.target());
    os << "       ";
    for (Coord x = lo; x <= hi; ++x)
        os << static_cast<char>('0' + (x < 0 ? -x : x) % 10);
    os << "   (" << lo << ".." << hi << ")\n";
    for (std::size_t i = 0; i < f.source().size(); ++i)
        os << "  " << f.source()[i] << " -> " << f.pairing()[i] << "\n";
    return os.str();
}

} // namespace kacres
