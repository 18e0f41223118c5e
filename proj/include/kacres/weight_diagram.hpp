#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kacres {

using Coord = std::int64_t;

/// Integral dominant weight for p(n), stored as its coefficients on the
/// epsilon basis. Coefficients are weakly decreasing.
class DominantWeight {
public:
    explicit DominantWeight(std::vector<Coord> coeffs);
    DominantWeight(std::initializer_list<Coord> coeffs)
        : DominantWeight(std::vector<Coord>(coeffs))
    {}

    std::span<const Coord> coeffs() const noexcept { return coeffs_; }
    std::size_t rank() const noexcept { return coeffs_.size(); }

    friend bool operator==(const DominantWeight&, const DominantWeight&) = default;

private:
    std::vector<Coord> coeffs_;
};

/// A weight diagram: n >= 1 dots on the integer line, kept as a strictly
/// increasing coordinate list [a1,...,an].
class WeightDiagram {
public:
    explicit WeightDiagram(std::vector<Coord> dots);
    WeightDiagram(std::initializer_list<Coord> dots)
        : WeightDiagram(std::vector<Coord>(dots))
    {}

    std::span<const Coord> dots() const noexcept { return dots_; }
    std::size_t size() const noexcept { return dots_.size(); }
    Coord operator[](std::size_t i) const { return dots_[i]; }
    Coord front() const noexcept { return dots_.front(); }
    Coord back() const noexcept { return dots_.back(); }

    bool has_dot(Coord p) const noexcept;
    /// Index of the dot at p, or npos.
    std::size_t index_of(Coord p) const noexcept;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// Copy with the dot at `from` relocated to `to`. `to` must be free.
    WeightDiagram with_moved(Coord from, Coord to) const;

    friend bool operator==(const WeightDiagram&, const WeightDiagram&) = default;
    friend auto operator<=>(const WeightDiagram& a, const WeightDiagram& b)
    {
        return a.dots_ <=> b.dots_;
    }

private:
    std::vector<Coord> dots_;
};

/// Run sizes of a diagram, listed from the rightmost run to the leftmost.
struct RunComposition {
    std::vector<int> parts;

    int total() const noexcept;
    int odd_parts() const noexcept;

    friend bool operator==(const RunComposition&, const RunComposition&) = default;
};

RunComposition make_composition(std::vector<int> parts);

WeightDiagram diagram_from_dominant(const DominantWeight& w);
DominantWeight dominant_from_diagram(const WeightDiagram& d);

RunComposition runs(const WeightDiagram& d);
int atypicality(const WeightDiagram& d);
int odd_run_count(const WeightDiagram& d);

bool is_isolated(const WeightDiagram& d, Coord p);
bool is_left_isolated(const WeightDiagram& d, Coord p);

/// #{dots of lam <= t} - #{dots of mu <= t}.
std::int64_t ell_t(const WeightDiagram& lam, const WeightDiagram& mu, Coord t);
/// Relative length: sum over t of ell_t, equivalently sum_i (a_i - b_i).
std::int64_t ell(const WeightDiagram& lam, const WeightDiagram& mu);
/// mu <= lam in the dominance order (every dot of lam sits weakly left).
bool leq(const WeightDiagram& mu, const WeightDiagram& lam);

WeightDiagram shift(const WeightDiagram& d, Coord c);

/// Translate so the leftmost dot is at 0. Returns the translated diagram;
/// `offset` receives the amount that was subtracted.
WeightDiagram normalize(const WeightDiagram& d, Coord& offset);

/// "[a1,a2,...,an]", ascending, whitespace tolerated.
WeightDiagram parse_diagram(std::string_view text);
std::string to_string(const WeightDiagram& d);
std::string to_string(const RunComposition& pi);
/// Comma separated run sizes, e.g. "2,1,1".
RunComposition parse_composition(std::string_view text);

/// Two-line picture: 'o' for dots, '.' for ticks, then an index ruler
/// (last digit of |x|) over [lo, hi].
std::string render_ascii(const WeightDiagram& d, Coord lo, Coord hi);
std::string render_ascii(const WeightDiagram& d);

} // namespace kacres

template <>
struct std::hash<kacres::WeightDiagram> {
    std::size_t operator()(const kacres::WeightDiagram& d) const noexcept
    {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto x : d.dots()) {
            h ^= std::hash<kacres::Coord>{}(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};
