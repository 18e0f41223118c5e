#include "kacres/weight_diagram.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "kacres/checked.hpp"
#include "kacres/errors.hpp"

namespace kacres {

DominantWeight::DominantWeight(std::vector<Coord> coeffs)
    : coeffs_(std::move(coeffs))
{
    if (coeffs_.empty())
        throw DomainError("dominant weight needs rank n >= 1");
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        if (coeffs_[i - 1] < coeffs_[i])
            throw DomainError("dominant weight coefficients must be weakly decreasing");
    }
}

WeightDiagram::WeightDiagram(std::vector<Coord> dots)
    : dots_(std::move(dots))
{
    if (dots_.empty())
        throw DomainError("weight diagram needs n >= 1 dots");
    for (std::size_t i = 1; i < dots_.size(); ++i) {
        if (dots_[i - 1] >= dots_[i])
            throw DomainError("weight diagram dots must be strictly increasing");
    }
}

bool WeightDiagram::has_dot(Coord p) const noexcept
{
    return std::binary_search(dots_.begin(), dots_.end(), p);
}

std::size_t WeightDiagram::index_of(Coord p) const noexcept
{
    auto it = std::lower_bound(dots_.begin(), dots_.end(), p);
    if (it == dots_.end() || *it != p)
        return npos;
    return static_cast<std::size_t>(it - dots_.begin());
}

WeightDiagram WeightDiagram::with_moved(Coord from, Coord to) const
{
    if (!has_dot(from))
        throw PreconditionError("no dot at " + std::to_string(from) + " to move");
    if (has_dot(to))
        throw PreconditionError("position " + std::to_string(to) + " is already occupied");
    std::vector<Coord> out = dots_;
    out[index_of(from)] = to;
    std::sort(out.begin(), out.end());
    return WeightDiagram(std::move(out));
}

int RunComposition::total() const noexcept
{
    int s = 0;
    for (int p : parts)
        s += p;
    return s;
}

int RunComposition::odd_parts() const noexcept
{
    return static_cast<int>(std::count_if(parts.begin(), parts.end(), [](int p) { return p % 2 != 0; }));
}

RunComposition make_composition(std::vector<int> parts)
{
    if (parts.empty())
        throw DomainError("composition must have at least one part");
    for (int p : parts) {
        if (p < 1)
            throw DomainError("composition parts must be positive");
    }
    return RunComposition{std::move(parts)};
}

WeightDiagram diagram_from_dominant(const DominantWeight& w)
{
    auto c = w.coeffs();
    const std::size_t n = c.size();
    std::vector<Coord> dots(n);
    for (std::size_t k = 0; k < n; ++k)
        dots[k] = checked_add(c[n - 1 - k], static_cast<Coord>(k), "rho shift");
    return WeightDiagram(std::move(dots));
}

DominantWeight dominant_from_diagram(const WeightDiagram& d)
{
    const std::size_t n = d.size();
    std::vector<Coord> coeffs(n);
    for (std::size_t k = 0; k < n; ++k)
        coeffs[n - 1 - k] = checked_sub(d[k], static_cast<Coord>(k), "rho shift");
    return DominantWeight(std::move(coeffs));
}

RunComposition runs(const WeightDiagram& d)
{
    std::vector<int> left_to_right;
    int current = 1;
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d[i] == d[i - 1] + 1) {
            ++current;
        } else {
            left_to_right.push_back(current);
            current = 1;
        }
    }
    left_to_right.push_back(current);
    std::reverse(left_to_right.begin(), left_to_right.end());
    return RunComposition{std::move(left_to_right)};
}

int atypicality(const WeightDiagram& d)
{
    int pairs = 0;
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d[i] == d[i - 1] + 1)
            ++pairs;
    }
    return pairs;
}

int odd_run_count(const WeightDiagram& d)
{
    return runs(d).odd_parts();
}

namespace {

void require_dot(const WeightDiagram& d, Coord p)
{
    if (!d.has_dot(p))
        throw DomainError(std::to_string(p) + " is not a dot of " + to_string(d));
}

void require_same_size(const WeightDiagram& a, const WeightDiagram& b)
{
    if (a.size() != b.size())
        throw DomainError("diagrams have different numbers of dots: " + to_string(a) + " vs " + to_string(b));
}

} // namespace

bool is_isolated(const WeightDiagram& d, Coord p)
{
    require_dot(d, p);
    return !d.has_dot(p - 1) && !d.has_dot(p + 1);
}

bool is_left_isolated(const WeightDiagram& d, Coord p)
{
    require_dot(d, p);
    return !d.has_dot(p - 1);
}

std::int64_t ell_t(const WeightDiagram& lam, const WeightDiagram& mu, Coord t)
{
    require_same_size(lam, mu);
    auto at_or_left = [t](const WeightDiagram& d) {
        auto dots = d.dots();
        return static_cast<std::int64_t>(std::upper_bound(dots.begin(), dots.end(), t) - dots.begin());
    };
    return at_or_left(lam) - at_or_left(mu);
}

std::int64_t ell(const WeightDiagram& lam, const WeightDiagram& mu)
{
    require_same_size(lam, mu);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        total = checked_add(total, checked_sub(mu[i], lam[i]), "relative length");
    return total;
}

bool leq(const WeightDiagram& mu, const WeightDiagram& lam)
{
    require_same_size(lam, mu);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (lam[i] > mu[i])
            return false;
    }
    return true;
}

WeightDiagram shift(const WeightDiagram& d, Coord c)
{
    std::vector<Coord> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        out[i] = checked_add(d[i], c, "diagram shift");
    return WeightDiagram(std::move(out));
}

WeightDiagram normalize(const WeightDiagram& d, Coord& offset)
{
    offset = d.front();
    return shift(d, checked_sub(0, offset));
}

namespace {

void skip_space(std::string_view s, std::size_t& pos)
{
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
        ++pos;
}

// Accepts ASCII '-' and the Unicode minus sign U+2212.
bool read_int(std::string_view s, std::size_t& pos, std::int64_t& out)
{
    bool negative = false;
    if (pos < s.size() && s[pos] == '-') {
        negative = true;
        ++pos;
    } else if (s.substr(pos, 3) == "\xE2\x88\x92") {
        negative = true;
        pos += 3;
    } else if (pos < s.size() && s[pos] == '+') {
        ++pos;
    }
    std::uint64_t magnitude = 0;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), magnitude);
    if (ec != std::errc() || ptr == s.data() + pos)
        return false;
    pos = static_cast<std::size_t>(ptr - s.data());
    if (negative) {
        if (magnitude > static_cast<std::uint64_t>(INT64_MAX) + 1)
            return false;
        out = magnitude == static_cast<std::uint64_t>(INT64_MAX) + 1 ? INT64_MIN
                                                                      : -static_cast<std::int64_t>(magnitude);
    } else {
        if (magnitude > static_cast<std::uint64_t>(INT64_MAX))
            return false;
        out = static_cast<std::int64_t>(magnitude);
    }
    return true;
}

std::vector<std::int64_t> parse_int_list(std::string_view text, bool bracketed, const char* what)
{
    std::size_t pos = 0;
    skip_space(text, pos);
    if (bracketed) {
        if (pos >= text.size() || text[pos] != '[')
            throw ParseError(std::string(what) + " must start with '['");
        ++pos;
    }
    std::vector<std::int64_t> values;
    skip_space(text, pos);
    if (bracketed && pos < text.size() && text[pos] == ']') {
        ++pos;
    } else {
        for (;;) {
            skip_space(text, pos);
            std::int64_t v = 0;
            if (!read_int(text, pos, v))
                throw ParseError(std::string(what) + ": expected an integer at offset " + std::to_string(pos));
            values.push_back(v);
            skip_space(text, pos);
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            if (bracketed) {
                if (pos >= text.size() || text[pos] != ']')
                    throw ParseError(std::string(what) + ": expected ',' or ']' at offset " + std::to_string(pos));
                ++pos;
            }
            break;
        }
    }
    skip_space(text, pos);
    if (pos != text.size())
        throw ParseError(std::string(what) + ": trailing characters at offset " + std::to_string(pos));
    return values;
}

} // namespace

WeightDiagram parse_diagram(std::string_view text)
{
    auto values = parse_int_list(text, true, "diagram");
    if (values.empty())
        throw ParseError("diagram: n >= 1 required");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i - 1] >= values[i])
            throw ParseError("diagram: dots must be strictly increasing");
    }
    return WeightDiagram(std::move(values));
}

RunComposition parse_composition(std::string_view text)
{
    std::size_t pos = 0;
    skip_space(text, pos);
    const bool bracketed = pos < text.size() && (text[pos] == '[' || text[pos] == '(');
    std::string normalized(text);
    if (bracketed) {
        auto open = normalized.find_first_of("[(");
        auto close = normalized.find_last_of("])");
        if (close == std::string::npos || close < open)
            throw ParseError("runs: unbalanced brackets");
        normalized = "[" + normalized.substr(open + 1, close - open - 1) + "]";
    }
    auto values = parse_int_list(normalized, bracketed, "runs");
    std::vector<int> parts;
    for (auto v : values) {
        if (v < 1 || v > 1'000'000)
            throw ParseError("runs: parts must be positive integers");
        parts.push_back(static_cast<int>(v));
    }
    if (parts.empty())
        throw ParseError("runs: at least one part required");
    return RunComposition{std::move(parts)};
}

std::string to_string(const WeightDiagram& d)
{
    std::string out = "[";
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(d[i]);
    }
    out += ']';
    return out;
}

std::string to_string(const RunComposition& pi)
{
    std::string out = "(";
    for (std::size_t i = 0; i < pi.parts.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(pi.parts[i]);
    }
    out += ')';
    return out;
}

std::string render_ascii(const WeightDiagram& d, Coord lo, Coord hi)
{
    std::string line;
    std::string ruler;
    for (Coord x = lo; x <= hi; ++x) {
        line += d.has_dot(x) ? 'o' : '.';
        const Coord mag = x < 0 ? -x : x;
        ruler += static_cast<char>('0' + mag % 10);
    }
    std::ostringstream os;
    os << line << "\n" << ruler << "   (" << lo << ".." << hi << ")\n";
    return os.str();
}

std::string render_ascii(const WeightDiagram& d)
{
    return render_ascii(d, d.front() - 1, d.back() + 1);
}

} // namespace kacres
