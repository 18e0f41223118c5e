#include "kacres/series.hpp"

#include <algorithm>
#include <sstream>

#include "kacres/checked.hpp"
#include "kacres/errors.hpp"

namespace kacres {

IntPolynomial::IntPolynomial(std::vector<std::int64_t> coeffs)
    : coeffs_(std::move(coeffs))
{
    trim();
}

void IntPolynomial::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

std::int64_t IntPolynomial::eval(std::int64_t x) const
{
    std::int64_t acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = checked_add(checked_mul(acc, x, "polynomial evaluation"), *it, "polynomial evaluation");
    return acc;
}

IntPolynomial IntPolynomial::pow(unsigned e) const
{
    IntPolynomial result = constant(1);
    IntPolynomial base = *this;
    while (e) {
        if (e & 1u)
            result = result * base;
        e >>= 1;
        if (e)
            base = base * base;
    }
    return result;
}

IntPolynomial IntPolynomial::divide_exact(std::int64_t d) const
{
    if (d == 0)
        throw DomainError("division by zero");
    std::vector<std::int64_t> out(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] % d != 0)
            throw InternalError("coefficient " + std::to_string(coeffs_[i]) + " of u^" + std::to_string(i) +
                                " is not divisible by " + std::to_string(d));
        out[i] = coeffs_[i] / d;
    }
    return IntPolynomial(std::move(out));
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b)
{
    std::vector<std::int64_t> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = checked_add(a.coeff(i), b.coeff(i), "polynomial sum");
    return IntPolynomial(std::move(out));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b)
{
    std::vector<std::int64_t> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = checked_sub(a.coeff(i), b.coeff(i), "polynomial difference");
    return IntPolynomial(std::move(out));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b)
{
    if (a.is_zero() || b.is_zero())
        return {};
    std::vector<std::int64_t> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
            out[i + j] = checked_add(out[i + j], checked_mul(a.coeffs_[i], b.coeffs_[j], "polynomial product"),
                                     "polynomial product");
    }
    return IntPolynomial(std::move(out));
}

IntPolynomial operator*(std::int64_t c, const IntPolynomial& a)
{
    return IntPolynomial::constant(c) * a;
}

std::string to_string(const IntPolynomial& p)
{
    if (p.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
        std::int64_t c = p.coeffs()[i];
        if (c == 0)
            continue;
        if (first) {
            if (c < 0)
                os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        const std::int64_t mag = c < 0 ? -c : c;
        if (mag != 1 || i == 0)
            os << mag;
        if (i >= 1)
            os << "u";
        if (i >= 2)
            os << "^" << i;
        first = false;
    }
    return os.str();
}

TruncatedSeries truncate(const IntPolynomial& p, int truncation)
{
    if (truncation < 0)
        throw DomainError("truncation order must be nonnegative");
    TruncatedSeries s{std::vector<std::int64_t>(static_cast<std::size_t>(truncation) + 1, 0), truncation};
    for (std::size_t i = 0; i < s.coeffs.size(); ++i)
        s.coeffs[i] = p.coeff(i);
    return s;
}

TruncatedSeries truncated_product(const TruncatedSeries& a, const TruncatedSeries& b)
{
    if (a.truncation != b.truncation)
        throw DomainError("series truncations differ");
    const std::size_t len = a.coeffs.size();
    TruncatedSeries out{std::vector<std::int64_t>(len, 0), a.truncation};
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t j = 0; i + j < len; ++j)
            out.coeffs[i + j] =
                checked_add(out.coeffs[i + j], checked_mul(a.coeffs[i], b.coeffs[j], "series product"), "series product");
    }
    return out;
}

TruncatedSeries divide_by_one_minus_u(TruncatedSeries s, int m)
{
    if (m < 0)
        throw DomainError("pole order must be nonnegative");
    for (int pass = 0; pass < m; ++pass) {
        for (std::size_t i = 1; i < s.coeffs.size(); ++i)
            s.coeffs[i] = checked_add(s.coeffs[i], s.coeffs[i - 1], "series coefficient");
    }
    return s;
}

IntPolynomial f_poly(int r)
{
    if (r < 0)
        throw DomainError("f_r needs r >= 0");
    const IntPolynomial u = IntPolynomial::u();
    const IntPolynomial one_minus_u{1, -1};
    IntPolynomial prev2 = IntPolynomial::constant(1); // f_{s-2}
    IntPolynomial prev1 = IntPolynomial::constant(1); // f_{s-1}
    if (r <= 1)
        return prev1;
    for (int s = 2; s <= r; ++s) {
        IntPolynomial next = (s % 2 == 0) ? one_minus_u * prev1 + u * prev2 : prev1 + u * prev2;
        prev2 = std::move(prev1);
        prev1 = std::move(next);
    }
    return prev1;
}

namespace {

std::int64_t binomial(std::int64_t n, std::int64_t k)
{
    if (k < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i)
        r = checked_mul(r, n - k + i, "binomial") / i;
    return r;
}

} // namespace

IntPolynomial f_poly_closed(int r)
{
    if (r < 0)
        throw DomainError("f_r needs r >= 0");
    const int k = r / 2;
    const IntPolynomial p{1, 2, -3};
    const IntPolynomial one_plus_u{1, 1};
    const IntPolynomial one_minus_u{1, -1};
    IntPolynomial sum;
    for (int i = 0; i <= k; i += 2) {
        const IntPolynomial pk = p.pow(static_cast<unsigned>(i / 2));
        if (r % 2 == 0) {
            sum = sum + binomial(k, i) * (one_plus_u.pow(static_cast<unsigned>(k - i)) * pk);
            if (i + 1 <= k)
                sum = sum + binomial(k, i + 1) * (one_minus_u * one_plus_u.pow(static_cast<unsigned>(k - i - 1)) * pk);
        } else {
            sum = sum + binomial(k + 1, i + 1) * (one_plus_u.pow(static_cast<unsigned>(k - i)) * pk);
        }
    }
    return sum.divide_exact(std::int64_t{1} << k);
}

IntPolynomial f_pi(const RunComposition& pi)
{
    IntPolynomial out = IntPolynomial::constant(1);
    for (int part : pi.parts)
        out = out * f_poly(part);
    return out;
}

std::int64_t z_complexity(const RunComposition& pi)
{
    return (pi.total() - pi.odd_parts()) / 2;
}

TruncatedSeries series_coeffs(const RunComposition& pi, int max_degree)
{
    if (max_degree < 0)
        throw DomainError("max degree must be nonnegative");
    return divide_by_one_minus_u(truncate(f_pi(pi), max_degree), static_cast<int>(z_complexity(pi)));
}

namespace {

void require_parity(std::int64_t n, std::int64_t o)
{
    if (o < 0 || o > n)
        throw DomainError("need 0 <= o <= n, got n=" + std::to_string(n) + " o=" + std::to_string(o));
    if ((n - o) % 2 != 0)
        throw DomainError("n - o must be even, got n=" + std::to_string(n) + " o=" + std::to_string(o));
}

} // namespace

std::int64_t complexity(std::int64_t n, std::int64_t o)
{
    require_parity(n, o);
    return binomial(n, 2) - binomial(o, 2);
}

std::int64_t rank_variety_dim(std::int64_t n, std::int64_t l)
{
    if (l < 0 || 2 * l > n)
        throw DomainError("need 0 <= 2l <= n, got n=" + std::to_string(n) + " l=" + std::to_string(l));
    return checked_mul(l, 2 * n - 2 * l - 1, "rank variety dimension");
}

std::int64_t f_support_dim(std::int64_t n, std::int64_t o)
{
    require_parity(n, o);
    return (n - o) / 2;
}

int root_multiplicity_at_one(const IntPolynomial& p)
{
    if (p.is_zero())
        throw DomainError("zero polynomial has no finite root multiplicity");
    int mult = 0;
    std::vector<std::int64_t> c = p.coeffs();
    while (c.size() > 1 && IntPolynomial(c).eval_at_one() == 0) {
        // Synthetic division by (u - 1).
        std::vector<std::int64_t> q(c.size() - 1);
        std::int64_t carry = 0;
        for (std::size_t i = c.size() - 1; i >= 1; --i) {
            carry = checked_add(carry, c[i], "synthetic division");
            q[i - 1] = carry;
        }
        c = std::move(q);
        ++mult;
    }
    return mult;
}

std::int64_t growth_exponent(const RunComposition& pi)
{
    return z_complexity(pi) - root_multiplicity_at_one(f_pi(pi));
}

} // namespace kacres
