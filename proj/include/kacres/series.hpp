#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "kacres/weight_diagram.hpp"

namespace kacres {

/// Dense univariate polynomial in u with 64-bit integer coefficients.
/// coeffs()[i] is the coefficient of u^i; trailing zeros are trimmed, so the
/// zero polynomial has no coefficients. Arithmetic is overflow-checked.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<std::int64_t> coeffs);
    IntPolynomial(std::initializer_list<std::int64_t> coeffs)
        : IntPolynomial(std::vector<std::int64_t>(coeffs))
    {}

    static IntPolynomial constant(std::int64_t c) { return IntPolynomial({c}); }
    static IntPolynomial u() { return IntPolynomial({0, 1}); }

    const std::vector<std::int64_t>& coeffs() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::int64_t coeff(std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0; }

    std::int64_t eval(std::int64_t x) const;
    std::int64_t eval_at_one() const { return eval(1); }

    IntPolynomial pow(unsigned e) const;
    /// Exact division by an integer; throws InternalError if any coefficient
    /// leaves a remainder.
    IntPolynomial divide_exact(std::int64_t d) const;

    friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
    friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
    friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
    friend IntPolynomial operator*(std::int64_t c, const IntPolynomial& a);
    friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

private:
    void trim();
    std::vector<std::int64_t> coeffs_;
};

std::string to_string(const IntPolynomial& p);

/// First truncation+1 coefficients of a power series in u.
struct TruncatedSeries {
    std::vector<std::int64_t> coeffs;
    int truncation = 0;

    friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;
};

TruncatedSeries truncate(const IntPolynomial& p, int truncation);
TruncatedSeries truncated_product(const TruncatedSeries& a, const TruncatedSeries& b);
/// Multiply by (1-u)^(-m) via m prefix sums.
TruncatedSeries divide_by_one_minus_u(TruncatedSeries s, int m);

/// f_0 = f_1 = 1, f_2k = (1-u) f_2k-1 + u f_2k-2, f_2k+1 = f_2k + u f_2k-1.
IntPolynomial f_poly(int r);

/// The same polynomial from the single-sum binomial formulas in
/// p(u) = -3u^2 + 2u + 1, with the factor 2^k divided out exactly.
IntPolynomial f_poly_closed(int r);

/// Product of f_{pi_j} over the parts.
IntPolynomial f_pi(const RunComposition& pi);

/// s_0..s_D of f_pi(u) / (1-u)^m with m = (n-o)/2.
TruncatedSeries series_coeffs(const RunComposition& pi, int max_degree);

/// (n - o) / 2.
std::int64_t z_complexity(const RunComposition& pi);
/// C(n,2) - C(o,2). Requires 0 <= o <= n and n - o even.
std::int64_t complexity(std::int64_t n, std::int64_t o);
/// l(2n - 2l - 1). Requires 0 <= 2l <= n.
std::int64_t rank_variety_dim(std::int64_t n, std::int64_t l);
/// (n - o) / 2 with the same requirements as complexity.
std::int64_t f_support_dim(std::int64_t n, std::int64_t o);

/// Multiplicity of u = 1 as a root of p. p must be nonzero.
int root_multiplicity_at_one(const IntPolynomial& p);
/// Pole order of S_pi at u = 1 after cancelling common factors.
std::int64_t growth_exponent(const RunComposition& pi);

} // namespace kacres
