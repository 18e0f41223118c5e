#pragma once

#include <cstdint>
#include <string_view>

#include "kacres/errors.hpp"

namespace kacres {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b, std::string_view what = "addition")
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError(std::string(what) + " overflows 64-bit integer");
    return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b, std::string_view what = "subtraction")
{
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        throw OverflowError(std::string(what) + " overflows 64-bit integer");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b, std::string_view what = "multiplication")
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError(std::string(what) + " overflows 64-bit integer");
    return r;
}

} // namespace kacres
