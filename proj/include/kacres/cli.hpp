#pragma once

#include <iosfwd>

namespace kacres::service {

/// Entry point of the kacres command line. Exit codes: 0 success, 1 failed
/// verification, 2 parse or domain error, 3 degree cap exceeded, 4 internal
/// error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace kacres::service
