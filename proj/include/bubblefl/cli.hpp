#pragma once

#include <iosfwd>

namespace bfl {

/// Exit codes: 0 some value, 1 only failures, 2 no value but some
/// alternative ran out of budget, 3 usage, parse, static or runtime error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace bfl
