#pragma once

#include <string_view>

namespace bfl {

std::string_view prelude_source();

} // namespace bfl
