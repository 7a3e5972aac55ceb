#pragma once

#include <string>

namespace ngd {

/// Shortest decimal text that parses back to exactly the same double
/// ("nan", "inf", "-inf" for non-finite values).
[[nodiscard]] std::string format_number(double x);

}  // namespace ngd
