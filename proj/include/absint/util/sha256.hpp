#pragma once

#include <string>
#include <string_view>

namespace absint {

// Lowercase hex digest.
std::string sha256_hex(std::string_view data);

}  // namespace absint
