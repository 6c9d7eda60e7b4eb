#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace handover {

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws InvalidInput on characters outside the standard alphabet or bad
/// padding.
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace handover
