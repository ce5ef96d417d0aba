#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace kamlab {

/// Shortest 17-significant-digit decimal form, round-trips bit-exactly.
std::string format_double(double v);

/// Write to a temporary sibling and rename, so failures leave no partial file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace kamlab
