#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace ngd::cli {

/// Environment variable naming the directory used when --out is absent.
inline constexpr const char* kOutDirEnv = "NGD_OUT_DIR";

/// Where a command's main output goes: a file, or stdout when empty.
struct Destination {
  std::optional<std::filesystem::path> path;

  [[nodiscard]] bool is_stdout() const noexcept { return !path.has_value(); }
};

/// --out when given; otherwise $NGD_OUT_DIR/<default_name> when that is set;
/// otherwise stdout.
[[nodiscard]] Destination resolve_destination(const std::string& out_flag, std::string_view default_name);

/// Write the whole text to a temporary file next to `path`, then rename it
/// into place, so an interrupted run never leaves a partial file.
void write_atomic(const std::filesystem::path& path, std::string_view text);

/// Write to the destination (atomic for files).
void emit(const Destination& dest, std::string_view text);

}  // namespace ngd::cli
