#include "output.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <system_error>

#include <unistd.h>

#include "ngd/error.hpp"

namespace ngd::cli {

Destination resolve_destination(const std::string& out_flag, std::string_view default_name) {
  if (!out_flag.empty()) return {std::filesystem::path(out_flag)};
  if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0')
    return {std::filesystem::path(dir) / std::string(default_name)};
  return {};
}

void write_atomic(const std::filesystem::path& path, std::string_view text) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw InvalidArgument("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidArgument("cannot open " + tmp.string() + " for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw InvalidArgument("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw InvalidArgument("cannot rename into " + path.string() + ": " + ec.message());
  }
}

void emit(const Destination& dest, std::string_view text) {
  if (dest.is_stdout())
    std::cout << text << std::flush;
  else
    write_atomic(*dest.path, text);
}

}  // namespace ngd::cli
