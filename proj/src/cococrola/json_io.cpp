#include "cococrola/json_io.hpp"

#include <fstream>
#include <sstream>

#include "cococrola/error.hpp"

namespace cococrola::io {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorKind::io, "read error on " + path.string());
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) fail(ErrorKind::io, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) fail(ErrorKind::io, "write error on " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::io, "cannot rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
}

Json read_json(const fs::path& path) {
  std::string body = read_file(path);
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::format, path.string() + ": invalid JSON: " + e.what());
  }
}

void write_json_atomic(const fs::path& path, const Json& value) {
  write_file_atomic(path, value.dump(2) + "\n");
}

}  // namespace cococrola::io
