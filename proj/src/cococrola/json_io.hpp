#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace cococrola::io {

using Json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);
// Writes to `<path>.tmp` and renames over the destination, so readers never
// observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

Json read_json(const std::filesystem::path& path);
void write_json_atomic(const std::filesystem::path& path, const Json& value);

}  // namespace cococrola::io
