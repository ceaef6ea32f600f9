#include "cococrola/generation/png.hpp"

#include <zlib.h>

#include <vector>

#include "cococrola/error.hpp"

namespace cococrola::generation {

namespace {

void put_be32(std::string& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

void put_chunk(std::string& out, const char type[4], const std::string& data) {
  put_be32(out, static_cast<std::uint32_t>(data.size()));
  std::string body(type, 4);
  body += data;
  out += body;
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
  put_be32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

std::string encode_png_rgb(std::span<const std::uint8_t> pixels, std::uint32_t width, std::uint32_t height) {
  if (width == 0 || height == 0) fail(ErrorKind::invalid_argument, "png: empty image");
  if (pixels.size() != static_cast<std::size_t>(width) * height * 3) fail(ErrorKind::invalid_argument, "png: pixel buffer size mismatch");

  std::vector<std::uint8_t> raw;
  raw.reserve((static_cast<std::size_t>(width) * 3 + 1) * height);
  for (std::uint32_t y = 0; y < height; ++y) {
    raw.push_back(0);  // filter: none
    auto row = pixels.subspan(static_cast<std::size_t>(y) * width * 3, static_cast<std::size_t>(width) * 3);
    raw.insert(raw.end(), row.begin(), row.end());
  }
  uLongf compressed_len = compressBound(static_cast<uLong>(raw.size()));
  std::string compressed(compressed_len, '\0');
  if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &compressed_len, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
    fail(ErrorKind::internal, "png: zlib compression failed");
  compressed.resize(compressed_len);

  std::string out("\x89PNG\r\n\x1a\n", 8);
  std::string ihdr;
  put_be32(ihdr, width);
  put_be32(ihdr, height);
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(2);  // colour type: RGB
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", compressed);
  put_chunk(out, "IEND", "");
  return out;
}

}  // namespace cococrola::generation
