#pragma once

#include <cstdint>
#include <string>

#include <zlib.h>

#include "layoutforge/errors.hpp"

namespace layoutforge::detail {

// Minimal deterministic PNG writer: 8-bit RGB, filter 0 on every row, and a
// zlib stream built from stored (uncompressed) deflate blocks. Identical
// pixels produce identical bytes on every platform and zlib version, which
// matters because image bytes feed the request digest. No ancillary chunks,
// no timestamps.

inline void put_u32_be(std::string& out, std::uint32_t v) {
  out += static_cast<char>((v >> 24) & 0xff);
  out += static_cast<char>((v >> 16) & 0xff);
  out += static_cast<char>((v >> 8) & 0xff);
  out += static_cast<char>(v & 0xff);
}

inline void put_chunk(std::string& out, const char type[4],
                      const std::string& data) {
  put_u32_be(out, static_cast<std::uint32_t>(data.size()));
  std::string block(type, 4);
  block += data;
  out += block;
  std::uint32_t crc = static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(block.data()),
              static_cast<uInt>(block.size())));
  put_u32_be(out, crc);
}

/// Raw deflate stream of stored blocks wrapped in a zlib container.
inline std::string zlib_stored(const std::string& raw) {
  std::string out;
  out += static_cast<char>(0x78);  // 32K window, deflate
  out += static_cast<char>(0x01);  // no preset dict, fastest flevel

  constexpr std::size_t kMaxBlock = 65535;
  std::size_t pos = 0;
  do {
    std::size_t n = std::min(kMaxBlock, raw.size() - pos);
    bool final_block = pos + n == raw.size();
    out += static_cast<char>(final_block ? 1 : 0);  // BFINAL, BTYPE=00
    out += static_cast<char>(n & 0xff);
    out += static_cast<char>((n >> 8) & 0xff);
    out += static_cast<char>(~n & 0xff);
    out += static_cast<char>((~n >> 8) & 0xff);
    out.append(raw, pos, n);
    pos += n;
  } while (pos < raw.size());

  std::uint32_t adler = static_cast<std::uint32_t>(
      ::adler32(1L, reinterpret_cast<const Bytef*>(raw.data()),
                static_cast<uInt>(raw.size())));
  put_u32_be(out, adler);
  return out;
}

/// `rgb` holds width*height*3 bytes, row-major, top row first.
inline std::string encode_png_rgb(std::uint32_t width, std::uint32_t height,
                                  const std::string& rgb) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3) {
    throw Error("rgb buffer size does not match dimensions");
  }
  std::string raw;
  raw.reserve(rgb.size() + height);
  for (std::uint32_t y = 0; y < height; ++y) {
    raw += '\0';  // filter type 0 (None)
    raw.append(rgb, static_cast<std::size_t>(y) * width * 3,
               static_cast<std::size_t>(width) * 3);
  }

  std::string out("\x89PNG\r\n\x1a\n", 8);
  std::string ihdr;
  put_u32_be(ihdr, width);
  put_u32_be(ihdr, height);
  ihdr += static_cast<char>(8);  // bit depth
  ihdr += static_cast<char>(2);  // color type: truecolor
  ihdr += static_cast<char>(0);  // compression
  ihdr += static_cast<char>(0);  // filter method
  ihdr += static_cast<char>(0);  // no interlace
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", zlib_stored(raw));
  put_chunk(out, "IEND", "");
  return out;
}

}  // namespace layoutforge::detail
