/**
 * @file    include/emlz/parse_format.hpp
 * @section LICENCE
 *
 * This file is part of emlz v0.1.0
 * See: https://github.com/emlz/emlz
 *
 * Copyright (C) 2025-2026
 *   The emlz developers
 *
 * Permission is hereby granted, free of charge, to any person
 * obtaining a copy of this software and associated documentation
 * files (the "Software"), to deal in the Software without
 * restriction, including without limitation the rights to use,
 * copy, modify, merge, publish, distribute, sublicense, and/or sell
 * copies of the Software, and to permit persons to whom the
 * Software is furnished to do so, subject to the following
 * conditions:
 *
 * The above copyright notice and this permission notice shall be
 * included in all copies or substantial portions of the Software.
 *
 * THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
 * EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES
 * OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND
 * NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT
 * HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY,
 * WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
 * FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR
 * OTHER DEALINGS IN THE SOFTWARE.
 **/

#ifndef EMLZ_PARSE_FORMAT_HPP_INCLUDED
#define EMLZ_PARSE_FORMAT_HPP_INCLUDED

#include <array>
#include <cstdint>
#include <string>

#include "common.hpp"
#include "core.hpp"
#include "io.hpp"

namespace emlz {

//=============================================================================
// On-disk parse format (.lz):
//
//   offset  size  field
//   0       7     magic "EMLZ77\0"
//   7       1     format version (1)
//   8       1     integer width w in bytes: 4 or 5
//   9       8     n, little-endian
//   17      2w*z  records: (src_or_symbol: w bytes LE, len: w bytes LE)
//
// len == 0 marks a literal whose symbol is in src_or_symbol; anything else
// is a copy. The record count is implied by the file size. Everything is
// bit-exact little-endian.
//=============================================================================

inline constexpr std::array<std::uint8_t, 7> parse_magic = {
    'E', 'M', 'L', 'Z', '7', '7', 0};
inline constexpr std::uint8_t parse_version = 1;
inline constexpr std::uint64_t parse_header_bytes = 17;

struct parse_header {
  std::uint64_t n = 0;
  unsigned width = 5;
};

class parse_writer {
public:
  parse_writer(const std::string &path, std::uint64_t n, unsigned width,
               io_counters *cnt = nullptr, std::size_t buf_size = 262144)
      : m_fh(posix_file::create(path)),
        m_out(m_fh, 0, buf_size, cnt, io_category::output), m_width(width) {
    if (width != 4 && width != 5)
      throw config_error("parse width must be 4 or 5 bytes");
    if (width == 4 && n > 0xffffffffull)
      throw config_error("32-bit output width requires n < 2^32");
    m_out.write(parse_magic.data(), parse_magic.size());
    m_out.put(parse_version);
    m_out.put(std::uint8_t(width));
    m_out.put_le(n, 8);
  }

  void put(const phrase &f) {
    m_out.put_le(f.src, m_width);
    m_out.put_le(f.len, m_width);
    ++m_z;
  }

  void finish() { m_out.flush(); }

  std::uint64_t z() const { return m_z; }

private:
  posix_file m_fh;
  buffered_writer m_out;
  unsigned m_width;
  std::uint64_t m_z = 0;
};

inline parse_header read_parse_header(const posix_file &fh) {
  if (fh.size() < parse_header_bytes)
    throw format_error(format_error::kind::truncated, "file shorter than header");
  std::uint8_t hdr[parse_header_bytes];
  fh.read_at(0, hdr, parse_header_bytes);
  for (std::size_t i = 0; i < parse_magic.size(); ++i)
    if (hdr[i] != parse_magic[i])
      throw format_error(format_error::kind::bad_magic, "magic mismatch");
  if (hdr[7] != parse_version)
    throw format_error(format_error::kind::bad_version,
                       "unsupported version " + std::to_string(hdr[7]));
  const unsigned width = hdr[8];
  if (width != 4 && width != 5)
    throw format_error(format_error::kind::bad_width,
                       "width must be 4 or 5, got " + std::to_string(width));
  std::uint64_t n = 0;
  for (unsigned t = 0; t < 8; ++t)
    n |= std::uint64_t(hdr[9 + t]) << (8 * t);
  if (width == 4 && n > 0xffffffffull)
    throw format_error(format_error::kind::bad_width,
                       "width 4 cannot address the stated n");
  return parse_header{n, width};
}

// Streaming record reader; validates per-record invariants and the tiling
// invariant as it goes.
class parse_reader {
public:
  explicit parse_reader(const posix_file &fh, io_counters *cnt = nullptr,
                        std::size_t buf_size = 262144)
      : m_hdr(read_parse_header(fh)),
        m_in(fh, parse_header_bytes, fh.size(), buf_size, cnt,
             io_category::output) {
    const std::uint64_t body = fh.size() - parse_header_bytes;
    if (body % (2 * m_hdr.width) != 0)
      throw format_error(format_error::kind::truncated,
                         "record region not a multiple of the record size");
  }

  const parse_header &header() const { return m_hdr; }

  // Returns false at a clean end of file; the tiling invariant is checked
  // at that point.
  bool next(phrase &out) {
    std::uint8_t rec[10];
    const std::size_t rec_bytes = 2 * m_hdr.width;
    for (std::size_t i = 0; i < rec_bytes; ++i) {
      if (!m_in.next(rec[i])) {
        if (i != 0)
          throw format_error(format_error::kind::truncated, "torn record");
        if (m_pos != m_hdr.n + 1)
          throw format_error(format_error::kind::bad_tiling,
                             "phrases cover " + std::to_string(m_pos - 1) +
                                 " of " + std::to_string(m_hdr.n) +
                                 " positions");
        return false;
      }
    }
    std::uint64_t src = 0, len = 0;
    for (unsigned t = 0; t < m_hdr.width; ++t)
      src |= std::uint64_t(rec[t]) << (8 * t);
    for (unsigned t = 0; t < m_hdr.width; ++t)
      len |= std::uint64_t(rec[m_hdr.width + t]) << (8 * t);

    if (len == 0) {
      if (src > 255)
        throw format_error(format_error::kind::bad_record,
                           "literal symbol > 255 at phrase " +
                               std::to_string(m_index));
    } else {
      if (src < 1 || src >= m_pos)
        throw format_error(format_error::kind::bad_record,
                           "copy source out of range at phrase " +
                               std::to_string(m_index));
      if (m_pos + len - 1 > m_hdr.n)
        throw format_error(format_error::kind::bad_tiling,
                           "phrase " + std::to_string(m_index) +
                               " runs past the end of the text");
    }
    out = phrase{src, len};
    m_pos += out.cover();
    ++m_index;
    return true;
  }

private:
  parse_header m_hdr;
  buffered_reader m_in;
  std::uint64_t m_pos = 1;
  std::uint64_t m_index = 0;
};

inline void write_parse(const std::string &path, const parsing &p,
                        std::uint64_t n, unsigned width,
                        io_counters *cnt = nullptr) {
  parse_writer w(path, n, width, cnt);
  for (const phrase &f : p)
    w.put(f);
  w.finish();
}

inline parsing read_parse(const std::string &path, io_counters *cnt = nullptr,
                          std::uint64_t *n_out = nullptr) {
  posix_file fh = posix_file::open_read(path);
  parse_reader r(fh, cnt);
  parsing p;
  phrase f;
  while (r.next(f))
    p.push_back(f);
  if (n_out)
    *n_out = r.header().n;
  return p;
}

} // namespace emlz

#endif // EMLZ_PARSE_FORMAT_HPP_INCLUDED
