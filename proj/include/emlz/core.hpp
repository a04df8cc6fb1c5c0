/**
 * @file    include/emlz/core.hpp
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

#ifndef EMLZ_CORE_HPP_INCLUDED
#define EMLZ_CORE_HPP_INCLUDED

#include <cstdint>
#include <vector>

#include "common.hpp"

namespace emlz {

//=============================================================================
// Domain types.
//
// Text positions are 1-based throughout the library; 0 is reserved as the
// "no position" sentinel. Inputs are arbitrary byte strings: no terminator
// byte is required or assumed, and wherever suffixes are compared, a string
// that runs out of symbols sorts first.
//=============================================================================

// One LZ77 factor. A copy phrase (len >= 1) copies len symbols from the
// 1-based source position src < start; the source may overlap the phrase
// itself. A literal phrase (len == 0) introduces the symbol src in [0..255]
// and covers exactly one position.
struct phrase {
  std::uint64_t src = 0;
  std::uint64_t len = 0;

  static phrase copy(std::uint64_t src, std::uint64_t len) {
    return phrase{src, len};
  }

  static phrase literal(std::uint8_t symbol) { return phrase{symbol, 0}; }

  bool is_literal() const { return len == 0; }

  // Number of text positions this phrase covers.
  std::uint64_t cover() const { return len == 0 ? 1 : len; }

  bool operator==(const phrase &) const = default;
};

using parsing = std::vector<phrase>;

// One matching-statistics record: the longest prefix of the queried string
// starting at pos that occurs in the indexed string, witnessed at src.
// len == 0 means the symbol at pos does not occur at all; src is then
// meaningless and must be ignored.
struct ms_entry {
  std::uint64_t pos = 0;
  std::uint64_t src = 0;
  std::uint64_t len = 0;

  bool operator==(const ms_entry &) const = default;
};

// Longest previous factor at some position: src == 0 encodes "no earlier
// occurrence" and forces len == 0.
struct lpf_entry {
  std::uint64_t src = 0;
  std::uint64_t len = 0;

  bool operator==(const lpf_entry &) const = default;
};

inline std::uint64_t parse_cover(const parsing &p) {
  std::uint64_t total = 0;
  for (const phrase &f : p)
    total += f.cover();
  return total;
}

//=============================================================================
// decode: reconstruct the unique text of a parsing. Copy phrases are decoded
// symbol by symbol so self-overlapping sources come out right.
//=============================================================================

inline std::vector<std::uint8_t> decode(const parsing &p) {
  std::vector<std::uint8_t> text;
  text.reserve(parse_cover(p));
  for (std::size_t i = 0; i < p.size(); ++i) {
    const phrase &f = p[i];
    if (f.is_literal()) {
      if (f.src > 255)
        throw decode_error(i, "literal symbol out of range");
      text.push_back(std::uint8_t(f.src));
    } else {
      const std::uint64_t start = text.size() + 1;
      if (f.src < 1 || f.src >= start)
        throw decode_error(i, "copy source not before phrase start");
      for (std::uint64_t t = 0; t < f.len; ++t)
        text.push_back(text[f.src - 1 + t]);
    }
  }
  return text;
}

// Checks the tiling invariant plus per-phrase bounds without touching any
// text: phrase starts, defined cumulatively, must cover [1..n] exactly.
inline void validate_parsing(const parsing &p, std::uint64_t n) {
  std::uint64_t pos = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const phrase &f = p[i];
    if (f.is_literal()) {
      if (f.src > 255)
        throw format_error(format_error::kind::bad_record,
                           "literal symbol > 255 in phrase " +
                               std::to_string(i));
    } else {
      if (f.src < 1 || f.src >= pos)
        throw format_error(format_error::kind::bad_record,
                           "copy source out of range in phrase " +
                               std::to_string(i));
    }
    pos += f.cover();
  }
  if (pos != n + 1)
    throw format_error(format_error::kind::bad_tiling,
                       "phrases cover " + std::to_string(pos - 1) +
                           " positions, text has " + std::to_string(n));
}

} // namespace emlz

#endif // EMLZ_CORE_HPP_INCLUDED
