/**
 * @file    include/emlz/oracle.hpp
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

#ifndef EMLZ_ORACLE_HPP_INCLUDED
#define EMLZ_ORACLE_HPP_INCLUDED

#include <algorithm>
#include <cstdint>
#include <vector>

#include "core.hpp"

namespace emlz {

//=============================================================================
// Slow, obviously-correct reference implementations. These are the ground
// truth the fast path is tested against; they stay quadratic on purpose and
// are only meant for inputs up to ~10^4 symbols. None of them share code
// with the production pipeline.
//=============================================================================

namespace detail {

// Length of the longest common prefix of text[p..] and text[i..] (1-based),
// with the match additionally capped so it stays inside the text.
inline std::uint64_t lcp_at(byte_span text, std::uint64_t p, std::uint64_t i) {
  const std::uint64_t n = text.size();
  std::uint64_t len = 0;
  while (i + len <= n && p + len <= n && text[p + len - 1] == text[i + len - 1])
    ++len;
  return len;
}

} // namespace detail

// lpf_brute: longest previous factor per position, by trying every earlier
// source. Self-overlapping sources (p + len > i) are allowed.
inline std::vector<lpf_entry> lpf_brute(byte_span text) {
  const std::uint64_t n = text.size();
  std::vector<lpf_entry> lpf(n);
  for (std::uint64_t i = 1; i <= n; ++i) {
    lpf_entry best;
    for (std::uint64_t p = 1; p < i; ++p) {
      const std::uint64_t len = detail::lcp_at(text, p, i);
      if (len > best.len)
        best = {p, len};
    }
    lpf[i - 1] = best;
  }
  return lpf;
}

// lz77_brute: greedy left-to-right parsing into longest previous factors,
// emitting (symbol, 0) at leftmost occurrences.
inline parsing lz77_brute(byte_span text) {
  const std::uint64_t n = text.size();
  parsing out;
  std::uint64_t i = 1;
  while (i <= n) {
    lpf_entry best;
    for (std::uint64_t p = 1; p < i; ++p) {
      const std::uint64_t len = detail::lcp_at(text, p, i);
      if (len > best.len)
        best = {p, len};
    }
    if (best.len == 0) {
      out.push_back(phrase::literal(text[i - 1]));
      i += 1;
    } else {
      out.push_back(phrase::copy(best.src, best.len));
      i += best.len;
    }
  }
  return out;
}

// ms_brute: matching statistics of y w.r.t. z, by trying every source
// position of z. Matches are capped at the end of z and at the end of y.
inline std::vector<ms_entry> ms_brute(byte_span y, byte_span z) {
  const std::uint64_t ny = y.size();
  const std::uint64_t nz = z.size();
  std::vector<ms_entry> ms(ny);
  for (std::uint64_t i = 1; i <= ny; ++i) {
    ms_entry best{i, 0, 0};
    for (std::uint64_t p = 1; p <= nz; ++p) {
      std::uint64_t len = 0;
      while (i + len <= ny && p + len <= nz &&
             y[i + len - 1] == z[p + len - 1])
        ++len;
      if (len > best.len) {
        best.src = p;
        best.len = len;
      }
    }
    ms[i - 1] = best;
  }
  return ms;
}

} // namespace emlz

#endif // EMLZ_ORACLE_HPP_INCLUDED
