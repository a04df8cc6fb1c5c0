/**
 * @file    include/emlz/suffix_array.hpp
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

#ifndef EMLZ_SUFFIX_ARRAY_HPP_INCLUDED
#define EMLZ_SUFFIX_ARRAY_HPP_INCLUDED

#include <cstdint>

#include "common.hpp"
#include "mem.hpp"

namespace emlz {

namespace detail {

//=============================================================================
// Suffix array by induced sorting (SA-IS). The recursion works on integer
// strings whose last symbol is a unique minimum; the byte-level entry point
// appends an explicit 0 sentinel and shifts symbols by one. Suffix order is
// therefore the "string that runs out first sorts first" order used
// everywhere else in this library.
//=============================================================================

inline void sais_core(const std::int32_t *s, std::int32_t *sa, std::int32_t m,
                      std::int32_t sigma, mem_tracker &tr) {
  if (m == 1) {
    sa[0] = 0;
    return;
  }

  // Type classification: true = S-type. The last symbol (unique minimum)
  // is S-type by convention.
  tracked_array<std::uint8_t> is_s(std::size_t(m), tr);
  is_s[m - 1] = 1;
  for (std::int32_t i = m - 2; i >= 0; --i)
    is_s[i] = (s[i] < s[i + 1] || (s[i] == s[i + 1] && is_s[i + 1])) ? 1 : 0;

  auto is_lms = [&](std::int32_t i) {
    return i > 0 && is_s[i] && !is_s[i - 1];
  };

  tracked_array<std::int32_t> count(std::size_t(sigma), 0, tr);
  for (std::int32_t i = 0; i < m; ++i)
    ++count[s[i]];

  tracked_array<std::int32_t> bkt(std::size_t(sigma), tr);
  auto bucket_heads = [&]() {
    std::int32_t sum = 0;
    for (std::int32_t c = 0; c < sigma; ++c) {
      bkt[c] = sum;
      sum += count[c];
    }
  };
  auto bucket_tails = [&]() {
    std::int32_t sum = 0;
    for (std::int32_t c = 0; c < sigma; ++c) {
      sum += count[c];
      bkt[c] = sum - 1;
    }
  };

  auto induce = [&]() {
    bucket_heads();
    for (std::int32_t r = 0; r < m; ++r) {
      const std::int32_t j = sa[r];
      if (j > 0 && !is_s[j - 1])
        sa[bkt[s[j - 1]]++] = j - 1;
    }
    bucket_tails();
    for (std::int32_t r = m - 1; r >= 0; --r) {
      const std::int32_t j = sa[r];
      if (j > 0 && is_s[j - 1])
        sa[bkt[s[j - 1]]--] = j - 1;
    }
  };

  // Stage 1: sort the LMS substrings by one round of induced sorting from
  // an arbitrary in-bucket order.
  for (std::int32_t r = 0; r < m; ++r)
    sa[r] = -1;
  bucket_tails();
  std::int32_t lms_count = 0;
  for (std::int32_t i = 1; i < m; ++i)
    if (is_lms(i)) {
      sa[bkt[s[i]]--] = i;
      ++lms_count;
    }
  induce();

  // Compact the sorted LMS positions into sa[0..lms_count).
  std::int32_t n1 = 0;
  for (std::int32_t r = 0; r < m; ++r)
    if (is_lms(sa[r]))
      sa[n1++] = sa[r];

  // Name LMS substrings; names live in the upper part of sa, indexed by
  // position/2 (LMS positions are never adjacent, so the slots are unique).
  for (std::int32_t r = n1; r < m; ++r)
    sa[r] = -1;

  auto lms_substrings_equal = [&](std::int32_t a, std::int32_t b) {
    for (std::int32_t d = 0;; ++d) {
      if (a + d >= m || b + d >= m)
        return false;
      if (s[a + d] != s[b + d])
        return false;
      const bool la = d > 0 && is_lms(a + d);
      const bool lb = d > 0 && is_lms(b + d);
      if (la != lb)
        return false;
      if (la)
        return true;
    }
  };

  std::int32_t names = 0;
  std::int32_t prev = -1;
  for (std::int32_t r = 0; r < n1; ++r) {
    const std::int32_t pos = sa[r];
    if (prev < 0 || !lms_substrings_equal(prev, pos))
      ++names;
    sa[n1 + (pos >> 1)] = names - 1;
    prev = pos;
  }

  // Reduced problem: names of LMS substrings in text order.
  tracked_array<std::int32_t> s1(std::size_t(n1), tr);
  tracked_array<std::int32_t> lms_pos(std::size_t(n1), tr);
  {
    std::int32_t k = 0;
    for (std::int32_t i = 1; i < m; ++i)
      if (is_lms(i)) {
        lms_pos[k] = i;
        s1[k] = sa[n1 + (i >> 1)];
        ++k;
      }
  }

  tracked_array<std::int32_t> sa1(std::size_t(n1), tr);
  if (names < n1) {
    sais_core(s1.data(), sa1.data(), n1, names, tr);
  } else {
    for (std::int32_t k = 0; k < n1; ++k)
      sa1[s1[k]] = k;
  }

  // Stage 2: place LMS suffixes in their final relative order and induce
  // the rest.
  for (std::int32_t r = 0; r < m; ++r)
    sa[r] = -1;
  bucket_tails();
  for (std::int32_t r = n1 - 1; r >= 0; --r) {
    const std::int32_t i = lms_pos[sa1[r]];
    sa[bkt[s[i]]--] = i;
  }
  induce();
}

} // namespace detail

// Fills sa_out[0..n) with the 0-based suffix start positions of text in
// increasing lexicographic order (shorter suffix first on ties). Linear
// time; temporaries are charged to the given tracker.
inline void build_suffix_array(byte_span text, std::uint32_t *sa_out,
                               mem_tracker &tr = block_mem()) {
  const std::size_t n = text.size();
  if (n == 0)
    return;
  if (n > std::size_t(0x7ffffffe))
    throw config_error("block too large for 32-bit local positions");

  const std::int32_t m = std::int32_t(n) + 1;
  tracked_array<std::int32_t> s(std::size_t(m), tr);
  for (std::size_t i = 0; i < n; ++i)
    s[i] = std::int32_t(text[i]) + 1;
  s[n] = 0;

  tracked_array<std::int32_t> sa(std::size_t(m), tr);
  detail::sais_core(s.data(), sa.data(), m, 257, tr);

  // Rank 0 is the sentinel suffix; the rest is the answer.
  for (std::size_t r = 0; r < n; ++r)
    sa_out[r] = std::uint32_t(sa[r + 1]);
}

// Kasai's algorithm: lcp_out[0] = 0 and lcp_out[r] = lcp of the suffixes at
// ranks r-1 and r. sa holds 0-based positions. O(n) time, one transient
// 4n-byte inverse array.
inline void build_lcp_array(byte_span text, const std::uint32_t *sa,
                            std::uint32_t *lcp_out,
                            mem_tracker &tr = block_mem()) {
  const std::size_t n = text.size();
  if (n == 0)
    return;
  tracked_array<std::uint32_t> isa(n, tr);
  for (std::size_t r = 0; r < n; ++r)
    isa[sa[r]] = std::uint32_t(r);

  std::size_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t r = isa[i];
    if (r > 0) {
      const std::size_t j = sa[r - 1];
      while (i + h < n && j + h < n && text[i + h] == text[j + h])
        ++h;
      lcp_out[r] = std::uint32_t(h);
      if (h > 0)
        --h;
    } else {
      lcp_out[0] = 0;
      h = 0;
    }
  }
}

} // namespace emlz

#endif // EMLZ_SUFFIX_ARRAY_HPP_INCLUDED
