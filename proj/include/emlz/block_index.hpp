/**
 * @file    include/emlz/block_index.hpp
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

#ifndef EMLZ_BLOCK_INDEX_HPP_INCLUDED
#define EMLZ_BLOCK_INDEX_HPP_INCLUDED

#include <array>
#include <cstdint>
#include <vector>

#include "common.hpp"
#include "core.hpp"
#include "mem.hpp"
#include "rank_sequence.hpp"
#include "suffix_array.hpp"

namespace emlz {

// Suffix-array interval of some matched string: ranks are 0-based and
// inclusive; lo > hi encodes the empty (failed) interval; len is the length
// of the matched string. The full interval with len 0 stands for the empty
// string.
struct sa_interval {
  std::uint32_t lo = 1;
  std::uint32_t hi = 0;
  std::uint32_t len = 0;

  bool empty() const { return lo > hi; }
  std::uint32_t count() const { return empty() ? 0 : hi - lo + 1; }

  static sa_interval none() { return sa_interval{1, 0, 0}; }

  bool operator==(const sa_interval &) const = default;
};

namespace detail {

//=============================================================================
// Longest previous factor inside the block from SA and LCP, in one
// left-to-right pass with a monotone stack (positions increase from bottom
// to top; each entry's lcp field is the minimum LCP between it and the
// entry below it). When rank r evicts a stack entry, that entry's two
// lexicographic neighbours among smaller text positions are the entry below
// it and rank r itself, and the folded lcp fields are exactly the needed
// range minima.
//=============================================================================

inline void lpf_from_sa_lcp(const std::uint32_t *sa, const std::uint32_t *lcp,
                            std::uint32_t b, std::uint32_t *lpf_len,
                            std::uint32_t *lpf_src,
                            mem_tracker &tr = block_mem()) {
  struct entry {
    std::uint32_t pos; // 1-based text position
    std::uint32_t lcp; // min LCP down to the entry below
  };
  tracked_array<entry> stack(b, tr);
  std::size_t top = 0;

  for (std::uint32_t r = 0; r <= b; ++r) {
    // sa holds 1-based positions; the sentinel rank b carries position 0
    // and drains the stack.
    std::uint32_t cur_pos = (r < b) ? sa[r] : 0;
    std::uint32_t cur_lcp = (r < b && r > 0) ? lcp[r] : 0;
    while (top > 0 && cur_pos < stack[top - 1].pos) {
      const entry t = stack[--top];
      const std::uint32_t prev_len = t.lcp;
      const std::uint32_t next_len = cur_lcp;
      const std::uint32_t i = t.pos;
      if (prev_len >= next_len && prev_len > 0) {
        lpf_len[i - 1] = prev_len;
        lpf_src[i - 1] = stack[top - 1].pos; // below the popped entry
      } else if (next_len > prev_len) {
        lpf_len[i - 1] = next_len;
        lpf_src[i - 1] = cur_pos;
      } else {
        lpf_len[i - 1] = 0;
        lpf_src[i - 1] = 0;
      }
      cur_lcp = prev_len < cur_lcp ? prev_len : cur_lcp;
    }
    if (r < b)
      stack[top++] = entry{cur_pos, top == 0 ? 0 : cur_lcp};
  }
}

} // namespace detail

//=============================================================================
// In-memory structures over the current block B: suffix array, LCP array,
// internal LPF, and a wavelet tree over the Burrows-Wheeler transform of B
// for backward left-extension. All arrays are charged to the block memory
// tracker; release_rank() and release_sa_lcp() free stages as the pipeline
// finishes with them. Immutable once constructed.
//=============================================================================

class block_index {
public:
  // block must be non-empty and fit 32-bit local positions; block_start is
  // the absolute (1-based) position of its first symbol.
  block_index(byte_span block, std::uint64_t block_start,
              mem_tracker &tr = block_mem())
      : m_tracker(&tr), m_block_start(block_start) {
    if (block.empty())
      throw config_error("empty block");
    if (block.size() > std::size_t(0x7ffffffe))
      throw config_error("block too large for 32-bit local positions");
    m_b = std::uint32_t(block.size());

    m_block = tracked_array<std::uint8_t>(m_b, tr);
    for (std::uint32_t i = 0; i < m_b; ++i)
      m_block[i] = block[i];

    m_sa = tracked_array<std::uint32_t>(m_b, tr);
    build_suffix_array(byte_span(m_block.data(), m_b), m_sa.data(), tr);
    // 1-based positions from here on.
    for (std::uint32_t r = 0; r < m_b; ++r)
      ++m_sa[r];

    m_lcp = tracked_array<std::uint32_t>(m_b, tr);
    {
      // Kasai works on 0-based positions; shift back temporarily.
      for (std::uint32_t r = 0; r < m_b; ++r)
        --m_sa[r];
      build_lcp_array(byte_span(m_block.data(), m_b), m_sa.data(),
                      m_lcp.data(), tr);
      for (std::uint32_t r = 0; r < m_b; ++r)
        ++m_sa[r];
    }

    m_lpf_len = tracked_array<std::uint32_t>(m_b, tr);
    m_lpf_src = tracked_array<std::uint32_t>(m_b, tr);
    detail::lpf_from_sa_lcp(m_sa.data(), m_lcp.data(), m_b, m_lpf_len.data(),
                            m_lpf_src.data(), tr);

    build_rank_index(tr);
  }

  block_index(const block_index &) = delete;
  block_index &operator=(const block_index &) = delete;

  std::uint32_t size() const { return m_b; }
  std::uint64_t block_start() const { return m_block_start; }
  std::uint64_t block_end() const { return m_block_start + m_b - 1; }

  // Symbol at 1-based local position.
  std::uint8_t sym(std::uint32_t i) const { return m_block[i - 1]; }

  // 1-based local suffix position at 0-based rank.
  std::uint32_t sa_at(std::uint32_t r) const { return m_sa[r]; }
  std::uint32_t lcp_at(std::uint32_t r) const { return m_lcp[r]; }

  const std::uint32_t *sa() const { return m_sa.data(); }
  const std::uint32_t *lcp() const { return m_lcp.data(); }

  lpf_entry lpf_local(std::uint32_t i) const {
    return lpf_entry{m_lpf_src[i - 1], m_lpf_len[i - 1]};
  }
  std::uint32_t lpf_len_local(std::uint32_t i) const { return m_lpf_len[i - 1]; }
  std::uint32_t lpf_src_local(std::uint32_t i) const { return m_lpf_src[i - 1]; }

  sa_interval full_interval() const { return sa_interval{0, m_b - 1, 0}; }

  // Interval of the single symbol c, straight from the cumulative counts.
  sa_interval char_interval(std::uint8_t c) const {
    const std::uint16_t code = m_code_of[c];
    if (code == absent_code)
      return sa_interval::none();
    const std::uint32_t lo = m_csum[code];
    const std::uint32_t hi = m_csum[code + 1];
    if (lo == hi)
      return sa_interval::none();
    return sa_interval{lo, hi - 1, 1};
  }

  // Backward search step: interval of c.w from the interval of w. One rank
  // query per interval endpoint.
  sa_interval extend_left(const sa_interval &iv, std::uint8_t c) const {
    if (iv.empty())
      return sa_interval::none();
    if (iv.len == 0)
      return char_interval(c);
    const std::uint16_t code = m_code_of[c];
    if (code == absent_code)
      return sa_interval::none();
    const std::uint32_t occ_lo = std::uint32_t(m_bwt.rank(code, iv.lo));
    const std::uint32_t occ_hi = std::uint32_t(m_bwt.rank(code, iv.hi + 1));
    if (occ_lo == occ_hi)
      return sa_interval::none();
    // If the last block symbol is c, the length-1 suffix "c" occupies the
    // first slot of c's bucket and is never produced by a backward step.
    const std::uint32_t shift = (m_last_code == code) ? 1 : 0;
    return sa_interval{m_csum[code] + shift + occ_lo,
                       m_csum[code] + shift + occ_hi - 1, iv.len + 1};
  }

  // Narrows an interval whose suffixes share a prefix of length `depth` by
  // the symbol at offset `depth`. Suffixes that end before that offset sort
  // first inside the interval.
  sa_interval narrow(const sa_interval &iv, std::uint32_t depth,
                     std::uint8_t c) const {
    if (iv.empty())
      return sa_interval::none();
    const int target = int(c);
    auto chr = [&](std::uint32_t r) -> int {
      const std::uint32_t p = m_sa[r] + depth; // 1-based position of offset
      return p <= m_b ? int(m_block[p - 1]) : -1;
    };
    // First rank with chr >= target.
    std::uint32_t lo = iv.lo, hi = iv.hi + 1;
    while (lo < hi) {
      const std::uint32_t mid = lo + (hi - lo) / 2;
      if (chr(mid) < target)
        lo = mid + 1;
      else
        hi = mid;
    }
    const std::uint32_t first = lo;
    // First rank with chr > target.
    hi = iv.hi + 1;
    while (lo < hi) {
      const std::uint32_t mid = lo + (hi - lo) / 2;
      if (chr(mid) <= target)
        lo = mid + 1;
      else
        hi = mid;
    }
    if (first == lo)
      return sa_interval::none();
    return sa_interval{first, lo - 1, depth + 1};
  }

  // Longest prefix of the pattern that occurs in B, found by successive
  // binary searches on SA: O(len * log b) symbol probes. pat(t) returns the
  // t-th pattern symbol (0-based) or -1 past the end; cap bounds the length.
  template <typename PatFn>
  sa_interval match_prefix(PatFn &&pat, std::uint64_t cap) const {
    sa_interval iv = full_interval();
    for (std::uint64_t t = 0; t < cap; ++t) {
      const int c = pat(t);
      if (c < 0)
        break;
      const sa_interval next = narrow(iv, std::uint32_t(t), std::uint8_t(c));
      if (next.empty())
        break;
      iv = next;
    }
    return iv;
  }

  // Interval of exactly `pattern`; empty if it does not occur.
  sa_interval interval_by_binary_search(byte_span pattern) const {
    const sa_interval iv = match_prefix(
        [&](std::uint64_t t) {
          return t < pattern.size() ? int(pattern[t]) : -1;
        },
        pattern.size());
    if (iv.len != pattern.size())
      return sa_interval::none();
    return iv;
  }

  void release_rank() { m_bwt.release(); }

  void release_sa_lcp() {
    m_sa.release();
    m_lcp.release();
  }

  void release_lcp() { m_lcp.release(); }

private:
  static constexpr std::uint16_t absent_code = 0xffff;

  void build_rank_index(mem_tracker &tr) {
    // Dense alphabet remap: code 0 is reserved for the one BWT slot that has
    // no preceding symbol, bytes present in B get codes 1..sigma in byte
    // order.
    std::array<std::uint32_t, 256> freq{};
    for (std::uint32_t i = 0; i < m_b; ++i)
      ++freq[m_block[i]];
    m_code_of.fill(absent_code);
    std::uint16_t sigma = 0;
    for (std::uint32_t c = 0; c < 256; ++c)
      if (freq[c])
        m_code_of[c] = ++sigma;

    m_csum.assign(std::size_t(sigma) + 2, 0);
    for (std::uint32_t c = 0; c < 256; ++c)
      if (freq[c])
        m_csum[m_code_of[c] + 1] = freq[c];
    for (std::size_t k = 1; k < m_csum.size(); ++k)
      m_csum[k] += m_csum[k - 1];

    m_last_code = m_code_of[m_block[m_b - 1]];

    tracked_array<std::uint16_t> bwt(m_b, tr);
    for (std::uint32_t r = 0; r < m_b; ++r)
      bwt[r] = (m_sa[r] >= 2) ? m_code_of[m_block[m_sa[r] - 2]]
                              : std::uint16_t(0);
    m_bwt = wavelet_tree(bwt.data(), m_b, sigma, tr);
  }

  mem_tracker *m_tracker;
  std::uint64_t m_block_start;
  std::uint32_t m_b = 0;

  tracked_array<std::uint8_t> m_block;
  tracked_array<std::uint32_t> m_sa;
  tracked_array<std::uint32_t> m_lcp;
  tracked_array<std::uint32_t> m_lpf_len;
  tracked_array<std::uint32_t> m_lpf_src;

  wavelet_tree m_bwt;
  std::array<std::uint16_t, 256> m_code_of{};
  std::vector<std::uint32_t> m_csum;
  std::uint16_t m_last_code = absent_code;
};

// lpf_of_block in its free-standing form, for direct use in tests: computes
// the LPF table of `block` from the given sa/lcp arrays (0-based positions).
inline std::vector<lpf_entry> lpf_of_block(const std::vector<std::uint32_t> &sa,
                                           const std::vector<std::uint32_t> &lcp,
                                           byte_span block) {
  const std::uint32_t b = std::uint32_t(block.size());
  std::vector<lpf_entry> out(b);
  if (b == 0)
    return out;
  std::vector<std::uint32_t> sa1(sa);
  for (std::uint32_t r = 0; r < b; ++r)
    ++sa1[r];
  std::vector<std::uint32_t> len(b), src(b);
  mem_tracker scratch;
  detail::lpf_from_sa_lcp(sa1.data(), lcp.data(), b, len.data(), src.data(),
                          scratch);
  for (std::uint32_t i = 0; i < b; ++i)
    out[i] = lpf_entry{src[i], len[i]};
  return out;
}

} // namespace emlz

#endif // EMLZ_BLOCK_INDEX_HPP_INCLUDED
