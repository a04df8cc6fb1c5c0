/**
 * @file    include/emlz/rank_sequence.hpp
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

#ifndef EMLZ_RANK_SEQUENCE_HPP_INCLUDED
#define EMLZ_RANK_SEQUENCE_HPP_INCLUDED

#include <bit>
#include <cstdint>
#include <vector>

#include "common.hpp"
#include "mem.hpp"

namespace emlz {

//=============================================================================
// Plain bitvector with a one-level rank directory: one 32-bit cumulative
// count per 256 bits (12.5% overhead), at most three full-word popcounts
// per query.
//=============================================================================

class bit_rank {
public:
  bit_rank() = default;

  explicit bit_rank(std::size_t nbits, mem_tracker &tr = block_mem())
      : m_nbits(nbits), m_words((nbits + 63) / 64 + 1, std::uint64_t(0), tr),
        m_cum((nbits + 255) / 256 + 1, std::uint32_t(0), tr) {}

  void set(std::size_t i) { m_words[i >> 6] |= std::uint64_t(1) << (i & 63); }

  // Call once after all bits are set.
  void finish() {
    std::uint32_t sum = 0;
    const std::size_t nblocks = m_cum.size() - 1;
    for (std::size_t blk = 0; blk < nblocks; ++blk) {
      m_cum[blk] = sum;
      for (std::size_t w = blk * 4; w < blk * 4 + 4 && w < m_words.size(); ++w)
        sum += std::uint32_t(std::popcount(m_words[w]));
    }
    m_cum[nblocks] = sum;
  }

  // Number of 1 bits in [0..i).
  std::size_t rank1(std::size_t i) const {
    const std::size_t blk = i >> 8;
    std::size_t r = m_cum[blk];
    const std::size_t word = i >> 6;
    for (std::size_t w = blk * 4; w < word; ++w)
      r += std::size_t(std::popcount(m_words[w]));
    const std::size_t rem = i & 63;
    if (rem)
      r += std::size_t(
          std::popcount(m_words[word] & ((std::uint64_t(1) << rem) - 1)));
    return r;
  }

  std::size_t size() const { return m_nbits; }

  void release() {
    m_words.release();
    m_cum.release();
  }

private:
  std::size_t m_nbits = 0;
  tracked_array<std::uint64_t> m_words;
  tracked_array<std::uint32_t> m_cum;
};

//=============================================================================
// Pointerless wavelet tree over a sequence of small integer codes. This is
// the rank structure behind backward left-extension: rank(code, i) counts
// occurrences of code in the prefix of length i. Space is roughly
// 1.13 * levels bits per element; a query does two bit-ranks per level.
//=============================================================================

class wavelet_tree {
public:
  wavelet_tree() = default;

  wavelet_tree(const std::uint16_t *codes, std::size_t n,
               std::uint16_t max_code, mem_tracker &tr = block_mem())
      : m_size(n) {
    m_levels = 1;
    while ((std::uint32_t(1) << m_levels) <= max_code)
      ++m_levels;

    // Node boundaries per level from code counts.
    std::vector<std::size_t> count(std::size_t(max_code) + 1, 0);
    for (std::size_t i = 0; i < n; ++i)
      ++count[codes[i]];
    m_node_start.resize(m_levels);
    for (std::uint32_t lev = 0; lev < m_levels; ++lev) {
      const std::uint32_t shift = m_levels - lev;
      std::vector<std::uint64_t> starts((std::size_t(1) << lev) + 1, 0);
      for (std::size_t c = 0; c <= max_code; ++c)
        starts[(c >> shift) + 1] += count[c];
      for (std::size_t k = 1; k < starts.size(); ++k)
        starts[k] += starts[k - 1];
      m_node_start[lev] = std::move(starts);
    }

    // Fill the per-level bitvectors, re-partitioning the sequence one level
    // at a time.
    tracked_array<std::uint16_t> cur(n, tr);
    tracked_array<std::uint16_t> next(n, tr);
    for (std::size_t i = 0; i < n; ++i)
      cur[i] = codes[i];

    m_bits.reserve(m_levels);
    for (std::uint32_t lev = 0; lev < m_levels; ++lev) {
      m_bits.emplace_back(n, tr);
      bit_rank &bv = m_bits.back();
      const std::uint32_t bit_shift = m_levels - 1 - lev;
      for (std::size_t i = 0; i < n; ++i)
        if ((cur[i] >> bit_shift) & 1)
          bv.set(i);
      bv.finish();

      if (lev + 1 < m_levels) {
        std::vector<std::uint64_t> cursor(m_node_start[lev + 1].begin(),
                                          m_node_start[lev + 1].end() - 1);
        const std::uint32_t node_shift = m_levels - lev;
        for (std::size_t i = 0; i < n; ++i) {
          const std::uint16_t code = cur[i];
          const std::size_t child =
              (std::size_t(code >> node_shift) << 1) | ((code >> bit_shift) & 1);
          next[cursor[child]++] = code;
        }
        std::swap(cur, next);
      }
    }

    // Cache rank at every node start so queries touch each level twice, not
    // three times.
    m_ones_before.resize(m_levels);
    for (std::uint32_t lev = 0; lev < m_levels; ++lev) {
      m_ones_before[lev].resize(m_node_start[lev].size());
      for (std::size_t k = 0; k < m_node_start[lev].size(); ++k)
        m_ones_before[lev][k] = m_bits[lev].rank1(m_node_start[lev][k]);
    }
  }

  // Occurrences of code in the first `prefix` elements.
  std::size_t rank(std::uint16_t code, std::size_t prefix) const {
    std::size_t pos = prefix;
    std::size_t node = 0;
    for (std::uint32_t lev = 0; lev < m_levels; ++lev) {
      const std::size_t start = m_node_start[lev][node];
      const std::size_t ones_before = m_ones_before[lev][node];
      const std::size_t ones =
          m_bits[lev].rank1(start + pos) - ones_before;
      if ((code >> (m_levels - 1 - lev)) & 1) {
        pos = ones;
        node = node * 2 + 1;
      } else {
        pos -= ones;
        node = node * 2;
      }
    }
    return pos;
  }

  std::size_t size() const { return m_size; }

  void release() {
    for (bit_rank &bv : m_bits)
      bv.release();
    m_bits.clear();
    m_node_start.clear();
    m_ones_before.clear();
  }

private:
  std::size_t m_size = 0;
  std::uint32_t m_levels = 0;
  std::vector<bit_rank> m_bits;
  std::vector<std::vector<std::uint64_t>> m_node_start;
  std::vector<std::vector<std::uint64_t>> m_ones_before;
};

} // namespace emlz

#endif // EMLZ_RANK_SEQUENCE_HPP_INCLUDED
