/**
 * @file    include/emlz/parser.hpp
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

#ifndef EMLZ_PARSER_HPP_INCLUDED
#define EMLZ_PARSER_HPP_INCLUDED

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "block_index.hpp"
#include "common.hpp"
#include "core.hpp"
#include "ms_engine.hpp"

namespace emlz {

//=============================================================================
// Leftmost-occurrence bookkeeping: a literal is emitted exactly when its
// symbol has never been seen before; the tracker certifies that and makes
// the len==0 <-> literal correspondence checkable. Entries are monotone.
// Restarts may re-parse a position, so re-recording the same position is
// allowed.
//=============================================================================

class leftmost_tracker {
public:
  // Certify a literal at abs_pos and record it.
  void record_literal(std::uint8_t symbol, std::uint64_t abs_pos) {
    std::uint64_t &slot = m_first_seen[symbol];
    if (slot != 0 && slot != abs_pos)
      throw invariant_error(
          "literal for a symbol first seen at position " +
          std::to_string(slot) + ", re-emitted at " + std::to_string(abs_pos));
    if (slot == 0)
      slot = abs_pos;
  }

  std::uint64_t first_seen(std::uint8_t symbol) const {
    return m_first_seen[symbol];
  }

private:
  std::array<std::uint64_t, 256> m_first_seen{};
};

//=============================================================================
// Step 3: merge the inverted matching statistics with the block-internal
// LPF into the absolute LPF restricted to the block. The in-place flavour
// lives on inverted_ms (the pipeline path); this wrapper materializes the
// result for direct inspection.
//=============================================================================

template <typename PosArray>
std::vector<lpf_entry> merge_lpf(inverted_ms<PosArray> &inv,
                                 const block_index &idx) {
  inv.merge_lpf(idx);
  std::vector<lpf_entry> out(idx.size());
  for (std::uint32_t i = 1; i <= idx.size(); ++i)
    out[i - 1] = lpf_entry{inv.src_at(i), inv.len_at(i)};
  return out;
}

//=============================================================================
// Step 4: greedy factorization of the block.
//=============================================================================

struct block_parse_result {
  std::optional<std::uint64_t> tail_start; // set iff a factor abuts block end
  lpf_entry tail_best;                     // its best in-block factor
  std::uint64_t next_block_start = 0;      // meaningful when no tail
  std::uint64_t positions_covered = 0;     // complete phrases + tail
};

// lpf_at(abs_pos) -> lpf_entry (absolute source); emit(phrase, abs_start)
// consumes complete phrases. Parsing runs from parse_start and stops when a
// phrase would end at or beyond block_end: that phrase becomes the tail
// unless this is the final block, in which case nothing can extend it and it
// is emitted as complete.
template <typename LpfAt, typename Emit>
block_parse_result parse_block(LpfAt &&lpf_at, std::uint64_t parse_start,
                               std::uint64_t block_end, bool is_final,
                               leftmost_tracker &tracker,
                               const std::uint8_t *block,
                               std::uint64_t block_start, Emit &&emit) {
  std::uint64_t pos = parse_start;
  block_parse_result res;
  while (pos <= block_end) {
    const lpf_entry e = lpf_at(pos);
    const std::uint64_t cover = e.len == 0 ? 1 : e.len;
    const std::uint64_t end = pos + cover - 1;
    const std::uint8_t symbol = block[pos - block_start];

    if (end >= block_end && !is_final) {
      res.tail_start = pos;
      res.tail_best = e;
      res.positions_covered += block_end - pos + 1;
      return res;
    }

    if (e.len == 0) {
      tracker.record_literal(symbol, pos);
      emit(phrase::literal(symbol), pos);
    } else {
      emit(phrase::copy(e.src, e.len), pos);
    }
    res.positions_covered += cover;
    pos = end + 1;
  }
  res.next_block_start = block_end + 1;
  return res;
}

//=============================================================================
// Boundary rule for an incomplete last factor Z: short tails are re-parsed
// from scratch as the start of the next block (at most doubling the work);
// long tails (|Z| > b/2) go to the streaming long-phrase matcher.
//=============================================================================

enum class tail_action { restart, handoff };

inline tail_action resolve_tail(std::uint64_t tail_len,
                                std::uint64_t block_size) {
  return tail_len <= block_size / 2 ? tail_action::restart
                                    : tail_action::handoff;
}

//=============================================================================
// Relative LZ factorization: parse y greedily where factor lengths are the
// matching statistics of y w.r.t. z, and positions whose symbol does not
// occur in z become literals. Desk-scale reference feature: both strings
// are in memory. Uses the production matching-statistics engine; equality
// with the brute-force definition is property-tested.
//=============================================================================

inline std::vector<ms_entry> matching_statistics(byte_span y, byte_span z) {
  std::vector<ms_entry> ms(y.size());
  if (y.empty())
    return ms;
  if (z.empty()) {
    for (std::uint64_t i = 1; i <= y.size(); ++i)
      ms[i - 1] = ms_entry{i, 0, 0};
    return ms;
  }
  mem_tracker scratch;
  block_index idx(z, 1, scratch);
  memory_prefix_source src(y, y.size());
  scan_prefix(idx, src, y.size(), y.size(), nullptr,
              [&](const scan_event &ev) {
                ms[ev.pos - 1] = ms_entry{ev.pos, ev.src_in_block, ev.len};
              });
  return ms;
}

inline parsing relative_parse(byte_span y, byte_span z) {
  const std::vector<ms_entry> ms = matching_statistics(y, z);
  parsing out;
  std::uint64_t i = 1;
  while (i <= y.size()) {
    const ms_entry &e = ms[i - 1];
    if (e.len == 0) {
      out.push_back(phrase::literal(y[i - 1]));
      i += 1;
    } else {
      out.push_back(phrase::copy(e.src, e.len));
      i += e.len;
    }
  }
  return out;
}

// Inverse of relative_parse: copies refer to z.
inline std::vector<std::uint8_t> decode_relative(const parsing &p,
                                                 byte_span z) {
  std::vector<std::uint8_t> y;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const phrase &f = p[i];
    if (f.is_literal()) {
      if (f.src > 255)
        throw decode_error(i, "literal symbol out of range");
      y.push_back(std::uint8_t(f.src));
    } else {
      if (f.src < 1 || f.src + f.len - 1 > z.size())
        throw decode_error(i, "copy source outside the reference");
      for (std::uint64_t t = 0; t < f.len; ++t)
        y.push_back(z[f.src - 1 + t]);
    }
  }
  return y;
}

} // namespace emlz

#endif // EMLZ_PARSER_HPP_INCLUDED
