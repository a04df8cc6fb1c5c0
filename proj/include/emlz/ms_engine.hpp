/**
 * @file    include/emlz/ms_engine.hpp
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

#ifndef EMLZ_MS_ENGINE_HPP_INCLUDED
#define EMLZ_MS_ENGINE_HPP_INCLUDED

#include <cstdint>
#include <functional>
#include <optional>

#include "block_index.hpp"
#include "common.hpp"
#include "core.hpp"
#include "mem.hpp"

namespace emlz {

//=============================================================================
// Backward symbol source over the text prefix. next() yields symbols at
// strictly decreasing positions; jump_to() skips ahead (toward position 1);
// window_at() gives the bounded left-to-right re-read access used when a
// match is recomputed from scratch after a skip.
//=============================================================================

class prefix_source {
public:
  virtual ~prefix_source() = default;

  // Symbol at the current cursor position; the cursor then moves one left.
  virtual std::uint8_t next() = 0;

  // Reposition so that the following next() yields the symbol at pos
  // (pos == 0 means the scan is exhausted). Only moves left.
  virtual void jump_to(std::uint64_t pos) = 0;

  // Random access at a position not yet consumed in this direction
  // (pos >= cursor); implementations may re-read from disk.
  virtual std::uint8_t window_at(std::uint64_t pos) = 0;
};

// In-memory prefix for tests and for relative parsing. Counts accesses so
// the streaming contract (each symbol consumed once, plus bounded window
// re-reads) can be asserted.
class memory_prefix_source : public prefix_source {
public:
  memory_prefix_source(byte_span text, std::uint64_t from)
      : m_text(text), m_cursor(from) {}

  std::uint8_t next() override {
    ++m_next_calls;
    return m_text[--m_cursor];
  }

  void jump_to(std::uint64_t pos) override { m_cursor = pos; }

  std::uint8_t window_at(std::uint64_t pos) override {
    ++m_window_reads;
    return m_text[pos - 1];
  }

  std::uint64_t next_calls() const { return m_next_calls; }
  std::uint64_t window_reads() const { return m_window_reads; }

private:
  byte_span m_text;
  std::uint64_t m_cursor;
  std::uint64_t m_next_calls = 0;
  std::uint64_t m_window_reads = 0;
};

//=============================================================================
// Cursor over the long phrases logged so far, pulled in decreasing start
// order in synchrony with the backward scan. find(j) returns the unique
// logged phrase containing position j, if any; successive js must be
// non-increasing.
//=============================================================================

struct skip_phrase {
  std::uint64_t start = 0;
  std::uint64_t len = 0;
};

class skip_cursor {
public:
  using puller = std::function<bool(skip_phrase &)>;

  explicit skip_cursor(puller pull) : m_pull(std::move(pull)) { advance(); }

  const skip_phrase *find(std::uint64_t j) {
    while (m_have && m_cur.start > j)
      advance();
    if (m_have && m_cur.start <= j && j < m_cur.start + m_cur.len)
      return &m_cur;
    return nullptr;
  }

private:
  void advance() { m_have = m_pull(m_cur); }

  puller m_pull;
  skip_phrase m_cur{};
  bool m_have = false;
};

//=============================================================================
// Inverted matching statistics over the block: per suffix-array slot the
// best (longest) evidence seen during the scan, finalized by two LCP-clamped
// propagation passes and a permutation into text order. Absolute sources are
// stored in a 32-bit or 40-bit array depending on the pipeline mode.
//=============================================================================

template <typename PosArray> class inverted_ms {
public:
  inverted_ms(std::uint32_t b, mem_tracker &tr = block_mem())
      : m_tracker(&tr), m_len(b, 0u, tr), m_src(b, tr) {}

  // invert_entry: constant-time recording of one scan entry. The scan hands
  // over the left end of the matched interval; propagation recovers the rest
  // of the interval later.
  void record(std::uint32_t sa_slot, std::uint64_t abs_src, std::uint32_t len) {
    if (len > m_len[sa_slot]) {
      m_len[sa_slot] = len;
      m_src.set(sa_slot, abs_src);
    }
  }

  // finalize_inversion: spread evidence along suffix-array order, clamping
  // by the intervening LCP values (ascending pass, then descending), then
  // map from SA order to text order.
  void finalize(const block_index &idx) {
    const std::uint32_t b = idx.size();
    for (std::uint32_t r = 1; r < b; ++r) {
      const std::uint32_t cand =
          m_len[r - 1] < idx.lcp_at(r) ? m_len[r - 1] : idx.lcp_at(r);
      if (cand > m_len[r]) {
        m_len[r] = cand;
        m_src.set(r, m_src.get(r - 1));
      }
    }
    for (std::uint32_t r = b - 1; r-- > 0;) {
      const std::uint32_t cand =
          m_len[r + 1] < idx.lcp_at(r + 1) ? m_len[r + 1] : idx.lcp_at(r + 1);
      if (cand > m_len[r]) {
        m_len[r] = cand;
        m_src.set(r, m_src.get(r + 1));
      }
    }

    to_text_order(idx);
  }

  // After finalize: evidence for the 1-based local position i.
  std::uint32_t len_at(std::uint32_t i) const { return m_len[i - 1]; }
  std::uint64_t src_at(std::uint32_t i) const { return m_src.get(i - 1); }

  // Merge with the block-internal LPF: the longer factor wins, ties go to
  // the (earlier) cross-block source. In place; afterwards the arrays hold
  // the absolute LPF of the block positions.
  void merge_lpf(const block_index &idx) {
    const std::uint32_t b = idx.size();
    const std::uint64_t base = idx.block_start() - 1;
    for (std::uint32_t i = 1; i <= b; ++i) {
      const std::uint32_t block_len = idx.lpf_len_local(i);
      if (block_len > m_len[i - 1]) {
        m_len[i - 1] = block_len;
        m_src.set(i - 1, base + idx.lpf_src_local(i));
      }
    }
  }

  void release() {
    m_len.release();
    m_src.release();
  }

private:
  void to_text_order(const block_index &idx) {
    const std::uint32_t b = idx.size();
    tracked_array<std::uint8_t> done(b, std::uint8_t(0), *m_tracker);
    for (std::uint32_t r0 = 0; r0 < b; ++r0) {
      if (done[r0])
        continue;
      std::uint32_t held_len = m_len[r0];
      std::uint64_t held_src = m_src.get(r0);
      std::uint32_t cur = r0;
      while (true) {
        const std::uint32_t dst = idx.sa_at(cur) - 1;
        done[cur] = 1;
        if (dst == r0) {
          m_len[dst] = held_len;
          m_src.set(dst, held_src);
          break;
        }
        const std::uint32_t tmp_len = m_len[dst];
        const std::uint64_t tmp_src = m_src.get(dst);
        m_len[dst] = held_len;
        m_src.set(dst, held_src);
        held_len = tmp_len;
        held_src = tmp_src;
        cur = dst;
      }
    }
  }

  mem_tracker *m_tracker;
  tracked_array<std::uint32_t> m_len;
  PosArray m_src;
};

//=============================================================================
// The backward scan (the pipeline's bottleneck): for each position j of the
// prefix, the longest prefix of X[j..] that is a substring of the block,
// maintained by backward left-extension and rebuilt by SA binary search when
// the extension fails. Ranges lying inside an already-known long phrase are
// jumped over (the skipping trick); the match after a jump is recomputed
// from scratch reading left-to-right through the source's window.
//=============================================================================

struct scan_event {
  std::uint64_t pos;        // position in the prefix (1-based)
  std::uint32_t sa_lo;      // left end of the matched SA interval
  std::uint32_t src_in_block; // witness position inside B (1-based local)
  std::uint32_t len;        // match length (0 if the symbol is absent from B)
};

struct scan_stats {
  std::uint64_t emitted = 0;
  std::uint64_t skips = 0;
  std::uint64_t positions_skipped = 0;
  std::uint64_t rebuilds = 0;
  std::uint64_t symbols_scanned = 0;
};

namespace detail {

// Longest prefix of V[j..scan_end] occurring in the block, from scratch.
// V is the prefix (through src) glued to the block itself.
inline sa_interval recompute_after_skip(const block_index &idx,
                                        prefix_source &src, std::uint64_t a_len,
                                        std::uint64_t j,
                                        std::uint64_t scan_end) {
  const std::uint64_t avail = scan_end - j + 1;
  const std::uint64_t cap = avail < idx.size() ? avail : idx.size();
  return idx.match_prefix(
      [&](std::uint64_t t) -> int {
        const std::uint64_t p = j + t;
        return (p <= a_len) ? int(src.window_at(p))
                            : int(idx.sym(std::uint32_t(p - a_len)));
      },
      cap);
}

// Longest prefix of c.w where w is the current match: the old match string
// can be read out of the block itself, so no prefix symbols are touched.
inline sa_interval rebuild_after_fail(const block_index &idx,
                                      const sa_interval &old_iv,
                                      std::uint8_t c) {
  if (old_iv.len == 0)
    return idx.full_interval();
  const std::uint32_t w_start = idx.sa_at(old_iv.lo);
  return idx.match_prefix(
      [&](std::uint64_t t) -> int {
        return t == 0 ? int(c) : int(idx.sym(w_start + std::uint32_t(t) - 1));
      },
      old_iv.len); // a failed extension bounds the new match by the old one
}

} // namespace detail

// Scans positions scan_end down to 1 of the string V = X[1] .. X[a_len]
// glued to the block (V has length scan_end; symbols above a_len come from
// the block). Emits one scan_event per position j <= a_len, in strictly
// decreasing j, except for positions inside logged long phrases whose match
// is contained in the phrase. sink(event) consumes entries immediately; no
// matching-statistics array is materialized here.
template <typename Sink>
scan_stats scan_prefix(const block_index &idx, prefix_source &src,
                       std::uint64_t a_len, std::uint64_t scan_end,
                       skip_cursor *skips, Sink &&sink) {
  scan_stats stats;
  sa_interval iv = idx.full_interval();
  std::uint64_t j = scan_end;
  bool match_from_jump = false;

  while (j >= 1) {
    if (!match_from_jump) {
      const std::uint8_t c =
          (j > a_len) ? idx.sym(std::uint32_t(j - a_len)) : src.next();
      ++stats.symbols_scanned;
      const sa_interval ext = idx.extend_left(iv, c);
      if (!ext.empty()) {
        iv = ext;
      } else {
        ++stats.rebuilds;
        iv = detail::rebuild_after_fail(idx, iv, c);
      }
    }
    match_from_jump = false;

    if (j > a_len) {
      --j;
      continue;
    }

    if (skips && iv.len > 0) {
      if (const skip_phrase *ph = skips->find(j);
          ph && j + iv.len <= ph->start + ph->len) {
        ++stats.skips;
        stats.positions_skipped += j - ph->start + 1;
        if (ph->start <= 1)
          break;
        const std::uint64_t j2 = ph->start - 1;
        src.jump_to(j2 - 1);
        iv = detail::recompute_after_skip(idx, src, a_len, j2, scan_end);
        j = j2;
        match_from_jump = true;
        continue;
      }
    }

    sink(scan_event{j, iv.lo, iv.empty() ? 0 : idx.sa_at(iv.lo), iv.len});
    ++stats.emitted;
    --j;
  }
  return stats;
}

} // namespace emlz

#endif // EMLZ_MS_ENGINE_HPP_INCLUDED
