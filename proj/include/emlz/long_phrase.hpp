/**
 * @file    include/emlz/long_phrase.hpp
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

#ifndef EMLZ_LONG_PHRASE_HPP_INCLUDED
#define EMLZ_LONG_PHRASE_HPP_INCLUDED

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "common.hpp"
#include "core.hpp"
#include "io.hpp"

namespace emlz {

namespace twoway {

//=============================================================================
// Two-way exact string matching (Crochemore-Perrin): one forward pass over
// the text, O(1) words of state beyond the pattern, all occurrences. The
// text is consumed through a ring buffer of pattern size, so the total
// working memory is two pattern-sized buffers plus a few words.
//=============================================================================

// Critical factorization: start of the chosen maximal suffix and the
// corresponding period. Indices are 0-based; the chosen suffix is the later
// of the maximal suffixes under the two lexicographic orders.
inline void critical_factorization(byte_span x, std::uint64_t &suffix,
                                   std::uint64_t &period) {
  const std::uint64_t m = x.size();

  auto max_suffix = [&](bool reversed, std::uint64_t &p) -> std::uint64_t {
    std::uint64_t ms = std::uint64_t(-1); // position before the suffix
    std::uint64_t j = 0, k = 1;
    p = 1;
    while (j + k < m) {
      const std::uint8_t a = x[j + k];
      const std::uint8_t b = x[ms + k]; // ms wraps to j+k>=1 > 0 slots safely
      const bool a_before = reversed ? (b < a) : (a < b);
      if (a_before) {
        j += k;
        k = 1;
        p = j - ms;
      } else if (a == b) {
        if (k != p)
          ++k;
        else {
          j += p;
          k = 1;
        }
      } else {
        ms = j++;
        k = 1;
        p = 1;
      }
    }
    return ms;
  };

  std::uint64_t p1 = 1, p2 = 1;
  const std::uint64_t s1 = max_suffix(false, p1);
  const std::uint64_t s2 = max_suffix(true, p2);
  if (s2 + 1 < s1 + 1) { // unsigned wrap: -1 + 1 == 0
    suffix = s1 + 1;
    period = p1;
  } else {
    suffix = s2 + 1;
    period = p2;
  }
}

// Ring view over a byte stream: serves positions in [high - cap, high) where
// high is how much has been pulled so far.
template <typename Pull> class stream_ring {
public:
  stream_ring(std::size_t cap, Pull &pull) : m_buf(cap), m_pull(pull) {}

  std::uint8_t at(std::uint64_t pos) {
    while (m_high <= pos) {
      m_buf[std::size_t(m_high % m_buf.size())] = m_pull();
      ++m_high;
    }
    return m_buf[std::size_t(pos % m_buf.size())];
  }

  std::uint64_t window_bytes() const { return m_buf.size(); }

private:
  std::vector<std::uint8_t> m_buf;
  Pull &m_pull;
  std::uint64_t m_high = 0;
};

// Reports every occurrence start (0-based offset into the streamed text) of
// pattern in the first scan_len streamed bytes. pull() must yield scan_len
// bytes. O(1) state beyond the pattern and the pattern-sized ring.
template <typename Pull, typename OnMatch>
void find_all(byte_span pattern, Pull &&pull, std::uint64_t scan_len,
              OnMatch &&on_match) {
  const std::uint64_t m = pattern.size();
  if (m == 0 || scan_len < m)
    return;

  if (m == 1) {
    const std::uint8_t target = pattern[0];
    for (std::uint64_t i = 0; i < scan_len; ++i)
      if (pull() == target)
        on_match(i);
    return;
  }

  stream_ring ring(std::size_t(m), pull);

  std::uint64_t suffix = 0, period = 0;
  critical_factorization(pattern, suffix, period);

  const bool periodic =
      suffix + period <= m &&
      std::memcmp(pattern.data(), pattern.data() + period, std::size_t(suffix)) == 0;

  std::uint64_t j = 0;
  if (periodic) {
    std::uint64_t memory = 0;
    while (j + m <= scan_len) {
      std::uint64_t i = suffix > memory ? suffix : memory;
      while (i < m && pattern[i] == ring.at(j + i))
        ++i;
      if (i >= m) {
        i = suffix - 1;
        while (i + 1 > memory && pattern[i] == ring.at(j + i))
          --i; // wraps past 0 only when memory == 0, by design
        if (i + 1 <= memory)
          on_match(j);
        j += period;
        memory = m - period;
      } else {
        j += i - suffix + 1;
        memory = 0;
      }
    }
  } else {
    const std::uint64_t shift =
        (suffix > m - suffix ? suffix : m - suffix) + 1;
    while (j + m <= scan_len) {
      std::uint64_t i = suffix;
      while (i < m && pattern[i] == ring.at(j + i))
        ++i;
      if (i >= m) {
        i = suffix - 1;
        while (i != std::uint64_t(-1) && pattern[i] == ring.at(j + i))
          --i;
        if (i == std::uint64_t(-1))
          on_match(j);
        j += shift;
      } else {
        j += i - suffix + 1;
      }
    }
  }
}

} // namespace twoway

//=============================================================================
// find_occurrences: all occurrence end positions (1-based, inclusive) of the
// pattern whose start is < limit, in one forward pass over the text stream.
// sink(end_pos) is called in increasing order.
//=============================================================================

struct matcher_stats {
  std::uint64_t window_bytes = 0; // ring buffer: pattern-sized
  std::uint64_t text_streamed = 0;
};

template <typename ByteSrc, typename Sink>
matcher_stats find_occurrences(byte_span pattern, ByteSrc &&next_byte,
                               std::uint64_t n, std::uint64_t limit,
                               Sink &&sink) {
  matcher_stats st;
  st.window_bytes = pattern.size();
  if (pattern.empty() || limit <= 1)
    return st;
  // Only starts <= limit-1 matter, so only the first limit-1+|P|-1 symbols
  // can participate.
  const std::uint64_t scan_len =
      std::min<std::uint64_t>(n, limit - 1 + pattern.size() - 1);
  auto pull = [&]() {
    ++st.text_streamed;
    return next_byte();
  };
  twoway::find_all(pattern, pull, scan_len, [&](std::uint64_t start0) {
    const std::uint64_t start = start0 + 1;
    if (start < limit)
      sink(start + pattern.size() - 1);
  });
  return st;
}

//=============================================================================
// extend_candidates: intersect a round's surviving occurrence end positions
// with the next pattern chunk. Candidates arrive as ascending end positions;
// a candidate survives when the text right after it matches the whole chunk.
// When every candidate dies, the longest partial match (and its witness)
// determines where the factor really ends.
//=============================================================================

struct extend_result {
  std::uint64_t survivors = 0;
  std::uint64_t best_partial = 0;     // longest prefix of the chunk matched
  std::uint64_t best_partial_end = 0; // end position of that candidate
};

// pull_candidate(e) -> false at end of candidate stream; push(e') records a
// surviving candidate advanced by |chunk|. text_at pulls the text stream
// sequentially: it is called with strictly increasing positions.
template <typename CandIn, typename CandOut, typename TextByte>
extend_result extend_candidates(CandIn &&pull_candidate, byte_span chunk,
                                std::uint64_t n, TextByte &&text_byte_at,
                                CandOut &&push) {
  extend_result res;
  const std::uint64_t q = chunk.size();
  std::vector<std::uint8_t> ring(static_cast<std::size_t>(q));
  std::uint64_t streamed_to = 0; // text positions [1..streamed_to] seen

  std::uint64_t e = 0;
  while (pull_candidate(e)) {
    if (res.best_partial_end == 0)
      res.best_partial_end = e; // fallback witness even for 0-length partial
    const std::uint64_t avail = std::min<std::uint64_t>(q, n - e);
    // Stream forward to e + avail, keeping the last q bytes.
    while (streamed_to < e + avail) {
      ++streamed_to;
      ring[std::size_t(streamed_to % q)] = text_byte_at(streamed_to);
    }
    std::uint64_t t = 0;
    while (t < avail && ring[std::size_t((e + 1 + t) % q)] == chunk[t])
      ++t;
    if (t == q) {
      push(e + q);
      ++res.survivors;
    } else if (t > res.best_partial) {
      res.best_partial = t;
      res.best_partial_end = e;
    }
  }
  return res;
}

//=============================================================================
// resolve_long_phrase: the true LZ factor at phrase_start, for factors that
// outgrow the block machinery (len > b/2, possibly longer than memory). The
// pattern is grown chunk by chunk; each round intersects the on-disk
// candidate set of occurrence end positions with the next chunk, streaming
// the text forward once. known_len/known_src come from the block parse and
// guarantee the first round has a witness.
//=============================================================================

struct long_phrase_result {
  phrase ph;
  std::uint64_t rounds = 0;
  std::uint64_t candidate_peak = 0;
};

namespace detail {

inline void write_pos40(buffered_writer &w, std::uint64_t v) { w.put_le(v, 5); }

class cand_file_reader {
public:
  explicit cand_file_reader(const std::string &path, io_counters *cnt)
      : m_fh(posix_file::open_read(path)),
        m_in(m_fh, 0, m_fh.size(), 65536, cnt, io_category::candidates) {}

  bool next(std::uint64_t &out) {
    std::uint8_t rec[5];
    for (std::size_t i = 0; i < 5; ++i)
      if (!m_in.next(rec[i])) {
        if (i != 0)
          throw io_error(m_fh.path(), 0, "torn candidate record");
        return false;
      }
    out = 0;
    for (unsigned t = 0; t < 5; ++t)
      out |= std::uint64_t(rec[t]) << (8 * t);
    return true;
  }

private:
  posix_file m_fh;
  buffered_reader m_in;
};

} // namespace detail

inline long_phrase_result
resolve_long_phrase(const posix_file &text, std::uint64_t n,
                    std::uint64_t phrase_start, std::uint64_t known_len,
                    std::uint64_t chunk_size, const std::string &cand_path,
                    io_counters *cnt = nullptr) {
  if (phrase_start <= 1 || known_len == 0)
    throw invariant_error("long phrase needs an earlier witness");

  const std::string path_a = cand_path;
  const std::string path_b = cand_path + ".swap";

  std::vector<std::uint8_t> chunk;
  auto read_chunk = [&](std::uint64_t from, std::uint64_t len) {
    chunk.resize(std::size_t(len));
    text.read_at(from - 1, chunk.data(), std::size_t(len));
    if (cnt)
      cnt->of(io_category::candidates).bytes_read += len;
  };

  long_phrase_result res;

  // Round 1: all occurrences of the first chunk with start < phrase_start.
  const std::uint64_t remaining_total = n - phrase_start + 1;
  std::uint64_t c1 = std::min<std::uint64_t>(chunk_size, known_len);
  c1 = std::min<std::uint64_t>(c1, remaining_total);
  read_chunk(phrase_start, c1);

  std::uint64_t candidates = 0;
  {
    const std::uint64_t scan_end =
        std::min<std::uint64_t>(n, phrase_start - 1 + c1 - 1);
    posix_file out_fh = posix_file::create(path_a);
    buffered_writer out(out_fh, 0, 65536, cnt, io_category::candidates);
    buffered_reader in(text, 0, scan_end, 65536, cnt,
                       io_category::candidates);
    auto next_byte = [&]() {
      std::uint8_t b = 0;
      in.next(b);
      return b;
    };
    find_occurrences(byte_span(chunk.data(), chunk.size()), next_byte, scan_end,
                     phrase_start, [&](std::uint64_t end_pos) {
                       detail::write_pos40(out, end_pos);
                       ++candidates;
                     });
    out.flush();
  }
  res.rounds = 1;
  res.candidate_peak = candidates;
  if (candidates == 0)
    throw invariant_error("long phrase lost its witness in round 1");

  std::uint64_t matched = c1;
  std::string cur = path_a, other = path_b;
  std::uint64_t final_src = 0;

  while (true) {
    if (matched == remaining_total)
      break; // factor runs to the end of the text
    const std::uint64_t q =
        std::min<std::uint64_t>(chunk_size, remaining_total - matched);
    read_chunk(phrase_start + matched, q);

    detail::cand_file_reader cands(cur, cnt);
    posix_file out_fh = posix_file::create(other);
    buffered_writer out(out_fh, 0, 65536, cnt, io_category::candidates);

    // The text is streamed forward once per round through a pread window;
    // candidate ends ascend, so positions ascend too.
    std::vector<std::uint8_t> tbuf(65536);
    std::uint64_t tbuf_lo = 1, tbuf_fill = 0;
    auto text_byte_at = [&](std::uint64_t pos) {
      if (pos < tbuf_lo || pos >= tbuf_lo + tbuf_fill) {
        const std::uint64_t want =
            std::min<std::uint64_t>(tbuf.size(), n - pos + 1);
        text.read_at(pos - 1, tbuf.data(), std::size_t(want));
        if (cnt)
          cnt->of(io_category::candidates).bytes_read += want;
        tbuf_lo = pos;
        tbuf_fill = want;
      }
      return tbuf[std::size_t(pos - tbuf_lo)];
    };

    const extend_result ext = extend_candidates(
        [&](std::uint64_t &e) { return cands.next(e); },
        byte_span(chunk.data(), chunk.size()), n, text_byte_at,
        [&](std::uint64_t e) { detail::write_pos40(out, e); });
    out.flush();
    ++res.rounds;

    if (ext.survivors == 0) {
      // The factor ends inside this chunk at the best partial extension.
      final_src = ext.best_partial_end - matched + 1;
      matched += ext.best_partial;
      break;
    }
    res.candidate_peak = std::max(res.candidate_peak, ext.survivors);
    matched += q;
    std::swap(cur, other);
  }

  if (final_src == 0) {
    detail::cand_file_reader cands(cur, cnt);
    std::uint64_t e = 0;
    if (!cands.next(e))
      throw invariant_error("long phrase candidate set vanished");
    final_src = e - matched + 1;
  }

  remove_file(path_a);
  remove_file(path_b);

  res.ph = phrase::copy(final_src, matched);
  return res;
}

} // namespace emlz

#endif // EMLZ_LONG_PHRASE_HPP_INCLUDED
