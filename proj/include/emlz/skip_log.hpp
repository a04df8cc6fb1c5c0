/**
 * @file    include/emlz/skip_log.hpp
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

#ifndef EMLZ_SKIP_LOG_HPP_INCLUDED
#define EMLZ_SKIP_LOG_HPP_INCLUDED

#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"
#include "io.hpp"
#include "ms_engine.hpp"

namespace emlz {

//=============================================================================
// On-disk log of long phrases (len >= skip threshold), used by the skipping
// trick. The file is created at full capacity up front and filled from the
// end backward, so reading it forward from the fill pointer visits phrases
// in decreasing start order -- in lockstep with the backward prefix scan.
//
// Records are (start, len), two 40-bit little-endian integers, 10 bytes.
// Capacity: every logged phrase covers >= 40 positions and costs 10 bytes,
// so ceil(n/4) bytes always suffice; hitting the cap means a bug.
//=============================================================================

inline constexpr std::size_t skip_record_bytes = 10;

inline std::uint64_t skip_log_capacity(std::uint64_t n) {
  return (n + 3) / 4;
}

class skip_log_writer {
public:
  skip_log_writer(const std::string &path, std::uint64_t n,
                  io_counters *cnt = nullptr)
      : m_fh(posix_file::create(path)),
        m_capacity(skip_log_capacity(n)), m_fill(m_capacity), m_cnt(cnt) {
    m_fh.truncate(m_capacity);
  }

  // start must increase across appends (phrases are discovered left to
  // right); the caller guarantees len >= threshold.
  void append(std::uint64_t start, std::uint64_t len) {
    if (start <= m_last_start)
      throw invariant_error("skip log: phrase starts must increase");
    m_last_start = start;
    const std::uint64_t used =
        std::uint64_t(m_pending.size() + m_records) * skip_record_bytes;
    if (used + skip_record_bytes > m_capacity)
      throw capacity_error("skip log capacity exceeded");
    m_pending.push_back(skip_phrase{start, len});
    if (m_pending.size() >= 4096)
      flush();
  }

  // Writes pending records into their backward-filled slots: the newest
  // record lands at the lowest offset so a forward read sees decreasing
  // starts.
  void flush() {
    if (m_pending.empty())
      return;
    const std::size_t k = m_pending.size();
    std::vector<std::uint8_t> blob(k * skip_record_bytes);
    for (std::size_t idx = 0; idx < k; ++idx) {
      std::uint8_t *rec = blob.data() + (k - 1 - idx) * skip_record_bytes;
      const skip_phrase &ph = m_pending[idx];
      for (unsigned t = 0; t < 5; ++t)
        rec[t] = std::uint8_t(ph.start >> (8 * t));
      for (unsigned t = 0; t < 5; ++t)
        rec[5 + t] = std::uint8_t(ph.len >> (8 * t));
    }
    m_fill -= blob.size();
    m_fh.write_at(m_fill, blob.data(), blob.size());
    if (m_cnt)
      m_cnt->of(io_category::skip_log).bytes_written += blob.size();
    m_records += k;
    m_pending.clear();
  }

  std::uint64_t fill_offset() const {
    return m_fill - m_pending.size() * skip_record_bytes;
  }
  std::uint64_t capacity() const { return m_capacity; }
  std::uint64_t record_count() const { return m_records + m_pending.size(); }
  const posix_file &handle() const { return m_fh; }

private:
  posix_file m_fh;
  std::uint64_t m_capacity;
  std::uint64_t m_fill;
  std::uint64_t m_records = 0;
  std::uint64_t m_last_start = 0;
  std::vector<skip_phrase> m_pending;
  io_counters *m_cnt;
};

// Record puller over a flushed log: yields phrases with start < upto in
// decreasing start order (a plain forward read of the end-filled file).
class skip_log_stream {
public:
  skip_log_stream(const posix_file &fh, std::uint64_t fill_offset,
                  std::uint64_t capacity, std::uint64_t upto,
                  io_counters *cnt = nullptr, std::size_t buf_size = 65536)
      : m_reader(fh, fill_offset, capacity, buf_size, cnt,
                 io_category::skip_log),
        m_upto(upto) {}

  bool next(skip_phrase &out) {
    std::uint8_t rec[skip_record_bytes];
    while (true) {
      for (std::size_t i = 0; i < skip_record_bytes; ++i)
        if (!m_reader.next(rec[i])) {
          if (i != 0)
            throw io_error("<skip log>", 0, "truncated skip record");
          return false;
        }
      std::uint64_t start = 0, len = 0;
      for (unsigned t = 0; t < 5; ++t)
        start |= std::uint64_t(rec[t]) << (8 * t);
      for (unsigned t = 0; t < 5; ++t)
        len |= std::uint64_t(rec[5 + t]) << (8 * t);
      if (start < m_upto) {
        out = skip_phrase{start, len};
        return true;
      }
      // Records at or past `upto` are simply not visible to this scan.
    }
  }

  skip_cursor::puller as_puller() {
    return [this](skip_phrase &ph) { return next(ph); };
  }

private:
  buffered_reader m_reader;
  std::uint64_t m_upto;
};

} // namespace emlz

#endif // EMLZ_SKIP_LOG_HPP_INCLUDED
