/**
 * @file    include/emlz/io.hpp
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

#ifndef EMLZ_IO_HPP_INCLUDED
#define EMLZ_IO_HPP_INCLUDED

#include <algorithm>
#include <cerrno>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include "common.hpp"
#include "ms_engine.hpp"

namespace emlz {

//=============================================================================
// I/O volume accounting. One read/write pair per traffic category; counters
// are monotone and never reset during a run.
//=============================================================================

enum class io_category : int {
  text_scan = 0, // block loads + backward prefix scans + post-skip re-reads
  skip_log = 1,
  candidates = 2, // long-phrase machinery: text streaming + scratch files
  output = 3,
  reverse = 4, // one-time text reversal
};

struct io_counters {
  struct channel {
    std::uint64_t bytes_read = 0;
    std::uint64_t bytes_written = 0;
  };
  channel cat[5];

  channel &of(io_category c) { return cat[int(c)]; }
  const channel &of(io_category c) const { return cat[int(c)]; }

  std::uint64_t total_read() const {
    std::uint64_t s = 0;
    for (const channel &ch : cat)
      s += ch.bytes_read;
    return s;
  }
  std::uint64_t total_written() const {
    std::uint64_t s = 0;
    for (const channel &ch : cat)
      s += ch.bytes_written;
    return s;
  }
};

// Test hook: the backward scanner logs every disk access it makes so the
// sequential-access discipline can be asserted.
struct access_event {
  enum class kind { scan_begin, read_main, read_window };
  kind k;
  std::uint64_t offset = 0;
  std::uint64_t len = 0;
};

using access_recorder = std::vector<access_event>;

//=============================================================================
// Thin RAII pread/pwrite file handle.
//=============================================================================

class posix_file {
public:
  posix_file() = default;

  static posix_file open_read(const std::string &path) {
    const int fd = ::open(path.c_str(), O_RDONLY);
    if (fd < 0)
      throw io_error(path, 0, std::string("open failed: ") + std::strerror(errno));
    return posix_file(fd, path);
  }

  static posix_file create(const std::string &path) {
    const int fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_TRUNC, 0644);
    if (fd < 0)
      throw io_error(path, 0, std::string("create failed: ") + std::strerror(errno));
    return posix_file(fd, path);
  }

  posix_file(posix_file &&o) noexcept : m_fd(o.m_fd), m_path(std::move(o.m_path)) {
    o.m_fd = -1;
  }
  posix_file &operator=(posix_file &&o) noexcept {
    if (this != &o) {
      close();
      m_fd = o.m_fd;
      m_path = std::move(o.m_path);
      o.m_fd = -1;
    }
    return *this;
  }
  posix_file(const posix_file &) = delete;
  posix_file &operator=(const posix_file &) = delete;

  ~posix_file() { close(); }

  void close() {
    if (m_fd >= 0) {
      ::close(m_fd);
      m_fd = -1;
    }
  }

  bool is_open() const { return m_fd >= 0; }
  const std::string &path() const { return m_path; }

  std::uint64_t size() const {
    struct stat st;
    if (::fstat(m_fd, &st) != 0)
      throw io_error(m_path, 0, std::string("fstat failed: ") + std::strerror(errno));
    return std::uint64_t(st.st_size);
  }

  void read_at(std::uint64_t offset, void *buf, std::size_t count) const {
    std::uint8_t *p = static_cast<std::uint8_t *>(buf);
    std::size_t got = 0;
    while (got < count) {
      const ssize_t r =
          ::pread(m_fd, p + got, count - got, off_t(offset + got));
      if (r < 0) {
        if (errno == EINTR)
          continue;
        throw io_error(m_path, offset + got,
                       std::string("read failed: ") + std::strerror(errno));
      }
      if (r == 0)
        throw io_error(m_path, offset + got, "unexpected end of file");
      got += std::size_t(r);
    }
  }

  void write_at(std::uint64_t offset, const void *buf, std::size_t count) const {
    const std::uint8_t *p = static_cast<const std::uint8_t *>(buf);
    std::size_t put = 0;
    while (put < count) {
      const ssize_t w =
          ::pwrite(m_fd, p + put, count - put, off_t(offset + put));
      if (w < 0) {
        if (errno == EINTR)
          continue;
        throw io_error(m_path, offset + put,
                       std::string("write failed: ") + std::strerror(errno));
      }
      put += std::size_t(w);
    }
  }

  void truncate(std::uint64_t len) const {
    if (::ftruncate(m_fd, off_t(len)) != 0)
      throw io_error(m_path, len,
                     std::string("truncate failed: ") + std::strerror(errno));
  }

private:
  posix_file(int fd, std::string path) : m_fd(fd), m_path(std::move(path)) {}

  int m_fd = -1;
  std::string m_path;
};

inline bool file_exists(const std::string &path) {
  struct stat st;
  return ::stat(path.c_str(), &st) == 0;
}

inline std::uint64_t file_size(const std::string &path) {
  struct stat st;
  if (::stat(path.c_str(), &st) != 0)
    throw io_error(path, 0, std::string("stat failed: ") + std::strerror(errno));
  return std::uint64_t(st.st_size);
}

inline void remove_file(const std::string &path) { ::unlink(path.c_str()); }

//=============================================================================
// Buffered sequential reader/writer with category accounting.
//=============================================================================

class buffered_reader {
public:
  buffered_reader(const posix_file &fh, std::uint64_t start, std::uint64_t end,
                  std::size_t buf_size, io_counters *cnt, io_category cat)
      : m_fh(fh), m_pos(start), m_end(end), m_buf(buf_size ? buf_size : 1),
        m_cnt(cnt), m_cat(cat) {}

  bool next(std::uint8_t &out) {
    if (m_idx == m_fill) {
      if (m_pos >= m_end)
        return false;
      const std::size_t want =
          std::size_t(std::min<std::uint64_t>(m_buf.size(), m_end - m_pos));
      m_fh.read_at(m_pos, m_buf.data(), want);
      if (m_cnt)
        m_cnt->of(m_cat).bytes_read += want;
      m_pos += want;
      m_fill = want;
      m_idx = 0;
    }
    out = m_buf[m_idx++];
    return true;
  }

  // Bytes not yet consumed.
  std::uint64_t remaining() const { return (m_end - m_pos) + (m_fill - m_idx); }

private:
  const posix_file &m_fh;
  std::uint64_t m_pos;
  std::uint64_t m_end;
  std::vector<std::uint8_t> m_buf;
  std::size_t m_fill = 0;
  std::size_t m_idx = 0;
  io_counters *m_cnt;
  io_category m_cat;
};

class buffered_writer {
public:
  buffered_writer(posix_file &fh, std::uint64_t start, std::size_t buf_size,
                  io_counters *cnt, io_category cat)
      : m_fh(fh), m_pos(start), m_buf(buf_size ? buf_size : 1), m_cnt(cnt),
        m_cat(cat) {}

  ~buffered_writer() { flush(); }

  void put(std::uint8_t b) {
    if (m_fill == m_buf.size())
      flush();
    m_buf[m_fill++] = b;
  }

  void write(const void *data, std::size_t count) {
    const std::uint8_t *p = static_cast<const std::uint8_t *>(data);
    for (std::size_t i = 0; i < count; ++i)
      put(p[i]);
  }

  void put_le(std::uint64_t v, unsigned width) {
    for (unsigned i = 0; i < width; ++i)
      put(std::uint8_t(v >> (8 * i)));
  }

  void flush() {
    if (m_fill) {
      m_fh.write_at(m_pos, m_buf.data(), m_fill);
      if (m_cnt)
        m_cnt->of(m_cat).bytes_written += m_fill;
      m_pos += m_fill;
      m_fill = 0;
    }
  }

  std::uint64_t position() const { return m_pos + m_fill; }

private:
  posix_file &m_fh;
  std::uint64_t m_pos;
  std::vector<std::uint8_t> m_buf;
  std::size_t m_fill = 0;
  io_counters *m_cnt;
  io_category m_cat;
};

//=============================================================================
// reverse_text: write the input in reverse byte order, with bounded memory
// (one chunk at a time, read from the tail forward).
//=============================================================================

inline void reverse_text(const std::string &input, const std::string &output,
                         io_counters *cnt = nullptr,
                         std::size_t chunk = 1 << 20) {
  posix_file in = posix_file::open_read(input);
  posix_file out = posix_file::create(output);
  const std::uint64_t n = in.size();
  std::vector<std::uint8_t> buf(chunk);
  std::uint64_t done = 0;
  while (done < n) {
    const std::size_t take = std::size_t(std::min<std::uint64_t>(chunk, n - done));
    in.read_at(n - done - take, buf.data(), take);
    for (std::size_t i = 0, j = take - 1; i < j; ++i, --j)
      std::swap(buf[i], buf[j]);
    out.write_at(done, buf.data(), take);
    if (cnt) {
      cnt->of(io_category::reverse).bytes_read += take;
      cnt->of(io_category::reverse).bytes_written += take;
    }
    done += take;
  }
}

//=============================================================================
// Backward scanner over the reversed text file: yields X[from], X[from-1],
// ..., X[1] while reading the .rev file strictly forward in buffer-sized
// chunks. Post-skip re-reads go through lazily grown forward windows, the
// one sanctioned exception to the forward-only pattern.
//=============================================================================

class backward_scanner : public prefix_source {
public:
  // rev holds the n bytes of X in reverse order; 0 <= from <= n.
  backward_scanner(const posix_file &rev, std::uint64_t n, std::uint64_t from,
                   std::size_t buf_size = 262144, io_counters *cnt = nullptr,
                   access_recorder *rec = nullptr)
      : m_rev(rev), m_n(n), m_cursor(from),
        m_buf(buf_size ? buf_size : 1), m_cnt(cnt), m_rec(rec) {
    if (from > n)
      throw config_error("backward scanner start past end of text");
    if (m_rec)
      m_rec->push_back({access_event::kind::scan_begin, n - from, 0});
  }

  std::uint8_t next() override {
    // X[cursor] lives at rev offset n - cursor.
    const std::uint64_t off = m_n - m_cursor;
    if (off < m_buf_off || off >= m_buf_off + m_buf_fill)
      refill(off);
    const std::uint8_t c = m_buf[std::size_t(off - m_buf_off)];
    --m_cursor;
    return c;
  }

  void jump_to(std::uint64_t pos) override {
    // Only leftward jumps (forward in the .rev file).
    m_cursor = pos;
  }

  std::uint8_t window_at(std::uint64_t pos) override {
    if (pos < m_win_start || m_win_start == 0) {
      // New window anchored at pos; grows to the right on demand.
      m_win_start = pos;
      m_win.clear();
    }
    const std::uint64_t idx = pos - m_win_start;
    while (idx >= m_win.size())
      grow_window();
    return m_win[std::size_t(idx)];
  }

  std::uint64_t reread_bytes() const { return m_reread_bytes; }

private:
  void refill(std::uint64_t off) {
    const std::uint64_t want =
        std::min<std::uint64_t>(m_buf.size(), m_n - off);
    m_rev.read_at(off, m_buf.data(), std::size_t(want));
    if (m_cnt)
      m_cnt->of(io_category::text_scan).bytes_read += want;
    if (m_rec)
      m_rec->push_back({access_event::kind::read_main, off, want});
    m_buf_off = off;
    m_buf_fill = std::size_t(want);
  }

  void grow_window() {
    // Extend the window by one chunk of X[win_start + |win| ..], i.e. one
    // chunk of the .rev file read just below the previous one.
    const std::uint64_t lo_pos = m_win_start + m_win.size(); // next X position
    const std::uint64_t avail = m_n - lo_pos + 1;
    if (avail == 0)
      throw io_error(m_rev.path(), 0, "window read past end of text");
    const std::uint64_t take = std::min<std::uint64_t>(window_chunk, avail);
    // X[lo_pos .. lo_pos+take) = rev offsets [n-lo_pos-take+1 .. n-lo_pos].
    const std::uint64_t off = m_n - (lo_pos + take - 1);
    std::uint8_t tmp[window_chunk];
    m_rev.read_at(off, tmp, std::size_t(take));
    if (m_cnt)
      m_cnt->of(io_category::text_scan).bytes_read += take;
    if (m_rec)
      m_rec->push_back({access_event::kind::read_window, off, take});
    m_reread_bytes += take;
    // Reverse into text order and append.
    for (std::uint64_t k = 0; k < take; ++k)
      m_win.push_back(tmp[take - 1 - k]);
  }

  static constexpr std::size_t window_chunk = 4096;

  const posix_file &m_rev;
  std::uint64_t m_n;
  std::uint64_t m_cursor;

  std::vector<std::uint8_t> m_buf;
  std::uint64_t m_buf_off = 0;
  std::size_t m_buf_fill = 0;

  std::uint64_t m_win_start = 0;
  std::vector<std::uint8_t> m_win;
  std::uint64_t m_reread_bytes = 0;

  io_counters *m_cnt;
  access_recorder *m_rec;
};

} // namespace emlz

#endif // EMLZ_IO_HPP_INCLUDED
