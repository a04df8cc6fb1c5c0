/**
 * @file    include/emlz/common.hpp
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

#ifndef EMLZ_COMMON_HPP_INCLUDED
#define EMLZ_COMMON_HPP_INCLUDED

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace emlz {

using byte_span = std::span<const std::uint8_t>;

inline byte_span as_bytes(const std::string &s) {
  return byte_span(reinterpret_cast<const std::uint8_t *>(s.data()), s.size());
}

inline std::vector<std::uint8_t> to_bytes(const std::string &s) {
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

inline std::string to_string(byte_span b) {
  return std::string(b.begin(), b.end());
}

//=============================================================================
// Error hierarchy. Every failure mode that crosses a module boundary is a
// distinct type (or carries a distinct kind) so callers and tests can tell
// them apart without parsing messages.
//=============================================================================

class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// File-system level failure; carries the offending path and, when known,
// the byte offset of the failed access.
class io_error : public error {
public:
  io_error(std::string path, std::uint64_t offset, const std::string &what)
      : error("io error: " + what + " (path=" + path +
              ", offset=" + std::to_string(offset) + ")"),
        m_path(std::move(path)), m_offset(offset) {}

  const std::string &path() const { return m_path; }
  std::uint64_t offset() const { return m_offset; }

private:
  std::string m_path;
  std::uint64_t m_offset;
};

class config_error : public error {
public:
  using error::error;
};

// Malformed parse file.
class format_error : public error {
public:
  enum class kind {
    bad_magic,
    bad_version,
    bad_width,
    truncated,
    bad_record,
    bad_tiling,
  };

  format_error(kind k, const std::string &what)
      : error("format error: " + what), m_kind(k) {}

  kind what_kind() const { return m_kind; }

private:
  kind m_kind;
};

// Structurally valid parse that cannot be decoded; names the phrase.
class decode_error : public error {
public:
  decode_error(std::size_t phrase_index, const std::string &what)
      : error("decode error at phrase " + std::to_string(phrase_index) + ": " +
              what),
        m_phrase_index(phrase_index) {}

  std::size_t phrase_index() const { return m_phrase_index; }

private:
  std::size_t m_phrase_index;
};

// Preallocated on-disk structure ran out of room (indicates a bug: the
// capacities are provably sufficient).
class capacity_error : public error {
public:
  using error::error;
};

// Internal consistency violation.
class invariant_error : public error {
public:
  using error::error;
};

} // namespace emlz

#endif // EMLZ_COMMON_HPP_INCLUDED
