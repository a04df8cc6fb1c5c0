/**
 * @file    include/emlz/mem.hpp
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

#ifndef EMLZ_MEM_HPP_INCLUDED
#define EMLZ_MEM_HPP_INCLUDED

#include <cstdint>
#include <cstring>
#include <utility>

#include "common.hpp"

namespace emlz {

//=============================================================================
// Byte accountant for block-scope structures. The per-block memory budget
// (29b bytes with 40-bit positions, 28b with 32-bit) covers exactly the
// structures resident while a block is processed; everything sized
// proportionally to the block allocates through this tracker. Stream buffers
// and other fixed overhead are capped separately and do not go through it.
//
// Single-threaded by design: one pipeline owns one tracker.
//=============================================================================

class mem_tracker {
public:
  void add(std::uint64_t bytes) {
    m_current += bytes;
    if (m_current > m_peak)
      m_peak = m_current;
  }

  void sub(std::uint64_t bytes) { m_current -= bytes; }

  std::uint64_t current() const { return m_current; }
  std::uint64_t peak() const { return m_peak; }

  void reset_peak() { m_peak = m_current; }

private:
  std::uint64_t m_current = 0;
  std::uint64_t m_peak = 0;
};

// Process-wide tracker for block structures. Tests and the pipeline reset
// the peak around the region they measure.
inline mem_tracker &block_mem() {
  static mem_tracker tracker;
  return tracker;
}

//=============================================================================
// Fixed-size array that charges its footprint to a mem_tracker. Block
// structures never grow, so this deliberately has no push_back.
//=============================================================================

template <typename T> class tracked_array {
public:
  tracked_array() = default;

  explicit tracked_array(std::size_t n, mem_tracker &tr = block_mem())
      : m_data(n ? new T[n] : nullptr), m_size(n), m_tracker(&tr) {
    m_tracker->add(bytes());
  }

  tracked_array(std::size_t n, T fill, mem_tracker &tr = block_mem())
      : tracked_array(n, tr) {
    for (std::size_t i = 0; i < m_size; ++i)
      m_data[i] = fill;
  }

  tracked_array(tracked_array &&other) noexcept { swap(other); }

  tracked_array &operator=(tracked_array &&other) noexcept {
    if (this != &other) {
      release();
      swap(other);
    }
    return *this;
  }

  tracked_array(const tracked_array &) = delete;
  tracked_array &operator=(const tracked_array &) = delete;

  ~tracked_array() { release(); }

  void release() {
    if (m_data) {
      m_tracker->sub(bytes());
      delete[] m_data;
      m_data = nullptr;
      m_size = 0;
    }
  }

  T &operator[](std::size_t i) { return m_data[i]; }
  const T &operator[](std::size_t i) const { return m_data[i]; }

  T *data() { return m_data; }
  const T *data() const { return m_data; }
  std::size_t size() const { return m_size; }
  bool empty() const { return m_size == 0; }
  std::uint64_t bytes() const { return std::uint64_t(m_size) * sizeof(T); }

private:
  void swap(tracked_array &other) noexcept {
    std::swap(m_data, other.m_data);
    std::swap(m_size, other.m_size);
    std::swap(m_tracker, other.m_tracker);
  }

  T *m_data = nullptr;
  std::size_t m_size = 0;
  mem_tracker *m_tracker = &block_mem();
};

//=============================================================================
// Absolute text positions. The 40-bit flavour is stored as separate 32-bit
// and 8-bit arrays (5 bytes per entry); the 32-bit flavour is a plain
// uint32 array. Both expose the same get/set surface so the scan engine can
// be instantiated for either mode.
//=============================================================================

class uint40_array {
public:
  uint40_array() = default;

  explicit uint40_array(std::size_t n, mem_tracker &tr = block_mem())
      : m_lo(n, 0u, tr), m_hi(n, std::uint8_t(0), tr) {}

  std::uint64_t get(std::size_t i) const {
    return std::uint64_t(m_lo[i]) | (std::uint64_t(m_hi[i]) << 32);
  }

  void set(std::size_t i, std::uint64_t v) {
    m_lo[i] = std::uint32_t(v);
    m_hi[i] = std::uint8_t(v >> 32);
  }

  std::size_t size() const { return m_lo.size(); }
  void release() {
    m_lo.release();
    m_hi.release();
  }

  static constexpr std::uint64_t max_value() {
    return (std::uint64_t(1) << 40) - 1;
  }

private:
  tracked_array<std::uint32_t> m_lo;
  tracked_array<std::uint8_t> m_hi;
};

class uint32_array {
public:
  uint32_array() = default;

  explicit uint32_array(std::size_t n, mem_tracker &tr = block_mem())
      : m_v(n, 0u, tr) {}

  std::uint64_t get(std::size_t i) const { return m_v[i]; }
  void set(std::size_t i, std::uint64_t v) { m_v[i] = std::uint32_t(v); }

  std::size_t size() const { return m_v.size(); }
  void release() { m_v.release(); }

  static constexpr std::uint64_t max_value() { return 0xffffffffu; }

private:
  tracked_array<std::uint32_t> m_v;
};

} // namespace emlz

#endif // EMLZ_MEM_HPP_INCLUDED
