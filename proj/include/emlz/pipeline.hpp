/**
 * @file    include/emlz/pipeline.hpp
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

#ifndef EMLZ_PIPELINE_HPP_INCLUDED
#define EMLZ_PIPELINE_HPP_INCLUDED

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "block_index.hpp"
#include "common.hpp"
#include "core.hpp"
#include "io.hpp"
#include "long_phrase.hpp"
#include "mem.hpp"
#include "ms_engine.hpp"
#include "oracle.hpp"
#include "parse_format.hpp"
#include "parser.hpp"
#include "skip_log.hpp"

namespace emlz {

//=============================================================================
// Run configuration. The block size is derived from the memory budget: the
// per-block structures cost 29 bytes per block symbol with 40-bit absolute
// positions and 28 with 32-bit ones. Stream buffers and other fixed
// overhead are small (<= 4 MiB) and accounted separately.
//=============================================================================

struct config {
  std::uint64_t mem_budget = 256ull << 20; // bytes for block structures
  int mode = 40;                           // 32 or 40 bit absolute positions
  std::uint64_t block_size = 0;            // 0 = derive from mem_budget
  std::size_t scan_buffer = 262144;
  std::uint64_t skip_threshold = 40;       // 0 disables the skipping trick
  std::uint64_t chunk_size = 0;            // long-phrase chunk; 0 = b/2
  bool keep_temp = false;
  std::string temp_dir;                    // aux files live here if set
  access_recorder *recorder = nullptr;     // test hook

  std::uint64_t bytes_per_symbol() const { return mode == 40 ? 29 : 28; }

  std::uint64_t derive_block_size(std::uint64_t n) const {
    std::uint64_t b = block_size ? block_size : mem_budget / bytes_per_symbol();
    if (b < 16)
      throw config_error("block size below 16 (raise --mem or --block)");
    if (n > 0)
      b = std::min<std::uint64_t>(b, n);
    b = std::max<std::uint64_t>(b, std::min<std::uint64_t>(n, 16));
    if (b > 0x7ffffffeull)
      throw config_error("block size exceeds 32-bit local positions");
    return b;
  }

  void validate(std::uint64_t n) const {
    if (mode != 32 && mode != 40)
      throw config_error("mode must be 32 or 40");
    if (mode == 32 && n > 0xffffffffull)
      throw config_error("32-bit mode requires n < 2^32");
    if (mode == 40 && n > uint40_array::max_value())
      throw config_error("40-bit mode requires n < 2^40");
  }
};

struct parse_stats {
  std::uint64_t n = 0;
  std::uint64_t z = 0;
  std::uint64_t blocks = 0;
  std::uint64_t block_size = 0;
  int mode = 40;

  std::uint64_t restarts = 0;
  std::uint64_t handoffs = 0;
  std::uint64_t long_phrase_rounds = 0;
  bool long_rounds_within_bound = true;

  std::uint64_t positions_parsed = 0;   // <= 2n by the restart rule
  std::uint64_t skips_taken = 0;
  std::uint64_t positions_skipped = 0;
  std::uint64_t ms_entries = 0;
  std::uint64_t rebuilds = 0;

  std::uint64_t peak_block_bytes = 0;
  double wall_seconds = 0.0;
  io_counters io;

  double n_over_z() const { return z ? double(n) / double(z) : 0.0; }
  double text_scan_bytes_per_symbol() const {
    return n ? double(io.of(io_category::text_scan).bytes_read) / double(n)
             : 0.0;
  }
};

//=============================================================================
// Auxiliary file naming. The reversed text lives next to the input, the
// skip log and candidate scratch next to the output, unless a temp
// directory redirects them (the two-disk layout).
//=============================================================================

namespace detail {

inline std::string base_name(const std::string &path) {
  const std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

inline std::string aux_path(const std::string &anchor, const char *suffix,
                            const std::string &temp_dir) {
  if (temp_dir.empty())
    return anchor + suffix;
  return temp_dir + "/" + base_name(anchor) + suffix;
}

} // namespace detail

inline std::string rev_path(const std::string &input,
                            const std::string &temp_dir = "") {
  return detail::aux_path(input, ".rev", temp_dir);
}

// Reverses input into the .rev file unless a current one is already there.
inline std::string ensure_reversed(const std::string &input,
                                   const config &cfg, io_counters *cnt) {
  const std::string rev = rev_path(input, cfg.temp_dir);
  const std::uint64_t n = file_size(input);
  if (!file_exists(rev) || file_size(rev) != n)
    reverse_text(input, rev, cnt);
  return rev;
}

//=============================================================================
// The block pipeline: per block, build the index, stream the prefix through
// the matching-statistics engine while inverting on the fly, merge with the
// block-internal LPF, and factorize. Incomplete factors at the block end
// either restart the next block or go to the long-phrase matcher.
//=============================================================================

namespace detail {

template <typename PosArray>
void run_pipeline(const std::string &input, const std::string &output_base,
                  const config &cfg, parse_stats &st) {
  const std::string output = output_base + ".lz";
  const std::string skips_path =
      aux_path(output_base, ".skips", cfg.temp_dir);
  const std::string cand_path = aux_path(output_base, ".cand", cfg.temp_dir);

  posix_file text = posix_file::open_read(input);
  const std::uint64_t n = text.size();
  st.n = n;
  cfg.validate(n);

  const unsigned width = cfg.mode == 40 ? 5 : 4;
  parse_writer writer(output, n, width, &st.io);

  if (n == 0) {
    writer.finish();
    st.z = 0;
    return;
  }

  const std::uint64_t b = cfg.derive_block_size(n);
  st.block_size = b;
  // Long-phrase chunk: b/2 keeps the round amortization, the 4 KiB floor
  // keeps tiny-block runs from paying one file round trip per few symbols.
  const std::uint64_t chunk =
      cfg.chunk_size ? cfg.chunk_size
                     : std::max<std::uint64_t>(b / 2, 4096);

  const std::string rev = ensure_reversed(input, cfg, &st.io);
  posix_file rev_fh = posix_file::open_read(rev);

  skip_log_writer skip_log(skips_path, n, &st.io);
  leftmost_tracker tracker;

  mem_tracker &tr = block_mem();
  tr.reset_peak();

  const bool skipping = cfg.skip_threshold > 0;

  auto emit_phrase = [&](const phrase &f, std::uint64_t abs_start) {
    writer.put(f);
    if (skipping && f.len >= cfg.skip_threshold)
      skip_log.append(abs_start, f.len);
  };

  std::uint64_t block_start = 1;
  std::vector<std::uint8_t> block_buf;
  while (block_start <= n) {
    const std::uint64_t block_end = std::min<std::uint64_t>(block_start + b - 1, n);
    const std::uint64_t bsz = block_end - block_start + 1;
    const std::uint64_t a_len = block_start - 1;
    const bool is_final = block_end == n;
    ++st.blocks;

    // Load B.
    block_buf.resize(std::size_t(bsz));
    text.read_at(block_start - 1, block_buf.data(), std::size_t(bsz));
    st.io.of(io_category::text_scan).bytes_read += bsz;

    block_index idx(byte_span(block_buf.data(), std::size_t(bsz)), block_start,
                    tr);
    inverted_ms<PosArray> inv(std::uint32_t(bsz), tr);

    if (a_len > 0) {
      const std::size_t buf = std::size_t(
          std::min<std::uint64_t>(cfg.scan_buffer, a_len));
      backward_scanner scanner(rev_fh, n, a_len, buf, &st.io, cfg.recorder);
      skip_log.flush();
      const std::size_t log_buf = std::size_t(std::min<std::uint64_t>(
          65536, skip_log.capacity() - skip_log.fill_offset() + 1));
      skip_log_stream log_stream(skip_log.handle(), skip_log.fill_offset(),
                                 skip_log.capacity(), block_start, &st.io,
                                 log_buf);
      skip_cursor cursor(log_stream.as_puller());
      const scan_stats sc = scan_prefix(
          idx, scanner, a_len, block_end, skipping ? &cursor : nullptr,
          [&](const scan_event &ev) { inv.record(ev.sa_lo, ev.pos, ev.len); });
      st.ms_entries += sc.emitted;
      st.rebuilds += sc.rebuilds;
      st.skips_taken += sc.skips;
      st.positions_skipped += sc.positions_skipped;
    }

    inv.finalize(idx);
    idx.release_rank();
    idx.release_lcp();
    inv.merge_lpf(idx);

    const block_parse_result pr = parse_block(
        [&](std::uint64_t pos) {
          const std::uint32_t i = std::uint32_t(pos - block_start + 1);
          return lpf_entry{inv.src_at(i), inv.len_at(i)};
        },
        block_start, block_end, is_final, tracker, block_buf.data(),
        block_start, emit_phrase);
    st.positions_parsed += pr.positions_covered;

    if (!pr.tail_start) {
      block_start = pr.next_block_start;
      continue;
    }

    const std::uint64_t tail_start = *pr.tail_start;
    const std::uint64_t tail_len = block_end - tail_start + 1;
    if (resolve_tail(tail_len, b) == tail_action::restart) {
      ++st.restarts;
      block_start = tail_start;
      continue;
    }

    // Long phrase: resolve with the streaming matcher, then continue after
    // it. The in-block match is the witness for the first chunk.
    ++st.handoffs;
    const long_phrase_result lp = resolve_long_phrase(
        text, n, tail_start, tail_len, chunk, cand_path, &st.io);
    st.long_phrase_rounds += lp.rounds;
    const std::uint64_t bound = (lp.ph.len + (b / 2) - 1) / (b / 2) + 1;
    if (lp.rounds > bound)
      st.long_rounds_within_bound = false;
    emit_phrase(lp.ph, tail_start);
    st.positions_parsed += lp.ph.len - tail_len;
    block_start = tail_start + lp.ph.len;
  }

  writer.finish();
  st.z = writer.z();
  st.peak_block_bytes = tr.peak();

  if (!cfg.keep_temp)
    remove_file(skips_path);
}

} // namespace detail

inline parse_stats parse_file(const std::string &input,
                              const std::string &output_base,
                              const config &cfg) {
  parse_stats st;
  st.mode = cfg.mode;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (cfg.mode == 32)
      detail::run_pipeline<uint32_array>(input, output_base, cfg, st);
    else
      detail::run_pipeline<uint40_array>(input, output_base, cfg, st);
  } catch (...) {
    // No partial outputs.
    remove_file(output_base + ".lz");
    remove_file(detail::aux_path(output_base, ".skips", cfg.temp_dir));
    remove_file(detail::aux_path(output_base, ".cand", cfg.temp_dir));
    remove_file(detail::aux_path(output_base, ".cand", cfg.temp_dir) + ".swap");
    throw;
  }
  st.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return st;
}

//=============================================================================
// Decode a parse file back into a text file (in-memory reconstruction;
// intended for desk-scale outputs).
//=============================================================================

inline std::uint64_t decode_file(const std::string &lz_path,
                                 const std::string &out_path,
                                 io_counters *cnt = nullptr) {
  posix_file in = posix_file::open_read(lz_path);
  parse_reader reader(in, cnt);
  std::vector<std::uint8_t> text;
  text.reserve(std::size_t(reader.header().n));
  phrase f;
  std::size_t index = 0;
  while (reader.next(f)) {
    if (f.is_literal()) {
      text.push_back(std::uint8_t(f.src));
    } else {
      for (std::uint64_t t = 0; t < f.len; ++t)
        text.push_back(text[std::size_t(f.src - 1 + t)]);
    }
    ++index;
  }
  posix_file out = posix_file::create(out_path);
  if (!text.empty()) {
    out.write_at(0, text.data(), text.size());
    if (cnt)
      cnt->of(io_category::output).bytes_written += text.size();
  }
  return text.size();
}

//=============================================================================
// Verification: round trip, tiling, per-copy source equality, literal
// leftmostness, and a sampled greedy-maximality re-check (no source admits a
// match one symbol longer).
//=============================================================================

struct verify_report {
  bool round_trip = false;
  bool sources_match = false;
  bool literals_leftmost = false;
  bool maximality = false;
  std::uint64_t z = 0;
  std::uint64_t n = 0;
  std::int64_t failing_phrase = -1;
  std::string detail;

  bool ok() const {
    return round_trip && sources_match && literals_leftmost && maximality;
  }
};

inline verify_report verify_parse(const std::string &input,
                                  const std::string &lz_path,
                                  std::size_t maximality_samples = 16,
                                  std::uint64_t seed = 0x9e3779b97f4a7c15ull) {
  verify_report rep;

  posix_file in = posix_file::open_read(input);
  const std::uint64_t n = in.size();
  std::vector<std::uint8_t> text(static_cast<std::size_t>(n));
  if (n)
    in.read_at(0, text.data(), text.size());

  parsing p;
  std::uint64_t parsed_n = 0;
  try {
    p = read_parse(lz_path, nullptr, &parsed_n);
  } catch (const error &e) {
    rep.detail = e.what();
    rep.n = n;
    return rep;
  }
  rep.z = p.size();
  rep.n = n;
  if (parsed_n != n) {
    rep.detail = "parse header n does not match the input size";
    return rep;
  }

  // Round trip + per-phrase checks in one pass.
  rep.round_trip = true;
  rep.sources_match = true;
  rep.literals_leftmost = true;

  std::array<std::uint64_t, 256> first_seen{};
  for (std::uint64_t i = n; i >= 1; --i)
    first_seen[text[std::size_t(i - 1)]] = i;

  std::uint64_t pos = 1;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const phrase &f = p[k];
    if (f.is_literal()) {
      if (text[std::size_t(pos - 1)] != f.src) {
        rep.round_trip = false;
        rep.failing_phrase = std::int64_t(k);
        rep.detail = "literal symbol mismatch";
        break;
      }
      if (first_seen[std::uint8_t(f.src)] != pos) {
        rep.literals_leftmost = false;
        rep.failing_phrase = std::int64_t(k);
        rep.detail = "literal not at the leftmost occurrence";
        break;
      }
    } else {
      bool equal = true;
      for (std::uint64_t t = 0; t < f.len; ++t)
        if (text[std::size_t(f.src - 1 + t)] != text[std::size_t(pos - 1 + t)]) {
          equal = false;
          break;
        }
      if (!equal) {
        rep.sources_match = false;
        rep.failing_phrase = std::int64_t(k);
        rep.detail = "copy source does not reproduce the phrase";
        break;
      }
    }
    pos += f.cover();
  }
  if (rep.failing_phrase >= 0)
    return rep;

  // Greedy maximality on a sample (plus the longest phrase): no source may
  // match one symbol more than the phrase length.
  rep.maximality = true;
  if (!p.empty() && maximality_samples > 0) {
    std::vector<std::uint64_t> starts(p.size());
    std::uint64_t s = 1;
    std::size_t longest = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      starts[k] = s;
      s += p[k].cover();
      if (p[k].cover() > p[longest].cover())
        longest = k;
    }
    std::vector<std::size_t> sample;
    if (maximality_samples >= p.size()) {
      sample.resize(p.size());
      for (std::size_t k = 0; k < p.size(); ++k)
        sample[k] = k;
    } else {
      std::mt19937_64 rng(seed);
      sample.push_back(longest);
      for (std::size_t t = 1; t < maximality_samples; ++t)
        sample.push_back(std::size_t(rng() % p.size()));
    }

    for (const std::size_t k : sample) {
      const std::uint64_t start = starts[k];
      const std::uint64_t len = p[k].cover();
      if (start + len > n)
        continue; // nothing longer fits
      const byte_span longer(text.data() + (start - 1), std::size_t(len + 1));
      bool found = false;
      std::uint64_t cursor = 0;
      find_occurrences(
          longer, [&]() { return text[std::size_t(cursor++)]; }, n, start,
          [&](std::uint64_t) { found = true; });
      if (found) {
        rep.maximality = false;
        rep.failing_phrase = std::int64_t(k);
        rep.detail = "a longer factor exists at phrase " + std::to_string(k);
        break;
      }
    }
  }
  return rep;
}

} // namespace emlz

#endif // EMLZ_PIPELINE_HPP_INCLUDED
