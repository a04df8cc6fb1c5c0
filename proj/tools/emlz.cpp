/**
 * @file    tools/emlz.cpp
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

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <emlz/emlz.hpp>

namespace {

using nlohmann::json;

// Sizes accept K/M/G suffixes (binary).
std::uint64_t parse_size(const std::string &s) {
  if (s.empty())
    throw CLI::ValidationError("empty size");
  std::uint64_t mult = 1;
  std::string digits = s;
  switch (s.back()) {
  case 'k': case 'K': mult = 1ull << 10; digits.pop_back(); break;
  case 'm': case 'M': mult = 1ull << 20; digits.pop_back(); break;
  case 'g': case 'G': mult = 1ull << 30; digits.pop_back(); break;
  default: break;
  }
  return std::stoull(digits) * mult;
}

std::vector<std::uint64_t> parse_size_list(const std::string &s) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos)
      comma = s.size();
    out.push_back(parse_size(s.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

json io_to_json(const emlz::io_counters &io, std::uint64_t n) {
  auto chan = [&](emlz::io_category c) {
    const auto &ch = io.of(c);
    json j;
    j["read"] = ch.bytes_read;
    j["written"] = ch.bytes_written;
    if (n) {
      j["read_per_symbol"] = double(ch.bytes_read) / double(n);
      j["written_per_symbol"] = double(ch.bytes_written) / double(n);
    }
    return j;
  };
  json j;
  j["text_scan"] = chan(emlz::io_category::text_scan);
  j["skip_log"] = chan(emlz::io_category::skip_log);
  j["candidates"] = chan(emlz::io_category::candidates);
  j["output"] = chan(emlz::io_category::output);
  j["reverse"] = chan(emlz::io_category::reverse);
  j["total_read"] = io.total_read();
  j["total_written"] = io.total_written();
  return j;
}

json stats_to_json(const emlz::parse_stats &st, const std::string &input) {
  json j;
  j["input"] = input;
  j["n"] = st.n;
  j["z"] = st.z;
  j["n_over_z"] = st.n_over_z();
  j["blocks"] = st.blocks;
  j["block_size"] = st.block_size;
  j["mode"] = st.mode;
  j["wall_seconds"] = st.wall_seconds;
  j["seconds_per_mib"] =
      st.n ? st.wall_seconds / (double(st.n) / double(1 << 20)) : 0.0;
  j["restarts"] = st.restarts;
  j["handoffs"] = st.handoffs;
  j["long_phrase_rounds"] = st.long_phrase_rounds;
  j["positions_parsed"] = st.positions_parsed;
  j["skips_taken"] = st.skips_taken;
  j["positions_skipped"] = st.positions_skipped;
  j["ms_entries"] = st.ms_entries;
  j["rebuilds"] = st.rebuilds;
  j["peak_block_bytes"] = st.peak_block_bytes;
  j["io"] = io_to_json(st.io, st.n);
  return j;
}

void write_json(const std::string &path, const json &j) {
  if (path == "-") {
    std::printf("%s\n", j.dump(2).c_str());
    return;
  }
  FILE *f = std::fopen(path.c_str(), "w");
  if (!f)
    throw emlz::io_error(path, 0, "cannot open stats file");
  const std::string text = j.dump(2);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fputc('\n', f);
  std::fclose(f);
}

void print_stats(const emlz::parse_stats &st) {
  std::printf("n            %llu\n", (unsigned long long)st.n);
  std::printf("z            %llu\n", (unsigned long long)st.z);
  std::printf("n/z          %.2f\n", st.n_over_z());
  std::printf("blocks       %llu (b = %llu, %d-bit)\n",
              (unsigned long long)st.blocks, (unsigned long long)st.block_size,
              st.mode);
  std::printf("wall         %.3f s (%.3f s/MiB)\n", st.wall_seconds,
              st.n ? st.wall_seconds / (double(st.n) / double(1 << 20)) : 0.0);
  std::printf("restarts     %llu   handoffs %llu   skips %llu\n",
              (unsigned long long)st.restarts, (unsigned long long)st.handoffs,
              (unsigned long long)st.skips_taken);
  const auto per = [&](emlz::io_category c) {
    return st.n ? double(st.io.of(c).bytes_read + st.io.of(c).bytes_written) /
                      double(st.n)
                : 0.0;
  };
  std::printf("io/symbol    text_scan %.3f  skip_log %.3f  candidates %.3f  "
              "output %.3f  reverse %.3f\n",
              per(emlz::io_category::text_scan),
              per(emlz::io_category::skip_log),
              per(emlz::io_category::candidates),
              per(emlz::io_category::output),
              per(emlz::io_category::reverse));
}

emlz::config make_config(const std::string &mem, const std::string &block,
                         int mode, std::uint64_t buffer,
                         std::uint64_t skip_threshold, const std::string &chunk,
                         bool keep_temp) {
  emlz::config cfg;
  if (!mem.empty())
    cfg.mem_budget = parse_size(mem);
  if (!block.empty())
    cfg.block_size = parse_size(block);
  cfg.mode = mode;
  cfg.scan_buffer = std::size_t(buffer);
  cfg.skip_threshold = skip_threshold;
  if (!chunk.empty())
    cfg.chunk_size = parse_size(chunk);
  cfg.keep_temp = keep_temp;
  if (const char *tmp = std::getenv("EMLZ_TMPDIR"))
    cfg.temp_dir = tmp;
  return cfg;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"external-memory LZ77 factorization toolkit"};
  app.require_subcommand(1);

  // ---- reverse ----
  std::string rev_input, rev_output;
  CLI::App *cmd_reverse =
      app.add_subcommand("reverse", "store the input in reverse byte order");
  cmd_reverse->add_option("input", rev_input)->required();
  cmd_reverse->add_option("-o,--output", rev_output,
                          "defaults to <input>.rev");

  // ---- parse ----
  std::string p_input, p_output, p_mem, p_block, p_chunk, p_stats;
  int p_mode = 40;
  std::uint64_t p_buffer = 262144, p_skip = 40;
  bool p_keep = false;
  CLI::App *cmd_parse =
      app.add_subcommand("parse", "compute the LZ77 factorization");
  cmd_parse->add_option("input", p_input)->required();
  cmd_parse->add_option("-o,--output", p_output,
                        "output base; writes <output>.lz (default: input)");
  cmd_parse->add_option("--mem", p_mem,
                        "memory budget for block structures (K/M/G suffixes)");
  cmd_parse->add_option("--block", p_block, "block size override in symbols");
  cmd_parse->add_option("--mode", p_mode, "absolute position width: 32 or 40")
      ->check(CLI::IsMember({32, 40}));
  cmd_parse->add_option("--buffer", p_buffer, "scan buffer in bytes");
  cmd_parse->add_option("--skip-threshold", p_skip,
                        "min phrase length for the skip log; 0 disables");
  cmd_parse->add_option("--chunk", p_chunk,
                        "long-phrase chunk size (default b/2)");
  cmd_parse->add_flag("--keep-temp", p_keep, "keep .rev/.skips files");
  cmd_parse->add_option("--stats-json", p_stats,
                        "write machine-readable stats ('-' for stdout)");

  // ---- decode ----
  std::string d_input, d_output;
  CLI::App *cmd_decode =
      app.add_subcommand("decode", "reconstruct the text from a .lz file");
  cmd_decode->add_option("lzfile", d_input)->required();
  cmd_decode->add_option("-o,--output", d_output)->required();

  // ---- verify ----
  std::string v_input, v_lz;
  std::size_t v_samples = 16;
  CLI::App *cmd_verify = app.add_subcommand(
      "verify", "check a .lz file against the original input");
  cmd_verify->add_option("input", v_input)->required();
  cmd_verify->add_option("lzfile", v_lz)->required();
  cmd_verify->add_option("--samples", v_samples,
                         "phrases to re-check for greedy maximality");

  // ---- bench ----
  std::string b_input, b_prefixes, b_mems, b_stats;
  int b_mode = 40;
  std::uint64_t b_skip = 40;
  CLI::App *cmd_bench = app.add_subcommand(
      "bench", "parse prefixes under several memory budgets");
  cmd_bench->add_option("input", b_input)->required();
  cmd_bench->add_option("--prefixes", b_prefixes,
                        "comma list of prefix lengths (K/M/G)");
  cmd_bench->add_option("--mems", b_mems, "comma list of memory budgets")
      ->required();
  cmd_bench->add_option("--mode", b_mode)->check(CLI::IsMember({32, 40}));
  cmd_bench->add_option("--skip-threshold", b_skip);
  cmd_bench->add_option("--stats-json", b_stats);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_reverse->parsed()) {
      const std::string out = rev_output.empty() ? rev_input + ".rev" : rev_output;
      emlz::io_counters cnt;
      emlz::reverse_text(rev_input, out, &cnt);
      std::printf("reversed %llu bytes into %s\n",
                  (unsigned long long)cnt.of(emlz::io_category::reverse).bytes_read,
                  out.c_str());
      return 0;
    }

    if (cmd_parse->parsed()) {
      const std::string base = p_output.empty() ? p_input : p_output;
      emlz::config cfg = make_config(p_mem, p_block, p_mode, p_buffer, p_skip,
                                     p_chunk, p_keep);
      const emlz::parse_stats st = emlz::parse_file(p_input, base, cfg);
      print_stats(st);
      if (!p_stats.empty())
        write_json(p_stats, stats_to_json(st, p_input));
      return 0;
    }

    if (cmd_decode->parsed()) {
      emlz::io_counters cnt;
      const std::uint64_t n = emlz::decode_file(d_input, d_output, &cnt);
      std::printf("decoded %llu bytes into %s\n", (unsigned long long)n,
                  d_output.c_str());
      return 0;
    }

    if (cmd_verify->parsed()) {
      const emlz::verify_report rep =
          emlz::verify_parse(v_input, v_lz, v_samples);
      std::printf("round-trip          %s\n", rep.round_trip ? "PASS" : "FAIL");
      std::printf("source equality     %s\n",
                  rep.sources_match ? "PASS" : "FAIL");
      std::printf("leftmost literals   %s\n",
                  rep.literals_leftmost ? "PASS" : "FAIL");
      std::printf("greedy maximality   %s\n", rep.maximality ? "PASS" : "FAIL");
      if (!rep.ok()) {
        if (rep.failing_phrase >= 0)
          std::fprintf(stderr, "FAIL at phrase %lld: %s\n",
                       (long long)rep.failing_phrase, rep.detail.c_str());
        else
          std::fprintf(stderr, "FAIL: %s\n", rep.detail.c_str());
        return 1;
      }
      std::printf("OK (z = %llu, n/z = %.2f)\n", (unsigned long long)rep.z,
                  rep.n && rep.z ? double(rep.n) / double(rep.z) : 0.0);
      return 0;
    }

    if (cmd_bench->parsed()) {
      const std::uint64_t full = emlz::file_size(b_input);
      std::vector<std::uint64_t> prefixes =
          b_prefixes.empty() ? std::vector<std::uint64_t>{full}
                             : parse_size_list(b_prefixes);
      const std::vector<std::uint64_t> mems = parse_size_list(b_mems);

      json rows = json::array();
      std::printf("%12s %12s %8s %6s %10s %10s %12s %10s\n", "prefix", "mem",
                  "blocks", "mode", "s/MiB", "io/sym", "z", "n/z");
      for (const std::uint64_t pref : prefixes) {
        const std::uint64_t n = std::min(pref, full);
        // Materialize the prefix so the run is self-contained.
        const std::string pref_path =
            b_input + ".pfx" + std::to_string(n);
        {
          emlz::posix_file in = emlz::posix_file::open_read(b_input);
          emlz::posix_file out = emlz::posix_file::create(pref_path);
          std::vector<std::uint8_t> buf(1 << 20);
          std::uint64_t done = 0;
          while (done < n) {
            const std::size_t take =
                std::size_t(std::min<std::uint64_t>(buf.size(), n - done));
            in.read_at(done, buf.data(), take);
            out.write_at(done, buf.data(), take);
            done += take;
          }
        }
        for (const std::uint64_t mem : mems) {
          emlz::config cfg = make_config("", "", b_mode, 262144, b_skip, "",
                                         false);
          cfg.mem_budget = mem;
          const emlz::parse_stats st =
              emlz::parse_file(pref_path, pref_path, cfg);
          const double s_per_mib =
              st.n ? st.wall_seconds / (double(st.n) / double(1 << 20)) : 0.0;
          const double io_per_sym =
              st.n ? double(st.io.total_read() + st.io.total_written()) /
                         double(st.n)
                   : 0.0;
          std::printf("%12llu %12llu %8llu %6d %10.3f %10.3f %12llu %10.2f\n",
                      (unsigned long long)st.n, (unsigned long long)mem,
                      (unsigned long long)st.blocks, st.mode, s_per_mib,
                      io_per_sym, (unsigned long long)st.z, st.n_over_z());
          json row = stats_to_json(st, pref_path);
          row["mem_budget"] = mem;
          rows.push_back(row);
          emlz::remove_file(pref_path + ".lz");
        }
        emlz::remove_file(pref_path);
        emlz::remove_file(emlz::rev_path(pref_path));
      }
      if (!b_stats.empty())
        write_json(b_stats, rows);
      return 0;
    }
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
