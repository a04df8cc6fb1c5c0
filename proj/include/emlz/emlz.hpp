/**
 * @file    include/emlz/emlz.hpp
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

#ifndef EMLZ_EMLZ_HPP_INCLUDED
#define EMLZ_EMLZ_HPP_INCLUDED

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
#include "pipeline.hpp"
#include "rank_sequence.hpp"
#include "skip_log.hpp"
#include "suffix_array.hpp"

#endif // EMLZ_EMLZ_HPP_INCLUDED
