// SPDX-License-Identifier: Apache-2.0
//
// fdbeam: self-interference-aware analog beamforming codebooks for
// full-duplex millimeter-wave transceivers
// Copyright (C) 2026 The fdbeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#ifndef FDBEAM_IO_HPP
#define FDBEAM_IO_HPP

#include <string>
#include <vector>

namespace fdbeam
{
    // Write `content` to a sibling temp file, then rename over `path`.
    void write_file_atomic(const std::string &path, const std::string &content);

    std::string read_file(const std::string &path);

    // Split a line on commas, trimming surrounding whitespace of each field.
    std::vector<std::string> split_csv_line(const std::string &line);

    // Shortest decimal representation that round-trips; "inf", "-inf", "nan" otherwise.
    std::string format_double(double v);
}

#endif
