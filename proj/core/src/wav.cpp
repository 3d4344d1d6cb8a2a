// Copyright 2026 The mvawe authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#include "mvawe/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "mvawe/common.hpp"

namespace mvawe {

namespace {

template <typename T>
T read_le(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw DataError("wav: truncated file");
  return v;
}

template <typename T>
void write_le(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("wav: cannot open " + path);
  char riff[4], wave[4];
  is.read(riff, 4);
  read_le<uint32_t>(is);  // chunk size
  is.read(wave, 4);
  if (!is || std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(wave, "WAVE", 4) != 0)
    throw DataError("wav: not a RIFF/WAVE file: " + path);

  WavData out;
  uint16_t channels = 0, bits = 0;
  bool got_fmt = false;
  while (is) {
    char id[4];
    is.read(id, 4);
    if (!is) break;
    uint32_t size = read_le<uint32_t>(is);
    if (std::memcmp(id, "fmt ", 4) == 0) {
      uint16_t format = read_le<uint16_t>(is);
      channels = read_le<uint16_t>(is);
      out.sample_rate_hz = static_cast<int>(read_le<uint32_t>(is));
      read_le<uint32_t>(is);  // byte rate
      read_le<uint16_t>(is);  // block align
      bits = read_le<uint16_t>(is);
      if (size > 16) is.seekg(size - 16, std::ios::cur);
      if (format != 1) throw DataError("wav: only PCM supported: " + path);
      got_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      if (!got_fmt) throw DataError("wav: data before fmt chunk: " + path);
      if (channels != 1 || bits != 16)
        throw DataError("wav: expected 16-bit mono PCM: " + path);
      size_t n = size / 2;
      out.samples.resize(n);
      for (size_t i = 0; i < n; ++i)
        out.samples[i] = read_le<int16_t>(is) / 32768.0;
      return out;
    } else {
      is.seekg(size + (size & 1), std::ios::cur);
    }
  }
  throw DataError("wav: no data chunk in " + path);
}

void write_wav(const std::string& path, const std::vector<double>& samples,
               int sample_rate_hz) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("wav: cannot open for writing " + path);
  uint32_t data_size = static_cast<uint32_t>(samples.size() * 2);
  os.write("RIFF", 4);
  write_le<uint32_t>(os, 36 + data_size);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  write_le<uint32_t>(os, 16);
  write_le<uint16_t>(os, 1);  // PCM
  write_le<uint16_t>(os, 1);  // mono
  write_le<uint32_t>(os, static_cast<uint32_t>(sample_rate_hz));
  write_le<uint32_t>(os, static_cast<uint32_t>(sample_rate_hz * 2));
  write_le<uint16_t>(os, 2);
  write_le<uint16_t>(os, 16);
  os.write("data", 4);
  write_le<uint32_t>(os, data_size);
  for (double s : samples) {
    double clamped = std::clamp(s, -1.0, 32767.0 / 32768.0);
    write_le<int16_t>(os, static_cast<int16_t>(std::lrint(clamped * 32768.0)));
  }
  if (!os) throw DataError("wav: write failed " + path);
}

}  // namespace mvawe
