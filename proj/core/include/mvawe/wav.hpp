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

#ifndef MVAWE_WAV_HPP
#define MVAWE_WAV_HPP

#include <string>
#include <vector>

namespace mvawe {

struct WavData {
  int sample_rate_hz = 0;
  std::vector<double> samples;  // mono, scaled to [-1, 1)
};

// Reads PCM 16-bit mono WAV.  Anything else is a data error.
WavData read_wav(const std::string& path);

// Writes PCM 16-bit mono WAV (used by tests and the synthetic generator).
void write_wav(const std::string& path, const std::vector<double>& samples,
               int sample_rate_hz);

}  // namespace mvawe

#endif  // MVAWE_WAV_HPP
