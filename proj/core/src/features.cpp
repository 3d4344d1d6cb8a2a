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

#include "mvawe/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>

namespace mvawe {

void AcousticSegment::validate() const {
  if (frames.rank() != 2 || frames.cols() != kFeatureDim)
    throw DataError("acoustic segment must be T x 40 (" + source_id + ")");
  if (frames.rows() < 1)
    throw DataError("acoustic segment needs at least one frame (" + source_id + ")");
  if (!frames.all_finite())
    throw DataError("acoustic segment has non-finite values (" + source_id + ")");
}

namespace {

const char* kDigitWords[10] = {"zero", "one", "two",   "three", "four",
                               "five", "six", "seven", "eight", "nine"};

std::string normalize_token(const std::string& tok) {
  std::string out;
  for (unsigned char ch : tok) {
    if (ch >= 'A' && ch <= 'Z') {
      out += static_cast<char>(ch - 'A' + 'a');
    } else if (ch >= 'a' && ch <= 'z') {
      out += static_cast<char>(ch);
    } else if (ch >= '0' && ch <= '9') {
      out += kDigitWords[ch - '0'];
    }
    // everything else (apostrophes, punctuation, non-ASCII bytes) is deleted
  }
  return out;
}

}  // namespace

NormalizedText normalize_text(const std::string& raw) {
  NormalizedText result;
  std::string tok;
  auto flush = [&] {
    if (tok.empty()) return;
    std::string norm = normalize_token(tok);
    if (norm.empty())
      ++result.dropped;
    else
      result.words.push_back(std::move(norm));
    tok.clear();
  };
  for (unsigned char ch : raw) {
    if (std::isspace(ch))
      flush();
    else
      tok += static_cast<char>(ch);
  }
  flush();
  return result;
}

TextLabel one_hot_encode(const std::string& word) {
  if (word.empty()) throw DataError("one_hot_encode: empty word");
  TextLabel label;
  label.text = word;
  label.onehot = Tensor({word.size(), kAlphabetSize});
  for (size_t w = 0; w < word.size(); ++w) {
    char ch = word[w];
    if (ch < 'a' || ch > 'z')
      throw DataError("one_hot_encode: out-of-alphabet character in '" + word + "'");
    label.onehot.at(w, static_cast<size_t>(ch - 'a')) = 1.0;
  }
  return label;
}

std::string argmax_text(const Tensor& rows, size_t num_classes) {
  std::string out;
  size_t cols = rows.cols();
  for (size_t r = 0; r < rows.rows(); ++r) {
    size_t best = 0;
    for (size_t c = 1; c < std::min(cols, num_classes); ++c)
      if (rows.at(r, c) > rows.at(r, best)) best = c;
    out += static_cast<char>('a' + best);
  }
  return out;
}

namespace {

// In-place iterative radix-2 FFT.
void fft(std::vector<std::complex<double>>& a) {
  size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * 3.14159265358979323846 / static_cast<double>(len);
    std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

struct MelGeometry {
  size_t win, hop, nfft;
  std::vector<double> edges_hz;  // 42 edge frequencies for 40 filters
};

MelGeometry mel_geometry(int sample_rate_hz) {
  if (sample_rate_hz < 8000)
    throw DataError("mel_filterbank: sample rate must be >= 8000 Hz");
  MelGeometry geo;
  geo.win = static_cast<size_t>(sample_rate_hz) * 25 / 1000;
  geo.hop = static_cast<size_t>(sample_rate_hz) * 10 / 1000;
  geo.nfft = 512;
  while (geo.nfft < geo.win) geo.nfft <<= 1;
  double nyquist = sample_rate_hz / 2.0;
  double mel_max = hz_to_mel(nyquist);
  geo.edges_hz.resize(kFeatureDim + 2);
  for (size_t i = 0; i < geo.edges_hz.size(); ++i)
    geo.edges_hz[i] =
        mel_to_hz(mel_max * static_cast<double>(i) / (kFeatureDim + 1));
  return geo;
}

}  // namespace

size_t mel_num_frames(size_t num_samples, int sample_rate_hz) {
  MelGeometry geo = mel_geometry(sample_rate_hz);
  if (num_samples < geo.win)
    throw DataError("mel_filterbank: waveform shorter than one window");
  return (num_samples - geo.win) / geo.hop + 1;
}

double mel_filter_center_hz(size_t k, int sample_rate_hz) {
  MelGeometry geo = mel_geometry(sample_rate_hz);
  if (k >= kFeatureDim) throw UsageError("filter index out of range");
  return geo.edges_hz[k + 1];
}

AcousticSegment mel_filterbank(const std::vector<double>& samples,
                               int sample_rate_hz, const std::string& source_id) {
  MelGeometry geo = mel_geometry(sample_rate_hz);
  if (samples.size() < geo.win)
    throw DataError("mel_filterbank: waveform shorter than one window");
  size_t num_frames = (samples.size() - geo.win) / geo.hop + 1;
  size_t num_bins = geo.nfft / 2 + 1;

  // Triangular filter weights on FFT bin frequencies.
  std::vector<std::vector<double>> filters(kFeatureDim,
                                           std::vector<double>(num_bins, 0.0));
  for (size_t k = 0; k < kFeatureDim; ++k) {
    double lo = geo.edges_hz[k], mid = geo.edges_hz[k + 1], hi = geo.edges_hz[k + 2];
    for (size_t b = 0; b < num_bins; ++b) {
      double f = static_cast<double>(b) * sample_rate_hz / static_cast<double>(geo.nfft);
      if (f > lo && f < mid)
        filters[k][b] = (f - lo) / (mid - lo);
      else if (f >= mid && f < hi)
        filters[k][b] = (hi - f) / (hi - mid);
    }
  }

  std::vector<double> window(geo.win);
  for (size_t i = 0; i < geo.win; ++i)
    window[i] = 0.54 - 0.46 * std::cos(2.0 * 3.14159265358979323846 * i /
                                       static_cast<double>(geo.win - 1));

  AcousticSegment seg;
  seg.frames = Tensor({num_frames, kFeatureDim});
  seg.source_id = source_id;
  std::vector<std::complex<double>> buf(geo.nfft);
  std::vector<double> power(num_bins);
  for (size_t t = 0; t < num_frames; ++t) {
    const double* frame = samples.data() + t * geo.hop;
    for (size_t i = 0; i < geo.nfft; ++i)
      buf[i] = i < geo.win ? std::complex<double>(frame[i] * window[i], 0.0)
                           : std::complex<double>(0.0, 0.0);
    fft(buf);
    for (size_t b = 0; b < num_bins; ++b) power[b] = std::norm(buf[b]);
    for (size_t k = 0; k < kFeatureDim; ++k) {
      double e = 0.0;
      for (size_t b = 0; b < num_bins; ++b) e += filters[k][b] * power[b];
      seg.frames.at(t, k) = std::log(std::max(e, kLogFloor));
    }
  }
  seg.validate();
  return seg;
}

}  // namespace mvawe
