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

#include <cstring>
#include <fstream>

#include "mvawe/params.hpp"

namespace mvawe {

namespace {

constexpr char kMagic[6] = {'M', 'V', 'A', 'W', 'E', '1'};
constexpr uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw DataError("checkpoint: truncated file");
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const ParamSet& params) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("checkpoint: cannot open for writing: " + path);
  os.write(kMagic, sizeof(kMagic));
  write_pod<uint32_t>(os, kVersion);
  write_pod<uint32_t>(os, static_cast<uint32_t>(params.size()));
  for (const auto& [name, t] : params) {
    write_pod<uint32_t>(os, static_cast<uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_pod<uint32_t>(os, static_cast<uint32_t>(t.rank()));
    for (size_t d : t.shape) write_pod<uint64_t>(os, d);
    os.write(reinterpret_cast<const char*>(t.data.data()),
             static_cast<std::streamsize>(t.data.size() * sizeof(double)));
  }
  if (!os) throw DataError("checkpoint: write failed: " + path);
}

ParamSet load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("checkpoint: cannot open: " + path);
  char magic[6];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw DataError("checkpoint: bad magic in " + path);
  uint32_t version = read_pod<uint32_t>(is);
  if (version != kVersion)
    throw DataError("checkpoint: unsupported version " + std::to_string(version));
  uint32_t count = read_pod<uint32_t>(is);
  ParamSet params;
  for (uint32_t i = 0; i < count; ++i) {
    uint32_t name_len = read_pod<uint32_t>(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    if (!is) throw DataError("checkpoint: truncated name");
    uint32_t rank = read_pod<uint32_t>(is);
    std::vector<size_t> shape(rank);
    size_t numel = 1;
    for (uint32_t d = 0; d < rank; ++d) {
      shape[d] = static_cast<size_t>(read_pod<uint64_t>(is));
      numel *= shape[d];
    }
    Tensor t(shape);
    is.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(numel * sizeof(double)));
    if (!is) throw DataError("checkpoint: truncated payload for " + name);
    t.requires_grad = true;
    params.emplace(std::move(name), std::move(t));
  }
  return params;
}

}  // namespace mvawe
