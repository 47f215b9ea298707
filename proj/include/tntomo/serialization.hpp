#pragma once

// Versioned binary container for tensor-network states. Layout (all
// little-endian, documented in docs/file_formats.md):
//   magic   "TNTS"              4 bytes
//   version u32                 currently 1
//   kind    u8                  0 = MPS, 1 = LPDO, 2 = PEPS
//   rows    u32, cols u32       chains use rows = 1, cols = N
//   count   u32                 number of site tensors (row-major for PEPS)
//   per tensor:
//     rank  u32
//     per axis: label_len u16, label bytes, dim u64
//     data  2 * prod(dims) f64  (re, im) pairs, row-major

#include <cstring>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "tntomo/lpdo.hpp"
#include "tntomo/mps.hpp"
#include "tntomo/peps.hpp"

namespace tntomo {

enum class StateKind : std::uint8_t { MPS = 0, LPDO = 1, PEPS = 2 };

using SavedState = std::variant<MPSState, LPDOState, PEPSState>;

namespace detail {

inline constexpr char kMagic[4] = {'T', 'N', 'T', 'S'};
inline constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw NumericError("state file: truncated");
  return v;
}

inline void write_tensor(std::ostream& os, const DenseTensor& t) {
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(t.rank()));
  for (std::size_t i = 0; i < t.rank(); ++i) {
    const std::string& label = t.labels()[i];
    write_pod<std::uint16_t>(os, static_cast<std::uint16_t>(label.size()));
    os.write(label.data(), static_cast<std::streamsize>(label.size()));
    write_pod<std::uint64_t>(os, t.shape()[i]);
  }
  for (const auto& v : t.data()) {
    write_pod<double>(os, v.real());
    write_pod<double>(os, v.imag());
  }
}

inline DenseTensor read_tensor(std::istream& is) {
  const auto rank = read_pod<std::uint32_t>(is);
  std::vector<std::string> labels(rank);
  std::vector<std::size_t> shape(rank);
  for (std::uint32_t i = 0; i < rank; ++i) {
    const auto len = read_pod<std::uint16_t>(is);
    labels[i].resize(len);
    is.read(labels[i].data(), len);
    shape[i] = static_cast<std::size_t>(read_pod<std::uint64_t>(is));
  }
  DenseTensor t(std::move(labels), std::move(shape));
  for (auto& v : t.data()) {
    const double re = read_pod<double>(is);
    const double im = read_pod<double>(is);
    v = {re, im};
  }
  return t;
}

inline void write_header(std::ostream& os, StateKind kind, std::uint32_t rows,
                         std::uint32_t cols, std::uint32_t count) {
  os.write(kMagic, 4);
  write_pod<std::uint32_t>(os, kFormatVersion);
  write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(kind));
  write_pod<std::uint32_t>(os, rows);
  write_pod<std::uint32_t>(os, cols);
  write_pod<std::uint32_t>(os, count);
}

}  // namespace detail

inline void save_state(const std::string& path, const SavedState& state) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw NumericError("save_state: cannot open '" + path + "'");
  if (const auto* mps = std::get_if<MPSState>(&state)) {
    detail::write_header(os, StateKind::MPS, 1,
                         static_cast<std::uint32_t>(mps->n_sites()),
                         static_cast<std::uint32_t>(mps->n_sites()));
    for (const auto& t : mps->sites) detail::write_tensor(os, t);
  } else if (const auto* lpdo = std::get_if<LPDOState>(&state)) {
    detail::write_header(os, StateKind::LPDO, 1,
                         static_cast<std::uint32_t>(lpdo->n_sites()),
                         static_cast<std::uint32_t>(lpdo->n_sites()));
    for (const auto& t : lpdo->sites) detail::write_tensor(os, t);
  } else {
    const auto& peps = std::get<PEPSState>(state);
    detail::write_header(os, StateKind::PEPS,
                         static_cast<std::uint32_t>(peps.rows),
                         static_cast<std::uint32_t>(peps.cols),
                         static_cast<std::uint32_t>(peps.grid.size()));
    for (const auto& t : peps.grid) detail::write_tensor(os, t);
  }
  if (!os) throw NumericError("save_state: write failed for '" + path + "'");
}

inline SavedState load_state(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw NumericError("load_state: cannot open '" + path + "'");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, detail::kMagic, 4) != 0)
    throw NumericError("load_state: bad magic");
  const auto version = detail::read_pod<std::uint32_t>(is);
  if (version != detail::kFormatVersion)
    throw NumericError("load_state: unsupported version");
  const auto kind = static_cast<StateKind>(detail::read_pod<std::uint8_t>(is));
  const auto rows = detail::read_pod<std::uint32_t>(is);
  const auto cols = detail::read_pod<std::uint32_t>(is);
  const auto count = detail::read_pod<std::uint32_t>(is);

  std::vector<DenseTensor> tensors;
  tensors.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i)
    tensors.push_back(detail::read_tensor(is));

  switch (kind) {
    case StateKind::MPS: {
      MPSState s;
      s.sites = std::move(tensors);
      s.validate();
      return s;
    }
    case StateKind::LPDO: {
      LPDOState s;
      s.sites = std::move(tensors);
      s.validate();
      return s;
    }
    case StateKind::PEPS: {
      PEPSState s;
      s.rows = rows;
      s.cols = cols;
      s.grid = std::move(tensors);
      s.validate();
      return s;
    }
  }
  throw NumericError("load_state: unknown state kind");
}

}  // namespace tntomo
