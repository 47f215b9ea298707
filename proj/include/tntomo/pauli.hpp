#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tntomo/common.hpp"

namespace tntomo {

using Matrix2cd = Eigen::Matrix2cd;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;

/// Lattice coordinate; 1D chains use row 0.
struct Coord {
  int row = 0;
  int col = 0;
  friend bool operator==(const Coord& a, const Coord& b) {
    return a.row == b.row && a.col == b.col;
  }
  friend bool operator<(const Coord& a, const Coord& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  }
};

inline bool is_pauli_letter(char c) {
  return c == 'I' || c == 'X' || c == 'Y' || c == 'Z';
}

inline Matrix2cd pauli_matrix(char op) {
  Matrix2cd m;
  const cplx i(0.0, 1.0);
  switch (op) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw InvalidArgument(std::string("unknown Pauli letter '") + op + "'");
  }
  return m;
}

/// Rotation U with P = U^dag Z U: measuring P equals applying U, measuring Z.
/// Outcome bit 0 maps to eigenvalue +1.
inline Matrix2cd basis_rotation(char op) {
  Matrix2cd m;
  const cplx i(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  switch (op) {
    case 'X': m << s, s, s, -s; break;                    // H
    case 'Y': m << s, -i * s, s, i * s; break;            // H S^dag
    case 'Z': m << 1, 0, 0, 1; break;
    default:
      throw InvalidArgument(std::string("no measurement rotation for '") + op + "'");
  }
  return m;
}

/// Pauli word over an explicit support. Letters and coordinates correspond
/// position by position.
struct PauliString {
  std::string ops;
  std::vector<Coord> support;

  PauliString() = default;
  PauliString(std::string letters, std::vector<Coord> sites)
      : ops(std::move(letters)), support(std::move(sites)) {
    require(ops.size() == support.size(),
            "PauliString: ops and support differ in length");
    for (char c : ops)
      require(is_pauli_letter(c), "PauliString: bad letter");
  }

  /// 1D convenience: letters on sites [start, start + ops.size()).
  static PauliString chain(std::string letters, int start = 0) {
    std::vector<Coord> sup(letters.size());
    for (std::size_t i = 0; i < letters.size(); ++i)
      sup[i] = {0, start + static_cast<int>(i)};
    return PauliString(std::move(letters), std::move(sup));
  }

  std::size_t size() const { return ops.size(); }

  char letter_at(const Coord& c) const {
    for (std::size_t i = 0; i < support.size(); ++i)
      if (support[i] == c) return ops[i];
    return 'I';
  }
};

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

/// Dense matrix of a Pauli word on its own window, first letter = most
/// significant qubit.
inline MatrixXcd pauli_word_matrix(const std::string& ops) {
  MatrixXcd m = MatrixXcd::Identity(1, 1);
  for (char c : ops) m = kron(m, pauli_matrix(c));
  return m;
}

/// All letter combinations over `alphabet` of length L, ordered
/// lexicographically with the first position most significant.
inline std::vector<std::string> letter_combinations(const std::string& alphabet,
                                                    std::size_t length) {
  std::vector<std::string> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < length; ++i) total *= alphabet.size();
  out.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    std::string s(length, alphabet[0]);
    std::size_t rem = k;
    for (std::size_t pos = length; pos-- > 0;) {
      s[pos] = alphabet[rem % alphabet.size()];
      rem /= alphabet.size();
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace tntomo
