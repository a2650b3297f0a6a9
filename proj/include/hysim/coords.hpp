#pragma once

#include <string>

#include "hysim/errors.hpp"

namespace hysim {

// Sector sizes of a hybrid phase space: n_cl classical degrees of freedom
// (x_k, p_k) and n_qm quantum modes (X_i, P_i).  Coordinates are stored in a
// single flat array, classical sector first, each sector interleaved:
//
//   [x_1, p_1, ..., x_n, p_n, X_1, P_1, ..., X_N, P_N]
//
// This interleaved layout is the one internal contract every module relies
// on; all index arithmetic goes through the helpers below.
struct Dims {
  int n_cl = 0;
  int n_qm = 0;

  int total_coords() const { return 2 * (n_cl + n_qm); }
  bool operator==(const Dims&) const = default;
};

inline int cl_x(const Dims&, int k) { return 2 * k; }
inline int cl_p(const Dims&, int k) { return 2 * k + 1; }
inline int qm_x(const Dims& d, int i) { return 2 * d.n_cl + 2 * i; }
inline int qm_p(const Dims& d, int i) { return 2 * d.n_cl + 2 * i + 1; }

inline bool is_classical_coord(const Dims& d, int c) { return c < 2 * d.n_cl; }
inline bool is_position_like(int c) { return c % 2 == 0; }
// x_k <-> p_k (or X_i <-> P_i) within the same pair.
inline int conjugate_coord(int c) { return c ^ 1; }

// Human-readable name, 1-based: x1, p1, ..., X1, P1, ...
inline std::string coord_name(const Dims& d, int c) {
  if (c < 0 || c >= d.total_coords()) throw DimensionError("coordinate index out of range");
  if (is_classical_coord(d, c)) {
    return (is_position_like(c) ? "x" : "p") + std::to_string(c / 2 + 1);
  }
  const int q = c - 2 * d.n_cl;
  return (is_position_like(q) ? "X" : "P") + std::to_string(q / 2 + 1);
}

inline void require_same_dims(const Dims& a, const Dims& b, const char* where) {
  if (!(a == b)) {
    throw DimensionError(std::string(where) + ": dimension mismatch (" +
                         std::to_string(a.n_cl) + "," + std::to_string(a.n_qm) + ") vs (" +
                         std::to_string(b.n_cl) + "," + std::to_string(b.n_qm) + ")");
  }
}

}  // namespace hysim
