#pragma once

#include <cstdint>
#include <vector>

#include "giqs/common.hpp"

namespace giqs {

using IntMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Row Hermite normal form of the lattice spanned by the rows of A: pivot
// entries positive, entries above each pivot reduced into [0, pivot),
// zero rows dropped. Unique for a given row lattice, hence canonical.
inline IntMat hnf_rows(IntMat a) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    // gcd elimination in column c among rows r..end
    while (true) {
      int pivot = -1;
      std::int64_t best = 0;
      for (int i = r; i < rows; ++i) {
        std::int64_t v = std::abs(a(i, c));
        if (v != 0 && (pivot < 0 || v < best)) {
          pivot = i;
          best = v;
        }
      }
      if (pivot < 0) break;
      a.row(pivot).swap(a.row(r));
      if (a(r, c) < 0) a.row(r) = -a.row(r);
      bool clean = true;
      for (int i = r + 1; i < rows; ++i) {
        if (a(i, c) != 0) {
          std::int64_t q = a(i, c) / a(r, c);
          a.row(i) -= q * a.row(r);
          if (a(i, c) != 0) clean = false;
        }
      }
      if (clean) break;
    }
    if (a(r, c) != 0) {
      for (int i = 0; i < r; ++i) {
        std::int64_t q = a(i, c) / a(r, c);
        if (a(i, c) - q * a(r, c) < 0) q -= 1;  // floor division
        a.row(i) -= q * a.row(r);
      }
      ++r;
    }
  }
  return a.topRows(r);
}

// Diagonalization A = U D R^-1 ... we only need: unimodular R (d x d) and
// the rank s such that the row lattice of A equals the lattice spanned by
// {D_tt * R.row(t)}. The saturation span_R(rows) cap Z^d is then spanned by
// the first s rows of R.
struct RowDiagonalization {
  int rank = 0;
  IntMat r;  // d x d unimodular
  std::vector<std::int64_t> diag;
};

inline RowDiagonalization diagonalize_rows(IntMat a) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  RowDiagonalization out;
  out.r = IntMat::Identity(cols, cols);

  int t = 0;
  while (t < std::min(rows, cols)) {
    // find a nonzero pivot of minimal absolute value in the working block
    int pi = -1, pj = -1;
    std::int64_t best = 0;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j) {
        std::int64_t v = std::abs(a(i, j));
        if (v != 0 && (pi < 0 || v < best)) {
          pi = i;
          pj = j;
          best = v;
        }
      }
    if (pi < 0) break;
    a.row(pi).swap(a.row(t));
    if (pj != t) {
      a.col(pj).swap(a.col(t));
      out.r.row(pj).swap(out.r.row(t));  // inverse column swap
    }
    if (a(t, t) < 0) {
      a.col(t) = -a.col(t);
      out.r.row(t) = -out.r.row(t);
    }
    bool again = false;
    for (int i = t + 1; i < rows; ++i) {
      if (a(i, t) != 0) {
        std::int64_t q = a(i, t) / a(t, t);
        a.row(i) -= q * a.row(t);
        if (a(i, t) != 0) again = true;
      }
    }
    for (int j = t + 1; j < cols; ++j) {
      if (a(t, j) != 0) {
        std::int64_t q = a(t, j) / a(t, t);
        // column op col_j -= q col_t; inverse recorded as row op on R
        a.col(j) -= q * a.col(t);
        out.r.row(t) += q * out.r.row(j);
        if (a(t, j) != 0) again = true;
      }
    }
    if (again) continue;  // re-pick pivot until row and column are clean
    out.diag.push_back(a(t, t));
    ++t;
  }
  out.rank = t;
  return out;
}

// Canonical basis of span_R(rows) cap Z^d (the saturation of the row
// lattice), as HNF rows. Empty matrix for rank zero.
inline IntMat saturate_rows(const IntMat& a) {
  RowDiagonalization d = diagonalize_rows(a);
  if (d.rank == 0) return IntMat(0, a.cols());
  return hnf_rows(d.r.topRows(d.rank));
}

}  // namespace giqs
