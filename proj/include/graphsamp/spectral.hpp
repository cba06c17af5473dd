#pragma once

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "graphsamp/error.hpp"
#include "graphsamp/graph.hpp"

namespace graphsamp {

// Graph shift scaled to unit spectral radius.
struct NormalizedShift {
  Eigen::MatrixXd matrix;
  double scale = 1.0;  // |lambda_max| of the raw adjacency

  int size() const noexcept { return static_cast<int>(matrix.rows()); }
};

// Orthonormal eigenbasis of a symmetric shift. Column k of `vectors` is the
// eigenvector of eigenvalues(k); eigenvalues are sorted descending. The
// forward transform is vectors^T, so it is not stored.
struct SpectralBasis {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd eigenvalues;

  int size() const noexcept { return static_cast<int>(vectors.rows()); }

  // First kappa columns: the low-frequency band.
  auto band(int kappa) const { return vectors.leftCols(kappa); }
};

struct GraphSpectrum {
  NormalizedShift shift;
  SpectralBasis basis;
};

namespace detail {

inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kSignTol = 1e-12;
inline constexpr double kTieTol = 1e-10;

inline void check_symmetric(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw SymmetryError("matrix is not square");
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol) throw SymmetryError("matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
}

// LAPACK dsyevd on a copy of `a`. Eigenvalues ascending. When `vectors` is
// false the returned matrix is empty.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> symmetric_eigen(const Eigen::MatrixXd& a, bool vectors) {
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd work = a;
  Eigen::VectorXd values(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, work.data(), n, values.data());
  if (info != 0) throw NumericError("symmetric eigensolver failed (info=" + std::to_string(info) + ")");
  if (!values.allFinite()) throw NumericError("eigensolver produced non-finite eigenvalues");
  if (!vectors) work.resize(0, 0);
  return {std::move(values), std::move(work)};
}

inline Eigen::Index first_significant(const Eigen::Ref<const Eigen::VectorXd>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > kSignTol) return i;
  return v.size();
}

// Reorders ascending LAPACK output into the canonical basis: eigenvalues
// descending, first significant component of each column positive, and
// columns within a tie group ordered by the index of that component
// (ascending), then by its magnitude (descending).
inline SpectralBasis canonicalize(Eigen::VectorXd ascending, Eigen::MatrixXd vectors) {
  const auto n = ascending.size();
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto lead = first_significant(vectors.col(k));
    if (lead < n && vectors(lead, k) < 0.0) vectors.col(k) *= -1.0;
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::reverse(order.begin(), order.end());

  std::vector<Eigen::Index> lead(n);
  for (Eigen::Index k = 0; k < n; ++k) lead[k] = first_significant(vectors.col(k));
  auto tie_less = [&](Eigen::Index a, Eigen::Index b) {
    if (lead[a] != lead[b]) return lead[a] < lead[b];
    if (lead[a] == n) return a > b;
    const double va = vectors(lead[a], a), vb = vectors(lead[b], b);
    if (va != vb) return va > vb;
    return a > b;
  };
  for (std::size_t begin = 0; begin < order.size();) {
    std::size_t end = begin + 1;
    while (end < order.size() && std::abs(ascending(order[end]) - ascending(order[end - 1])) <= kTieTol) ++end;
    if (end - begin > 1) std::sort(order.begin() + begin, order.begin() + end, tie_less);
    begin = end;
  }

  SpectralBasis out;
  out.vectors.resize(n, n);
  out.eigenvalues.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.vectors.col(k) = vectors.col(order[k]);
    out.eigenvalues(k) = ascending(order[k]);
  }
  return out;
}

}  // namespace detail

inline NormalizedShift normalize_shift(const Graph& g) {
  const Eigen::MatrixXd& w = g.weights();
  if ((w.array() == 0.0).all()) throw DegenerateError("adjacency has no nonzero weight");
  auto [values, unused] = detail::symmetric_eigen(w, false);
  const double scale = values.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw DegenerateError("adjacency has zero spectral radius");
  return NormalizedShift{w / scale, scale};
}

inline SpectralBasis spectral_decompose(const NormalizedShift& shift) {
  detail::check_symmetric(shift.matrix);
  auto [values, vectors] = detail::symmetric_eigen(shift.matrix, true);
  return detail::canonicalize(std::move(values), std::move(vectors));
}

// normalize_shift followed by spectral_decompose, sharing one eigensolve:
// eigenvectors of the raw adjacency are those of the normalized shift.
inline GraphSpectrum analyze_graph(const Graph& g) {
  const Eigen::MatrixXd& w = g.weights();
  if ((w.array() == 0.0).all()) throw DegenerateError("adjacency has no nonzero weight");
  auto [values, vectors] = detail::symmetric_eigen(w, true);
  const double scale = values.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw DegenerateError("adjacency has zero spectral radius");
  values /= scale;
  return GraphSpectrum{NormalizedShift{w / scale, scale},
                       detail::canonicalize(std::move(values), std::move(vectors))};
}

// Leverage scores of the band: squared row norms of the first kappa columns.
inline Eigen::VectorXd leverage_scores(const SpectralBasis& basis, int kappa) {
  if (kappa < 1 || kappa > basis.size()) throw ParameterError("kappa must lie in [1, n]");
  return basis.band(kappa).rowwise().squaredNorm();
}

}  // namespace graphsamp
