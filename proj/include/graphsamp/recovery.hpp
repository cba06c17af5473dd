#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "graphsamp/error.hpp"
#include "graphsamp/sampling.hpp"
#include "graphsamp/spectral.hpp"

namespace graphsamp {

enum class Estimator { sample_proj, least_squares, sampling_theory };

inline std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::sample_proj: return "sample_proj";
    case Estimator::least_squares: return "ls";
    case Estimator::sampling_theory: return "st";
  }
  return "sample_proj";
}

inline Estimator parse_estimator(std::string_view tag) {
  if (tag == "sample_proj") return Estimator::sample_proj;
  if (tag == "ls" || tag == "least_squares") return Estimator::least_squares;
  if (tag == "st" || tag == "sampling_theory") return Estimator::sampling_theory;
  throw ParameterError("unknown estimator '" + std::string(tag) + "'");
}

// Recovered signal, always inside the span of the first `kappa` eigenvectors.
struct Estimate {
  Eigen::VectorXd values;
  int kappa = 0;
  Estimator estimator = Estimator::sample_proj;
  int rank = 0;                // rank of the solved system (kappa for sample_proj)
  bool rank_deficient = false;
};

inline constexpr double kPinvRelTol = 1e-10;

namespace detail {

inline void check_kappa(const SpectralBasis& basis, int kappa) {
  if (kappa < 1 || kappa > basis.size()) throw ParameterError("kappa must lie in [1, n]");
}

inline void check_draw(const SpectralBasis& basis, const SampleDraw& draw) {
  if (draw.observations.size() != static_cast<Eigen::Index>(draw.indices.size()))
    throw ParameterError("draw has mismatched indices and observations");
  if (draw.indices.empty()) throw ParameterError("draw is empty");
  for (int i : draw.indices)
    if (i < 0 || i >= basis.size()) throw ParameterError("drawn index out of range");
}

// Minimum-norm least-squares solution with singular values below
// kPinvRelTol * sigma_max treated as zero.
inline Eigen::VectorXd pinv_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int& rank) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kPinvRelTol);
  rank = static_cast<int>(svd.rank());
  return svd.solve(b);
}

}  // namespace detail

// Sampled projection: every draw j adds y_j / (m pi_{M_j}) at node M_j
// (repeats accumulate), and the resulting vector is projected onto the band.
inline Estimate sample_proj(const SpectralBasis& basis, int kappa, const SampleDraw& draw,
                            const SamplingScores& scores) {
  detail::check_kappa(basis, kappa);
  detail::check_draw(basis, draw);
  if (scores.size() != basis.size()) throw ParameterError("scores do not match the basis");
  const double m = static_cast<double>(draw.indices.size());
  const auto band = basis.band(kappa);
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(kappa);
  for (std::size_t j = 0; j < draw.indices.size(); ++j) {
    const int node = draw.indices[j];
    const double p = scores.pi(node);
    if (!(p > 0.0)) throw ConsistencyError("node " + std::to_string(node) + " was drawn with zero probability");
    coeffs.noalias() += band.row(node).transpose() * (draw.observations(j) / (m * p));
  }
  return Estimate{band * coeffs, kappa, Estimator::sample_proj, kappa, false};
}

// Weighted least squares over the drawn nodes:
//   argmin_c || D Psi^T y - D Psi^T Psi V_k c ||,  D_ii = 1 / sqrt(m pi_i).
// Undrawn nodes give zero rows and are dropped.
inline Estimate least_squares_proj(const SpectralBasis& basis, int kappa, const SampleDraw& draw,
                                   const SamplingScores& scores) {
  detail::check_kappa(basis, kappa);
  detail::check_draw(basis, draw);
  if (scores.size() != basis.size()) throw ParameterError("scores do not match the basis");
  const double m = static_cast<double>(draw.indices.size());

  std::map<int, std::pair<int, double>> per_node;  // node -> (count, sum of y)
  for (std::size_t j = 0; j < draw.indices.size(); ++j) {
    auto& [count, sum] = per_node[draw.indices[j]];
    ++count;
    sum += draw.observations(j);
  }
  const auto band = basis.band(kappa);
  Eigen::MatrixXd design(per_node.size(), kappa);
  Eigen::VectorXd rhs(per_node.size());
  Eigen::Index row = 0;
  for (const auto& [node, acc] : per_node) {
    const double p = scores.pi(node);
    if (!(p > 0.0)) throw ConsistencyError("node " + std::to_string(node) + " was drawn with zero probability");
    const double d = 1.0 / std::sqrt(m * p);
    design.row(row) = band.row(node) * (d * acc.first);
    rhs(row) = d * acc.second;
    ++row;
  }
  Estimate out;
  out.kappa = kappa;
  out.estimator = Estimator::least_squares;
  const Eigen::VectorXd coeffs = detail::pinv_solve(design, rhs, out.rank);
  out.rank_deficient = out.rank < kappa;
  out.values = band * coeffs;
  return out;
}

// Bandlimited interpolation from a set of distinct nodes: V_k (Psi V_k)^+ y.
inline Estimate sampling_theory_recover(const SpectralBasis& basis, int kappa, const std::vector<int>& sample_indices,
                                        const Eigen::VectorXd& y) {
  detail::check_kappa(basis, kappa);
  if (sample_indices.empty()) throw ParameterError("sample set is empty");
  if (static_cast<Eigen::Index>(sample_indices.size()) != y.size())
    throw ParameterError("sample set and observations differ in length");
  std::vector<int> sorted = sample_indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ParameterError("sample indices must be distinct");
  if (sorted.front() < 0 || sorted.back() >= basis.size()) throw ParameterError("sample index out of range");

  const auto band = basis.band(kappa);
  Eigen::MatrixXd design(sample_indices.size(), kappa);
  for (std::size_t r = 0; r < sample_indices.size(); ++r) design.row(r) = band.row(sample_indices[r]);
  Estimate out;
  out.kappa = kappa;
  out.estimator = Estimator::sampling_theory;
  const Eigen::VectorXd coeffs = detail::pinv_solve(design, y, out.rank);
  out.rank_deficient = out.rank < kappa;
  out.values = band * coeffs;
  return out;
}

// Distinct drawn nodes with the first observation of each, in draw order.
inline std::pair<std::vector<int>, Eigen::VectorXd> distinct_samples(const SampleDraw& draw) {
  std::vector<int> nodes;
  std::vector<double> ys;
  std::vector<int> sorted;
  for (std::size_t j = 0; j < draw.indices.size(); ++j) {
    const int node = draw.indices[j];
    auto it = std::lower_bound(sorted.begin(), sorted.end(), node);
    if (it != sorted.end() && *it == node) continue;
    sorted.insert(it, node);
    nodes.push_back(node);
    ys.push_back(draw.observations(j));
  }
  return {std::move(nodes), Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()))};
}

// A deterministic sample set of kappa nodes whose band rows are linearly
// independent whenever such a set exists: the first kappa column pivots of a
// rank-revealing QR of V_k^T.
inline std::vector<int> full_rank_sample_set(const SpectralBasis& basis, int kappa) {
  detail::check_kappa(basis, kappa);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis.band(kappa).transpose());
  const auto& perm = qr.colsPermutation().indices();
  return std::vector<int>(perm.data(), perm.data() + kappa);
}

// Bandwidth rule: min(n, max(K_min, round(m^{1/(2 beta + 1)}))), halves round up.
inline int bandwidth_rule(int m, double beta, int k_min, int n) {
  if (m < 1) throw ParameterError("m must be at least 1");
  if (!(beta > 0.0)) throw ParameterError("beta must be positive");
  const double raw = std::pow(static_cast<double>(m), 1.0 / (2.0 * beta + 1.0));
  const int rounded = static_cast<int>(std::floor(raw + 0.5));
  return std::min(n, std::max(k_min, rounded));
}

// Runs the requested estimator on a draw. The sampling-theory estimator uses
// the distinct drawn nodes.
inline Estimate recover(Estimator estimator, const SpectralBasis& basis, int kappa, const SampleDraw& draw,
                        const SamplingScores& scores) {
  switch (estimator) {
    case Estimator::sample_proj: return sample_proj(basis, kappa, draw, scores);
    case Estimator::least_squares: return least_squares_proj(basis, kappa, draw, scores);
    case Estimator::sampling_theory: {
      auto [nodes, ys] = distinct_samples(draw);
      return sampling_theory_recover(basis, kappa, nodes, ys);
    }
  }
  throw ParameterError("unknown estimator");
}

}  // namespace graphsamp
