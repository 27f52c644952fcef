#pragma once

// Exhaustive L0-penalized cleaning of one small screened component.
//
// Minimizes over mu with entries in {0, t3} (one-sided) or {-t3, 0, t3}:
//   f(mu) = 1/2 (y - G mu)' G^-1 (y - G mu) + c * t2^2 * ||mu||_0,
// with c = 1/2 (default) or c = 1. Ties resolve to fewer nonzeros, then the
// lexicographically smallest support, then positive values.

#include <cmath>
#include <vector>

#include "upt/common.hpp"
#include "upt/error.hpp"

namespace upt {

enum class SignMode { one_sided, both_signs };
enum class PenaltyConvention { half_squared, squared };

struct CleanOptions {
  SignMode sign_mode = SignMode::both_signs;
  PenaltyConvention penalty = PenaltyConvention::half_squared;
  Index max_component_size = 12;
};

template <typename Scalar>
struct CleanResult {
  Vector<Scalar> mu;
  Scalar objective_value = Scalar(0);
  Indicator decisions;
};

template <typename Scalar>
Scalar penalty_weight(Scalar t2, PenaltyConvention convention) {
  return convention == PenaltyConvention::half_squared ? Scalar(0.5) * t2 * t2 : t2 * t2;
}

namespace detail {

// Candidate ordering for ties: (nonzero count, support lexicographic, sign code).
inline bool tie_prefers(const std::vector<int>& a, const std::vector<int>& b) {
  int na = 0, nb = 0;
  for (int v : a) na += v != 0;
  for (int v : b) nb += v != 0;
  if (na != nb) return na < nb;
  std::vector<std::size_t> sa, sb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]) sa.push_back(i);
    if (b[i]) sb.push_back(i);
  }
  if (sa != sb) return sa < sb;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

}  // namespace detail

template <typename DerivedY, typename DerivedG>
CleanResult<typename DerivedY::Scalar> clean_component(const Eigen::MatrixBase<DerivedY>& y,
                                                       const Eigen::MatrixBase<DerivedG>& gram,
                                                       typename DerivedY::Scalar t2,
                                                       typename DerivedY::Scalar t3,
                                                       const CleanOptions& options = {}) {
  using Scalar = typename DerivedY::Scalar;
  using std::abs;
  const Index m = y.size();
  if (gram.rows() != m || gram.cols() != m) throw InvalidArgument("clean_component: Gram size mismatch");
  if (m > options.max_component_size) throw ComponentTooLarge(m, options.max_component_size);

  CleanResult<Scalar> res;
  res.mu = Vector<Scalar>::Zero(m);
  res.decisions = Indicator::Zero(m);
  if (m == 0) return res;

  const Matrix<Scalar> G = gram;
  Eigen::LLT<Matrix<Scalar>> llt(G);
  if (llt.info() != Eigen::Success) throw SingularGram("clean_component: Gram block is not positive definite");
  const Vector<Scalar> yv = y;
  // f(mu) = 1/2 y'G^-1 y - mu'y + 1/2 mu'G mu + w ||mu||_0
  const Scalar base = Scalar(0.5) * yv.dot(llt.solve(yv));
  const Scalar w = penalty_weight(t2, options.penalty);

  const int levels = options.sign_mode == SignMode::both_signs ? 3 : 2;
  std::vector<int> code(m, 0), best(m, 0);  // 0 -> 0, 1 -> +t3, 2 -> -t3
  Vector<Scalar> mu = Vector<Scalar>::Zero(m);
  Scalar best_value = base;
  bool first = true;
  for (;;) {
    Index nnz = 0;
    for (Index i = 0; i < m; ++i) {
      mu(i) = code[i] == 0 ? Scalar(0) : (code[i] == 1 ? t3 : -t3);
      nnz += code[i] != 0;
    }
    const Scalar value = base - mu.dot(yv) + Scalar(0.5) * mu.dot(G * mu) + w * Scalar(nnz);
    const Scalar tol = Scalar(1e-12) * (Scalar(1) + abs(best_value));
    if (first || value < best_value - tol ||
        (abs(value - best_value) <= tol && detail::tie_prefers(code, best))) {
      best_value = value;
      best = code;
      first = false;
    }
    Index k = 0;
    while (k < m && ++code[k] == levels) code[k++] = 0;
    if (k == m) break;
  }
  for (Index i = 0; i < m; ++i) {
    res.mu(i) = best[i] == 0 ? Scalar(0) : (best[i] == 1 ? t3 : -t3);
    res.decisions(i) = best[i] != 0;
  }
  res.objective_value = best_value;
  return res;
}

}  // namespace upt
