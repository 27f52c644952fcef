#pragma once

// Marginal statistics X'Y, marginal screening, and the thresholded Gram graph
// restricted to the screened set together with its connected components.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <vector>

#include "upt/common.hpp"
#include "upt/error.hpp"

namespace upt {

template <typename Scalar>
struct MarginalStats {
  Vector<Scalar> y_tilde;
};

template <typename DerivedX, typename DerivedY>
MarginalStats<typename DerivedX::Scalar> marginal_stats(const Eigen::MatrixBase<DerivedX>& X,
                                                        const Eigen::MatrixBase<DerivedY>& Y) {
  if (X.rows() != Y.size()) throw InvalidArgument("marginal_stats: X rows differ from Y length");
  return {X.transpose() * Y};
}

// U_p = { i : |y_tilde_i| > t1 }, ascending.
template <typename Derived>
std::vector<Index> screen(const Eigen::MatrixBase<Derived>& y_tilde, typename Derived::Scalar t1) {
  using std::abs;
  std::vector<Index> kept;
  for (Index i = 0; i < y_tilde.size(); ++i)
    if (abs(y_tilde(i)) > t1) kept.push_back(i);
  return kept;
}

template <typename Scalar>
std::vector<Index> screen(const MarginalStats<Scalar>& stats, Scalar t1) {
  return screen(stats.y_tilde, t1);
}

// log^-2(p) with the natural logarithm; infinite for p = 1.
template <typename Scalar = double>
Scalar gram_threshold(Index p) {
  const Scalar l = std::log(static_cast<Scalar>(p));
  return l > Scalar(0) ? Scalar(1) / (l * l) : std::numeric_limits<Scalar>::infinity();
}

template <typename Scalar>
struct GramEntry {
  Index row;
  Index col;
  Scalar value;
};

template <typename Scalar>
struct ComponentGraph {
  Index p = 0;
  Scalar threshold = Scalar(0);
  std::vector<Index> survivors;
  // Diagonals of every survivor plus off-diagonals above the threshold, both
  // orientations, sorted by (row, col). Indices are original predictor indices.
  std::vector<GramEntry<Scalar>> gram_entries;
  // Partition of survivors, each component ascending, ordered by first member.
  std::vector<std::vector<Index>> components;
  Index max_component_size = 0;
  // Unthresholded (X'X) restricted to each component, aligned with components.
  std::vector<Matrix<Scalar>> component_gram;

  std::optional<Scalar> entry(Index i, Index j) const {
    auto it = std::lower_bound(gram_entries.begin(), gram_entries.end(), std::pair{i, j},
                               [](const GramEntry<Scalar>& e, const std::pair<Index, Index>& k) {
                                 return std::pair{e.row, e.col} < k;
                               });
    if (it == gram_entries.end() || it->row != i || it->col != j) return std::nullopt;
    return it->value;
  }
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(Index n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }
  Index find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<Index> parent_;
  std::vector<int> rank_;
};

}  // namespace detail

// Computes (X'X)(i, j) for survivors only, thresholds off-diagonals at
// `threshold` (default log^-2(p)) with strict inequality, and splits the
// survivors into connected components.
template <typename DerivedX>
ComponentGraph<typename DerivedX::Scalar> restricted_gram(
    const Eigen::MatrixBase<DerivedX>& X, const std::vector<Index>& survivors,
    std::optional<typename DerivedX::Scalar> threshold = std::nullopt) {
  using Scalar = typename DerivedX::Scalar;
  using std::abs;
  ComponentGraph<Scalar> g;
  g.p = X.cols();
  g.threshold = threshold.value_or(gram_threshold<Scalar>(g.p));
  g.survivors = survivors;
  if (!std::is_sorted(g.survivors.begin(), g.survivors.end()))
    std::sort(g.survivors.begin(), g.survivors.end());
  const Index m = static_cast<Index>(g.survivors.size());
  if (m == 0) return g;
  for (Index s : g.survivors)
    if (s < 0 || s >= g.p) throw InvalidArgument("restricted_gram: survivor index out of range");

  Matrix<Scalar> xu(X.rows(), m);
  for (Index k = 0; k < m; ++k) xu.col(k) = X.col(g.survivors[k]);
  Matrix<Scalar> gram = Matrix<Scalar>::Zero(m, m);
  gram.template selfadjointView<Eigen::Lower>().rankUpdate(xu.transpose());
  gram.template triangularView<Eigen::StrictlyUpper>() = gram.transpose();

  detail::DisjointSets sets(m);
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) {
      const Scalar v = gram(a, b);
      if (a == b || abs(v) > g.threshold) {
        g.gram_entries.push_back({g.survivors[a], g.survivors[b], v});
        if (a < b) sets.unite(a, b);
      }
    }
  }

  std::vector<Index> slot(m, -1);
  for (Index a = 0; a < m; ++a) {
    const Index root = sets.find(a);
    if (slot[root] < 0) {
      slot[root] = static_cast<Index>(g.components.size());
      g.components.emplace_back();
    }
    g.components[slot[root]].push_back(a);  // local positions, ascending
  }
  for (auto& comp : g.components) {
    Matrix<Scalar> block(comp.size(), comp.size());
    for (std::size_t u = 0; u < comp.size(); ++u)
      for (std::size_t v = 0; v < comp.size(); ++v) block(u, v) = gram(comp[u], comp[v]);
    g.component_gram.push_back(std::move(block));
    for (Index& local : comp) local = g.survivors[local];
    g.max_component_size = std::max<Index>(g.max_component_size, comp.size());
  }
  return g;
}

// Diagnostic dump: component_id,member_index (1-based member indices).
template <typename Scalar>
void write_components_csv(std::ostream& out, const ComponentGraph<Scalar>& g) {
  out << "component_id,member_index\n";
  for (std::size_t c = 0; c < g.components.size(); ++c)
    for (Index member : g.components[c]) out << c + 1 << ',' << member + 1 << '\n';
}

}  // namespace upt
