#pragma once

// Confusion counts per replicate and error rates across replicates.
// FDR/FNR average per-replicate proportions (0/0 taken as 0); mFDR/mFNR are
// ratios of replicate-summed counts.

#include <span>

#include "upt/common.hpp"

namespace upt {

struct ConfusionCounts {
  Index tp = 0;
  Index fp = 0;
  Index fn = 0;
  Index tn = 0;

  Index total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(const Indicator& theta, const Indicator& delta);

struct MetricsSummary {
  Index rep_count = 0;
  double atp = 0.0;
  double afp = 0.0;
  double fdr = 0.0;
  double fnr = 0.0;
  double mfdr = 0.0;
  double mfnr = 0.0;
  double fwer = 0.0;
  double mean_hamming = 0.0;
  // Monte Carlo standard errors; ratio estimators use the delta method.
  double atp_se = 0.0;
  double afp_se = 0.0;
  double fdr_se = 0.0;
  double fnr_se = 0.0;
  double mfdr_se = 0.0;
  double mfnr_se = 0.0;
  double fwer_se = 0.0;
  double hamming_se = 0.0;
};

MetricsSummary aggregate(std::span<const ConfusionCounts> counts);

}  // namespace upt
