#include "upt/metrics.hpp"

#include <cmath>
#include <vector>

#include "upt/error.hpp"

namespace upt {

ConfusionCounts confusion(const Indicator& theta, const Indicator& delta) {
  if (theta.size() != delta.size()) throw InvalidArgument("confusion: length mismatch");
  ConfusionCounts c;
  for (Index i = 0; i < theta.size(); ++i) {
    const bool truth = theta(i) != 0;
    const bool call = delta(i) != 0;
    if (truth && call) ++c.tp;
    else if (!truth && call) ++c.fp;
    else if (truth) ++c.fn;
    else ++c.tn;
  }
  return c;
}

namespace {

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  const double n = static_cast<double>(x.size());
  for (double v : x) m.mean += v;
  m.mean /= n;
  if (x.size() < 2) return m;
  double ss = 0.0;
  for (double v : x) ss += (v - m.mean) * (v - m.mean);
  m.se = std::sqrt(ss / (n - 1.0) / n);
  return m;
}

// Ratio of sums sum(num)/sum(den) and its delta-method standard error.
Moments ratio(const std::vector<double>& num, const std::vector<double>& den) {
  Moments m;
  double sn = 0.0, sd = 0.0;
  for (std::size_t r = 0; r < num.size(); ++r) {
    sn += num[r];
    sd += den[r];
  }
  if (sd <= 0.0) return m;
  m.mean = sn / sd;
  const double n = static_cast<double>(num.size());
  if (num.size() < 2) return m;
  double ss = 0.0;
  for (std::size_t r = 0; r < num.size(); ++r) {
    const double e = num[r] - m.mean * den[r];
    ss += e * e;
  }
  m.se = std::sqrt(ss / (n * (n - 1.0))) / (sd / n);
  return m;
}

}  // namespace

MetricsSummary aggregate(std::span<const ConfusionCounts> counts) {
  if (counts.empty()) throw InvalidArgument("aggregate needs at least one replicate");
  const std::size_t R = counts.size();
  std::vector<double> tp(R), fp(R), disc(R), fn(R), nondisc(R), fdp(R), fnp(R), any(R), ham(R);
  for (std::size_t r = 0; r < R; ++r) {
    const auto& c = counts[r];
    tp[r] = static_cast<double>(c.tp);
    fp[r] = static_cast<double>(c.fp);
    fn[r] = static_cast<double>(c.fn);
    disc[r] = static_cast<double>(c.tp + c.fp);
    nondisc[r] = static_cast<double>(c.fn + c.tn);
    fdp[r] = disc[r] > 0 ? fp[r] / disc[r] : 0.0;
    fnp[r] = nondisc[r] > 0 ? fn[r] / nondisc[r] : 0.0;
    ham[r] = fp[r] + fn[r];
    any[r] = ham[r] > 0 ? 1.0 : 0.0;
  }
  MetricsSummary s;
  s.rep_count = static_cast<Index>(R);
  const auto a = moments(tp), b = moments(fp), f = moments(fdp), g = moments(fnp), w = moments(any),
             h = moments(ham), mf = ratio(fp, disc), mn = ratio(fn, nondisc);
  s.atp = a.mean, s.atp_se = a.se;
  s.afp = b.mean, s.afp_se = b.se;
  s.fdr = f.mean, s.fdr_se = f.se;
  s.fnr = g.mean, s.fnr_se = g.se;
  s.fwer = w.mean, s.fwer_se = w.se;
  s.mean_hamming = h.mean, s.hamming_se = h.se;
  s.mfdr = mf.mean, s.mfdr_se = mf.se;
  s.mfnr = mn.mean, s.mfnr_se = mn.se;
  return s;
}

}  // namespace upt
