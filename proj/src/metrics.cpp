#include "mtclust/metrics.hpp"

#include <cmath>
#include <map>

#include "mtclust/errors.hpp"

namespace mtclust {

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw ArgumentError("nmi: label vectors differ in length");
  if (pred.empty()) throw ArgumentError("nmi: empty labels");
  const double n = static_cast<double>(pred.size());

  std::map<int, int> pid, tid;
  for (int v : pred) pid.emplace(v, static_cast<int>(pid.size()));
  for (int v : truth) tid.emplace(v, static_cast<int>(tid.size()));
  const std::size_t np = pid.size();
  const std::size_t nt = tid.size();

  if (np == 1 && nt == 1) return 1.0;  // both trivial partitions
  if (np == 1 || nt == 1) return 0.0;

  std::vector<double> joint(np * nt, 0.0), pm(np, 0.0), tm(nt, 0.0);
  for (std::size_t j = 0; j < pred.size(); ++j) {
    const auto p = static_cast<std::size_t>(pid[pred[j]]);
    const auto t = static_cast<std::size_t>(tid[truth[j]]);
    joint[p * nt + t] += 1.0;
    pm[p] += 1.0;
    tm[t] += 1.0;
  }

  double mi = 0.0, hp = 0.0, ht = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    if (pm[p] > 0.0) hp -= pm[p] / n * std::log(pm[p] / n);
    for (std::size_t t = 0; t < nt; ++t) {
      const double c = joint[p * nt + t];
      if (c > 0.0) mi += c / n * std::log(n * c / (pm[p] * tm[t]));
    }
  }
  for (std::size_t t = 0; t < nt; ++t)
    if (tm[t] > 0.0) ht -= tm[t] / n * std::log(tm[t] / n);

  if (hp <= 0.0 || ht <= 0.0) return 0.0;
  const double v = mi / std::sqrt(hp * ht);
  return std::min(1.0, std::max(0.0, v));
}

NmiReport nmi_report(const std::vector<std::vector<int>>& pred,
                     const std::vector<std::vector<int>>& truth) {
  if (pred.size() != truth.size())
    throw ArgumentError("nmi_report: task count mismatch");
  NmiReport rep;
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    rep.per_task.push_back(nmi(pred[i], truth[i]));
    sum += rep.per_task.back();
  }
  rep.macro_average = pred.empty() ? 0.0 : sum / static_cast<double>(pred.size());
  return rep;
}

}  // namespace mtclust
