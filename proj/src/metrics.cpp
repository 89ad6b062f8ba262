#include "ale/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ale {

namespace {

void check_inputs(const std::vector<double>& scores,
                  const std::vector<int>& labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("scores and labels differ in length");
  if (scores.empty()) throw std::invalid_argument("undefined metric");
  for (int l : labels)
    if (l != 0 && l != 1) throw std::invalid_argument("labels must be binary");
}

// log C(n, k) via lgamma; exact enough for tail sums at any n we meet.
double log_choose(long long n, long long k) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

Confusion confusion_at(const std::vector<double>& scores,
                       const std::vector<int>& labels, double threshold) {
  check_inputs(scores, labels);
  Confusion c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    bool positive = scores[i] >= threshold;
    if (labels[i] == 1)
      positive ? ++c.tp : ++c.fn;
    else
      positive ? ++c.fp : ++c.tn;
  }
  return c;
}

double accuracy(const Confusion& c) {
  if (c.total() == 0) throw std::invalid_argument("undefined metric");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

double sensitivity(const Confusion& c) {
  if (c.tp + c.fn == 0) throw std::invalid_argument("undefined metric");
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double specificity(const Confusion& c) {
  if (c.tn + c.fp == 0) throw std::invalid_argument("undefined metric");
  return static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
}

double auc_roc(const std::vector<double>& scores, const std::vector<int>& labels) {
  check_inputs(scores, labels);
  long long n_pos = std::count(labels.begin(), labels.end(), 1);
  long long n_neg = static_cast<long long>(labels.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("undefined metric");

  // Mann-Whitney via average ranks over score-ascending order.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] == 1) pos_rank_sum += avg_rank;
    i = j;
  }
  double u = pos_rank_sum - static_cast<double>(n_pos) *
                                (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double average_precision(const std::vector<double>& scores,
                         const std::vector<int>& labels) {
  check_inputs(scores, labels);
  long long n_pos = std::count(labels.begin(), labels.end(), 1);
  if (n_pos == 0) throw std::invalid_argument("undefined metric");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  // Descending score; equal scores keep ascending input index.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  double ap = 0.0;
  long long tp = 0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]] == 1) ++tp;
    double recall = static_cast<double>(tp) / static_cast<double>(n_pos);
    double precision = static_cast<double>(tp) / static_cast<double>(k + 1);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

double mcnemar_p(const std::vector<int>& correct_a,
                 const std::vector<int>& correct_b) {
  if (correct_a.size() != correct_b.size())
    throw std::invalid_argument("paired lists differ in length");
  long long b = 0;  // a correct, b wrong
  long long c = 0;  // a wrong, b correct
  for (std::size_t i = 0; i < correct_a.size(); ++i) {
    if ((correct_a[i] != 0 && correct_a[i] != 1) ||
        (correct_b[i] != 0 && correct_b[i] != 1))
      throw std::invalid_argument("labels must be binary");
    bool ca = correct_a[i] != 0;
    bool cb = correct_b[i] != 0;
    if (ca && !cb) ++b;
    if (!ca && cb) ++c;
  }
  long long n = b + c;
  if (n == 0) return 1.0;

  long long k = std::min(b, c);
  // Tail sum in log space: P[X <= k] with X ~ Binomial(n, 1/2).
  double log_half_n = -static_cast<double>(n) * std::log(2.0);
  double tail = 0.0;
  for (long long i = 0; i <= k; ++i)
    tail += std::exp(log_choose(n, i) + log_half_n);
  return std::min(1.0, 2.0 * tail);
}

EvalResult evaluate_binary(const std::vector<double>& scores,
                           const std::vector<int>& labels, double threshold) {
  EvalResult r;
  Confusion c = confusion_at(scores, labels, threshold);
  r.acc = accuracy(c);
  r.se = sensitivity(c);
  r.sp = specificity(c);
  r.auc = auc_roc(scores, labels);
  r.ap = average_precision(scores, labels);
  return r;
}

}  // namespace ale
