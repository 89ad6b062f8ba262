#pragma once

#include <vector>

namespace ale {

struct Confusion {
  long long tp = 0;
  long long fp = 0;
  long long tn = 0;
  long long fn = 0;
  long long total() const { return tp + fp + tn + fn; }
};

// Positive prediction iff score >= threshold. Labels must be 0 or 1.
Confusion confusion_at(const std::vector<double>& scores,
                       const std::vector<int>& labels, double threshold);

// Each throws "undefined metric" on a zero denominator.
double accuracy(const Confusion& c);
double sensitivity(const Confusion& c);
double specificity(const Confusion& c);

// Probability a random positive outranks a random negative; ties count 1/2.
// Throws "undefined metric" unless both classes are present.
double auc_roc(const std::vector<double>& scores, const std::vector<int>& labels);

// Step-wise area under the precision-recall curve: sum over the
// score-descending ordering (ties broken by ascending input index) of
// (recall_k - recall_{k-1}) * precision_k. Throws "undefined metric" when
// there are no positives.
double average_precision(const std::vector<double>& scores,
                         const std::vector<int>& labels);

// Exact two-sided McNemar test on paired correctness indicators (0/1).
// With b and c the two disagreement counts, p = min(1, 2 * P[X <= min(b,c)])
// for X ~ Binomial(b + c, 1/2); p = 1 when b + c = 0.
double mcnemar_p(const std::vector<int>& correct_a,
                 const std::vector<int>& correct_b);

struct EvalResult {
  double acc = 0.0;
  double auc = 0.0;
  double ap = 0.0;
  double se = 0.0;
  double sp = 0.0;
};

// Convenience bundle used by the experiment harness.
EvalResult evaluate_binary(const std::vector<double>& scores,
                           const std::vector<int>& labels,
                           double threshold = 0.5);

}  // namespace ale
