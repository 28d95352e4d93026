#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fundus/core/grid.hpp"

namespace fundus::metrics {

// Region overlap of the binarized prediction against the ground truth:
// 2|P∩G| / (|P|+|G|). Two empty masks agree perfectly (1.0); exactly one
// empty side scores 0.0.
double dice(const ProbMap& pred, const Mask& gt, double threshold = 0.5);

// Mean absolute pixel-wise error, no binarization.
double mae(const ProbMap& pred, const Mask& gt);

// Pixels are pooled across all images; AUC is the rank statistic
// (probability a random positive outranks a random negative, ties half).
double auc_roc(std::span<const ProbMap> preds, std::span<const Mask> gts);
double auc_roc_pooled(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels);

// Area under the precision-recall curve, step-wise interpolation over the
// distinct thresholds of the pooled pixel set.
double auc_pr(std::span<const ProbMap> preds, std::span<const Mask> gts);
double auc_pr_pooled(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels);

// Chance-corrected agreement with quadratic distance weights over K ratings.
// The expected matrix (outer product of the two rating count vectors) is
// scaled to the observed matrix's total mass before the ratio.
double quadratic_weighted_kappa(const std::vector<int>& pred_grades,
                                const std::vector<int>& gt_grades, int num_classes = 5);

// Cohen's kappa (p_o - p_e) / (1 - p_e) with p_e from marginal frequencies.
double cohens_kappa(const std::vector<int>& pred_labels, const std::vector<int>& gt_labels);

// Binary F-1 = 2PR/(P+R); defined as 0 when P+R = 0.
double f1_score(const std::vector<int>& pred_labels, const std::vector<int>& gt_labels);

struct Confusion {
    int k = 0;
    std::vector<long long> counts; // counts[gt * k + pred]

    long long at(int gt, int pred) const { return counts[static_cast<std::size_t>(gt) * k + pred]; }
    long long total() const;
    long long trace() const;
    // Row-normalized percentages for plotting; all-zero rows stay zero.
    std::vector<double> row_normalized() const;
};

Confusion confusion_matrix(const std::vector<int>& pred_grades,
                           const std::vector<int>& gt_grades, int num_classes);

} // namespace fundus::metrics
