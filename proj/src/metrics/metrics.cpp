#include "fundus/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fundus/core/error.hpp"

namespace fundus::metrics {

namespace {

void check_shapes(const ProbMap& pred, const Mask& gt) {
    if (!pred.same_shape(gt))
        fail("shape-mismatch", "prediction " + std::to_string(pred.h) + "x" + std::to_string(pred.w) +
                                   " vs ground truth " + std::to_string(gt.h) + "x" + std::to_string(gt.w));
}

void pool_pixels(std::span<const ProbMap> preds, std::span<const Mask> gts,
                 std::vector<double>& scores, std::vector<std::uint8_t>& labels) {
    require(preds.size() == gts.size(), "shape-mismatch", "prediction/mask list sizes differ");
    std::size_t total = 0;
    for (const auto& p : preds) total += p.p.size();
    scores.reserve(total);
    labels.reserve(total);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        check_shapes(preds[i], gts[i]);
        scores.insert(scores.end(), preds[i].p.begin(), preds[i].p.end());
        labels.insert(labels.end(), gts[i].m.begin(), gts[i].m.end());
    }
}

} // namespace

double dice(const ProbMap& pred, const Mask& gt, double threshold) {
    check_shapes(pred, gt);
    require(threshold > 0.0 && threshold < 1.0, "invalid-threshold",
            "dice threshold must lie in (0,1)");
    std::size_t p_count = 0, g_count = 0, both = 0;
    for (std::size_t i = 0; i < pred.p.size(); ++i) {
        const bool p = pred.p[i] >= threshold;
        const bool g = gt.m[i] != 0;
        p_count += p;
        g_count += g;
        both += p && g;
    }
    if (p_count + g_count == 0) return 1.0;
    return 2.0 * static_cast<double>(both) / static_cast<double>(p_count + g_count);
}

double mae(const ProbMap& pred, const Mask& gt) {
    check_shapes(pred, gt);
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.p.size(); ++i) sum += std::abs(pred.p[i] - gt.m[i]);
    return sum / static_cast<double>(pred.p.size());
}

double auc_roc_pooled(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
    require(scores.size() == labels.size(), "shape-mismatch", "score/label sizes differ");
    std::size_t pos = 0;
    for (auto l : labels) pos += l;
    const std::size_t neg = labels.size() - pos;
    if (pos == 0 || neg == 0)
        fail("degenerate-labels", "AUC-ROC needs at least one positive and one negative pixel");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Rank-sum with average ranks over ties.
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k)
            if (labels[order[k]]) pos_rank_sum += avg_rank;
        i = j + 1;
    }
    const double p = static_cast<double>(pos);
    return (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

double auc_roc(std::span<const ProbMap> preds, std::span<const Mask> gts) {
    std::vector<double> scores;
    std::vector<std::uint8_t> labels;
    pool_pixels(preds, gts, scores, labels);
    return auc_roc_pooled(scores, labels);
}

double auc_pr_pooled(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
    require(scores.size() == labels.size(), "shape-mismatch", "score/label sizes differ");
    std::size_t pos = 0;
    for (auto l : labels) pos += l;
    if (pos == 0) fail("degenerate-labels", "AUC-PR needs at least one positive pixel");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    // Sweep distinct thresholds from high to low; the curve is integrated as
    // sum (R_i - R_{i-1}) * P_i, i.e. steps hold the precision of the point
    // with the higher recall.
    double area = 0.0;
    double prev_recall = 0.0;
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]])
                ++tp;
            else
                ++fp;
        }
        const double recall = static_cast<double>(tp) / static_cast<double>(pos);
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j + 1;
    }
    return area;
}

double auc_pr(std::span<const ProbMap> preds, std::span<const Mask> gts) {
    std::vector<double> scores;
    std::vector<std::uint8_t> labels;
    pool_pixels(preds, gts, scores, labels);
    return auc_pr_pooled(scores, labels);
}

double quadratic_weighted_kappa(const std::vector<int>& pred_grades,
                                const std::vector<int>& gt_grades, int num_classes) {
    require(pred_grades.size() == gt_grades.size(), "length-mismatch",
            "rating vectors differ in length");
    require(!pred_grades.empty(), "length-mismatch", "rating vectors are empty");
    require(num_classes >= 2, "value-out-of-range", "need at least two rating classes");
    const int k = num_classes;
    for (std::size_t i = 0; i < gt_grades.size(); ++i) {
        require(gt_grades[i] >= 0 && gt_grades[i] < k, "value-out-of-range",
                "ground-truth rating " + std::to_string(gt_grades[i]));
        require(pred_grades[i] >= 0 && pred_grades[i] < k, "value-out-of-range",
                "predicted rating " + std::to_string(pred_grades[i]));
    }

    std::vector<double> observed(static_cast<std::size_t>(k) * k, 0.0);
    std::vector<double> gt_counts(k, 0.0), pred_counts(k, 0.0);
    for (std::size_t i = 0; i < gt_grades.size(); ++i) {
        observed[static_cast<std::size_t>(gt_grades[i]) * k + pred_grades[i]] += 1.0;
        gt_counts[gt_grades[i]] += 1.0;
        pred_counts[pred_grades[i]] += 1.0;
    }

    // Expected matrix: outer product of count vectors, scaled to the same
    // total mass as the observed matrix.
    const double n = static_cast<double>(gt_grades.size());
    double num = 0.0, den = 0.0;
    const double norm = 1.0 / static_cast<double>((k - 1) * (k - 1));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double wij = static_cast<double>((i - j) * (i - j)) * norm;
            num += wij * observed[static_cast<std::size_t>(i) * k + j];
            den += wij * gt_counts[i] * pred_counts[j] / n;
        }
    }
    if (den == 0.0) return 1.0; // both raters constant at the same value
    return 1.0 - num / den;
}

double cohens_kappa(const std::vector<int>& pred_labels, const std::vector<int>& gt_labels) {
    require(pred_labels.size() == gt_labels.size(), "length-mismatch",
            "label vectors differ in length");
    require(!pred_labels.empty(), "length-mismatch", "label vectors are empty");

    int max_label = 1;
    for (auto v : gt_labels) max_label = std::max(max_label, v);
    for (auto v : pred_labels) max_label = std::max(max_label, v);
    const int k = max_label + 1;

    std::vector<double> gt_freq(k, 0.0), pred_freq(k, 0.0);
    const double n = static_cast<double>(gt_labels.size());
    double agree = 0.0;
    for (std::size_t i = 0; i < gt_labels.size(); ++i) {
        require(gt_labels[i] >= 0 && pred_labels[i] >= 0, "value-out-of-range", "negative label");
        gt_freq[gt_labels[i]] += 1.0 / n;
        pred_freq[pred_labels[i]] += 1.0 / n;
        if (gt_labels[i] == pred_labels[i]) agree += 1.0 / n;
    }
    double chance = 0.0;
    for (int c = 0; c < k; ++c) chance += gt_freq[c] * pred_freq[c];
    if (chance >= 1.0) fail("degenerate-agreement", "chance agreement p_e = 1");
    return (agree - chance) / (1.0 - chance);
}

double f1_score(const std::vector<int>& pred_labels, const std::vector<int>& gt_labels) {
    require(pred_labels.size() == gt_labels.size(), "length-mismatch",
            "label vectors differ in length");
    long long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gt_labels.size(); ++i) {
        const bool p = pred_labels[i] != 0;
        const bool g = gt_labels[i] != 0;
        tp += p && g;
        fp += p && !g;
        fn += !p && g;
    }
    const double precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    const double recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

long long Confusion::total() const {
    return std::accumulate(counts.begin(), counts.end(), 0LL);
}

long long Confusion::trace() const {
    long long t = 0;
    for (int i = 0; i < k; ++i) t += at(i, i);
    return t;
}

std::vector<double> Confusion::row_normalized() const {
    std::vector<double> out(counts.size(), 0.0);
    for (int i = 0; i < k; ++i) {
        long long row = 0;
        for (int j = 0; j < k; ++j) row += at(i, j);
        if (row == 0) continue;
        for (int j = 0; j < k; ++j)
            out[static_cast<std::size_t>(i) * k + j] =
                100.0 * static_cast<double>(at(i, j)) / static_cast<double>(row);
    }
    return out;
}

Confusion confusion_matrix(const std::vector<int>& pred_grades,
                           const std::vector<int>& gt_grades, int num_classes) {
    require(pred_grades.size() == gt_grades.size(), "length-mismatch",
            "rating vectors differ in length");
    Confusion c;
    c.k = num_classes;
    c.counts.assign(static_cast<std::size_t>(num_classes) * num_classes, 0);
    for (std::size_t i = 0; i < gt_grades.size(); ++i) {
        require(gt_grades[i] >= 0 && gt_grades[i] < num_classes, "value-out-of-range",
                "ground-truth rating " + std::to_string(gt_grades[i]));
        require(pred_grades[i] >= 0 && pred_grades[i] < num_classes, "value-out-of-range",
                "predicted rating " + std::to_string(pred_grades[i]));
        ++c.counts[static_cast<std::size_t>(gt_grades[i]) * num_classes + pred_grades[i]];
    }
    return c;
}

} // namespace fundus::metrics
