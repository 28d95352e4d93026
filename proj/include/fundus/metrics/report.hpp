#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fundus/metrics/metrics.hpp"

namespace fundus::metrics {

// Evaluation results keyed by lesion, grade-set, or disease. Serialized two
// ways: a line-oriented file (one metric per line, fixed key order) for
// machine diffing, and a TSV table mirroring the familiar benchmark layouts
// for side-by-side comparison.
struct MetricReport {
    enum class Kind { segmentation, grading, multilabel };

    Kind kind = Kind::segmentation;
    std::vector<std::string> columns;
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    Confusion confusion; // grading reports only; k == 0 otherwise

    double value(const std::string& row, const std::string& column) const;
    bool has_row(const std::string& row) const;
    void add_row(const std::string& key, std::vector<double> values);

    std::string to_lines() const;
    std::string to_table() const;
    void save(const std::filesystem::path& lines_path,
              const std::filesystem::path& table_path) const;
    static MetricReport load(const std::filesystem::path& lines_path);

    static const char* kind_name(Kind k);
};

} // namespace fundus::metrics
