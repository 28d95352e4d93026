#pragma once

#include <filesystem>
#include <vector>

#include "fundus/data/types.hpp"

namespace fundus::data {

// On-disk layout:
//   <root>/images/<id>.png
//   <root>/masks/<LESION>/<id>.png   (absent file = all-zero mask)
//   <root>/manifest.tsv              (id, grade, lm, pm, 8 disease bits; '-' = absent)
Dataset load_dataset(const std::filesystem::path& root, DatasetKind kind);
void save_dataset(const std::filesystem::path& root, const Dataset& dataset);

// Fig. 4-style dataset statistics: per-lesion image counts, grade
// distribution, and the lesion-per-grade table normalized by the number of
// images at each grade.
DatasetStatistics compute_statistics(const Dataset& dataset);

struct Split {
    Dataset train;
    Dataset test;
};

// Cross-validation partitions, stratified by grade when every sample has
// one. Each sample lands in exactly one test fold.
std::vector<Split> split_dataset(const Dataset& dataset, int folds, std::uint64_t seed);

} // namespace fundus::data
