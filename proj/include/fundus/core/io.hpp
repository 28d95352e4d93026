#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fundus/core/grid.hpp"

namespace fundus {

Image load_image_png(const std::filesystem::path& path);
void save_image_png(const std::filesystem::path& path, const Image& img);

// Masks are stored as single-channel PNG, 0 = background, 255 = lesion.
Mask load_mask_png(const std::filesystem::path& path);
void save_mask_png(const std::filesystem::path& path, const Mask& mask);

Image resize_bilinear(const Image& img, int out_h, int out_w);
Mask resize_nearest(const Mask& mask, int out_h, int out_w);
ProbMap resize_bilinear(const ProbMap& pm, int out_h, int out_w);

// Line-oriented TSV helpers shared by manifests, logs, and reports.
std::vector<std::vector<std::string>> read_tsv(const std::filesystem::path& path);
void write_tsv(const std::filesystem::path& path,
               const std::vector<std::vector<std::string>>& rows);

// Canonical number formatting used by every text artifact (shortest
// round-trippable representation, so reruns diff clean).
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// FNV-1a over bytes, rendered as 16 hex chars; used for config hashes.
std::string content_hash(const std::string& bytes);

} // namespace fundus
