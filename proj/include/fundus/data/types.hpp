#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fundus/core/grid.hpp"

namespace fundus::data {

// The six pixel-annotated lesion kinds. Order is the canonical channel
// order everywhere (masks, multi-class outputs, reports).
enum class LesionKind { MA, HE, EX, SE, IRMA, NV };

inline constexpr int kLesionCount = 6;
inline constexpr std::array<LesionKind, kLesionCount> kAllLesions = {
    LesionKind::MA, LesionKind::HE, LesionKind::EX,
    LesionKind::SE, LesionKind::IRMA, LesionKind::NV};

const char* lesion_name(LesionKind k);
std::optional<LesionKind> lesion_from_name(const std::string& name);

// Multi-disease label order; index 0 is "normal".
inline constexpr int kDiseaseCount = 8;
const char* disease_name(int index);

inline constexpr int kGradeCount = 5;

struct FundusSample {
    std::string id;
    Image image;

    // Engaged when the sample carries pixel annotations; a kind missing
    // from the map means an all-zero mask for that lesion.
    std::optional<std::map<LesionKind, Mask>> lesion_masks;

    // Image-level laser-mark / proliferate-membrane flags.
    std::optional<std::array<bool, 2>> lesion_flags; // [LM, PM]

    std::optional<int> grade; // 0..4

    std::optional<std::array<std::uint8_t, kDiseaseCount>> disease_labels;

    // Null when the lesion has no positive pixels (absent mask).
    const Mask* mask(LesionKind k) const;
    bool has_lesion(LesionKind k) const;

    void validate() const; // enforces the per-sample invariants
};

enum class DatasetKind { seg_set, grade_set, multi_disease, phantom };

const char* dataset_kind_name(DatasetKind k);
std::optional<DatasetKind> dataset_kind_from_name(const std::string& name);

struct Dataset {
    std::string name;
    DatasetKind kind = DatasetKind::phantom;
    std::vector<FundusSample> samples;

    std::size_t size() const { return samples.size(); }
    const FundusSample* find(const std::string& id) const;
    void validate() const; // unique ids + kind-specific label requirements
};

struct DatasetStatistics {
    std::array<std::size_t, kLesionCount> images_per_lesion{};
    std::array<std::size_t, kGradeCount> grade_distribution{};
    // [grade][lesion]: images at that grade containing the lesion, divided
    // by the number of images at that grade (0 when the grade is empty).
    std::array<std::array<double, kLesionCount>, kGradeCount> lesions_per_grade_normalized{};

    bool operator==(const DatasetStatistics&) const = default;
};

} // namespace fundus::data
