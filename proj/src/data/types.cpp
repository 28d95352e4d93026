#include "fundus/data/types.hpp"

#include <algorithm>
#include <set>

#include "fundus/core/error.hpp"

namespace fundus::data {

const char* lesion_name(LesionKind k) {
    switch (k) {
    case LesionKind::MA: return "MA";
    case LesionKind::HE: return "HE";
    case LesionKind::EX: return "EX";
    case LesionKind::SE: return "SE";
    case LesionKind::IRMA: return "IRMA";
    case LesionKind::NV: return "NV";
    }
    return "?";
}

std::optional<LesionKind> lesion_from_name(const std::string& name) {
    for (auto k : kAllLesions)
        if (name == lesion_name(k)) return k;
    return std::nullopt;
}

const char* disease_name(int index) {
    static constexpr const char* names[kDiseaseCount] = {
        "normal", "diabetes", "glaucoma", "cataract",
        "amd",    "hypertension", "myopia", "other"};
    return names[index];
}

const char* dataset_kind_name(DatasetKind k) {
    switch (k) {
    case DatasetKind::seg_set: return "seg-set";
    case DatasetKind::grade_set: return "grade-set";
    case DatasetKind::multi_disease: return "multi-disease";
    case DatasetKind::phantom: return "phantom";
    }
    return "?";
}

std::optional<DatasetKind> dataset_kind_from_name(const std::string& name) {
    for (auto k : {DatasetKind::seg_set, DatasetKind::grade_set, DatasetKind::multi_disease,
                   DatasetKind::phantom})
        if (name == dataset_kind_name(k)) return k;
    return std::nullopt;
}

const Mask* FundusSample::mask(LesionKind k) const {
    if (!lesion_masks) return nullptr;
    auto it = lesion_masks->find(k);
    return it == lesion_masks->end() ? nullptr : &it->second;
}

bool FundusSample::has_lesion(LesionKind k) const {
    const Mask* m = mask(k);
    return m != nullptr && m->any();
}

void FundusSample::validate() const {
    if (lesion_masks) {
        for (const auto& [kind, m] : *lesion_masks) {
            if (m.h != image.h || m.w != image.w)
                fail("dimension-mismatch",
                     "sample " + id + ": " + lesion_name(kind) + " mask is " +
                         std::to_string(m.h) + "x" + std::to_string(m.w) + " under a " +
                         std::to_string(image.h) + "x" + std::to_string(image.w) + " image");
        }
    }
    if (grade && (*grade < 0 || *grade >= kGradeCount))
        fail("grade-out-of-range", "sample " + id + ": grade " + std::to_string(*grade));
    if (disease_labels) {
        const bool any = std::any_of(disease_labels->begin(), disease_labels->end(),
                                     [](std::uint8_t b) { return b != 0; });
        if (!any) fail("empty-disease-labels", "sample " + id + ": no disease bit set");
    }
}

const FundusSample* Dataset::find(const std::string& id) const {
    for (const auto& s : samples)
        if (s.id == id) return &s;
    return nullptr;
}

void Dataset::validate() const {
    std::set<std::string> ids;
    for (const auto& s : samples) {
        if (!ids.insert(s.id).second) fail("duplicate-sample-id", s.id);
        s.validate();
        switch (kind) {
        case DatasetKind::seg_set:
            if (!s.lesion_masks || !s.grade)
                fail("missing-labels", "seg-set sample " + s.id + " needs masks and a grade");
            break;
        case DatasetKind::grade_set:
            if (!s.grade) fail("missing-labels", "grade-set sample " + s.id + " needs a grade");
            break;
        case DatasetKind::multi_disease:
            if (!s.disease_labels)
                fail("missing-labels", "multi-disease sample " + s.id + " needs disease labels");
            break;
        case DatasetKind::phantom:
            break;
        }
    }
}

} // namespace fundus::data
