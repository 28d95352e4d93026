#include "fundus/data/dataset.hpp"

#include <algorithm>
#include <map>

#include "fundus/core/error.hpp"
#include "fundus/core/io.hpp"
#include "fundus/core/rng.hpp"

namespace fundus::data {

namespace {

constexpr const char* kManifestName = "manifest.tsv";

std::vector<std::string> manifest_header() {
    std::vector<std::string> h = {"id", "grade", "lm", "pm"};
    for (int d = 0; d < kDiseaseCount; ++d) h.push_back(disease_name(d));
    return h;
}

std::string flag_field(const std::optional<std::array<bool, 2>>& flags, int idx) {
    if (!flags) return "-";
    return (*flags)[idx] ? "1" : "0";
}

} // namespace

Dataset load_dataset(const std::filesystem::path& root, DatasetKind kind) {
    namespace fs = std::filesystem;
    const fs::path manifest = root / kManifestName;
    if (!fs::exists(manifest))
        fail("missing-mask-file", "no samples loaded: " + manifest.string() + " does not exist");

    // Reject mask directories for lesions we do not know about up front.
    const fs::path masks_root = root / "masks";
    const bool want_masks = kind == DatasetKind::seg_set || kind == DatasetKind::phantom;
    if (want_masks && fs::exists(masks_root)) {
        for (const auto& entry : fs::directory_iterator(masks_root)) {
            if (!entry.is_directory()) continue;
            const std::string name = entry.path().filename().string();
            if (!lesion_from_name(name))
                fail("unknown-lesion-kind", "mask directory " + name + " under " + masks_root.string());
        }
    }

    Dataset ds;
    ds.name = root.filename().string();
    ds.kind = kind;

    auto rows = read_tsv(manifest);
    for (const auto& row : rows) {
        if (row.empty() || row[0] == "id") continue; // header
        require(row.size() == 4 + kDiseaseCount, "io-failure",
                "manifest row for '" + row[0] + "' has " + std::to_string(row.size()) +
                    " fields, expected " + std::to_string(4 + kDiseaseCount));
        FundusSample s;
        s.id = row[0];

        const fs::path image_path = root / "images" / (s.id + ".png");
        if (!fs::exists(image_path))
            fail("missing-mask-file", "sample " + s.id + ": image file " + image_path.string() +
                                          " does not exist");
        s.image = load_image_png(image_path);

        if (row[1] != "-") {
            int g = -1;
            try {
                g = std::stoi(row[1]);
            } catch (const std::exception&) {
                fail("grade-out-of-range", "sample " + s.id + ": grade '" + row[1] + "'");
            }
            if (g < 0 || g >= kGradeCount)
                fail("grade-out-of-range", "sample " + s.id + ": grade " + row[1]);
            s.grade = g;
        }
        if (row[2] != "-" || row[3] != "-") {
            s.lesion_flags = std::array<bool, 2>{row[2] == "1", row[3] == "1"};
        }
        if (row[4] != "-") {
            std::array<std::uint8_t, kDiseaseCount> bits{};
            for (int d = 0; d < kDiseaseCount; ++d)
                bits[d] = row[4 + d] == "1" ? 1 : 0;
            s.disease_labels = bits;
        }

        if (want_masks) {
            std::map<LesionKind, Mask> masks;
            for (auto kindk : kAllLesions) {
                const fs::path mask_path = masks_root / lesion_name(kindk) / (s.id + ".png");
                if (!fs::exists(mask_path)) continue; // absent file = all-zero mask
                Mask m = load_mask_png(mask_path);
                if (m.h != s.image.h || m.w != s.image.w)
                    fail("dimension-mismatch",
                         "sample " + s.id + ": " + std::string(lesion_name(kindk)) + " mask is " +
                             std::to_string(m.h) + "x" + std::to_string(m.w) + " under a " +
                             std::to_string(s.image.h) + "x" + std::to_string(s.image.w) + " image");
                masks.emplace(kindk, std::move(m));
            }
            if (kind == DatasetKind::seg_set || !masks.empty())
                s.lesion_masks = std::move(masks);
        }

        ds.samples.push_back(std::move(s));
    }

    if (ds.samples.empty())
        fail("missing-mask-file", "no samples loaded from " + root.string());
    ds.validate();
    return ds;
}

void save_dataset(const std::filesystem::path& root, const Dataset& dataset) {
    namespace fs = std::filesystem;
    fs::create_directories(root / "images");

    std::vector<std::vector<std::string>> rows;
    rows.push_back(manifest_header());
    for (const auto& s : dataset.samples) {
        save_image_png(root / "images" / (s.id + ".png"), s.image);
        if (s.lesion_masks) {
            for (const auto& [kind, m] : *s.lesion_masks) {
                if (!m.any()) continue; // absent file = all-zero mask
                save_mask_png(root / "masks" / lesion_name(kind) / (s.id + ".png"), m);
            }
        }
        std::vector<std::string> row = {s.id, s.grade ? std::to_string(*s.grade) : "-",
                                        flag_field(s.lesion_flags, 0), flag_field(s.lesion_flags, 1)};
        for (int d = 0; d < kDiseaseCount; ++d)
            row.push_back(s.disease_labels ? std::to_string((*s.disease_labels)[d]) : "-");
        rows.push_back(std::move(row));
    }
    write_tsv(root / kManifestName, rows);
}

DatasetStatistics compute_statistics(const Dataset& dataset) {
    if (dataset.samples.empty()) fail("empty-dataset", dataset.name);
    for (const auto& s : dataset.samples)
        if (!s.grade) fail("missing-grades", "sample " + s.id + " has no grade");

    DatasetStatistics stats;
    std::array<std::array<std::size_t, kLesionCount>, kGradeCount> per_grade_lesion{};
    for (const auto& s : dataset.samples) {
        ++stats.grade_distribution[*s.grade];
        for (int k = 0; k < kLesionCount; ++k) {
            if (s.has_lesion(kAllLesions[k])) {
                ++stats.images_per_lesion[k];
                ++per_grade_lesion[*s.grade][k];
            }
        }
    }
    for (int g = 0; g < kGradeCount; ++g) {
        const std::size_t at_grade = stats.grade_distribution[g];
        for (int k = 0; k < kLesionCount; ++k)
            stats.lesions_per_grade_normalized[g][k] =
                at_grade == 0 ? 0.0
                              : static_cast<double>(per_grade_lesion[g][k]) /
                                    static_cast<double>(at_grade);
    }
    return stats;
}

std::vector<Split> split_dataset(const Dataset& dataset, int folds, std::uint64_t seed) {
    require(folds >= 2, "too-few-samples", "folds must be >= 2");
    if (static_cast<int>(dataset.samples.size()) < folds)
        fail("too-few-samples", std::to_string(dataset.samples.size()) + " samples for " +
                                    std::to_string(folds) + " folds");

    const bool stratify = std::all_of(dataset.samples.begin(), dataset.samples.end(),
                                      [](const FundusSample& s) { return s.grade.has_value(); });

    // Group indices (one group per grade when stratifying), shuffle each
    // group, then deal round-robin so every fold sees each grade evenly.
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < dataset.samples.size(); ++i)
        groups[stratify ? *dataset.samples[i].grade : 0].push_back(i);

    Rng rng = Rng(seed).stream("split");
    std::vector<std::vector<std::size_t>> fold_members(folds);
    for (auto& [grade, indices] : groups) {
        rng.shuffle(indices);
        for (std::size_t i = 0; i < indices.size(); ++i)
            fold_members[i % folds].push_back(indices[i]);
    }
    for (auto& members : fold_members) std::sort(members.begin(), members.end());

    std::vector<Split> splits;
    for (int f = 0; f < folds; ++f) {
        Split sp;
        sp.train.kind = sp.test.kind = dataset.kind;
        sp.train.name = dataset.name + "-fold" + std::to_string(f) + "-train";
        sp.test.name = dataset.name + "-fold" + std::to_string(f) + "-test";
        const auto& test_set = fold_members[f];
        for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
            if (std::binary_search(test_set.begin(), test_set.end(), i))
                sp.test.samples.push_back(dataset.samples[i]);
            else
                sp.train.samples.push_back(dataset.samples[i]);
        }
        splits.push_back(std::move(sp));
    }
    return splits;
}

} // namespace fundus::data
