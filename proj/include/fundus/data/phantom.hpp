#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fundus/data/types.hpp"

namespace fundus::data {

// Placement/appearance budget for one planted lesion kind. Counts are
// instances per image; radii are the stamp's base radius in pixels.
struct LesionDensity {
    int min_count = 0;
    int max_count = 0;
    int min_radius = 1;
    int max_radius = 1;
};

// Things the generator can plant. The first six match LesionKind and get
// pixel masks; LM and PM are image-level flag textures.
enum class PlantKind { MA, HE, EX, SE, IRMA, NV, LM, PM };

const char* plant_kind_name(PlantKind k);
std::optional<PlantKind> plant_kind_from_name(const std::string& name);

struct PhantomSpec {
    enum class Mode { lesions, diseases };

    Mode mode = Mode::lesions;
    int num_images = 8;
    int image_size = 128;
    std::map<PlantKind, LesionDensity> densities; // lesions mode
    std::uint64_t seed = 0;

    // Appearance controls; the transfer experiments use them to create a
    // deliberate domain gap between source and target phantoms.
    std::array<double, 3> color_cast = {1.0, 1.0, 1.0};
    double noise_level = 0.0;

    // Maximum number of placement attempts per instance before the
    // generator reports lesion-overflow. Planted stamps never overlap.
    int placement_attempts = 64;

    void validate() const;
};

struct PlantedInstance {
    PlantKind kind;
    int cx = 0, cy = 0;
    int radius = 0;
    std::size_t pixels = 0;
};

struct ImagePlanting {
    std::string id;
    std::optional<int> grade;
    std::optional<std::array<std::uint8_t, kDiseaseCount>> diseases;
    bool lm = false, pm = false;
    std::vector<PlantedInstance> instances;

    std::array<int, kLesionCount> lesion_instance_counts() const;
};

// Ground truth of what the generator planted; the oracle against which
// compute_statistics is checked.
struct PlantingLog {
    std::vector<ImagePlanting> images;

    void save(const std::filesystem::path& path) const;
    static PlantingLog load(const std::filesystem::path& path);
};

struct PhantomResult {
    Dataset dataset; // kind == phantom
    PlantingLog log;
};

// Deterministic synthetic fundus-like dataset. Bit-identical output for
// equal specs; every image derives its randomness from a per-image
// substream of the spec seed.
PhantomResult synthesize_phantom(const PhantomSpec& spec);

// The grade each phantom receives from its planted lesion counts:
//   total 0 -> 0, 1..3 -> 1, 4..9 -> 2, >= 10 -> 3;
//   any IRMA raises the grade to at least 3; any NV forces 4.
int grade_from_lesion_counts(const std::array<int, kLesionCount>& counts);

// Statistics derived from the planting log alone (grades come from the log
// rows); compared field-by-field against compute_statistics.
DatasetStatistics statistics_from_log(const PlantingLog& log);

} // namespace fundus::data
