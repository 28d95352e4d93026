#include "fundus/data/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fundus/core/error.hpp"
#include "fundus/core/io.hpp"
#include "fundus/core/rng.hpp"

namespace fundus::data {

namespace {

struct Rgb {
    double r, g, b;
};

// Quantize to the 8-bit grid so in-memory phantoms equal their PNG round trip.
double q255(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return std::floor(v * 255.0 + 0.5) / 255.0;
}

struct Canvas {
    int size;
    Image img;                     // unquantized while painting
    std::vector<std::uint8_t> occupied; // lesion stamps may not overlap
    double cx, cy, retina_r;
    double disc_x, disc_y, disc_r;

    explicit Canvas(int s) : size(s), img(s, s), occupied(static_cast<std::size_t>(s) * s, 0) {}

    bool inside_retina(int x, int y) const {
        const double dx = x - cx, dy = y - cy;
        return dx * dx + dy * dy <= retina_r * retina_r;
    }
    bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < size && y < size; }

    void paint(int x, int y, Rgb c, double alpha = 1.0) {
        if (!in_bounds(x, y)) return;
        img.at(y, x, 0) = img.at(y, x, 0) * (1.0 - alpha) + c.r * alpha;
        img.at(y, x, 1) = img.at(y, x, 1) * (1.0 - alpha) + c.g * alpha;
        img.at(y, x, 2) = img.at(y, x, 2) * (1.0 - alpha) + c.b * alpha;
    }
};

// Pixel set of one stamp, kept sorted/unique so masks and counts agree.
using PixelSet = std::set<std::pair<int, int>>; // (y, x)

void stamp_disc(Canvas& cv, PixelSet& px, double cx, double cy, double radius, Rgb color,
                bool soft_edge) {
    const int r_ceil = static_cast<int>(std::ceil(radius));
    for (int y = static_cast<int>(cy) - r_ceil; y <= static_cast<int>(cy) + r_ceil; ++y) {
        for (int x = static_cast<int>(cx) - r_ceil; x <= static_cast<int>(cx) + r_ceil; ++x) {
            if (!cv.in_bounds(x, y) || !cv.inside_retina(x, y)) continue;
            const double d = std::hypot(x - cx, y - cy);
            if (d > radius) continue;
            double alpha = 1.0;
            if (soft_edge) alpha = 0.35 + 0.65 * (1.0 - d / (radius + 1e-9));
            cv.paint(x, y, color, alpha);
            px.insert({y, x});
        }
    }
}

// Thin branching curve via a random walk; NV passes an anchor near the disc.
void stamp_curve(Canvas& cv, PixelSet& px, Rng& rng, double start_x, double start_y, int length,
                 int branches, Rgb color) {
    struct Walker {
        double x, y, angle;
    };
    std::vector<Walker> walkers{{start_x, start_y, rng.uniform(0.0, 6.283185307179586)}};
    int spawned = 0;
    for (std::size_t wi = 0; wi < walkers.size(); ++wi) {
        Walker w = walkers[wi];
        const int steps = wi == 0 ? length : length / 2;
        for (int s = 0; s < steps; ++s) {
            const int xi = static_cast<int>(std::lround(w.x));
            const int yi = static_cast<int>(std::lround(w.y));
            if (cv.in_bounds(xi, yi) && cv.inside_retina(xi, yi)) {
                cv.paint(xi, yi, color);
                px.insert({yi, xi});
            }
            w.angle += rng.uniform(-0.45, 0.45);
            w.x += std::cos(w.angle);
            w.y += std::sin(w.angle);
            if (spawned < branches && s > 2 && rng.bernoulli(0.12)) {
                walkers.push_back({w.x, w.y, w.angle + rng.uniform(-1.2, 1.2)});
                ++spawned;
            }
        }
    }
}

Rgb lesion_color(PlantKind kind, Rng& rng) {
    auto jitter = [&](double v, double amt) { return v + rng.uniform(-amt, amt); };
    switch (kind) {
    case PlantKind::MA: return {jitter(0.72, 0.05), jitter(0.06, 0.03), jitter(0.06, 0.03)};
    case PlantKind::HE: return {jitter(0.45, 0.05), jitter(0.05, 0.02), jitter(0.05, 0.02)};
    case PlantKind::EX: return {jitter(0.97, 0.02), jitter(0.91, 0.04), jitter(0.55, 0.06)};
    case PlantKind::SE: return {jitter(0.85, 0.04), jitter(0.85, 0.04), jitter(0.78, 0.04)};
    case PlantKind::IRMA: return {jitter(0.58, 0.04), jitter(0.09, 0.03), jitter(0.08, 0.03)};
    case PlantKind::NV: return {jitter(0.55, 0.04), jitter(0.05, 0.02), jitter(0.05, 0.02)};
    case PlantKind::LM: return {jitter(0.80, 0.04), jitter(0.78, 0.04), jitter(0.70, 0.04)};
    case PlantKind::PM: return {jitter(0.88, 0.03), jitter(0.86, 0.03), jitter(0.82, 0.03)};
    }
    return {1, 0, 1};
}

// One planted instance. Returns the exact pixel set it touched.
PixelSet stamp_instance(Canvas& cv, Rng& rng, PlantKind kind, double cx, double cy, int radius) {
    PixelSet px;
    const Rgb color = lesion_color(kind, rng);
    switch (kind) {
    case PlantKind::MA:
        stamp_disc(cv, px, cx, cy, radius, color, false);
        break;
    case PlantKind::HE:
    case PlantKind::EX: {
        const int lobes = rng.uniform_int(2, 4);
        stamp_disc(cv, px, cx, cy, radius, color, false);
        for (int l = 0; l < lobes; ++l) {
            const double a = rng.uniform(0.0, 6.283185307179586);
            const double d = rng.uniform(0.4, 1.0) * radius;
            stamp_disc(cv, px, cx + std::cos(a) * d, cy + std::sin(a) * d,
                       radius * rng.uniform(0.5, 0.9), color, false);
        }
        break;
    }
    case PlantKind::SE:
        stamp_disc(cv, px, cx, cy, radius, color, true);
        break;
    case PlantKind::IRMA:
        stamp_curve(cv, px, rng, cx, cy, radius * 6, 1, color);
        break;
    case PlantKind::NV:
        stamp_curve(cv, px, rng, cx, cy, radius * 7, 2, color);
        break;
    case PlantKind::LM: {
        // ring of small pale burn scars around the periphery point
        const int scars = rng.uniform_int(4, 7);
        for (int sIdx = 0; sIdx < scars; ++sIdx) {
            const double a = 6.283185307179586 * sIdx / scars;
            stamp_disc(cv, px, cx + std::cos(a) * radius * 2.0, cy + std::sin(a) * radius * 2.0,
                       radius * 0.8, color, false);
        }
        break;
    }
    case PlantKind::PM:
        stamp_disc(cv, px, cx, cy, radius * 1.6, color, true);
        break;
    }
    if (px.empty()) {
        // walks can wander outside the retina; pin at least the seed pixel
        const int xi = static_cast<int>(std::lround(cx));
        const int yi = static_cast<int>(std::lround(cy));
        if (cv.in_bounds(xi, yi)) {
            cv.paint(xi, yi, color);
            px.insert({yi, xi});
        }
    }
    return px;
}

bool overlaps_occupied(const Canvas& cv, const PixelSet& px) {
    for (const auto& [y, x] : px)
        if (cv.occupied[static_cast<std::size_t>(y) * cv.size + x]) return true;
    return false;
}

void mark_occupied(Canvas& cv, const PixelSet& px) {
    for (const auto& [y, x] : px)
        cv.occupied[static_cast<std::size_t>(y) * cv.size + x] = 1;
}

// Retina field, optic disc, and a few vessel arcs; everything later paints
// on top of this.
void paint_background(Canvas& cv, Rng& rng) {
    cv.cx = cv.size * 0.5 + rng.uniform(-1.5, 1.5);
    cv.cy = cv.size * 0.5 + rng.uniform(-1.5, 1.5);
    cv.retina_r = cv.size * 0.47;

    const Rgb base{0.70 + rng.uniform(-0.05, 0.05), 0.36 + rng.uniform(-0.04, 0.04),
                   0.12 + rng.uniform(-0.03, 0.03)};
    for (int y = 0; y < cv.size; ++y) {
        for (int x = 0; x < cv.size; ++x) {
            if (!cv.inside_retina(x, y)) continue;
            const double d = std::hypot(x - cv.cx, y - cv.cy) / cv.retina_r;
            const double shade = 1.0 - 0.35 * d * d;
            cv.img.at(y, x, 0) = base.r * shade;
            cv.img.at(y, x, 1) = base.g * shade;
            cv.img.at(y, x, 2) = base.b * shade;
        }
    }

    // optic disc on the nasal side
    const double side = rng.bernoulli(0.5) ? 1.0 : -1.0;
    cv.disc_x = cv.cx + side * cv.retina_r * 0.62;
    cv.disc_y = cv.cy + rng.uniform(-0.12, 0.12) * cv.retina_r;
    cv.disc_r = cv.size * 0.075;
    PixelSet scratch;
    stamp_disc(cv, scratch, cv.disc_x, cv.disc_y, cv.disc_r, {0.95, 0.85, 0.55}, true);

    // vessels out of the disc
    const int vessels = rng.uniform_int(3, 5);
    for (int vi = 0; vi < vessels; ++vi) {
        scratch.clear();
        stamp_curve(cv, scratch, rng, cv.disc_x, cv.disc_y, cv.size / 2, 1,
                    {0.42, 0.10, 0.06});
    }
}

void apply_appearance(Canvas& cv, const PhantomSpec& spec, Rng& rng) {
    for (int y = 0; y < cv.size; ++y) {
        for (int x = 0; x < cv.size; ++x) {
            for (int ch = 0; ch < 3; ++ch) {
                double v = cv.img.at(y, x, ch) * spec.color_cast[ch];
                if (spec.noise_level > 0.0) v += rng.uniform(-spec.noise_level, spec.noise_level);
                cv.img.at(y, x, ch) = q255(v);
            }
        }
    }
}

// Pick a spot whose stamp would not overlap existing lesions; throws
// lesion-overflow when the attempt budget runs out.
PlantedInstance plant_one(Canvas& cv, Rng& rng, PlantKind kind, const LesionDensity& density,
                          Mask* mask, const std::string& image_id, bool near_disc,
                          int max_attempts) {
    const int radius = rng.uniform_int(density.min_radius, density.max_radius);
    const std::uint64_t nonce = rng.next_u64();
    for (int attempt = 0;; ++attempt) {
        if (attempt >= max_attempts)
            fail("lesion-overflow", "image " + image_id + ": cannot place " +
                                        plant_kind_name(kind) + " within the overlap budget");
        double px_, py_;
        if (near_disc) {
            const double a = rng.uniform(0.0, 6.283185307179586);
            const double d = rng.uniform(0.2, 1.6) * cv.disc_r;
            px_ = cv.disc_x + std::cos(a) * d;
            py_ = cv.disc_y + std::sin(a) * d;
        } else {
            const double a = rng.uniform(0.0, 6.283185307179586);
            const double d = std::sqrt(rng.uniform()) * cv.retina_r * 0.88;
            px_ = cv.cx + std::cos(a) * d;
            py_ = cv.cy + std::sin(a) * d;
        }
        // Dry-run the stamp on a scratch canvas to learn its pixel set.
        Canvas probe = cv;
        Rng stamp_rng = rng.stream(nonce ^ (static_cast<std::uint64_t>(attempt) * 2654435761ULL));
        PixelSet px = stamp_instance(probe, stamp_rng, kind, px_, py_, radius);
        if (overlaps_occupied(cv, px)) continue;

        // Same stamp stream, this time for real.
        Rng commit_rng = stamp_rng;
        PixelSet real = stamp_instance(cv, commit_rng, kind, px_, py_, radius);
        mark_occupied(cv, real);
        if (mask)
            for (const auto& [y, x] : real) mask->at(y, x) = 1;

        PlantedInstance inst;
        inst.kind = kind;
        inst.cx = static_cast<int>(std::lround(px_));
        inst.cy = static_cast<int>(std::lround(py_));
        inst.radius = radius;
        inst.pixels = real.size();
        return inst;
    }
}

// Per-disease planting recipes. Diseases share DR lesion appearances, which
// is exactly what makes the transfer task learnable from the source domain.
void plant_disease(Canvas& cv, Rng& rng, int disease, ImagePlanting& planted,
                   const std::string& id, int max_attempts) {
    auto plant_n = [&](PlantKind kind, int lo, int hi, int rlo, int rhi, bool near_disc = false) {
        const int n = rng.uniform_int(lo, hi);
        LesionDensity d{n, n, rlo, rhi};
        for (int i = 0; i < n; ++i)
            planted.instances.push_back(
                plant_one(cv, rng, kind, d, nullptr, id, near_disc, max_attempts));
    };
    switch (disease) {
    case 1: // diabetes: the classic DR mix
        plant_n(PlantKind::MA, 3, 8, 1, 2);
        plant_n(PlantKind::HE, 1, 3, 2, 4);
        plant_n(PlantKind::EX, 1, 3, 2, 4);
        break;
    case 2: { // glaucoma: enlarged pale cup inside the disc
        PixelSet scratch;
        stamp_disc(cv, scratch, cv.disc_x, cv.disc_y, cv.disc_r * 1.35, {0.97, 0.93, 0.72}, true);
        stamp_disc(cv, scratch, cv.disc_x, cv.disc_y, cv.disc_r * 0.7, {1.0, 0.98, 0.85}, false);
        break;
    }
    case 3: { // cataract: global haze
        for (int y = 0; y < cv.size; ++y)
            for (int x = 0; x < cv.size; ++x) {
                if (!cv.inside_retina(x, y)) continue;
                for (int ch = 0; ch < 3; ++ch) {
                    const double haze[3] = {0.80, 0.74, 0.62};
                    cv.img.at(y, x, ch) = cv.img.at(y, x, ch) * 0.62 + haze[ch] * 0.38;
                }
            }
        break;
    }
    case 4: // AMD: neovascular curves + hemorrhages near the macula
        plant_n(PlantKind::NV, 1, 3, 1, 2, true);
        plant_n(PlantKind::HE, 1, 2, 2, 4);
        break;
    case 5: // hypertension: exudates + hemorrhages
        plant_n(PlantKind::EX, 2, 5, 2, 4);
        plant_n(PlantKind::HE, 2, 4, 2, 4);
        break;
    case 6: { // myopia: peripapillary crescent
        PixelSet scratch;
        const double a = std::atan2(cv.cy - cv.disc_y, cv.cx - cv.disc_x) + 3.14159265358979;
        stamp_disc(cv, scratch, cv.disc_x + std::cos(a) * cv.disc_r * 1.2,
                   cv.disc_y + std::sin(a) * cv.disc_r * 1.2, cv.disc_r * 0.9,
                   {0.93, 0.88, 0.75}, true);
        break;
    }
    case 7: // other: soft exudates + IRMA
        plant_n(PlantKind::SE, 1, 3, 2, 4);
        plant_n(PlantKind::IRMA, 1, 2, 1, 2);
        break;
    default:
        break; // normal: plant nothing
    }
}

} // namespace

const char* plant_kind_name(PlantKind k) {
    switch (k) {
    case PlantKind::MA: return "MA";
    case PlantKind::HE: return "HE";
    case PlantKind::EX: return "EX";
    case PlantKind::SE: return "SE";
    case PlantKind::IRMA: return "IRMA";
    case PlantKind::NV: return "NV";
    case PlantKind::LM: return "LM";
    case PlantKind::PM: return "PM";
    }
    return "?";
}

std::optional<PlantKind> plant_kind_from_name(const std::string& name) {
    for (auto k : {PlantKind::MA, PlantKind::HE, PlantKind::EX, PlantKind::SE, PlantKind::IRMA,
                   PlantKind::NV, PlantKind::LM, PlantKind::PM})
        if (name == plant_kind_name(k)) return k;
    return std::nullopt;
}

void PhantomSpec::validate() const {
    require(num_images > 0, "invalid-spec", "num_images must be positive");
    require(image_size >= 32, "invalid-spec", "image_size must be at least 32");
    for (const auto& [kind, d] : densities) {
        require(d.min_count >= 0 && d.min_count <= d.max_count, "invalid-spec",
                std::string(plant_kind_name(kind)) + ": count range");
        require(d.min_radius >= 1 && d.min_radius <= d.max_radius, "invalid-spec",
                std::string(plant_kind_name(kind)) + ": radius range (radii must be >= 1 px)");
    }
    require(placement_attempts > 0, "invalid-spec", "placement_attempts must be positive");
}

std::array<int, kLesionCount> ImagePlanting::lesion_instance_counts() const {
    std::array<int, kLesionCount> counts{};
    for (const auto& inst : instances) {
        const int idx = static_cast<int>(inst.kind);
        if (idx < kLesionCount) ++counts[idx];
    }
    return counts;
}

int grade_from_lesion_counts(const std::array<int, kLesionCount>& counts) {
    const int total = std::accumulate(counts.begin(), counts.end(), 0);
    int grade;
    if (total == 0) grade = 0;
    else if (total <= 3) grade = 1;
    else if (total <= 9) grade = 2;
    else grade = 3;
    if (counts[static_cast<int>(LesionKind::IRMA)] > 0) grade = std::max(grade, 3);
    if (counts[static_cast<int>(LesionKind::NV)] > 0) grade = 4;
    return grade;
}

PhantomResult synthesize_phantom(const PhantomSpec& spec) {
    spec.validate();
    PhantomResult result;
    result.dataset.kind = DatasetKind::phantom;
    result.dataset.name = "phantom";

    const Rng root(spec.seed);
    for (int i = 0; i < spec.num_images; ++i) {
        Rng rng = root.stream("image").stream(static_cast<std::uint64_t>(i));
        Canvas cv(spec.image_size);
        paint_background(cv, rng);

        FundusSample sample;
        sample.id = "phantom-" + std::to_string(i);
        ImagePlanting planted;
        planted.id = sample.id;

        if (spec.mode == PhantomSpec::Mode::lesions) {
            std::map<LesionKind, Mask> masks;
            for (auto kind : kAllLesions) masks.emplace(kind, Mask(spec.image_size, spec.image_size));

            for (auto kind : {PlantKind::MA, PlantKind::HE, PlantKind::EX, PlantKind::SE,
                              PlantKind::IRMA, PlantKind::NV, PlantKind::LM, PlantKind::PM}) {
                auto it = spec.densities.find(kind);
                if (it == spec.densities.end()) continue;
                const int n = rng.uniform_int(it->second.min_count, it->second.max_count);
                const bool is_flag = kind == PlantKind::LM || kind == PlantKind::PM;
                const bool near_disc = kind == PlantKind::NV;
                Mask* mask = is_flag ? nullptr : &masks.at(static_cast<LesionKind>(kind));
                for (int inst = 0; inst < n; ++inst)
                    planted.instances.push_back(plant_one(cv, rng, kind, it->second, mask,
                                                          sample.id, near_disc,
                                                          spec.placement_attempts));
                if (is_flag && n > 0) (kind == PlantKind::LM ? planted.lm : planted.pm) = true;
            }

            sample.lesion_masks = std::move(masks);
            const int grade = grade_from_lesion_counts(planted.lesion_instance_counts());
            sample.grade = grade;
            planted.grade = grade;
            sample.lesion_flags = std::array<bool, 2>{planted.lm, planted.pm};
        } else {
            std::array<std::uint8_t, kDiseaseCount> bits{};
            const int first = i % kDiseaseCount; // guarantees every label occurs
            bits[first] = 1;
            if (first != 0 && rng.bernoulli(0.3)) {
                int second = 1 + rng.uniform_int(0, kDiseaseCount - 2);
                if (second == first) second = 1 + second % (kDiseaseCount - 1);
                bits[second] = 1;
            }
            for (int d = 1; d < kDiseaseCount; ++d)
                if (bits[d]) plant_disease(cv, rng, d, planted, sample.id,
                                           spec.placement_attempts);
            sample.disease_labels = bits;
            planted.diseases = bits;
        }

        apply_appearance(cv, spec, rng);
        sample.image = std::move(cv.img);
        result.dataset.samples.push_back(std::move(sample));
        result.log.images.push_back(std::move(planted));
    }

    result.dataset.validate();
    return result;
}

DatasetStatistics statistics_from_log(const PlantingLog& log) {
    require(!log.images.empty(), "empty-dataset", "planting log has no images");
    DatasetStatistics stats;
    std::array<std::array<std::size_t, kLesionCount>, kGradeCount> per_grade_lesion{};
    for (const auto& im : log.images) {
        require(im.grade.has_value(), "missing-grades", "log row " + im.id + " has no grade");
        ++stats.grade_distribution[*im.grade];
        const auto counts = im.lesion_instance_counts();
        for (int k = 0; k < kLesionCount; ++k) {
            if (counts[k] > 0) {
                ++stats.images_per_lesion[k];
                ++per_grade_lesion[*im.grade][k];
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

void PlantingLog::save(const std::filesystem::path& path) const {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"image_id", "grade", "diseases", "kind", "cx", "cy", "radius", "pixels"});
    for (const auto& im : images) {
        std::string diseases = "-";
        if (im.diseases) {
            diseases.clear();
            for (auto b : *im.diseases) diseases += b ? '1' : '0';
        }
        const std::string grade = im.grade ? std::to_string(*im.grade) : "-";
        if (im.instances.empty())
            rows.push_back({im.id, grade, diseases, "-", "0", "0", "0", "0"});
        for (const auto& inst : im.instances)
            rows.push_back({im.id, grade, diseases, plant_kind_name(inst.kind),
                            std::to_string(inst.cx), std::to_string(inst.cy),
                            std::to_string(inst.radius), std::to_string(inst.pixels)});
    }
    write_tsv(path, rows);
}

PlantingLog PlantingLog::load(const std::filesystem::path& path) {
    PlantingLog log;
    for (const auto& row : read_tsv(path)) {
        if (row.empty() || row[0] == "image_id") continue;
        require(row.size() == 8, "io-failure", "bad planting log row");
        if (log.images.empty() || log.images.back().id != row[0]) {
            ImagePlanting im;
            im.id = row[0];
            if (row[1] != "-") im.grade = std::stoi(row[1]);
            if (row[2] != "-") {
                std::array<std::uint8_t, kDiseaseCount> bits{};
                for (int d = 0; d < kDiseaseCount && d < static_cast<int>(row[2].size()); ++d)
                    bits[d] = row[2][d] == '1';
                im.diseases = bits;
            }
            log.images.push_back(std::move(im));
        }
        if (row[3] == "-") continue;
        auto kind = plant_kind_from_name(row[3]);
        require(kind.has_value(), "unknown-lesion-kind", row[3]);
        PlantedInstance inst;
        inst.kind = *kind;
        inst.cx = std::stoi(row[4]);
        inst.cy = std::stoi(row[5]);
        inst.radius = std::stoi(row[6]);
        inst.pixels = static_cast<std::size_t>(std::stoll(row[7]));
        auto& im = log.images.back();
        if (inst.kind == PlantKind::LM) im.lm = true;
        if (inst.kind == PlantKind::PM) im.pm = true;
        im.instances.push_back(inst);
    }
    return log;
}

} // namespace fundus::data
