#pragma once

#include <cstdint>
#include <vector>

namespace fundus {

// Interleaved RGB image, values in [0,1]. Pixel values produced by this
// toolkit are always exact multiples of 1/255 so that an image written to
// PNG and read back compares equal to the in-memory original.
struct Image {
    int h = 0, w = 0;
    std::vector<double> rgb; // h * w * 3, row-major, r g b

    Image() = default;
    Image(int h_, int w_, double fill = 0.0) : h(h_), w(w_), rgb(static_cast<std::size_t>(h_) * w_ * 3, fill) {}

    double& at(int y, int x, int ch) { return rgb[(static_cast<std::size_t>(y) * w + x) * 3 + ch]; }
    double at(int y, int x, int ch) const { return rgb[(static_cast<std::size_t>(y) * w + x) * 3 + ch]; }
};

// Binary mask, one byte per pixel, 0 or 1.
struct Mask {
    int h = 0, w = 0;
    std::vector<std::uint8_t> m;

    Mask() = default;
    Mask(int h_, int w_, std::uint8_t fill = 0) : h(h_), w(w_), m(static_cast<std::size_t>(h_) * w_, fill) {}

    std::uint8_t& at(int y, int x) { return m[static_cast<std::size_t>(y) * w + x]; }
    std::uint8_t at(int y, int x) const { return m[static_cast<std::size_t>(y) * w + x]; }

    std::size_t positive_count() const {
        std::size_t s = 0;
        for (auto b : m) s += b;
        return s;
    }
    bool any() const { return positive_count() > 0; }
    bool same_shape(const Mask& o) const { return h == o.h && w == o.w; }
};

// Per-pixel probability field in [0,1]; one of these per lesion channel.
struct ProbMap {
    int h = 0, w = 0;
    std::vector<double> p;

    ProbMap() = default;
    ProbMap(int h_, int w_, double fill = 0.0) : h(h_), w(w_), p(static_cast<std::size_t>(h_) * w_, fill) {}

    double& at(int y, int x) { return p[static_cast<std::size_t>(y) * w + x]; }
    double at(int y, int x) const { return p[static_cast<std::size_t>(y) * w + x]; }

    bool same_shape(const Mask& o) const { return h == o.h && w == o.w; }
};

inline Mask binarize(const ProbMap& pm, double threshold) {
    Mask out(pm.h, pm.w);
    for (std::size_t i = 0; i < pm.p.size(); ++i) out.m[i] = pm.p[i] >= threshold ? 1 : 0;
    return out;
}

} // namespace fundus
