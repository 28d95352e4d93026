#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <string>
#include <vector>

namespace fundus {

// Dense NCHW tensor of doubles. Vectors are represented as [n, c, 1, 1].
// The whole toolkit trains in double precision; all reductions run in a
// fixed serial order so reruns are bit-identical.
struct Tensor {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<double> v;

    Tensor() = default;
    Tensor(int n_, int c_, int h_, int w_, double fill = 0.0)
        : n(n_), c(c_), h(h_), w(w_), v(static_cast<std::size_t>(n_) * c_ * h_ * w_, fill) {}

    static Tensor vec(int n_, int c_, double fill = 0.0) { return Tensor(n_, c_, 1, 1, fill); }

    std::size_t size() const { return v.size(); }
    bool empty() const { return v.empty(); }

    double* data() { return v.data(); }
    const double* data() const { return v.data(); }

    double& at(int in, int ic, int iy, int ix) {
        return v[((static_cast<std::size_t>(in) * c + ic) * h + iy) * w + ix];
    }
    double at(int in, int ic, int iy, int ix) const {
        return v[((static_cast<std::size_t>(in) * c + ic) * h + iy) * w + ix];
    }

    double* plane(int in, int ic) {
        return v.data() + (static_cast<std::size_t>(in) * c + ic) * h * w;
    }
    const double* plane(int in, int ic) const {
        return v.data() + (static_cast<std::size_t>(in) * c + ic) * h * w;
    }

    bool same_shape(const Tensor& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }

    void zero() { std::fill(v.begin(), v.end(), 0.0); }

    std::string shape_str() const {
        return "[" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) +
               "," + std::to_string(w) + "]";
    }
};

inline Tensor concat_channels(const Tensor& a, const Tensor& b) {
    assert(a.n == b.n && a.h == b.h && a.w == b.w);
    Tensor out(a.n, a.c + b.c, a.h, a.w);
    const std::size_t plane = static_cast<std::size_t>(a.h) * a.w;
    for (int in = 0; in < a.n; ++in) {
        std::copy(a.v.begin() + static_cast<std::size_t>(in) * a.c * plane,
                  a.v.begin() + static_cast<std::size_t>(in + 1) * a.c * plane,
                  out.v.begin() + static_cast<std::size_t>(in) * out.c * plane);
        std::copy(b.v.begin() + static_cast<std::size_t>(in) * b.c * plane,
                  b.v.begin() + static_cast<std::size_t>(in + 1) * b.c * plane,
                  out.v.begin() + (static_cast<std::size_t>(in) * out.c + a.c) * plane);
    }
    return out;
}

// Inverse of concat_channels: splits dy into the two input gradients.
inline void split_channels(const Tensor& dy, int c_first, Tensor& da, Tensor& db) {
    assert(c_first <= dy.c);
    da = Tensor(dy.n, c_first, dy.h, dy.w);
    db = Tensor(dy.n, dy.c - c_first, dy.h, dy.w);
    const std::size_t plane = static_cast<std::size_t>(dy.h) * dy.w;
    for (int in = 0; in < dy.n; ++in) {
        std::copy(dy.v.begin() + static_cast<std::size_t>(in) * dy.c * plane,
                  dy.v.begin() + (static_cast<std::size_t>(in) * dy.c + c_first) * plane,
                  da.v.begin() + static_cast<std::size_t>(in) * da.c * plane);
        std::copy(dy.v.begin() + (static_cast<std::size_t>(in) * dy.c + c_first) * plane,
                  dy.v.begin() + static_cast<std::size_t>(in + 1) * dy.c * plane,
                  db.v.begin() + static_cast<std::size_t>(in) * db.c * plane);
    }
}

} // namespace fundus
