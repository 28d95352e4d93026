#include "fundus/core/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "fundus/core/error.hpp"

namespace fundus {

namespace {

cv::Mat to_mat_u8(const Image& img) {
    cv::Mat m(img.h, img.w, CV_8UC3);
    for (int y = 0; y < img.h; ++y) {
        auto* row = m.ptr<cv::Vec3b>(y);
        for (int x = 0; x < img.w; ++x) {
            // OpenCV stores BGR
            row[x][2] = static_cast<std::uint8_t>(img.at(y, x, 0) * 255.0 + 0.5);
            row[x][1] = static_cast<std::uint8_t>(img.at(y, x, 1) * 255.0 + 0.5);
            row[x][0] = static_cast<std::uint8_t>(img.at(y, x, 2) * 255.0 + 0.5);
        }
    }
    return m;
}

} // namespace

Image load_image_png(const std::filesystem::path& path) {
    cv::Mat m = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (m.empty()) fail("io-failure", "cannot read image " + path.string());
    Image img(m.rows, m.cols);
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<cv::Vec3b>(y);
        for (int x = 0; x < m.cols; ++x) {
            img.at(y, x, 0) = row[x][2] / 255.0;
            img.at(y, x, 1) = row[x][1] / 255.0;
            img.at(y, x, 2) = row[x][0] / 255.0;
        }
    }
    return img;
}

void save_image_png(const std::filesystem::path& path, const Image& img) {
    std::filesystem::create_directories(path.parent_path());
    if (!cv::imwrite(path.string(), to_mat_u8(img)))
        fail("io-failure", "cannot write image " + path.string());
}

Mask load_mask_png(const std::filesystem::path& path) {
    cv::Mat m = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
    if (m.empty()) fail("io-failure", "cannot read mask " + path.string());
    Mask mask(m.rows, m.cols);
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < m.cols; ++x) mask.at(y, x) = row[x] >= 128 ? 1 : 0;
    }
    return mask;
}

void save_mask_png(const std::filesystem::path& path, const Mask& mask) {
    std::filesystem::create_directories(path.parent_path());
    cv::Mat m(mask.h, mask.w, CV_8UC1);
    for (int y = 0; y < mask.h; ++y) {
        auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < mask.w; ++x) row[x] = mask.at(y, x) ? 255 : 0;
    }
    if (!cv::imwrite(path.string(), m))
        fail("io-failure", "cannot write mask " + path.string());
}

Image resize_bilinear(const Image& img, int out_h, int out_w) {
    if (img.h == out_h && img.w == out_w) return img;
    cv::Mat src(img.h, img.w, CV_64FC3, const_cast<double*>(img.rgb.data()));
    cv::Mat dst;
    cv::resize(src, dst, cv::Size(out_w, out_h), 0, 0, cv::INTER_LINEAR);
    Image out(out_h, out_w);
    for (int y = 0; y < out_h; ++y) {
        const auto* row = dst.ptr<cv::Vec3d>(y);
        for (int x = 0; x < out_w; ++x)
            for (int ch = 0; ch < 3; ++ch) out.at(y, x, ch) = row[x][ch];
    }
    return out;
}

Mask resize_nearest(const Mask& mask, int out_h, int out_w) {
    if (mask.h == out_h && mask.w == out_w) return mask;
    cv::Mat src(mask.h, mask.w, CV_8UC1, const_cast<std::uint8_t*>(mask.m.data()));
    cv::Mat dst;
    cv::resize(src, dst, cv::Size(out_w, out_h), 0, 0, cv::INTER_NEAREST);
    Mask out(out_h, out_w);
    for (int y = 0; y < out_h; ++y) {
        const auto* row = dst.ptr<std::uint8_t>(y);
        for (int x = 0; x < out_w; ++x) out.at(y, x) = row[x];
    }
    return out;
}

ProbMap resize_bilinear(const ProbMap& pm, int out_h, int out_w) {
    if (pm.h == out_h && pm.w == out_w) return pm;
    cv::Mat src(pm.h, pm.w, CV_64FC1, const_cast<double*>(pm.p.data()));
    cv::Mat dst;
    cv::resize(src, dst, cv::Size(out_w, out_h), 0, 0, cv::INTER_LINEAR);
    ProbMap out(out_h, out_w);
    for (int y = 0; y < out_h; ++y) {
        const auto* row = dst.ptr<double>(y);
        for (int x = 0; x < out_w; ++x) out.at(y, x) = row[x];
    }
    return out;
}

std::vector<std::vector<std::string>> read_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("io-failure", "cannot open " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

void write_tsv(const std::filesystem::path& path,
               const std::vector<std::vector<std::string>>& rows) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) fail("io-failure", "cannot write " + path.string());
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << '\t';
            out << row[i];
        }
        out << '\n';
    }
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("io-failure", "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("io-failure", "cannot write " + path.string());
    out << content;
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace fundus
