#include "fundus/metrics/report.hpp"

#include <algorithm>
#include <sstream>

#include "fundus/core/error.hpp"
#include "fundus/core/io.hpp"

namespace fundus::metrics {

const char* MetricReport::kind_name(Kind k) {
    switch (k) {
    case Kind::segmentation: return "segmentation";
    case Kind::grading: return "grading";
    case Kind::multilabel: return "multilabel";
    }
    return "?";
}

double MetricReport::value(const std::string& row, const std::string& column) const {
    for (const auto& [key, vals] : rows) {
        if (key != row) continue;
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == column) return vals[i];
    }
    fail("unknown-metric", row + "." + column);
}

bool MetricReport::has_row(const std::string& row) const {
    return std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return r.first == row; });
}

void MetricReport::add_row(const std::string& key, std::vector<double> values) {
    require(values.size() == columns.size(), "shape-mismatch",
            "metric row " + key + " has wrong arity");
    rows.emplace_back(key, std::move(values));
}

std::string MetricReport::to_lines() const {
    std::ostringstream out;
    out << "kind = " << kind_name(kind) << "\n";
    for (const auto& [key, vals] : rows)
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << key << "." << columns[i] << " = " << format_double(vals[i]) << "\n";
    if (confusion.k > 0) {
        for (int i = 0; i < confusion.k; ++i)
            for (int j = 0; j < confusion.k; ++j)
                out << "confusion." << i << "." << j << " = " << confusion.at(i, j) << "\n";
    }
    return out.str();
}

std::string MetricReport::to_table() const {
    std::ostringstream out;
    out << "key";
    for (const auto& c : columns) out << '\t' << c;
    out << '\n';
    for (const auto& [key, vals] : rows) {
        out << key;
        for (double v : vals) out << '\t' << format_double(v);
        out << '\n';
    }
    return out.str();
}

void MetricReport::save(const std::filesystem::path& lines_path,
                        const std::filesystem::path& table_path) const {
    write_text_file(lines_path, to_lines());
    write_text_file(table_path, to_table());
}

MetricReport MetricReport::load(const std::filesystem::path& lines_path) {
    MetricReport rep;
    rep.columns.clear();
    std::istringstream in(read_text_file(lines_path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto eq = line.find(" = ");
        require(eq != std::string::npos, "io-failure", "bad metric line: " + line);
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 3);
        if (key == "kind") {
            if (val == "segmentation") rep.kind = Kind::segmentation;
            else if (val == "grading") rep.kind = Kind::grading;
            else if (val == "multilabel") rep.kind = Kind::multilabel;
            else fail("io-failure", "unknown report kind " + val);
            continue;
        }
        if (key.rfind("confusion.", 0) == 0) {
            auto rest = key.substr(10);
            auto dot = rest.find('.');
            const int i = std::stoi(rest.substr(0, dot));
            const int j = std::stoi(rest.substr(dot + 1));
            const int k = std::max({rep.confusion.k, i + 1, j + 1});
            if (k != rep.confusion.k) {
                std::vector<long long> grown(static_cast<std::size_t>(k) * k, 0);
                for (int a = 0; a < rep.confusion.k; ++a)
                    for (int b = 0; b < rep.confusion.k; ++b)
                        grown[static_cast<std::size_t>(a) * k + b] = rep.confusion.at(a, b);
                rep.confusion.k = k;
                rep.confusion.counts = std::move(grown);
            }
            rep.confusion.counts[static_cast<std::size_t>(i) * rep.confusion.k + j] =
                std::stoll(val);
            continue;
        }
        auto dot = key.rfind('.');
        require(dot != std::string::npos, "io-failure", "bad metric key: " + key);
        const std::string row = key.substr(0, dot);
        const std::string col = key.substr(dot + 1);
        if (std::find(rep.columns.begin(), rep.columns.end(), col) == rep.columns.end())
            rep.columns.push_back(col);
        if (!rep.has_row(row)) rep.rows.emplace_back(row, std::vector<double>());
        for (auto& [rk, vals] : rep.rows)
            if (rk == row) vals.push_back(std::stod(val));
    }
    return rep;
}

} // namespace fundus::metrics
