#include "embkit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "embkit/error.hpp"
#include "embkit/rng.hpp"
#include "embkit/text.hpp"

namespace embkit {

using ordered_json = nlohmann::ordered_json;

std::uint64_t digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for digesting");
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

std::string digest_hex(std::uint64_t digest) {
    static const char* kHex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kHex[digest & 0xf];
        digest >>= 4;
    }
    return out;
}

std::string manifest_json(const RunManifest& m) {
    ordered_json j;
    j["command"] = m.command;
    j["version"] = m.version;
    j["seed"] = m.seed;
    j["config"] = ordered_json::object();
    for (const auto& [k, v] : m.config) j["config"][k] = v;
    j["inputs"] = ordered_json::object();
    for (const auto& [path, digest] : m.inputs) j["inputs"][path] = digest;
    j["outputs"] = m.outputs;
    j["duration_ms"] = m.duration_ms;
    return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& m, const std::string& path) {
    write_text_file(path, manifest_json(m));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string num(double v) {
    // Two decimals is plenty for pixel coordinates and keeps files small.
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string svg_line_chart(const ChartSpec& spec) {
    constexpr double kWidth = 640.0;
    constexpr double kHeight = 420.0;
    constexpr double kLeft = 62.0;
    constexpr double kRight = 610.0;
    constexpr double kTop = 46.0;
    constexpr double kBottom = 360.0;
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& s : spec.series) {
        for (const auto& [x, y] : s.points) {
            xs.push_back(spec.log2_x ? std::log2(x) : x);
            ys.push_back(y);
        }
    }
    if (xs.empty()) throw ArgumentError("chart has no points");

    double x_lo = *std::min_element(xs.begin(), xs.end());
    double x_hi = *std::max_element(xs.begin(), xs.end());
    double y_lo = *std::min_element(ys.begin(), ys.end());
    double y_hi = *std::max_element(ys.begin(), ys.end());
    if (x_hi == x_lo) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if (y_hi == y_lo) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    const double y_pad = (y_hi - y_lo) * 0.06;
    y_lo -= y_pad;
    y_hi += y_pad;

    auto px = [&](double x) {
        const double t = spec.log2_x ? std::log2(x) : x;
        return kLeft + (t - x_lo) / (x_hi - x_lo) * (kRight - kLeft);
    };
    auto py = [&](double y) { return kBottom - (y - y_lo) / (y_hi - y_lo) * (kBottom - kTop); };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
           num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" fill=\"white\"/>\n";
    svg += "<text x=\"" + num((kLeft + kRight) / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" +
           xml_escape(spec.title) + "</text>\n";

    // Axes
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kBottom) + "\" x2=\"" + num(kRight) +
           "\" y2=\"" + num(kBottom) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) +
           "\" y2=\"" + num(kBottom) + "\" stroke=\"black\"/>\n";

    // X ticks at each distinct data x, labeled with the raw value.
    std::vector<double> tick_xs;
    for (const auto& s : spec.series) {
        for (const auto& [x, y] : s.points) tick_xs.push_back(x);
    }
    std::sort(tick_xs.begin(), tick_xs.end());
    tick_xs.erase(std::unique(tick_xs.begin(), tick_xs.end()), tick_xs.end());
    for (double x : tick_xs) {
        const double cx = px(x);
        svg += "<line x1=\"" + num(cx) + "\" y1=\"" + num(kBottom) + "\" x2=\"" + num(cx) +
               "\" y2=\"" + num(kBottom + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(cx) + "\" y=\"" + num(kBottom + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
               format_double(x) + "</text>\n";
    }
    // Five evenly spaced Y ticks.
    for (int i = 0; i <= 4; ++i) {
        const double y = y_lo + (y_hi - y_lo) * i / 4.0;
        const double cy = py(y);
        svg += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(cy) + "\" x2=\"" + num(kLeft) +
               "\" y2=\"" + num(cy) + "\" stroke=\"black\"/>\n";
        char label[32];
        std::snprintf(label, sizeof(label), "%.2f", y);
        svg += "<text x=\"" + num(kLeft - 9) + "\" y=\"" + num(cy + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + label +
               "</text>\n";
    }

    svg += "<text x=\"" + num((kLeft + kRight) / 2) + "\" y=\"" + num(kHeight - 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           xml_escape(spec.x_label) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + num((kTop + kBottom) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " +
           num((kTop + kBottom) / 2) + ")\">" + xml_escape(spec.y_label) + "</text>\n";

    for (std::size_t s = 0; s < spec.series.size(); ++s) {
        const auto& series = spec.series[s];
        const char* color = kColors[s % (sizeof(kColors) / sizeof(kColors[0]))];
        std::string pts;
        for (const auto& [x, y] : series.points) {
            if (!pts.empty()) pts += ' ';
            pts += num(px(x)) + "," + num(py(y));
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.8\" points=\"" + pts + "\"/>\n";
        for (const auto& [x, y] : series.points) {
            svg += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) +
                   "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
        svg += "<text x=\"" + num(kRight - 4) + "\" y=\"" + num(kTop + 16 * (s + 1)) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" +
               color + "\">" + xml_escape(series.name) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

namespace {

std::vector<double> mid_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw ArgumentError("spearman needs two equally sized series of length >= 2");
    }
    const std::vector<double> rx = mid_ranks(xs);
    const std::vector<double> ry = mid_ranks(ys);
    const double n = static_cast<double>(xs.size());
    double mean = (n + 1.0) / 2.0;
    double cov = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cov += (rx[i] - mean) * (ry[i] - mean);
        var_x += (rx[i] - mean) * (rx[i] - mean);
        var_y += (ry[i] - mean) * (ry[i] - mean);
    }
    if (var_x == 0.0 || var_y == 0.0) return 0.0;
    return cov / std::sqrt(var_x * var_y);
}

}  // namespace embkit
