#pragma once

// Self-contained SVG renderings: diagram scatter, cohort histograms and cycle
// sketches. Output is a pure function of the inputs.

#include <nntopo/persistence.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace nntopo::svg {

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string header(int w, int h) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) + "\" height=\"" +
           std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline std::string text(double x, double y, const std::string& s, const char* anchor = "middle") {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\">" + escape(s) +
           "</text>\n";
}

inline std::string line(double x1, double y1, double x2, double y2, const char* stroke, double width = 1.0,
                        const char* extra = "") {
    return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
           "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"" + extra + "/>\n";
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

inline std::string format_p(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", p);
    return buf;
}

}  // namespace detail

// Birth/death scatter with the diagonal; essential classes sit on a dashed
// "inf" line above the plot range.
inline std::string diagram(const PersistenceDiagram& d, const std::string& title = "Persistence Diagram") {
    using namespace detail;
    constexpr int w = 420, h = 420, m = 50;
    double hi = 0.0;
    for (const auto& p : d.pairs) hi = std::max(hi, p.essential() ? p.birth : p.death);
    hi = hi > 0.0 ? hi * 1.1 : 1.0;
    const double inf_y = m - 15.0;
    const auto sx = [&](double v) { return m + (w - 2 * m) * v / hi; };
    const auto sy = [&](double v) { return h - m - (h - 2 * m) * v / hi; };

    std::string out = header(w, h);
    out += text(w / 2.0, 20, title);
    out += line(sx(0), sy(0), sx(hi), sy(0), "black");
    out += line(sx(0), sy(0), sx(0), sy(hi), "black");
    out += line(sx(0), sy(0), sx(hi), sy(hi), "gray", 1.0, " stroke-dasharray=\"4 3\"");
    out += line(sx(0), inf_y, sx(hi), inf_y, "gray", 0.5, " stroke-dasharray=\"2 2\"");
    out += text(m - 8, inf_y + 4, "inf", "end");
    out += text(w / 2.0, h - 12, "birth");
    out += text(sx(hi), sy(0) + 16, num(hi), "end");
    out += "<text x=\"14\" y=\"" + num(h / 2.0) + "\" transform=\"rotate(-90 14 " + num(h / 2.0) +
           ")\" text-anchor=\"middle\">death</text>\n";
    for (const auto& p : d.pairs) {
        const double y = p.essential() ? inf_y : sy(p.death);
        out += "<circle cx=\"" + num(sx(p.birth)) + "\" cy=\"" + num(y) + "\" r=\"3\" fill=\"" +
               kPalette[p.dim == 0 ? 0 : 1] + "\" fill-opacity=\"0.7\"/>\n";
    }
    out += text(w - m, m, "H0", "end");
    out += "<circle cx=\"" + num(w - m + 8.0) + "\" cy=\"" + num(m - 4.0) + "\" r=\"3\" fill=\"" + kPalette[0] + "\"/>\n";
    out += text(w - m, m + 16, "H1", "end");
    out += "<circle cx=\"" + num(w - m + 8.0) + "\" cy=\"" + num(m + 12.0) + "\" r=\"3\" fill=\"" + kPalette[1] +
           "\"/>\n";
    out += "</svg>\n";
    return out;
}

// Overlaid histograms of one statistic for two cohorts, annotated with p.
inline std::string histogram(const std::vector<double>& a, const std::vector<double>& b, const std::string& label_a,
                             const std::string& label_b, const std::string& statistic, double p_value,
                             std::size_t bins = 20) {
    using namespace detail;
    constexpr int w = 560, h = 360, m = 50;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double x : a) lo = std::min(lo, x), hi = std::max(hi, x);
    for (double x : b) lo = std::min(lo, x), hi = std::max(hi, x);
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    bins = std::max<std::size_t>(bins, 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    const auto count = [&](const std::vector<double>& xs) {
        std::vector<std::size_t> c(bins, 0);
        for (double x : xs) {
            auto i = static_cast<std::size_t>((x - lo) / width);
            ++c[std::min(i, bins - 1)];
        }
        return c;
    };
    const auto ca = count(a), cb = count(b);
    std::size_t top = 1;
    for (std::size_t i = 0; i < bins; ++i) top = std::max({top, ca[i], cb[i]});
    const double bw = (w - 2.0 * m) / static_cast<double>(bins);

    std::string out = header(w, h);
    out += text(w / 2.0, 20, statistic + ": " + label_a + " vs " + label_b + "  (p = " + format_p(p_value) + ")");
    out += line(m, h - m, w - m, h - m, "black");
    out += line(m, h - m, m, m, "black");
    out += text(m, h - m + 16, num(lo));
    out += text(w - m, h - m + 16, num(hi));
    out += text(w / 2.0, h - 12, statistic);
    out += text(m - 6, m + 4, std::to_string(top), "end");
    const auto bars = [&](const std::vector<std::size_t>& c, const char* colour) {
        std::string s;
        for (std::size_t i = 0; i < bins; ++i) {
            if (c[i] == 0) continue;
            const double bh = (h - 2.0 * m) * static_cast<double>(c[i]) / static_cast<double>(top);
            s += "<rect x=\"" + num(m + bw * static_cast<double>(i)) + "\" y=\"" + num(h - m - bh) + "\" width=\"" +
                 num(bw) + "\" height=\"" + num(bh) + "\" fill=\"" + colour + "\" fill-opacity=\"0.5\"/>\n";
        }
        return s;
    };
    out += bars(ca, kPalette[0]);
    out += bars(cb, kPalette[1]);
    out += "<rect x=\"" + num(w - m - 120.0) + "\" y=\"40\" width=\"10\" height=\"10\" fill=\"" + kPalette[0] + "\"/>\n";
    out += text(w - m - 104.0, 49, label_a, "start");
    out += "<rect x=\"" + num(w - m - 120.0) + "\" y=\"56\" width=\"10\" height=\"10\" fill=\"" + kPalette[1] + "\"/>\n";
    out += text(w - m - 104.0, 65, label_b, "start");
    out += "</svg>\n";
    return out;
}

// Vertices on a circle in index order; each cycle's edges in its own colour.
inline std::string cycles(std::size_t n_points, const std::vector<PersistentCycle>& cs,
                          const std::string& title = "Top persistent cycles") {
    using namespace detail;
    constexpr int w = 480, h = 480;
    const double cx = w / 2.0, cy = h / 2.0 + 10, r = 180.0;
    const auto pos = [&](std::size_t i) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n_points, 1));
        return std::pair{cx + r * std::cos(a), cy + r * std::sin(a)};
    };
    std::string out = header(w, h);
    out += text(w / 2.0, 20, title);
    std::set<std::size_t> on_cycle;
    for (std::size_t c = 0; c < cs.size(); ++c) {
        const char* colour = kPalette[c % std::size(kPalette)];
        for (const auto& [i, j] : cs[c].edges) {
            on_cycle.insert(i);
            on_cycle.insert(j);
            const auto [x1, y1] = pos(i);
            const auto [x2, y2] = pos(j);
            out += line(x1, y1, x2, y2, colour, 2.0, " stroke-opacity=\"0.8\"");
        }
        out += text(12, 44.0 + 16.0 * static_cast<double>(c),
                    "cycle " + std::to_string(c) + ": [" + num(cs[c].pair.birth) + ", " + num(cs[c].pair.death) + ")",
                    "start");
    }
    for (std::size_t i = 0; i < n_points; ++i) {
        const auto [x, y] = pos(i);
        const bool hot = on_cycle.contains(i);
        out += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" + (hot ? "4" : "2") + "\" fill=\"" +
               (hot ? "black" : "#bbbbbb") + "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace nntopo::svg
