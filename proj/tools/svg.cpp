#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace ringbif::cli {

namespace {

std::string num(double v, const char* fmt = "%.2f") {
    char buf[32];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) return m * mag;
    return 10.0 * mag;
}

class Canvas {
public:
    Canvas(double x_lo, double x_hi, double y_lo, double y_hi) {
        if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
        if (!(y_hi > y_lo)) {
            y_lo -= 0.5;
            y_hi += 0.5;
        }
        x_lo_ = x_lo;
        x_hi_ = x_hi;
        y_lo_ = y_lo;
        y_hi_ = y_hi;
        os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
            << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    }

    [[nodiscard]] double px(double x) const { return kLeft + (x - x_lo_) / (x_hi_ - x_lo_) * (kWidth - kLeft - kRight); }
    [[nodiscard]] double py(double y) const { return kHeight - kBottom - (y - y_lo_) / (y_hi_ - y_lo_) * (kHeight - kTop - kBottom); }

    void axes(const std::string& x_label, const std::string& y_label) {
        const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
        os_ << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
            << "\" fill=\"none\" stroke=\"black\"/>\n";
        const double sx = nice_step(x_hi_ - x_lo_, 8);
        for (double t = std::ceil(x_lo_ / sx) * sx; t <= x_hi_ + 1e-9 * sx; t += sx) {
            const double x = px(t);
            os_ << "<line x1=\"" << num(x) << "\" y1=\"" << y0 << "\" x2=\"" << num(x) << "\" y2=\"" << y0 + 5
                << "\" stroke=\"black\"/>\n<text x=\"" << num(x) << "\" y=\"" << y0 + 18
                << "\" text-anchor=\"middle\">" << num(std::abs(t) < 1e-12 ? 0.0 : t, "%g") << "</text>\n";
        }
        const double sy = nice_step(y_hi_ - y_lo_, 6);
        for (double t = std::ceil(y_lo_ / sy) * sy; t <= y_hi_ + 1e-9 * sy; t += sy) {
            const double y = py(t);
            os_ << "<line x1=\"" << x0 - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << x0 << "\" y2=\"" << num(y)
                << "\" stroke=\"black\"/>\n<text x=\"" << x0 - 8 << "\" y=\"" << num(y + 4)
                << "\" text-anchor=\"end\">" << num(std::abs(t) < 1e-12 ? 0.0 : t, "%g") << "</text>\n";
        }
        os_ << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
            << escape(x_label) << "</text>\n"
            << "<text x=\"16\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
            << (y0 + y1) / 2 << ")\">" << escape(y_label) << "</text>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& style) {
        if (pts.size() < 2) return;
        os_ << "<polyline fill=\"none\" " << style << " points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) os_ << ' ';
            os_ << num(px(pts[i].first)) << ',' << num(py(pts[i].second));
        }
        os_ << "\"/>\n";
    }

    void raw(const std::string& s) { os_ << s; }

    std::string finish() {
        os_ << "</svg>\n";
        return os_.str();
    }

    static constexpr double kWidth = 800, kHeight = 560, kLeft = 70, kRight = 110, kTop = 20, kBottom = 50;

private:
    std::ostringstream os_;
    double x_lo_ = 0, x_hi_ = 1, y_lo_ = 0, y_hi_ = 1;
};

}  // namespace

std::string diagram_svg(const Diagram& d, std::size_t coordinate, const std::string& label) {
    double y_lo = std::numeric_limits<double>::infinity();
    double y_hi = -y_lo;
    for (const auto& b : d.branches)
        for (const auto& e : b.points) {
            y_lo = std::min(y_lo, e.state.at(coordinate));
            y_hi = std::max(y_hi, e.state.at(coordinate));
        }
    if (!std::isfinite(y_lo)) y_lo = y_hi = 0.0;
    const double pad = 0.05 * std::max(y_hi - y_lo, 1e-3);
    Canvas c(d.r_lo, d.r_hi, y_lo - pad, y_hi + pad);
    c.axes("r", label);

    const std::string stable = "stroke=\"black\" stroke-width=\"2\"";
    const std::string unstable = "stroke=\"#888888\" stroke-width=\"1.2\" stroke-dasharray=\"5,4\"";
    for (const auto& b : d.branches) {
        std::vector<std::pair<double, double>> run;
        bool run_stable = false;
        for (std::size_t k = 0; k < b.points.size(); ++k) {
            const auto& e = b.points[k];
            const bool s = e.stability == Stability::Stable;
            const std::pair<double, double> pt{e.r, e.state[coordinate]};
            if (!run.empty() && s != run_stable) {
                run.push_back(pt);  // share the joint so runs meet
                c.polyline(run, run_stable ? stable : unstable);
                run.clear();
            }
            if (run.empty()) run_stable = s;
            run.push_back(pt);
        }
        c.polyline(run, run_stable ? stable : unstable);
    }

    std::ostringstream marks;
    for (auto kind : {SpecialKind::BranchPoint, SpecialKind::LimitPoint, SpecialKind::Unclassified}) {
        const std::string color = kind == SpecialKind::BranchPoint ? "#d62728"
                                  : kind == SpecialKind::LimitPoint ? "#1f77b4"
                                                                    : "#2ca02c";
        for (const auto& sp : d.special_points(kind)) {
            const double x = c.px(sp.r), y = c.py(sp.state[coordinate]);
            marks << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"4\" fill=\"" << color
                  << "\"/>\n<text x=\"" << num(x + 6) << "\" y=\"" << num(y - 6) << "\" fill=\"" << color << "\">"
                  << to_string(kind) << "</text>\n";
        }
    }
    c.raw(marks.str());

    const double lx = Canvas::kWidth - Canvas::kRight + 10;
    c.raw("<line x1=\"" + num(lx) + "\" y1=\"30\" x2=\"" + num(lx + 25) + "\" y2=\"30\" " + stable + "/>\n" +
          "<text x=\"" + num(lx + 30) + "\" y=\"34\">stable</text>\n" + "<line x1=\"" + num(lx) +
          "\" y1=\"50\" x2=\"" + num(lx + 25) + "\" y2=\"50\" " + unstable + "/>\n" + "<text x=\"" +
          num(lx + 30) + "\" y=\"54\">unstable</text>\n");
    return c.finish();
}

std::string phase_svg(const PhaseDiagram& d) {
    auto edges = [](const std::vector<double>& axis) {
        std::vector<double> e(axis.size() + 1);
        for (std::size_t i = 0; i < axis.size(); ++i) {
            const double lo = i > 0 ? 0.5 * (axis[i - 1] + axis[i]) : axis[i] - (axis.size() > 1 ? 0.5 * (axis[1] - axis[0]) : 0.5);
            e[i] = lo;
        }
        const std::size_t m = axis.size();
        e[m] = m > 1 ? axis[m - 1] + 0.5 * (axis[m - 1] - axis[m - 2]) : axis[0] + 0.5;
        return e;
    };
    const auto re = edges(d.r_axis);
    const auto pe = edges(d.p_axis);
    Canvas c(re.front(), re.back(), pe.front(), pe.back());

    static constexpr std::array<const char*, 10> palette{"#f7fbff", "#deebf7", "#c6dbef", "#9ecae1", "#6baed6",
                                                         "#fdd0a2", "#fdae6b", "#fd8d3c", "#e6550d", "#a63603"};
    std::map<int, std::size_t> color_of;
    for (const auto& row : d.counts)
        for (int v : row) color_of.emplace(v, 0);
    std::size_t next = 0;
    for (auto& [count, idx] : color_of) idx = next++ % palette.size();

    std::map<int, std::array<double, 3>> centroid;  // sum r, sum p, cells
    std::ostringstream cells;
    for (std::size_t i = 0; i < d.r_axis.size(); ++i) {
        for (std::size_t j = 0; j < d.p_axis.size(); ++j) {
            const int v = d.counts[i][j];
            const double x0 = c.px(re[i]), x1 = c.px(re[i + 1]);
            const double y0 = c.py(pe[j + 1]), y1 = c.py(pe[j]);
            cells << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0 + 0.3)
                  << "\" height=\"" << num(y1 - y0 + 0.3) << "\" fill=\"" << palette[color_of[v]] << "\"/>\n";
            auto& acc = centroid[v];
            acc[0] += d.r_axis[i];
            acc[1] += d.p_axis[j];
            acc[2] += 1.0;
        }
    }
    c.raw(cells.str());
    c.axes("r", "p");

    std::ostringstream labels;
    for (const auto& [v, acc] : centroid) {
        labels << "<text x=\"" << num(c.px(acc[0] / acc[2])) << "\" y=\"" << num(c.py(acc[1] / acc[2]))
               << "\" text-anchor=\"middle\" font-weight=\"bold\">" << v << "</text>\n";
    }
    double ly = 30;
    const double lx = Canvas::kWidth - Canvas::kRight + 10;
    for (const auto& [v, idx] : color_of) {
        labels << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly - 10) << "\" width=\"14\" height=\"14\" fill=\""
               << palette[idx] << "\" stroke=\"black\"/>\n<text x=\"" << num(lx + 20) << "\" y=\"" << num(ly + 2)
               << "\">" << v << " stable</text>\n";
        ly += 20;
    }
    c.raw(labels.str());
    return c.finish();
}

}  // namespace ringbif::cli
