#include <algorithm>
#include <array>
#include <fstream>

#include <fmt/format.h>

#include "spatcorr/cli.hpp"

namespace spatcorr::cli {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 150, kTop = 30, kBottom = 60;
constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::pair<double, double> padded_range(const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (*lo == *hi) return {*lo - 0.5, *hi + 0.5};
    return {*lo, *hi};
}

}  // namespace

std::string render_svg_scatter(const SampleTable& table, const std::string& var_a, const std::string& var_b,
                               const Stratification* strat) {
    for (const auto* v : {&var_a, &var_b})
        if (!table.has_variable(*v))
            throw Error(ErrorKind::Shape, "cli/emit_svg_scatter", "unknown variable '" + *v + "'");

    struct Group {
        std::string name;
        std::vector<std::size_t> rows;
    };
    std::vector<Group> groups;
    if (strat) {
        // Re-derive membership by id so the stratify partition decides colours.
        const auto strata = stratify(table, *strat);
        std::map<std::string, std::size_t> index;
        for (std::size_t r = 0; r < table.size(); ++r) index[table.rows()[r].id] = r;
        for (const auto& s : strata) {
            Group g{s.name, {}};
            for (const auto& row : s.table.rows()) g.rows.push_back(index.at(row.id));
            std::sort(g.rows.begin(), g.rows.end());
            groups.push_back(std::move(g));
        }
    } else {
        Group g{"all", {}};
        for (std::size_t r = 0; r < table.size(); ++r) g.rows.push_back(r);
        groups.push_back(std::move(g));
    }

    const auto xs = table.column(var_a);
    const auto ys = table.column(var_b);
    const auto [x_lo, x_hi] = xs.empty() ? std::pair{0.0, 1.0} : padded_range(xs);
    const auto [y_lo, y_hi] = ys.empty() ? std::pair{0.0, 1.0} : padded_range(ys);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (v - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double v) { return kTop + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    svg += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\">\n",
        kWidth, kHeight);
    svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);

    const double x0 = kLeft, x1 = kLeft + plot_w, y0 = kTop + plot_h, y1 = kTop;
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", x0, y0, x1, y0);
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", x0, y0, x0, y1);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\">{:.6g}</text>\n", x0, y0 + 16, x_lo);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\">{:.6g}</text>\n", x1, y0 + 16, x_hi);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"end\">{:.6g}</text>\n", x0 - 6, y0 + 4, y_lo);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"end\">{:.6g}</text>\n", x0 - 6, y1 + 4, y_hi);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
                       kLeft + plot_w / 2, kHeight - 18, xml_escape(var_a));
    svg += fmt::format(
        "<text x=\"{0:.2f}\" y=\"{1:.2f}\" font-size=\"13\" text-anchor=\"middle\" "
        "transform=\"rotate(-90 {0:.2f} {1:.2f})\">{2}</text>\n",
        22.0, kTop + plot_h / 2, xml_escape(var_b));

    for (std::size_t g = 0; g < groups.size(); ++g) {
        const char* colour = kPalette[g % kPalette.size()];
        for (auto r : groups[g].rows)
            svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\" fill-opacity=\"0.8\"/>\n",
                               px(xs[r]), py(ys[r]), colour);
    }

    double ly = kTop + 10;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].rows.empty()) continue;
        const char* colour = kPalette[g % kPalette.size()];
        svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n",
                           kWidth - kRight + 20, ly, colour);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\">{} (n={})</text>\n",
                           kWidth - kRight + 36, ly + 9, xml_escape(groups[g].name), groups[g].rows.size());
        ly += 18;
    }
    svg += "</svg>\n";
    return svg;
}

void emit_svg_scatter(const SampleTable& table, const std::string& var_a, const std::string& var_b,
                      const Stratification* strat, const std::string& path) {
    const auto svg = render_svg_scatter(table, var_a, var_b, strat);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cli/emit_svg_scatter", "cannot write '" + path + "'");
    out << svg;
}

}  // namespace spatcorr::cli
