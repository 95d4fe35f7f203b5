#include "polyface/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "polyface/probcalc.hpp"

namespace polyface {

namespace {

struct CsvCell {
    double delta = 0.0;
    double rho = 0.0;
    double empirical = 0.0;
    double predicted = 0.0;
    bool has_empirical = false;
};

std::vector<CsvCell> parse_phase_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    std::vector<int> col_index(4, -1);  // delta, rho, predicted, empirical
    std::vector<CsvCell> cells;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!header_seen) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == "delta") col_index[0] = static_cast<int>(i);
                if (fields[i] == "rho") col_index[1] = static_cast<int>(i);
                if (fields[i] == "predicted") col_index[2] = static_cast<int>(i);
                if (fields[i] == "empirical") col_index[3] = static_cast<int>(i);
            }
            for (int c : col_index) {
                if (c < 0) throw std::runtime_error("phase CSV header is missing required columns");
            }
            header_seen = true;
            continue;
        }
        const std::size_t needed =
            static_cast<std::size_t>(*std::max_element(col_index.begin(), col_index.end())) + 1;
        if (fields.size() < needed) throw std::runtime_error("phase CSV row is too short");
        CsvCell cell;
        try {
            cell.delta = std::stod(fields[col_index[0]]);
            cell.rho = std::stod(fields[col_index[1]]);
            cell.predicted = std::stod(fields[col_index[2]]);
            cell.empirical = std::stod(fields[col_index[3]]);
        } catch (const std::exception&) {
            throw std::runtime_error("phase CSV has a non-numeric field");
        }
        cell.has_empirical = std::isfinite(cell.empirical);
        cells.push_back(cell);
    }
    if (!header_seen) throw std::runtime_error("phase CSV has no header row");
    if (cells.empty()) throw std::runtime_error("phase CSV has no data rows");
    return cells;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string ratio_color(double ratio, bool known) {
    if (!known) return "#c8c8c8";
    const double r = std::clamp(ratio, 0.0, 1.0);
    const int red = static_cast<int>(std::lround(255.0 * (1.0 - r) + 70.0 * r));
    const int green = static_cast<int>(std::lround(255.0 * (1.0 - r) + 130.0 * r));
    const int blue = static_cast<int>(std::lround(255.0 * (1.0 - r) + 180.0 * r));
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", red, green, blue);
    return buf;
}

}  // namespace

std::string render_svg_heatmap(const std::string& phase_csv) {
    const std::vector<CsvCell> cells = parse_phase_csv(phase_csv);

    std::set<double> deltas, rhos;
    for (const CsvCell& c : cells) {
        deltas.insert(c.delta);
        rhos.insert(c.rho);
    }
    const double cell_w = deltas.size() > 1 ? 1.0 / (deltas.size() + 1) : 0.2;
    const double cell_h = rhos.size() > 1 ? 1.0 / (rhos.size() + 1) : 0.2;

    const double plot = 480.0, margin = 50.0;
    const auto X = [&](double delta) { return margin + delta * plot; };
    const auto Y = [&](double rho) { return margin + (1.0 - rho) * plot; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot + 2 * margin << "\" height=\""
        << plot + 2 * margin << "\" viewBox=\"0 0 " << plot + 2 * margin << " " << plot + 2 * margin
        << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << plot + 2 * margin << "\" height=\"" << plot + 2 * margin
        << "\" fill=\"white\"/>\n";

    for (const CsvCell& c : cells) {
        const double w = cell_w * plot, h = cell_h * plot;
        svg << "<rect x=\"" << fmt(X(c.delta) - w / 2) << "\" y=\"" << fmt(Y(c.rho) - h / 2)
            << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h) << "\" fill=\""
            << ratio_color(c.has_empirical ? c.empirical : c.predicted, c.has_empirical) << "\"/>\n";
    }

    // weak-threshold overlay, sampled densely including the kink at 1/2
    svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
    const int samples = 200;
    for (int i = 0; i <= samples; ++i) {
        const double delta = 0.005 + (0.99) * i / samples;
        svg << fmt(X(delta)) << ',' << fmt(Y(rho_weak(delta))) << ' ';
    }
    svg << "\"/>\n";

    // frame and axis labels
    svg << "<rect x=\"" << fmt(margin) << "\" y=\"" << fmt(margin) << "\" width=\"" << fmt(plot)
        << "\" height=\"" << fmt(plot) << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(margin + plot / 2) << "\" y=\"" << fmt(plot + 2 * margin - 10)
        << "\" text-anchor=\"middle\" font-size=\"16\">delta = n/N</text>\n";
    svg << "<text x=\"15\" y=\"" << fmt(margin + plot / 2)
        << "\" text-anchor=\"middle\" font-size=\"16\" transform=\"rotate(-90 15 "
        << fmt(margin + plot / 2) << ")\">rho = k/n</text>\n";
    for (double tick = 0.0; tick <= 1.0001; tick += 0.25) {
        svg << "<text x=\"" << fmt(X(tick)) << "\" y=\"" << fmt(plot + margin + 20)
            << "\" text-anchor=\"middle\" font-size=\"12\">" << fmt(tick) << "</text>\n";
        svg << "<text x=\"" << fmt(margin - 8) << "\" y=\"" << fmt(Y(tick) + 4)
            << "\" text-anchor=\"end\" font-size=\"12\">" << fmt(tick) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_svg_heatmap(const std::string& csv_path, const std::string& svg_path) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open phase CSV: " + csv_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string svg = render_svg_heatmap(buffer.str());
    std::ofstream out(svg_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output SVG: " + svg_path);
    out << svg;
}

}  // namespace polyface
