#include "plan/svg.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace plan {

namespace {

constexpr double kCanvas = 600.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v * kCanvas);
    return buf;
}

// SVG y grows downward; flip so the unit square renders upright.
std::string fmtY(double v) { return fmt(1.0 - v); }

void line(std::ostringstream& out, const std::vector<double>& a, const std::vector<double>& b) {
    out << "<line x1=\"" << fmt(a[0]) << "\" y1=\"" << fmtY(a[1]) << "\" x2=\"" << fmt(b[0])
        << "\" y2=\"" << fmtY(b[1]) << "\"/>\n";
}

void dot(std::ostringstream& out, const std::vector<double>& p, double r) {
    out << "<circle cx=\"" << fmt(p[0]) << "\" cy=\"" << fmtY(p[1]) << "\" r=\"" << r
        << "\"/>\n";
}

}  // namespace

std::string renderSvg(const SvgScene& scene) {
    if (scene.world == nullptr || scene.world->dimension() != 2) {
        throw std::invalid_argument("svg snapshot: only 2-dimensional worlds are supported");
    }
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\""
        << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " " << kCanvas << "\" data-solved=\""
        << (scene.solution.empty() ? "false" : "true") << "\">\n";
    out << "<rect width=\"" << kCanvas << "\" height=\"" << kCanvas << "\" fill=\"white\"/>\n";

    out << "<g id=\"obstacles\" fill=\"#444444\">\n";
    for (const auto& o : scene.world->obstacles()) {
        out << "<rect x=\"" << fmt(o.lower[0]) << "\" y=\"" << fmtY(o.upper[1]) << "\" width=\""
            << fmt(o.upper[0] - o.lower[0]) << "\" height=\"" << fmt(o.upper[1] - o.lower[1])
            << "\"/>\n";
    }
    out << "</g>\n";

    out << "<g id=\"samples\" fill=\"#bbbbbb\">\n";
    for (const auto& p : scene.samples) dot(out, p, 1.5);
    out << "</g>\n";

    out << "<g id=\"reverse-tree\" stroke=\"#e08030\" stroke-width=\"0.8\" fill=\"none\">\n";
    for (const auto& [a, b] : scene.reverseEdges) line(out, a, b);
    out << "</g>\n";

    out << "<g id=\"forward-tree\" stroke=\"#3070c0\" stroke-width=\"1.0\" fill=\"none\">\n";
    for (const auto& [a, b] : scene.forwardEdges) line(out, a, b);
    out << "</g>\n";

    out << "<g id=\"solution\" stroke=\"#c02020\" stroke-width=\"2.5\" fill=\"none\">\n";
    if (!scene.solution.empty()) {
        out << "<polyline points=\"";
        for (std::size_t i = 0; i < scene.solution.size(); ++i) {
            if (i > 0) out << ' ';
            out << fmt(scene.solution[i][0]) << ',' << fmtY(scene.solution[i][1]);
        }
        out << "\"/>\n";
    }
    out << "</g>\n";

    out << "<g id=\"endpoints\">\n";
    if (!scene.start.empty()) {
        out << "<circle cx=\"" << fmt(scene.start[0]) << "\" cy=\"" << fmtY(scene.start[1])
            << "\" r=\"5\" fill=\"#208020\"/>\n";
    }
    for (const auto& g : scene.goals) {
        out << "<circle cx=\"" << fmt(g[0]) << "\" cy=\"" << fmtY(g[1])
            << "\" r=\"5\" fill=\"#c02020\"/>\n";
    }
    out << "</g>\n";
    out << "</svg>\n";
    return out.str();
}

void writeSvg(const SvgScene& scene, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << renderSvg(scene);
}

}  // namespace plan
