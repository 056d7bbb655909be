#include "fsl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fsl::svg {

namespace {

constexpr int kW = 900;
constexpr int kH = 540;
constexpr int kPad = 56;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string render_line_plot(const std::vector<walk::Snapshot>& snapshots,
                             const std::string& title, const std::string& meta_comment) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
       << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
    os << "<!-- " << meta_comment << " -->\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
       << " font-size=\"15\">" << title << "</text>\n";
    if (snapshots.empty()) {
        os << "</svg>\n";
        return os.str();
    }
    const auto& rep = *snapshots.front().dist.rep;
    double xmin = 1e300, xmax = -1e300, pmax = 0.0;
    for (const auto& snap : snapshots)
        for (Eigen::Index s = 0; s < rep.site_count; ++s) {
            double p = snap.dist.p[static_cast<std::size_t>(s)];
            if (p <= 0) continue;
            double x = rep.cartan_coords(s)[0];
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            pmax = std::max(pmax, p);
        }
    if (pmax <= 0 || xmin >= xmax) {
        os << "</svg>\n";
        return os.str();
    }
    auto px = [&](double x) {
        return kPad + (x - xmin) / (xmax - xmin) * (kW - 2 * kPad);
    };
    auto py = [&](double p) { return kH - kPad - p / pmax * (kH - 2 * kPad); };
    os << "<line x1=\"" << kPad << "\" y1=\"" << kH - kPad << "\" x2=\"" << kW - kPad
       << "\" y2=\"" << kH - kPad << "\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        const auto& snap = snapshots[i];
        os << "<polyline fill=\"none\" stroke=\"" << kPalette[i % 8]
           << "\" stroke-width=\"1.2\" points=\"";
        for (Eigen::Index s = 0; s < rep.site_count; ++s) {
            double x = rep.cartan_coords(s)[0];
            double p = snap.dist.p[static_cast<std::size_t>(s)];
            os << num(px(x)) << ',' << num(py(p)) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << kW - kPad + 4 << "\" y=\"" << 40 + 16 * i
           << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << kPalette[i % 8]
           << "\">m=" << snap.m << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string render_heat_map(const observables::Distribution& dist,
                            const std::string& title, const std::string& meta_comment) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
       << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
    os << "<!-- " << meta_comment << " -->\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
       << " font-size=\"15\">" << title << "</text>\n";
    const auto& rep = *dist.rep;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300, amax = 0.0;
    for (Eigen::Index s = 0; s < rep.site_count; ++s) {
        auto c = rep.cartan_coords(s);
        xmin = std::min(xmin, c[0]);
        xmax = std::max(xmax, c[0]);
        ymin = std::min(ymin, c[1]);
        ymax = std::max(ymax, c[1]);
        amax = std::max(amax, std::sqrt(dist.p[static_cast<std::size_t>(s)]));
    }
    if (amax <= 0 || xmin >= xmax || ymin >= ymax) {
        os << "</svg>\n";
        return os.str();
    }
    double span = std::max(xmax - xmin, ymax - ymin);
    double cell = (kW - 2.0 * kPad) / (span + 1.0) * 0.95;
    auto px = [&](double x) { return kPad + (x - xmin) / span * (kW - 2 * kPad); };
    auto py = [&](double y) { return kH - kPad - (y - ymin) / span * (kH - 2 * kPad); };
    for (Eigen::Index s = 0; s < rep.site_count; ++s) {
        double a = std::sqrt(dist.p[static_cast<std::size_t>(s)]) / amax;
        if (a < 1e-3) continue;
        auto c = rep.cartan_coords(s);
        int shade = static_cast<int>(255.0 * (1.0 - a));
        os << "<rect x=\"" << num(px(c[0]) - cell / 2) << "\" y=\"" << num(py(c[1]) - cell / 2)
           << "\" width=\"" << num(cell) << "\" height=\"" << num(cell) << "\" fill=\"rgb(255,"
           << shade << ',' << shade << ")\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace fsl::svg
