#include "plb/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace plb {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

void write_bifurcation_svg(const BranchCurve& curve, const SvgOptions& opts,
                           const std::filesystem::path& path) {
    if (curve.lambda.empty())
        throw Error("svg: empty curve");
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open for writing: " + path.string());

    double xmin = *std::min_element(curve.lambda.begin(), curve.lambda.end());
    double xmax = *std::max_element(curve.lambda.begin(), curve.lambda.end());
    double ymin = 0.0;
    double ymax = *std::max_element(curve.sup_norm.begin(), curve.sup_norm.end());
    if (opts.bound_lambda)
        xmax = std::max(xmax, *opts.bound_lambda);
    xmin = std::min(xmin, 0.0);
    if (xmax <= xmin)
        xmax = xmin + 1.0;
    if (ymax <= ymin)
        ymax = ymin + 1.0;
    xmax *= 1.05;
    ymax *= 1.05;

    const double ml = 70, mr = 25, mt = 40, mb = 55;
    const double pw = opts.width - ml - mr, ph = opts.height - mt - mb;
    auto X = [&](double l) { return ml + (l - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double s) { return mt + ph - (s - ymin) / (ymax - ymin) * ph; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width
        << "\" height=\"" << opts.height << "\" viewBox=\"0 0 " << opts.width
        << " " << opts.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" "
           "font-size=\"15\">"
        << opts.title << "</text>\n";

    // Axes.
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
        << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
        << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml + pw - 10 << "\" y=\"" << mt + ph + 35
        << "\" font-family=\"sans-serif\" font-size=\"13\">&#955;</text>\n";
    out << "<text x=\"12\" y=\"" << mt + 12
        << "\" font-family=\"sans-serif\" font-size=\"13\">sup u</text>\n";

    for (int k = 0; k <= 5; ++k) {
        const double lx = xmin + (xmax - xmin) * k / 5.0;
        const double sy = ymin + (ymax - ymin) * k / 5.0;
        out << "<line x1=\"" << X(lx) << "\" y1=\"" << mt + ph << "\" x2=\""
            << X(lx) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << X(lx) - 12 << "\" y=\"" << mt + ph + 20
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(lx)
            << "</text>\n";
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y(sy) << "\" x2=\"" << ml
            << "\" y2=\"" << Y(sy) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << 8 << "\" y=\"" << Y(sy) + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(sy)
            << "</text>\n";
    }

    if (opts.bound_lambda) {
        out << "<line x1=\"" << X(*opts.bound_lambda) << "\" y1=\"" << mt
            << "\" x2=\"" << X(*opts.bound_lambda) << "\" y2=\"" << mt + ph
            << "\" stroke=\"#c03030\" stroke-dasharray=\"6,4\"/>\n";
        out << "<text x=\"" << X(*opts.bound_lambda) - 40 << "\" y=\"" << mt - 6
            << "\" font-family=\"sans-serif\" font-size=\"11\" "
               "fill=\"#c03030\">bound</text>\n";
    }

    out << "<polyline fill=\"none\" stroke=\"#2050c0\" stroke-width=\"1.5\" "
           "points=\"";
    for (size_t i = 0; i < curve.lambda.size(); ++i)
        out << fmt(X(curve.lambda[i])) << "," << fmt(Y(curve.sup_norm[i])) << " ";
    out << "\"/>\n";

    if (opts.fold_lambda && opts.fold_sup) {
        out << "<circle cx=\"" << X(*opts.fold_lambda) << "\" cy=\""
            << Y(*opts.fold_sup)
            << "\" r=\"4\" fill=\"none\" stroke=\"#c03030\" stroke-width=\"1.5\"/>\n";
    }
    out << "</svg>\n";
}

} // namespace plb
