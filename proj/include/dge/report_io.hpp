#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dge/csv.hpp"
#include "dge/error.hpp"
#include "dge/json_io.hpp"

namespace dge {

namespace svg {

struct Series {
    std::string label;
    std::vector<double> x, y;
};

// Minimal static line chart: axes, ticks, one polyline per series, legend.
inline std::string line_chart(const std::vector<Series>& series, const std::string& x_label,
                              const std::string& y_label, const std::string& title) {
    const double w = 640, h = 440, ml = 70, mr = 160, mt = 40, mb = 50;
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& s : series) {
        for (double v : s.x) { x_min = std::min(x_min, v); x_max = std::max(x_max, v); }
        for (double v : s.y) { y_min = std::min(y_min, v); y_max = std::max(y_max, v); }
    }
    if (x_min > x_max) { x_min = 0; x_max = 1; }
    if (y_min > y_max) { y_min = 0; y_max = 1; }
    if (x_max == x_min) { x_max += 1; }
    const double pad = (y_max - y_min) * 0.05;
    y_min -= pad > 0 ? pad : 0.05;
    y_max += pad > 0 ? pad : 0.05;

    auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - y_min) / (y_max - y_min) * (h - mt - mb); };
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                             "#ff7f0e", "#8c564b", "#17becf"};

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << w / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
        << "</text>\n";
    // axes
    out << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
        << "' stroke='black'/>\n";
    out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
        << "' stroke='black'/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = x_min + (x_max - x_min) * t / 4.0;
        const double yv = y_min + (y_max - y_min) * t / 4.0;
        out << "<text x='" << px(xv) << "' y='" << h - mb + 18
            << "' text-anchor='middle' font-size='11'>" << Json(xv).dump() << "</text>\n";
        out << "<text x='" << ml - 8 << "' y='" << py(yv) + 4
            << "' text-anchor='end' font-size='11'>" << Json(yv).dump() << "</text>\n";
        out << "<line x1='" << ml << "' y1='" << py(yv) << "' x2='" << w - mr << "' y2='"
            << py(yv) << "' stroke='#dddddd'/>\n";
    }
    out << "<text x='" << (ml + w - mr) / 2 << "' y='" << h - 12
        << "' text-anchor='middle' font-size='12'>" << x_label << "</text>\n";
    out << "<text x='18' y='" << (mt + h - mb) / 2
        << "' text-anchor='middle' font-size='12' transform='rotate(-90 18 "
        << (mt + h - mb) / 2 << ")'>" << y_label << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = palette[s % 7];
        out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.8' points='";
        for (std::size_t i = 0; i < series[s].x.size(); ++i)
            out << px(series[s].x[i]) << "," << py(series[s].y[i]) << " ";
        out << "'/>\n";
        for (std::size_t i = 0; i < series[s].x.size(); ++i)
            out << "<circle cx='" << px(series[s].x[i]) << "' cy='" << py(series[s].y[i])
                << "' r='2.5' fill='" << color << "'/>\n";
        const double ly = mt + 16 + 18 * static_cast<double>(s);
        out << "<line x1='" << w - mr + 10 << "' y1='" << ly << "' x2='" << w - mr + 34
            << "' y2='" << ly << "' stroke='" << color << "' stroke-width='2'/>\n";
        out << "<text x='" << w - mr + 40 << "' y='" << ly + 4 << "' font-size='12'>"
            << series[s].label << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

// Heatmap of a row-major grid plus the decision-boundary segments.
inline std::string heatmap(const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::vector<double>& values,
                           const std::vector<std::vector<double>>& boundary,
                           const std::string& title) {
    const double w = 560, h = 520, ml = 60, mr = 80, mt = 40, mb = 50;
    double v_max = 1e-12;
    for (double v : values) v_max = std::max(v_max, v);
    const std::size_t nx = xs.size(), ny = ys.size();
    auto px = [&](double x) {
        return ml + (x - xs.front()) / (xs.back() - xs.front()) * (w - ml - mr);
    };
    auto py = [&](double y) {
        return h - mb - (y - ys.front()) / (ys.back() - ys.front()) * (h - mt - mb);
    };

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << w / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
        << " (max " << Json(v_max).dump() << ")</text>\n";
    const double cw = (w - ml - mr) / static_cast<double>(nx - 1);
    const double ch = (h - mt - mb) / static_cast<double>(ny - 1);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double t = values[j * nx + i] / v_max;
            const int r = static_cast<int>(255 * t);
            const int b = static_cast<int>(255 * (1 - t));
            out << "<rect x='" << px(xs[i]) - cw / 2 << "' y='" << py(ys[j]) - ch / 2
                << "' width='" << cw + 0.5 << "' height='" << ch + 0.5 << "' fill='rgb(" << r
                << ",60," << b << ")'/>\n";
        }
    }
    for (const auto& seg : boundary) {
        out << "<line x1='" << px(seg[0]) << "' y1='" << py(seg[1]) << "' x2='" << px(seg[2])
            << "' y2='" << py(seg[3])
            << "' stroke='white' stroke-width='2' stroke-dasharray='5,4'/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace svg

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace detail

// Tabular view of the reports array: approach x metric with mean +- std,
// one row per (approach, metric), matching the paper-style tables.
inline std::string reports_to_csv(const Json& results) {
    std::ostringstream out;
    out << "approach,metric,mean,std,per_run\n";
    for (const auto& r : results.at("reports")) {
        out << detail::quote_csv(r.at("approach").get<std::string>()) << ','
            << r.at("metric").get<std::string>() << ',' << Json(r.at("mean")).dump() << ','
            << Json(r.at("std")).dump() << ',';
        std::string joined;
        for (const auto& v : r.at("per_run")) {
            if (!joined.empty()) joined += ';';
            joined += Json(v).dump();
        }
        out << detail::quote_csv(joined) << '\n';
    }
    return out.str();
}

// Emits report files for a finished run directory. Formats: csv (tables),
// json (pretty results passthrough), svg (curves, grids, sweeps).
inline std::vector<std::string> emit_report(const std::filesystem::path& run_dir,
                                            const std::string& format,
                                            const std::filesystem::path& out_dir) {
    const Json results = load_json(run_dir / "results.json");
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& text) {
        detail::write_text(out_dir / name, text);
        written.push_back((out_dir / name).string());
    };

    if (format == "csv") {
        emit("reports.csv", reports_to_csv(results));
        if (results.contains("rankings")) {
            std::ostringstream out;
            out << "approach,class,mean_auc,rank,spearman_mean\n";
            for (const auto& r : results.at("rankings")) {
                const auto& classes = r.at("classes");
                for (std::size_t c = 0; c < classes.size(); ++c) {
                    out << r.at("approach").get<std::string>() << ','
                        << classes.at(c).get<std::string>() << ','
                        << Json(r.at("mean_auc").at(c)).dump() << ','
                        << Json(r.at("ranks").at(c)).dump() << ','
                        << Json(r.at("spearman_mean")).dump() << '\n';
                }
            }
            emit("rankings.csv", out.str());
        }
        if (results.contains("curves")) {
            std::ostringstream out;
            out << "approach,threshold,accuracy_mean,coverage_mean\n";
            for (const auto& [name, curve] : results.at("curves").items()) {
                const auto& taus = curve.at("thresholds");
                for (std::size_t t = 0; t < taus.size(); ++t) {
                    out << name << ',' << Json(taus.at(t)).dump() << ',';
                    if (curve.at("accuracy_mean").at(t).is_null()) out << "NA";
                    else out << Json(curve.at("accuracy_mean").at(t)).dump();
                    out << ',' << Json(curve.at("coverage_mean").at(t)).dump() << '\n';
                }
            }
            emit("curves.csv", out.str());
        }
        if (results.contains("subgroups")) {
            std::ostringstream out;
            out << "rule,share,approach,accuracy_mean,accuracy_std,relative_to_oracle\n";
            for (const auto& g : results.at("subgroups")) {
                for (const auto& [name, a] : g.at("approaches").items()) {
                    out << detail::quote_csv(g.at("rule").get<std::string>()) << ','
                        << Json(g.at("share")).dump() << ',' << name << ','
                        << Json(a.at("accuracy_mean")).dump() << ','
                        << Json(a.at("accuracy_std")).dump() << ','
                        << Json(a.at("relative_to_oracle")).dump() << '\n';
                }
            }
            emit("subgroups.csv", out.str());
        }
        if (results.contains("per_value")) {
            std::ostringstream out;
            out << "value,approach,metric,mean,std\n";
            for (const auto& pv : results.at("per_value")) {
                for (const auto& r : pv.at("result").at("reports")) {
                    out << Json(pv.at("value")).dump() << ','
                        << detail::quote_csv(r.at("approach").get<std::string>()) << ','
                        << r.at("metric").get<std::string>() << ',' << Json(r.at("mean")).dump()
                        << ',' << Json(r.at("std")).dump() << '\n';
                }
            }
            emit("sweep.csv", out.str());
        }
    } else if (format == "json") {
        emit("report.json", results.dump(2) + "\n");
    } else if (format == "svg") {
        if (results.contains("curves")) {
            std::vector<svg::Series> series;
            for (const auto& [name, curve] : results.at("curves").items()) {
                svg::Series s;
                s.label = name;
                const auto& taus = curve.at("thresholds");
                for (std::size_t t = 0; t < taus.size(); ++t) {
                    if (curve.at("accuracy_mean").at(t).is_null()) continue;
                    s.x.push_back(taus.at(t).get<double>());
                    s.y.push_back(curve.at("accuracy_mean").at(t).get<double>());
                }
                series.push_back(std::move(s));
            }
            emit("confidence_accuracy.svg",
                 svg::line_chart(series, "confidence threshold", "selective accuracy",
                                 "Confidence-accuracy"));
        }
        if (results.contains("grids_run0")) {
            for (const auto& [name, grid] : results.at("grids_run0").items()) {
                std::vector<std::vector<double>> boundary;
                for (const auto& seg : grid.at("boundary"))
                    boundary.push_back(seg.get<std::vector<double>>());
                emit("grid_std_" + name + ".svg",
                     svg::heatmap(grid.at("xs").get<std::vector<double>>(),
                                  grid.at("ys").get<std::vector<double>>(),
                                  grid.at("stddev").get<std::vector<double>>(), boundary,
                                  "member std: " + name));
            }
        }
        if (results.contains("per_value")) {
            // one series per approach/metric over the sweep values
            std::map<std::string, svg::Series> series_map;
            for (const auto& pv : results.at("per_value")) {
                for (const auto& r : pv.at("result").at("reports")) {
                    const std::string key = r.at("approach").get<std::string>() + "/" +
                                            r.at("metric").get<std::string>();
                    auto& s = series_map[key];
                    s.label = key;
                    s.x.push_back(pv.at("value").get<double>());
                    s.y.push_back(r.at("mean").get<double>());
                }
            }
            std::vector<svg::Series> series;
            for (auto& [key, s] : series_map) series.push_back(std::move(s));
            emit("sweep.svg", svg::line_chart(series, "sweep value", "metric", "Sweep"));
        }
        if (!results.contains("curves") && !results.contains("grids_run0") &&
            !results.contains("per_value")) {
            // bar-less fallback: per-approach mean as a flat series
            std::vector<svg::Series> series;
            std::map<std::string, svg::Series> by_metric;
            double x = 0;
            for (const auto& r : results.at("reports")) {
                auto& s = by_metric[r.at("metric").get<std::string>()];
                s.label = r.at("metric").get<std::string>();
                s.x.push_back(x++);
                s.y.push_back(r.at("mean").get<double>());
            }
            for (auto& [key, s] : by_metric) series.push_back(std::move(s));
            emit("reports.svg", svg::line_chart(series, "approach index", "mean", "Reports"));
        }
    } else {
        throw ConfigError("unknown report format: " + format);
    }
    return written;
}

}  // namespace dge
