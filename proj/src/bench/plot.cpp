#include "spca/bench/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace spca::bench {

namespace {

struct Point {
    double n;
    double mean;
    double std;
};

using Series = std::map<std::string, std::vector<Point>>;  // method -> points sorted by n

struct Panel {
    Series error;
    Series recovery;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(what);
        }
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed CSV: bad value '" + s + "' in column " + what);
    }
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

const char* color_for(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    return palette[i % (sizeof palette / sizeof *palette)];
}

void render(const Series& series, const std::string& title, const std::string& ylabel, bool band, double y_floor,
            const std::string& path) {
    constexpr double W = 520, H = 380, L = 70, R = 20, T = 40, B = 55;
    double x_min = 1e300, x_max = -1e300, y_min = y_floor, y_max = -1e300;
    for (const auto& [name, pts] : series) {
        for (const auto& p : pts) {
            x_min = std::min(x_min, p.n);
            x_max = std::max(x_max, p.n);
            y_max = std::max(y_max, band ? p.mean + p.std : p.mean);
            y_min = std::min(y_min, band ? p.mean - p.std : p.mean);
        }
    }
    if (x_max <= x_min) {
        x_max = x_min + 1;
    }
    if (y_max <= y_min) {
        y_max = y_min + 1;
    }
    auto sx = [&](double x) { return L + (x - x_min) / (x_max - x_min) * (W - L - R); };
    auto sy = [&](double y) { return H - B - (y - y_min) / (y_max - y_min) * (H - T - B); };

    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
       << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = x_min + (x_max - x_min) * i / 5.0;
        const double yv = y_min + (y_max - y_min) * i / 5.0;
        os << "<text x=\"" << sx(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << num(xv)
           << "</text>\n";
        os << "<text x=\"" << L - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
        os << "<line x1=\"" << L << "\" y1=\"" << sy(yv) << "\" x2=\"" << W - R << "\" y2=\"" << sy(yv)
           << "\" stroke=\"#ddd\"/>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">number of samples n</text>\n";
    os << "<text transform=\"translate(16," << (T + H - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << ylabel
       << "</text>\n";

    std::size_t idx = 0;
    for (const auto& [name, pts] : series) {
        const char* color = color_for(idx);
        if (band && !pts.empty()) {
            os << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
            for (const auto& p : pts) {
                os << sx(p.n) << ',' << sy(p.mean + p.std) << ' ';
            }
            for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
                os << sx(it->n) << ',' << sy(it->mean - it->std) << ' ';
            }
            os << "\"/>\n";
        }
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& p : pts) {
            os << sx(p.n) << ',' << sy(p.mean) << ' ';
        }
        os << "\"/>\n";
        for (const auto& p : pts) {
            os << "<circle cx=\"" << sx(p.n) << "\" cy=\"" << sy(p.mean) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        const double ly = T + 14 + 16.0 * static_cast<double>(idx);
        os << "<line x1=\"" << W - R - 130 << "\" y1=\"" << ly << "\" x2=\"" << W - R - 110 << "\" y2=\"" << ly
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << W - R - 104 << "\" y=\"" << ly + 4 << "\">" << name << "</text>\n";
        ++idx;
    }
    os << "</svg>\n";
}

}  // namespace

std::vector<std::string> emit_plots(const std::vector<std::string>& csv_paths, const std::string& output_dir) {
    // (d, k) -> method -> n -> samples
    std::map<std::pair<long, long>, std::map<std::string, std::map<double, std::vector<std::pair<double, double>>>>>
        data;
    for (const auto& path : csv_paths) {
        std::ifstream in(path);
        if (!in) {
            throw std::invalid_argument("cannot open CSV '" + path + "'");
        }
        std::string line;
        if (!std::getline(in, line)) {
            throw std::invalid_argument("malformed CSV '" + path + "': missing header");
        }
        const auto header = split(line);
        auto col = [&](const std::string& name) {
            const auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end()) {
                throw std::invalid_argument("malformed CSV '" + path + "': missing column " + name);
            }
            return static_cast<std::size_t>(it - header.begin());
        };
        const std::size_t cn = col("n"), cd = col("d"), ck = col("k"), cm = col("method"), ce = col("l2_error"),
                          cr = col("support_recovered");
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            const auto f = split(line);
            if (f.size() != header.size()) {
                throw std::invalid_argument("malformed CSV '" + path + "': row has " + std::to_string(f.size()) +
                                            " fields, header has " + std::to_string(header.size()));
            }
            const auto d = static_cast<long>(to_double(f[cd], "d"));
            const auto k = static_cast<long>(to_double(f[ck], "k"));
            data[{d, k}][f[cm]][to_double(f[cn], "n")].emplace_back(to_double(f[ce], "l2_error"),
                                                                   to_double(f[cr], "support_recovered"));
        }
    }
    if (data.empty()) {
        throw std::runtime_error("no series");
    }

    std::filesystem::create_directories(output_dir);
    std::vector<std::string> written;
    for (const auto& [dk, methods] : data) {
        Panel panel;
        for (const auto& [method, by_n] : methods) {
            for (const auto& [n, samples] : by_n) {
                const auto t = static_cast<double>(samples.size());
                double se = 0, se2 = 0, sr = 0;
                for (const auto& [e, r] : samples) {
                    se += e;
                    se2 += e * e;
                    sr += r;
                }
                const double mean = se / t;
                const double sd = t > 1 ? std::sqrt(std::max(0.0, (se2 - se * se / t) / (t - 1))) : 0.0;
                panel.error[method].push_back({n, mean, sd});
                panel.recovery[method].push_back({n, sr / t, 0.0});
            }
        }
        const std::string tag = "d" + std::to_string(dk.first) + "_k" + std::to_string(dk.second);
        const std::string title = "d=" + std::to_string(dk.first) + ", k=" + std::to_string(dk.second);
        const auto err_path = (std::filesystem::path(output_dir) / ("error_" + tag + ".svg")).string();
        const auto rec_path = (std::filesystem::path(output_dir) / ("recovery_" + tag + ".svg")).string();
        render(panel.error, title, "l2 error", true, 0.0, err_path);
        render(panel.recovery, title, "support recovery probability", false, 0.0, rec_path);
        written.push_back(err_path);
        written.push_back(rec_path);
    }
    return written;
}

}  // namespace spca::bench
