#include "swt/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "swt/errors.hpp"

namespace swt {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json to_json(const DependenceReport& r) {
    return nlohmann::json{{"m1_star_fg", r.m1_star_fg}, {"m1_star_gf", r.m1_star_gf},
                          {"m1", r.m1},                 {"m2", r.m2},
                          {"codifference", r.codifference}, {"eps1", r.eps1},
                          {"eps2", r.eps2},             {"alpha", r.alpha}};
}

nlohmann::json to_json(const EstimateResult& r) {
    nlohmann::json j{{"method", r.method}, {"H_hat", r.h_hat}, {"Y", r.y},
                     {"N", r.counts},      {"w", r.w},         {"j_min", r.j_min},
                     {"warnings", r.warnings}};
    if (r.beta) j["beta"] = *r.beta;
    if (r.sigma2_hat) j["sigma2_hat"] = *r.sigma2_hat;
    return j;
}

nlohmann::json grid_metadata(const WaveletCoefGrid& g) {
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& o : g.octaves) counts.push_back(o.size());
    return nlohmann::json{{"alpha", g.alpha},   {"H", g.hurst},        {"Q", g.q},
                          {"family", g.family}, {"method", g.method},  {"N", g.n},
                          {"j_min", g.j_min},   {"N_j", counts},       {"delta", g.delta},
                          {"T", g.horizon},     {"seed", g.base_seed}, {"stream", g.stream_id}};
}

void write_long_csv(const std::string& file, const std::vector<LongRow>& rows) {
    std::ofstream out(file);
    if (!out) throw ConfigError("cannot open for writing: " + file);
    out << "config_id,replicate,N,statistic,value\n";
    for (const auto& r : rows)
        out << r.config_id << ',' << r.replicate << ',' << r.n << ',' << r.statistic << ','
            << format_real(r.value) << '\n';
}

void write_text(const std::string& file, const std::string& text) {
    std::ofstream out(file);
    if (!out) throw ConfigError("cannot open for writing: " + file);
    out << text;
}

void write_path_csv(const std::string& file, const std::vector<double>& path) {
    std::ofstream out(file);
    if (!out) throw ConfigError("cannot open for writing: " + file);
    out << "t,X\n";
    for (std::size_t t = 0; t < path.size(); ++t)
        out << t << ',' << format_real(path[t]) << '\n';
}

std::vector<double> read_path_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open path file: " + file);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty path file: " + file);
    std::vector<double> path;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DataError("malformed path row: " + line);
        path.push_back(std::stod(line.substr(comma + 1)));
    }
    if (path.size() < 2) throw DataError("path file too short: " + file);
    return path;
}

void write_grid_csv(const std::string& file, const WaveletCoefGrid& g) {
    std::ofstream out(file);
    if (!out) throw ConfigError("cannot open for writing: " + file);
    out << "j,k,d\n";
    for (std::size_t i = 0; i < g.octaves.size(); ++i) {
        const int j = g.j_min + static_cast<int>(i);
        const auto& d = g.octaves[i];
        for (std::size_t k = 0; k < d.size(); ++k)
            out << j << ',' << (k + 1) << ',' << format_real(d[k]) << '\n';
    }
    write_text(file + ".meta.json", grid_metadata(g).dump(2) + "\n");
}

WaveletCoefGrid read_grid_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open grid file: " + file);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty grid file: " + file);

    std::map<int, std::vector<double>> per_octave;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string js, ks, ds;
        if (!std::getline(row, js, ',') || !std::getline(row, ks, ',') ||
            !std::getline(row, ds, ','))
            throw DataError("malformed grid row: " + line);
        per_octave[std::stoi(js)].push_back(std::stod(ds));
    }
    if (per_octave.empty()) throw DataError("grid file has no coefficients: " + file);

    WaveletCoefGrid g;
    g.j_min = per_octave.begin()->first;
    int expect = g.j_min;
    for (auto& [j, d] : per_octave) {
        if (j != expect++) throw DataError("grid file skips octave " + std::to_string(j - 1));
        g.octaves.push_back(std::move(d));
    }

    std::ifstream meta(file + ".meta.json");
    if (meta) {
        nlohmann::json m = nlohmann::json::parse(meta, nullptr, false);
        if (!m.is_discarded()) {
            g.alpha = m.value("alpha", 0.0);
            g.hurst = m.value("H", 0.0);
            g.q = m.value("Q", 0);
            g.family = m.value("family", "");
            g.method = m.value("method", "");
            g.n = m.value("N", 0L);
            g.delta = m.value("delta", 0.0);
            g.horizon = m.value("T", 0.0);
            g.base_seed = m.value("seed", 0ULL);
            g.stream_id = m.value("stream", 0ULL);
        }
    }
    return g;
}

} // namespace swt
