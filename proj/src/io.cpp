#include "kinlab/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kinlab/hypocoercivity.hpp"

namespace kinlab {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void emit_series(const DiagnosticSeries& series, const std::filesystem::path& csv_path,
                 const nlohmann::ordered_json& metadata) {
    if (csv_path.has_parent_path()) std::filesystem::create_directories(csv_path.parent_path());
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + csv_path.string() + "'");

    out << "t";
    for (const auto& c : series.columns()) out << ',' << c;
    out << '\n';
    for (size_t r = 0; r < series.rows(); ++r) {
        out << format_g17(series.times()[r]);
        for (const auto& c : series.columns()) out << ',' << format_g17(series.at(r, c));
        out << '\n';
    }
    out.close();
    if (!out) throw std::runtime_error("write failed for '" + csv_path.string() + "'");

    std::filesystem::path meta = csv_path;
    meta.replace_extension(".meta.json");
    std::ofstream mout(meta, std::ios::binary);
    if (!mout) throw std::runtime_error("cannot write '" + meta.string() + "'");
    mout << metadata.dump(2) << '\n';
}

DiagnosticSeries parse_series_csv(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + csv_path.string() + "'");
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty CSV: " + csv_path.string());

    std::vector<std::string> names;
    {
        std::istringstream hs(header);
        std::string tok;
        while (std::getline(hs, tok, ',')) names.push_back(tok);
    }
    if (names.empty() || names.front() != "t")
        throw std::runtime_error("CSV must start with a 't' column: " + csv_path.string());
    names.erase(names.begin());

    DiagnosticSeries series(names);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ls, tok, ',')) vals.push_back(std::stod(tok));
        if (vals.size() != names.size() + 1)
            throw std::runtime_error("malformed CSV row in " + csv_path.string());
        series.add_row(vals.front(), std::span<const double>(vals).subspan(1));
    }
    return series;
}

nlohmann::ordered_json run_metadata(const ExperimentConfig& cfg) {
    nlohmann::ordered_json m;
    m["version"] = kinlab_version;
    m["experiment"] = cfg.experiment;
    m["config"] = {
        {"alpha", cfg.alpha},       {"A", cfg.bigA},
        {"eps", cfg.eps},           {"n", cfg.n},
        {"nv", cfg.nv},             {"vmax", cfg.vmax},
        {"beta_rel", cfg.beta_rel}, {"dt_cap", cfg.dt_cap},
        {"t_end", cfg.t_end},       {"dt", cfg.dt},
        {"amplitude", cfg.amplitude}, {"perturbation", cfg.perturbation},
        {"snap_dt", cfg.snap_dt},   {"snapshot_stride", cfg.snapshot_stride},
        {"eps_list", cfg.eps_list}, {"seed", cfg.seed},
    };
    m["grid"] = {{"n", cfg.n}, {"dx", 1.0 / cfg.n}, {"nv", cfg.nv}, {"vmax", cfg.vmax}};
    m["derived"] = {
        {"gamma", theoretical_gamma(cfg.alpha, cfg.bigA)},
        {"eps0", eps_zero(cfg.alpha, cfg.bigA)},
        {"delta", perturbation_weight(cfg.alpha, cfg.bigA, cfg.eps)},
    };
    return m;
}

std::filesystem::path resolve_out_dir(const std::string& flag_value, const ExperimentConfig& cfg) {
    if (!flag_value.empty()) return flag_value;
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    if (const char* env = std::getenv("KINLAB_OUT"); env && *env) return env;
    return std::filesystem::current_path();
}

} // namespace kinlab
