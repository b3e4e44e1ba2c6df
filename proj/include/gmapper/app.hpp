#ifndef GMAPPER_APP_HPP
#define GMAPPER_APP_HPP

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cover.hpp"
#include "data.hpp"
#include "error.hpp"
#include "graph_io.hpp"
#include "mapper.hpp"

namespace gmapper::app {

enum ExitCode : int { kOk = 0, kUsageError = 1, kDataError = 2, kRuntimeError = 3 };

inline int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::UnsupportedFormat:
            return kUsageError;
        case ErrorCode::IoError:
        case ErrorCode::ParseError:
        case ErrorCode::RaggedRows:
        case ErrorCode::SpecInvalid:
        case ErrorCode::DimensionMismatch:
        case ErrorCode::ZeroVariancePoint:
        case ErrorCode::DegenerateNormalization:
        case ErrorCode::EmptyLens:
        case ErrorCode::TooFewDistinctValues:
            return kDataError;
        default:
            return kRuntimeError;
    }
}

struct RunConfig {
    data::DatasetSpec dataset;
    lens::LensKind lens = lens::Coordinate{0};
    lens::Normalization normalization = lens::Normalization::MinMax;
    cover::CoverStrategyConfig cover = cover::GMapperConfig{};
    ClusterParams cluster;
    std::filesystem::path output;
    io::GraphFormat format = io::GraphFormat::Json;
    bool include_members = true;
    std::uint64_t seed = 0;
};

/// Pushes the run seed into every seeded component.
inline RunConfig seeded(RunConfig cfg) {
    cfg.dataset.seed = cfg.seed;
    std::visit(
        [&](auto& c) {
            if constexpr (requires { c.seed; }) c.seed = cfg.seed;
        },
        cfg.cover);
    return cfg;
}

inline std::string describe(const data::DatasetSpec& spec) {
    std::ostringstream s;
    s.precision(17);
    if (const auto* c = std::get_if<data::Circle>(&spec.kind)) {
        s << "circle(n=" << c->n << ",radius=" << c->radius << ",center=" << c->center_x << ":" << c->center_y
          << ",noise_sd=" << data::detail::noise_or_default(c->noise_sd, c->radius) << ")";
    } else if (const auto* t = std::get_if<data::TwoCircles>(&spec.kind)) {
        s << "two_circles(n=" << t->n << ",r_inner=" << t->r_inner << ",r_outer=" << t->r_outer;
        if (t->noise_sd) s << ",noise_sd=" << *t->noise_sd;
        s << ")";
    } else if (const auto* k = std::get_if<data::KleinBottle>(&spec.kind)) {
        s << "klein_bottle(n=" << k->n << (k->grid ? ",grid" : "") << ")";
    } else {
        const auto& csv = std::get<data::Csv>(spec.kind);
        s << "csv(" << csv.path.string();
        if (csv.label_column) s << ",label=" << *csv.label_column;
        s << ")";
    }
    return s.str();
}

inline std::map<std::string, std::string> provenance(const RunConfig& cfg) {
    std::map<std::string, std::string> p;
    auto num = [](double v) {
        std::ostringstream s;
        s.precision(17);
        s << v;
        return s.str();
    };
    p["dataset"] = describe(cfg.dataset);
    p["seed"] = std::to_string(cfg.seed);
    p["lens"] = lens::describe(cfg.lens);
    p["normalize"] = std::string(lens::to_string(cfg.normalization));
    p["cover"] = std::string(cover::to_string(cover::strategy_of(cfg.cover)));
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, cover::GMapperConfig>) {
                p["ad_threshold"] = num(c.ad_threshold);
                p["g_overlap"] = num(c.g_overlap);
                p["search"] = std::string(cover::to_string(c.search));
                p["max_intervals"] = std::to_string(c.max_intervals);
            } else if constexpr (std::is_same_v<T, cover::FcmConfig>) {
                p["intervals"] = std::to_string(c.n_intervals);
                p["tau"] = num(c.threshold_tau);
                p["fuzzifier"] = num(c.fuzzifier);
                p["fcm_tol"] = num(c.tol);
            } else {
                p["intervals"] = std::to_string(c.n_intervals);
                p["gain"] = num(c.gain);
            }
        },
        cfg.cover);
    p["eps"] = num(cfg.cluster.eps);
    p["min_pts"] = std::to_string(cfg.cluster.min_pts);
    p["metric"] = std::string(clustering::to_string(cfg.cluster.metric));
    p["noise"] = std::string(to_string(cfg.cluster.noise));
    return p;
}

struct RunResult {
    cover::IntervalCover cover;
    MapperGraph graph;
    GraphSummary summary;
    double cover_seconds = 0.0;
};

template <class F>
double time_seconds(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Runs the whole pipeline on an already loaded cloud. Only cover
/// construction is timed.
inline RunResult run_pipeline(const PointCloud& cloud, const RunConfig& raw) {
    const RunConfig cfg = seeded(raw);
    const LensVector lens = apply_lens(cloud, cfg.lens, cfg.normalization);
    RunResult r;
    r.cover_seconds = time_seconds([&] { r.cover = cover::build_cover(lens.values, cfg.cover); });
    r.graph = build_mapper(cloud, lens, r.cover, cfg.cluster);
    r.graph.provenance = provenance(cfg);
    r.summary = graph_summary(r.graph);
    return r;
}

inline RunResult cmd_run(const RunConfig& raw) {
    const RunConfig cfg = seeded(raw);
    const PointCloud cloud = data::generate(cfg.dataset);
    RunResult r = run_pipeline(cloud, cfg);
    if (!cfg.output.empty()) write_text(cfg.output, io::render(r.graph, cfg.format, cfg.include_members));
    return r;
}

inline std::string summary_line(const RunResult& r) {
    std::ostringstream s;
    s << "strategy=" << cover::to_string(r.cover.source) << " n_intervals=" << r.cover.size()
      << " iterations=" << r.cover.iterations << " n_nodes=" << r.summary.n_nodes << " n_edges=" << r.summary.n_edges
      << " n_components=" << r.summary.n_components << " cycle_rank=" << r.summary.cycle_rank
      << " cover_runtime_seconds=" << std::setprecision(6) << r.cover_seconds;
    return s.str();
}

inline void cmd_generate(const data::DatasetSpec& spec, const std::filesystem::path& out_path) {
    if (std::holds_alternative<data::Csv>(spec.kind))
        throw Error(ErrorCode::SpecInvalid, "generate needs a synthetic dataset, not a csv file");
    data::write_csv(data::generate(spec), out_path);
}

struct BenchRow {
    cover::Strategy strategy = cover::Strategy::GMapper;
    std::size_t n_intervals = 0;
    std::size_t trials = 0;
    double mean_seconds = 0.0;
    double sd_seconds = 0.0;
};

/// Replaces the strategy held by `base` with `target`, carrying over the
/// interval count. A count of 0 means "use the G-Mapper result".
inline cover::CoverStrategyConfig retarget(const cover::CoverStrategyConfig& base, cover::Strategy target,
                                           std::size_t n_intervals) {
    auto fcm = std::holds_alternative<cover::FcmConfig>(base) ? std::get<cover::FcmConfig>(base) : cover::FcmConfig{};
    double gain = 0.2;
    if (const auto* u = std::get_if<cover::UniformConfig>(&base)) gain = u->gain;
    if (const auto* b = std::get_if<cover::BalancedConfig>(&base)) gain = b->gain;
    switch (target) {
        case cover::Strategy::GMapper:
            return std::holds_alternative<cover::GMapperConfig>(base) ? base : cover::GMapperConfig{};
        case cover::Strategy::Uniform: return cover::UniformConfig{n_intervals, gain};
        case cover::Strategy::Balanced: return cover::BalancedConfig{n_intervals, gain};
        case cover::Strategy::Fcm: fcm.n_intervals = n_intervals; return fcm;
    }
    return base;
}

/// Times cover construction for each strategy over `trials` runs. Strategies
/// other than G-Mapper use `n_intervals`, or the G-Mapper interval count when
/// it is 0.
inline std::vector<BenchRow> cmd_bench(const PointCloud& cloud, const RunConfig& raw,
                                       const std::vector<cover::Strategy>& strategies, std::size_t trials,
                                       std::size_t n_intervals = 0, const cover::GMapperConfig& gmapper = {}) {
    if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
    const RunConfig cfg = seeded(raw);
    const LensVector lens = apply_lens(cloud, cfg.lens, cfg.normalization);

    cover::GMapperConfig gm = gmapper;
    if (const auto* g = std::get_if<cover::GMapperConfig>(&cfg.cover)) gm = *g;
    gm.seed = cfg.seed;
    if (n_intervals == 0) n_intervals = cover::gmapper_cover(lens.values, gm).size();

    std::vector<BenchRow> rows;
    for (const auto strategy : strategies) {
        const auto strat_cfg = strategy == cover::Strategy::GMapper ? cover::CoverStrategyConfig{gm}
                                                                    : retarget(cfg.cover, strategy, n_intervals);
        std::vector<double> times;
        std::size_t produced = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            cover::IntervalCover result;
            times.push_back(time_seconds([&] { result = cover::build_cover(lens.values, strat_cfg); }));
            produced = result.size();
        }
        BenchRow row;
        row.strategy = strategy;
        row.n_intervals = produced;
        row.trials = trials;
        double sum = 0.0;
        for (double t : times) sum += t;
        row.mean_seconds = sum / static_cast<double>(trials);
        double ss = 0.0;
        for (double t : times) ss += (t - row.mean_seconds) * (t - row.mean_seconds);
        row.sd_seconds = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1)) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows, const PointCloud& cloud, const std::string& dataset) {
    std::ostringstream s;
    s << "dataset,size,dim,strategy,n_intervals,trials,mean_seconds,sd_seconds\n";
    for (const auto& r : rows) {
        s << '"' << dataset << "\"," << cloud.size() << ',' << cloud.dim() << ',' << cover::to_string(r.strategy) << ','
          << r.n_intervals << ',' << r.trials << ',' << std::setprecision(9) << r.mean_seconds << ',' << r.sd_seconds
          << '\n';
    }
    return s.str();
}

inline void cmd_export(const std::filesystem::path& in_path, io::GraphFormat format,
                       const std::filesystem::path& out_path) {
    const MapperGraph g = io::graph_from_json(read_text(in_path));
    write_text(out_path, io::render(g, format));
}

/// Reads a key = value config file into "--key=value" arguments. Blank lines
/// and lines starting with '#' are ignored; "key = true" becomes a bare flag.
inline std::vector<std::string> config_file_args(const std::filesystem::path& path) {
    std::istringstream in(read_text(path));
    std::vector<std::string> args;
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        const auto first = s.find_first_not_of(" \t\r");
        if (first == std::string::npos) return std::string();
        const auto last = s.find_last_not_of(" \t\r");
        return s.substr(first, last - first + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ParseError,
                        path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty())
            throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": empty key");
        if (value == "true")
            args.push_back("--" + key);
        else if (value != "false")
            args.push_back("--" + key + "=" + value);
    }
    return args;
}

}  // namespace gmapper::app

#endif  // GMAPPER_APP_HPP
