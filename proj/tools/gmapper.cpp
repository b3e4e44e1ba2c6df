// Command-line front end: generate | run | bench | export.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gmapper/gmapper.hpp"

namespace {

using namespace gmapper;

struct Options {
    std::string dataset = "circle";
    std::string input;
    std::string label_column;
    std::optional<std::size_t> n;
    std::optional<double> radius;
    double center_x = 0.5;
    double center_y = 0.5;
    double r_inner = 0.5;
    double r_outer = 1.0;
    std::optional<double> noise_sd;
    bool even_angles = false;
    bool grid = false;

    std::string lens = "coord:0";
    std::string normalize = "minmax";

    std::string cover = "gmapper";
    double ad_threshold = 10.0;
    double g_overlap = 0.1;
    std::string search = "dfs";
    std::size_t max_intervals = 256;
    std::size_t intervals = 10;
    double gain = 0.2;
    double tau = 0.3;
    double fuzzifier = 2.0;
    double fcm_tol = 0.005;

    double eps = 0.1;
    std::size_t min_pts = 5;
    std::string metric = "euclidean";
    std::string noise = "drop";

    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";
    bool no_members = false;

    std::size_t trials = 5;
    std::string strategies = "gmapper,balanced,fcm";
    std::string in;
};

void add_dataset_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--dataset", o.dataset, "circle | two_circles | klein_bottle | csv | csv:PATH");
    cmd->add_option("--input", o.input, "CSV file for --dataset csv");
    cmd->add_option("--label-column", o.label_column, "CSV column holding categorical labels");
    cmd->add_option("--n", o.n, "number of points to sample");
    cmd->add_option("--radius", o.radius, "circle radius");
    cmd->add_option("--center-x", o.center_x, "circle center x");
    cmd->add_option("--center-y", o.center_y, "circle center y");
    cmd->add_option("--r-inner", o.r_inner, "two_circles inner radius");
    cmd->add_option("--r-outer", o.r_outer, "two_circles outer radius");
    cmd->add_option("--noise-sd", o.noise_sd, "radial noise standard deviation (default 1% of radius)");
    cmd->add_flag("--even-angles", o.even_angles, "circle: evenly spaced angles instead of random");
    cmd->add_flag("--grid", o.grid, "klein_bottle: regular (u, v) grid instead of random");
    cmd->add_option("--seed", o.seed, "RNG seed");
}

void add_pipeline_options(CLI::App* cmd, Options& o) {
    add_dataset_options(cmd, o);
    cmd->add_option("--lens", o.lens, "coord:J | xJ | coord_sum | l2_norm | pca1 | column:NAME");
    cmd->add_option("--normalize", o.normalize, "minmax | none")->check(CLI::IsMember({"minmax", "none"}));
    cmd->add_option("--cover", o.cover, "gmapper | uniform | balanced | fcm")
        ->check(CLI::IsMember({"gmapper", "uniform", "balanced", "fcm"}));
    cmd->add_option("--ad-threshold", o.ad_threshold, "G-Mapper critical value for the corrected AD statistic");
    cmd->add_option("--g-overlap", o.g_overlap, "G-Mapper overlap applied at each split");
    cmd->add_option("--search", o.search, "dfs | bfs | random")->check(CLI::IsMember({"dfs", "bfs", "random"}));
    cmd->add_option("--max-intervals", o.max_intervals, "G-Mapper cap on the number of intervals");
    cmd->add_option("--intervals", o.intervals, "interval count for uniform, balanced and fcm covers");
    cmd->add_option("--gain", o.gain, "overlap fraction for uniform and balanced covers");
    cmd->add_option("--tau", o.tau, "fcm membership threshold");
    cmd->add_option("--fuzzifier", o.fuzzifier, "fcm exponent m");
    cmd->add_option("--fcm-tol", o.fcm_tol, "fcm stopping tolerance on the largest membership change");
    cmd->add_option("--eps", o.eps, "DBSCAN radius");
    cmd->add_option("--min-pts", o.min_pts, "DBSCAN density threshold (self included)");
    cmd->add_option("--metric", o.metric, "euclidean | correlation")
        ->check(CLI::IsMember({"euclidean", "correlation"}));
    cmd->add_option("--noise", o.noise, "drop | singletons")->check(CLI::IsMember({"drop", "singletons"}));
}

data::DatasetSpec dataset_spec(const Options& o) {
    data::DatasetSpec spec;
    spec.seed = o.seed;
    if (o.dataset == "circle") {
        data::Circle c;
        if (o.n) c.n = *o.n;
        if (o.radius) c.radius = *o.radius;
        c.center_x = o.center_x;
        c.center_y = o.center_y;
        c.noise_sd = o.noise_sd;
        c.even_angles = o.even_angles;
        spec.kind = c;
    } else if (o.dataset == "two_circles") {
        data::TwoCircles c;
        if (o.n) c.n = *o.n;
        c.r_inner = o.r_inner;
        c.r_outer = o.r_outer;
        c.noise_sd = o.noise_sd;
        spec.kind = c;
    } else if (o.dataset == "klein_bottle") {
        data::KleinBottle k;
        if (o.n) k.n = *o.n;
        k.grid = o.grid;
        spec.kind = k;
    } else if (o.dataset == "csv" || o.dataset.rfind("csv:", 0) == 0) {
        data::Csv csv;
        csv.path = o.dataset == "csv" ? o.input : o.dataset.substr(4);
        if (csv.path.empty()) throw Error(ErrorCode::InvalidArgument, "--dataset csv needs --input PATH");
        if (!o.label_column.empty()) csv.label_column = o.label_column;
        spec.kind = csv;
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown dataset '" + o.dataset + "'");
    }
    return spec;
}

cover::SearchMethod search_method(const std::string& s) {
    if (s == "bfs") return cover::SearchMethod::Bfs;
    if (s == "random") return cover::SearchMethod::Randomized;
    return cover::SearchMethod::Dfs;
}

cover::Strategy strategy_named(const std::string& s) {
    if (s == "gmapper") return cover::Strategy::GMapper;
    if (s == "uniform") return cover::Strategy::Uniform;
    if (s == "balanced") return cover::Strategy::Balanced;
    if (s == "fcm") return cover::Strategy::Fcm;
    throw Error(ErrorCode::InvalidArgument, "unknown cover strategy '" + s + "'");
}

cover::CoverStrategyConfig cover_config(const Options& o, cover::Strategy strategy) {
    switch (strategy) {
        case cover::Strategy::GMapper: {
            cover::GMapperConfig g;
            g.ad_threshold = o.ad_threshold;
            g.g_overlap = o.g_overlap;
            g.search = search_method(o.search);
            g.max_intervals = o.max_intervals;
            g.seed = o.seed;
            cover::validate(g);
            return g;
        }
        case cover::Strategy::Uniform:
            cover::validate_gain(o.intervals, o.gain);
            return cover::UniformConfig{o.intervals, o.gain};
        case cover::Strategy::Balanced:
            cover::validate_gain(o.intervals, o.gain);
            return cover::BalancedConfig{o.intervals, o.gain};
        case cover::Strategy::Fcm: {
            cover::FcmConfig f;
            f.n_intervals = o.intervals;
            f.threshold_tau = o.tau;
            f.fuzzifier = o.fuzzifier;
            f.tol = o.fcm_tol;
            f.seed = o.seed;
            cover::validate(f);
            return f;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown cover strategy");
}

app::RunConfig run_config(const Options& o) {
    app::RunConfig cfg;
    cfg.dataset = dataset_spec(o);
    cfg.lens = lens::parse(o.lens);
    cfg.normalization = o.normalize == "none" ? lens::Normalization::None : lens::Normalization::MinMax;
    cfg.cover = cover_config(o, strategy_named(o.cover));
    cfg.cluster.eps = o.eps;
    cfg.cluster.min_pts = o.min_pts;
    cfg.cluster.metric = o.metric == "correlation" ? clustering::Metric::Correlation : clustering::Metric::Euclidean;
    cfg.cluster.noise = o.noise == "singletons" ? NoisePolicy::Singletons : NoisePolicy::Drop;
    cfg.output = o.out;
    cfg.format = io::parse_format(o.format);
    cfg.include_members = !o.no_members;
    cfg.seed = o.seed;
    return cfg;
}

// Splices "--key=value" arguments from a config file in front of the command
// line arguments, so explicit flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::vector<std::string> out;
    std::optional<std::string> config;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (!config || args.size() < 2) return args;
    out.push_back(args[0]);
    out.push_back(args[1]);
    for (auto& a : app::config_file_args(*config)) out.push_back(std::move(a));
    for (std::size_t i = 2; i < args.size(); ++i) out.push_back(args[i]);
    return out;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream s(text);
    std::string item;
    while (std::getline(s, item, ','))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Mapper graphs with automatically chosen covers"};
    cli.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cli.require_subcommand(1);
    cli.set_help_all_flag("--help-all", "Show help for every subcommand");

    Options o;

    auto* generate = cli.add_subcommand("generate", "Sample a synthetic dataset and write it as CSV");
    add_dataset_options(generate, o);
    generate->add_option("--out", o.out, "output CSV path")->required();

    auto* run = cli.add_subcommand("run", "Build a Mapper graph and print a summary line");
    add_pipeline_options(run, o);
    run->add_option("--out", o.out, "graph output path (omit to skip writing)");
    run->add_option("--format", o.format, "json | dot | graphml")->check(CLI::IsMember({"json", "dot", "graphml"}));
    run->add_flag("--no-members", o.no_members, "omit member lists from JSON output");

    auto* bench = cli.add_subcommand("bench", "Time cover construction per strategy");
    add_pipeline_options(bench, o);
    bench->add_option("--trials", o.trials, "timed repetitions per strategy");
    bench->add_option("--strategies", o.strategies, "comma-separated strategies to time");
    bench->add_option("--out", o.out, "write the CSV table here as well as to stdout");

    auto* exporter = cli.add_subcommand("export", "Convert a graph JSON file to another format");
    exporter->add_option("--in", o.in, "graph JSON file")->required();
    exporter->add_option("--format", o.format, "json | dot | graphml")->required();
    exporter->add_option("--out", o.out, "output path")->required();

    for (auto* cmd : {generate, run, bench}) cmd->add_option("--config", "key = value file; flags override it");

    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return app::exit_code_for(e.code());
    }
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());

    try {
        cli.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return app::kUsageError;
    }

    try {
        if (*generate) {
            app::cmd_generate(dataset_spec(o), o.out);
        } else if (*run) {
            const auto cfg = run_config(o);
            const auto result = app::cmd_run(cfg);
            std::cout << app::summary_line(result) << '\n';
        } else if (*bench) {
            if (o.trials < 1) throw Error(ErrorCode::InvalidArgument, "--trials must be >= 1");
            const auto cfg = run_config(o);
            const auto cloud = data::generate(cfg.dataset);
            std::vector<cover::Strategy> strategies;
            for (const auto& name : split_commas(o.strategies)) strategies.push_back(strategy_named(name));
            const bool explicit_count = bench->count("--intervals") > 0;
            const auto gm = std::get<cover::GMapperConfig>(cover_config(o, cover::Strategy::GMapper));
            const auto rows =
                app::cmd_bench(cloud, cfg, strategies, o.trials, explicit_count ? o.intervals : 0, gm);
            const auto table = app::bench_csv(rows, cloud, app::describe(cfg.dataset));
            std::cout << table;
            if (!o.out.empty()) app::write_text(o.out, table);
        } else if (*exporter) {
            app::cmd_export(o.in, io::parse_format(o.format), o.out);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return app::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return app::kRuntimeError;
    }
    return app::kOk;
}
