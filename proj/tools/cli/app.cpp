#include "cli/app.hpp"

#include "dspectrum/blocks.hpp"
#include "dspectrum/dynamics.hpp"
#include "dspectrum/errors.hpp"
#include "dspectrum/graph.hpp"
#include "dspectrum/io.hpp"
#include "dspectrum/sir.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dspectrum::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> parse_h_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        double h = 0.0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), h);
        if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty()) {
            throw std::invalid_argument("invalid multiplier '" + item + "'");
        }
        if (!(h > 0.0)) {
            throw std::invalid_argument("multipliers must be positive");
        }
        if (!out.empty() && h <= out.back()) {
            throw std::invalid_argument("multipliers must be strictly increasing");
        }
        out.push_back(h);
    }
    if (out.empty()) {
        throw std::invalid_argument("empty multiplier list");
    }
    return out;
}

std::optional<SpectrumMismatch> first_mismatch(const DSpectrum& deletion, const DSpectrum& fixed_point) {
    if (deletion.node_count() != fixed_point.node_count() || deletion.delta() != fixed_point.delta()) {
        return SpectrumMismatch{0, 0, 0, 0};
    }
    for (NodeId v = 0; v < deletion.node_count(); ++v) {
        for (std::size_t c = 0; c < deletion.column_count(); ++c) {
            if (deletion.at(v, c) != fixed_point.at(v, c)) {
                return SpectrumMismatch{v, DSpectrum::order_of_column(c), deletion.at(v, c), fixed_point.at(v, c)};
            }
        }
    }
    return std::nullopt;
}

namespace {

/// Raised inside a command to leave with a specific exit code.
struct Exit {
    int code;
    std::string message;
};

fs::path output_path(const RunConfig& config, const char* name) {
    return fs::path(config.out_dir) / name;
}

fs::path input_or_default(const std::string& explicit_path, const RunConfig& config, const char* name) {
    return explicit_path.empty() ? output_path(config, name) : fs::path(explicit_path);
}

void ensure_out_dir(const RunConfig& config) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) {
        throw Exit{kUsage, "cannot create output directory " + config.out_dir + ": " + ec.message()};
    }
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Exit{kUsage, "cannot write " + path.string()};
    }
    return out;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Exit{kUsage, "cannot open " + path.string()};
    }
    return in;
}

BuildResult load_graph(const RunConfig& config) {
    if (config.input.empty()) {
        throw Exit{kUsage, "--input is required"};
    }
    auto in = open_input(config.input);
    try {
        return load_edge_list(in);
    } catch (const ParseError& e) {
        throw Exit{kParse, config.input + ": " + e.what()};
    }
}

template <typename Reader>
auto read_table(const fs::path& path, Reader reader) {
    auto in = open_input(path);
    try {
        return reader(in);
    } catch (const ParseError& e) {
        throw Exit{kParse, path.string() + ": " + e.what()};
    }
}

std::string fixed6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

json optional_number(const std::optional<double>& x) {
    return x ? json(*x) : json(nullptr);
}

json partition_json(const BlockPartition& p) {
    return {{"kind", to_string(p.kind)},
            {"block_count", p.block_count},
            {"sizes", p.sizes()},
            {"assignment", p.assignment}};
}

json clustering_json(const Clustering& c) {
    json j = partition_json(c.partition);
    j["requested"] = c.requested_k;
    j["iterations"] = c.iterations;
    j["initial_wcss"] = c.initial_wcss;
    j["final_wcss"] = c.final_wcss;
    return j;
}

void warn_if_reduced(const Clustering& c, const char* what, std::ostream& err) {
    if (c.reduced()) {
        err << "warning: " << what << " cluster count reduced from " << c.requested_k << " to "
            << c.partition.block_count << " (too few distinct rows)\n";
    }
}

int run_spectrum(const RunConfig& config, std::ostream& out, std::ostream&) {
    auto [graph, report] = load_graph(config);
    ensure_out_dir(config);

    std::optional<DSpectrum> deletion;
    std::optional<DSpectrum> fixed_point;
    if (config.method != Method::FixedPoint) {
        deletion = full_spectrum(graph);
    }
    if (config.method != Method::Deletion) {
        std::ofstream trace_file;
        TraceSink trace;
        if (!config.trace_path.empty()) {
            trace_file = open_output(config.trace_path);
            trace = jsonl_trace(trace_file);
        }
        fixed_point = compute_spectrum_chained(graph, trace);
    }
    if (deletion && fixed_point) {
        if (auto m = first_mismatch(*deletion, *fixed_point)) {
            throw Exit{kMismatch, "algorithm mismatch at node " + graph.label(m->node) + ", t=" +
                                      std::to_string(m->order) + ": deletion " + std::to_string(m->deletion) +
                                      " vs fixed point " + std::to_string(m->fixed_point)};
        }
    }
    const DSpectrum& spectrum = deletion ? *deletion : *fixed_point;

    auto csv = open_output(output_path(config, kSpectrumFile));
    write_spectrum_csv(csv, spectrum, graph.labels());

    json ingest = {{"nodes", graph.node_count()},
                   {"edges_kept", report.edges_kept},
                   {"self_loops_dropped", report.self_loops_dropped},
                   {"duplicate_edges_dropped", report.duplicate_edges_dropped},
                   {"isolated_nodes", report.isolated_nodes},
                   {"max_degree", spectrum.delta()}};
    open_output(output_path(config, kIngestFile)) << ingest.dump(2) << '\n';

    out << "nodes=" << graph.node_count() << " edges=" << report.edges_kept << " max_degree=" << spectrum.delta()
        << " self_loops_dropped=" << report.self_loops_dropped
        << " duplicates_dropped=" << report.duplicate_edges_dropped << '\n';
    return kOk;
}

int run_sir(const RunConfig& config, std::ostream& out, std::ostream& err) {
    auto [graph, report] = load_graph(config);
    ensure_out_dir(config);
    SirParams params;
    params.runs_per_source = config.runs;
    params.seed = config.seed;
    params.workers = config.workers;

    ProfileSet profiles;
    try {
        profiles = profile_all_nodes(graph, config.h_list, params);
    } catch (const DomainError& e) {
        throw Exit{kThresholdUndefined, e.what()};
    }
    err << "beta=" << format_multiplier(profiles.beta) << '\n';
    for (std::size_t i : profiles.clamped) {
        err << "warning: h=" << format_multiplier(profiles.multipliers[i]) << " gives probability "
            << format_multiplier(profiles.multipliers[i] * profiles.beta) << " > 1; clamped to 1\n";
    }
    auto csv = open_output(output_path(config, kProfileFile));
    write_profile_csv(csv, profiles, graph.labels());
    out << "profiled " << graph.node_count() << " nodes x " << profiles.multipliers.size() << " probabilities, "
        << config.runs << " runs each\n";
    return kOk;
}

int run_analyze(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (config.clusters_d == 0) {
        throw Exit{kUsage, "--clusters-d is required and must be positive"};
    }
    auto spectrum = read_table(input_or_default(config.spectrum_path, config, kSpectrumFile),
                               [](std::istream& in) { return read_spectrum_csv(in); });
    auto table = read_table(input_or_default(config.profile_path, config, kProfileFile),
                            [](std::istream& in) { return read_profile_csv(in); });

    const std::size_t n = spectrum.labels.size();
    std::map<std::string, std::size_t> profile_row;
    for (std::size_t i = 0; i < table.labels.size(); ++i) {
        profile_row.emplace(table.labels[i], i);
    }
    if (profile_row.size() != table.labels.size() || table.labels.size() != n ||
        std::set<std::string>(spectrum.labels.begin(), spectrum.labels.end()).size() != n) {
        throw Exit{kNodeSetMismatch, "spectrum and profile cover different node sets"};
    }
    for (const auto& label : spectrum.labels) {
        if (!profile_row.contains(label)) {
            throw Exit{kNodeSetMismatch, "node " + label + " missing from profile"};
        }
    }
    if (n == 0) {
        throw Exit{kUsage, "nothing to analyze: empty node set"};
    }

    std::size_t rate_col = 0;
    try {
        rate_col = table.column_index(config.rate_column);
    } catch (const DomainError& e) {
        throw Exit{kUsage, e.what()};
    }

    std::vector<double> rates(n);
    std::vector<InfectionProfile> profiles(n);
    for (NodeId v = 0; v < n; ++v) {
        const std::size_t row = profile_row.at(spectrum.labels[v]);
        rates[v] = table.rates[row][rate_col];
        profiles[v] = InfectionProfile{v, table.rates[row], table.betas[row]};
    }

    const auto& spec = spectrum.spectrum;
    const BlockPartition cb = cblocks(spec);
    const Clustering db = cluster_spectra(spec, config.clusters_d, config.seed, config.standardize);
    warn_if_reduced(db, "D-block", err);
    const std::size_t k_sp = config.clusters_sp != 0 ? config.clusters_sp : config.clusters_d;
    const Clustering sp = cluster_spreading_power(profiles, k_sp, config.seed);
    warn_if_reduced(sp, "spreading-power", err);

    const ICellGrid grid = icell_grid(cb, db.partition, rates, config.rate_column);
    const DispersionReport report = dispersion_report(grid, cb, rates);
    const auto counts = contingency(sp.partition, db.partition);

    std::vector<Rank> core_of_block(cb.block_count, 0);
    for (NodeId v = 0; v < n; ++v) {
        core_of_block[cb.assignment[v]] = spec.at(v, 0);
    }

    json cells = json::array();
    for (std::size_t r = 0; r < grid.rows; ++r) {
        for (std::size_t c = 0; c < grid.cols; ++c) {
            const ICell& cell = grid.at(r, c);
            cells.push_back({{"row", r},
                             {"col", c},
                             {"size", cell.members.size()},
                             {"mean", optional_number(cell.mean)},
                             {"dispersion", optional_number(cell.dispersion)}});
        }
    }
    json blocks = json::array();
    double global_sum = 0.0;
    std::size_t global_count = 0;
    double cell_sum = 0.0;
    std::size_t cell_count = 0;
    for (const auto& b : report.blocks) {
        json per_cell = json::array();
        for (std::size_t i = 0; i < b.cell_columns.size(); ++i) {
            per_cell.push_back({{"col", b.cell_columns[i]}, {"dispersion", optional_number(b.cell_dispersions[i])}});
            if (b.cell_dispersions[i]) {
                cell_sum += *b.cell_dispersions[i];
                ++cell_count;
            }
        }
        if (b.global) {
            global_sum += *b.global;
            ++global_count;
        }
        blocks.push_back({{"cblock", b.cblock},
                          {"core", core_of_block[b.cblock]},
                          {"size", b.size},
                          {"global", optional_number(b.global)},
                          {"cells", per_cell},
                          {"mean_cell_dispersion", optional_number(b.mean_cell_dispersion)}});
    }

    json analysis = {
        {"labels", spectrum.labels},
        {"rate_column", config.rate_column},
        {"cblocks", partition_json(cb)},
        {"dblocks", clustering_json(db)},
        {"spreading_power_blocks", clustering_json(sp)},
        {"icell_grid", {{"rows", grid.rows}, {"cols", grid.cols}, {"cells", cells}}},
        {"dispersion_report",
         {{"cblocks", blocks},
          {"multi_cell_blocks", report.multi_cell_blocks},
          {"refined_blocks", report.refined_blocks},
          {"refined_fraction", optional_number(report.refined_fraction())}}},
        {"contingency", {{"rows", "spreading-power"}, {"cols", "D-block"}, {"counts", counts}}},
    };
    analysis["cblocks"]["cores"] = core_of_block;

    ensure_out_dir(config);
    open_output(output_path(config, kAnalysisFile)) << analysis.dump(2) << '\n';

    auto grid_csv = open_output(output_path(config, kGridFile));
    grid_csv << "cblock,core";
    for (std::size_t c = 0; c < grid.cols; ++c) {
        grid_csv << ",d" << c;
    }
    grid_csv << '\n';
    for (std::size_t r = 0; r < grid.rows; ++r) {
        grid_csv << r << ',' << core_of_block[r];
        for (std::size_t c = 0; c < grid.cols; ++c) {
            const auto& mean = grid.at(r, c).mean;
            grid_csv << ',' << (mean ? fixed6(*mean) : "");
        }
        grid_csv << '\n';
    }

    auto mean_or_na = [](double sum, std::size_t count) {
        return count ? fixed6(sum / static_cast<double>(count)) : std::string("n/a");
    };
    out << "C-blocks=" << cb.block_count << " D-blocks=" << db.partition.block_count
        << " mean C-block dispersion=" << mean_or_na(global_sum, global_count)
        << " mean I-cell dispersion=" << mean_or_na(cell_sum, cell_count) << " refined C-blocks="
        << report.refined_blocks << '/' << report.multi_cell_blocks << '\n';
    return kOk;
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream&) {
    auto [graph, report] = load_graph(config);
    auto spectrum = read_table(input_or_default(config.spectrum_path, config, kSpectrumFile),
                               [](std::istream& in) { return read_spectrum_csv(in); });
    const std::size_t n = graph.node_count();
    if (spectrum.labels.size() != n) {
        throw Exit{kNodeSetMismatch, "spectrum and graph cover different node sets"};
    }
    std::vector<NodeId> graph_id(n);
    std::vector<char> seen(n, 0);
    for (std::size_t row = 0; row < n; ++row) {
        auto id = graph.find(spectrum.labels[row]);
        if (!id || seen[*id]) {
            throw Exit{kNodeSetMismatch, "spectrum and graph cover different node sets"};
        }
        seen[*id] = 1;
        graph_id[row] = *id;
    }
    const std::size_t delta = max_degree(graph);
    if (spectrum.spectrum.delta() != delta) {
        throw Exit{kVerifyFailed, "spectrum has " + std::to_string(spectrum.spectrum.column_count()) +
                                      " columns, expected " + std::to_string(delta + 1)};
    }

    bool all_valid = true;
    for (std::size_t c = 0; c <= delta; ++c) {
        ChainRanks ranks{DSpectrum::order_of_column(c), std::vector<Rank>(n)};
        for (std::size_t row = 0; row < n; ++row) {
            ranks.ranks[graph_id[row]] = spectrum.spectrum.at(static_cast<NodeId>(row), c);
        }
        const ChainVerdict verdict = verify_chain(graph, chain_from_ranks(ranks));
        out << "C_" << ranks.order << ": ";
        if (verdict.valid()) {
            out << "valid\n";
            continue;
        }
        all_valid = false;
        const auto& v = *verdict.violation;
        out << "INVALID (" << to_string(v.kind) << ", level " << v.level;
        if (v.node) {
            out << ", node " << graph.label(*v.node);
        }
        out << ")\n";
    }
    return all_valid ? kOk : kVerifyFailed;
}

template <typename Fn>
int guarded(Fn fn, const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        return fn(config, out, err);
    } catch (const Exit& e) {
        err << "dspectrum " << config.command << ": " << e.message << '\n';
        return e.code;
    } catch (const std::exception& e) {
        err << "dspectrum " << config.command << ": " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace

int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(run_spectrum, config, out, err);
}

int cmd_sir(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(run_sir, config, out, err);
}

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(run_analyze, config, out, err);
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(run_verify, config, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"D-spectra of undirected networks and SIR spreading analysis", "dspectrum"};
    app.require_subcommand(1);

    RunConfig config;
    std::string h_list = "0.1,0.5,1,1.5,2,4,6,8,10";
    std::string method = "both";

    auto add_input = [&](CLI::App* cmd) { cmd->add_option("--input", config.input, "Edge-list file")->required(); };
    auto add_out_dir = [&](CLI::App* cmd) {
        cmd->add_option("--out-dir", config.out_dir, "Directory for pipeline files")->capture_default_str();
    };
    auto add_spectrum = [&](CLI::App* cmd) {
        cmd->add_option("--spectrum", config.spectrum_path, "Spectrum CSV (default <out-dir>/spectrum.csv)");
    };

    auto* spectrum = app.add_subcommand("spectrum", "Compute per-node D-spectra");
    add_input(spectrum);
    add_out_dir(spectrum);
    spectrum->add_option("--method", method, "deletion | fixedpoint | both")
        ->check(CLI::IsMember({"deletion", "fixedpoint", "both"}))
        ->capture_default_str();
    spectrum->add_option("--trace", config.trace_path, "Write the fixed-point trajectory as JSON lines");

    auto* sir = app.add_subcommand("sir", "Profile per-node SIR infection rates");
    add_input(sir);
    add_out_dir(sir);
    sir->add_option("--seed", config.seed)->capture_default_str();
    sir->add_option("--runs", config.runs, "Simulations per source and probability")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sir->add_option("--h-list", h_list, "Comma-separated threshold multipliers")->capture_default_str();
    sir->add_option("--workers", config.workers, "Worker threads (0 = available parallelism)");

    auto* analyze = app.add_subcommand("analyze", "Block, dispersion and contingency analysis");
    add_out_dir(analyze);
    add_spectrum(analyze);
    analyze->add_option("--profile", config.profile_path, "Profile CSV (default <out-dir>/profile.csv)");
    analyze->add_option("--clusters-d", config.clusters_d, "Number of D-blocks")->required()->check(CLI::PositiveNumber);
    analyze->add_option("--clusters-sp", config.clusters_sp, "Number of spreading-power blocks (default: --clusters-d)")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--seed", config.seed)->capture_default_str();
    analyze->add_flag("--standardize", config.standardize, "Z-score spectrum columns before clustering");
    analyze->add_option("--rate-column", config.rate_column, "Profile column for the I-cell grid")
        ->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Check every spectrum column against the D-chain definition");
    add_input(verify);
    add_out_dir(verify);
    add_spectrum(verify);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        config.h_list = parse_h_list(h_list);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    } catch (const std::invalid_argument& e) {
        err << "dspectrum: --h-list: " << e.what() << '\n';
        return kUsage;
    }
    config.method = method == "deletion" ? Method::Deletion : method == "fixedpoint" ? Method::FixedPoint : Method::Both;

    if (spectrum->parsed()) {
        config.command = "spectrum";
        return cmd_spectrum(config, out, err);
    }
    if (sir->parsed()) {
        config.command = "sir";
        return cmd_sir(config, out, err);
    }
    if (analyze->parsed()) {
        config.command = "analyze";
        return cmd_analyze(config, out, err);
    }
    config.command = "verify";
    return cmd_verify(config, out, err);
}

}  // namespace dspectrum::cli
