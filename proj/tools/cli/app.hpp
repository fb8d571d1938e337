#pragma once

#include "dspectrum/dchain.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dspectrum::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kParse = 2,
    kMismatch = 3,
    kThresholdUndefined = 4,
    kNodeSetMismatch = 5,
    kVerifyFailed = 6,
};

enum class Method { Deletion, FixedPoint, Both };

struct RunConfig {
    std::string command;
    std::string input;
    std::string out_dir = ".";
    std::uint64_t seed = 42;
    std::uint32_t runs = 1000;
    std::vector<double> h_list{0.1, 0.5, 1, 1.5, 2, 4, 6, 8, 10};
    std::size_t clusters_d = 0;
    /// 0 means "same as clusters_d".
    std::size_t clusters_sp = 0;
    Method method = Method::Both;
    /// 0 means available parallelism.
    std::size_t workers = 0;
    bool standardize = false;
    std::string rate_column = "h1.5";
    std::string spectrum_path;
    std::string profile_path;
    std::string trace_path;
};

/// Output file names inside --out-dir.
inline constexpr const char* kSpectrumFile = "spectrum.csv";
inline constexpr const char* kIngestFile = "ingest.json";
inline constexpr const char* kProfileFile = "profile.csv";
inline constexpr const char* kAnalysisFile = "analysis.json";
inline constexpr const char* kGridFile = "icell_grid.csv";

/// Parses "0.1,0.5,1"; throws std::invalid_argument unless positive and strictly increasing.
std::vector<double> parse_h_list(const std::string& text);

struct SpectrumMismatch {
    NodeId node;
    int order;
    Rank deletion;
    Rank fixed_point;
};

/// First (node, t) where the two spectra differ, scanning nodes then columns.
std::optional<SpectrumMismatch> first_mismatch(const DSpectrum& deletion, const DSpectrum& fixed_point);

int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sir(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses arguments (without the program name) and dispatches; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dspectrum::cli
