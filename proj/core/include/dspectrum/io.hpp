#pragma once

#include "dspectrum/dchain.hpp"
#include "dspectrum/sir.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dspectrum {

/// Header `node,C_0,C_-1,...,C_-Δ`, then one row per node.
void write_spectrum_csv(std::ostream& out, const DSpectrum& spectrum, std::span<const std::string> labels);

struct LabeledSpectrum {
    std::vector<std::string> labels;
    DSpectrum spectrum;
};

/// Throws ParseError on malformed headers, ragged rows or non-integer ranks.
LabeledSpectrum read_spectrum_csv(std::istream& in);

/// Shortest round-trip decimal form of a multiplier: 0.1, 1, 1.5, 10.
std::string format_multiplier(double h);

/// Header `node,beta,rate_h<h>...`; rates with 6 decimal places.
void write_profile_csv(std::ostream& out, const ProfileSet& profiles, std::span<const std::string> labels);

struct ProfileTable {
    std::vector<std::string> labels;
    std::vector<double> betas;
    /// Column names without the `rate_` prefix, e.g. "h1.5".
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rates;

    /// Index of a column such as "h1.5"; throws DomainError when absent.
    std::size_t column_index(const std::string& name) const;
};

ProfileTable read_profile_csv(std::istream& in);

}  // namespace dspectrum
