#include "dspectrum/io.hpp"

#include "dspectrum/errors.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace dspectrum {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) {
        return false;
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return true;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line_no) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ParseError(line_no, "invalid number '" + text + "'");
    }
    return value;
}

}  // namespace

void write_spectrum_csv(std::ostream& out, const DSpectrum& spectrum, std::span<const std::string> labels) {
    if (labels.size() != spectrum.node_count()) {
        throw DomainError("label count does not match spectrum rows");
    }
    out << "node";
    for (std::size_t c = 0; c < spectrum.column_count(); ++c) {
        out << ",C_" << DSpectrum::order_of_column(c);
    }
    out << '\n';
    for (NodeId v = 0; v < spectrum.node_count(); ++v) {
        out << labels[v];
        for (Rank r : spectrum.row(v)) {
            out << ',' << r;
        }
        out << '\n';
    }
}

LabeledSpectrum read_spectrum_csv(std::istream& in) {
    std::string line;
    if (!next_line(in, line)) {
        throw ParseError(1, "missing spectrum header");
    }
    auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "node") {
        throw ParseError(1, "spectrum header must start with node,C_0");
    }
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c] != "C_" + std::to_string(DSpectrum::order_of_column(c - 1))) {
            throw ParseError(1, "unexpected spectrum column '" + header[c] + "'");
        }
    }
    const std::size_t cols = header.size() - 1;
    std::vector<std::string> labels;
    std::vector<Rank> values;
    std::size_t line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto fields = split_csv(line);
        if (fields.size() != cols + 1) {
            throw ParseError(line_no, "expected " + std::to_string(cols + 1) + " fields");
        }
        labels.push_back(fields[0]);
        for (std::size_t c = 1; c <= cols; ++c) {
            values.push_back(parse_number<Rank>(fields[c], line_no));
        }
    }
    LabeledSpectrum out{std::move(labels), DSpectrum(values.size() / cols, cols - 1)};
    for (NodeId v = 0; v < out.spectrum.node_count(); ++v) {
        for (std::size_t c = 0; c < cols; ++c) {
            out.spectrum.at(v, c) = values[v * cols + c];
        }
    }
    return out;
}

std::string format_multiplier(double h) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, h);
    return std::string(buf, ptr);
}

void write_profile_csv(std::ostream& out, const ProfileSet& profiles, std::span<const std::string> labels) {
    if (labels.size() != profiles.profiles.size()) {
        throw DomainError("label count does not match profile rows");
    }
    out << "node,beta";
    for (double h : profiles.multipliers) {
        out << ",rate_h" << format_multiplier(h);
    }
    out << '\n';
    const std::string beta = format_multiplier(profiles.beta);
    char buf[32];
    for (const auto& p : profiles.profiles) {
        out << labels[p.node] << ',' << beta;
        for (double r : p.rates) {
            std::snprintf(buf, sizeof buf, "%.6f", r);
            out << ',' << buf;
        }
        out << '\n';
    }
}

std::size_t ProfileTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) {
            return i;
        }
    }
    throw DomainError("profile has no column rate_" + name);
}

ProfileTable read_profile_csv(std::istream& in) {
    std::string line;
    if (!next_line(in, line)) {
        throw ParseError(1, "missing profile header");
    }
    auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "node" || header[1] != "beta") {
        throw ParseError(1, "profile header must start with node,beta");
    }
    ProfileTable out;
    for (std::size_t c = 2; c < header.size(); ++c) {
        if (header[c].rfind("rate_", 0) != 0) {
            throw ParseError(1, "unexpected profile column '" + header[c] + "'");
        }
        out.columns.push_back(header[c].substr(5));
    }
    std::size_t line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto fields = split_csv(line);
        if (fields.size() != header.size()) {
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields");
        }
        out.labels.push_back(fields[0]);
        out.betas.push_back(parse_number<double>(fields[1], line_no));
        std::vector<double> row;
        for (std::size_t c = 2; c < fields.size(); ++c) {
            row.push_back(parse_number<double>(fields[c], line_no));
        }
        out.rates.push_back(std::move(row));
    }
    return out;
}

}  // namespace dspectrum
