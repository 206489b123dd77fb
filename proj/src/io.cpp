#include "qthermo/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace qthermo::io {

namespace {

[[noreturn]] void parse_fail(const std::string &what) { throw Error(ErrorCode::ParseError, what); }

} // namespace

ComplexMatrix matrix_from_json(const nlohmann::json &doc) {
    if (!doc.is_object()) parse_fail("matrix document must be a JSON object");
    if (!doc.contains("dim") || !doc["dim"].is_number_integer()) parse_fail("missing integer field 'dim'");
    if (!doc.contains("matrix") || !doc["matrix"].is_array()) parse_fail("missing array field 'matrix'");
    const auto dim = doc["dim"].get<long long>();
    if (dim < 1) parse_fail("'dim' must be positive");
    const auto &rows = doc["matrix"];
    if (static_cast<long long>(rows.size()) != dim) {
        parse_fail("'matrix' has " + std::to_string(rows.size()) + " rows, dim is " + std::to_string(dim));
    }
    ComplexMatrix m(dim, dim);
    for (long long i = 0; i < dim; ++i) {
        const auto &row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<long long>(row.size()) != dim) {
            parse_fail("row " + std::to_string(i) + " must have " + std::to_string(dim) + " entries");
        }
        for (long long j = 0; j < dim; ++j) {
            const auto &entry = row[static_cast<std::size_t>(j)];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
                parse_fail("entry (" + std::to_string(i) + "," + std::to_string(j) + ") must be [re, im]");
            }
            m(i, j) = Complex(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return m;
}

nlohmann::json matrix_to_json(const ComplexMatrix &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return {{"dim", m.rows()}, {"matrix", std::move(rows)}};
}

ComplexMatrix read_matrix_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) parse_fail("cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception &e) {
        parse_fail(path.string() + ": " + e.what());
    }
    return matrix_from_json(doc);
}

void write_matrix_file(const std::filesystem::path &path, const ComplexMatrix &m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << matrix_to_json(m).dump(2) << '\n';
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "+inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string temperature_cell(const TemperatureResult &t) {
    switch (t.kind) {
    case TemperatureKind::zero_pure_limit: return "0(pure)";
    case TemperatureKind::infinite_mixed_limit: return "+inf";
    case TemperatureKind::finite: break;
    }
    return format_double(t.value);
}

CsvWriter::CsvWriter(std::ostream &out, const std::vector<std::string> &header) : out_(out), columns_(header.size()) {
    row(header);
}

void CsvWriter::row(const std::vector<std::string> &cells) {
    if (cells.size() != columns_) throw Error(ErrorCode::InvalidArgument, "CSV row width differs from header");
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k) out_ << ',';
        out_ << cells[k];
    }
    out_ << '\n';
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json tol = nlohmann::json::object();
    for (const auto &[name, value] : tolerances.as_map()) tol[name] = value;
    return {{"command", command}, {"parameters", parameters}, {"tool_version", tool_version}, {"tolerances", tol}};
}

std::filesystem::path manifest_path(const std::filesystem::path &output) {
    return std::filesystem::path(output.string() + ".manifest.json");
}

void write_manifest(const std::filesystem::path &output, const RunManifest &manifest) {
    std::ofstream out(manifest_path(output), std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write manifest for " + output.string());
    out << manifest.to_json().dump(2) << '\n';
}

} // namespace qthermo::io
