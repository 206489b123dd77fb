#pragma once

// File formats shared by the CLI: JSON matrices, CSV tables and run manifests.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "qthermo/thermometry.hpp"

namespace qthermo::io {

/// {"dim": N, "matrix": [[[re, im], ...] x N] x N}. Throws ParseError on any
/// shape mismatch or non-numeric entry.
[[nodiscard]] ComplexMatrix matrix_from_json(const nlohmann::json &doc);
[[nodiscard]] nlohmann::json matrix_to_json(const ComplexMatrix &m);
[[nodiscard]] ComplexMatrix read_matrix_file(const std::filesystem::path &path);
void write_matrix_file(const std::filesystem::path &path, const ComplexMatrix &m);

/// Shortest decimal that round-trips to the same double, '.' separator,
/// independent of the global locale.
[[nodiscard]] std::string format_double(double value);

/// CSV cell for a temperature: the number, "0(pure)" or "+inf".
[[nodiscard]] std::string temperature_cell(const TemperatureResult &t);
inline constexpr const char *kSingularCell = "singular";

/// Header-first CSV with LF line endings and no quoting (cells never contain commas).
class CsvWriter {
  public:
    CsvWriter(std::ostream &out, const std::vector<std::string> &header);
    void row(const std::vector<std::string> &cells);

  private:
    std::ostream &out_;
    std::size_t   columns_;
};

struct RunManifest {
    std::string    command;
    nlohmann::json parameters = nlohmann::json::object();
    std::string    tool_version;
    Tolerances     tolerances;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// Path of the manifest written next to an output file: "<out>.manifest.json".
[[nodiscard]] std::filesystem::path manifest_path(const std::filesystem::path &output);
void write_manifest(const std::filesystem::path &output, const RunManifest &manifest);

} // namespace qthermo::io
