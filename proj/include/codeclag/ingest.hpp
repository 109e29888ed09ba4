#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codeclag/series.hpp"

namespace codeclag {

/// Reads one numeric column of a headed CSV file. Errors: MissingColumn,
/// ParseError (location = 1-based file line), TooShort.
[[nodiscard]] TimeSeries load_series_csv(const std::filesystem::path& path, std::string_view value_column = "value",
                                         std::optional<std::size_t> period = std::nullopt);

/// Same, from in-memory CSV text.
[[nodiscard]] TimeSeries parse_series_csv(std::string_view text, std::string_view value_column = "value",
                                          std::optional<std::size_t> period = std::nullopt,
                                          std::string label = {});

struct DatasetDescriptor {
    std::string name;
    std::size_t expected_length = 0;
    std::optional<std::size_t> period;
    std::filesystem::path source_path;
};

/// One row of data/MANIFEST.csv.
struct ManifestEntry {
    std::string name;
    std::string file;
    std::size_t bytes = 0;
    std::string sha256;
    std::size_t length = 0;
    std::optional<std::size_t> period;
};

[[nodiscard]] std::vector<std::string> benchmark_names();

/// CODECLAG_DATA_DIR from the environment, else the directory baked in at
/// build time.
[[nodiscard]] std::filesystem::path default_data_dir();

[[nodiscard]] std::vector<ManifestEntry> read_manifest(const std::filesystem::path& data_dir);

[[nodiscard]] DatasetDescriptor benchmark_descriptor(std::string_view name,
                                                     const std::filesystem::path& data_dir = default_data_dir());

/// Lower-case hex SHA-256 of a byte string.
[[nodiscard]] std::string sha256_hex(std::string_view bytes);

/// Loads a bundled dataset (sunspots, lynx, passengers) after checking its
/// byte length and digest against the manifest and its length and period
/// against the descriptor. Any mismatch throws CorruptDataset.
[[nodiscard]] TimeSeries load_benchmark(std::string_view name,
                                        const std::filesystem::path& data_dir = default_data_dir());

}  // namespace codeclag
