#include "codeclag/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include <openssl/evp.h>

#include "codeclag/errors.hpp"

#ifndef CODECLAG_DATA_DIR
#define CODECLAG_DATA_DIR "data"
#endif

namespace codeclag {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view field) {
    if (field.empty()) return std::nullopt;
    if (field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<std::size_t> parse_size(std::string_view field) {
    if (field.empty()) return std::nullopt;
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) return std::nullopt;
    return v;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TimeSeries parse_series_csv(std::string_view text, std::string_view value_column, std::optional<std::size_t> period,
                            std::string label) {
    const std::vector<std::string_view> lines = lines_of(text);
    if (lines.empty() || trim(lines.front()).empty()) {
        throw Error(ErrorKind::MissingColumn, "CSV has no header line");
    }
    const std::vector<std::string_view> header = split(lines.front());
    const auto col_it = std::find(header.begin(), header.end(), value_column);
    if (col_it == header.end()) {
        throw Error(ErrorKind::MissingColumn, "column '" + std::string(value_column) + "' not found in header");
    }
    const auto col = static_cast<std::size_t>(col_it - header.begin());

    std::vector<double> values;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const std::vector<std::string_view> fields = split(lines[i]);
        const std::optional<double> v = col < fields.size() ? parse_double(fields[col]) : std::nullopt;
        if (!v) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(i + 1) + ": cannot parse a finite number in column '" +
                                                   std::string(value_column) + "'",
                        i + 1);
        }
        values.push_back(*v);
    }
    if (values.size() < 2) {
        throw Error(ErrorKind::TooShort, "need at least 2 values, found " + std::to_string(values.size()));
    }
    return TimeSeries(std::move(values), period, std::move(label));
}

TimeSeries load_series_csv(const std::filesystem::path& path, std::string_view value_column,
                           std::optional<std::size_t> period) {
    return parse_series_csv(read_file(path), value_column, period, path.stem().string());
}

std::vector<std::string> benchmark_names() { return {"sunspots", "lynx", "passengers"}; }

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("CODECLAG_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return CODECLAG_DATA_DIR;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& data_dir) {
    const std::string text = read_file(data_dir / "MANIFEST.csv");
    const std::vector<std::string_view> lines = lines_of(text);
    std::vector<ManifestEntry> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split(lines[i]);
        if (f.size() != 6) {
            throw Error(ErrorKind::CorruptDataset, "manifest line " + std::to_string(i + 1) + " needs 6 fields", i + 1);
        }
        ManifestEntry e{std::string(f[0]), std::string(f[1]), parse_size(f[2]).value_or(0), std::string(f[3]),
                        parse_size(f[4]).value_or(0), parse_size(f[5])};
        out.push_back(std::move(e));
    }
    return out;
}

DatasetDescriptor benchmark_descriptor(std::string_view name, const std::filesystem::path& data_dir) {
    // lengths and periods of the published series
    if (name == "sunspots") return {"sunspots", 288, std::nullopt, data_dir / "sunspots.csv"};
    if (name == "lynx") return {"lynx", 114, std::nullopt, data_dir / "lynx.csv"};
    if (name == "passengers") return {"passengers", 144, 12, data_dir / "passengers.csv"};
    throw Error(ErrorKind::InvalidInput, "unknown benchmark '" + std::string(name) +
                                             "' (expected sunspots, lynx or passengers)");
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::InvalidInput, "SHA-256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xf]);
    }
    return out;
}

TimeSeries load_benchmark(std::string_view name, const std::filesystem::path& data_dir) {
    const DatasetDescriptor desc = benchmark_descriptor(name, data_dir);
    const std::vector<ManifestEntry> manifest = read_manifest(data_dir);
    const auto entry = std::find_if(manifest.begin(), manifest.end(),
                                    [&](const ManifestEntry& e) { return e.name == desc.name; });
    if (entry == manifest.end()) throw Error(ErrorKind::CorruptDataset, "'" + desc.name + "' missing from manifest");

    if (!std::filesystem::is_regular_file(data_dir / entry->file)) {
        throw Error(ErrorKind::CorruptDataset, "'" + entry->file + "' listed in the manifest is missing");
    }
    const std::string bytes = read_file(data_dir / entry->file);
    if (bytes.size() != entry->bytes || sha256_hex(bytes) != entry->sha256) {
        throw Error(ErrorKind::CorruptDataset, "'" + entry->file + "' does not match its manifest checksum");
    }
    TimeSeries series = parse_series_csv(bytes, "value", desc.period, desc.name);
    if (series.size() != desc.expected_length || entry->length != desc.expected_length ||
        entry->period != desc.period) {
        throw Error(ErrorKind::CorruptDataset, "'" + desc.name + "' has " + std::to_string(series.size()) +
                                                   " observations, expected " + std::to_string(desc.expected_length));
    }
    return series;
}

}  // namespace codeclag
