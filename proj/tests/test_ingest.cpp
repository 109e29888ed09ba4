#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "codeclag/ingest.hpp"
#include "helpers.hpp"

using namespace codeclag;
using testing_helpers::kind_of;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST(ParseCsv, SimpleColumn) {
    const auto s = parse_series_csv("value\n1\n2\n3");
    EXPECT_EQ(std::vector<double>(s.values().begin(), s.values().end()), (std::vector<double>{1, 2, 3}));
    const auto q = parse_series_csv("\"t\",\"value\"\r\n1,\"4.5\"\r\n\r\n2,5\r\n");
    EXPECT_EQ(std::vector<double>(q.values().begin(), q.values().end()), (std::vector<double>{4.5, 5}));
}

TEST(ParseCsv, ParseErrorCarriesLine) {
    try {
        (void)parse_series_csv("t,value\n1,10\n2,x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_EQ(e.location(), 3u);
    }
}

TEST(ParseCsv, Errors) {
    EXPECT_EQ(kind_of([] { (void)parse_series_csv("t,y\n1,2\n2,3"); }), ErrorKind::MissingColumn);
    EXPECT_EQ(kind_of([] { (void)parse_series_csv("value\n1"); }), ErrorKind::TooShort);
    EXPECT_EQ(kind_of([] { (void)parse_series_csv("t,value\n1\n"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { (void)parse_series_csv("value\n1\nnan\n"); }), ErrorKind::ParseError);
}

TEST(Benchmarks, LengthsAndPeriods) {
    EXPECT_EQ(load_benchmark("sunspots").size(), 288u);
    EXPECT_EQ(load_benchmark("lynx").size(), 114u);
    const auto p = load_benchmark("passengers");
    EXPECT_EQ(p.size(), 144u);
    EXPECT_EQ(p.period(), 12u);
    EXPECT_EQ(p[0], 112.0);
    EXPECT_EQ(benchmark_names(), (std::vector<std::string>{"sunspots", "lynx", "passengers"}));
}

TEST(Benchmarks, RepeatedLoadsIdentical) {
    const auto a = load_benchmark("lynx");
    const auto b = load_benchmark("lynx");
    EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
}

TEST(Benchmarks, ManifestMatchesFiles) {
    const auto dir = default_data_dir();
    for (const auto& entry : read_manifest(dir)) {
        const std::string bytes = slurp(dir / entry.file);
        EXPECT_EQ(bytes.size(), entry.bytes);
        EXPECT_EQ(sha256_hex(bytes), entry.sha256);
    }
}

TEST(Benchmarks, CorruptionIsDetected) {
    const auto dir = std::filesystem::temp_directory_path() / "codeclag_ingest_test";
    std::filesystem::create_directories(dir);
    for (const auto& f : {"MANIFEST.csv", "lynx.csv"})
        std::filesystem::copy_file(default_data_dir() / f, dir / f, std::filesystem::copy_options::overwrite_existing);
    EXPECT_EQ(load_benchmark("lynx", dir).size(), 114u);
    {
        std::ofstream f(dir / "lynx.csv", std::ios::app);
        f << "1935,1\n";
    }
    EXPECT_EQ(kind_of([&] { (void)load_benchmark("lynx", dir); }), ErrorKind::CorruptDataset);
    EXPECT_EQ(kind_of([&] { (void)load_benchmark("sunspots", dir); }), ErrorKind::CorruptDataset);
    EXPECT_EQ(kind_of([] { (void)load_benchmark("airline"); }), ErrorKind::InvalidInput);
    std::filesystem::remove_all(dir);
}

TEST(Sha256, KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
