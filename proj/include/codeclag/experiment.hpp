#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codeclag/lagselect.hpp"
#include "codeclag/simulate.hpp"

namespace codeclag {

enum class Preprocessing { raw, differenced, decomposed };
enum class Measure { pearson, spearman, codec };
enum class Estimator { p1, p2, p3 };
/// How a missing p-hat enters the RMSE: as 0, or left out of the cell.
enum class AbsentPolicy { zero, skip };
enum class ReportFormat { csv, json };

[[nodiscard]] std::string_view to_string(Preprocessing p) noexcept;
[[nodiscard]] std::string_view to_string(Measure m) noexcept;
[[nodiscard]] std::string_view to_string(Estimator e) noexcept;
[[nodiscard]] std::string_view to_string(AbsentPolicy a) noexcept;
[[nodiscard]] Preprocessing parse_preprocessing(std::string_view s);
[[nodiscard]] Measure parse_measure(std::string_view s);
[[nodiscard]] AbsentPolicy parse_absent_policy(std::string_view s);

inline constexpr std::array<std::size_t, 5> kStudySizes = {100, 500, 1000, 2000, 5000};
inline constexpr std::size_t kDeskReplications = 50;
inline constexpr std::size_t kFullReplications = 200;
/// A (model, preprocessing, size) group is flagged above this failure share.
inline constexpr double kFailureFlagShare = 0.10;

struct Scenario {
    ModelSpec spec;
    Preprocessing preprocessing = Preprocessing::raw;
    std::vector<std::size_t> sizes = {100, 500, 1000, 2000};
    std::size_t replications = kDeskReplications;
    std::vector<Measure> measures = {Measure::pearson, Measure::spearman, Measure::codec};
    std::uint64_t base_seed = 1;
    SimulationOptions simulation;
    double alpha = kDefaultAlpha;
    AbsentPolicy absent = AbsentPolicy::zero;
};

/// Throws InvalidInput when the scenario cannot run (no sizes, a decomposed
/// scenario for a model without a period, ...).
void validate(const Scenario& scenario);

/// Ordered lexicographically on (model, preprocessing, size, measure, estimator).
struct CellKey {
    std::string model;
    std::string preprocessing;
    std::size_t size = 0;
    std::string measure;
    std::string estimator;

    auto operator<=>(const CellKey&) const = default;
};

struct RmseCell {
    double rmse = 0.0;
    std::size_t n_reps = 0;
    std::size_t n_absent = 0;

    bool operator==(const RmseCell&) const = default;
};

/// Key (model, preprocessing, size) of one simulated group.
struct GroupKey {
    std::string model;
    std::string preprocessing;
    std::size_t size = 0;

    auto operator<=>(const GroupKey&) const = default;
};

struct GroupHealth {
    std::size_t replications = 0;
    std::size_t reseeded = 0;
    std::size_t failures = 0;  ///< diverged twice, excluded from the cells
    bool flagged = false;

    bool operator==(const GroupHealth&) const = default;
};

struct RmseReport {
    std::map<CellKey, RmseCell> cells;
    /// p-hat value -> count per cell; absent estimates are recorded under 0.
    std::map<CellKey, std::map<std::size_t, std::size_t>> distributions;
    std::map<GroupKey, GroupHealth> health;

    [[nodiscard]] bool any_flagged() const;
    void merge(const RmseReport& other);
};

/// sqrt(mean((estimate - true_p)^2)); throws InsufficientData when empty.
[[nodiscard]] double rmse(std::span<const std::size_t> estimates, std::size_t true_p);

/// p-hat triple of one measure on one series.
[[nodiscard]] OrderEstimates run_measure(const TimeSeries& series, Measure measure, std::uint64_t seed, double alpha);

[[nodiscard]] TimeSeries apply_preprocessing(const TimeSeries& series, Preprocessing preprocessing);

using ProgressCallback = std::function<void(const std::string&)>;

/// Replication r of size n simulates with seed base_seed + r (reseeded once
/// with derive_seed(base_seed + r, 1) on divergence), preprocesses, and runs
/// every measure. Results depend only on the scenario, never on `parallelism`.
[[nodiscard]] RmseReport run_scenario(const Scenario& scenario, std::size_t parallelism,
                                      const ProgressCallback& progress = {});

/// CSV columns model,preprocessing,size,measure,estimator,rmse,n_reps,n_absent
/// in key order. JSON carries the same cells plus distributions and health.
[[nodiscard]] std::string emit_report(const RmseReport& report, ReportFormat format);
[[nodiscard]] RmseReport parse_report(std::string_view text, ReportFormat format);

/// The fourteen model/preprocessing columns of the published RMSE table.
[[nodiscard]] std::vector<Scenario> study_grid_scenarios(bool full_scale, std::uint64_t base_seed = 1);

/// Flat key = value scenario document; `model` and `preprocessing` accept
/// comma lists and expand to their cross product.
[[nodiscard]] std::vector<Scenario> parse_scenario_file(std::string_view text);
[[nodiscard]] std::string describe_scenario(const Scenario& scenario);

/// Plain-text grid: one block per (model, preprocessing), rows size x
/// estimator, columns measures.
[[nodiscard]] std::string render_table(const RmseReport& report);

}  // namespace codeclag
