#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codeclag/series.hpp"

namespace codeclag {

enum class ModelKind {
    SARIMA_2_1_1x2_0_2_52,
    ARIMA_3_1_1,
    ARMA_3_1,
    NLARMA_2_2,
    SETAR_2_2_2_1,
    ARIMA_GARCH_1_1_1_1_1,
    NLAR_4,
    AR_8,
    SARI_5_1_0x3_0_0_12,
    ARI_6_1_0,
};

inline constexpr std::array<ModelKind, 10> kAllModels = {
    ModelKind::SARIMA_2_1_1x2_0_2_52, ModelKind::ARIMA_3_1_1,   ModelKind::ARMA_3_1,
    ModelKind::NLARMA_2_2,            ModelKind::SETAR_2_2_2_1, ModelKind::ARIMA_GARCH_1_1_1_1_1,
    ModelKind::NLAR_4,                ModelKind::AR_8,          ModelKind::SARI_5_1_0x3_0_0_12,
    ModelKind::ARI_6_1_0,
};

/// Backshift polynomial c_0 + c_1 B + c_2 B^2 + ...; coeffs[k] multiplies B^k.
struct Polynomial {
    std::vector<double> coeffs;

    [[nodiscard]] Polynomial operator*(const Polynomial& other) const;
    [[nodiscard]] std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

/// One of the ten simulation processes. Linear models are described by their
/// expanded AR and MA polynomials of the (possibly differenced) core; the
/// nonlinear recurrences are fixed in code.
struct ModelSpec {
    ModelKind kind{};
    std::string name;      ///< short CLI name, e.g. "ar8"
    std::string title;     ///< e.g. "AR(8)"
    std::size_t true_p = 0;
    std::optional<std::size_t> period;
    std::size_t integration = 0;  ///< d: cumulative sums applied after the core
    Polynomial ar;                ///< phi(B), leading coefficient 1
    Polynomial ma;                ///< theta(B), leading coefficient 1
};

[[nodiscard]] const ModelSpec& model_spec(ModelKind kind);
[[nodiscard]] ModelSpec parse_model(std::string_view name);  ///< accepts name or title
[[nodiscard]] std::size_t true_order(const ModelSpec& spec);

inline constexpr std::size_t kDefaultBurnIn = 500;
inline constexpr double kDefaultDivergenceLimit = 1e12;

struct SimulationOptions {
    std::size_t burn_in = kDefaultBurnIn;
    double garch_omega = 0.0;   ///< intercept added to the GARCH variance recursion
    double garch_sigma2_0 = 1.0;
    double divergence_limit = kDefaultDivergenceLimit;
};

struct SimulationRun {
    TimeSeries series;
    std::uint64_t seed = 0;
    std::size_t burn_in = 0;
    /// GARCH conditional variances sigma_t^2 aligned with the retained sample
    /// (empty for other models).
    std::vector<double> variance;
};

/// Draws burn_in + n standard-normal innovations from the seed and runs the
/// model. Throws Diverged (location = 1-based recurrence step) once a value
/// exceeds the divergence limit in magnitude.
[[nodiscard]] SimulationRun simulate(const ModelSpec& spec, std::size_t n, std::uint64_t seed,
                                     const SimulationOptions& options = {});

/// Runs the recurrence on caller-supplied innovations (length burn_in + n).
[[nodiscard]] SimulationRun simulate_with_innovations(const ModelSpec& spec, std::span<const double> innovations,
                                                      std::size_t n, const SimulationOptions& options = {});

/// Stationary ARMA core phi(B) W_t = theta(B) eps_t with zero initial state,
/// burn-in discarded. Shares the innovation stream with simulate().
[[nodiscard]] std::vector<double> simulate_arma(const Polynomial& ar, const Polynomial& ma, std::size_t n,
                                                std::uint64_t seed, const SimulationOptions& options = {});

/// Simulated series as CSV: header `value`, one value per line.
[[nodiscard]] std::string series_to_csv(const TimeSeries& series);

}  // namespace codeclag
