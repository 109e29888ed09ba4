#include "codeclag/simulate.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "codeclag/errors.hpp"
#include "codeclag/random.hpp"

namespace codeclag {

Polynomial Polynomial::operator*(const Polynomial& other) const {
    if (coeffs.empty() || other.coeffs.empty()) return {};
    std::vector<double> out(coeffs.size() + other.coeffs.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        for (std::size_t j = 0; j < other.coeffs.size(); ++j) out[i + j] += coeffs[i] * other.coeffs[j];
    }
    return Polynomial{std::move(out)};
}

namespace {

// 1 + sum_k terms[k].second B^{terms[k].first}
Polynomial sparse(std::initializer_list<std::pair<std::size_t, double>> terms) {
    std::size_t degree = 0;
    for (const auto& [power, c] : terms) degree = std::max(degree, power);
    Polynomial p{std::vector<double>(degree + 1, 0.0)};
    p.coeffs[0] = 1.0;
    for (const auto& [power, c] : terms) p.coeffs[power] += c;
    return p;
}

std::vector<ModelSpec> build_catalogue() {
    std::vector<ModelSpec> out;
    out.push_back({ModelKind::SARIMA_2_1_1x2_0_2_52, "sarima", "SARIMA(2,1,1)x(2,0,2)_52", 2, 52, 1,
                   sparse({{1, -0.3}, {2, -0.1}}) * sparse({{52, -0.47}, {104, -0.16}}),
                   sparse({{1, 0.68}}) * sparse({{52, 0.59}, {104, 0.62}})});
    out.push_back({ModelKind::ARIMA_3_1_1, "arima311", "ARIMA(3,1,1)", 3, std::nullopt, 1,
                   sparse({{1, -0.7}, {2, 0.5}, {3, 0.3}}), sparse({{1, 0.4}})});
    out.push_back({ModelKind::ARMA_3_1, "arma31", "ARMA(3,1)", 3, std::nullopt, 0,
                   sparse({{1, -0.7}, {2, 0.5}, {3, -0.3}}), sparse({{1, -0.4}})});
    out.push_back({ModelKind::NLARMA_2_2, "nlarma", "NLARMA(2,2)", 2, std::nullopt, 0, {}, {}});
    out.push_back({ModelKind::SETAR_2_2_2_1, "setar", "SETAR(2,2;2;1)", 2, std::nullopt, 0, {}, {}});
    out.push_back({ModelKind::ARIMA_GARCH_1_1_1_1_1, "arima_garch", "ARIMA(1,1,1)-GARCH(1,1)", 1, std::nullopt, 1,
                   sparse({{1, -0.75}}), sparse({{1, 0.5}})});
    out.push_back({ModelKind::NLAR_4, "nlar4", "NLAR(4)", 4, std::nullopt, 0, {}, {}});
    out.push_back({ModelKind::AR_8, "ar8", "AR(8)", 8, std::nullopt, 0,
                   sparse({{1, -0.5},
                           {2, 0.2},
                           {3, -0.1},
                           {4, -0.2},
                           {5, -0.1},
                           {6, 0.75},
                           {7, -0.28},
                           {8, 0.25}}),
                   sparse({})});
    out.push_back({ModelKind::SARI_5_1_0x3_0_0_12, "sari", "SARI(5,1,0)x(3,0,0)_12", 5, 12, 1,
                   sparse({{12, 0.47}, {24, 0.16}, {36, -0.74}}) *
                       sparse({{1, 0.3}, {2, 0.1}, {3, 0.6}, {4, -0.2}, {5, -0.4}}),
                   sparse({})});
    out.push_back({ModelKind::ARI_6_1_0, "ari6", "ARI(6,1,0)", 6, std::nullopt, 1,
                   sparse({{1, -0.7}, {2, 0.5}, {3, -0.3}, {4, 0.6}, {5, 0.25}, {6, 0.4}}), sparse({})});
    return out;
}

const std::vector<ModelSpec>& catalogue() {
    static const std::vector<ModelSpec> models = build_catalogue();
    return models;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

class DivergenceGuard {
public:
    explicit DivergenceGuard(double limit) : limit_(limit) {}

    void check(double value, std::size_t step) const {
        if (!(std::abs(value) <= limit_)) {
            throw Error(ErrorKind::Diverged, "simulated value exceeded " + std::to_string(limit_) + " at step " +
                                                 std::to_string(step + 1),
                        step + 1);
        }
    }

private:
    double limit_;
};

std::vector<double> draw_innovations(std::size_t count, std::uint64_t seed) {
    Rng rng = make_rng({seed});
    std::normal_distribution<double> standard(0.0, 1.0);
    std::vector<double> eps(count);
    for (double& e : eps) e = standard(rng);
    return eps;
}

// phi(B) W_t = theta(B) e_t over the whole innovation record, zero start.
std::vector<double> run_linear(const Polynomial& ar, const Polynomial& ma, std::span<const double> eps,
                               const DivergenceGuard& guard) {
    const std::size_t total = eps.size();
    std::vector<double> w(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        double v = 0.0;
        for (std::size_t k = 0; k < ma.coeffs.size() && k <= t; ++k) v += ma.coeffs[k] * eps[t - k];
        for (std::size_t k = 1; k < ar.coeffs.size() && k <= t; ++k) v -= ar.coeffs[k] * w[t - k];
        guard.check(v, t);
        w[t] = v;
    }
    return w;
}

double at(const std::vector<double>& v, std::size_t t, std::size_t lag) { return t >= lag ? v[t - lag] : 0.0; }

std::vector<double> run_nonlinear(ModelKind kind, std::span<const double> eps, const DivergenceGuard& guard) {
    const std::size_t total = eps.size();
    std::vector<double> x(total, 0.0);
    const std::vector<double> e(eps.begin(), eps.end());
    for (std::size_t t = 0; t < total; ++t) {
        double v = 0.0;
        switch (kind) {
            case ModelKind::NLARMA_2_2:
                v = 2.0 * std::cos(at(x, t, 1)) + 0.5 * std::sin(at(x, t, 2)) + 0.4 * at(e, t, 1) +
                    0.8 / (1.0 + std::exp(at(e, t, 2))) + e[t];
                break;
            case ModelKind::SETAR_2_2_2_1: {
                const double x1 = at(x, t, 1);
                const double x2 = at(x, t, 2);
                v = x2 <= 2.0 ? 2.9 - 0.4 * x1 - 0.1 * x2 + e[t] : -1.5 + 0.2 * x1 + 0.3 * x2 + e[t];
                break;
            }
            case ModelKind::NLAR_4:
                v = 3.0 * std::sin(at(x, t, 1)) + 2.0 * std::sin(at(x, t, 2) / 3.0) +
                    0.5 * std::sin(at(x, t, 3) / 2.0) - 3.0 / (1.0 + std::exp(at(x, t, 4))) + e[t];
                break;
            default:
                throw Error(ErrorKind::InvalidInput, "not a nonlinear model");
        }
        guard.check(v, t);
        x[t] = v;
    }
    return x;
}

}  // namespace

const ModelSpec& model_spec(ModelKind kind) {
    for (const ModelSpec& m : catalogue()) {
        if (m.kind == kind) return m;
    }
    throw Error(ErrorKind::InvalidInput, "unknown model kind");
}

ModelSpec parse_model(std::string_view name) {
    const std::string key = lower(name);
    for (const ModelSpec& m : catalogue()) {
        if (key == m.name || key == lower(m.title)) return m;
    }
    std::string known;
    for (const ModelSpec& m : catalogue()) known += (known.empty() ? "" : ", ") + m.name;
    throw Error(ErrorKind::InvalidInput, "unknown model '" + std::string(name) + "' (expected one of " + known + ")");
}

std::size_t true_order(const ModelSpec& spec) { return spec.true_p; }

SimulationRun simulate_with_innovations(const ModelSpec& spec, std::span<const double> innovations, std::size_t n,
                                        const SimulationOptions& options) {
    if (n < 20) throw Error(ErrorKind::InvalidInput, "simulated length must be at least 20");
    if (innovations.size() != options.burn_in + n) {
        throw Error(ErrorKind::InvalidInput, "expected " + std::to_string(options.burn_in + n) + " innovations, got " +
                                                 std::to_string(innovations.size()));
    }
    const DivergenceGuard guard(options.divergence_limit);
    const std::size_t total = innovations.size();
    std::vector<double> path;
    std::vector<double> variance;

    switch (spec.kind) {
        case ModelKind::NLARMA_2_2:
        case ModelKind::SETAR_2_2_2_1:
        case ModelKind::NLAR_4:
            path = run_nonlinear(spec.kind, innovations, guard);
            break;
        case ModelKind::ARIMA_GARCH_1_1_1_1_1: {
            // eps_t = sigma_t z_t, sigma_t^2 = omega + 0.05 eps_{t-1}^2 + 0.9 sigma_{t-1}^2
            std::vector<double> eps(total);
            variance.resize(total);
            double sigma2 = options.garch_sigma2_0;
            for (std::size_t t = 0; t < total; ++t) {
                if (t > 0) sigma2 = options.garch_omega + 0.05 * eps[t - 1] * eps[t - 1] + 0.9 * sigma2;
                variance[t] = sigma2;
                eps[t] = std::sqrt(sigma2) * innovations[t];
            }
            path = run_linear(spec.ar, spec.ma, eps, guard);
            break;
        }
        default:
            path = run_linear(spec.ar, spec.ma, innovations, guard);
            break;
    }

    const auto skip = static_cast<std::ptrdiff_t>(options.burn_in);
    std::vector<double> values(path.begin() + skip, path.end());
    if (!variance.empty()) variance.erase(variance.begin(), variance.begin() + skip);

    for (std::size_t d = 0; d < spec.integration; ++d) {
        double level = 0.0;
        for (std::size_t t = 0; t < values.size(); ++t) {
            level += values[t];
            guard.check(level, options.burn_in + t);
            values[t] = level;
        }
    }
    return SimulationRun{TimeSeries(std::move(values), spec.period, spec.name), 0, options.burn_in,
                         std::move(variance)};
}

SimulationRun simulate(const ModelSpec& spec, std::size_t n, std::uint64_t seed, const SimulationOptions& options) {
    const std::vector<double> eps = draw_innovations(options.burn_in + n, seed);
    SimulationRun run = simulate_with_innovations(spec, eps, n, options);
    run.seed = seed;
    return run;
}

std::vector<double> simulate_arma(const Polynomial& ar, const Polynomial& ma, std::size_t n, std::uint64_t seed,
                                  const SimulationOptions& options) {
    const std::vector<double> eps = draw_innovations(options.burn_in + n, seed);
    std::vector<double> w = run_linear(ar, ma, eps, DivergenceGuard(options.divergence_limit));
    w.erase(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(options.burn_in));
    return w;
}

std::string series_to_csv(const TimeSeries& series) {
    std::string out = "value\n";
    char buf[64];
    for (double v : series.values()) {
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        out.append(buf, res.ptr);
        out.push_back('\n');
    }
    return out;
}

}  // namespace codeclag
