#include "dtcp/payoffs.hpp"

#include <cmath>
#include <limits>

#include "dtcp/errors.hpp"
#include "dtcp/special_functions.hpp"

namespace dtcp::payoffs {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

std::string payoff_name(const Contract& c) {
    struct V {
        std::string operator()(const VanillaCall&) { return "vanilla"; }
        std::string operator()(const VolatilityCall&) { return "volatility"; }
        std::string operator()(const TvoCall&) { return "tvo"; }
    };
    return std::visit(V{}, c.kind);
}

void validate(const Contract& c) {
    std::visit(
        [](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, VanillaCall>) {
                if (!(k.strike > 0.0)) throw ValidationError("vanilla call: strike must be > 0");
            } else if constexpr (std::is_same_v<T, VolatilityCall>) {
                if (!(k.vol_strike >= 0.0))
                    throw ValidationError("volatility call: strike must be >= 0");
            } else {
                if (!(k.strike > 0.0)) throw ValidationError("tvo call: strike must be > 0");
                if (!(k.target_vol > 0.0)) throw ValidationError("tvo call: target vol must be > 0");
            }
        },
        c.kind);
}

double payoff_value(const Contract& c, double log_s, double tv) {
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, VanillaCall>) {
                return std::max(std::exp(log_s) - k.strike, 0.0);
            } else if constexpr (std::is_same_v<T, VolatilityCall>) {
                return std::max(std::sqrt(std::max(tv, 0.0)) - k.vol_strike, 0.0);
            } else {
                const double moneyness = std::max(std::exp(log_s) - k.strike, 0.0);
                if (tv <= 0.0) return moneyness == 0.0 ? 0.0 : kInf; // degenerate path
                return k.target_vol * std::sqrt(c.maturity / tv) * moneyness;
            }
        },
        c.kind);
}

FourierPayoff fourier_transform(const Contract& c) {
    return std::visit(
        [&](const auto& k) -> FourierPayoff {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, VanillaCall>) {
                const double strike = k.strike;
                return FourierPayoff{
                    [strike](Complex z, Complex) {
                        return std::pow(strike, 1.0 + kI * z) / (kI * z - z * z);
                    },
                    models::ComplexStrip{1.0, kInf, -kInf, kInf},
                    PayoffDim::ZOnly,
                };
            } else if constexpr (std::is_same_v<T, VolatilityCall>) {
                const double q = k.vol_strike;
                return FourierPayoff{
                    [q](Complex, Complex w) {
                        const Complex miw = -kI * w;
                        return std::sqrt(kPi) * sf::complex_erfc(q * std::sqrt(miw)) /
                               (2.0 * std::pow(miw, 1.5));
                    },
                    models::ComplexStrip{-kInf, kInf, 0.0, kInf},
                    PayoffDim::WOnly,
                };
            } else {
                const double strike = k.strike;
                const double sbar = k.target_vol;
                const double t = c.maturity;
                return FourierPayoff{
                    [strike, sbar, t](Complex z, Complex w) {
                        const Complex miw = -kI * w;
                        return sbar * std::sqrt(kPi * t) / std::sqrt(miw) *
                               std::pow(strike, 1.0 + kI * z) / (kI * z - z * z);
                    },
                    models::ComplexStrip{1.0, kInf, 0.0, kInf},
                    PayoffDim::Joint,
                };
            }
        },
        c.kind);
}

} // namespace dtcp::payoffs
