#pragma once

#include <complex>
#include <functional>
#include <variant>

#include "dtcp/models.hpp"

namespace dtcp::payoffs {

using Complex = std::complex<double>;

struct VanillaCall {
    double strike; // K > 0
};

/// Call on total realized volatility sqrt(TV_t), strike vol Q >= 0.
struct VolatilityCall {
    double vol_strike;
};

/// Target volatility call paying sigma_bar sqrt(t / TV_t) (S_t - H)^+;
/// the maturity enters the payoff itself through the sqrt(t) scaling.
struct TvoCall {
    double strike;     // H > 0
    double target_vol; // sigma_bar > 0
};

struct Contract {
    std::variant<VanillaCall, VolatilityCall, TvoCall> kind;
    double maturity; // absolute time t, must exceed the valuation time
};

std::string payoff_name(const Contract& c);
void validate(const Contract& c);

enum class PayoffDim { ZOnly, WOnly, Joint };

struct FourierPayoff {
    std::function<Complex(Complex z, Complex w)> transform;
    models::ComplexStrip strip; // analyticity bounds on Im(z), Im(w)
    PayoffDim dim;
};

/// Terminal cashflow given the log spot and the total realized variance at
/// maturity. A TVO at tv == 0 returns the limit convention (0 out of the
/// money, +inf guard in the money); callers treat such paths as degenerate.
double payoff_value(const Contract& c, double log_s, double tv);

/// Closed-form Fourier transform and its analyticity strip. Fractional
/// powers use the principal branch of (-i w), single-valued on contours
/// Im(w) = k2 > 0.
FourierPayoff fourier_transform(const Contract& c);

} // namespace dtcp::payoffs
