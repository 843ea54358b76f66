#include "dtcp/special_functions.hpp"

#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "dtcp/errors.hpp"

namespace dtcp::sf {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInvSqrtPi = 0.564189583547756286948079451560772586;

// Weideman rational approximation of the Faddeeva function, N = 40.
// Coefficients are the Fourier coefficients of exp(-t^2)(L^2+t^2) under the
// map t = L tan(theta/2); highest polynomial power first.
constexpr double kWeidemanL = 5.3182958969449885;
constexpr double kWeidemanCoeffs[40] = {
    -1.7356980998791865e-15, 1.201674910759281e-15,  1.1519170220749485e-14, -5.231716366324404e-15,
    -7.071088022159408e-14,  1.3778224047664046e-14, 4.5341448909434655e-13, 1.203330952919568e-13,
    -2.90771851041427e-12,   -2.7277735625830245e-12, 1.771418567386718e-11, 3.4727420938907015e-11,
    -9.055138860958323e-11,  -3.5632350403602684e-10, 2.1085990731251058e-10, 3.017780425551564e-09,
    3.249746582945079e-09,   -1.8315616834296834e-08, -6.351773483015411e-08, 1.419864237295343e-08,
    5.912136953029057e-07,   1.4835661133172014e-06, -1.066013898416273e-06, -1.8007447144723407e-05,
    -5.5913092642348794e-05, -3.939363145483805e-05, 0.000439807015986967,   0.002705405633073729,
    0.010048186242783535,    0.02920291647124188,    0.07182361779074328,    0.15504263802479504,
    0.2998943799615006,      0.5266528988277086,     0.8472174576593815,     1.2563815675765133,
    1.7253830848179779,      2.201513794878312,      2.6160541527618597,     2.899624509389705,
};

// w(z) for Im(z) >= 0, |z| moderate.
Complex faddeeva_upper_rational(Complex z) {
    const double L = kWeidemanL;
    const Complex iz(-z.imag(), z.real());
    const Complex Z = (L + iz) / (L - iz);
    Complex p = 0.0;
    for (double c : kWeidemanCoeffs) p = p * Z + c;
    return 2.0 * p / ((L - iz) * (L - iz)) + kInvSqrtPi / (L - iz);
}

// Asymptotic (Laplace continued-fraction truncation) for large |z|, Im z >= 0:
// w(z) ~ i/sqrt(pi) * sum_k (2k-1)!!/(2 z^2)^k / z
Complex faddeeva_upper_asymptotic(Complex z) {
    const Complex iz2inv = 1.0 / (2.0 * z * z);
    Complex term = 1.0, sum = 1.0;
    for (int k = 1; k <= 24; ++k) {
        term *= static_cast<double>(2 * k - 1) * iz2inv;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return Complex(0.0, kInvSqrtPi) * sum / z;
}

Complex faddeeva_upper(Complex z) {
    return std::abs(z) > 12.0 ? faddeeva_upper_asymptotic(z) : faddeeva_upper_rational(z);
}

bool is_nonpositive_integer(Complex z, double tol = 1e-13) {
    if (z.imag() != 0.0) return false;
    const double r = std::round(z.real());
    return r <= 0.0 && std::abs(z.real() - r) <= tol * std::max(1.0, std::abs(z.real()));
}

// Lanczos g = 7, 9 coefficients.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

Complex gamma_lanczos(Complex z) {
    // valid for Re z >= 0.5
    z -= 1.0;
    Complex x = kLanczos[0];
    for (int k = 1; k < 9; ++k) x += kLanczos[k] / (z + static_cast<double>(k));
    const Complex t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// Direct Kummer series in long double, Re z >= 0 expected.
Complex hyp1f1_series(Complex a, Complex b, Complex z) {
    using CL = std::complex<long double>;
    const CL al(a.real(), a.imag()), bl(b.real(), b.imag()), zl(z.real(), z.imag());
    CL term = 1.0L, sum = 1.0L;
    constexpr int kCap = 10000;
    for (int k = 0; k < kCap; ++k) {
        const long double kk = static_cast<long double>(k);
        term *= (al + kk) / (bl + kk) * zl / (kk + 1.0L);
        sum += term;
        if (std::abs(term) <= 1e-18L * std::abs(sum) && k > 3)
            return Complex(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
    }
    throw ConvergenceError("hyp1f1: series did not converge within the term cap");
}

// Large-|z| expansion, Re z >= 0: two asymptotic series truncated at their
// smallest terms.
Complex hyp1f1_asymptotic(Complex a, Complex b, Complex z) {
    const Complex gb = gamma_fn(b);
    Complex s1 = 0.0;
    if (!is_nonpositive_integer(a)) {
        Complex term = 1.0, sum = 1.0, best = 1.0;
        double best_mag = 1.0;
        for (int k = 1; k <= 60; ++k) {
            const double kk = k;
            term *= (b - a + (kk - 1.0)) * (1.0 - a + (kk - 1.0)) / (kk * z);
            const double m = std::abs(term);
            if (m > best_mag && k > 2) break;
            sum += term;
            best = sum;
            best_mag = m;
        }
        s1 = gb / gamma_fn(a) * std::exp(z) * std::pow(z, a - b) * best;
    }
    Complex s2 = 0.0;
    if (!is_nonpositive_integer(b - a)) {
        Complex term = 1.0, sum = 1.0, best = 1.0;
        double best_mag = 1.0;
        for (int k = 1; k <= 60; ++k) {
            const double kk = k;
            term *= (a + (kk - 1.0)) * (a - b + 1.0 + (kk - 1.0)) / (kk * (-z));
            const double m = std::abs(term);
            if (m > best_mag && k > 2) break;
            sum += term;
            best = sum;
            best_mag = m;
        }
        s2 = gb / gamma_fn(b - a) * std::pow(-z, -a) * best;
    }
    return s1 + s2;
}

} // namespace

Complex faddeeva_w(Complex z) {
    if (z.imag() >= 0.0) return faddeeva_upper(z);
    // w(-z) = 2 exp(-z^2) - w(z)
    const Complex e = std::exp(-z * z);
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
        throw RangeError("faddeeva_w: exp(-z^2) overflow in lower half-plane");
    return 2.0 * e - faddeeva_upper(-z);
}

Complex erfcx(Complex z) {
    // erfcx(z) = w(iz); Im(iz) = Re(z)
    if (z.real() >= 0.0) return faddeeva_upper(Complex(-z.imag(), z.real()));
    const Complex e = 2.0 * std::exp(z * z);
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
        throw RangeError("erfcx: exp(z^2) overflow for Re z < 0");
    return e - faddeeva_upper(Complex(z.imag(), -z.real()));
}

Complex complex_erfc(Complex z) {
    const bool flip = z.real() < 0.0;
    const Complex zz = flip ? -z : z;
    const double re_exp = zz.imag() * zz.imag() - zz.real() * zz.real();
    if (re_exp > 700.0)
        throw RangeError("complex_erfc: exp(-z^2) overflow, |Im z| too large");
    const Complex val = std::exp(-zz * zz) * faddeeva_upper(Complex(-zz.imag(), zz.real()));
    return flip ? 2.0 - val : val;
}

Complex gamma_fn(Complex z) {
    if (is_nonpositive_integer(z))
        throw PoleError("gamma_fn: pole at nonpositive integer");
    if (z.real() >= 0.5) return gamma_lanczos(z);
    // reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
    return kPi / (std::sin(kPi * z) * gamma_lanczos(1.0 - z));
}

Complex hyp1f1(Complex a, Complex b, Complex z) {
    if (is_nonpositive_integer(b))
        throw PoleError("hyp1f1: b is a nonpositive integer");
    if (z == Complex(0.0, 0.0)) return 1.0;
    if (z.real() < 0.0) return std::exp(z) * hyp1f1(b - a, b, -z); // Kummer transform
    if (std::abs(z) > 25.0) return hyp1f1_asymptotic(a, b, z);
    return hyp1f1_series(a, b, z);
}

ComplexMatrix mat_exp(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw DomainError("mat_exp: matrix not square");
    return m.exp();
}

ComplexMatrix mat_log_principal(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw DomainError("mat_log_principal: matrix not square");
    const Eigen::ComplexEigenSolver<ComplexMatrix> es(m, /*computeEigenvectors=*/false);
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
        const Complex ev = es.eigenvalues()[k];
        if (std::abs(ev) < 1e-300)
            throw DomainError("mat_log_principal: singular matrix");
        if (ev.real() < 0.0 && std::abs(ev.imag()) <= 1e-14 * std::abs(ev.real()))
            throw BranchError("mat_log_principal: eigenvalue on the negative real axis");
    }
    return m.log();
}

} // namespace dtcp::sf
