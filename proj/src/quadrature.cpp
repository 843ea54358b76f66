#include "dtcp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace dtcp::quad {

namespace {

// 15-point Kronrod abscissae on [-1, 1] and weights; odd entries form the
// embedded 7-point Gauss rule.
constexpr double kXgk[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813,
};
constexpr double kWgk[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
};
constexpr double kWg[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870,
};

struct Interval {
    double a, b, err;
    Complex val;
    bool operator<(const Interval& o) const { return err < o.err; }
};

} // namespace

QuadResult gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Complex qk = 0.0, qg = 0.0;
    for (int j = 0; j < 15; ++j) {
        const Complex y = f(c + h * kXgk[j]);
        qk += kWgk[j] * y;
        if (j % 2 == 1) qg += kWg[j / 2] * y;
    }
    QuadResult r;
    r.value = qk * h;
    r.err = std::abs(qk - qg) * std::abs(h);
    r.evals = 15;
    return r;
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b, const AdaptiveOptions& opt) {
    QuadResult first = gk15(f, a, b);
    std::priority_queue<Interval> heap;
    heap.push({a, b, first.err, first.value});

    Complex total = first.value;
    double total_err = first.err;
    long evals = first.evals;
    int n = 1;
    while (n < opt.max_intervals) {
        const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
        if (total_err <= tol) break;
        Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        QuadResult l = gk15(f, worst.a, mid);
        QuadResult r = gk15(f, mid, worst.b);
        total += l.value + r.value - worst.val;
        total_err += l.err + r.err - worst.err;
        evals += l.evals + r.evals;
        heap.push({worst.a, mid, l.err, l.value});
        heap.push({mid, worst.b, r.err, r.value});
        ++n;
    }
    QuadResult out;
    out.value = total;
    out.err = std::max(total_err, 0.0);
    out.evals = evals;
    out.converged = total_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) * 1.0001 + 1e-300;
    return out;
}

namespace {

// One level of iterated averaging applied repeatedly: the standard Euler
// acceleration of an (asymptotically) alternating partial-sum sequence.
Complex averaged_estimate(const std::vector<Complex>& partial, int levels) {
    const int n = std::min<int>(levels + 1, static_cast<int>(partial.size()));
    std::vector<Complex> t(partial.end() - n, partial.end());
    while (t.size() > 1) {
        for (size_t j = 0; j + 1 < t.size(); ++j) t[j] = 0.5 * (t[j] + t[j + 1]);
        t.pop_back();
    }
    return t[0];
}

} // namespace

QuadResult integrate_halfline(const Integrand& f, double x0, int dir, double h0, const HalflineOptions& opt) {
    const double sgn = dir >= 0 ? 1.0 : -1.0;
    constexpr double kPi = 3.14159265358979324;
    AdaptiveOptions panel_opt;
    panel_opt.rel_tol = std::max(opt.rel_tol * 0.1, 1e-12);
    panel_opt.max_intervals = 64;

    QuadResult out;
    Complex acc = 0.0;
    double runmax = 0.0;
    int small_count = 0;
    double x = x0;
    double h = h0;
    int k = 0;

    auto add_panel = [&]() -> Complex {
        const double xa = std::min(x, x + sgn * h), xb = std::max(x, x + sgn * h);
        QuadResult p = integrate_adaptive(f, xa, xb, panel_opt);
        const Complex pv = p.value; // panels are traversed outward but always integrated left-to-right
        acc += pv;
        out.err += p.err;
        out.evals += p.evals;
        x += sgn * h;
        ++k;
        const double mag = std::abs(pv) / h;
        runmax = std::max(runmax, mag);
        small_count = mag < opt.trunc_threshold * runmax ? small_count + 1 : 0;
        return pv;
    };

    // Sweep phase: panels grow geometrically while the integrand stays
    // smooth. A steady phase advance between consecutive panels signals an
    // oscillatory tail; the measured rate fixes a half-period panel width.
    Complex prev_panel = add_panel();
    double prev_center = x - sgn * h / 2.0;
    bool oscillatory = false;
    double omega = 0.0;
    const double h_cap = h0 * opt.max_growth;
    while (k < opt.max_panels && out.evals < opt.max_evals) {
        if (small_count >= opt.consecutive_small) {
            out.value = acc;
            return out;
        }
        const bool equal_width = h >= h_cap;
        h = std::min(h * 1.6, h_cap);
        const Complex pv = add_panel();
        const double center = x - sgn * h / 2.0;
        if (std::abs(pv) > 0.0 && std::abs(prev_panel) > 0.0) {
            const double dphi = std::abs(std::arg(pv / prev_panel));
            if (dphi > 0.5 && dphi < 2.8) {
                omega = dphi / std::abs(center - prev_center);
                oscillatory = true;
                break;
            }
            // equal-width geometric-decay tail bound for smooth integrands
            if (equal_width) {
                const double r = std::abs(pv) / std::abs(prev_panel);
                if (r < 0.9995) {
                    const double tail = std::abs(pv) * r / (1.0 - r);
                    if (tail <= std::max(opt.abs_tol, opt.rel_tol * std::abs(acc))) {
                        out.err += tail;
                        out.value = acc;
                        return out;
                    }
                }
            }
        }
        prev_panel = pv;
        prev_center = center;
    }
    if (!oscillatory) {
        out.value = acc;
        out.converged = k < opt.max_panels && out.evals < opt.max_evals;
        return out;
    }

    // Oscillatory tail: fixed half-period panels make the partial-sum
    // sequence asymptotically alternating; iterated averaging extrapolates
    // its limit.
    h = std::clamp(kPi / omega, h0 * 0.25, h0 * opt.max_growth * 4.0);
    std::vector<Complex> partial;
    partial.reserve(512);
    partial.push_back(acc);
    Complex prev_est = acc;
    bool have_est = false;
    int stable = 0;
    while (k < opt.max_panels && out.evals < opt.max_evals) {
        add_panel();
        partial.push_back(acc);
        if (small_count >= opt.consecutive_small) {
            out.value = acc;
            return out;
        }
        if (static_cast<int>(partial.size()) > opt.avg_levels + 2) {
            const Complex est = averaged_estimate(partial, opt.avg_levels);
            if (have_est) {
                const double scale = std::max(std::abs(est), std::abs(acc));
                stable = std::abs(est - prev_est) <= std::max(opt.abs_tol, opt.rel_tol * scale)
                             ? stable + 1
                             : 0;
                if (stable >= 2) {
                    out.value = est;
                    out.err += std::abs(est - prev_est);
                    return out;
                }
            }
            prev_est = est;
            have_est = true;
        }
    }
    out.value = have_est ? prev_est : acc;
    out.converged = false;
    return out;
}

QuadResult integrate_line(const Integrand& f, double x0, double h0, const HalflineOptions& opt) {
    QuadResult up = integrate_halfline(f, x0, +1, h0, opt);
    QuadResult down = integrate_halfline(f, x0, -1, h0, opt);
    QuadResult out;
    out.value = up.value + down.value;
    out.err = up.err + down.err;
    out.evals = up.evals + down.evals;
    out.converged = up.converged && down.converged;
    return out;
}

} // namespace dtcp::quad
