#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "polyknot/errors.hpp"

namespace polyknot {

struct DecayFit {
    double a = 0, b = 0, k = 0, l = 0, n0 = 0;
    double residual = 0;  // sum of squared log-residuals
    bool converged = false;
    int dropped_zero_points = 0;

    double evaluate(double n) const {
        return a * std::pow(n - n0, b) * std::exp(-k * n - l * n * n);
    }
};

namespace detail {

// log of the model, linear in (log a, b) for fixed (n0, k, l)
inline double log_model(const std::array<double, 5>& q, double n) {
    // q = {log a, b, k, l, n0}
    return q[0] + q[1] * std::log(n - q[4]) - q[2] * n - q[3] * n * n;
}

inline double log_residual_ss(const std::array<double, 5>& q,
                              const std::vector<std::pair<double, double>>& pts) {
    double ss = 0;
    for (const auto& [n, logp] : pts) {
        if (n - q[4] <= 0) return std::numeric_limits<double>::infinity();
        const double r = log_model(q, n) - logp;
        ss += r * r;
    }
    return ss;
}

// For fixed n0, the log-model is linear in (log a, b, k, l); solve by normal
// equations.  Used both for initialization and as an inner solver.
inline bool linear_solve_given_n0(double n0,
                                  const std::vector<std::pair<double, double>>& pts,
                                  std::array<double, 5>& q) {
    // Design: [1, log(n-n0), -n, -n^2] -> logp
    double A[4][4] = {};
    double rhs[4] = {};
    for (const auto& [n, logp] : pts) {
        if (n - n0 <= 0) return false;
        const double row[4] = {1.0, std::log(n - n0), -n, -n * n};
        for (int i = 0; i < 4; ++i) {
            rhs[i] += row[i] * logp;
            for (int j = 0; j < 4; ++j) A[i][j] += row[i] * row[j];
        }
    }
    // Gaussian elimination with partial pivoting.
    int perm[4] = {0, 1, 2, 3};
    for (int c = 0; c < 4; ++c) {
        int p = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::fabs(A[r][c]) > std::fabs(A[p][c])) p = r;
        if (std::fabs(A[p][c]) < 1e-14) return false;
        std::swap(A[c], A[p]);
        std::swap(rhs[c], rhs[p]);
        (void)perm;
        for (int r = c + 1; r < 4; ++r) {
            const double f = A[r][c] / A[c][c];
            for (int j = c; j < 4; ++j) A[r][j] -= f * A[c][j];
            rhs[r] -= f * rhs[c];
        }
    }
    double x[4];
    for (int r = 3; r >= 0; --r) {
        double s = rhs[r];
        for (int j = r + 1; j < 4; ++j) s -= A[r][j] * x[j];
        x[r] = s / A[r][r];
    }
    q = {x[0], x[1], x[2], x[3], n0};
    return true;
}

}  // namespace detail

// Least-squares fit of a (n - n0)^b exp(-k n - l n^2) to (n, p) points,
// minimizing log-space residuals with damped Gauss-Newton.
inline DecayFit fit_decay(const std::vector<std::pair<double, double>>& points) {
    std::vector<std::pair<double, double>> pts;  // (n, log p)
    int dropped = 0;
    for (const auto& [n, p] : points) {
        if (p > 0)
            pts.push_back({n, std::log(p)});
        else
            ++dropped;
    }
    if (pts.size() < 6) throw InsufficientData("fit_decay needs at least 6 positive points");
    for (size_t i = 1; i < pts.size(); ++i)
        if (pts[i].first <= pts[i - 1].first)
            throw InsufficientData("fit_decay needs strictly increasing n");

    const double nmin = pts.front().first;
    // Initialization: profile n0 over a few offsets below nmin, solving the
    // conditionally linear parameters exactly for each.
    std::array<double, 5> q{};
    double best_ss = std::numeric_limits<double>::infinity();
    bool have_init = false;
    for (double off : {1.0, 0.5, 2.0, 4.0, 0.1, 8.0}) {
        std::array<double, 5> cand{};
        if (!detail::linear_solve_given_n0(nmin - off, pts, cand)) continue;
        const double ss = detail::log_residual_ss(cand, pts);
        if (ss < best_ss) {
            best_ss = ss;
            q = cand;
            have_init = true;
        }
    }
    if (!have_init) throw FitDiverged("fit_decay could not initialize");

    // Damped Gauss-Newton over all five parameters.
    double ss = best_ss;
    bool converged = false;
    for (int iter = 0; iter < 500 && !converged; ++iter) {
        // Jacobian of log-model wrt q.
        const size_t m = pts.size();
        std::vector<std::array<double, 5>> J(m);
        std::vector<double> r(m);
        for (size_t s = 0; s < m; ++s) {
            const double n = pts[s].first;
            const double d = n - q[4];
            r[s] = detail::log_model(q, n) - pts[s].second;
            J[s] = {1.0, std::log(d), -n, -n * n, -q[1] / d};
        }
        double A[5][5] = {};
        double g[5] = {};
        for (size_t s = 0; s < m; ++s)
            for (int i = 0; i < 5; ++i) {
                g[i] += J[s][i] * r[s];
                for (int j = 0; j < 5; ++j) A[i][j] += J[s][i] * J[s][j];
            }
        bool improved = false;
        for (double lambda = 1e-10; lambda <= 1e10; lambda *= 10) {
            double M[5][5];
            double rhs[5];
            for (int i = 0; i < 5; ++i) {
                rhs[i] = -g[i];
                for (int j = 0; j < 5; ++j) M[i][j] = A[i][j];
                M[i][i] += lambda * (A[i][i] > 0 ? A[i][i] : 1.0);
            }
            // Solve M step = rhs by elimination with partial pivoting.
            double step[5];
            bool singular = false;
            for (int c = 0; c < 5 && !singular; ++c) {
                int p = c;
                for (int rr = c + 1; rr < 5; ++rr)
                    if (std::fabs(M[rr][c]) > std::fabs(M[p][c])) p = rr;
                if (std::fabs(M[p][c]) < 1e-300) {
                    singular = true;
                    break;
                }
                std::swap(M[c], M[p]);
                std::swap(rhs[c], rhs[p]);
                for (int rr = c + 1; rr < 5; ++rr) {
                    const double f = M[rr][c] / M[c][c];
                    for (int j = c; j < 5; ++j) M[rr][j] -= f * M[c][j];
                    rhs[rr] -= f * rhs[c];
                }
            }
            if (singular) continue;
            for (int rr = 4; rr >= 0; --rr) {
                double sum = rhs[rr];
                for (int j = rr + 1; j < 5; ++j) sum -= M[rr][j] * step[j];
                step[rr] = sum / M[rr][rr];
            }
            std::array<double, 5> qn;
            for (int i = 0; i < 5; ++i) qn[i] = q[i] + step[i];
            if (qn[4] >= nmin) continue;  // n0 must stay below the data range
            const double ss_new = detail::log_residual_ss(qn, pts);
            if (ss_new <= ss) {
                double rel = 0;
                for (int i = 0; i < 5; ++i)
                    rel = std::max(rel, std::fabs(step[i]) / (1.0 + std::fabs(q[i])));
                q = qn;
                ss = ss_new;
                improved = true;
                if (rel < 1e-9) converged = true;
                break;
            }
        }
        if (!improved) {
            // Cannot reduce further: converged at a (possibly local) minimum.
            converged = true;
        }
    }

    DecayFit fit;
    fit.a = std::exp(q[0]);
    fit.b = q[1];
    fit.k = q[2];
    fit.l = q[3];
    fit.n0 = q[4];
    fit.residual = ss;
    fit.converged = converged;
    fit.dropped_zero_points = dropped;
    if (!std::isfinite(ss)) throw FitDiverged("fit_decay residual not finite");
    return fit;
}

// Natural cubic spline through strictly increasing x.
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const int n = static_cast<int>(x_.size());
        if (n < 2) throw InsufficientData("spline needs at least 2 points");
        for (int i = 1; i < n; ++i)
            if (x_[i] <= x_[i - 1]) throw DegenerateX("spline x must be increasing");
        m_.assign(n, 0.0);
        if (n == 2) return;
        // Tridiagonal system for second derivatives, natural ends.
        std::vector<double> a(n, 0), b(n, 0), c(n, 0), d(n, 0);
        for (int i = 1; i < n - 1; ++i) {
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            a[i] = h0;
            b[i] = 2 * (h0 + h1);
            c[i] = h1;
            d[i] = 6 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
        }
        for (int i = 2; i < n - 1; ++i) {
            const double f = a[i] / b[i - 1];
            b[i] -= f * c[i - 1];
            d[i] -= f * d[i - 1];
        }
        for (int i = n - 2; i >= 1; --i)
            m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
    }

    double operator()(double t) const {
        const int n = static_cast<int>(x_.size());
        int i = static_cast<int>(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin()) - 1;
        i = std::clamp(i, 0, n - 2);
        const double h = x_[i + 1] - x_[i];
        const double u = (x_[i + 1] - t) / h, v = (t - x_[i]) / h;
        return u * y_[i] + v * y_[i + 1] +
               ((u * u * u - u) * m_[i] + (v * v * v - v) * m_[i + 1]) * h * h / 6.0;
    }

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

private:
    std::vector<double> x_, y_, m_;
};

struct Correspondence {
    std::vector<std::pair<double, double>> map;  // (nB, equivalent nA)
    int dropped_out_of_range = 0;
};

// For each point of seriesB, the n at which a natural cubic spline through
// seriesA attains the same probability (bisection, tolerance 1e-10 in p).
inline Correspondence scale_correspondence(
    const std::vector<std::pair<double, double>>& seriesA,
    const std::vector<std::pair<double, double>>& seriesB) {
    if (seriesA.size() < 2) throw InsufficientData("scale_correspondence needs 2+ points");
    for (size_t i = 1; i < seriesA.size(); ++i)
        if (seriesA[i].second >= seriesA[i - 1].second)
            throw NonMonotoneSeries("reference series must be strictly decreasing in p");
    std::vector<double> xs, ys;
    for (const auto& [n, p] : seriesA) {
        xs.push_back(n);
        ys.push_back(p);
    }
    const CubicSpline spline(xs, ys);
    Correspondence out;
    const double pmax = seriesA.front().second, pmin = seriesA.back().second;
    for (const auto& [nb, p] : seriesB) {
        if (p > pmax || p < pmin) {
            ++out.dropped_out_of_range;
            continue;
        }
        double lo = spline.x_front(), hi = spline.x_back();
        // Spline is decreasing at the knots; bisect on p.
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (std::fabs(spline(mid) - p) < 1e-10) {
                lo = hi = mid;
                break;
            }
            if (spline(mid) > p)
                lo = mid;
            else
                hi = mid;
        }
        out.map.push_back({nb, 0.5 * (lo + hi)});
    }
    return out;
}

struct LinearFit {
    double intercept = 0, slope = 0, r_squared = 0;
};

inline LinearFit linear_fit(const std::vector<std::pair<double, double>>& pts) {
    const size_t n = pts.size();
    if (n < 2) throw InsufficientData("linear_fit needs 2+ points");
    double sx = 0, sy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx <= 0) throw DegenerateX("linear_fit needs distinct x values");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssres = 0;
    for (const auto& [x, y] : pts) {
        const double r = y - (f.intercept + f.slope * x);
        ssres += r * r;
    }
    f.r_squared = syy > 0 ? 1.0 - ssres / syy : 1.0;
    return f;
}

}  // namespace polyknot
