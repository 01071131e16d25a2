#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace shepherd {

enum class SplineBoundary {
    NotAKnot,  // third derivative continuous across the first and last interior knots
    Natural    // zero second derivative at both ends
};

// Interpolating cubic spline through (t_i, y_i), t strictly increasing.
//
// The knot second derivatives M_i satisfy the usual continuity system
//   (h_{i-1}/6) M_{i-1} + ((h_{i-1}+h_i)/3) M_i + (h_i/6) M_{i+1}
//       = (y_{i+1}-y_i)/h_i - (y_i-y_{i-1})/h_{i-1}
// closed by the boundary condition. Natural pins M_0 = M_{n-1} = 0; not-a-knot
// substitutes the end M's out of the corner rows and the remaining system is
// tridiagonal, solved by the Thomas algorithm. Not-a-knot with exactly three
// knots degenerates to the single parabola through the points.
class CubicSpline {
public:
    CubicSpline(std::vector<double> ts, std::vector<double> ys,
                SplineBoundary bc = SplineBoundary::NotAKnot)
        : t_(std::move(ts)), y_(std::move(ys)) {
        const std::size_t n = t_.size();
        if (n < 2 || y_.size() != n) throw std::invalid_argument("spline: need >= 2 knots, sizes equal");
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(t_[i]) || !std::isfinite(y_[i]))
                throw std::invalid_argument("spline: non-finite knot");
            if (i + 1 < n && !(t_[i] < t_[i + 1]))
                throw std::invalid_argument("spline: knots must be strictly increasing");
        }
        build(bc);
    }

    double operator()(double x) const {
        const std::size_t n = t_.size();
        if (x >= t_[n - 1]) {
            if (x == t_[n - 1]) return y_[n - 1];  // exact right endpoint
            return eval_piece(n - 2, x);
        }
        auto it = std::upper_bound(t_.begin(), t_.end(), x);
        std::size_t i = (it == t_.begin()) ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
        if (i > n - 2) i = n - 2;
        return eval_piece(i, x);
    }

    const std::vector<double>& knots() const { return t_; }

private:
    double eval_piece(std::size_t i, double x) const {
        const double dx = x - t_[i];
        return y_[i] + dx * (b_[i] + dx * (c_[i] + dx * d_[i]));
    }

    void build(SplineBoundary bc) {
        const std::size_t n = t_.size();
        std::vector<double> h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) h[i] = t_[i + 1] - t_[i];

        std::vector<double> m(n, 0.0);  // second derivatives
        if (n == 2) {
            // single segment: straight line, m stays zero
        } else if (n == 3 && bc == SplineBoundary::NotAKnot) {
            const double r = (y_[2] - y_[1]) / h[1] - (y_[1] - y_[0]) / h[0];
            const double m_const = 2.0 * r / (h[0] + h[1]);
            m[0] = m[1] = m[2] = m_const;
        } else {
            solve_interior(h, bc, m);
        }

        b_.resize(n - 1);
        c_.resize(n - 1);
        d_.resize(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            b_[i] = (y_[i + 1] - y_[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
            c_[i] = m[i] / 2.0;
            d_[i] = (m[i + 1] - m[i]) / (6.0 * h[i]);
        }
    }

    // Fill m[1..n-2] from the tridiagonal system, then recover the end values.
    void solve_interior(const std::vector<double>& h, SplineBoundary bc, std::vector<double>& m) {
        const std::size_t n = t_.size();
        const std::size_t k = n - 2;  // number of interior unknowns
        std::vector<double> sub(k, 0.0), diag(k, 0.0), sup(k, 0.0), rhs(k, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const std::size_t q = i - 1;
            sub[q] = h[i - 1] / 6.0;
            diag[q] = (h[i - 1] + h[i]) / 3.0;
            sup[q] = h[i] / 6.0;
            rhs[q] = (y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1];
        }

        if (bc == SplineBoundary::NotAKnot) {
            // m0 = ((h0+h1) m1 - h0 m2) / h1 folded into the first row
            diag[0] += h[0] * (h[0] + h[1]) / (6.0 * h[1]);
            sup[0] -= h[0] * h[0] / (6.0 * h[1]);
            // m_{n-1} = ((h_{n-3}+h_{n-2}) m_{n-2} - h_{n-2} m_{n-3}) / h_{n-3}
            diag[k - 1] += h[n - 2] * (h[n - 3] + h[n - 2]) / (6.0 * h[n - 3]);
            sub[k - 1] -= h[n - 2] * h[n - 2] / (6.0 * h[n - 3]);
        }
        // Natural: m0 = m_{n-1} = 0, rows unchanged.

        // Thomas algorithm
        for (std::size_t q = 1; q < k; ++q) {
            const double w = sub[q] / diag[q - 1];
            diag[q] -= w * sup[q - 1];
            rhs[q] -= w * rhs[q - 1];
        }
        m[n - 2] = rhs[k - 1] / diag[k - 1];
        for (std::size_t q = k - 1; q-- > 0;) m[q + 1] = (rhs[q] - sup[q] * m[q + 2]) / diag[q];

        if (bc == SplineBoundary::NotAKnot) {
            m[0] = ((h[0] + h[1]) * m[1] - h[0] * m[2]) / h[1];
            m[n - 1] = ((h[n - 3] + h[n - 2]) * m[n - 2] - h[n - 2] * m[n - 3]) / h[n - 3];
        }
    }

    std::vector<double> t_, y_, b_, c_, d_;
};

// p points evenly spaced over [lo, hi], endpoints included.
inline std::vector<double> linspace(double lo, double hi, std::size_t p) {
    std::vector<double> out(p);
    if (p == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < p; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(p - 1);
    out[p - 1] = hi;
    return out;
}

}  // namespace shepherd
