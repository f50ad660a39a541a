#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ou/quad.hpp"  // numeric_error

namespace ou {

// Monotone piecewise-cubic Hermite interpolant.
// Slopes: either Fritsch-Carlson from the data, or caller-supplied and then
// clamped into the Fritsch-Carlson monotone region per interval.
class monotone_cubic {
  public:
    monotone_cubic() = default;

    monotone_cubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        check_nodes();
        d_ = fritsch_carlson_slopes(x_, y_);
    }

    monotone_cubic(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
        : x_(std::move(x)), y_(std::move(y)), d_(std::move(dy)) {
        check_nodes();
        if (d_.size() != x_.size())
            throw numeric_error("monotone_cubic: slope count mismatch");
        clamp_slopes();
    }

    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

    double operator()(double x) const {
        size_t i = interval(x);
        double h = x_[i + 1] - x_[i];
        double t = (x - x_[i]) / h;
        double t2 = t * t, t3 = t2 * t;
        double h00 = 2 * t3 - 3 * t2 + 1;
        double h10 = t3 - 2 * t2 + t;
        double h01 = -2 * t3 + 3 * t2;
        double h11 = t3 - t2;
        return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
    }

    double deriv(double x) const {
        size_t i = interval(x);
        double h = x_[i + 1] - x_[i];
        double t = (x - x_[i]) / h;
        double t2 = t * t;
        double dh00 = (6 * t2 - 6 * t) / h;
        double dh10 = 3 * t2 - 4 * t + 1;
        double dh01 = (-6 * t2 + 6 * t) / h;
        double dh11 = 3 * t2 - 2 * t;
        return dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
    }

  private:
    std::vector<double> x_, y_, d_;

    void check_nodes() const {
        if (x_.size() < 2 || x_.size() != y_.size())
            throw numeric_error("monotone_cubic: need >= 2 nodes, matching sizes");
        for (size_t i = 0; i + 1 < x_.size(); ++i)
            if (!(x_[i] < x_[i + 1]))
                throw numeric_error("monotone_cubic: nodes must be strictly increasing");
    }

    size_t interval(double x) const {
        if (x <= x_.front()) return 0;
        if (x >= x_.back()) return x_.size() - 2;
        size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
        return i - 1;
    }

    static std::vector<double> fritsch_carlson_slopes(const std::vector<double>& x,
                                                      const std::vector<double>& y) {
        size_t n = x.size();
        std::vector<double> h(n - 1), delta(n - 1), d(n);
        for (size_t i = 0; i + 1 < n; ++i) {
            h[i] = x[i + 1] - x[i];
            delta[i] = (y[i + 1] - y[i]) / h[i];
        }
        d[0] = delta[0];
        d[n - 1] = delta[n - 2];
        for (size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0) {
                d[i] = 0;
            } else {
                // weighted harmonic mean keeps the slope in the monotone region
                double w1 = 2 * h[i] + h[i - 1];
                double w2 = h[i] + 2 * h[i - 1];
                d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        return d;
    }

    void clamp_slopes() {
        size_t n = x_.size();
        for (size_t i = 0; i + 1 < n; ++i) {
            double delta = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
            if (delta == 0) {
                d_[i] = 0;
                d_[i + 1] = 0;
                continue;
            }
            double a = d_[i] / delta, b = d_[i + 1] / delta;
            if (a < 0) d_[i] = 0;
            else if (a > 3) d_[i] = 3 * delta;
            if (b < 0) d_[i + 1] = 0;
            else if (b > 3) d_[i + 1] = 3 * delta;
        }
    }
};

}  // namespace ou
