#pragma once

#include <cstddef>
#include <vector>

namespace sma {

/// Central-difference gradient of a scalar functional over a flat parameter
/// vector: g[i] = (f(x + h e_i) - f(x - h e_i)) / (2h).
template <typename Functional>
std::vector<double> central_gradient(Functional&& f, std::vector<double> x, double h) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        x[i] = xi + h;
        const double fp = f(x);
        x[i] = xi - h;
        const double fm = f(x);
        x[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

} // namespace sma
