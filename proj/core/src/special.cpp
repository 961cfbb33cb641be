#include "lecho/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lecho/error.hpp"

namespace lecho {

EllipticPair elliptic_ke(double m) {
    if (!(m >= 0.0 && m <= 1.0)) {
        throw ValidationError("elliptic integral parameter must lie in [0, 1], got " + std::to_string(m));
    }
    if (m == 1.0) {
        return {std::numeric_limits<double>::infinity(), 1.0};
    }
    double a = 1.0;
    double g = std::sqrt(1.0 - m);
    double c = std::sqrt(m);
    double weight = 0.5;  // 2^(n-1) at n = 0
    double sum = weight * c * c;
    for (int n = 0; n < 64 && std::abs(c) > 1e-15; ++n) {
        const double a_next = 0.5 * (a + g);
        c = 0.5 * (a - g);
        g = std::sqrt(a * g);
        a = a_next;
        weight *= 2.0;
        sum += weight * c * c;
    }
    const double k = std::numbers::pi / (2.0 * a);
    return {k, k * (1.0 - sum)};
}

double elliptic_e(double m) { return elliptic_ke(m).e; }

double elliptic_k(double m) {
    if (m == 1.0) {
        throw ValidationError("elliptic_k diverges at m = 1");
    }
    return elliptic_ke(m).k;
}

double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

}  // namespace lecho
