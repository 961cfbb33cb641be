#pragma once

namespace lecho {

/// Complete elliptic integral of the second kind in the parameter convention,
/// E(m) = int_0^{pi/2} sqrt(1 - m sin^2 t) dt, for 0 <= m <= 1 (E(1) = 1).
/// Arithmetic-geometric mean iteration.
[[nodiscard]] double elliptic_e(double m);

/// Complete elliptic integral of the first kind, same convention, 0 <= m < 1.
[[nodiscard]] double elliptic_k(double m);

/// Both integrals from a single AGM run.
struct EllipticPair {
    double k;
    double e;
};
[[nodiscard]] EllipticPair elliptic_ke(double m);

/// Bessel function of the first kind, order zero.
[[nodiscard]] double bessel_j0(double x);

}  // namespace lecho
