//! Explicit constants for the classical inequalities used by the checks.
//!
//! Each constant comes with a short derivation so that the sweeps test a
//! proven inequality rather than a fitted one.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::intpoly::IntPoly;

pub fn binomial(n: usize, k: usize) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

/// Lower Gelfond constant: `H(QR) >= L(n) H(Q) H(R)` whenever `deg QR = n`.
///
/// `H(Q) <= C(deg Q, deg Q / 2) M(Q)` coefficientwise, `M` is multiplicative,
/// and `M(P) <= sqrt(n + 1) H(P)`; the two binomials multiply to at most
/// `C(n, n / 2)`.
pub fn gelfond_lower(n: usize) -> f64 {
    1.0 / (binomial(n, n / 2) * libm::sqrt((n + 1) as f64))
}

/// Upper Gelfond constant: each coefficient of `QR` is a sum of at most
/// `min(deg Q, deg R) + 1 <= n / 2 + 1` products.
pub fn gelfond_upper(n: usize) -> f64 {
    (n / 2 + 1) as f64
}

/// `|alpha - beta| >= 2^{1 - mn} M(A)^{-n} M(B)^{-m}` for distinct roots of
/// coprime `A` (degree `m`) and `B` (degree `n`): from `|Res(A, B)| >= 1` and
/// `|alpha_i - beta_j| <= 2 max(1, |alpha_i|) max(1, |beta_j|)`.
pub fn root_separation(m: usize, n: usize, mahler_a: f64, mahler_b: f64) -> f64 {
    libm::pow(2.0, 1.0 - (m * n) as f64) * libm::pow(mahler_a, -(n as f64)) * libm::pow(mahler_b, -(m as f64))
}

/// Constant `c(m, n)` in `|alpha - beta| >= c H(alpha)^{-n} H(beta)^{-m}`,
/// using `M(A) <= sqrt(m + 1) H(A)`.
pub fn liouville_constant(m: usize, n: usize) -> f64 {
    libm::pow(2.0, 1.0 - (m * n) as f64)
        * libm::pow((m + 1) as f64, -(n as f64) / 2.0)
        * libm::pow((n + 1) as f64, -(m as f64) / 2.0)
}

/// Constant `C(d)` with `|xi - alpha| <= C(d) |P(xi)| H(P)^{d-2}` for every
/// separable `P` of degree `d >= 2` and `alpha` its root nearest to `xi`.
///
/// `|P(xi)| >= 2^{1-d} |xi - alpha| |P'(alpha)|` (every other root is at least
/// half as far from `xi` as from `alpha`), and `|Disc P| >= 1` gives
/// `|P'(alpha)| >= 2^{-(d-1)(d-2)/2} M(P)^{-(d-2)}`.
pub fn feldman_constant(d: usize) -> f64 {
    assert!(d >= 2, "the root-distance inequality needs degree at least 2");
    libm::pow(2.0, (d * (d - 1)) as f64 / 2.0) * libm::pow((d + 1) as f64, (d as f64 - 2.0) / 2.0)
}

/// Bound on `sum_{j=1}^n j rho^{j-1}`, i.e. `|P'(t)| / H(P)` for `|t| <= rho`.
pub fn derivative_factor(n: usize, rho: f64) -> f64 {
    (1..=n).map(|j| j as f64 * libm::pow(rho, (j - 1) as f64)).sum()
}

/// Same for `|P''(t)| / (2 H(P))`.
pub fn second_derivative_factor(n: usize, rho: f64) -> f64 {
    (2..=n)
        .map(|j| (j * (j - 1)) as f64 / 2.0 * libm::pow(rho, (j - 2) as f64))
        .sum()
}

/// Mahler measure upper bound `||P||_2` (Landau).
pub fn landau_bound(p: &IntPoly) -> f64 {
    let s: BigInt = p.coeffs().iter().map(|c| c * c).sum();
    libm::sqrt(s.to_f64().unwrap_or(f64::INFINITY))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gelfond_lower_beats_two_to_minus_n() {
        for n in 1..=8 {
            assert!(gelfond_lower(n) >= libm::pow(2.0, -(n as f64)), "n = {n}");
        }
        assert_eq!(gelfond_upper(2), 2.0);
    }

    #[test]
    fn small_feldman_constants() {
        assert_eq!(feldman_constant(2), 2.0);
        assert_eq!(feldman_constant(3), 16.0);
        assert_eq!(feldman_constant(4), 320.0);
    }

    #[test]
    fn liouville_linear_case() {
        assert!((liouville_constant(1, 1) - 0.5).abs() < 1e-15);
        assert_eq!(root_separation(1, 1, 3.0, 5.0), 1.0 / 15.0);
        assert_eq!(derivative_factor(3, 1.0), 6.0);
    }
}
