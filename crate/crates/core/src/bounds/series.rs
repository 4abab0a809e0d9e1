//! Finite geometric sums and their derivatives, with rescaled variants
//! that stay finite when `x > 1` and the exponent is large.

/// Branch tolerance for treating `x` as exactly 1.
pub const UNIT_TOL: f64 = 1e-12;

/// Within this distance of 1 the closed forms cancel badly; short sums
/// are then added term by term.
const NEAR_UNIT: f64 = 0.05;
const MAX_DIRECT_TERMS: i64 = 4096;

fn is_unit(x: f64) -> bool {
    (x - 1.0).abs() < UNIT_TOL
}

fn use_direct(a: i64, b: i64, x: f64) -> bool {
    (x - 1.0).abs() < NEAR_UNIT && b - a < MAX_DIRECT_TERMS
}

fn direct_sum(a: i64, b: i64, x: f64) -> f64 {
    let mut p = x.powi(a as i32);
    let mut s = 0.0;
    for _ in a..=b {
        s += p;
        p *= x;
    }
    s
}

fn direct_deriv(a: i64, b: i64, x: f64) -> f64 {
    let a = a.max(1);
    let mut p = x.powi((a - 1) as i32);
    let mut s = 0.0;
    for i in a..=b {
        s += i as f64 * p;
        p *= x;
    }
    s
}

/// `s_{a,b}(x) = Σ_{i=a}^{b} x^i`; zero when `b < a`.
pub fn geom_sum(a: i64, b: i64, x: f64) -> f64 {
    if b < a {
        return 0.0;
    }
    if is_unit(x) {
        return (b - a + 1) as f64;
    }
    if use_direct(a, b, x) {
        return direct_sum(a, b, x);
    }
    (x.powi(a as i32) - x.powi((b + 1) as i32)) / (1.0 - x)
}

/// `s'_{a,b}(x) = Σ_{i=a}^{b} i x^{i-1}`; zero when `b < a`.
pub fn geom_sum_deriv(a: i64, b: i64, x: f64) -> f64 {
    if b < a {
        return 0.0;
    }
    if is_unit(x) {
        return ((b - a + 1) * (a + b)) as f64 / 2.0;
    }
    if use_direct(a, b, x) {
        return direct_deriv(a, b, x);
    }
    let lead = if a == 0 { 0.0 } else { a as f64 * x.powi((a - 1) as i32) };
    let num = lead + (1 - a) as f64 * x.powi(a as i32) + b as f64 * x.powi((b + 1) as i32)
        - (b + 1) as f64 * x.powi(b as i32);
    num / ((1.0 - x) * (1.0 - x))
}

/// `x^{-r} s_{0,b}(x)`, evaluated through `1/x` when `x > 1`.
pub fn geom_sum_scaled(b: i64, x: f64, r: i64) -> f64 {
    if b < 0 {
        return 0.0;
    }
    if x > 1.0 && !is_unit(x) {
        let y = 1.0 / x;
        return y.powi((r - b) as i32) * geom_sum(0, b, y);
    }
    geom_sum(0, b, x) * x.powi(-r as i32)
}

/// `x^{-r} s'_{0,b}(x)`, evaluated through `1/x` when `x > 1`.
pub fn geom_sum_deriv_scaled(b: i64, x: f64, r: i64) -> f64 {
    if b < 1 {
        return 0.0;
    }
    if x > 1.0 && !is_unit(x) {
        let y = 1.0 / x;
        return y.powi((r + 1 - b) as i32) * (b as f64 * geom_sum(0, b, y) - y * geom_sum_deriv(0, b, y));
    }
    geom_sum_deriv(0, b, x) * x.powi(-r as i32)
}

/// Exponent by which sums up to `top` are rescaled: `top` for `x > 1`,
/// otherwise none.
pub fn scale_exponent(x: f64, top: i64) -> i64 {
    if x > 1.0 && !is_unit(x) {
        top.max(0)
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(a: i64, b: i64, x: f64) -> f64 {
        (a..=b).map(|i| x.powi(i as i32)).sum()
    }

    fn direct_deriv(a: i64, b: i64, x: f64) -> f64 {
        (a..=b).filter(|&i| i != 0).map(|i| i as f64 * x.powi((i - 1) as i32)).sum()
    }

    #[test]
    fn geom_sum_examples() {
        assert_eq!(geom_sum(0, 3, 2.0), 15.0);
        assert_eq!(geom_sum(2, 4, 1.0), 3.0);
        assert_eq!(geom_sum(0, -1, 0.7), 0.0);
    }

    #[test]
    fn geom_sum_deriv_examples() {
        assert_eq!(geom_sum_deriv(0, 3, 2.0), 17.0);
        assert_eq!(direct_deriv(0, 3, 2.0), 17.0);
        assert_eq!(geom_sum_deriv(0, 3, 1.0), 6.0);
        assert_eq!(geom_sum_deriv(0, -1, 3.0), 0.0);
    }

    #[test]
    fn zero_base_is_finite() {
        assert_eq!(geom_sum(0, 4, 0.0), 1.0);
        assert_eq!(geom_sum_deriv(0, 4, 0.0), 1.0);
    }

    #[test]
    fn scaled_variants_match_direct() {
        for &x in &[0.4, 1.0, 1.2, 3.0] {
            for b in 0..30i64 {
                let r = b + 1;
                let expect = direct(0, b, x) / x.powi(r as i32);
                assert!((geom_sum_scaled(b, x, r) - expect).abs() <= 1e-12 * expect.abs().max(1.0));
                let expect_d = direct_deriv(0, b, x) / x.powi(r as i32);
                assert!((geom_sum_deriv_scaled(b, x, r) - expect_d).abs() <= 1e-11 * expect_d.abs().max(1.0));
            }
        }
    }

    #[test]
    fn scaled_sum_stays_finite_at_large_exponent() {
        let v = geom_sum_scaled(9999, 1.2, 9999);
        assert!((v - 6.0).abs() < 1e-9, "{v}");
        let d = geom_sum_deriv_scaled(9999, 1.2, 9999);
        assert!(d.is_finite() && d > 0.0);
    }
}
