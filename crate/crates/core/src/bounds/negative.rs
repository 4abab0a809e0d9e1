//! Bounds along eigenvectors of real negative eigenvalues. Odd and even
//! powers of `λ` flip the direction, so the sums split by parity.

use super::series::{geom_sum_scaled, scale_exponent};
use super::{check_k, compare, non_increasing, BoundError, Classification, PairValue, Result, SupportTriple};

fn check_negative(lambda: f64) -> Result<()> {
    if lambda < 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(BoundError::NonNegativeEigenvalue(lambda))
    }
}

/// One direction; `own` are supports along `z`, `opp` along `-z`.
fn minus_ratio(l: f64, hx: f64, hbu_own: f64, hbu_opp: f64, hw_own: f64, hw_opp: f64, k: usize) -> f64 {
    let k = k as i64;
    let q = l * l;
    let (n_odd, n_even) = ((k - 1) / 2, (k - 1 + 1) / 2);
    let (d_odd, d_even) = (k / 2, (k + 1) / 2);
    let r = scale_exponent(q, d_even - 1);
    let s = |count: i64| geom_sum_scaled(count - 1, q, r);
    let num = hx * (1.0 / q).powi(r as i32) + l * s(n_odd) * hbu_opp + s(n_even) * hbu_own;
    let den = l * s(d_odd) * hw_opp + s(d_even) * hw_own;
    num / den
}

/// `α⁻_k(±φ)` and their maximum.
pub fn alpha_minus_k(lambda: f64, t: &SupportTriple, k: usize) -> Result<PairValue> {
    check_negative(lambda)?;
    check_k(k)?;
    t.check_w()?;
    let l = lambda.abs();
    Ok(PairValue::new(
        minus_ratio(l, t.hx_plus, t.hbu_plus, t.hbu_minus, t.hw_plus, t.hw_minus, k),
        minus_ratio(l, t.hx_minus, t.hbu_minus, t.hbu_plus, t.hw_minus, t.hw_plus, k),
    ))
}

/// Monotonicity of the odd and even subsequences for one direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityClass {
    pub odd: Classification,
    pub even: Classification,
}

fn parity_class(l: f64, t: &SupportTriple) -> ParityClass {
    let q = l * l;
    let odd_rhs = (l * t.hbu_minus + t.hbu_plus) * t.hw_plus / (l * t.hw_minus + q * t.hw_plus);
    let even_rhs = (l * t.hw_minus + t.hw_plus) * t.hbu_minus / (q * t.hw_minus + l * t.hw_plus);
    ParityClass { odd: compare(t.hx_plus, odd_rhs), even: compare(t.hx_plus, even_rhs) }
}

/// Parity classifications for `+φ` and `-φ`.
pub fn alpha_minus_classify(lambda: f64, t: &SupportTriple) -> [ParityClass; 2] {
    let l = lambda.abs();
    [parity_class(l, t), parity_class(l, &t.flipped())]
}

fn limits_one(l: f64, t: &SupportTriple) -> (f64, f64) {
    let q = l * l;
    if l >= 1.0 {
        let odd = (l * t.hbu_minus + t.hbu_plus) / (l * t.hw_minus + q * t.hw_plus);
        let even = (t.hbu_minus + l * t.hbu_plus) / (q * t.hw_minus + l * t.hw_plus);
        (odd, even)
    } else {
        let v = ((1.0 - q) * t.hx_plus + l * t.hbu_minus + t.hbu_plus) / (l * t.hw_minus + t.hw_plus);
        (v, v)
    }
}

/// Limits of the odd and even subsequences: `[(odd, even) at +φ, (odd, even) at -φ]`.
pub fn parity_limits(lambda: f64, t: &SupportTriple) -> Result<[(f64, f64); 2]> {
    check_negative(lambda)?;
    t.check_w()?;
    let l = lambda.abs();
    Ok([limits_one(l, t), limits_one(l, &t.flipped())])
}

/// `min{ᾱ⁻,odd_∞, ᾱ⁻,even_∞}` when all four subsequences are
/// non-increasing; `HypothesisViolated` otherwise.
pub fn alpha_minus_inf(lambda: f64, t: &SupportTriple) -> Result<f64> {
    check_negative(lambda)?;
    t.check_w()?;
    let cls = alpha_minus_classify(lambda, t);
    if !cls.iter().all(|c| non_increasing(c.odd) && non_increasing(c.even)) {
        return Err(BoundError::HypothesisViolated { fallback: None });
    }
    let [p, m] = parity_limits(lambda, t)?;
    Ok(p.0.max(m.0).min(p.1.max(m.1)))
}

#[cfg(test)]
mod tests {
    use super::super::real::alpha_plus_k;
    use super::*;
    use approx::assert_abs_diff_eq;

    fn row2() -> SupportTriple {
        SupportTriple { hx_plus: 2.0, hx_minus: 2.0, hbu_plus: 0.5, hbu_minus: 1.0, hw_plus: 1.0, hw_minus: 1.0 }
    }

    /// Direct summation: `A^l` maps `φ` to `λ^l φ`, so term `l` is evaluated
    /// at `sign(λ^l)·z`.
    fn oracle(lambda: f64, t: &SupportTriple, k: usize) -> f64 {
        let mut num = t.hx_plus;
        for l in 0..k.saturating_sub(1) {
            let p = lambda.powi(l as i32);
            num += p.abs() * if p > 0.0 { t.hbu_plus } else { t.hbu_minus };
        }
        let mut den = 0.0;
        for l in 0..k {
            let p = lambda.powi(l as i32);
            den += p.abs() * if p > 0.0 { t.hw_plus } else { t.hw_minus };
        }
        num / den
    }

    #[test]
    fn unit_modulus_symmetric() {
        let t = SupportTriple::symmetric(5.0, 1.0, 1.0);
        assert_abs_diff_eq!(alpha_minus_k(-1.0, &t, 2).unwrap().bar, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn k1_is_ratio() {
        let v = alpha_minus_k(-1.5, &row2(), 1).unwrap();
        assert_abs_diff_eq!(v.plus, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.minus, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn matches_direct_series() {
        let t = row2();
        for &lambda in &[-0.6, -1.0, -1.5] {
            for k in 1..40 {
                let v = alpha_minus_k(lambda, &t, k).unwrap();
                let o = oracle(lambda, &t, k);
                assert!((v.plus - o).abs() < 1e-12 * o, "λ={lambda} k={k}");
                let o = oracle(lambda, &t.flipped(), k);
                assert!((v.minus - o).abs() < 1e-12 * o);
            }
        }
    }

    #[test]
    fn symmetric_sets_reduce_to_positive_case() {
        let t = SupportTriple::symmetric(3.0, 0.7, 1.3);
        for k in 1..50 {
            let a = alpha_minus_k(-1.4, &t, k).unwrap().bar;
            let b = alpha_plus_k(1.4, &t, k).unwrap().bar;
            assert!((a - b).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn classification_examples() {
        let c = alpha_minus_classify(-1.5, &row2());
        assert_eq!(c[0].odd, Classification::Decreasing);
        let mut t = row2();
        t.hx_plus = 0.01;
        t.hx_minus = 0.01;
        let c = alpha_minus_classify(-1.5, &t);
        assert_eq!(c[0].odd, Classification::Increasing);
        assert_eq!(c[0].even, Classification::Increasing);
        // even condition reduces to h_X(z) = h_{-BU}(-z)/|λ|
        let mut t = row2();
        t.hx_plus = 1.0 / 1.5;
        assert_eq!(alpha_minus_classify(-1.5, &t)[0].even, Classification::Constant);
    }

    #[test]
    fn infimum_examples() {
        let t = row2();
        let [p, m] = parity_limits(-1.5, &t).unwrap();
        assert!((p.0 - 2.0 / 3.75).abs() < 1e-12 && (m.0 - 1.75 / 3.75).abs() < 1e-12);
        assert!((p.1 - 1.75 / 3.75).abs() < 1e-12 && (m.1 - 2.0 / 3.75).abs() < 1e-12);
        let inf = alpha_minus_inf(-1.5, &t).unwrap();
        assert!((inf - 0.533).abs() < 1e-3);
        let odd = alpha_minus_k(-1.5, &t, 1001).unwrap().bar;
        let even = alpha_minus_k(-1.5, &t, 1002).unwrap().bar;
        assert!((odd.min(even) - inf).abs() < 1e-9);

        let s = SupportTriple::symmetric(5.0, 1.0, 1.0);
        assert_abs_diff_eq!(alpha_minus_inf(-0.5, &s).unwrap(), 0.5 * 5.0 + 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(alpha_minus_inf(-1.0, &s).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_positive_eigenvalue() {
        assert_eq!(alpha_minus_k(0.5, &row2(), 1), Err(BoundError::NonNegativeEigenvalue(0.5)));
    }
}
