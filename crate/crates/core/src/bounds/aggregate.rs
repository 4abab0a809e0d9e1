//! Per-system reduction: every applicable bound for every block, the
//! per-`k` minimum, and the overall certificate.

use serde::Serialize;

use super::complex::{alpha_c_inf, alpha_c_k, RotatingFrame, RotatingSupports};
use super::negative::{alpha_minus_inf, alpha_minus_k};
use super::real::{alpha_plus_classify, alpha_plus_inf, alpha_plus_k, beta_plus_k, ChainSupports};
use super::{
    classify_values, AlphaCertificate, BoundError, BoundPoint, BoundSequence, Direction, Infimum,
    Justification, KStar, Result, SupportTriple, Theorem,
};
use crate::spectral::{BlockKind, JordanBlock, SpectralDecomposition};
use crate::system::LinearSystem;

/// Smallest bound at one `k` and where it comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerK {
    pub k: usize,
    pub value: f64,
    pub block: usize,
    pub theorem: Theorem,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestBound {
    pub sequences: Vec<BoundSequence>,
    pub per_k: Vec<PerK>,
    pub certificate: AlphaCertificate,
}

impl BestBound {
    pub fn sequence(&self, theorem: Theorem) -> Option<&BoundSequence> {
        self.sequences.iter().find(|s| s.theorem == theorem)
    }

    pub fn min_at(&self, k: usize) -> Option<f64> {
        self.per_k.iter().find(|p| p.k == k).map(|p| p.value)
    }
}

fn points<F>(k_max: usize, mut eval: F) -> Result<Vec<BoundPoint>>
where
    F: FnMut(usize) -> Result<(f64, f64, f64)>,
{
    (1..=k_max)
        .map(|k| {
            let (plus, minus, bar) = eval(k)?;
            Ok(BoundPoint { k, plus, minus, bar })
        })
        .collect()
}

fn min_over(points: &[BoundPoint]) -> Infimum {
    let v = points.iter().map(|p| p.bar).fold(f64::INFINITY, f64::min);
    Infimum { value: v, justification: Justification::MinOverComputed }
}

fn sequence_t1(sys: &LinearSystem, block: &JordanBlock, idx: usize, k_max: usize) -> Result<BoundSequence> {
    let t = SupportTriple::along(sys, &block.phi[0])?;
    let lambda = block.lambda;
    let per_k = points(k_max, |k| {
        let v = alpha_plus_k(lambda, &t, k)?;
        Ok((v.plus, v.minus, v.bar))
    })?;
    let (cp, cm) = alpha_plus_classify(lambda, &t);
    let classification = if cp == cm { cp } else { classify_values(&per_k.iter().map(|p| p.bar).collect::<Vec<_>>()) };
    let infimum = match alpha_plus_inf(lambda, &t) {
        Ok(v) => Infimum { value: v, justification: Justification::LimitFormula },
        Err(BoundError::HypothesisViolated { fallback: Some(v) }) => Infimum { value: v, justification: Justification::K1Value },
        Err(BoundError::HypothesisViolated { fallback: None }) => min_over(&per_k),
        Err(e) => return Err(e),
    };
    Ok(BoundSequence { theorem: Theorem::T1, block: idx, direction: Direction::Eigen { j: 1 }, per_k, classification, infimum: Some(infimum) })
}

fn sequence_t3(sys: &LinearSystem, block: &JordanBlock, idx: usize, k_max: usize) -> Result<BoundSequence> {
    let s = ChainSupports::along(sys, &block.phi[0], &block.phi[1])?;
    let per_k = points(k_max, |k| {
        let v = beta_plus_k(block.lambda, &s, k)?;
        Ok((v.plus, v.minus, v.bar))
    })?;
    let classification = classify_values(&per_k.iter().map(|p| p.bar).collect::<Vec<_>>());
    let infimum = min_over(&per_k);
    Ok(BoundSequence { theorem: Theorem::T3, block: idx, direction: Direction::Eigen { j: 2 }, per_k, classification, infimum: Some(infimum) })
}

fn sequence_t4(sys: &LinearSystem, block: &JordanBlock, idx: usize, k_max: usize) -> Result<BoundSequence> {
    let t = SupportTriple::along(sys, &block.phi[0])?;
    let per_k = points(k_max, |k| {
        let v = alpha_minus_k(block.lambda, &t, k)?;
        Ok((v.plus, v.minus, v.bar))
    })?;
    let classification = classify_values(&per_k.iter().map(|p| p.bar).collect::<Vec<_>>());
    let infimum = match alpha_minus_inf(block.lambda, &t) {
        Ok(v) => Infimum { value: v, justification: Justification::LimitFormula },
        Err(BoundError::HypothesisViolated { .. }) => min_over(&per_k),
        Err(e) => return Err(e),
    };
    Ok(BoundSequence { theorem: Theorem::T4, block: idx, direction: Direction::Eigen { j: 1 }, per_k, classification, infimum: Some(infimum) })
}

fn sequence_t6(sys: &LinearSystem, block: &JordanBlock, idx: usize, k_max: usize) -> Result<BoundSequence> {
    let frame = RotatingFrame::from_block(block)?;
    let s = RotatingSupports::new(sys, &frame)?;
    let mut best_dir = Direction::Rotating { j: 0, l0: 0 };
    let mut best_val = f64::INFINITY;
    let per_k = points(k_max, |k| {
        let v = alpha_c_k(&s, k)?;
        if v.bar < best_val {
            best_val = v.bar;
            best_dir = v.direction();
        }
        Ok((v.plus, v.minus, v.bar))
    })?;
    let classification = classify_values(&per_k.iter().map(|p| p.bar).collect::<Vec<_>>());
    let infimum = match alpha_c_inf(&s) {
        Ok(v) => Infimum { value: v, justification: Justification::LimitFormula },
        Err(BoundError::HypothesisViolated { .. }) => min_over(&per_k),
        Err(e) => return Err(e),
    };
    Ok(BoundSequence { theorem: Theorem::T6, block: idx, direction: best_dir, per_k, classification, infimum: Some(infimum) })
}

/// Skips a bound whose direction is degenerate or whose preconditions fail;
/// any other error is returned.
fn keep(r: Result<BoundSequence>, out: &mut Vec<BoundSequence>) -> Result<()> {
    match r {
        Ok(s) => {
            out.push(s);
            Ok(())
        }
        Err(BoundError::DegenerateDirection | BoundError::AsymmetricW | BoundError::IrrationalAngle | BoundError::ZeroModulus) => {
            Ok(())
        }
        Err(e) => Err(e),
    }
}

/// All applicable bounds for `k = 1..=k_max`, their per-`k` minimum, and
/// the smallest certified infimum.
pub fn best_bound(sys: &LinearSystem, spec: &SpectralDecomposition, k_max: usize) -> Result<BestBound> {
    if k_max == 0 {
        return Err(BoundError::InvalidK);
    }
    let mut sequences = Vec::new();
    for (idx, block) in spec.blocks.iter().enumerate() {
        match block.kind {
            BlockKind::RealPositive => {
                keep(sequence_t1(sys, block, idx, k_max), &mut sequences)?;
                if block.size >= 2 {
                    keep(sequence_t3(sys, block, idx, k_max), &mut sequences)?;
                }
            }
            BlockKind::RealNegative => keep(sequence_t4(sys, block, idx, k_max), &mut sequences)?,
            BlockKind::ComplexPair => keep(sequence_t6(sys, block, idx, k_max), &mut sequences)?,
            BlockKind::RealZero => {}
        }
    }
    if sequences.is_empty() {
        return Err(BoundError::NoApplicableBlock);
    }
    let per_k = (1..=k_max)
        .map(|k| {
            let mut best = PerK { k, value: f64::INFINITY, block: 0, theorem: Theorem::T1 };
            for s in &sequences {
                let v = s.per_k[k - 1].bar;
                if v < best.value {
                    best = PerK { k, value: v, block: s.block, theorem: s.theorem };
                }
            }
            best
        })
        .collect();
    let mut certificate: Option<AlphaCertificate> = None;
    for s in &sequences {
        let inf = s.infimum.expect("every sequence carries an infimum");
        if certificate.is_some_and(|c| c.alpha <= inf.value) {
            continue;
        }
        let k_star = match inf.justification {
            Justification::LimitFormula => KStar::Infinity,
            Justification::K1Value => KStar::Finite(1),
            Justification::MinOverComputed => s
                .per_k
                .iter()
                .find(|p| p.bar <= inf.value)
                .map_or(KStar::Infinity, |p| KStar::Finite(p.k)),
        };
        certificate = Some(AlphaCertificate {
            alpha: inf.value,
            k_star,
            block: s.block,
            theorem: s.theorem,
            direction: s.direction,
            justification: inf.justification,
        });
    }
    Ok(BestBound { sequences, per_k, certificate: certificate.expect("nonempty") })
}
