//! Literal-summation reference implementation of every measure.
//!
//! Written directly from the definitions and deliberately naive: every
//! cdf and survival value is recomputed by filtering the support, and every
//! sum runs over explicit 1-based index ranges. Nothing here shares code with
//! the library. Probabilities are not required to sum to one, so the
//! functions can also be differentiated numerically.

#![allow(dead_code)]

use lifetime_info::MeasureId;

pub struct Dist<'a> {
    pub x: &'a [f64],
    pub p: &'a [f64],
}

impl Dist<'_> {
    fn r(&self) -> usize {
        self.x.len()
    }

    /// p_k for 1-based k.
    fn p(&self, k: usize) -> f64 {
        self.p[k - 1]
    }

    /// P(x_j) = Σ_{x_k <= x_j} p_k
    fn cdf(&self, j: usize) -> f64 {
        let t = self.x[j - 1];
        self.x
            .iter()
            .zip(self.p)
            .filter(|(x, _)| **x <= t)
            .map(|(_, p)| p)
            .sum()
    }

    /// P̄(x_j) = Σ_{x_k > x_j} p_k
    fn surv(&self, j: usize) -> f64 {
        let t = self.x[j - 1];
        self.x
            .iter()
            .zip(self.p)
            .filter(|(x, _)| **x > t)
            .map(|(_, p)| p)
            .sum()
    }
}

fn xlogx(x: f64) -> f64 {
    x * x.ln()
}

/// First summation index of residual-type sums.
fn first(j: usize, proper: bool) -> usize {
    if proper {
        j + 1
    } else {
        j
    }
}

pub fn shannon(d: &Dist) -> f64 {
    -(1..=d.r()).map(|k| xlogx(d.p(k))).sum::<f64>()
}

pub fn residual_entropy(d: &Dist, j: usize, proper: bool) -> f64 {
    let s = d.surv(j);
    -(first(j, proper)..=d.r())
        .map(|k| xlogx(d.p(k) / s))
        .sum::<f64>()
}

pub fn past_entropy(d: &Dist, j: usize) -> f64 {
    let c = d.cdf(j);
    -(1..=j).map(|k| xlogx(d.p(k) / c)).sum::<f64>()
}

pub fn cum_residual_entropy(d: &Dist) -> f64 {
    -(1..d.r()).map(|j| xlogx(d.surv(j))).sum::<f64>()
}

pub fn cum_past_entropy(d: &Dist) -> f64 {
    -(1..=d.r()).map(|j| xlogx(d.cdf(j))).sum::<f64>()
}

pub fn mean_residual(d: &Dist, j: usize) -> f64 {
    (j..d.r()).map(|k| d.surv(k)).sum::<f64>() / d.surv(j)
}

pub fn mean_past(d: &Dist, j: usize) -> f64 {
    (1..=j).map(|k| d.cdf(k)).sum::<f64>() / d.cdf(j)
}

pub fn inaccuracy(p: &Dist, q: &Dist) -> f64 {
    -(1..=p.r()).map(|k| p.p(k) * q.p(k).ln()).sum::<f64>()
}

pub fn residual_inaccuracy(p: &Dist, q: &Dist, j: usize, proper: bool) -> f64 {
    let (s, qs) = (p.surv(j), q.surv(j));
    -(first(j, proper)..=p.r())
        .map(|k| p.p(k) / s * (q.p(k) / qs).ln())
        .sum::<f64>()
}

pub fn past_inaccuracy(p: &Dist, q: &Dist, j: usize) -> f64 {
    let (c, qc) = (p.cdf(j), q.cdf(j));
    -(1..=j)
        .map(|k| p.p(k) / c * (q.p(k) / qc).ln())
        .sum::<f64>()
}

pub fn cum_residual_inaccuracy(p: &Dist, q: &Dist) -> f64 {
    -(1..p.r()).map(|j| p.surv(j) * q.surv(j).ln()).sum::<f64>()
}

pub fn cum_past_inaccuracy(p: &Dist, q: &Dist) -> f64 {
    -(1..=p.r()).map(|j| p.cdf(j) * q.cdf(j).ln()).sum::<f64>()
}

pub fn kl_divergence(p: &Dist, q: &Dist) -> f64 {
    (1..=p.r())
        .map(|k| p.p(k) * (p.p(k) / q.p(k)).ln())
        .sum::<f64>()
}

/// Evaluates `measure` at 1-based `j`; `None` for inadmissible requests
/// (residual quantities at `j = r`).
pub fn evaluate(
    measure: MeasureId,
    x: &[f64],
    p: &[f64],
    q: Option<&[f64]>,
    j: Option<usize>,
    proper: bool,
) -> Option<f64> {
    let p = Dist { x, p };
    let q = q.map(|q| Dist { x, p: q });
    let q = || q.as_ref().expect("paired measure needs q");
    let j = || j.expect("indexed measure needs j");
    let residual_ok = || j() < p.r();
    Some(match measure {
        MeasureId::Shannon => shannon(&p),
        MeasureId::ResidualEntropy => residual_ok().then(|| residual_entropy(&p, j(), proper))?,
        MeasureId::PastEntropy => past_entropy(&p, j()),
        MeasureId::CumResidualEntropy => cum_residual_entropy(&p),
        MeasureId::CumPastEntropy => cum_past_entropy(&p),
        MeasureId::MeanResidual => residual_ok().then(|| mean_residual(&p, j()))?,
        MeasureId::MeanPast => mean_past(&p, j()),
        MeasureId::Inaccuracy => inaccuracy(&p, q()),
        MeasureId::ResidualInaccuracy => {
            residual_ok().then(|| residual_inaccuracy(&p, q(), j(), proper))?
        }
        MeasureId::PastInaccuracy => past_inaccuracy(&p, q(), j()),
        MeasureId::CumResidualInaccuracy => cum_residual_inaccuracy(&p, q()),
        MeasureId::CumPastInaccuracy => cum_past_inaccuracy(&p, q()),
        MeasureId::KlDivergence => kl_divergence(&p, q()),
    })
}

/// Gradient of `measure` with respect to the probabilities of `p`, by
/// central differences of the literal sums.
pub fn numerical_gradient(
    measure: MeasureId,
    x: &[f64],
    p: &[f64],
    q: Option<&[f64]>,
    j: Option<usize>,
    proper: bool,
) -> Vec<f64> {
    let h = 1e-6;
    (0..p.len())
        .map(|k| {
            let at = |d: f64| {
                let mut bumped = p.to_vec();
                bumped[k] += d;
                evaluate(measure, x, &bumped, q, j, proper).expect("admissible")
            };
            (at(h) - at(-h)) / (2.0 * h)
        })
        .collect()
}

/// `g^T (diag(p) - p p^T) g`: the multinomial delta-method variance.
pub fn multinomial_quadratic_form(p: &[f64], g: &[f64]) -> f64 {
    let r = p.len();
    let mut v = 0.0;
    for a in 0..r {
        for b in 0..r {
            let cov = if a == b {
                p[a] * (1.0 - p[a])
            } else {
                -p[a] * p[b]
            };
            v += g[a] * g[b] * cov;
        }
    }
    v
}

/// All compositions of `total` into `parts` positive integers.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for head in 1..=total.saturating_sub(parts - 1) {
        for mut tail in compositions(total - head, parts - 1) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}
