//! Truncated `(alpha, k)`-consistency sums between two parametrizations.
//!
//! Both index sets are enumerated in the periodized unit window, so
//! displacements are wrapped to the nearest image. For every outer
//! representative and every inner scale the sum `sum (1 + d_alpha)^{-k}` is
//! computed once at the top truncation; rung values and per-scale
//! statistics are read off these partial sums.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gramian::{linear_fit, torus_delta};
use crate::param::{angle_diff, IndexClass, ParamPoint, Parametrization, Rect};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderConfig {
    /// Scale cap of the first rung.
    pub start_scale: i32,
    pub rungs: usize,
    /// Outer classes kept per scale and cone; evenly spaced in `l`,
    /// endpoints included.
    pub outer_per_scale: usize,
    /// Final relative increment below which the sums count as saturated.
    pub tolerance: f64,
}

impl Default for LadderConfig {
    fn default() -> Self {
        Self { start_scale: 2, rungs: 8, outer_per_scale: 9, tolerance: 0.01 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    DivergentSuspect,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rung {
    pub max_scale: i32,
    /// `sup_lambda sum_mu omega(lambda, mu)^{-k}`.
    pub sup_ab: f64,
    /// `sup_mu sum_lambda omega(lambda, mu)^{-k}`.
    pub sup_ba: f64,
    /// Relative growth of `max(sup_ab, sup_ba)` over the previous rung.
    pub increment: f64,
}

/// `sup` over outer representatives at scale `outer_j` of
/// `sum_{inner at inner_j} (1 + d_alpha)^{-k}`, with `lambda` the inner index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerScaleSum {
    pub outer_j: i32,
    pub inner_j: i32,
    /// `max{s_lambda / s_mu, 1}`.
    pub ratio: f64,
    pub sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub k: f64,
    pub alpha: f64,
    /// The window is the periodized unit square on every rung.
    pub window: Rect,
    pub rungs: Vec<Rung>,
    pub final_increment: f64,
    pub verdict: Verdict,
    pub per_scale: Vec<PerScaleSum>,
    /// Slope of `log sum` against `log max{s_lambda/s_mu, 1}`.
    pub per_scale_slope: f64,
    pub outer_representatives: usize,
}

/// Inner index set of one class: scale, orientation and every location in
/// the unit window.
struct ClassPoints {
    j: i32,
    scale: f64,
    angle: f64,
    locations: Vec<[f64; 2]>,
}

fn class_points(par: &Parametrization, max_scale: i32) -> Vec<ClassPoints> {
    let window = Rect::unit();
    par.classes(max_scale)
        .into_iter()
        .map(|c| ClassPoints {
            j: c.j,
            scale: c.scale,
            angle: c.angle,
            locations: c.lattice_in(&window).into_iter().map(|k| c.location(k)).collect(),
        })
        .filter(|c| !c.locations.is_empty())
        .collect()
}

/// Evenly spaced subset of the classes at each `(j, eps)`, each with the
/// lattice point closest to the window centre.
fn representatives(par: &Parametrization, max_scale: i32, per_scale: usize) -> Vec<(i32, ParamPoint)> {
    let mut groups: Vec<Vec<IndexClass>> = Vec::new();
    for c in par.classes(max_scale) {
        match groups.last_mut() {
            Some(g) if g[0].j == c.j && g[0].eps == c.eps => g.push(c),
            _ => groups.push(vec![c]),
        }
    }
    let window = Rect::unit();
    let mut out = Vec::new();
    for g in groups {
        let m = per_scale.max(1).min(g.len());
        let picks: Vec<usize> = if m == g.len() {
            (0..m).collect()
        } else if m == 1 {
            vec![0]
        } else {
            let mut v: Vec<usize> = (0..m).map(|i| (i * (g.len() - 1) + (m - 1) / 2) / (m - 1)).collect();
            v.dedup();
            v
        };
        for i in picks {
            let c = &g[i];
            let best = c.lattice_in(&window).into_iter().map(|k| c.location(k)).min_by(|a, b| {
                let da = (a[0] - 0.5).hypot(a[1] - 0.5);
                let db = (b[0] - 0.5).hypot(b[1] - 0.5);
                da.total_cmp(&db)
            });
            if let Some(x) = best {
                out.push((c.j, ParamPoint { scale: c.scale, angle: c.angle, location: x }));
            }
        }
    }
    out
}

/// Adds `sum_{x in class} (1 + d_alpha)^{-k}` for every `k` to `acc`.
/// The co-direction comes from whichever side belongs to the first
/// parametrization: the class when `class_is_a`, otherwise `fixed`.
fn inner_sums(alpha: f64, class: &ClassPoints, fixed: &ParamPoint, class_is_a: bool, ks: &[f64], acc: &mut [f64]) {
    let s0 = class.scale.min(fixed.scale);
    let theta = if class_is_a { class.angle } else { fixed.angle };
    let dtheta = angle_diff(class.angle, fixed.angle);
    let ang = s0.powf(2.0 * (1.0 - alpha)) * dtheta * dtheta;
    let c1 = s0.powf(2.0 * alpha);
    let c2 = s0 * s0 / (1.0 + ang);
    let e = [theta.cos(), -theta.sin()];
    for x in &class.locations {
        let d = if class_is_a { torus_delta(*x, fixed.location) } else { torus_delta(fixed.location, *x) };
        let along = e[0] * d[0] + e[1] * d[1];
        let ln = (1.0 + ang + c1 * (d[0] * d[0] + d[1] * d[1]) + c2 * along * along).ln();
        for (a, &k) in acc.iter_mut().zip(ks) {
            *a += (-k * ln).exp();
        }
    }
}

/// `sums[rep][inner scale slot][k]` for one orientation of the pair.
struct Table {
    outer_j: Vec<i32>,
    outer_scale: Vec<f64>,
    inner_j: Vec<i32>,
    inner_scale: Vec<f64>,
    sums: Vec<Vec<Vec<f64>>>,
}

/// Outer points come from `outer`; when `outer_is_a` the inner points are
/// the `mu` of the pair, otherwise they are the `lambda`.
fn table(
    alpha: f64,
    outer: &Parametrization,
    inner: &Parametrization,
    max_scale: i32,
    cfg: &LadderConfig,
    ks: &[f64],
    outer_is_a: bool,
) -> Table {
    let reps = representatives(outer, max_scale, cfg.outer_per_scale);
    let points = class_points(inner, max_scale);
    let mut inner_j: Vec<i32> = points.iter().map(|c| c.j).collect();
    inner_j.dedup();
    let inner_scale: Vec<f64> = inner_j
        .iter()
        .map(|&j| points.iter().find(|c| c.j == j).map(|c| c.scale).unwrap_or(1.0))
        .collect();
    let mut sums = Vec::with_capacity(reps.len());
    for (_, rep) in &reps {
        let mut row = vec![vec![0.0; ks.len()]; inner_j.len()];
        for c in &points {
            let slot = inner_j.iter().position(|&j| j == c.j).unwrap_or(0);
            inner_sums(alpha, c, rep, !outer_is_a, ks, &mut row[slot]);
        }
        sums.push(row);
    }
    Table {
        outer_j: reps.iter().map(|r| r.0).collect(),
        outer_scale: reps.iter().map(|r| r.1.scale).collect(),
        inner_j,
        inner_scale,
        sums,
    }
}

impl Table {
    /// `sup` over outer reps with `j <= cap` of `sum_{inner j <= cap}`
    /// `ratio^{-k} (1 + d)^{-k}`.
    fn sup(&self, cap: i32, ki: usize, k: f64) -> f64 {
        let mut best = 0.0f64;
        for (r, row) in self.sums.iter().enumerate() {
            if self.outer_j[r] > cap {
                continue;
            }
            let mut total = 0.0;
            for (slot, v) in row.iter().enumerate() {
                if self.inner_j[slot] > cap {
                    continue;
                }
                let s = self.outer_scale[r];
                let t = self.inner_scale[slot];
                total += (s / t).max(t / s).powf(-k) * v[ki];
            }
            best = best.max(total);
        }
        best
    }
}

fn check(alpha: f64, ks: &[f64], cfg: &LadderConfig) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(invalid(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if ks.iter().any(|k| !(*k > 0.0)) {
        return Err(invalid("k must be positive"));
    }
    if cfg.rungs < 2 {
        return Err(invalid("a ladder needs at least two rungs"));
    }
    Ok(())
}

/// One rung: both orientations of the truncated sum at scale cap
/// `max_scale`, with `increment` set to 0.
pub fn consistency_sum(
    a: &Parametrization,
    b: &Parametrization,
    alpha: f64,
    k: f64,
    max_scale: i32,
    cfg: &LadderConfig,
) -> Result<Rung> {
    check(alpha, &[k], &LadderConfig { rungs: 2, ..*cfg })?;
    let ab = table(alpha, a, b, max_scale, cfg, &[k], true);
    let ba = table(alpha, b, a, max_scale, cfg, &[k], false);
    if ab.sums.is_empty() || ba.sums.is_empty() {
        return Err(Error::Empty("index enumeration"));
    }
    Ok(Rung { max_scale, sup_ab: ab.sup(max_scale, 0, k), sup_ba: ba.sup(max_scale, 0, k), increment: 0.0 })
}

/// Ladder of scale caps `start_scale, start_scale + 1, ...` for each `k`
/// in `ks`, sharing one pass over the index sets.
pub fn saturation_ladder(
    a: &Parametrization,
    b: &Parametrization,
    alpha: f64,
    ks: &[f64],
    cfg: &LadderConfig,
) -> Result<Vec<ConsistencyReport>> {
    check(alpha, ks, cfg)?;
    let top = cfg.start_scale + cfg.rungs as i32 - 1;
    let ab = table(alpha, a, b, top, cfg, ks, true);
    let ba = table(alpha, b, a, top, cfg, ks, false);
    if ab.sums.is_empty() || ba.sums.is_empty() {
        return Err(Error::Empty("index enumeration"));
    }
    let mut out = Vec::with_capacity(ks.len());
    for (ki, &k) in ks.iter().enumerate() {
        let mut rungs: Vec<Rung> = Vec::with_capacity(cfg.rungs);
        for r in 0..cfg.rungs {
            let cap = cfg.start_scale + r as i32;
            let (sup_ab, sup_ba) = (ab.sup(cap, ki, k), ba.sup(cap, ki, k));
            let increment = match rungs.last() {
                Some(p) => {
                    let prev = p.sup_ab.max(p.sup_ba);
                    (sup_ab.max(sup_ba) - prev) / prev
                }
                None => 0.0,
            };
            rungs.push(Rung { max_scale: cap, sup_ab, sup_ba, increment });
        }
        let final_increment = rungs.last().map_or(0.0, |r| r.increment);
        let verdict = if final_increment < cfg.tolerance {
            Verdict::Consistent
        } else if absolute_increments_grow(&rungs) {
            Verdict::DivergentSuspect
        } else {
            Verdict::Inconclusive
        };
        let per_scale = per_scale_sums(&ba, ki);
        let xs: Vec<f64> = per_scale.iter().map(|p| p.ratio.ln()).collect();
        let ys: Vec<f64> = per_scale.iter().map(|p| p.sum.ln()).collect();
        let per_scale_slope = if per_scale.len() >= 2 { linear_fit(&xs, &ys).0 } else { f64::NAN };
        out.push(ConsistencyReport {
            k,
            alpha,
            window: Rect::unit(),
            rungs,
            final_increment,
            verdict,
            per_scale,
            per_scale_slope,
            outer_representatives: ab.sums.len() + ba.sums.len(),
        });
    }
    Ok(out)
}

/// Whether the absolute growth of the sup-sums over the last two rungs is
/// at least that over the two rungs before. Pairs of rungs are compared so
/// that angle counts doubling every other scale do not decide the outcome.
fn absolute_increments_grow(rungs: &[Rung]) -> bool {
    let v: Vec<f64> = rungs.iter().map(|r| r.sup_ab.max(r.sup_ba)).collect();
    let n = v.len();
    if n >= 5 {
        v[n - 1] - v[n - 3] >= v[n - 3] - v[n - 5]
    } else if n >= 3 {
        v[n - 1] - v[n - 2] >= v[n - 2] - v[n - 3]
    } else {
        false
    }
}

/// Per outer and inner scale, the sup over outer representatives of the
/// inner `(1 + d)^{-k}` sums, where the inner index is the `lambda`.
fn per_scale_sums(t: &Table, ki: usize) -> Vec<PerScaleSum> {
    let mut outer: Vec<i32> = t.outer_j.clone();
    outer.dedup();
    let mut out = Vec::new();
    for &oj in &outer {
        for (slot, &ij) in t.inner_j.iter().enumerate() {
            let mut best = 0.0f64;
            let mut s_mu = 1.0;
            for (r, row) in t.sums.iter().enumerate() {
                if t.outer_j[r] == oj {
                    best = best.max(row[slot][ki]);
                    s_mu = t.outer_scale[r];
                }
            }
            if best > 0.0 {
                out.push(PerScaleSum { outer_j: oj, inner_j: ij, ratio: (t.inner_scale[slot] / s_mu).max(1.0), sum: best });
            }
        }
    }
    out
}

/// CSV with columns `rung,supAB,supBA,increment`.
pub fn write_ladder_csv<W: Write>(report: &ConsistencyReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rung", "supAB", "supBA", "increment"])?;
    for r in &report.rungs {
        w.write_record([
            r.max_scale.to_string(),
            crate::fmt_f64(r.sup_ab),
            crate::fmt_f64(r.sup_ba),
            crate::fmt_f64(r.increment),
        ])?;
    }
    w.flush()?;
    Ok(())
}
