//! Parameter space, parametrizations and the alpha-scaled index distance.
//!
//! A point of parameter space is a triple (scale, orientation, location).
//! Orientations live on the torus `[-pi/2, pi/2]` with the endpoints
//! identified, so every angle handed out by this module is reduced into
//! `[-pi/2, pi/2)`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Reduce an angle to the fundamental domain `[-pi/2, pi/2)` of the
/// orientation torus.
pub fn reduce_angle(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("angle"));
    }
    Ok(reduce_angle_unchecked(theta))
}

pub(crate) fn reduce_angle_unchecked(theta: f64) -> f64 {
    let mut r = theta - PI * ((theta + FRAC_PI_2) / PI).floor();
    if r >= FRAC_PI_2 {
        r -= PI;
    }
    if r < -FRAC_PI_2 {
        r += PI;
    }
    r
}

/// Distance between two orientations on the torus of circumference pi.
/// The result lies in `[0, pi/2]`.
pub fn angle_diff(theta1: f64, theta2: f64) -> f64 {
    let d = (theta1 - theta2).rem_euclid(PI);
    d.min(PI - d)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub scale: f64,
    pub angle: f64,
    pub location: [f64; 2],
}

impl ParamPoint {
    pub fn new(scale: f64, angle: f64, location: [f64; 2]) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(invalid(format!("scale must be positive, got {scale}")));
        }
        if !(location[0].is_finite() && location[1].is_finite()) {
            return Err(Error::NonFinite("location"));
        }
        Ok(Self {
            scale,
            angle: reduce_angle(angle)?,
            location,
        })
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(invalid(format!("alpha must lie in [0, 1], got {alpha}")))
    }
}

/// `d_alpha` evaluated from its ingredients: the smaller of the two scales,
/// the torus angle gap, the orientation of the first ("lambda") argument and
/// the displacement `x_lambda - x_mu`.
#[inline]
pub fn d_alpha_parts(alpha: f64, s_min: f64, dtheta: f64, theta_lambda: f64, dx: [f64; 2]) -> f64 {
    let ang = s_min.powf(2.0 * (1.0 - alpha)) * dtheta * dtheta;
    let dist2 = dx[0] * dx[0] + dx[1] * dx[1];
    let along = theta_lambda.cos() * dx[0] - theta_lambda.sin() * dx[1];
    ang + s_min.powf(2.0 * alpha) * dist2 + s_min * s_min * along * along / (1.0 + ang)
}

/// The phase-space part `d_alpha(lambda, mu)` of the index distance.
///
/// Not symmetric: the co-direction `e_lambda` is taken from `p`.
pub fn index_distance_d(alpha: f64, p: &ParamPoint, q: &ParamPoint) -> Result<f64> {
    check_alpha(alpha)?;
    if !(p.scale > 0.0 && q.scale > 0.0) {
        return Err(invalid("scales must be positive"));
    }
    let dx = [p.location[0] - q.location[0], p.location[1] - q.location[1]];
    Ok(d_alpha_parts(
        alpha,
        p.scale.min(q.scale),
        angle_diff(p.angle, q.angle),
        p.angle,
        dx,
    ))
}

/// The alpha-scaled index distance `omega_alpha(lambda, mu) >= 1`.
pub fn omega_distance(alpha: f64, p: &ParamPoint, q: &ParamPoint) -> Result<f64> {
    let d = index_distance_d(alpha, p, q)?;
    let ratio = (p.scale / q.scale).max(q.scale / p.scale);
    Ok(ratio * (1.0 + d))
}

/// Order `(L, M, N1, N2)` of a molecule system; `None` means infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoleculeOrder {
    pub l: Option<u32>,
    pub m: Option<u32>,
    pub n1: Option<u32>,
    pub n2: Option<u32>,
}

impl MoleculeOrder {
    pub const INFINITE: Self = Self { l: None, m: None, n1: None, n2: None };

    pub fn finite(l: u32, m: u32, n1: u32, n2: u32) -> Self {
        Self { l: Some(l), m: Some(m), n1: Some(n1), n2: Some(n2) }
    }

    /// Replace infinite entries by the given proxy levels.
    pub fn with_proxy(self, proxy: MoleculeOrder) -> Self {
        Self {
            l: self.l.or(proxy.l),
            m: self.m.or(proxy.m),
            n1: self.n1.or(proxy.n1),
            n2: self.n2.or(proxy.n2),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.l.is_some() && self.m.is_some() && self.n1.is_some() && self.n2.is_some()
    }
}

/// Angular sampling of a curvelet parametrization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum AngleRule {
    /// `L_j = 2^floor(j(1-alpha))`, `omega_j = pi / L_j`, as in the concrete frame.
    Dyadic,
    /// `omega_j = c * sigma^(-j(1-alpha))`, `L_j = ceil(pi / omega_j)`.
    Geometric { step_constant: f64 },
}

/// Shear sampling of a shearlet parametrization:
/// `eta_j = c * sigma^(-j(1-alpha))`, `L_j = ceil(sigma^(j(1-alpha)))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShearRule {
    pub eta_constant: f64,
}

impl Default for ShearRule {
    fn default() -> Self {
        Self { eta_constant: 1.0 }
    }
}

/// `floor(j (1 - alpha))`, guarded against representation error.
pub fn angular_level(j: i32, alpha: f64) -> u32 {
    ((j as f64) * (1.0 - alpha) + 1e-9).floor().max(0.0) as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveletParametrization {
    pub alpha: f64,
    pub sigma: f64,
    pub tau: f64,
    pub angle_rule: AngleRule,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShearletParametrization {
    pub alpha: f64,
    pub sigma: f64,
    pub tau: f64,
    pub shear_rule: ShearRule,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveletParametrization {
    pub sigma: f64,
    pub tau: f64,
}

fn check_sampling(sigma: f64, tau: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 1.0) {
        return Err(invalid(format!("sigma must exceed 1, got {sigma}")));
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(invalid(format!("tau must be positive, got {tau}")));
    }
    Ok(())
}

impl CurveletParametrization {
    pub fn new(alpha: f64, sigma: f64, tau: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_sampling(sigma, tau)?;
        Ok(Self { alpha, sigma, tau, angle_rule: AngleRule::Dyadic })
    }

    pub fn with_angle_rule(mut self, rule: AngleRule) -> Result<Self> {
        if let AngleRule::Geometric { step_constant } = rule {
            if !(step_constant > 0.0) {
                return Err(invalid("angle step constant must be positive"));
            }
        }
        self.angle_rule = rule;
        Ok(self)
    }

    /// Number of orientations `L_j` at scale `j`.
    pub fn angle_count(&self, j: i32) -> usize {
        match self.angle_rule {
            AngleRule::Dyadic => 1usize << angular_level(j, self.alpha),
            AngleRule::Geometric { .. } => (PI / self.angle_step(j)).ceil().max(1.0) as usize,
        }
    }

    /// Angle step `omega_j`.
    pub fn angle_step(&self, j: i32) -> f64 {
        match self.angle_rule {
            AngleRule::Dyadic => PI / (1u64 << angular_level(j, self.alpha)) as f64,
            AngleRule::Geometric { step_constant } => {
                step_constant * self.sigma.powf(-(j as f64) * (1.0 - self.alpha))
            }
        }
    }

    pub fn class(&self, j: i32, l: i64) -> IndexClass {
        let theta = l as f64 * self.angle_step(j);
        let s = self.sigma.powi(j);
        let (c, sn) = (theta.cos(), theta.sin());
        // tau * R_{-theta} * diag(s^-1, s^-alpha)
        let a1 = self.tau / s;
        let a2 = self.tau * s.powf(-self.alpha);
        IndexClass {
            eps: 0,
            j,
            l,
            scale: s,
            angle: reduce_angle_unchecked(theta),
            basis: [[c * a1, sn * a2], [-sn * a1, c * a2]],
        }
    }
}

impl ShearletParametrization {
    pub fn new(alpha: f64, sigma: f64, tau: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_sampling(sigma, tau)?;
        Ok(Self { alpha, sigma, tau, shear_rule: ShearRule::default() })
    }

    /// The parametrization of the band-limited beta-shearlet system:
    /// `alpha = 1/beta`, `sigma = 2^(beta/2)`.
    pub fn for_beta(beta: f64, tau: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 1.0) {
            return Err(invalid(format!("beta must exceed 1, got {beta}")));
        }
        Self::new(1.0 / beta, 2f64.powf(beta / 2.0), tau)
    }

    pub fn shear_step(&self, j: i32) -> f64 {
        if j < 0 {
            return 0.0;
        }
        self.shear_rule.eta_constant * self.sigma.powf(-(j as f64) * (1.0 - self.alpha))
    }

    /// Shear range: `|l| <= L_j`.
    pub fn shear_range(&self, j: i32) -> i64 {
        if j < 0 {
            return 0;
        }
        (self.sigma.powf(j as f64 * (1.0 - self.alpha)) - 1e-9).ceil() as i64
    }

    pub fn class(&self, eps: i32, j: i32, l: i64) -> IndexClass {
        if j < 0 {
            return IndexClass {
                eps: 0,
                j: -1,
                l: 0,
                scale: 1.0,
                angle: 0.0,
                basis: [[self.tau, 0.0], [0.0, self.tau]],
            };
        }
        let eta = self.shear_step(j);
        let h = l as f64 * eta;
        let s = self.sigma.powi(j);
        let fast = self.tau / s;
        let slow = self.tau * s.powf(-self.alpha);
        let theta = eps as f64 * FRAC_PI_2 + (-h).atan();
        // x = tau * (S^eps)^-1 * A^eps_{alpha, sigma^-j} k
        let basis = if eps == 0 {
            [[fast, -h * slow], [0.0, slow]]
        } else {
            [[slow, 0.0], [-h * slow, fast]]
        };
        IndexClass {
            eps,
            j,
            l,
            scale: s,
            angle: reduce_angle_unchecked(theta),
            basis,
        }
    }
}

impl WaveletParametrization {
    pub fn new(sigma: f64, tau: f64) -> Result<Self> {
        check_sampling(sigma, tau)?;
        Ok(Self { sigma, tau })
    }

    /// `e` encodes the tensor type as `2 e1 + e2`.
    pub fn class(&self, e: i32, j: i32) -> IndexClass {
        let s = self.sigma.powi(j);
        let step = self.tau / s;
        IndexClass {
            eps: e,
            j,
            l: 0,
            scale: s,
            angle: 0.0,
            basis: [[step, 0.0], [0.0, step]],
        }
    }
}

/// An index of any of the three families. `eps` is the cone for shearlets,
/// the tensor type `2 e1 + e2` for wavelets and 0 for curvelets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParamIndex {
    pub eps: i32,
    pub j: i32,
    pub l: i64,
    pub k: [i64; 2],
}

/// All indices sharing `(eps, j, l)`: their locations form the lattice
/// `basis * Z^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexClass {
    pub eps: i32,
    pub j: i32,
    pub l: i64,
    pub scale: f64,
    pub angle: f64,
    pub basis: [[f64; 2]; 2],
}

/// Half-open axis-aligned rectangle `[min, max)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl Rect {
    pub fn unit() -> Self {
        Self { min: [0.0, 0.0], max: [1.0, 1.0] }
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        x[0] >= self.min[0] && x[0] < self.max[0] && x[1] >= self.min[1] && x[1] < self.max[1]
    }

    pub fn width(&self) -> f64 {
        self.max[0] - self.min[0]
    }

    pub fn height(&self) -> f64 {
        self.max[1] - self.min[1]
    }
}

impl IndexClass {
    pub fn location(&self, k: [i64; 2]) -> [f64; 2] {
        let (k1, k2) = (k[0] as f64, k[1] as f64);
        [
            self.basis[0][0] * k1 + self.basis[0][1] * k2,
            self.basis[1][0] * k1 + self.basis[1][1] * k2,
        ]
    }

    pub fn point(&self, k: [i64; 2]) -> ParamPoint {
        ParamPoint { scale: self.scale, angle: self.angle, location: self.location(k) }
    }

    pub fn index(&self, k: [i64; 2]) -> ParamIndex {
        ParamIndex { eps: self.eps, j: self.j, l: self.l, k }
    }

    /// Lattice coordinates whose location falls inside `window`, in
    /// lexicographic `(k1, k2)` order.
    pub fn lattice_in(&self, window: &Rect) -> Vec<[i64; 2]> {
        let b = self.basis;
        let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
        let inv = [[b[1][1] / det, -b[0][1] / det], [-b[1][0] / det, b[0][0] / det]];
        let corners = [
            window.min,
            [window.max[0], window.min[1]],
            [window.min[0], window.max[1]],
            window.max,
        ];
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for c in corners {
            for r in 0..2 {
                let v = inv[r][0] * c[0] + inv[r][1] * c[1];
                lo[r] = lo[r].min(v);
                hi[r] = hi[r].max(v);
            }
        }
        let mut out = Vec::new();
        for k1 in (lo[0].floor() as i64 - 1)..=(hi[0].ceil() as i64 + 1) {
            for k2 in (lo[1].floor() as i64 - 1)..=(hi[1].ceil() as i64 + 1) {
                if window.contains(self.location([k1, k2])) {
                    out.push([k1, k2]);
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Parametrization {
    Curvelet(CurveletParametrization),
    Shearlet(ShearletParametrization),
    Wavelet(WaveletParametrization),
}

impl Parametrization {
    pub fn alpha(&self) -> f64 {
        match self {
            Parametrization::Curvelet(c) => c.alpha,
            Parametrization::Shearlet(s) => s.alpha,
            Parametrization::Wavelet(_) => 1.0,
        }
    }

    pub fn sigma(&self) -> f64 {
        match self {
            Parametrization::Curvelet(c) => c.sigma,
            Parametrization::Shearlet(s) => s.sigma,
            Parametrization::Wavelet(w) => w.sigma,
        }
    }

    /// Index classes with `j <= max_scale_index`, ordered by `j`, then `eps`,
    /// then `l`.
    pub fn classes(&self, max_scale_index: i32) -> Vec<IndexClass> {
        let mut out = Vec::new();
        match self {
            Parametrization::Curvelet(c) => {
                for j in 0..=max_scale_index {
                    for l in 0..c.angle_count(j) as i64 {
                        out.push(c.class(j, l));
                    }
                }
            }
            Parametrization::Shearlet(s) => {
                if max_scale_index >= -1 {
                    out.push(s.class(0, -1, 0));
                }
                for j in 0..=max_scale_index {
                    let range = s.shear_range(j);
                    for eps in 0..2 {
                        for l in -range..=range {
                            out.push(s.class(eps, j, l));
                        }
                    }
                }
            }
            Parametrization::Wavelet(w) => {
                for j in 0..=max_scale_index {
                    let types: &[i32] = if j == 0 { &[0, 1, 2, 3] } else { &[1, 2, 3] };
                    for &e in types {
                        out.push(w.class(e, j));
                    }
                }
            }
        }
        out
    }

    /// Every index with `j <= max_scale_index` whose location lies in `window`.
    pub fn enumerate_indices(&self, max_scale_index: i32, window: &Rect) -> Vec<(ParamIndex, ParamPoint)> {
        self.classes(max_scale_index)
            .iter()
            .flat_map(|c| {
                c.lattice_in(window)
                    .into_iter()
                    .map(move |k| (c.index(k), c.point(k)))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub max_scale: i32,
    pub window: Rect,
}

/// JSON form of a parametrization together with its truncation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParametrizationSpec {
    #[serde(flatten)]
    pub family: Parametrization,
    pub truncation: Truncation,
}
