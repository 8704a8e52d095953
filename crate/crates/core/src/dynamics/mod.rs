//! Hamiltonian flow on complex phase space.
//!
//! `H = px² + py² + α σ² − iβ σ` with `σ = x px + y py`. States seeded by
//! [`initial_state`] have real positions and complex momenta; the flow keeps the
//! positions real and conserves `H` together with the invariants `I₁, I₂, I₃`
//! and the Higgs generators `J₁, J₂, J₃`.

mod integrator;

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::orbit::{compute_constants, semi_axes, OrbitSpec, Params};

pub use integrator::{
    integrate, integrate_batch, IntegratorConfig, Method, Trajectory, TrajectorySample,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Point of complex phase space `(x, y, px, py)`; also used for phase velocities.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexPhasePoint {
    pub x: Complex64,
    pub y: Complex64,
    pub px: Complex64,
    pub py: Complex64,
}

impl ComplexPhasePoint {
    pub fn new(x: Complex64, y: Complex64, px: Complex64, py: Complex64) -> Self {
        Self { x, y, px, py }
    }

    pub fn real(x: f64, y: f64, px: f64, py: f64) -> Self {
        Self::new(x.into(), y.into(), px.into(), py.into())
    }

    pub fn components(&self) -> [Complex64; 4] {
        [self.x, self.y, self.px, self.py]
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }

    /// Largest `|Im|` of the two position components.
    pub fn position_imag(&self) -> f64 {
        self.x.im.abs().max(self.y.im.abs())
    }
}

impl Add for ComplexPhasePoint {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.px + o.px, self.py + o.py)
    }
}

impl Sub for ComplexPhasePoint {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.px - o.px, self.py - o.py)
    }
}

impl Mul<f64> for ComplexPhasePoint {
    type Output = Self;
    fn mul(self, h: f64) -> Self {
        Self::new(self.x * h, self.y * h, self.px * h, self.py * h)
    }
}

fn dilation(s: &ComplexPhasePoint) -> Complex64 {
    s.x * s.px + s.y * s.py
}

pub fn hamiltonian(params: Params, s: &ComplexPhasePoint) -> Complex64 {
    let sigma = dilation(s);
    s.px * s.px + s.py * s.py + params.alpha * sigma * sigma - I * params.beta * sigma
}

/// Hamilton's equations `(∂H/∂px, ∂H/∂py, −∂H/∂x, −∂H/∂y)`.
pub fn hamilton_rhs(params: Params, s: &ComplexPhasePoint) -> ComplexPhasePoint {
    let sigma = dilation(s);
    // ∂H/∂σ
    let k = 2.0 * params.alpha * sigma - I * params.beta;
    ComplexPhasePoint {
        x: 2.0 * s.px + k * s.x,
        y: 2.0 * s.py + k * s.y,
        px: -k * s.px,
        py: -k * s.py,
    }
}

/// Seeds the flow at the apex `r = μ_y` of the orbit described by `spec`.
///
/// At the apex the radicand of the radial momentum vanishes, leaving
/// `p_r = iβμ_y / (2(1 + αμ_y²))`; the Cartesian momenta follow from
/// `px = p_r x/r − p_φ y/r²`, `py = p_r y/r + p_φ x/r²`. The apex sits at azimuth
/// `φ₀ + π/4`, which is the closed-form position at `t = t₀ − π/(8√U)`.
pub fn initial_state(params: Params, spec: &OrbitSpec) -> Result<ComplexPhasePoint> {
    let consts = compute_constants(params, spec)?;
    if !consts.region.is_closed() {
        return Err(Error::RegionForbidden(format!(
            "cannot seed a flow in region {}",
            consts.region
        )));
    }
    let (_, r) = semi_axes(&consts)?;
    let metric = 1.0 + params.alpha * r * r;
    if metric.abs() <= 1e-12 {
        return domain("apex lies on the parabolic circle 1 + αr² = 0");
    }
    let p_r = I * (params.beta * r / (2.0 * metric));
    let (x, y) = (r * consts.apex_angle.sin(), r * consts.apex_angle.cos());
    let l = spec.p_phi;
    Ok(ComplexPhasePoint {
        x: x.into(),
        y: y.into(),
        px: p_r * (x / r) - l * y / (r * r),
        py: p_r * (y / r) + l * x / (r * r),
    })
}

/// Values of the constants of motion at one phase point.
///
/// `I₁` is real on physical trajectories but is kept complex here so that the
/// same type serves arbitrary complex states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantSet {
    pub i1: Complex64,
    pub i2: Complex64,
    pub i3: Complex64,
    pub j1: Complex64,
    pub j2: Complex64,
    pub j3: Complex64,
    pub h: Complex64,
}

impl InvariantSet {
    pub const NAMES: [&'static str; 7] = ["I1", "I2", "I3", "J1", "J2", "J3", "H"];

    pub fn values(&self) -> [Complex64; 7] {
        [self.i1, self.i2, self.i3, self.j1, self.j2, self.j3, self.h]
    }

    /// Componentwise `|self − other|`.
    pub fn drift_from(&self, other: &InvariantSet) -> Drift {
        let a = self.values();
        let b = other.values();
        let d: [f64; 7] = std::array::from_fn(|k| (a[k] - b[k]).norm());
        Drift::from_array(d)
    }
}

pub fn invariants(params: Params, s: &ComplexPhasePoint) -> InvariantSet {
    let metric = 1.0 + params.alpha * (s.x * s.x + s.y * s.y);
    let ib = I * params.beta;
    let i1 = s.x * s.py - s.y * s.px;
    let i2 = metric * s.py * s.py - ib * s.y * s.py;
    let i3 = metric * s.px * s.px - ib * s.x * s.px;
    InvariantSet {
        i1,
        i2,
        i3,
        j1: 0.5 * i1,
        j2: 0.5 * (i3 - i2),
        j3: metric * s.px * s.py - 0.5 * ib * (s.x * s.py + s.y * s.px),
        h: hamiltonian(params, s),
    }
}

/// Per-invariant absolute deviation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Drift {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub h: f64,
}

impl Drift {
    fn from_array(d: [f64; 7]) -> Self {
        Self {
            i1: d[0],
            i2: d[1],
            i3: d[2],
            j1: d[3],
            j2: d[4],
            j3: d[5],
            h: d[6],
        }
    }

    pub fn values(&self) -> [f64; 7] {
        [self.i1, self.i2, self.i3, self.j1, self.j2, self.j3, self.h]
    }

    pub fn max(&self) -> f64 {
        self.values().into_iter().fold(0.0, f64::max)
    }

    fn max_with(&self, o: &Drift) -> Drift {
        let a = self.values();
        let b = o.values();
        Drift::from_array(std::array::from_fn(|k| a[k].max(b[k])))
    }
}

/// Drift of every invariant at every sample, relative to the first sample.
pub fn drift_series(params: Params, traj: &[TrajectorySample]) -> Vec<Drift> {
    let Some(first) = traj.first() else {
        return Vec::new();
    };
    let reference = invariants(params, &first.state);
    traj.iter()
        .map(|s| invariants(params, &s.state).drift_from(&reference))
        .collect()
}

/// Maximum drift of each invariant over the trajectory.
pub fn conservation_report(params: Params, traj: &[TrajectorySample]) -> Result<Drift> {
    if traj.is_empty() {
        return Err(Error::InvalidConfig(
            "conservation report needs at least one sample".into(),
        ));
    }
    Ok(drift_series(params, traj)
        .iter()
        .fold(Drift::default(), |acc, d| acc.max_with(d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: Params = Params::ZERNIKE;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hamiltonian_trivial_cases() {
        assert_eq!(hamiltonian(Z, &ComplexPhasePoint::default()), c(0.0, 0.0));
        let free = Params::new(0.0, 0.0).unwrap();
        let s = ComplexPhasePoint::new(c(0.3, 2.0), c(-7.0, 0.1), 1.0.into(), 2.0.into());
        assert_eq!(hamiltonian(free, &s), c(5.0, 0.0));
        let v = hamilton_rhs(free, &s);
        assert_eq!(
            v,
            ComplexPhasePoint::new(2.0.into(), 4.0.into(), 0.0.into(), 0.0.into())
        );
    }

    #[test]
    fn circle_seed() {
        let s = initial_state(Z, &OrbitSpec::new(15.0, 3.0)).unwrap();
        let mu = 3f64.sqrt() / 2.0;
        assert_eq!(s.x, c(0.0, 0.0));
        assert!((s.y.re - mu).abs() < 1e-15);
        assert!((s.px - c(-2.0 * 3f64.sqrt(), 0.0)).norm() < 1e-14);
        // p_r = iβμ/(2(1 + αμ²)) = −2√3 i
        assert!((s.py - c(0.0, -2.0 * 3f64.sqrt())).norm() < 1e-14);
        let h = hamiltonian(Z, &s);
        assert!((h - c(15.0, 0.0)).norm() < 1e-13, "{h}");
        assert!((invariants(Z, &s).i1 - c(3.0, 0.0)).norm() < 1e-14);
        // radius is stationary on the circle
        let v = hamilton_rhs(Z, &s);
        assert!((s.x * v.x + s.y * v.y).norm() < 1e-13);
    }

    #[test]
    fn seed_symmetries() {
        let a = initial_state(Z, &OrbitSpec::new(35.0, 3.0)).unwrap();
        let b = initial_state(Z, &OrbitSpec::new(35.0, -3.0)).unwrap();
        assert_eq!(a.px, -b.px);
        assert_eq!((a.x, a.y, a.py), (b.x, b.y, b.py));

        // with β = 0 the apex always sits on the parabolic circle
        let no_beta = Params::new(-0.5, 0.0).unwrap();
        assert!(matches!(
            initial_state(no_beta, &OrbitSpec::new(20.0, 3.0)),
            Err(Error::Domain(_))
        ));

        assert!(matches!(
            initial_state(Z, &OrbitSpec::new(10.0, 3.0)),
            Err(Error::RegionForbidden(_))
        ));
        assert!(matches!(
            initial_state(Z, &OrbitSpec::new(10.0, 0.0)),
            Err(Error::RegionForbidden(_))
        ));
    }

    #[test]
    fn momentum_free_state_has_zero_invariants() {
        let s = ComplexPhasePoint::new(c(0.3, 0.2), c(-0.5, 1.0), 0.0.into(), 0.0.into());
        assert!(invariants(Z, &s).values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn conservation_report_edge_cases() {
        assert!(conservation_report(Z, &[]).is_err());
        let s = initial_state(Z, &OrbitSpec::new(35.0, 3.0)).unwrap();
        let one = [TrajectorySample { t: 0.0, state: s }];
        assert_eq!(conservation_report(Z, &one).unwrap().max(), 0.0);
        let mut kicked = s;
        kicked.px += 1e-3;
        let three = [
            one[0],
            TrajectorySample {
                t: 0.1,
                state: kicked,
            },
            one[0],
        ];
        let d = conservation_report(Z, &three).unwrap();
        assert!(d.i1 > 1e-4 && d.h > 1e-4);
    }

    fn random_point(rng: &mut impl rand::Rng) -> ComplexPhasePoint {
        let mut z = || {
            let r: f64 = rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        };
        ComplexPhasePoint::new(z(), z(), z(), z())
    }

    #[test]
    fn rhs_matches_finite_differences() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let params = [
            Z,
            Params::new(1.0, 2.0).unwrap(),
            Params::new(0.3, -0.7).unwrap(),
        ];
        let h = 1e-5;
        for k in 0..1000 {
            let p = params[k % 3];
            let s = random_point(&mut rng);
            let v = hamilton_rhs(p, &s);
            let partial = |f: &dyn Fn(&mut ComplexPhasePoint) -> &mut Complex64| {
                let (mut a, mut b) = (s, s);
                *f(&mut a) += h;
                *f(&mut b) -= h;
                (hamiltonian(p, &a) - hamiltonian(p, &b)) / (2.0 * h)
            };
            let fd = [
                partial(&|q| &mut q.px),
                partial(&|q| &mut q.py),
                -partial(&|q| &mut q.x),
                -partial(&|q| &mut q.y),
            ];
            for (exact, approx) in v.components().iter().zip(fd) {
                let err = (exact - approx).norm() / exact.norm().max(1.0);
                assert!(err < 1e-7, "{exact} vs {approx}");
            }
        }
    }

    #[test]
    fn hamiltonian_decomposes_into_invariants() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for k in 0..100 {
            let p = Params::new(-1.0 + 0.02 * k as f64, 2.0 - 0.03 * k as f64).unwrap();
            let s = random_point(&mut rng);
            let inv = invariants(p, &s);
            let composed = inv.i3 + inv.i2 - p.alpha * inv.i1 * inv.i1;
            assert!((inv.h - composed).norm() < 1e-13);
            assert!((inv.j1 - 0.5 * inv.i1).norm() == 0.0);
        }
    }
}
