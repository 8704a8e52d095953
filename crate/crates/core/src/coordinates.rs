//! Vertical projection of the plane onto a sphere or hyperboloid, the
//! separable coordinate charts on those surfaces, and lifts of closed orbits.
//!
//! For `α < 0` the disk `r² < 1/|α|` projects onto the upper hemisphere of
//! radius `R = 1/√|α|` and its exterior onto the upper half of the one-sheeted
//! hyperboloid `ξ₁² + ξ₂² − ξ₃² = R²`. For `α > 0` the whole plane projects onto
//! the upper sheet of `ξ₃² − ξ₁² − ξ₂² = ϱ²`, `ϱ = 1/√α`. The circle
//! `−αr² = 1` belongs to neither and is rejected.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::ComplexPhasePoint;
use crate::error::{domain, Error, Result};
use crate::orbit::{r_squared_of_phi, EllipseConstants, Params};

/// Tolerance on `k₁² + k₃² = 1` and on the parabolic circle `|α|r² = 1`.
pub const GEOMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Surface {
    /// `ξ₁² + ξ₂² + ξ₃² = R²`
    Sphere,
    /// `ξ₁² + ξ₂² − ξ₃² = R²`
    OneSheet,
    /// `ξ₃² − ξ₁² − ξ₂² = ϱ²`, `ξ₃ > 0`
    TwoSheet,
}

/// Surface scales; `radius` exists for `α < 0`, `rho` for `α > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceParams {
    pub radius: Option<f64>,
    pub rho: Option<f64>,
}

impl SurfaceParams {
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if alpha < 0.0 {
            Ok(Self {
                radius: Some(1.0 / (-alpha).sqrt()),
                rho: None,
            })
        } else if alpha > 0.0 {
            Ok(Self {
                radius: None,
                rho: Some(1.0 / alpha.sqrt()),
            })
        } else {
            domain("α = 0 has no curved surface")
        }
    }

    /// Explicit scales, for charts used independently of an `α`.
    pub fn new(radius: f64, rho: f64) -> Result<Self> {
        if !(radius > 0.0 && rho > 0.0 && radius.is_finite() && rho.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "scales must be positive, got R = {radius}, rho = {rho}"
            )));
        }
        Ok(Self {
            radius: Some(radius),
            rho: Some(rho),
        })
    }

    fn scale(&self, surface: Surface) -> Result<f64> {
        let s = match surface {
            Surface::Sphere | Surface::OneSheet => self.radius,
            Surface::TwoSheet => self.rho,
        };
        match s {
            Some(s) => Ok(s),
            None => domain(format!("no scale for the {surface:?} surface")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbientPoint {
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

impl AmbientPoint {
    pub fn new(xi1: f64, xi2: f64, xi3: f64) -> Self {
        Self { xi1, xi2, xi3 }
    }
}

impl Surface {
    /// `|lhs − scale²|` of the defining equation.
    pub fn residual(self, p: &AmbientPoint, scale: f64) -> f64 {
        let (a, b, c) = (p.xi1 * p.xi1, p.xi2 * p.xi2, p.xi3 * p.xi3);
        let lhs = match self {
            Surface::Sphere => a + b + c,
            Surface::OneSheet => a + b - c,
            Surface::TwoSheet => c - a - b,
        };
        (lhs - scale * scale).abs()
    }
}

/// Sign choice `ξ₁ = ±R cosh τ₁` of the one-sheet equidistant chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Elliptic chart parameters with `k₁² + k₃² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticParams {
    pub k1: f64,
    pub k3: f64,
}

impl EllipticParams {
    /// `k₁ = cos f`, `k₃ = sin f`.
    pub fn from_focal_angle(f: f64) -> Self {
        Self {
            k1: f.cos(),
            k3: f.sin(),
        }
    }

    pub fn from_k(k1: f64, k3: f64) -> Result<Self> {
        let dev = k1 * k1 + k3 * k3 - 1.0;
        if !(dev.abs() <= GEOMETRY_TOL) {
            return domain(format!("k1² + k3² − 1 = {dev:e}"));
        }
        Ok(Self { k1, k3 })
    }
}

/// The separable charts. Sphere: `I, II, III`, elliptic; one-sheet: `H′I–H′III`;
/// two-sheet: `HI–HIII`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CoordSystem {
    /// `(R sinϑ cosφ, R sinϑ sinφ, R cosϑ)`, `ϑ ∈ [0, π/2]`, `φ ∈ [0, 2π)`
    I,
    /// `(R cosϑ, R sinϑ cosφ, R sinϑ sinφ)`, `ϑ ∈ [0, π]`, `φ ∈ [0, π]`
    II,
    /// `(R sinϑ sinφ, R cosϑ, R sinϑ cosφ)`, `ϑ ∈ [0, π]`, `φ ∈ [−π/2, π/2]`
    III,
    /// `(R coshτ cosφ, R coshτ sinφ, R sinhτ)`
    HpI,
    /// `(±R coshτ₁, R sinhτ₁ sinhτ₂, R sinhτ₁ coshτ₂)`
    HpII(Branch),
    /// `(R coshτ sinφ, R cosφ, R sinhτ sinφ)`
    HpIII,
    /// `(ϱ sinhτ cosφ, ϱ sinhτ sinφ, ϱ coshτ)`, `τ ≥ 0`
    HI,
    /// `(ϱ sinhτ₁, ϱ coshτ₁ sinhτ₂, ϱ coshτ₁ coshτ₂)`
    HII,
    /// `(ϱ coshτ₁ sinhτ₂, ϱ sinhτ₁, ϱ coshτ₁ coshτ₂)`
    HIII,
    /// `(R cosφ √(1 − k₁²cos²ϑ), R sinϑ sinφ, R cosϑ √(1 − k₃²cos²φ))`, `ϑ ∈ [0, π]`, `φ ∈ [0, 2π)`
    Elliptic(EllipticParams),
}

impl CoordSystem {
    /// The non-elliptic charts, with both H′II branches.
    pub const STANDARD: [CoordSystem; 10] = [
        CoordSystem::I,
        CoordSystem::II,
        CoordSystem::III,
        CoordSystem::HpI,
        CoordSystem::HpII(Branch::Plus),
        CoordSystem::HpII(Branch::Minus),
        CoordSystem::HpIII,
        CoordSystem::HI,
        CoordSystem::HII,
        CoordSystem::HIII,
    ];

    pub fn surface(self) -> Surface {
        match self {
            CoordSystem::I | CoordSystem::II | CoordSystem::III | CoordSystem::Elliptic(_) => {
                Surface::Sphere
            }
            CoordSystem::HpI | CoordSystem::HpII(_) | CoordSystem::HpIII => Surface::OneSheet,
            CoordSystem::HI | CoordSystem::HII | CoordSystem::HIII => Surface::TwoSheet,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CoordSystem::I => "I",
            CoordSystem::II => "II",
            CoordSystem::III => "III",
            CoordSystem::HpI => "HpI",
            CoordSystem::HpII(Branch::Plus) => "HpII+",
            CoordSystem::HpII(Branch::Minus) => "HpII-",
            CoordSystem::HpIII => "HpIII",
            CoordSystem::HI => "HI",
            CoordSystem::HII => "HII",
            CoordSystem::HIII => "HIII",
            CoordSystem::Elliptic(_) => "elliptic",
        }
    }
}

impl fmt::Display for CoordSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoordSystem {
    type Err = Error;

    /// Parses every name except `elliptic`, which needs `k₁, k₃`.
    fn from_str(s: &str) -> Result<Self> {
        Self::STANDARD
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .or(match s {
                "HpII" => Some(CoordSystem::HpII(Branch::Plus)),
                _ => None,
            })
            .ok_or_else(|| Error::InvalidConfig(format!("unknown coordinate system {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCoords {
    pub system: CoordSystem,
    pub u1: f64,
    pub u2: f64,
}

impl SurfaceCoords {
    pub fn new(system: CoordSystem, u1: f64, u2: f64) -> Self {
        Self { system, u1, u2 }
    }
}

fn surface_of(params: Params, r2: f64) -> Result<Surface> {
    let a = params.alpha;
    if a == 0.0 {
        return domain("α = 0 has no curved surface");
    }
    if a > 0.0 {
        return Ok(Surface::TwoSheet);
    }
    let t = -a * r2;
    if (t - 1.0).abs() <= GEOMETRY_TOL {
        domain(format!(
            "point lies on the parabolic circle −αr² = 1 (−αr² = {t})"
        ))
    } else if t < 1.0 {
        Ok(Surface::Sphere)
    } else {
        Ok(Surface::OneSheet)
    }
}

/// Vertical projection `(x, y) ↦ (x, y, ξ₃)` onto the surface selected by `α`
/// and the side of the parabolic circle.
pub fn disk_to_surface(params: Params, x: f64, y: f64) -> Result<AmbientPoint> {
    let r2 = x * x + y * y;
    let scale = SurfaceParams::from_alpha(params.alpha)?;
    let xi3 = match surface_of(params, r2)? {
        Surface::Sphere => {
            let big = scale.radius.unwrap_or(f64::NAN);
            ((big - x.hypot(y)) * (big + x.hypot(y))).sqrt()
        }
        Surface::OneSheet => {
            let big = scale.radius.unwrap_or(f64::NAN);
            ((x.hypot(y) - big) * (x.hypot(y) + big)).sqrt()
        }
        Surface::TwoSheet => {
            let rho = scale.rho.unwrap_or(f64::NAN);
            (rho * rho + r2).sqrt()
        }
    };
    Ok(AmbientPoint::new(x, y, xi3))
}

pub fn to_ambient(coords: &SurfaceCoords, surf: &SurfaceParams) -> Result<AmbientPoint> {
    let s = surf.scale(coords.system.surface())?;
    let (u, v) = (coords.u1, coords.u2);
    if !u.is_finite() || !v.is_finite() {
        return domain(format!("coordinates must be finite, got ({u}, {v})"));
    }
    let p = match coords.system {
        CoordSystem::I => {
            AmbientPoint::new(s * u.sin() * v.cos(), s * u.sin() * v.sin(), s * u.cos())
        }
        CoordSystem::II => {
            AmbientPoint::new(s * u.cos(), s * u.sin() * v.cos(), s * u.sin() * v.sin())
        }
        CoordSystem::III => {
            AmbientPoint::new(s * u.sin() * v.sin(), s * u.cos(), s * u.sin() * v.cos())
        }
        CoordSystem::HpI => {
            AmbientPoint::new(s * u.cosh() * v.cos(), s * u.cosh() * v.sin(), s * u.sinh())
        }
        CoordSystem::HpII(b) => AmbientPoint::new(
            b.sign() * s * u.cosh(),
            s * u.sinh() * v.sinh(),
            s * u.sinh() * v.cosh(),
        ),
        CoordSystem::HpIII => {
            AmbientPoint::new(s * u.cosh() * v.sin(), s * v.cos(), s * u.sinh() * v.sin())
        }
        CoordSystem::HI => {
            AmbientPoint::new(s * u.sinh() * v.cos(), s * u.sinh() * v.sin(), s * u.cosh())
        }
        CoordSystem::HII => AmbientPoint::new(
            s * u.sinh(),
            s * u.cosh() * v.sinh(),
            s * u.cosh() * v.cosh(),
        ),
        CoordSystem::HIII => AmbientPoint::new(
            s * u.cosh() * v.sinh(),
            s * u.sinh(),
            s * u.cosh() * v.cosh(),
        ),
        CoordSystem::Elliptic(k) => return elliptic_point(u, v, k.k1, k.k3, s),
    };
    Ok(p)
}

/// Angle in `[0, 2π)`.
fn wrap(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Inverse chart; picks the representative inside the chart's ranges.
pub fn from_ambient(
    p: &AmbientPoint,
    system: CoordSystem,
    surf: &SurfaceParams,
) -> Result<SurfaceCoords> {
    let surface = system.surface();
    let s = surf.scale(surface)?;
    let AmbientPoint { xi1, xi2, xi3 } = *p;
    let res = surface.residual(p, s);
    let size = xi1 * xi1 + xi2 * xi2 + xi3 * xi3 + s * s;
    if !(res <= 1e-9 * size) {
        return domain(format!(
            "point is off the {surface:?} surface (residual {res:e})"
        ));
    }
    let out = |u1, u2| Ok(SurfaceCoords::new(system, u1, u2));
    match system {
        CoordSystem::I => {
            if xi3 < 0.0 {
                return domain("System I covers the upper hemisphere ξ₃ ≥ 0");
            }
            out(xi1.hypot(xi2).atan2(xi3), wrap(xi2.atan2(xi1)))
        }
        CoordSystem::II => {
            if xi3 < 0.0 {
                return domain("System II needs ξ₃ ≥ 0 (φ ∈ [0, π])");
            }
            out(xi2.hypot(xi3).atan2(xi1), xi3.atan2(xi2))
        }
        CoordSystem::III => {
            if xi3 < 0.0 {
                return domain("System III needs ξ₃ ≥ 0 (φ ∈ [−π/2, π/2])");
            }
            out(xi1.hypot(xi3).atan2(xi2), xi1.atan2(xi3))
        }
        CoordSystem::HpI => out((xi3 / s).asinh(), wrap(xi2.atan2(xi1))),
        CoordSystem::HpII(b) => {
            if xi1 * b.sign() <= 0.0 {
                return domain(format!("ξ₁ = {xi1} is on the other branch"));
            }
            if !(xi2.abs() < xi3.abs()) {
                return domain("H′II needs |ξ₂| < |ξ₃|");
            }
            let t2 = (xi2 / xi3).atanh();
            out((xi3 / (s * t2.cosh())).asinh(), t2)
        }
        CoordSystem::HpIII => {
            let sin_phi_sq = (xi1 - xi3) * (xi1 + xi3) / (s * s);
            if !(sin_phi_sq > 0.0) || xi1 == 0.0 {
                return domain("H′III is singular at the poles sin φ = 0");
            }
            let sin_phi = xi1.signum() * sin_phi_sq.sqrt();
            out((xi3 / xi1).atanh(), wrap(sin_phi.atan2(xi2 / s)))
        }
        CoordSystem::HI => {
            if xi3 <= 0.0 {
                return domain("HI covers the upper sheet ξ₃ > 0");
            }
            out((xi1.hypot(xi2) / s).asinh(), wrap(xi2.atan2(xi1)))
        }
        CoordSystem::HII => {
            if xi3 <= 0.0 {
                return domain("HII covers the upper sheet ξ₃ > 0");
            }
            let t1 = (xi1 / s).asinh();
            out(t1, (xi2 / (s * t1.cosh())).asinh())
        }
        CoordSystem::HIII => {
            if xi3 <= 0.0 {
                return domain("HIII covers the upper sheet ξ₃ > 0");
            }
            let t1 = (xi2 / s).asinh();
            out(t1, (xi1 / (s * t1.cosh())).asinh())
        }
        CoordSystem::Elliptic(k) => {
            let (a1, a3) = ((xi1 / s).powi(2), (xi3 / s).powi(2));
            let (k1sq, k3sq) = (k.k1 * k.k1, k.k3 * k.k3);
            // cos²ϑ is the smaller root of k₁²u² − S u + a₃ = 0
            let sum = 1.0 - k3sq * a1 + k1sq * a3;
            let disc = (sum * sum - 4.0 * k1sq * a3).max(0.0);
            let den = sum + disc.sqrt();
            let cos2_theta = if den > 0.0 {
                (2.0 * a3 / den).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let rest = 1.0 - k1sq * cos2_theta;
            let cos2_phi = if rest > 0.0 {
                (a1 / rest).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let cos_t = xi3.signum() * cos2_theta.sqrt();
            let sin_t = (1.0 - cos2_theta).sqrt();
            let cos_p = xi1.signum() * cos2_phi.sqrt();
            let sin_p = xi2.signum() * (1.0 - cos2_phi).sqrt();
            out(sin_t.atan2(cos_t), wrap(sin_p.atan2(cos_p)))
        }
    }
}

/// Point of the elliptic chart on the sphere of radius `radius`.
pub fn elliptic_point(
    vartheta: f64,
    varphi: f64,
    k1: f64,
    k3: f64,
    radius: f64,
) -> Result<AmbientPoint> {
    EllipticParams::from_k(k1, k3)?;
    let (ct, st) = (vartheta.cos(), vartheta.sin());
    let (cp, sp) = (varphi.cos(), varphi.sin());
    Ok(AmbientPoint::new(
        radius * cp * (1.0 - k1 * k1 * ct * ct).max(0.0).sqrt(),
        radius * st * sp,
        radius * ct * (1.0 - k3 * k3 * cp * cp).max(0.0).sqrt(),
    ))
}

/// `K_e²` at a phase point with `k₃² = 1 − k₁²`.
pub fn elliptic_separation_constant(params: Params, k1sq: f64, s: &ComplexPhasePoint) -> Complex64 {
    let k3sq = 1.0 - k1sq;
    let a = params.alpha;
    let i_beta = Complex64::new(0.0, params.beta);
    let metric = 1.0 + a * (s.x * s.x + s.y * s.y);
    -a * k1sq * s.y * s.y * s.px * s.px + 2.0 * a * k1sq * s.x * s.y * s.px * s.py
        - (a * k1sq * s.x * s.x + k3sq * metric) * s.py * s.py
        + i_beta * k3sq * s.y * s.py
}

/// Lifts the orbit point at azimuth `phi` (measured from `+y` towards `+x`)
/// to the pseudo-spherical chart of its surface: System I inside the
/// parabolic circle, H′I outside it, HI for `α > 0`.
///
/// The chart azimuth is `π/2 − phi`; the polar coordinate satisfies
/// `sin²ϑ = |α|r²`, `cosh²τ = |α|r²` or `sinh²τ = αr²` respectively.
pub fn lift_orbit(params: Params, consts: &EllipseConstants, phi: f64) -> Result<SurfaceCoords> {
    let r2 = r_squared_of_phi(consts, phi)?;
    let azimuth = wrap(FRAC_PI_2 - phi);
    let t = params.alpha.abs() * r2;
    match surface_of(params, r2)? {
        Surface::Sphere => Ok(SurfaceCoords::new(CoordSystem::I, t.sqrt().asin(), azimuth)),
        Surface::OneSheet => Ok(SurfaceCoords::new(
            CoordSystem::HpI,
            t.sqrt().acosh(),
            azimuth,
        )),
        Surface::TwoSheet => Ok(SurfaceCoords::new(
            CoordSystem::HI,
            t.sqrt().asinh(),
            azimuth,
        )),
    }
}
