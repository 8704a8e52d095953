//! Closed-form orbit geometry and timing.
//!
//! For a pair `(p_φ, E)` inside the allowed region the orbit is an ellipse
//! centred on the origin,
//!
//! ```text
//! r²(φ) = D / (1 − ε cos 2φ),        r²(t) = (A + C cos 4t√U) / 2U
//! ```
//!
//! with `A = E − αp_φ²`, `B = 2p_φ²`, `C = √((E + αp_φ²)² − β²p_φ²)`,
//! `D = B/A`, `ε = C/A` and `U = β²/4 − αE`. Angles are measured from the
//! `+y` axis towards `+x` (`x = r sin φ`, `y = r cos φ`), and with the default
//! phase conventions the orbit starts at the apex `(0, μ_y)` at `t = 0`.
//!
//! `r²(t)` has period `T = π/√(β² − 4αE)`; because the ellipse is centred on
//! the origin a full revolution of `(x, y)` takes `2T`.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::adaptive_simpson;

/// Tolerance on ε for the `Circle` (ε = 0) and `DegenerateLine` (ε = 1) boundaries.
pub const CLASS_TOL: f64 = 1e-12;

/// Relative distance from a turning point that the quadrature check refuses to enter.
pub const TURNING_POINT_MARGIN: f64 = 1e-6;

/// The `(α, β)` pair of a generalized Zernike Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub alpha: f64,
    pub beta: f64,
}

impl Params {
    /// Zernike's original self-adjoint choice `(α, β) = (−1, −2)`.
    pub const ZERNIKE: Params = Params {
        alpha: -1.0,
        beta: -2.0,
    };

    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "parameters must be finite (alpha = {alpha}, beta = {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// `β² − 4αE`, the squared radial frequency (up to a factor 4).
    pub fn frequency_discriminant(&self, energy: f64) -> f64 {
        self.beta * self.beta - 4.0 * self.alpha * energy
    }
}

/// Travel sense relative to the Hamiltonian flow.
///
/// `Forward` traverses the orbit the way Hamilton's equations do: counter-clockwise
/// in the `x`–`y` plane when `p_φ > 0`. `Reverse` runs the same ellipse backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Direction {
    #[default]
    Forward,
    Reverse,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Reverse => -1.0,
        }
    }
}

/// Conserved quantities plus the phase conventions that pin an orbit in time and angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSpec {
    pub energy: f64,
    pub p_phi: f64,
    /// Angle offset; the default `−π/4` puts the semi-major axis on the `y` axis.
    pub phi0: f64,
    /// Time offset; `None` means `π/(8√U)`, which places the apex at `t = 0`.
    pub t0: Option<f64>,
    pub direction: Direction,
}

impl OrbitSpec {
    pub fn new(energy: f64, p_phi: f64) -> Self {
        Self {
            energy,
            p_phi,
            phi0: -FRAC_PI_4,
            t0: None,
            direction: Direction::Forward,
        }
    }

    pub fn with_phi0(mut self, phi0: f64) -> Self {
        self.phi0 = phi0;
        self
    }

    pub fn with_t0(mut self, t0: f64) -> Self {
        self.t0 = Some(t0);
        self
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }
}

/// Orbit type of a `(p_φ, E)` point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitClass {
    ClosedEllipse,
    Circle,
    DegenerateLine,
    Forbidden,
}

impl OrbitClass {
    /// Closed bounded orbit with a nonzero area.
    pub fn is_closed(self) -> bool {
        matches!(self, OrbitClass::ClosedEllipse | OrbitClass::Circle)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OrbitClass::ClosedEllipse => "ClosedEllipse",
            OrbitClass::Circle => "Circle",
            OrbitClass::DegenerateLine => "DegenerateLine",
            OrbitClass::Forbidden => "Forbidden",
        }
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Coefficients of the radial quadratic `c0 + c1 z + c2 z²` in `z = r²`.
///
/// Its roots are the squared turning radii `μ_x²`, `μ_y²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialQuadratic {
    /// `−p_φ²`
    pub c0: f64,
    /// `E − αp_φ²`
    pub c1: f64,
    /// `αE − β²/4`
    pub c2: f64,
}

impl RadialQuadratic {
    pub fn eval(&self, z: f64) -> f64 {
        self.c0 + z * (self.c1 + z * self.c2)
    }

    pub fn discriminant(&self) -> f64 {
        self.c1 * self.c1 - 4.0 * self.c0 * self.c2
    }
}

/// Derived scalars governing every closed-form orbit formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseConstants {
    pub params: Params,
    pub energy: f64,
    pub p_phi: f64,
    /// `A = E − αp_φ²`
    pub a: f64,
    /// `B = 2p_φ²`
    pub b: f64,
    /// `C = √((E + αp_φ²)² − β²p_φ²) ≥ 0`
    pub c: f64,
    /// `D = B/A`
    pub d: f64,
    /// `ε = C/A`
    pub eps: f64,
    /// `U = β²/4 − αE`
    pub u: f64,
    pub radial: RadialQuadratic,
    pub region: OrbitClass,
    /// Azimuth of the apex `μ_y`, `φ₀ + π/4`.
    pub apex_angle: f64,
    /// `t₀ − π/(8√U)`; zero under the default convention.
    pub time_shift: f64,
    /// `+1` for counter-clockwise travel, `−1` for clockwise.
    pub sense: f64,
}

struct Raw {
    a: f64,
    c_sq: f64,
}

fn raw(params: Params, spec: &OrbitSpec) -> Raw {
    let p2 = spec.p_phi * spec.p_phi;
    let a = spec.energy - params.alpha * p2;
    let s = spec.energy + params.alpha * p2;
    Raw {
        a,
        c_sq: s * s - params.beta * params.beta * p2,
    }
}

/// Classifies `(p_φ, E)` against the three realness/closure inequalities:
/// `C² ≥ 0`, `4αE < β²` and `E > αp_φ²`.
pub fn classify(params: Params, spec: &OrbitSpec) -> OrbitClass {
    let Raw { a, c_sq } = raw(params, spec);
    // Written so that NaN falls through to Forbidden.
    if !(c_sq >= 0.0) || !(a > 0.0) {
        return OrbitClass::Forbidden;
    }
    if spec.p_phi == 0.0 {
        return if 4.0 * params.alpha * spec.energy < params.beta * params.beta {
            OrbitClass::DegenerateLine
        } else {
            OrbitClass::Forbidden
        };
    }
    let eps = c_sq.sqrt() / a;
    if eps > 1.0 + CLASS_TOL {
        OrbitClass::Forbidden
    } else if (eps - 1.0).abs() <= CLASS_TOL {
        OrbitClass::DegenerateLine
    } else if eps <= CLASS_TOL {
        OrbitClass::Circle
    } else {
        OrbitClass::ClosedEllipse
    }
}

/// Evaluates `A, B, C, D, ε, U` and the radial quadratic for an orbit.
pub fn compute_constants(params: Params, spec: &OrbitSpec) -> Result<EllipseConstants> {
    let Raw { a, c_sq } = raw(params, spec);
    let p2 = spec.p_phi * spec.p_phi;
    let scale = spec.energy.abs() + (params.alpha * p2).abs();
    if a.abs() <= f64::EPSILON * scale || a == 0.0 {
        return Err(Error::DegenerateSpec(format!(
            "E = αp_φ² (E = {}, p_φ = {}): D is undefined",
            spec.energy, spec.p_phi
        )));
    }
    if c_sq < 0.0 || c_sq.is_nan() {
        return Err(Error::RegionForbidden(format!(
            "C² = {c_sq} < 0: no real orbit at E = {}, p_φ = {}",
            spec.energy, spec.p_phi
        )));
    }
    let b = 2.0 * p2;
    let c = c_sq.sqrt();
    let u = 0.25 * params.beta * params.beta - params.alpha * spec.energy;
    let time_shift = match spec.t0 {
        None => 0.0,
        Some(t0) => t0 - FRAC_PI_8 / u.sqrt(),
    };
    let sense = spec.direction.sign() * if spec.p_phi < 0.0 { -1.0 } else { 1.0 };
    Ok(EllipseConstants {
        params,
        energy: spec.energy,
        p_phi: spec.p_phi,
        a,
        b,
        c,
        d: b / a,
        eps: c / a,
        u,
        radial: RadialQuadratic {
            c0: -p2,
            c1: a,
            c2: params.alpha * spec.energy - 0.25 * params.beta * params.beta,
        },
        region: classify(params, spec),
        apex_angle: spec.phi0 + FRAC_PI_4,
        time_shift,
        sense,
    })
}

impl EllipseConstants {
    fn require_closed(&self) -> Result<()> {
        if self.region.is_closed() {
            Ok(())
        } else {
            domain(format!(
                "operation needs a closed orbit, region is {}",
                self.region
            ))
        }
    }

    fn require_positive_u(&self) -> Result<()> {
        if self.u > 0.0 {
            Ok(())
        } else {
            domain(format!("U = {} must be positive", self.u))
        }
    }

    /// Full revolution time of `(x, y)`, twice the radial period.
    pub fn revolution_period(&self) -> Result<f64> {
        Ok(2.0 * period(self)?)
    }
}

/// `r²(φ) = D / (1 − ε cos 2(φ − φ_apex))`.
pub fn r_squared_of_phi(consts: &EllipseConstants, phi: f64) -> Result<f64> {
    consts.require_closed()?;
    let den = 1.0 - consts.eps * (2.0 * (phi - consts.apex_angle)).cos();
    if den <= 0.0 {
        return domain(format!("1 − ε cos 2φ = {den} is not positive"));
    }
    Ok(consts.d / den)
}

/// `r²(t) = (A + C cos 4√U (t − t_shift)) / 2U`; equals `μ_y²` at `t = 0` by default.
pub fn r_squared_of_t(consts: &EllipseConstants, t: f64) -> Result<f64> {
    consts.require_closed()?;
    consts.require_positive_u()?;
    let w = 4.0 * consts.u.sqrt();
    Ok((consts.a + consts.c * (w * (t - consts.time_shift)).cos()) / (2.0 * consts.u))
}

/// Radial period `T = π/√(β² − 4αE)`.
pub fn period(consts: &EllipseConstants) -> Result<f64> {
    let disc = consts.params.frequency_discriminant(consts.energy);
    if !(disc > 0.0) {
        return domain(format!("β² − 4αE = {disc} must be positive"));
    }
    Ok(PI / disc.sqrt())
}

/// Semi-axes `(μ_x, μ_y)` with `μ_x ≤ μ_y`.
pub fn semi_axes(consts: &EllipseConstants) -> Result<(f64, f64)> {
    consts.require_closed()?;
    if consts.eps >= 1.0 {
        return domain(format!("ε = {} ≥ 1", consts.eps));
    }
    Ok((
        (consts.b / (consts.a + consts.c)).sqrt(),
        (consts.b / (consts.a - consts.c)).sqrt(),
    ))
}

/// Enclosed area `2π|p_φ|/√(β² − 4αE)`.
pub fn ellipse_area(consts: &EllipseConstants) -> Result<f64> {
    consts.require_closed()?;
    let disc = consts.params.frequency_discriminant(consts.energy);
    if !(disc > 0.0) {
        return domain(format!("β² − 4αE = {disc} must be positive"));
    }
    Ok(2.0 * PI * consts.p_phi.abs() / disc.sqrt())
}

/// Continuously unwrapped azimuth `φ(t)` along the orbit.
///
/// The motion is `(x', y') = (−s μ_x sin θ, μ_y cos θ)` with `θ = 2√U t` in the
/// frame whose `y'` axis points at the apex; `φ` is recovered from that pair
/// without branch jumps, so it decreases by `2π` per revolution when `s = +1`.
pub fn phi_of_t(consts: &EllipseConstants, t: f64) -> Result<f64> {
    consts.require_closed()?;
    consts.require_positive_u()?;
    let (mu_x, mu_y) = semi_axes(consts)?;
    let theta = 2.0 * consts.u.sqrt() * (t - consts.time_shift);
    let wrapped = (mu_x * theta.sin()).atan2(mu_y * theta.cos());
    let unwrapped = wrapped + TAU * ((theta - wrapped) / TAU).round();
    Ok(consts.apex_angle - consts.sense * unwrapped)
}

/// Position `(x, y) = (r sin φ, r cos φ)` at time `t`.
pub fn xy_of_t(consts: &EllipseConstants, t: f64) -> Result<(f64, f64)> {
    let r = r_squared_of_t(consts, t)?.sqrt();
    let phi = phi_of_t(consts, t)?;
    Ok((r * phi.sin(), r * phi.cos()))
}

/// Closed-form `φ − φ₀` at radius `r`: `½ arcsin((A r² − B) / (C r²))`.
pub fn phi_from_radius(consts: &EllipseConstants, r: f64) -> f64 {
    let z = r * r;
    let g = (consts.radial.c1 * z + 2.0 * consts.radial.c0) / (z * consts.c);
    0.5 * g.clamp(-1.0, 1.0).asin()
}

/// Compares adaptive quadrature of `|p_φ| ∫ dr / (r √(c2 r⁴ + c1 r² + c0))` over
/// `[r_a, r_b]` with the closed-form arcsine, returning the absolute difference.
pub fn phi_quadrature_check(params: Params, spec: &OrbitSpec, r_a: f64, r_b: f64) -> Result<f64> {
    let consts = compute_constants(params, spec)?;
    if consts.region != OrbitClass::ClosedEllipse {
        return domain(format!(
            "quadrature check needs distinct turning points, region is {}",
            consts.region
        ));
    }
    if r_a == r_b {
        return Ok(0.0);
    }
    if !(r_a < r_b) {
        return domain(format!("need r_a < r_b, got [{r_a}, {r_b}]"));
    }
    let (mu_x, mu_y) = semi_axes(&consts)?;
    let margin = TURNING_POINT_MARGIN * (mu_y - mu_x);
    if r_a < mu_x + margin || r_b > mu_y - margin {
        return domain(format!(
            "[{r_a}, {r_b}] is not strictly inside the turning points [{mu_x}, {mu_y}]"
        ));
    }
    let quad = consts.radial;
    let p = consts.p_phi.abs();
    let integrand = |r: f64| {
        let z = r * r;
        p / (r * quad.eval(z).sqrt())
    };
    let numeric = adaptive_simpson(integrand, r_a, r_b, 1e-13, 60);
    let closed = phi_from_radius(&consts, r_b) - phi_from_radius(&consts, r_a);
    Ok((numeric - closed).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: Params = Params::ZERNIKE;

    fn consts(params: Params, e: f64, p: f64) -> EllipseConstants {
        compute_constants(params, &OrbitSpec::new(e, p)).unwrap()
    }

    #[test]
    fn constants_e35() {
        let k = consts(Z, 35.0, 3.0);
        assert_eq!(k.a, 44.0);
        assert_eq!(k.b, 18.0);
        assert!((k.c - 640f64.sqrt()).abs() < 1e-13);
        assert!((k.d - 9.0 / 22.0).abs() < 1e-15);
        assert!((k.eps - 640f64.sqrt() / 44.0).abs() < 1e-15);
        assert_eq!(k.u, 36.0);
        assert_eq!(k.region, OrbitClass::ClosedEllipse);
        // U·2B = A² − C²
        assert!((k.u * 2.0 * k.b - (k.a * k.a - k.c * k.c)).abs() < 1e-10);
        assert_eq!(
            k.radial,
            RadialQuadratic {
                c0: -9.0,
                c1: 44.0,
                c2: -36.0
            }
        );
    }

    #[test]
    fn constants_boundary_circle() {
        let k = consts(Z, 15.0, 3.0);
        assert_eq!(k.c, 0.0);
        assert_eq!(k.eps, 0.0);
        assert_eq!(k.d, 0.75);
        assert_eq!(k.region, OrbitClass::Circle);

        let k = consts(Params::new(1.0, -2.0).unwrap(), 0.75, 0.5);
        assert_eq!(k.eps, 0.0);
        assert_eq!(k.d, 1.0);
        assert_eq!(k.region, OrbitClass::Circle);
    }

    #[test]
    fn constants_errors() {
        let e = compute_constants(Z, &OrbitSpec::new(10.0, 3.0)).unwrap_err();
        assert!(matches!(e, Error::RegionForbidden(_)));
        let e = compute_constants(Z, &OrbitSpec::new(-9.0, 3.0)).unwrap_err();
        assert!(matches!(e, Error::DegenerateSpec(_)));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(Z, &OrbitSpec::new(20.0, 3.0)),
            OrbitClass::ClosedEllipse
        );
        assert_eq!(
            classify(Z, &OrbitSpec::new(10.0, 3.0)),
            OrbitClass::Forbidden
        );
        assert_eq!(
            classify(Z, &OrbitSpec::new(-2.0, 3.0)),
            OrbitClass::Forbidden
        );
        assert_eq!(classify(Z, &OrbitSpec::new(3.0, 3.0)), OrbitClass::Circle);
        assert_eq!(
            classify(Z, &OrbitSpec::new(10.0, 0.0)),
            OrbitClass::DegenerateLine
        );
        assert_eq!(
            classify(Z, &OrbitSpec::new(f64::NAN, 1.0)),
            OrbitClass::Forbidden
        );
        // E > β²/4α is unbounded for α > 0 even at p_φ = 0
        let p = Params::new(1.0, 2.0).unwrap();
        assert_eq!(
            classify(p, &OrbitSpec::new(2.0, 0.0)),
            OrbitClass::Forbidden
        );
    }

    #[test]
    fn radius_formulas() {
        let k = consts(Z, 35.0, 3.0);
        let (mx, my) = semi_axes(&k).unwrap();
        assert!((r_squared_of_phi(&k, 0.0).unwrap() - my * my).abs() < 1e-14);
        assert!((r_squared_of_phi(&k, PI / 2.0).unwrap() - mx * mx).abs() < 1e-14);
        let t = period(&k).unwrap();
        assert!((r_squared_of_t(&k, 0.0).unwrap() - my * my).abs() < 1e-14);
        assert!((r_squared_of_t(&k, t / 2.0).unwrap() - mx * mx).abs() < 1e-14);
        assert!((mx * my - 0.5).abs() < 1e-14);

        let circle = consts(Z, 15.0, 3.0);
        for i in 0..10 {
            let x = i as f64 * 0.37;
            assert_eq!(r_squared_of_phi(&circle, x).unwrap(), 0.75);
            assert!((r_squared_of_t(&circle, x).unwrap() - 0.75).abs() < 1e-15);
        }
        let (cx, cy) = semi_axes(&circle).unwrap();
        assert_eq!(cx, cy);
        assert!((cx - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn periods_and_areas() {
        assert!((period(&consts(Z, 15.0, 3.0)).unwrap() - PI / 8.0).abs() < 1e-15);
        assert!((period(&consts(Z, 35.0, 3.0)).unwrap() - PI / 12.0).abs() < 1e-15);
        let free = Params::new(0.0, 3.0).unwrap();
        assert!((period(&consts(free, 10.0, 1.0)).unwrap() - PI / 3.0).abs() < 1e-15);

        assert!((ellipse_area(&consts(Z, 35.0, 3.0)).unwrap() - PI / 2.0).abs() < 1e-14);
        let circle = consts(Z, 15.0, 3.0);
        assert!((ellipse_area(&circle).unwrap() - 0.75 * PI).abs() < 1e-14);
    }

    #[test]
    fn zero_momentum_is_a_line() {
        let k = consts(Z, 10.0, 0.0);
        assert_eq!(k.region, OrbitClass::DegenerateLine);
        assert!(ellipse_area(&k).is_err());
        assert!(r_squared_of_t(&k, 0.0).is_err());
    }

    #[test]
    fn trajectory_landmarks() {
        let k = consts(Z, 35.0, 3.0);
        let (mx, my) = semi_axes(&k).unwrap();
        let t = period(&k).unwrap();
        let (x, y) = xy_of_t(&k, 0.0).unwrap();
        assert!(x.abs() < 1e-15 && (y - my).abs() < 1e-14);
        // counter-clockwise for p_φ > 0: the quarter turn lands on −x
        let (x, y) = xy_of_t(&k, t / 2.0).unwrap();
        assert!((x + mx).abs() < 1e-13 && y.abs() < 1e-13, "({x}, {y})");
        // the radial period is half a revolution
        let (x, y) = xy_of_t(&k, t).unwrap();
        assert!(x.abs() < 1e-13 && (y + my).abs() < 1e-13);
        let (x, y) = xy_of_t(&k, 2.0 * t).unwrap();
        assert!(x.abs() < 1e-13 && (y - my).abs() < 1e-13);

        let rev = compute_constants(
            Z,
            &OrbitSpec::new(35.0, 3.0).with_direction(Direction::Reverse),
        )
        .unwrap();
        let (x, _) = xy_of_t(&rev, t / 2.0).unwrap();
        assert!((x - mx).abs() < 1e-13);
        let neg = consts(Z, 35.0, -3.0);
        let (x, _) = xy_of_t(&neg, t / 2.0).unwrap();
        assert!((x - mx).abs() < 1e-13);
    }

    #[test]
    fn phase_offsets() {
        let spec = OrbitSpec::new(35.0, 3.0).with_phi0(0.0).with_t0(0.1);
        let k = compute_constants(Z, &spec).unwrap();
        let (_, my) = semi_axes(&k).unwrap();
        // apex now at azimuth π/4, reached at t = t₀ − π/(8√U)
        let t_apex = 0.1 - FRAC_PI_8 / 6.0;
        assert!((r_squared_of_t(&k, t_apex).unwrap() - my * my).abs() < 1e-13);
        assert!((phi_of_t(&k, t_apex).unwrap() - FRAC_PI_4).abs() < 1e-13);
        assert!((r_squared_of_phi(&k, FRAC_PI_4).unwrap() - my * my).abs() < 1e-13);
        // sin 2(φ − φ₀) = (A r² − B)/(C r²) holds along the orbit
        for i in 0..20 {
            let t = i as f64 * 0.013;
            let r2 = r_squared_of_t(&k, t).unwrap();
            let phi = phi_of_t(&k, t).unwrap();
            let lhs = (2.0 * (phi - spec.phi0)).sin();
            let rhs = (k.a * r2 - k.b) / (k.c * r2);
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn quadrature_matches_arcsine() {
        let spec = OrbitSpec::new(35.0, 3.0);
        let res = phi_quadrature_check(Z, &spec, 0.6, 0.9).unwrap();
        assert!(res < 1e-8, "residual {res}");
        assert_eq!(phi_quadrature_check(Z, &spec, 0.7, 0.7).unwrap(), 0.0);
        assert!(phi_quadrature_check(Z, &OrbitSpec::new(15.0, 3.0), 0.8, 0.8).is_err());
        assert!(phi_quadrature_check(Z, &spec, 0.3, 0.9).is_err());
        assert!(phi_quadrature_check(Z, &spec, 0.9, 0.6).is_err());
    }
}
