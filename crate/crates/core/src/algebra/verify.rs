use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::poly::{poisson_bracket, PhasePolynomial, Symbol};
use super::{build_invariant, elliptic_separation_polynomial, Invariant};

/// Outcome of one identity check; it passes iff the residual has no terms.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketReport {
    pub identity: String,
    pub residual: PhasePolynomial,
    pub pass: bool,
}

impl BracketReport {
    pub fn new(identity: impl Into<String>, residual: PhasePolynomial) -> Self {
        let pass = residual.is_zero();
        Self {
            identity: identity.into(),
            residual,
            pass,
        }
    }
}

impl Serialize for BracketReport {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("BracketReport", 3)?;
        st.serialize_field("identity", &self.identity)?;
        st.serialize_field("pass", &self.pass)?;
        st.serialize_field("residual_term_count", &self.residual.term_count())?;
        st.end()
    }
}

fn inv(name: Invariant) -> PhasePolynomial {
    build_invariant(name)
}

fn v(s: Symbol) -> PhasePolynomial {
    PhasePolynomial::var(s)
}

/// `{J2, J3} − J1(β² − 2αH − c α² J1²)`; vanishes only for `c = 8`.
pub fn higgs_cubic_check(c: i64) -> BracketReport {
    let (a, j1) = (v(Symbol::Alpha), inv(Invariant::J1));
    let casimir_part = v(Symbol::Beta).pow(2)
        - PhasePolynomial::int(2) * &a * inv(Invariant::H)
        - PhasePolynomial::int(c) * a.pow(2) * j1.pow(2);
    let residual = poisson_bracket(&inv(Invariant::J2), &inv(Invariant::J3)) - &j1 * casimir_part;
    BracketReport::new(
        format!("{{J2,J3}} - J1*(beta^2 - 2*alpha*H - {c}*alpha^2*J1^2)"),
        residual,
    )
}

/// Cubic Higgs algebra of `J1, J2, J3`, their commutation with `H`, and the
/// decomposition `H = I3 + I2 − αI1²`.
pub fn verify_higgs() -> Vec<BracketReport> {
    use Invariant::*;
    let pb = |a, b| poisson_bracket(&inv(a), &inv(b));
    let mut out = vec![
        BracketReport::new("{J3,J1} - J2", pb(J3, J1) - inv(J2)),
        BracketReport::new("{J1,J2} - J3", pb(J1, J2) - inv(J3)),
        higgs_cubic_check(8),
    ];
    for (name, j) in [("J1", J1), ("J2", J2), ("J3", J3)] {
        out.push(BracketReport::new(format!("{{{name},H}}"), pb(j, H)));
    }
    let composed = inv(I3) + inv(I2) - v(Symbol::Alpha) * inv(I1).pow(2);
    out.push(BracketReport::new(
        "H - (I3 + I2 - alpha*I1^2)",
        inv(H) - composed,
    ));
    out
}

/// `K_e² = −αk₁²I1² − k₃²I2` with `k₁², k₃²` independent.
pub fn verify_elliptic_identity() -> BracketReport {
    let (a, k1, k3) = (v(Symbol::Alpha), v(Symbol::K1Sq), v(Symbol::K3Sq));
    let rhs = -(a * k1 * inv(Invariant::I1).pow(2)) - k3 * inv(Invariant::I2);
    BracketReport::new(
        "K_e^2 - (-alpha*k1sq*I1^2 - k3sq*I2)",
        elliptic_separation_polynomial() - rhs,
    )
}

/// The oscillator generators `F1, F2, F3` close on a scaled `u(2)` with
/// central `F0`.
pub fn verify_fourier_u2() -> Vec<BracketReport> {
    use Invariant::*;
    let pb = |a, b| poisson_bracket(&inv(a), &inv(b));
    let mut out = vec![
        BracketReport::new("{F1,F2} - F3", pb(F1, F2) - inv(F3)),
        BracketReport::new(
            "{F2,F3} - beta^2*F1",
            pb(F2, F3) - v(Symbol::Beta).pow(2) * inv(F1),
        ),
        BracketReport::new("{F3,F1} - F2", pb(F3, F1) - inv(F2)),
    ];
    for (name, f) in [("F1", F1), ("F2", F2), ("F3", F3)] {
        out.push(BracketReport::new(format!("{{F0,{name}}}"), pb(F0, f)));
    }
    out
}

/// Images of `(x, y, px, py)` under `q = sQ`, `p = (s/2)(P + iβQ)`.
pub fn canonical_images() -> [(Symbol, PhasePolynomial); 4] {
    use Symbol::*;
    let s = v(Sqrt2);
    let half_s = PhasePolynomial::ratio(1, 2) * &s;
    let ib = PhasePolynomial::i() * v(Beta);
    [
        (X, &s * v(QX)),
        (Y, &s * v(QY)),
        (Px, &half_s * (v(PX) + &ib * v(QX))),
        (Py, &half_s * (v(PY) + &ib * v(QY))),
    ]
}

/// Rewrites a polynomial in `(x, y, px, py)` through [`canonical_images`].
pub fn apply_canonical_transform(p: &PhasePolynomial) -> PhasePolynomial {
    canonical_images()
        .iter()
        .fold(p.clone(), |acc, (sym, img)| acc.substitute(*sym, img))
}

/// `H` at `α = 0` becomes the isotropic oscillator `F0 = ½(P² + β²Q²)`.
pub fn verify_canonical_transform() -> BracketReport {
    let h0 = inv(Invariant::H).substitute(Symbol::Alpha, &PhasePolynomial::zero());
    BracketReport::new(
        "H(alpha=0)[q=sQ, p=(s/2)(P+i*beta*Q)] - F0",
        apply_canonical_transform(&h0) - inv(Invariant::F0),
    )
}

/// Every exact check, in a fixed order.
pub fn verify_all() -> Vec<BracketReport> {
    let mut out = verify_higgs();
    out.push(verify_elliptic_identity());
    out.extend(verify_fourier_u2());
    out.push(verify_canonical_transform());
    out
}
