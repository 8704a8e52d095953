//! Exact polynomial Poisson algebra.
//!
//! Polynomials have Gaussian-rational coefficients and live in the symbols of
//! [`Symbol`]: two canonical coordinate sets plus the central parameters
//! `α, β, k₁², k₃²` and the adjoined `s = √2`. Every identity is checked by
//! expanding the difference of both sides and requiring that no term survives.

mod gaussian;
mod poly;
mod verify;

pub use gaussian::GaussianRational;
pub use poly::{poisson_bracket, Monomial, PhasePolynomial, Symbol, SYMBOL_COUNT};
pub use verify::{
    apply_canonical_transform, canonical_images, higgs_cubic_check, verify_all,
    verify_canonical_transform, verify_elliptic_identity, verify_fourier_u2, verify_higgs,
    BracketReport,
};

use serde::{Deserialize, Serialize};

/// Named constants of motion. `I*`, `J*`, `H` are in `(x, y, px, py)`;
/// the oscillator family `F*` is in `(Qx, Qy, Px, Py)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Invariant {
    I1,
    I2,
    I3,
    J1,
    J2,
    J3,
    H,
    F0,
    F1,
    F2,
    F3,
}

impl Invariant {
    pub const ALL: [Invariant; 11] = [
        Invariant::I1,
        Invariant::I2,
        Invariant::I3,
        Invariant::J1,
        Invariant::J2,
        Invariant::J3,
        Invariant::H,
        Invariant::F0,
        Invariant::F1,
        Invariant::F2,
        Invariant::F3,
    ];
}

fn v(s: Symbol) -> PhasePolynomial {
    PhasePolynomial::var(s)
}

fn half() -> PhasePolynomial {
    PhasePolynomial::ratio(1, 2)
}

/// `1 + α(x² + y²)`
fn metric() -> PhasePolynomial {
    PhasePolynomial::int(1) + v(Symbol::Alpha) * (v(Symbol::X).pow(2) + v(Symbol::Y).pow(2))
}

/// `iβ`
fn i_beta() -> PhasePolynomial {
    PhasePolynomial::i() * v(Symbol::Beta)
}

/// `σ = x px + y py`
pub fn dilation() -> PhasePolynomial {
    v(Symbol::X) * v(Symbol::Px) + v(Symbol::Y) * v(Symbol::Py)
}

pub fn build_invariant(name: Invariant) -> PhasePolynomial {
    use Symbol::*;
    let beta2 = || v(Beta).pow(2);
    match name {
        Invariant::I1 => v(X) * v(Py) - v(Y) * v(Px),
        Invariant::I2 => metric() * v(Py).pow(2) - i_beta() * v(Y) * v(Py),
        Invariant::I3 => metric() * v(Px).pow(2) - i_beta() * v(X) * v(Px),
        Invariant::J1 => half() * build_invariant(Invariant::I1),
        Invariant::J2 => half() * (build_invariant(Invariant::I3) - build_invariant(Invariant::I2)),
        Invariant::J3 => {
            metric() * v(Px) * v(Py) - half() * i_beta() * (v(X) * v(Py) + v(Y) * v(Px))
        }
        Invariant::H => {
            let s = dilation();
            v(Px).pow(2) + v(Py).pow(2) + v(Alpha) * s.pow(2) - i_beta() * s
        }
        Invariant::F0 => {
            half() * (v(PX).pow(2) + v(PY).pow(2) + beta2() * (v(QX).pow(2) + v(QY).pow(2)))
        }
        Invariant::F1 => half() * (v(QX) * v(PY) - v(QY) * v(PX)),
        Invariant::F2 => {
            PhasePolynomial::ratio(1, 4)
                * (v(PX).pow(2) + beta2() * v(QX).pow(2) - v(PY).pow(2) - beta2() * v(QY).pow(2))
        }
        Invariant::F3 => half() * (v(PX) * v(PY) + beta2() * v(QX) * v(QY)),
    }
}

/// Elliptic separation constant `K_e²` in Cartesian form, with `k₁²` and `k₃²`
/// kept as independent symbols.
pub fn elliptic_separation_polynomial() -> PhasePolynomial {
    use Symbol::*;
    let (a, k1, k3) = (v(Alpha), v(K1Sq), v(K3Sq));
    let ak1 = &a * &k1;
    -(&ak1 * v(Y).pow(2) * v(Px).pow(2))
        + PhasePolynomial::int(2) * &ak1 * v(X) * v(Y) * v(Px) * v(Py)
        - (&ak1 * v(X).pow(2) + &k3 * metric()) * v(Py).pow(2)
        + i_beta() * k3 * v(Y) * v(Py)
}
