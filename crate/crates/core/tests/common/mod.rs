#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use rand::{rngs::StdRng, Rng};
use zernike::algebra::{GaussianRational, PhasePolynomial, Symbol};
use zernike::coordinates::{CoordSystem, EllipticParams};

pub const POLY_SYMBOLS: [Symbol; 6] = [
    Symbol::X,
    Symbol::Y,
    Symbol::Px,
    Symbol::Py,
    Symbol::Alpha,
    Symbol::Beta,
];

/// Monomial of degree ≤ 3 in six symbols with a Gaussian-integer coefficient in [−9, 9].
pub fn term() -> impl Strategy<Value = PhasePolynomial> {
    (
        prop::collection::vec(0usize..6, 0..=3),
        -9i64..=9,
        -9i64..=9,
    )
        .prop_map(|(vars, re, im)| {
            let mono = vars.iter().fold(PhasePolynomial::int(1), |acc, &k| {
                acc * PhasePolynomial::var(POLY_SYMBOLS[k])
            });
            mono * PhasePolynomial::constant(GaussianRational::gaussian(re, im))
        })
}

pub fn poly() -> impl Strategy<Value = PhasePolynomial> {
    prop::collection::vec(term(), 1..=4)
        .prop_map(|ts| ts.iter().fold(PhasePolynomial::zero(), |a, t| a + t))
}

const M: f64 = 0.05;

/// Interior sample of a chart, away from its coordinate singularities.
pub fn chart_sample(sys: CoordSystem, rng: &mut StdRng) -> (f64, f64) {
    let mut signed = |lo: f64, hi: f64| {
        let v = rng.gen_range(lo..hi);
        if rng.gen_bool(0.5) {
            v
        } else {
            -v
        }
    };
    match sys {
        CoordSystem::I => (rng.gen_range(M..FRAC_PI_2 - M), rng.gen_range(M..TAU - M)),
        CoordSystem::II => (rng.gen_range(M..PI - M), rng.gen_range(M..PI - M)),
        CoordSystem::III => (
            rng.gen_range(M..PI - M),
            rng.gen_range(-FRAC_PI_2 + M..FRAC_PI_2 - M),
        ),
        CoordSystem::HpI => (rng.gen_range(-2.0..2.0), rng.gen_range(M..TAU - M)),
        CoordSystem::HpII(_) => (signed(M, 2.0), rng.gen_range(-2.0..2.0)),
        CoordSystem::HpIII => {
            let phi = rng.gen_range(M..PI - M) + if rng.gen_bool(0.5) { PI } else { 0.0 };
            (rng.gen_range(-2.0..2.0), phi)
        }
        CoordSystem::HI => (rng.gen_range(M..2.0), rng.gen_range(M..TAU - M)),
        CoordSystem::HII | CoordSystem::HIII => {
            (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
        }
        CoordSystem::Elliptic(_) => (rng.gen_range(M..PI - M), rng.gen_range(M..TAU - M)),
    }
}

/// Every chart, with three elliptic focal angles.
pub fn all_charts() -> Vec<CoordSystem> {
    let mut all = CoordSystem::STANDARD.to_vec();
    for f in [0.3, FRAC_PI_2 / 2.0, 1.2] {
        all.push(CoordSystem::Elliptic(EllipticParams::from_focal_angle(f)));
    }
    all
}
