use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::gaussian::GaussianRational;

/// Polynomial variables. Phase-space coordinates come in two canonical sets,
/// `(x, y, px, py)` and `(Qx, Qy, Px, Py)`; the rest are central parameters.
/// `Sqrt2` is the adjoined root with `Sqrt2² = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    X,
    Y,
    Px,
    Py,
    QX,
    QY,
    PX,
    PY,
    Alpha,
    Beta,
    K1Sq,
    K3Sq,
    Sqrt2,
}

pub const SYMBOL_COUNT: usize = 13;

impl Symbol {
    pub const ALL: [Symbol; SYMBOL_COUNT] = [
        Symbol::X,
        Symbol::Y,
        Symbol::Px,
        Symbol::Py,
        Symbol::QX,
        Symbol::QY,
        Symbol::PX,
        Symbol::PY,
        Symbol::Alpha,
        Symbol::Beta,
        Symbol::K1Sq,
        Symbol::K3Sq,
        Symbol::Sqrt2,
    ];

    /// Canonical `(coordinate, momentum)` pairs.
    pub const CONJUGATE_PAIRS: [(Symbol, Symbol); 4] = [
        (Symbol::X, Symbol::Px),
        (Symbol::Y, Symbol::Py),
        (Symbol::QX, Symbol::PX),
        (Symbol::QY, Symbol::PY),
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::X => "x",
            Symbol::Y => "y",
            Symbol::Px => "px",
            Symbol::Py => "py",
            Symbol::QX => "Qx",
            Symbol::QY => "Qy",
            Symbol::PX => "Px",
            Symbol::PY => "Py",
            Symbol::Alpha => "alpha",
            Symbol::Beta => "beta",
            Symbol::K1Sq => "k1sq",
            Symbol::K3Sq => "k3sq",
            Symbol::Sqrt2 => "s",
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u16; SYMBOL_COUNT]);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(sym: Symbol) -> Self {
        let mut m = Self::one();
        m.0[sym.index()] = 1;
        m
    }

    pub fn exponent(&self, sym: Symbol) -> u16 {
        self.0[sym.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn with_exponent(mut self, sym: Symbol, e: u16) -> Self {
        self.0[sym.index()] = e;
        self
    }

    fn product(&self, o: &Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sparse polynomial over the Gaussian rationals in the [`Symbol`]s.
///
/// Zero coefficients are never stored and every `Sqrt2` exponent is 0 or 1,
/// so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhasePolynomial {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl PhasePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(GaussianRational::int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(GaussianRational::ratio(n, d))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn var(sym: Symbol) -> Self {
        Self::monomial(GaussianRational::one(), Monomial::var(sym))
    }

    pub fn monomial(c: GaussianRational, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> GaussianRational {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Adds `c·m`, reducing `s² → 2` first.
    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        let e = m.exponent(Symbol::Sqrt2);
        let (m, c) = if e >= 2 {
            let factor = BigInt::from(2).pow((e / 2) as u32);
            (m.with_exponent(Symbol::Sqrt2, e % 2), c.scale_int(&factor))
        } else {
            (m, c)
        };
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            out.add_term(*m, a * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::int(1), |acc, _| &acc * self)
    }

    /// Partial derivative with respect to `sym`.
    pub fn derivative(&self, sym: Symbol) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(sym);
            if e > 0 {
                out.add_term(m.with_exponent(sym, e - 1), c.scale_int(&BigInt::from(e)));
            }
        }
        out
    }

    /// Replaces every occurrence of `sym` by `value`.
    pub fn substitute(&self, sym: Symbol, value: &PhasePolynomial) -> Self {
        let mut powers = vec![Self::int(1)];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(sym) as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * value;
                powers.push(next);
            }
            let rest = Self::monomial(c.clone(), m.with_exponent(sym, 0));
            out = &out + &(&rest * &powers[e]);
        }
        out
    }

    /// Numerical value with `Sqrt2 = √2` and the other symbols from `value_of`.
    pub fn evaluate(&self, value_of: impl Fn(Symbol) -> Complex64) -> Complex64 {
        let vals: [Complex64; SYMBOL_COUNT] = std::array::from_fn(|k| match Symbol::ALL[k] {
            Symbol::Sqrt2 => Complex64::new(std::f64::consts::SQRT_2, 0.0),
            s => value_of(s),
        });
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(vals.iter())
                    .fold(c.to_complex(), |acc, (&e, v)| acc * v.powu(e as u32))
            })
            .sum()
    }
}

/// `Σ ∂f/∂q ∂g/∂p − ∂f/∂p ∂g/∂q` over both canonical coordinate sets.
pub fn poisson_bracket(f: &PhasePolynomial, g: &PhasePolynomial) -> PhasePolynomial {
    let mut out = PhasePolynomial::zero();
    for (q, p) in Symbol::CONJUGATE_PAIRS {
        let fq = f.derivative(q);
        let fp = f.derivative(p);
        if fq.is_zero() && fp.is_zero() {
            continue;
        }
        out = &out + &(&(&fq * &g.derivative(p)) - &(&fp * &g.derivative(q)));
    }
    out
}

impl Add<&PhasePolynomial> for &PhasePolynomial {
    type Output = PhasePolynomial;
    fn add(self, o: &PhasePolynomial) -> PhasePolynomial {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub<&PhasePolynomial> for &PhasePolynomial {
    type Output = PhasePolynomial;
    fn sub(self, o: &PhasePolynomial) -> PhasePolynomial {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul<&PhasePolynomial> for &PhasePolynomial {
    type Output = PhasePolynomial;
    fn mul(self, o: &PhasePolynomial) -> PhasePolynomial {
        let mut out = PhasePolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.product(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &PhasePolynomial {
    type Output = PhasePolynomial;
    fn neg(self) -> PhasePolynomial {
        self.scale(&GaussianRational::int(-1))
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for PhasePolynomial {
            type Output = PhasePolynomial;
            fn $f(self, o: PhasePolynomial) -> PhasePolynomial {
                (&self).$f(&o)
            }
        }
        impl $tr<&PhasePolynomial> for PhasePolynomial {
            type Output = PhasePolynomial;
            fn $f(self, o: &PhasePolynomial) -> PhasePolynomial {
                (&self).$f(o)
            }
        }
        impl $tr<PhasePolynomial> for &PhasePolynomial {
            type Output = PhasePolynomial;
            fn $f(self, o: PhasePolynomial) -> PhasePolynomial {
                self.$f(&o)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for PhasePolynomial {
    type Output = PhasePolynomial;
    fn neg(self) -> PhasePolynomial {
        -&self
    }
}

impl fmt::Display for PhasePolynomial {
    /// Highest-degree terms first, e.g. `x*py - y*px`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative_real = c.is_real() && c.re < num_rational::BigRational::zero();
            let c = if negative_real { -c.clone() } else { c.clone() };
            match (k, negative_real) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !c.is_one() || m.degree() == 0 {
                factors.push(c.to_string());
            }
            for s in Symbol::ALL {
                match m.exponent(s) {
                    0 => {}
                    1 => factors.push(s.name().to_string()),
                    e => factors.push(format!("{}^{e}", s.name())),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}
