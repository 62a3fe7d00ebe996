//! Polynomials over the integers and over prime fields.

mod modp;
mod sturm;

pub use modp::{factor_mod, irreducibility_witness, IrreducibilityWitness, ModFactorization, ModPoly};
pub use sturm::{count_real_roots, Bound, Interval};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

use crate::linalg::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("divisor must be monic")]
    NonMonicDivisor,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("constant term must be +1 or -1")]
    NonUnitConstantTerm,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Polynomial with arbitrary-precision integer coefficients, stored in
/// ascending degree order with no trailing zeros (the zero polynomial is empty).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        IntPoly::new(v)
    }

    /// `x - b`
    pub fn linear(b: &BigInt) -> Self {
        IntPoly::new(vec![-b.clone(), BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `f(A)` by Horner's rule.
    pub fn eval_matrix(&self, a: &IntMatrix) -> IntMatrix {
        let n = a.rows();
        let mut acc = IntMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a).expect("square matrix");
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Division by a monic divisor: `self = q * g + r` with `deg r < deg g`.
    pub fn divrem(&self, g: &IntPoly) -> Result<(IntPoly, IntPoly), PolyError> {
        if !g.is_monic() {
            return Err(PolyError::NonMonicDivisor);
        }
        let dg = g.degree().unwrap_or(0);
        let mut r = self.coeffs.clone();
        if r.len() <= dg {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let mut q = vec![BigInt::zero(); r.len() - dg];
        for k in (0..q.len()).rev() {
            let c = std::mem::take(&mut r[k + dg]);
            if c.is_zero() {
                continue;
            }
            for (j, gj) in g.coeffs.iter().enumerate().take(dg) {
                r[k + j] -= &c * gj;
            }
            q[k] = c;
        }
        r.truncate(dg);
        Ok((IntPoly::new(q), IntPoly::new(r)))
    }

    /// Pseudo-remainder: `lc(g)^(deg f - deg g + 1) * f = q*g + r`.
    pub fn pseudo_rem(&self, g: &IntPoly) -> IntPoly {
        let dg = g.degree().expect("nonzero divisor");
        let Some(df) = self.degree() else { return IntPoly::zero() };
        if df < dg {
            return self.clone();
        }
        let lg = g.leading().unwrap().clone();
        let mut r = self.clone();
        let mut e = df - dg + 1;
        while let Some(dr) = r.degree() {
            if dr < dg {
                break;
            }
            let lr = r.leading().unwrap().clone();
            let shifted = IntPoly::monomial(lr, dr - dg) * g;
            r = r.scale(&lg) - shifted;
            e -= 1;
        }
        r.scale(&Pow::pow(&lg, e))
    }

    /// `(-x)^n f(1/x)`: the characteristic polynomial of `A^{-1}` when `f`
    /// is that of `A` and `det A = 1`. Leading coefficient `-1` is accepted
    /// so that the map is an involution.
    pub fn signed_reciprocal(&self) -> Result<IntPoly, PolyError> {
        if !self.leading().is_some_and(|c| c.abs().is_one()) {
            return Err(PolyError::NotMonic);
        }
        let c0 = self.constant_term();
        if !c0.abs().is_one() {
            return Err(PolyError::NonUnitConstantTerm);
        }
        let n = self.degree().unwrap();
        let sign = if n.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        Ok(IntPoly::new(self.coeffs.iter().rev().map(|c| c * &sign).collect()))
    }

    pub fn reduce_mod(&self, p: u64) -> Result<ModPoly, PolyError> {
        ModPoly::from_int_poly(self, p)
    }

    /// Resultant by the subresultant PRS.
    pub fn resultant(&self, other: &IntPoly) -> BigInt {
        resultant(self, other)
    }

    /// `disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Result<BigInt, PolyError> {
        let n = match self.degree() {
            None | Some(0) => return Err(PolyError::ZeroPolynomial),
            Some(n) => n,
        };
        let r = resultant(self, &self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        Ok(sign * r / self.leading().unwrap())
    }

    /// Greatest common divisor over Q, returned primitive with positive
    /// leading coefficient.
    pub fn gcd_q(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd_q(&self.derivative()).degree().unwrap_or(0) == 0
    }

    /// Exact division over Z when `g` divides `self` in Q[x] and the quotient
    /// is integral; used for squarefree parts.
    pub fn exact_div(&self, g: &IntPoly) -> Option<IntPoly> {
        let dg = g.degree()?;
        let lg = g.leading().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dg {
            return if self.is_zero() { Some(IntPoly::zero()) } else { None };
        }
        let mut q = vec![BigInt::zero(); r.len() - dg];
        for k in (0..q.len()).rev() {
            let (c, rem) = r[k + dg].div_rem(lg);
            if !rem.is_zero() {
                return None;
            }
            for (j, gj) in g.coeffs.iter().enumerate() {
                r[k + j] -= &c * gj;
            }
            q[k] = c;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(IntPoly::new(q))
    }

    /// Squarefree part `f / gcd(f, f')`, primitive.
    pub fn squarefree_part(&self) -> IntPoly {
        let g = self.gcd_q(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.primitive_part();
        }
        let pp = self.primitive_part();
        pp.exact_div(&g).map(|q| q.primitive_part()).unwrap_or(pp)
    }

    /// Whitespace-separated ascending coefficients.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }

    pub fn parse_text(s: &str) -> Result<IntPoly, PolyError> {
        let coeffs = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<BigInt>().map_err(|e| PolyError::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.is_empty() {
            return Err(PolyError::Parse("no coefficients".into()));
        }
        Ok(IntPoly::new(coeffs))
    }
}

fn resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut s = BigInt::one();
    let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
    if da < db {
        std::mem::swap(&mut a, &mut b);
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
    }
    let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
    if db == 0 {
        return s * Pow::pow(b.leading().unwrap(), da);
    }
    let ca = a.content();
    let cb = b.content();
    a = IntPoly::new(a.coeffs.iter().map(|x| x / &ca).collect());
    b = IntPoly::new(b.coeffs.iter().map(|x| x / &cb).collect());
    let t = Pow::pow(&ca, db) * Pow::pow(&cb, da);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let div = &g * Pow::pow(&h, delta);
        b = IntPoly::new(r.coeffs.iter().map(|x| x / &div).collect());
        g = a.leading().unwrap().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            d => Pow::pow(&g, d) / Pow::pow(&h, d - 1),
        };
        match b.degree() {
            None => return BigInt::zero(),
            Some(0) => break,
            Some(_) => {}
        }
    }
    let da = a.degree().unwrap();
    let lb = b.leading().unwrap();
    let hh = if da == 0 {
        BigInt::one()
    } else {
        Pow::pow(lb, da) / Pow::pow(&h, da - 1)
    };
    s * t * hh
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Human-readable, descending: `x^4 - 8x^3 + 14x^2 - 9x + 1`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show = !a.is_one() || i == 0;
            if show {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add<&IntPoly> for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&IntPoly> for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&IntPoly> for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: &IntPoly) -> IntPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
