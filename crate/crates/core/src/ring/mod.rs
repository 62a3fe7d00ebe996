//! The order `Z[θ] = Z[x]/(f)`: elements, ideals as θ-stable lattices,
//! invertibility, maximality and ideal classes.

mod classes;
mod embed;
mod enumerate;
mod equiv;
mod ideal;
mod kd;

pub use classes::{class_monoid, ClassList, ClassOptions, GroupStructure};
pub use embed::Embeddings;
pub use enumerate::{brute_force_ideals, ideals_up_to_norm, ideals_up_to_norm_capped, minkowski_bound, minkowski_bound_unchecked, DEFAULT_NORM_CAP};
pub use equiv::{equivalence_test, Certificate, EquivVerdict, SearchLimits};
pub use ideal::{FracLattice, IdealLattice};
pub use kd::{
    corollary_basis, is_integrally_closed, is_maximal_at, kummer_dedekind, ClosureReport,
    Closedness, Invertibility, KummerDedekind,
};

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{IntMatrix, LinalgError};
use crate::poly::{IntPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("defining polynomial is not monic")]
    NonMonic,
    #[error("defining polynomial has degree {0}, need at least 2")]
    DegreeTooSmall(usize),
    #[error("operands belong to different orders")]
    OrderMismatch,
    #[error("all generators are zero")]
    AllZeroGenerators,
    #[error("coordinate vector has length {got}, expected {expected}")]
    BadLength { got: usize, expected: usize },
    #[error("lattice is not a full-rank θ-stable sublattice")]
    NotAnIdeal,
    #[error("{0} is not an irreducible factor of f mod p with the given multiplicity")]
    NotAFactor(String),
    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error("norm bound {bound} exceeds the enumeration cap {cap}")]
    BoundTooLargeForBudget { bound: u64, cap: u64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

struct OrderData {
    f: IntPoly,
    n: usize,
    theta: IntMatrix,
    disc: BigInt,
    embeddings: OnceLock<Option<Embeddings>>,
    units: OnceLock<equiv::UnitData>,
}

/// `Z[θ]` for a monic `f`; cheap to clone.
#[derive(Clone)]
pub struct Order(Arc<OrderData>);

impl PartialEq for Order {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.f == other.0.f
    }
}

impl Eq for Order {}

impl fmt::Debug for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[x]/({})", self.0.f)
    }
}

impl Order {
    /// Irreducibility of `f` is the caller's responsibility.
    pub fn new(f: &IntPoly) -> Result<Order, RingError> {
        if !f.is_monic() {
            return Err(RingError::NonMonic);
        }
        let n = f.degree().unwrap();
        if n < 2 {
            return Err(RingError::DegreeTooSmall(n));
        }
        let mut theta = IntMatrix::zeros(n, n);
        for i in 0..n - 1 {
            theta[(i, i + 1)] = BigInt::one();
        }
        for j in 0..n {
            theta[(n - 1, j)] = -f.coeff(j);
        }
        let disc = f.discriminant()?;
        Ok(Order(Arc::new(OrderData {
            f: f.clone(),
            n,
            theta,
            disc,
            embeddings: OnceLock::new(),
            units: OnceLock::new(),
        })))
    }

    pub fn f(&self) -> &IntPoly {
        &self.0.f
    }

    pub fn degree(&self) -> usize {
        self.0.n
    }

    /// Multiplication by θ acting on row coordinate vectors: `v -> v * M`.
    pub fn theta_matrix(&self) -> &IntMatrix {
        &self.0.theta
    }

    pub fn disc(&self) -> &BigInt {
        &self.0.disc
    }

    pub fn embeddings(&self) -> Option<&Embeddings> {
        self.0.embeddings.get_or_init(|| Embeddings::new(self.f())).as_ref()
    }

    pub(crate) fn unit_data(&self) -> &equiv::UnitData {
        self.0.units.get_or_init(|| equiv::UnitData::search(self))
    }

    pub fn one(&self) -> OrderElement {
        let mut c = vec![BigInt::zero(); self.degree()];
        c[0] = BigInt::one();
        OrderElement { order: self.clone(), coords: c }
    }

    pub fn theta(&self) -> OrderElement {
        let mut c = vec![BigInt::zero(); self.degree()];
        c[1] = BigInt::one();
        OrderElement { order: self.clone(), coords: c }
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Result<OrderElement, RingError> {
        if coords.len() != self.degree() {
            return Err(RingError::BadLength { got: coords.len(), expected: self.degree() });
        }
        Ok(OrderElement { order: self.clone(), coords })
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<OrderElement, RingError> {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The image of an integer polynomial under `x -> θ`.
    pub fn element_from_poly(&self, g: &IntPoly) -> OrderElement {
        let (_, r) = g.divrem(self.f()).expect("f is monic");
        OrderElement { order: self.clone(), coords: self.pad(r.coeffs()) }
    }

    fn pad(&self, c: &[BigInt]) -> Vec<BigInt> {
        let mut v = c.to_vec();
        v.resize(self.degree(), BigInt::zero());
        v
    }

    /// Coordinates of `θ * v`.
    pub fn mul_theta(&self, v: &[BigInt]) -> Vec<BigInt> {
        let n = self.degree();
        let top = &v[n - 1];
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut x = if j == 0 { BigInt::zero() } else { v[j - 1].clone() };
            if !top.is_zero() {
                x -= top * self.f().coeff(j);
            }
            out.push(x);
        }
        out
    }

    pub fn mul_coords(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let pa = IntPoly::new(a.to_vec());
        let pb = IntPoly::new(b.to_vec());
        let (_, r) = (&pa * &pb).divrem(self.f()).expect("f is monic");
        self.pad(r.coeffs())
    }

    /// Matrix whose row `i` holds the coordinates of `θ^i * x`, so that
    /// `coords(y * x) = coords(y) * M`.
    pub fn mult_matrix(&self, x: &[BigInt]) -> IntMatrix {
        let n = self.degree();
        let mut rows = Vec::with_capacity(n);
        let mut cur = x.to_vec();
        for _ in 0..n {
            let next = self.mul_theta(&cur);
            rows.push(std::mem::replace(&mut cur, next));
        }
        IntMatrix::from_rows(rows).expect("square")
    }

    pub fn norm_coords(&self, x: &[BigInt]) -> BigInt {
        self.mult_matrix(x).det().expect("square")
    }

    /// `θ^{-1}` when `f(0) = ±1`, from `θ (θ^{n-1} + c_{n-1} θ^{n-2} + ... + c_1) = -c_0`.
    pub fn theta_inverse(&self) -> Option<OrderElement> {
        let c0 = self.f().constant_term();
        if !c0.abs().is_one() {
            return None;
        }
        let n = self.degree();
        let sign = -c0;
        let coords = (0..n).map(|j| self.f().coeff(j + 1) * &sign).collect();
        Some(OrderElement { order: self.clone(), coords })
    }
}

/// Element of `Z[θ]` in power-basis coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct OrderElement {
    order: Order,
    coords: Vec<BigInt>,
}

impl OrderElement {
    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn same_order(&self, other: &OrderElement) -> Result<(), RingError> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(RingError::OrderMismatch)
        }
    }

    pub fn mul(&self, other: &OrderElement) -> Result<OrderElement, RingError> {
        self.same_order(other)?;
        let coords = self.order.mul_coords(&self.coords, &other.coords);
        Ok(OrderElement { order: self.order.clone(), coords })
    }

    pub fn add(&self, other: &OrderElement) -> Result<OrderElement, RingError> {
        self.same_order(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(OrderElement { order: self.order.clone(), coords })
    }

    pub fn sub(&self, other: &OrderElement) -> Result<OrderElement, RingError> {
        self.same_order(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(OrderElement { order: self.order.clone(), coords })
    }

    pub fn scale(&self, k: &BigInt) -> OrderElement {
        OrderElement { order: self.order.clone(), coords: self.coords.iter().map(|c| c * k).collect() }
    }

    /// Field norm, the determinant of multiplication by this element.
    pub fn norm(&self) -> BigInt {
        self.order.norm_coords(&self.coords)
    }

    pub fn to_poly(&self) -> IntPoly {
        IntPoly::new(self.coords.clone())
    }
}

impl fmt::Debug for OrderElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly().to_string().replace('x', "θ"))
    }
}

impl fmt::Display for OrderElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
