//! Ideals of `Z[θ]` as canonical HNF lattices, and fractional lattices.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Order, OrderElement, RingError};
use crate::linalg::{congruence_sublattice, hnf_basis, hnf_modular, IntMatrix};

/// Nonzero ideal of `Z[θ]`; rows of `hnf` are a Z-basis in power-basis
/// coordinates, in canonical row HNF.
#[derive(Clone)]
pub struct IdealLattice {
    order: Order,
    hnf: IntMatrix,
}

impl PartialEq for IdealLattice {
    fn eq(&self, other: &Self) -> bool {
        self.hnf == other.hnf && self.order == other.order
    }
}

impl Eq for IdealLattice {}

impl Hash for IdealLattice {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.hnf.hash(state);
    }
}

impl fmt::Debug for IdealLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal(norm {}, hnf {:?})", self.norm(), self.hnf)
    }
}

impl IdealLattice {
    pub(crate) fn from_hnf_unchecked(order: &Order, hnf: IntMatrix) -> IdealLattice {
        IdealLattice { order: order.clone(), hnf }
    }

    /// Validates full rank and θ-stability of the lattice spanned by `basis`.
    pub fn from_basis(order: &Order, basis: &IntMatrix) -> Result<IdealLattice, RingError> {
        let n = order.degree();
        if basis.cols() != n {
            return Err(RingError::BadLength { got: basis.cols(), expected: n });
        }
        let h = hnf_basis(basis).ok_or(RingError::NotAnIdeal)?;
        if h.rows() != n {
            return Err(RingError::NotAnIdeal);
        }
        let ideal = IdealLattice { order: order.clone(), hnf: h };
        if !ideal.is_theta_stable() {
            return Err(RingError::NotAnIdeal);
        }
        Ok(ideal)
    }

    pub fn unit(order: &Order) -> IdealLattice {
        IdealLattice { order: order.clone(), hnf: IntMatrix::identity(order.degree()) }
    }

    /// The ideal generated by `gens` as an O-module.
    pub fn from_generators(order: &Order, gens: &[OrderElement]) -> Result<IdealLattice, RingError> {
        for g in gens {
            if g.order() != order {
                return Err(RingError::OrderMismatch);
            }
        }
        let coords: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords().to_vec()).collect();
        Self::from_generator_coords(order, &coords)
    }

    pub(crate) fn from_generator_coords(order: &Order, gens: &[Vec<BigInt>]) -> Result<IdealLattice, RingError> {
        let first = gens
            .iter()
            .find(|g| g.iter().any(|c| !c.is_zero()))
            .ok_or(RingError::AllZeroGenerators)?;
        // |N(g)| lies in (g), so the lattice contains |N(g)| Z^n
        let modulus = order.norm_coords(first).abs();
        let mut rows = Vec::with_capacity(gens.len() * order.degree());
        for g in gens {
            rows.extend(order.mult_matrix(g).row_vecs());
        }
        let hnf = hnf_modular(&rows, order.degree(), &modulus);
        Ok(IdealLattice { order: order.clone(), hnf })
    }

    pub fn principal(x: &OrderElement) -> Result<IdealLattice, RingError> {
        Self::from_generators(x.order(), std::slice::from_ref(x))
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn hnf(&self) -> &IntMatrix {
        &self.hnf
    }

    /// Index `[Z[θ] : I]`.
    pub fn norm(&self) -> BigInt {
        (0..self.hnf.rows()).map(|i| self.hnf[(i, i)].clone()).product()
    }

    pub fn is_unit(&self) -> bool {
        self.hnf.is_identity()
    }

    /// Coordinates of `v` in the HNF basis, if `v` lies in the lattice.
    pub fn coords_in(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let n = self.hnf.rows();
        let mut rest = v.to_vec();
        let mut u = Vec::with_capacity(n);
        for i in 0..n {
            let (q, r) = rest[i].div_rem(&self.hnf[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for j in i..n {
                    rest[j] -= &q * &self.hnf[(i, j)];
                }
            }
            u.push(q);
        }
        Some(u)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coords_in(v).is_some()
    }

    pub fn is_theta_stable(&self) -> bool {
        (0..self.hnf.rows()).all(|i| self.contains(&self.order.mul_theta(self.hnf.row(i))))
    }

    fn check_order(&self, other: &IdealLattice) -> Result<(), RingError> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(RingError::OrderMismatch)
        }
    }

    pub fn product(&self, other: &IdealLattice) -> Result<IdealLattice, RingError> {
        self.check_order(other)?;
        if self.is_unit() {
            return Ok(other.clone());
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        let n = self.order.degree();
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            let m = self.order.mult_matrix(self.hnf.row(i));
            for j in 0..n {
                rows.push(m.left_mul_vec(other.hnf.row(j)));
            }
        }
        let modulus = self.norm() * other.norm();
        Ok(IdealLattice { order: self.order.clone(), hnf: hnf_modular(&rows, n, &modulus) })
    }

    /// `k * I` for a nonzero integer `k`.
    pub fn scale(&self, k: &BigInt) -> IdealLattice {
        IdealLattice { order: self.order.clone(), hnf: self.hnf.scale(&k.abs()) }
    }

    /// `x * I` for a nonzero element `x`.
    pub fn mul_element(&self, x: &[BigInt]) -> IdealLattice {
        let m = self.order.mult_matrix(x);
        let rows: Vec<Vec<BigInt>> = (0..self.hnf.rows()).map(|i| m.left_mul_vec(self.hnf.row(i))).collect();
        let modulus = self.norm() * m.det().expect("square").abs();
        IdealLattice { order: self.order.clone(), hnf: hnf_modular(&rows, self.order.degree(), &modulus) }
    }

    /// `(self : other) = { x : x * other ⊆ self }`.
    pub fn colon(&self, other: &IdealLattice) -> Result<FracLattice, RingError> {
        self.check_order(other)?;
        let n = self.order.degree();
        let ni = other.norm();
        let nj = self.norm();
        // x = y / N(I) with y in J and y * b in N(I) J for every basis vector b of I
        let adj = self.hnf.adjugate()?;
        let mut blocks = IntMatrix::zeros(n, n * n);
        for i in 0..n {
            let c = self.order.mult_matrix(other.hnf.row(i)).mul(&adj)?;
            for r in 0..n {
                for s in 0..n {
                    blocks[(r, i * n + s)] = c[(r, s)].clone();
                }
            }
        }
        let modulus = &ni * &nj;
        let y = congruence_sublattice(&self.hnf, &blocks, &modulus);
        Ok(FracLattice::new(IdealLattice { order: self.order.clone(), hnf: y }, ni))
    }

    /// `I * (O : I) = O`.
    pub fn is_invertible(&self) -> bool {
        if self.is_unit() {
            return true;
        }
        let inv = IdealLattice::unit(&self.order).colon(self).expect("same order");
        let prod = self.product(&inv.num).expect("same order");
        prod.hnf == IntMatrix::identity(self.order.degree()).scale(&inv.den)
    }

    /// The multiplier ring `(I : I)`.
    pub fn multiplier_ring(&self) -> FracLattice {
        self.colon(self).expect("same order")
    }

    /// Integer matrix of multiplication by θ in the HNF basis:
    /// `θ v_i = Σ_j A_ij v_j`.
    pub fn theta_action(&self) -> IntMatrix {
        let n = self.order.degree();
        let rows = (0..n)
            .map(|i| self.coords_in(&self.order.mul_theta(self.hnf.row(i))).expect("θ-stable"))
            .collect();
        IntMatrix::from_rows(rows).expect("square")
    }

    pub(crate) fn cmp_canonical(&self, other: &IdealLattice) -> Ordering {
        self.norm().cmp(&other.norm()).then_with(|| self.hnf.entries().cmp(other.hnf.entries()))
    }
}

/// `num / den` with `num` an integral θ-stable lattice and `den > 0`,
/// reduced so that `gcd(den, content(num)) = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FracLattice {
    pub num: IdealLattice,
    pub den: BigInt,
}

impl FracLattice {
    pub fn new(num: IdealLattice, den: BigInt) -> FracLattice {
        let content = num.hnf.entries().iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let g = content.gcd(&den);
        if g.is_one() {
            return FracLattice { num, den };
        }
        let hnf = IntMatrix::new(
            num.hnf.rows(),
            num.hnf.cols(),
            num.hnf.entries().iter().map(|x| x / &g).collect(),
        )
        .expect("same shape");
        FracLattice { num: IdealLattice { order: num.order, hnf }, den: den / g }
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.den.is_one() && self.num.is_unit()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn o64() -> Order {
        Order::new(&ip(&[1, -65, 126, -64, 1])).unwrap()
    }

    fn ideal_11(o: &Order) -> IdealLattice {
        let gens = [o.element_i64(&[11, 0, 0, 0]).unwrap(), o.element_i64(&[-2, 1, 0, 0]).unwrap()];
        IdealLattice::from_generators(o, &gens).unwrap()
    }

    /// Plain HNF of all products, without the modular shortcut.
    fn product_oracle(a: &IdealLattice, b: &IdealLattice) -> IntMatrix {
        let o = a.order();
        let n = o.degree();
        let mut rows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                rows.push(o.mul_coords(a.hnf().row(i), b.hnf().row(j)));
            }
        }
        hnf_basis(&IntMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn generator_examples() {
        let o = o64();
        let i = ideal_11(&o);
        assert_eq!(i.norm(), BigInt::from(11));
        let diag: Vec<BigInt> = (0..4).map(|k| i.hnf()[(k, k)].clone()).collect();
        assert_eq!(diag, vec![BigInt::one(), BigInt::one(), BigInt::one(), BigInt::from(11)]);
        assert!(i.is_theta_stable());
        assert!(IdealLattice::from_generators(&o, &[o.one()]).unwrap().is_unit());
        assert!(IdealLattice::from_generators(&o, &[o.theta()]).unwrap().is_unit());
        assert_eq!(
            IdealLattice::from_generators(&o, &[o.element_i64(&[0, 0, 0, 0]).unwrap()]),
            Err(RingError::AllZeroGenerators)
        );
    }

    #[test]
    fn products_match_oracle() {
        let o = o64();
        let i = ideal_11(&o);
        let ii = i.product(&i).unwrap();
        assert_eq!(ii.hnf(), &product_oracle(&i, &i));
        // not invertible, so N(I^2) != N(I)^2
        assert_eq!(ii.norm(), BigInt::from(1331));
        let p = IdealLattice::principal(&o.element_i64(&[2, 0, 0, 0]).unwrap()).unwrap();
        let q = IdealLattice::principal(&o.element_i64(&[3, 0, 0, 0]).unwrap()).unwrap();
        assert_eq!(p.product(&q).unwrap().norm(), BigInt::from(6i64.pow(4)));
    }

    #[test]
    fn colon_examples() {
        let o = o64();
        let i = ideal_11(&o);
        let unit = IdealLattice::unit(&o);
        let c = i.colon(&unit).unwrap();
        assert_eq!(c.num, i);
        assert!(c.den.is_one());
        assert!(unit.colon(&unit).unwrap().is_unit_ideal());
        // every x in (O : I) satisfies x I ⊆ O
        let inv = unit.colon(&i).unwrap();
        for r in 0..4 {
            for s in 0..4 {
                let prod = o.mul_coords(inv.num.hnf().row(r), i.hnf().row(s));
                assert!(prod.iter().all(|x| (x % &inv.den).is_zero()));
            }
        }
    }

    #[test]
    fn invertibility_examples() {
        let o = o64();
        assert!(!ideal_11(&o).is_invertible());
        assert!(IdealLattice::unit(&o).is_invertible());
        let g = o.element_i64(&[3, -1, 2, 5]).unwrap();
        assert!(IdealLattice::principal(&g).unwrap().is_invertible());
    }

    #[test]
    fn theta_action_examples() {
        let o = o64();
        assert_eq!(&IdealLattice::unit(&o).theta_action(), o.theta_matrix());
        let a = ideal_11(&o).theta_action();
        assert_eq!(a.charpoly().unwrap(), *o.f());
    }
}
