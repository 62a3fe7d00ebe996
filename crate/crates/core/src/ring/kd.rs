//! Kummer–Dedekind invertibility test and maximality.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_prime::buffer::{NaiveBuffer, PrimeBufferExt};
use num_prime::PrimeBuffer;
use num_prime::FactorizationConfig;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{IdealLattice, Order, RingError};
use crate::linalg::{hnf_basis, IntMatrix};
use crate::poly::{factor_mod, IntPoly, ModPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Invertibility {
    Invertible,
    NotInvertible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KummerDedekind {
    pub verdict: Invertibility,
    /// Lift of `g` with coefficients in `(-p/2, p/2]`.
    pub lift: IntPoly,
    /// Remainder of `f` divided by the lift.
    pub remainder: IntPoly,
}

/// Invertibility of `(p, g(θ))` for a monic irreducible factor `g` of
/// `f mod p` of multiplicity `e`.
pub fn kummer_dedekind(o: &Order, p: u64, g: &ModPoly, e: usize) -> Result<KummerDedekind, RingError> {
    let fp = o.f().reduce_mod(p)?;
    if g.modulus() != p || !g.is_monic() {
        return Err(RingError::NotAFactor(g.to_string()));
    }
    let fac = factor_mod(&fp, 0);
    if e == 0 || fac.multiplicity_of(g) != e {
        return Err(RingError::NotAFactor(g.to_string()));
    }
    let lift = g.lift_symmetric();
    let (_, remainder) = o.f().divrem(&lift)?;
    let p2 = BigInt::from(p) * BigInt::from(p);
    let p2_divides = remainder.coeffs().iter().all(|c| (c % &p2).is_zero());
    let verdict = if e >= 2 && p2_divides { Invertibility::NotInvertible } else { Invertibility::Invertible };
    Ok(KummerDedekind { verdict, lift, remainder })
}

/// The lattice spanned by `p, θ - b, θ(θ - b), ..., θ^{n-2}(θ - b)`.
pub fn corollary_basis(o: &Order, p: u64, b: &BigInt) -> Result<IdealLattice, RingError> {
    let n = o.degree();
    let lin = IntPoly::linear(b);
    let g = lin.reduce_mod(p)?;
    let fac = factor_mod(&o.f().reduce_mod(p)?, 0);
    let e = fac.multiplicity_of(&g);
    if e < 2 {
        return Err(RingError::HypothesesNotMet(format!("x - ({b}) has multiplicity {e} mod {p}")));
    }
    let (_, r) = o.f().divrem(&lin)?;
    let p2 = BigInt::from(p) * BigInt::from(p);
    if !(r.constant_term() % &p2).is_zero() {
        return Err(RingError::HypothesesNotMet(format!("{p}^2 does not divide {}", r.constant_term())));
    }
    let mut rows = Vec::with_capacity(n);
    let mut first = vec![BigInt::zero(); n];
    first[0] = BigInt::from(p);
    rows.push(first.clone());
    let mut cur = o.element_from_poly(&lin).coords().to_vec();
    for _ in 0..n - 1 {
        let next = o.mul_theta(&cur);
        rows.push(std::mem::replace(&mut cur, next));
    }
    let hnf = hnf_basis(&IntMatrix::from_rows(rows)?).ok_or(RingError::NotAnIdeal)?;
    if hnf.rows() != n {
        return Err(RingError::NotAnIdeal);
    }
    let ideal = IdealLattice::from_hnf_unchecked(o, hnf);
    let generated = IdealLattice::from_generators(o, &[o.element(first)?, o.element_from_poly(&lin)])?;
    if generated != ideal {
        return Err(RingError::HypothesesNotMet("basis does not span (p, θ - b)".into()));
    }
    Ok(ideal)
}

/// Every maximal ideal above `p` is invertible.
pub fn is_maximal_at(o: &Order, p: u64) -> Result<bool, RingError> {
    let fac = factor_mod(&o.f().reduce_mod(p)?, 0);
    for (g, e) in &fac.factors {
        if *e >= 2 && kummer_dedekind(o, p, g, *e)?.verdict == Invertibility::NotInvertible {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Closedness {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub verdict: Closedness,
    /// `(p, exponent of p in disc, maximal at p)` for every prime with
    /// exponent at least 2; maximality is not tested for others.
    pub primes: Vec<(String, usize, Option<bool>)>,
    /// Cofactors left unfactored within the budget.
    pub unfactored: Vec<String>,
}

impl ClosureReport {
    pub fn failing_primes(&self) -> Vec<String> {
        self.primes.iter().filter(|(_, _, m)| *m == Some(false)).map(|(p, _, _)| p.clone()).collect()
    }
}

/// Trial division bound for discriminant factoring.
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Maximality of `Z[θ]`. `factor_budget` is the number of Pollard-rho
/// attempts allowed once trial division is exhausted.
pub fn is_integrally_closed(o: &Order, factor_budget: usize) -> ClosureReport {
    let d: BigUint = o.disc().abs().to_biguint().expect("nonnegative");
    let mut buf = NaiveBuffer::new();
    buf.reserve(TRIAL_DIVISION_LIMIT);
    let mut config = FactorizationConfig::default();
    config.td_limit = Some(TRIAL_DIVISION_LIMIT);
    config.rho_trials = factor_budget;
    let (found, failed): (BTreeMap<BigUint, usize>, Option<Vec<BigUint>>) = buf.factors(d, Some(config));
    let mut primes = Vec::new();
    let mut any_fail = false;
    let mut undecided = false;
    for (p, e) in &found {
        if *e < 2 {
            primes.push((p.to_string(), *e, None));
            continue;
        }
        let maximal = match p.to_u64() {
            Some(p64) => is_maximal_at(o, p64).ok(),
            None => None,
        };
        match maximal {
            Some(false) => any_fail = true,
            None => undecided = true,
            Some(true) => {}
        }
        primes.push((p.to_string(), *e, maximal));
    }
    let unfactored: Vec<String> = failed.unwrap_or_default().iter().map(ToString::to_string).collect();
    let verdict = if any_fail {
        Closedness::No
    } else if undecided || !unfactored.is_empty() {
        Closedness::Unknown
    } else {
        Closedness::Yes
    };
    ClosureReport { verdict, primes, unfactored }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn mp(p: u64, c: &[u64]) -> ModPoly {
        ModPoly::new(p, c.to_vec()).unwrap()
    }

    #[test]
    fn kummer_dedekind_examples() {
        let o = Order::new(&ip(&[1, -65, 126, -64, 1])).unwrap();
        let kd = kummer_dedekind(&o, 11, &mp(11, &[9, 1]), 2).unwrap();
        assert_eq!(kd.verdict, Invertibility::NotInvertible);
        assert_eq!(kd.remainder, IntPoly::constant(BigInt::from(-121)));
        let kd = kummer_dedekind(&o, 11, &mp(11, &[3, 6, 1]), 1).unwrap();
        assert_eq!(kd.verdict, Invertibility::Invertible);
        assert!(kummer_dedekind(&o, 11, &mp(11, &[1, 1]), 1).is_err());
        let o6 = Order::new(&ip(&[-1, 7, -11, 11, -6, 1])).unwrap();
        let kd = kummer_dedekind(&o6, 5, &mp(5, &[2, 1]), 2).unwrap();
        assert_eq!(kd.verdict, Invertibility::NotInvertible);
        assert_eq!(kd.remainder, IntPoly::constant(BigInt::from(-275)));
    }

    #[test]
    fn corollary_basis_examples() {
        let o = Order::new(&ip(&[1, -65, 126, -64, 1])).unwrap();
        let i = corollary_basis(&o, 11, &BigInt::from(2)).unwrap();
        assert_eq!(i.norm(), BigInt::from(11));
        let o6 = Order::new(&ip(&[-1, 7, -11, 11, -6, 1])).unwrap();
        assert_eq!(corollary_basis(&o6, 5, &BigInt::from(-2)).unwrap().norm(), BigInt::from(5));
        let o20 = Order::new(&ip(&[-1, 20, -18, 402, -401, 18, -20, 1])).unwrap();
        assert_eq!(corollary_basis(&o20, 11, &BigInt::from(-6)).unwrap().norm(), BigInt::from(11));
        let o8 = Order::new(&ip(&[1, -9, 14, -8, 1])).unwrap();
        assert!(matches!(corollary_basis(&o8, 11, &BigInt::from(2)), Err(RingError::HypothesesNotMet(_))));
    }

    #[test]
    fn maximality_examples() {
        let o8 = Order::new(&ip(&[1, -9, 14, -8, 1])).unwrap();
        assert!(is_maximal_at(&o8, 17).unwrap());
        assert_eq!(is_integrally_closed(&o8, 4).verdict, Closedness::Yes);
        let o64 = Order::new(&ip(&[1, -65, 126, -64, 1])).unwrap();
        assert!(!is_maximal_at(&o64, 11).unwrap());
        let rep = is_integrally_closed(&o64, 4);
        assert_eq!(rep.verdict, Closedness::No);
        assert_eq!(rep.failing_primes(), vec!["11".to_string()]);
        let q = Order::new(&ip(&[1, -3, 1])).unwrap();
        assert_eq!(is_integrally_closed(&q, 4).verdict, Closedness::Yes);
        assert!(is_maximal_at(&q, 7).unwrap());
    }
}
