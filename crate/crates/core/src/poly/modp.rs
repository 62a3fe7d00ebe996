//! Polynomials over F_p and their factorization (squarefree decomposition,
//! distinct-degree factorization, Cantor–Zassenhaus equal-degree splitting).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_prime::nt_funcs::is_prime64;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{IntPoly, PolyError};

/// Polynomial over F_p with canonical residues in `[0, p)`, ascending, no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

impl ModPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self, PolyError> {
        if !is_prime64(p) {
            return Err(PolyError::NotPrime(p));
        }
        Ok(ModPoly::new_unchecked(p, coeffs))
    }

    fn new_unchecked(p: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    pub fn from_int_poly(f: &IntPoly, p: u64) -> Result<Self, PolyError> {
        if !is_prime64(p) {
            return Err(PolyError::NotPrime(p));
        }
        let pb = BigInt::from(p);
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits"))
            .collect();
        Ok(ModPoly::new_unchecked(p, coeffs))
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn zero(p: u64) -> Self {
        ModPoly { p, coeffs: Vec::new() }
    }

    fn one(p: u64) -> Self {
        ModPoly { p, coeffs: vec![1 % p] }
    }

    fn x(p: u64) -> Self {
        ModPoly::new_unchecked(p, vec![0, 1])
    }

    /// Integer lift with coefficients in `[0, p)`.
    pub fn lift(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Lift with coefficients in `(-p/2, p/2]`.
    pub fn lift_symmetric(&self) -> IntPoly {
        let half = self.p / 2;
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|&c| if c > half { BigInt::from(c) - BigInt::from(self.p) } else { BigInt::from(c) })
                .collect(),
        )
    }

    pub fn monic(&self) -> ModPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = invmod(self.leading(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, k: u64) -> ModPoly {
        ModPoly::new_unchecked(self.p, self.coeffs.iter().map(|&c| mulmod(c, k, self.p)).collect())
    }

    pub fn add(&self, o: &ModPoly) -> ModPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| (self.get(i) + o.get(i)) % self.p).collect();
        ModPoly::new_unchecked(self.p, c)
    }

    pub fn sub(&self, o: &ModPoly) -> ModPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| (self.get(i) + self.p - o.get(i)) % self.p).collect();
        ModPoly::new_unchecked(self.p, c)
    }

    pub fn mul(&self, o: &ModPoly) -> ModPoly {
        if self.is_zero() || o.is_zero() {
            return ModPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u128; self.coeffs.len() + o.coeffs.len() - 1];
        let pp = p as u128;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % pp;
            }
        }
        ModPoly::new_unchecked(p, out.into_iter().map(|c| c as u64).collect())
    }

    fn get(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn divrem(&self, g: &ModPoly) -> (ModPoly, ModPoly) {
        let p = self.p;
        let dg = g.degree().expect("division by zero polynomial");
        if self.coeffs.len() <= dg {
            return (ModPoly::zero(p), self.clone());
        }
        let inv = invmod(g.leading(), p);
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; r.len() - dg];
        for k in (0..q.len()).rev() {
            let c = mulmod(r[k + dg], inv, p);
            if c == 0 {
                continue;
            }
            for (j, &gj) in g.coeffs.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mulmod(c, gj, p)) % p;
            }
            q[k] = c;
        }
        r.truncate(dg);
        (ModPoly::new_unchecked(p, q), ModPoly::new_unchecked(p, r))
    }

    pub fn rem(&self, g: &ModPoly) -> ModPoly {
        self.divrem(g).1
    }

    pub fn gcd(&self, o: &ModPoly) -> ModPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> ModPoly {
        let p = self.p;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % p, p))
            .collect();
        ModPoly::new_unchecked(p, c)
    }

    /// `self^e mod m` with a big exponent.
    pub fn pow_mod(&self, e: &BigUint, m: &ModPoly) -> ModPoly {
        let mut acc = ModPoly::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (mulmod(acc, x, self.p) + c) % self.p)
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let x = ModPoly::x(self.p);
        let p = BigUint::from(self.p);
        let frob = |k: usize| -> ModPoly { x.pow_mod(&num_traits::Pow::pow(&p, k), &f) };
        if frob(n).sub(&x).rem(&f).degree().is_some() {
            return false;
        }
        let mut m = n;
        let mut q = 2;
        let mut prime_divs = Vec::new();
        while q * q <= m {
            if m % q == 0 {
                prime_divs.push(q);
                while m % q == 0 {
                    m /= q;
                }
            }
            q += 1;
        }
        if m > 1 {
            prime_divs.push(m);
        }
        prime_divs.iter().all(|&q| f.gcd(&frob(n / q).sub(&x)).is_one())
    }

    /// The p-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> ModPoly {
        let p = self.p as usize;
        let c = self.coeffs.iter().step_by(p).copied().collect();
        ModPoly::new_unchecked(self.p, c)
    }

    fn cmp_canonical(&self, other: &ModPoly) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.p)
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lift())
    }
}

/// Complete factorization of a polynomial over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModFactorization {
    pub modulus: u64,
    pub unit: u64,
    /// Monic irreducible factors with multiplicities, sorted by degree and
    /// then by coefficient sequence.
    pub factors: Vec<(ModPoly, usize)>,
}

impl ModFactorization {
    pub fn expand(&self) -> ModPoly {
        let mut acc = ModPoly::new_unchecked(self.modulus, vec![self.unit]);
        for (g, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul(g);
            }
        }
        acc
    }

    pub fn multiplicity_of(&self, g: &ModPoly) -> usize {
        let g = g.monic();
        self.factors.iter().find(|(h, _)| *h == g).map_or(0, |(_, e)| *e)
    }

    /// True when every factor appears with multiplicity one.
    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }
}

/// Factor `f` over F_p. The randomized splitting is driven by `seed`, so the
/// output is reproducible; the factor list is sorted canonically either way.
pub fn factor_mod(f: &ModPoly, seed: u64) -> ModFactorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let p = f.p;
    let unit = f.leading();
    let monic = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors: Vec<(ModPoly, usize)> = Vec::new();
    for (sq, mult) in squarefree_decomposition(&monic) {
        for (part, d) in distinct_degree(&sq) {
            for g in equal_degree(&part, d, &mut rng) {
                factors.push((g, mult));
            }
        }
    }
    factors.sort_by(|a, b| a.0.cmp_canonical(&b.0).then(a.1.cmp(&b.1)));
    // merge duplicates (possible only through p-th power recursion)
    let mut merged: Vec<(ModPoly, usize)> = Vec::new();
    for (g, e) in factors {
        match merged.last_mut() {
            Some((h, m)) if *h == g => *m += e,
            _ => merged.push((g, e)),
        }
    }
    ModFactorization { modulus: p, unit, factors: merged }
}

fn squarefree_decomposition(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        for (g, e) in squarefree_decomposition(&f.pth_root()) {
            out.push((g, e * p as usize));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.divrem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.divrem(&y).0;
        if !fac.is_one() {
            out.push((fac.monic(), i));
        }
        w = y;
        c = c.divrem(&w).0;
        i += 1;
    }
    if !c.is_one() && c.degree().unwrap_or(0) > 0 {
        for (g, e) in squarefree_decomposition(&c.monic().pth_root()) {
            out.push((g, e * p as usize));
        }
    }
    out
}

fn distinct_degree(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = f.p;
    let x = ModPoly::x(p);
    let pb = BigUint::from(p);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(&pb, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.divrem(&g).0;
            h = h.rem(&rest);
            out.push((g, i));
        }
        i += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let d = rest.degree().unwrap();
        out.push((rest.monic(), d));
    }
    out
}

fn equal_degree(f: &ModPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return vec![f.monic()];
    }
    let p = f.p;
    let exp = if p == 2 {
        None
    } else {
        let q = num_traits::Pow::pow(&BigUint::from(p), d);
        Some((q - BigUint::one()) / BigUint::from(2u32))
    };
    loop {
        let a = ModPoly::new_unchecked(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = match &exp {
            Some(e) => a.pow_mod(e, f).sub(&ModPoly::one(p)),
            None => {
                // trace map F_{2^d} -> F_2
                let mut t = a.rem(f);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = t.mul(&t).rem(f);
                    acc = acc.add(&t);
                }
                acc
            }
        };
        let g = f.gcd(&b);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.divrem(&g).0.monic(), d, rng));
            return out;
        }
    }
}

/// Outcome of the mod-p irreducibility scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrreducibilityWitness {
    /// `f mod p` is irreducible of full degree.
    Certified(u64),
    Unknown,
}

/// Look for a prime `p <= prime_bound`, not dividing the discriminant, with
/// `f mod p` irreducible. This is only a sufficient test.
pub fn irreducibility_witness(f: &IntPoly, prime_bound: u64) -> IrreducibilityWitness {
    let Some(n) = f.degree() else { return IrreducibilityWitness::Unknown };
    if n == 0 || !f.is_monic() {
        return IrreducibilityWitness::Unknown;
    }
    let disc = f.discriminant().unwrap_or_default();
    for p in num_prime::nt_funcs::primes(prime_bound + 1) {
        if p > prime_bound {
            break;
        }
        if !disc.is_zero() && (&disc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = ModPoly::from_int_poly(f, p).expect("p prime");
        if fp.degree() == Some(n) && fp.is_irreducible() {
            return IrreducibilityWitness::Certified(p);
        }
    }
    IrreducibilityWitness::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(p: u64, c: &[u64]) -> ModPoly {
        ModPoly::new(p, c.to_vec()).unwrap()
    }

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    /// Exhaustive trial-division factorization for tiny p and degree.
    fn trial_factor(f: &ModPoly) -> Vec<(ModPoly, usize)> {
        let p = f.p;
        let mut rest = f.monic();
        let mut out = Vec::new();
        let mut d = 1;
        while rest.degree().unwrap_or(0) >= 1 {
            if 2 * d > rest.degree().unwrap() {
                out.push((rest.clone(), 1));
                break;
            }
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut c = Vec::with_capacity(d + 1);
                let mut t = idx;
                for _ in 0..d {
                    c.push(t % p);
                    t /= p;
                }
                c.push(1);
                let g = ModPoly::new_unchecked(p, c);
                let mut e = 0;
                loop {
                    let (q, r) = rest.divrem(&g);
                    if !r.is_zero() {
                        break;
                    }
                    rest = q;
                    e += 1;
                }
                if e > 0 {
                    out.push((g, e));
                }
            }
            d += 1;
        }
        // merge the trailing leftover if it equals an earlier factor
        out.sort_by(|a, b| a.0.cmp_canonical(&b.0));
        let mut merged: Vec<(ModPoly, usize)> = Vec::new();
        for (g, e) in out {
            match merged.last_mut() {
                Some((h, m)) if *h == g => *m += e,
                _ => merged.push((g, e)),
            }
        }
        merged
    }

    #[test]
    fn reduce_examples() {
        let f64_ = ip(&[1, -65, 126, -64, 1]);
        assert_eq!(f64_.reduce_mod(11).unwrap(), mp(11, &[1, 1, 5, 2, 1]));
        let expected = mp(11, &[9, 1]).mul(&mp(11, &[9, 1])).mul(&mp(11, &[3, 6, 1]));
        assert_eq!(f64_.reduce_mod(11).unwrap(), expected);
        assert!(ip(&[22, 11]).reduce_mod(11).unwrap().is_zero());
        assert_eq!(ip(&[1, 1]).reduce_mod(12), Err(PolyError::NotPrime(12)));
        let f6 = ip(&[-1, 7, -11, 11, -6, 1]);
        let expected = mp(5, &[2, 1]).mul(&mp(5, &[2, 1])).mul(&mp(5, &[1, 2, 0, 1]));
        assert_eq!(f6.reduce_mod(5).unwrap(), expected);
    }

    #[test]
    fn factor_examples() {
        let f64_ = ip(&[1, -65, 126, -64, 1]).reduce_mod(11).unwrap();
        let fac = factor_mod(&f64_, 0);
        assert_eq!(fac.factors, vec![(mp(11, &[9, 1]), 2), (mp(11, &[3, 6, 1]), 1)]);
        let fac = factor_mod(&mp(2, &[1, 0, 1]), 0);
        assert_eq!(fac.factors, vec![(mp(2, &[1, 1]), 2)]);
        let f20 = ip(&[-1, 20, -18, 402, -401, 18, -20, 1]).reduce_mod(11).unwrap();
        let fac = factor_mod(&f20, 0);
        assert_eq!(fac.factors, vec![(mp(11, &[6, 1]), 2), (mp(11, &[7, 8, 0, 3, 1, 1]), 1)]);
    }

    #[test]
    fn factor_matches_trial_division() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &p in &[2u64, 3, 5, 7, 11, 13] {
            for _ in 0..25 {
                let deg = rng.gen_range(1..=7);
                let mut c: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
                c.push(rng.gen_range(1..p));
                let f = mp(p, &c);
                let fac = factor_mod(&f, 3);
                assert_eq!(fac.expand(), f);
                assert_eq!(fac.factors, trial_factor(&f), "p={p} f={f:?}");
                for (g, _) in &fac.factors {
                    assert!(g.is_irreducible());
                }
            }
        }
    }

    #[test]
    fn factor_with_pth_powers() {
        // (x^2 + 1)^3 * (x + 1)^4 over F_3
        let a = mp(3, &[1, 0, 1]);
        let b = mp(3, &[1, 1]);
        let f = a.mul(&a).mul(&a).mul(&b).mul(&b).mul(&b).mul(&b);
        let fac = factor_mod(&f, 1);
        assert_eq!(fac.factors, vec![(b, 4), (a, 3)]);
    }

    #[test]
    fn rabin_test() {
        assert!(mp(2, &[1, 1, 1]).is_irreducible());
        assert!(!mp(2, &[1, 0, 1]).is_irreducible());
        assert!(mp(11, &[7, 8, 0, 3, 1, 1]).is_irreducible());
    }

    #[test]
    fn witness_examples() {
        match irreducibility_witness(&ip(&[1, -3, 1]), 50) {
            IrreducibilityWitness::Certified(p) => {
                let f = ip(&[1, -3, 1]).reduce_mod(p).unwrap();
                assert_eq!(factor_mod(&f, 0).factors.len(), 1);
            }
            IrreducibilityWitness::Unknown => panic!("expected a witness"),
        }
        assert_eq!(irreducibility_witness(&ip(&[-1, 0, 1]), 200), IrreducibilityWitness::Unknown);
        // f_{-8}: either outcome is acceptable; if certified the prime must check out
        if let IrreducibilityWitness::Certified(p) =
            irreducibility_witness(&ip(&[1, -9, 14, -8, 1]), 200)
        {
            assert!(ip(&[1, -9, 14, -8, 1]).reduce_mod(p).unwrap().is_irreducible());
        }
    }
}
