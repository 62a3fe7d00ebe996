//! Enumeration of all ideals of bounded norm, and the Minkowski bound.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::kd::{is_integrally_closed, Closedness};
use super::{IdealLattice, Order, RingError};
use crate::linalg::{hnf_modular, IntMatrix};
use crate::poly::{count_real_roots, factor_mod, Interval};

/// Largest norm bound accepted by [`ideals_up_to_norm`].
pub const DEFAULT_NORM_CAP: u64 = 200_000;

/// Number of candidate functionals tried per quotient before giving up.
const FUNCTIONAL_CAP: u64 = 1 << 20;

pub fn ideals_up_to_norm(o: &Order, bound: u64) -> Result<Vec<IdealLattice>, RingError> {
    ideals_up_to_norm_capped(o, bound, DEFAULT_NORM_CAP)
}

/// All ideals of norm at most `bound`, sorted by norm and then by HNF
/// entries.
///
/// Each ideal is the product of its p-primary components. The p-primary
/// ideals are reached from `Z[θ]` by chains with simple quotients
/// `J / I ≅ O / m`, so they are found by descending through the maximal
/// sub-modules of `J` that contain `m J`, for each maximal ideal `m` above p.
pub fn ideals_up_to_norm_capped(o: &Order, bound: u64, cap: u64) -> Result<Vec<IdealLattice>, RingError> {
    if bound > cap {
        return Err(RingError::BoundTooLargeForBudget { bound, cap });
    }
    let mut all: Vec<(IdealLattice, u64)> = vec![(IdealLattice::unit(o), 1)];
    if bound >= 2 {
        for p in num_prime::nt_funcs::primes(bound) {
            if p > bound {
                break;
            }
            let primary = primary_ideals(o, p, bound)?;
            if primary.is_empty() {
                continue;
            }
            let mut next = Vec::with_capacity(all.len());
            for (i, ni) in &all {
                for (q, nq) in &primary {
                    if ni * nq <= bound {
                        next.push((i.product(q)?, ni * nq));
                    }
                }
            }
            all.extend(next);
        }
    }
    let mut out: Vec<IdealLattice> = all.into_iter().map(|(i, _)| i).collect();
    out.sort_by(|a, b| a.cmp_canonical(b));
    Ok(out)
}

/// Proper p-primary ideals of norm at most `bound`, with their norms.
fn primary_ideals(o: &Order, p: u64, bound: u64) -> Result<Vec<(IdealLattice, u64)>, RingError> {
    let fac = factor_mod(&o.f().reduce_mod(p)?, 0);
    let mut maximal = Vec::new();
    for (g, _) in &fac.factors {
        let d = g.degree().unwrap() as u32;
        let Some(norm) = p.checked_pow(d) else { continue };
        if norm > bound {
            continue;
        }
        let mut pc = vec![BigInt::zero(); o.degree()];
        pc[0] = BigInt::from(p);
        let gens = [pc, o.element_from_poly(&g.lift()).coords().to_vec()];
        let m = IdealLattice::from_generator_coords(o, &gens)?;
        maximal.push((m, d as usize, norm));
    }
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    let mut out = Vec::new();
    let mut frontier = vec![(IdealLattice::unit(o), 1u64)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (j, nj) in &frontier {
            for (m, d, nm) in &maximal {
                let Some(ni) = nj.checked_mul(*nm) else { continue };
                if ni > bound {
                    continue;
                }
                for i in maximal_submodules(j, m, p, *d)? {
                    debug_assert_eq!(i.norm(), BigInt::from(ni));
                    if seen.insert(i.hnf().clone()) {
                        next.push((i, ni));
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

/// Sub-modules `I` with `m J ⊆ I ⊂ J` and `J / I ≅ O / m`, where `O / m`
/// has degree `d` over `F_p`.
fn maximal_submodules(j: &IdealLattice, m: &IdealLattice, p: u64, d: usize) -> Result<Vec<IdealLattice>, RingError> {
    let o = j.order();
    let n = o.degree();
    let mj = m.product(j)?;
    let ratio = (mj.norm() / j.norm()).to_u64().expect("p-power");
    let mut k = 0usize;
    let mut r = ratio;
    while r > 1 {
        r /= p;
        k += 1;
    }
    if k == d {
        return Ok(vec![mj]);
    }
    // work in J / pJ with coordinates relative to the HNF basis of J
    let w: Vec<Vec<u64>> = (0..n)
        .map(|i| reduce_vec(&j.coords_in(mj.hnf().row(i)).expect("mJ ⊆ J"), p))
        .collect();
    let t: Vec<Vec<u64>> = {
        let a = j.theta_action();
        (0..n).map(|i| reduce_vec(a.row(i), p)).collect()
    };
    // functionals vanishing on mJ / pJ
    let ann = nullspace_mod_p(&w, n, p);
    debug_assert_eq!(ann.len(), k);
    let count = p.checked_pow(k as u32).map(|c| (c - 1) / (p - 1));
    match count {
        Some(c) if c <= FUNCTIONAL_CAP => {}
        _ => return Err(RingError::BoundTooLargeForBudget { bound: p, cap: FUNCTIONAL_CAP }),
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let pb = BigInt::from(p);
    let modulus = j.norm() * &pb;
    for combo in projective_points(k, p) {
        let mut psi = vec![0u64; n];
        for (c, v) in combo.iter().zip(&ann) {
            for (x, y) in psi.iter_mut().zip(v) {
                *x = (*x + c * y) % p;
            }
        }
        // columns ψ, Tψ, ..., T^{d-1}ψ
        let mut cols = vec![psi];
        for _ in 1..d {
            let prev = cols.last().unwrap();
            cols.push(mat_vec_mod(&t, prev, p));
        }
        let rows_as_constraints: Vec<Vec<u64>> =
            (0..n).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        // u with u * cols = 0: the kernel of the transposed system
        let u_basis = left_kernel_mod_p(&rows_as_constraints, n, cols.len(), p);
        let mut gens: Vec<Vec<BigInt>> = u_basis
            .iter()
            .map(|u| j.hnf().left_mul_vec(&u.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()))
            .collect();
        for i in 0..n {
            gens.push(j.hnf().row(i).iter().map(|x| x * &pb).collect());
        }
        let hnf = hnf_modular(&gens, n, &modulus);
        if seen.insert(hnf.clone()) {
            out.push(IdealLattice::from_hnf_unchecked(o, hnf));
        }
    }
    Ok(out)
}

fn reduce_vec(v: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    v.iter()
        .map(|x| {
            let r = x % &pb;
            let r = if r.is_negative() { r + &pb } else { r };
            r.to_u64().unwrap()
        })
        .collect()
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut acc, mut base, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

fn mat_vec_mod(t: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    t.iter()
        .map(|row| row.iter().zip(v).fold(0u64, |acc, (a, b)| (acc + mulmod(*a, *b, p)) % p))
        .collect()
}

/// Basis of `{x : rows * x = 0}` over F_p, for `rows` of width `n`.
fn nullspace_mod_p(rows: &[Vec<u64>], n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for k in 0..n {
                    a[i][k] = (a[i][k] + p - mulmod(f, a[r][k], p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![0u64; n];
            x[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                x[pc] = (p - a[i][fc]) % p;
            }
            x
        })
        .collect()
}

/// Basis of `{u : u * m = 0}` for an `rows x cols` matrix `m`.
fn left_kernel_mod_p(m: &[Vec<u64>], rows: usize, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mt: Vec<Vec<u64>> = (0..cols).map(|c| (0..rows).map(|r| m[r][c]).collect()).collect();
    nullspace_mod_p(&mt, rows, p)
}

/// Representatives of the nonzero vectors of F_p^k up to scaling: the
/// first nonzero coordinate is 1.
fn projective_points(k: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..k {
        let free = k - lead - 1;
        let total = p.pow(free as u32);
        for idx in 0..total {
            let mut v = vec![0u64; k];
            v[lead] = 1;
            let mut t = idx;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = t % p;
                t /= p;
            }
            out.push(v);
        }
    }
    out
}

/// Every θ-stable sublattice of index at most `bound`, by scanning all
/// upper-triangular HNF matrices. Exponential; a test oracle only.
pub fn brute_force_ideals(o: &Order, bound: u64) -> Vec<IdealLattice> {
    let n = o.degree();
    let mut out = Vec::new();
    let mut diag = vec![1u64; n];
    fn diagonals(i: usize, n: usize, rem: u64, diag: &mut Vec<u64>, acc: &mut Vec<Vec<u64>>) {
        if i == n {
            acc.push(diag.clone());
            return;
        }
        for d in 1..=rem {
            diag[i] = d;
            diagonals(i + 1, n, rem / d, diag, acc);
        }
    }
    let mut diags = Vec::new();
    diagonals(0, n, bound, &mut diag, &mut diags);
    for d in diags {
        // off-diagonal entries above each pivot range over [0, pivot)
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let total: u64 = slots.iter().map(|&(_, j)| d[j]).product();
        for idx in 0..total {
            let mut m = IntMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = BigInt::from(d[i]);
            }
            let mut t = idx;
            for &(i, j) in &slots {
                m[(i, j)] = BigInt::from(t % d[j]);
                t /= d[j];
            }
            let cand = IdealLattice::from_hnf_unchecked(o, m);
            if cand.is_theta_stable() {
                out.push(cand);
            }
        }
    }
    out.sort_by(|a, b| a.cmp_canonical(b));
    out
}

/// Upper bound for `(n!/n^n) (4/π)^{r2} sqrt|d|`, as an exact rational.
pub fn minkowski_bound_unchecked(o: &Order) -> Result<BigRational, RingError> {
    let n = o.degree();
    let r1 = count_real_roots(o.f(), &Interval::real_line())?;
    let r2 = (n - r1) / 2;
    let mut fact = BigInt::one();
    for k in 2..=n {
        fact *= k;
    }
    let nn = num_traits::pow(BigInt::from(n), n);
    // 4/π < 1.273239545
    let four_over_pi = BigRational::new(BigInt::from(1_273_239_545u64), BigInt::from(1_000_000_000u64));
    let scale = BigInt::from(10u64).pow(6);
    let target = o.disc().abs() * &scale * &scale;
    let mut root = target.sqrt();
    if &root * &root < target {
        root += 1;
    }
    let sqrt_up = BigRational::new(root, scale);
    let mut b = BigRational::new(fact, nn) * sqrt_up;
    for _ in 0..r2 {
        b *= &four_over_pi;
    }
    Ok(b)
}

/// The Minkowski bound, only for orders certified to be maximal.
pub fn minkowski_bound(o: &Order, factor_budget: usize) -> Result<BigRational, RingError> {
    let report = is_integrally_closed(o, factor_budget);
    if report.verdict != Closedness::Yes {
        return Err(RingError::Inapplicable(format!("order is not certified maximal ({:?})", report.verdict)));
    }
    minkowski_bound_unchecked(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn unit_only_at_bound_one() {
        let o = Order::new(&ip(&[1, -9, 14, -8, 1])).unwrap();
        let v = ideals_up_to_norm(&o, 1).unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].is_unit());
    }

    #[test]
    fn quadratic_matches_brute_force() {
        let o = Order::new(&ip(&[1, -3, 1])).unwrap();
        assert_eq!(ideals_up_to_norm(&o, 10).unwrap(), brute_force_ideals(&o, 10));
        let o = Order::new(&ip(&[5, 0, 1])).unwrap();
        assert_eq!(ideals_up_to_norm(&o, 30).unwrap(), brute_force_ideals(&o, 30));
    }

    #[test]
    fn quartic_matches_brute_force() {
        for f in [ip(&[1, -9, 14, -8, 1]), ip(&[1, -65, 126, -64, 1])] {
            let o = Order::new(&f).unwrap();
            assert_eq!(ideals_up_to_norm(&o, 12).unwrap(), brute_force_ideals(&o, 12));
        }
    }

    #[test]
    fn non_maximal_order_matches_brute_force() {
        // Z[2i] has non-invertible ideals above 2
        let o = Order::new(&ip(&[4, 0, 1])).unwrap();
        assert_eq!(ideals_up_to_norm(&o, 64).unwrap(), brute_force_ideals(&o, 64));
        let o = Order::new(&ip(&[-12, 0, 0, 1])).unwrap();
        assert_eq!(ideals_up_to_norm(&o, 40).unwrap(), brute_force_ideals(&o, 40));
    }

    #[test]
    fn contains_non_invertible_ideal() {
        let o = Order::new(&ip(&[1, -65, 126, -64, 1])).unwrap();
        let i = crate::ring::corollary_basis(&o, 11, &BigInt::from(2)).unwrap();
        assert!(ideals_up_to_norm(&o, 11).unwrap().contains(&i));
    }

    #[test]
    fn cap_is_enforced() {
        let o = Order::new(&ip(&[1, -3, 1])).unwrap();
        assert!(matches!(ideals_up_to_norm_capped(&o, 100, 50), Err(RingError::BoundTooLargeForBudget { .. })));
    }

    #[test]
    fn minkowski_examples() {
        let o = Order::new(&ip(&[1, -3, 1])).unwrap();
        let b = minkowski_bound(&o, 4).unwrap();
        let sqrt5_half = BigRational::new(BigInt::from(1118), BigInt::from(1000));
        assert!(b >= sqrt5_half && b < BigRational::from_integer(BigInt::from(2)));
        let o = Order::new(&ip(&[1, 0, 1])).unwrap();
        let b = minkowski_bound(&o, 4).unwrap();
        assert!(b >= BigRational::new(BigInt::from(127), BigInt::from(100)));
        assert!(b < BigRational::from_integer(BigInt::from(2)));
        let o = Order::new(&ip(&[1, -9, 14, -8, 1])).unwrap();
        let b = minkowski_bound(&o, 4).unwrap();
        // (24/256)(4/π) sqrt(17051) ≈ 15.59
        assert_eq!(b.floor().to_integer(), BigInt::from(15));
        let o = Order::new(&ip(&[1, -65, 126, -64, 1])).unwrap();
        assert!(matches!(minkowski_bound(&o, 4), Err(RingError::Inapplicable(_))));
    }
}
