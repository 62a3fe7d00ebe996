//! Matrices with characteristic polynomial `f` versus ideal classes of
//! `Z[θ]`, and *-equivalence of Cappell–Shaneson matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cs::{is_cs_matrix, is_cs_polynomial, CsError, CsReport};
use crate::linalg::{kernel_lattice, lll_reduce, IntMatrix, LinalgError};
use crate::poly::IntPoly;
use crate::ring::{
    class_monoid, equivalence_test, Certificate, ClassList, ClassOptions, EquivVerdict, IdealLattice, Order,
    RingError, SearchLimits,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrespondenceError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrices have sizes {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("f(A) != 0 for the order's defining polynomial")]
    CharpolyMismatch,
    #[error("matrix is not in GL(n, Z)")]
    NonInvertibleB,
    #[error("polynomial does not satisfy the Cappell-Shaneson conditions")]
    NotCsPolynomial,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Cs(#[from] CsError),
}

/// Element of `Q(θ)` as `num / den` with `den > 0` and no common factor.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Frac {
    num: Vec<BigInt>,
    den: BigInt,
}

impl Frac {
    fn new(num: Vec<BigInt>, den: BigInt) -> Frac {
        let g = num.iter().fold(den.clone(), |g, c| g.gcd(c));
        let g = if den.is_negative() { -g } else { g };
        Frac { num: num.iter().map(|c| c / &g).collect(), den: den / g }
    }

    fn int(v: Vec<BigInt>) -> Frac {
        Frac { num: v, den: BigInt::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    fn mul(&self, o: &Order, other: &Frac) -> Frac {
        Frac::new(o.mul_coords(&self.num, &other.num), &self.den * &other.den)
    }

    fn sub(&self, other: &Frac) -> Frac {
        let num = self.num.iter().zip(&other.num).map(|(a, b)| a * &other.den - b * &self.den).collect();
        Frac::new(num, &self.den * &other.den)
    }

    fn inv(&self, o: &Order) -> Frac {
        // first row of M^{-1} gives z with z * num = 1
        let m = o.mult_matrix(&self.num).to_rational().inverse().expect("nonzero element");
        let row: Vec<_> = (0..o.degree()).map(|j| &m[(0, j)] * &self.den).collect();
        let den = row.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        Frac::new(row.iter().map(|q| (q * &den).to_integer()).collect(), den)
    }
}

fn check_square(a: &IntMatrix) -> Result<usize, CorrespondenceError> {
    if !a.is_square() {
        return Err(CorrespondenceError::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    Ok(a.rows())
}

/// Ideal spanned by the entries of an eigenvector `v` of `a` with
/// eigenvalue `λ`, after clearing denominators and content.
fn eigen_ideal(o: &Order, a: &IntMatrix, lambda: &Frac) -> Result<IdealLattice, CorrespondenceError> {
    let n = o.degree();
    let konst = |x: &BigInt| {
        let mut v = vec![BigInt::zero(); n];
        v[0] = x.clone();
        Frac::int(v)
    };
    let mut m: Vec<Vec<Frac>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { konst(&a[(i, j)]).sub(lambda) } else { konst(&a[(i, j)]) }).collect())
        .collect();
    // reduced row echelon form; pivot is the lowest-index row with a nonzero entry
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv(o);
        for j in 0..n {
            m[r][j] = m[r][j].mul(o, &inv);
        }
        for i in 0..n {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..n {
                    let t = f.mul(o, &m[r][j]);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..n).find(|c| !pivots.contains(c)).ok_or(CorrespondenceError::CharpolyMismatch)?;
    let mut v: Vec<Frac> = vec![konst(&BigInt::zero()); n];
    v[free] = konst(&BigInt::one());
    for (i, &pc) in pivots.iter().enumerate() {
        v[pc] = konst(&BigInt::zero()).sub(&m[i][free]);
    }
    let den = v.iter().fold(BigInt::one(), |l, x| l.lcm(&x.den));
    let mut rows: Vec<Vec<BigInt>> =
        v.iter().map(|x| x.num.iter().map(|c| c * (&den / &x.den)).collect()).collect();
    let content = rows.iter().flatten().fold(BigInt::zero(), |g, c| g.gcd(c));
    for row in rows.iter_mut() {
        for c in row.iter_mut() {
            *c = &*c / &content;
        }
    }
    Ok(IdealLattice::from_basis(o, &IntMatrix::from_rows(rows)?)?)
}

/// The ideal class attached to `a` with `f(a) = 0`: the lattice spanned by
/// the entries of an eigenvector for θ.
pub fn matrix_to_ideal(o: &Order, a: &IntMatrix) -> Result<IdealLattice, CorrespondenceError> {
    let n = check_square(a)?;
    if n != o.degree() {
        return Err(CorrespondenceError::DimensionMismatch(n, o.degree()));
    }
    if !o.f().eval_matrix(a).is_zero() {
        return Err(CorrespondenceError::CharpolyMismatch);
    }
    eigen_ideal(o, a, &Frac::int(o.theta().coords().to_vec()))
}

/// The same class computed from `b` with `f*(b) = 0`, using the eigenvalue
/// `θ^{-1}` of `b`.
pub fn matrix_to_ideal_reciprocal(o: &Order, b: &IntMatrix) -> Result<IdealLattice, CorrespondenceError> {
    let n = check_square(b)?;
    if n != o.degree() {
        return Err(CorrespondenceError::DimensionMismatch(n, o.degree()));
    }
    let fstar = o.f().signed_reciprocal().map_err(|_| CorrespondenceError::CharpolyMismatch)?;
    if !fstar.eval_matrix(b).is_zero() {
        return Err(CorrespondenceError::CharpolyMismatch);
    }
    let inv = o.theta_inverse().ok_or(CorrespondenceError::CharpolyMismatch)?;
    eigen_ideal(o, b, &Frac::int(inv.coords().to_vec()))
}

/// `A` with `θ v_i = Σ_j A_ij v_j` for the HNF basis `v` of `s`.
pub fn ideal_to_matrix(s: &IdealLattice) -> IntMatrix {
    s.theta_action()
}

/// Search for unimodular `X` with `X a = b X` among small combinations of
/// a reduced basis of the solution lattice. `None` proves nothing.
pub fn conjugacy_oracle(a: &IntMatrix, b: &IntMatrix, coeff_box: u32) -> Option<IntMatrix> {
    let n = a.rows();
    if !a.is_square() || !b.is_square() || b.rows() != n {
        return None;
    }
    let nn = n * n;
    let mut m = IntMatrix::zeros(nn, nn);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                m[(i * n + j, i * n + k)] += &a[(k, j)];
                m[(i * n + j, k * n + j)] -= &b[(i, k)];
            }
        }
    }
    let basis = kernel_lattice(&m).basis?;
    let basis = lll_reduce(&basis).unwrap_or(basis);
    let k = basis.rows();
    let to_matrix = |x: &[i64]| {
        let mut v = vec![BigInt::zero(); nn];
        for (row, &c) in x.iter().enumerate() {
            if c != 0 {
                for (vi, bi) in v.iter_mut().zip(basis.row(row)) {
                    *vi += bi * c;
                }
            }
        }
        IntMatrix::new(n, n, v).expect("n x n")
    };
    let r = coeff_box as i64;
    for shell in 1..=r {
        let width = (2 * shell + 1) as u64;
        for idx in 0..width.pow(k as u32) {
            let mut t = idx;
            let x: Vec<i64> = (0..k)
                .map(|_| {
                    let c = (t % width) as i64 - shell;
                    t /= width;
                    c
                })
                .collect();
            if x.iter().map(|c| c.abs()).max() != Some(shell) {
                continue;
            }
            let cand = to_matrix(&x);
            if cand.det().is_ok_and(|d| d.abs().is_one()) {
                return Some(cand);
            }
        }
    }
    None
}

#[derive(Debug, Clone)]
pub struct MatrixClassQuery {
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub f_a: Option<IntPoly>,
    pub f_b: Option<IntPoly>,
    /// Box radius for the ideal witness search.
    pub radius: u32,
    /// Coefficient box for the conjugacy oracle.
    pub coeff_box: u32,
}

impl MatrixClassQuery {
    pub fn new(a: IntMatrix, b: IntMatrix, radius: u32, coeff_box: u32) -> MatrixClassQuery {
        let f_a = a.charpoly().ok();
        let f_b = b.charpoly().ok();
        MatrixClassQuery { a, b, f_a, f_b, radius, coeff_box }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    CharpolyMismatch,
    IdealInvariant,
    IdealWitness,
    ConjugacyWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `X` with `X a = b' X`, where `b'` is `b` or `b^{-1}`.
    Conjugator { x: IntMatrix, inverted: bool },
    /// `μ = num / den` with `μ I_a = I_b'`.
    FieldElement { num: Vec<BigInt>, den: BigInt, inverted: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarVerdict {
    pub verdict: Verdict,
    pub route: Route,
    /// The separating invariant for ideal-side inequivalence.
    pub certificate: Option<Certificate>,
    pub witness: Option<Witness>,
}

/// Whether `a` is conjugate in GL(n, Z) to `b` or to `b^{-1}`.
pub fn star_equivalent(q: &MatrixClassQuery) -> Result<StarVerdict, CorrespondenceError> {
    let n = check_square(&q.a)?;
    let nb = check_square(&q.b)?;
    if n != nb {
        return Err(CorrespondenceError::DimensionMismatch(n, nb));
    }
    let (Some(fa), Some(fb)) = (&q.f_a, &q.f_b) else {
        return Err(CorrespondenceError::NonSquare { rows: q.a.rows(), cols: q.a.cols() });
    };
    let mismatch = StarVerdict { verdict: Verdict::NotEquivalent, route: Route::CharpolyMismatch, certificate: None, witness: None };
    let fa_star = fa.signed_reciprocal().ok();
    let mut candidates: Vec<(IntMatrix, bool)> = Vec::new();
    if fb == fa {
        candidates.push((q.b.clone(), false));
    }
    if fa_star.as_ref() == Some(fb) {
        let inv = q.b.inverse_unimodular().map_err(|_| CorrespondenceError::NonInvertibleB)?;
        candidates.push((inv, true));
    }
    if candidates.is_empty() {
        return Ok(mismatch);
    }
    let o = Order::new(fa)?;
    let ia = matrix_to_ideal(&o, &q.a)?;
    let limits = SearchLimits { radius: q.radius, ..SearchLimits::default() };
    let mut certificates = Vec::new();
    let mut undecided = Vec::new();
    for (b, inverted) in &candidates {
        let ib = matrix_to_ideal(&o, b)?;
        match equivalence_test(&ia, &ib, &limits)? {
            EquivVerdict::Equivalent { num, den } => {
                return Ok(StarVerdict {
                    verdict: Verdict::Equivalent,
                    route: Route::IdealWitness,
                    certificate: None,
                    witness: Some(Witness::FieldElement { num, den, inverted: *inverted }),
                });
            }
            EquivVerdict::NotEquivalent(c) => certificates.push(c),
            EquivVerdict::Unknown => undecided.push((b, *inverted)),
        }
    }
    for (b, inverted) in undecided.iter().copied() {
        if let Some(x) = conjugacy_oracle(&q.a, b, q.coeff_box) {
            return Ok(StarVerdict {
                verdict: Verdict::Equivalent,
                route: Route::ConjugacyWitness,
                certificate: None,
                witness: Some(Witness::Conjugator { x, inverted }),
            });
        }
    }
    if undecided.is_empty() {
        // the weakest certificate among the candidates
        let certificate = certificates.iter().copied().max_by_key(|c| match c {
            Certificate::Invertibility => 0,
            Certificate::MultiplierRing => 1,
            Certificate::ExhaustiveSearch => 2,
        });
        return Ok(StarVerdict { verdict: Verdict::NotEquivalent, route: Route::IdealInvariant, certificate, witness: None });
    }
    Ok(StarVerdict { verdict: Verdict::Unknown, route: Route::IdealWitness, certificate: None, witness: None })
}

#[derive(Debug, Clone, Serialize)]
pub struct KnotPairClass {
    #[serde(serialize_with = "crate::cli::ser_matrix")]
    pub matrix: IntMatrix,
    #[serde(serialize_with = "crate::cli::ser_matrix")]
    pub ideal_hnf: IntMatrix,
    #[serde(serialize_with = "crate::cli::ser_bigint")]
    pub norm: BigInt,
    pub invertible: bool,
    pub members: usize,
    pub cs: CsReport,
}

#[derive(Debug, Clone)]
pub struct KnotPairReport {
    pub classes: ClassList,
    pub pairs: Vec<KnotPairClass>,
}

/// One Cappell-Shaneson matrix per ideal class of `Z[θ]`.
pub fn classify_knot_pairs(f: &IntPoly, opts: &ClassOptions) -> Result<KnotPairReport, CorrespondenceError> {
    if !is_cs_polynomial(f)?.is_cs {
        return Err(CorrespondenceError::NotCsPolynomial);
    }
    let o = Order::new(f)?;
    let classes = class_monoid(&o, opts)?;
    let mut pairs = Vec::with_capacity(classes.count());
    for (k, rep) in classes.reps.iter().enumerate() {
        let matrix = ideal_to_matrix(rep);
        let cs = is_cs_matrix(&matrix)?;
        pairs.push(KnotPairClass {
            ideal_hnf: rep.hnf().clone(),
            norm: rep.norm(),
            invertible: classes.invertible[k],
            members: classes.members[k],
            cs,
            matrix,
        });
    }
    Ok(KnotPairReport { classes, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cs::companion;

    fn f8() -> IntPoly {
        IntPoly::from_i64(&[1, -9, 14, -8, 1])
    }

    fn a41() -> IntMatrix {
        IntMatrix::from_i64(&[&[2, 3, 0, 0], &[2, 4, 1, 0], &[0, 1, 1, 1], &[1, 2, 0, 1]])
    }

    fn ideal_3(o: &Order) -> IdealLattice {
        IdealLattice::from_generators(o, &[o.element_i64(&[3, 0, 0, 0]).unwrap(), o.element_i64(&[0, 7, -7, 1]).unwrap()])
            .unwrap()
    }

    fn equivalent(i: &IdealLattice, j: &IdealLattice) -> bool {
        matches!(equivalence_test(i, j, &SearchLimits::default()).unwrap(), EquivVerdict::Equivalent { .. })
    }

    #[test]
    fn companion_maps_to_unit_class() {
        let o = Order::new(&f8()).unwrap();
        let i = matrix_to_ideal(&o, &companion(&f8()).unwrap()).unwrap();
        assert!(equivalent(&i, &IdealLattice::unit(&o)));
        assert_eq!(ideal_to_matrix(&IdealLattice::unit(&o)), companion(&f8()).unwrap());
    }

    #[test]
    fn second_matrix_maps_to_ideal_3() {
        let o = Order::new(&f8()).unwrap();
        let i = matrix_to_ideal(&o, &a41()).unwrap();
        assert!(equivalent(&i, &ideal_3(&o)));
        assert!(!equivalent(&i, &IdealLattice::unit(&o)));
    }

    #[test]
    fn ideal_to_matrix_is_conjugate() {
        let o = Order::new(&f8()).unwrap();
        let m = ideal_to_matrix(&ideal_3(&o));
        assert!(o.f().eval_matrix(&m).is_zero());
        let x = conjugacy_oracle(&m, &a41(), 3).expect("conjugate");
        assert_eq!(x.mul(&m).unwrap(), a41().mul(&x).unwrap());
    }

    #[test]
    fn reciprocal_route_agrees() {
        let o = Order::new(&f8()).unwrap();
        let b = a41().inverse_unimodular().unwrap();
        let i = matrix_to_ideal_reciprocal(&o, &b).unwrap();
        assert!(equivalent(&i, &matrix_to_ideal(&o, &a41()).unwrap()));
    }

    #[test]
    fn star_equivalence_examples() {
        let a = a41();
        let v = star_equivalent(&MatrixClassQuery::new(a.clone(), a.clone(), 2, 3)).unwrap();
        assert_eq!(v.verdict, Verdict::Equivalent);
        let v = star_equivalent(&MatrixClassQuery::new(a.clone(), a.inverse_unimodular().unwrap(), 2, 3)).unwrap();
        assert_eq!(v.verdict, Verdict::Equivalent);
        let c = companion(&f8()).unwrap();
        let v = star_equivalent(&MatrixClassQuery::new(c.clone(), a, 2, 3)).unwrap();
        assert_eq!((v.verdict, v.route), (Verdict::NotEquivalent, Route::IdealInvariant));
        assert_eq!(v.certificate, Some(Certificate::ExhaustiveSearch));
        let v = star_equivalent(&MatrixClassQuery::new(c, IntMatrix::identity(4), 2, 3)).unwrap();
        assert_eq!(v.route, Route::CharpolyMismatch);
    }

    #[test]
    fn oracle_recovers_elementary_conjugate() {
        let c = companion(&f8()).unwrap();
        let mut u = IntMatrix::identity(4);
        u[(0, 2)] = BigInt::from(1);
        u[(3, 1)] = BigInt::from(-1);
        let uinv = u.inverse_unimodular().unwrap();
        let b = u.mul(&c).unwrap().mul(&uinv).unwrap();
        let x = conjugacy_oracle(&c, &b, 5).expect("found");
        assert_eq!(x.mul(&c).unwrap(), b.mul(&x).unwrap());
    }
}
