//! Cappell–Shaneson conditions, positivity, and the explicit families of
//! polynomials and matrix pairs in dimensions 4 through 7.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::correspondence::{star_equivalent, MatrixClassQuery, Route, Verdict};
use crate::linalg::{IntMatrix, LinalgError};
use crate::poly::{count_real_roots, factor_mod, IntPoly, Interval, ModPoly, PolyError};
use crate::ring::{corollary_basis, kummer_dedekind, Certificate, Invertibility, Order};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CsError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("degree {0} is too small, need at least 2")]
    DegreeTooSmall(usize),
    #[error("constant term is zero")]
    ZeroConstantTerm,
    #[error("no family in dimension {0}; known families are n = 4, 5, 6, 7")]
    UnknownFamily(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CsCondition {
    pub k: usize,
    /// `det(I - ∧^k A)`.
    #[serde(serialize_with = "crate::cli::ser_bigint")]
    pub value: BigInt,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CsReport {
    pub n: usize,
    #[serde(serialize_with = "crate::cli::ser_bigint")]
    pub det: BigInt,
    pub is_sl: bool,
    pub cs_conditions: Vec<CsCondition>,
    pub is_cs: bool,
    /// `None` when the characteristic polynomial has a zero constant term.
    pub is_positive: Option<bool>,
    #[serde(serialize_with = "crate::cli::ser_poly")]
    pub charpoly: IntPoly,
}

/// Companion matrix with superdiagonal ones and last row `-c_0, ..., -c_{n-1}`.
pub fn companion(f: &IntPoly) -> Result<IntMatrix, CsError> {
    if !f.is_monic() {
        return Err(CsError::NonMonic);
    }
    let n = f.degree().unwrap();
    if n == 0 {
        return Err(CsError::DegreeTooSmall(0));
    }
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n - 1 {
        m[(i, i + 1)] = BigInt::one();
    }
    for j in 0..n {
        m[(n - 1, j)] = -f.coeff(j);
    }
    Ok(m)
}

pub fn is_cs_matrix(a: &IntMatrix) -> Result<CsReport, CsError> {
    if !a.is_square() {
        return Err(CsError::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if n < 2 {
        return Err(CsError::DegreeTooSmall(n));
    }
    let det = a.det()?;
    let is_sl = det.is_one();
    let mut cs_conditions = Vec::new();
    for k in 1..=n / 2 {
        let ext = a.exterior_power(k)?;
        let id = IntMatrix::identity(ext.rows());
        let value = id.sub(&ext)?.det()?;
        let pass = value.abs().is_one();
        cs_conditions.push(CsCondition { k, value, pass });
    }
    let is_cs = is_sl && cs_conditions.iter().all(|c| c.pass);
    let charpoly = a.charpoly()?;
    let is_positive = match is_positive(&charpoly) {
        Ok(b) => Some(b),
        Err(CsError::ZeroConstantTerm) => None,
        Err(e) => return Err(e),
    };
    Ok(CsReport { n, det, is_sl, cs_conditions, is_cs, is_positive, charpoly })
}

/// Checks the companion matrix of `f`, which is a CS matrix exactly when `f`
/// is a CS polynomial.
pub fn is_cs_polynomial(f: &IntPoly) -> Result<CsReport, CsError> {
    if !f.is_monic() {
        return Err(CsError::NonMonic);
    }
    let n = f.degree().unwrap();
    if n < 2 {
        return Err(CsError::DegreeTooSmall(n));
    }
    is_cs_matrix(&companion(f)?)
}

/// `(-1)^n f(x) > 0` on `(-inf, 0)`.
///
/// For monic `f` the sign of `(-1)^n f(x)` is positive as `x -> -inf`, so the
/// condition holds exactly when `f` has no real root below zero. Repeated
/// roots are removed first because the root count needs a squarefree input.
pub fn is_positive(f: &IntPoly) -> Result<bool, CsError> {
    if !f.is_monic() {
        return Err(CsError::NonMonic);
    }
    if f.constant_term().is_zero() {
        return Err(CsError::ZeroConstantTerm);
    }
    let g = f.squarefree_part();
    Ok(count_real_roots(&g, &Interval::negative())? == 0)
}

/// Static data of one of the four families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub n: usize,
    /// Parameter range for `a` in which the polynomial is a positive CS
    /// polynomial: `a <= a_max` or `a >= a_min`.
    pub a_max: Option<i64>,
    pub a_min: Option<i64>,
    /// `l <= 0` when true, `l >= 0` otherwise.
    pub l_nonpositive: bool,
    pub p: u64,
    pub b: i64,
    /// `a(l) = a_slope * l + a_offset`.
    pub a_slope: i64,
    pub a_offset: i64,
}

impl FamilySpec {
    pub fn a_of_l(&self, l: &BigInt) -> BigInt {
        BigInt::from(self.a_slope) * l + self.a_offset
    }

    pub fn a_in_range(&self, a: &BigInt) -> bool {
        self.a_max.is_none_or(|m| *a <= BigInt::from(m)) && self.a_min.is_none_or(|m| *a >= BigInt::from(m))
    }

    pub fn l_in_range(&self, l: &BigInt) -> bool {
        if self.l_nonpositive {
            !l.is_positive()
        } else {
            !l.is_negative()
        }
    }
}

pub fn family_spec(n: usize) -> Result<FamilySpec, CsError> {
    let spec = match n {
        4 => FamilySpec { n, a_max: Some(0), a_min: None, l_nonpositive: true, p: 11, b: 2, a_slope: 121, a_offset: -64 },
        5 => FamilySpec { n, a_max: Some(0), a_min: None, l_nonpositive: true, p: 5, b: -2, a_slope: 25, a_offset: -6 },
        6 => FamilySpec { n, a_max: Some(-1), a_min: None, l_nonpositive: true, p: 7, b: -2, a_slope: 49, a_offset: -8 },
        7 => FamilySpec { n, a_max: None, a_min: Some(0), l_nonpositive: false, p: 11, b: -6, a_slope: 121, a_offset: 20 },
        _ => return Err(CsError::UnknownFamily(n)),
    };
    Ok(spec)
}

fn poly(coeffs: Vec<BigInt>) -> IntPoly {
    IntPoly::new(coeffs)
}

pub fn family_polynomial(n: usize, a: &BigInt) -> Result<IntPoly, CsError> {
    let one = BigInt::one;
    let a2 = a * a;
    let c = match n {
        4 => vec![one(), a - 1, -2 * a - 2, a.clone(), one()],
        5 => vec![-one(), 1 - a, 2 * a + 1, -2 * a - 1, a.clone(), one()],
        6 => vec![
            one(),
            2 * a + 1,
            &a2 - a - 1,
            -2 * &a2 - 2 * a - 2,
            &a2 - a - 2,
            2 * a + 1,
            one(),
        ],
        7 => vec![
            -one(),
            a.clone(),
            2 - a,
            &a2 + 2,
            -&a2 - 1,
            a - 2,
            -a,
            one(),
        ],
        _ => return Err(CsError::UnknownFamily(n)),
    };
    Ok(poly(c))
}

/// `c0 + c1*l + c2*l^2`.
fn quad(c: [i64; 3], l: &BigInt) -> BigInt {
    BigInt::from(c[0]) + BigInt::from(c[1]) * l + BigInt::from(c[2]) * l * l
}

fn shifted_rows(n: usize, first: [i64; 2], last: Vec<BigInt>) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    m[(0, 0)] = BigInt::from(first[0]);
    m[(0, 1)] = BigInt::from(first[1]);
    for i in 1..n - 1 {
        m[(i, i + 1)] = BigInt::one();
    }
    for (j, v) in last.into_iter().enumerate() {
        m[(n - 1, j)] = v;
    }
    m
}

fn companion_rows(n: usize, last: Vec<BigInt>) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n - 1 {
        m[(i, i + 1)] = BigInt::one();
    }
    for (j, v) in last.into_iter().enumerate() {
        m[(n - 1, j)] = v;
    }
    m
}

/// The two matrices of the family theorem, entered from their closed forms.
pub fn family_matrix_pair(n: usize, l: &BigInt) -> Result<(IntMatrix, IntMatrix), CsError> {
    let q = |c: [i64; 3]| quad(c, l);
    let pair = match n {
        4 => (
            companion_rows(4, vec![q([-1, 0, 0]), q([65, -121, 0]), q([-126, 242, 0]), q([64, -121, 0])]),
            shifted_rows(4, [2, 11], vec![q([11, -22, 0]), q([61, -121, 0]), q([-2, 0, 0]), q([62, -121, 0])]),
        ),
        5 => (
            companion_rows(
                5,
                vec![q([1, 0, 0]), q([-7, 25, 0]), q([11, -50, 0]), q([-11, 50, 0]), q([6, -25, 0])],
            ),
            shifted_rows(
                5,
                [-2, 5],
                vec![q([55, -210, 0]), q([-137, 525, 0]), q([65, -250, 0]), q([-27, 100, 0]), q([8, -25, 0])],
            ),
        ),
        6 => {
            let a = q([-8, 49, 0]);
            let a2 = &a * &a;
            let first = vec![
                -BigInt::one(),
                -2 * &a - 1,
                -&a2 + &a + 1,
                2 * &a2 + 2 * &a + 2,
                -&a2 + &a + 2,
                -2 * &a - 1,
            ];
            let second = vec![
                q([-413, 4536, -12348]),
                q([1445, -15876, 43218]),
                q([-715, 7889, -21609]),
                q([322, -3528, 9604]),
                q([-104, 1029, -2401]),
                -2 * &a + 1,
            ];
            (companion_rows(6, first), shifted_rows(6, [-2, 7], second))
        }
        7 => {
            let g = q([20, 121, 0]);
            let g2 = &g * &g;
            let first = vec![
                BigInt::one(),
                -&g,
                &g - 2,
                -&g2 - 2,
                &g2 + 1,
                -&g + 2,
                g.clone(),
            ];
            let second = vec![
                q([178211, 1264494, 2012472]),
                q([-326720, -2318239, -3689532]),
                q([54450, 386353, 614922]),
                q([-9072, -64372, -102487]),
                q([1445, 9922, 14641]),
                q([-174, -847, 0]),
                &g + 6,
            ];
            (companion_rows(7, first), shifted_rows(7, [-6, 11], second))
        }
        _ => return Err(CsError::UnknownFamily(n)),
    };
    Ok(pair)
}

/// The factorization of `f_a mod p` as stated with each theorem, monic
/// factors in ascending coefficient order.
fn quoted_factorization(n: usize) -> Vec<(Vec<u64>, usize)> {
    match n {
        4 => vec![(vec![9, 1], 2), (vec![3, 6, 1], 1)],
        5 => vec![(vec![2, 1], 2), (vec![1, 2, 0, 1], 1)],
        6 => vec![(vec![1, 1], 1), (vec![2, 1], 2), (vec![2, 1, 1, 1], 1)],
        7 => vec![(vec![6, 1], 2), (vec![7, 8, 0, 3, 1, 1], 1)],
        _ => unreachable!(),
    }
}

/// The quoted quotient (ascending in x, each coefficient quadratic in l) and
/// remainder of `f_{a(l)}` divided by `x - b`.
fn quoted_division(n: usize) -> (Vec<[i64; 3]>, [i64; 3]) {
    match n {
        4 => (vec![[-61, 121, 0], [2, 0, 0], [-62, 121, 0], [1, 0, 0]], [-121, 242, 0]),
        5 => (
            vec![[137, -525, 0], [-65, 250, 0], [27, -100, 0], [-8, 25, 0], [1, 0, 0]],
            [-275, 1050, 0],
        ),
        6 => (
            vec![
                [-1445, 15876, -43218],
                [715, -7889, 21609],
                [-322, 3528, -9604],
                [104, -1029, 2401],
                [-17, 98, 0],
                [1, 0, 0],
            ],
            [2891, -31752, 86436],
        ),
        7 => (
            vec![
                [326720, 2318239, 3689532],
                [-54450, -386353, -614922],
                [9072, 64372, 102487],
                [-1445, -9922, -14641],
                [174, 847, 0],
                [-26, -121, 0],
                [1, 0, 0],
            ],
            [-1960321, -13909434, -22137192],
        ),
        _ => unreachable!(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub n: usize,
    #[serde(serialize_with = "crate::cli::ser_bigint")]
    pub l: BigInt,
    #[serde(serialize_with = "crate::cli::ser_bigint")]
    pub a: BigInt,
    #[serde(serialize_with = "crate::cli::ser_poly")]
    pub polynomial: IntPoly,
    #[serde(serialize_with = "crate::cli::ser_matrix")]
    pub m1: IntMatrix,
    #[serde(serialize_with = "crate::cli::ser_matrix")]
    pub m2: IntMatrix,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

impl FamilyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn check(name: &'static str, pass: bool, detail: impl Into<String>) -> Check {
    Check { name, pass, detail: detail.into() }
}

/// Re-derives every claim of the family theorem at parameter `l`.
pub fn verify_family_theorem(n: usize, l: &BigInt) -> Result<FamilyReport, CsError> {
    let spec = family_spec(n)?;
    let a = spec.a_of_l(l);
    let f = family_polynomial(n, &a)?;
    let (m1, m2) = family_matrix_pair(n, l)?;
    let mut warnings = Vec::new();
    if !spec.l_in_range(l) {
        warnings.push(format!("l = {l} is outside the range covered by the theorem"));
    }
    let mut checks = Vec::new();

    // (i) annihilation
    let z1 = f.eval_matrix(&m1).is_zero();
    let z2 = f.eval_matrix(&m2).is_zero();
    let cp1 = m1.charpoly()? == f;
    let cp2 = m2.charpoly()? == f;
    checks.push(check(
        "annihilation",
        z1 && z2 && cp1 && cp2,
        format!("f(m1) = O: {z1}, f(m2) = O: {z2}, charpoly(m1) = f: {cp1}, charpoly(m2) = f: {cp2}"),
    ));

    // (ii) CS and positivity
    let r1 = is_cs_matrix(&m1)?;
    let r2 = is_cs_matrix(&m2)?;
    let pos = is_positive(&f)?;
    checks.push(check(
        "cappell_shaneson",
        r1.is_cs && r2.is_cs && pos,
        format!("m1 CS: {}, m2 CS: {}, positive: {pos}", r1.is_cs, r2.is_cs),
    ));

    // (iii) factorization mod p
    let p = spec.p;
    let fp = f.reduce_mod(p)?;
    let fac = factor_mod(&fp, 0);
    let quoted: Vec<(ModPoly, usize)> = quoted_factorization(n)
        .into_iter()
        .map(|(c, e)| (ModPoly::new(p, c).expect("p prime"), e))
        .collect();
    let b = BigInt::from(spec.b);
    let lin = IntPoly::linear(&b).reduce_mod(p)?;
    let mult = fac.multiplicity_of(&lin);
    checks.push(check(
        "factorization_mod_p",
        fac.factors == quoted && fac.unit == 1 && mult >= 2,
        format!(
            "f mod {p} = {}; multiplicity of x - ({b}) is {mult}",
            fac.factors.iter().map(|(g, e)| format!("({g})^{e}")).collect::<Vec<_>>().join(" ")
        ),
    ));

    // (iv) division identity
    let (q, r) = f.divrem(&IntPoly::linear(&b))?;
    let (qc, rc) = quoted_division(n);
    let q_quoted = IntPoly::new(qc.iter().map(|&c| quad(c, l)).collect());
    let r_quoted = IntPoly::constant(quad(rc, l));
    let identity_holds = &(&q_quoted * &IntPoly::linear(&b)) + &r_quoted == f;
    checks.push(check(
        "division_identity",
        q == q_quoted && r == r_quoted && identity_holds,
        format!("remainder {}", r.constant_term()),
    ));

    // (v) p^2 | r and the ideal (p, θ - b) is not invertible
    let order = Order::new(&f).map_err(|_| CsError::NonMonic)?;
    let p2 = BigInt::from(p * p);
    let divides = r.coeffs().iter().all(|c| (c % &p2).is_zero());
    let kd = kummer_dedekind(&order, p, &lin, mult);
    let kd_non_inv = matches!(&kd, Ok(k) if k.verdict == Invertibility::NotInvertible);
    let basis = corollary_basis(&order, p, &b);
    let general_non_inv = matches!(&basis, Ok(i) if !i.is_invertible());
    checks.push(check(
        "non_invertible_ideal",
        divides && kd_non_inv && general_non_inv,
        format!(
            "p^2 | r: {divides}; Kummer-Dedekind non-invertible: {kd_non_inv}; \
             I*(O:I) != O: {general_non_inv}"
        ),
    ));

    // (vi) not *-equivalent, certified by invertibility
    let verdict = star_equivalent(&MatrixClassQuery::new(m1.clone(), m2.clone(), 5, 3))
        .map(|v| (v.verdict, v.route, v.certificate));
    let certified = matches!(
        verdict,
        Ok((Verdict::NotEquivalent, Route::IdealInvariant, Some(Certificate::Invertibility)))
    );
    checks.push(check(
        "not_star_equivalent",
        certified,
        match &verdict {
            Ok((v, r, c)) => format!("{v:?} via {r:?} ({c:?})"),
            Err(e) => format!("error: {e}"),
        },
    ));

    Ok(FamilyReport { n, l: l.clone(), a, polynomial: f, m1, m2, checks, warnings })
}
