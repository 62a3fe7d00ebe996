//! Real-root counting with Sturm sequences over exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Signed, Zero};

use super::{IntPoly, PolyError};

/// One end of a real interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Unbounded,
    Open(BigRational),
    Closed(BigRational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Self {
        Interval { lo, hi }
    }

    pub fn real_line() -> Self {
        Interval::new(Bound::Unbounded, Bound::Unbounded)
    }

    /// The open half-line `(-inf, 0)`.
    pub fn negative() -> Self {
        Interval::new(Bound::Unbounded, Bound::Open(BigRational::zero()))
    }
}

/// Sign of `f(x)` at a rational point.
fn sign_at(f: &IntPoly, x: &BigRational) -> i32 {
    let Some(d) = f.degree() else { return 0 };
    let (num, den) = (x.numer(), x.denom());
    // den > 0, so den^d * f(num/den) has the sign of f(x)
    let mut acc = BigInt::zero();
    let mut den_pow = BigInt::from(1);
    for i in (0..=d).rev() {
        acc = acc * num + f.coeff(i) * &den_pow;
        den_pow *= den;
    }
    sign_of(&acc)
}

fn sign_of(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn sturm_sequence(f: &IntPoly) -> Vec<IntPoly> {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        let (a, b) = (&seq[n - 2], &seq[n - 1]);
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        let delta = a.degree().unwrap() - b.degree().unwrap();
        let mut r = a.pseudo_rem(b);
        if Pow::pow(b.leading().unwrap(), delta + 1).is_negative() {
            r = -&r;
        }
        if r.is_zero() {
            break;
        }
        let c = r.content();
        let r = IntPoly::new(r.coeffs().iter().map(|x| -(x / &c)).collect());
        seq.push(r);
    }
    seq
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(seq: &[IntPoly], x: &BigRational) -> usize {
    variations(seq.iter().map(|p| sign_at(p, x)))
}

fn variations_at_infinity(seq: &[IntPoly], positive: bool) -> usize {
    variations(seq.iter().map(|p| {
        let s = sign_of(p.leading().expect("nonzero"));
        let odd = p.degree().unwrap() % 2 == 1;
        if !positive && odd {
            -s
        } else {
            s
        }
    }))
}

/// Number of distinct real roots of a squarefree `f` in `interval`.
pub fn count_real_roots(f: &IntPoly, interval: &Interval) -> Result<usize, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(0);
    }
    if !f.is_squarefree() {
        return Err(PolyError::NotSquarefree);
    }
    let point = |b: &Bound| match b {
        Bound::Open(x) | Bound::Closed(x) => Some(x.clone()),
        Bound::Unbounded => None,
    };
    if let (Some(a), Some(b)) = (point(&interval.lo), point(&interval.hi)) {
        if a > b {
            return Ok(0);
        }
        if a == b {
            let both_closed =
                matches!(interval.lo, Bound::Closed(_)) && matches!(interval.hi, Bound::Closed(_));
            return Ok(usize::from(both_closed && sign_at(f, &a) == 0));
        }
    }
    let seq = sturm_sequence(f);
    let v_lo = match &interval.lo {
        Bound::Unbounded => variations_at_infinity(&seq, false),
        Bound::Open(x) | Bound::Closed(x) => variations_at(&seq, x),
    };
    let v_hi = match &interval.hi {
        Bound::Unbounded => variations_at_infinity(&seq, true),
        Bound::Open(x) | Bound::Closed(x) => variations_at(&seq, x),
    };
    // v_lo - v_hi counts roots in (lo, hi]
    let mut count = v_lo - v_hi;
    if let Bound::Closed(x) = &interval.lo {
        if sign_at(f, x) == 0 {
            count += 1;
        }
    }
    if let Bound::Open(x) = &interval.hi {
        if sign_at(f, x) == 0 {
            count -= 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Roots of a product of distinct linear factors are known exactly.
    fn from_roots(roots: &[i64]) -> IntPoly {
        roots.iter().fold(IntPoly::one(), |acc, &r| acc * IntPoly::linear(&BigInt::from(r)))
    }

    #[test]
    fn examples() {
        assert_eq!(count_real_roots(&ip(&[-2, 0, 1]), &Interval::negative()), Ok(1));
        assert_eq!(count_real_roots(&ip(&[1, 0, 1]), &Interval::real_line()), Ok(0));
        let f8 = ip(&[1, -9, 14, -8, 1]);
        assert_eq!(count_real_roots(&f8, &Interval::negative()), Ok(0));
        assert_eq!(count_real_roots(&f8, &Interval::real_line()), Ok(2));
        assert_eq!(
            count_real_roots(&ip(&[1, 2, 1]), &Interval::real_line()),
            Err(PolyError::NotSquarefree)
        );
    }

    #[test]
    fn endpoints() {
        let f = from_roots(&[-2, 0, 3]);
        let closed = |a, b| Interval::new(Bound::Closed(q(a, 1)), Bound::Closed(q(b, 1)));
        let open = |a, b| Interval::new(Bound::Open(q(a, 1)), Bound::Open(q(b, 1)));
        assert_eq!(count_real_roots(&f, &closed(-2, 3)), Ok(3));
        assert_eq!(count_real_roots(&f, &open(-2, 3)), Ok(1));
        assert_eq!(count_real_roots(&f, &closed(0, 0)), Ok(1));
        assert_eq!(count_real_roots(&f, &open(0, 0)), Ok(0));
        assert_eq!(count_real_roots(&f, &closed(4, 1)), Ok(0));
        let half = Interval::new(Bound::Open(q(-1, 2)), Bound::Unbounded);
        assert_eq!(count_real_roots(&f, &half), Ok(2));
    }

    #[test]
    fn rational_roots() {
        // (2x - 1)(3x + 1)(x - 5)
        let f = ip(&[-1, 2]) * ip(&[1, 3]) * ip(&[-5, 1]);
        let iv = Interval::new(Bound::Closed(q(-1, 3)), Bound::Open(q(1, 2)));
        assert_eq!(count_real_roots(&f, &iv), Ok(1));
        let iv = Interval::new(Bound::Closed(q(-1, 3)), Bound::Closed(q(1, 2)));
        assert_eq!(count_real_roots(&f, &iv), Ok(2));
        assert_eq!(count_real_roots(&f, &Interval::real_line()), Ok(3));
    }
}
