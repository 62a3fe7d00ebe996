//! Deciding whether two ideals are in the same class: `μ I = J` for some
//! nonzero `μ` in the fraction field.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{Embeddings, IdealLattice, Order, RingError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Certificate {
    /// Exactly one of the two ideals is invertible.
    Invertibility,
    /// The multiplier rings differ.
    MultiplierRing,
    /// Every candidate in a provably sufficient region was checked.
    ExhaustiveSearch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivVerdict {
    /// `μ I = J` with `μ = num / den`, `num` in power-basis coordinates.
    Equivalent { num: Vec<BigInt>, den: BigInt },
    NotEquivalent(Certificate),
    Unknown,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    /// Coefficient radius of the box search over a reduced basis.
    pub radius: u32,
    /// Node budget for the short-vector enumeration.
    pub node_cap: u64,
    pub deadline: Option<Instant>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { radius: 2, node_cap: 5_000_000, deadline: None }
    }
}

impl SearchLimits {
    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// Independent units of the order and the per-place slack they give when
/// balancing an element's logarithmic embedding.
#[derive(Debug, Clone)]
pub(crate) struct UnitData {
    /// `½ Σ_j |log|σ_v(ε_j)||` for each place `v`.
    pub slack: Vec<f64>,
    /// The units have full rank `r1 + r2 - 1`.
    pub complete: bool,
}

impl UnitData {
    /// Units are collected from short vectors of the trace form and from
    /// quotients of short vectors with equal small norm.
    pub(crate) fn search(o: &Order) -> UnitData {
        let Some(e) = o.embeddings() else {
            return UnitData { slack: Vec::new(), complete: false };
        };
        let n = o.degree();
        let rank = e.places() - 1;
        let mut units: Vec<Vec<BigInt>> = Vec::new();
        for c in [[0i64, 1], [1, -1], [1, 1]] {
            let mut v = vec![BigInt::zero(); n];
            v[0] = BigInt::from(c[0]);
            v[1] = BigInt::from(c[1]);
            if o.norm_coords(&v).abs().is_one() {
                units.push(v);
            }
        }
        let identity: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let basis = lll_t2(e, identity);
        let g = gram(e, &basis);
        let mut by_norm: HashMap<BigInt, Vec<(Vec<BigInt>, Vec<BigInt>)>> = HashMap::new();
        let mut bound = 2.0 * n as f64;
        let mut chosen = choose_units(e, &units, rank);
        for round in 0..UNIT_ROUNDS {
            let finished = enumerate_short(&g, bound, UNIT_NODE_CAP, None, &mut |x| {
                let y = combine(&basis, x);
                if !float_norm_at_most(e, &y, UNIT_NORM_LIMIT as f64) {
                    return Visit::Continue;
                }
                let m = o.mult_matrix(&y);
                let norm = m.det().expect("square").abs();
                if norm.is_one() {
                    units.push(y);
                } else if norm <= BigInt::from(UNIT_NORM_LIMIT) {
                    let list = by_norm.entry(norm.clone()).or_default();
                    if list.len() < PER_NORM {
                        // y * conj = N(y), with conj the first row of adj(M_y)
                        let adj = m.adjugate().expect("square");
                        let conj = adj.row(0).to_vec();
                        for (other, _) in list.iter() {
                            let q = o.mul_coords(other, &conj);
                            if q.iter().all(|c| c.is_multiple_of(&norm)) {
                                units.push(q.iter().map(|c| c / &norm).collect());
                            }
                        }
                        list.push((y, conj));
                    }
                }
                Visit::Continue
            });
            chosen = choose_units(e, &units, rank);
            if (chosen.len() == rank && round >= 1) || !finished {
                break;
            }
            bound *= 2.0;
        }
        let slack = (0..e.places()).map(|v| 0.5 * chosen.iter().map(|l| l[v].abs()).sum::<f64>()).collect();
        UnitData { complete: chosen.len() == rank, slack }
    }
}

const UNIT_ROUNDS: usize = 40;
const UNIT_NODE_CAP: u64 = 200_000;
const UNIT_NORM_LIMIT: u64 = 64;
const PER_NORM: usize = 24;

/// Greedy independent subset of the log vectors, smallest first.
fn choose_units(e: &Embeddings, units: &[Vec<BigInt>], rank: usize) -> Vec<Vec<f64>> {
    let mut logs: Vec<(f64, Vec<f64>)> = units
        .iter()
        .map(|x| {
            let l = e.log_vector(x);
            (l.iter().map(|v| v.abs()).sum::<f64>(), l)
        })
        .filter(|(s, _)| s.is_finite() && *s > 1e-6)
        .collect();
    logs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut chosen = Vec::new();
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for (_, l) in logs {
        if chosen.len() == rank {
            break;
        }
        let mut w = l.clone();
        for q in &ortho {
            let dot: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= dot * qi;
            }
        }
        let len = w.iter().map(|a| a * a).sum::<f64>().sqrt();
        if len > 1e-6 {
            ortho.push(w.iter().map(|a| a / len).collect());
            chosen.push(l);
        }
    }
    chosen
}

/// `false` only when `|N(x)|` certainly exceeds `limit`.
fn float_norm_at_most(e: &Embeddings, x: &[BigInt], limit: f64) -> bool {
    let emb = e.embed(x);
    let est: f64 = emb.iter().enumerate().map(|(v, z)| z.norm().powi(e.weight(v) as i32)).product();
    !(est > limit * (1.0 + 1e-6) + 1e-6)
}

/// `false` only when the floating-point norm of `x` certainly differs
/// from `target` in absolute value.
fn float_norm_may_equal(e: &Embeddings, x: &[BigInt], target: f64) -> bool {
    let xf: Vec<f64> = x.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect();
    let emb = e.embed_f64(&xf);
    let mut est = 1.0f64;
    let mut scale = 1.0f64;
    for (v, z) in emb.iter().enumerate() {
        let w = e.weight(v) as i32;
        est *= z.norm().powi(w);
        let r = e.roots[v].norm();
        let s: f64 = xf.iter().enumerate().map(|(i, c)| c.abs() * r.powi(i as i32)).sum();
        scale *= s.powi(w);
    }
    if !est.is_finite() || !scale.is_finite() {
        return true;
    }
    (est - target).abs() <= 1e-9 * scale + 1e-6 * target + 1e-9
}

struct Search<'a> {
    order: &'a Order,
    emb: &'a Embeddings,
    i: &'a IdealLattice,
    dj: IdealLattice,
    target: BigInt,
    target_f: f64,
}

impl Search<'_> {
    fn is_witness(&self, y: &[BigInt]) -> bool {
        if y.iter().all(Zero::is_zero) {
            return false;
        }
        if !float_norm_may_equal(self.emb, y, self.target_f) {
            return false;
        }
        if self.order.norm_coords(y).abs() != self.target {
            return false;
        }
        self.i.mul_element(y) == self.dj
    }
}

/// Decide whether `μ I = J` for some `μ`.
///
/// Invariants are compared first. Otherwise a witness `y = d μ` is sought in
/// `d (J : I)`: by a small box search over a reduced basis, and then by
/// enumerating every lattice vector of trace form below the bound that any
/// unit-balanced witness must satisfy. A completed enumeration without hits
/// proves inequivalence.
pub fn equivalence_test(i: &IdealLattice, j: &IdealLattice, limits: &SearchLimits) -> Result<EquivVerdict, RingError> {
    if i.order() != j.order() {
        return Err(RingError::OrderMismatch);
    }
    if i.is_invertible() != j.is_invertible() {
        return Ok(EquivVerdict::NotEquivalent(Certificate::Invertibility));
    }
    if i.multiplier_ring() != j.multiplier_ring() {
        return Ok(EquivVerdict::NotEquivalent(Certificate::MultiplierRing));
    }
    search_witness(i, j, limits)
}

/// The search half of [`equivalence_test`], for callers that have already
/// compared invariants.
pub(crate) fn search_witness(i: &IdealLattice, j: &IdealLattice, limits: &SearchLimits) -> Result<EquivVerdict, RingError> {
    let o = i.order();
    let n = o.degree();
    if i == j {
        return Ok(EquivVerdict::Equivalent { num: o.one().coords().to_vec(), den: BigInt::one() });
    }
    let colon = j.colon(i)?;
    let d = colon.den.clone();
    let (q, r) = (num_traits::pow(d.clone(), n) * j.norm()).div_rem(&i.norm());
    if !r.is_zero() {
        return Ok(EquivVerdict::NotEquivalent(Certificate::ExhaustiveSearch));
    }
    let Some(emb) = o.embeddings() else {
        return Ok(EquivVerdict::Unknown);
    };
    let search = Search {
        order: o,
        emb,
        i,
        dj: j.scale(&d),
        target_f: q.to_f64().unwrap_or(f64::INFINITY),
        target: q,
    };
    let witness = |y: Vec<BigInt>| {
        let g = y.iter().fold(d.clone(), |g, c| g.gcd(c));
        EquivVerdict::Equivalent { num: y.iter().map(|c| c / &g).collect(), den: &d / &g }
    };
    let basis = lll_t2(emb, colon.num.hnf().row_vecs());

    // box search in shells of growing sup norm
    let r = limits.radius as i64;
    for shell in 0..=r {
        let width = (2 * shell + 1) as u64;
        let total = width.pow(n as u32);
        for idx in 0..total {
            let mut t = idx;
            let x: Vec<i64> = (0..n)
                .map(|_| {
                    let c = (t % width) as i64 - shell;
                    t /= width;
                    c
                })
                .collect();
            if x.iter().map(|c| c.abs()).max() != Some(shell) {
                continue;
            }
            let y = combine(&basis, &x);
            if search.is_witness(&y) {
                return Ok(witness(y));
            }
        }
        if limits.expired() {
            return Ok(EquivVerdict::Unknown);
        }
    }

    let units = o.unit_data();
    if !units.complete || search.target_f == f64::INFINITY {
        return Ok(EquivVerdict::Unknown);
    }
    // any witness times a suitable unit has |σ_v(y)| <= R_v
    let root = search.target_f.powf(1.0 / n as f64);
    let bound: f64 = (0..emb.places())
        .map(|v| {
            let rv = root * units.slack[v].exp();
            emb.weight(v) * rv * rv
        })
        .sum();
    let bound = bound * (1.0 + 1e-6) + 1e-6;
    let g = gram(emb, &basis);
    let mut found = None;
    let complete = enumerate_short(&g, bound, limits.node_cap, limits.deadline, &mut |x| {
        if limits.expired() {
            return Visit::Abort;
        }
        // y and -y are witnesses together
        if x.iter().rev().find(|c| **c != 0).is_some_and(|c| *c < 0) {
            return Visit::Continue;
        }
        let y = combine(&basis, x);
        if search.is_witness(&y) {
            found = Some(y);
            return Visit::Stop;
        }
        Visit::Continue
    });
    Ok(match (found, complete) {
        (Some(y), _) => witness(y),
        (None, true) => EquivVerdict::NotEquivalent(Certificate::ExhaustiveSearch),
        (None, false) => EquivVerdict::Unknown,
    })
}

fn combine(basis: &[Vec<BigInt>], x: &[i64]) -> Vec<BigInt> {
    let n = basis[0].len();
    let mut y = vec![BigInt::zero(); n];
    for (b, &c) in basis.iter().zip(x) {
        if c == 0 {
            continue;
        }
        let c = BigInt::from(c);
        for (yi, bi) in y.iter_mut().zip(b) {
            *yi += &c * bi;
        }
    }
    y
}

fn to_f64(v: &[BigInt]) -> Vec<f64> {
    v.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect()
}

fn gram(e: &Embeddings, basis: &[Vec<BigInt>]) -> Vec<Vec<f64>> {
    let vs: Vec<Vec<f64>> = basis.iter().map(|b| e.t2_vector(&to_f64(b))).collect();
    vs.iter().map(|a| vs.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect()
}

/// Gram-Schmidt data `(mu, |b*_i|^2)` from a Gram matrix.
fn gso(g: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut rr = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let s: f64 = (0..j).map(|k| mu[j][k] * mu[i][k] * rr[k]).sum();
            mu[i][j] = (g[i][j] - s) / rr[j];
        }
        rr[i] = g[i][i] - (0..i).map(|k| mu[i][k] * mu[i][k] * rr[k]).sum::<f64>();
    }
    (mu, rr)
}

/// LLL with respect to the trace form, keeping the basis exact.
fn lll_t2(e: &Embeddings, mut b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = b.len();
    let mut k = 1;
    let mut steps = 0;
    while k < n && steps < 100_000 {
        steps += 1;
        for j in (0..k).rev() {
            let (mu, _) = gso(&gram(e, &b));
            let q = mu[k][j].round();
            if q != 0.0 && q.is_finite() {
                let qb = BigInt::from_f64(q).unwrap();
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &qb * y;
                }
            }
        }
        let (mu, rr) = gso(&gram(e, &b));
        if rr[k] < (0.75 - mu[k][k - 1] * mu[k][k - 1]) * rr[k - 1] {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    b
}

enum Visit {
    Continue,
    Stop,
    Abort,
}

/// Fincke-Pohst enumeration of all `x != 0` with `x G x^T <= bound`.
/// Returns `false` when the node budget ran out or the visitor aborted.
fn enumerate_short(
    g: &[Vec<f64>],
    bound: f64,
    node_cap: u64,
    deadline: Option<Instant>,
    visit: &mut dyn FnMut(&[i64]) -> Visit,
) -> bool {
    let n = g.len();
    let (mu, rr) = gso(g);
    if rr.iter().any(|r| !(*r > 0.0)) {
        return false;
    }
    struct St<'a> {
        mu: &'a [Vec<f64>],
        rr: &'a [f64],
        bound: f64,
        nodes: u64,
        cap: u64,
        deadline: Option<Instant>,
        x: Vec<i64>,
    }
    // Some(true): stop, Some(false): continue, None: out of budget
    fn rec(st: &mut St, i: usize, partial: f64, visit: &mut dyn FnMut(&[i64]) -> Visit) -> Option<bool> {
        st.nodes += 1;
        if st.nodes > st.cap {
            return None;
        }
        if st.nodes.is_multiple_of(4096) && st.deadline.is_some_and(|d| Instant::now() >= d) {
            return None;
        }
        let n = st.x.len();
        let c: f64 = -(i + 1..n).map(|j| st.x[j] as f64 * st.mu[j][i]).sum::<f64>();
        let rem = st.bound - partial;
        if rem < 0.0 {
            return Some(false);
        }
        let half = (rem / st.rr[i]).sqrt();
        let lo = (c - half - 1e-9).ceil() as i64;
        let hi = (c + half + 1e-9).floor() as i64;
        for xi in lo..=hi {
            let t = (xi as f64 - c).powi(2) * st.rr[i];
            if partial + t > st.bound * (1.0 + 1e-12) {
                continue;
            }
            st.x[i] = xi;
            if i == 0 {
                if st.x.iter().all(|&v| v == 0) {
                    continue;
                }
                match visit(&st.x) {
                    Visit::Continue => {}
                    Visit::Stop => return Some(true),
                    Visit::Abort => return None,
                }
            } else {
                if rec(st, i - 1, partial + t, visit)? { return Some(true) }
            }
        }
        st.x[i] = 0;
        Some(false)
    }
    let mut st = St { mu: &mu, rr: &rr, bound, nodes: 0, cap: node_cap, deadline, x: vec![0; n] };
    rec(&mut st, n - 1, 0.0, visit).is_some()
}
