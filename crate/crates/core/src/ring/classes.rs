//! Ideal classes of `Z[θ]` among ideals of bounded norm.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::enumerate::{ideals_up_to_norm_capped, minkowski_bound_unchecked, DEFAULT_NORM_CAP};
use super::equiv::{search_witness, EquivVerdict, SearchLimits};
use super::kd::{is_integrally_closed, Closedness};
use super::{FracLattice, IdealLattice, Order, RingError};

#[derive(Debug, Clone)]
pub struct ClassOptions {
    /// Norm bound for the scan; the Minkowski bound when `None`.
    pub norm_bound: Option<u64>,
    /// Requested bounds above this are lowered to it.
    pub cap: u64,
    pub limits: SearchLimits,
    pub factor_budget: usize,
    pub deadline: Option<Instant>,
}

impl Default for ClassOptions {
    fn default() -> Self {
        ClassOptions {
            norm_bound: None,
            cap: DEFAULT_NORM_CAP,
            limits: SearchLimits::default(),
            factor_budget: 64,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassList {
    pub closure: Closedness,
    pub minkowski: BigRational,
    /// Norm bound actually scanned.
    pub bound: u64,
    pub ideals_scanned: usize,
    /// One representative per class found, the unit ideal first.
    pub reps: Vec<IdealLattice>,
    pub invertible: Vec<bool>,
    /// Number of scanned ideals assigned to each representative.
    pub members: Vec<usize>,
    /// Representatives proved pairwise inequivalent: a lower bound for
    /// the number of classes.
    pub certified_distinct: usize,
    /// Pairs `(ideal, rep index)` the search could not decide.
    pub unresolved: Vec<(IdealLattice, usize)>,
    /// The scan stopped early at the deadline.
    pub timed_out: bool,
    /// The list provably contains every class exactly once.
    pub complete: bool,
    /// `table[a][b]` is the class of `reps[a] * reps[b]`, when found.
    pub table: Vec<Vec<Option<usize>>>,
}

impl ClassList {
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    /// Group structure of the classes, when all representatives are
    /// invertible and the multiplication table is closed.
    pub fn group(&self) -> Option<GroupStructure> {
        if !self.invertible.iter().all(|&b| b) {
            return None;
        }
        let h = self.reps.len();
        let mut t = vec![vec![0usize; h]; h];
        for a in 0..h {
            for b in 0..h {
                t[a][b] = self.table.get(a)?.get(b).copied().flatten()?;
            }
        }
        Some(GroupStructure::from_table(&t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStructure {
    pub order: usize,
    /// Invariant factors `d_1 >= d_2 >= ...` with `d_{i+1} | d_i`.
    pub invariants: Vec<u64>,
    pub element_orders: Vec<usize>,
}

impl GroupStructure {
    /// From the multiplication table of a finite abelian group whose
    /// identity is element 0.
    pub fn from_table(t: &[Vec<usize>]) -> GroupStructure {
        let h = t.len();
        let element_orders: Vec<usize> = (0..h)
            .map(|g| {
                let (mut x, mut k) = (g, 1);
                while x != 0 {
                    x = t[x][g];
                    k += 1;
                }
                k
            })
            .collect();
        // |G[p^k]| determines the number of cyclic factors of order >= p^k
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        let mut m = h as u64;
        let mut p = 2;
        while m > 1 {
            if m.is_multiple_of(p) {
                while m.is_multiple_of(p) {
                    m /= p;
                }
                let mut counts = vec![1usize];
                let mut pk = 1u64;
                loop {
                    pk *= p;
                    let c = element_orders.iter().filter(|&&o| pk.is_multiple_of(o as u64)).count();
                    if c == *counts.last().unwrap() {
                        break;
                    }
                    counts.push(c);
                }
                // factors with exponent >= k
                let at_least: Vec<u32> = counts.windows(2).map(|w| ilog(p, (w[1] / w[0]) as u64)).collect();
                let mut exps = Vec::new();
                for (k, &cnt) in at_least.iter().enumerate() {
                    let next = at_least.get(k + 1).copied().unwrap_or(0);
                    for _ in 0..cnt - next {
                        exps.push(k as u32 + 1);
                    }
                }
                exps.sort_unstable_by(|a, b| b.cmp(a));
                by_prime.insert(p, exps);
            }
            p += 1;
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let invariants = (0..len)
            .map(|i| by_prime.iter().map(|(p, e)| e.get(i).map_or(1, |&k| p.pow(k))).product())
            .collect();
        GroupStructure { order: h, invariants, element_orders }
    }

    pub fn describe(&self) -> String {
        if self.invariants.is_empty() {
            return "C1".into();
        }
        self.invariants.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join(" x ")
    }
}

fn ilog(p: u64, mut x: u64) -> u32 {
    let mut k = 0;
    while x > 1 {
        x /= p;
        k += 1;
    }
    k
}

struct Entry {
    ideal: IdealLattice,
    invertible: bool,
    multiplier: FracLattice,
}

impl Entry {
    fn new(ideal: IdealLattice) -> Entry {
        Entry { invertible: ideal.is_invertible(), multiplier: ideal.multiplier_ring(), ideal }
    }
}

enum Placement {
    Found(usize),
    /// `clean` when every comparison was decided.
    New { clean: bool },
}

fn place(
    e: &Entry,
    reps: &[Entry],
    limits: &SearchLimits,
    unresolved: &mut Vec<(IdealLattice, usize)>,
) -> Result<Option<Placement>, RingError> {
    let mut pending = Vec::new();
    for (k, r) in reps.iter().enumerate() {
        if r.invertible != e.invertible || r.multiplier != e.multiplier {
            continue;
        }
        if limits.deadline.is_some_and(|d| Instant::now() >= d) {
            return Ok(None);
        }
        match search_witness(&e.ideal, &r.ideal, limits)? {
            EquivVerdict::Equivalent { .. } => return Ok(Some(Placement::Found(k))),
            EquivVerdict::Unknown => pending.push(k),
            EquivVerdict::NotEquivalent(_) => {}
        }
    }
    let clean = pending.is_empty();
    unresolved.extend(pending.into_iter().map(|k| (e.ideal.clone(), k)));
    Ok(Some(Placement::New { clean }))
}

/// Multiplication tables are computed only up to this many classes.
pub const TABLE_LIMIT: usize = 256;

/// Sort all ideals of norm up to the bound into classes.
///
/// The list is complete when the order is maximal, the scan reached the
/// Minkowski bound and every pair was decided.
pub fn class_monoid(o: &Order, opts: &ClassOptions) -> Result<ClassList, RingError> {
    let closure = is_integrally_closed(o, opts.factor_budget).verdict;
    let minkowski = minkowski_bound_unchecked(o)?;
    let mink_floor = minkowski.floor().to_integer().to_u64().unwrap_or(u64::MAX);
    let bound = opts.norm_bound.unwrap_or(mink_floor).min(opts.cap);
    let ideals = ideals_up_to_norm_capped(o, bound, opts.cap)?;
    let limits = SearchLimits { deadline: opts.deadline.or(opts.limits.deadline), ..opts.limits };
    let mut reps: Vec<Entry> = Vec::new();
    let mut members = Vec::new();
    let mut unresolved = Vec::new();
    let mut timed_out = false;
    let mut scanned = 0;
    let mut certified_distinct = 0;
    for ideal in ideals {
        if limits.deadline.is_some_and(|d| Instant::now() >= d) {
            timed_out = true;
            break;
        }
        let e = Entry::new(ideal);
        match place(&e, &reps, &limits, &mut unresolved)? {
            None => {
                timed_out = true;
                break;
            }
            Some(Placement::Found(k)) => members[k] += 1,
            Some(Placement::New { clean }) => {
                reps.push(e);
                members.push(1);
                certified_distinct += usize::from(clean);
            }
        }
        scanned += 1;
    }
    let h = reps.len();
    let mut table = vec![vec![None; h]; h];
    let mut table_unresolved = Vec::new();
    if !timed_out && h <= TABLE_LIMIT {
        'outer: for a in 0..h {
            for b in a..h {
                let prod = Entry::new(reps[a].ideal.product(&reps[b].ideal)?);
                let cls = match place(&prod, &reps, &limits, &mut table_unresolved)? {
                    None => {
                        timed_out = true;
                        break 'outer;
                    }
                    Some(Placement::Found(k)) => Some(k),
                    Some(Placement::New { .. }) => None,
                };
                table[a][b] = cls;
                table[b][a] = cls;
            }
        }
    }
    let complete = closure == Closedness::Yes
        && BigRational::from_integer(BigInt::from(bound)) >= minkowski.floor()
        && unresolved.is_empty()
        && !timed_out;
    Ok(ClassList {
        closure,
        minkowski,
        bound,
        ideals_scanned: scanned,
        invertible: reps.iter().map(|e| e.invertible).collect(),
        reps: reps.into_iter().map(|e| e.ideal).collect(),
        members,
        certified_distinct,
        unresolved,
        timed_out,
        complete,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;

    fn order(c: &[i64]) -> Order {
        Order::new(&IntPoly::from_i64(c)).unwrap()
    }

    #[test]
    fn quadratic_class_numbers() {
        for (c, h, desc) in [
            (vec![5i64, 0, 1], 2, "C2"),
            (vec![-10, 0, 1], 2, "C2"),
            (vec![1, 0, 1], 1, "C1"),
            (vec![6, 1, 1], 3, "C3"),
            (vec![21, 0, 1], 4, "C2 x C2"),
            (vec![14, 0, 1], 4, "C4"),
        ] {
            let o = order(&c);
            let cl = class_monoid(&o, &ClassOptions::default()).unwrap();
            assert!(cl.complete, "{c:?}");
            assert_eq!(cl.count(), h, "{c:?}");
            assert_eq!(cl.group().unwrap().describe(), desc, "{c:?}");
        }
    }

    #[test]
    fn group_structure_from_table() {
        // Z/2 x Z/4 as pairs (a, b), index a * 4 + b
        let t: Vec<Vec<usize>> = (0..8)
            .map(|x| (0..8).map(|y| ((x / 4 + y / 4) % 2) * 4 + (x % 4 + y % 4) % 4).collect())
            .collect();
        let g = GroupStructure::from_table(&t);
        assert_eq!(g.invariants, vec![4, 2]);
        assert_eq!(g.describe(), "C4 x C2");
        let z6: Vec<Vec<usize>> = (0..6).map(|x| (0..6).map(|y| (x + y) % 6).collect()).collect();
        assert_eq!(GroupStructure::from_table(&z6).invariants, vec![6]);
    }

    #[test]
    fn non_maximal_order_is_incomplete() {
        let o = order(&[1, -65, 126, -64, 1]);
        let opts = ClassOptions { norm_bound: Some(11), ..ClassOptions::default() };
        let cl = class_monoid(&o, &opts).unwrap();
        assert!(!cl.complete);
        assert!(cl.invertible.iter().any(|b| !b));
    }
}
