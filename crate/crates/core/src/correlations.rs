//! Exact enumeration of spectral correlations, diagonal tuples, structure sets
//! and quasi-correlations.
//!
//! Tuples are ordered: `(λ, −λ)` and `(−λ, λ)` are different elements of
//! `S_n(2)`. Counting is meet-in-the-middle over multiplicity maps of `k`-fold
//! sums keyed by exact integer vectors.

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{add, neg, norm2, sub, Dim, LatticePointSet, Vector};

/// Default cap on hash operations for one enumeration.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// `k`-fold sum → number of ordered `k`-tuples with that sum.
pub type SumCounts = FxHashMap<Vector, u128>;

fn pow_saturating(base: u128, exp: u32) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base))
}

/// `N^⌈l/2⌉`, the work bound checked before enumerating.
pub fn work_estimate(set: &LatticePointSet, l: usize) -> u128 {
    pow_saturating(set.len() as u128, l.div_ceil(2) as u32)
}

fn check_budget(required: u128, budget: u128) -> Result<()> {
    if required > budget {
        Err(Error::Budget { required, budget })
    } else {
        Ok(())
    }
}

/// Multiplicities of all `k`-fold sums, built by repeated convolution with
/// `E_n`.
pub fn sum_counts(set: &LatticePointSet, k: usize) -> SumCounts {
    let mut map = SumCounts::default();
    map.insert([0, 0, 0], 1);
    for _ in 0..k {
        let mut next = SumCounts::default();
        next.reserve(map.len() * 2);
        for (s, c) in &map {
            for p in set.points() {
                *next.entry(add(s, p)).or_insert(0) += c;
            }
        }
        map = next;
    }
    map
}

/// Multiplicity maps with one representative tuple (point indices) per sum.
fn sum_counts_with_reps(set: &LatticePointSet, k: usize) -> FxHashMap<Vector, (u128, Vec<usize>)> {
    let mut map: FxHashMap<Vector, (u128, Vec<usize>)> = FxHashMap::default();
    map.insert([0, 0, 0], (1, Vec::new()));
    for _ in 0..k {
        let mut keys: Vec<&Vector> = map.keys().collect();
        keys.sort();
        let mut next: FxHashMap<Vector, (u128, Vec<usize>)> = FxHashMap::default();
        for s in keys {
            let (c, rep) = &map[s];
            for (i, p) in set.points().iter().enumerate() {
                let entry = next.entry(add(s, p)).or_insert_with(|| {
                    let mut r = rep.clone();
                    r.push(i);
                    (0, r)
                });
                entry.0 += c;
            }
        }
        map = next;
    }
    map
}

/// Optional quasi-correlation result attached to a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiCount {
    #[serde(rename = "K")]
    pub k: f64,
    pub count: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub n: u64,
    pub d: Dim,
    pub l: usize,
    #[serde(rename = "count_S")]
    pub count_s: u128,
    #[serde(rename = "count_D")]
    pub count_d: u128,
    pub count_offdiag: u128,
    pub quasi: Option<QuasiCount>,
}

/// Exact `|S_n(l)|`.
pub fn count_s(set: &LatticePointSet, l: usize, budget: u128) -> Result<u128> {
    if l < 2 {
        return Err(Error::invalid("correlation length must be >= 2"));
    }
    check_budget(work_estimate(set, l), budget)?;
    let left = sum_counts(set, l / 2);
    let right = if l.is_multiple_of(2) { None } else { Some(sum_counts(set, l.div_ceil(2))) };
    let right = right.as_ref().unwrap_or(&left);
    Ok(left
        .iter()
        .map(|(s, c)| c * right.get(&neg(s)).copied().unwrap_or(0))
        .sum())
}

/// Exact report for `S_n(l)` and `D_n(l)`.
pub fn count_correlations(set: &LatticePointSet, l: usize, budget: u128) -> Result<CorrelationReport> {
    let s = count_s(set, l, budget)?;
    let d = if l.is_multiple_of(2) { count_diagonal(set, l)? } else { 0 };
    if d > s {
        return Err(Error::invariant("diagonal-subset", format!("|D| = {d} > |S| = {s}")));
    }
    Ok(CorrelationReport {
        n: set.n(),
        d: set.dim(),
        l,
        count_s: s,
        count_d: d,
        count_offdiag: s - d,
        quasi: None,
    })
}

/// Streams every tuple of `S_n(l)` as point indices, left half first. Memory
/// holds all `⌊l/2⌋`-tuples.
pub fn for_each_zero_sum_tuple(
    set: &LatticePointSet,
    l: usize,
    budget: u128,
    mut sink: impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if l < 2 {
        return Err(Error::invalid("correlation length must be >= 2"));
    }
    check_budget(work_estimate(set, l), budget)?;
    let a = l / 2;
    let mut left: FxHashMap<Vector, Vec<Vec<usize>>> = FxHashMap::default();
    for_each_tuple(set.len(), a, |t| {
        left.entry(tuple_sum(set, t)).or_default().push(t.to_vec());
    });
    let mut out = vec![0; l];
    let mut status = Ok(());
    for_each_tuple(set.len(), l - a, |t| {
        if status.is_err() {
            return;
        }
        if let Some(list) = left.get(&neg(&tuple_sum(set, t))) {
            out[a..].copy_from_slice(t);
            for head in list {
                out[..a].copy_from_slice(head);
                if let Err(e) = sink(&out) {
                    status = Err(e);
                    return;
                }
            }
        }
    });
    status
}

/// Calls `f` on every index tuple in `{0..n}^k`, lexicographically.
pub fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 && k > 0 {
        return;
    }
    let mut t = vec![0; k];
    loop {
        f(&t);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

pub fn tuple_sum(set: &LatticePointSet, t: &[usize]) -> Vector {
    t.iter().fold([0, 0, 0], |acc, &i| add(&acc, set.point(i)))
}

fn binomial_table(max: usize) -> Vec<Vec<u128>> {
    let mut c = vec![vec![0u128; max + 1]; max + 1];
    for i in 0..=max {
        c[i][0] = 1;
        for j in 1..=i {
            c[i][j] = c[i - 1][j - 1] + if j < i { c[i - 1][j] } else { 0 };
        }
    }
    c
}

/// Exact `|D_n(2k)|`: ordered `2k`-tuples in which every point occurs as
/// often as its negation.
///
/// Counted by a recursion over the `N/2` antipodal classes: class `m`
/// contributes `j` copies of `λ` and of `−λ`, placed in `C(2s, 2j)·C(2j, j)`
/// ways among the `2s` slots used so far.
pub fn count_diagonal(set: &LatticePointSet, l: usize) -> Result<u128> {
    if l % 2 == 1 || l < 2 {
        return Err(Error::invalid(format!("diagonal tuples need even l >= 2, got {l}")));
    }
    let k = l / 2;
    let classes = set.len() / 2;
    let c = binomial_table(l);
    let overflow = || Error::invalid(format!("|D_n({l})| overflows 128 bits"));
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for _ in 0..classes {
        let mut next = vec![0u128; k + 1];
        for s in 0..=k {
            let mut acc = 0u128;
            for j in 0..=s {
                let ways = c[2 * s][2 * j]
                    .checked_mul(c[2 * j][j])
                    .and_then(|w| w.checked_mul(row[s - j]))
                    .ok_or_else(overflow)?;
                acc = acc.checked_add(ways).ok_or_else(overflow)?;
            }
            next[s] = acc;
        }
        row = next;
    }
    Ok(row[k])
}

/// Whether an index tuple is balanced under negation.
pub fn is_diagonal(set: &LatticePointSet, t: &[usize]) -> bool {
    let mut balance: FxHashMap<usize, i64> = FxHashMap::default();
    for &i in t {
        let j = set.antipode(i);
        let (key, sign) = if i <= j { (i, 1) } else { (j, -1) };
        *balance.entry(key).or_insert(0) += sign;
    }
    balance.values().all(|&b| b == 0)
}

/// Multiset of half-class sizes of an admissible tuple, sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureSet {
    pub parts: Vec<usize>,
}

/// Admissibility and structure set of a `2k`-tuple of points.
pub fn structure_set(tuple: &[Vector], set: &LatticePointSet) -> Result<(bool, Option<StructureSet>)> {
    if tuple.is_empty() || tuple.len() % 2 == 1 {
        return Err(Error::invalid("structure sets need a non-empty tuple of even length"));
    }
    let idx = tuple
        .iter()
        .map(|v| {
            set.index_of(v)
                .ok_or_else(|| Error::invalid(format!("{v:?} is not in E_{}", set.n())))
        })
        .collect::<Result<Vec<_>>>()?;
    if !is_diagonal(set, &idx) {
        return Ok((false, None));
    }
    if idx.chunks(2).any(|p| set.antipode(p[0]) == p[1]) {
        return Ok((false, None));
    }
    let m = idx.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra] = rb;
        }
    };
    for i in (0..m).step_by(2) {
        union(&mut parent, i, i + 1);
    }
    for a in 0..m {
        for b in a + 1..m {
            if set.antipode(idx[a]) == idx[b] {
                union(&mut parent, a, b);
            }
        }
    }
    let mut sizes: FxHashMap<usize, usize> = FxHashMap::default();
    for i in 0..m {
        *sizes.entry(find(&mut parent, i)).or_insert(0) += 1;
    }
    let mut parts: Vec<usize> = sizes.values().map(|s| s / 2).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok((true, Some(StructureSet { parts })))
}

/// `⌊K²⌋` computed exactly from the binary expansion of `K`.
pub fn floor_square(k: f64) -> Result<u128> {
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::invalid(format!("K must be finite and non-negative, got {k}")));
    }
    if k == 0.0 {
        return Ok(0);
    }
    let bits = k.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
    let sq = (mant as u128) * (mant as u128);
    let shift = 2 * e;
    Ok(if shift >= 0 {
        if shift >= 20 {
            return Err(Error::invalid("K is too large"));
        }
        sq << shift
    } else if -shift >= 128 {
        0
    } else {
        sq >> (-shift)
    })
}

/// Lattice vectors `v` with `0 < ‖v‖² ≤ bound`.
fn ball_points(dim: Dim, bound: u128) -> Vec<Vector> {
    let r = (bound as f64).sqrt().ceil() as i64 + 1;
    let mut out = Vec::new();
    let zr = if dim == Dim::Three { r } else { 0 };
    for a in -r..=r {
        for b in -r..=r {
            for c in -zr..=zr {
                let v = [a, b, c];
                let m = norm2(&v) as u128;
                if m > 0 && m <= bound {
                    out.push(v);
                }
            }
        }
    }
    out
}

struct QuasiJoin {
    count: u128,
    witness: Option<Vec<usize>>,
}

fn quasi_join(set: &LatticePointSet, l: usize, k: f64, budget: u128, want_witness: bool) -> Result<QuasiJoin> {
    if l < 2 {
        return Err(Error::invalid("correlation length must be >= 2"));
    }
    let max_k = l as f64 * set.radius();
    if !(k > 0.0) || !(k < max_k) {
        return Err(Error::invalid(format!("K must lie in (0, {max_k}), got {k}")));
    }
    check_budget(work_estimate(set, l), budget)?;
    let bound = floor_square(k)?;
    let a = l / 2;
    let b = l - a;
    let left = sum_counts_with_reps(set, a);
    let right = sum_counts_with_reps(set, b);
    let ball = ball_points(set.dim(), bound);
    let mut keys: Vec<&Vector> = left.keys().collect();
    keys.sort();
    let use_ball = ball.len() < right.len();
    let mut rkeys: Vec<&Vector> = right.keys().collect();
    rkeys.sort();
    let per_key = |s: &Vector| -> (u128, Option<Vec<usize>>) {
        let (cl, rep_l) = &left[s];
        let mut count = 0u128;
        let mut witness = None;
        let mut hit = |cr: u128, rep_r: &Vec<usize>| {
            count += cl * cr;
            if want_witness && witness.is_none() {
                let mut w = rep_l.clone();
                w.extend_from_slice(rep_r);
                witness = Some(w);
            }
        };
        if use_ball {
            for v in &ball {
                let s2 = sub(v, s);
                if let Some((cr, rep_r)) = right.get(&s2) {
                    hit(*cr, rep_r);
                }
            }
        } else {
            for s2 in &rkeys {
                let m = norm2(&add(s, s2)) as u128;
                if m > 0 && m <= bound {
                    let (cr, rep_r) = &right[*s2];
                    hit(*cr, rep_r);
                }
            }
        }
        (count, witness)
    };
    let results: Vec<(u128, Option<Vec<usize>>)> = keys.par_iter().map(|s| per_key(s)).collect();
    let count = results.iter().map(|r| r.0).sum();
    let witness = results.into_iter().find_map(|r| r.1);
    Ok(QuasiJoin { count, witness })
}

/// Exact `|C_n(l; K)|`: ordered `l`-tuples with `0 < ‖Σλ‖ ≤ K`.
pub fn count_quasi_correlations(set: &LatticePointSet, l: usize, k: f64, budget: u128) -> Result<CorrelationReport> {
    let join = quasi_join(set, l, k, budget, false)?;
    let mut report = count_correlations(set, l, budget)?;
    report.quasi = Some(QuasiCount { k, count: join.count });
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisA {
    pub l: usize,
    pub delta: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub holds: bool,
    pub count: u128,
    pub witness: Option<Vec<Vector>>,
}

/// `A(n; l, δ)`: no quasi-correlations of length `l` below `K = n^{1/2−δ}`.
/// Returns a re-verified violating tuple when the hypothesis fails.
pub fn check_hypothesis_a(set: &LatticePointSet, l: usize, delta: f64, budget: u128) -> Result<HypothesisA> {
    if !(delta > 0.0) {
        return Err(Error::invalid("delta must be positive"));
    }
    let k = (set.n() as f64).powf(0.5 - delta);
    let join = quasi_join(set, l, k, budget, true)?;
    let witness = match join.witness {
        Some(idx) => {
            let pts: Vec<Vector> = idx.iter().map(|&i| *set.point(i)).collect();
            let s = pts.iter().fold([0, 0, 0], |acc, p| add(&acc, p));
            let m = norm2(&s) as u128;
            if m == 0 || m > floor_square(k)? {
                return Err(Error::invariant("quasi-witness", format!("{pts:?} does not recheck")));
            }
            Some(pts)
        }
        None => None,
    };
    Ok(HypothesisA {
        l,
        delta,
        k,
        holds: join.count == 0,
        count: join.count,
        witness,
    })
}

/// `(|S_n(l)| − |D_n(l)|)/N^{l/2−γ}`.
pub fn check_diagonal_domination(set: &LatticePointSet, l: usize, gamma: f64, budget: u128) -> Result<f64> {
    if l % 2 == 1 {
        return Err(Error::invalid("diagonal domination needs even l"));
    }
    if !(gamma > 0.0) {
        return Err(Error::invalid("gamma must be positive"));
    }
    let r = count_correlations(set, l, budget)?;
    let scale = (set.len() as f64).powf(l as f64 / 2.0 - gamma);
    Ok(r.count_offdiag as f64 / scale)
}
