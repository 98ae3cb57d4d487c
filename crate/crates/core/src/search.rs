//! Bounded exhaustive enumeration of circulant determinants.
//!
//! Vectors are numbered in colexicographic order: every coordinate runs from
//! `lo` to `hi`, `a₀` varies fastest and `a_{n−1}` slowest, so vector `i` has
//! `a_k = lo + digit_k(i)` in base `hi − lo + 1`. The box is split into
//! partitions on `(a₀, a₁)`; partition `p` holds the indices `≡ p` modulo
//! `width²`. Partitions may run in parallel; results are merged by global
//! index, so every report is independent of the worker count.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;

use crate::circulant::{det_bareiss, det_folded, CoeffVector};
use crate::error::SearchError;
use crate::parallel;

pub const SUPPORTED_ORDERS: [usize; 4] = [2, 4, 8, 16];

/// Default cap on the number of vectors a single request may touch.
pub const DEFAULT_MAX_WORK: u128 = 50_000_000;

/// Entry bound at order 16 beyond which an explicit override is required.
pub const ORDER16_ENTRY_LIMIT: i64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBox {
    pub n: usize,
    pub lo: i64,
    pub hi: i64,
}

impl SearchBox {
    /// Validates the order and bounds. Boxes whose determinants could leave
    /// `i128` (checked via `(n·max|a|)ⁿ`) are rejected.
    pub fn new(n: usize, lo: i64, hi: i64) -> Result<Self, SearchError> {
        if !SUPPORTED_ORDERS.contains(&n) {
            return Err(SearchError::InvalidBox(format!("order {n} not in {SUPPORTED_ORDERS:?}")));
        }
        if lo > hi {
            return Err(SearchError::InvalidBox(format!("lo {lo} > hi {hi}")));
        }
        let max_abs = lo.unsigned_abs().max(hi.unsigned_abs()) as u128;
        let fits = (n as u128)
            .checked_mul(max_abs)
            .and_then(|s| s.checked_pow(n as u32))
            .is_some_and(|bound| bound <= i128::MAX as u128);
        if !fits {
            return Err(SearchError::InvalidBox(format!(
                "entries in [{lo}, {hi}] at order {n} can overflow 128-bit determinants"
            )));
        }
        Ok(Self { n, lo, hi })
    }

    pub fn width(&self) -> u128 {
        (self.hi - self.lo + 1) as u128
    }

    /// Number of vectors in the box, saturating.
    pub fn count(&self) -> u128 {
        self.width().checked_pow(self.n as u32).unwrap_or(u128::MAX)
    }

    fn partitions(&self) -> usize {
        (self.width() * self.width()) as usize
    }

    fn partition_start(&self, part: usize) -> Vec<i64> {
        let w = self.width() as usize;
        let mut a = vec![self.lo; self.n];
        a[0] = self.lo + (part % w) as i64;
        a[1] = self.lo + (part / w) as i64;
        a
    }

    /// Global index of the `offset`-th vector of partition `part`.
    fn global_index(&self, part: usize, offset: u128) -> u128 {
        offset * self.partitions() as u128 + part as u128
    }

    /// Vector at a global index.
    pub fn vector_at(&self, mut index: u128) -> Vec<i64> {
        let w = self.width();
        (0..self.n)
            .map(|_| {
                let digit = index % w;
                index /= w;
                self.lo + digit as i64
            })
            .collect()
    }

    /// Advances `a` to the next vector of the same partition.
    fn step(&self, a: &mut [i64]) -> bool {
        for x in &mut a[2..] {
            if *x < self.hi {
                *x += 1;
                return true;
            }
            *x = self.lo;
        }
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_work: u128,
    /// Permit order-16 boxes with entries outside `[-2, 2]`.
    pub allow_large_entries: bool,
    /// Worker threads; `Some(1)` is the sequential path.
    pub jobs: Option<usize>,
    /// Every this many vectors per partition, the fast determinant is
    /// re-checked against Bareiss elimination.
    pub cross_check_every: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { max_work: DEFAULT_MAX_WORK, allow_large_entries: false, jobs: None, cross_check_every: 100_000 }
    }
}

impl SearchConfig {
    fn admit(&self, bx: &SearchBox) -> Result<(), SearchError> {
        if bx.n == 16 && (bx.lo < -ORDER16_ENTRY_LIMIT || bx.hi > ORDER16_ENTRY_LIMIT) && !self.allow_large_entries {
            return Err(SearchError::EntriesNeedOverride);
        }
        Ok(())
    }

    fn admit_full(&self, bx: &SearchBox) -> Result<(), SearchError> {
        self.admit(bx)?;
        if bx.count() > self.max_work {
            return Err(SearchError::BudgetExceeded { count: bx.count(), budget: self.max_work });
        }
        Ok(())
    }
}

/// Per-partition accumulator. Partitions are merged in partition order;
/// `index` is the vector's global position in the box.
pub trait Visitor: Send + Sized {
    fn visit(&mut self, index: u128, v: &[i64], det: i128);
    fn merge(&mut self, later: Self);
}

/// Circulant determinant of an order-2/4/8/16 vector whose box passed
/// [`SearchBox::new`].
#[inline]
pub fn det_fast(a: &[i64]) -> i128 {
    let mut buf = [0i128; 16];
    for (dst, &src) in buf.iter_mut().zip(a) {
        *dst = src as i128;
    }
    det_folded(&buf[..a.len()])
}

fn cross_check(a: &[i64], fast: i128) -> Result<(), SearchError> {
    let bareiss = det_bareiss(&CoeffVector::from_i64s(a));
    if bareiss != BigInt::from(fast) {
        return Err(SearchError::CrossCheckFailed { vector: a.to_vec(), fast: BigInt::from(fast), bareiss });
    }
    Ok(())
}

fn run_partition<V: Visitor>(bx: &SearchBox, cfg: &SearchConfig, part: usize, visitor: &mut V) -> Result<(), SearchError> {
    let mut a = bx.partition_start(part);
    let every = cfg.cross_check_every.max(1);
    let mut counter = 0u64;
    loop {
        let det = det_fast(&a);
        if counter.is_multiple_of(every) {
            cross_check(&a, det)?;
        }
        visitor.visit(bx.global_index(part, counter as u128), &a, det);
        counter += 1;
        if !bx.step(&mut a) {
            return Ok(());
        }
    }
}

fn enumerate_impl<V, F>(bx: &SearchBox, cfg: &SearchConfig, make: F, parallel: bool) -> Result<V, SearchError>
where
    V: Visitor,
    F: Fn() -> V + Sync,
{
    cfg.admit_full(bx)?;
    let parts = parallel::map_range_with(parallel, bx.partitions(), |part| {
        let mut v = make();
        run_partition(bx, cfg, part, &mut v).map(|_| v)
    });
    let mut merged: Option<V> = None;
    for part in parts {
        let part = part?;
        match merged.as_mut() {
            None => merged = Some(part),
            Some(acc) => acc.merge(part),
        }
    }
    Ok(merged.expect("a valid box has at least one partition"))
}

/// Visits every vector of the box, one fresh visitor per partition, and
/// returns the visitors merged in partition order.
pub fn enumerate<V, F>(bx: &SearchBox, cfg: &SearchConfig, make: F) -> Result<V, SearchError>
where
    V: Visitor,
    F: Fn() -> V + Sync + Send,
{
    parallel::with_jobs(cfg.jobs, |par| enumerate_impl(bx, cfg, make, par))
}

/// Single-threaded [`enumerate`], regardless of features.
pub fn enumerate_sequential<V, F>(bx: &SearchBox, cfg: &SearchConfig, make: F) -> Result<V, SearchError>
where
    V: Visitor,
    F: Fn() -> V + Sync,
{
    enumerate_impl(bx, cfg, make, false)
}

enum PartitionHit {
    /// Offset within the partition and the vector.
    Found(u128, Vec<i64>),
    Exhausted,
    /// Stopped at the budget; the offset where it stopped.
    OverBudget(u128),
}

/// The first vector in enumeration order with determinant `target`.
///
/// `max_work` caps how far into the enumeration order the search may go;
/// reaching the cap before a hit is [`SearchError::BudgetExceeded`].
/// `Ok(None)` means the whole box was searched.
pub fn find_value(target: &BigInt, bx: &SearchBox, cfg: &SearchConfig) -> Result<Option<Vec<i64>>, SearchError> {
    cfg.admit(bx)?;
    let Ok(target) = i128::try_from(target) else {
        // out of range for every vector the box admits
        return Ok(None);
    };
    // Smallest global index of a hit so far; partitions stop once past it.
    let best = SharedMin::new();
    let parts = bx.partitions();
    let every = cfg.cross_check_every.max(1);
    let search = |part: usize| -> Result<PartitionHit, SearchError> {
        let mut a = bx.partition_start(part);
        let mut offset = 0u128;
        loop {
            let index = bx.global_index(part, offset);
            if index >= cfg.max_work {
                return Ok(PartitionHit::OverBudget(offset));
            }
            if offset.is_multiple_of(4096) && best.get() < index {
                // a hit with a smaller index exists; nothing here can win
                return Ok(PartitionHit::OverBudget(offset));
            }
            let det = det_fast(&a);
            if (offset as u64).is_multiple_of(every) {
                cross_check(&a, det)?;
            }
            if det == target {
                best.fetch_min(index);
                return Ok(PartitionHit::Found(offset, a));
            }
            offset += 1;
            if !bx.step(&mut a) {
                return Ok(PartitionHit::Exhausted);
            }
        }
    };
    let results = parallel::with_jobs(cfg.jobs, |par| parallel::map_range_with(par, parts, search));
    let mut first: Option<(u128, Vec<i64>)> = None;
    let mut cut: Option<u128> = None;
    for (part, r) in results.into_iter().enumerate() {
        match r? {
            PartitionHit::Found(off, a) => {
                let index = bx.global_index(part, off);
                if first.as_ref().is_none_or(|(i, _)| index < *i) {
                    first = Some((index, a));
                }
            }
            PartitionHit::Exhausted => {}
            PartitionHit::OverBudget(off) => {
                let index = bx.global_index(part, off);
                cut = Some(cut.map_or(index, |c| c.min(index)));
            }
        }
    }
    match (first, cut) {
        // every index below the cut was searched in every partition
        (Some((index, a)), Some(c)) if index < c => Ok(Some(a)),
        (Some((_, a)), None) => Ok(Some(a)),
        (_, Some(_)) => Err(SearchError::BudgetExceeded { count: bx.count(), budget: cfg.max_work }),
        (None, None) => Ok(None),
    }
}

/// Running minimum shared between partitions.
struct SharedMin(Mutex<u128>);

impl SharedMin {
    fn new() -> Self {
        Self(Mutex::new(u128::MAX))
    }

    fn get(&self) -> u128 {
        *self.0.lock().expect("poisoned")
    }

    fn fetch_min(&self, v: u128) {
        let mut g = self.0.lock().expect("poisoned");
        *g = (*g).min(v);
    }
}

/// Attained determinant values with the first attaining vector of each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumReport {
    pub bx: SearchBox,
    pub vectors: u128,
    pub witnesses: BTreeMap<i128, Vec<i64>>,
}

impl SpectrumReport {
    pub fn values(&self) -> impl Iterator<Item = i128> + '_ {
        self.witnesses.keys().copied()
    }

    pub fn contains(&self, v: i128) -> bool {
        self.witnesses.contains_key(&v)
    }
}

/// First global index attaining each value.
#[derive(Default)]
struct SpectrumVisitor {
    first: HashMap<i128, u128>,
    vectors: u128,
}

impl Visitor for SpectrumVisitor {
    #[inline]
    fn visit(&mut self, index: u128, _: &[i64], det: i128) {
        self.vectors += 1;
        self.first.entry(det).or_insert(index);
    }

    fn merge(&mut self, later: Self) {
        self.vectors += later.vectors;
        for (det, index) in later.first {
            let slot = self.first.entry(det).or_insert(index);
            *slot = (*slot).min(index);
        }
    }
}

impl SpectrumVisitor {
    fn into_report(self, bx: &SearchBox) -> SpectrumReport {
        let witnesses = self.first.into_iter().map(|(det, i)| (det, bx.vector_at(i))).collect();
        SpectrumReport { bx: *bx, vectors: self.vectors, witnesses }
    }
}

pub fn spectrum(bx: &SearchBox, cfg: &SearchConfig) -> Result<SpectrumReport, SearchError> {
    Ok(enumerate(bx, cfg, SpectrumVisitor::default)?.into_report(bx))
}

pub fn spectrum_sequential(bx: &SearchBox, cfg: &SearchConfig) -> Result<SpectrumReport, SearchError> {
    Ok(enumerate_sequential(bx, cfg, SpectrumVisitor::default)?.into_report(bx))
}

/// Membership in the known value sets for orders 2, 4, 8:
/// `ℤ_odd ∪ 4ℤ`, `ℤ_odd ∪ 16ℤ`, `ℤ_odd ∪ 32ℤ`. `None` for other orders.
pub fn in_known_set(n: usize, v: i128) -> Option<bool> {
    let modulus = match n {
        2 => 4,
        4 => 16,
        8 => 32,
        _ => return None,
    };
    Some(v % 2 != 0 || v % modulus == 0)
}
