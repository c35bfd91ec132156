//! Closed-form min-cut of an information flow graph for a selected-node
//! distribution and a cluster order.
//!
//! Positions are 1-indexed in the mathematical description and 0-indexed in
//! the vectors below.  For the `i`-th repaired node (1-indexed):
//!
//! * cluster node: `a_i = d_I + 1 − h(i)`, `b_i = max(d_C − (i − h(i)), 0)`,
//!   `w_i = a_i·β_I + b_i·β_C`;
//! * separate node: `c_i = d − (i − 1)`, `w_i = c_i·β_S`;
//!
//! and `MC = Σ min(w_i, α)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::params::{validate, RepairParams, SystemParams};
use crate::rational::{self, int, Rational};

/// Selected nodes per pool: index 0 is the separate pool, `1..=L` the clusters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SelectedDistribution(Vec<usize>);

impl SelectedDistribution {
    /// Validate against the system: clusters non-increasing and at most `R`,
    /// `s_0 ≤ S`, and the total equals `k`.
    pub fn new(sys: &SystemParams, counts: Vec<usize>) -> Result<Self, Error> {
        if counts.len() != sys.clusters + 1 {
            return Err(Error::InvalidDistribution(format!(
                "expected {} entries (s_0..s_L), got {}",
                sys.clusters + 1,
                counts.len()
            )));
        }
        if counts[0] > sys.separate {
            return Err(Error::InvalidDistribution(format!(
                "s_0 = {} exceeds S = {}",
                counts[0], sys.separate
            )));
        }
        if let Some(c) = counts[1..].iter().find(|&&c| c > sys.cluster_size) {
            return Err(Error::InvalidDistribution(format!(
                "cluster count {c} exceeds R = {}",
                sys.cluster_size
            )));
        }
        if counts[1..].windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidDistribution(format!(
                "cluster counts {:?} are not non-increasing",
                &counts[1..]
            )));
        }
        let total: usize = counts.iter().sum();
        if total != sys.k {
            return Err(Error::InvalidDistribution(format!("counts sum to {total}, expected k = {}", sys.k)));
        }
        Ok(Self(counts))
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn separate(&self) -> usize {
        self.0[0]
    }

    pub fn clusters(&self) -> usize {
        self.0.len() - 1
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of distinct cluster orders, `k! / Π s_i!`.
    pub fn order_count(&self) -> u128 {
        let mut count: u128 = 1;
        let mut placed: u128 = 0;
        for &c in &self.0 {
            for j in 1..=c as u128 {
                placed += 1;
                count = count * placed / j;
            }
        }
        count
    }
}

impl fmt::Display for SelectedDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Repair sequence of the selected nodes as pool indices (`0` = separate).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClusterOrder(Vec<usize>);

impl ClusterOrder {
    pub fn new(pools: Vec<usize>) -> Self {
        Self(pools)
    }

    pub fn pools(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-indexed positions holding separate nodes.
    pub fn separate_positions(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &p)| p == 0)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Whether this order is a member of `Π(s)`.
    pub fn matches(&self, s: &SelectedDistribution) -> Result<(), Error> {
        let mut seen = vec![0usize; s.counts().len()];
        for &p in &self.0 {
            if p >= seen.len() {
                return Err(Error::OrderMismatch(format!(
                    "pool index {p} out of range 0..={}",
                    seen.len() - 1
                )));
            }
            seen[p] += 1;
        }
        if seen != s.counts() {
            return Err(Error::OrderMismatch(format!(
                "order {self} has pool counts {seen:?}, distribution is {s}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ClusterOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, items: &[usize]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// Per-position coefficients and part incoming weights for one `(s, π)`.
///
/// `a` and `b` are `None` at separate positions, `c` is `None` at cluster
/// positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutProfile {
    pub h: Vec<usize>,
    pub a: Vec<Option<usize>>,
    pub b: Vec<Option<usize>>,
    pub c: Vec<Option<usize>>,
    #[serde(with = "rational::vec_as_fraction")]
    pub w: Vec<Rational>,
    #[serde(with = "rational::as_fraction")]
    pub mc: Rational,
}

impl CutProfile {
    /// `Σ min(w_i, α)` for an arbitrary storage value.
    pub fn mc_at(&self, alpha: Rational) -> Rational {
        rational::sum(self.w.iter().map(|&w| rational::min(w, alpha)))
    }
}

/// `h(i) = #{j ≤ i : π_j = π_i}` for every position.
pub fn relative_locations(pi: &ClusterOrder) -> Vec<usize> {
    let max = pi.pools().iter().copied().max().unwrap_or(0);
    let mut seen = vec![0usize; max + 1];
    pi.pools()
        .iter()
        .map(|&p| {
            seen[p] += 1;
            seen[p]
        })
        .collect()
}

/// Closed-form cut profile and `MC(s, π)`.
pub fn cut_profile(
    sys: &SystemParams,
    rep: &RepairParams,
    s: &SelectedDistribution,
    pi: &ClusterOrder,
) -> Result<CutProfile, Error> {
    validate(sys, rep).into_result()?;
    pi.matches(s)?;
    Ok(profile_unchecked(rep, pi))
}

/// Profile without validation; callers guarantee `pi ∈ Π(s)` and valid params.
pub(crate) fn profile_unchecked(rep: &RepairParams, pi: &ClusterOrder) -> CutProfile {
    let h = relative_locations(pi);
    let k = pi.len();
    let d = rep.d();
    let mut a = Vec::with_capacity(k);
    let mut b = Vec::with_capacity(k);
    let mut c = Vec::with_capacity(k);
    let mut w = Vec::with_capacity(k);
    for (idx, (&pool, &hi)) in pi.pools().iter().zip(&h).enumerate() {
        let i = idx + 1;
        if pool == 0 {
            let ci = d + 1 - i;
            a.push(None);
            b.push(None);
            c.push(Some(ci));
            w.push(rep.beta_s * int(ci as i64));
        } else {
            let ai = rep.d_i + 1 - hi;
            let bi = rep.d_c.saturating_sub(i - hi);
            a.push(Some(ai));
            b.push(Some(bi));
            c.push(None);
            w.push(rep.beta_i * int(ai as i64) + rep.beta_c * int(bi as i64));
        }
    }
    let mc = rational::sum(w.iter().map(|&wi| rational::min(wi, rep.alpha)));
    CutProfile { h, a, b, c, w, mc }
}

/// Every distribution with first component `s0`, in lexicographic order.
pub fn enumerate_distributions(sys: &SystemParams, s0: usize) -> Result<Vec<SelectedDistribution>, Error> {
    sys.check()?;
    if s0 > sys.separate {
        return Err(Error::NoDistribution {
            s0,
            reason: format!("s_0 exceeds S = {}", sys.separate),
        });
    }
    if s0 > sys.k || sys.k - s0 > sys.cluster_nodes() {
        return Err(Error::NoDistribution {
            s0,
            reason: format!("k − s_0 does not fit into L·R = {} cluster nodes", sys.cluster_nodes()),
        });
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(sys.clusters);
    partitions(sys.k - s0, sys.clusters, sys.cluster_size, &mut current, &mut |parts| {
        let mut counts = Vec::with_capacity(sys.clusters + 1);
        counts.push(s0);
        counts.extend_from_slice(parts);
        out.push(SelectedDistribution(counts));
    });
    out.sort();
    Ok(out)
}

/// Non-increasing sequences of length `slots` with entries `≤ cap` summing to `rest`.
fn partitions(rest: usize, slots: usize, cap: usize, current: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if slots == 0 {
        if rest == 0 {
            emit(current);
        }
        return;
    }
    if rest > cap * slots {
        return;
    }
    for v in 0..=cap.min(rest) {
        current.push(v);
        partitions(rest - v, slots - 1, v, current, emit);
        current.pop();
    }
}

/// Every distinct arrangement of the pool multiset of `s`, each once, in
/// lexicographic order.
pub fn enumerate_orders(s: &SelectedDistribution) -> OrderIter {
    let mut first = Vec::with_capacity(s.total());
    for (pool, &count) in s.counts().iter().enumerate() {
        first.extend(std::iter::repeat_n(pool, count));
    }
    OrderIter { next: Some(first) }
}

/// Iterator returned by [`enumerate_orders`].
#[derive(Debug, Clone)]
pub struct OrderIter {
    next: Option<Vec<usize>>,
}

impl Iterator for OrderIter {
    type Item = ClusterOrder;

    fn next(&mut self) -> Option<ClusterOrder> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(ClusterOrder(current))
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
