//! Capacity-achieving selected-node distributions and cluster orders.
//!
//! The vertical order repairs clusters round-robin so that every newcomer
//! sees as many foreign predecessors as possible early on; the horizontal
//! selection fills whole clusters first.  Together they minimise the cut over
//! all graphs with no separate selected node, and with at most one separate
//! node once its position is fixed.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::mincut::{profile_unchecked, ClusterOrder, SelectedDistribution};
use crate::params::{validate, RepairParams, SystemParams};
use crate::rational::{self, Rational};

/// Minimum cut value together with the graph that attains it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityResult {
    #[serde(with = "rational::as_num_den")]
    pub capacity: Rational,
    pub argmin_s: SelectedDistribution,
    pub argmin_pi: ClusterOrder,
    /// 1-indexed position of the separate selected node when `s_0 = 1`.
    pub separate_position: Option<usize>,
    /// `false` when distributions with `s_0 ≥ 2` exist but were not searched,
    /// so the value is only known to be an upper bound on the capacity.
    pub complete: bool,
}

/// Round-robin cluster order.
///
/// Separate positions (1-indexed) receive `0` and leave the cluster cursor in
/// place; every other position takes the next cluster, cyclically, that still
/// has quota, skipping exhausted clusters.
pub fn vertical_order(s: &SelectedDistribution, separate_positions: &[usize]) -> Result<ClusterOrder, Error> {
    let k = s.total();
    let mut is_separate = vec![false; k];
    for &p in separate_positions {
        if p == 0 || p > k {
            return Err(Error::InvalidSeparatePositions(format!("position {p} outside 1..={k}")));
        }
        if std::mem::replace(&mut is_separate[p - 1], true) {
            return Err(Error::InvalidSeparatePositions(format!("position {p} given twice")));
        }
    }
    if separate_positions.len() != s.separate() {
        return Err(Error::InvalidSeparatePositions(format!(
            "{} positions given for s_0 = {}",
            separate_positions.len(),
            s.separate()
        )));
    }

    let mut quota = s.counts()[1..].to_vec();
    let clusters = quota.len();
    let mut cursor = 0usize;
    let mut out = Vec::with_capacity(k);
    for &separate in &is_separate {
        if separate {
            out.push(0);
            continue;
        }
        // Σ quota equals the number of remaining cluster positions, so some
        // cluster still has quota here.
        while quota[cursor] == 0 {
            cursor = (cursor + 1) % clusters;
        }
        out.push(cursor + 1);
        quota[cursor] -= 1;
        cursor = (cursor + 1) % clusters;
    }
    Ok(ClusterOrder::new(out))
}

/// Greedy fill: whole clusters of `R`, then the remainder, then zeros.
pub fn horizontal_selection(sys: &SystemParams, s0: usize) -> Result<SelectedDistribution, Error> {
    sys.check()?;
    if s0 > sys.separate {
        return Err(Error::NoDistribution { s0, reason: format!("s_0 exceeds S = {}", sys.separate) });
    }
    if s0 > sys.k || sys.k - s0 > sys.cluster_nodes() {
        return Err(Error::NoDistribution {
            s0,
            reason: format!("k − s_0 exceeds L·R = {}", sys.cluster_nodes()),
        });
    }
    let mut remaining = sys.k - s0;
    let mut counts = Vec::with_capacity(sys.clusters + 1);
    counts.push(s0);
    for _ in 0..sys.clusters {
        let take = remaining.min(sys.cluster_size);
        counts.push(take);
        remaining -= take;
    }
    SelectedDistribution::new(sys, counts)
}

fn evaluate(rep: &RepairParams, s: SelectedDistribution, pi: ClusterOrder, complete: bool) -> CapacityResult {
    let capacity = profile_unchecked(rep, &pi).mc;
    let separate_position = match pi.separate_positions().as_slice() {
        [j] => Some(*j),
        _ => None,
    };
    CapacityResult { capacity, argmin_s: s, argmin_pi: pi, separate_position, complete }
}

/// Minimum cut over all graphs whose selected nodes are all cluster nodes.
pub fn capacity_no_separate(sys: &SystemParams, rep: &RepairParams) -> Result<CapacityResult, Error> {
    validate(sys, rep).into_result()?;
    let s = horizontal_selection(sys, 0)?;
    let pi = vertical_order(&s, &[])?;
    Ok(evaluate(rep, s, pi, sys.separate == 0))
}

/// Minimum cut over all graphs with exactly one separate selected node,
/// searching every position of that node.
pub fn capacity_one_separate(sys: &SystemParams, rep: &RepairParams) -> Result<CapacityResult, Error> {
    validate(sys, rep).into_result()?;
    if sys.separate == 0 {
        return Err(Error::NoDistribution { s0: 1, reason: "system has no separate nodes".into() });
    }
    let s = horizontal_selection(sys, 1)?;
    let mut best: Option<CapacityResult> = None;
    for j in 1..=sys.k {
        let pi = vertical_order(&s, &[j])?;
        let candidate = evaluate(rep, s.clone(), pi, false);
        if best.as_ref().is_none_or(|b| candidate.capacity < b.capacity) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("k ≥ 1 positions searched"))
}

/// System capacity over distributions with `s_0 ∈ {0, 1}`.
///
/// Ties go to the lexicographically smallest distribution, then the earliest
/// separate position.  With `S ≥ 2` the result is marked incomplete.
pub fn capacity(sys: &SystemParams, rep: &RepairParams) -> Result<CapacityResult, Error> {
    validate(sys, rep).into_result()?;
    let complete = sys.separate <= 1;
    let mut candidates = Vec::new();
    if sys.k <= sys.cluster_nodes() {
        candidates.push(capacity_no_separate(sys, rep)?);
    }
    if sys.separate >= 1 && sys.k - 1 <= sys.cluster_nodes() {
        candidates.push(capacity_one_separate(sys, rep)?);
    }
    let mut best = candidates
        .into_iter()
        .reduce(|best, c| if c.capacity < best.capacity { c } else { best })
        .ok_or_else(|| {
            Error::NoClosedForm(format!(
                "k = {} needs at least {} separate selected nodes",
                sys.k,
                sys.k - sys.cluster_nodes()
            ))
        })?;
    best.complete = complete;
    Ok(best)
}

/// The `(s, π)` pairs the closed form compares, independent of `α` and the
/// β values: the all-cluster optimum and one candidate per separate position.
pub fn closed_form_candidates(sys: &SystemParams) -> Result<Vec<(SelectedDistribution, ClusterOrder)>, Error> {
    sys.check()?;
    let mut out = Vec::new();
    if sys.k <= sys.cluster_nodes() {
        let s = horizontal_selection(sys, 0)?;
        let pi = vertical_order(&s, &[])?;
        out.push((s, pi));
    }
    if sys.separate >= 1 && sys.k - 1 <= sys.cluster_nodes() {
        let s = horizontal_selection(sys, 1)?;
        for j in 1..=sys.k {
            let pi = vertical_order(&s, &[j])?;
            out.push((s.clone(), pi));
        }
    }
    if out.is_empty() {
        return Err(Error::NoClosedForm(format!("k = {} exceeds L·R + 1", sys.k)));
    }
    Ok(out)
}
