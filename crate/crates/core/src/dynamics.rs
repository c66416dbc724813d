//! Lateral-inhibition activity transfer, center extraction and nearest-center assignment.
//!
//! Each step updates every active neuron synchronously,
//!
//! ```text
//! s_i <- s_i + alpha * sum_j w_ij * (s_i - s_j)      (j active, j != i)
//! ```
//!
//! then removes every neuron whose new activity is negative. The process stops once no
//! two active neurons are coupled. Exactly balanced coupled neurons form a fixed point of
//! the update; when a step moves no activity by more than `stagnation_eps`, each connected
//! group of coupled neurons keeps only its strongest member (current activity, then
//! initial activity, then lowest index; activities within [`tie_tolerance`] are tied).

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{build_weights, DistanceMatrix, InteractionWeights};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsConfig<S> {
    /// Transfer speed. Large values clip neurons aggressively and can change the outcome.
    pub alpha: S,
    pub max_iters: usize,
    /// Absolute per-neuron activity change at or below which a step counts as stalled.
    pub stagnation_eps: S,
}

impl<S: Scalar> Default for DynamicsConfig<S> {
    fn default() -> Self {
        Self { alpha: S::lit(0.05), max_iters: 100_000, stagnation_eps: S::lit(1e-12) }
    }
}

impl<S: Scalar> DynamicsConfig<S> {
    pub fn with_alpha(mut self, alpha: S) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > S::zero()) || !self.alpha.is_finite() {
            return Err(Error::param(format!("alpha must be positive and finite, got {}", self.alpha)));
        }
        if self.max_iters == 0 {
            return Err(Error::param("max_iters must be at least 1"));
        }
        if !(self.stagnation_eps >= S::zero()) {
            return Err(Error::param(format!(
                "stagnation_eps must be >= 0, got {}",
                self.stagnation_eps
            )));
        }
        Ok(())
    }
}

/// Neuron activities at one instant of the transfer process.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityState<S> {
    s: Vec<S>,
    active: Vec<bool>,
    iter: usize,
}

impl<S: Scalar> ActivityState<S> {
    /// Arbitrary state, mainly for driving [`step`] directly.
    pub fn new(s: Vec<S>, active: Vec<bool>) -> Result<Self> {
        if s.len() != active.len() {
            return Err(Error::param("activity and mask lengths differ"));
        }
        for (i, (&v, &a)) in s.iter().zip(&active).enumerate() {
            if !v.is_finite() || v < S::zero() || (!a && v != S::zero()) {
                return Err(Error::InvalidInput {
                    row: i,
                    col: 0,
                    msg: format!("activity {v} (active: {a}) violates state invariants"),
                });
            }
        }
        Ok(Self { s, active, iter: 0 })
    }

    pub fn activities(&self) -> &[S] {
        &self.s
    }

    pub fn active(&self) -> &[bool] {
        &self.active
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.active[i]
    }

    pub fn iter(&self) -> usize {
        self.iter
    }

    pub fn live_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    /// Sum of the activities of active neurons.
    pub fn total_activity(&self) -> S {
        self.s
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .fold(S::zero(), |acc, (&v, _)| acc + v)
    }

    pub fn active_indices(&self) -> Vec<usize> {
        self.active.iter().enumerate().filter(|(_, &a)| a).map(|(i, _)| i).collect()
    }
}

/// Partition produced at a single threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult<S> {
    pub t: S,
    pub alpha: S,
    pub k: usize,
    /// Object indices of the surviving neurons, ascending.
    pub centers: Vec<usize>,
    /// Position in `centers` of each object's class.
    pub labels: Vec<usize>,
    pub class_sizes: Vec<usize>,
    pub iters: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicsOutcome {
    pub centers: Vec<usize>,
    pub iters: usize,
    /// How many times the stalled-group survivor rule had to fire.
    pub stagnation_resolutions: usize,
}

/// Initial activity of each neuron: the full row sum of its weights, diagonal included.
pub fn init_activities<S: Scalar>(w: &InteractionWeights<S>) -> ActivityState<S> {
    let n = w.n();
    let s = (0..n).map(|i| w.row(i).iter().fold(S::zero(), |acc, &v| acc + v)).collect();
    ActivityState { s, active: vec![true; n], iter: 0 }
}

#[inline]
fn transfer<S: Scalar>(si: S, alpha: S, coupled: impl Iterator<Item = (S, S)>) -> S {
    let flow = coupled.fold(S::zero(), |acc, (wij, sj)| acc + wij * (si - sj));
    si + alpha * flow
}

/// One synchronous transfer step over the active neurons.
///
/// Returns the new state and the indices clipped (and deactivated) by this step.
#[allow(clippy::needless_range_loop)]
pub fn step<S: Scalar>(
    state: &ActivityState<S>,
    w: &InteractionWeights<S>,
    cfg: &DynamicsConfig<S>,
) -> (ActivityState<S>, Vec<usize>) {
    let n = state.s.len();
    let mut s = vec![S::zero(); n];
    let mut active = state.active.clone();
    let mut clipped = Vec::new();
    for i in 0..n {
        if !state.active[i] {
            continue;
        }
        let row = w.row(i);
        let coupled = (0..n)
            .filter(|&j| j != i && state.active[j] && row[j] > S::zero())
            .map(|j| (row[j], state.s[j]));
        s[i] = transfer(state.s[i], cfg.alpha, coupled);
    }
    for i in 0..n {
        if active[i] && s[i] < S::zero() {
            s[i] = S::zero();
            active[i] = false;
            clipped.push(i);
        }
    }
    (ActivityState { s, active, iter: state.iter + 1 }, clipped)
}

/// Relative gap below which two activities count as tied in the survivor rule.
///
/// Symmetric configurations produce activities that differ only by rounding; those must
/// fall through to the index tie-break so the chosen survivor does not depend on it.
pub fn tie_tolerance<S: Scalar>() -> S {
    S::lit(1e-9).max(S::lit(1024.0) * S::epsilon())
}

fn tie_aware_cmp<S: Scalar>(a: S, b: S) -> Ordering {
    if (a - b).abs() <= tie_tolerance::<S>() * a.abs().max(b.abs()) {
        Ordering::Equal
    } else {
        a.partial_cmp(&b).unwrap_or(Ordering::Equal)
    }
}

/// Neighbour-list form of the process used by [`run_dynamics`].
///
/// Sums run over the same neighbours in the same ascending order as [`step`], so both
/// produce bit-identical trajectories.
struct Engine<S> {
    state: ActivityState<S>,
    initial: Vec<S>,
    neighbours: Vec<Vec<(usize, S)>>,
    scratch: Vec<S>,
}

impl<S: Scalar> Engine<S> {
    fn new(w: &InteractionWeights<S>) -> Self {
        let state = init_activities(w);
        let n = w.n();
        let neighbours = (0..n)
            .map(|i| {
                w.row(i)
                    .iter()
                    .enumerate()
                    .filter(|&(j, &v)| j != i && v > S::zero())
                    .map(|(j, &v)| (j, v))
                    .collect()
            })
            .collect();
        Self { initial: state.s.clone(), state, neighbours, scratch: vec![S::zero(); n] }
    }

    fn interacting(&self) -> bool {
        // neighbour lists only ever hold active neurons
        self.neighbours.iter().any(|l| !l.is_empty())
    }

    /// Advances one step; returns the largest activity change and whether anything clipped.
    fn step(&mut self, alpha: S) -> (S, bool) {
        let ActivityState { s, active, iter } = &mut self.state;
        for (i, nb) in self.neighbours.iter().enumerate() {
            self.scratch[i] = if active[i] {
                transfer(s[i], alpha, nb.iter().map(|&(j, wij)| (wij, s[j])))
            } else {
                S::zero()
            };
        }
        let mut max_change = S::zero();
        let mut clipped = false;
        for i in 0..s.len() {
            if !active[i] {
                continue;
            }
            let new = self.scratch[i];
            max_change = max_change.max((new - s[i]).abs());
            if new < S::zero() {
                s[i] = S::zero();
                active[i] = false;
                clipped = true;
            } else {
                s[i] = new;
            }
        }
        *iter += 1;
        if clipped {
            self.prune();
        }
        (max_change, clipped)
    }

    fn prune(&mut self) {
        let active = &self.state.active;
        for (i, nb) in self.neighbours.iter_mut().enumerate() {
            if active[i] {
                nb.retain(|&(j, _)| active[j]);
            } else {
                nb.clear();
            }
        }
    }

    fn stronger(&self, a: usize, b: usize) -> bool {
        let by_current = tie_aware_cmp(self.state.s[a], self.state.s[b]);
        let by_initial = tie_aware_cmp(self.initial[a], self.initial[b]);
        by_current.then(by_initial).then(b.cmp(&a)) == Ordering::Greater
    }

    /// Keeps the strongest neuron of every connected group of coupled active neurons.
    fn resolve_stagnation(&mut self) {
        let n = self.state.s.len();
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        for root in 0..n {
            if seen[root] || self.neighbours[root].is_empty() {
                continue;
            }
            seen[root] = true;
            stack.push(root);
            let mut members = Vec::new();
            while let Some(i) = stack.pop() {
                members.push(i);
                for &(j, _) in &self.neighbours[i] {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            let best = members
                .iter()
                .copied()
                .reduce(|a, b| if self.stronger(b, a) { b } else { a })
                .expect("component is non-empty");
            for i in members {
                if i != best {
                    self.state.s[i] = S::zero();
                    self.state.active[i] = false;
                }
            }
        }
        self.prune();
    }
}

/// Runs the transfer process until no two active neurons are coupled.
///
/// Centers are the surviving neurons in ascending index order.
pub fn run_dynamics<S: Scalar>(w: &InteractionWeights<S>, cfg: &DynamicsConfig<S>) -> Result<DynamicsOutcome> {
    cfg.validate()?;
    let mut engine = Engine::new(w);
    let mut stagnation_resolutions = 0;
    while engine.interacting() {
        if engine.state.iter >= cfg.max_iters {
            return Err(Error::NonConvergence { iters: engine.state.iter, live: engine.state.live_count() });
        }
        let (max_change, clipped) = engine.step(cfg.alpha);
        if !clipped && max_change <= cfg.stagnation_eps {
            engine.resolve_stagnation();
            stagnation_resolutions += 1;
        }
    }
    Ok(DynamicsOutcome {
        centers: engine.state.active_indices(),
        iters: engine.state.iter,
        stagnation_resolutions,
    })
}

/// Labels every object with the position of its nearest center.
///
/// Distance ties go to the lowest center index; a center always labels itself.
pub fn assign_to_centers<S: Scalar>(dm: &DistanceMatrix<S>, centers: &[usize]) -> Result<Vec<usize>> {
    let n = dm.n();
    if centers.is_empty() {
        return Err(Error::param("at least one center is required"));
    }
    let mut own = vec![usize::MAX; n];
    for (pos, &c) in centers.iter().enumerate() {
        if c >= n {
            return Err(Error::param(format!("center index {c} out of range for {n} objects")));
        }
        if own[c] != usize::MAX {
            return Err(Error::param(format!("center {c} listed twice")));
        }
        own[c] = pos;
    }
    let labels = (0..n)
        .map(|j| {
            if own[j] != usize::MAX {
                return own[j];
            }
            let row = dm.row(j);
            let mut best = 0;
            for pos in 1..centers.len() {
                let (c, b) = (centers[pos], centers[best]);
                if row[c] < row[b] || (row[c] == row[b] && c < b) {
                    best = pos;
                }
            }
            best
        })
        .collect();
    Ok(labels)
}

/// Full pipeline at threshold `t`: weights, initial activities, transfer, assignment.
pub fn cluster_at_threshold<S: Scalar>(
    dm: &DistanceMatrix<S>,
    t: S,
    cfg: &DynamicsConfig<S>,
) -> Result<ClusteringResult<S>> {
    let w = build_weights(dm, t)?;
    let outcome = run_dynamics(&w, cfg)?;
    let labels = assign_to_centers(dm, &outcome.centers)?;
    let k = outcome.centers.len();
    let mut class_sizes = vec![0; k];
    for &l in &labels {
        class_sizes[l] += 1;
    }
    Ok(ClusteringResult {
        t,
        alpha: cfg.alpha,
        k,
        centers: outcome.centers,
        labels,
        class_sizes,
        iters: outcome.iters,
    })
}
