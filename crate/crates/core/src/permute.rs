//! Permutation reference models: swap kernels run as Markov chains.
//!
//! A kernel proposes one swap per step. When the proposal violates a
//! constraint the step is *rejected*: the chain stays where it is and the
//! unchanged state counts as the next sample. Retrying until a proposal is
//! accepted would over-weight states with many valid swaps.

use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GroupByIndividual, InteractionEvents, LabeledGraph};
use crate::rng_from_seed;

/// One step of a randomization chain over states of type `State`.
pub trait SwapKernel {
    type State;

    /// Proposes and applies (or rejects) one swap. Returns whether the state
    /// changed hands to a new configuration.
    fn step<R: Rng + ?Sized>(&self, state: &mut Self::State, rng: &mut R) -> Result<bool>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    pub steps: usize,
    #[serde(default = "default_thin")]
    pub thin: usize,
    pub seed: u64,
}

fn default_burn_in() -> usize {
    500
}

fn default_thin() -> usize {
    10
}

impl ChainConfig {
    pub fn new(burn_in: usize, steps: usize, thin: usize, seed: u64) -> Result<Self> {
        let c = ChainConfig { burn_in, steps, thin, seed };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.thin == 0 {
            return Err(Error::config("thinning interval must be at least 1"));
        }
        if self.steps < self.thin {
            return Err(Error::config(format!(
                "steps ({}) must be at least the thinning interval ({})",
                self.steps, self.thin
            )));
        }
        Ok(())
    }

    pub fn samples(&self) -> usize {
        self.steps / self.thin
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainResult {
    /// Statistic recorded every `thin` steps after burn-in.
    pub series: Vec<f64>,
    /// Accepted proposals during the sampling phase.
    pub accepted: usize,
    /// Statistic after every sampling step, when requested.
    pub trace: Option<Vec<f64>>,
}

/// Runs `burn_in` discarded steps, then `steps` steps recording
/// `stat(state)` every `thin` steps.
pub fn run_chain<K, F>(
    initial: K::State,
    kernel: &K,
    cfg: &ChainConfig,
    stat: F,
    keep_trace: bool,
) -> Result<ChainResult>
where
    K: SwapKernel,
    F: FnMut(&K::State) -> Result<f64>,
{
    run_chain_with_state(initial, kernel, cfg, stat, keep_trace).map(|(r, _)| r)
}

/// [`run_chain`] that also hands back the final state.
pub fn run_chain_with_state<K, F>(
    initial: K::State,
    kernel: &K,
    cfg: &ChainConfig,
    mut stat: F,
    keep_trace: bool,
) -> Result<(ChainResult, K::State)>
where
    K: SwapKernel,
    F: FnMut(&K::State) -> Result<f64>,
{
    cfg.validate()?;
    let mut rng = rng_from_seed(cfg.seed);
    let mut state = initial;
    for _ in 0..cfg.burn_in {
        kernel.step(&mut state, &mut rng)?;
    }
    let mut series = Vec::with_capacity(cfg.samples());
    let mut trace = keep_trace.then(|| Vec::with_capacity(cfg.steps));
    let mut accepted = 0;
    for i in 1..=cfg.steps {
        if kernel.step(&mut state, &mut rng)? {
            accepted += 1;
        }
        let record = i % cfg.thin == 0;
        if record || trace.is_some() {
            let v = stat(&state)?;
            if let Some(t) = trace.as_mut() {
                t.push(v);
            }
            if record {
                series.push(v);
            }
        }
    }
    Ok((ChainResult { series, accepted, trace }, state))
}

// ---------------------------------------------------------------------------
// node labels

/// Uniformly random relabelling of the network structure against fixed node
/// attributes (rows and columns permuted together).
pub fn permute_node_labels<R: Rng + ?Sized>(g: &LabeledGraph, rng: &mut R) -> LabeledGraph {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(rng);
    g.permute_structure(&perm)
}

/// Every step is an independent full reshuffle.
#[derive(Debug, Clone, Copy, Default)]
pub struct NodeLabelKernel;

impl SwapKernel for NodeLabelKernel {
    type State = LabeledGraph;

    fn step<R: Rng + ?Sized>(&self, state: &mut LabeledGraph, rng: &mut R) -> Result<bool> {
        *state = permute_node_labels(state, rng);
        Ok(true)
    }
}

// ---------------------------------------------------------------------------
// edge direction

/// Exchanges `w_ij` and `w_ji` for a random `i` in `class_a` and `j` in
/// `class_b`.
#[derive(Debug, Clone)]
pub struct EdgeDirectionKernel {
    class_a: Vec<usize>,
    class_b: Vec<usize>,
}

impl EdgeDirectionKernel {
    pub fn new(class_a: Vec<usize>, class_b: Vec<usize>) -> Result<Self> {
        if class_a.is_empty() || class_b.is_empty() {
            return Err(Error::Incompatible("edge direction swap needs two nonempty classes".into()));
        }
        if class_a.iter().any(|a| class_b.contains(a)) {
            return Err(Error::Incompatible("edge direction classes overlap".into()));
        }
        Ok(EdgeDirectionKernel { class_a, class_b })
    }
}

impl SwapKernel for EdgeDirectionKernel {
    type State = LabeledGraph;

    fn step<R: Rng + ?Sized>(&self, g: &mut LabeledGraph, rng: &mut R) -> Result<bool> {
        if !g.is_directed() {
            return Err(Error::Incompatible("edge direction swap on an undirected graph".into()));
        }
        let i = *self.class_a.choose(rng).unwrap();
        let j = *self.class_b.choose(rng).unwrap();
        let w = g.weights_mut();
        let (a, b) = (w.get(i, j), w.get(j, i));
        w.set(i, j, b);
        w.set(j, i, a);
        Ok(true)
    }
}

pub fn edge_direction_step<R: Rng + ?Sized>(
    g: &LabeledGraph,
    class_a: &[usize],
    class_b: &[usize],
    rng: &mut R,
) -> Result<(LabeledGraph, bool)> {
    let k = EdgeDirectionKernel::new(class_a.to_vec(), class_b.to_vec())?;
    let mut out = g.clone();
    let acc = k.step(&mut out, rng)?;
    Ok((out, acc))
}

// ---------------------------------------------------------------------------
// edge weights

/// Exchanges the weights of two random dyads. Directed graphs use ordered
/// dyads; undirected graphs swap unordered dyads so symmetry is kept.
#[derive(Debug, Clone, Copy)]
pub struct EdgeWeightKernel {
    pub nonzero_only: bool,
}

impl Default for EdgeWeightKernel {
    fn default() -> Self {
        EdgeWeightKernel { nonzero_only: true }
    }
}

impl SwapKernel for EdgeWeightKernel {
    type State = LabeledGraph;

    fn step<R: Rng + ?Sized>(&self, g: &mut LabeledGraph, rng: &mut R) -> Result<bool> {
        let n = g.n();
        let directed = g.is_directed();
        let mut eligible = Vec::new();
        for i in 0..n {
            let start = if directed { 0 } else { i + 1 };
            for j in start..n {
                if i != j && (!self.nonzero_only || g.weight(i, j) != 0.0) {
                    eligible.push((i, j));
                }
            }
        }
        if eligible.len() < 2 {
            return Err(Error::data(format!(
                "edge weight swap needs two eligible dyads, found {}",
                eligible.len()
            )));
        }
        let d1 = rng.random_range(0..eligible.len());
        let d2 = rng.random_range(0..eligible.len());
        if d1 == d2 {
            return Ok(false);
        }
        let ((i1, j1), (i2, j2)) = (eligible[d1], eligible[d2]);
        let w = g.weights_mut();
        let (a, b) = (w.get(i1, j1), w.get(i2, j2));
        w.set(i1, j1, b);
        w.set(i2, j2, a);
        if !directed {
            w.set(j1, i1, b);
            w.set(j2, i2, a);
        }
        Ok(true)
    }
}

pub fn edge_weight_step<R: Rng + ?Sized>(
    g: &LabeledGraph,
    nonzero_only: bool,
    rng: &mut R,
) -> Result<(LabeledGraph, bool)> {
    let mut out = g.clone();
    let acc = EdgeWeightKernel { nonzero_only }.step(&mut out, rng)?;
    Ok((out, acc))
}

// ---------------------------------------------------------------------------
// endpoint rewiring

/// Moves a random directed edge `(a, b)` to `(a, c)`. Keeps out-degrees,
/// not in-degrees.
#[derive(Debug, Clone, Copy, Default)]
pub struct EndpointRewireKernel;

impl SwapKernel for EndpointRewireKernel {
    type State = LabeledGraph;

    fn step<R: Rng + ?Sized>(&self, g: &mut LabeledGraph, rng: &mut R) -> Result<bool> {
        if !g.is_directed() {
            return Err(Error::Incompatible("endpoint rewiring needs a directed graph".into()));
        }
        let n = g.n();
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| g.weight(i, j) != 0.0)
            .collect();
        if edges.is_empty() {
            return Err(Error::data("endpoint rewiring on a graph without edges"));
        }
        let (a, b) = edges[rng.random_range(0..edges.len())];
        // uniform over nodes other than a
        let mut c = rng.random_range(0..n - 1);
        if c >= a {
            c += 1;
        }
        if c == b || g.weight(a, c) != 0.0 {
            return Ok(false);
        }
        let w = g.weights_mut();
        let v = w.get(a, b);
        w.set(a, b, 0.0);
        w.set(a, c, v);
        Ok(true)
    }
}

pub fn endpoint_rewire_step<R: Rng + ?Sized>(g: &LabeledGraph, rng: &mut R) -> Result<(LabeledGraph, bool)> {
    let mut out = g.clone();
    let acc = EndpointRewireKernel.step(&mut out, rng)?;
    Ok((out, acc))
}

// ---------------------------------------------------------------------------
// checkerboard swaps on group-by-individual matrices

/// A GBI with an index of its 1-cells so that a uniform 1-cell can be drawn
/// in constant time, overall or within one day.
#[derive(Debug, Clone)]
pub struct GbiChainState {
    gbi: GroupByIndividual,
    /// position of each 1-cell: (event, individual)
    ones: Vec<(usize, usize)>,
    day_class: Vec<usize>,
    /// 1-cell ids per day class
    by_day: Vec<Vec<usize>>,
    pos_in_day: Vec<usize>,
}

impl GbiChainState {
    pub fn new(gbi: GroupByIndividual) -> Result<Self> {
        if gbi.n_events() < 2 || gbi.n_individuals() < 2 {
            return Err(Error::data("checkerboard swaps need at least two events and two individuals"));
        }
        let mut classes = BTreeMap::new();
        for &d in gbi.days() {
            let next = classes.len();
            classes.entry(d).or_insert(next);
        }
        let day_class: Vec<usize> = gbi.days().iter().map(|d| classes[d]).collect();
        let mut ones = Vec::new();
        let mut by_day = vec![Vec::new(); classes.len()];
        let mut pos_in_day = Vec::new();
        for e in 0..gbi.n_events() {
            for i in 0..gbi.n_individuals() {
                if gbi.get(e, i) == 1 {
                    let k = ones.len();
                    ones.push((e, i));
                    pos_in_day.push(by_day[day_class[e]].len());
                    by_day[day_class[e]].push(k);
                }
            }
        }
        Ok(GbiChainState { gbi, ones, day_class, by_day, pos_in_day })
    }

    pub fn gbi(&self) -> &GroupByIndividual {
        &self.gbi
    }

    pub fn into_gbi(self) -> GroupByIndividual {
        self.gbi
    }

    fn move_cell(&mut self, k: usize, to_event: usize) {
        let (from, ind) = self.ones[k];
        self.gbi.set(from, ind, 0);
        self.gbi.set(to_event, ind, 1);
        self.ones[k] = (to_event, ind);
        let (dc_from, dc_to) = (self.day_class[from], self.day_class[to_event]);
        if dc_from != dc_to {
            let p = self.pos_in_day[k];
            let list = &mut self.by_day[dc_from];
            list.swap_remove(p);
            if p < list.len() {
                let moved = list[p];
                self.pos_in_day[moved] = p;
            }
            self.pos_in_day[k] = self.by_day[dc_to].len();
            self.by_day[dc_to].push(k);
        }
    }
}

/// Checkerboard swap: pick 1-cells `(e1, i1)` and `(e2, i2)` and, when
/// `(e1, i2)` and `(e2, i1)` are both 0, move `i1` to `e2` and `i2` to `e1`.
/// Row sums (event sizes) and column sums (individual degrees) are kept.
#[derive(Debug, Clone, Default)]
pub struct GbiCheckerboardKernel {
    /// Draw the second cell among events on the same day as the first.
    pub same_day: bool,
    /// Only swap individuals sharing this attribute value.
    pub same_attr: Option<Vec<String>>,
}

impl SwapKernel for GbiCheckerboardKernel {
    type State = GbiChainState;

    fn step<R: Rng + ?Sized>(&self, s: &mut GbiChainState, rng: &mut R) -> Result<bool> {
        if s.ones.is_empty() {
            return Err(Error::data("checkerboard swap on a GBI without 1-cells"));
        }
        if let Some(a) = &self.same_attr {
            if a.len() != s.gbi.n_individuals() {
                return Err(Error::Incompatible(format!(
                    "attribute covers {} of {} individuals",
                    a.len(),
                    s.gbi.n_individuals()
                )));
            }
        }
        let k1 = rng.random_range(0..s.ones.len());
        let (e1, i1) = s.ones[k1];
        let k2 = if self.same_day {
            let c = &s.by_day[s.day_class[e1]];
            c[rng.random_range(0..c.len())]
        } else {
            rng.random_range(0..s.ones.len())
        };
        let (e2, i2) = s.ones[k2];
        if e1 == e2 || i1 == i2 || s.gbi.get(e1, i2) != 0 || s.gbi.get(e2, i1) != 0 {
            return Ok(false);
        }
        if let Some(a) = &self.same_attr {
            if a[i1] != a[i2] {
                return Ok(false);
            }
        }
        s.move_cell(k1, e2);
        s.move_cell(k2, e1);
        Ok(true)
    }
}

pub fn gbi_checkerboard_step<R: Rng + ?Sized>(
    gbi: &GroupByIndividual,
    same_day: bool,
    same_attr: Option<&[String]>,
    rng: &mut R,
) -> Result<(GroupByIndividual, bool)> {
    let kernel = GbiCheckerboardKernel { same_day, same_attr: same_attr.map(<[String]>::to_vec) };
    let mut s = GbiChainState::new(gbi.clone())?;
    let acc = kernel.step(&mut s, rng)?;
    Ok((s.into_gbi(), acc))
}

// ---------------------------------------------------------------------------
// actor swaps on interaction records

/// Exchanges the actors of two records from the same grouping event.
#[derive(Debug, Clone)]
pub struct ActorSwapKernel {
    forbid_self: bool,
    same_event: Vec<Vec<usize>>,
    record_event: Vec<usize>,
}

impl ActorSwapKernel {
    pub fn new(events: &InteractionEvents, forbid_self: bool) -> Self {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (t, r) in events.records().iter().enumerate() {
            groups.entry(r.event).or_default().push(t);
        }
        let mut record_event = vec![0; events.len()];
        let mut same_event = Vec::with_capacity(groups.len());
        for (slot, members) in groups.into_values().enumerate() {
            for &t in &members {
                record_event[t] = slot;
            }
            same_event.push(members);
        }
        ActorSwapKernel { forbid_self, same_event, record_event }
    }
}

impl SwapKernel for ActorSwapKernel {
    type State = InteractionEvents;

    fn step<R: Rng + ?Sized>(&self, ev: &mut InteractionEvents, rng: &mut R) -> Result<bool> {
        if ev.len() != self.record_event.len() {
            return Err(Error::Incompatible(
                "actor swap kernel was built for a different record list".into(),
            ));
        }
        if ev.len() < 2 {
            return Ok(false);
        }
        let t1 = rng.random_range(0..ev.len());
        let pool = &self.same_event[self.record_event[t1]];
        let t2 = pool[rng.random_range(0..pool.len())];
        if t1 == t2 {
            return Ok(false);
        }
        let recs = ev.records_mut();
        let (a1, a2) = (recs[t1].actor, recs[t2].actor);
        if a1 == a2 {
            return Ok(false);
        }
        if self.forbid_self && (a2 == recs[t1].recipient || a1 == recs[t2].recipient) {
            return Ok(false);
        }
        recs[t1].actor = a2;
        recs[t2].actor = a1;
        Ok(true)
    }
}

pub fn actor_swap_step<R: Rng + ?Sized>(
    ev: &InteractionEvents,
    forbid_self: bool,
    rng: &mut R,
) -> Result<(InteractionEvents, bool)> {
    let kernel = ActorSwapKernel::new(ev, forbid_self);
    let mut out = ev.clone();
    let acc = kernel.step(&mut out, rng)?;
    Ok((out, acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Interaction, InteractionKind, Matrix};
    use crate::rng_from_seed;

    fn directed(rows: &[Vec<f64>]) -> LabeledGraph {
        LabeledGraph::from_matrix(Matrix::from_rows(rows).unwrap(), true).unwrap()
    }

    #[test]
    fn node_label_swap_two_nodes() {
        let g = directed(&[vec![0.0, 1.0], vec![2.0, 0.0]]);
        assert_eq!(g.permute_structure(&[0, 1]), g);
        let swapped = g.permute_structure(&[1, 0]);
        assert_eq!(swapped.weights().as_slice(), &[0.0, 2.0, 1.0, 0.0]);
    }

    #[test]
    fn edge_direction_moves_weight() {
        let g = directed(&[vec![0.0, 5.0], vec![0.0, 0.0]]);
        let mut rng = rng_from_seed(3);
        let (g2, acc) = edge_direction_step(&g, &[0], &[1], &mut rng).unwrap();
        assert!(acc);
        assert_eq!(g2.weight(0, 1), 0.0);
        assert_eq!(g2.weight(1, 0), 5.0);
        let sym = directed(&[vec![0.0, 2.0], vec![2.0, 0.0]]);
        let (s2, _) = edge_direction_step(&sym, &[0], &[1], &mut rng).unwrap();
        assert_eq!(s2, sym);
        assert!(edge_direction_step(&g, &[], &[1], &mut rng).is_err());
        assert!(edge_direction_step(&g, &[0], &[0], &mut rng).is_err());
    }

    #[test]
    fn edge_weight_swap_pair() {
        let mut m = Matrix::zeros(4);
        m.set(0, 1, 0.9);
        m.set(2, 3, 0.1);
        let g = LabeledGraph::from_matrix(m, true).unwrap();
        let mut rng = rng_from_seed(0);
        let mut seen_swap = false;
        for _ in 0..20 {
            let (g2, acc) = edge_weight_step(&g, true, &mut rng).unwrap();
            if acc {
                assert_eq!(g2.weight(0, 1), 0.1);
                assert_eq!(g2.weight(2, 3), 0.9);
                seen_swap = true;
            } else {
                assert_eq!(g2, g);
            }
        }
        assert!(seen_swap);
        let single = directed(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(edge_weight_step(&single, true, &mut rng).is_err());
    }

    #[test]
    fn endpoint_rewire_single_edge() {
        let g = directed(&[vec![0.0, 3.0, 0.0], vec![0.0; 3], vec![0.0; 3]]);
        let mut rng = rng_from_seed(11);
        let mut accepted = 0;
        for _ in 0..50 {
            let (g2, acc) = endpoint_rewire_step(&g, &mut rng).unwrap();
            if acc {
                accepted += 1;
                assert_eq!(g2.weight(0, 2), 3.0);
                assert_eq!(g2.weight(0, 1), 0.0);
            } else {
                assert_eq!(g2, g);
            }
        }
        assert!(accepted > 0);
        let empty = directed(&[vec![0.0; 2], vec![0.0; 2]]);
        assert!(endpoint_rewire_step(&empty, &mut rng).is_err());
    }

    #[test]
    fn endpoint_rewire_can_break_in_degrees() {
        // a -> b, a -> c ; after rewiring a -> c to a -> d, c loses its in-edge
        let mut m = Matrix::zeros(4);
        m.set(0, 1, 1.0);
        m.set(0, 2, 1.0);
        let g = LabeledGraph::from_matrix(m, true).unwrap();
        let mut rng = rng_from_seed(5);
        let mut state = g.clone();
        let mut changed_in = false;
        for _ in 0..200 {
            EndpointRewireKernel.step(&mut state, &mut rng).unwrap();
            assert_eq!(state.out_degrees(), g.out_degrees());
            let ins: Vec<f64> = state.weights().col_sums();
            if ins != g.weights().col_sums() {
                changed_in = true;
            }
        }
        assert!(changed_in);
    }

    #[test]
    fn checkerboard_only_swap() {
        let gbi = GroupByIndividual::from_rows(vec![vec![1, 0], vec![0, 1]], vec![1, 1]).unwrap();
        let mut rng = rng_from_seed(2);
        let mut saw = false;
        for _ in 0..50 {
            let (g2, acc) = gbi_checkerboard_step(&gbi, true, None, &mut rng).unwrap();
            if acc {
                assert_eq!(g2.row(0), &[0, 1]);
                assert_eq!(g2.row(1), &[1, 0]);
                saw = true;
            }
        }
        assert!(saw);
    }

    #[test]
    fn checkerboard_respects_days() {
        let gbi = GroupByIndividual::from_rows(vec![vec![1, 0], vec![0, 1]], vec![1, 2]).unwrap();
        let mut rng = rng_from_seed(2);
        for _ in 0..100 {
            let (g2, acc) = gbi_checkerboard_step(&gbi, true, None, &mut rng).unwrap();
            assert!(!acc);
            assert_eq!(g2, gbi);
        }
    }

    #[test]
    fn checkerboard_same_attr_blocks_mixed_swaps() {
        let gbi = GroupByIndividual::from_rows(vec![vec![1, 0], vec![0, 1]], vec![1, 1]).unwrap();
        let attr = vec!["RED".to_string(), "ORANGE".to_string()];
        let mut rng = rng_from_seed(2);
        for _ in 0..100 {
            let (_, acc) = gbi_checkerboard_step(&gbi, true, Some(&attr), &mut rng).unwrap();
            assert!(!acc);
        }
    }

    #[test]
    fn checkerboard_day_index_survives_cross_day_swaps() {
        let gbi = GroupByIndividual::from_rows(
            vec![vec![1, 0, 1], vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1]],
            vec![1, 1, 2, 2],
        )
        .unwrap();
        let mut s = GbiChainState::new(gbi.clone()).unwrap();
        let free = GbiCheckerboardKernel::default();
        let daily = GbiCheckerboardKernel { same_day: true, same_attr: None };
        let mut rng = rng_from_seed(9);
        for step in 0..2000 {
            if step % 2 == 0 {
                free.step(&mut s, &mut rng).unwrap();
            } else {
                daily.step(&mut s, &mut rng).unwrap();
            }
            for (k, &(e, i)) in s.ones.iter().enumerate() {
                assert_eq!(s.gbi.get(e, i), 1);
                assert_eq!(s.by_day[s.day_class[e]][s.pos_in_day[k]], k);
            }
            assert_eq!(s.gbi.row_sums(), gbi.row_sums());
            assert_eq!(s.gbi.col_sums(), gbi.col_sums());
        }
    }

    fn rec(event: usize, a: usize, b: usize) -> Interaction {
        Interaction { day: 1, event, actor: a, recipient: b, kind: InteractionKind::Affiliation }
    }

    #[test]
    fn actor_swap_within_event() {
        let ev = InteractionEvents::new(vec![rec(0, 0, 2), rec(0, 1, 3)]).unwrap();
        let mut rng = rng_from_seed(4);
        let mut saw = false;
        for _ in 0..50 {
            let (e2, acc) = actor_swap_step(&ev, true, &mut rng).unwrap();
            if acc {
                assert_eq!(e2.records()[0].actor, 1);
                assert_eq!(e2.records()[1].actor, 0);
                saw = true;
            }
            assert_eq!(e2.records()[0].recipient, 2);
            assert_eq!(e2.records()[1].recipient, 3);
        }
        assert!(saw);
    }

    #[test]
    fn actor_swap_refuses_self_interactions() {
        // swapping would give 1 -> 1 and 0 -> 0
        let ev = InteractionEvents::new(vec![rec(0, 0, 1), rec(0, 1, 0)]).unwrap();
        let mut rng = rng_from_seed(4);
        for _ in 0..50 {
            let (e2, acc) = actor_swap_step(&ev, true, &mut rng).unwrap();
            assert!(!acc);
            assert_eq!(e2, ev);
        }
    }

    struct AlwaysReject;

    impl SwapKernel for AlwaysReject {
        type State = LabeledGraph;
        fn step<R: Rng + ?Sized>(&self, _: &mut LabeledGraph, _: &mut R) -> Result<bool> {
            Ok(false)
        }
    }

    #[test]
    fn chain_lengths_and_rejection() {
        let g = directed(&[vec![0.0, 1.0], vec![3.0, 0.0]]);
        let cfg = ChainConfig::new(5, 100, 10, 1).unwrap();
        let r = run_chain(g.clone(), &AlwaysReject, &cfg, |s| Ok(s.weight(1, 0)), true).unwrap();
        assert_eq!(r.series, vec![3.0; 10]);
        assert_eq!(r.accepted, 0);
        assert_eq!(r.trace.unwrap().len(), 100);
        let cfg = ChainConfig::new(0, 95, 10, 1).unwrap();
        let r = run_chain(g, &AlwaysReject, &cfg, |_| Ok(0.0), false).unwrap();
        assert_eq!(r.series.len(), 9);
        assert!(ChainConfig::new(0, 5, 10, 0).is_err());
        assert!(ChainConfig::new(0, 5, 0, 0).is_err());
    }

    #[test]
    fn chain_is_reproducible() {
        let gbi = GroupByIndividual::from_rows(
            vec![vec![1, 0, 1], vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1]],
            vec![1, 1, 1, 1],
        )
        .unwrap();
        let cfg = ChainConfig::new(10, 500, 5, 77).unwrap();
        let kernel = GbiCheckerboardKernel { same_day: true, same_attr: None };
        let run = || {
            run_chain(
                GbiChainState::new(gbi.clone()).unwrap(),
                &kernel,
                &cfg,
                |s| Ok(s.gbi().row(0).iter().enumerate().map(|(i, &v)| (i * v as usize) as f64).sum()),
                false,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }
}
