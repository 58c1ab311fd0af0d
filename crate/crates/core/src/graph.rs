//! Network data types and the constructions that turn observation data into
//! weighted networks, plus the node-level measures used by test statistics.

use std::collections::{BTreeMap, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense square matrix of `f64`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::data(format!("row {i} has {} entries, expected {n}", r.len())));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { n, data })
    }

    pub fn from_vec(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::data(format!("{} values cannot fill a {n}x{n} matrix", data.len())));
        }
        Ok(Matrix { n, data })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            for (j, v) in self.row(i).iter().enumerate() {
                out[j] += v;
            }
        }
        out
    }

    /// Values of all cells with `i != j`, row by row.
    pub fn off_diagonal(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * self.n.saturating_sub(1));
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    out.push(self.get(i, j));
                }
            }
        }
        out
    }

    /// Applies the same permutation to rows and columns: cell `(i, j)` of the
    /// result is cell `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            let src = perm[i];
            for j in 0..n {
                out.data[i * n + j] = self.data[src * n + perm[j]];
            }
        }
        out
    }

    /// Induced submatrix on `idx`, in the given order.
    pub fn submatrix(&self, idx: &[usize]) -> Matrix {
        let k = idx.len();
        let mut out = Matrix::zeros(k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.data[a * k + b] = self.get(i, j);
            }
        }
        out
    }
}

/// Weighted network with node labels and optional categorical node
/// attributes.
///
/// Invariants: zero diagonal, nonnegative weights, exact symmetry when
/// undirected. Absent edges have weight 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraph {
    directed: bool,
    weights: Matrix,
    ids: Vec<String>,
    attrs: BTreeMap<String, Vec<String>>,
}

impl LabeledGraph {
    pub fn new(weights: Matrix, directed: bool, ids: Vec<String>) -> Result<Self> {
        let n = weights.n();
        if ids.len() != n {
            return Err(Error::data(format!("{} ids for {n} nodes", ids.len())));
        }
        for i in 0..n {
            if weights.get(i, i) != 0.0 {
                return Err(Error::data(format!("nonzero diagonal at node {}", ids[i])));
            }
            for j in 0..n {
                let w = weights.get(i, j);
                if !(w >= 0.0) || !w.is_finite() {
                    return Err(Error::data(format!(
                        "weight {w} between {} and {} is not a finite nonnegative number",
                        ids[i], ids[j]
                    )));
                }
            }
        }
        if !directed && !weights.is_symmetric() {
            return Err(Error::data("undirected graph with asymmetric weights"));
        }
        Ok(LabeledGraph { directed, weights, ids, attrs: BTreeMap::new() })
    }

    /// Graph with ids `"0".."n-1"`.
    pub fn from_matrix(weights: Matrix, directed: bool) -> Result<Self> {
        let ids = (0..weights.n()).map(|i| i.to_string()).collect();
        Self::new(weights, directed, ids)
    }

    pub(crate) fn from_parts_unchecked(
        weights: Matrix,
        directed: bool,
        ids: Vec<String>,
        attrs: BTreeMap<String, Vec<String>>,
    ) -> Self {
        LabeledGraph { directed, weights, ids, attrs }
    }

    pub fn with_attr(mut self, name: &str, values: Vec<String>) -> Result<Self> {
        self.set_attr(name, values)?;
        Ok(self)
    }

    pub fn set_attr(&mut self, name: &str, values: Vec<String>) -> Result<()> {
        if values.len() != self.n() {
            return Err(Error::data(format!(
                "attribute '{name}' has {} values for {} nodes",
                values.len(),
                self.n()
            )));
        }
        self.attrs.insert(name.to_string(), values);
        Ok(())
    }

    pub fn attr(&self, name: &str) -> Result<&[String]> {
        self.attrs
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::data(format!("graph has no node attribute '{name}'")))
    }

    pub fn attrs(&self) -> &BTreeMap<String, Vec<String>> {
        &self.attrs
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn weights(&self) -> &Matrix {
        &self.weights
    }

    /// Mutable access for the swap kernels; they are responsible for keeping
    /// the invariants.
    pub(crate) fn weights_mut(&mut self) -> &mut Matrix {
        &mut self.weights
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights.get(i, j)
    }

    /// Number of edges: nonzero cells for directed graphs, nonzero unordered
    /// pairs for undirected ones.
    pub fn edge_count(&self) -> usize {
        let nz = self.weights.as_slice().iter().filter(|&&w| w != 0.0).count();
        if self.directed {
            nz
        } else {
            nz / 2
        }
    }

    /// Unweighted degree (number of nonzero neighbours). For directed graphs
    /// this counts out-edges.
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|i| self.weights.row(i).iter().filter(|&&w| w != 0.0).count()).collect()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.degrees()
    }

    /// Same graph with rows and columns permuted by `perm`; attributes stay
    /// attached to node positions, ids travel with the structure.
    pub fn permute_structure(&self, perm: &[usize]) -> LabeledGraph {
        LabeledGraph {
            directed: self.directed,
            weights: self.weights.permuted(perm),
            ids: perm.iter().map(|&p| self.ids[p].clone()).collect(),
            attrs: self.attrs.clone(),
        }
    }

    /// Induced subgraph on `nodes`; ids and attributes are carried over.
    pub fn induced(&self, nodes: &[usize]) -> LabeledGraph {
        LabeledGraph {
            directed: self.directed,
            weights: self.weights.submatrix(nodes),
            ids: nodes.iter().map(|&i| self.ids[i].clone()).collect(),
            attrs: self
                .attrs
                .iter()
                .map(|(k, v)| (k.clone(), nodes.iter().map(|&i| v[i].clone()).collect()))
                .collect(),
        }
    }
}

/// Binary event-by-individual matrix with per-event metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupByIndividual {
    rows: usize,
    cols: usize,
    cells: Vec<u8>,
    days: Vec<u32>,
    group: usize,
    locations: Option<Vec<(i64, i64)>>,
    ids: Vec<String>,
}

impl GroupByIndividual {
    /// Validates and builds a GBI. `rows[e][i]` is 1 when individual `i` was
    /// seen in event `e`.
    pub fn new(
        rows: Vec<Vec<u8>>,
        days: Vec<u32>,
        group: usize,
        locations: Option<Vec<(i64, i64)>>,
        ids: Vec<String>,
    ) -> Result<Self> {
        let e = rows.len();
        let cols = ids.len();
        if days.len() != e {
            return Err(Error::data(format!("{} day labels for {e} events", days.len())));
        }
        if let Some(l) = &locations {
            if l.len() != e {
                return Err(Error::data(format!("{} locations for {e} events", l.len())));
            }
        }
        let mut cells = Vec::with_capacity(e * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::data(format!("event {r} has {} columns, expected {cols}", row.len())));
            }
            if row.iter().any(|&v| v > 1) {
                return Err(Error::data(format!("event {r} has a non-binary entry")));
            }
            if row.iter().all(|&v| v == 0) {
                return Err(Error::data(format!("event {r} is empty")));
            }
            cells.extend_from_slice(row);
        }
        Ok(GroupByIndividual { rows: e, cols, cells, days, group, locations, ids })
    }

    /// Same as [`GroupByIndividual::new`] with ids `"0".."N-1"`.
    pub fn from_rows(rows: Vec<Vec<u8>>, days: Vec<u32>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let ids = (0..cols).map(|i| i.to_string()).collect();
        Self::new(rows, days, 0, None, ids)
    }

    pub fn n_events(&self) -> usize {
        self.rows
    }

    pub fn n_individuals(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, event: usize, ind: usize) -> u8 {
        self.cells[event * self.cols + ind]
    }

    #[inline]
    pub(crate) fn set(&mut self, event: usize, ind: usize, v: u8) {
        self.cells[event * self.cols + ind] = v;
    }

    pub fn row(&self, event: usize) -> &[u8] {
        &self.cells[event * self.cols..(event + 1) * self.cols]
    }

    pub fn members(&self, event: usize) -> Vec<usize> {
        self.row(event).iter().enumerate().filter(|(_, &v)| v == 1).map(|(i, _)| i).collect()
    }

    pub fn days(&self) -> &[u32] {
        &self.days
    }

    pub fn group(&self) -> usize {
        self.group
    }

    pub fn locations(&self) -> Option<&[(i64, i64)]> {
        self.locations.as_deref()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.rows).map(|e| self.row(e).iter().map(|&v| v as usize).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        let mut out = vec![0usize; self.cols];
        for e in 0..self.rows {
            for (i, &v) in self.row(e).iter().enumerate() {
                out[i] += v as usize;
            }
        }
        out
    }

    /// New GBI made of the given rows of `self` (repeats allowed); day and
    /// location metadata travel with their rows.
    pub fn select_rows(&self, idx: &[usize]) -> GroupByIndividual {
        let mut cells = Vec::with_capacity(idx.len() * self.cols);
        for &e in idx {
            cells.extend_from_slice(self.row(e));
        }
        GroupByIndividual {
            rows: idx.len(),
            cols: self.cols,
            cells,
            days: idx.iter().map(|&e| self.days[e]).collect(),
            group: self.group,
            locations: self.locations.as_ref().map(|l| idx.iter().map(|&e| l[e]).collect()),
            ids: self.ids.clone(),
        }
    }

    pub fn with_locations(mut self, locations: Vec<(i64, i64)>) -> Result<Self> {
        if locations.len() != self.rows {
            return Err(Error::data(format!("{} locations for {} events", locations.len(), self.rows)));
        }
        self.locations = Some(locations);
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InteractionKind {
    Dominance,
    Affiliation,
}

impl InteractionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InteractionKind::Dominance => "dominance",
            InteractionKind::Affiliation => "affiliation",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "dominance" => Ok(InteractionKind::Dominance),
            "affiliation" => Ok(InteractionKind::Affiliation),
            other => Err(Error::data(format!("unknown interaction kind '{other}'"))),
        }
    }
}

/// One directed interaction observed within a grouping event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interaction {
    pub day: u32,
    pub event: usize,
    pub actor: usize,
    pub recipient: usize,
    pub kind: InteractionKind,
}

/// Ordered interaction records (edge list of a multigraph).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InteractionEvents {
    records: Vec<Interaction>,
}

impl InteractionEvents {
    pub fn new(records: Vec<Interaction>) -> Result<Self> {
        if let Some((t, r)) = records.iter().enumerate().find(|(_, r)| r.actor == r.recipient) {
            return Err(Error::data(format!("record {t}: actor {} interacts with itself", r.actor)));
        }
        Ok(InteractionEvents { records })
    }

    /// Checks that every record refers to an existing event of `gbi` whose
    /// members include both participants.
    pub fn validate_against(&self, gbi: &GroupByIndividual) -> Result<()> {
        for (t, r) in self.records.iter().enumerate() {
            if r.event >= gbi.n_events() {
                return Err(Error::data(format!("record {t}: event {} out of range", r.event)));
            }
            if r.actor >= gbi.n_individuals()
                || r.recipient >= gbi.n_individuals()
                || gbi.get(r.event, r.actor) == 0
                || gbi.get(r.event, r.recipient) == 0
            {
                return Err(Error::data(format!(
                    "record {t}: participants are not both members of event {}",
                    r.event
                )));
            }
        }
        Ok(())
    }

    pub fn records(&self) -> &[Interaction] {
        &self.records
    }

    pub(crate) fn records_mut(&mut self) -> &mut [Interaction] {
        &mut self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Summed association between groups.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupNetwork {
    pub weights: Matrix,
    pub clans: Vec<String>,
    pub centers: Vec<(i64, i64)>,
}

impl GroupNetwork {
    pub fn n_groups(&self) -> usize {
        self.weights.n()
    }
}

/// Result of [`sri_from_gbi`]: the association network and the ids of
/// individuals that never appear in any event.
#[derive(Debug, Clone)]
pub struct SriNetwork {
    pub graph: LabeledGraph,
    pub warnings: Vec<String>,
}

/// Simple ratio index network: `x_ij / (n_i + n_j - x_ij)` where `x_ij`
/// counts events containing both individuals and `n_i` events containing
/// `i`. Each GBI row is one sampling period.
pub fn sri_from_gbi(gbi: &GroupByIndividual) -> SriNetwork {
    let n = gbi.n_individuals();
    let mut together = vec![0u32; n * n];
    for e in 0..gbi.n_events() {
        let m = gbi.members(e);
        for (a, &i) in m.iter().enumerate() {
            for &j in &m[a + 1..] {
                together[i * n + j] += 1;
            }
        }
    }
    let seen = gbi.col_sums();
    let mut w = Matrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let x = together[i * n + j] as f64;
            let denom = seen[i] as f64 + seen[j] as f64 - x;
            let s = if denom > 0.0 { x / denom } else { 0.0 };
            w.set(i, j, s);
            w.set(j, i, s);
        }
    }
    let warnings = (0..n)
        .filter(|&i| seen[i] == 0)
        .map(|i| format!("individual {} was never observed", gbi.ids()[i]))
        .collect();
    SriNetwork {
        graph: LabeledGraph::from_parts_unchecked(w, false, gbi.ids().to_vec(), BTreeMap::new()),
        warnings,
    }
}

/// Association index between members of different groups: `c / (2D - c)`
/// for `c` co-occurrence days out of `D` observation days.
pub fn between_group_index(co_occurrences: u32, days: u32) -> Result<f64> {
    if days == 0 {
        return Err(Error::data("observation period of zero days"));
    }
    if co_occurrences > days {
        return Err(Error::data(format!(
            "{co_occurrences} co-occurrence days exceed {days} observation days"
        )));
    }
    let c = co_occurrences as f64;
    Ok(c / (2.0 * days as f64 - c))
}

/// Directed network whose weight `w_ab` counts records with actor `a` and
/// recipient `b`.
pub fn weighted_from_events(events: &InteractionEvents, n: usize) -> Result<LabeledGraph> {
    let mut w = Matrix::zeros(n);
    for (t, r) in events.records().iter().enumerate() {
        if r.actor >= n || r.recipient >= n {
            return Err(Error::data(format!("record {t} refers to a node outside 0..{n}")));
        }
        if r.actor == r.recipient {
            return Err(Error::data(format!("record {t} is a self-interaction")));
        }
        w.add(r.actor, r.recipient, 1.0);
    }
    LabeledGraph::from_matrix(w, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrengthMode {
    In,
    Out,
    All,
}

impl StrengthMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "in" => Ok(StrengthMode::In),
            "out" => Ok(StrengthMode::Out),
            "all" => Ok(StrengthMode::All),
            other => Err(Error::config(format!("unknown strength mode '{other}'"))),
        }
    }
}

/// Weighted degree. For undirected graphs every mode returns row sums.
pub fn strength(g: &LabeledGraph, mode: StrengthMode) -> Vec<f64> {
    let w = g.weights();
    if !g.is_directed() {
        return w.row_sums();
    }
    match mode {
        StrengthMode::Out => w.row_sums(),
        StrengthMode::In => w.col_sums(),
        StrengthMode::All => w.row_sums().into_iter().zip(w.col_sums()).map(|(a, b)| a + b).collect(),
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem {
    dist: f64,
    node: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

const PATH_EPS: f64 = 1e-10;

/// Shortest-path betweenness (Brandes) with edge lengths `1 / w`.
///
/// Equal-length shortest paths share credit. Path lengths within a relative
/// `1e-10` are treated as equal. When `normalized` is set every value is
/// divided by `n² - n`.
pub fn betweenness(g: &LabeledGraph, normalized: bool) -> Vec<f64> {
    let n = g.n();
    let mut bc = vec![0.0; n];
    if n < 3 {
        return bc;
    }
    let w = g.weights();
    let adj: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| (0..n).filter(|&j| w.get(i, j) > 0.0).map(|j| (j, 1.0 / w.get(i, j))).collect())
        .collect();

    let mut dist = vec![f64::INFINITY; n];
    let mut sigma = vec![0.0f64; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut settled = vec![false; n];

    for s in 0..n {
        dist.fill(f64::INFINITY);
        sigma.fill(0.0);
        delta.fill(0.0);
        settled.fill(false);
        preds.iter_mut().for_each(Vec::clear);
        order.clear();

        dist[s] = 0.0;
        sigma[s] = 1.0;
        let mut heap = BinaryHeap::new();
        heap.push(HeapItem { dist: 0.0, node: s });
        while let Some(HeapItem { dist: d, node: v }) = heap.pop() {
            if settled[v] || d > dist[v] {
                continue;
            }
            settled[v] = true;
            order.push(v);
            for &(u, len) in &adj[v] {
                if settled[u] {
                    continue;
                }
                let alt = d + len;
                let tol = PATH_EPS * alt.max(1.0);
                if alt < dist[u] - tol {
                    dist[u] = alt;
                    sigma[u] = sigma[v];
                    preds[u].clear();
                    preds[u].push(v);
                    heap.push(HeapItem { dist: alt, node: u });
                } else if (alt - dist[u]).abs() <= tol {
                    sigma[u] += sigma[v];
                    preds[u].push(v);
                }
            }
        }
        for &v in order.iter().rev() {
            for &p in &preds[v] {
                delta[p] += sigma[p] / sigma[v] * (1.0 + delta[v]);
            }
            if v != s {
                bc[v] += delta[v];
            }
        }
    }
    if !g.is_directed() {
        bc.iter_mut().for_each(|b| *b /= 2.0);
    }
    if normalized {
        let pairs = (n * n - n) as f64;
        bc.iter_mut().for_each(|b| *b /= pairs);
    }
    bc
}

/// Barrat weighted local clustering:
/// `C_i = 1 / (s_i (k_i - 1)) * Σ_{j,h} (w_ij + w_ih) / 2 * a_ij a_ih a_jh`,
/// summed over ordered neighbour pairs. `None` for nodes with fewer than two
/// neighbours.
pub fn weighted_clustering(g: &LabeledGraph) -> Vec<Option<f64>> {
    let n = g.n();
    let w = g.weights();
    let neighbours: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| w.get(i, j) > 0.0).collect()).collect();
    (0..n)
        .map(|i| {
            let nb = &neighbours[i];
            let k = nb.len();
            if k < 2 {
                return None;
            }
            let s: f64 = nb.iter().map(|&j| w.get(i, j)).sum();
            let mut num = 0.0;
            for (a, &j) in nb.iter().enumerate() {
                for &h in &nb[a + 1..] {
                    if w.get(j, h) > 0.0 {
                        // both orderings (j,h) and (h,j)
                        num += w.get(i, j) + w.get(i, h);
                    }
                }
            }
            Some(num / (s * (k as f64 - 1.0)))
        })
        .collect()
}

/// Sums weights between members of different groups. Every ordered pair
/// `(a, b)` is visited, so a symmetric input contributes each undirected
/// edge twice.
pub fn collapse_group_network(
    g: &LabeledGraph,
    membership: &[usize],
    n_groups: usize,
) -> Result<GroupNetwork> {
    if membership.len() != g.n() {
        return Err(Error::data(format!("membership covers {} of {} nodes", membership.len(), g.n())));
    }
    if let Some(&bad) = membership.iter().find(|&&m| m >= n_groups) {
        return Err(Error::data(format!("group index {bad} out of range 0..{n_groups}")));
    }
    let mut out = Matrix::zeros(n_groups);
    let w = g.weights();
    for a in 0..g.n() {
        for b in 0..g.n() {
            let (ga, gb) = (membership[a], membership[b]);
            if ga != gb {
                out.add(ga, gb, w.get(a, b));
            }
        }
    }
    Ok(GroupNetwork { weights: out, clans: Vec::new(), centers: Vec::new() })
}
