//! Generative reference models: random graphs and an agent-based simulator
//! of a fission-fusion society living in roosting groups on a grid.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    between_group_index, collapse_group_network, sri_from_gbi, GroupByIndividual, GroupNetwork, Interaction,
    InteractionEvents, InteractionKind, LabeledGraph, Matrix,
};

// ---------------------------------------------------------------------------
// random graphs

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErMode {
    Gnp(f64),
    Gnm(usize),
}

/// Erdős–Rényi graph, undirected and unweighted.
pub fn gen_er<R: Rng + ?Sized>(n: usize, mode: ErMode, rng: &mut R) -> Result<LabeledGraph> {
    let pairs = n * n.saturating_sub(1) / 2;
    let mut m = Matrix::zeros(n);
    match mode {
        ErMode::Gnp(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(format!("edge probability {p} outside [0, 1]")));
            }
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random_bool(p) {
                        m.set(i, j, 1.0);
                        m.set(j, i, 1.0);
                    }
                }
            }
        }
        ErMode::Gnm(edges) => {
            if edges > pairs {
                return Err(Error::config(format!(
                    "{edges} edges requested but only {pairs} pairs exist on {n} nodes"
                )));
            }
            for k in index::sample(rng, pairs, edges) {
                let (i, j) = pair_from_index(k, n);
                m.set(i, j, 1.0);
                m.set(j, i, 1.0);
            }
        }
    }
    LabeledGraph::from_matrix(m, false)
}

/// Maps `0..n(n-1)/2` onto the pairs `i < j` row by row.
fn pair_from_index(mut k: usize, n: usize) -> (usize, usize) {
    let mut i = 0;
    loop {
        let row = n - 1 - i;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
        i += 1;
    }
}

/// Watts–Strogatz graph: a ring where every node links to its `nei`
/// nearest neighbours on each side, then each edge has its far endpoint
/// rewired with probability `p` to a node that is neither the near endpoint
/// nor already linked to it.
pub fn gen_small_world<R: Rng + ?Sized>(n: usize, nei: usize, p: f64, rng: &mut R) -> Result<LabeledGraph> {
    if nei == 0 || n <= 2 * nei {
        return Err(Error::config(format!("small-world graph needs n > 2·nei (n={n}, nei={nei})")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::config(format!("rewiring probability {p} outside [0, 1]")));
    }
    let mut adj = vec![vec![false; n]; n];
    let mut edges = Vec::with_capacity(n * nei);
    for i in 0..n {
        for k in 1..=nei {
            let j = (i + k) % n;
            adj[i][j] = true;
            adj[j][i] = true;
            edges.push((i, j));
        }
    }
    for e in edges.iter_mut() {
        if !rng.random_bool(p) {
            continue;
        }
        let (i, j) = *e;
        let free: Vec<usize> = (0..n).filter(|&t| t != i && !adj[i][t]).collect();
        if free.is_empty() {
            continue;
        }
        let t = free[rng.random_range(0..free.len())];
        adj[i][j] = false;
        adj[j][i] = false;
        adj[i][t] = true;
        adj[t][i] = true;
        *e = (i, t);
    }
    let mut m = Matrix::zeros(n);
    for &(i, j) in &edges {
        m.set(i, j, 1.0);
        m.set(j, i, 1.0);
    }
    LabeledGraph::from_matrix(m, false)
}

// ---------------------------------------------------------------------------
// society simulator

pub const SEX_LABELS: [&str; 2] = ["M", "F"];
pub const AGE_LABELS: [&str; 3] = ["AD", "SUB", "JUV"];
pub const NOSE_LABELS: [&str; 2] = ["RED", "ORANGE"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SocietyConfig {
    /// Lower grid corner `[x, y]`.
    pub grid_min: [i64; 2],
    pub grid_max: [i64; 2],
    pub group_spacing: i64,
    pub mean_group_size: f64,
    pub clan_labels: Vec<String>,
    pub p_within_clan: f64,
    pub p_between_clan: f64,
    pub days: u32,
    pub mean_subgroups: f64,
    pub nose_assort: f64,
    /// Probabilities for `M`, `F`.
    pub sex_probs: Vec<f64>,
    /// Probabilities for `AD`, `SUB`, `JUV`.
    pub age_probs: Vec<f64>,
    /// Probabilities for `RED`, `ORANGE`.
    pub nose_probs: Vec<f64>,
    pub loc_sd: f64,
}

impl Default for SocietyConfig {
    fn default() -> Self {
        SocietyConfig {
            grid_min: [3, 3],
            grid_max: [18, 18],
            group_spacing: 4,
            mean_group_size: 20.0,
            clan_labels: vec!["A".into(), "B".into(), "C".into()],
            p_within_clan: 1.0,
            p_between_clan: 0.4,
            days: 100,
            mean_subgroups: 5.0,
            nose_assort: 0.15,
            sex_probs: vec![0.5, 0.5],
            age_probs: vec![0.6, 0.2, 0.2],
            nose_probs: vec![0.7, 0.3],
            loc_sd: 2.0,
        }
    }
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::config(format!("{name} must be in [0, 1], got {p}")))
    }
}

fn check_categorical(name: &str, probs: &[f64], k: usize) -> Result<()> {
    if probs.len() != k {
        return Err(Error::config(format!("{name} needs {k} probabilities, got {}", probs.len())));
    }
    for &p in probs {
        check_prob(name, p)?;
    }
    let s: f64 = probs.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(Error::config(format!("{name} must sum to 1, sums to {s}")));
    }
    Ok(())
}

impl SocietyConfig {
    /// The smaller second population: a 3..13 × 3..9 grid and weaker nose
    /// assortment.
    pub fn second_population() -> Self {
        SocietyConfig { grid_max: [13, 9], nose_assort: 0.1, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.group_spacing < 1 {
            return Err(Error::config("group_spacing must be positive"));
        }
        if self.grid_min[0] > self.grid_max[0] || self.grid_min[1] > self.grid_max[1] {
            return Err(Error::config("grid_min must not exceed grid_max"));
        }
        if !(self.mean_group_size > 0.0) || !self.mean_group_size.is_finite() {
            return Err(Error::config("mean_group_size must be positive"));
        }
        if self.clan_labels.is_empty() {
            return Err(Error::config("clan_labels must not be empty"));
        }
        check_prob("p_within_clan", self.p_within_clan)?;
        check_prob("p_between_clan", self.p_between_clan)?;
        if self.days == 0 {
            return Err(Error::config("days must be at least 1"));
        }
        if !(self.mean_subgroups > 1.0) || !self.mean_subgroups.is_finite() {
            return Err(Error::config("mean_subgroups must be greater than 1"));
        }
        if !(0.0..0.5).contains(&self.nose_assort) {
            return Err(Error::config(format!("nose_assort must be in [0, 0.5), got {}", self.nose_assort)));
        }
        check_categorical("sex_probs", &self.sex_probs, 2)?;
        check_categorical("age_probs", &self.age_probs, 3)?;
        check_categorical("nose_probs", &self.nose_probs, 2)?;
        if !(self.loc_sd >= 0.0) || !self.loc_sd.is_finite() {
            return Err(Error::config("loc_sd must be nonnegative"));
        }
        Ok(())
    }

    /// Grid points with both coordinates divisible by the spacing, x-major.
    pub fn group_centers(&self) -> Vec<(i64, i64)> {
        let axis = |lo: i64, hi: i64| -> Vec<i64> {
            (lo..=hi).filter(|v| v.rem_euclid(self.group_spacing) == 0).collect()
        };
        let ys = axis(self.grid_min[1], self.grid_max[1]);
        axis(self.grid_min[0], self.grid_max[0])
            .into_iter()
            .flat_map(|x| ys.iter().map(move |&y| (x, y)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Individual {
    pub id: String,
    /// Zero-based group index.
    pub group: usize,
    pub sex: String,
    pub age: String,
    pub nose: String,
    pub clan: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupData {
    /// Subgroup observations with day and location per row.
    pub gbi: GroupByIndividual,
    pub center: (i64, i64),
    pub clan: String,
    /// Population indices of the group's individuals, in GBI column order.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SocietyData {
    pub config: SocietyConfig,
    pub groups: Vec<GroupData>,
    pub individuals: Vec<Individual>,
    /// Population association network: SRI within groups, the between-group
    /// index across groups. Carries attributes `group`, `sex`, `age`,
    /// `nose` and `clan`.
    pub association: LabeledGraph,
    pub group_net: GroupNetwork,
}

impl SocietyData {
    /// Within-group association network of group `g` with attributes.
    pub fn group_graph(&self, g: usize) -> LabeledGraph {
        self.association.induced(&self.groups[g].members)
    }

    pub fn group_individuals(&self, g: usize) -> Vec<Individual> {
        self.groups[g].members.iter().map(|&i| self.individuals[i].clone()).collect()
    }

    pub fn membership(&self) -> Vec<usize> {
        self.individuals.iter().map(|i| i.group).collect()
    }

    pub fn layout(&self) -> GroupLayout {
        GroupLayout {
            centers: self.groups.iter().map(|g| g.center).collect(),
            clans: self.groups.iter().map(|g| g.clan.clone()).collect(),
            sizes: self.groups.iter().map(|g| g.members.len()).collect(),
        }
    }
}

fn pick<'a, R: Rng + ?Sized>(labels: &[&'a str], probs: &[f64], rng: &mut R) -> &'a str {
    let w = WeightedIndex::new(probs).expect("validated probabilities");
    labels[w.sample(rng)]
}

/// Group size ~ Poisson(mean), redrawn until at least 2.
fn draw_group_size<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    let pois = Poisson::new(mean).expect("validated mean");
    loop {
        let s = pois.sample(rng) as usize;
        if s >= 2 {
            return s;
        }
    }
}

/// Daily subgroup assignments. RED individuals favour the first half of
/// the day's subgroups and ORANGE individuals the second half. Returns the
/// nonempty subgroup rows and their days.
fn simulate_subgroups<R: Rng + ?Sized>(
    noses: &[&str],
    days: u32,
    mean_subgroups: f64,
    nose_assort: f64,
    rng: &mut R,
) -> (Vec<Vec<u8>>, Vec<u32>) {
    let pois = Poisson::new(mean_subgroups - 1.0).expect("validated mean");
    let (hi, lo) = (0.5 + nose_assort, 0.5 - nose_assort);
    let mut rows = Vec::new();
    let mut day_of = Vec::new();
    for day in 1..=days {
        let n_sg = 1 + pois.sample(rng) as usize;
        let half = n_sg / 2;
        let red: Vec<f64> = (0..n_sg).map(|k| if k < half { hi } else { lo }).collect();
        let orange: Vec<f64> = (0..n_sg).map(|k| if k < half { lo } else { hi }).collect();
        let red = WeightedIndex::new(&red).expect("positive weights");
        let orange = WeightedIndex::new(&orange).expect("positive weights");
        let mut day_rows = vec![vec![0u8; noses.len()]; n_sg];
        for (i, nose) in noses.iter().enumerate() {
            let sg = if *nose == "RED" { red.sample(rng) } else { orange.sample(rng) };
            day_rows[sg][i] = 1;
        }
        for r in day_rows {
            if r.contains(&1) {
                rows.push(r);
                day_of.push(day);
            }
        }
    }
    (rows, day_of)
}

fn rounded_normal<R: Rng + ?Sized>(normal: &Normal<f64>, rng: &mut R) -> i64 {
    // f64::round rounds halves away from zero
    normal.sample(rng).round() as i64
}

fn locate<R: Rng + ?Sized>(center: (i64, i64), n: usize, sd: f64, rng: &mut R) -> Vec<(i64, i64)> {
    let normal = Normal::new(0.0, sd).expect("validated sd");
    (0..n)
        .map(|_| {
            let dx = rounded_normal(&normal, rng);
            let dy = rounded_normal(&normal, rng);
            (center.0 + dx, center.1 + dy)
        })
        .collect()
}

/// Daily co-occurrence counts for dyads in different groups. On each day,
/// every pair of groups with at least one pair of subgroups at identical
/// coordinates draws one Bernoulli(p) (p depending on whether the clans
/// match); on success every cross-group dyad in every matched subgroup pair
/// gains one count.
fn count_between<R: Rng + ?Sized>(
    groups: &[(&GroupByIndividual, usize)],
    clans: &[String],
    p_within: f64,
    p_between: f64,
    days: u32,
    n_total: usize,
    rng: &mut R,
) -> Vec<u32> {
    let mut counts = vec![0u32; n_total * n_total];
    // rows of each group by day
    let by_day: Vec<BTreeMap<u32, Vec<usize>>> = groups
        .iter()
        .map(|(gbi, _)| {
            let mut m: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
            for (r, &d) in gbi.days().iter().enumerate() {
                m.entry(d).or_default().push(r);
            }
            m
        })
        .collect();
    let empty = Vec::new();
    let mut matched = Vec::new();
    for day in 1..=days {
        for j in 0..groups.len() {
            for k in j + 1..groups.len() {
                let (ga, off_a) = groups[j];
                let (gb, off_b) = groups[k];
                let (la, lb) = (ga.locations().unwrap(), gb.locations().unwrap());
                let rows_a = by_day[j].get(&day).unwrap_or(&empty);
                let rows_b = by_day[k].get(&day).unwrap_or(&empty);
                matched.clear();
                for &ra in rows_a {
                    for &rb in rows_b {
                        if la[ra] == lb[rb] {
                            matched.push((ra, rb));
                        }
                    }
                }
                if matched.is_empty() {
                    continue;
                }
                let p = if clans[j] == clans[k] { p_within } else { p_between };
                if !rng.random_bool(p) {
                    continue;
                }
                for &(ra, rb) in &matched {
                    for a in ga.members(ra) {
                        for b in gb.members(rb) {
                            let (x, y) = (off_a + a, off_b + b);
                            counts[x * n_total + y] += 1;
                            counts[y * n_total + x] += 1;
                        }
                    }
                }
            }
        }
    }
    counts
}

fn between_weights(counts: &[u32], n_total: usize, days: u32, m: &mut Matrix) -> Result<()> {
    for x in 0..n_total {
        for y in 0..n_total {
            let c = counts[x * n_total + y];
            if c > 0 {
                m.set(x, y, between_group_index(c, days)?);
            }
        }
    }
    Ok(())
}

pub fn simulate_society<R: Rng + ?Sized>(cfg: &SocietyConfig, rng: &mut R) -> Result<SocietyData> {
    cfg.validate()?;
    let centers = cfg.group_centers();
    if centers.is_empty() {
        return Err(Error::config("the grid contains no group positions"));
    }
    let mut individuals = Vec::new();
    let mut groups = Vec::with_capacity(centers.len());
    for (g, &center) in centers.iter().enumerate() {
        let size = draw_group_size(cfg.mean_group_size, rng);
        let clan = cfg.clan_labels[rng.random_range(0..cfg.clan_labels.len())].clone();
        let start = individuals.len();
        for k in 0..size {
            individuals.push(Individual {
                id: format!("{}_{}", g + 1, k + 1),
                group: g,
                sex: pick(&SEX_LABELS, &cfg.sex_probs, rng).to_string(),
                age: pick(&AGE_LABELS, &cfg.age_probs, rng).to_string(),
                nose: pick(&NOSE_LABELS, &cfg.nose_probs, rng).to_string(),
                clan: clan.clone(),
            });
        }
        let members: Vec<usize> = (start..start + size).collect();
        let noses: Vec<&str> = members.iter().map(|&i| individuals[i].nose.as_str()).collect();
        let (rows, days) = simulate_subgroups(&noses, cfg.days, cfg.mean_subgroups, cfg.nose_assort, rng);
        let locs = locate(center, rows.len(), cfg.loc_sd, rng);
        let ids = members.iter().map(|&i| individuals[i].id.clone()).collect();
        let gbi = GroupByIndividual::new(rows, days, g, Some(locs), ids)?;
        groups.push(GroupData { gbi, center, clan, members });
    }

    let n_total = individuals.len();
    let clans: Vec<String> = groups.iter().map(|g| g.clan.clone()).collect();
    let refs: Vec<(&GroupByIndividual, usize)> = groups.iter().map(|g| (&g.gbi, g.members[0])).collect();
    let counts = count_between(&refs, &clans, cfg.p_within_clan, cfg.p_between_clan, cfg.days, n_total, rng);
    let mut m = Matrix::zeros(n_total);
    between_weights(&counts, n_total, cfg.days, &mut m)?;
    for g in &groups {
        let sri = sri_from_gbi(&g.gbi).graph;
        for (a, &x) in g.members.iter().enumerate() {
            for (b, &y) in g.members.iter().enumerate() {
                if a != b {
                    m.set(x, y, sri.weight(a, b));
                }
            }
        }
    }
    let ids = individuals.iter().map(|i| i.id.clone()).collect();
    let column = |f: fn(&Individual) -> String| individuals.iter().map(f).collect::<Vec<_>>();
    let association = LabeledGraph::new(m, false, ids)?
        .with_attr("group", column(|i| (i.group + 1).to_string()))?
        .with_attr("sex", column(|i| i.sex.clone()))?
        .with_attr("age", column(|i| i.age.clone()))?
        .with_attr("nose", column(|i| i.nose.clone()))?
        .with_attr("clan", column(|i| i.clan.clone()))?;
    let membership: Vec<usize> = individuals.iter().map(|i| i.group).collect();
    let mut group_net = collapse_group_network(&association, &membership, groups.len())?;
    group_net.clans = clans;
    group_net.centers = centers;
    Ok(SocietyData { config: cfg.clone(), groups, individuals, association, group_net })
}

// ---------------------------------------------------------------------------
// interactions

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InteractionConfig {
    pub kind: InteractionKind,
    /// Score contribution of each age class (`AD`, `SUB`, `JUV`).
    pub effect_by_age: BTreeMap<String, f64>,
    pub effect_male: f64,
    pub residual_sd: f64,
    /// Added to the logit when both individuals share a nose colour.
    pub nose_match_bonus: f64,
    /// Mean interactions per individual per subgroup observation.
    pub mean_rate: f64,
}

impl InteractionConfig {
    fn ages(ad: f64, sub: f64, juv: f64) -> BTreeMap<String, f64> {
        [("AD", ad), ("SUB", sub), ("JUV", juv)].into_iter().map(|(k, v)| (k.into(), v)).collect()
    }

    /// Resource-holding potential: adults win, males slightly less often.
    pub fn dominance() -> Self {
        InteractionConfig {
            kind: InteractionKind::Dominance,
            effect_by_age: Self::ages(1.0, 0.0, -1.0),
            effect_male: -0.5,
            residual_sd: 0.2,
            nose_match_bonus: 0.0,
            mean_rate: 2.0,
        }
    }

    /// Affiliative tendency: juveniles initiate, matching noses attract.
    pub fn affiliation() -> Self {
        InteractionConfig {
            kind: InteractionKind::Affiliation,
            effect_by_age: Self::ages(-1.0, -1.0, 1.0),
            effect_male: 0.0,
            residual_sd: 0.2,
            nose_match_bonus: 1.0,
            mean_rate: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.residual_sd >= 0.0) || !self.residual_sd.is_finite() {
            return Err(Error::config("residual_sd must be nonnegative"));
        }
        if !(self.mean_rate >= 0.0) || !self.mean_rate.is_finite() {
            return Err(Error::config("mean_rate must be nonnegative"));
        }
        Ok(())
    }
}

pub fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Latent scores, one per individual.
pub fn latent_scores<R: Rng + ?Sized>(
    attrs: &[Individual],
    cfg: &InteractionConfig,
    rng: &mut R,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    let normal = |mean: f64| Normal::new(mean, cfg.residual_sd).expect("validated sd");
    attrs
        .iter()
        .map(|a| {
            let age = *cfg
                .effect_by_age
                .get(&a.age)
                .ok_or_else(|| Error::config(format!("no effect for age class {:?}", a.age)))?;
            let male = if a.sex == "M" { cfg.effect_male } else { 0.0 };
            Ok(normal(age + male).sample(rng))
        })
        .collect()
}

/// Interactions inside every subgroup of `gbi` with two or more members.
/// `attrs[i]` describes GBI column `i`; actors and recipients in the
/// records are column indices.
pub fn simulate_interactions<R: Rng + ?Sized>(
    gbi: &GroupByIndividual,
    attrs: &[Individual],
    cfg: &InteractionConfig,
    rng: &mut R,
) -> Result<InteractionEvents> {
    if attrs.len() != gbi.n_individuals() {
        return Err(Error::data(format!(
            "attributes for {} of {} individuals",
            attrs.len(),
            gbi.n_individuals()
        )));
    }
    let scores = latent_scores(attrs, cfg, rng)?;
    interactions_from_scores(gbi, attrs, &scores, cfg, rng)
}

/// [`simulate_interactions`] with given latent scores.
pub fn interactions_from_scores<R: Rng + ?Sized>(
    gbi: &GroupByIndividual,
    attrs: &[Individual],
    scores: &[f64],
    cfg: &InteractionConfig,
    rng: &mut R,
) -> Result<InteractionEvents> {
    cfg.validate()?;
    let pois = (cfg.mean_rate > 0.0).then(|| Poisson::new(cfg.mean_rate).expect("validated rate"));
    let mut records = Vec::new();
    for e in 0..gbi.n_events() {
        let members = gbi.members(e);
        if members.len() < 2 {
            continue;
        }
        let per = pois.as_ref().map_or(0, |p| p.sample(rng) as usize);
        for _ in 0..per * members.len() {
            let a = rng.random_range(0..members.len());
            let mut b = rng.random_range(0..members.len() - 1);
            if b >= a {
                b += 1;
            }
            let (i1, i2) = (members[a], members[b]);
            let bonus = if attrs[i1].nose == attrs[i2].nose { cfg.nose_match_bonus } else { 0.0 };
            let p = logistic(scores[i1] - scores[i2] + bonus);
            let (actor, recipient) = if rng.random_bool(p) { (i1, i2) } else { (i2, i1) };
            records.push(Interaction { day: gbi.days()[e], event: e, actor, recipient, kind: cfg.kind });
        }
    }
    InteractionEvents::new(records)
}

// ---------------------------------------------------------------------------
// agent-based reference models for the group network

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbmMode {
    /// Individuals move independently around their group center.
    IndividualSpatial,
    /// Resimulated subgroups meet whenever they share a location.
    SubgroupSpatial,
    /// As `SubgroupSpatial` with clan-dependent intermingling.
    SocialClan,
}

impl AbmMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "individual_spatial" => Ok(AbmMode::IndividualSpatial),
            "subgroup_spatial" => Ok(AbmMode::SubgroupSpatial),
            "social_clan" => Ok(AbmMode::SocialClan),
            other => Err(Error::config(format!("unknown ABM mode {other:?}"))),
        }
    }
}

/// What an ABM keeps from the observed society.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupLayout {
    pub centers: Vec<(i64, i64)>,
    pub clans: Vec<String>,
    pub sizes: Vec<usize>,
}

/// Group network predicted by an agent-based model. Only `loc_sd`, `days`,
/// `mean_subgroups`, `nose_assort`, `nose_probs` and the clan probabilities
/// of `cfg` are used.
pub fn abm_reference<R: Rng + ?Sized>(
    layout: &GroupLayout,
    mode: AbmMode,
    cfg: &SocietyConfig,
    rng: &mut R,
) -> Result<GroupNetwork> {
    cfg.validate()?;
    let ng = layout.centers.len();
    if layout.clans.len() != ng || layout.sizes.len() != ng {
        return Err(Error::data("layout centers, clans and sizes differ in length"));
    }
    if layout.sizes.contains(&0) {
        return Err(Error::data("layout contains an empty group"));
    }
    let membership: Vec<usize> =
        layout.sizes.iter().enumerate().flat_map(|(g, &s)| std::iter::repeat_n(g, s)).collect();
    let n_total = membership.len();
    let mut m = Matrix::zeros(n_total);
    match mode {
        AbmMode::IndividualSpatial => {
            let steps = cfg.days as usize;
            let tracks: Vec<Vec<(i64, i64)>> =
                membership.iter().map(|&g| locate(layout.centers[g], steps, cfg.loc_sd, rng)).collect();
            for x in 0..n_total {
                for y in x + 1..n_total {
                    if membership[x] == membership[y] {
                        continue;
                    }
                    let same = tracks[x].iter().zip(&tracks[y]).filter(|(a, b)| a == b).count();
                    let w = same as f64 / steps as f64;
                    m.set(x, y, w);
                    m.set(y, x, w);
                }
            }
        }
        AbmMode::SubgroupSpatial | AbmMode::SocialClan => {
            let mut gbis = Vec::with_capacity(ng);
            for (g, &size) in layout.sizes.iter().enumerate() {
                let noses: Vec<&str> = (0..size).map(|_| pick(&NOSE_LABELS, &cfg.nose_probs, rng)).collect();
                let (rows, days) =
                    simulate_subgroups(&noses, cfg.days, cfg.mean_subgroups, cfg.nose_assort, rng);
                let locs = locate(layout.centers[g], rows.len(), cfg.loc_sd, rng);
                let ids = (0..size).map(|k| k.to_string()).collect();
                gbis.push(GroupByIndividual::new(rows, days, g, Some(locs), ids)?);
            }
            let mut offsets = Vec::with_capacity(ng);
            let mut acc = 0;
            for &s in &layout.sizes {
                offsets.push(acc);
                acc += s;
            }
            let refs: Vec<(&GroupByIndividual, usize)> = gbis.iter().zip(offsets).collect();
            let (pw, pb) = match mode {
                AbmMode::SocialClan => (cfg.p_within_clan, cfg.p_between_clan),
                _ => (1.0, 1.0),
            };
            let counts = count_between(&refs, &layout.clans, pw, pb, cfg.days, n_total, rng);
            between_weights(&counts, n_total, cfg.days, &mut m)?;
        }
    }
    let g = LabeledGraph::from_matrix(m, false)?;
    let mut net = collapse_group_network(&g, &membership, ng)?;
    net.clans = layout.clans.clone();
    net.centers = layout.centers.clone();
    Ok(net)
}
