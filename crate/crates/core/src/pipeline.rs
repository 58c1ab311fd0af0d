//! End-to-end commands: simulate a society to files, and run a reference
//! model test described by a JSON config.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dist::{
    chung_lu, fit_degree_poisson, fit_normal_weights, graph_from_degree_sequence, naive_weighted_er,
    sample_poisson_degree_graph, DEFAULT_MAX_ATTEMPTS,
};
use crate::error::{Error, Result};
use crate::generate::{
    simulate_interactions, simulate_society, Individual, InteractionConfig, SocietyConfig,
};
use crate::graph::{sri_from_gbi, weighted_from_events, GroupByIndividual, InteractionEvents, LabeledGraph};
use crate::infer::{chain_diagnostics, histogram, reference_test, Histogram, Verdict};
use crate::io;
use crate::permute::{
    run_chain, ActorSwapKernel, ChainConfig, EdgeDirectionKernel, EdgeWeightKernel, EndpointRewireKernel,
    GbiChainState, GbiCheckerboardKernel, NodeLabelKernel,
};
use crate::resample::{bootstrap_gbi_rows, resample_degree_sequence};
use crate::rng_from_seed;
use crate::stats::StatSpec;

/// Histogram bins written to results files.
pub const HISTOGRAM_BINS: usize = 30;

const MAX_SEQUENCE_RETRIES: usize = 100;

// ---------------------------------------------------------------------------
// simulate

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub society: SocietyConfig,
    pub dominance: InteractionConfig,
    pub affiliation: InteractionConfig,
    /// Group (numbered from 1) whose interactions are simulated.
    pub interaction_group: usize,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            society: SocietyConfig::default(),
            dominance: InteractionConfig::dominance(),
            affiliation: InteractionConfig::affiliation(),
            interaction_group: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupInfo {
    pub group: usize,
    pub clan: String,
    pub center: (i64, i64),
    pub size: usize,
    pub events: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub config: SimulateConfig,
    pub groups: Vec<GroupInfo>,
    pub files: Vec<String>,
}

/// Simulates a society and writes it to `out_dir`.
pub fn cmd_simulate(cfg: &SimulateConfig, seed: u64, out_dir: &Path) -> Result<Manifest> {
    cfg.society.validate()?;
    cfg.dominance.validate()?;
    cfg.affiliation.validate()?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::Io { path: out_dir.display().to_string(), source: e })?;
    let mut rng = rng_from_seed(seed);
    let society = simulate_society(&cfg.society, &mut rng)?;
    let ig = cfg.interaction_group;
    if ig == 0 || ig > society.groups.len() {
        return Err(Error::config(format!("interaction_group {ig} outside 1..={}", society.groups.len())));
    }
    let group = &society.groups[ig - 1];
    let attrs = society.group_individuals(ig - 1);

    let mut files = Vec::new();
    let mut put = |name: String, text: String| -> Result<()> {
        io::write_atomic(&out_dir.join(&name), text.as_bytes())?;
        files.push(name);
        Ok(())
    };
    put("attributes.csv".into(), io::attributes_to_csv(&society.individuals)?)?;
    for (g, data) in society.groups.iter().enumerate() {
        put(format!("gbi_{}.csv", g + 1), io::gbi_to_csv(&data.gbi)?)?;
    }
    for icfg in [&cfg.dominance, &cfg.affiliation] {
        let ev = simulate_interactions(&group.gbi, &attrs, icfg, &mut rng)?;
        put(format!("events_{}.csv", icfg.kind.as_str()), io::events_to_csv(&ev, group.gbi.ids())?)?;
    }
    put("adjacency.csv".into(), io::adjacency_to_csv(&society.association)?)?;
    put("group_net.csv".into(), io::group_net_to_csv(&society.group_net)?)?;

    let groups = society
        .groups
        .iter()
        .enumerate()
        .map(|(g, d)| GroupInfo {
            group: g + 1,
            clan: d.clan.clone(),
            center: d.center,
            size: d.members.len(),
            events: d.gbi.n_events(),
        })
        .collect();
    files.push("manifest.json".into());
    let manifest = Manifest { seed, config: cfg.clone(), groups, files };
    io::write_json(&out_dir.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

// ---------------------------------------------------------------------------
// test configuration

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    NodeLabel,
    EdgeDirection,
    EdgeWeight,
    EndpointRewire,
    GbiCheckerboard,
    ActorSwap,
    BootstrapGbi,
    ResampleDegrees,
    PoissonDegree,
    ChungLu,
    NaiveEr,
}

impl Kernel {
    pub const ALL: [Kernel; 11] = [
        Kernel::NodeLabel,
        Kernel::EdgeDirection,
        Kernel::EdgeWeight,
        Kernel::EndpointRewire,
        Kernel::GbiCheckerboard,
        Kernel::ActorSwap,
        Kernel::BootstrapGbi,
        Kernel::ResampleDegrees,
        Kernel::PoissonDegree,
        Kernel::ChungLu,
        Kernel::NaiveEr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kernel::NodeLabel => "node_label",
            Kernel::EdgeDirection => "edge_direction",
            Kernel::EdgeWeight => "edge_weight",
            Kernel::EndpointRewire => "endpoint_rewire",
            Kernel::GbiCheckerboard => "gbi_checkerboard",
            Kernel::ActorSwap => "actor_swap",
            Kernel::BootstrapGbi => "bootstrap_gbi",
            Kernel::ResampleDegrees => "resample_degrees",
            Kernel::PoissonDegree => "poisson_degree",
            Kernel::ChungLu => "chung_lu",
            Kernel::NaiveEr => "naive_er",
        }
    }

    /// Markov chain kernels use burn-in and thinning.
    pub fn is_chain(self) -> bool {
        matches!(
            self,
            Kernel::EdgeDirection
                | Kernel::EdgeWeight
                | Kernel::EndpointRewire
                | Kernel::GbiCheckerboard
                | Kernel::ActorSwap
        )
    }
}

impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kernel::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = Kernel::ALL.iter().map(|k| k.name()).collect();
            Error::config(format!("unknown model {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

/// Swap constraint, written as `same_day`, `same_attr=<name>`,
/// `class_pair=<attr>:<a>,<b>` (alternatives inside a class separated by
/// `|`) or `nonzero_only`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    SameDay,
    SameAttr(String),
    ClassPair { attribute: String, a: Vec<String>, b: Vec<String> },
    NonzeroOnly,
}

impl FromStr for Constraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::config(format!("malformed constraint {s:?}"));
        match s.split_once('=') {
            None if s == "same_day" => Ok(Constraint::SameDay),
            None if s == "nonzero_only" => Ok(Constraint::NonzeroOnly),
            Some(("same_attr", name)) if !name.is_empty() => Ok(Constraint::SameAttr(name.into())),
            Some(("class_pair", rest)) => {
                let (attr, classes) = rest.split_once(':').ok_or_else(bad)?;
                let (a, b) = classes.split_once(',').ok_or_else(bad)?;
                let split = |c: &str| -> Vec<String> {
                    c.split('|').map(str::trim).filter(|v| !v.is_empty()).map(String::from).collect()
                };
                let (a, b) = (split(a), split(b));
                if attr.is_empty() || a.is_empty() || b.is_empty() {
                    return Err(bad());
                }
                Ok(Constraint::ClassPair { attribute: attr.into(), a, b })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::SameDay => write!(f, "same_day"),
            Constraint::NonzeroOnly => write!(f, "nonzero_only"),
            Constraint::SameAttr(a) => write!(f, "same_attr={a}"),
            Constraint::ClassPair { attribute, a, b } => {
                write!(f, "class_pair={attribute}:{},{}", a.join("|"), b.join("|"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacency: Option<PathBuf>,
    /// Whether the adjacency matrix is directed.
    #[serde(default)]
    pub directed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gbi: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attributes: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kernel: Kernel,
    #[serde(default)]
    pub constraints: Vec<String>,
    /// Actor swaps: refuse swaps creating self-interactions.
    #[serde(default = "yes")]
    pub forbid_self: bool,
    /// Naive ER: fit the weight distribution over all n² cells.
    #[serde(default = "yes")]
    pub include_diagonal: bool,
}

fn yes() -> bool {
    true
}

impl ModelSpec {
    pub fn new(kernel: Kernel) -> Self {
        ModelSpec { kernel, constraints: Vec::new(), forbid_self: true, include_diagonal: true }
    }

    pub fn parsed_constraints(&self) -> Result<Vec<Constraint>> {
        self.constraints.iter().map(|c| c.parse()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSettings {
    #[serde(default = "burn_in_default")]
    pub burn_in: usize,
    #[serde(default = "thin_default")]
    pub thin: usize,
}

fn burn_in_default() -> usize {
    500
}

fn thin_default() -> usize {
    10
}

impl Default for ChainSettings {
    fn default() -> Self {
        ChainSettings { burn_in: burn_in_default(), thin: thin_default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub inputs: Inputs,
    pub model: ModelSpec,
    pub statistic: StatSpec,
    #[serde(default)]
    pub chain: ChainSettings,
    pub replicates: usize,
    pub seed: u64,
    #[serde(default = "output_default")]
    pub output: PathBuf,
    /// Directory relative paths are resolved against. Not serialized, so
    /// the echoed config is the one the user wrote.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn output_default() -> PathBuf {
    PathBuf::from("results.json")
}

impl PipelineConfig {
    /// Reads a config; relative paths are taken relative to its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg: PipelineConfig = io::read_json(path)?;
        cfg.base_dir = path.parent().unwrap_or(Path::new("")).to_path_buf();
        Ok(cfg)
    }

    /// `p` resolved against the directory the config was loaded from.
    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_relative() {
            self.base_dir.join(p)
        } else {
            p.to_path_buf()
        }
    }

    pub fn output_path(&self) -> PathBuf {
        self.resolve(&self.output)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::config("replicates must be at least 1"));
        }
        if self.chain.thin == 0 {
            return Err(Error::config("thin must be at least 1"));
        }
        let constraints = self.model.parsed_constraints()?;
        for c in &constraints {
            let ok = match c {
                Constraint::SameDay | Constraint::SameAttr(_) => self.model.kernel == Kernel::GbiCheckerboard,
                Constraint::ClassPair { .. } => self.model.kernel == Kernel::EdgeDirection,
                Constraint::NonzeroOnly => self.model.kernel == Kernel::EdgeWeight,
            };
            if !ok {
                return Err(Error::Incompatible(format!(
                    "constraint {c} does not apply to the {} model",
                    self.model.kernel.name()
                )));
            }
        }
        if self.model.kernel == Kernel::EdgeDirection
            && !constraints.iter().any(|c| matches!(c, Constraint::ClassPair { .. }))
        {
            return Err(Error::config("edge_direction needs a class_pair constraint"));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// results

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub acceptance_rate: f64,
    pub lag1_autocorr: Option<f64>,
    pub split_z: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Results {
    pub statistic: String,
    pub model: String,
    pub observed: f64,
    pub references: Vec<f64>,
    pub pool_size: usize,
    pub p_paper: f64,
    pub p_upper: f64,
    pub ci: [f64; 2],
    pub verdict: Verdict,
    pub diagnostics: Option<Diagnostics>,
    pub histogram: Histogram,
    pub config: PipelineConfig,
}

impl Results {
    pub fn summary(&self) -> String {
        format!(
            "{} under {}: observed {:.6}, p = {:.6} (add-one {:.6}), 95% interval [{:.6}, {:.6}], {} references: {}",
            self.statistic,
            self.model,
            self.observed,
            self.p_paper,
            self.p_upper,
            self.ci[0],
            self.ci[1],
            self.references.len(),
            self.verdict.as_str()
        )
    }
}

/// JSON schema for results files.
pub const RESULTS_SCHEMA: &str = include_str!("../schema/results.schema.json");

// ---------------------------------------------------------------------------
// test

struct Population {
    ids: Vec<String>,
    attrs: BTreeMap<String, Vec<String>>,
}

impl Population {
    fn graph(&self, g: LabeledGraph) -> LabeledGraph {
        let (w, directed) = (g.weights().clone(), g.is_directed());
        LabeledGraph::from_parts_unchecked(w, directed, self.ids.clone(), self.attrs.clone())
    }
}

fn attribute_columns(
    ids: &[String],
    individuals: Option<&[Individual]>,
) -> Result<BTreeMap<String, Vec<String>>> {
    let mut out = BTreeMap::new();
    let Some(inds) = individuals else { return Ok(out) };
    let by_id: BTreeMap<&str, &Individual> = inds.iter().map(|i| (i.id.as_str(), i)).collect();
    let rows: Vec<&Individual> = ids
        .iter()
        .map(|id| {
            by_id
                .get(id.as_str())
                .copied()
                .ok_or_else(|| Error::data(format!("individual {id:?} missing from the attributes file")))
        })
        .collect::<Result<_>>()?;
    let col = |f: fn(&Individual) -> String| rows.iter().map(|i| f(i)).collect::<Vec<_>>();
    out.insert("group".into(), col(|i| (i.group + 1).to_string()));
    out.insert("sex".into(), col(|i| i.sex.clone()));
    out.insert("age".into(), col(|i| i.age.clone()));
    out.insert("nose".into(), col(|i| i.nose.clone()));
    out.insert("clan".into(), col(|i| i.clan.clone()));
    Ok(out)
}

enum Observed {
    Graph(LabeledGraph),
    Gbi(GroupByIndividual),
    Events(InteractionEvents),
}

fn need(cfg: &PipelineConfig, p: &Option<PathBuf>, what: &str) -> Result<PathBuf> {
    p.as_deref()
        .map(|p| cfg.resolve(p))
        .ok_or_else(|| Error::config(format!("the {} model needs a {what} input", cfg.model.kernel.name())))
}

fn load(cfg: &PipelineConfig) -> Result<(Observed, Population)> {
    let inputs = &cfg.inputs;
    let kernel = cfg.model.kernel;
    let individuals =
        inputs.attributes.as_deref().map(|p| io::read_attributes(&cfg.resolve(p))).transpose()?;
    let individuals = individuals.as_deref();
    let (observed, ids) = match kernel {
        Kernel::GbiCheckerboard | Kernel::BootstrapGbi => {
            let gbi = io::read_gbi(&need(cfg, &inputs.gbi, "gbi")?)?;
            let ids = gbi.ids().to_vec();
            (Observed::Gbi(gbi), ids)
        }
        Kernel::ActorSwap => events_input(cfg)?,
        _ => {
            if let Some(p) = &inputs.adjacency {
                let g = io::read_adjacency(&cfg.resolve(p), inputs.directed)?;
                let ids = g.ids().to_vec();
                (Observed::Graph(g), ids)
            } else if inputs.events.is_some() {
                let (ev, ids) = events_input(cfg)?;
                let Observed::Events(ev) = ev else { unreachable!() };
                let g = weighted_from_events(&ev, ids.len())?;
                (Observed::Graph(g), ids)
            } else if let Some(p) = &inputs.gbi {
                let gbi = io::read_gbi(&cfg.resolve(p))?;
                let ids = gbi.ids().to_vec();
                (Observed::Graph(sri_from_gbi(&gbi).graph), ids)
            } else {
                return Err(Error::config(format!(
                    "the {} model needs an adjacency, events or gbi input",
                    kernel.name()
                )));
            }
        }
    };
    let attrs = attribute_columns(&ids, individuals)?;
    Ok((observed, Population { ids, attrs }))
}

/// Events are named by the ids of the GBI they were recorded in.
fn events_input(cfg: &PipelineConfig) -> Result<(Observed, Vec<String>)> {
    let gbi = io::read_gbi(&need(cfg, &cfg.inputs.gbi, "gbi (for individual ids)")?)?;
    let ev = io::read_events(&need(cfg, &cfg.inputs.events, "events")?, gbi.ids())?;
    ev.validate_against(&gbi)?;
    Ok((Observed::Events(ev), gbi.ids().to_vec()))
}

fn class_indices(g: &LabeledGraph, attribute: &str, values: &[String]) -> Result<Vec<usize>> {
    let col = g
        .attr(attribute)
        .map_err(|_| Error::Incompatible(format!("class_pair refers to missing attribute {attribute:?}")))?;
    Ok((0..g.n()).filter(|&i| values.contains(&col[i])).collect())
}

struct Generated {
    references: Vec<f64>,
    diagnostics: Option<Diagnostics>,
}

fn chain_generated(r: crate::permute::ChainResult, steps: usize) -> Generated {
    let d = chain_diagnostics(&r.series).ok();
    Generated {
        diagnostics: Some(Diagnostics {
            acceptance_rate: r.accepted as f64 / steps as f64,
            lag1_autocorr: d.and_then(|d| d.lag1_autocorr),
            split_z: d.map(|d| d.split_z),
        }),
        references: r.series,
    }
}

fn independent<F>(cfg: &PipelineConfig, mut draw: F) -> Result<Generated>
where
    F: FnMut(&mut crate::SimRng) -> Result<f64>,
{
    let mut rng = rng_from_seed(cfg.seed);
    let references = (0..cfg.replicates).map(|_| draw(&mut rng)).collect::<Result<_>>()?;
    Ok(Generated { references, diagnostics: None })
}

/// Runs a reference model test and writes the results file.
pub fn cmd_test(cfg: &PipelineConfig) -> Result<Results> {
    let results = run_test(cfg)?;
    io::write_json(&cfg.output_path(), &results)?;
    Ok(results)
}

/// [`cmd_test`] without writing anything.
pub fn run_test(cfg: &PipelineConfig) -> Result<Results> {
    cfg.validate()?;
    let (observed_data, pop) = load(cfg)?;
    let stat = &cfg.statistic;
    let kernel = cfg.model.kernel;
    let constraints = cfg.model.parsed_constraints()?;
    let chain = ChainConfig {
        burn_in: cfg.chain.burn_in,
        steps: cfg.replicates * cfg.chain.thin,
        thin: cfg.chain.thin,
        seed: cfg.seed,
    };

    // Everything below is checked before any reference value is generated.
    let obs_graph = match &observed_data {
        Observed::Graph(g) => pop.graph(g.clone()),
        Observed::Gbi(gbi) => pop.graph(sri_from_gbi(gbi).graph),
        Observed::Events(ev) => pop.graph(weighted_from_events(ev, pop.ids.len())?),
    };
    stat.check_compatible(&obs_graph)?;
    if matches!(kernel, Kernel::EdgeDirection | Kernel::EndpointRewire) && !obs_graph.is_directed() {
        return Err(Error::Incompatible(format!("the {} model needs a directed network", kernel.name())));
    }
    if matches!(kernel, Kernel::ResampleDegrees | Kernel::PoissonDegree | Kernel::ChungLu | Kernel::NaiveEr)
        && obs_graph.is_directed()
    {
        return Err(Error::Incompatible(format!("the {} model builds undirected networks", kernel.name())));
    }
    let observed = stat.evaluate(&obs_graph)?;

    let generated = match kernel {
        Kernel::NodeLabel => {
            let r = run_chain(
                obs_graph.clone(),
                &NodeLabelKernel,
                &ChainConfig { burn_in: 0, steps: cfg.replicates, thin: 1, seed: cfg.seed },
                |g| stat.evaluate(g),
                false,
            )?;
            Generated { references: r.series, diagnostics: None }
        }
        Kernel::EdgeDirection => {
            let Some(Constraint::ClassPair { attribute, a, b }) =
                constraints.iter().find(|c| matches!(c, Constraint::ClassPair { .. }))
            else {
                unreachable!("validated")
            };
            let k = EdgeDirectionKernel::new(
                class_indices(&obs_graph, attribute, a)?,
                class_indices(&obs_graph, attribute, b)?,
            )?;
            chain_generated(
                run_chain(obs_graph.clone(), &k, &chain, |g| stat.evaluate(g), false)?,
                chain.steps,
            )
        }
        Kernel::EdgeWeight => {
            let k = EdgeWeightKernel { nonzero_only: constraints.contains(&Constraint::NonzeroOnly) };
            chain_generated(
                run_chain(obs_graph.clone(), &k, &chain, |g| stat.evaluate(g), false)?,
                chain.steps,
            )
        }
        Kernel::EndpointRewire => chain_generated(
            run_chain(obs_graph.clone(), &EndpointRewireKernel, &chain, |g| stat.evaluate(g), false)?,
            chain.steps,
        ),
        Kernel::GbiCheckerboard => {
            let Observed::Gbi(gbi) = observed_data else { unreachable!() };
            let mut k = GbiCheckerboardKernel::default();
            for c in &constraints {
                match c {
                    Constraint::SameDay => k.same_day = true,
                    Constraint::SameAttr(name) => {
                        let col = pop.attrs.get(name).ok_or_else(|| {
                            Error::Incompatible(format!("same_attr refers to missing attribute {name:?}"))
                        })?;
                        k.same_attr = Some(col.clone());
                    }
                    _ => {}
                }
            }
            let state = GbiChainState::new(gbi)?;
            let r = run_chain(
                state,
                &k,
                &chain,
                |s| stat.evaluate(&pop.graph(sri_from_gbi(s.gbi()).graph)),
                false,
            )?;
            chain_generated(r, chain.steps)
        }
        Kernel::ActorSwap => {
            let Observed::Events(ev) = observed_data else { unreachable!() };
            let k = ActorSwapKernel::new(&ev, cfg.model.forbid_self);
            let n = pop.ids.len();
            let r =
                run_chain(ev, &k, &chain, |e| stat.evaluate(&pop.graph(weighted_from_events(e, n)?)), false)?;
            chain_generated(r, chain.steps)
        }
        Kernel::BootstrapGbi => {
            let Observed::Gbi(gbi) = observed_data else { unreachable!() };
            independent(cfg, |rng| {
                stat.evaluate(&pop.graph(sri_from_gbi(&bootstrap_gbi_rows(&gbi, rng)).graph))
            })?
        }
        Kernel::ResampleDegrees => {
            let degrees = obs_graph.degrees();
            independent(cfg, |rng| {
                for _ in 0..MAX_SEQUENCE_RETRIES {
                    let seq = resample_degree_sequence(&degrees, rng)?;
                    match graph_from_degree_sequence(&seq, DEFAULT_MAX_ATTEMPTS, rng) {
                        Ok(g) => return stat.evaluate(&pop.graph(g)),
                        Err(Error::NotRealizable(_)) | Err(Error::ConstructionFailed { .. }) => {}
                        Err(e) => return Err(e),
                    }
                }
                Err(Error::RetriesExhausted { retries: MAX_SEQUENCE_RETRIES })
            })?
        }
        Kernel::PoissonDegree => {
            let degrees: Vec<f64> = obs_graph.degrees().iter().map(|&d| d as f64).collect();
            let lambda = fit_degree_poisson(&degrees)?;
            let n = obs_graph.n();
            independent(cfg, |rng| {
                stat.evaluate(&pop.graph(sample_poisson_degree_graph(n, lambda, MAX_SEQUENCE_RETRIES, rng)?))
            })?
        }
        Kernel::ChungLu => {
            let degrees: Vec<f64> = obs_graph.degrees().iter().map(|&d| d as f64).collect();
            independent(cfg, |rng| stat.evaluate(&pop.graph(chung_lu(&degrees, rng)?)))?
        }
        Kernel::NaiveEr => {
            let (mu, sigma) = fit_normal_weights(obs_graph.weights(), cfg.model.include_diagonal)?;
            let (n, m) = (obs_graph.n(), obs_graph.edge_count());
            independent(cfg, |rng| stat.evaluate(&pop.graph(naive_weighted_er(n, m, mu, sigma, rng)?)))?
        }
    };

    let run = reference_test(observed, &generated.references)?;
    let mut pool = run.references.clone();
    pool.push(observed);
    Ok(Results {
        statistic: stat.name().to_string(),
        model: kernel.name().to_string(),
        observed,
        pool_size: run.pool_size(),
        p_paper: run.p_paper,
        p_upper: run.p_upper,
        ci: [run.ci_low, run.ci_high],
        verdict: run.verdict,
        diagnostics: generated.diagnostics,
        histogram: histogram(&pool, HISTOGRAM_BINS),
        references: run.references,
        config: cfg.clone(),
    })
}
