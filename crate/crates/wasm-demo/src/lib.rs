//! Browser bindings for the demo page in `www/`. Every export returns a JSON
//! string; the plain functions underneath are what the tests call.

use refnet::dist::graph_from_degree_sequence;
use refnet::generate::{simulate_society, SocietyConfig, SocietyData};
use refnet::graph::sri_from_gbi;
use refnet::infer::{histogram, reference_test};
use refnet::permute::{run_chain, ChainConfig, GbiChainState, GbiCheckerboardKernel, NodeLabelKernel};
use refnet::stats::StatSpec;
use refnet::{rng_from_seed, LabeledGraph};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_REPLICATES: usize = 20_000;
const BINS: usize = 25;

fn society(seed: u64, days: u32) -> Result<SocietyData, String> {
    let cfg = SocietyConfig { days, ..SocietyConfig::default() };
    simulate_society(&cfg, &mut rng_from_seed(seed)).map_err(|e| e.to_string())
}

fn graph_json(g: &LabeledGraph) -> Value {
    let n = g.n();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let w = g.weight(i, j);
            if w > 0.0 {
                edges.push(json!([i, j, w]));
            }
        }
    }
    json!({ "ids": g.ids(), "edges": edges })
}

/// Group 1 of a simulated society: its association network and nose colours.
pub fn group_network(seed: u64, days: u32) -> Result<Value, String> {
    let s = society(seed, days)?;
    let g = s.group_graph(0);
    let noses = g.attr("nose").map_err(|e| e.to_string())?.to_vec();
    let mut out = graph_json(&g);
    out["nose"] = json!(noses);
    out["groups"] = json!(s.groups.len());
    out["events"] = json!(s.groups[0].gbi.n_events());
    Ok(out)
}

fn summarize(observed: f64, refs: &[f64]) -> Result<Value, String> {
    let r = reference_test(observed, refs).map_err(|e| e.to_string())?;
    let mut pool = refs.to_vec();
    pool.push(observed);
    let h = histogram(&pool, BINS);
    Ok(json!({
        "observed": r.observed,
        "p": r.p_paper,
        "p_upper": r.p_upper,
        "ci": [r.ci_low, r.ci_high],
        "verdict": r.verdict.as_str(),
        "histogram": { "edges": h.edges, "counts": h.counts },
    }))
}

/// Nose-colour assortativity of group 1 against a node-label permutation,
/// or its edge-weight CV against a same-day GBI chain (`model = "gbi"`),
/// optionally also keeping swaps within a nose colour.
pub fn reference_run(
    seed: u64,
    days: u32,
    model: &str,
    replicates: usize,
    same_nose: bool,
) -> Result<Value, String> {
    if replicates == 0 || replicates > MAX_REPLICATES {
        return Err(format!("replicates must be between 1 and {MAX_REPLICATES}"));
    }
    let s = society(seed, days)?;
    let err = |e: refnet::Error| e.to_string();
    match model {
        "node_label" => {
            let stat = StatSpec::Assortativity { attribute: "nose".into(), weighted: true };
            let g = s.group_graph(0);
            let obs = stat.evaluate(&g).map_err(err)?;
            let cfg = ChainConfig::new(0, replicates, 1, seed ^ 0x5eed).map_err(err)?;
            let refs = run_chain(g, &NodeLabelKernel, &cfg, |x| stat.evaluate(x), false).map_err(err)?.series;
            summarize(obs, &refs)
        }
        "gbi" => {
            let gbi = s.groups[0].gbi.clone();
            let noses = s.group_individuals(0).into_iter().map(|i| i.nose).collect();
            let kernel = GbiCheckerboardKernel { same_day: true, same_attr: same_nose.then_some(noses) };
            let cv = |g: &refnet::GroupByIndividual| StatSpec::CvOffdiag.evaluate(&sri_from_gbi(g).graph);
            let obs = cv(&gbi).map_err(err)?;
            let cfg = ChainConfig::new(500, replicates * 10, 10, seed ^ 0x5eed).map_err(err)?;
            let state = GbiChainState::new(gbi).map_err(err)?;
            let refs = run_chain(state, &kernel, &cfg, |st| cv(st.gbi()), false).map_err(err)?.series;
            summarize(obs, &refs)
        }
        other => Err(format!("unknown model {other:?}")),
    }
}

/// A random simple graph with the given degrees (whitespace or comma separated).
pub fn degree_graph(degrees: &str, seed: u64) -> Result<Value, String> {
    let seq = degrees
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("not a degree: {t:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    if seq.len() > 200 {
        return Err("at most 200 nodes".into());
    }
    let g = graph_from_degree_sequence(&seq, 1000, &mut rng_from_seed(seed)).map_err(|e| e.to_string())?;
    Ok(graph_json(&g))
}

fn js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = groupNetwork)]
pub fn group_network_js(seed: u32, days: u32) -> Result<String, JsValue> {
    js(group_network(seed.into(), days))
}

#[wasm_bindgen(js_name = referenceRun)]
pub fn reference_run_js(
    seed: u32,
    days: u32,
    model: &str,
    replicates: u32,
    same_nose: bool,
) -> Result<String, JsValue> {
    js(reference_run(seed.into(), days, model, replicates as usize, same_nose))
}

#[wasm_bindgen(js_name = degreeGraph)]
pub fn degree_graph_js(degrees: &str, seed: u32) -> Result<String, JsValue> {
    js(degree_graph(degrees, seed.into()))
}
