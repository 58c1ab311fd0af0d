//! Plain-text file formats.
//!
//! * adjacency: square matrix with a header row and first column of node ids;
//! * GBI: `event_id, day, group, x, y`, then one 0/1 column per individual;
//! * events: `day, event_id, actor, recipient, kind` with individual ids;
//! * attributes: `id, group, sex, age, nose, clan`.
//!
//! Groups and events are numbered from 1 in files and from 0 in memory.
//! Weights are written with the shortest representation that reads back
//! to the same `f64`.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate::Individual;
use crate::graph::{
    GroupByIndividual, GroupNetwork, Interaction, InteractionEvents, InteractionKind, LabeledGraph, Matrix,
};

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

fn csv_err(what: &str, e: csv::Error) -> Error {
    Error::data(format!("{what}: {e}"))
}

/// Writes to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name =
        path.file_name().ok_or_else(|| Error::config(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(io_err(path, e));
    }
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::data(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, to_json_string(value)?.as_bytes())
}

/// Reads a JSON configuration; parse failures are configuration errors.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::data(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::data(e.to_string()))
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes())
}

fn parse_num<T: std::str::FromStr>(field: &str, what: &str, line: usize) -> Result<T> {
    field.parse().map_err(|_| Error::data(format!("line {line}: bad {what} {field:?}")))
}

// ---------------------------------------------------------------------------
// adjacency matrices

fn matrix_to_csv(m: &Matrix, ids: &[String]) -> Result<String> {
    let mut w = writer();
    let mut header = vec!["id".to_string()];
    header.extend(ids.iter().cloned());
    w.write_record(&header).map_err(|e| csv_err("adjacency", e))?;
    for (i, id) in ids.iter().enumerate() {
        let mut rec = vec![id.clone()];
        rec.extend(m.row(i).iter().map(|v| v.to_string()));
        w.write_record(&rec).map_err(|e| csv_err("adjacency", e))?;
    }
    finish(w)
}

fn parse_matrix(text: &str) -> Result<(Matrix, Vec<String>)> {
    let mut r = reader(text);
    let header = r.headers().map_err(|e| csv_err("adjacency header", e))?.clone();
    let ids: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let n = ids.len();
    let mut data = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_err("adjacency", e))?;
        let line = k + 2;
        if rec.len() != n + 1 {
            return Err(Error::data(format!("line {line}: {} fields, expected {}", rec.len(), n + 1)));
        }
        if rows >= n || rec[0] != ids[rows] {
            return Err(Error::data(format!("line {line}: row id {:?} does not match the header", &rec[0])));
        }
        for f in rec.iter().skip(1) {
            data.push(parse_num::<f64>(f, "weight", line)?);
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::data(format!("adjacency has {rows} rows for {n} columns")));
    }
    Ok((Matrix::from_vec(n, data)?, ids))
}

pub fn adjacency_to_csv(g: &LabeledGraph) -> Result<String> {
    matrix_to_csv(g.weights(), g.ids())
}

pub fn parse_adjacency(text: &str, directed: bool) -> Result<LabeledGraph> {
    let (m, ids) = parse_matrix(text)?;
    LabeledGraph::new(m, directed, ids)
}

pub fn write_adjacency(path: &Path, g: &LabeledGraph) -> Result<()> {
    write_atomic(path, adjacency_to_csv(g)?.as_bytes())
}

pub fn read_adjacency(path: &Path, directed: bool) -> Result<LabeledGraph> {
    parse_adjacency(&read_text(path)?, directed)
}

/// Group network as an adjacency matrix with groups labelled from 1.
pub fn group_net_to_csv(net: &GroupNetwork) -> Result<String> {
    let ids: Vec<String> = (1..=net.n_groups()).map(|g| g.to_string()).collect();
    matrix_to_csv(&net.weights, &ids)
}

pub fn parse_group_net(text: &str) -> Result<Matrix> {
    Ok(parse_matrix(text)?.0)
}

// ---------------------------------------------------------------------------
// group-by-individual matrices

pub fn gbi_to_csv(gbi: &GroupByIndividual) -> Result<String> {
    let mut w = writer();
    let mut header: Vec<String> = ["event_id", "day", "group", "x", "y"].map(String::from).to_vec();
    header.extend(gbi.ids().iter().cloned());
    w.write_record(&header).map_err(|e| csv_err("gbi", e))?;
    for e in 0..gbi.n_events() {
        let (x, y) = match gbi.locations() {
            Some(l) => (l[e].0.to_string(), l[e].1.to_string()),
            None => (String::new(), String::new()),
        };
        let mut rec =
            vec![(e + 1).to_string(), gbi.days()[e].to_string(), (gbi.group() + 1).to_string(), x, y];
        rec.extend(gbi.row(e).iter().map(|v| v.to_string()));
        w.write_record(&rec).map_err(|e| csv_err("gbi", e))?;
    }
    finish(w)
}

pub fn parse_gbi(text: &str) -> Result<GroupByIndividual> {
    let mut r = reader(text);
    let header = r.headers().map_err(|e| csv_err("gbi header", e))?.clone();
    let fixed = ["event_id", "day", "group", "x", "y"];
    if header.len() < fixed.len() || header.iter().zip(fixed).any(|(h, f)| h != f) {
        return Err(Error::data(format!("gbi header must start with {}", fixed.join(","))));
    }
    let ids: Vec<String> = header.iter().skip(5).map(str::to_string).collect();
    let mut rows = Vec::new();
    let mut days = Vec::new();
    let mut locs = Vec::new();
    let mut group = None;
    let mut located = None;
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_err("gbi", e))?;
        let line = k + 2;
        if rec.len() != header.len() {
            return Err(Error::data(format!("line {line}: {} fields, expected {}", rec.len(), header.len())));
        }
        days.push(parse_num::<u32>(&rec[1], "day", line)?);
        let g: usize = parse_num(&rec[2], "group", line)?;
        if g == 0 || *group.get_or_insert(g) != g {
            return Err(Error::data(format!("line {line}: group must be one positive value per file")));
        }
        let has_loc = !rec[3].is_empty() || !rec[4].is_empty();
        if *located.get_or_insert(has_loc) != has_loc {
            return Err(Error::data(format!("line {line}: locations must be given for all events or none")));
        }
        if has_loc {
            locs.push((parse_num(&rec[3], "x", line)?, parse_num(&rec[4], "y", line)?));
        }
        let row: Vec<u8> =
            rec.iter().skip(5).map(|f| parse_num::<u8>(f, "cell", line)).collect::<Result<_>>()?;
        rows.push(row);
    }
    let locations = located.unwrap_or(false).then_some(locs);
    GroupByIndividual::new(rows, days, group.unwrap_or(1) - 1, locations, ids)
}

pub fn write_gbi(path: &Path, gbi: &GroupByIndividual) -> Result<()> {
    write_atomic(path, gbi_to_csv(gbi)?.as_bytes())
}

pub fn read_gbi(path: &Path) -> Result<GroupByIndividual> {
    parse_gbi(&read_text(path)?)
}

// ---------------------------------------------------------------------------
// interaction records

/// `ids[i]` names individual `i` in the records.
pub fn events_to_csv(ev: &InteractionEvents, ids: &[String]) -> Result<String> {
    let mut w = writer();
    w.write_record(["day", "event_id", "actor", "recipient", "kind"]).map_err(|e| csv_err("events", e))?;
    for r in ev.records() {
        let name = |i: usize| {
            ids.get(i)
                .cloned()
                .ok_or_else(|| Error::data(format!("record names individual {i} without an id")))
        };
        w.write_record([
            r.day.to_string(),
            (r.event + 1).to_string(),
            name(r.actor)?,
            name(r.recipient)?,
            r.kind.as_str().to_string(),
        ])
        .map_err(|e| csv_err("events", e))?;
    }
    finish(w)
}

pub fn parse_events(text: &str, ids: &[String]) -> Result<InteractionEvents> {
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut r = reader(text);
    let header = r.headers().map_err(|e| csv_err("events header", e))?.clone();
    if header.iter().collect::<Vec<_>>() != ["day", "event_id", "actor", "recipient", "kind"] {
        return Err(Error::data("events header must be day,event_id,actor,recipient,kind"));
    }
    let mut records = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_err("events", e))?;
        let line = k + 2;
        let who = |f: &str| {
            index.get(f).copied().ok_or_else(|| Error::data(format!("line {line}: unknown individual {f:?}")))
        };
        let event: usize = parse_num(&rec[1], "event_id", line)?;
        if event == 0 {
            return Err(Error::data(format!("line {line}: event ids start at 1")));
        }
        records.push(Interaction {
            day: parse_num(&rec[0], "day", line)?,
            event: event - 1,
            actor: who(&rec[2])?,
            recipient: who(&rec[3])?,
            kind: InteractionKind::parse(&rec[4])?,
        });
    }
    InteractionEvents::new(records)
}

pub fn write_events(path: &Path, ev: &InteractionEvents, ids: &[String]) -> Result<()> {
    write_atomic(path, events_to_csv(ev, ids)?.as_bytes())
}

pub fn read_events(path: &Path, ids: &[String]) -> Result<InteractionEvents> {
    parse_events(&read_text(path)?, ids)
}

// ---------------------------------------------------------------------------
// individual attributes

pub fn attributes_to_csv(inds: &[Individual]) -> Result<String> {
    let mut w = writer();
    w.write_record(["id", "group", "sex", "age", "nose", "clan"]).map_err(|e| csv_err("attributes", e))?;
    for i in inds {
        w.write_record([&i.id, &(i.group + 1).to_string(), &i.sex, &i.age, &i.nose, &i.clan])
            .map_err(|e| csv_err("attributes", e))?;
    }
    finish(w)
}

pub fn parse_attributes(text: &str) -> Result<Vec<Individual>> {
    let mut r = reader(text);
    let header = r.headers().map_err(|e| csv_err("attributes header", e))?.clone();
    if header.iter().collect::<Vec<_>>() != ["id", "group", "sex", "age", "nose", "clan"] {
        return Err(Error::data("attributes header must be id,group,sex,age,nose,clan"));
    }
    let mut out = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_err("attributes", e))?;
        let line = k + 2;
        let group: usize = parse_num(&rec[1], "group", line)?;
        if group == 0 {
            return Err(Error::data(format!("line {line}: groups start at 1")));
        }
        out.push(Individual {
            id: rec[0].to_string(),
            group: group - 1,
            sex: rec[2].to_string(),
            age: rec[3].to_string(),
            nose: rec[4].to_string(),
            clan: rec[5].to_string(),
        });
    }
    Ok(out)
}

pub fn write_attributes(path: &Path, inds: &[Individual]) -> Result<()> {
    write_atomic(path, attributes_to_csv(inds)?.as_bytes())
}

pub fn read_attributes(path: &Path) -> Result<Vec<Individual>> {
    parse_attributes(&read_text(path)?)
}
