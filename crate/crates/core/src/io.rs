//! File formats: graphons and bigraphons as JSON, graphs and bigraphs as
//! edge lists, partitions and set families as JSON. Writers print floats
//! with 17 significant digits.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::{Error, Result};
use crate::graph::{Bigraph, Graph};
use crate::kernel::{StepBigraphon, StepGraphon};
use crate::partition::Partition;
use crate::setsystems::SetFamily;

/// A float with 17 significant digits, e.g. `5.0000000000000000e-1`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Compact JSON with every float written by [`fmt_f64`]; non-finite
/// values become `null`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(fmt_f64(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes `value` with [`FullPrecision`] and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision);
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON output is UTF-8")
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Serialize, Deserialize)]
struct GraphonFile {
    k: usize,
    mu: Vec<f64>,
    w: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct BigraphonFile {
    k1: usize,
    k2: usize,
    mu1: Vec<f64>,
    mu2: Vec<f64>,
    w: Vec<Vec<f64>>,
}

pub fn graphon_to_json(w: &StepGraphon) -> String {
    to_json(&GraphonFile {
        k: w.k(),
        mu: w.mu().to_vec(),
        w: w.to_rows(),
    })
}

pub fn graphon_from_json(text: &str) -> Result<StepGraphon> {
    let f: GraphonFile = parse_json(text)?;
    if f.mu.len() != f.k {
        return Err(Error::Shape(format!(
            "k is {} but mu has {} entries",
            f.k,
            f.mu.len()
        )));
    }
    StepGraphon::new(f.mu, f.w)
}

pub fn bigraphon_to_json(w: &StepBigraphon) -> String {
    to_json(&BigraphonFile {
        k1: w.k1(),
        k2: w.k2(),
        mu1: w.mu1().to_vec(),
        mu2: w.mu2().to_vec(),
        w: w.to_rows(),
    })
}

pub fn bigraphon_from_json(text: &str) -> Result<StepBigraphon> {
    let f: BigraphonFile = parse_json(text)?;
    if f.mu1.len() != f.k1 || f.mu2.len() != f.k2 {
        return Err(Error::Shape("k1/k2 disagree with mu1/mu2".into()));
    }
    StepBigraphon::new(f.mu1, f.mu2, f.w)
}

/// Nonempty lines with their 1-based line numbers; `#` starts a comment.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn parse_fields(line: usize, fields: &[&str], expect: usize) -> Result<Vec<usize>> {
    if fields.len() != expect {
        return Err(Error::Parse(format!(
            "line {line}: expected {expect} integers, found {}",
            fields.len()
        )));
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<usize>().map_err(|_| {
                Error::Parse(format!("line {line}: `{f}` is not a nonnegative integer"))
            })
        })
        .collect()
}

/// Header `n1 n2 m` (or `n m`), then `m` edge lines. Returns the header
/// and the edges.
type EdgeList = (Vec<usize>, Vec<(usize, usize)>);

fn parse_edge_list(text: &str, header_len: usize) -> Result<EdgeList> {
    let mut lines = data_lines(text);
    let (line, fields) = lines
        .next()
        .ok_or_else(|| Error::Parse("line 1: missing header".into()))?;
    let header = parse_fields(line, &fields, header_len)?;
    let m = header[header_len - 1];
    let mut edges = Vec::with_capacity(m);
    let mut last = line;
    for (line, fields) in lines {
        let e = parse_fields(line, &fields, 2)?;
        edges.push((e[0], e[1]));
        last = line;
        if edges.len() > m {
            return Err(Error::Parse(format!("line {line}: more than {m} edges")));
        }
    }
    if edges.len() != m {
        return Err(Error::Parse(format!(
            "line {last}: header announces {m} edges, found {}",
            edges.len()
        )));
    }
    Ok((header, edges))
}

pub fn graph_from_text(text: &str) -> Result<Graph> {
    let (header, edges) = parse_edge_list(text, 2)?;
    Graph::new(header[0], edges).map_err(|e| Error::Parse(e.to_string()))
}

pub fn graph_to_text(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn bigraph_from_text(text: &str) -> Result<Bigraph> {
    let (header, edges) = parse_edge_list(text, 3)?;
    Bigraph::new(header[0], header[1], edges).map_err(|e| Error::Parse(e.to_string()))
}

pub fn bigraph_to_text(b: &Bigraph) -> String {
    let mut out = format!("{} {} {}\n", b.n1(), b.n2(), b.edge_count());
    for (u, v) in b.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct PartitionFile {
    classes: Vec<Vec<usize>>,
}

pub fn partition_to_json(p: &Partition) -> String {
    to_json(&PartitionFile {
        classes: p.classes(),
    })
}

/// Reads class lists for a partition of the steps of `base`.
pub fn partition_from_json(text: &str, base: &[f64]) -> Result<Partition> {
    let f: PartitionFile = parse_json(text)?;
    Partition::from_classes(base.to_vec(), &f.classes)
}

#[derive(Serialize, Deserialize)]
struct SetFamilyFile {
    m: usize,
    weights: Option<Vec<f64>>,
    sets: Vec<Vec<usize>>,
}

pub fn set_family_to_json(h: &SetFamily) -> String {
    to_json(&SetFamilyFile {
        m: h.m(),
        weights: h.weights().map(<[f64]>::to_vec),
        sets: h.sets(),
    })
}

pub fn set_family_from_json(text: &str) -> Result<SetFamily> {
    let f: SetFamilyFile = parse_json(text)?;
    SetFamily::new(f.m, &f.sets, f.weights)
}
