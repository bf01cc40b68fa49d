//! Line-oriented system description files.
//!
//! ```text
//! gifs 1 dim=2 order=0
//! vertex v J=0,0|1,1 O=-0.5,-0.5|1.5,1.5
//! edge a v v
//! map a k=0 M=0.5,0,0,0.5 a=0,0
//! tail polynomial scale=1 exponent=2
//! ```
//!
//! `map ... k=0` is the unperturbed map; `k>=1` lines are perturbation
//! coefficients and are only allowed when `order>=k`. `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::graph::{DirectedMultigraph, Edge};
use crate::linalg::SquareMatrix;
use crate::model::{AffineMap, AffineSystem, AxisBox, ModelError, PerturbedFamily};
use crate::pressure::{TailKind, TailRule};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("line {line}: {field}: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },
    #[error("invalid system: {0}")]
    Invalid(#[from] ModelError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl SpecError {
    fn parse(line: usize, field: &str, message: impl Into<String>) -> Self {
        SpecError::Parse {
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }
}

/// Either a plain system (`order=0`) or a perturbed family.
#[derive(Debug, Clone)]
pub enum Spec {
    System(AffineSystem),
    Family(PerturbedFamily),
}

impl Spec {
    pub fn base(&self) -> &AffineSystem {
        match self {
            Spec::System(s) => s,
            Spec::Family(f) => f.base(),
        }
    }

    pub fn into_family(self) -> PerturbedFamily {
        match self {
            Spec::System(s) => PerturbedFamily::constant(s, 0),
            Spec::Family(f) => f,
        }
    }
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<Spec, SpecError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_spec(&text)
}

fn parse_numbers(line: usize, field: &str, s: &str) -> Result<Vec<f64>, SpecError> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| SpecError::parse(line, field, format!("malformed number {t:?}")))
        })
        .collect()
}

fn parse_box(line: usize, field: &str, s: &str, dim: usize) -> Result<AxisBox, SpecError> {
    let (lo, hi) = s
        .split_once('|')
        .ok_or_else(|| SpecError::parse(line, field, "expected <low...>|<high...>"))?;
    let low = parse_numbers(line, field, lo)?;
    let high = parse_numbers(line, field, hi)?;
    if low.len() != dim || high.len() != dim {
        return Err(SpecError::parse(line, field, format!("expected {dim} coordinates per corner")));
    }
    Ok(AxisBox::new(low, high))
}

/// `key=value` tokens after the positional ones.
fn key_values<'a>(line: usize, tokens: &[&'a str]) -> Result<HashMap<&'a str, &'a str>, SpecError> {
    let mut out = HashMap::new();
    for t in tokens {
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| SpecError::parse(line, t, "expected key=value"))?;
        if out.insert(k, v).is_some() {
            return Err(SpecError::parse(line, k, "given twice"));
        }
    }
    Ok(out)
}

fn required<'a>(line: usize, kv: &HashMap<&str, &'a str>, key: &str) -> Result<&'a str, SpecError> {
    kv.get(key)
        .copied()
        .ok_or_else(|| SpecError::parse(line, key, "missing"))
}

fn parse_scalar(line: usize, key: &str, s: &str) -> Result<f64, SpecError> {
    let v = parse_numbers(line, key, s)?;
    match v.as_slice() {
        [x] => Ok(*x),
        _ => Err(SpecError::parse(line, key, "expected a single number")),
    }
}

/// Linear part, translation and source line of one map term.
type MapEntry = (Vec<f64>, Vec<f64>, usize);

pub fn parse_spec(text: &str) -> Result<Spec, SpecError> {
    let mut header: Option<(usize, usize)> = None;
    let mut vertices: Vec<(String, AxisBox, AxisBox)> = Vec::new();
    let mut edges: Vec<(String, String, String, usize)> = Vec::new();
    // (edge name, k) -> (M, a, line)
    let mut maps: HashMap<(String, usize), MapEntry> = HashMap::new();
    let mut tail: Option<(TailRule, Option<String>, usize)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let keyword = tokens[0];
        if header.is_none() && keyword != "gifs" {
            return Err(SpecError::parse(line, keyword, "file must start with a `gifs` header"));
        }
        match keyword {
            "gifs" => {
                if header.is_some() {
                    return Err(SpecError::parse(line, "gifs", "duplicate header"));
                }
                let version = tokens
                    .get(1)
                    .and_then(|v| v.parse::<u32>().ok())
                    .ok_or_else(|| SpecError::parse(line, "version", "missing or malformed"))?;
                if version != FORMAT_VERSION {
                    return Err(SpecError::parse(line, "version", format!("unsupported version {version}")));
                }
                let kv = key_values(line, &tokens[2..])?;
                let dim = required(line, &kv, "dim")?
                    .parse::<usize>()
                    .ok()
                    .filter(|d| (1..=crate::linalg::MAX_DIM).contains(d))
                    .ok_or_else(|| SpecError::parse(line, "dim", "expected integer in 1..=8"))?;
                let order = kv
                    .get("order")
                    .map(|s| s.parse::<usize>())
                    .transpose()
                    .map_err(|_| SpecError::parse(line, "order", "expected non-negative integer"))?
                    .unwrap_or(0);
                header = Some((dim, order));
            }
            "vertex" => {
                let (dim, _) = header.unwrap();
                let name = tokens
                    .get(1)
                    .filter(|t| !t.contains('='))
                    .ok_or_else(|| SpecError::parse(line, "vertex", "missing name"))?;
                let kv = key_values(line, &tokens[2..])?;
                let j = parse_box(line, "J", required(line, &kv, "J")?, dim)?;
                let o = parse_box(line, "O", required(line, &kv, "O")?, dim)?;
                vertices.push((name.to_string(), j, o));
            }
            "edge" => {
                if tokens.len() != 4 {
                    return Err(SpecError::parse(line, "edge", "expected `edge <name> <from> <to>`"));
                }
                edges.push((tokens[1].into(), tokens[2].into(), tokens[3].into(), line));
            }
            "map" => {
                let (dim, order) = header.unwrap();
                let edge = tokens
                    .get(1)
                    .ok_or_else(|| SpecError::parse(line, "map", "missing edge name"))?;
                let kv = key_values(line, &tokens[2..])?;
                let k = required(line, &kv, "k")?
                    .parse::<usize>()
                    .map_err(|_| SpecError::parse(line, "k", "expected non-negative integer"))?;
                if k > order {
                    return Err(SpecError::parse(line, "k", format!("exceeds order {order}")));
                }
                let m = parse_numbers(line, "M", required(line, &kv, "M")?)?;
                if m.len() != dim * dim {
                    return Err(SpecError::parse(line, "M", format!("expected {} numbers", dim * dim)));
                }
                let a = parse_numbers(line, "a", required(line, &kv, "a")?)?;
                if a.len() != dim {
                    return Err(SpecError::parse(line, "a", format!("expected {dim} numbers")));
                }
                if maps.insert((edge.to_string(), k), (m, a, line)).is_some() {
                    return Err(SpecError::parse(line, "map", format!("duplicate k={k} for edge {edge}")));
                }
            }
            "tail" => {
                if tail.is_some() {
                    return Err(SpecError::parse(line, "tail", "duplicate tail"));
                }
                let rule = tokens
                    .get(1)
                    .ok_or_else(|| SpecError::parse(line, "tail", "missing rule"))?;
                let kv = key_values(line, &tokens[2..])?;
                let scale = kv
                    .get("scale")
                    .map(|s| parse_scalar(line, "scale", s))
                    .transpose()?
                    .unwrap_or(1.0);
                let start = kv
                    .get("start")
                    .map(|s| s.parse::<u64>().ok().filter(|v| *v >= 1))
                    .map(|v| v.ok_or_else(|| SpecError::parse(line, "start", "expected integer >= 1")))
                    .transpose()?
                    .unwrap_or(1);
                let kind = match *rule {
                    "polynomial" => TailKind::Polynomial {
                        exponent: parse_scalar(line, "exponent", required(line, &kv, "exponent")?)?,
                    },
                    "geometric" => TailKind::Geometric {
                        ratio: parse_scalar(line, "ratio", required(line, &kv, "ratio")?)?,
                    },
                    other => {
                        return Err(SpecError::parse(line, "tail", format!("unknown rule {other:?}")))
                    }
                };
                let rule = TailRule::new(kind, scale, start)
                    .map_err(|m| SpecError::parse(line, "tail", m))?;
                tail = Some((rule, kv.get("vertex").map(|s| s.to_string()), line));
            }
            other => return Err(SpecError::parse(line, other, "unknown keyword")),
        }
    }

    let (dim, order) = header.ok_or_else(|| SpecError::parse(1, "gifs", "empty file"))?;
    let vertex_names: Vec<String> = vertices.iter().map(|v| v.0.clone()).collect();
    let lookup = |name: &str, line: usize, field: &str| {
        vertex_names
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| SpecError::parse(line, field, format!("unknown vertex {name:?}")))
    };
    let mut graph_edges = Vec::with_capacity(edges.len());
    for (name, from, to, line) in &edges {
        graph_edges.push(Edge {
            name: name.clone(),
            from: lookup(from, *line, "from")?,
            to: lookup(to, *line, "to")?,
        });
    }
    for ((edge, _), (_, _, line)) in &maps {
        if !edges.iter().any(|e| &e.0 == edge) {
            return Err(SpecError::parse(*line, "map", format!("unknown edge {edge:?}")));
        }
    }
    let graph = DirectedMultigraph::new(vertex_names.clone(), graph_edges).map_err(ModelError::from)?;

    let mut base_maps = Vec::with_capacity(edges.len());
    let mut coeffs = Vec::with_capacity(edges.len());
    for (name, ..) in &edges {
        let mut per_edge = Vec::with_capacity(order);
        for k in 0..=order {
            let entry = maps.get(&(name.clone(), k));
            let (m, a) = match (entry, k) {
                (Some((m, a, _)), _) => (m.clone(), a.clone()),
                (None, 0) => return Err(ModelError::MissingMap { edge: name.clone() }.into()),
                // omitted coefficients are zero
                (None, _) => (vec![0.0; dim * dim], vec![0.0; dim]),
            };
            let m = SquareMatrix::new(dim, m).map_err(ModelError::from)?;
            if k == 0 {
                base_maps.push(AffineMap::new(m, a)?);
            } else {
                per_edge.push((m, a));
            }
        }
        coeffs.push(per_edge);
    }
    let seeds = vertices.iter().map(|v| v.1.clone()).collect();
    let domains = vertices.iter().map(|v| v.2.clone()).collect();
    let mut system = AffineSystem::new(dim, graph, base_maps, seeds, domains)?;
    if let Some((mut rule, vertex, line)) = tail {
        if let Some(name) = vertex {
            rule.vertex = lookup(&name, line, "vertex")?;
        }
        system = system.with_tail(rule);
    }
    if order == 0 {
        Ok(Spec::System(system))
    } else {
        Ok(Spec::Family(PerturbedFamily::new(system, order, coeffs)?))
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

/// Writes a family (or, with `order == 0`, a system) in the file format.
/// Closed-form evaluators are not representable and are dropped.
pub fn to_spec_string(fam: &PerturbedFamily) -> String {
    let sys = fam.base();
    let g = sys.graph();
    let mut out = String::new();
    writeln!(out, "gifs {FORMAT_VERSION} dim={} order={}", sys.dim(), fam.order()).unwrap();
    for (v, name) in g.vertices().iter().enumerate() {
        let (j, o) = (&sys.seeds()[v], &sys.domains()[v]);
        writeln!(
            out,
            "vertex {name} J={}|{} O={}|{}",
            join(&j.low),
            join(&j.high),
            join(&o.low),
            join(&o.high)
        )
        .unwrap();
    }
    for e in g.edges() {
        writeln!(out, "edge {} {} {}", e.name, g.vertices()[e.from], g.vertices()[e.to]).unwrap();
    }
    for (id, e) in g.edges().iter().enumerate() {
        let m = sys.map(id);
        writeln!(out, "map {} k=0 M={} a={}", e.name, join(m.linear.as_slice()), join(&m.offset)).unwrap();
        for (k, (mk, ak)) in fam.coeffs(id).iter().enumerate() {
            writeln!(out, "map {} k={} M={} a={}", e.name, k + 1, join(mk.as_slice()), join(ak)).unwrap();
        }
    }
    if let Some(t) = sys.tail() {
        let body = match t.kind {
            TailKind::Polynomial { exponent } => format!("polynomial exponent={exponent:?}"),
            TailKind::Geometric { ratio } => format!("geometric ratio={ratio:?}"),
        };
        writeln!(
            out,
            "tail {body} scale={:?} start={} vertex={}",
            t.scale,
            t.start,
            g.vertices()[t.vertex]
        )
        .unwrap();
    }
    out
}
