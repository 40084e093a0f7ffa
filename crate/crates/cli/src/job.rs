//! Job files: `{"kind", "payload", "options"}` parsed into typed jobs, and
//! printed back in a canonical form that re-parses to an equal job.

use std::collections::BTreeMap;

use nobodies::curve::{ArakelovFlag, CurveBodyJob, CurveFlag, TropicalFlag};
use nobodies::graph::{Divisor, Graph, GraphFunction};
use nobodies::toric::{RayDatum, ToricFlag, ToricModel};
use nobodies::Rational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};
use crate::exact::{parse_i64, parse_rational, rational_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinsysOp {
    Min,
    Member,
    Shift,
}

impl LinsysOp {
    pub fn name(self) -> &'static str {
        match self {
            LinsysOp::Min => "min",
            LinsysOp::Member => "member",
            LinsysOp::Shift => "shift",
        }
    }

    fn parse(s: &str, field: &str) -> Result<Self> {
        match s {
            "min" => Ok(LinsysOp::Min),
            "member" => Ok(LinsysOp::Member),
            "shift" => Ok(LinsysOp::Shift),
            other => Err(CliError::schema(field, format!("unknown operation {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinsysJob {
    pub graph: Graph,
    pub lambda: Divisor<Rational>,
    pub effective: bool,
    pub operation: LinsysOp,
    /// Candidate for `member`.
    pub phi: Option<GraphFunction<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankJob {
    pub graph: Graph,
    pub lambda: Divisor<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricJob {
    pub model: ToricModel,
    pub flag: ToricFlag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyTarget {
    Job(Box<Payload>),
    RandomCurveJobs {
        count: usize,
        max_vertices: usize,
        max_coeff: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyJob {
    pub target: VerifyTarget,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Linsys(LinsysJob),
    Rank(RankJob),
    CurveBody(CurveBodyJob<Rational>),
    ToricBody(ToricJob),
    Verify(VerifyJob),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Linsys(_) => "linsys",
            Payload::Rank(_) => "rank",
            Payload::CurveBody(_) => "curve-body",
            Payload::ToricBody(_) => "toric-body",
            Payload::Verify(_) => "verify",
        }
    }
}

/// Plot window `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub x: (Rational, Rational),
    pub y: (Rational, Rational),
}

impl Window {
    pub fn new(x0: Rational, x1: Rational, y0: Rational, y1: Rational) -> Self {
        Window { x: (x0, x1), y: (y0, y1) }
    }

    /// Parses `x0,x1,y0,y1`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(CliError::schema("window", "expected x0,x1,y0,y1"));
        }
        let mut v = Vec::with_capacity(4);
        for (i, p) in parts.iter().enumerate() {
            v.push(parse_rational(&Value::String(p.to_string()), &format!("window[{i}]"))?);
        }
        let mut it = v.into_iter();
        let mut next = || it.next().expect("four parts");
        Ok(Window::new(next(), next(), next(), next()))
    }

    pub fn is_empty(&self) -> bool {
        self.x.0 >= self.x.1 || self.y.0 >= self.y.1
    }

    fn to_json(&self) -> Value {
        json!([
            rational_json(&self.x.0),
            rational_json(&self.x.1),
            rational_json(&self.y.0),
            rational_json(&self.y.1)
        ])
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Options {
    pub window: Option<Window>,
    pub svg: Option<String>,
    pub output: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobFile {
    pub payload: Payload,
    pub options: Options,
}

pub fn parse_job(text: &str) -> Result<JobFile> {
    if text.trim().is_empty() {
        return Err(CliError::schema("$", "empty document"));
    }
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::schema("$", e.to_string()))?;
    job_from_value(&v)
}

pub fn job_from_value(v: &Value) -> Result<JobFile> {
    let obj = object(v, "$")?;
    allow_keys(obj, "$", &["kind", "payload", "options"])?;
    let kind = string(required(obj, "kind", "$")?, "kind")?;
    let payload = payload_from_value(kind, required(obj, "payload", "$")?, "payload")?;
    let options = match obj.get("options") {
        None => Options::default(),
        Some(o) => options_from_value(o, "options")?,
    };
    Ok(JobFile { payload, options })
}

fn payload_from_value(kind: &str, v: &Value, field: &str) -> Result<Payload> {
    let obj = object(v, field)?;
    let at = |k: &str| format!("{field}.{k}");
    match kind {
        "linsys" => {
            allow_keys(obj, field, &["graph", "lambda", "effective", "operation", "phi"])?;
            let graph = graph_from_value(required(obj, "graph", field)?, &at("graph"))?;
            let lambda = divisor_from_value(&graph, required(obj, "lambda", field)?, &at("lambda"))?;
            let effective = match obj.get("effective") {
                None => true,
                Some(Value::Bool(b)) => *b,
                Some(_) => return Err(CliError::schema(&at("effective"), "expected a boolean")),
            };
            let operation = match obj.get("operation") {
                None => LinsysOp::Min,
                Some(o) => LinsysOp::parse(string(o, &at("operation"))?, &at("operation"))?,
            };
            let phi = match obj.get("phi") {
                None => None,
                Some(p) => Some(GraphFunction::new(vertex_values(&graph, p, &at("phi"), true)?)),
            };
            if operation == LinsysOp::Member && phi.is_none() {
                return Err(CliError::schema(&at("phi"), "operation member needs phi"));
            }
            Ok(Payload::Linsys(LinsysJob {
                graph,
                lambda,
                effective,
                operation,
                phi,
            }))
        }
        "rank" => {
            allow_keys(obj, field, &["graph", "lambda"])?;
            let graph = graph_from_value(required(obj, "graph", field)?, &at("graph"))?;
            let lambda = divisor_from_value(&graph, required(obj, "lambda", field)?, &at("lambda"))?;
            Ok(Payload::Rank(RankJob { graph, lambda }))
        }
        "curve-body" => {
            allow_keys(obj, field, &["graph", "lambda", "flag"])?;
            let graph = graph_from_value(required(obj, "graph", field)?, &at("graph"))?;
            let lambda = divisor_from_value(&graph, required(obj, "lambda", field)?, &at("lambda"))?;
            let flag = curve_flag_from_value(&graph, required(obj, "flag", field)?, &at("flag"))?;
            Ok(Payload::CurveBody(CurveBodyJob::new(graph, lambda, flag)?))
        }
        "toric-body" => {
            allow_keys(obj, field, &["dimension", "generic_rays", "vertical_vertices", "flag"])?;
            let dim = parse_i64(required(obj, "dimension", field)?, &at("dimension"))?;
            if dim < 1 {
                return Err(CliError::schema(&at("dimension"), "must be positive"));
            }
            let dim = dim as usize;
            let generic = ray_list(required(obj, "generic_rays", field)?, &at("generic_rays"), "u", dim)?;
            let vertical = ray_list(required(obj, "vertical_vertices", field)?, &at("vertical_vertices"), "v", dim)?;
            let flag = ray_list(required(obj, "flag", field)?, &at("flag"), "w", dim + 1)?;
            let model = ToricModel::new(dim, generic, vertical)?;
            Ok(Payload::ToricBody(ToricJob {
                model,
                flag: ToricFlag { rays: flag },
            }))
        }
        "verify" => {
            allow_keys(obj, field, &["target", "random_curve_jobs", "seed"])?;
            let seed = match obj.get("seed") {
                None => 0,
                Some(s) => u64::try_from(parse_i64(s, &at("seed"))?)
                    .map_err(|_| CliError::schema(&at("seed"), "must be non-negative"))?,
            };
            let target = match (obj.get("target"), obj.get("random_curve_jobs")) {
                (Some(t), None) => {
                    let tobj = object(t, &at("target"))?;
                    allow_keys(tobj, &at("target"), &["kind", "payload"])?;
                    let kind = string(required(tobj, "kind", &at("target"))?, &at("target.kind"))?;
                    if kind == "verify" {
                        return Err(CliError::schema(&at("target.kind"), "verify cannot target verify"));
                    }
                    let inner = payload_from_value(kind, required(tobj, "payload", &at("target"))?, &at("target.payload"))?;
                    VerifyTarget::Job(Box::new(inner))
                }
                (None, Some(r)) => {
                    let f = at("random_curve_jobs");
                    let robj = object(r, &f)?;
                    allow_keys(robj, &f, &["count", "max_vertices", "max_coeff"])?;
                    let count = positive(robj, "count", &f, 50)?;
                    let max_vertices = positive(robj, "max_vertices", &f, 4)?;
                    let max_coeff = positive(robj, "max_coeff", &f, 3)? as i64;
                    VerifyTarget::RandomCurveJobs {
                        count,
                        max_vertices,
                        max_coeff,
                    }
                }
                _ => return Err(CliError::schema(field, "exactly one of target, random_curve_jobs")),
            };
            Ok(Payload::Verify(VerifyJob { target, seed }))
        }
        other => Err(CliError::schema("kind", format!("unknown kind {other:?}"))),
    }
}

fn positive(obj: &Map<String, Value>, key: &str, field: &str, default: usize) -> Result<usize> {
    match obj.get(key) {
        None => Ok(default),
        Some(v) => {
            let f = format!("{field}.{key}");
            let n = parse_i64(v, &f)?;
            usize::try_from(n)
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::schema(&f, "must be positive"))
        }
    }
}

fn options_from_value(v: &Value, field: &str) -> Result<Options> {
    let obj = object(v, field)?;
    allow_keys(obj, field, &["window", "svg", "output"])?;
    let window = match obj.get("window") {
        None => None,
        Some(w) => {
            let f = format!("{field}.window");
            let arr = array(w, &f)?;
            if arr.len() != 4 {
                return Err(CliError::schema(&f, "expected [x0, x1, y0, y1]"));
            }
            let r: Vec<Rational> = arr
                .iter()
                .enumerate()
                .map(|(i, x)| parse_rational(x, &format!("{f}[{i}]")))
                .collect::<Result<_>>()?;
            Some(Window::new(r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone()))
        }
    };
    let path = |k: &str| -> Result<Option<String>> {
        obj.get(k)
            .map(|p| string(p, &format!("{field}.{k}")).map(str::to_string))
            .transpose()
    };
    Ok(Options {
        window,
        svg: path("svg")?,
        output: path("output")?,
    })
}

fn graph_from_value(v: &Value, field: &str) -> Result<Graph> {
    let obj = object(v, field)?;
    allow_keys(obj, field, &["vertices", "edges"])?;
    let vf = format!("{field}.vertices");
    let names: Vec<String> = array(required(obj, "vertices", field)?, &vf)?
        .iter()
        .enumerate()
        .map(|(i, n)| string(n, &format!("{vf}[{i}]")).map(str::to_string))
        .collect::<Result<_>>()?;
    let ef = format!("{field}.edges");
    let mut edges = Vec::new();
    for (i, e) in array(required(obj, "edges", field)?, &ef)?.iter().enumerate() {
        let f = format!("{ef}[{i}]");
        let pair = array(e, &f)?;
        if pair.len() != 2 {
            return Err(CliError::schema(&f, "an edge joins two vertices"));
        }
        edges.push((string(&pair[0], &f)?.to_string(), string(&pair[1], &f)?.to_string()));
    }
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let edge_refs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Graph::new(&name_refs, &edge_refs).map_err(|e| match e {
        nobodies::Error::Disconnected => CliError::DisconnectedGraph { field: field.to_string() },
        other => CliError::schema(field, other.to_string()),
    })
}

/// `{vertex: rational}`; missing vertices are zero unless `complete` is set.
fn vertex_values(g: &Graph, v: &Value, field: &str, complete: bool) -> Result<Vec<Rational>> {
    let obj = object(v, field)?;
    let mut values = vec![Rational::zero(); g.vertex_count()];
    for (name, x) in obj {
        let f = format!("{field}.{name}");
        let i = g
            .vertex_index(name)
            .map_err(|_| CliError::schema(&f, "not a vertex of the graph"))?;
        values[i] = parse_rational(x, &f)?;
    }
    if complete {
        if let Some(missing) = g.vertices().iter().find(|n| !obj.contains_key(*n)) {
            return Err(CliError::schema(&format!("{field}.{missing}"), "value required at every vertex"));
        }
    }
    Ok(values)
}

fn divisor_from_value(g: &Graph, v: &Value, field: &str) -> Result<Divisor<Rational>> {
    Ok(Divisor::new(vertex_values(g, v, field, false)?))
}

fn curve_flag_from_value(g: &Graph, v: &Value, field: &str) -> Result<CurveFlag<Rational>> {
    let obj = object(v, field)?;
    let kind = string(required(obj, "type", field)?, &format!("{field}.type"))?;
    let vf = format!("{field}.vertex");
    let vertex = g
        .vertex_index(string(required(obj, "vertex", field)?, &vf)?)
        .map_err(|_| CliError::schema(&vf, "not a vertex of the graph"))?;
    match kind {
        "tropical" => {
            allow_keys(obj, field, &["type", "vertex", "y1"])?;
            let y1 = divisor_from_value(g, required(obj, "y1", field)?, &format!("{field}.y1"))?;
            Ok(CurveFlag::Tropical(TropicalFlag { y1, vertex }))
        }
        "arakelov" => {
            allow_keys(obj, field, &["type", "vertex"])?;
            Ok(CurveFlag::Arakelov(ArakelovFlag { vertex }))
        }
        other => Err(CliError::schema(&format!("{field}.type"), format!("unknown flag type {other:?}"))),
    }
}

fn ray_list(v: &Value, field: &str, key: &str, len: usize) -> Result<Vec<RayDatum>> {
    let mut out = Vec::new();
    for (i, r) in array(v, field)?.iter().enumerate() {
        let f = format!("{field}[{i}]");
        let obj = object(r, &f)?;
        allow_keys(obj, &f, &[key, "a"])?;
        let kf = format!("{f}.{key}");
        let coords: Vec<i64> = array(required(obj, key, &f)?, &kf)?
            .iter()
            .enumerate()
            .map(|(j, x)| parse_i64(x, &format!("{kf}[{j}]")))
            .collect::<Result<_>>()?;
        if coords.len() != len {
            return Err(CliError::schema(&kf, format!("expected {len} coordinates")));
        }
        let a = parse_i64(required(obj, "a", &f)?, &format!("{f}.a"))?;
        out.push((coords, a));
    }
    Ok(out)
}

fn object<'a>(v: &'a Value, field: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| CliError::schema(field, "expected an object"))
}

fn array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| CliError::schema(field, "expected an array"))
}

fn string<'a>(v: &'a Value, field: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| CliError::schema(field, "expected a string"))
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str, field: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| CliError::schema(&format!("{field}.{key}"), "missing field"))
}

fn allow_keys(obj: &Map<String, Value>, field: &str, keys: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !keys.contains(&k.as_str())) {
        Some(k) => Err(CliError::schema(&format!("{field}.{k}"), "unknown field")),
        None => Ok(()),
    }
}

// Canonical printing.

pub fn graph_json(g: &Graph) -> Value {
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|&(a, b)| json!([g.vertex_name(a), g.vertex_name(b)]))
        .collect();
    json!({ "vertices": g.vertices(), "edges": edges })
}

/// `{vertex: "p/q"}` over all vertices.
pub fn values_json(g: &Graph, values: &[Rational]) -> Value {
    let m: BTreeMap<&str, Value> = g
        .vertices()
        .iter()
        .map(String::as_str)
        .zip(values.iter().map(rational_json))
        .collect();
    json!(m)
}

fn rays_json(rays: &[RayDatum], key: &str) -> Value {
    Value::Array(rays.iter().map(|(u, a)| json!({ key: u, "a": a })).collect())
}

pub fn payload_json(p: &Payload) -> Value {
    match p {
        Payload::Linsys(j) => {
            let mut v = json!({
                "graph": graph_json(&j.graph),
                "lambda": values_json(&j.graph, j.lambda.values()),
                "effective": j.effective,
                "operation": j.operation.name(),
            });
            if let Some(phi) = &j.phi {
                v["phi"] = values_json(&j.graph, phi.values());
            }
            v
        }
        Payload::Rank(j) => json!({
            "graph": graph_json(&j.graph),
            "lambda": values_json(&j.graph, j.lambda.values()),
        }),
        Payload::CurveBody(j) => {
            let flag = match &j.flag {
                CurveFlag::Tropical(f) => json!({
                    "type": "tropical",
                    "vertex": j.graph.vertex_name(f.vertex),
                    "y1": values_json(&j.graph, f.y1.values()),
                }),
                CurveFlag::Arakelov(f) => json!({ "type": "arakelov", "vertex": j.graph.vertex_name(f.vertex) }),
            };
            json!({
                "graph": graph_json(&j.graph),
                "lambda": values_json(&j.graph, j.lambda.values()),
                "flag": flag,
            })
        }
        Payload::ToricBody(j) => json!({
            "dimension": j.model.dimension(),
            "generic_rays": rays_json(j.model.generic_rays(), "u"),
            "vertical_vertices": rays_json(j.model.vertical_vertices(), "v"),
            "flag": rays_json(&j.flag.rays, "w"),
        }),
        Payload::Verify(j) => {
            let mut v = json!({ "seed": j.seed });
            match &j.target {
                VerifyTarget::Job(inner) => {
                    v["target"] = json!({ "kind": inner.kind(), "payload": payload_json(inner) });
                }
                VerifyTarget::RandomCurveJobs {
                    count,
                    max_vertices,
                    max_coeff,
                } => {
                    v["random_curve_jobs"] =
                        json!({ "count": count, "max_vertices": max_vertices, "max_coeff": max_coeff });
                }
            }
            v
        }
    }
}

pub fn job_json(job: &JobFile) -> Value {
    let mut v = json!({ "kind": job.payload.kind(), "payload": payload_json(&job.payload) });
    let o = &job.options;
    if o.window.is_some() || o.svg.is_some() || o.output.is_some() {
        let mut opts = Map::new();
        if let Some(w) = &o.window {
            opts.insert("window".into(), w.to_json());
        }
        if let Some(s) = &o.svg {
            opts.insert("svg".into(), json!(s));
        }
        if let Some(s) = &o.output {
            opts.insert("output".into(), json!(s));
        }
        v["options"] = Value::Object(opts);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUARTIC: &str = r#"{
        "kind": "curve-body",
        "payload": {
            "graph": {
                "vertices": ["P", "Q1", "Q2", "P'"],
                "edges": [["P","Q1"],["P","Q1"],["P","Q2"],["P","Q2"],["Q1","P'"],["Q2","P'"]]
            },
            "lambda": {"P": 2, "Q1": 1, "Q2": "1"},
            "flag": {"type": "tropical", "vertex": "P", "y1": {"P": 1}}
        }
    }"#;

    #[test]
    fn quartic_job_parses() {
        let job = parse_job(QUARTIC).unwrap();
        let (expected, _) = nobodies::curve::quartic_jobs::<Rational>();
        assert_eq!(job.payload, Payload::CurveBody(expected));
    }

    #[test]
    fn echo_round_trips() {
        let job = parse_job(QUARTIC).unwrap();
        let again = job_from_value(&job_json(&job)).unwrap();
        assert_eq!(job, again);
    }

    #[test]
    fn diagnostics_name_the_field() {
        assert_eq!(parse_job("").unwrap_err().code(), "SchemaError");
        assert_eq!(parse_job("  \n").unwrap_err().code(), "SchemaError");
        let bad = QUARTIC.replace(r#""Q1": 1,"#, r#""Q1": "1/0","#);
        match parse_job(&bad).unwrap_err() {
            CliError::BadRational { field, text } => {
                assert_eq!(field, "payload.lambda.Q1");
                assert_eq!(text, "1/0");
            }
            other => panic!("{other}"),
        }
        let split = QUARTIC.replace(r#"["Q1","P'"],["Q2","P'"]"#, r#"["Q1","Q2"]"#);
        assert_eq!(parse_job(&split).unwrap_err().code(), "DisconnectedGraph");
        let typo = QUARTIC.replace("\"lambda\"", "\"lamda\"");
        match parse_job(&typo).unwrap_err() {
            CliError::Schema { field, .. } => assert_eq!(field, "payload.lamda"),
            other => panic!("{other}"),
        }
        let unknown = QUARTIC.replace(r#"{"P": 1}"#, r#"{"X": 1}"#);
        match parse_job(&unknown).unwrap_err() {
            CliError::Schema { field, .. } => assert_eq!(field, "payload.flag.y1.X"),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn window_parsing() {
        let w = Window::parse("-1,5,-1/2,4").unwrap();
        assert_eq!(w.y.0, <Rational as nobodies::Scalar>::ratio(-1, 2));
        assert!(!w.is_empty());
        assert!(Window::parse("1,1,0,2").unwrap().is_empty());
        assert!(Window::parse("1,2,3").is_err());
    }
}
