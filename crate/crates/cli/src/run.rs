//! Job dispatch and result files.

use std::time::Instant;

use nobodies::curve::{BodyKind, NOBody2D};
use nobodies::linsys::{member, minimal_element, zariski_shift, LinearSystemSpec, MinimalElement};
use nobodies::poly::{HPolyhedron, PiecewiseLinearFunction, Shape, Upper, VPolyhedron};
use nobodies::rank::{has_nonnegative_rank, reduce};
use nobodies::toric::{generic_fiber_image, toric_body, toric_body_fm};
use nobodies::{Rational, Scalar};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::exact::rational_json;
use crate::job::{job_json, values_json, JobFile, LinsysJob, LinsysOp, Payload, RankJob, ToricJob};
use crate::verify;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The linear system (or the body built from it) is empty.
    Empty,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Empty => "empty",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Empty => 2,
        }
    }
}

/// A planar object that can be drawn.
#[derive(Debug, Clone)]
pub enum Figure {
    Body(Box<NOBody2D<Rational>>),
    Polygon(VPolyhedron<Rational>),
    Empty,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub result: Value,
    pub warnings: Vec<String>,
    pub figure: Option<Figure>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome {
            status: Status::Ok,
            result,
            warnings: Vec::new(),
            figure: None,
        }
    }

    fn empty(figure: Option<Figure>) -> Self {
        Outcome {
            status: Status::Empty,
            result: Value::Null,
            warnings: Vec::new(),
            figure,
        }
    }
}

/// A result file: the hashed canonical section, its digest, and timing.
#[derive(Debug, Clone)]
pub struct ResultFile {
    pub canonical: Value,
    pub digest: String,
    pub elapsed_us: Option<u128>,
}

impl ResultFile {
    pub fn to_json(&self) -> Value {
        let mut v = json!({ "canonical": self.canonical, "digest": self.digest });
        if let Some(us) = self.elapsed_us {
            v["timing"] = json!({ "elapsed_us": us as u64 });
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
        s.push('\n');
        s
    }
}

/// Runs a job and packages its result.
pub fn run_job(job: &JobFile) -> Result<(ResultFile, Outcome)> {
    let start = Instant::now();
    let outcome = execute(&job.payload)?;
    let canonical = json!({
        "job": job_json(job),
        "status": outcome.status.name(),
        "result": outcome.result,
        "warnings": outcome.warnings,
    });
    let bytes = serde_json::to_vec(&canonical).expect("json values serialize");
    let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    let file = ResultFile {
        canonical,
        digest: format!("sha256:{digest}"),
        elapsed_us: Some(start.elapsed().as_micros()),
    };
    Ok((file, outcome))
}

pub fn execute(p: &Payload) -> Result<Outcome> {
    match p {
        Payload::Linsys(j) => linsys(j),
        Payload::Rank(j) => rank(j),
        Payload::CurveBody(j) => match j.body() {
            Ok(body) => {
                let warnings = body.warnings.clone();
                Ok(Outcome {
                    status: Status::Ok,
                    result: json!({ "body": body_json(&body) }),
                    warnings,
                    figure: Some(Figure::Body(Box::new(body))),
                })
            }
            Err(e) if is_empty_class(&e) => Ok(Outcome::empty(Some(Figure::Empty))),
            Err(e) => Err(e.into()),
        },
        Payload::ToricBody(j) => toric(j),
        Payload::Verify(j) => Ok(Outcome::ok(verify::run(j)?)),
    }
}

/// Statuses reported with exit code 2 rather than as errors.
pub fn is_empty_class(e: &nobodies::Error) -> bool {
    matches!(e, nobodies::Error::EmptySystem | nobodies::Error::EmptyAtZero)
}

fn linsys(j: &LinsysJob) -> Result<Outcome> {
    let spec = LinearSystemSpec::new(j.graph.clone(), j.lambda.clone(), j.effective)?;
    let g = &j.graph;
    match j.operation {
        LinsysOp::Min => match minimal_element(&spec)? {
            MinimalElement::Found(pi) => Ok(Outcome::ok(json!({ "minimal_element": values_json(g, pi.values()) }))),
            MinimalElement::EmptySystem => Ok(Outcome::empty(None)),
        },
        LinsysOp::Member => {
            let phi = j.phi.as_ref().ok_or_else(|| CliError::schema("payload.phi", "missing field"))?;
            Ok(Outcome::ok(json!({ "member": member(&spec, phi)? })))
        }
        LinsysOp::Shift => match zariski_shift(&spec) {
            Ok((shifted, pi)) => Ok(Outcome::ok(json!({
                "shifted": values_json(g, shifted.values()),
                "minimal_element": values_json(g, pi.values()),
            }))),
            Err(e) if is_empty_class(&e) => Ok(Outcome::empty(None)),
            Err(e) => Err(e.into()),
        },
    }
}

fn rank(j: &RankJob) -> Result<Outcome> {
    let nonneg = has_nonnegative_rank(&j.graph, &j.lambda)?;
    let d: Vec<i64> = j
        .lambda
        .values()
        .iter()
        .map(|c| c.as_integer_i64().expect("integral after the rank check"))
        .collect();
    let reduced: Vec<Rational> = reduce(&j.graph, &d, 0).into_iter().map(Rational::from_i64).collect();
    Ok(Outcome::ok(json!({
        "nonnegative_rank": nonneg,
        "reduced_divisor": {
            "base": j.graph.vertex_name(0),
            "divisor": values_json(&j.graph, &reduced),
        },
    })))
}

fn toric(j: &ToricJob) -> Result<Outcome> {
    let body = toric_body::<Rational>(&j.model, &j.flag)?;
    let fm = toric_body_fm::<Rational>(&j.model, &j.flag)?;
    let mut result = json!({
        "body": vpoly_json(&body),
        "inequalities": hpoly_json(&fm),
    });
    if let Some((index, image)) = generic_fiber_image::<Rational>(&j.model, &j.flag)? {
        result["generic_fiber"] = json!({ "vertical_flag_index": index, "image": vpoly_json(&image) });
    }
    let figure = (body.dimension() == 2).then(|| Figure::Polygon(body.clone()));
    Ok(Outcome {
        status: Status::Ok,
        result,
        warnings: Vec::new(),
        figure,
    })
}

fn points_json(points: &[Vec<Rational>]) -> Value {
    Value::Array(
        points
            .iter()
            .map(|p| Value::Array(p.iter().map(rational_json).collect()))
            .collect(),
    )
}

pub fn vpoly_json(v: &VPolyhedron<Rational>) -> Value {
    json!({
        "dimension": v.dimension(),
        "vertices": points_json(v.vertices()),
        "rays": points_json(v.rays()),
    })
}

/// Rows `a · x ≥ b` as `{"a": [...], "b": ...}`.
pub fn hpoly_json(h: &HPolyhedron<Rational>) -> Value {
    Value::Array(
        h.constraints()
            .iter()
            .map(|c| json!({ "a": c.coeffs.iter().map(rational_json).collect::<Vec<_>>(), "b": rational_json(&c.bound) }))
            .collect(),
    )
}

pub fn upper_json(u: &Upper<Rational>) -> Value {
    match u {
        Upper::Finite(x) => rational_json(x),
        Upper::Infinity => json!("+inf"),
    }
}

pub fn pwl_json(f: &PiecewiseLinearFunction<Rational>) -> Value {
    let shape = match f.shape() {
        Shape::Convex => "convex",
        Shape::Concave => "concave",
        Shape::None => "none",
    };
    let mut v = json!({
        "domain": [rational_json(f.start()), upper_json(f.end())],
        "breakpoints": f
            .breakpoints()
            .iter()
            .map(|(t, y)| json!([rational_json(t), rational_json(y)]))
            .collect::<Vec<_>>(),
        "shape": shape,
    });
    if let Some(s) = f.tail_slope() {
        v["tail_slope"] = rational_json(s);
    }
    v
}

pub fn body_json(b: &NOBody2D<Rational>) -> Value {
    let kind = match b.kind {
        BodyKind::Overgraph => "overgraph",
        BodyKind::Band => "band",
    };
    let mut v = json!({
        "kind": kind,
        "boundary": pwl_json(b.boundary()),
        "recession": [rational_json(&b.recession[0]), rational_json(&b.recession[1])],
        "v_representation": vpoly_json(&b.to_v_polyhedron()),
    });
    if let Some((t, y)) = b.stabilization() {
        v["stabilization"] = json!([rational_json(&t), rational_json(&y)]);
    }
    v
}
