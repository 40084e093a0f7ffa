//! Dual-algorithm checks. Every check runs a second, independent method
//! against the main one; disagreements are reported, not raised.

use nobodies::curve::{cross_verify, random_job, CurveBodyJob};
use nobodies::graph::{laplacian, Divisor, Graph};
use nobodies::linsys::{member, minimal_element, sample_member, LinearSystemSpec, MinimalElement};
use nobodies::rank::{
    has_nonnegative_rank_at, phi_search_bound, rank_by_class_enumeration, rank_by_phi_search, PicardClasses,
};
use nobodies::toric::{
    drop_coordinate, generic_fiber_image, model_lattice_points, monomial_valuation, toric_body, toric_body_fm,
    MonomialValuation,
};
use nobodies::{Rational, Scalar};
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Result;
use crate::exact::format_rational;
use crate::job::{LinsysJob, Payload, RankJob, ToricJob, VerifyJob, VerifyTarget};
use crate::run::is_empty_class;

/// Largest `(bound + 1)^n` the integer search is allowed to scan.
const PHI_SEARCH_LIMIT: u64 = 2_000_000;
/// Largest Picard group order for class enumeration.
const CLASS_LIMIT: i64 = 5_000;
/// Largest vertex count for subset enumeration.
const SUBSET_LIMIT: usize = 16;
const SAMPLES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub outcome: CheckOutcome,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail,
    Skipped,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            outcome: if passed { CheckOutcome::Pass } else { CheckOutcome::Fail },
            detail: detail.into(),
        }
    }

    fn skipped(name: &str, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            outcome: CheckOutcome::Skipped,
            detail: detail.into(),
        }
    }

    fn to_json(&self) -> Value {
        let outcome = match self.outcome {
            CheckOutcome::Pass => "pass",
            CheckOutcome::Fail => "fail",
            CheckOutcome::Skipped => "skipped",
        };
        json!({ "name": self.name, "outcome": outcome, "detail": self.detail })
    }
}

pub fn run(job: &VerifyJob) -> Result<Value> {
    let checks = checks(job)?;
    let passed = checks.iter().all(|c| c.outcome != CheckOutcome::Fail);
    Ok(json!({
        "all_passed": passed,
        "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
    }))
}

pub fn checks(job: &VerifyJob) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
    match &job.target {
        VerifyTarget::Job(p) => match p.as_ref() {
            Payload::Linsys(j) => linsys_checks(j, &mut rng),
            Payload::Rank(j) => Ok(rank_checks(j)),
            Payload::CurveBody(j) => curve_checks(j, &mut rng),
            Payload::ToricBody(j) => toric_checks(j),
            Payload::Verify(_) => unreachable!("rejected by the parser"),
        },
        VerifyTarget::RandomCurveJobs {
            count,
            max_vertices,
            max_coeff,
        } => {
            let mut out = Vec::with_capacity(*count);
            for i in 0..*count {
                let job: CurveBodyJob<Rational> = random_job(*max_vertices, *max_coeff, &mut rng);
                out.push(cross_check(&job, &format!("random-job-{i}"))?);
            }
            Ok(out)
        }
    }
}

fn cross_check(job: &CurveBodyJob<Rational>, name: &str) -> Result<Check> {
    match cross_verify(job) {
        Ok(r) => {
            let detail = match &r.first_disagreement {
                None => format!("{} breakpoints agree", r.parametric.breakpoints().len()),
                Some(t) => format!("first disagreement at t = {}", format_rational(t)),
            };
            Ok(Check::new(name, r.agree, detail))
        }
        Err(e) if is_empty_class(&e) => Ok(Check::skipped(name, e.to_string())),
        Err(e) => Err(e.into()),
    }
}

/// `max_S |Σ_S Λ|` by enumerating subsets against the closed form.
fn subset_check(lambda: &Divisor<Rational>) -> Check {
    let name = "m-statistic-vs-subsets";
    let n = lambda.len();
    if n > SUBSET_LIMIT {
        return Check::skipped(name, format!("{n} vertices exceed the subset limit"));
    }
    let v = lambda.values();
    let mut best = Rational::zero();
    for mask in 0u32..(1 << n) {
        let s = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .fold(Rational::zero(), |s, i| s + &v[i]);
        best = best.max(s.abs());
    }
    let closed = lambda.m_statistic();
    Check::new(name, best == closed, format!("closed form {closed}, enumeration {best}"))
}

/// Random members of `L⁺(Λ)` dominate the minimal element pointwise.
fn minimal_element_check(g: &Graph, lambda: &Divisor<Rational>, rng: &mut ChaCha8Rng) -> Result<Check> {
    let name = "minimal-element-vs-sampling";
    let spec = LinearSystemSpec::new(g.clone(), lambda.clone(), true)?;
    let bound = 4 + lambda.positive_mass().ceil().as_integer_i64().unwrap_or(0) * g.diameter() as i64;
    match minimal_element(&spec)? {
        MinimalElement::EmptySystem => {
            let found = sample_member(&spec, bound, rng)?;
            Ok(Check::new(name, found.is_none(), "linear system is empty"))
        }
        MinimalElement::Found(pi) => {
            if !member(&spec, &pi)? {
                return Ok(Check::new(name, false, "minimal element is not a member"));
            }
            for _ in 0..SAMPLES {
                let Some(phi) = sample_member(&spec, bound, rng)? else {
                    return Ok(Check::new(name, false, "sampling found no member of a nonempty system"));
                };
                if !member(&spec, &phi)? {
                    return Ok(Check::new(name, false, "sampled point is not a member"));
                }
                if phi.values().iter().zip(pi.values()).any(|(a, b)| a < b) {
                    return Ok(Check::new(name, false, "a member lies below the minimal element"));
                }
            }
            Ok(Check::new(name, true, format!("{SAMPLES} sampled members dominate it")))
        }
    }
}

fn linsys_checks(j: &LinsysJob, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut out = vec![subset_check(&j.lambda), minimal_element_check(&j.graph, &j.lambda, rng)?];
    if let Some(phi) = &j.phi {
        let spec = LinearSystemSpec::new(j.graph.clone(), j.lambda.clone(), j.effective)?;
        let direct = (&laplacian(&j.graph, phi)? + &j.lambda).is_effective() && (!j.effective || phi.is_nonnegative());
        let lp = member(&spec, phi)?;
        out.push(Check::new("member-vs-direct", lp == direct, format!("member = {lp}")));
    }
    Ok(out)
}

fn rank_checks(j: &RankJob) -> Vec<Check> {
    let (g, lambda) = (&j.graph, &j.lambda);
    let mut out = Vec::new();
    let base = match has_nonnegative_rank_at(g, lambda, 0) {
        Ok(b) => b,
        Err(e) => return vec![Check::new("dhar-reduction", false, e.to_string())],
    };
    let agree = (1..g.vertex_count()).all(|q| has_nonnegative_rank_at(g, lambda, q).ok() == Some(base));
    out.push(Check::new("base-independence", agree, format!("rank ≥ 0: {base}")));

    let name = "dhar-vs-integer-search";
    match phi_search_bound(g, lambda) {
        Ok(bound) => {
            let size = (bound as u64 + 1).checked_pow(g.vertex_count() as u32);
            match size {
                Some(s) if s <= PHI_SEARCH_LIMIT => {
                    let search = rank_by_phi_search(g, lambda, bound).unwrap_or(!base);
                    out.push(Check::new(name, search == base, format!("searched [0, {bound}]^n")));
                }
                _ => out.push(Check::skipped(name, "search box too large")),
            }
        }
        Err(e) => out.push(Check::new(name, false, e.to_string())),
    }

    let name = "dhar-vs-class-enumeration";
    let classes = PicardClasses::new(g);
    if classes.order() > CLASS_LIMIT {
        out.push(Check::skipped(name, format!("Picard group of order {}", classes.order())));
    } else {
        let by_class = rank_by_class_enumeration(g, lambda).unwrap_or(!base);
        out.push(Check::new(name, by_class == base, format!("Picard group of order {}", classes.order())));
    }
    out
}

fn curve_checks(j: &CurveBodyJob<Rational>, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut out = vec![cross_check(j, "parametric-vs-projection")?];
    match j.body() {
        Ok(body) => {
            let v = body.to_v_polyhedron();
            let inside = (0..SAMPLES).all(|_| {
                let p = body.sample_point(4, rng);
                v.contains(&p)
            });
            out.push(Check::new("boundary-vs-v-representation", inside, format!("{SAMPLES} sampled points")));
        }
        Err(e) if is_empty_class(&e) => out.push(Check::skipped("boundary-vs-v-representation", e.to_string())),
        Err(e) => return Err(e.into()),
    }
    out.push(minimal_element_check(&j.graph, &j.lambda, rng)?);
    Ok(out)
}

fn toric_checks(j: &ToricJob) -> Result<Vec<Check>> {
    let body = toric_body::<Rational>(&j.model, &j.flag)?;
    let fm = toric_body_fm::<Rational>(&j.model, &j.flag)?;
    let mut out = vec![Check::new(
        "vertex-map-vs-projection",
        body.equals_h(&fm)?,
        format!("{} vertices, {} rays", body.vertices().len(), body.rays().len()),
    )];

    let points = model_lattice_points(&j.model, 2)?;
    let mut inside = true;
    for (m, h) in &points {
        match monomial_valuation(&j.model, &j.flag, m, *h)? {
            MonomialValuation::Valuation(v) => {
                let v: Vec<Rational> = v.iter().map(|&x| Rational::from_i64(x)).collect();
                inside &= fm.contains(&v);
            }
            MonomialValuation::NotASection => inside = false,
        }
    }
    out.push(Check::new(
        "monomial-valuations-in-body",
        inside,
        format!("{} lattice points with h ≤ 2", points.len()),
    ));

    match generic_fiber_image::<Rational>(&j.model, &j.flag)? {
        Some((k, image)) => {
            let dropped = drop_coordinate(&body, k)?;
            out.push(Check::new(
                "generic-fiber-compatibility",
                dropped.set_eq(&image),
                format!("vertical flag ray at index {k}"),
            ));
        }
        None => out.push(Check::skipped("generic-fiber-compatibility", "no single vertical flag ray")),
    }
    Ok(out)
}
