//! Library side of the `reciprocone` binary: problem files in, reports out.

pub mod problem;
pub mod report;

use std::fmt;

use num_traits::ToPrimitive;
use reciprocone::cone::Mode;
use reciprocone::ctengine::{Carry, Certificate};
use reciprocone::exactla::IntVector;
use reciprocone::genfun::{Mismatch, Stage};
use reciprocone::{
    brute_force_series, cone_over, count, elimination_trace, halfopen_reciprocity_check, hilbert_series,
    negativity_certificate, quasipolynomial, reciprocity_check, sigma, stanley_reciprocity_check, Cone, Error,
    HalfOpenSpec, IntMatrix, Rat, RatMatrix, RationalGenFun, RationalPolytope, SlackSystem, UnimodularMap,
};
use sha2::{Digest, Sha256};

pub use problem::{Problem, ProblemFile};
pub use report::*;

pub const DEFAULT_BOUND: u32 = 6;
pub const DEFAULT_MAX_T: u64 = 12;
pub const DEFAULT_TRUNC: usize = 10;

/// Bad input or usage; exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Genfun,
    Reciprocity,
    Trace,
    Ehrhart,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Genfun => "genfun",
            Command::Reciprocity => "reciprocity",
            Command::Trace => "trace",
            Command::Ehrhart => "ehrhart",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub command: Command,
    pub mode: Mode,
    pub bound: Option<u32>,
    pub max_t: Option<u64>,
    pub halfopen: bool,
    pub series: bool,
    pub seed: Option<u64>,
}

impl Options {
    pub fn new(command: Command) -> Self {
        Options {
            command,
            mode: Mode::Closed,
            bound: None,
            max_t: None,
            halfopen: false,
            series: false,
            seed: None,
        }
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Closed => "closed",
        Mode::Interior => "interior",
    }
}

/// Parse `bytes` as a problem file and run the command. `label` is echoed as
/// the file name.
pub fn run(opts: &Options, label: &str, bytes: &[u8]) -> Result<Report, InputError> {
    let file = ProblemFile::from_bytes(bytes)?;
    let problem = file.build()?;
    let echo = CommandEcho {
        command: opts.command.name().to_string(),
        file: label.to_string(),
        mode: mode_name(opts.mode).to_string(),
        bound: opts.bound.or(file.bound).unwrap_or(DEFAULT_BOUND),
        max_t: opts.max_t.unwrap_or(DEFAULT_MAX_T),
        trunc: file.trunc.unwrap_or(DEFAULT_TRUNC),
        halfopen: opts.halfopen,
        series: opts.series,
        seed: opts.seed.or(file.seed),
    };
    let (result, verdicts) = match (opts.command, &problem) {
        (Command::Validate, Problem::Cone(k)) => validate_cone(k)?,
        (Command::Validate, Problem::Polytope(p)) => validate_polytope(p)?,
        (Command::Genfun, Problem::Cone(k)) => genfun(k, opts.mode, echo.bound)?,
        (Command::Reciprocity, Problem::Cone(k)) => reciprocity(k, echo.bound, opts.halfopen)?,
        (Command::Trace, Problem::Cone(k)) => trace(k, echo.seed)?,
        (Command::Ehrhart, Problem::Polytope(p)) => {
            ehrhart(p, opts.mode, echo.max_t, opts.series.then_some(echo.trunc))?
        }
        (Command::Ehrhart, Problem::Cone(_)) => {
            return Err(InputError("`ehrhart` needs a `vertices` file".into()));
        }
        (c, Problem::Polytope(_)) => {
            return Err(InputError(format!(
                "`{}` needs a cone (`inequalities` or `generators`)",
                c.name()
            )));
        }
    };
    Ok(Report {
        command: echo,
        input_digest: hex::encode(Sha256::digest(bytes)),
        result,
        verdicts,
    })
}

type Outcome = (Payload, Vec<Verdict>);

fn ints(v: &[reciprocone::Int]) -> Result<Vec<i64>, InputError> {
    v.iter()
        .map(|x| {
            x.to_i64()
                .ok_or_else(|| InputError(format!("{x} does not fit in 64 bits")))
        })
        .collect()
}

fn matrix_rows(m: &IntMatrix) -> Result<Vec<Vec<i64>>, InputError> {
    (0..m.rows()).map(|i| ints(m.row(i))).collect()
}

fn vectors(vs: &[IntVector]) -> Result<Vec<Vec<i64>>, InputError> {
    vs.iter().map(|v| ints(v)).collect()
}

fn rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(Rat::to_string).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn verdict(name: &str, pass: bool, witness: Option<String>) -> Verdict {
    Verdict {
        name: name.to_string(),
        pass,
        witness,
    }
}

fn normalized(k: &Cone) -> Result<(UnimodularMap, Cone), InputError> {
    Ok(k.normalize()?)
}

fn validate_cone(k: &Cone) -> Result<Outcome, InputError> {
    let (phi, image) = normalized(k)?;
    let summary = ConeSummary {
        dim: k.dim(),
        inequalities: matrix_rows(k.inequalities())?,
        open_rows: one_based(&k.open_rows()),
        rays: vectors(k.ray_vectors())?,
        pointed: true,
        full_dimensional: true,
        normalized: k.is_normalized(),
        normalization: matrix_rows(phi.matrix())?,
        normalized_rays: vectors(image.ray_vectors())?,
    };
    Ok((Payload::ValidateCone(summary), vec![verdict("valid", true, None)]))
}

fn validate_polytope(p: &RationalPolytope) -> Result<Outcome, InputError> {
    let v = cone_over(p);
    let summary = PolytopeSummary {
        dim: p.dim(),
        vertices: p.vertices().iter().map(|v| rats(v)).collect(),
        cone_generators: vectors(v.generators())?,
        facets: matrix_rows(v.to_cone()?.inequalities())?,
        period: p
            .denominator()
            .to_u64()
            .ok_or_else(|| InputError("period overflow".into()))?,
    };
    Ok((Payload::ValidatePolytope(summary), vec![verdict("valid", true, None)]))
}

fn terms_out(f: &RationalGenFun) -> Result<Vec<TermOut>, InputError> {
    let mut terms = f
        .terms()
        .iter()
        .map(|t| {
            Ok(TermOut {
                sign: if t.sign == reciprocone::Sign::Plus { 1 } else { -1 },
                numerator: t
                    .numerator
                    .iter()
                    .map(|(m, c)| {
                        Ok(Monomial {
                            exponent: ints(m)?,
                            coefficient: c.to_string(),
                        })
                    })
                    .collect::<Result<_, InputError>>()?,
                denominator: vectors(&t.denominator)?,
            })
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    terms.sort_by(|a, b| {
        (
            &a.denominator,
            a.numerator.iter().map(|m| &m.exponent).collect::<Vec<_>>(),
            a.sign,
        )
            .cmp(&(
                &b.denominator,
                b.numerator.iter().map(|m| &m.exponent).collect::<Vec<_>>(),
                b.sign,
            ))
    });
    Ok(terms)
}

fn genfun(k: &Cone, mode: Mode, bound: u32) -> Result<Outcome, InputError> {
    let (phi, k) = if k.in_orthant() {
        (UnimodularMap::identity(k.dim()), k.clone())
    } else {
        normalized(k)?
    };
    let f = sigma(&k, mode)?;
    let mismatch = f
        .expand(bound)?
        .first_mismatch(&brute_force_series(&k, mode.into(), bound)?);
    let out = GenfunOut {
        mode: mode_name(mode).to_string(),
        normalization: matrix_rows(phi.matrix())?,
        terms: terms_out(&f)?,
    };
    let witness = mismatch.map(|m| describe(&m));
    Ok((
        Payload::Genfun(out),
        vec![verdict("oracle", witness.is_none(), witness)],
    ))
}

fn describe(m: &Mismatch) -> String {
    format!("{:?}: {} vs {}", m.exponent, m.left, m.right)
}

fn witness_out(stage: &str, m: &Mismatch) -> WitnessOut {
    WitnessOut {
        stage: stage.to_string(),
        exponent: m.exponent.clone(),
        left: m.left.to_string(),
        right: m.right.to_string(),
    }
}

fn reciprocity(k: &Cone, bound: u32, halfopen: bool) -> Result<Outcome, InputError> {
    if halfopen {
        let (phi, image) = normalized(k)?;
        let r = halfopen_reciprocity_check(&HalfOpenSpec::new(image)?, bound)?;
        let witness = r.witness.as_ref().map(|m| witness_out("reciprocity", m));
        let out = ReciprocityOut {
            variant: "halfopen".into(),
            dim: r.dim,
            bound,
            normalization: matrix_rows(phi.matrix())?,
            closed_rows: one_based(&r.closed_rows),
            open_rows: one_based(&r.open_rows),
            witness,
        };
        let w = r.witness.as_ref().map(describe);
        return Ok((Payload::Reciprocity(out), vec![verdict("reciprocity", r.pass, w)]));
    }
    if !k.open_rows().is_empty() {
        return Err(InputError("`open_rows` requires --halfopen".into()));
    }
    let r = stanley_reciprocity_check(k, bound)?;
    let stage = |s: Stage| match s {
        Stage::ClosedFormValidation => "closed-form",
        Stage::InteriorFormValidation => "interior-form",
        Stage::Reciprocity => "reciprocity",
    };
    let out = ReciprocityOut {
        variant: "stanley".into(),
        dim: r.dim,
        bound,
        normalization: matrix_rows(r.normalization.matrix())?,
        closed_rows: (1..=k.inequalities().rows()).collect(),
        open_rows: Vec::new(),
        witness: r.witness.as_ref().map(|(s, m)| witness_out(stage(*s), m)),
    };
    let failed_at = |s: Stage| r.witness.as_ref().filter(|(ws, _)| *ws == s).map(|(_, m)| describe(m));
    let reciprocity_ok = r.closed_validated && r.interior_validated && r.pass;
    let verdicts = vec![
        verdict(
            "closed-form",
            r.closed_validated,
            failed_at(Stage::ClosedFormValidation),
        ),
        verdict(
            "interior-form",
            r.interior_validated,
            failed_at(Stage::InteriorFormValidation),
        ),
        verdict("reciprocity", reciprocity_ok, failed_at(Stage::Reciprocity)),
    ];
    Ok((Payload::Reciprocity(out), verdicts))
}

fn system_out(s: &SlackSystem) -> SystemOut {
    let m: &RatMatrix = s.matrix();
    SystemOut {
        variables: s.var_names().to_vec(),
        rows: (0..m.rows()).map(|i| rats(m.row(i))).collect(),
    }
}

fn trace(k: &Cone, seed: Option<u64>) -> Result<Outcome, InputError> {
    let (phi, k) = normalized(k)?;
    let carry = match seed {
        Some(s) => Carry::Seeded(s),
        None => Carry::Auto,
    };
    let carry_source = match seed {
        Some(s) => format!("seed {s}"),
        None => "sum of rays".to_string(),
    };
    let initial = reciprocone::slack_matrix(k.inequalities())?;
    match elimination_trace(&k, &carry) {
        Ok(t) => {
            let names = |s: &SlackSystem, cert: &[usize]| -> Vec<String> {
                cert.iter().map(|&j| s.var_names()[j].clone()).collect()
            };
            let steps = t
                .steps
                .iter()
                .map(|s| StepOut {
                    row: s.original_row + 1,
                    pivot: s.pivot_var.clone(),
                    system: system_out(&s.system),
                    carry: rats(&s.carry),
                    negative_entries: names(&s.system, &s.certificate),
                })
                .collect();
            let all_certified = t.steps.iter().all(|s| negativity_certificate(&s.system).holds())
                && matches!(negativity_certificate(&t.initial), Certificate::Holds(_));
            let m = k.inequalities().rows();
            let out = TraceOut {
                normalization: matrix_rows(phi.matrix())?,
                carry_source,
                initial: system_out(&t.initial),
                initial_carry: rats(&t.initial_carry),
                steps,
                sign_count: t.sign_count,
                aborted: None,
            };
            let verdicts = vec![
                verdict("certificates", all_certified, None),
                verdict(
                    "sign-count",
                    t.sign_count == m,
                    (t.sign_count != m).then(|| format!("{} steps for {m} rows", t.sign_count)),
                ),
            ];
            Ok((Payload::Trace(out), verdicts))
        }
        Err(Error::TraceAborted(a)) => {
            let out = TraceOut {
                normalization: matrix_rows(phi.matrix())?,
                carry_source,
                initial: system_out(&initial),
                initial_carry: Vec::new(),
                steps: Vec::new(),
                sign_count: a.completed.len(),
                aborted: Some(AbortOut {
                    step: a.step + 1,
                    failing_row: a.failing_row + 1,
                    system: system_out(&a.system),
                }),
            };
            let w = format!("step {} row {}", a.step + 1, a.failing_row + 1);
            Ok((Payload::Trace(out), vec![verdict("certificates", false, Some(w))]))
        }
        Err(e) => Err(e.into()),
    }
}

fn ehrhart(p: &RationalPolytope, mode: Mode, max_t: u64, trunc: Option<usize>) -> Result<Outcome, InputError> {
    let rec = reciprocity_check(p, max_t)?;
    let q = match mode {
        Mode::Closed => rec.closed.clone(),
        Mode::Interior => quasipolynomial(p, Mode::Interior)?,
    };
    let mut verdicts = vec![verdict(
        "ehrhart-macdonald",
        rec.pass,
        rec.witness.map(|t| format!("t = {t}")),
    )];
    let hilbert = match trunc {
        None => None,
        Some(n) => {
            let h = hilbert_series(p, mode)?;
            let series = h.series(n);
            let counts: Vec<reciprocone::Int> = (0..=n as u64).map(|t| count(p, t, mode)).collect();
            let first_bad = (0..=n).find(|&t| series[t] != counts[t]);
            verdicts.push(verdict(
                "hilbert-series",
                first_bad.is_none(),
                first_bad.map(|t| format!("q^{t}")),
            ));
            Some(HilbertOut {
                rendered: h.to_string(),
                numerator: h.numerator().iter().map(ToString::to_string).collect(),
                denominator: h.denominator().iter().map(|(&h, &k)| [h, k as u64]).collect(),
                series: series.iter().map(ToString::to_string).collect(),
                counts: counts.iter().map(ToString::to_string).collect(),
            })
        }
    };
    let out = EhrhartOut {
        dim: p.dim(),
        mode: mode_name(mode).to_string(),
        vertices: p.vertices().iter().map(|v| rats(v)).collect(),
        period: q.period(),
        classes: q.classes().iter().map(|c| rats(c)).collect(),
        quasipolynomial: q.to_string(),
        checks: rec
            .checks
            .iter()
            .map(|c| EhrhartCheckOut {
                t: c.t,
                closed_at_neg: c.closed_at_neg.to_string(),
                signed_interior: c.signed_interior.to_string(),
            })
            .collect(),
        hilbert,
    };
    Ok((Payload::Ehrhart(out), verdicts))
}
