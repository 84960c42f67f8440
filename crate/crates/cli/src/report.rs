//! Machine-readable reports and the human rendering derived from them.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: CommandEcho,
    /// SHA-256 of the problem file bytes.
    pub input_digest: String,
    pub result: Payload,
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandEcho {
    pub command: String,
    pub file: String,
    pub mode: String,
    pub bound: u32,
    pub max_t: u64,
    pub trunc: usize,
    pub halfopen: bool,
    pub series: bool,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    ValidateCone(ConeSummary),
    ValidatePolytope(PolytopeSummary),
    Genfun(GenfunOut),
    Reciprocity(ReciprocityOut),
    Trace(TraceOut),
    Ehrhart(EhrhartOut),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSummary {
    pub dim: usize,
    pub inequalities: Vec<Vec<i64>>,
    /// 1-based.
    pub open_rows: Vec<usize>,
    pub rays: Vec<Vec<i64>>,
    pub pointed: bool,
    pub full_dimensional: bool,
    pub normalized: bool,
    /// Rows of the unimodular map taking the cone into the orthant.
    pub normalization: Vec<Vec<i64>>,
    pub normalized_rays: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeSummary {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub cone_generators: Vec<Vec<i64>>,
    pub facets: Vec<Vec<i64>>,
    pub period: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub exponent: Vec<i64>,
    pub coefficient: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermOut {
    pub sign: i8,
    pub numerator: Vec<Monomial>,
    pub denominator: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenfunOut {
    pub mode: String,
    pub normalization: Vec<Vec<i64>>,
    pub terms: Vec<TermOut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessOut {
    pub stage: String,
    pub exponent: Vec<i64>,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReciprocityOut {
    pub variant: String,
    pub dim: usize,
    pub bound: u32,
    pub normalization: Vec<Vec<i64>>,
    /// 1-based rows closed in the base cone.
    pub closed_rows: Vec<usize>,
    pub open_rows: Vec<usize>,
    pub witness: Option<WitnessOut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemOut {
    pub variables: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepOut {
    /// 1-based row of the original system.
    pub row: usize,
    pub pivot: String,
    pub system: SystemOut,
    pub carry: Vec<String>,
    /// Per row, the variable holding a negative entry.
    pub negative_entries: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbortOut {
    pub step: usize,
    pub failing_row: usize,
    pub system: SystemOut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceOut {
    pub normalization: Vec<Vec<i64>>,
    pub carry_source: String,
    pub initial: SystemOut,
    pub initial_carry: Vec<String>,
    pub steps: Vec<StepOut>,
    pub sign_count: usize,
    pub aborted: Option<AbortOut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EhrhartCheckOut {
    pub t: u64,
    pub closed_at_neg: String,
    pub signed_interior: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HilbertOut {
    pub rendered: String,
    pub numerator: Vec<String>,
    /// `[h, k]` for a factor `(1 - q^h)^k`.
    pub denominator: Vec<[u64; 2]>,
    pub series: Vec<String>,
    pub counts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EhrhartOut {
    pub dim: usize,
    pub mode: String,
    pub vertices: Vec<Vec<String>>,
    pub period: u64,
    /// Coefficients of `t^0, t^1, ...` per residue class.
    pub classes: Vec<Vec<String>>,
    pub quasipolynomial: String,
    pub checks: Vec<EhrhartCheckOut>,
    pub hilbert: Option<HilbertOut>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let c = &self.command;
        let mut line = format!("reciprocone {} {}", c.command, c.file);
        if c.mode != "closed" {
            line.push_str(&format!(" --mode {}", c.mode));
        }
        if c.halfopen {
            line.push_str(" --halfopen");
        }
        if c.series {
            line.push_str(" --series");
        }
        if let Some(s) = c.seed {
            line.push_str(&format!(" --seed {s}"));
        }
        let _ = writeln!(out, "{line}");
        let _ = writeln!(out, "input sha256 {}", self.input_digest);
        let _ = writeln!(out);
        match &self.result {
            Payload::ValidateCone(s) => render_cone(&mut out, s),
            Payload::ValidatePolytope(s) => render_polytope(&mut out, s),
            Payload::Genfun(g) => render_genfun(&mut out, g),
            Payload::Reciprocity(r) => render_reciprocity(&mut out, r),
            Payload::Trace(t) => render_trace(&mut out, t),
            Payload::Ehrhart(e) => render_ehrhart(&mut out, e),
        }
        let _ = writeln!(out);
        for v in &self.verdicts {
            let _ = write!(out, "{:<20} {}", v.name, if v.pass { "PASS" } else { "FAIL" });
            if let Some(w) = &v.witness {
                let _ = write!(out, "  ({w})");
            }
            let _ = writeln!(out);
        }
        out
    }
}

fn tuple(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn str_tuple(v: &[String]) -> String {
    format!("({})", v.join(", "))
}

fn render_matrix(out: &mut String, rows: &[Vec<i64>]) {
    for r in rows {
        let _ = writeln!(out, "  {}", tuple(r));
    }
}

fn render_system(out: &mut String, s: &SystemOut) {
    let width = s
        .rows
        .iter()
        .flatten()
        .chain(&s.variables)
        .map(String::len)
        .max()
        .unwrap_or(1);
    let head: Vec<String> = s.variables.iter().map(|v| format!("{v:>width$}")).collect();
    let _ = writeln!(out, "    {}", head.join(" "));
    for r in &s.rows {
        let cells: Vec<String> = r.iter().map(|v| format!("{v:>width$}")).collect();
        let _ = writeln!(out, "    {}", cells.join(" "));
    }
    if s.rows.is_empty() {
        let _ = writeln!(out, "    (no rows)");
    }
}

fn render_cone(out: &mut String, s: &ConeSummary) {
    let _ = writeln!(out, "cone in dimension {}", s.dim);
    let _ = writeln!(out, "inequalities (A x <= 0):");
    render_matrix(out, &s.inequalities);
    if !s.open_rows.is_empty() {
        let _ = writeln!(out, "strict rows: {:?}", s.open_rows);
    }
    let _ = writeln!(out, "pointed: {}  full-dimensional: {}", s.pointed, s.full_dimensional);
    let _ = writeln!(out, "rays ({}):", s.rays.len());
    render_matrix(out, &s.rays);
    if s.normalized {
        let _ = writeln!(out, "already normalized");
    } else {
        let _ = writeln!(out, "normalization map:");
        render_matrix(out, &s.normalization);
        let _ = writeln!(out, "normalized rays:");
        render_matrix(out, &s.normalized_rays);
    }
}

fn render_polytope(out: &mut String, s: &PolytopeSummary) {
    let _ = writeln!(out, "polytope in dimension {}, period {}", s.dim, s.period);
    let _ = writeln!(out, "vertices ({}):", s.vertices.len());
    for v in &s.vertices {
        let _ = writeln!(out, "  {}", str_tuple(v));
    }
    let _ = writeln!(out, "cone generators:");
    render_matrix(out, &s.cone_generators);
    let _ = writeln!(out, "facets of the cone:");
    render_matrix(out, &s.facets);
}

fn render_genfun(out: &mut String, g: &GenfunOut) {
    let _ = writeln!(out, "{} generating function, {} term(s)", g.mode, g.terms.len());
    if g.normalization
        .iter()
        .enumerate()
        .any(|(i, r)| r.iter().enumerate().any(|(j, &v)| v != (i == j) as i64))
    {
        let _ = writeln!(out, "computed after the normalization map:");
        render_matrix(out, &g.normalization);
    }
    for t in &g.terms {
        let num: Vec<String> = t
            .numerator
            .iter()
            .map(|m| {
                if m.coefficient == "1" {
                    format!("x^{}", tuple(&m.exponent))
                } else {
                    format!("{}*x^{}", m.coefficient, tuple(&m.exponent))
                }
            })
            .collect();
        let den: Vec<String> = t.denominator.iter().map(|b| format!("(1 - x^{})", tuple(b))).collect();
        let _ = writeln!(
            out,
            "{} ({}) / {}",
            if t.sign > 0 { "+" } else { "-" },
            num.join(" + "),
            den.join("")
        );
    }
}

fn render_reciprocity(out: &mut String, r: &ReciprocityOut) {
    let _ = writeln!(
        out,
        "{} reciprocity in dimension {}, box [0, {}]^{}",
        r.variant, r.dim, r.bound, r.dim
    );
    if r.variant == "halfopen" {
        let _ = writeln!(out, "closed rows {:?}, open rows {:?}", r.closed_rows, r.open_rows);
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(
            out,
            "first mismatch ({}) at {}: {} vs {}",
            w.stage,
            tuple(&w.exponent),
            w.left,
            w.right
        );
    }
}

fn render_trace(out: &mut String, t: &TraceOut) {
    let _ = writeln!(out, "slack system, carry from {}:", t.carry_source);
    render_system(out, &t.initial);
    let _ = writeln!(out, "  carry {}", str_tuple(&t.initial_carry));
    for (i, s) in t.steps.iter().enumerate() {
        let _ = writeln!(out, "step {}: eliminate row {} via {}", i + 1, s.row, s.pivot);
        render_system(out, &s.system);
        let _ = writeln!(out, "  carry {}", str_tuple(&s.carry));
        if !s.negative_entries.is_empty() {
            let _ = writeln!(out, "  negative entries at {}", s.negative_entries.join(", "));
        }
    }
    let _ = writeln!(out, "sign count {}", t.sign_count);
    if let Some(a) = &t.aborted {
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "!!! TRACE ABORTED at step {}: row {} has no negative entry",
            a.step, a.failing_row
        );
        render_system(out, &a.system);
    }
}

fn render_ehrhart(out: &mut String, e: &EhrhartOut) {
    let _ = writeln!(
        out,
        "polytope in dimension {} with {} vertices",
        e.dim,
        e.vertices.len()
    );
    let _ = writeln!(out, "{} quasi-polynomial, period {}:", e.mode, e.period);
    let _ = writeln!(out, "  {}", e.quasipolynomial);
    let _ = writeln!(out, "reciprocity checked for t = 1..{}", e.checks.len());
    if let Some(h) = &e.hilbert {
        let _ = writeln!(out, "hilbert series {}", h.rendered);
        let _ = writeln!(out, "  series {}", h.series.join(" "));
        let _ = writeln!(out, "  counts {}", h.counts.join(" "));
    }
}
