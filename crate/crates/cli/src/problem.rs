//! Problem files: a cone by inequalities or generators, or a polytope by vertices.

use std::str::FromStr;

use reciprocone::{Cone, IntMatrix, IntVector, Rat, RatVector, RationalPolytope, VCone};
use serde::Deserialize;

use crate::InputError;

/// Integer literal or `"p/q"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalLit {
    Int(i64),
    Text(String),
}

impl RationalLit {
    fn parse(&self) -> Result<Rat, String> {
        match self {
            RationalLit::Int(v) => Ok(Rat::from_integer((*v).into())),
            RationalLit::Text(s) => {
                let s = s.trim();
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let num = reciprocone::Int::from_str(num).map_err(|_| format!("`{s}` is not a rational"))?;
                let den = reciprocone::Int::from_str(den).map_err(|_| format!("`{s}` is not a rational"))?;
                if den == 0.into() {
                    return Err(format!("`{s}` has a zero denominator"));
                }
                Ok(Rat::new(num, den))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub inequalities: Option<Vec<Vec<i64>>>,
    pub generators: Option<Vec<Vec<i64>>>,
    pub vertices: Option<Vec<Vec<RationalLit>>>,
    /// 1-based rows that are strict in the base cone.
    pub open_rows: Option<Vec<usize>>,
    pub bound: Option<u32>,
    pub trunc: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub enum Problem {
    Cone(Cone),
    Polytope(RationalPolytope),
}

impl ProblemFile {
    pub fn from_bytes(bytes: &[u8]) -> Result<ProblemFile, InputError> {
        let text = std::str::from_utf8(bytes).map_err(|e| InputError(format!("input is not UTF-8: {e}")))?;
        serde_json::from_str(text).map_err(|e| InputError(format!("parse error: {e}")))
    }

    /// Shape checks, then construction of the geometric object.
    pub fn build(&self) -> Result<Problem, InputError> {
        let given = [
            self.inequalities.is_some(),
            self.generators.is_some(),
            self.vertices.is_some(),
        ];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(InputError(
                "exactly one of `inequalities`, `generators`, `vertices` must be given".into(),
            ));
        }
        if let Some(rows) = &self.inequalities {
            let a = IntMatrix::from_rows(&int_rows("inequalities", rows)?).map_err(lib_error)?;
            let k = Cone::from_inequalities(a).map_err(lib_error)?;
            return self.with_open_rows(k).map(Problem::Cone);
        }
        if let Some(rows) = &self.generators {
            let v = VCone::new(int_rows("generators", rows)?).map_err(lib_error)?;
            let k = v.to_cone().map_err(lib_error)?;
            return self.with_open_rows(k).map(Problem::Cone);
        }
        let rows = self.vertices.as_ref().expect("checked above");
        if self.open_rows.is_some() {
            return Err(InputError(
                "field `open_rows` applies to cones, not to `vertices`".into(),
            ));
        }
        check_ragged("vertices", rows.iter().map(Vec::len))?;
        let mut points = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let coords = row
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    c.parse()
                        .map_err(|e| InputError(format!("field `vertices`, row {}, entry {}: {e}", i + 1, j + 1)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            points.push(RatVector::new(coords));
        }
        RationalPolytope::new(points).map(Problem::Polytope).map_err(lib_error)
    }

    fn with_open_rows(&self, k: Cone) -> Result<Cone, InputError> {
        let Some(rows) = &self.open_rows else {
            return Ok(k);
        };
        let m = k.inequalities().rows();
        let mut zero_based = Vec::with_capacity(rows.len());
        for &r in rows {
            if r == 0 || r > m {
                return Err(InputError(format!("field `open_rows`: row {r} is not in 1..={m}")));
            }
            zero_based.push(r - 1);
        }
        k.with_open_rows(&zero_based).map_err(lib_error)
    }
}

fn check_ragged(field: &str, lens: impl Iterator<Item = usize>) -> Result<(), InputError> {
    let lens: Vec<usize> = lens.collect();
    if lens.is_empty() {
        return Err(InputError(format!("field `{field}` is empty")));
    }
    if lens[0] == 0 {
        return Err(InputError(format!("field `{field}`: row 1 is empty")));
    }
    if let Some(i) = lens.iter().position(|&l| l != lens[0]) {
        return Err(InputError(format!(
            "field `{field}`: row {} has {} entries, expected {}",
            i + 1,
            lens[i],
            lens[0]
        )));
    }
    Ok(())
}

fn int_rows(field: &str, rows: &[Vec<i64>]) -> Result<Vec<IntVector>, InputError> {
    check_ragged(field, rows.iter().map(Vec::len))?;
    Ok(rows.iter().map(|r| IntVector::from_i64(r)).collect())
}

fn lib_error(e: reciprocone::Error) -> InputError {
    InputError(e.to_string())
}
