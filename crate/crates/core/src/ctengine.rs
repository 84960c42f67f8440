//! Constant-term machinery for cones: the slack system `(A | I)`, Euler's
//! constant-term lemma as a finite computation, and the column-elimination
//! procedure with its positivity and negativity certificates.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{box_points, Cone};
use crate::error::{Error, Result};
use crate::exactla::{Int, IntMatrix, IntVector, Rat, RatMatrix, RatVector};
use crate::genfun::TruncatedSeries;

/// The matrix `(A | I)` acting on `(x, y)`, with column labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlackSystem {
    matrix: RatMatrix,
    var_names: Vec<String>,
}

impl SlackSystem {
    pub fn new(matrix: RatMatrix, var_names: Vec<String>) -> Result<Self> {
        if var_names.len() != matrix.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{} names for {} columns",
                var_names.len(),
                matrix.cols()
            )));
        }
        Ok(SlackSystem { matrix, var_names })
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.rows() == 0
    }

    fn check_carry(&self, carry: &RatVector) -> Result<()> {
        if carry.dim() != self.cols() {
            return Err(Error::InvalidCarry(format!(
                "length {} for {} columns",
                carry.dim(),
                self.cols()
            )));
        }
        if !carry.all_positive() {
            return Err(Error::InvalidCarry(format!("{carry} is not strictly positive")));
        }
        let image = self.matrix.mul_vec(carry)?;
        if image.iter().any(|v| !v.is_zero()) {
            return Err(Error::InvalidCarry(format!("{carry} is not in the kernel")));
        }
        Ok(())
    }
}

impl fmt::Display for SlackSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.var_names.join(" "))?;
        write!(f, "{}", self.matrix)
    }
}

pub fn slack_matrix(a: &IntMatrix) -> Result<SlackSystem> {
    let (m, d) = (a.rows(), a.cols());
    if m == 0 || d == 0 {
        return Err(Error::EmptySystem);
    }
    let mut data = Vec::with_capacity(m * (d + m));
    for i in 0..m {
        data.extend(a.row(i).iter().map(|v| Rat::from_integer(v.clone())));
        data.extend((0..m).map(|k| Rat::from_integer(Int::from((i == k) as i64))));
    }
    let names = (1..=d).map(|j| format!("x{j}")).chain((1..=m).map(|k| format!("y{k}")));
    SlackSystem::new(RatMatrix::new(m, d + m, data)?, names.collect())
}

/// Exponents `(n, p)` of the constant term in `z` of
/// `∏_j 1/(1 - x_j z^{a_j}) ∏_k 1/(1 - y_k z_k)`, for `n ∈ [0,B]^d`.
///
/// Only the x-part is truncated: every term that survives has `p = -A·n`, so
/// the y-exponents are determined and need no bound of their own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSeries {
    x_dim: usize,
    y_dim: usize,
    bound: u32,
    exponents: BTreeSet<(Vec<i64>, Vec<i64>)>,
}

impl ThetaSeries {
    pub fn x_dim(&self) -> usize {
        self.x_dim
    }

    pub fn y_dim(&self) -> usize {
        self.y_dim
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn coefficient(&self, x: &[i64], y: &[i64]) -> Int {
        Int::from(self.exponents.contains(&(x.to_vec(), y.to_vec())) as i64)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &[i64])> {
        self.exponents.iter().map(|(x, y)| (x.as_slice(), y.as_slice()))
    }

    /// Set every `y_k = 1`.
    pub fn at_y_one(&self) -> TruncatedSeries {
        let mut out = TruncatedSeries::new(self.x_dim, self.bound);
        for (x, _) in &self.exponents {
            out.add(x.clone(), Int::from(1));
        }
        out
    }
}

pub fn euler_constant_term(a: &IntMatrix, bound: u32) -> Result<ThetaSeries> {
    let (m, d) = (a.rows(), a.cols());
    if m == 0 || d == 0 {
        return Err(Error::EmptySystem);
    }
    let cols: Vec<Vec<i64>> = a.transpose().to_i64_rows().ok_or(Error::Overflow)?;
    // x-part: x^n z^{A n}; the box enumeration is the product of the
    // truncated geometric series, factor by factor
    let mut exponents = BTreeSet::new();
    for n in box_points(d, bound as i64) {
        let mut z = vec![0i64; m];
        for (j, &nj) in n.iter().enumerate() {
            for (zk, ak) in z.iter_mut().zip(&cols[j]) {
                *zk = zk
                    .checked_add(ak.checked_mul(nj).ok_or(Error::Overflow)?)
                    .ok_or(Error::Overflow)?;
            }
        }
        // y-part contributes y^p z^p, p >= 0: a constant term needs p = -z
        if z.iter().all(|&v| v <= 0) {
            exponents.insert((n, z.iter().map(|v| -v).collect()));
        }
    }
    Ok(ThetaSeries {
        x_dim: d,
        y_dim: m,
        bound,
        exponents,
    })
}

/// Solve row `row` for the pivot variable and substitute it everywhere.
pub fn eliminate_step(
    s: &SlackSystem,
    row: usize,
    pivot_col: usize,
    carry: &RatVector,
) -> Result<(SlackSystem, RatVector)> {
    if row >= s.rows() {
        return Err(Error::IndexOutOfRange {
            index: row,
            len: s.rows(),
        });
    }
    if pivot_col >= s.cols() {
        return Err(Error::IndexOutOfRange {
            index: pivot_col,
            len: s.cols(),
        });
    }
    let m = s.matrix();
    let pivot = &m[(row, pivot_col)];
    if pivot.is_zero() {
        return Err(Error::ZeroPivot { row, col: pivot_col });
    }
    s.check_carry(carry)?;

    let keep_rows: Vec<usize> = (0..s.rows()).filter(|&i| i != row).collect();
    let keep_cols: Vec<usize> = (0..s.cols()).filter(|&k| k != pivot_col).collect();
    let factors: Vec<Rat> = keep_cols.iter().map(|&k| &m[(row, k)] / pivot).collect();
    let mut data = Vec::with_capacity(keep_rows.len() * keep_cols.len());
    for &i in &keep_rows {
        let p = &m[(i, pivot_col)];
        for (&k, f) in keep_cols.iter().zip(&factors) {
            data.push(&m[(i, k)] - f * p);
        }
    }
    let names = keep_cols.iter().map(|&k| s.var_names[k].clone()).collect();
    let next = SlackSystem::new(RatMatrix::new(keep_rows.len(), keep_cols.len(), data)?, names)?;
    let carry = RatVector::new(keep_cols.iter().map(|&k| carry[k].clone()).collect());
    next.check_carry(&carry)?;
    Ok((next, carry))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Column index of a negative entry, per row.
    Holds(Vec<usize>),
    Fails {
        row: usize,
    },
}

impl Certificate {
    pub fn holds(&self) -> bool {
        matches!(self, Certificate::Holds(_))
    }
}

pub fn negativity_certificate(s: &SlackSystem) -> Certificate {
    let m = s.matrix();
    let mut cols = Vec::with_capacity(s.rows());
    for i in 0..s.rows() {
        match m.row(i).iter().position(Signed::is_negative) {
            Some(j) => cols.push(j),
            None => return Certificate::Fails { row: i },
        }
    }
    Certificate::Holds(cols)
}

/// Smallest nonzero absolute value, lowest column on ties.
fn choose_pivot(s: &SlackSystem, row: usize) -> Option<usize> {
    s.matrix()
        .row(row)
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .min_by(|(i, a), (j, b)| a.abs().cmp(&b.abs()).then(i.cmp(j)))
        .map(|(i, _)| i)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Carry {
    Auto,
    Seeded(u64),
    Explicit(RatVector),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    /// Row of the original system being eliminated (0-based).
    pub original_row: usize,
    /// Pivot row and column in the matrix before this step.
    pub pivot_row: usize,
    pub pivot_col: usize,
    pub pivot_var: String,
    pub system: SlackSystem,
    pub carry: RatVector,
    pub certificate: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationTrace {
    pub initial: SlackSystem,
    pub initial_carry: RatVector,
    pub initial_certificate: Vec<usize>,
    pub steps: Vec<TraceStep>,
    pub sign_count: usize,
}

/// State at the point a certificate failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbortedTrace {
    pub step: usize,
    pub failing_row: usize,
    pub system: SlackSystem,
    pub completed: Vec<TraceStep>,
}

/// `(n, -A n)` for an interior lattice point `n`: the sum of the rays, or a
/// seeded positive combination of them.
pub fn positive_carry(k: &Cone, seed: Option<u64>) -> Result<RatVector> {
    let rays = k.ray_vectors();
    let weights: Vec<Int> = match seed {
        None => vec![Int::from(1); rays.len()],
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (0..rays.len()).map(|_| Int::from(rng.gen_range(1..=5i64))).collect()
        }
    };
    let mut n = IntVector::zeros(k.dim());
    for (r, w) in rays.iter().zip(&weights) {
        n = n.add(&r.scale(w));
    }
    let n = n.primitive();
    let y = k.inequalities().mul_vec(&n)?.neg();
    let v: Vec<Rat> = n.iter().chain(y.iter()).map(|v| Rat::from_integer(v.clone())).collect();
    let v = RatVector::new(v);
    if !v.all_positive() {
        return Err(Error::InvalidCarry(format!(
            "{v} is not strictly positive; the cone touches a coordinate hyperplane"
        )));
    }
    Ok(v)
}

/// Eliminate the rows of `(A | I)` in order, certifying every intermediate matrix.
pub fn elimination_trace(k: &Cone, carry: &Carry) -> Result<EliminationTrace> {
    let initial = slack_matrix(k.inequalities())?;
    let initial_carry = match carry {
        Carry::Auto => positive_carry(k, None)?,
        Carry::Seeded(s) => positive_carry(k, Some(*s))?,
        Carry::Explicit(v) => v.clone(),
    };
    initial.check_carry(&initial_carry)?;
    let initial_certificate = match negativity_certificate(&initial) {
        Certificate::Holds(c) => c,
        Certificate::Fails { row } => {
            return Err(Error::TraceAborted(Box::new(AbortedTrace {
                step: 0,
                failing_row: row,
                system: initial,
                completed: Vec::new(),
            })))
        }
    };
    let m = initial.rows();
    let mut steps: Vec<TraceStep> = Vec::with_capacity(m);
    let (mut system, mut v) = (initial.clone(), initial_carry.clone());
    for original_row in 0..m {
        let pivot_col = choose_pivot(&system, 0).ok_or(Error::ZeroPivot { row: 0, col: 0 })?;
        let pivot_var = system.var_names[pivot_col].clone();
        let (next, next_v) = eliminate_step(&system, 0, pivot_col, &v)?;
        let certificate = match negativity_certificate(&next) {
            Certificate::Holds(c) => c,
            Certificate::Fails { row } => {
                return Err(Error::TraceAborted(Box::new(AbortedTrace {
                    step: original_row,
                    failing_row: row,
                    system: next,
                    completed: steps,
                })))
            }
        };
        steps.push(TraceStep {
            original_row,
            pivot_row: 0,
            pivot_col,
            pivot_var,
            system: next.clone(),
            carry: next_v.clone(),
            certificate,
        });
        system = next;
        v = next_v;
    }
    Ok(EliminationTrace {
        initial,
        initial_carry,
        initial_certificate,
        sign_count: steps.len(),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Membership;
    use crate::genfun::brute_force_series;

    fn pyramid_rows() -> IntMatrix {
        IntMatrix::from_i64_rows(&[&[1, -1, 0], &[1, 0, -1], &[-2, 1, 0], &[-2, 0, 1]])
    }

    fn rv(v: &[i64]) -> RatVector {
        RatVector::from_i64(v)
    }

    #[test]
    fn slack_examples() {
        let s = slack_matrix(&pyramid_rows()).unwrap();
        assert_eq!(
            s.matrix(),
            &RatMatrix::from_i64_rows(&[
                &[1, -1, 0, 1, 0, 0, 0],
                &[1, 0, -1, 0, 1, 0, 0],
                &[-2, 1, 0, 0, 0, 1, 0],
                &[-2, 0, 1, 0, 0, 0, 1],
            ])
        );
        assert_eq!(s.var_names(), ["x1", "x2", "x3", "y1", "y2", "y3", "y4"]);
        let s = slack_matrix(&IntMatrix::from_i64_rows(&[&[-1]])).unwrap();
        assert_eq!(s.matrix(), &RatMatrix::from_i64_rows(&[&[-1, 1]]));
        assert_eq!(
            slack_matrix(&IntMatrix::new(0, 2, vec![]).unwrap()),
            Err(Error::EmptySystem)
        );
    }

    #[test]
    fn euler_examples() {
        let t = euler_constant_term(&IntMatrix::from_i64_rows(&[&[-1]]), 3).unwrap();
        assert_eq!(t.len(), 4);
        assert!((0..=3).all(|n| t.coefficient(&[n], &[n]) == Int::from(1)));

        let a = pyramid_rows();
        let t = euler_constant_term(&a, 5).unwrap();
        assert_eq!(t.coefficient(&[2, 3, 3], &[1, 1, 1, 1]), Int::from(1));
        let k = Cone::from_inequalities(a).unwrap();
        assert_eq!(t.at_y_one(), brute_force_series(&k, Membership::Closed, 5).unwrap());
    }

    #[test]
    fn eliminate_examples() {
        let s = slack_matrix(&pyramid_rows()).unwrap();
        let (next, carry) = eliminate_step(&s, 0, 0, &rv(&[2, 3, 3, 1, 1, 1, 1])).unwrap();
        assert_eq!(
            next.matrix(),
            &RatMatrix::from_i64_rows(&[&[1, -1, -1, 1, 0, 0], &[-1, 0, 2, 0, 1, 0], &[-2, 1, 2, 0, 0, 1]])
        );
        assert_eq!(carry, rv(&[3, 3, 1, 1, 1, 1]));
        assert_eq!(negativity_certificate(&next), Certificate::Holds(vec![1, 0, 0]));

        let s = slack_matrix(&IntMatrix::from_i64_rows(&[&[-1]])).unwrap();
        let (next, carry) = eliminate_step(&s, 0, 0, &rv(&[1, 1])).unwrap();
        assert!(next.is_empty());
        assert_eq!(carry, rv(&[1]));

        let s = slack_matrix(&pyramid_rows()).unwrap();
        assert_eq!(
            eliminate_step(&s, 0, 2, &rv(&[2, 3, 3, 1, 1, 1, 1])),
            Err(Error::ZeroPivot { row: 0, col: 2 })
        );
        assert!(matches!(
            eliminate_step(&s, 0, 0, &rv(&[1, 1, 1, 1, 1, 1, 1])),
            Err(Error::InvalidCarry(_))
        ));
    }

    #[test]
    fn certificate_failure() {
        let s = SlackSystem::new(RatMatrix::from_i64_rows(&[&[1, 1]]), vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(negativity_certificate(&s), Certificate::Fails { row: 0 });
    }

    #[test]
    fn pyramid_trace() {
        let k = Cone::from_inequalities(pyramid_rows()).unwrap();
        let t = elimination_trace(&k, &Carry::Auto).unwrap();
        assert_eq!(t.initial_carry, rv(&[2, 3, 3, 1, 1, 1, 1]));
        assert_eq!(t.sign_count, 4);
        assert_eq!(t.steps[0].pivot_var, "x1");
        assert_eq!(t.steps[0].carry, rv(&[3, 3, 1, 1, 1, 1]));
        assert!(t.steps.last().unwrap().system.is_empty());
        assert_eq!(t.steps.last().unwrap().carry.dim(), 3);
    }

    #[test]
    fn trace_d1() {
        let k = Cone::from_inequalities(IntMatrix::from_i64_rows(&[&[-1]])).unwrap();
        let t = elimination_trace(&k, &Carry::Auto).unwrap();
        assert_eq!(t.sign_count, 1);
        assert!(t.steps[0].system.is_empty());
    }

    #[test]
    fn seeded_carry_is_deterministic() {
        let k = Cone::from_inequalities(pyramid_rows()).unwrap();
        let a = elimination_trace(&k, &Carry::Seeded(7)).unwrap();
        let b = elimination_trace(&k, &Carry::Seeded(7)).unwrap();
        assert_eq!(a, b);
        // matrices never depend on the carry
        let c = elimination_trace(&k, &Carry::Auto).unwrap();
        let mats = |t: &EliminationTrace| t.steps.iter().map(|s| s.system.clone()).collect::<Vec<_>>();
        assert_eq!(mats(&a), mats(&c));
    }

    #[test]
    fn scaling_the_carry() {
        let s = slack_matrix(&pyramid_rows()).unwrap();
        let v = rv(&[2, 3, 3, 1, 1, 1, 1]);
        let k = Rat::new(Int::from(5), Int::from(3));
        let (m1, c1) = eliminate_step(&s, 1, 2, &v).unwrap();
        let (m2, c2) = eliminate_step(&s, 1, 2, &v.scale(&k)).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(c1.scale(&k), c2);
    }
}
