//! Rational polytopes, lattice-point counts of their dilations, Ehrhart
//! quasi-polynomials, and the graded Hilbert series of the cone over them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cone::{Cone, Mode, VCone};
use crate::error::{Error, Result};
use crate::exactla::{lcm_all, solve_rational, Int, IntVector, Rat, RatMatrix, RatVector, Solution};
use crate::genfun::{sigma_pieces, simplicial_sigma};

/// Full-dimensional convex hull of finitely many rational points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolytope {
    vertices: Vec<RatVector>,
    /// Facets of the cone over the polytope: `a·(x, t) <= 0`.
    cone: Cone,
    rows: Vec<Vec<i128>>,
}

impl RationalPolytope {
    /// Points that are not extreme are dropped.
    pub fn new(points: Vec<RatVector>) -> Result<Self> {
        let d = points
            .first()
            .map(RatVector::dim)
            .ok_or_else(|| Error::InvalidPolytope("no points".into()))?;
        if d == 0 || points.iter().any(|p| p.dim() != d) {
            return Err(Error::InvalidPolytope("points must share a positive dimension".into()));
        }
        let lifted: Vec<IntVector> = points.iter().map(homogenize).collect();
        let cone = VCone::new(lifted).and_then(|v| v.to_cone()).map_err(|e| match e {
            Error::NotFullDimensional => Error::InvalidPolytope("not full-dimensional".into()),
            e => e,
        })?;
        let extreme: Vec<&IntVector> = cone.ray_vectors().iter().collect();
        let vertices = points.into_iter().filter(|p| extreme.contains(&&homogenize(p))).fold(
            Vec::new(),
            |mut acc: Vec<RatVector>, p| {
                if !acc.contains(&p) {
                    acc.push(p);
                }
                acc
            },
        );
        let rows = (0..cone.inequalities().rows())
            .map(|i| {
                cone.inequalities()
                    .row(i)
                    .iter()
                    .map(|v| v.to_i128().ok_or(Error::Overflow))
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(RationalPolytope { vertices, cone, rows })
    }

    pub fn from_fractions(points: &[&[(i64, i64)]]) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| RatVector::new(p.iter().map(|&(n, d)| Rat::new(Int::from(n), Int::from(d))).collect()))
            .collect();
        RationalPolytope::new(pts)
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    /// Least common multiple of the vertex-coordinate denominators.
    pub fn denominator(&self) -> Int {
        let dens: Vec<Int> = self
            .vertices
            .iter()
            .flat_map(|v| v.iter().map(|c| c.denom().clone()))
            .collect();
        lcm_all(&dens)
    }

    /// `P` scaled by `t` contains `x`.
    pub fn contains_dilate(&self, x: &[Int], t: &Int, mode: Mode) -> bool {
        let mut p: Vec<Int> = x.to_vec();
        p.push(t.clone());
        self.cone.contains(&p, mode.into())
    }
}

fn homogenize(p: &RatVector) -> IntVector {
    let den = lcm_all(&p.iter().map(|c| c.denom().clone()).collect::<Vec<_>>());
    let mut v: Vec<Int> = p
        .iter()
        .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
        .collect();
    v.push(den);
    IntVector::new(v).primitive()
}

/// The cone generated by `(v, 1)` over the vertices, with primitive generators.
pub fn cone_over(p: &RationalPolytope) -> VCone {
    VCone::new(p.vertices.iter().map(homogenize).collect()).expect("validated at construction")
}

/// Lattice points of `tP` (or of its interior).
///
/// The first `d - 1` coordinates run over the bounding box; the last one is
/// an interval read off the facet inequalities.
pub fn count(p: &RationalPolytope, t: u64, mode: Mode) -> Int {
    let d = p.dim();
    let tr = Rat::from_integer(Int::from(t));
    let bounds: Vec<(i128, i128)> = (0..d)
        .map(|j| {
            let lo = p
                .vertices
                .iter()
                .map(|v| &v[j] * &tr)
                .min()
                .unwrap()
                .ceil()
                .to_integer();
            let hi = p
                .vertices
                .iter()
                .map(|v| &v[j] * &tr)
                .max()
                .unwrap()
                .floor()
                .to_integer();
            (lo.to_i128().unwrap(), hi.to_i128().unwrap())
        })
        .collect();
    let strict = mode == Mode::Interior;
    let t = t as i128;
    let mut total: i128 = 0;
    let mut x: Vec<i128> = bounds[..d - 1].iter().map(|b| b.0).collect();
    if bounds.iter().any(|(lo, hi)| lo > hi) {
        return Int::zero();
    }
    loop {
        let (mut lo, mut hi) = bounds[d - 1];
        let mut empty = false;
        for row in &p.rows {
            // row[..d-1]·x + row[d-1]·y + row[d]·t (<)<= 0
            let rest: i128 = row[..d - 1].iter().zip(&x).map(|(a, b)| a * b).sum::<i128>() + row[d] * t;
            let a = row[d - 1];
            let rhs = -rest;
            match a.signum() {
                1 => {
                    let cap = if strict {
                        ceil_div(rhs, a) - 1
                    } else {
                        floor_div(rhs, a)
                    };
                    hi = hi.min(cap);
                }
                -1 => {
                    let cap = if strict {
                        floor_div(rhs, a) + 1
                    } else {
                        ceil_div(rhs, a)
                    };
                    lo = lo.max(cap);
                }
                _ => {
                    if (strict && rhs <= 0) || (!strict && rhs < 0) {
                        empty = true;
                    }
                }
            }
        }
        if !empty && hi >= lo {
            total += hi - lo + 1;
        }
        // odometer over the leading coordinates
        let mut j = 0;
        loop {
            if j == d - 1 {
                return Int::from(total);
            }
            x[j] += 1;
            if x[j] <= bounds[j].1 {
                break;
            }
            x[j] = bounds[j].0;
            j += 1;
        }
    }
}

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

/// A polynomial in `t` per residue class of `t` modulo the period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    period: u64,
    /// `classes[r][k]` is the coefficient of `t^k` when `t ≡ r`.
    classes: Vec<Vec<Rat>>,
}

impl QuasiPolynomial {
    pub fn new(classes: Vec<Vec<Rat>>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::Precondition(
                "a quasi-polynomial needs at least one class".into(),
            ));
        }
        Ok(QuasiPolynomial {
            period: classes.len() as u64,
            classes,
        })
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn classes(&self) -> &[Vec<Rat>] {
        &self.classes
    }

    pub fn class_of(&self, t: i64) -> usize {
        t.rem_euclid(self.period as i64) as usize
    }

    pub fn eval(&self, t: i64) -> Rat {
        let tr = Rat::from_integer(Int::from(t));
        self.classes[self.class_of(t)]
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * &tr + c)
    }
}

/// Renders `Σ c_k var^k`, highest degree first unless `ascending`.
pub fn format_polynomial(coeffs: &[Rat], var: &str, ascending: bool) -> String {
    let mut order: Vec<usize> = (0..coeffs.len()).collect();
    if !ascending {
        order.reverse();
    }
    let mut out = String::new();
    for k in order {
        let c = &coeffs[k];
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let (num, den) = (a.numer(), a.denom());
        let body = match (mono.is_empty(), num.is_one()) {
            (true, _) => a.to_string(),
            (false, true) => mono,
            (false, false) => format!("{num}{mono}"),
        };
        out.push_str(&body);
        if k != 0 && !den.is_one() {
            out.push_str(&format!("/{den}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.classes.iter().map(|c| format_polynomial(c, "t", false)).collect();
        if self.period == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "{{{}}}", parts.join("; "))
        }
    }
}

fn interpolate(ts: &[i64], values: &[Int]) -> Result<Vec<Rat>> {
    let n = ts.len();
    let mut data = Vec::with_capacity(n * n);
    for &t in ts {
        let t = Rat::from_integer(Int::from(t));
        let mut pow = Rat::one();
        for _ in 0..n {
            data.push(pow.clone());
            pow *= &t;
        }
    }
    let m = RatMatrix::new(n, n, data)?;
    let b = RatVector::new(values.iter().cloned().map(Rat::from_integer).collect());
    match solve_rational(&m, &b)? {
        Solution::Unique(c) => Ok(c.into_inner()),
        _ => Err(Error::Internal("sample points are not distinct".into())),
    }
}

/// Fit `L_P` (or `L_P°`) class by class and re-validate each class on fresh counts.
pub fn quasipolynomial(p: &RationalPolytope, mode: Mode) -> Result<QuasiPolynomial> {
    let d = p.dim();
    let period = p.denominator().to_u64().ok_or(Error::Overflow)?;
    let mut classes = Vec::with_capacity(period as usize);
    for r in 0..period {
        let first = if r == 0 { 1 } else { 0 };
        let ts: Vec<i64> = (first..first + 2 * (d as u64 + 1))
            .map(|k| (r + period * k) as i64)
            .collect();
        let counts: Vec<Int> = ts.iter().map(|&t| count(p, t as u64, mode)).collect();
        let coeffs = interpolate(&ts[..d + 1], &counts[..d + 1])?;
        let fitted = QuasiPolynomial::new(vec![coeffs.clone()])?;
        for (&t, c) in ts.iter().zip(&counts).skip(d + 1) {
            if fitted.eval(t) != Rat::from_integer(c.clone()) {
                return Err(Error::FitFailed(format!(
                    "class {r}: fitted {} at t = {t}, counted {c}",
                    fitted.eval(t)
                )));
            }
        }
        classes.push(coeffs);
    }
    let lead: Vec<&Rat> = classes.iter().map(|c| &c[d]).collect();
    if lead.iter().any(|l| *l != lead[0]) || lead[0].is_zero() {
        return Err(Error::FitFailed("leading coefficients differ between classes".into()));
    }
    QuasiPolynomial::new(classes)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartCheck {
    pub t: u64,
    /// Closed quasi-polynomial at `-t`.
    pub closed_at_neg: Rat,
    /// `(-1)^d` times the interior count at `t`.
    pub signed_interior: Int,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartReport {
    pub pass: bool,
    pub dim: usize,
    pub closed: QuasiPolynomial,
    pub checks: Vec<EhrhartCheck>,
    /// First `t` where the two sides differ.
    pub witness: Option<u64>,
}

/// Compares `L_P(-t)` with `(-1)^d L_P°(t)` for `1 <= t <= max_t`; interior
/// counts are enumerated directly.
pub fn reciprocity_check(p: &RationalPolytope, max_t: u64) -> Result<EhrhartReport> {
    let d = p.dim();
    let closed = quasipolynomial(p, Mode::Closed)?;
    let sign = if d % 2 == 0 { Int::one() } else { -Int::one() };
    let checks: Vec<EhrhartCheck> = (1..=max_t)
        .map(|t| EhrhartCheck {
            t,
            closed_at_neg: closed.eval(-(t as i64)),
            signed_interior: &sign * count(p, t, Mode::Interior),
        })
        .collect();
    let witness = checks
        .iter()
        .find(|c| c.closed_at_neg != Rat::from_integer(c.signed_interior.clone()))
        .map(|c| c.t);
    Ok(EhrhartReport {
        pass: witness.is_none(),
        dim: d,
        closed,
        checks,
        witness,
    })
}

/// `N(q) / ∏ (1 - q^h)^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateRatFun {
    /// `numerator[i]` is the coefficient of `q^i`.
    numerator: Vec<Int>,
    /// Exponent `h >= 1` to multiplicity.
    denominator: BTreeMap<u64, u32>,
}

impl UnivariateRatFun {
    pub fn new(numerator: Vec<Int>, denominator: BTreeMap<u64, u32>) -> Result<Self> {
        if denominator.keys().any(|&h| h == 0) {
            return Err(Error::Internal("denominator factor 1 - q^0".into()));
        }
        let mut numerator = numerator;
        while numerator.last().is_some_and(Zero::is_zero) {
            numerator.pop();
        }
        Ok(UnivariateRatFun { numerator, denominator })
    }

    pub fn numerator(&self) -> &[Int] {
        &self.numerator
    }

    pub fn denominator(&self) -> &BTreeMap<u64, u32> {
        &self.denominator
    }

    /// Coefficients of `q^0 .. q^degree`.
    pub fn series(&self, degree: usize) -> Vec<Int> {
        let mut out: Vec<Int> = (0..=degree)
            .map(|i| self.numerator.get(i).cloned().unwrap_or_else(Int::zero))
            .collect();
        for (&h, &k) in &self.denominator {
            let h = h as usize;
            for _ in 0..k {
                for i in h..=degree {
                    let prev = out[i - h].clone();
                    out[i] += prev;
                }
            }
        }
        out
    }
}

impl fmt::Display for UnivariateRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num: Vec<Rat> = self.numerator.iter().cloned().map(Rat::from_integer).collect();
        let factors: Vec<String> = self
            .denominator
            .iter()
            .map(|(&h, &k)| {
                let base = if h == 1 {
                    "(1 - q)".to_string()
                } else {
                    format!("(1 - q^{h})")
                };
                if k == 1 {
                    base
                } else {
                    format!("{base}^{k}")
                }
            })
            .collect();
        write!(f, "({})/({})", format_polynomial(&num, "q", true), factors.join(""))
    }
}

fn poly_mul(a: &[Int], b: &[Int]) -> Vec<Int> {
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `Σ_t L_P(t) q^t` (or the interior version) from the cone over `P`:
/// every first-`d` variable of its generating function is set to 1.
pub fn hilbert_series(p: &RationalPolytope, mode: Mode) -> Result<UnivariateRatFun> {
    let d = p.dim();
    let cone = cone_over(p).to_cone()?;
    let mut pieces: Vec<(Vec<Int>, BTreeMap<u64, u32>)> = Vec::new();
    for piece in sigma_pieces(&cone, mode)? {
        for term in simplicial_sigma(&piece).terms() {
            let mut num: Vec<Int> = Vec::new();
            for (m, c) in &term.numerator {
                let e = m[d]
                    .to_usize()
                    .ok_or_else(|| Error::Internal(format!("grading of {m}")))?;
                if num.len() <= e {
                    num.resize(e + 1, Int::zero());
                }
                num[e] += c * term.sign.to_int();
            }
            let mut den = BTreeMap::new();
            for b in &term.denominator {
                let h = b[d]
                    .to_u64()
                    .filter(|&h| h >= 1)
                    .ok_or_else(|| Error::Internal(format!("generator {b} has non-positive height")))?;
                *den.entry(h).or_insert(0) += 1;
            }
            pieces.push((num, den));
        }
    }
    let mut common: BTreeMap<u64, u32> = BTreeMap::new();
    for (_, den) in &pieces {
        for (&h, &k) in den {
            let slot = common.entry(h).or_insert(0);
            *slot = (*slot).max(k);
        }
    }
    let mut total: Vec<Int> = vec![Int::zero()];
    for (num, den) in pieces {
        let mut scaled = num;
        for (&h, &k) in &common {
            let factor: Vec<Int> = (0..=h).map(|i| Int::from((i == 0) as i64 - (i == h) as i64)).collect();
            for _ in den.get(&h).copied().unwrap_or(0)..k {
                scaled = poly_mul(&scaled, &factor);
            }
        }
        if total.len() < scaled.len() {
            total.resize(scaled.len(), Int::zero());
        }
        for (i, c) in scaled.into_iter().enumerate() {
            total[i] += c;
        }
    }
    UnivariateRatFun::new(total, common)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::box_points;

    fn unit_square() -> RationalPolytope {
        RationalPolytope::from_fractions(&[
            &[(0, 1), (0, 1)],
            &[(1, 1), (0, 1)],
            &[(0, 1), (1, 1)],
            &[(1, 1), (1, 1)],
        ])
        .unwrap()
    }

    fn shifted_square() -> RationalPolytope {
        RationalPolytope::from_fractions(&[
            &[(1, 1), (1, 1)],
            &[(2, 1), (1, 1)],
            &[(1, 1), (2, 1)],
            &[(2, 1), (2, 1)],
        ])
        .unwrap()
    }

    fn half_segment() -> RationalPolytope {
        RationalPolytope::from_fractions(&[&[(0, 1)], &[(1, 2)]]).unwrap()
    }

    fn unit_segment() -> RationalPolytope {
        RationalPolytope::from_fractions(&[&[(0, 1)], &[(1, 1)]]).unwrap()
    }

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    /// Every box point tested against the facet description.
    fn box_count(p: &RationalPolytope, t: u64, mode: Mode) -> Int {
        let d = p.dim();
        let span = (p
            .vertices()
            .iter()
            .flat_map(|v| v.iter())
            .map(|c| c.abs())
            .max()
            .unwrap()
            * Rat::from_integer(Int::from(t)))
        .ceil()
        .to_integer()
        .to_i64()
        .unwrap();
        let mut n = 0;
        for off in box_points(d, 2 * span) {
            let x: Vec<Int> = off.iter().map(|&v| Int::from(v - span)).collect();
            if p.contains_dilate(&x, &Int::from(t), mode) {
                n += 1;
            }
        }
        Int::from(n)
    }

    #[test]
    fn construction_drops_non_extreme_points() {
        let p = RationalPolytope::from_fractions(&[
            &[(0, 1), (0, 1)],
            &[(2, 1), (0, 1)],
            &[(0, 1), (2, 1)],
            &[(1, 2), (1, 2)],
            &[(1, 1), (0, 1)],
        ])
        .unwrap();
        assert_eq!(p.vertices().len(), 3);
        let flat = RationalPolytope::from_fractions(&[&[(0, 1), (0, 1)], &[(1, 1), (1, 1)]]);
        assert!(matches!(flat, Err(Error::InvalidPolytope(_))));
    }

    #[test]
    fn cone_over_examples() {
        let g = |p: &RationalPolytope| {
            let mut v: Vec<IntVector> = cone_over(p).generators().to_vec();
            v.sort();
            v
        };
        assert_eq!(
            g(&unit_square()),
            [[0, 0, 1], [0, 1, 1], [1, 0, 1], [1, 1, 1]]
                .iter()
                .map(|v| IntVector::from_i64(v))
                .collect::<Vec<_>>()
        );
        assert_eq!(
            g(&half_segment()),
            vec![IntVector::from_i64(&[0, 1]), IntVector::from_i64(&[1, 2])]
        );
        // the square [1,2]^2 cones to the pyramid once the grading moves to the front
        let mut moved: Vec<IntVector> = g(&shifted_square())
            .iter()
            .map(|v| IntVector::new(vec![v[2].clone(), v[0].clone(), v[1].clone()]))
            .collect();
        moved.sort();
        assert_eq!(
            moved,
            [[1, 1, 1], [1, 1, 2], [1, 2, 1], [1, 2, 2]]
                .iter()
                .map(|v| IntVector::from_i64(v))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn count_examples() {
        assert_eq!(count(&unit_square(), 2, Mode::Closed), Int::from(9));
        assert_eq!(count(&shifted_square(), 3, Mode::Closed), Int::from(16));
        assert_eq!(count(&shifted_square(), 3, Mode::Interior), Int::from(4));
        assert_eq!(count(&half_segment(), 3, Mode::Closed), Int::from(2));
        assert_eq!(count(&unit_square(), 0, Mode::Closed), Int::from(1));
    }

    #[test]
    fn count_matches_box_enumeration() {
        let polys = [
            unit_square(),
            shifted_square(),
            half_segment(),
            RationalPolytope::from_fractions(&[&[(-1, 2), (0, 1)], &[(3, 2), (1, 3)], &[(0, 1), (5, 3)]]).unwrap(),
            RationalPolytope::from_fractions(&[
                &[(0, 1), (0, 1), (0, 1)],
                &[(1, 2), (0, 1), (0, 1)],
                &[(0, 1), (2, 3), (0, 1)],
                &[(0, 1), (0, 1), (1, 1)],
            ])
            .unwrap(),
        ];
        for p in &polys {
            for t in 0..7 {
                for mode in [Mode::Closed, Mode::Interior] {
                    assert_eq!(count(p, t, mode), box_count(p, t, mode), "{p:?} t={t} {mode:?}");
                }
            }
        }
    }

    #[test]
    fn quasipolynomial_examples() {
        let q = quasipolynomial(&unit_square(), Mode::Closed).unwrap();
        assert_eq!(q.period(), 1);
        assert_eq!(q.classes()[0], vec![r(1, 1), r(2, 1), r(1, 1)]);
        assert_eq!(q.to_string(), "t^2 + 2t + 1");

        let q = quasipolynomial(&half_segment(), Mode::Closed).unwrap();
        assert_eq!(q.period(), 2);
        assert_eq!(q.classes()[0], vec![r(1, 1), r(1, 2)]);
        assert_eq!(q.classes()[1], vec![r(1, 2), r(1, 2)]);
        assert_eq!(q.to_string(), "{t/2 + 1; t/2 + 1/2}");

        let q = quasipolynomial(&unit_segment(), Mode::Closed).unwrap();
        assert_eq!(q.classes()[0], vec![r(1, 1), r(1, 1)]);
    }

    #[test]
    fn reciprocity_examples() {
        for p in [unit_square(), half_segment(), shifted_square(), unit_segment()] {
            let rep = reciprocity_check(&p, 12).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
        let rep = reciprocity_check(&half_segment(), 4).unwrap();
        assert_eq!(rep.checks[1].closed_at_neg, r(0, 1));
        assert_eq!(rep.checks[2].closed_at_neg, r(-1, 1));
    }

    #[test]
    fn hilbert_examples() {
        let h = hilbert_series(&shifted_square(), Mode::Closed).unwrap();
        assert_eq!(h.numerator(), &[Int::from(1), Int::from(1)]);
        assert_eq!(h.denominator(), &BTreeMap::from([(1, 3)]));
        assert_eq!(h.to_string(), "(1 + q)/((1 - q)^3)");
        let expected: Vec<Int> = (0..=10).map(|t| Int::from((t + 1) * (t + 1))).collect();
        assert_eq!(h.series(10), expected);

        let h = hilbert_series(&unit_segment(), Mode::Closed).unwrap();
        assert_eq!(h.numerator(), &[Int::from(1)]);
        assert_eq!(h.denominator(), &BTreeMap::from([(1, 2)]));

        let h = hilbert_series(&half_segment(), Mode::Closed).unwrap();
        let s: Vec<i64> = h.series(4).iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(s, vec![1, 1, 2, 2, 3]);
    }

    #[test]
    fn hilbert_interior_matches_counts() {
        let p = RationalPolytope::from_fractions(&[&[(-1, 2), (0, 1)], &[(3, 2), (1, 3)], &[(0, 1), (5, 3)]]).unwrap();
        for mode in [Mode::Closed, Mode::Interior] {
            let s = hilbert_series(&p, mode).unwrap().series(8);
            for (t, c) in s.iter().enumerate().skip(1) {
                assert_eq!(c, &count(&p, t as u64, mode));
            }
        }
    }
}
