//! Rational generating functions of lattice points in cones.
//!
//! A [`RationalGenFun`] is a signed sum of terms `N(x) / ∏ (1 - x^b)`.
//! Equality of two such functions is decided by comparing their power-series
//! expansions on a finite box, never by symbolic simplification.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Neg};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cone::{box_points, triangulate_halfopen, Cone, HalfOpenSimplicialCone, Membership, Mode, Reference};
use crate::error::{Error, Result};
use crate::exactla::{column_hermite, Int, IntVector, UnimodularMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of_parity(k: usize) -> Sign {
        if k % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn to_int(self) -> Int {
        match self {
            Sign::Plus => Int::one(),
            Sign::Minus => -Int::one(),
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Denominator vector admits a power-series expansion around 0.
pub fn is_canonical_factor(b: &IntVector) -> bool {
    b.all_nonnegative() && !b.is_zero()
}

/// `sign * Σ c_m x^m / ∏ (1 - x^b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenFunTerm {
    pub sign: Sign,
    pub numerator: BTreeMap<IntVector, Int>,
    pub denominator: Vec<IntVector>,
}

impl GenFunTerm {
    pub fn is_canonical(&self) -> bool {
        self.denominator.iter().all(is_canonical_factor)
    }

    /// Rewrite factor `i` via `1/(1 - x^c) = -x^(-c) / (1 - x^(-c))`.
    pub fn flip_factor(&mut self, i: usize) {
        let c = self.denominator[i].clone();
        self.sign = -self.sign;
        self.numerator = std::mem::take(&mut self.numerator)
            .into_iter()
            .map(|(m, k)| (m.sub(&c), k))
            .collect();
        self.denominator[i] = c.neg();
    }

    /// Flip every factor whose negation is canonical.
    pub fn canonicalize(&mut self) {
        for i in 0..self.denominator.len() {
            if is_canonical_factor(&self.denominator[i].neg()) {
                self.flip_factor(i);
            }
        }
    }

    fn substitute_inverse(&self) -> GenFunTerm {
        GenFunTerm {
            sign: self.sign,
            numerator: self.numerator.iter().map(|(m, c)| (m.neg(), c.clone())).collect(),
            denominator: self.denominator.iter().map(IntVector::neg).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalGenFun {
    dim: usize,
    terms: Vec<GenFunTerm>,
}

impl RationalGenFun {
    pub fn new(dim: usize, terms: Vec<GenFunTerm>) -> Result<Self> {
        for t in &terms {
            let bad = t.numerator.keys().chain(&t.denominator).any(|v| v.dim() != dim);
            if bad {
                return Err(Error::DimensionMismatch("term exponent of wrong dimension".into()));
            }
            if t.denominator.iter().any(IntVector::is_zero) {
                return Err(Error::DimensionMismatch("zero denominator vector".into()));
            }
        }
        Ok(RationalGenFun { dim, terms })
    }

    pub fn zero(dim: usize) -> Self {
        RationalGenFun { dim, terms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[GenFunTerm] {
        &self.terms
    }

    pub fn is_canonical(&self) -> bool {
        self.terms.iter().all(GenFunTerm::is_canonical)
    }

    /// `f(x) -> f(1/x)`, re-canonicalized factor by factor.
    pub fn invert_variables(&self) -> RationalGenFun {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut s = t.substitute_inverse();
                s.canonicalize();
                s
            })
            .collect();
        RationalGenFun { dim: self.dim, terms }
    }

    /// Power-series coefficients on `[0, bound]^d`.
    pub fn expand(&self, bound: u32) -> Result<TruncatedSeries> {
        let mut out = TruncatedSeries::new(self.dim, bound);
        for t in &self.terms {
            if let Some(b) = t.denominator.iter().find(|b| !is_canonical_factor(b)) {
                return Err(Error::NonCanonical(b.to_string()));
            }
            expand_term(t, self.dim, bound as i64, &mut out)?;
        }
        Ok(out)
    }
}

const MAX_EXPANSION_CELLS: usize = 50_000_000;

fn expand_term(t: &GenFunTerm, d: usize, bound: i64, out: &mut TruncatedSeries) -> Result<()> {
    let mut monomials: Vec<(Vec<i64>, Int)> = Vec::new();
    for (m, c) in &t.numerator {
        // denominators only raise exponents, so anything past the box is dead
        if m.iter().any(|v| v > &Int::from(bound)) {
            continue;
        }
        let m = m.to_i64().ok_or(Error::Overflow)?;
        monomials.push((m, c * t.sign.to_int()));
    }
    if monomials.is_empty() {
        return Ok(());
    }
    let lo: Vec<i64> = (0..d)
        .map(|j| monomials.iter().map(|(m, _)| m[j]).min().unwrap().min(0))
        .collect();
    let extent: Vec<usize> = lo.iter().map(|&l| (bound - l + 1) as usize).collect();
    let cells = extent.iter().try_fold(1usize, |acc, &e| acc.checked_mul(e));
    let cells = match cells {
        Some(c) if c <= MAX_EXPANSION_CELLS => c,
        _ => return Err(Error::Precondition("expansion box too large".into())),
    };
    let mut strides = vec![1usize; d];
    for j in (0..d.saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * extent[j + 1];
    }
    let index = |p: &[i64]| -> usize { (0..d).map(|j| (p[j] - lo[j]) as usize * strides[j]).sum() };

    let mut grid = vec![Int::zero(); cells];
    for (m, c) in monomials {
        grid[index(&m)] += c;
    }
    let coords = |mut k: usize| -> Vec<i64> {
        let mut p = vec![0i64; d];
        for j in 0..d {
            p[j] = lo[j] + (k / strides[j]) as i64;
            k %= strides[j];
        }
        p
    };
    for b in &t.denominator {
        let b = b.to_i64().ok_or(Error::Overflow)?;
        let offset: usize = (0..d).map(|j| b[j] as usize * strides[j]).sum();
        // in-place division by (1 - x^b): g[e] += g[e - b] in increasing order
        for k in 0..cells {
            let p = coords(k);
            if (0..d).all(|j| p[j] - b[j] >= lo[j]) {
                let prev = grid[k - offset].clone();
                if !prev.is_zero() {
                    grid[k] += prev;
                }
            }
        }
    }
    for (k, c) in grid.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let p = coords(k);
        if p.iter().all(|&v| v >= 0) {
            out.add(p, c);
        }
    }
    Ok(())
}

/// Coefficients of a series on the box `[0, bound]^d`; only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    dim: usize,
    bound: u32,
    coeffs: BTreeMap<Vec<i64>, Int>,
}

/// First exponent where two series disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: Vec<i64>,
    pub left: Int,
    pub right: Int,
}

impl TruncatedSeries {
    pub fn new(dim: usize, bound: u32) -> Self {
        TruncatedSeries {
            dim,
            bound,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn get(&self, e: &[i64]) -> Int {
        self.coeffs.get(e).cloned().unwrap_or_else(Int::zero)
    }

    pub fn add(&mut self, e: Vec<i64>, c: Int) {
        debug_assert!(e.iter().all(|&v| v >= 0 && v <= self.bound as i64));
        let slot = self.coeffs.entry(e).or_insert_with(Int::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&Vec<i64>, &Int)> {
        self.coeffs.iter()
    }

    pub fn len_nonzero(&self) -> usize {
        self.coeffs.len()
    }

    pub fn scaled(&self, sign: Sign) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e.clone(), c * sign.to_int()))
                .collect(),
            ..self.clone()
        }
    }

    pub fn first_mismatch(&self, other: &TruncatedSeries) -> Option<Mismatch> {
        let mut keys: Vec<&Vec<i64>> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|e| {
            let (l, r) = (self.get(e), other.get(e));
            (l != r).then(|| Mismatch {
                exponent: e.clone(),
                left: l,
                right: r,
            })
        })
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in &self.coeffs {
            writeln!(f, "{e:?} {c}")?;
        }
        Ok(())
    }
}

/// Lattice points of the half-open fundamental parallelepiped
/// `{Σ λ_i g_i : λ_i ∈ [0,1)}`, with `λ_i ∈ (0,1]` for excluded generators.
///
/// Points are enumerated from coset representatives of `Z^d / G Z^d` read off
/// a lower-triangular Hermite basis, so the cost is `|det G|` rather than the
/// volume of the bounding box.
pub fn parallelepiped_points(s: &HalfOpenSimplicialCone) -> Vec<IntVector> {
    let g = s.generator_matrix();
    let d = g.rows();
    let det = g.det().expect("square");
    let scale = det.abs();
    let flip = det.signum();
    // adj = det * G^-1, integral
    let adj = g
        .to_rat()
        .inverse()
        .expect("independent generators")
        .to_int_scaled(&det);
    let (h, _) = column_hermite(&g);
    let extents: Vec<Int> = (0..d).map(|i| h[(i, i)].clone()).collect();
    let mut points = Vec::new();
    let mut rep = vec![Int::zero(); d];
    loop {
        let mu = adj.mul_vec(&rep).expect("dims");
        let lambda: Vec<Int> = mu
            .iter()
            .zip(s.excluded())
            .map(|(m, &ex)| {
                let t = (m * &flip).mod_floor(&scale);
                if ex && t.is_zero() {
                    scale.clone()
                } else {
                    t
                }
            })
            .collect();
        let p: Vec<Int> = g.mul_vec(&lambda).expect("dims").iter().map(|v| v / &scale).collect();
        points.push(IntVector::new(p));
        // odometer over the box of representatives
        let mut j = 0;
        loop {
            if j == d {
                points.sort();
                return points;
            }
            rep[j] += 1;
            if rep[j] < extents[j] {
                break;
            }
            rep[j] = Int::zero();
            j += 1;
        }
    }
}

pub fn simplicial_sigma(s: &HalfOpenSimplicialCone) -> RationalGenFun {
    let numerator = parallelepiped_points(s).into_iter().map(|p| (p, Int::one())).collect();
    RationalGenFun {
        dim: s.dim(),
        terms: vec![GenFunTerm {
            sign: Sign::Plus,
            numerator,
            denominator: s.generators().to_vec(),
        }],
    }
}

/// Half-open pieces of the closed cone, or of its interior (every excluded
/// set flipped).
pub fn sigma_pieces(k: &Cone, mode: Mode) -> Result<Vec<HalfOpenSimplicialCone>> {
    let pieces = triangulate_halfopen(&k.rays(), &Reference::Auto)?;
    Ok(match mode {
        Mode::Closed => pieces,
        Mode::Interior => pieces.iter().map(HalfOpenSimplicialCone::flipped).collect(),
    })
}

/// Closed form of `σ_K` (or `σ_K°`) for a cone inside the nonnegative orthant.
pub fn sigma(k: &Cone, mode: Mode) -> Result<RationalGenFun> {
    if !k.in_orthant() {
        return Err(Error::NotNormalized);
    }
    let terms = sigma_pieces(k, mode)?
        .iter()
        .flat_map(|p| simplicial_sigma(p).terms)
        .collect();
    Ok(RationalGenFun { dim: k.dim(), terms })
}

/// Ground truth: coefficient 1 at every box point passing the membership test.
pub fn brute_force_series(k: &Cone, mode: Membership, bound: u32) -> Result<TruncatedSeries> {
    let rows = k.machine_rows()?;
    let flags = k.flags();
    let mut out = TruncatedSeries::new(k.dim(), bound);
    for p in box_points(k.dim(), bound as i64) {
        if machine_contains(&rows, flags, &p, mode) {
            out.add(p, Int::one());
        }
    }
    Ok(out)
}

fn machine_contains(rows: &[Vec<i64>], flags: &[bool], p: &[i64], mode: Membership) -> bool {
    rows.iter().zip(flags).all(|(row, &flag)| {
        let v: i128 = row.iter().zip(p).map(|(&a, &b)| a as i128 * b as i128).sum();
        let strict = match mode {
            Membership::Closed => false,
            Membership::Interior => true,
            Membership::AsFlagged => flag,
        };
        if strict {
            v < 0
        } else {
            v <= 0
        }
    })
}

/// Which comparison produced a mismatch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    ClosedFormValidation,
    InteriorFormValidation,
    Reciprocity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StanleyReport {
    pub pass: bool,
    pub dim: usize,
    pub bound: u32,
    /// Map applied to move the cone into the orthant (identity if it already was).
    pub normalization: UnimodularMap,
    pub closed_validated: bool,
    pub interior_validated: bool,
    pub coefficients_compared: usize,
    pub witness: Option<(Stage, Mismatch)>,
}

/// Checks `σ_K(1/x) = (-1)^d σ_K°(x)` as a series identity on the box. Both
/// closed forms are first checked against brute-force enumeration.
pub fn stanley_reciprocity_check(k: &Cone, bound: u32) -> Result<StanleyReport> {
    let d = k.dim();
    let (phi, k) = if k.in_orthant() {
        (UnimodularMap::identity(d), k.clone())
    } else {
        k.normalize()?
    };
    let closed = sigma(&k, Mode::Closed)?;
    let interior = sigma(&k, Mode::Interior)?;

    let closed_series = closed.expand(bound)?;
    let interior_series = interior.expand(bound)?;
    let closed_mismatch = closed_series.first_mismatch(&brute_force_series(&k, Membership::Closed, bound)?);
    let interior_mismatch = interior_series.first_mismatch(&brute_force_series(&k, Membership::Interior, bound)?);

    let left = closed.invert_variables().expand(bound)?;
    let right = interior_series.scaled(Sign::of_parity(d));
    let reciprocity_mismatch = left.first_mismatch(&right);

    let witness = closed_mismatch
        .clone()
        .map(|m| (Stage::ClosedFormValidation, m))
        .or_else(|| interior_mismatch.clone().map(|m| (Stage::InteriorFormValidation, m)))
        .or_else(|| reciprocity_mismatch.map(|m| (Stage::Reciprocity, m)));
    Ok(StanleyReport {
        pass: witness.is_none(),
        dim: d,
        bound,
        normalization: phi,
        closed_validated: closed_mismatch.is_none(),
        interior_validated: interior_mismatch.is_none(),
        coefficients_compared: (bound as usize + 1).pow(d as u32),
        witness,
    })
}

/// A pair of half-open cones cut out by the same rows with complementary
/// openness. The base keeps the coordinate constraints closed (`x >= 0`), the
/// complement makes them strict (`x > 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfOpenSpec {
    base: Cone,
    complement: Cone,
}

impl HalfOpenSpec {
    pub fn new(base: Cone) -> Result<Self> {
        let toggled = base.flags().iter().map(|f| !f).collect();
        let complement = base.with_flags(toggled)?;
        Ok(HalfOpenSpec { base, complement })
    }

    pub fn base(&self) -> &Cone {
        &self.base
    }

    pub fn complement(&self) -> &Cone {
        &self.complement
    }

    pub fn closed_rows(&self) -> Vec<usize> {
        self.complement.open_rows()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfOpenReport {
    pub pass: bool,
    pub dim: usize,
    pub bound: u32,
    pub closed_rows: Vec<usize>,
    pub open_rows: Vec<usize>,
    pub witness: Option<Mismatch>,
}

/// Measures `σ_K1(1/x) = (-1)^d σ_K2(x)` without closed forms.
///
/// With `Q(x) = ∏_rays (1 - x^r)` both `P1 = σ_K1·Q` and `P2 = σ_K2·Q` are
/// polynomials supported in `[0, R]`, `R` the sum of the rays, and their
/// coefficients are finite signed sums of membership tests. Since
/// `Q(1/x) = (-1)^n x^-R Q(x)` the identity is equivalent to
/// `P2(e) = (-1)^(n+d) P1(R - e)`, which is compared for every `e` in
/// `[0,B]^d` and every `e` in `R - [0,B]^d`.
///
/// The report states whether the identity holds on those coefficients; it
/// makes no claim about the topology of the closed facets.
pub fn halfopen_reciprocity_check(h: &HalfOpenSpec, bound: u32) -> Result<HalfOpenReport> {
    let k = &h.base;
    if !k.is_normalized() {
        return Err(Error::Precondition(
            "half-open cones must lie in the orthant and meet the coordinate hyperplanes only at the origin".into(),
        ));
    }
    let d = k.dim();
    let rows = k.machine_rows()?;
    let rays: Vec<Vec<i64>> = k
        .ray_vectors()
        .iter()
        .map(|r| r.to_i64().ok_or(Error::Overflow))
        .collect::<Result<_>>()?;
    let n = rays.len();
    if n > 20 {
        return Err(Error::Precondition(format!("{n} rays is beyond desk scale")));
    }
    let total: Vec<i64> = (0..d).map(|j| rays.iter().map(|r| r[j]).sum()).collect();

    let in_base =
        |p: &[i64]| p.iter().all(|&v| v >= 0) && machine_contains(&rows, h.base.flags(), p, Membership::AsFlagged);
    let in_complement =
        |p: &[i64]| p.iter().all(|&v| v > 0) && machine_contains(&rows, h.complement.flags(), p, Membership::AsFlagged);
    let cleared = |e: &[i64], member: &dyn Fn(&[i64]) -> bool| -> i64 {
        let mut acc = 0i64;
        for mask in 0u32..(1 << n) {
            let mut p = e.to_vec();
            for (i, r) in rays.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    for j in 0..d {
                        p[j] -= r[j];
                    }
                }
            }
            if member(&p) {
                acc += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            }
        }
        acc
    };
    let sign = if (n + d) % 2 == 0 { 1 } else { -1 };

    let mut exps: Vec<Vec<i64>> = Vec::new();
    for f in box_points(d, bound as i64) {
        exps.push(total.iter().zip(&f).map(|(r, v)| r - v).collect());
        exps.push(f);
    }
    exps.sort();
    exps.dedup();
    let mut witness = None;
    for e in exps {
        let reflected: Vec<i64> = total.iter().zip(&e).map(|(r, v)| r - v).collect();
        let left = cleared(&e, &in_complement);
        let right = sign * cleared(&reflected, &in_base);
        if left != right {
            witness = Some(Mismatch {
                exponent: e,
                left: Int::from(left),
                right: Int::from(right),
            });
            break;
        }
    }
    Ok(HalfOpenReport {
        pass: witness.is_none(),
        dim: d,
        bound,
        closed_rows: h.closed_rows(),
        open_rows: h.base.open_rows(),
        witness,
    })
}
