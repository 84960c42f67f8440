//! Rational pointed cones.
//!
//! A [`Cone`] is stored by its inequalities `A·r <= 0` (some rows may be
//! flagged strict) together with its extreme rays, which are computed once at
//! construction by the double description method.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactla::{column_hermite, Int, IntMatrix, IntVector, Rat, RatMatrix, RatVector, UnimodularMap};

/// Closed cone or its interior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Closed,
    Interior,
}

/// How each inequality row is tested by [`Cone::contains`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Closed,
    Interior,
    AsFlagged,
}

impl From<Mode> for Membership {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Closed => Membership::Closed,
            Mode::Interior => Membership::Interior,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    inequalities: IntMatrix,
    strict: Vec<bool>,
    rays: Vec<IntVector>,
}

impl Cone {
    /// Validates pointedness (rank A = d) and full dimensionality. All rows
    /// start out closed.
    pub fn from_inequalities(a: IntMatrix) -> Result<Cone> {
        let d = a.cols();
        if d == 0 {
            return Err(Error::DimensionMismatch("cone of dimension 0".into()));
        }
        if a.rows() == 0 || a.rank() < d {
            return Err(Error::NotPointed);
        }
        let rays = extreme_rays(&a);
        if rays.is_empty() {
            return Err(Error::NotFullDimensional);
        }
        // a row tight on every ray is an implicit equality
        let implicit = (0..a.rows()).any(|i| rays.iter().all(|r| r.dot(a.row(i)).is_zero()));
        if implicit {
            return Err(Error::NotFullDimensional);
        }
        let strict = vec![false; a.rows()];
        Ok(Cone {
            inequalities: a,
            strict,
            rays,
        })
    }

    pub fn from_generators(v: &VCone) -> Result<Cone> {
        v.to_cone()
    }

    /// Same cone with the given (0-based) rows made strict and all others closed.
    pub fn with_open_rows(&self, rows: &[usize]) -> Result<Cone> {
        let m = self.inequalities.rows();
        let mut strict = vec![false; m];
        for &i in rows {
            if i >= m {
                return Err(Error::IndexOutOfRange { index: i, len: m });
            }
            strict[i] = true;
        }
        Ok(Cone { strict, ..self.clone() })
    }

    pub fn with_flags(&self, strict: Vec<bool>) -> Result<Cone> {
        if strict.len() != self.inequalities.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{} openness flags for {} rows",
                strict.len(),
                self.inequalities.rows()
            )));
        }
        Ok(Cone { strict, ..self.clone() })
    }

    pub fn dim(&self) -> usize {
        self.inequalities.cols()
    }

    pub fn inequalities(&self) -> &IntMatrix {
        &self.inequalities
    }

    pub fn flags(&self) -> &[bool] {
        &self.strict
    }

    pub fn open_rows(&self) -> Vec<usize> {
        (0..self.strict.len()).filter(|&i| self.strict[i]).collect()
    }

    pub fn ray_vectors(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn rays(&self) -> VCone {
        VCone {
            generators: self.rays.clone(),
            dim: self.dim(),
        }
    }

    /// The only point of the cone with a zero coordinate is the origin.
    pub fn is_normalized(&self) -> bool {
        self.rays.iter().all(IntVector::all_positive)
    }

    /// Contained in the nonnegative orthant.
    pub fn in_orthant(&self) -> bool {
        self.rays.iter().all(IntVector::all_nonnegative)
    }

    pub fn contains(&self, p: &[Int], mode: Membership) -> bool {
        debug_assert_eq!(p.len(), self.dim());
        (0..self.inequalities.rows()).all(|i| {
            let v: Int = self.inequalities.row(i).iter().zip(p).map(|(a, b)| a * b).sum();
            let strict = match mode {
                Membership::Closed => false,
                Membership::Interior => true,
                Membership::AsFlagged => self.strict[i],
            };
            if strict {
                v.is_negative()
            } else {
                !v.is_positive()
            }
        })
    }

    /// Row data as machine integers for box enumeration.
    pub(crate) fn machine_rows(&self) -> Result<Vec<Vec<i64>>> {
        self.inequalities.to_i64_rows().ok_or(Error::Overflow)
    }

    /// Image under `phi`: inequalities `A·phi^-1`, flags preserved.
    pub fn transform(&self, phi: &UnimodularMap) -> Result<Cone> {
        if phi.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map of dimension {} on a cone of dimension {}",
                phi.dim(),
                self.dim()
            )));
        }
        let a = self.inequalities.mul(phi.inverse().matrix())?;
        Cone::from_inequalities(a)?.with_flags(self.strict.clone())
    }

    /// Find `phi` with det +1 (where the dimension allows it) such that
    /// `phi(K)` lies in the nonnegative orthant and meets the coordinate
    /// hyperplanes only at the origin.
    pub fn normalize(&self) -> Result<(UnimodularMap, Cone)> {
        let d = self.dim();
        if self.is_normalized() {
            return Ok((UnimodularMap::identity(d), self.clone()));
        }
        // c = -(sum of rows) is positive on every nonzero point of a pointed cone
        let mut c = IntVector::zeros(d);
        for row in self.inequalities.row_vectors() {
            c = c.sub(&row);
        }
        let c = c.primitive();
        let (_, w) = column_hermite(&IntMatrix::from_rows(std::slice::from_ref(&c))?);
        let towards = w.column(0);
        debug_assert!(c.dot(&towards).is_one());
        if d == 1 {
            let phi = UnimodularMap::new(IntMatrix::from_columns(&[towards])?)?.inverse();
            let image = self.transform(&phi)?;
            return check_normalized(phi, image);
        }
        let mut hyper: Vec<IntVector> = (1..d).map(|j| w.column(j)).collect();
        let basis_with = |hyper: &[IntVector], last: &IntVector| {
            let mut cols = hyper.to_vec();
            cols.push(last.clone());
            IntMatrix::from_columns(&cols)
        };
        if basis_with(&hyper, &towards)?.det()?.is_negative() {
            hyper[0] = hyper[0].neg();
        }
        let u0 = UnimodularMap::new(basis_with(&hyper, &towards)?)?;
        let u0_inv = u0.inverse();
        // r = sum alpha_i h_i + beta v; shifting v by -N*sum(h) adds beta*N to each alpha_i
        let mut shift = Int::zero();
        for r in &self.rays {
            let coords = u0_inv.apply(r)?;
            let beta = &coords[d - 1];
            for alpha in &coords[..d - 1] {
                let need = num_integer::Integer::div_floor(&(-alpha), beta) + Int::one();
                if need > shift {
                    shift = need;
                }
            }
        }
        let hyper_sum = hyper.iter().fold(IntVector::zeros(d), |acc, h| acc.add(h));
        for _ in 0..64 {
            let last = towards.sub(&hyper_sum.scale(&shift));
            let u = UnimodularMap::new(basis_with(&hyper, &last)?)?;
            let phi = u.inverse();
            let image = self.transform(&phi)?;
            if image.is_normalized() {
                return check_normalized(phi, image);
            }
            shift += Int::one();
        }
        Err(Error::NormalizationFailed(
            "no far-away shift produced an image strictly inside the orthant".into(),
        ))
    }
}

fn check_normalized(phi: UnimodularMap, image: Cone) -> Result<(UnimodularMap, Cone)> {
    if !image.is_normalized() {
        return Err(Error::NormalizationFailed(format!(
            "image rays not strictly positive: {:?}",
            image.rays.iter().map(ToString::to_string).collect::<Vec<_>>()
        )));
    }
    Ok((phi, image))
}

/// Extreme rays of the pointed cone `{r : A r <= 0}` (rank A = d) by
/// incremental double description. Output is primitive and sorted.
fn extreme_rays(a: &IntMatrix) -> Vec<IntVector> {
    struct Ray {
        v: IntVector,
        tight: BTreeSet<usize>,
    }

    let d = a.cols();
    let mut basis: Vec<usize> = Vec::with_capacity(d);
    for i in 0..a.rows() {
        let mut cand = basis.clone();
        cand.push(i);
        if a.select_rows(&cand).rank() == cand.len() {
            basis = cand;
        }
        if basis.len() == d {
            break;
        }
    }
    debug_assert_eq!(basis.len(), d);
    let inv = a
        .select_rows(&basis)
        .to_rat()
        .inverse()
        .expect("basis rows are independent");
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let col = inv.column(j);
            let v = RatVector::new(col.iter().map(|x| -x).collect()).clear_denominators();
            let tight = basis.iter().copied().filter(|&b| b != basis[j]).collect();
            Ray { v, tight }
        })
        .collect();

    for i in (0..a.rows()).filter(|i| !basis.contains(i)) {
        let row = a.row(i);
        let vals: Vec<Int> = rays.iter().map(|r| r.v.dot(row)).collect();
        let mut next = Vec::new();
        for (k, r) in rays.iter().enumerate() {
            if vals[k].is_zero() {
                let mut tight = r.tight.clone();
                tight.insert(i);
                next.push(Ray { v: r.v.clone(), tight });
            } else if vals[k].is_negative() {
                next.push(Ray {
                    v: r.v.clone(),
                    tight: r.tight.clone(),
                });
            }
        }
        for (p, rp) in rays.iter().enumerate().filter(|(k, _)| vals[*k].is_positive()) {
            for (n, rn) in rays.iter().enumerate().filter(|(k, _)| vals[*k].is_negative()) {
                let common: Vec<usize> = rp.tight.intersection(&rn.tight).copied().collect();
                if d < 2 || common.len() < d - 2 || a.select_rows(&common).rank() != d - 2 {
                    continue;
                }
                let v = rn.v.scale(&vals[p]).sub(&rp.v.scale(&vals[n])).primitive();
                let mut tight: BTreeSet<usize> = common.into_iter().collect();
                tight.insert(i);
                next.push(Ray { v, tight });
            }
        }
        rays = next;
    }
    let mut out: Vec<IntVector> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    out
}

/// Cone given by generating rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VCone {
    generators: Vec<IntVector>,
    dim: usize,
}

impl VCone {
    /// Generators are made primitive and deduplicated (first occurrence kept).
    /// The spanned cone must be pointed and full-dimensional.
    pub fn new(generators: Vec<IntVector>) -> Result<VCone> {
        let dim = generators
            .first()
            .map(IntVector::dim)
            .ok_or_else(|| Error::DimensionMismatch("no generators".into()))?;
        if generators.iter().any(|g| g.dim() != dim) {
            return Err(Error::DimensionMismatch("generators of differing dimension".into()));
        }
        if generators.iter().any(IntVector::is_zero) {
            return Err(Error::DimensionMismatch("zero generator".into()));
        }
        let mut seen = BTreeSet::new();
        let generators: Vec<IntVector> = generators
            .iter()
            .map(IntVector::primitive)
            .filter(|g| seen.insert(g.clone()))
            .collect();
        let v = VCone { generators, dim };
        v.facet_matrix()?;
        Ok(v)
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Facet normals `n` with `n·x <= 0` on the cone: the extreme rays of the
    /// polar cone.
    fn facet_matrix(&self) -> Result<IntMatrix> {
        let polar = IntMatrix::from_rows(&self.generators)?;
        let normals = match Cone::from_inequalities(polar) {
            Ok(p) => p.rays,
            // the polar is pointed iff this cone is full-dimensional, and vice versa
            Err(Error::NotPointed) => return Err(Error::NotFullDimensional),
            Err(Error::NotFullDimensional) => return Err(Error::NotPointed),
            Err(e) => return Err(e),
        };
        IntMatrix::from_rows(&normals)
    }

    pub fn to_cone(&self) -> Result<Cone> {
        Cone::from_inequalities(self.facet_matrix()?)
    }
}

/// Simplicial cone with some facets removed. Generator `i` is excluded when
/// the facet opposite to it is not part of the cone, i.e. its coordinate
/// ranges over `(0, 1]` in the fundamental parallelepiped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfOpenSimplicialCone {
    generators: Vec<IntVector>,
    excluded: Vec<bool>,
    inverse: RatMatrix,
}

impl HalfOpenSimplicialCone {
    pub fn new(generators: Vec<IntVector>, excluded: Vec<bool>) -> Result<Self> {
        let d = generators.first().map_or(0, IntVector::dim);
        if generators.len() != d || excluded.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "{} generators and {} flags in dimension {d}",
                generators.len(),
                excluded.len()
            )));
        }
        let g = IntMatrix::from_columns(&generators)?;
        let inverse = g.to_rat().inverse().ok_or(Error::LinearlyDependent)?;
        Ok(HalfOpenSimplicialCone {
            generators,
            excluded,
            inverse,
        })
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn excluded(&self) -> &[bool] {
        &self.excluded
    }

    pub fn excluded_indices(&self) -> Vec<usize> {
        (0..self.excluded.len()).filter(|&i| self.excluded[i]).collect()
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.generators).expect("square by construction")
    }

    /// |det G|, the number of lattice points in the fundamental parallelepiped.
    pub fn index(&self) -> Int {
        self.generator_matrix().det().expect("square").abs()
    }

    /// Coordinates of `p` in the generator basis.
    pub fn coordinates(&self, p: &[Rat]) -> RatVector {
        self.inverse.mul_vec(p).expect("dimension checked by caller")
    }

    pub fn coordinates_int(&self, p: &[Int]) -> RatVector {
        self.coordinates(&IntVector::new(p.to_vec()).to_rat())
    }

    pub fn contains(&self, p: &[Int]) -> bool {
        let lambda = self.coordinates_int(p);
        lambda
            .iter()
            .zip(&self.excluded)
            .all(|(l, &ex)| if ex { l.is_positive() } else { !l.is_negative() })
    }

    /// Swap excluded and included facets.
    pub fn flipped(&self) -> Self {
        HalfOpenSimplicialCone {
            excluded: self.excluded.iter().map(|e| !e).collect(),
            ..self.clone()
        }
    }

    /// Primitive integer normal of the facet opposite generator `i`, pointing
    /// into the cone.
    pub fn facet_normal(&self, i: usize) -> IntVector {
        RatVector::new((0..self.dim()).map(|j| self.inverse[(i, j)].clone()).collect()).clear_denominators()
    }
}

/// Reference point deciding which piece keeps a shared wall.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reference {
    Auto,
    Point(RatVector),
}

/// Placing triangulation of the generators in stored order, as sorted index sets.
fn placing_triangulation(gens: &[IntVector]) -> Vec<Vec<usize>> {
    let d = gens[0].dim();
    let mut first: Vec<usize> = Vec::with_capacity(d);
    for i in 0..gens.len() {
        let mut cand: Vec<IntVector> = first.iter().map(|&k| gens[k].clone()).collect();
        cand.push(gens[i].clone());
        if IntMatrix::from_rows(&cand).expect("uniform").rank() == cand.len() {
            first.push(i);
        }
        if first.len() == d {
            break;
        }
    }
    let mut simplices = vec![first.clone()];
    for i in (0..gens.len()).filter(|i| !first.contains(i)) {
        // boundary facets appear in exactly one simplex
        let mut facets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for s in &simplices {
            for &o in s {
                let f: Vec<usize> = s.iter().copied().filter(|&k| k != o).collect();
                facets.entry(f).or_default().push(o);
            }
        }
        let mut added = Vec::new();
        for (f, opposite) in facets.iter().filter(|(_, o)| o.len() == 1) {
            let normal = hyperplane_normal(f.iter().map(|&k| &gens[k]), d);
            let side = normal.dot(&gens[opposite[0]]);
            let beyond = normal.dot(&gens[i]);
            if (side.is_positive() && beyond.is_negative()) || (side.is_negative() && beyond.is_positive()) {
                let mut s = f.clone();
                s.push(i);
                s.sort_unstable();
                added.push(s);
            }
        }
        simplices.extend(added);
    }
    simplices
}

fn hyperplane_normal<'a>(vectors: impl Iterator<Item = &'a IntVector>, d: usize) -> IntVector {
    let rows: Vec<IntVector> = vectors.cloned().collect();
    let m = if rows.is_empty() {
        IntMatrix::new(0, d, Vec::new()).expect("empty")
    } else {
        IntMatrix::from_rows(&rows).expect("uniform")
    };
    let kernel = m.kernel_basis();
    debug_assert_eq!(kernel.len(), 1);
    kernel.into_iter().next().expect("facet spans a hyperplane")
}

/// Split the cone into half-open simplicial pieces that partition it: every
/// lattice point of the closed cone lies in exactly one piece. A wall shared by
/// two pieces is kept by the piece on whose side the reference point lies.
pub fn triangulate_halfopen(v: &VCone, reference: &Reference) -> Result<Vec<HalfOpenSimplicialCone>> {
    let gens = v.generators();
    let d = v.dim();
    let cells = placing_triangulation(gens);
    let pieces: Vec<HalfOpenSimplicialCone> = cells
        .iter()
        .map(|s| HalfOpenSimplicialCone::new(s.iter().map(|&k| gens[k].clone()).collect(), vec![false; d]))
        .collect::<Result<_>>()?;

    // (piece, generator) pairs whose opposite facet lies on the cone boundary
    let mut facet_owners: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
    for (p, s) in cells.iter().enumerate() {
        for (pos, &o) in s.iter().enumerate() {
            let f: Vec<usize> = s.iter().copied().filter(|&k| k != o).collect();
            facet_owners.entry(f).or_default().push((p, pos));
        }
    }
    let boundary: Vec<(usize, usize)> = facet_owners.values().filter(|o| o.len() == 1).map(|o| o[0]).collect();

    let w = match reference {
        Reference::Point(w) => {
            if w.dim() != d {
                return Err(Error::DimensionMismatch("reference point dimension".into()));
            }
            w.clone()
        }
        Reference::Auto => auto_reference(gens, &pieces)?,
    };
    let coords: Vec<RatVector> = pieces.iter().map(|p| p.coordinates(&w)).collect();
    if coords.iter().flat_map(|c| c.iter()).any(Zero::is_zero) {
        return Err(Error::NonGenericReference);
    }
    if boundary.iter().any(|&(p, i)| !coords[p][i].is_positive()) {
        return Err(Error::ReferenceOutsideCone);
    }
    Ok(pieces
        .into_iter()
        .zip(coords)
        .map(|(piece, c)| HalfOpenSimplicialCone {
            excluded: c.iter().map(Signed::is_negative).collect(),
            ..piece
        })
        .collect())
}

/// Sum of the rays plus the perturbation (1/M, 1/M^2, ..., 1/M^d), with M
/// exceeding every facet-normal coordinate in play.
fn auto_reference(gens: &[IntVector], pieces: &[HalfOpenSimplicialCone]) -> Result<RatVector> {
    let d = gens[0].dim();
    let sum = gens.iter().fold(IntVector::zeros(d), |acc, g| acc.add(g));
    let max_normal = pieces
        .iter()
        .flat_map(|p| (0..d).map(move |i| p.facet_normal(i).max_abs()))
        .max()
        .unwrap_or_else(Int::one);
    let mut m = Int::from(2) * max_normal + Int::from(2);
    for _ in 0..8 {
        let mut power = Rat::one();
        let base = Rat::from_integer(m.clone());
        let w: Vec<Rat> = sum
            .iter()
            .map(|s| {
                power /= &base;
                Rat::from_integer(s.clone()) + &power
            })
            .collect();
        let w = RatVector::new(w);
        if pieces.iter().all(|p| p.coordinates(&w).iter().all(|c| !c.is_zero())) {
            return Ok(w);
        }
        m = &m * &m;
    }
    Err(Error::Internal(
        "could not perturb the reference point into general position".into(),
    ))
}

/// Enumerate all integer points of the box `[0, bound]^d` in lexicographic order.
pub(crate) fn box_points(d: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    let total = (bound + 1).to_usize().unwrap_or(0).pow(d as u32);
    (0..total).map(move |mut k| {
        let mut p = vec![0i64; d];
        for c in (0..d).rev() {
            p[c] = (k % (bound as usize + 1)) as i64;
            k /= bound as usize + 1;
        }
        p
    })
}
