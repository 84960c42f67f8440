//! Seeded random test inputs: normalized cones and rational polytopes.
//!
//! Both generators are deterministic in the seed, so a corpus can be
//! regenerated anywhere from a single integer.

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{triangulate_halfopen, Cone, Reference};
use crate::ehrhart::RationalPolytope;
use crate::exactla::{Int, IntMatrix, Rat, RatVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeCorpusConfig {
    pub max_dim: usize,
    /// Inequality entries are drawn from `[-entry_bound, entry_bound]`.
    pub entry_bound: i64,
    /// Sum of the piece indices of the triangulation; bounds the size of the
    /// closed forms.
    pub max_total_index: u64,
    pub max_rays: usize,
    /// In dimensions 3 and up, every other cone must have more rays than
    /// its dimension.
    pub mix_nonsimplicial: bool,
}

impl Default for ConeCorpusConfig {
    fn default() -> Self {
        ConeCorpusConfig {
            max_dim: 4,
            entry_bound: 5,
            max_total_index: 5000,
            max_rays: 10,
            mix_nonsimplicial: true,
        }
    }
}

/// Cones `{A x <= 0}` whose extreme rays are all strictly positive.
///
/// Dimensions cycle through `1..=max_dim`; each cone is rejection-sampled
/// from uniformly random integer matrices with `d` to `d + 3` rows.
pub fn random_normalized_cones(seed: u64, count: usize, cfg: &ConeCorpusConfig) -> Vec<Cone> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = 1 + out.len() % cfg.max_dim;
        let want_more_rays = cfg.mix_nonsimplicial && d >= 3 && (out.len() / cfg.max_dim) % 2 == 0;
        loop {
            let candidate = sample_cone(&mut rng, d, want_more_rays as usize, cfg)
                .filter(|k| !want_more_rays || k.ray_vectors().len() > d);
            if let Some(k) = candidate {
                out.push(k);
                break;
            }
        }
    }
    out
}

fn sample_cone(rng: &mut ChaCha8Rng, d: usize, extra_rows: usize, cfg: &ConeCorpusConfig) -> Option<Cone> {
    let m = rng.gen_range(d + extra_rows..=d + 3);
    let data: Vec<Int> = (0..m * d)
        .map(|_| Int::from(rng.gen_range(-cfg.entry_bound..=cfg.entry_bound)))
        .collect();
    let a = IntMatrix::new(m, d, data).ok()?;
    if (0..m).any(|i| a.row(i).iter().all(Zero::is_zero)) {
        return None;
    }
    let k = Cone::from_inequalities(a).ok()?;
    if !k.is_normalized() || k.ray_vectors().len() > cfg.max_rays {
        return None;
    }
    let pieces = triangulate_halfopen(&k.rays(), &Reference::Auto).ok()?;
    let total: Int = pieces.iter().map(|p| p.index()).sum();
    (total.to_u64()? <= cfg.max_total_index).then_some(k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeCorpusConfig {
    pub max_dim: usize,
    pub max_denominator: i64,
    /// Coordinates are drawn from `[0, coordinate_bound]`.
    pub coordinate_bound: i64,
}

impl Default for PolytopeCorpusConfig {
    fn default() -> Self {
        PolytopeCorpusConfig {
            max_dim: 3,
            max_denominator: 3,
            coordinate_bound: 2,
        }
    }
}

/// Full-dimensional polytopes spanned by `d + 1` to `d + 3` random rational
/// points; dimensions cycle through `1..=max_dim`.
pub fn random_polytopes(seed: u64, count: usize, cfg: &PolytopeCorpusConfig) -> Vec<RationalPolytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = 1 + out.len() % cfg.max_dim;
        let n = rng.gen_range(d + 1..=d + 3);
        let points = (0..n)
            .map(|_| {
                RatVector::new(
                    (0..d)
                        .map(|_| {
                            let q = rng.gen_range(1..=cfg.max_denominator);
                            let p = rng.gen_range(0..=cfg.coordinate_bound * q);
                            Rat::new(Int::from(p), Int::from(q))
                        })
                        .collect(),
                )
            })
            .collect();
        if let Ok(p) = RationalPolytope::new(points) {
            out.push(p);
        }
    }
    out
}
