//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.
//!
//! Every comparison uses an oracle written here, independent of the code
//! path under test.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_traits::{ToPrimitive, Zero};
use reciprocone::corpus::{random_normalized_cones, random_polytopes, ConeCorpusConfig, PolytopeCorpusConfig};
use reciprocone::ctengine::{eliminate_step, positive_carry};
use reciprocone::{
    elimination_trace, euler_constant_term, halfopen_reciprocity_check, hilbert_series, quasipolynomial,
    reciprocity_check, sigma, slack_matrix, stanley_reciprocity_check, Carry, Cone, HalfOpenSpec, Int, IntMatrix,
    Membership, Mode, Rat, RatMatrix, RatVector, RationalPolytope, TruncatedSeries,
};

const CONE_SEED: u64 = 1729;
const CONE_COUNT: usize = 100;
const POLYTOPE_SEED: u64 = 4104;
const POLYTOPE_COUNT: usize = 36;
const B: u32 = 6;
const T: u64 = 12;

type Series = BTreeMap<Vec<i64>, Int>;

fn box_iter(dims: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &n in dims {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=n).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Membership by exact dot products, every box point.
fn oracle_series(k: &Cone, mode: Membership, bound: u32) -> Series {
    let d = k.dim();
    box_iter(&vec![bound as i64; d])
        .into_iter()
        .filter(|p| {
            let v: Vec<Int> = p.iter().map(|&x| Int::from(x)).collect();
            k.contains(&v, mode)
        })
        .map(|p| (p, Int::from(1)))
        .collect()
}

fn as_map(s: &TruncatedSeries) -> Series {
    s.nonzero().map(|(e, c)| (e.clone(), c.clone())).collect()
}

fn pyramid() -> Cone {
    Cone::from_inequalities(IntMatrix::from_i64_rows(&[
        &[1, -1, 0],
        &[1, 0, -1],
        &[-2, 1, 0],
        &[-2, 0, 1],
    ]))
    .unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn criterion_1() -> Outcome {
    let s = slack_matrix(pyramid().inequalities()).unwrap();
    let golden = RatMatrix::from_i64_rows(&[
        &[1, -1, 0, 1, 0, 0, 0],
        &[1, 0, -1, 0, 1, 0, 0],
        &[-2, 1, 0, 0, 0, 1, 0],
        &[-2, 0, 1, 0, 0, 0, 1],
    ]);
    let slack_ok = s.matrix() == &golden;
    let (next, carry) = eliminate_step(&s, 0, 0, &RatVector::from_i64(&[2, 3, 3, 1, 1, 1, 1])).unwrap();
    let step_ok = next.matrix()
        == &RatMatrix::from_i64_rows(&[&[1, -1, -1, 1, 0, 0], &[-1, 0, 2, 0, 1, 0], &[-2, 1, 2, 0, 0, 1]]);
    let carry_ok = carry == RatVector::from_i64(&[3, 3, 1, 1, 1, 1]);
    Outcome {
        pass: slack_ok && step_ok && carry_ok,
        detail: format!("slack matrix {slack_ok}, eliminated matrix {step_ok}, carry {carry_ok}"),
    }
}

fn criterion_2(cones: &[Cone]) -> Outcome {
    let mut bad = Vec::new();
    for (i, k) in cones.iter().enumerate() {
        let theta = euler_constant_term(k.inequalities(), B).unwrap();
        if as_map(&theta.at_y_one()) != oracle_series(k, Membership::Closed, B) {
            bad.push(i);
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!("{} cones, box [0,{B}]^d, mismatches at {bad:?}", cones.len()),
    }
}

fn criterion_3(cones: &[Cone]) -> (Outcome, Vec<bool>) {
    let mut verdicts = Vec::new();
    let mut bad = Vec::new();
    for (i, k) in cones.iter().enumerate() {
        let report = stanley_reciprocity_check(k, B).unwrap();
        // recompute both sides here against the local oracle
        let d = k.dim();
        let closed = sigma(k, Mode::Closed).unwrap();
        let interior = sigma(k, Mode::Interior).unwrap();
        let closed_ok = as_map(&closed.expand(B).unwrap()) == oracle_series(k, Membership::Closed, B);
        let interior_series = oracle_series(k, Membership::Interior, B);
        let interior_ok = as_map(&interior.expand(B).unwrap()) == interior_series;
        let sign = if d % 2 == 0 { Int::from(1) } else { Int::from(-1) };
        let right: Series = interior_series.into_iter().map(|(e, c)| (e, c * &sign)).collect();
        let recip_ok = as_map(&closed.invert_variables().expand(B).unwrap()) == right;
        let ok =
            report.pass && report.closed_validated && report.interior_validated && closed_ok && interior_ok && recip_ok;
        verdicts.push(report.pass);
        if !ok {
            bad.push(i);
        }
    }
    let out = Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "{} cones, both closed forms validated, failures at {bad:?}",
            cones.len()
        ),
    };
    (out, verdicts)
}

fn criterion_4(cones: &[Cone]) -> Outcome {
    let mut bad = Vec::new();
    let mut steps = 0;
    for (i, k) in cones.iter().enumerate() {
        let m = k.inequalities().rows();
        let ok = match elimination_trace(k, &Carry::Auto) {
            Ok(t) => {
                steps += t.steps.len();
                let initial_ok = t.initial_carry == positive_carry(k, None).unwrap();
                let each = t.steps.iter().all(|s| {
                    let mat = s.system.matrix();
                    let positive = s.carry.iter().all(|v| v > &Rat::zero());
                    let kernel = mat.mul_vec(&s.carry).unwrap().iter().all(Zero::is_zero);
                    let negative = (0..mat.rows()).all(|r| mat.row(r).iter().any(|v| v < &Rat::zero()));
                    positive && kernel && negative
                });
                initial_ok && each && t.steps.len() == m && t.sign_count == m
            }
            Err(_) => false,
        };
        if !ok {
            bad.push(i);
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!("{} traces, {steps} eliminations, failures at {bad:?}", cones.len()),
    }
}

/// Box enumeration against the facet description.
fn oracle_count(p: &RationalPolytope, t: u64, mode: Mode) -> Int {
    let d = p.dim();
    let hi: Vec<i64> = (0..d)
        .map(|j| {
            let m = p.vertices().iter().map(|v| v[j].clone()).max().unwrap();
            (m * Rat::from_integer(Int::from(t)))
                .floor()
                .to_integer()
                .to_i64()
                .unwrap()
        })
        .collect();
    let lo: Vec<i64> = (0..d)
        .map(|j| {
            let m = p.vertices().iter().map(|v| v[j].clone()).min().unwrap();
            (m * Rat::from_integer(Int::from(t)))
                .ceil()
                .to_integer()
                .to_i64()
                .unwrap()
        })
        .collect();
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return Int::zero();
    }
    let span: Vec<i64> = lo.iter().zip(&hi).map(|(l, h)| h - l).collect();
    let n = box_iter(&span)
        .into_iter()
        .filter(|off| {
            let x: Vec<Int> = off.iter().zip(&lo).map(|(o, l)| Int::from(o + l)).collect();
            p.contains_dilate(&x, &Int::from(t), mode)
        })
        .count();
    Int::from(n)
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

fn criterion_5(polys: &[RationalPolytope]) -> Outcome {
    let square = RationalPolytope::from_fractions(&[
        &[(0, 1), (0, 1)],
        &[(1, 1), (0, 1)],
        &[(0, 1), (1, 1)],
        &[(1, 1), (1, 1)],
    ])
    .unwrap();
    let segment = RationalPolytope::from_fractions(&[&[(0, 1)], &[(1, 2)]]).unwrap();
    let shifted = RationalPolytope::from_fractions(&[
        &[(1, 1), (1, 1)],
        &[(2, 1), (1, 1)],
        &[(1, 1), (2, 1)],
        &[(2, 1), (2, 1)],
    ])
    .unwrap();

    let q = quasipolynomial(&square, Mode::Closed).unwrap();
    let square_ok = q.period() == 1
        && q.classes()[0] == vec![rat(1, 1), rat(2, 1), rat(1, 1)]
        && (1..=T).all(|t| q.eval(t as i64) == Rat::from_integer(oracle_count(&square, t, Mode::Closed)));

    let q = quasipolynomial(&segment, Mode::Closed).unwrap();
    let segment_ok = q.period() == 2
        && q.classes()[0] == vec![rat(1, 1), rat(1, 2)]
        && q.classes()[1] == vec![rat(1, 2), rat(1, 2)]
        && (1..=T).all(|t| q.eval(t as i64) == Rat::from_integer(oracle_count(&segment, t, Mode::Closed)));

    let h = hilbert_series(&shifted, Mode::Closed).unwrap();
    let series = h.series(10);
    let hilbert_ok = h.numerator() == [Int::from(1), Int::from(1)]
        && h.denominator() == &BTreeMap::from([(1, 3)])
        && (0..=10u64).all(|t| {
            let c = Int::from((t + 1) * (t + 1));
            series[t as usize] == c && oracle_count(&shifted, t, Mode::Closed) == c
        });

    let mut bad = Vec::new();
    for (i, p) in polys.iter().enumerate() {
        let d = p.dim();
        let sign = if d % 2 == 0 { Int::from(1) } else { Int::from(-1) };
        let ok = match reciprocity_check(p, T) {
            Ok(r) => {
                r.pass
                    && (1..=T).all(|t| {
                        r.closed.eval(-(t as i64)) == Rat::from_integer(&sign * oracle_count(p, t, Mode::Interior))
                    })
            }
            Err(_) => false,
        };
        if !ok {
            bad.push(i);
        }
    }
    let dims: Vec<usize> = polys.iter().map(RationalPolytope::dim).collect();
    Outcome {
        pass: square_ok && segment_ok && hilbert_ok && bad.is_empty(),
        detail: format!(
            "square {square_ok}, segment {segment_ok}, hilbert {hilbert_ok}, {} polytopes (d<=3: {}), T={T}, failures at {bad:?}",
            polys.len(),
            dims.iter().all(|&d| d <= 3)
        ),
    }
}

/// Cleared numerators by dense polynomial multiplication with `∏ (1 - x^r)`,
/// then the reflected comparison over the whole support box `[0, R]`.
fn oracle_halfopen(k: &Cone) -> bool {
    let d = k.dim();
    let rays: Vec<Vec<i64>> = k
        .ray_vectors()
        .iter()
        .map(|r| r.iter().map(|v| v.to_i64().unwrap()).collect())
        .collect();
    let total: Vec<i64> = (0..d).map(|j| rays.iter().map(|r| r[j]).sum()).collect();
    let toggled: Vec<bool> = k.flags().iter().map(|f| !f).collect();
    let k2 = k.with_flags(toggled).unwrap();
    let cleared = |member: &dyn Fn(&[Int]) -> bool| -> BTreeMap<Vec<i64>, i64> {
        let mut g: BTreeMap<Vec<i64>, i64> = box_iter(&total)
            .into_iter()
            .map(|p| {
                let v: Vec<Int> = p.iter().map(|&x| Int::from(x)).collect();
                let c = member(&v) as i64;
                (p, c)
            })
            .collect();
        for r in &rays {
            let prev = g.clone();
            for (e, c) in g.iter_mut() {
                let s: Vec<i64> = e.iter().zip(r).map(|(a, b)| a - b).collect();
                if let Some(v) = prev.get(&s) {
                    *c -= v;
                }
            }
        }
        g
    };
    let p1 = cleared(&|v| k.contains(v, Membership::AsFlagged));
    let p2 = cleared(&|v| v.iter().all(|x| x > &Int::zero()) && k2.contains(v, Membership::AsFlagged));
    let sign = if (rays.len() + d) % 2 == 0 { 1 } else { -1 };
    box_iter(&total).iter().all(|e| {
        let reflected: Vec<i64> = total.iter().zip(e).map(|(r, v)| r - v).collect();
        p2[e] == sign * p1[&reflected]
    })
}

fn criterion_6(cones: &[Cone], stanley: &[bool]) -> Outcome {
    let mut bad = Vec::new();
    for (i, k) in cones.iter().enumerate() {
        let r = halfopen_reciprocity_check(&HalfOpenSpec::new(k.clone()).unwrap(), B).unwrap();
        if r.pass != stanley[i] {
            bad.push(i);
        }
    }
    let base = pyramid();
    let mut singles = Vec::new();
    for closed in 0..4 {
        let open: Vec<usize> = (0..4).filter(|&i| i != closed).collect();
        let k = base.with_open_rows(&open).unwrap();
        let r = halfopen_reciprocity_check(&HalfOpenSpec::new(k.clone()).unwrap(), B).unwrap();
        singles.push(r.pass && oracle_halfopen(&k));
    }
    // opposite facet pairs: the verdict is recorded, and must match the oracle
    let mut pairs = Vec::new();
    for open in [[0usize, 2], [1, 3]] {
        let k = base.with_open_rows(&open).unwrap();
        let r = halfopen_reciprocity_check(&HalfOpenSpec::new(k.clone()).unwrap(), B).unwrap();
        let oracle = oracle_halfopen(&k);
        pairs.push((open.map(|i| i + 1), r.pass, oracle, r.witness.map(|w| w.exponent)));
    }
    let pairs_agree = pairs.iter().all(|(_, got, oracle, _)| got == oracle);
    let pair_text: Vec<String> = pairs
        .iter()
        .map(|(rows, got, _, w)| {
            let verdict = if *got {
                "pass".to_string()
            } else {
                format!("fail at {:?}", w.clone().unwrap_or_default())
            };
            format!("open rows {rows:?} {verdict}")
        })
        .collect();
    Outcome {
        pass: bad.is_empty() && singles.iter().all(|&s| s) && pairs_agree,
        detail: format!(
            "all-closed agrees with Stanley on {}/{} cones; single closed facet {singles:?}; opposite pairs: {}; oracle agreement {pairs_agree}",
            cones.len() - bad.len(),
            cones.len(),
            pair_text.join(", ")
        ),
    }
}

fn cli_suite(dir: &std::path::Path, cones: &[Cone]) -> Vec<(String, Vec<String>)> {
    let write = |name: &str, body: String| {
        let path = dir.join(name);
        std::fs::write(&path, body).unwrap();
        path.display().to_string()
    };
    let pyr = write(
        "pyramid.json",
        r#"{"inequalities": [[1,-1,0],[1,0,-1],[-2,1,0],[-2,0,1]]}"#.into(),
    );
    let opp = write(
        "pyramid_opposite.json",
        r#"{"inequalities": [[1,-1,0],[1,0,-1],[-2,1,0],[-2,0,1]], "open_rows": [2,4]}"#.into(),
    );
    let seg = write("segment.json", r#"{"vertices": [["0"], ["1/2"]]}"#.into());
    let sq = write("square.json", r#"{"vertices": [[1,1],[2,1],[1,2],[2,2]]}"#.into());
    let mut runs: Vec<(String, Vec<String>)> = vec![
        ("validate".into(), vec![pyr.clone()]),
        ("genfun".into(), vec![pyr.clone(), "--mode".into(), "interior".into()]),
        ("reciprocity".into(), vec![pyr.clone()]),
        ("reciprocity".into(), vec![opp.clone(), "--halfopen".into()]),
        ("trace".into(), vec![pyr.clone(), "--seed".into(), "7".into()]),
        ("ehrhart".into(), vec![seg.clone()]),
        ("ehrhart".into(), vec![sq.clone(), "--series".into()]),
    ];
    for (i, k) in cones.iter().enumerate().take(12) {
        let rows: Vec<String> = (0..k.inequalities().rows())
            .map(|r| {
                format!(
                    "[{}]",
                    k.inequalities()
                        .row(r)
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        let f = write(
            &format!("cone{i}.json"),
            format!(r#"{{"inequalities": [{}], "seed": {i}}}"#, rows.join(",")),
        );
        runs.push(("trace".into(), vec![f.clone()]));
        runs.push(("genfun".into(), vec![f]));
    }
    runs
}

fn run_cli(cmd: &str, args: &[String]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_reciprocone"))
        .arg(cmd)
        .args(args)
        .arg("--json")
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn criterion_7(cones: &[Cone]) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs = cli_suite(dir.path(), cones);
    let first: Vec<_> = runs.iter().map(|(c, a)| run_cli(c, a)).collect();
    let second: Vec<_> = runs.iter().map(|(c, a)| run_cli(c, a)).collect();
    let identical = first == second;
    let parsed = first
        .iter()
        .all(|(_, out)| reciprocone_cli::Report::from_json(std::str::from_utf8(out).unwrap()).is_ok());
    let codes: Vec<i32> = first.iter().map(|(c, _)| c.unwrap_or(-1)).collect();
    let clean_exit = codes.iter().all(|&c| c == 0 || c == 1);
    Outcome {
        pass: identical && parsed && clean_exit,
        detail: format!(
            "{} invocations run twice, byte-identical {identical}, reports parse {parsed}, exit codes {codes:?}",
            runs.len()
        ),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cones = random_normalized_cones(CONE_SEED, CONE_COUNT, &ConeCorpusConfig::default());
    let polys = random_polytopes(POLYTOPE_SEED, POLYTOPE_COUNT, &PolytopeCorpusConfig::default());
    let rays: Vec<usize> = cones.iter().map(|k| k.ray_vectors().len()).collect();
    let simplicial = cones.iter().filter(|k| k.ray_vectors().len() == k.dim()).count();
    let periods: Vec<Int> = polys.iter().map(RationalPolytope::denominator).collect();
    println!(
        "corpus: {} cones (seed {CONE_SEED}), rays {}..={}, {simplicial} simplicial, max entry {}; {} polytopes (seed {POLYTOPE_SEED}), periods up to {}",
        cones.len(),
        rays.iter().min().unwrap(),
        rays.iter().max().unwrap(),
        cones.iter().map(|k| k.inequalities().max_abs()).max().unwrap(),
        polys.len(),
        periods.iter().max().unwrap()
    );

    let mut all = true;
    let mut report = |n: usize, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        all &= o.pass;
        println!(
            "criterion {n} {}  {}  [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    };
    report(1, &mut criterion_1);
    report(2, &mut || criterion_2(&cones));
    let mut stanley = Vec::new();
    report(3, &mut || {
        let (o, v) = criterion_3(&cones);
        stanley = v;
        o
    });
    report(4, &mut || criterion_4(&cones));
    report(5, &mut || criterion_5(&polys));
    report(6, &mut || criterion_6(&cones, &stanley));
    report(7, &mut || criterion_7(&cones));
    println!("acceptance total {:.1}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
