//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Every tolerance and time limit is a constant below.

use std::time::{Duration, Instant};

use glasschain::chain::{brute_force_observables, closed_form_observables, ClosedForm, CouplingVector};
use glasschain::disorder::{exact_average, exact_average_many, gauge_reduce_ii, gauge_reduce_iii, monte_carlo_average, Antithetic, Sampling};
use glasschain::explorer::{default_asymmetric_scan, default_chord_scan, default_control_scan, graph_observables, ExploreGrids, Topology};
use glasschain::inequalities::{
    check_first_inequality, check_second_inequality, critical_alpha, critical_alpha_by_bisection, g_function, monotonicity_check, CheckOptions,
    Sign,
};
use glasschain::{free_boundary_observables, BondLaw, DisorderModel, TreeGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_REL_TOL: f64 = 1e-11;
const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(10);
const SIGN_REL_TOL: f64 = 1e-12;
const FIRST_SWEEP_TIME_LIMIT: Duration = Duration::from_secs(60);
const BISECTION_TOL: f64 = 1e-10;
const ROOT_MATCH_TOL: f64 = 1e-6;
const G_ROOT_TOL: f64 = 1e-12;
const G_ANCHOR_REL_TOL: f64 = 1e-12;
const GAUGE_REL_TOL: f64 = 1e-11;
const TREE_ABS_TOL: f64 = 1e-14;
const EXPLORE_TIME_LIMIT: Duration = Duration::from_secs(300);
const REPLAY_TOL: f64 = 1e-12;
const MC_SAMPLES: u64 = 100_000;
const MC_SEED: u64 = 20_240_917;
const MC_SIGMAS: f64 = 4.0;

/// Root of the averaged truncated correlation for `J^(i) = 1`, `N = 3`,
/// from an independent enumeration outside this crate.
const ALPHA_STAR_UNIT_TRIANGLE: f64 = 0.739_235_452_848_840_8;

type Outcome = Result<String, String>;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))?;
    Ok(t)
}

fn lib<T>(r: glasschain::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let n = rng.random_range(3..=10);
        let js: Vec<f64> = (0..n).map(|_| rng.random_range(-4.0..=4.0)).collect();
        let c = lib(CouplingVector::new(js.clone()))?;
        let cf = closed_form_observables(&c);
        let bf = lib(brute_force_observables(&c))?;
        let (za, zb) = (cf.z.to_f64(), bf.z.to_f64());
        ensure(rel_close(za, zb, ORACLE_REL_TOL), || format!("trial {trial} {js:?}: Z {za} vs {zb}"))?;
        worst = worst.max((za - zb).abs() / za.abs());
        let pairs = cf.omega.iter().zip(&bf.omega).map(|(a, b)| (*a, *b)).chain(
            cf.pairs
                .iter()
                .zip(&bf.pairs)
                .flat_map(|(p, q)| [(p.omega_pair, q.omega_pair), (p.truncated, q.truncated)]),
        );
        for (a, b) in pairs {
            ensure(close(a, b, ORACLE_REL_TOL), || format!("trial {trial} {js:?}: {a} vs {b}"))?;
            worst = worst.max((a - b).abs() / 1f64.max(a.abs()).max(b.abs()));
        }
    }
    let t = within(ORACLE_TIME_LIMIT, start)?;
    Ok(format!("1000 chains, worst rel. diff {worst:.1e}, {t:.2?}"))
}

fn random_magnitude(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.1..=3.0)
}

/// Random model of system I, II or III, with an occasional zero bond in II.
fn random_first_model(rng: &mut ChaCha8Rng) -> DisorderModel {
    let n = rng.random_range(3..=8);
    let laws = match rng.random_range(0..3) {
        0 => (0..n)
            .map(|_| BondLaw::bernoulli(random_magnitude(rng), rng.random_range(0.5..=1.0)).unwrap())
            .collect(),
        1 => (0..n)
            .map(|_| {
                if rng.random_bool(0.1) {
                    BondLaw::shifted_symmetric(0.0, 0.0).unwrap()
                } else {
                    BondLaw::shifted_symmetric(rng.random_range(0.0..=2.0), random_magnitude(rng)).unwrap()
                }
            })
            .collect(),
        _ => {
            // Bias signs chosen so that the product stays non-negative.
            let mut ps: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=1.0)).collect();
            if ps.iter().filter(|&&p| p < 0.5).count() % 2 == 1 {
                ps[0] = 1.0 - ps[0];
            }
            ps.iter().map(|&p| BondLaw::bernoulli(random_magnitude(rng), p).unwrap()).collect()
        }
    };
    DisorderModel::new(laws).unwrap()
}

fn first_sweep() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let opts = CheckOptions {
        rel_tolerance: SIGN_REL_TOL,
        ..CheckOptions::default()
    };
    let (mut strict, mut weak) = (0, 0);
    for trial in 0..500 {
        let m = random_first_model(&mut rng);
        let all_nonzero = !m.laws().iter().any(BondLaw::has_zero_atom);
        for h in 1..=m.len() {
            let v = lib(check_first_inequality(&m, h, &opts))?;
            ensure(v.value >= -v.tolerance, || format!("trial {trial} h {h}: {v:?}"))?;
            if all_nonzero {
                ensure(v.verdict == Sign::Positive, || format!("trial {trial} h {h}: not strictly positive {v:?}"))?;
                strict += 1;
            } else {
                weak += 1;
            }
        }
    }
    let t = within(FIRST_SWEEP_TIME_LIMIT, start)?;
    Ok(format!("500 models, {strict} strict and {weak} weak checks, {t:.2?}"))
}

fn second_sweep() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let opts = CheckOptions {
        rel_tolerance: SIGN_REL_TOL,
        ..CheckOptions::default()
    };
    let (mut strict, mut weak) = (0, 0);
    for trial in 0..500 {
        let n = rng.random_range(3..=8);
        let laws: Vec<BondLaw> = if rng.random_bool(0.5) {
            (0..n).map(|_| BondLaw::symmetric(random_magnitude(&mut rng)).unwrap()).collect()
        } else {
            (0..n)
                .map(|_| {
                    let j = if rng.random_bool(0.1) { 0.0 } else { random_magnitude(&mut rng) };
                    BondLaw::shifted_symmetric(0.0, j).unwrap()
                })
                .collect()
        };
        let m = DisorderModel::new(laws).unwrap();
        let all_nonzero = !m.laws().iter().any(BondLaw::has_zero_atom);
        for h in 1..=n {
            for k in h + 1..=n {
                let v = lib(check_second_inequality(&m, h, k, &opts))?;
                ensure(v.value <= v.tolerance, || format!("trial {trial} ({h},{k}): {v:?}"))?;
                if all_nonzero {
                    ensure(v.verdict == Sign::Negative, || format!("trial {trial} ({h},{k}): not strictly negative {v:?}"))?;
                    strict += 1;
                } else {
                    weak += 1;
                }
            }
        }
    }
    Ok(format!("500 models, {strict} strict and {weak} weak pair checks"))
}

fn critical_curve() -> Outcome {
    let mags = [1.0, 1.0, 1.0];
    let a = lib(critical_alpha(&mags))?;
    ensure(rel_close(a, ALPHA_STAR_UNIT_TRIANGLE, 1e-14), || format!("alpha* = {a}"))?;
    let b = lib(critical_alpha_by_bisection(&mags, 1, 2, BISECTION_TOL))?;
    ensure((a - b).abs() <= ROOT_MATCH_TOL, || format!("closed form {a} vs bisection {b}"))?;
    let g = lib(g_function(a, &mags))?;
    ensure(g.abs() <= G_ROOT_TOL, || format!("g(alpha*) = {g:e}"))?;
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let rep = lib(monotonicity_check(&mags, &grid))?;
    ensure(rep.monotone(), || format!("not increasing: {:?}", rep.first_violation))?;
    Ok(format!("alpha* = {a:.9}, bisection {b:.9}, g(alpha*) = {g:.1e}"))
}

fn boundary_anchors() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..200 {
        let n = rng.random_range(2..=10);
        let mags: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..=3.0)).collect();
        let c: f64 = mags.iter().map(|j| j.cosh()).product();
        let s: f64 = mags.iter().map(|j| j.sinh()).product();
        let g0 = lib(g_function(0.0, &mags))?;
        ensure(g0 < 0.0 && rel_close(g0, -2.0 * c * s, G_ANCHOR_REL_TOL), || format!("trial {trial}: g(0) = {g0}"))?;
        let g1 = lib(g_function(1.0, &mags))?;
        let want = (c - s).powi(2);
        // (C - S)^2 loses digits to cancellation; compare against the
        // scale of the terms it came from.
        ensure(g1 >= 0.0 && (g1 - want).abs() <= G_ANCHOR_REL_TOL * (c * c + s * s), || {
            format!("trial {trial}: g(1) = {g1}, (C - S)^2 = {want}")
        })?;
    }
    Ok("200 magnitude vectors".into())
}

fn gauge_reductions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..100 {
        let n = rng.random_range(3..=10);
        let h = rng.random_range(1..=n);
        let k = (h % n) + 1;
        let f = |c: &CouplingVector| -> glasschain::Result<f64> {
            let cf = ClosedForm::new(c);
            Ok(c.get(h)? * cf.omega(h)? + c.get(h)? * c.get(k)? * cf.truncated(h, k)?)
        };

        let laws = (0..n)
            .map(|_| BondLaw::bernoulli(random_magnitude(&mut rng), rng.random_range(0.0..=1.0)).unwrap())
            .collect();
        let m = DisorderModel::new(laws).unwrap();
        let (full, reduced) = (lib(exact_average(&m, f))?, lib(lib(gauge_reduce_iii(&m))?.average(f))?);
        ensure(close(full, reduced, GAUGE_REL_TOL), || format!("trial {trial} two-term: {full} vs {reduced}"))?;

        let laws = (0..n)
            .map(|i| {
                let mu = if i + 1 == h { 0.0 } else { rng.random_range(0.0..=2.0) };
                BondLaw::shifted_symmetric(mu, random_magnitude(&mut rng)).unwrap()
            })
            .collect();
        let m = DisorderModel::new(laws).unwrap();
        let (full, reduced) = (lib(exact_average(&m, f))?, lib(lib(gauge_reduce_ii(&m, h))?.average(f))?);
        ensure(close(full, reduced, GAUGE_REL_TOL), || format!("trial {trial} shifted: {full} vs {reduced}"))?;
    }
    Ok("100 models of each reduction".into())
}

fn trees() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let n = rng.random_range(2..=12);
        let parents: Vec<Option<usize>> = (0..n).map(|i| (i > 0).then(|| rng.random_range(1..=i))).collect();
        let js: Vec<f64> = (1..n).map(|_| rng.random_range(-3.0..=3.0)).collect();
        let t = lib(TreeGraph::from_parents(&parents, &js))?;
        let exact = free_boundary_observables(&t);
        let topo = lib(Topology::new(n, t.edges().to_vec()))?;
        let enumerated = lib(graph_observables(&topo, t.couplings()))?;
        for (p, q) in exact.pairs.iter().zip(&enumerated.pairs) {
            ensure(p.truncated.abs() <= TREE_ABS_TOL && q.truncated.abs() <= TREE_ABS_TOL, || {
                format!("trial {trial} ({}, {}): {} / {}", p.h, p.k, p.truncated, q.truncated)
            })?;
            worst = worst.max(q.truncated.abs());
        }
    }
    Ok(format!("100 trees, largest enumerated |truncated| {worst:.1e}"))
}

fn explorer_scans() -> Outcome {
    let start = Instant::now();
    let grids = ExploreGrids::default();
    let chord = lib(default_chord_scan(&grids))?;
    let asym = lib(default_asymmetric_scan(&grids))?;
    let control = lib(default_control_scan(&grids))?;
    let t = within(EXPLORE_TIME_LIMIT, start)?;
    ensure(control.none_found(), || format!("control produced {} records", control.records.len()))?;
    ensure(control.to_json_lines().contains("\"none_found_in_grid\":true"), || "control marker missing".into())?;
    for scan in [&chord, &asym] {
        let text = scan.to_json_lines();
        ensure(!text.is_empty(), || format!("{}: no output", scan.search))?;
        for r in &scan.records {
            let replayed = lib(r.replay())?;
            ensure((replayed - r.value).abs() <= REPLAY_TOL, || format!("replay {} vs {}", replayed, r.value))?;
            let back: glasschain::explorer::ViolationRecord = serde_json::from_str(&r.to_json_line()).map_err(|e| e.to_string())?;
            ensure(back == *r, || "JSON round trip changed a record".into())?;
        }
    }
    let report = |s: &glasschain::explorer::ScanSummary| {
        if s.none_found() {
            "none found in grid".to_string()
        } else {
            format!("{} violations", s.records.len())
        }
    };
    Ok(format!(
        "chord: {}, asymmetric: {}, control: 0 of {} pairs, {t:.2?}",
        report(&chord),
        report(&asym),
        control.pairs_checked
    ))
}

fn overflow() -> Outcome {
    let mut js = vec![30.0; 500];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for round in 0..3 {
        let c = lib(CouplingVector::new(js.clone()))?;
        let cf = ClosedForm::new(&c);
        for h in 1..=500 {
            let w = lib(cf.omega(h))?;
            ensure(w.is_finite() && w.abs() <= 1.0, || format!("round {round}: w_{h} = {w}"))?;
        }
        for (h, k) in [(1, 2), (1, 250), (17, 499), (499, 500)] {
            let (w, t) = (lib(cf.omega_pair(h, k))?, lib(cf.truncated(h, k))?);
            ensure(w.is_finite() && w.abs() <= 1.0 && t.is_finite() && t.abs() <= 2.0, || {
                format!("round {round}: ({h},{k}) w_hk = {w}, truncated = {t}")
            })?;
        }
        ensure(cf.partition().log_mag().is_finite(), || "ln Z not finite".into())?;
        for _ in 0..=round {
            let i = rng.random_range(0..500);
            js[i] = -js[i];
        }
    }
    Ok("N = 500, J = 30 with 0, 1 and 3 flipped bonds".into())
}

fn monte_carlo() -> Outcome {
    // Magnitudes vary with the sign, so the samples are not two-valued.
    let m = DisorderModel::new(vec![
        BondLaw::two_point(1.0, -0.3, 0.7).unwrap(),
        BondLaw::two_point(0.5, -2.0, 0.4).unwrap(),
        BondLaw::two_point(2.0, 0.2, 0.9).unwrap(),
        BondLaw::two_point(1.5, -1.0, 0.55).unwrap(),
    ])
    .unwrap();
    let funcs: [(&str, fn(&CouplingVector) -> glasschain::Result<f64>); 2] = [
        ("<J_1 w_1>", |c| Ok(c.get(1)? * ClosedForm::new(c).omega(1)?)),
        ("<J_1 J_3 trunc>", |c| Ok(c.get(1)? * c.get(3)? * ClosedForm::new(c).truncated(1, 3)?)),
    ];
    let mut parts = Vec::new();
    for (name, f) in funcs {
        let exact = lib(exact_average_many(&m, 1, |c, out| {
            out[0] = f(c)?;
            Ok(())
        }))?[0];
        let mc = lib(monte_carlo_average(&m, f, Sampling::new(MC_SAMPLES, MC_SEED).with_antithetic(Antithetic::Off)))?;
        let z = (mc.mean - exact).abs() / mc.std_error;
        ensure(mc.std_error > 0.0 && z <= MC_SIGMAS, || {
            format!("{name}: sampled {} +- {} vs exact {exact}", mc.mean, mc.std_error)
        })?;
        parts.push(format!("{name} {z:.2} sigma"));
    }
    Ok(parts.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("first inequality sweep", first_sweep),
        ("second inequality sweep", second_sweep),
        ("critical bias", critical_curve),
        ("g boundary values", boundary_anchors),
        ("gauge reductions", gauge_reductions),
        ("trees and free boundary", trees),
        ("explorer scans", explorer_scans),
        ("overflow robustness", overflow),
        ("monte carlo consistency", monte_carlo),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
