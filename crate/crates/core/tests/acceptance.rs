//! Acceptance checks. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero if any fail.

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use polypick::geometry::{choose_mobius, generate_nodes, intersect_mobius_with_flat, BasePoints, GridConfig};
use polypick::pick::{classify_problem, reconstruct_unique, PickTolerances};
use polypick::sample::{random_rif, Blaschke};
use polypick::verify::{certify_uniqueness, certify_with_values, refined_certify, sample_nodes, sharpness_demo, Tolerances};
use polypick::{unimodular, AnalyticDisc, Execution, MobiusMap, MultiIndex, MultiPoly, NodeGrid, PickProblem, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn disc_point<R: Rng>(rng: &mut R, radius: f64) -> C64 {
    unimodular(rng.random_range(0.0..TAU)) * (radius * rng.random::<f64>().sqrt())
}

fn spread_points<R: Rng>(rng: &mut R, count: usize, radius: f64, min_gap: f64) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::new();
    while out.len() < count {
        let z = disc_point(rng, radius);
        if out.iter().all(|w| (w - z).norm() > min_gap) {
            out.push(z);
        }
    }
    out
}

fn default_grid(big_n: usize, n: usize) -> NodeGrid {
    generate_nodes(big_n, n, &GridConfig::default()).expect("default grid")
}

/// Random RIFs, `|f|` on the torus away from zeros of `q`, and inside.
fn rudin_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let angles: Vec<C64> = (0..64).map(|k| unimodular(TAU * k as f64 / 64.0)).collect();
    let mut torus = 0.0_f64;
    let mut interior = 0.0_f64;
    let mut excluded = 0;
    for _ in 0..25 {
        let f = random_rif(&mut rng, 2, 4);
        let scale = f.q().max_coeff_norm();
        for &a in &angles {
            for &b in &angles {
                let den = f.q().eval(&[a, b]).unwrap();
                if den.norm() < 1e-6 * scale {
                    excluded += 1;
                    continue;
                }
                let v = f.numerator().eval(&[a, b]).unwrap() / den;
                torus = torus.max((v.norm() - 1.0).abs());
            }
        }
        for _ in 0..100 {
            let z = [disc_point(&mut rng, 1.0), disc_point(&mut rng, 1.0)];
            interior = interior.max(f.eval(&z).unwrap().norm());
        }
    }
    check(
        torus <= 1e-9 && interior <= 1.0 + 1e-12,
        format!("max ||f|-1| on torus {torus:.2e}, max interior |f| {interior:.15}, {excluded} torus points excluded"),
    )
}

fn pick_evidence_ok(v: &polypick::UniquenessVerdict) -> bool {
    let norm = v.spectrum.iter().map(|x| x.abs()).fold(0.0, f64::max);
    v.min_eigenvalue >= -1e-8 * norm && v.smallest_relative_eigenvalue <= 1e-6
}

fn certificate_stats(certs: &[polypick::UniquenessCertificate]) -> (bool, f64, f64, usize) {
    let mut all = true;
    let mut flat = 0.0_f64;
    let mut mobius = 0.0_f64;
    let mut items = 0;
    for c in certs {
        all &= c.overall;
        for d in c.all_disc_evidence() {
            items += 1;
            all &= d.verdict.as_ref().is_some_and(pick_evidence_ok);
            flat = flat.max(d.reconstruction_residual.unwrap_or(f64::INFINITY));
        }
        for m in c.all_mobius_evidence() {
            items += 1;
            all &= m.verdict.as_ref().is_some_and(pick_evidence_ok);
            let r = m.reconstruction_residual.unwrap_or(f64::INFINITY);
            mobius = mobius.max(r).max(m.consistency_residual.unwrap_or(f64::INFINITY));
        }
    }
    (all && flat <= 1e-7 && mobius <= 1e-7, flat, mobius, items)
}

fn certificate_n2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    let grid = default_grid(3, 2);
    let certs: Vec<_> =
        (0..20).map(|_| certify_uniqueness(&random_rif(&mut rng, 2, 2), &grid, &Tolerances::default()).unwrap()).collect();
    let (ok, flat, mobius, items) = certificate_stats(&certs);
    let passed = certs.iter().filter(|c| c.overall).count();
    check(
        ok,
        format!("{passed}/20 certificates pass, {items} Pick checks, max flat residual {flat:.2e}, max Möbius residual {mobius:.2e}"),
    )
}

fn certificate_n3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3003);
    let grid = default_grid(2, 3);
    let certs: Vec<_> =
        (0..10).map(|_| certify_uniqueness(&random_rif(&mut rng, 3, 1), &grid, &Tolerances::default()).unwrap()).collect();
    let (ok, flat, mobius, items) = certificate_stats(&certs);
    let rho_ok = certs.iter().all(|c| c.rho_sweep.len() == 5 && c.rho_sweep.iter().all(|r| r.passed));
    let passed = certs.iter().filter(|c| c.overall).count();
    check(
        ok && rho_ok,
        format!("{passed}/10 certificates pass with 5 ρ samples, {items} Pick checks, max flat residual {flat:.2e}, max Möbius residual {mobius:.2e}"),
    )
}

fn mobius_intersections() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4004);
    let mut worst_gap = f64::INFINITY;
    let mut worst_res = 0.0_f64;
    let mut worst_mod = 0.0_f64;
    for _ in 0..5 {
        let taus = loop {
            let t: Vec<C64> = (0..5).map(|_| unimodular(rng.random_range(0.0..TAU))).collect();
            let distinct = (0..5).all(|i| (0..i).all(|j| (t[i] - t[j]).norm() > 1e-3));
            if distinct {
                break t;
            }
        };
        let (m, _) = choose_mobius(&taus, 0).unwrap();
        let inter = intersect_mobius_with_flat(&taus, &m).unwrap();
        let pts = inter.points();
        for (i, (&tau, &r)) in taus.iter().zip(&pts).enumerate() {
            // defining equation recomputed here
            let res = (tau * r - m.t() * (r - m.a()) / (C64::new(1.0, 0.0) - m.a().conj() * r)).norm();
            worst_res = worst_res.max(res);
            worst_mod = worst_mod.max(r.norm());
            for &s in &pts[..i] {
                worst_gap = worst_gap.min((r - s).norm());
            }
        }
    }
    let taus: Vec<C64> = (0..5).map(|k| unimodular(TAU * k as f64 / 5.0)).collect();
    let degenerate = intersect_mobius_with_flat(&taus, &MobiusMap::new(unimodular(0.3), C64::new(0.0, 0.0)).unwrap()).unwrap();
    let zeros = degenerate.points().iter().all(|r| r.re == 0.0 && r.im == 0.0);
    check(
        worst_gap > 1e-6 && worst_res <= 1e-10 && worst_mod < 1.0 && zeros,
        format!("min gap {worst_gap:.2e}, max residual {worst_res:.2e}, max |r| {worst_mod:.3}, a = 0 roots exactly zero: {zeros}"),
    )
}

fn refinement() -> Outcome {
    // 2z₁z₂ − z₁ − z₂ over 2 − z₁ − z₂
    let q = MultiPoly::from_terms(
        2,
        vec![(vec![0, 0], C64::new(2.0, 0.0)), (vec![1, 0], C64::new(-1.0, 0.0)), (vec![0, 1], C64::new(-1.0, 0.0))],
    )
    .unwrap();
    let f = polypick::rif::make_rif(C64::new(1.0, 0.0), MultiIndex::new(vec![1, 1]), q).unwrap();
    let r = f.restrict(&AnalyticDisc::diagonal(2)).unwrap();
    let minus_z = MultiPoly::univariate(&[C64::new(0.0, 0.0), C64::new(-1.0, 0.0)]);
    let err = r.num().max_coeff_diff(&minus_z).unwrap().max(r.den().max_coeff_diff(&MultiPoly::one(1)).unwrap());
    let row: Vec<C64> = (0..3).map(|k| unimodular(TAU * k as f64 / 3.0)).collect();
    let grid = generate_nodes(3, 2, &GridConfig { multipliers: Some(vec![row]), base_points: BasePoints::Default }).unwrap();
    let cert = refined_certify(&f, &grid, &Tolerances::default()).unwrap();
    let diag = &cert.per_disc[0];
    check(
        err <= 1e-12 && cert.overall && diag.passed && diag.node_count == 2 && cert.node_savings > 0,
        format!(
            "diagonal restriction error {err:.1e}, diagonal disc uses {} nodes, node counts {:?}, savings {}",
            diag.node_count, cert.node_counts, cert.node_savings
        ),
    )
}

fn sharpness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6006);
    let grid = default_grid(3, 2);
    let tol = PickTolerances::default();
    let mut trials = 0;
    let mut min_rel = f64::INFINITY;
    let mut min_radius = f64::INFINITY;
    let mut worst_interp = 0.0_f64;
    let mut worst_gap = 0.0_f64;
    while trials < 10 {
        let f = random_rif(&mut rng, 2, 2);
        if f.degree() != 2 {
            continue;
        }
        let Some(disc) = grid.discs().iter().position(|d| f.disc_degree(d).unwrap() == 2) else {
            continue;
        };
        let z_star = disc_point(&mut rng, 0.8);
        let rep = sharpness_demo(&f, &grid, disc, z_star, &tol).unwrap();
        min_rel = min_rel.min(rep.verdict.smallest_relative_eigenvalue);
        min_radius = min_radius.min(rep.value_disc.radius);
        worst_interp = worst_interp.max(rep.max_interpolation_error);
        worst_gap = worst_gap.max((rep.disagreement - 2.0 * rep.value_disc.radius).abs());
        trials += 1;
    }
    check(
        min_rel >= 1e-6 && worst_interp <= 1e-9 && worst_gap <= 1e-8 && min_radius > 1e-4,
        format!(
            "10 trials: min relative eigenvalue {min_rel:.2e}, interpolation error {worst_interp:.1e}, \
             |disagreement - 2 radius| {worst_gap:.1e}, min radius {min_radius:.2e}"
        ),
    )
}

fn one_variable_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7007);
    let tol = PickTolerances::default();
    let mut failures = Vec::new();
    let mut worst = 0.0_f64;
    for trial in 0..30 {
        let k = 1 + trial % 5;
        let b = Blaschke::random(&mut rng, k, 0.8);
        let nodes = spread_points(&mut rng, k + 1, 0.8, 0.15);
        let targets: Vec<C64> = nodes.iter().map(|&z| b.eval(z)).collect();
        let p = PickProblem::new(nodes.clone(), targets.clone()).unwrap();
        let (m, v) = classify_problem(&p, &tol).unwrap();
        if !v.unique {
            failures.push(format!("trial {trial}: k+1 nodes not unique"));
            continue;
        }
        let g = reconstruct_unique(&p, &m, &tol).unwrap();
        for _ in 0..50 {
            let z = disc_point(&mut rng, 0.9);
            worst = worst.max((g.eval(z).unwrap() - b.eval(z)).norm());
        }
        let short = PickProblem::new(nodes[..k].to_vec(), targets[..k].to_vec()).unwrap();
        let (_, v) = classify_problem(&short, &tol).unwrap();
        if v.unique || !v.solvable {
            failures.push(format!("trial {trial}: k nodes classified {v:?}"));
        }
    }
    check(
        failures.is_empty() && worst <= 1e-8,
        format!("30 Blaschke products, max reconstruction error {worst:.2e}, misclassified {}", failures.len()),
    )
}

fn mutation_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8008);
    let grid = default_grid(3, 2);
    let tol = Tolerances::default();
    let mut detected = 0;
    for _ in 0..100 {
        let f = random_rif(&mut rng, 2, 2);
        let mut values = sample_nodes(&f, &grid).unwrap();
        let i = rng.random_range(0..values.len());
        values[i] += unimodular(rng.random_range(0.0..TAU)) * 1e-3;
        let cert = certify_with_values(&f, &grid, &values, &tol, Execution::default()).unwrap();
        if !cert.overall || cert.max_residual() > tol.residual {
            detected += 1;
        }
    }
    check(detected >= 95, format!("{detected}/100 single-target perturbations detected"))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("rudin form validity", rudin_form, Duration::from_secs(5)),
        ("certificate n = 2, N = 3", certificate_n2, Duration::from_secs(10)),
        ("certificate n = 3, N = 2", certificate_n3, Duration::from_secs(20)),
        ("möbius intersections", mobius_intersections, Duration::MAX),
        ("refined node counts", refinement, Duration::MAX),
        ("sharpness", sharpness, Duration::MAX),
        ("one-variable equivalence", one_variable_equivalence, Duration::MAX),
        ("mutation soundness", mutation_soundness, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < *limit;
        let ok = out.ok && in_time;
        if !ok {
            failed += 1;
        }
        let budget = if *limit == Duration::MAX { String::new() } else { format!(" (limit {}s)", limit.as_secs()) };
        println!(
            "acceptance {} {name}: {} in {:.2}s{budget}; {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            out.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
