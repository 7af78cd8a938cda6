use super::*;
use crate::geometry::BasePoints;
use crate::polynomial::{MultiIndex, MultiPoly};
use crate::rif::make_rif;
use crate::sample::random_rif;
use crate::{c64, pick::PickTolerances};
use rand_chacha::ChaCha8Rng;

fn z1() -> RationalInnerFunction {
    make_rif(c64(1.0, 0.0), MultiIndex::new(vec![1, 0]), MultiPoly::one(2)).unwrap()
}

fn singular() -> RationalInnerFunction {
    crate::rif::tests::singular_example()
}

/// Multipliers `1, ω, ω²` so that the diagonal is disc 0.
fn grid_with_diagonal(big_n: usize) -> NodeGrid {
    let row: Vec<C64> = (0..big_n).map(|k| unimodular(TAU * k as f64 / big_n as f64)).collect();
    generate_nodes(big_n, 2, &GridConfig { multipliers: Some(vec![row]), base_points: BasePoints::Default }).unwrap()
}

fn default_grid(big_n: usize, n: usize) -> NodeGrid {
    generate_nodes(big_n, n, &GridConfig::default()).unwrap()
}

#[test]
fn coordinate_function_passes() {
    let grid = default_grid(2, 2);
    let cert = certify_uniqueness(&z1(), &grid, &Tolerances::default()).unwrap();
    assert!(cert.overall, "{:?}", cert.failing_stage);
    for d in &cert.per_disc {
        assert_eq!(d.restricted_degree, Some(1));
        let v = d.verdict.as_ref().unwrap();
        assert!(v.unique);
        assert_eq!(v.rank_estimate, 1);
    }
    assert_eq!(cert.mobius.len(), 3);
    assert!(cert.mobius.iter().all(|m| m.restricted_degree == Some(1)));
}

#[test]
fn singular_example_passes() {
    let cert = certify_uniqueness(&singular(), &grid_with_diagonal(3), &Tolerances::default()).unwrap();
    assert!(cert.overall, "{:?}", cert.failing_stage);
    assert_eq!(cert.per_disc[0].restricted_degree, Some(1));
    assert!(cert.per_disc.iter().all(|d| d.restricted_degree.unwrap() <= 2));
    assert!(cert.max_residual() <= 1e-7);
}

#[test]
fn degree_at_bound_is_a_precondition_error() {
    let f = make_rif(c64(1.0, 0.0), MultiIndex::new(vec![1, 1]), MultiPoly::one(2)).unwrap();
    assert!(matches!(certify_uniqueness(&f, &default_grid(2, 2), &Tolerances::default()), Err(Error::Precondition(_))));
    assert!(matches!(refined_certify(&f, &default_grid(2, 2), &Tolerances::default()), Err(Error::Precondition(_))));
}

#[test]
fn dimension_mismatch_is_an_error() {
    assert!(matches!(
        certify_uniqueness(&z1(), &default_grid(2, 3), &Tolerances::default()),
        Err(Error::Dimension { .. })
    ));
}

#[test]
fn refined_counts() {
    let cert = refined_certify(&singular(), &grid_with_diagonal(3), &Tolerances::default()).unwrap();
    assert!(cert.overall, "{:?}", cert.failing_stage);
    assert_eq!(cert.mode, CertificateMode::Refined);
    assert_eq!(cert.node_counts[0], 2);
    assert_eq!(cert.per_disc[0].node_count, 2);
    assert!(cert.node_savings >= 1);
    assert!(cert.node_counts.iter().all(|&c| c <= 3));

    let f = make_rif(c64(1.0, 0.0), MultiIndex::new(vec![1, 1]), MultiPoly::one(2)).unwrap();
    let cert = refined_certify(&f, &grid_with_diagonal(3), &Tolerances::default()).unwrap();
    assert!(cert.overall);
    assert_eq!(cert.node_counts, vec![3, 3, 3]);
    assert_eq!(cert.node_savings, 0);

    let c = make_rif(unimodular(0.4), MultiIndex::zero(2), MultiPoly::one(2)).unwrap();
    let cert = refined_certify(&c, &default_grid(3, 2), &Tolerances::default()).unwrap();
    assert!(cert.overall, "{:?}", cert.failing_stage);
    assert_eq!(cert.node_counts, vec![1, 1, 1]);
    assert_eq!(cert.node_savings, 6);
}

#[test]
fn one_variable_chain() {
    let f = make_rif(c64(0.0, 1.0), MultiIndex::new(vec![2]), MultiPoly::univariate(&[c64(1.0, 0.0), c64(-0.3, 0.2)])).unwrap();
    let cert = certify_uniqueness(&f, &default_grid(3, 1), &Tolerances::default()).unwrap();
    assert!(cert.overall, "{:?}", cert.failing_stage);
    assert_eq!(cert.per_disc.len(), 1);
    assert!(cert.mobius.is_empty());
}

#[test]
fn three_variable_chain() {
    let f = make_rif(c64(1.0, 0.0), MultiIndex::new(vec![0, 0, 1]), MultiPoly::one(3)).unwrap();
    let cert = certify_uniqueness(&f, &default_grid(2, 3), &Tolerances::default()).unwrap();
    assert!(cert.overall, "{:?}", cert.failing_stage);
    assert_eq!(cert.per_disc.len(), 4);
    assert_eq!(cert.fibers.len(), 2);
    assert_eq!(cert.rho_sweep.len(), 5);
    assert!(cert.caveats.iter().any(|c| c.contains("ρ")));
}

#[test]
fn random_functions_pass_and_are_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let grid = default_grid(3, 2);
    for _ in 0..4 {
        let f = random_rif(&mut rng, 2, 2);
        let seq = certify_uniqueness_with(&f, &grid, &Tolerances::default(), Execution::Sequential).unwrap();
        let par = certify_uniqueness_with(&f, &grid, &Tolerances::default(), Execution::Parallel).unwrap();
        assert!(seq.overall, "{:?}", seq.failing_stage);
        assert_eq!(serde_json::to_string(&seq).unwrap(), serde_json::to_string(&par).unwrap());
    }
}

#[test]
fn certificate_json_round_trips() {
    let cert = certify_uniqueness(&singular(), &grid_with_diagonal(3), &Tolerances::default()).unwrap();
    let text = crate::json::to_string_pretty(&cert);
    let back: UniquenessCertificate = crate::json::from_str(&text).unwrap();
    assert_eq!(back, cert);
    assert!(text.contains(CERTIFICATE_FORMAT));
}

#[test]
fn perturbed_values_fail() {
    let f = singular();
    let grid = grid_with_diagonal(3);
    let mut values = sample_nodes(&f, &grid).unwrap();
    values[4] += c64(1e-3, 0.0);
    let cert = certify_with_values(&f, &grid, &values, &Tolerances::default(), Execution::Sequential).unwrap();
    assert!(!cert.overall);
    assert!(cert.failing_stage.as_deref().unwrap().starts_with("flat disc 1"));
    assert!(cert.external_values);
}

#[test]
fn sharpness_examples() {
    let tol = PickTolerances::default();
    let rep = sharpness_demo(&z1(), &default_grid(2, 2), 0, c64(0.3, 0.4), &tol).unwrap();
    assert_eq!(rep.remaining_nodes.len(), 1);
    assert!(rep.value_disc.radius > 1e-4);
    assert!((rep.disagreement - 2.0 * rep.value_disc.radius).abs() < 1e-8);
    assert!(rep.f_in_value_disc);

    let f = make_rif(c64(1.0, 0.0), MultiIndex::new(vec![1, 1]), MultiPoly::one(2)).unwrap();
    let rep = sharpness_demo(&f, &default_grid(3, 2), 1, c64(-0.2, 0.5), &tol).unwrap();
    assert_eq!(rep.restricted_degree, 2);
    assert!(rep.verdict.solvable && !rep.verdict.unique);
    assert!(rep.max_interpolation_error < 1e-9);

    let c = make_rif(c64(1.0, 0.0), MultiIndex::zero(2), MultiPoly::one(2)).unwrap();
    assert!(matches!(sharpness_demo(&c, &default_grid(2, 2), 0, c64(0.1, 0.0), &tol), Err(Error::Inapplicable(_))));
}

#[test]
fn sweep_examples() {
    let f = singular();
    let grid = grid_with_diagonal(3);
    let taus = grid.tau_table()[0].clone();
    let params = SweepParams::default();
    let same = equality_sweep(&f, &f, &taus, &params, Execution::default()).unwrap();
    assert_eq!(same.failed_maps, 0);
    assert!(same.max_deviation < 1e-15);

    let g = Pointwise(|a: C64, b: C64| Ok(f.eval(&[a, b])? + a * b * 1e-3));
    let off = equality_sweep(&f, &g, &taus, &params, Execution::default()).unwrap();
    assert!(off.max_deviation >= 1e-4);

    let chain = ChainInterpolant::from_values(&grid, &sample_nodes(&f, &grid).unwrap(), &PickTolerances::default()).unwrap();
    let rep = equality_sweep(&f, &chain, &taus, &params, Execution::default()).unwrap();
    assert_eq!(rep.failed_maps, 0, "{:?}", rep.first_failure);
    assert!(rep.max_deviation <= 1e-7, "{}", rep.max_deviation);
}

#[test]
fn tolerance_profiles() {
    for name in Tolerances::PROFILES {
        Tolerances::profile(name).unwrap().validate().unwrap();
    }
    assert!(Tolerances::profile("nope").is_err());
    let bad = Tolerances { residual: -1.0, ..Tolerances::default() };
    assert!(bad.validate().is_err());
}
