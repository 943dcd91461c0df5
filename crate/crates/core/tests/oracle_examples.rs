use std::f64::consts::PI;

use pdm_core::oracle::{
    convergence_study, discretize_constant_mass, discretize_pdm, lowest_eigenpairs, lowest_eigenvalues,
    ConstantMassProblem, Grid, OracleProblem, PdmProblem,
};
use pdm_core::reference::{KratzerParams, MorseParams, Reference};
use pdm_core::{Interval, MassProfile, TargetProblem};

fn kratzer(de: f64, ell: u32) -> Reference {
    Reference::Kratzer(KratzerParams::new(de, 1.0, ell).unwrap())
}

fn morse(ell: u32) -> Reference {
    Reference::Morse(MorseParams::new(8.0, 1.0, 1.0, ell).unwrap())
}

#[test]
fn box_ground_state_is_second_order() {
    let exact = PI * PI / 2.0;
    let err = |n| {
        let g = Grid::new(0.0, 1.0, n).unwrap();
        let op = discretize_constant_mass(&|_| 0.0, &g, 1.0).unwrap();
        (lowest_eigenvalues(&op, 1).unwrap()[0] - exact).abs()
    };
    let (coarse, fine) = (err(201), err(401));
    assert!(fine < 1e-4);
    assert!((coarse / fine - 4.0).abs() < 0.05);
}

#[test]
fn oscillator_on_twelve() {
    let g = Grid::new(-12.0, 12.0, 4000).unwrap();
    let op = discretize_constant_mass(&|x| 0.5 * x * x, &g, 1.0).unwrap();
    assert!((lowest_eigenvalues(&op, 1).unwrap()[0] - 0.5).abs() < 1e-5);
}

#[test]
fn kratzer_ground_state_on_sixty() {
    let p = ConstantMassProblem::from_reference(kratzer(1.0, 0), Interval::new(0.0, 60.0)).unwrap();
    let op = p.assemble(&p.grid(4000).unwrap()).unwrap();
    assert!((lowest_eigenvalues(&op, 1).unwrap()[0] - 0.5).abs() < 1e-5);
}

#[test]
fn morse_times_exponential_ground_state() {
    let tp = TargetProblem::new(morse(0), MassProfile::exponential(1.0).unwrap()).unwrap();
    let p = PdmProblem::new(tp, 0, 1e-10).unwrap();
    let op = p.assemble(&p.grid(4000).unwrap()).unwrap();
    assert!((lowest_eigenvalues(&op, 1).unwrap()[0] + 6.125).abs() < 1e-4);
}

#[test]
fn box_size_does_not_matter_once_converged() {
    // same spacing, twice the box
    let p = ConstantMassProblem::for_states(kratzer(1.0, 0), 2, 1e-10).unwrap();
    let w = p.window();
    let h = w.width() / 3999.0;
    let small = Grid::new(w.lo, w.hi, 4000).unwrap();
    let large = Grid::new(w.lo, w.lo + 7998.0 * h, 7999).unwrap();
    let a = lowest_eigenvalues(&p.assemble(&small).unwrap(), 3).unwrap();
    let b = lowest_eigenvalues(&p.assemble(&large).unwrap(), 3).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-8, "{x} vs {y}");
    }
}

#[test]
fn eigenvectors_follow_the_analytic_states() {
    let r = morse(0);
    let p = ConstantMassProblem::for_states(r, 2, 1e-10).unwrap();
    let g = p.grid(8001).unwrap();
    let pairs = lowest_eigenpairs(&p.assemble(&g).unwrap(), 3).unwrap();
    for (n, pair) in pairs.iter().enumerate() {
        let state = r.bound_state(n).unwrap();
        let worst = g
            .interior()
            .iter()
            .zip(&pair.vector)
            .map(|(&y, v)| (state.eval(y) - v).abs())
            .fold(0.0f64, f64::max);
        assert!(worst < 1e-3, "n={n}: {worst}");
    }
}

#[test]
fn pekeris_gap_against_frozen_exact_values() {
    // ground states of the exact centrifugal well, fine-grid Richardson
    // estimates from an independent dense eigensolver
    for (ell, exact) in [(1u32, -5.250588454160292), (2, -3.9992550000640397)] {
        let p = MorseParams::new(8.0, 1.0, 1.0, ell).unwrap();
        let sup = Reference::Morse(p).support(0, 1e-12).unwrap();
        let w = Interval::new(sup.lo.max(-0.999), sup.hi.max(40.0));
        let prob = ConstantMassProblem::morse_exact_centrifugal(p, w).unwrap();
        let rep = convergence_study(&prob, &[4001, 8001, 16001], 1).unwrap();
        let e = rep.records[0].e_extrapolated;
        assert!((e - exact).abs() < 1e-6 * exact.abs(), "ℓ={ell}: {e} vs {exact}");
        assert!(!rep.records[0].order_flagged);
    }
}

#[test]
fn uniform_pdm_reproduces_constant_mass_bit_for_bit() {
    for r in [kratzer(1.0, 2), morse(1)] {
        let tp = TargetProblem::new(r, MassProfile::Uniform).unwrap();
        let w = if let Reference::Kratzer(_) = r { Interval::new(0.0, 60.0) } else { Interval::new(-3.0, 30.0) };
        let g = Grid::new(w.lo, w.hi, 1001).unwrap();
        let pdm = discretize_pdm(&tp, &g).unwrap();
        let cm = discretize_constant_mass(&|y| r.potential(y), &g, 1.0).unwrap();
        assert_eq!(pdm, cm);
    }
}

#[test]
fn verification_report_csv_and_json() {
    let p = ConstantMassProblem::for_states(kratzer(1.0, 0), 1, 1e-10).unwrap();
    let rep = convergence_study(&p, &[1000, 2000, 4000], 2).unwrap();
    let csv = rep.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,ell,E_analytic,E_numeric,abs_err,rel_err,residual,order");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0,0,5.00000000000e-1,"));
    let json = serde_json::to_value(&rep).unwrap();
    assert_eq!(json["records"].as_array().unwrap().len(), 2);
}
