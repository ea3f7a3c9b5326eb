use proptest::prelude::*;
use qmarina_core::oracle::{
    collective_operators, memory_kernel, memory_kernel_quadrature, qme_evolve,
    qme_evolve_converged, volterra_evolve, IntegratorConfig, KernelConfig,
};
use qmarina_core::{coefficients, hamming_level_diag, populations, TcParams};

fn grid(t_max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| i as f64 * t_max / (steps - 1) as f64)
        .collect()
}

fn qme_vs_analytic(p: &TcParams, times: Vec<f64>) -> f64 {
    let cfg = IntegratorConfig::new(1e-4, times.clone()).unwrap();
    let out = qme_evolve(p, &cfg).unwrap();
    times
        .iter()
        .zip(&out)
        .map(|(&t, q)| populations(p, t).unwrap().max_abs_diff(q))
        .fold(0.0, f64::max)
}

#[test]
fn single_atom_master_equation_matches_closed_form() {
    let p = TcParams::first_atom_excited(1, 10.0, 5.0).unwrap();
    let worst = qme_vs_analytic(&p, grid(2.0, 101));
    assert!(worst <= 1e-6, "{worst:e}");
}

#[test]
fn two_atom_master_equation_matches_closed_form() {
    let p = TcParams::first_atom_excited(2, 10.0, 5.0).unwrap();
    let worst = qme_vs_analytic(&p, vec![0.0, 0.1]);
    assert!(worst <= 1e-6, "{worst:e}");
}

#[test]
fn mixed_sign_initial_state() {
    let c0 = vec![0.5, -0.5, 0.5, -0.5];
    let p = TcParams::new(4, 3.0, 2.0, c0).unwrap();
    let worst = qme_vs_analytic(&p, grid(1.5, 31));
    assert!(worst <= 1e-6, "{worst:e}");
}

#[test]
fn closed_four_atoms_spread_evenly() {
    let p = TcParams::first_atom_excited(4, 1.0, 0.0).unwrap();
    let t = std::f64::consts::FRAC_PI_2;
    let out = qme_evolve_converged(&p, vec![0.0, t], 1e-8).unwrap();
    let last = &out[1];
    for x in &last.atom_populations {
        assert!((x - 0.25).abs() <= 1e-6);
    }
    assert!(last.ground_population.abs() <= 1e-6);
    assert!((populations(&p, t).unwrap().max_abs_diff(last)) <= 1e-6);
}

#[test]
fn volterra_seven_atoms_strong_coupling() {
    let p = TcParams::first_atom_excited(7, 5.0, 5.0).unwrap();
    let cfg = KernelConfig::for_params(&p).with_time_step(2.5e-4);
    let times = grid(1.0, 101);
    let out = volterra_evolve(&p, &cfg, &times).unwrap();
    for (&t, c) in times.iter().zip(&out) {
        let exact = coefficients(&p, t).unwrap().values;
        for (a, b) in c.values.iter().zip(&exact) {
            assert!((a - b).abs() <= 1e-3, "t = {t}: {a} vs {b}");
        }
    }
}

#[test]
fn volterra_zero_coupling_is_constant() {
    let p = TcParams::new(3, 0.0, 4.0, vec![0.6, 0.0, -0.8]).unwrap();
    let times = grid(3.0, 7);
    for c in volterra_evolve(&p, &KernelConfig::for_params(&p), &times).unwrap() {
        assert_eq!(c.values, p.initial_coeffs());
    }
}

#[test]
fn collective_sz_diagonal_is_hamming_levels() {
    for n in 1..=8 {
        let ops = collective_operators(n).unwrap();
        let diag: Vec<f64> = ops.s_z.diag().to_vec();
        assert_eq!(diag, hamming_level_diag(n).unwrap(), "N = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_closed_form_matches_quadrature(
        g in 0.1f64..10.0,
        kappa in 0.5f64..10.0,
        lag in 0.0f64..=10.0,
    ) {
        let p = TcParams::first_atom_excited(1, g, kappa).unwrap();
        let tau = lag / kappa;
        let exact = memory_kernel(&p, tau).unwrap();
        let quad = memory_kernel_quadrature(&p, tau, &KernelConfig::for_params(&p)).unwrap();
        prop_assert!((quad.re - exact).abs() <= 1e-4 * exact, "{} vs {exact}", quad.re);
        prop_assert!(quad.im.abs() <= 1e-4 * g * g);
    }

    #[test]
    fn master_equation_tracks_closed_form(
        n in 1usize..=5,
        g in 0.0f64..8.0,
        kappa in 0.0f64..8.0,
    ) {
        let p = TcParams::first_atom_excited(n, g, kappa).unwrap();
        let times = grid(1.0, 11);
        let out = qme_evolve_converged(&p, times.clone(), 1e-8).unwrap();
        for (&t, q) in times.iter().zip(&out) {
            prop_assert!((q.total() - 1.0).abs() <= 1e-9);
            prop_assert!(q.channels().all(|x| x >= -1e-10));
            prop_assert!(populations(&p, t).unwrap().max_abs_diff(q) <= 1e-6);
        }
    }
}
