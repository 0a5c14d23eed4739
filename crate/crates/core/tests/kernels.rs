use num_complex::Complex64;
use proptest::prelude::*;
use unimodular::degree::PhaseLift;
use unimodular::kernels::{
    angle_grid, delta_ns, gs_eval, ij_sums, jn_bound_check, kns, kns_complex, kns_table, KernelSpec,
};
use unimodular::FourierCoeffs;

#[test]
fn multiplier_examples() {
    let k = KernelSpec::new(8, 0.5).unwrap();
    assert_eq!(delta_ns(&k, 4), 4.0);
    assert_eq!(delta_ns(&k, 0), 0.0);
    assert_eq!(delta_ns(&k, -3), 0.0);
    assert_eq!(delta_ns(&k, 32), 0.0);
    for n in 1..=8 {
        assert!((delta_ns(&k, n) - n as f64).abs() < 1e-12);
    }
    assert!((21..32).all(|n| delta_ns(&k, n) > 0.0));
}

#[test]
fn blend_joins_smoothly() {
    for s in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let k = KernelSpec::new(16, s).unwrap();
        let h = 1e-6;
        let (l, r) = (gs_eval(&k, 1.0 - h), gs_eval(&k, 1.0 + h));
        assert!((l - r).abs() < 1e-5, "{s}");
        assert!((gs_eval(&k, 1.0) - 1.0).abs() < 1e-12);
        assert!((0..=100).all(|i| gs_eval(&k, i as f64 / 100.0) > 0.0));
        assert_eq!(gs_eval(&k, 2.5), 0.0);
    }
}

#[test]
fn kernel_is_real_and_decays() {
    for (n, s) in [(16, 0.25), (32, 0.5), (64, 0.75)] {
        let spec = KernelSpec::new(n, s).unwrap();
        let table = kns_table(&spec, &angle_grid(32 * n as usize)).unwrap();
        assert!(table.max_imag() < 1e-9);
        assert!(
            table.fitted_c.is_finite() && table.fitted_c < 10.0,
            "{}",
            table.fitted_c
        );
        assert!(table.bounded_by(table.fitted_c));
        let t = 0.3;
        assert!((kns(&spec, t) - kns_complex(&spec, t).re).abs() < 1e-9);
    }
}

#[test]
fn fitted_constant_is_stable_in_n() {
    let c: Vec<f64> = [16u64, 32, 64, 128]
        .iter()
        .map(|&n| {
            kns_table(
                &KernelSpec::new(n, 0.5).unwrap(),
                &angle_grid(32 * n as usize),
            )
            .unwrap()
            .fitted_c
        })
        .collect();
    let (lo, hi) = (
        c.iter().copied().fold(f64::MAX, f64::min),
        c.iter().copied().fold(0.0, f64::max),
    );
    assert!(hi / lo - 1.0 < 0.15, "{c:?}");
}

#[test]
fn i_and_j_sums() {
    let spec = KernelSpec::new(4, 0.5).unwrap();
    let c = FourierCoeffs::from_pairs([
        (2, Complex64::new(1.0, 0.0)),
        (-16, Complex64::new(0.0, 0.0)),
    ]);
    let p = ij_sums(&c, &spec).unwrap();
    assert_eq!((p.i, p.j, p.low_band), (2.0, 2.0, 2.0));
    assert!(ij_sums(&FourierCoeffs::mode(1).with_bandwidth(8), &spec).is_err());
}

#[test]
fn symmetric_phase_gives_vanishing_j() {
    let n = 1024;
    let phi: Vec<f64> = (0..n)
        .map(|j| 0.3 * (std::f64::consts::TAU * j as f64 / n as f64).cos())
        .collect();
    let r = jn_bound_check(
        &PhaseLift::from_values(phi, 0),
        &KernelSpec::new(16, 0.5).unwrap(),
    )
    .unwrap();
    assert!(r.j_integral.abs() < 1e-10 && r.j_spectral.abs() < 1e-10);
    assert!(r.agreement < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn j_is_cubically_controlled(a in -0.3f64..0.3, b in -0.3f64..0.3, c in -0.3f64..0.3) {
        let n = 512;
        let phi: Vec<f64> = (0..n).map(|j| {
            let t = std::f64::consts::TAU * j as f64 / n as f64;
            a * t.sin() + b * (2.0 * t).cos() + c * (3.0 * t).sin()
        }).collect();
        let r = jn_bound_check(&PhaseLift::from_values(phi, 0), &KernelSpec::new(8, 0.5).unwrap()).unwrap();
        prop_assert!(r.agreement < 1e-8);
        prop_assert!(r.ratio < 50.0);
    }
}
