use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mhd2d::diagnostics::{cz_ratio, gn_ratio, positivity_check};
use mhd2d::dynamics::{
    conservative_rhs, primitive_rhs, vorticity_rhs, Checkpoint, InitKind, MHDState, PrimitiveState, Regime,
    SolverConfig,
};
use mhd2d::field::forward;
use mhd2d::harness::run_cmd::format_float;
use mhd2d::harness::{emit_config, parse_config_str, SweepSpec};
use mhd2d::lp::{bony_decompose, build_partition, dyadic_block};
use mhd2d::norms::vector_lp_norm;
use mhd2d::ops::{biot_savart, divergence, fractional_laplacian, gradient};
use mhd2d::random::band_limited_field;
use mhd2d::{SpectralField, TorusGrid};

fn field(n: usize, band: usize, seed: u64) -> SpectralField {
    let g = TorusGrid::new(n).unwrap();
    band_limited_field(&g, band, 1.0, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn state(n: usize, band: usize, seed: u64) -> MHDState {
    let g = TorusGrid::new(n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    MHDState::new(
        0.0,
        band_limited_field(&g, band, 2.0, &mut rng).unwrap(),
        band_limited_field(&g, band, 1.0, &mut rng).unwrap(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transform_round_trip(seed in any::<u64>(), log_n in 3u32..8, frac in 0.1f64..1.0) {
        let n = 1usize << log_n;
        let band = ((n / 2 - 1) as f64 * frac).max(1.0) as usize;
        let f = field(n, band, seed);
        let back = forward(&f.inverse()).unwrap();
        prop_assert!(back.max_mode_difference(&f).unwrap() * f.grid().len() as f64 <= 1e-12 * f.max_abs_coeff());
        let x = f.inverse();
        prop_assert!((x.lp_norm(2.0).powi(2) - f.l2_norm_sq()).abs() <= 1e-12 * f.l2_norm_sq());
    }

    #[test]
    fn biot_savart_is_solenoidal(seed in any::<u64>(), band in 1usize..31) {
        let f = field(64, band, seed);
        let [u1, u2] = biot_savart(&f).unwrap();
        let scale = u1.max_abs_coeff().max(u2.max_abs_coeff());
        prop_assert!(divergence(&u1, &u2).unwrap().max_abs_coeff() <= 1e-13 * scale);
        // ‖∇u‖ = ‖w‖ at p = 2
        let g = [gradient(&u1), gradient(&u2)];
        let grad = vector_lp_norm(&[&g[0][0], &g[0][1], &g[1][0], &g[1][1]], 2.0).unwrap();
        prop_assert!((grad - f.l2_norm()).abs() <= 1e-12 * f.l2_norm());
    }

    #[test]
    fn fractional_laplacian_composes(seed in any::<u64>(), a in -1.0f64..2.0, b in -1.0f64..2.0) {
        prop_assume!(a + b >= -1.0);
        let f = field(32, 12, seed);
        let two = fractional_laplacian(&fractional_laplacian(&f, a).unwrap(), b).unwrap();
        let one = fractional_laplacian(&f, a + b).unwrap();
        prop_assert!(two.max_mode_difference(&one).unwrap() <= 1e-13 * one.max_abs_coeff() / f.grid().len() as f64);
    }

    #[test]
    fn ratios_are_scale_invariant(seed in any::<u64>(), c in 1e-3f64..1e3) {
        let f = field(64, 12, seed);
        let (a, b) = (gn_ratio(&f, 1.6).unwrap(), gn_ratio(&f.scale(c), 1.6).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a);
        let (a, b) = (cz_ratio(&f, 4.0).unwrap(), cz_ratio(&f.scale(c), 4.0).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a);
        prop_assert!((cz_ratio(&f, 2.0).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn positivity_holds(seed in any::<u64>(), alpha in 0.05f64..1.0) {
        let h = field(64, 8, seed);
        let f = h.inverse().map(|v| v * v).forward().unwrap();
        let (lhs, rhs) = positivity_check(&f, 4, alpha).unwrap();
        prop_assert!(lhs <= rhs + 1e-10 * rhs.abs().max(lhs.abs()));
        let (lhs, rhs) = positivity_check(&h, 2, alpha).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn littlewood_paley_reconstruction(seed in any::<u64>()) {
        let f = field(64, 31, seed);
        let p = build_partition(f.grid());
        let mut acc = SpectralField::zeros(f.grid());
        for j in p.range() {
            acc = acc.add(&dyadic_block(&f, j, &p, true)).unwrap();
        }
        prop_assert!(acc.sub(&f).unwrap().l2_norm() <= 1e-12 * f.l2_norm());
        let g = field(64, 21, seed ^ 0x5555);
        prop_assert!(bony_decompose(&f, &g, &p).unwrap().reconstruction_error().unwrap() < 1e-10);
    }

    #[test]
    fn rhs_forms_agree(seed in any::<u64>(), band in 1usize..21) {
        let s = state(64, band, seed);
        let (aw, aj) = vorticity_rhs(&s).unwrap();
        let (cw, cj) = conservative_rhs(&s).unwrap();
        let cfg = SolverConfig { n: 64, nu: 0.0, eta: 0.0, ..Default::default() };
        let (pw, pj) = primitive_rhs(&PrimitiveState::from_state(&s), &cfg).unwrap().curls().unwrap();
        let scale = aw.max_abs_coeff().max(aj.max_abs_coeff()) / 4096.0;
        for (x, y) in [(&aw, &cw), (&aj, &cj), (&aw, &pw), (&aj, &pj)] {
            prop_assert!(x.max_mode_difference(y).unwrap() <= 1e-12 * scale.max(1e-300));
        }
        prop_assert!(aw.mean() == 0.0 && aj.mean() == 0.0);
    }

    #[test]
    fn csv_floats_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(format_float(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
    }

    #[test]
    fn config_round_trip(
        alpha in 0.0f64..2.0,
        beta in 0.0f64..3.0,
        nu in 0.0f64..2.0,
        eta in 0.0f64..2.0,
        dt in 1e-6f64..1e-1,
        seed in any::<u64>(),
        random in any::<bool>(),
    ) {
        let cfg = SolverConfig {
            alpha: if nu == 0.0 { 0.0 } else { alpha },
            beta,
            nu,
            eta,
            dt,
            seed,
            init: if random { InitKind::RandomBand } else { InitKind::OrszagTang },
            ..Default::default()
        };
        let text = emit_config(&cfg);
        prop_assert_eq!(parse_config_str(&text).unwrap(), cfg);
    }

    #[test]
    fn checkpoint_round_trip(seed in any::<u64>(), t in 0.0f64..10.0) {
        let mut s = state(16, 5, seed);
        s.t = t;
        let cp = Checkpoint { state: s, alpha: 0.4, beta: 1.4, nu: 0.3, eta: 0.7 };
        let bytes = cp.to_bytes();
        let back = Checkpoint::from_bytes(&bytes).unwrap();
        prop_assert_eq!(back.to_bytes(), bytes);
        prop_assert_eq!(back.state.t.to_bits(), t.to_bits());
    }

    #[test]
    fn regime_tag_is_a_function_of_parameters(
        alpha in 0.0f64..1.0, beta in 0.5f64..2.0, nu in prop::sample::select(vec![0.0, 0.5]), eta in 0.0f64..1.0,
    ) {
        let r = Regime::classify(alpha, beta, nu, eta);
        prop_assert_eq!(r, Regime::classify(alpha, beta, nu, eta));
        let hits = [
            nu == 0.0 && eta > 0.0 && alpha == 0.0 && beta > 1.5,
            nu > 0.0 && eta > 0.0 && alpha > 0.0 && alpha < 0.5 && beta > 1.25 && beta <= 1.5 && alpha + 2.0 * beta > 3.0,
            nu > 0.0 && eta > 0.0 && alpha >= 0.5 && beta >= 1.0,
        ];
        prop_assert!(hits.iter().filter(|h| **h).count() <= 1);
        let expected = match hits.iter().position(|h| *h) {
            Some(0) => Regime::Theorem11,
            Some(1) => Regime::Theorem12,
            Some(2) => Regime::Theorem51,
            _ => Regime::Outside,
        };
        prop_assert_eq!(r, expected);
    }

    #[test]
    fn sweep_row_count(na in 1usize..5, nb in 1usize..5) {
        let spec = SweepSpec {
            alphas: (0..na).map(|i| i as f64 * 0.2).collect(),
            betas: (0..nb).map(|i| 1.0 + i as f64 * 0.2).collect(),
            base: SolverConfig { nu: 1.0, ..Default::default() },
        };
        prop_assert_eq!(spec.points().len(), na * nb);
    }
}

#[test]
fn regime_boundary_probes() {
    assert_eq!(Regime::classify(0.0, 1.5, 0.0, 1.0), Regime::Outside);
    assert_eq!(Regime::classify(0.0, 1.5 + 1e-9, 0.0, 1.0), Regime::Theorem11);
    assert_eq!(Regime::classify(0.5, 1.0, 1.0, 1.0), Regime::Theorem51);
    assert_eq!(Regime::classify(0.3, 1.4, 1.0, 1.0), Regime::Theorem12);
    assert_eq!(Regime::classify(0.2, 1.4, 1.0, 1.0), Regime::Outside);
}
