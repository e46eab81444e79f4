use proptest::prelude::*;

use sgweno::combine::{combination_coefficients, combine, CombinationSet, Family};
use sgweno::grid::{Boundary, DomainBox, GridField, GridGeometry, LevelIndex};
use sgweno::interp::{
    interp_smoothness, lagrange_interp5, linear_interp_weights, weno_interp5, weno_interp_weights, InterpStencil,
    Prolongation,
};
use sgweno::models::{burgers_exact, conservation_law_rhs, ScalarConservationLaw, SineProfile};
use sgweno::timestep::ssp_rk3_step;
use sgweno::weno::{
    flux_weights, lax_friedrichs_split, smoothness_indicators, weno5_flux_negative, weno5_flux_positive, WeightMode,
    WenoParams,
};

fn value() -> impl Strategy<Value = f64> {
    -10.0f64..10.0
}

fn stencil() -> impl Strategy<Value = [f64; 5]> {
    [value(), value(), value(), value(), value()]
}

fn offset() -> impl Strategy<Value = f64> {
    -0.5f64..0.5
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

fn periodic(d: usize, nr: usize, level: LevelIndex) -> GridGeometry {
    GridGeometry::uniform(DomainBox::cube(d, 0.0, 4.0).unwrap(), nr, level, Boundary::Periodic).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn flux_weights_are_a_partition_of_unity(s in stencil(), tiny in prop::bool::ANY) {
        let eps = if tiny { 1e-10 } else { 1e-6 };
        let w = flux_weights(&s, &WenoParams::new(eps, WeightMode::Nonlinear).unwrap());
        prop_assert!(w.iter().all(|&x| x >= 0.0));
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn interpolation_weights_are_a_partition_of_unity(u in stencil(), xi in offset(), tiny in prop::bool::ANY) {
        let eps = if tiny { 1e-10 } else { 1e-6 };
        let c = linear_interp_weights(xi).unwrap();
        prop_assert!(c.iter().all(|&x| x > 0.0));
        prop_assert!((c.iter().sum::<f64>() - 1.0).abs() <= 1e-14);
        let w = weno_interp_weights(&u, xi, eps);
        prop_assert!(w.iter().all(|&x| x >= 0.0));
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn negative_wind_mirrors_positive_wind(s in stencil(), linear in prop::bool::ANY) {
        let p = if linear { WenoParams::linear() } else { WenoParams::default() };
        let r = [s[4], s[3], s[2], s[1], s[0]];
        prop_assert_eq!(weno5_flux_negative(&s, &p).to_bits(), weno5_flux_positive(&r, &p).to_bits());
    }

    #[test]
    fn splitting_recovers_the_flux(f in value(), u in value(), alpha in 0.0f64..10.0) {
        let (fp, fm) = lax_friedrichs_split(f, u, alpha);
        prop_assert!((fp + fm - f).abs() <= 4.0 * f64::EPSILON * (f.abs() + alpha * u.abs()));
    }

    #[test]
    fn interpolation_and_flux_indicators_agree(a in value(), b in value(), c in value()) {
        // Substencil 1 of the interpolant and substencil 1 of the flux see the same three values.
        let bi = interp_smoothness(&[0.0, a, b, c, 0.0])[1];
        let bf = smoothness_indicators(&[0.0, a, b, c, 0.0])[1];
        prop_assert!((bi - bf).abs() <= 1e-14 * bi.abs().max(1.0));
    }

    #[test]
    fn lagrange_interpolation_is_exact_for_quartics(c in prop::array::uniform5(-1.0f64..1.0), xi in offset()) {
        let u = [-2.0, -1.0, 0.0, 1.0, 2.0].map(|x| poly(&c, x));
        let got = lagrange_interp5(&InterpStencil::new(u, 1.0, xi).unwrap());
        let scale = u.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
        prop_assert!((got - poly(&c, xi)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn weno_interpolation_is_exact_for_quadratics(c in prop::array::uniform3(-1.0f64..1.0), xi in offset()) {
        let u = [-2.0, -1.0, 0.0, 1.0, 2.0].map(|x| poly(&c, x));
        let got = weno_interp5(&InterpStencil::new(u, 1.0, xi).unwrap(), 1e-6);
        let scale = u.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
        prop_assert!((got - poly(&c, xi)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn linear_flux_is_exact_for_quartic_primitives(c in prop::array::uniform5(-1.0f64..1.0)) {
        // Point values f_j are cell averages of the quartic H over [j - 1/2, j + 1/2];
        // the reconstruction at 1/2 must return H(1/2).
        let antider: Vec<f64> = std::iter::once(0.0).chain(c.iter().enumerate().map(|(k, a)| a / (k + 1) as f64)).collect();
        let avg = |j: f64| poly(&antider, j + 0.5) - poly(&antider, j - 0.5);
        let f = [-2.0, -1.0, 0.0, 1.0, 2.0].map(avg);
        let got = weno5_flux_positive(&f, &WenoParams::linear());
        let scale = f.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
        prop_assert!((got - poly(&c, 0.5)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn coefficients_follow_the_binomial_pattern(nl in 3u32..7) {
        prop_assert_eq!(combination_coefficients(2, nl).unwrap().values(), vec![1, -1]);
        prop_assert_eq!(combination_coefficients(3, nl).unwrap().values(), vec![1, -2, 1]);
        prop_assert_eq!(combination_coefficients(4, nl).unwrap().values(), vec![1, -3, 3, -1]);
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn combination_preserves_constants(
        d in 2usize..4,
        nr in 6usize..10,
        nl in 0u32..3,
        c in value(),
        weno in prop::bool::ANY,
    ) {
        let nl = nl + d as u32 - 1;
        let finest = periodic(d, nr, LevelIndex::uniform(d, nl));
        let set: CombinationSet = Family::sparse(finest, |g| Ok(GridField::constant(g, c))).unwrap();
        let mode = if weno { Prolongation::Weno } else { Prolongation::Lagrange };
        let u = combine(&set, mode, 1e-6).unwrap();
        prop_assert!(u.as_slice().iter().all(|v| (v - c).abs() <= 1e-13 * c.abs().max(1.0)));
    }

    #[test]
    fn lagrange_combination_is_linear(a in value(), b in value(), seed in 0u64..1000) {
        let finest = periodic(2, 8, LevelIndex::uniform(2, 2));
        let wave = |s: f64| move |x: &[f64]| (x[0] + s).sin() * (0.5 * x[1] - s).cos() + 0.1 * s * x[0];
        let s = seed as f64 * 0.01;
        let u: CombinationSet = Family::sparse(finest.clone(), |g| Ok(GridField::restrict(g, wave(s)))).unwrap();
        let v: CombinationSet = Family::sparse(finest.clone(), |g| Ok(GridField::restrict(g, wave(s + 1.0)))).unwrap();
        let w: CombinationSet = Family::sparse(finest, |g| {
            let (fu, fv) = (GridField::restrict(g.clone(), wave(s)), GridField::restrict(g.clone(), wave(s + 1.0)));
            GridField::new(g, fu.values() * a + fv.values() * b)
        }).unwrap();
        let cu = combine(&u, Prolongation::Lagrange, 1e-6).unwrap();
        let cv = combine(&v, Prolongation::Lagrange, 1e-6).unwrap();
        let cw = combine(&w, Prolongation::Lagrange, 1e-6).unwrap();
        for ((x, y), z) in cu.as_slice().iter().zip(cv.as_slice()).zip(cw.as_slice()) {
            prop_assert!((a * x + b * y - z).abs() <= 1e-12 * (a.abs() + b.abs()).max(1.0));
        }
    }

    #[test]
    fn periodic_steps_conserve_mass(
        values in prop::collection::vec(-2.0f64..2.0, 12 * 10),
        burgers in prop::bool::ANY,
        dt in 1e-3f64..2e-2,
    ) {
        let g = GridGeometry::new(
            DomainBox::cube(2, 0.0, 1.0).unwrap(),
            vec![12, 10],
            LevelIndex::uniform(2, 0),
            vec![Boundary::Periodic; 2],
        ).unwrap();
        let u = GridField::new(g.clone(), ndarray::ArrayD::from_shape_vec(g.shape(), values).unwrap()).unwrap();
        let law = if burgers { ScalarConservationLaw::burgers(2) } else { ScalarConservationLaw::advection(2) };
        let p = WenoParams::default();
        let next = ssp_rk3_step(&u, |s| conservation_law_rhs(s, &law, &p), dt).unwrap();
        let before: f64 = u.as_slice().iter().sum();
        let after: f64 = next.as_slice().iter().sum();
        let scale: f64 = u.as_slice().iter().map(|v| v.abs()).sum();
        prop_assert!((after - before).abs() <= 1e-11 * scale);
    }

    #[test]
    fn burgers_root_solves_the_implicit_relation(xi in -10.0f64..10.0, t in 0.0f64..0.3, d in 1usize..4) {
        let profile = SineProfile { mean: 1.0, amplitude: 0.5, wavenumber: 1.0 };
        let u = burgers_exact(&profile, xi, d, t).unwrap();
        let residual = u - 1.0 - 0.5 * (xi - d as f64 * t * u).sin();
        prop_assert!(residual.abs() <= 1e-13);
    }
}
