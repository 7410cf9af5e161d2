use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use padic_fundsol::cyclo::Cyclo;
use padic_fundsol::fundsol::DivisionFunctional;
use padic_fundsol::operator::{apply_operator, Beta, SymbolSpec};
use padic_fundsol::padic::Ball;
use padic_fundsol::parse::parse_polynomial;
use padic_fundsol::rational::{q, qf, Q};
use padic_fundsol::sb::{random_sb, Resolution, SBFunction};
use padic_fundsol::zeta::ZetaEngine;

fn sym(p: u64, src: &str, n: usize, beta: Q) -> SymbolSpec {
    SymbolSpec::new(p, parse_polynomial(src, n).unwrap(), Beta::Rational(beta), None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn zeta_is_linear(seed in 0u64..1000, a in -5i64..5, b in 1i64..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = 3;
        let f = parse_polynomial("x1*x2", 2).unwrap();
        let engine = ZetaEngine::new(p, f, None).unwrap();
        let phi = random_sb(&mut rng, p, 2, 8, 1, 2);
        let psi = random_sb(&mut rng, p, 2, 8, 1, 2);
        let (ca, cb) = (Cyclo::from_q(q(a)), Cyclo::from_q(qf(1, b)));
        let combo = phi.scale(&ca).add(&psi.scale(&cb));
        let lhs = engine.zeta_of(&combo, 40).value;
        let rhs = engine.zeta_of(&phi, 40).value.scale(&ca).add(&engine.zeta_of(&psi, 40).value.scale(&cb));
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn pair_t_is_linear(seed in 0u64..1000, beta_num in 1i64..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = 2;
        let t = DivisionFunctional::new(sym(p, "x^2", 1, qf(beta_num, 2)), 40).unwrap();
        let phi = random_sb(&mut rng, p, 1, 10, 1, 4);
        let psi = random_sb(&mut rng, p, 1, 10, 1, 4);
        let two = Cyclo::from_q(q(2));
        let lhs = t.pair_t(&phi.scale(&two).add(&psi)).unwrap().exact.unwrap();
        let a = t.pair_t(&phi).unwrap().exact.unwrap();
        let b = t.pair_t(&psi).unwrap().exact.unwrap();
        let rhs = &a.scale(&q(2)) + &b;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn operator_is_linear_and_translation_invariant(seed in 0u64..1000, shift in 0i64..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = 3;
        let s = sym(p, "x^2+1", 1, q(1));
        let phi = random_sb(&mut rng, p, 1, 6, 1, 2).to_complex();
        let psi = random_sb(&mut rng, p, 1, 6, 1, 2).to_complex();
        let res = Resolution::new(2, 2).unwrap();
        let c = Complex64::new(0.5, -2.0);
        let sum = apply_operator(&s, &phi.scale(&c).add(&psi), 3, Some(res)).unwrap();
        let a = apply_operator(&s, &phi, 3, Some(res)).unwrap();
        let b = apply_operator(&s, &psi, 3, Some(res)).unwrap();
        prop_assert!(sum.exact);
        for i in 0..sum.grid.values.len() {
            prop_assert!((sum.grid.values[i] - (c * a.grid.values[i] + b.grid.values[i])).norm() < 1e-9);
        }
        let shift = [qf(shift, 3)];
        let moved = apply_operator(&s, &phi.translate(&shift).unwrap(), 3, Some(res)).unwrap();
        for i in 0..a.grid.values.len() {
            let x = a.grid.point(i);
            let y: Vec<Q> = x.iter().zip(&shift).map(|(x, a)| x + a).collect();
            let j = moved.grid.flat_of_point(&y).unwrap();
            prop_assert!((a.grid.values[i] - moved.grid.values[j]).norm() < 1e-9);
        }
    }

    #[test]
    fn untwisted_multiplier_is_nonnegative(level in 0i64..3, digits in 0i64..27, beta_num in 1i64..6) {
        let p = 3;
        let s = sym(p, "x^2-3", 1, qf(beta_num, 2));
        let center = Q::from_integer(digits.into()) % Q::from_integer(3i64.pow(level as u32).into());
        let ball = Ball::new(p, vec![center], level).unwrap();
        // Φ with FΦ = 1_B; the result's transform is the symbol restricted to B
        let phi = SBFunction::<Complex64>::indicator(p, ball.clone()).inverse_fourier();
        let r = apply_operator(&s, &phi, 4, None).unwrap();
        let back = r.grid.fourier();
        for (i, v) in back.values.iter().enumerate() {
            prop_assert!(v.im.abs() < 1e-9, "{v}");
            prop_assert!(v.re > -1e-9, "{v}");
            if !ball.contains_point(p, &back.point(i)) {
                prop_assert!(v.norm() < 1e-9);
            }
        }
    }

    #[test]
    fn refinement_is_monotone(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = 3;
        let s = sym(p, "x1^2+x2^2", 2, q(1));
        let phi = random_sb(&mut rng, p, 2, 4, 0, 1).to_complex();
        let mut prev = f64::INFINITY;
        let mut exact_grid: Option<Vec<Complex64>> = None;
        for depth in 0..4 {
            let r = apply_operator(&s, &phi, depth, None).unwrap();
            prop_assert!(r.l2_error_bound <= prev + 1e-15);
            prev = r.l2_error_bound;
            if let Some(g) = exact_grid.take() {
                for (x, y) in g.iter().zip(&r.grid.values) {
                    prop_assert!((x - y).norm() < 1e-12);
                }
            }
            exact_grid = r.exact.then(|| r.grid.values.clone());
        }
    }
}
