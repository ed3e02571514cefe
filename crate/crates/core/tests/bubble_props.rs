use proptest::prelude::*;
use qmorse::bubble::{eval_bubble, pde_residual_at, truncated_bubble, Bubble, Cutoff};

fn point() -> impl Strategy<Value = [f64; 4]> {
    proptest::array::uniform4(-1.0f64..1.0)
}

proptest! {
    #[test]
    fn prop_scaling_law(b in point(), y in point(), lambda in 0.1f64..50.0) {
        let bubble = Bubble::new(b, lambda).unwrap();
        let z: [f64; 4] = std::array::from_fn(|i| lambda * (y[i] - b[i]));
        let lhs = eval_bubble(&bubble, &y);
        let rhs = eval_bubble(&Bubble::unit(), &z) + lambda.ln();
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn prop_truncation_is_exact_inside_rho(a in point(), dir in point(), t in 0.0f64..1.0, lambda in 1.0f64..100.0, rho in 0.01f64..0.5) {
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let x: [f64; 4] = std::array::from_fn(|i| a[i] + t * rho * dir[i] / norm);
        let c = Cutoff::new(rho).unwrap();
        let b = Bubble::new(a, lambda).unwrap();
        prop_assert!((truncated_bubble(&c, &a, lambda, &x) - eval_bubble(&b, &x)).abs() < 1e-12);
    }

    #[test]
    fn prop_cutoff_is_monotone_and_bounded(rho in 0.01f64..1.0, s in 0.0f64..3.0, ds in 0.0f64..0.1) {
        let c = Cutoff::new(rho).unwrap();
        prop_assert!(c.eval(s + ds) >= c.eval(s));
        prop_assert!(c.eval(s) <= 2.0 * rho + 1e-15);
        prop_assert!(c.eval(s) >= s.min(rho));
    }

    #[test]
    fn prop_residual_scale_covariance(y in proptest::array::uniform4(-0.5f64..0.5), lambda in 0.5f64..4.0) {
        let h = 0.02;
        let bl = Bubble::new([0.0; 4], lambda).unwrap();
        let scaled = y.map(|v| v * lambda);
        let lhs = pde_residual_at(&bl, h / lambda, &y);
        let rhs = lambda.powi(4) * pde_residual_at(&Bubble::unit(), h, &scaled);
        prop_assert!((lhs - rhs).abs() < 1e-4 * lambda.powi(4), "{} {}", lhs, rhs);
    }

    #[test]
    fn prop_boundary_bubbles_are_even_in_x4(b in proptest::array::uniform3(-1.0f64..1.0), y in point(), lambda in 0.5f64..20.0) {
        let bubble = Bubble::new([b[0], b[1], b[2], 0.0], lambda).unwrap();
        let mut m = y;
        m[3] = -y[3];
        prop_assert_eq!(eval_bubble(&bubble, &y), eval_bubble(&bubble, &m));
        let mut on = y;
        on[3] = 0.0;
        prop_assert_eq!(bubble.gradient(&on)[3], 0.0);
    }
}
