mod common;

use approx::assert_relative_eq;
use sleig::basis::{basis_coefficients, basis_endpoint_values, kappa_flags};
use sleig::chebyshev::chebyshev_fit;
use sleig::moments::{moment_oracle, moments, moments_general, weight_mass};
use sleig::quadrature::GaussJacobi;
use sleig::{BoundaryConditions, ExponentPair};

use common::{bc, closed_form, NAMED_BCS};

#[test]
fn closed_form_rows_up_to_degree_200() {
    for name in NAMED_BCS {
        for n in 0..=200 {
            let c = basis_coefficients(&bc(name), n).unwrap();
            let want = closed_form(name, n);
            for (got, want) in [c.xi, c.eta, c.theta].into_iter().zip(want) {
                assert!((got - want).abs() <= 1e-13, "{name} n={n}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn large_degree_asymptotics() {
    for name in NAMED_BCS {
        let b = bc(name);
        for n in [1_000usize, 10_000] {
            let c = basis_coefficients(&b, n).unwrap();
            let nf = n as f64;
            assert_eq!(c.xi, 1.0);
            assert!((c.theta + 1.0).abs() <= 4.0 / nf, "{name}: theta {}", c.theta);
            if b.is_symmetric() {
                assert_eq!(c.eta, 0.0);
            } else if b.beta_l * b.beta_r == 0.0 {
                assert!(c.eta.abs() <= 4.0 / nf, "{name}: eta {}", c.eta);
            } else {
                assert!(c.eta.abs() <= 8.0 / nf.powi(3), "{name}: eta {}", c.eta);
            }
            let f = basis_endpoint_values(&c);
            let scale = (nf + 1.5) / 4.0;
            if f.left != 0.0 {
                assert!(((c.xi - c.eta + c.theta) * scale - 1.0).abs() <= 10.0 / nf, "{name} left");
            }
            if f.right != 0.0 {
                assert!(((c.xi + c.eta + c.theta) * scale - 1.0).abs() <= 10.0 / nf, "{name} right");
            }
            assert!(((c.xi - c.theta) / 2.0 - 1.0).abs() <= 10.0 / nf);
        }
    }
}

#[test]
fn functionals_vanish_to_degree_500() {
    for name in NAMED_BCS {
        let b = bc(name);
        for n in 0..=500 {
            let v = basis_endpoint_values(&basis_coefficients(&b, n).unwrap());
            let tol = 1e-12 * ((n + 2) as f64).powi(2);
            assert!((b.alpha_l * v.left + b.beta_l * v.d_left).abs() <= tol, "{name} n={n} left");
            assert!((b.alpha_r * v.right + b.beta_r * v.d_right).abs() <= tol, "{name} n={n} right");
        }
    }
}

#[test]
fn kappa_marks_pure_dirichlet_sides() {
    for name in NAMED_BCS {
        let b = bc(name);
        let k = kappa_flags(&b);
        assert_eq!(k.kappa_minus == 1, b.beta_l == 0.0, "{name}");
        assert_eq!(k.kappa_plus == 1, b.beta_r == 0.0, "{name}");
        // robin n = 0 has a double zero at -1 by coincidence
        for n in [1, 3, 17] {
            let v = basis_endpoint_values(&basis_coefficients(&b, n).unwrap());
            assert_eq!(k.kappa_minus == 1, v.left.abs() < 1e-14, "{name} n={n}");
            assert_eq!(k.kappa_plus == 1, v.right.abs() < 1e-14, "{name} n={n}");
        }
    }
    let dn = kappa_flags(&BoundaryConditions::dirichlet_neumann());
    assert_eq!((dn.kappa_minus, dn.kappa_plus), (1, 0));
}

#[test]
fn equal_exponents_give_exact_odd_zeros() {
    for g in [0.25, 0.5, 0.75, -0.3] {
        let q = moments(ExponentPair::new(g, g).unwrap(), 41).unwrap().values;
        assert!(q.iter().skip(1).step_by(2).all(|&v| v == 0.0));
    }
}

#[test]
fn moments_decay_past_small_index() {
    for (b, g) in [(0.75, 0.25), (0.5, 0.875), (0.3, 0.3)] {
        let q = moments(ExponentPair::new(b, g).unwrap(), 200).unwrap().values;
        // with β ≠ γ the two endpoints interfere with alternating sign, so
        // each parity class is monotone on its own
        for start in [10, 11] {
            let tail: Vec<f64> = q.iter().skip(start).step_by(2).map(|v| v.abs()).collect();
            assert!(tail.windows(2).all(|w| w[1] <= w[0]), "({b}, {g})");
        }
    }
}

#[test]
fn first_moment_on_every_path() {
    for (b, g) in [(0.0, 0.0), (0.5, 0.0), (0.0, 0.3), (0.75, 0.75), (0.75, 0.25), (-0.5, 0.875)] {
        let e = ExponentPair::new(b, g).unwrap();
        let alpha = weight_mass(e);
        assert_relative_eq!(moments(e, 4).unwrap().values[0], alpha, max_relative = 1e-14);
        assert_relative_eq!(moments_general(e, 4).unwrap().values[0], alpha, max_relative = 1e-14);
    }
}

#[test]
fn three_quarter_quarter_against_oracle() {
    let e = ExponentPair::new(0.75, 0.25).unwrap();
    let q = moments(e, 20).unwrap().values;
    for (m, v) in q.iter().enumerate() {
        let o = moment_oracle(e, m);
        assert!((v - o).abs() <= 1e-12 * o.abs().max(1e-3), "m={m}: {v} vs {o}");
    }
}

/// `⟨P_m, g⟩` through `g(H)` against Gauss-Jacobi with `P_m g` as integrand.
#[test]
fn g_of_h_applied_to_singular_moments() {
    let g = |x: f64| 10.0 * (1.0 - x).exp();
    let fit = chebyshev_fit(&g).unwrap();
    let n = 40;
    let e = ExponentPair::new(0.75, 0.25).unwrap();
    let len = 2 * n + 3 + fit.degree() + 2;
    let q1 = moments(e, len - 1).unwrap().values;
    let out = sleig::assembly::apply_g_of_h(&fit, &q1, 2 * n + 3).unwrap();
    let rule = GaussJacobi::new(80, -0.75, -0.25);
    for m in 0..2 * n + 2 {
        let o = rule.integrate(|x| sleig::moments::legendre_p(m, x) * g(x));
        assert!((out[m] - o).abs() <= 1e-11 * o.abs().max(1.0), "m={m}: {} vs {o}", out[m]);
    }
}
