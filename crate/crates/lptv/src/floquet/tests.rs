use super::*;
use crate::scalar::{q, Rational};
use crate::trigmat::Parity;

fn m(rows: &[&[i64]]) -> Mat<Rational> {
    Mat::from_i64(rows)
}

fn rotation() -> TrigMatrix<Rational> {
    TrigMatrix::zeros(2, 2)
        .with_term(0, 1, Parity::Cos, m(&[&[1, 0], &[0, 1]]))
        .with_term(0, 1, Parity::Sin, m(&[&[0, 1], &[-1, 0]]))
}

/// `R = R0 + ω R1` with entries given as `(x0, x1)` pairs.
fn rotating_r(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> OmegaPolyMatrix<Rational> {
    OmegaPolyMatrix::from_slices(
        2,
        vec![
            m(&[&[a.0 - d.0, c.0 + b.0], &[c.0 - b.0, a.0 + d.0]]),
            m(&[&[a.1 - d.1, c.1 + b.1], &[c.1 - b.1, a.1 + d.1]]),
        ],
    )
}

/// `A = (P R + Ṗ) P⁻¹` for the rotation factor.
fn rotating(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> TrigMatrix<Rational> {
    let p = rotation();
    let r = TrigMatrix::from_omega_poly(&rotating_r(a, b, c, d));
    let num = &p.try_mul(&r).unwrap() + &p.differentiate();
    num.try_mul(&p.inverse_if_const_det().unwrap()).unwrap()
}

#[test]
fn constant_system_has_identity_factor() {
    let a0 = m(&[&[1, 2], &[3, 4]]);
    let a = TrigMatrix::constant(a0.clone());
    let res = residual(&a, &TrigMatrix::identity(2), &OmegaPolyMatrix::constant(a0)).unwrap();
    assert!(res.is_zero());
}

#[test]
fn rotating_family_pair_solves_exactly() {
    let (a, b, c, d) = ((0, 0), (2, 1), (-1, 3), (3, -2));
    let sys = rotating(a, b, c, d);
    assert!(residual(&sys, &rotation(), &rotating_r(a, b, c, d)).unwrap().is_zero());
    assert_eq!(recover_r_exact(&sys, &rotation()).unwrap(), rotating_r(a, b, c, d));
}

#[test]
fn float_recovery_matches_exact() {
    let (a, b, c, d) = ((1, 0), (2, 1), (-1, 3), (3, -2));
    let sys = rotating(a, b, c, d).to_f64();
    let omegas = [0.5, 1.0, 1.5, 2.0];
    let ts = [0.0, 0.3, 0.9, 1.7, 2.2];
    let r = recover_r(&sys, &rotation().to_f64(), &omegas, &ts).unwrap();
    let expect = rotating_r(a, b, c, d).map(|x| Scalar::as_f64(x));
    assert!(r.sub(&expect).max_abs() < 1e-10);
}

#[test]
fn wrong_factor_is_not_constant_in_t() {
    let sys = rotating((0, 0), (2, 1), (-1, 3), (3, -2)).to_f64();
    let wrong = TrigMatrix::identity(2).with_term(0, 1, Parity::Cos, Mat::from_i64(&[&[0, 1], &[0, 0]]));
    let err = recover_r(&sys, &wrong, &[1.0, 2.0], &[0.0, 0.4, 1.3]).unwrap_err();
    assert!(matches!(err, FloquetError::NotConstantInT { .. }));
}

#[test]
fn perturbed_factor_leaves_visible_residual() {
    let (a, b, c, d) = ((0, 0), (2, 1), (-1, 3), (3, -2));
    let sys = rotating(a, b, c, d).to_f64();
    let p = rotation().to_f64().with_term(0, 1, Parity::Cos, Mat::from_fn(2, 2, |i, j| if (i, j) == (0, 1) { 1e-3 } else { 0.0 }));
    let p = &p + &rotation().to_f64();
    let p = p.scale(&0.5);
    let res = residual(&sys, &p, &rotating_r(a, b, c, d).map(|x| Scalar::as_f64(x))).unwrap();
    assert!(res.max_abs() > 1e-4);
}

#[test]
fn shift_removes_trace_and_records_mean() {
    let a = rotating((3, 2), (2, 1), (-1, 3), (3, -2)).with_term(0, 1, Parity::Sin, m(&[&[1, 0], &[0, 1]]));
    let (shifted, shift) = shift_trace(&a).unwrap();
    assert!(shifted.trace().unwrap().is_zero());
    assert_eq!(shift.psi0, OmegaPoly::new(vec![q(3, 1), q(2, 1)]));
    assert!(!shift.psi1.is_zero());
    let f = shifted.to_f64();
    for k in 0..32 {
        let t = 0.37 * k as f64;
        assert!(f.evaluate(1.3, t).trace().abs() < 1e-12);
    }
    let (same, zero) = shift_trace(&rotating((0, 0), (2, 1), (-1, 3), (3, -2))).unwrap();
    assert_eq!(same, rotating((0, 0), (2, 1), (-1, 3), (3, -2)));
    assert!(zero.is_zero());
}

#[test]
fn unshift_adds_mean_trace() {
    let (a, b, c, d) = ((0, 0), (2, 1), (-1, 3), (3, -2));
    let sol = FloquetSolution::from_pair(&rotating(a, b, c, d), rotation(), rotating_r(a, b, c, d)).unwrap();
    let shift = TraceShift { psi0: OmegaPoly::new(vec![q(5, 1), q(-1, 1)]), ..TraceShift::zero() };
    let moved = unshift(sol, &shift);
    assert_eq!(moved.r, rotating_r((5, -1), b, c, d));
    let identity = unshift(moved.clone(), &TraceShift::zero());
    assert_eq!(identity.r, moved.r);
}

#[test]
fn solve_rotating_family_with_trace() {
    let (a, b, c, d) = ((-2, 1), (2, 1), (-1, 3), (3, -2));
    let sys = rotating(a, b, c, d);
    let sol = solve(&sys, &SolveOptions::default()).unwrap();
    assert_eq!(sol.residual_norm, 0.0);
    assert!(sol.residual(&sys).unwrap().is_zero());
    assert_eq!(sol.r.char_poly(), rotating_r(a, b, c, d).char_poly());
    assert_eq!(sol.harmonics, 1);
    assert!(sol.det_p.is_constant());
    assert_eq!(sol.p.at_omega_zero(), Mat::identity(2));
    assert_eq!(sol.r.slice(0), sys.at_omega_zero());
}

#[test]
fn solve_constant_system() {
    let a0 = m(&[&[0, 1], &[-2, -3]]);
    let sol = solve(&TrigMatrix::constant(a0.clone()), &SolveOptions::default()).unwrap();
    assert_eq!(sol.p, TrigMatrix::identity(2));
    assert_eq!(sol.r, OmegaPolyMatrix::constant(a0));
}

#[test]
fn similarity_keeps_residual_and_spectrum() {
    let (a, b, c, d) = ((0, 0), (2, 1), (-1, 3), (3, -2));
    let sys = rotating(a, b, c, d);
    let sol = FloquetSolution::from_pair(&sys, rotation(), rotating_r(a, b, c, d)).unwrap();
    let v = m(&[&[2, 1], &[1, 1]]);
    let moved = similarity_r(&sol, &v).unwrap();
    assert!(moved.residual(&sys).unwrap().is_zero());
    assert_eq!(moved.r.char_poly(), sol.r.char_poly());
    assert!(similarity_r(&sol, &m(&[&[1, 1], &[1, 1]])).is_err());
    let same = similarity_r(&sol, &Mat::identity(2)).unwrap();
    assert_eq!(same.r, sol.r);
}

#[test]
fn similarity_of_system_carries_solutions() {
    let (a, b, c, d) = ((0, 0), (2, 1), (-1, 3), (3, -2));
    let sys = rotating(a, b, c, d);
    let u = m(&[&[1, 2], &[0, 1]]);
    let conj = similarity_a(&sys, &u).unwrap();
    // (U⁻¹P, R) solves U⁻¹AU
    let p = rotation().left_mul(&u.inverse().unwrap());
    assert!(residual(&conj, &p, &rotating_r(a, b, c, d)).unwrap().is_zero());
    assert_eq!(similarity_a(&sys, &Mat::identity(2)).unwrap(), sys);
}

#[test]
fn lemma_checks_pass_and_detect_corruption() {
    let (a, b, c, d) = ((0, 0), (2, 1), (-1, 3), (3, -2));
    let sys = rotating(a, b, c, d);
    let sol = solve(&sys, &SolveOptions::default()).unwrap();
    let report = lemma_checks(&sys, &sol).unwrap();
    assert!(report.all_pass(), "{report:?}");
    let mut bad = sol.clone();
    let eps = q(1, 1000);
    bad.r = bad.r.add_scalar_poly(&OmegaPoly::constant(eps.clone()));
    let report = lemma_checks(&sys, &bad).unwrap();
    assert!(!report.trace_identity);
    assert!((report.trace_identity_error - 2.0 * Scalar::as_f64(&eps)).abs() < 1e-15);

    let lti = TrigMatrix::constant(m(&[&[1, 2], &[3, 4]]));
    let sol = solve(&lti, &SolveOptions::default()).unwrap();
    assert!(lemma_checks(&lti, &sol).unwrap().all_pass());
}

#[test]
fn transition_matrix_composes() {
    let (a, b, c, d) = ((-1, 0), (2, 1), (-1, 3), (3, -2));
    let sys = rotating(a, b, c, d);
    let sol = solve(&sys, &SolveOptions::default()).unwrap();
    let w = 0.8;
    let x = sol.phi(w, 2.0, 0.5).unwrap();
    let y = &sol.phi(w, 2.0, 1.1).unwrap() * &sol.phi(w, 1.1, 0.5).unwrap();
    assert!(linalg::max_abs(&(x - y)) < 1e-10);
}

#[test]
fn sequential_and_parallel_solves_agree() {
    let (a, b, c, d) = ((0, 0), (2, 1), (-1, 3), (3, -2));
    let sys = rotating(a, b, c, d);
    let seq = solve(&sys, &SolveOptions { exec: crate::Exec::Sequential, ..Default::default() }).unwrap();
    let par = solve(&sys, &SolveOptions { exec: crate::Exec::Parallel, ..Default::default() }).unwrap();
    assert_eq!(seq.p, par.p);
    assert_eq!(seq.r, par.r);
}

#[test]
fn float_solve_of_rotating_family() {
    let (a, b, c, d) = ((-2, 1), (2, 1), (-1, 3), (3, -2));
    let sys = rotating(a, b, c, d).to_f64();
    let sol = solve(&sys, &SolveOptions::default()).unwrap();
    assert!(sol.residual_norm < 1e-9);
    let expect = rotating_r(a, b, c, d).map(|x| Scalar::as_f64(x));
    let (cp, ce) = (sol.r.char_poly(), expect.char_poly());
    for (x, y) in cp.iter().zip(&ce) {
        assert!(x.sub(y).coeffs().iter().all(|v| v.abs() < 1e-9));
    }
}
