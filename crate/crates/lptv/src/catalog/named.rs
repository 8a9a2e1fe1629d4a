//! Hill-type equations, the rotating family and the 3×3 example.

use nalgebra::DMatrix;
use num::complex::Complex64;

use super::*;

/// `[[cos ωt, sin ωt], [−sin ωt, cos ωt]]`.
fn rotation() -> TrigMatrix<Rational> {
    grid(vec![
        vec![vec![co(rat(1, 1), 1)], vec![si(rat(1, 1), 1)]],
        vec![vec![si(rat(-1, 1), 1)], vec![co(rat(1, 1), 1)]],
    ])
}

/// Rotating family with `a = a0 + ω a1` and likewise for `b, c, d`:
/// `A = a I + b J + c S(2ωt) + d D(2ωt)`, `P` a rotation by `ωt` and
/// `R = [[a − d, c + b − ω], [c − b + ω, a + d]]`.
pub fn wu_row_h(a: [&Rational; 2], b: [&Rational; 2], c: [&Rational; 2], d: [&Rational; 2]) -> CatalogEntry {
    let r0 = Mat::from_rows(vec![
        vec![a[0].clone() - d[0].clone(), c[0].clone() + b[0].clone()],
        vec![c[0].clone() - b[0].clone(), a[0].clone() + d[0].clone()],
    ]);
    let r1 = Mat::from_rows(vec![
        vec![a[1].clone() - d[1].clone(), c[1].clone() + b[1].clone() - rat(1, 1)],
        vec![c[1].clone() - b[1].clone() + rat(1, 1), a[1].clone() + d[1].clone()],
    ]);
    let r = omega_linear(r0, r1);
    let p = rotation();
    let sys = generate_from_pair(&p, &r).expect("rotation has unit determinant");
    let mut e = CatalogEntry::new("row-h", "rotating family with ω-linear coefficients", SystemMatrix::Series(sys))
        .with_pair(KnownP::Series(p), r)
        .case(4);
    for (name, v) in [("a0", a[0]), ("a1", a[1]), ("b0", b[0]), ("b1", b[1]), ("c0", c[0]), ("c1", c[1])] {
        e = e.param(name, v);
    }
    e.param("d0", d[0]).param("d1", d[1])
}

/// `A = [[−1 + a cos², 1 − a sin cos], [−1 − a sin cos, −1 + a sin²]]` at
/// frequency ω.
pub fn markus_yamabe(a: &Rational) -> CatalogEntry {
    let half = a.clone() / rat(2, 1);
    let zero = rat(0, 1);
    let mut e = wu_row_h(
        [&(half.clone() - rat(1, 1)), &zero],
        [&rat(1, 1), &zero],
        [&zero, &zero],
        [&(-half), &zero],
    );
    e.id = "markus-yamabe".to_string();
    e.description = "Markus–Yamabe system with free frequency".to_string();
    e.params.clear();
    e.param("a", a)
}

/// [`markus_yamabe`] at `ω = 1`, where `R = [[β − 1, 0], [0, −1]]`.
pub fn aggarwal_infante(beta: &Rational) -> CatalogEntry {
    let mut e = markus_yamabe(beta);
    e.id = "aggarwal-infante".to_string();
    e.description = "Markus–Yamabe system at unit frequency".to_string();
    e.params.clear();
    e.fixed_omega = Some(rat(1, 1));
    e.param("beta", beta)
}

/// Rotating family with `a = −5.5, b = 6, c = 6, d = 4.5` at `ω = 6`.
pub fn rosenbrock() -> CatalogEntry {
    let zero = rat(0, 1);
    let mut e = wu_row_h([&rat(-11, 2), &zero], [&rat(6, 1), &zero], [&rat(6, 1), &zero], [&rat(9, 2), &zero]);
    e.id = "rosenbrock".to_string();
    e.description = "Rosenbrock's unstable system with stable frozen eigenvalues".to_string();
    e.fixed_omega = Some(rat(6, 1));
    e.params.retain(|k, _| k.ends_with('0'));
    e
}

/// 3×3 system built from `P` with `det P = 1` and an ω-linear `R`.
pub fn example_3x3() -> CatalogEntry {
    let h = rat(1, 2);
    let p = grid(vec![
        vec![
            vec![co(rat(1, 1), 1), si(rat(-1, 1), 1), si(h.clone(), 2)],
            vec![si(rat(1, 1), 1)],
            vec![k(h.clone()), co(rat(-1, 1), 1), si(rat(-1, 1), 1), co(h.clone(), 2)],
        ],
        vec![vec![k(h.clone()), co(-h.clone(), 2)], vec![co(rat(1, 1), 1)], vec![si(h.clone(), 2)]],
        vec![vec![si(h.clone(), 2)], vec![si(rat(-1, 1), 1)], vec![k(h.clone()), co(h, 2)]],
    ]);
    let r = omega_linear(
        Mat::from_i64(&[&[75, -17, -112], &[99, -22, -143], &[35, -8, -53]]),
        Mat::from_i64(&[&[-1, 2, 3], &[1, 0, 3], &[1, 2, 1]]),
    );
    let sys = generate_from_pair(&p, &r).expect("det P = 1");
    CatalogEntry::new("example-3x3", "3×3 system with harmonics up to 5", SystemMatrix::Series(sys))
        .with_pair(KnownP::Series(p), r)
        .case(4)
        .note(
            "A = (Ṗ + P R) P⁻¹ exactly; relative to the printed coefficient tables this flips or fixes seven entries \
             (A⁰ cos 2ωt (1,1) = −836/8, A⁰ cos 2ωt (2,2) = 588/8, A⁰ sin 3ωt (2,2) = −24/8, A⁰ sin 5ωt (2,2) = \
             −128/8, A¹ cos 2ωt (1,2) = −4/8, A¹ cos 3ωt (2,0) = 8/8, A¹ sin 5ωt (1,2) = −4/8)",
        )
}

fn second_order(lower_left: TrigMatrix<Rational>, damping: Rational) -> TrigMatrix<Rational> {
    assert_eq!((lower_left.rows(), lower_left.cols()), (1, 1), "scalar coefficient expected");
    let mut out = TrigMatrix::constant(Mat::from_rows(vec![vec![rat(0, 1), rat(1, 1)], vec![rat(0, 1), damping]]));
    for (r, l, parity, m) in lower_left.terms() {
        let mut block = Mat::zeros(2, 2);
        block[(1, 0)] = m[(0, 0)].clone();
        out.add_term(r, l, parity, &block);
    }
    out
}

/// `ÿ + (a − 2q ψ(t)) y = 0` in first-order form.
pub fn hill(a: &Rational, q: &Rational, psi: &TrigMatrix<Rational>) -> CatalogEntry {
    let two_q = q.clone() * rat(2, 1);
    let ll = psi.scale(&two_q).try_sub(&TrigMatrix::constant(Mat::diag(&[a.clone()]))).expect("1×1");
    CatalogEntry::new("hill", "Hill equation", SystemMatrix::Series(second_order(ll, rat(0, 1))))
        .case(3)
        .param("a", a)
        .param("q", q)
}

/// Hill equation with `ψ = cos ωt`.
pub fn mathieu(a: &Rational, q: &Rational) -> CatalogEntry {
    let psi = TrigMatrix::zeros(1, 1).with_term(0, 1, Parity::Cos, Mat::identity(1));
    let mut e = hill(a, q, &psi);
    e.id = "mathieu".to_string();
    e.description = "Mathieu equation".to_string();
    e
}

/// Hill equation with a square-wave `ψ`: `+1` on the first half period,
/// `−1` on the second.
pub fn meissner(a: &Rational, q: &Rational) -> CatalogEntry {
    let (af, qf) = (a.as_f64(), q.as_f64());
    let seg = |psi: f64| DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0 * qf * psi - af, 0.0]);
    let pw = Piecewise { values: vec![seg(1.0), seg(-1.0)], fractions: vec![0.5, 0.5] };
    CatalogEntry::new("meissner", "Meissner equation", SystemMatrix::Piecewise(pw))
        .case(1)
        .param("a", a)
        .param("q", q)
}

fn pendulum_like(id: &str, description: &str, sign: i64, l: &Rational, g: &Rational, y0: &Rational) -> CatalogEntry {
    let s = rat(sign, 1);
    let ll = TrigMatrix::zeros(1, 1)
        .with_term(0, 0, Parity::Cos, Mat::diag(&[-(g.clone() / l.clone()) * s.clone()]))
        .with_term(2, 1, Parity::Cos, Mat::diag(&[y0.clone() / l.clone() * s]));
    CatalogEntry::new(id, description, SystemMatrix::Series(second_order(ll, rat(0, 1))))
        .case(3)
        .param("l", l)
        .param("g", g)
        .param("Y0", y0)
}

/// Pendulum on a pivot moving as `Y₀ cos ωt`, linearized at the bottom.
pub fn pendulum(l: &Rational, g: &Rational, y0: &Rational) -> CatalogEntry {
    pendulum_like("pendulum", "pendulum with vertically driven pivot", 1, l, g, y0)
}

/// Same pivot drive, linearized at the upright position.
pub fn inverted_pendulum(l: &Rational, g: &Rational, y0: &Rational) -> CatalogEntry {
    pendulum_like("inverted-pendulum", "inverted pendulum with vertically driven pivot", -1, l, g, y0)
}

/// Series RLC with elastance `s₀ − s₁ g(t)`.
pub fn rlc(res: &Rational, ind: &Rational, s0: &Rational, s1: &Rational, g: &TrigMatrix<Rational>) -> CatalogEntry {
    let ll = g
        .scale(&(s1.clone() / ind.clone()))
        .try_sub(&TrigMatrix::constant(Mat::diag(&[s0.clone() / ind.clone()])))
        .expect("1×1");
    let damping = -(res.clone() / ind.clone());
    CatalogEntry::new("rlc", "series RLC with periodic capacitance", SystemMatrix::Series(second_order(ll, damping)))
        .case(3)
        .param("R", res)
        .param("L", ind)
        .param("s0", s0)
        .param("s1", s1)
}

/// `A(t) = [[0, 1], [6/t², 0]]`, defined for `t > 0`; not periodic.
pub fn cauchy_euler() -> CatalogEntry {
    let sys = ClosedForm::new(|_, t| {
        let z = Complex64::new(0.0, 0.0);
        cmat(2, 2, &[z, Complex64::new(1.0, 0.0), 6.0 / (t * t), z])
    });
    let mut e = CatalogEntry::new("cauchy-euler", "Cauchy–Euler system, t > 0", SystemMatrix::Closed(sys));
    e.aperiodic = true;
    e
}

/// `Φ(t, t₀) = W(t) W(t₀)⁻¹` of [`cauchy_euler`], from the solutions `t³`
/// and `t⁻²`.
pub fn cauchy_euler_transition(t: f64, t0: f64) -> DMatrix<f64> {
    let (a, b) = (t.powi(5), t0.powi(5));
    let d = 5.0 * t * t * t0 * t0;
    DMatrix::from_row_slice(
        2,
        2,
        &[(2.0 * a + 3.0 * b) / (d * t0), (a - b) / d, (6.0 * a - 6.0 * b) / (d * t * t0), (3.0 * a + 2.0 * b) / (d * t)],
    )
}

/// `exp(∫_{t₀}^t A)` of [`cauchy_euler`], which differs from its transition
/// matrix because `A(t)` does not commute with its integral.
pub fn cauchy_euler_exp_integral(t: f64, t0: f64) -> DMatrix<f64> {
    let s = (6.0 / (t * t0)).sqrt() * (t - t0);
    let (ch, sh) = (s.cosh(), s.sinh());
    DMatrix::from_row_slice(2, 2, &[ch, (t * t0 / 6.0).sqrt() * sh, (6.0 / (t * t0)).sqrt() * sh, ch])
}
