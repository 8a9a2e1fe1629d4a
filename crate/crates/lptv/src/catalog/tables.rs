//! The 2×2 example rows, grouped by whether `A(t)` and `P(t)` have finitely
//! many harmonics.
//!
//! Rows 4-1:B, 4-2:B, 4-2:C, 4-3:B, 4-4:B, 4-4:F and 4-4:G are stored in the
//! form that satisfies `A P − Ṗ − P R = 0`; each carries a note describing
//! the correction.

use std::collections::BTreeMap;

use num::complex::Complex64;

use super::*;

fn defaults(table: &str, row: &str) -> Option<Vec<(&'static str, Rational)>> {
    let a = || vec![("a", rat(3, 2))];
    let known = match (table, row) {
        ("4-1", "B") | ("4-2", "C") | ("4-3", "C") => a(),
        ("4-4", "B") | ("4-4", "C") | ("4-4", "F") | ("4-4", "G") => a(),
        ("4-4", "H") => vec![
            ("a0", rat(-1, 1)),
            ("a1", rat(0, 1)),
            ("b0", rat(2, 1)),
            ("b1", rat(1, 2)),
            ("c0", rat(1, 2)),
            ("c1", rat(0, 1)),
            ("d0", rat(1, 1)),
            ("d1", rat(-1, 2)),
        ],
        ("4-1", "A" | "C") | ("4-2", "A" | "B") | ("4-3", "A" | "B" | "D" | "E" | "F") => vec![],
        ("4-4", "A" | "D" | "E") => vec![],
        _ => return None,
    };
    Some(known)
}

/// Row `row` of table `table` (`"4-1"` … `"4-4"`) with default parameters
/// (`a = 3/2`).
pub fn table_row(table: &str, row: &str) -> Result<CatalogEntry, CatalogError> {
    table_row_with(table, row, &[])
}

/// Like [`table_row`], overriding named parameters.
pub fn table_row_with(table: &str, row: &str, params: &[(&str, Rational)]) -> Result<CatalogEntry, CatalogError> {
    let id = format!("{table}:{row}");
    let mut values: BTreeMap<&str, Rational> =
        defaults(table, row).ok_or_else(|| CatalogError::UnknownEntry(id.clone()))?.into_iter().collect();
    for (name, v) in params {
        match values.get_mut(name) {
            Some(slot) => *slot = v.clone(),
            None => return Err(CatalogError::UnknownEntry(format!("{id} has no parameter `{name}`"))),
        }
    }
    let get = |name: &str| values[name].clone();
    let entry = match (table, row) {
        ("4-1", "A") => t41a(),
        ("4-1", "B") => t41b(&get("a")),
        ("4-1", "C") => t41c(),
        ("4-2", "A") => t42a(),
        ("4-2", "B") => t42b(),
        ("4-2", "C") => t42c(&get("a")),
        ("4-3", "A") => t43a(),
        ("4-3", "B") => t43b(),
        ("4-3", "C") => t43c(&get("a")),
        ("4-3", "D") => t43d(),
        ("4-3", "E") => t43e(),
        ("4-3", "F") => t43f(),
        ("4-4", "A") => t44a(),
        ("4-4", "B") => t44b(&get("a")),
        ("4-4", "C") => t44c(&get("a")),
        ("4-4", "D") => t44d(),
        ("4-4", "E") => t44e(),
        ("4-4", "F") => t44f(&get("a")),
        ("4-4", "G") => t44g(&get("a")),
        ("4-4", "H") => {
            let v: Vec<Rational> = ["a0", "a1", "b0", "b1", "c0", "c1", "d0", "d1"].iter().map(|k| get(k)).collect();
            let mut e = wu_row_h([&v[0], &v[1]], [&v[2], &v[3]], [&v[4], &v[5]], [&v[6], &v[7]]);
            e.description = "a I + b J + c S(2ωt) + d C(2ωt) with ω-linear a, b, c, d".to_string();
            e
        }
        _ => unreachable!("defaults() covers every row"),
    };
    let case = table.as_bytes()[2] - b'0';
    let mut entry = entry.case(case);
    entry.id = id;
    for (name, v) in &values {
        entry = entry.param(name, v);
    }
    Ok(entry)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn r2(r0: [[i64; 2]; 2], r1: [[i64; 2]; 2]) -> OmegaPolyMatrix<Rational> {
    let m = |x: [[i64; 2]; 2]| Mat::from_i64(&[&x[0], &x[1]]);
    omega_linear(m(r0), m(r1))
}

/// `[[a−1, ω−1], [1−ω, −1]]`.
fn reflected_r(a: &Rational) -> OmegaPolyMatrix<Rational> {
    let one = rat(1, 1);
    omega_linear(
        Mat::from_rows(vec![vec![a.clone() - one.clone(), -one.clone()], vec![one.clone(), -one.clone()]]),
        Mat::from_i64(&[&[0, 1], &[-1, 0]]),
    )
}

fn t41a() -> CatalogEntry {
    let a = ClosedForm::new(|w, t| {
        let th = t * w;
        cmat(2, 2, &[th.cos(), ((2.0 / w) * th.sin()).exp(), c(0.0), -th.cos()])
    });
    let p = ClosedForm::new(|w, t| {
        let e = (t * w).sin() / w;
        cmat(2, 2, &[e.exp(), c(0.0), c(0.0), (-e).exp()])
    });
    CatalogEntry::new("", "cos(ωt) diagonal with exp((2/ω) sin ωt) coupling", SystemMatrix::Closed(a))
        .with_pair(KnownP::Closed(p), r2([[0, 1], [0, 0]], [[0, 0], [0, 0]]))
}

fn t41b(a: &Rational) -> CatalogEntry {
    let af = a.as_f64();
    let sys = ClosedForm::new(move |w, t| {
        let th = t * w;
        let phi = w * th.sin() / (th.cos() + 2.0);
        let (c2, s2) = ((2.0 * th).cos(), (2.0 * th).sin());
        let d = af / 2.0 - 1.0;
        cmat(
            2,
            2,
            &[phi + d + c2 * (af / 2.0), 1.0 - s2 * (af / 2.0), -1.0 - s2 * (af / 2.0), phi + d - c2 * (af / 2.0)],
        )
    });
    let p = ClosedForm::new(|w, t| {
        let th = t * w;
        let k = (th.cos() + 2.0).inv();
        cmat(2, 2, &[k * th.cos(), -k * th.sin(), -k * th.sin(), -k * th.cos()])
    });
    CatalogEntry::new("", "reflection factor divided by 2 + cos ωt", SystemMatrix::Closed(sys))
        .with_pair(KnownP::Closed(p), reflected_r(a))
        .note("cos(2ωt) and sin(2ωt) both carry the factor a/2; a bare cos(2ωt) on the diagonal leaves a nonzero residual")
}

fn t41c() -> CatalogEntry {
    let sys = ClosedForm::new(|w, t| {
        let th = t * w;
        let d = th.sin() + w * th.sin() / (th.cos() + 2.0);
        cmat(2, 2, &[d, th.cos() + 1.0, c(0.0), d])
    });
    let p = ClosedForm::new(|w, t| {
        let th = t * w;
        let k = (-th.cos() / w).exp() / (th.cos() + 2.0);
        cmat(2, 2, &[k, k * th.sin() / w, c(0.0), k])
    });
    CatalogEntry::new("", "upper triangular with a 1/(2 + cos ωt) factor", SystemMatrix::Closed(sys))
        .with_pair(KnownP::Closed(p), r2([[0, 1], [0, 0]], [[0, 0], [0, 0]]))
}

fn t42a() -> CatalogEntry {
    let sys = ClosedForm::new(|w, t| {
        let th = t * w;
        let (s, co) = (th.sin(), th.cos());
        cmat(
            2,
            2,
            &[w * co / (s + 2.0), (s + w * co + 2.0) / (1.0 - s * s / 4.0) - 1.0, c(0.0), -w * co / (2.0 - s)],
        )
    });
    let p = grid(vec![
        vec![vec![k(rat(1, 1)), si(rat(1, 2), 1)], vec![si(rat(1, 1), 1)]],
        vec![vec![], vec![k(rat(1, 1)), si(rat(-1, 2), 1)]],
    ]);
    CatalogEntry::new("", "triangular, P = [[1 + sin/2, sin], [0, 1 − sin/2]]", SystemMatrix::Closed(sys))
        .with_pair(KnownP::Series(p), r2([[0, 1], [0, 0]], [[0, 0], [0, 0]]))
}

fn t42b() -> CatalogEntry {
    let sys = ClosedForm::new(|w, t| {
        let th = t * w;
        let (s, co) = (th.sin(), th.cos());
        let q = w * co / (co * co + 3.0);
        cmat(2, 2, &[(2.0 - s) * q + 3.0, 2.0 * q + 1.0, c(0.0), 1.0 - (s + 2.0) * q])
    });
    let p = grid(vec![
        vec![vec![k(rat(2, 1)), si(rat(1, 1), 1)], vec![si(rat(1, 1), 1)]],
        vec![vec![], vec![k(rat(2, 1)), si(rat(-1, 1), 1)]],
    ]);
    CatalogEntry::new("", "triangular, P = [[2 + sin, sin], [0, 2 − sin]]", SystemMatrix::Closed(sys))
        .with_pair(KnownP::Series(p), r2([[3, 1], [0, 1]], [[0, 0], [0, 0]]))
        .note("lower diagonal entry uses (2 + sin ωt); the form with (2 − sin ωt) there leaves a nonzero residual")
}

fn t42c(a: &Rational) -> CatalogEntry {
    let af = a.as_f64();
    let sys = ClosedForm::new(move |w, t| {
        let th = t * w;
        let phi = w * th.cos() / (th.sin() + 2.0);
        let (c2, s2) = ((2.0 * th).cos(), (2.0 * th).sin());
        let d = af / 2.0 - 1.0;
        cmat(
            2,
            2,
            &[phi + d + c2 * (af / 2.0), 1.0 - s2 * (af / 2.0), -1.0 - s2 * (af / 2.0), phi + d - c2 * (af / 2.0)],
        )
    });
    // (2 + sin ωt) [[cos, −sin], [−sin, −cos]] expanded
    let off = || vec![k(rat(-1, 2)), co(rat(1, 2), 2), si(rat(-2, 1), 1)];
    let p = grid(vec![
        vec![vec![co(rat(2, 1), 1), si(rat(1, 2), 2)], off()],
        vec![off(), vec![co(rat(-2, 1), 1), si(rat(-1, 2), 2)]],
    ]);
    CatalogEntry::new("", "(2 + sin ωt) times a reflection", SystemMatrix::Closed(sys))
        .with_pair(KnownP::Series(p), reflected_r(a))
        .note(
            "P = (2 + sin ωt)[[cos, −sin], [−sin, −cos]] expanded (harmonic 2 in the sin/cos halves, minus sign in the \
             last entry) and a/2 on cos(2ωt), sin(2ωt); det P = −(2 + sin ωt)² is not constant",
        )
}

fn exp_cos(w: f64, t: Complex64) -> Complex64 {
    (-((t * w).cos() - 1.0) / w).exp()
}

fn t43a() -> CatalogEntry {
    let sys = grid(vec![vec![vec![si(rat(1, 1), 1)], vec![]], vec![vec![], vec![si(rat(-1, 1), 1)]]]);
    let p = ClosedForm::new(|w, t| {
        let e = exp_cos(w, t);
        cmat(2, 2, &[e, c(0.0), c(0.0), e.inv()])
    });
    CatalogEntry::new("", "diag(sin ωt, −sin ωt)", SystemMatrix::Series(sys))
        .with_pair(KnownP::Closed(p), r2([[0, 0], [0, 0]], [[0, 0], [0, 0]]))
}

fn t43b() -> CatalogEntry {
    let sys = grid(vec![
        vec![vec![k(rat(1, 1)), co(rat(1, 1), 1).w()], vec![k(rat(2, 1)), co(rat(-2, 1), 1).w()]],
        vec![vec![], vec![k(rat(3, 1)), co(rat(-1, 1), 1).w()]],
    ]);
    let p = ClosedForm::new(|w, t| {
        let e = (t * w).sin().exp();
        cmat(2, 2, &[e, e.inv(), c(0.0), e.inv()])
    });
    CatalogEntry::new("", "upper triangular with ω cos ωt terms", SystemMatrix::Series(sys))
        .with_pair(KnownP::Closed(p), r2([[1, 0], [0, 3]], [[0, 0], [0, 0]]))
        .note("upper right entry is 2 − 2ω cos ωt; with +2ω cos ωt the residual is nonzero")
}

fn t43c(a: &Rational) -> CatalogEntry {
    let half_a = a.clone() / rat(2, 1);
    let psi = || vec![k(half_a.clone() - rat(1, 1)), co(rat(1, 1), 1).w(), si(rat(-1, 1), 1).w()];
    let mut d0 = psi();
    d0.push(co(half_a.clone(), 2));
    let mut d1 = psi();
    d1.push(co(-half_a.clone(), 2));
    let sys = grid(vec![
        vec![d0, vec![k(rat(1, 1)), si(-half_a.clone(), 2)]],
        vec![vec![k(rat(-1, 1)), si(-half_a.clone(), 2)], d1],
    ]);
    let p = ClosedForm::new(|w, t| {
        let th = t * w;
        let e = (th.sin() + th.cos() - 1.0).exp();
        cmat(2, 2, &[e * th.cos(), -e * th.sin(), -e * th.sin(), -e * th.cos()])
    });
    CatalogEntry::new("", "Markus–Yamabe form plus ω(cos − sin) on the diagonal", SystemMatrix::Series(sys))
        .with_pair(KnownP::Closed(p), reflected_r(a))
}

fn rotating_base(skew: bool, lower: bool) -> TrigMatrix<Rational> {
    let off = |sign: i64| vec![k(rat(sign, 1)), co(rat(sign, 1), 1)];
    let upper = if skew { off(-1) } else { off(1) };
    let low = if !lower {
        vec![]
    } else {
        off(1)
    };
    grid(vec![vec![vec![si(rat(1, 1), 1)], upper], vec![low, vec![si(rat(1, 1), 1)]]])
}

fn t43d() -> CatalogEntry {
    let p = ClosedForm::new(|w, t| {
        let e = exp_cos(w, t);
        let u = (t * w).sin() / w;
        cmat(2, 2, &[e * u.cos(), -e * u.sin(), e * u.sin(), e * u.cos()])
    });
    CatalogEntry::new("", "sin ωt I plus (1 + cos ωt) times a rotation generator", SystemMatrix::Series(rotating_base(true, true)))
        .with_pair(KnownP::Closed(p), r2([[0, -1], [1, 0]], [[0, 0], [0, 0]]))
}

fn t43e() -> CatalogEntry {
    let p = ClosedForm::new(|w, t| {
        let e = exp_cos(w, t);
        let u = (t * w).sin() / w;
        cmat(2, 2, &[e * u.cosh(), e * u.sinh(), e * u.sinh(), e * u.cosh()])
    });
    CatalogEntry::new("", "sin ωt I plus (1 + cos ωt) times a reflection", SystemMatrix::Series(rotating_base(false, true)))
        .with_pair(KnownP::Closed(p), r2([[0, 1], [1, 0]], [[0, 0], [0, 0]]))
}

fn t43f() -> CatalogEntry {
    let p = ClosedForm::new(|w, t| {
        let e = exp_cos(w, t);
        let u = (t * w).sin() / w;
        cmat(2, 2, &[e, e * u, c(0.0), e])
    });
    CatalogEntry::new("", "sin ωt I plus (1 + cos ωt) times a nilpotent", SystemMatrix::Series(rotating_base(false, false)))
        .with_pair(KnownP::Closed(p), r2([[0, 1], [0, 0]], [[0, 0], [0, 0]]))
}

fn t44a() -> CatalogEntry {
    let sys = grid(vec![
        vec![
            vec![k(rat(-1, 1)), si(rat(2, 1), 2), k(rat(-1, 1)).w(), co(rat(-1, 1), 2).w()],
            vec![
                co(rat(-2, 1), 1),
                si(rat(1, 1), 1),
                si(rat(1, 1), 3),
                co(rat(-3, 2), 1).w(),
                co(rat(-1, 2), 3).w(),
                si(rat(1, 1), 1).w(),
            ],
        ],
        vec![
            vec![si(rat(-4, 1), 1), co(rat(2, 1), 1).w()],
            vec![k(rat(1, 1)), si(rat(-2, 1), 2), k(rat(1, 1)).w(), co(rat(1, 1), 2).w()],
        ],
    ]);
    let p = grid(vec![
        vec![vec![co(rat(1, 1), 1)], vec![k(rat(1, 1)), si(rat(-1, 1), 2)]],
        vec![vec![k(rat(-1, 1))], vec![si(rat(2, 1), 1)]],
    ]);
    CatalogEntry::new("", "diagonalizable R = diag(1, −1)", SystemMatrix::Series(sys))
        .with_pair(KnownP::Series(p), r2([[1, 0], [0, -1]], [[0, 0], [0, 0]]))
}

/// `[[cos ωt, 1 − ½ sin 2ωt], [−1, sin ωt]]`, shared by rows B and F.
fn p_bf() -> TrigMatrix<Rational> {
    grid(vec![
        vec![vec![co(rat(1, 1), 1)], vec![k(rat(1, 1)), si(rat(-1, 2), 2)]],
        vec![vec![k(rat(-1, 1))], vec![si(rat(1, 1), 1)]],
    ])
}

/// ω-part shared by rows B and F.
fn omega_part_bf() -> Vec<Vec<Vec<Term>>> {
    map_terms(
        vec![
            vec![
                vec![k(rat(-1, 2)), co(rat(-1, 2), 2)],
                vec![co(rat(-3, 4), 1), co(rat(-1, 4), 3), si(rat(1, 1), 1)],
            ],
            vec![vec![co(rat(1, 1), 1)], vec![k(rat(1, 2)), co(rat(1, 2), 2)]],
        ],
        Term::w,
    )
}

fn merge(a: Vec<Vec<Vec<Term>>>, b: Vec<Vec<Vec<Term>>>) -> Vec<Vec<Vec<Term>>> {
    a.into_iter()
        .zip(b)
        .map(|(ra, rb)| ra.into_iter().zip(rb).map(|(mut ea, eb)| {
            ea.extend(eb);
            ea
        }).collect())
        .collect()
}

fn t44b(a: &Rational) -> CatalogEntry {
    let base = vec![
        vec![vec![k(a.clone()), co(rat(1, 1), 1)], vec![k(rat(1, 2)), co(rat(1, 2), 2)]],
        vec![vec![k(rat(-1, 1))], vec![k(a.clone()), co(rat(-1, 1), 1)]],
    ];
    let sys = grid(merge(base, omega_part_bf()));
    let r = omega_linear(
        Mat::from_rows(vec![vec![a.clone(), rat(1, 1)], vec![rat(0, 1), a.clone()]]),
        Mat::zeros(2, 2),
    );
    CatalogEntry::new("", "Jordan-block R = [[a, 1], [0, a]]", SystemMatrix::Series(sys))
        .with_pair(KnownP::Series(p_bf()), r)
        .note("ω part of the lower left entry is +ω cos ωt; with −ω cos ωt the residual is nonzero")
}

fn skew_r(a: &Rational) -> OmegaPolyMatrix<Rational> {
    omega_linear(
        Mat::from_rows(vec![vec![rat(0, 1), a.clone()], vec![-a.clone(), rat(0, 1)]]),
        Mat::zeros(2, 2),
    )
}

fn t44c(a: &Rational) -> CatalogEntry {
    let h = a.clone() / rat(2, 1);
    let base = map_terms(
        vec![
            vec![vec![co(rat(-5, 1), 1), co(rat(-1, 1), 3)], vec![k(rat(5, 1)), co(rat(4, 1), 2), co(rat(1, 1), 4)]],
            vec![vec![co(rat(-1, 1), 2), k(rat(-3, 1))], vec![co(rat(5, 1), 1), co(rat(1, 1), 3)]],
        ],
        |t| t.times(&h),
    );
    let omega = map_terms(
        vec![
            vec![vec![si(rat(1, 1), 2)], vec![si(rat(-3, 1), 1), si(rat(-1, 1), 3)]],
            vec![vec![si(rat(1, 1), 1)], vec![si(rat(-1, 1), 2)]],
        ],
        Term::w,
    );
    let p = grid(vec![vec![vec![co(rat(2, 1), 1)], vec![co(rat(1, 1), 2)]], vec![vec![k(rat(1, 1))], vec![co(rat(1, 1), 1)]]]);
    CatalogEntry::new("", "rotation-type R = [[0, a], [−a, 0]]", SystemMatrix::Series(grid(merge(base, omega))))
        .with_pair(KnownP::Series(p), skew_r(a))
}

/// `[[2 cos 2ωt + cos ωt, 2 sin 2ωt − sin ωt], [−2 sin 2ωt − sin ωt, 2 cos 2ωt − cos ωt]]`.
fn p_de() -> TrigMatrix<Rational> {
    grid(vec![
        vec![vec![co(rat(2, 1), 2), co(rat(1, 1), 1)], vec![si(rat(2, 1), 2), si(rat(-1, 1), 1)]],
        vec![vec![si(rat(-2, 1), 2), si(rat(-1, 1), 1)], vec![co(rat(2, 1), 2), co(rat(-1, 1), 1)]],
    ])
}

fn t44d() -> CatalogEntry {
    let omega = map_terms(
        vec![
            vec![vec![si(rat(2, 3), 3)], vec![k(rat(7, 3)), co(rat(2, 3), 3)]],
            vec![vec![k(rat(-7, 3)), co(rat(2, 3), 3)], vec![si(rat(-2, 3), 3)]],
        ],
        Term::w,
    );
    let base = vec![vec![vec![k(rat(1, 1))], vec![]], vec![vec![], vec![k(rat(1, 1))]]];
    CatalogEntry::new("", "I plus an ω-scaled harmonic-3 part, R = I", SystemMatrix::Series(grid(merge(base, omega))))
        .with_pair(KnownP::Series(p_de()), r2([[1, 0], [0, 1]], [[0, 0], [0, 0]]))
}

fn t44e() -> CatalogEntry {
    let f = |s: i64| vec![co(rat(-s, 3), 2), co(rat(4 * s, 3), 4), si(rat(-4 * s, 3), 3)];
    let g = || vec![co(rat(-4, 3), 3), si(rat(1, 3), 2), si(rat(-4, 3), 4)];
    let mut upper = vec![k(rat(-5, 3)), si(rat(-4, 3), 1)];
    upper.extend(g());
    let mut lower = vec![k(rat(5, 3)), si(rat(4, 3), 1)];
    lower.extend(g());
    let base = vec![vec![f(1), upper], vec![lower, f(-1)]];
    let omega = map_terms(
        vec![
            vec![vec![si(rat(2, 1), 3)], vec![k(rat(4, 1)), co(rat(2, 1), 3)]],
            vec![vec![k(rat(-4, 1)), co(rat(2, 1), 3)], vec![si(rat(-2, 1), 3)]],
        ],
        Term::w,
    );
    CatalogEntry::new("", "harmonics up to 4, R = [[1, ω − 1], [1 − ω, −1]]", SystemMatrix::Series(grid(merge(base, omega))))
        .with_pair(KnownP::Series(p_de()), r2([[1, -1], [1, -1]], [[0, 1], [-1, 0]]))
}

fn t44f(a: &Rational) -> CatalogEntry {
    let base = map_terms(
        vec![
            vec![
                vec![co(rat(5, 4), 1), co(rat(-1, 4), 3), si(rat(-1, 1), 1)],
                vec![k(rat(13, 8)), co(rat(1, 2), 2), co(rat(-1, 8), 4), si(rat(-1, 1), 2)],
            ],
            vec![
                vec![k(rat(-3, 2)), co(rat(1, 2), 2)],
                vec![co(rat(-5, 4), 1), co(rat(1, 4), 3), si(rat(1, 1), 1)],
            ],
        ],
        |t| t.times(a),
    );
    CatalogEntry::new("", "harmonics up to 4 with A(t|ω=0) = [[a, 2a], [−a, −a]]", SystemMatrix::Series(grid(merge(base, omega_part_bf()))))
        .with_pair(KnownP::Series(p_bf()), skew_r(a))
        .note(
            "lower left entry is −3a/2 + (a/2) cos 2ωt, which gives A(t|ω=0) = [[a, 2a], [−a, −a]]; with −(a/2) cos 2ωt \
             the residual is nonzero",
        )
}

fn t44g(a: &Rational) -> CatalogEntry {
    let f = |s: i64| {
        let s = rat(s, 1);
        vec![k(rat(3, 2)), co(rat(-5, 4), 1), co(rat(-1, 2), 2), co(rat(1, 4), 3), si(rat(1, 1), 1)]
            .into_iter()
            .map(|t| t.times(&s))
            .collect::<Vec<_>>()
    };
    let base = map_terms(
        vec![
            vec![f(1), vec![k(rat(3, 2)), co(rat(-1, 2), 2)]],
            vec![
                vec![
                    k(rat(-25, 8)),
                    co(rat(5, 2), 1),
                    co(rat(-1, 2), 3),
                    co(rat(1, 8), 4),
                    si(rat(-2, 1), 1),
                    si(rat(1, 1), 2),
                ],
                f(-1),
            ],
        ],
        |t| t.times(a),
    );
    let omega = map_terms(
        vec![
            vec![vec![k(rat(1, 2)), co(rat(-1, 1), 1), co(rat(1, 2), 2)], vec![co(rat(-1, 1), 1)]],
            vec![
                vec![k(rat(-1, 1)), co(rat(7, 4), 1), co(rat(-1, 1), 2), co(rat(1, 4), 3), si(rat(-1, 1), 1)],
                vec![k(rat(-1, 2)), co(rat(1, 1), 1), co(rat(-1, 2), 2)],
            ],
        ],
        Term::w,
    );
    let p = grid(vec![
        vec![vec![k(rat(1, 1))], vec![si(rat(-1, 1), 1)]],
        vec![vec![k(rat(-1, 1)), co(rat(1, 1), 1)], vec![k(rat(1, 1)), si(rat(1, 1), 1), si(rat(-1, 2), 2)]],
    ]);
    CatalogEntry::new("", "row F conjugated by U = [[−1, −1], [1, 0]]", SystemMatrix::Series(grid(merge(base, omega))))
        .with_pair(KnownP::Series(p), skew_r(a))
        .note("ω part of the lower left entry has −cos 2ωt (equal to U⁻¹ A_F U); with −2 cos 2ωt the residual is nonzero")
}
