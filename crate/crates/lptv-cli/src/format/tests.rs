use lptv::catalog;
use lptv::{q, Scalar};

use super::*;

fn err_of(text: &str) -> ParseError {
    parse(text).expect_err("input should be rejected")
}

const SMALL: &str = "\
[system]
name tiny
n 2
harmonics 1
omega-degree 1

[A]
term 0 0 cos
-1 0
0 -2
term 1 1 sin
1/2 0
0 0.25
";

#[test]
fn numbers_are_exact() {
    assert_eq!(parse_number("3"), Some(q(3, 1)));
    assert_eq!(parse_number("-3/4"), Some(q(-3, 4)));
    assert_eq!(parse_number("6/-8"), Some(q(-3, 4)));
    assert_eq!(parse_number("0.25"), Some(q(1, 4)));
    assert_eq!(parse_number(".5"), Some(q(1, 2)));
    assert_eq!(parse_number("+2."), Some(q(2, 1)));
    assert_eq!(parse_number("1.5e-3"), Some(q(3, 2000)));
    assert_eq!(parse_number("-2.5E2"), Some(q(-250, 1)));
    for bad in ["", "1/0", "abc", "1.2.3", "1e", "--1", "1/2/3", "."] {
        assert_eq!(parse_number(bad), None, "{bad}");
    }
}

#[test]
fn float_text_reads_back_to_the_same_double() {
    for x in [0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, -0.0, 1.0, std::f64::consts::PI] {
        let s = fmt_f64(x);
        assert_eq!(parse_number(&s).unwrap().as_f64(), x, "{s}");
    }
    assert_eq!(fmt_f64(-0.0), "0.0000000000000000e+0");
    assert_eq!(fmt_f64(0.25), "2.5000000000000000e-1");
    assert_eq!(fmt_f64(-12.0), "-1.2000000000000000e+1");
}

#[test]
fn parses_small_system() {
    let doc = parse(SMALL).unwrap();
    assert_eq!(doc.name, "tiny");
    assert_eq!(doc.n, 2);
    let a = doc.a.unwrap();
    assert_eq!(a.even(0, 0), Mat::from_i64(&[&[-1, 0], &[0, -2]]));
    assert_eq!(a.odd(1, 1), Mat::diag(&[q(1, 2), q(1, 4)]));
    assert_eq!(a.harmonic_bound(), 1);
}

#[test]
fn catalog_round_trip_is_byte_identical() {
    let mut count = 0;
    for e in catalog::all_entries() {
        let Some(a) = e.series() else { continue };
        let mut doc = Document::new(&e.id, e.n());
        doc.description = Some(e.description.clone());
        doc.params = e.params.clone();
        doc.omega = e.fixed_omega.clone();
        doc.a = Some(a.clone());
        let first = doc.emit();
        let parsed = parse(&first).unwrap_or_else(|err| panic!("{}: {err}", e.id));
        assert_eq!(parsed.a.as_ref(), Some(a), "{}", e.id);
        assert_eq!(parsed.emit(), first, "{}", e.id);
        count += 1;
    }
    assert!(count >= 15);
}

#[test]
fn solution_sections_round_trip() {
    let mut doc: Document<Rational> = Document::new("pair", 2);
    doc.p = Some(TrigMatrix::identity(2).with_term(0, 1, Parity::Sin, Mat::from_i64(&[&[0, 1], &[-1, 0]])));
    doc.r = Some(OmegaPolyMatrix::from_slices(2, vec![Mat::zeros(2, 2), Mat::from_i64(&[&[0, 1], &[-1, 0]])]));
    doc.psi0 = Some(OmegaPoly::new(vec![q(-1, 1), q(1, 3)]));
    doc.psi1 = Some(TrigMatrix::zeros(1, 1).with_term(0, 2, Parity::Cos, Mat::diag(&[q(1, 2)])));
    doc.transforms = Some(TransformRecord { frequency_divisor: 2, identity_at_zero: true, canonicalized: false });
    doc.report = vec![("harmonics".into(), "1".into()), ("det-p".into(), "1".into())];
    let text = doc.emit();
    let back = parse(&text).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.emit(), text);
}

#[test]
fn zero_r_and_zero_psi0_are_written() {
    let mut doc: Document<Rational> = Document::new("z", 1);
    doc.r = Some(OmegaPolyMatrix::zeros(1));
    doc.psi0 = Some(OmegaPoly::zero());
    let text = doc.emit();
    assert!(text.contains("[R]\npower 0\n0\n"));
    let back = parse(&text).unwrap();
    assert_eq!(back.emit(), text);
}

#[test]
fn io_sections_carry_their_shape() {
    let text = format!("{SMALL}\n[B 2x1]\nterm 0 0 cos\n0\n1\n\n[C 1x2]\nterm 0 0 cos\n1 0\n\n[D 1x1]\n");
    let doc = parse(&text).unwrap();
    assert_eq!(doc.io["B"].shape(), (2, 1));
    assert_eq!(doc.io["C"].shape(), (1, 2));
    assert!(doc.io["D"].is_zero());
    assert_eq!(parse(&doc.emit()).unwrap(), doc);

    let e = err_of(&format!("{SMALL}\n[B 3x1]\n"));
    assert_eq!((e.line, e.col), (15, 4));
    let e = err_of(&format!("{SMALL}\n[B]\n"));
    assert!(e.msg.contains("shape"));
    let e = err_of(&format!("{SMALL}\n[B 2x1]\n[C 1x2]\n[D 2x2]\n"));
    assert!(e.msg.contains("[D]"), "{e}");
}

#[test]
fn header_errors_point_at_the_token() {
    let e = err_of("[system]\nname x\nn two\n");
    assert_eq!((e.line, e.col), (3, 3));
    let e = err_of("[system]\nname x\n");
    assert!(e.msg.contains("missing `n`"));
    let e = err_of("[system]\nname x\nn 2\ncolour blue\n");
    assert_eq!((e.line, e.col), (4, 1));
    assert!(e.msg.contains("unknown key"));
    let e = err_of("n 2\n");
    assert!(e.msg.contains("before the first section"));
    let e = err_of("[system\nname x\n");
    assert_eq!(e.line, 1);
    let e = err_of("[system]\nname x\nn 1\n[bogus]\n");
    assert_eq!((e.line, e.col), (4, 1));
}

#[test]
fn declared_counts_must_match_data() {
    let e = err_of(&SMALL.replace("harmonics 1", "harmonics 2"));
    assert_eq!((e.line, e.col), (4, 11));
    let e = err_of(&SMALL.replace("omega-degree 1", "omega-degree 0"));
    assert_eq!(e.line, 5);
    let e = err_of(&SMALL.replace("harmonics 1\n", ""));
    assert!(e.msg.contains("missing"));
}

#[test]
fn term_errors() {
    let e = err_of(&SMALL.replace("term 1 1 sin", "term 1 0 sin"));
    assert_eq!((e.line, e.col), (11, 10));
    let e = err_of(&SMALL.replace("term 1 1 sin", "term 0 0 cos"));
    assert!(e.msg.contains("duplicate"));
    let e = err_of(&SMALL.replace("0 -2\n", "0 -2 7\n"));
    assert_eq!((e.line, e.col), (10, 6));
    let e = err_of(&SMALL.replace("1/2 0", "1/2 x"));
    assert_eq!((e.line, e.col), (12, 5));
    let e = err_of(&SMALL.replace("0 0.25\n", ""));
    assert!(e.msg.contains("rows"));
    let e = err_of(&SMALL.replace("term 1 1 sin", "term 1 1 tan"));
    assert!(e.msg.contains("parity"));
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let text = format!("# leading comment\n\n{}", SMALL.replace("[A]\n", "[A]\n   # inside\n\n"));
    assert_eq!(parse(&text).unwrap(), parse(SMALL).unwrap());
}

#[test]
fn duplicate_sections_and_params() {
    let e = err_of(&format!("{SMALL}[A]\n"));
    assert!(e.msg.contains("duplicate section"));
    let e = err_of(&format!("{SMALL}[params]\na 1\na 2\n"));
    assert!(e.msg.contains("duplicate parameter"));
    let e = err_of(&format!("{SMALL}[transforms]\nshift 1\n"));
    assert!(e.msg.contains("unknown key"));
    let e = err_of(&format!("{SMALL}[report]\nmood good\n"));
    assert!(e.msg.contains("unknown key"));
}
