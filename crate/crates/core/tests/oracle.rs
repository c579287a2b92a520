//! 192-bit reference values for the floating-point paths.

use astro_float::{BigFloat, Consts, RoundingMode};
use openness::asymptotics::scaled_tail;
use openness::scalars::{q, q1, q_analysis, theta_eval, theta_invert, theta_of_excess};

const P: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

struct Hp {
    cc: Consts,
}

impl Hp {
    fn new() -> Self {
        Hp {
            cc: Consts::new().expect("constants cache"),
        }
    }

    fn num(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, P)
    }

    fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(P, RM, &mut self.cc)
    }

    fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(P, RM, &mut self.cc)
    }

    fn as_f64(&mut self, x: &BigFloat) -> f64 {
        let s = x.format(astro_float::Radix::Dec, RM, &mut self.cc).expect("format");
        s.parse().unwrap_or_else(|_| panic!("unparsable {s}"))
    }

    /// `((t−1)(2t−1))^{−1/t}`
    fn theta(&mut self, t: f64) -> f64 {
        let one = self.num(1.0);
        let two = self.num(2.0);
        let tt = self.num(t);
        let a = tt.sub(&one, P, RM);
        let b = two.mul(&tt, P, RM).sub(&one, P, RM);
        let l = self.ln(&a.mul(&b, P, RM));
        let e = l.div(&tt, P, RM).neg();
        let v = self.exp(&e);
        self.as_f64(&v)
    }

    /// `2x ln x + (1−x) ln(1−x) − x ln(2−x)`
    fn q(&mut self, x: f64) -> f64 {
        let xx = self.num(x);
        let one = self.num(1.0);
        let two = self.num(2.0);
        let omx = one.sub(&xx, P, RM);
        let tmx = two.sub(&xx, P, RM);
        let t1 = two.mul(&xx, P, RM).mul(&self.ln(&xx), P, RM);
        let t2 = omx.mul(&self.ln(&omx), P, RM);
        let t3 = xx.mul(&self.ln(&tmx), P, RM);
        let v = t1.add(&t2, P, RM).sub(&t3, P, RM);
        self.as_f64(&v)
    }

    /// `(c1 e^{−R/c1} − c2 e^{−R/c2})/(c1 − c2)`, scaled by `e^{sR}`.
    fn scaled_tail2(&mut self, c1: f64, c2: f64, r: f64, s: f64) -> f64 {
        let (a, b, rr) = (self.num(c1), self.num(c2), self.num(r));
        let sr = self.num(s).mul(&rr, P, RM);
        let e1 = self.exp(&sr.sub(&rr.div(&a, P, RM), P, RM));
        let e2 = self.exp(&sr.sub(&rr.div(&b, P, RM), P, RM));
        let num = a.mul(&e1, P, RM).sub(&b.mul(&e2, P, RM), P, RM);
        let v = num.div(&a.sub(&b, P, RM), P, RM);
        self.as_f64(&v)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn theta_against_reference() {
    let mut hp = Hp::new();
    for t in [1.0 + 1e-6, 1.001, 1.1, 1.25, 1.5, 2.0, 3.0, 10.0, 100.0, 1000.0] {
        let want = hp.theta(t);
        let got = theta_eval(t).unwrap();
        assert!(rel(got, want) < 5e-15, "t = {t}: {got} vs {want}");
    }
    // t − 1 exactly representable, close to the pole
    let s = 2f64.powi(-40);
    let want = hp.theta(1.0 + s);
    assert!(rel(theta_of_excess(s).unwrap(), want) < 5e-15);
}

#[test]
fn theta_inverse_against_reference() {
    let mut hp = Hp::new();
    for ratio in [1.0001, 1.5, 2.0, 4.0, 11.0, 101.0] {
        let p = theta_invert(ratio).unwrap();
        assert!(rel(hp.theta(p), ratio) < 1e-12, "ratio {ratio}: p = {p}");
    }
}

#[test]
fn q_against_reference() {
    let mut hp = Hp::new();
    for x in [1e-6, 0.01, 0.2, 0.4691, 0.5, 0.9, 0.999] {
        let want = hp.q(x);
        assert!((q(x) - want).abs() < 1e-14 * want.abs().max(1.0), "x = {x}");
    }
    let qa = q_analysis(1e-12).unwrap();
    // a 192-bit Q sampled around the minimizer agrees with the bisection
    let h = 1e-6;
    let (left, mid, right) = (hp.q(qa.x_min - h), hp.q(qa.x_min), hp.q(qa.x_min + h));
    assert!(mid <= left && mid <= right);
    assert!(q1(qa.x_min).abs() < 1e-9);
    assert!((mid.exp() - qa.exp_q_min).abs() < 1e-12);
}

#[test]
fn tail_against_reference() {
    let mut hp = Hp::new();
    for (c1, c2) in [(2.0, 0.5), (1.0, 0.999), (1.0, 1.0 - 1e-5), (3.0, 1.0)] {
        for r in [0.0, 1.0, 10.0, 40.0] {
            for s in [0.0, 0.5, 1.0] {
                let want = hp.scaled_tail2(c1, c2, r, s);
                let got = scaled_tail(&[c1, c2], r, s).unwrap();
                assert!(
                    rel(got, want) < 1e-9,
                    "c = ({c1}, {c2}), R = {r}, s = {s}: {got} vs {want}"
                );
            }
        }
    }
}
