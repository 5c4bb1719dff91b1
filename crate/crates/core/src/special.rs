//! Real special functions at arbitrary precision: Bernoulli numbers, log-gamma,
//! digamma, Hurwitz zeta, upper incomplete gamma, and a double-exponential
//! quadrature rule for the half line.

use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::mp::{pi, Real};

/// Extra working bits used internally before rounding back.
pub const GUARD: u32 = 24;

fn bernoulli_table() -> &'static Mutex<Vec<Rational>> {
    static T: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

/// Exact `B_k` with `B_1 = -1/2`.
pub fn bernoulli(k: usize) -> Rational {
    if k > 1 && k % 2 == 1 {
        return Rational::new();
    }
    let mut t = bernoulli_table().lock().unwrap();
    while t.len() <= k {
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        let m = t.len();
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (j, b) in t.iter().enumerate() {
            acc += Rational::from(&binom * b.numer()) / b.denom();
            binom *= m + 1 - j;
            binom /= j + 1;
        }
        let bm = -acc / Rational::from(m as u64 + 1);
        t.push(bm);
    }
    t[k].clone()
}

pub fn bernoulli_real(k: usize, prec: u32) -> Real {
    Float::with_val(prec, &bernoulli(k))
}

/// `H_r = 1 + 1/2 + ... + 1/r`.
pub fn harmonic(r: u64) -> Rational {
    (1..=r).fold(Rational::new(), |acc, j| acc + Rational::from((1, j)))
}

fn eps(prec: u32) -> Real {
    Float::with_val(prec, 1) >> (prec as i32)
}

/// Shift `x` upward to at least `floor` for an asymptotic expansion; returns
/// the shifted value and the shift count.
fn shift_up(x: &Real, floor: f64) -> (Real, u64) {
    let xf = x.to_f64();
    if xf >= floor {
        return (x.clone(), 0);
    }
    let r = (floor - xf).ceil() as u64;
    (Float::with_val(x.prec(), x + r), r)
}

fn asymptotic_floor(prec: u32) -> f64 {
    0.2 * prec as f64 + 8.0
}

/// `log Gamma(x)` for `x > 0`, Stirling series after an argument shift.
pub fn ln_gamma(x: &Real) -> Real {
    let out = x.prec();
    let p = out + GUARD;
    assert!(*x > 0, "ln_gamma needs x > 0");
    let x = Float::with_val(p, x);
    let (xs, r) = shift_up(&x, asymptotic_floor(p));
    // lnΓ(x) = lnΓ(x + r) - ln(x (x+1) ... (x+r-1))
    let mut prod = Float::with_val(p, 1);
    for j in 0..r {
        prod *= Float::with_val(p, &x + j);
    }
    let two_pi = pi(p) * 2u32;
    let mut s = Float::with_val(p, &xs - 0.5f64) * xs.clone().ln() - &xs + two_pi.ln() / 2u32;
    let x2 = Float::with_val(p, xs.square_ref());
    let mut xpow = xs.clone();
    let tol = eps(p);
    for j in 1..=(p as usize) {
        let b = bernoulli_real(2 * j, p);
        let term = b / (Float::with_val(p, (2 * j) * (2 * j - 1)) * &xpow);
        let small = Float::with_val(p, term.abs_ref()) < Float::with_val(p, &tol) * Float::with_val(p, s.abs_ref());
        s += term;
        if small {
            break;
        }
        xpow *= &x2;
    }
    s -= prod.ln();
    Float::with_val(out, s)
}

/// `Gamma(x)` for real `x` off the non-positive integers.
pub fn gamma(x: &Real) -> Real {
    let out = x.prec();
    let p = out + GUARD;
    let x = Float::with_val(p, x);
    if x > 0 {
        return Float::with_val(out, ln_gamma(&x).exp());
    }
    // reflection: Γ(x) Γ(1-x) = π / sin(πx)
    assert!(!x.is_integer(), "gamma has poles at non-positive integers");
    let one_minus = Float::with_val(p, 1 - &x);
    let s = Float::with_val(p, &x * pi(p)).sin();
    Float::with_val(out, pi(p) / (s * ln_gamma(&one_minus).exp()))
}

/// `psi(x) = Gamma'(x)/Gamma(x)` for `x > 0`.
pub fn digamma(x: &Real) -> Real {
    let out = x.prec();
    let p = out + GUARD;
    assert!(*x > 0, "digamma needs x > 0");
    let x = Float::with_val(p, x);
    let (xs, r) = shift_up(&x, asymptotic_floor(p));
    let mut s = xs.clone().ln() - Float::with_val(p, xs.recip_ref()) / 2u32;
    let x2 = Float::with_val(p, xs.square_ref());
    let mut xpow = x2.clone();
    let tol = eps(p);
    for j in 1..=(p as usize) {
        let b = bernoulli_real(2 * j, p);
        let term = b / (Float::with_val(p, 2 * j) * &xpow);
        let small = Float::with_val(p, term.abs_ref()) < tol;
        s -= term;
        if small {
            break;
        }
        xpow *= &x2;
    }
    for j in 0..r {
        s -= Float::with_val(p, &x + j).recip();
    }
    Float::with_val(out, s)
}

/// Euler–Maclaurin cutoff and number of correction terms at a given precision.
pub fn em_parameters(prec: u32) -> (u64, usize) {
    ((prec as u64 / 2).max(50), (prec as usize / 4).max(8))
}

/// Hurwitz zeta `ζ(s, a)` for real `s` and `a > 0`.
///
/// At `s = 1` the pole is removed and the constant term `-psi(a)` is returned,
/// so that `Σ chi(a) ζ(1, a/m)` is the regular value for non-principal `chi`.
pub fn hurwitz_zeta(s: &Real, a: &Real) -> Real {
    let out = s.prec().max(a.prec());
    let p = out + GUARD;
    let s = Float::with_val(p, s);
    let a = Float::with_val(p, a);
    assert!(a > 0, "hurwitz_zeta needs a > 0");
    let (m0, terms) = em_parameters(p);
    let neg_s = Float::with_val(p, -&s);
    let mut acc = Float::new(p);
    for n in 0..m0 {
        acc += Float::with_val(p, &a + n).pow(&neg_s);
    }
    let x = Float::with_val(p, &a + m0);
    let x_neg_s = Float::with_val(p, (&x).pow(&neg_s));
    if s == 1 {
        acc -= x.clone().ln();
    } else {
        let one_minus = Float::with_val(p, 1 - &s);
        acc += Float::with_val(p, (&x).pow(&one_minus)) / (Float::with_val(p, &s - 1u32));
    }
    acc += Float::with_val(p, &x_neg_s / 2u32);
    // Σ B_{2j}/(2j)! · s(s+1)…(s+2j-2) · x^{-s-2j+1}
    let inv_x = Float::with_val(p, x.recip_ref());
    let inv_x2 = Float::with_val(p, inv_x.square_ref());
    let mut rising = s.clone(); // s (s+1) ... (s+2j-2)
    let mut xp = Float::with_val(p, &x_neg_s * &inv_x); // x^{-s-1}
    let mut fact = Integer::from(2); // (2j)!
    for j in 1..=terms {
        let b = bernoulli_real(2 * j, p);
        let term = b * &rising * &xp / Float::with_val(p, &fact);
        acc += term;
        let j2 = 2 * j as u64;
        rising *= Float::with_val(p, &s + (j2 - 1));
        rising *= Float::with_val(p, &s + j2);
        xp *= &inv_x2;
        fact *= (j2 + 1) * (j2 + 2);
    }
    Float::with_val(out, acc)
}

/// `ζ(s)` for real `s != 1`.
pub fn riemann_zeta(s: &Real) -> Real {
    hurwitz_zeta(s, &Float::with_val(s.prec(), 1))
}

/// Upper incomplete gamma `Gamma(a, x)` for real `a` and `x > 0`.
///
/// Power series for `x < a + 1`, Legendre continued fraction otherwise;
/// negative `a` goes through the recurrence in `a`.
pub fn gamma_upper(a: &Real, x: &Real) -> Real {
    let out = x.prec().max(a.prec());
    let p = out + GUARD;
    let a = Float::with_val(p, a);
    let x = Float::with_val(p, x);
    assert!(x > 0, "gamma_upper needs x > 0");
    Float::with_val(out, gamma_upper_inner(&a, &x))
}

fn gamma_upper_inner(a: &Real, x: &Real) -> Real {
    let p = x.prec();
    if *a < 0 {
        // Γ(a, x) = (Γ(a+1, x) - x^a e^{-x}) / a
        let a1 = Float::with_val(p, a + 1u32);
        let up = gamma_upper_inner(&a1, x);
        let xa = Float::with_val(p, x.pow(a)) * Float::with_val(p, -x).exp();
        return (up - xa) / a;
    }
    if x.to_f64() < a.to_f64() + 1.0 {
        gamma_upper_series(a, x)
    } else {
        gamma_upper_cf(a, x)
    }
}

fn gamma_upper_series(a: &Real, x: &Real) -> Real {
    let p = x.prec();
    let tol = eps(p);
    if a.is_zero() {
        // E_1(x) = -γ - ln x - Σ_{n>=1} (-x)^n / (n n!)
        let mut sum = Float::new(p);
        let mut term = Float::with_val(p, 1);
        for n in 1..100_000u64 {
            term *= x;
            term /= n;
            term = -term;
            let t = Float::with_val(p, &term / n);
            sum += &t;
            if t.abs() < tol {
                break;
            }
        }
        let gamma = Float::with_val(p, rug::float::Constant::Euler);
        return -gamma - x.clone().ln() - sum;
    }
    // γ(a, x) = x^a e^{-x} Σ x^n / (a (a+1) ... (a+n))
    let mut term = Float::with_val(p, a.recip_ref());
    let mut sum = term.clone();
    for n in 1..100_000u64 {
        term *= x;
        term /= Float::with_val(p, a + n);
        sum += &term;
        if Float::with_val(p, term.abs_ref()) < Float::with_val(p, &tol * &sum) {
            break;
        }
    }
    let lower = sum * Float::with_val(p, x.pow(a)) * Float::with_val(p, -x).exp();
    gamma(a) - lower
}

fn gamma_upper_cf(a: &Real, x: &Real) -> Real {
    // modified Lentz on  Γ(a,x) = e^{-x} x^a / (x + 1 - a - 1(1-a)/(x + 3 - a - 2(2-a)/(...)))
    let p = x.prec();
    let tol = eps(p);
    let tiny = Float::with_val(p, 1) >> (4 * p as i32);
    let mut b = Float::with_val(p, x + 1u32) - a;
    let mut c = Float::with_val(p, 1) / &tiny;
    let mut d = Float::with_val(p, b.recip_ref());
    let mut h = d.clone();
    for i in 1..1_000_000u64 {
        let an = -Float::with_val(p, Float::with_val(p, i) - a) * i;
        b += 2u32;
        d = an.clone() * &d + &b;
        if d.clone().abs() < tiny {
            d = tiny.clone();
        }
        c = Float::with_val(p, &b + Float::with_val(p, &an / &c));
        if c.clone().abs() < tiny {
            c = tiny.clone();
        }
        d = d.recip();
        let delta = Float::with_val(p, &d * &c);
        h *= &delta;
        if (delta - 1u32).abs() < tol {
            break;
        }
    }
    h * Float::with_val(p, x.pow(a)) * Float::with_val(p, -x).exp()
}

/// `∫_0^∞ f(u) du` by the exp-sinh double-exponential rule with step halving.
///
/// `f` should decay at infinity and may have an integrable algebraic
/// singularity at 0.
pub fn integrate_half_line(f: impl Fn(&Real) -> Real, prec: u32) -> Real {
    let p = prec + GUARD;
    let tol = Float::with_val(p, 1) >> (prec as i32 + 4);
    let half_pi = pi(p) / 2u32;
    // u(t) = exp(π/2 sinh t), du = u π/2 cosh t dt
    let node = |t: &Real| -> Real {
        let sh = Float::with_val(p, t.sinh_ref());
        let ch = Float::with_val(p, t.cosh_ref());
        let u = Float::with_val(p, &half_pi * &sh).exp();
        if u.is_zero() || u.is_infinite() {
            return Float::new(p);
        }
        let fu = f(&u);
        if fu.is_zero() {
            return fu;
        }
        fu * u * &half_pi * ch
    };
    // one-sided sum Σ_{j>=1} g(±j h) until terms stay negligible
    let sweep = |h: &Real, start: u64, stride: u64, sign: i32, scale: &Real| -> Real {
        let mut acc = Float::new(p);
        let mut quiet = 0;
        let mut j = start;
        loop {
            let t = Float::with_val(p, h * j) * sign;
            let v = node(&t);
            let negligible = Float::with_val(p, v.abs_ref()) < Float::with_val(p, &tol * scale);
            acc += v;
            quiet = if negligible { quiet + 1 } else { 0 };
            if quiet >= 4 || t.clone().abs() > 12 {
                break;
            }
            j += stride;
        }
        acc
    };
    let mut h = Float::with_val(p, 0.5f64);
    let centre = node(&Float::new(p));
    let scale0 = Float::with_val(p, centre.abs_ref()).max(&Float::with_val(p, 1e-300f64));
    let mut sum = centre.clone() + sweep(&h, 1, 1, 1, &scale0) + sweep(&h, 1, 1, -1, &scale0);
    let mut est = Float::with_val(p, &sum * &h);
    for _level in 0..16 {
        h /= 2u32;
        let scale = Float::with_val(p, est.abs_ref()) / &h;
        // new nodes are the odd multiples of the halved step
        let odd = sweep(&h, 1, 2, 1, &scale) + sweep(&h, 1, 2, -1, &scale);
        sum += odd;
        let next = Float::with_val(p, &sum * &h);
        let diff = Float::with_val(p, &next - &est).abs();
        let mag = Float::with_val(p, next.abs_ref());
        est = next;
        if diff <= Float::with_val(p, &tol * mag.max(&Float::with_val(p, 1e-300f64))) * 1024u32 {
            break;
        }
    }
    Float::with_val(prec, est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    const P: u32 = 128;

    fn r(v: f64) -> Real {
        Float::with_val(P, v)
    }

    fn rel(a: &Real, b: &Real) -> f64 {
        let d = Float::with_val(P, a - b).abs();
        let m = Float::with_val(P, b.abs_ref()).max(&r(1e-300));
        (d / m).to_f64()
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), 1);
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(13), 0);
    }

    #[test]
    fn ln_gamma_matches_mpfr() {
        for &x in &[0.25, 0.5, 1.0, 2.5, 7.3, 40.0, 1e-3] {
            let ours = ln_gamma(&r(x));
            let refv = Float::with_val(P, r(x).ln_gamma_ref());
            let d = Float::with_val(P, &ours - &refv).abs().to_f64();
            assert!(d < 1e-36, "x = {x}: {d}");
        }
    }

    #[test]
    fn gamma_reflection_side() {
        let g = gamma(&r(-0.5));
        let expected = -Float::with_val(P, Constant::Pi).sqrt() * 2u32;
        assert!(rel(&g, &expected) < 1e-36);
    }

    #[test]
    fn digamma_matches_mpfr_and_closed_forms() {
        for &x in &[0.1, 0.5, 1.0, 3.7, 25.0] {
            let ours = digamma(&r(x));
            let refv = Float::with_val(P, r(x).digamma_ref());
            assert!(Float::with_val(P, &ours - &refv).abs() < 1e-36, "x = {x}");
        }
        let g = Float::with_val(P, Constant::Euler);
        assert!(Float::with_val(P, digamma(&r(1.0)) + &g).abs() < 1e-37);
        let half = -(g + Float::with_val(P, Constant::Log2) * 2u32);
        assert!(Float::with_val(P, digamma(&r(0.5)) - half).abs() < 1e-37);
    }

    #[test]
    fn hurwitz_zeta_against_mpfr_zeta() {
        for &s in &[2.0, 3.0, 4.5, 0.5, -1.5, 0.0] {
            let ours = riemann_zeta(&r(s));
            let refv = Float::with_val(P, r(s).zeta_ref());
            assert!(rel(&ours, &refv) < 1e-36, "s = {s}");
        }
        // ζ(0, a) = 1/2 - a
        let z = hurwitz_zeta(&r(0.0), &r(0.3));
        assert!(Float::with_val(P, z - r(0.2)).abs() < 1e-36);
        // regularized value at s = 1 is -psi(a)
        let z1 = hurwitz_zeta(&r(1.0), &r(0.75));
        let psi = Float::with_val(P, r(0.75).digamma_ref());
        assert!(Float::with_val(P, z1 + psi).abs() < 1e-36);
    }

    #[test]
    fn incomplete_gamma_against_mpfr() {
        for &(a, x) in &[(0.0, 0.3), (0.0, 5.0), (1.0, 0.2), (2.0, 12.566), (3.0, 1.5), (5.0, 40.0), (2.5, 2.5)] {
            let ours = gamma_upper(&r(a), &r(x));
            let refv = Float::with_val(P, r(a).gamma_inc_ref(&r(x)));
            assert!(rel(&ours, &refv) < 1e-35, "a = {a}, x = {x}");
        }
        let neg = gamma_upper(&r(-1.0), &r(2.0));
        // Γ(-1, x) = E_2(x)/x = (e^{-x} - x E_1(x)) / x
        let e1 = gamma_upper(&r(0.0), &r(2.0));
        let expected = (Float::with_val(P, -2.0f64).exp() - e1 * 2u32) / 2u32;
        assert!(rel(&neg, &expected) < 1e-35);
    }

    #[test]
    fn half_line_quadrature() {
        // ∫ e^{-u} = 1
        let v = integrate_half_line(|u| Float::with_val(P, -u).exp(), P);
        assert!(Float::with_val(P, v - 1u32).abs() < 1e-36);
        // ∫ u^{-1/2} e^{-u} = sqrt(π)
        let v = integrate_half_line(
            |u| Float::with_val(P, -u).exp() / Float::with_val(P, u.sqrt_ref()),
            P,
        );
        let sp = Float::with_val(P, Constant::Pi).sqrt();
        assert!(rel(&v, &sp) < 1e-34);
    }
}
