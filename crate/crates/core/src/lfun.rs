//! Dirichlet L-values at integers, first derivatives at 0 and 1, Riemann zeta
//! values and the completed L-function of an imaginary quadratic character.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::arith::prime_divisors;
use crate::chars::DirichletCharacter;
use crate::error::{Error, Result};
use crate::mp::{euler_gamma, ln2, pi, Cx, Real};
use crate::special::{self, bernoulli_real, em_parameters, harmonic, hurwitz_zeta, GUARD};

pub use crate::special::bernoulli;

/// `ζ(k)` for `k >= 2`: closed form in `π` for even `k`, Euler–Maclaurin otherwise.
pub fn zeta_value(k: u32, prec: u32) -> Real {
    assert!(k >= 2, "zeta_value needs k >= 2");
    if k % 2 == 0 {
        zeta_even_closed_form(k, prec)
    } else {
        special::riemann_zeta(&Float::with_val(prec, k))
    }
}

/// `ζ(k) = -B_k (2πi)^k / (2 k!)` for even `k`.
pub fn zeta_even_closed_form(k: u32, prec: u32) -> Real {
    assert!(k % 2 == 0 && k >= 2);
    let p = prec + GUARD;
    let two_pi_k = (pi(p) * 2u32).pow(k);
    let i_k: i32 = if (k / 2) % 2 == 0 { 1 } else { -1 };
    let fact = Float::with_val(p, rug::Integer::from(rug::Integer::factorial(k)));
    let v = -bernoulli_real(k as usize, p) * two_pi_k * i_k / (fact * 2u32);
    Float::with_val(prec, v)
}

/// Primes dividing the modulus but not the conductor.
fn missing_primes(chi: &DirichletCharacter) -> Vec<u64> {
    let m = chi.conductor();
    prime_divisors(chi.modulus())
        .into_iter()
        .filter(|p| m % p != 0)
        .collect()
}

/// `Π (1 - chi0(p) p^{-s})` over primes dividing the modulus but not the conductor.
fn euler_factor(chi: &DirichletCharacter, s: &Real) -> Cx {
    let p = s.prec();
    let core = chi.core();
    let mut acc = Cx::one(p);
    for q in missing_primes(chi) {
        let qs = Float::with_val(p, q).pow(&Float::with_val(p, -s));
        let term = Cx::one(p) - core.evaluate(q as i64, p).scale(&qs);
        acc = &acc * &term;
    }
    acc
}

/// Derivative in `s` of [`euler_factor`].
fn euler_factor_derivative(chi: &DirichletCharacter, s: &Real) -> Cx {
    let p = s.prec();
    let core = chi.core();
    let primes = missing_primes(chi);
    let factors: Vec<Cx> = primes
        .iter()
        .map(|&q| {
            let qs = Float::with_val(p, q).pow(&Float::with_val(p, -s));
            Cx::one(p) - core.evaluate(q as i64, p).scale(&qs)
        })
        .collect();
    let mut acc = Cx::zero(p);
    for (i, &q) in primes.iter().enumerate() {
        // d/ds (1 - c q^{-s}) = c log q q^{-s}
        let qs = Float::with_val(p, q).pow(&Float::with_val(p, -s));
        let lq = Float::with_val(p, q).ln();
        let mut term = core.evaluate(q as i64, p).scale(&(qs * lq));
        for (j, f) in factors.iter().enumerate() {
            if j != i {
                term = &term * f;
            }
        }
        acc += term;
    }
    acc
}

/// `L(s, chi0)` for real `s` from the Hurwitz decomposition.
fn l_primitive_real(core: &DirichletCharacter, s: &Real) -> Result<Cx> {
    let p = s.prec() + GUARD;
    let m = core.modulus();
    if m == 1 {
        if *s == 1 {
            return Err(Error::Pole);
        }
        return Ok(Cx::from_real(Float::with_val(
            s.prec(),
            special::riemann_zeta(&Float::with_val(p, s)),
        )));
    }
    let s_p = Float::with_val(p, s);
    let mut acc = Cx::zero(p);
    for a in 1..=m {
        if let Some(r) = core.value(a as i64) {
            let z = hurwitz_zeta(&s_p, &(Float::with_val(p, a) / m));
            acc += r.to_cx(p).scale(&z);
        }
    }
    let scale = Float::with_val(p, m).pow(&Float::with_val(p, -&s_p));
    let v = acc.scale(&scale);
    Ok(Cx::new(
        Float::with_val(s.prec(), &v.re),
        Float::with_val(s.prec(), &v.im),
    ))
}

/// `L(s, chi)` for real `s`, including the imprimitive Euler factors.
pub fn l_value_real(chi: &DirichletCharacter, s: &Real) -> Result<Cx> {
    let base = l_primitive_real(chi.core(), s)?;
    Ok(&base * &euler_factor(chi, s))
}

/// `L(s, chi)` at a non-negative integer.
pub fn l_value(chi: &DirichletCharacter, s: u32, prec: u32) -> Result<Cx> {
    let core = chi.core();
    if s == 0 {
        let base = if core.modulus() == 1 {
            Cx::from_real(Float::with_val(prec, -0.5f64))
        } else {
            l_zero_primitive(core, prec)
        };
        return Ok(&base * &euler_factor(chi, &Float::new(prec)));
    }
    if s == 1 && core.modulus() == 1 {
        return Err(Error::Pole);
    }
    if core.modulus() == 1 && s % 2 == 0 {
        let z = Cx::from_real(zeta_value(s, prec));
        return Ok(&z * &euler_factor(chi, &Float::with_val(prec, s)));
    }
    l_value_real(chi, &Float::with_val(prec, s))
}

/// `L(0, chi0) = -(1/m) Σ chi0(a) a` for non-trivial primitive `chi0`.
fn l_zero_primitive(core: &DirichletCharacter, prec: u32) -> Cx {
    let m = core.modulus();
    let mut acc = Cx::zero(prec);
    for a in 1..=m {
        if let Some(r) = core.value(a as i64) {
            acc += r.to_cx(prec).scale_i64(a as i64);
        }
    }
    Cx::new(-(acc.re / m), -(acc.im / m))
}

/// Exact `L(0, chi)` for a real character.
pub fn l_value_zero_exact(chi: &DirichletCharacter) -> Option<Rational> {
    if !chi.is_real() {
        return None;
    }
    let core = chi.core();
    let m = core.modulus();
    let base = if m == 1 {
        Rational::from((-1, 2))
    } else {
        let s: i64 = (1..=m as i64).map(|a| core.real_value(a) * a).sum();
        Rational::from((-s, m as i64))
    };
    let euler: i64 = missing_primes(chi)
        .into_iter()
        .map(|q| 1 - core.real_value(q as i64))
        .product();
    Some(base * euler)
}

/// `L'(0, chi)`: log-gamma sum for the primitive core, product rule for the
/// Euler factors.
pub fn l_derivative_zero(chi: &DirichletCharacter, prec: u32) -> Cx {
    let p = prec + GUARD;
    let core = chi.core();
    let m = core.modulus();
    let (l0, d0) = if m == 1 {
        let half = Float::with_val(p, 0.5f64);
        let d = -(pi(p) * 2u32).ln() * &half;
        (Cx::from_real(-half), Cx::from_real(d))
    } else {
        // L'(0) = Σ chi(a) log Γ(a/m) - log(m) L(0)
        let l0 = l_zero_primitive(core, p);
        let mut acc = Cx::zero(p);
        for a in 1..=m {
            if let Some(r) = core.value(a as i64) {
                let lg = special::ln_gamma(&(Float::with_val(p, a) / m));
                acc += r.to_cx(p).scale(&lg);
            }
        }
        let lm = Float::with_val(p, m).ln();
        acc -= &l0.scale(&lm);
        (l0, acc)
    };
    let zero = Float::new(p);
    let e = euler_factor(chi, &zero);
    let de = euler_factor_derivative(chi, &zero);
    round(&(&(&d0 * &e) + &(&l0 * &de)), prec)
}

/// `L'(1, chi)` for non-principal `chi` by Euler–Maclaurin summation of
/// `-Σ chi(n) log(n)/n` over residue classes.
pub fn l_derivative_one_series(chi: &DirichletCharacter, prec: u32) -> Result<Cx> {
    if chi.core().modulus() == 1 {
        return Err(Error::Pole);
    }
    let p = prec + GUARD;
    let n_mod = chi.modulus();
    let (cut, terms) = em_parameters(p);
    let nf = Float::with_val(p, n_mod);
    // B_{2i}/(2i)! and H_{2i-1}, (2i-1)! reused across residue classes
    let mut coeffs = Vec::with_capacity(terms);
    let mut fact = rug::Integer::from(1);
    for i in 1..=terms {
        let r = 2 * i - 1;
        fact *= r as u64; // (2i-1)!
        let b = bernoulli_real(2 * i, p) / Float::with_val(p, rug::Integer::from(&fact * (2 * i as u64)));
        let h = Float::with_val(p, &harmonic(r as u64));
        coeffs.push((b, h, Float::with_val(p, &fact)));
        fact *= 2 * i as u64;
    }
    let mut total = Cx::zero(p);
    for a in 1..=n_mod {
        let Some(root) = chi.value(a as i64) else {
            continue;
        };
        let mut s = Float::new(p);
        for j in 0..cut {
            let x = Float::with_val(p, a + n_mod * j);
            s -= x.clone().ln() / x;
        }
        let x = Float::with_val(p, a + n_mod * cut);
        let lx = x.clone().ln();
        // regularized ∫_X^∞ f(x) dx / N
        s += Float::with_val(p, lx.square_ref()) / (nf.clone() * 2u32);
        // ½ f(X)
        s -= Float::with_val(p, &lx / &x) / 2u32;
        // - Σ B_{2i}/(2i)! N^{2i-1} f^{(2i-1)}(X),
        // f^{(r)}(x) = -(-1)^r r! x^{-(r+1)} (log x - H_r), r odd
        let inv_x = Float::with_val(p, x.recip_ref());
        let ratio = Float::with_val(p, &nf * &inv_x);
        let ratio2 = Float::with_val(p, ratio.square_ref());
        let mut pw = Float::with_val(p, &inv_x * &ratio); // N^{r} x^{-(r+1)} / N ... for r = 1: N x^{-2}
        for (b, h, fact) in &coeffs {
            let fr = Float::with_val(p, fact * &pw) * Float::with_val(p, &lx - h);
            // -(-1)^r with r odd gives +
            s -= Float::with_val(p, b * &fr);
            pw *= &ratio2;
        }
        total += root.to_cx(p).scale(&s);
    }
    Ok(round(&total, prec))
}

/// `L'(1, chi)` for odd `chi` through the functional equation:
/// `L'/L(1, chi) = -log(m/π) + γ + log 2 - L'/L(0, conj chi0)`, then the
/// product rule for Euler factors.
pub fn l_derivative_one_functional(chi: &DirichletCharacter, prec: u32) -> Result<Cx> {
    if chi.parity() != -1 {
        return Err(Error::Unsupported(
            "functional-equation route for L'(1) needs an odd character".into(),
        ));
    }
    let p = prec + GUARD;
    let core = chi.core().clone();
    let m = core.modulus();
    let bar = core.conj();
    let l0 = l_zero_primitive(&bar, p);
    let d0 = l_derivative_zero(&bar, p);
    let l1 = l_value_real(&core, &Float::with_val(p, 1))?;
    let log_m_pi = (Float::with_val(p, m) / pi(p)).ln();
    let c = -log_m_pi + euler_gamma(p) + ln2(p);
    let ratio = Cx::from_real(c) - d0.div(&l0);
    let d1_core = &ratio * &l1;
    let one = Float::with_val(p, 1);
    let e = euler_factor(chi, &one);
    let de = euler_factor_derivative(chi, &one);
    Ok(round(&(&(&d1_core * &e) + &(&l1 * &de)), prec))
}

/// `L'(s, chi)` at `s` in `{0, 1}`.
pub fn l_derivative(chi: &DirichletCharacter, s: u32, prec: u32) -> Result<Cx> {
    match s {
        0 => Ok(l_derivative_zero(chi, prec)),
        1 => l_derivative_one_series(chi, prec),
        _ => Err(Error::Unsupported(format!("L'(s) only at s = 0, 1 (got {s})"))),
    }
}

/// Derivative value served only after two independent routes agree.
///
/// At `s = 1` the series route is compared with the functional-equation route.
/// At `s = 0` the log-gamma route is compared with the functional equation
/// applied to the series value of `L'(1, conj chi)`. Even characters have no
/// second route and are served from the single route.
pub fn l_derivative_checked(chi: &DirichletCharacter, s: u32, prec: u32) -> Result<Cx> {
    let tol = Float::with_val(prec, 1) >> (prec as i32 * 3 / 4);
    let (a, b) = match s {
        1 => {
            let a = l_derivative_one_series(chi, prec)?;
            if chi.parity() != -1 {
                return Ok(a);
            }
            (a, l_derivative_one_functional(chi, prec)?)
        }
        0 => {
            let a = l_derivative_zero(chi, prec);
            if chi.parity() != -1 || !chi.is_primitive() {
                return Ok(a);
            }
            (a, l_derivative_zero_functional(chi, prec)?)
        }
        _ => return Err(Error::Unsupported(format!("L'(s) only at s = 0, 1 (got {s})"))),
    };
    let diff = (&a - &b).abs();
    let scale = a.abs().max(&Float::with_val(prec, 1));
    if diff > tol * scale {
        return Err(Error::Domain(format!(
            "L'({s}) routes disagree for {chi}: difference {}",
            diff.to_f64()
        )));
    }
    Ok(a)
}

/// `L'(0, chi)` for odd primitive `chi` from the series value of `L'(1, conj chi)`.
fn l_derivative_zero_functional(chi: &DirichletCharacter, prec: u32) -> Result<Cx> {
    let p = prec + GUARD;
    let m = chi.modulus();
    let bar = chi.conj();
    let d1 = l_derivative_one_series(&bar, p)?;
    let l1 = l_value_real(&bar, &Float::with_val(p, 1))?;
    let l0 = l_zero_primitive(chi, p);
    let log_m_pi = (Float::with_val(p, m) / pi(p)).ln();
    let c = -log_m_pi + euler_gamma(p) + ln2(p);
    // L'/L(0, chi) = c - L'/L(1, conj chi)
    let ratio = Cx::from_real(c) - d1.div(&l1);
    Ok(round(&(&ratio * &l0), prec))
}

fn round(z: &Cx, prec: u32) -> Cx {
    Cx::new(Float::with_val(prec, &z.re), Float::with_val(prec, &z.im))
}

/// `Λ(s, psi_D) = π^{-(s+1)/2} Γ((s+1)/2) L(s, psi_D)` for real `s`.
pub fn completed_lambda(psi: &DirichletCharacter, s: &Real) -> Result<Real> {
    check_quadratic(psi)?;
    let p = s.prec() + GUARD;
    let s = Float::with_val(p, s);
    let half = Float::with_val(p, &s + 1u32) / 2u32;
    let l = l_value_real(psi, &s)?;
    let v = pi(p).pow(&Float::with_val(p, -&half)) * special::gamma(&half) * l.re;
    Ok(Float::with_val(p - GUARD, v))
}

fn check_quadratic(psi: &DirichletCharacter) -> Result<()> {
    if !psi.is_real() || !psi.is_primitive() || psi.parity() != -1 || psi.modulus() < 3 {
        return Err(Error::Domain(format!(
            "{psi} is not the character of an imaginary quadratic field"
        )));
    }
    Ok(())
}

/// `|Λ(1) - (i/W) Λ(0)|`, the functional equation at `s = 0`.
pub fn functional_equation_residual(psi: &DirichletCharacter, prec: u32) -> Result<Real> {
    let p = prec + GUARD;
    let l1 = completed_lambda(psi, &Float::with_val(p, 1))?;
    let l0 = completed_lambda(psi, &Float::new(p))?;
    let w = psi.gauss_sum(p)?;
    let rhs = Cx::i(p).div(&w).scale(&l0);
    let diff = &Cx::from_real(l1) - &rhs;
    Ok(Float::with_val(prec, diff.abs()))
}

/// `Λ'/Λ(1) = -½ log π + ½ psi(1) + L'(1)/L(1)`, from the series value of `L'(1)`.
pub fn lambda_log_derivative_one(psi: &DirichletCharacter, prec: u32) -> Result<Real> {
    check_quadratic(psi)?;
    let p = prec + GUARD;
    let d1 = l_derivative_one_series(psi, p)?;
    let l1 = l_value_real(psi, &Float::with_val(p, 1))?;
    let v = -pi(p).ln() / 2u32 + special::digamma(&Float::with_val(p, 1)) / 2u32
        + Float::with_val(p, &d1.re / &l1.re);
    Ok(Float::with_val(prec, v))
}

/// `Λ'/Λ(1) = ½(log π - psi(½) - 2 L'(0)/L(0)) - log|D|`, from values at 0.
pub fn lambda_log_derivative_one_via_zero(psi: &DirichletCharacter, prec: u32) -> Result<Real> {
    check_quadratic(psi)?;
    let p = prec + GUARD;
    let d0 = l_derivative_zero(psi, p);
    let l0 = l_value(psi, 0, p)?;
    let v = (pi(p).ln()
        - special::digamma(&Float::with_val(p, 0.5f64))
        - Float::with_val(p, &d0.re / &l0.re) * 2u32)
        / 2u32
        - Float::with_val(p, psi.modulus()).ln();
    Ok(Float::with_val(prec, v))
}
