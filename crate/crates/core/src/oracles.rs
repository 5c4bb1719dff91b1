//! Exact arithmetic oracles (sums of squares, class numbers, ideal counts)
//! and the theta-power identities built on them.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::arith::{divisors, factor};
use crate::chars::{is_fundamental_discriminant, kronecker_character, kronecker_symbol, DirichletCharacter};
use crate::coeffs::{
    eisenstein_coefficients, mock_coefficients, sigma_twisted_exact, EisSpec, FourierSeries, Side,
};
use crate::config::PrecisionConfig;
use crate::forms::{assemble_harmonic, HarmonicMaassForm};
use crate::lfun::{l_derivative_zero, l_value, l_value_zero_exact, lambda_log_derivative_one, zeta_value};
use crate::mp::{euler_gamma, fmt_real, ln2, ln_int, pi, Cx, Real};
use crate::special::bernoulli;
use crate::verify::{fit_holomorphic_scale, modularity_samples, modularity_suite_for, SuiteReport};
use crate::{Error, Result};

/// `r_{two_k}(n)` for all `n <= n_max`, by convolving the `r_1` histogram
/// `two_k` times.
pub fn sum_of_squares_table(n_max: usize, two_k: u32) -> Vec<u128> {
    let squares: Vec<(usize, u128)> = (0..)
        .map(|x: usize| x * x)
        .take_while(|&s| s <= n_max)
        .map(|s| (s, if s == 0 { 1 } else { 2 }))
        .collect();
    let mut r = vec![0u128; n_max + 1];
    r[0] = 1;
    for _ in 0..two_k {
        r = (0..=n_max)
            .into_par_iter()
            .map(|n| squares.iter().take_while(|(s, _)| *s <= n).map(|(s, c)| c * r[n - s]).sum())
            .collect();
    }
    r
}

pub fn sum_of_squares_count(n: u64, two_k: u32) -> u128 {
    sum_of_squares_table(n as usize, two_k)[n as usize]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ImaginaryQuadraticData {
    pub d: i64,
    pub h: u64,
    pub u: u64,
}

pub fn unit_count(d: i64) -> u64 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

fn check_imaginary(d: i64) -> Result<()> {
    if d >= 0 || !is_fundamental_discriminant(d) {
        return Err(Error::NotFundamental(d));
    }
    Ok(())
}

/// Reduced forms `(a, b, c)` of discriminant `d`:
/// `|b| <= a <= c`, `b >= 0` whenever `|b| = a` or `a = c`.
pub fn reduced_forms(d: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            if crate::arith::gcd_i(crate::arith::gcd_i(a, b) as i64, c) != 1 {
                continue;
            }
            out.push((a, b, c));
        }
        a += 1;
    }
    out
}

pub fn class_number(d: i64) -> Result<ImaginaryQuadraticData> {
    check_imaginary(d)?;
    Ok(ImaginaryQuadraticData { d, h: reduced_forms(d).len() as u64, u: unit_count(d) })
}

/// `L(0, psi_D) = 2h/u`, with `h` from reduced forms and `L(0)` from the
/// generalized Bernoulli number.
pub fn class_number_formula_holds(d: i64) -> Result<bool> {
    let data = class_number(d)?;
    let l0 = l_value_zero_exact(&kronecker_character(d)?).expect("real character");
    Ok(l0 == Rational::from((2 * data.h as i64, data.u as i64)))
}

/// `R_D(n) = Σ_{c | n} psi_D(c)`, the number of ideals of norm `n`.
pub fn hecke_r(d: i64, n: u64) -> Result<i64> {
    check_imaginary(d)?;
    if n == 0 {
        return Err(Error::Domain("R_D(n) needs n >= 1".into()));
    }
    Ok(divisors(n).into_iter().map(|c| kronecker_symbol(d, c)).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RplusMethod {
    Definitional,
    Proposition,
}

/// Coefficients of the weight-one mock form with shadow `E_{1,D}`.
///
/// Definitional: `R_D(n) log n - 2 Σ_{c|n} psi_D(n/c) log c`, and
/// `(2 log 2 + log π + γ) h/u - L'(0, psi_D)` at `n = 0`.
/// Proposition: the sum over primes dividing `n` that are ramified or inert,
/// and `(2h/u)(Λ'/Λ(1) + log|D|)` at `n = 0`.
pub fn hecke_rplus(d: i64, n: u64, method: RplusMethod, prec: u32) -> Result<Real> {
    check_imaginary(d)?;
    let p = prec + crate::special::GUARD;
    let out = match (method, n) {
        (RplusMethod::Definitional, 0) => {
            let data = class_number(d)?;
            let c = ln2(p) * 2u32 + pi(p).ln() + euler_gamma(p);
            let hu = Float::with_val(p, data.h) / data.u;
            let dl = l_derivative_zero(&kronecker_character(d)?, p).re;
            c * hu - dl
        }
        (RplusMethod::Proposition, 0) => {
            let data = class_number(d)?;
            let ratio = lambda_log_derivative_one(&kronecker_character(d)?, p)?;
            let two_hu = Float::with_val(p, 2 * data.h) / data.u;
            two_hu * (ratio + ln_int(p, d.unsigned_abs()))
        }
        (RplusMethod::Definitional, n) => {
            let mut acc = Float::with_val(p, hecke_r(d, n)?) * ln_int(p, n);
            for c in divisors(n) {
                let s = kronecker_symbol(d, n / c);
                if s != 0 && c > 1 {
                    acc -= ln_int(p, c) * (2 * s);
                }
            }
            acc
        }
        (RplusMethod::Proposition, n) => {
            let r = hecke_r(d, n)?;
            let mut acc = Float::new(p);
            for (q, e) in factor(n) {
                match kronecker_symbol(d, q) {
                    0 => acc -= ln_int(p, q) * (r * e as i64),
                    -1 => acc -= ln_int(p, q) * ((e as i64 + 1) * hecke_r(d, n / q)?),
                    _ => {}
                }
            }
            acc
        }
    };
    Ok(Float::with_val(prec, out))
}

/// `(E_k, Ẽ_k)` at level one: `E_k = 1 - (2k/B_k) Σ sigma_{k-1}(n) q^n`
/// from Bernoulli numbers, and the mock coefficients divided by `zeta(k)`.
pub fn normalized_level_one(k: u32, n_max: usize, prec: u32) -> Result<(FourierSeries, FourierSeries)> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::Domain(format!("level-one series need even k >= 4, got {k}")));
    }
    let spec = EisSpec::level_one(k)?;
    let factor = -Rational::from(2 * k) / bernoulli(k as usize);
    let coeffs = (0..=n_max)
        .map(|n| {
            if n == 0 {
                return Cx::one(prec);
            }
            let s: Integer = divisors(n as u64).into_iter().map(|d| Integer::from(d).pow(k - 1)).sum();
            Cx::from_real(Float::with_val(prec, &factor * Rational::from(s)))
        })
        .collect();
    let e = FourierSeries {
        spec: spec.clone(),
        side: Side::Eisenstein,
        weight: k as i64,
        level: 1,
        character: DirichletCharacter::trivial(1),
        coeffs,
        quasi_term: Float::new(prec),
    };
    let z = Cx::from_real(zeta_value(k, prec)).recip();
    let tilde = mock_coefficients(&spec, n_max, prec)?.scaled(&z);
    Ok((e, tilde))
}

/// One exact row of a theta-power identity.
#[derive(Clone, Debug, Serialize)]
pub struct ThetaRow {
    pub n: u64,
    /// Brute-force `r_{2k}(n)`.
    pub count: String,
    /// The divisor-sum side of the identity, exact.
    pub identity: String,
    /// The Eisenstein combination evaluated numerically.
    pub eisenstein: String,
    pub exact_match: bool,
    pub numeric_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizationCandidate {
    pub name: String,
    pub constant: [String; 2],
    pub coefficient_one: [String; 2],
    pub modularity: SuiteReport,
    /// Scale on the holomorphic part that best restores modularity; 1 for a
    /// correctly normalized form.
    pub fitted_holomorphic_scale: f64,
    pub modular: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizationAudit {
    pub power: u32,
    /// Printed over derived, at `n = 0` and the min/max over `1 <= n <= n_max`.
    pub constant_ratio: f64,
    pub coefficient_ratio_range: [f64; 2],
    pub candidates: Vec<NormalizationCandidate>,
    pub verdict: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaReport {
    pub power: u32,
    pub rows: Vec<ThetaRow>,
    pub all_exact: bool,
    pub max_numeric_residual: f64,
    pub audit: Option<NormalizationAudit>,
}

fn spec(k: u32, psi: &DirichletCharacter, rho: &DirichletCharacter, t: u64) -> EisSpec {
    EisSpec::new(k, psi.clone(), rho.clone(), t).expect("theta specs satisfy parity")
}

/// `Theta^{power} = Σ lambda_j E_{k}^{psi_j, rho_j, t_j}`.
pub fn theta_decomposition(power: u32, prec: u32) -> Result<Vec<(Cx, EisSpec)>> {
    let one = DirichletCharacter::trivial(1);
    let chi = kronecker_character(-4)?;
    let pi = pi(prec);
    let re = |x: Real| Cx::from_real(x);
    let im = |x: Real| Cx::new(Float::new(prec), x);
    Ok(match power {
        // Theta^2 = 4 E_{1,-4} and E_1^{psi_{-4},1,1} = -2πi E_{1,-4}
        2 => vec![(im(Float::with_val(prec, 2) / &pi), spec(1, &chi, &one, 1))],
        4 => vec![(re(-Float::with_val(prec, 2) / pi.square()), spec(2, &one, &one, 4))],
        6 => {
            let p3 = Float::with_val(prec, (&pi).pow(3u32));
            vec![
                (im(-Float::with_val(prec, 4) / &p3), spec(3, &chi, &one, 1)),
                (re(Float::with_val(prec, 32) / &p3), spec(3, &one, &chi, 1)),
            ]
        }
        8 => {
            let p4 = Float::with_val(prec, (&pi).pow(4u32));
            vec![
                (re(Float::with_val(prec, 6) / &p4), spec(4, &one, &one, 1)),
                (re(Float::with_val(prec, -12) / &p4), spec(4, &one, &one, 2)),
                (re(Float::with_val(prec, 96) / &p4), spec(4, &one, &one, 4)),
            ]
        }
        _ => return Err(Error::Unsupported(format!("theta power {power}; only 2, 4, 6, 8"))),
    })
}

/// The divisor-sum side of the classical `r_{2k}` identities, exact.
pub fn theta_identity(power: u32, n: u64) -> Result<Integer> {
    let one = DirichletCharacter::trivial(1);
    let chi = kronecker_character(-4)?;
    let sigma = |k1: u32, m: u64, a: &DirichletCharacter, b: &DirichletCharacter| -> Integer {
        if m == 0 {
            return Integer::new();
        }
        sigma_twisted_exact(k1, m, a, b).as_integer().expect("real characters give integers")
    };
    let part = |m: u64, d: u64| if m % d == 0 { m / d } else { 0 };
    Ok(match power {
        2 => Integer::from(4 * hecke_r(-4, n)?),
        4 => 8 * (sigma(1, n, &one, &one) - 4 * sigma(1, part(n, 4), &one, &one)),
        6 => 4 * (4 * sigma(2, n, &chi, &one) - sigma(2, n, &one, &chi)),
        8 => {
            16 * (sigma(3, n, &one, &one) - 2 * sigma(3, part(n, 2), &one, &one)
                + 16 * sigma(3, part(n, 4), &one, &one))
        }
        _ => return Err(Error::Unsupported(format!("theta power {power}"))),
    })
}

/// Harmonic form `Σ lambda_j F_j` whose shadow is `Σ conj(lambda_j) E_j`;
/// with `conj` scalars this has shadow `Theta^{power}`.
fn combined_form(parts: &[(Cx, EisSpec)], n_max: usize, prec: u32) -> Result<HarmonicMaassForm> {
    let mut acc: Option<HarmonicMaassForm> = None;
    let level = parts.iter().map(|(_, s)| s.level()).fold(1, crate::arith::lcm);
    for (lambda, s) in parts {
        let f = assemble_harmonic(s, n_max, prec)?.scaled(lambda);
        acc = Some(match acc {
            None => f,
            Some(mut a) => {
                for (x, y) in a.holo.coeffs.iter_mut().zip(&f.holo.coeffs) {
                    *x += y;
                }
                for (x, y) in a.shadow.coeffs.iter_mut().zip(&f.shadow.coeffs) {
                    *x += y;
                }
                a
            }
        });
    }
    let mut f = acc.expect("nonempty decomposition");
    f.level = level;
    f.character = f.character.lift_to(level);
    Ok(f)
}

/// The holomorphic coefficients as printed in the classical closed forms.
fn printed_theta_mock(power: u32, n: u64, prec: u32) -> Result<Cx> {
    let p = prec + crate::special::GUARD;
    let pi = pi(p);
    let nn = Float::with_val(p, n);
    let v = match (power, n) {
        (2, 0) => {
            let chi = kronecker_character(-4)?;
            ln2(p) * 2u32 + pi.ln() + euler_gamma(p) - l_derivative_zero(&chi, p).re * 4u32
        }
        (2, n) => hecke_rplus(-4, n, RplusMethod::Definitional, p)? * 4u32,
        (4, 0) => -(ln2(p) * 16u32) / (pi * 8u32),
        (4, n) => -Float::with_val(p, sum_of_squares_count(n, 4)) / nn / (pi * 8u32),
        (6, 0) => {
            let l2 = l_value(&kronecker_character(-4)?, 2, p)?.re;
            -(l2 * 16u32) / (pi.square() * 16u32)
        }
        (6, n) => {
            let one = DirichletCharacter::trivial(1);
            let s = sigma_twisted_exact(2, n, &one, &kronecker_character(-4)?).as_integer().unwrap();
            let r6 = Integer::from(sum_of_squares_count(n, 6));
            let num = Float::with_val(p, r6 + 8 * s) / nn.square();
            -num / (pi.square() * 16u32)
        }
        (8, 0) => -(zeta_value(3, p) * 8u32) / (Float::with_val(p, (&pi).pow(3u32)) * 16u32),
        (8, n) => {
            let r8 = Float::with_val(p, sum_of_squares_count(n, 8));
            -(r8 / Float::with_val(p, (&nn).pow(3u32))) / (Float::with_val(p, (&pi).pow(3u32)) * 16u32)
        }
        _ => return Err(Error::Unsupported(format!("theta power {power}"))),
    };
    Ok(Cx::from_real(Float::with_val(prec, v)))
}

fn ratio(a: &Cx, b: &Cx) -> f64 {
    if b.is_zero() {
        return f64::NAN;
    }
    a.div(b).re.to_f64()
}

/// Compares the derived mock form for `Theta^{power}` with the printed one:
/// coefficient ratios and the modularity suite for each candidate, both
/// carrying the same non-holomorphic part.
pub fn normalization_audit(power: u32, cfg: &PrecisionConfig, count: usize, tol: f64) -> Result<NormalizationAudit> {
    let prec = cfg.bits;
    let parts = theta_decomposition(power, prec)?;
    let conj_parts: Vec<(Cx, EisSpec)> = parts.iter().map(|(l, s)| (l.conj(), s.clone())).collect();
    let derived = |n: usize| combined_form(&conj_parts, n, prec);
    let printed = |n: usize| -> Result<HarmonicMaassForm> {
        let mut f = combined_form(&conj_parts, n, prec)?;
        for (i, c) in f.holo.coeffs.iter_mut().enumerate() {
            *c = printed_theta_mock(power, i as u64, prec)?;
        }
        Ok(f)
    };
    let reference = derived(cfg.n_max.min(64))?;
    let printed_ref = printed(cfg.n_max.min(64))?;
    let constant_ratio = ratio(&printed_ref.holo.coeffs[0], &reference.holo.coeffs[0]);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for n in 1..reference.holo.coeffs.len() {
        let r = ratio(&printed_ref.holo.coeffs[n], &reference.holo.coeffs[n]);
        if r.is_finite() {
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }

    let mut candidates = Vec::new();
    let builders: [(&str, &dyn Fn(usize) -> Result<HarmonicMaassForm>); 2] =
        [("derived", &derived), ("printed", &printed)];
    for (name, build) in builders {
        let (report, form) = modularity_suite_for(build, format!("Theta^{power} mock, {name}"), cfg, count, tol)?;
        let samples = modularity_samples(form.level, count, cfg.seed, prec);
        let scale = fit_holomorphic_scale(&form, &samples)?;
        candidates.push(NormalizationCandidate {
            name: name.into(),
            constant: [fmt_real(&form.holo.coeffs[0].re), fmt_real(&form.holo.coeffs[0].im)],
            coefficient_one: [fmt_real(&form.holo.coeffs[1].re), fmt_real(&form.holo.coeffs[1].im)],
            modular: report.pass,
            modularity: report,
            fitted_holomorphic_scale: scale,
        });
    }
    let modular: Vec<&str> = candidates.iter().filter(|c| c.modular).map(|c| c.name.as_str()).collect();
    let verdict = match modular.as_slice() {
        [] => "neither candidate is modular".to_string(),
        [one] => format!("only the {one} normalization is modular"),
        _ => "both candidates are modular".to_string(),
    };
    Ok(NormalizationAudit {
        power,
        constant_ratio,
        coefficient_ratio_range: [lo, hi],
        candidates,
        verdict,
    })
}

/// `r_{power}(n)` against the exact identity and the numerical Eisenstein
/// combination for `1 <= n <= n_max`, optionally with the normalization audit.
pub fn theta_power_report(power: u32, n_max: usize, cfg: &PrecisionConfig, audit: bool) -> Result<ThetaReport> {
    let prec = cfg.bits;
    let parts = theta_decomposition(power, prec)?;
    let counts = sum_of_squares_table(n_max, power);
    let mut theta = vec![Cx::zero(prec); n_max + 1];
    for (lambda, s) in &parts {
        let e = eisenstein_coefficients(s, n_max, prec)?;
        for (acc, c) in theta.iter_mut().zip(&e.coeffs) {
            *acc += lambda * c;
        }
    }
    let rows = (1..=n_max as u64)
        .into_par_iter()
        .map(|n| {
            let count = Integer::from(counts[n as usize]);
            let identity = theta_identity(power, n)?;
            let num = &theta[n as usize];
            let diff = (num - &Cx::from_real(Float::with_val(prec, &count))).abs().to_f64();
            Ok(ThetaRow {
                n,
                exact_match: count == identity,
                count: count.to_string(),
                identity: identity.to_string(),
                eisenstein: fmt_real(&num.re),
                numeric_residual: diff,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_exact = rows.iter().all(|r| r.exact_match);
    let max_numeric_residual = rows.iter().map(|r| r.numeric_residual).fold(0.0, f64::max);
    let audit = if audit { Some(normalization_audit(power, cfg, 10, cfg.tol.max(1e-10))?) } else { None };
    Ok(ThetaReport { power, rows, all_exact, max_numeric_residual, audit })
}

/// `u(-4) Ẽ_{1,-4}` from the weight-one mock engine,
/// `Ẽ_{1,D} = (2πi)^{-1} G + (log π + γ) E_{1,D}`.
pub fn theta_two_chain(n_max: usize, prec: u32) -> Result<Vec<Cx>> {
    let chi = kronecker_character(-4)?;
    let s = EisSpec::new(1, chi, DirichletCharacter::trivial(1), 1)?;
    let g = mock_coefficients(&s, n_max, prec)?;
    let inv_two_pi_i = Cx::new(Float::new(prec), -(pi(prec) * 2u32).recip());
    let c = pi(prec).ln() + euler_gamma(prec);
    (0..=n_max as u64)
        .map(|n| {
            let e1 = if n == 0 {
                Float::with_val(prec, 0.25)
            } else {
                Float::with_val(prec, hecke_r(-4, n)?)
            };
            let v = &(&inv_two_pi_i * &g.coeffs[n as usize]) + &Cx::from_real(Float::with_val(prec, &c * &e1));
            Ok(v.scale_i64(4))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    #[test]
    fn sums_of_squares_examples() {
        assert_eq!(sum_of_squares_count(5, 2), 8);
        assert_eq!(sum_of_squares_count(2, 4), 24);
        assert_eq!(sum_of_squares_count(1, 6), 12);
        assert_eq!(sum_of_squares_count(2, 6), 60);
        assert_eq!(sum_of_squares_count(2, 8), 112);
        assert_eq!(sum_of_squares_count(0, 8), 1);
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number(-4).unwrap(), ImaginaryQuadraticData { d: -4, h: 1, u: 4 });
        assert_eq!(class_number(-23).unwrap().h, 3);
        assert_eq!(class_number(-163).unwrap().h, 1);
        assert_eq!(reduced_forms(-23), vec![(1, 1, 6), (2, -1, 3), (2, 1, 3)]);
        assert!(class_number(-5).is_err());
        assert!(class_number(5).is_err());
        let ones: Vec<i64> = (-200..0)
            .filter(|&d| is_fundamental_discriminant(d))
            .filter(|&d| class_number(d).unwrap().h == 1)
            .collect();
        assert_eq!(ones, vec![-163, -67, -43, -19, -11, -8, -7, -4, -3]);
    }

    #[test]
    fn hecke_examples() {
        assert_eq!(hecke_r(-4, 5).unwrap(), 2);
        assert_eq!(hecke_r(-4, 3).unwrap(), 0);
        assert_eq!(hecke_r(-4, 9).unwrap(), 1);
        for m in [RplusMethod::Definitional, RplusMethod::Proposition] {
            assert!(hecke_rplus(-4, 1, m, P).unwrap().abs() < 1e-35);
            let three = hecke_rplus(-4, 3, m, P).unwrap() + ln_int(P, 3) * 2u32;
            assert!(three.abs() < 1e-35);
            assert!(hecke_rplus(-4, 9, m, P).unwrap().abs() < 1e-35);
        }
    }

    #[test]
    fn rplus_zero_two_routes() {
        for d in [-3, -4, -7, -23] {
            let a = hecke_rplus(d, 0, RplusMethod::Definitional, P).unwrap();
            let b = hecke_rplus(d, 0, RplusMethod::Proposition, P).unwrap();
            assert!((a - b).abs() < 1e-30, "D = {d}");
        }
    }

    #[test]
    fn level_one_normalization() {
        let (e4, tilde) = normalized_level_one(4, 50, P).unwrap();
        assert_eq!(e4.coeffs[1].re, 240);
        let z4 = zeta_value(4, P);
        let expect = -(pi(P) * zeta_value(3, P)) / (Float::with_val(P, &z4) * 12u32);
        assert!((tilde.coeffs[0].re.clone() - expect).abs() < 1e-35);
        let e = eisenstein_coefficients(&EisSpec::level_one(4).unwrap(), 50, P).unwrap();
        for n in 0..=50 {
            let d = (&e.coeffs[n] - &e4.coeffs[n].scale(&z4)).abs();
            assert!(d < Float::with_val(P, e.coeffs[n].abs()) * 1e-35 + 1e-35);
        }
    }

    #[test]
    fn theta_identities_small() {
        assert_eq!(theta_identity(4, 4).unwrap(), 24);
        assert_eq!(theta_identity(6, 2).unwrap(), 60);
        assert_eq!(theta_identity(8, 2).unwrap(), 112);
        let cfg = PrecisionConfig::default();
        for power in [2, 4, 6, 8] {
            let r = theta_power_report(power, 40, &cfg, false).unwrap();
            assert!(r.all_exact, "power {power}");
            assert!(r.max_numeric_residual < 1e-25, "power {power}: {}", r.max_numeric_residual);
        }
    }

    #[test]
    fn theta_two_chain_matches_closed_form() {
        let chain = theta_two_chain(60, P).unwrap();
        for (n, c) in chain.iter().enumerate() {
            let printed = printed_theta_mock(2, n as u64, P).unwrap();
            assert!((c - &printed).abs() < 1e-30, "n = {n}");
        }
    }

    #[test]
    fn class_number_formula_small() {
        for d in [-3, -4, -7, -8, -15, -20, -23, -24] {
            assert!(class_number_formula_holds(d).unwrap(), "D = {d}");
        }
    }
}
