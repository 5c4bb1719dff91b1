//! Fourier coefficients of the Eisenstein series `E_k^{psi,rho,t}` and of the
//! holomorphic parts of their harmonic pre-images.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer};

use crate::arith::{divisors, gcd, lcm, mobius, prime_divisors};
use crate::chars::{DirichletCharacter, Root};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::lfun;
use crate::mp::{euler_gamma, pi, Cx, Real};
use crate::special::GUARD;

/// The data `(k, psi, rho, t)` selecting one Eisenstein series.
#[derive(Clone, Debug, PartialEq)]
pub struct EisSpec {
    pub k: u32,
    pub psi: DirichletCharacter,
    pub rho: DirichletCharacter,
    pub t: u64,
}

/// Which family of closed formulas produces the mock coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MockBranch {
    /// `k > 2`, or `k = 2` with a non-trivial pair.
    Generic,
    /// `k = 2` with both characters trivial.
    TrivialWeightTwo,
    /// `k = 1`.
    WeightOne,
}

impl EisSpec {
    pub fn new(k: u32, psi: DirichletCharacter, rho: DirichletCharacter, t: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("weight k must be at least 1".into()));
        }
        if t == 0 {
            return Err(Error::Domain("t must be at least 1".into()));
        }
        let product = psi.parity() * rho.parity();
        let expected = if k % 2 == 0 { 1 } else { -1 };
        if product != expected {
            return Err(Error::Parity {
                k: k as i64,
                product,
                expected,
            });
        }
        Ok(EisSpec { k, psi, rho, t })
    }

    /// Level-one spec `(k, 1_1, 1_1, 1)`.
    pub fn level_one(k: u32) -> Result<Self> {
        let one = DirichletCharacter::trivial(1);
        Self::new(k, one.clone(), one, 1)
    }

    pub fn l(&self) -> u64 {
        self.psi.modulus()
    }

    pub fn m(&self) -> u64 {
        self.rho.modulus()
    }

    /// `t L M`.
    pub fn level(&self) -> u64 {
        self.t * self.l() * self.m()
    }

    /// `psi rho` as a character modulo the level.
    pub fn character(&self) -> DirichletCharacter {
        self.psi.mul(&self.rho).lift_to(self.level())
    }

    pub fn is_trivial_pair(&self) -> bool {
        self.k == 2 && self.psi.is_trivial() && self.rho.is_trivial()
    }

    pub fn branch(&self) -> MockBranch {
        match self.k {
            1 => MockBranch::WeightOne,
            2 if self.is_trivial_pair() => MockBranch::TrivialWeightTwo,
            _ => MockBranch::Generic,
        }
    }

    fn psi_is_one_one(&self) -> bool {
        self.psi.modulus() == 1
    }

    pub fn describe(&self) -> String {
        format!(
            "k={} psi={} rho={} t={}",
            self.k,
            self.psi.label_json(),
            self.rho.label_json(),
            self.t
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Eisenstein,
    Mock,
}

/// A truncated `q`-expansion `Σ_{n <= n_max} a(n) q^n`, plus an optional
/// multiple of `1/y`.
#[derive(Clone, Debug)]
pub struct FourierSeries {
    pub spec: EisSpec,
    pub side: Side,
    pub weight: i64,
    pub level: u64,
    pub character: DirichletCharacter,
    pub coeffs: Vec<Cx>,
    /// Coefficient of `1/y`; zero except for the raw weight-two building block.
    pub quasi_term: Real,
}

impl FourierSeries {
    pub fn n_max(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn prec(&self) -> u32 {
        self.quasi_term.prec()
    }

    pub fn coeff(&self, n: usize) -> &Cx {
        &self.coeffs[n]
    }

    pub fn scaled(&self, c: &Cx) -> FourierSeries {
        let mut out = self.clone();
        for a in &mut out.coeffs {
            *a = &*a * c;
        }
        out.quasi_term = Float::with_val(self.prec(), &self.quasi_term * &c.re);
        out
    }
}

/// `Σ_{d | gcd(ell, c)} d mu(ell/d) conj(rho0)(ell/d) rho0(c/d)` as `(root, integer)` terms.
fn inner_terms(rho: &DirichletCharacter, c: u64) -> Vec<(Root, i64)> {
    let ell = rho.ell();
    let core = rho.core();
    let mut out = Vec::new();
    for d in divisors(gcd(ell, c)) {
        let mu = mobius(ell / d);
        if mu == 0 {
            continue;
        }
        let (Some(a), Some(b)) = (core.value((ell / d) as i64), core.value((c / d) as i64)) else {
            continue;
        };
        out.push((a.conj().mul(b), d as i64 * mu));
    }
    out
}

fn value_order(psi: &DirichletCharacter, rho: &DirichletCharacter) -> u64 {
    lcm(psi.group().exponent(), rho.core().group().exponent())
}

/// Exact `Σ_{c | n} psi(n/c) w(c) I_rho(c)` with integer weights `w`.
fn divisor_sum_exact(
    n: u64,
    psi: &DirichletCharacter,
    rho: &DirichletCharacter,
    w: impl Fn(u64) -> Integer,
) -> Cyclo {
    let order = value_order(psi, rho);
    let mut acc = Cyclo::zero(order);
    if n == 0 {
        return acc;
    }
    for c in divisors(n) {
        let Some(pv) = psi.value((n / c) as i64) else {
            continue;
        };
        let terms = inner_terms(rho, c);
        if terms.is_empty() {
            continue;
        }
        let wc = w(c);
        for (r, m) in terms {
            let root = pv.mul(r);
            acc.add_root(root.num(), root.den(), Integer::from(&wc * m));
        }
    }
    acc
}

/// `Σ_{c | n} psi(n/c) w(c) I_rho(c)` with real weights, rendered at `prec`.
fn divisor_sum_real(
    n: u64,
    psi: &DirichletCharacter,
    rho: &DirichletCharacter,
    prec: u32,
    w: impl Fn(u64) -> Real,
) -> Cx {
    if n == 0 {
        return Cx::zero(prec);
    }
    let order = value_order(psi, rho);
    let mut slots: Vec<Real> = vec![Float::new(prec); order as usize];
    for c in divisors(n) {
        let Some(pv) = psi.value((n / c) as i64) else {
            continue;
        };
        let terms = inner_terms(rho, c);
        if terms.is_empty() {
            continue;
        }
        let wc = w(c);
        for (r, m) in terms {
            let root = pv.mul(r);
            let j = root.num() * (order / root.den());
            slots[j as usize] += Float::with_val(prec, &wc * m);
        }
    }
    let mut acc = Cx::zero(prec);
    for (j, v) in slots.into_iter().enumerate() {
        if !v.is_zero() {
            acc += Cx::root_of_unity(prec, j as i64, order).scale(&v);
        }
    }
    acc
}

/// Exact twisted divisor sum `σ^{psi,rho}_{k-1}(n)`; zero for `n = 0`.
pub fn sigma_twisted_exact(
    k_minus_1: u32,
    n: u64,
    psi: &DirichletCharacter,
    rho: &DirichletCharacter,
) -> Cyclo {
    divisor_sum_exact(n, psi, rho, |c| Integer::from(c).pow(k_minus_1))
}

pub fn sigma_twisted(
    k_minus_1: u32,
    n: u64,
    psi: &DirichletCharacter,
    rho: &DirichletCharacter,
    prec: u32,
) -> Cx {
    sigma_twisted_exact(k_minus_1, n, psi, rho).to_complex(prec)
}

/// `σ` evaluated at `n / t`, zero unless `t | n`.
pub fn sigma_at_ratio(
    k_minus_1: u32,
    n: u64,
    t: u64,
    psi: &DirichletCharacter,
    rho: &DirichletCharacter,
    prec: u32,
) -> Cx {
    if n == 0 || n % t != 0 {
        return Cx::zero(prec);
    }
    sigma_twisted(k_minus_1, n / t, psi, rho, prec)
}

/// `Σ_{c | n} conj(psi)(n/c) log(c) Σ_d d mu(ell/d) rho0(ell/d) conj(rho0)(c/d)`.
pub fn sigma_log_twisted(n: u64, psi: &DirichletCharacter, rho: &DirichletCharacter, prec: u32) -> Cx {
    let p = prec + GUARD;
    let v = divisor_sum_real(n, &psi.conj(), &rho.conj(), p, |c| Float::with_val(p, c).ln());
    round(&v, prec)
}

/// `a_k(s; n, psi, rho) = Σ_{c | n} psi(n/c) c^{2s+k-1} Σ_d d mu(ell/d) rho0(ell/d) conj(rho0)(c/d)`.
pub fn a_coeff(s: &Real, k: i64, n: u64, psi: &DirichletCharacter, rho: &DirichletCharacter) -> Cx {
    let prec = s.prec();
    let p = prec + GUARD;
    let e = Float::with_val(p, s * 2u32) + (k - 1);
    let v = divisor_sum_real(n, psi, &rho.conj(), p, |c| Float::with_val(p, c).pow(&e));
    round(&v, prec)
}

fn round(z: &Cx, prec: u32) -> Cx {
    Cx::new(Float::with_val(prec, &z.re), Float::with_val(prec, &z.im))
}

/// `Π_{p | n} (1 - 1/p)`.
fn phi_ratio(n: u64, prec: u32) -> Real {
    prime_divisors(n)
        .into_iter()
        .fold(Float::with_val(prec, 1), |acc, p| {
            acc * (Float::with_val(prec, p - 1) / p)
        })
}

/// `C_k(psi, rho)`: `L(k, conj rho)` when `psi` is the character mod 1, else 0.
fn constant_c(spec: &EisSpec, prec: u32) -> Result<Cx> {
    if spec.psi_is_one_one() {
        lfun::l_value(&spec.rho.conj(), spec.k, prec)
    } else {
        Ok(Cx::zero(prec))
    }
}

/// `D(psi, rho) = -πi L(0, psi) Π_{p | M}(1 - 1/p)` when `rho` is trivial.
fn constant_d(spec: &EisSpec, prec: u32) -> Result<Cx> {
    if !spec.rho.is_trivial() {
        return Ok(Cx::zero(prec));
    }
    let l0 = lfun::l_value(&spec.psi, 0, prec)?;
    let f = pi(prec) * phi_ratio(spec.m(), prec);
    Ok((-l0.mul_i()).scale(&f))
}

fn series(spec: &EisSpec, side: Side, coeffs: Vec<Cx>, prec: u32) -> FourierSeries {
    let (weight, character) = match side {
        Side::Eisenstein => (spec.k as i64, spec.character()),
        Side::Mock => (2 - spec.k as i64, spec.character().conj()),
    };
    FourierSeries {
        spec: spec.clone(),
        side,
        weight,
        level: spec.level(),
        character,
        coeffs,
        quasi_term: Float::new(prec),
    }
}

/// `(-2πi/M)^k W(conj rho0) / (k-1)!`.
pub fn eisenstein_leading_factor(spec: &EisSpec, prec: u32) -> Result<Cx> {
    let p = prec + GUARD;
    let m = spec.m();
    let w = spec.rho.core().conj().gauss_sum(p)?;
    let base = Cx::new(Float::new(p), -(pi(p) * 2u32) / m);
    let fact = Float::with_val(p, Integer::from(Integer::factorial(spec.k - 1)));
    let v = (&base.powi(spec.k as i64) * &w).scale(&fact.recip());
    Ok(round(&v, prec))
}

/// Coefficients of `E_k^{psi,rho,t}` for `0 <= n <= n_max`.
pub fn eisenstein_coefficients(spec: &EisSpec, n_max: usize, prec: u32) -> Result<FourierSeries> {
    let p = prec + GUARD;
    let t = spec.t;
    if spec.is_trivial_pair() {
        // E_2(z) - t E_2(tz): the 1/y terms cancel
        let m = spec.m();
        let c2 = constant_c(spec, p)?;
        let const_term = c2.scale(&Float::with_val(p, 1 - t as i64));
        let lead = Float::with_val(p, pi(p).square_ref()) * 4u32 / (m * m);
        let one_l = &spec.psi;
        let one_m = &spec.rho;
        let coeffs: Vec<Cx> = (0..=n_max)
            .into_par_iter()
            .map(|n| {
                if n == 0 {
                    return round(&const_term, prec);
                }
                let s1 = sigma_twisted(1, n as u64, one_l, one_m, p);
                let s2 = sigma_at_ratio(1, n as u64, t, one_l, one_m, p);
                let diff = &s1 - &s2.scale_i64(t as i64);
                round(&diff.scale(&(-lead.clone())), prec)
            })
            .collect();
        return Ok(series(spec, Side::Eisenstein, coeffs, prec));
    }
    let mut const_term = constant_c(spec, p)?;
    if spec.k == 1 {
        const_term += constant_d(spec, p)?;
    }
    let lead = eisenstein_leading_factor(spec, p)?;
    let coeffs: Vec<Cx> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            if n == 0 {
                return round(&const_term, prec);
            }
            let s = sigma_at_ratio(spec.k - 1, n as u64, t, &spec.psi, &spec.rho, p);
            round(&(&lead * &s), prec)
        })
        .collect();
    Ok(series(spec, Side::Eisenstein, coeffs, prec))
}

/// The quasi-modular `E_2^{1_L,1_M}(z)` itself, with its `-π/(2My)` term.
pub fn weight_two_building_block(l: u64, m: u64, n_max: usize, prec: u32) -> Result<FourierSeries> {
    let spec = EisSpec::new(2, DirichletCharacter::trivial(l), DirichletCharacter::trivial(m), 1)?;
    let p = prec + GUARD;
    let c2 = constant_c(&spec, p)?;
    let lead = Float::with_val(p, pi(p).square_ref()) * 4u32 / (m * m);
    let coeffs: Vec<Cx> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            if n == 0 {
                return round(&c2, prec);
            }
            let s = sigma_twisted(1, n as u64, &spec.psi, &spec.rho, p);
            round(&s.scale(&(-lead.clone())), prec)
        })
        .collect();
    let quasi = -(pi(p) / (2 * m)) * phi_ratio(m, p) * phi_ratio(l, p);
    let mut out = series(&spec, Side::Eisenstein, coeffs, prec);
    out.quasi_term = Float::with_val(prec, quasi);
    Ok(out)
}

/// Holomorphic-part coefficients `c^+(n)` of the harmonic pre-image of
/// `E_k^{psi,rho,t}`, for `0 <= n <= n_max`.
pub fn mock_coefficients(spec: &EisSpec, n_max: usize, prec: u32) -> Result<FourierSeries> {
    let coeffs = match spec.branch() {
        MockBranch::Generic => mock_generic(spec, n_max, prec)?,
        MockBranch::TrivialWeightTwo => mock_trivial_two(spec, n_max, prec),
        MockBranch::WeightOne => mock_weight_one(spec, n_max, prec)?,
    };
    Ok(series(spec, Side::Mock, coeffs, prec))
}

fn mock_generic(spec: &EisSpec, n_max: usize, prec: u32) -> Result<Vec<Cx>> {
    let p = prec + GUARD;
    let k = spec.k;
    let (t, m) = (spec.t, spec.m());
    // 2^{2-k} π i^{k-2} / (k-1)
    let i_pow = Cx::root_of_unity(p, k as i64 - 2, 4);
    let base = i_pow.scale(&(Float::with_val(p, 2).pow(2 - k as i32) * pi(p) / (k - 1)));
    let c0 = if spec.rho.is_trivial() {
        let l = lfun::l_value(&spec.psi.conj(), k - 1, p)?;
        let denom = Float::with_val(p, t * m).pow(k - 1);
        (&base * &l).scale(&(phi_ratio(m, p) / denom))
    } else {
        Cx::zero(p)
    };
    let w = spec.rho.core().gauss_sum(p)?;
    let lead = (&base * &w).scale(&Float::with_val(p, m).pow(-(k as i32)));
    let psi_bar = spec.psi.conj();
    let rho_bar = spec.rho.conj();
    Ok((0..=n_max)
        .into_par_iter()
        .map(|n| {
            if n == 0 {
                return round(&c0, prec);
            }
            let s = sigma_at_ratio(k - 1, n as u64, t, &psi_bar, &rho_bar, p);
            if s.is_zero() {
                return Cx::zero(prec);
            }
            let npow = Float::with_val(p, n).pow(1 - k as i32);
            round(&(&lead * &s).scale(&npow), prec)
        })
        .collect())
}

fn mock_trivial_two(spec: &EisSpec, n_max: usize, prec: u32) -> Vec<Cx> {
    let p = prec + GUARD;
    let (t, l, m) = (spec.t, spec.l(), spec.m());
    let c0 = pi(p) * Float::with_val(p, t).ln() / m * phi_ratio(l, p) * phi_ratio(m, p);
    let lead = pi(p) / (m * m);
    (0..=n_max)
        .into_par_iter()
        .map(|n| {
            if n == 0 {
                return Cx::from_real(Float::with_val(prec, &c0));
            }
            let s1 = sigma_twisted(1, n as u64, &spec.psi, &spec.rho, p);
            let s2 = sigma_at_ratio(1, n as u64, t, &spec.psi, &spec.rho, p);
            let diff = &s1 - &s2.scale_i64(t as i64);
            round(&diff.scale(&(lead.clone() / n as u64)), prec)
        })
        .collect()
}

fn mock_weight_one(spec: &EisSpec, n_max: usize, prec: u32) -> Result<Vec<Cx>> {
    let p = prec + GUARD;
    let (t, m) = (spec.t, spec.m());
    let psi_one = spec.psi_is_one_one();
    let rho_triv = spec.rho.is_trivial();
    // parity at weight one makes these cases disjoint
    assert!(!(psi_one && rho_triv), "psi = 1_1 and rho trivial violate weight-one parity");
    let two_pi_i = Cx::new(Float::new(p), pi(p) * 2u32);
    let c0 = if psi_one {
        lfun::l_derivative_checked(&spec.rho, 1, p)?.scale_i64(2)
    } else if rho_triv {
        let psi_bar = spec.psi.conj();
        let l0 = lfun::l_value(&psi_bar, 0, p)?;
        let d0 = lfun::l_derivative_checked(&psi_bar, 0, p)?;
        let log2tm = Float::with_val(p, 2 * t * m).ln();
        let inner = &l0.scale(&log2tm) - &d0;
        (&two_pi_i * &inner).scale(&phi_ratio(m, p))
    } else {
        Cx::zero(p)
    };
    let w = spec.rho.core().gauss_sum(p)?;
    // -(2πi/M) W(rho0)
    let lead = (&two_pi_i * &w).scale(&(-Float::with_val(p, m).recip()));
    let log_pi_m2 = (pi(p) / (m * m)).ln() + euler_gamma(p);
    let psi_bar = spec.psi.conj();
    let rho_bar = spec.rho.conj();
    Ok((0..=n_max)
        .into_par_iter()
        .map(|n| {
            if n == 0 {
                return round(&c0, prec);
            }
            let n64 = n as u64;
            if n64 % t != 0 {
                return Cx::zero(prec);
            }
            let s0 = sigma_twisted(0, n64 / t, &psi_bar, &rho_bar, p);
            let sl = sigma_log_twisted(n64 / t, &spec.psi, &spec.rho, p);
            let factor = Float::with_val(p, &log_pi_m2) - Float::with_val(p, n).ln();
            let inner = &s0.scale(&factor) + &sl.scale_i64(2);
            round(&(&lead * &inner), prec)
        })
        .collect())
}
