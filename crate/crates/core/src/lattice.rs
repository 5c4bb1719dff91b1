//! Direct lattice sums `E_k(z, s, psi, rho) = ½ Σ' psi(m) rho(n) (mz+n)^{-k} |mz+n|^{-2s}`.
//!
//! This is an independent oracle for the `q`-expansions, so it uses nothing
//! from the coefficient engines. Inside the box `|m|, |n| <= bound` the sum
//! is taken term by term. When `s` is a nonnegative integer the summand is
//! `v^{-p} conj(v)^{-q}` with `p = k + s`, `q = s`, and the outside is
//! corrected:
//! * each row `|m| <= bound` gets its `n`-tails per residue class mod the
//!   conductor of `rho` by Euler-Maclaurin, the integral done by partial
//!   fractions;
//! * the rows `|m| > bound` get the zero Poisson mode in `n`, which leaves a
//!   Hurwitz zeta tail in `m`. The other modes are `O(e^{-2π bound y / M})`.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer};

use crate::chars::DirichletCharacter;
use crate::coeffs::EisSpec;
use crate::mp::{pi, Cx, Real};
use crate::special::{bernoulli, hurwitz_zeta, GUARD};
use crate::{Error, Result};

/// Euler-Maclaurin correction terms per tail.
const EM_TERMS: usize = 10;

#[derive(Clone, Debug)]
pub struct LatticeValue {
    pub value: Cx,
    /// Integral-comparison bound for everything outside the box, before
    /// corrections.
    pub raw_tail_bound: f64,
    /// Size of the tail corrections that were added.
    pub correction: f64,
    /// Estimated error left after the corrections.
    pub error_estimate: f64,
}

struct Tails {
    p: i64,
    q: i64,
    /// `ff(-p, j) ff(-q, r-j) C(r, j)` for `r < 2 EM_TERMS`.
    deriv: Vec<Vec<Real>>,
    /// `B_{2i} / (2i)!`.
    em: Vec<Real>,
}

fn falling(a: i64, j: usize) -> Integer {
    let mut out = Integer::from(1);
    for i in 0..j as i64 {
        out *= a - i;
    }
    out
}

/// `binom(-a, j) = (-1)^j C(a+j-1, j)`.
fn binom_neg(a: i64, j: i64) -> Integer {
    if j < 0 {
        return Integer::new();
    }
    let c = Integer::from(Integer::binomial_u(u32::try_from(a + j - 1).unwrap_or(0), j as u32));
    if j % 2 == 1 {
        -c
    } else {
        c
    }
}

impl Tails {
    fn new(p: i64, q: i64, prec: u32) -> Tails {
        let mut deriv = Vec::new();
        for r in 0..2 * EM_TERMS {
            let row = (0..=r)
                .map(|j| {
                    let c = Integer::from(Integer::binomial_u(r as u32, j as u32));
                    Float::with_val(prec, c * falling(-p, j) * falling(-q, r - j))
                })
                .collect();
            deriv.push(row);
        }
        let em = (1..=EM_TERMS)
            .map(|i| {
                let f = Integer::from(Integer::factorial(2 * i as u32));
                Float::with_val(prec, bernoulli(2 * i)) / Float::with_val(prec, f)
            })
            .collect();
        Tails { p, q, deriv, em }
    }

    /// `g^(r)(X)` for `g(x) = (x+c)^{-p} (x+cbar)^{-q}`, from powers of
    /// `a = 1/(X+c)` and its conjugate.
    fn derivative(&self, r: usize, pa: &[Cx], pb: &[Cx]) -> Cx {
        let (p, q) = (self.p as usize, self.q as usize);
        let mut out = Cx::zero(pa[0].prec());
        for (j, coef) in self.deriv[r].iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            out += (&pa[p + j] * &pb[q + r - j]).scale(coef);
        }
        out
    }

    /// `∫_X^∞ (x+c)^{-p} (x+cbar)^{-q} dx` for real `X`.
    fn integral(&self, x: &Real, c: &Cx, pa: &[Cx], pb: &[Cx]) -> Cx {
        let prec = x.prec();
        let (p, q) = (self.p, self.q);
        if c.im.is_zero() {
            return pa[(p + q - 1) as usize].scale(&Float::with_val(prec, p + q - 1).recip());
        }
        // 1/((u+δ)^p u^q) with u = x + cbar, δ = c - cbar
        let delta = Cx::new(Float::new(prec), Float::with_val(prec, &c.im * 2u32));
        let neg_delta = -delta.clone();
        let mut out = Cx::zero(prec);
        for i in 1..=q {
            let coef = Float::with_val(prec, binom_neg(p, q - i));
            let a_i = delta.powi(i - p - q).scale(&coef);
            if i == 1 {
                let xc = Cx::new(Float::with_val(prec, x + &c.re), c.im.clone());
                let two_i_arg = Cx::new(Float::new(prec), xc.arg() * 2u32);
                out += &a_i * &two_i_arg;
            } else {
                out += (&a_i * &pb[(i - 1) as usize]).scale(&Float::with_val(prec, i - 1).recip());
            }
        }
        for i in 2..=p {
            let coef = Float::with_val(prec, binom_neg(q, p - i));
            let b_i = neg_delta.powi(i - p - q).scale(&coef);
            out += (&b_i * &pa[(i - 1) as usize]).scale(&Float::with_val(prec, i - 1).recip());
        }
        out
    }

    /// `Σ_{j>=0} g(X + M j)` by Euler-Maclaurin; returns the value and the
    /// size of the last correction used.
    fn tail(&self, x: &Real, c: &Cx, modulus: u64) -> (Cx, f64) {
        let prec = x.prec();
        let xc = Cx::new(Float::with_val(prec, x + &c.re), c.im.clone());
        let a = xc.recip();
        let top = (self.p + self.q) as usize + 2 * EM_TERMS + 1;
        let mut pa = vec![Cx::one(prec)];
        for e in 1..=top {
            let next = &pa[e - 1] * &a;
            pa.push(next);
        }
        let pb: Vec<Cx> = pa.iter().map(Cx::conj).collect();
        let m = Float::with_val(prec, modulus);
        let mut out = self.integral(x, c, &pa, &pb).scale(&Float::with_val(prec, m.recip_ref()));
        out += self.derivative(0, &pa, &pb).scale(&Float::with_val(prec, 0.5));
        let mut mpow = m.clone();
        let m2 = Float::with_val(prec, m.square_ref());
        let mut last = 0.0;
        for (i, b) in self.em.iter().enumerate() {
            let d = self.derivative(2 * i + 1, &pa, &pb);
            let term = d.scale(&Float::with_val(prec, b * &mpow));
            last = term.abs().to_f64();
            out -= &term;
            mpow *= &m2;
        }
        (out, last)
    }
}

/// `½ Σ'_{(m,n)} psi(m) rho(n) (mz+n)^{-k} |mz+n|^{-2s}`.
pub fn lattice_eisenstein(
    z: &Cx,
    s: &Real,
    k: i64,
    psi: &DirichletCharacter,
    rho: &DirichletCharacter,
    bound: u64,
) -> Result<LatticeValue> {
    let exponent = Float::with_val(s.prec(), s * 2u32) + k;
    if exponent <= 2 {
        return Err(Error::Convergence(format!("{}", exponent.to_f64())));
    }
    if z.im <= 0 {
        return Err(Error::Domain("lattice sum needs a point in the upper half-plane".into()));
    }
    let prec = z.prec();
    let wp = prec + GUARD + 16;
    let tp = wp + 64;
    let w = Cx::new(Float::with_val(wp, &z.re), Float::with_val(wp, &z.im));
    let b = bound as i64;
    let integral_pq = if s.is_integer() && *s >= 0 && k + s.to_f64() as i64 >= 0 {
        let q = s.to_f64() as i64;
        Some((k + q, q))
    } else {
        None
    };
    let s_w = Float::with_val(wp, s);

    let lm = rho.modulus();
    let rho_vals: Vec<Option<Cx>> = (0..lm).map(|r| rho.value(r as i64).map(|v| v.to_cx(wp))).collect();
    let tails = integral_pq.map(|(p, q)| Tails::new(p, q, tp));

    let term = |v: &Cx| -> Cx {
        match integral_pq {
            Some((p, q)) => {
                let nv = v.norm_sqr().recip();
                let a = v.conj().scale(&nv);
                if p >= q {
                    a.powi(p - q).scale(&Float::with_val(wp, (&nv).pow(q as u32)))
                } else {
                    a.conj().powi(q - p).scale(&Float::with_val(wp, (&nv).pow(p as u32)))
                }
            }
            None => {
                let mag = Float::with_val(wp, -Float::with_val(wp, &s_w * v.norm_sqr().ln())).exp();
                v.powi(-k).scale(&mag)
            }
        }
    };

    let rows: Vec<(Cx, Cx, f64)> = (-b..=b)
        .into_par_iter()
        .filter_map(|m| {
            let psi_m = psi.value(m)?.to_cx(wp);
            let c = w.scale_i64(m);
            let mut by_res = vec![Cx::zero(wp); lm as usize];
            for n in -b..=b {
                if m == 0 && n == 0 {
                    continue;
                }
                let r = n.rem_euclid(lm as i64) as usize;
                if rho_vals[r].is_none() {
                    continue;
                }
                let v = Cx::new(Float::with_val(wp, &c.re + n), c.im.clone());
                by_res[r] += term(&v);
            }
            let mut direct = Cx::zero(wp);
            let mut corr = Cx::zero(wp);
            let mut err = 0.0;
            for (r, val) in rho_vals.iter().enumerate() {
                let Some(val) = val else { continue };
                direct += val * &by_res[r];
                if let Some(t) = &tails {
                    let ct = Cx::new(Float::with_val(tp, &c.re), Float::with_val(tp, &c.im));
                    let first = |res: i64| {
                        let start = b + 1;
                        Float::with_val(tp, start + (res - start).rem_euclid(lm as i64))
                    };
                    let (plus, e1) = t.tail(&first(r as i64), &ct, lm);
                    let (minus, e2) = t.tail(&first(-(r as i64)), &(-ct), lm);
                    let mut both = plus;
                    if (t.p + t.q) % 2 == 0 {
                        both += minus;
                    } else {
                        both -= &minus;
                    }
                    let both = Cx::new(Float::with_val(wp, &both.re), Float::with_val(wp, &both.im));
                    corr += val * &both;
                    err += e1 + e2;
                }
            }
            Some((&psi_m * &direct, &psi_m * &corr, err))
        })
        .collect();

    let mut direct = Cx::zero(wp);
    let mut corr = Cx::zero(wp);
    let mut err = 0.0;
    for (d, c, e) in rows {
        direct += d;
        corr += c;
        err += e;
    }

    let y = z.im.to_f64();
    if let Some((p, q)) = integral_pq {
        if rho.is_trivial() {
            corr += row_tail(&w, psi, rho, p, q, bound, wp);
        }
        err += (-2.0 * std::f64::consts::PI * (b + 1) as f64 * y / lm as f64).exp();
    }

    let half = Float::with_val(wp, 0.5);
    let total = (&direct + &corr).scale(&half);
    let sigma = exponent.to_f64();
    let r0 = b as f64 * y.min(1.0) / (1.0 + z.re.to_f64().abs());
    let raw = std::f64::consts::PI / y * r0.powf(2.0 - sigma) / (sigma - 2.0);
    let value = Cx::new(Float::with_val(prec, &total.re), Float::with_val(prec, &total.im));
    Ok(LatticeValue {
        value,
        raw_tail_bound: raw,
        correction: corr.abs().to_f64() / 2.0,
        error_estimate: if integral_pq.is_some() { err / 2.0 } else { raw },
    })
}

/// Zero Poisson mode of the rows `|m| > bound` for trivial `rho`:
/// `Σ_n g(mw + n) ≈ (phi(M)/M) (|m| y)^{1-p-q} I`, with
/// `I = 2πi binom(-p, q-1) (2i)^{1-p-q}` for `m > 0` and `p, q` swapped for `m < 0`.
fn row_tail(w: &Cx, psi: &DirichletCharacter, rho: &DirichletCharacter, p: i64, q: i64, bound: u64, wp: u32) -> Cx {
    let sigma = p + q - 1;
    let two_i = Cx::new(Float::new(wp), Float::with_val(wp, 2));
    let two_pi_i = Cx::new(Float::new(wp), pi(wp) * 2u32);
    let i_of = |p: i64, q: i64| -> Cx {
        let c = Float::with_val(wp, binom_neg(p, q - 1));
        (&two_pi_i * &two_i.powi(-sigma)).scale(&c)
    };
    let lpsi = psi.modulus();
    let s = Float::with_val(wp, sigma);
    let mut h = Cx::zero(wp);
    for a in 1..=lpsi {
        let Some(v) = psi.value(a as i64) else { continue };
        let start = bound + 1 + (a + lpsi - (bound + 1) % lpsi) % lpsi;
        let shift = Float::with_val(wp, start) / Float::with_val(wp, lpsi);
        let zt = hurwitz_zeta(&s, &shift);
        h += v.to_cx(wp).scale(&zt);
    }
    h = h.scale(&Float::with_val(wp, Float::with_val(wp, lpsi).pow(-sigma as i32)));
    let psi_minus = psi.value(-1).map(|v| v.to_cx(wp)).unwrap_or_else(|| Cx::zero(wp));
    let modes = &i_of(p, q) + &(&psi_minus * &i_of(q, p));
    let m = rho.modulus();
    let density = Float::with_val(wp, crate::arith::euler_phi(m)) / Float::with_val(wp, m);
    let ypow = Float::with_val(wp, (&w.im).pow(-sigma as i32));
    (&h * &modes).scale(&Float::with_val(wp, density * ypow))
}

/// `(k-1)^{-1} y^{k-1} E_{2-k}(tMz, k-1, conj(psi), rho)` for `k > 2`.
pub fn lattice_preimage(spec: &EisSpec, z: &Cx, bound: u64) -> Result<LatticeValue> {
    let k = spec.k as i64;
    if k <= 2 {
        return Err(Error::Unsupported(format!("lattice pre-image needs k > 2, got k = {k}")));
    }
    let prec = z.prec();
    let tm = (spec.t * spec.m()) as i64;
    let w = z.scale_i64(tm);
    let s = Float::with_val(prec, k - 1);
    let mut lv = lattice_eisenstein(&w, &s, 2 - k, &spec.psi.conj(), &spec.rho, bound)?;
    let factor = Float::with_val(prec, (&z.im).pow((k - 1) as u32)) / (k - 1);
    lv.value = lv.value.scale(&factor);
    let f = factor.to_f64();
    lv.raw_tail_bound *= f;
    lv.correction *= f;
    lv.error_estimate *= f;
    Ok(lv)
}
