//! Harmonic Maass forms of weight `2 - k` attached to Eisenstein series:
//! the `beta` and `omega` kernels, truncated evaluation with a tail model,
//! finite-difference `xi` and Laplacian, and elements of `Gamma0(N)`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::arith::inv_mod;
use crate::chars::DirichletCharacter;
use crate::coeffs::{eisenstein_coefficients, mock_coefficients, EisSpec, FourierSeries, Side};
use crate::mp::{pi, Cx, Real};
use crate::special::{gamma, gamma_upper, integrate_half_line, GUARD};
use crate::{Error, Result};

/// `beta_{2-k}(n, y) = ∫_y^∞ e^{-4πnu} u^{k-2} du` for `n > 0`; for `n = 0`
/// the regularised `y^{k-1}/(1-k)`, or `-log y` when `k = 1`.
pub fn beta_integral(two_minus_k: i64, n: u64, y: &Real) -> Real {
    let p = y.prec();
    let k = 2 - two_minus_k;
    if n == 0 {
        if k == 1 {
            return -Float::with_val(p, y.ln_ref());
        }
        let yk = Float::with_val(p, y.pow((k - 1) as i32));
        return yk / Float::with_val(p, 1 - k);
    }
    let a = Float::with_val(p, k - 1);
    let four_pi_n = pi(p) * (4 * n);
    let x = Float::with_val(p, &four_pi_n * y);
    gamma_upper(&a, &x) / four_pi_n.pow((k - 1) as i32)
}

/// `omega(y; a, b) = y^b / Gamma(b) ∫_0^∞ e^{-yu} (1+u)^{a-1} u^{b-1} du`.
///
/// For `b <= 0` the integral is continued by integrating by parts `m` times,
/// `(-1)^m y^b / Gamma(b+m) ∫ g^(m)(u) u^{b+m-1} du` with
/// `g = e^{-yu}(1+u)^{a-1}`, so `omega(y; a, 0) = g(0) = 1` comes out of the
/// quadrature rather than being special-cased.
pub fn omega_function(y: &Real, alpha: &Real, beta: &Real) -> Result<Real> {
    if *y <= 0 {
        return Err(Error::Domain(format!("omega needs y > 0, got {}", y.to_f64())));
    }
    let prec = y.prec();
    let p = prec + GUARD;
    let m: u32 = if *beta > 0 { 0 } else { (-beta.to_f64()).floor() as u32 + 1 };
    let y = Float::with_val(p, y);
    let a1 = Float::with_val(p, alpha - 1u32);
    let bm = Float::with_val(p, beta + m);
    let bm1 = Float::with_val(p, &bm - 1u32);

    // Leibniz: g^(m) = Σ_j C(m,j) (-y)^{m-j} (a-1)(a-2)...(a-j) e^{-yu} (1+u)^{a-1-j}
    let mut terms: Vec<(Real, Real)> = Vec::new();
    let mut falling = Float::with_val(p, 1);
    let mut binom = Float::with_val(p, 1);
    for j in 0..=m {
        let neg_y = Float::with_val(p, -&y);
        let coef = Float::with_val(p, &binom * &falling) * neg_y.pow(m - j);
        terms.push((coef, Float::with_val(p, &a1 - j)));
        falling *= Float::with_val(p, &a1 - j);
        binom *= m - j;
        binom /= j + 1;
    }
    let integral = integrate_half_line(
        |u| {
            let one_u = Float::with_val(p, u + 1u32);
            let mut s = Float::new(p);
            for (c, e) in &terms {
                s += Float::with_val(p, c * Float::with_val(p, (&one_u).pow(e)));
            }
            let decay = Float::with_val(p, -Float::with_val(p, &y * u)).exp();
            s * decay * Float::with_val(p, (&u).pow(&bm1))
        },
        p,
    );
    let mut out = integral * Float::with_val(p, (&y).pow(beta)) / gamma(&bm);
    if m % 2 == 1 {
        out = -out;
    }
    Ok(Float::with_val(prec, out))
}

/// A harmonic Maass form `F = Σ c+(n) q^n - Σ conj(c(n)) beta_{2-k}(n, y) q^{-n}`
/// whose shadow `xi_{2-k} F` is the Eisenstein series with coefficients `c(n)`.
#[derive(Clone, Debug)]
pub struct HarmonicMaassForm {
    pub spec: EisSpec,
    pub holo: FourierSeries,
    pub shadow: FourierSeries,
    pub weight_2mk: i64,
    pub level: u64,
    pub character: DirichletCharacter,
}

pub fn assemble_harmonic(spec: &EisSpec, n_max: usize, prec: u32) -> Result<HarmonicMaassForm> {
    let holo = mock_coefficients(spec, n_max, prec)?;
    let shadow = eisenstein_coefficients(spec, n_max, prec)?;
    Ok(HarmonicMaassForm {
        spec: spec.clone(),
        weight_2mk: 2 - spec.k as i64,
        level: spec.level(),
        character: spec.character().conj(),
        holo,
        shadow,
    })
}

impl HarmonicMaassForm {
    pub fn n_max(&self) -> usize {
        self.holo.n_max().min(self.shadow.n_max())
    }

    /// `lambda F`: holomorphic coefficients scale by `lambda`, the shadow by
    /// `conj(lambda)` because `xi` is conjugate-linear.
    pub fn scaled(&self, lambda: &Cx) -> HarmonicMaassForm {
        let mut out = self.clone();
        out.holo = self.holo.scaled(lambda);
        out.shadow = self.shadow.scaled(&lambda.conj());
        out
    }
}

/// Value of a truncated expansion together with the modelled size of what
/// was left out.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: Cx,
    pub tail_bound: f64,
}

/// Anything that can be evaluated pointwise on the upper half-plane.
pub trait Evaluatable: Sync {
    fn weight(&self) -> i64;
    fn prec(&self) -> u32;
    fn evaluate(&self, z: &Cx) -> Result<Evaluation>;

    fn eval(&self, z: &Cx) -> Result<Cx> {
        Ok(self.evaluate(z)?.value)
    }
}

/// Wraps a closure as an evaluatable form with zero tail.
pub struct FnForm<F> {
    pub weight: i64,
    pub prec: u32,
    pub f: F,
}

impl<F: Fn(&Cx) -> Cx + Sync> Evaluatable for FnForm<F> {
    fn weight(&self) -> i64 {
        self.weight
    }
    fn prec(&self) -> u32 {
        self.prec
    }
    fn evaluate(&self, z: &Cx) -> Result<Evaluation> {
        check_upper(z)?;
        Ok(Evaluation { value: (self.f)(z), tail_bound: 0.0 })
    }
}

/// Largest tail accepted by `evaluate` at a given working precision.
pub fn tail_tolerance(prec: u32) -> f64 {
    2f64.powf(-(prec as f64) / 2.0)
}

fn check_upper(z: &Cx) -> Result<()> {
    if z.im <= 0 {
        return Err(Error::Domain(format!("point {:?} is not in the upper half-plane", z)));
    }
    Ok(())
}

/// Tail model `|a(n)| <= A n^g`: stores `ln A` fitted over the computed range.
#[derive(Clone, Copy, Debug)]
struct Growth {
    ln_amp: f64,
    g: f64,
}

impl Growth {
    fn fit(coeffs: &[Cx], g: f64) -> Growth {
        let mut ln_amp = f64::NEG_INFINITY;
        for (n, a) in coeffs.iter().enumerate().skip(1) {
            let m = a.abs();
            if m.is_zero() {
                continue;
            }
            let l = ln_abs(&m) - g * (n as f64).ln();
            ln_amp = ln_amp.max(l);
        }
        Growth { ln_amp, g }
    }

    fn growth_exponent(series: &FourierSeries) -> f64 {
        match series.side {
            Side::Eisenstein => (series.weight as f64).max(1.0),
            Side::Mock => 1.0,
        }
    }
}

fn ln_abs(x: &Real) -> f64 {
    // f64 would underflow for tiny coefficients
    let (m, e) = x.to_f64_exp();
    m.abs().ln() + e as f64 * std::f64::consts::LN_2
}

fn ln_sum_geometric(ln_first: f64, ratio: f64) -> f64 {
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    ln_first - (1.0 - ratio).ln()
}

/// `ln` of an upper bound for `beta_{2-k}(n, y) e^{2πny}`.
fn ln_beta_scaled(k: i64, n: f64, y: f64) -> f64 {
    let a = (k - 1) as f64;
    let x = 4.0 * std::f64::consts::PI * n * y;
    let ln_gamma_up = if a <= 1.0 {
        (a - 1.0) * x.ln() - x
    } else if x > 2.0 * a {
        (a - 1.0) * x.ln() - x + 2f64.ln()
    } else {
        (1..(k - 1)).map(|j| (j as f64).ln()).sum::<f64>()
    };
    ln_gamma_up - a * (4.0 * std::f64::consts::PI * n).ln() + 2.0 * std::f64::consts::PI * n * y
}

fn ln_holo_tail(gr: Growth, n0: usize, y: f64) -> f64 {
    if gr.ln_amp == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let n = n0 as f64;
    let first = gr.ln_amp + gr.g * n.ln() - 2.0 * std::f64::consts::PI * n * y;
    let ratio = (-2.0 * std::f64::consts::PI * y).exp() * ((n + 1.0) / n).powf(gr.g);
    ln_sum_geometric(first, ratio)
}

fn ln_nonholo_tail(gr: Growth, k: i64, n0: usize, y: f64) -> f64 {
    if gr.ln_amp == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let n = n0 as f64;
    let first = gr.ln_amp + gr.g * n.ln() + ln_beta_scaled(k, n, y);
    let ratio = (-2.0 * std::f64::consts::PI * y).exp() * ((n + 1.0) / n).powf(gr.g);
    ln_sum_geometric(first, ratio)
}

/// Smallest truncation whose modelled tail at height `y` is below `tol`.
fn required_terms(tail: impl Fn(usize) -> f64, have: usize, tol: f64) -> usize {
    let ln_tol = tol.ln();
    let mut n = have.max(1);
    while n < 10_000_000 {
        if tail(n + 1) < ln_tol {
            return n;
        }
        n += 1 + n / 64;
    }
    n
}

fn truncation_check(ln_tail: impl Fn(usize) -> f64, have: usize, prec: u32) -> Result<f64> {
    let tol = tail_tolerance(prec);
    let t = ln_tail(have + 1);
    if t < tol.ln() {
        return Ok(t.exp());
    }
    Err(Error::Truncation { have, required: required_terms(ln_tail, have, tol) })
}

fn horner(coeffs: &[Cx], q: &Cx, p: u32) -> Cx {
    let mut acc = Cx::zero(p);
    let mut tmp = Float::new(p);
    for a in coeffs.iter().rev() {
        let prev = acc.clone();
        acc = Cx::new(Float::with_val(p, &a.re), Float::with_val(p, &a.im));
        crate::mp::mul_add_assign(&mut acc, &prev, q, &mut tmp);
    }
    acc
}

fn at_prec(z: &Cx, p: u32) -> Cx {
    Cx::new(Float::with_val(p, &z.re), Float::with_val(p, &z.im))
}

impl FourierSeries {
    /// Modelled tail for truncation at `n_max` when evaluating at height `y`.
    fn ln_tail(&self, y: f64) -> impl Fn(usize) -> f64 {
        let gr = Growth::fit(&self.coeffs, Growth::growth_exponent(self));
        move |n0| ln_holo_tail(gr, n0, y)
    }

    /// Truncation needed for the tail at height `y` to drop below `tol`.
    pub fn required_n_max(&self, y: f64, tol: f64) -> usize {
        required_terms(self.ln_tail(y), self.n_max(), tol)
    }
}

impl Evaluatable for FourierSeries {
    fn weight(&self) -> i64 {
        self.weight
    }

    fn prec(&self) -> u32 {
        FourierSeries::prec(self)
    }

    fn evaluate(&self, z: &Cx) -> Result<Evaluation> {
        check_upper(z)?;
        let prec = FourierSeries::prec(self);
        let tail_bound = truncation_check(self.ln_tail(z.im.to_f64()), self.n_max(), prec)?;
        let p = prec + GUARD;
        let z = at_prec(z, p);
        let q = Cx::q_of(&z);
        let mut value = horner(&self.coeffs, &q, p);
        if !self.quasi_term.is_zero() {
            value.re += Float::with_val(p, &self.quasi_term / &z.im);
        }
        Ok(Evaluation { value, tail_bound })
    }
}

impl HarmonicMaassForm {
    fn ln_tail(&self, y: f64) -> impl Fn(usize) -> f64 {
        let holo = Growth::fit(&self.holo.coeffs, Growth::growth_exponent(&self.holo));
        let shadow = Growth::fit(&self.shadow.coeffs, Growth::growth_exponent(&self.shadow));
        let k = self.spec.k as i64;
        move |n0| {
            let a = ln_holo_tail(holo, n0, y);
            let b = ln_nonholo_tail(shadow, k, n0, y);
            a.max(b) + 2f64.ln()
        }
    }

    pub fn required_n_max(&self, y: f64, tol: f64) -> usize {
        required_terms(self.ln_tail(y), self.n_max(), tol)
    }
}

impl Evaluatable for HarmonicMaassForm {
    fn weight(&self) -> i64 {
        self.weight_2mk
    }

    fn prec(&self) -> u32 {
        self.holo.prec()
    }

    fn evaluate(&self, z: &Cx) -> Result<Evaluation> {
        check_upper(z)?;
        let prec = self.holo.prec();
        let n_max = self.n_max();
        let tail_bound = truncation_check(self.ln_tail(z.im.to_f64()), n_max, prec)?;
        let p = prec + GUARD;
        let z = at_prec(z, p);
        let q = Cx::q_of(&z);
        let holo = horner(&self.holo.coeffs[..=n_max], &q, p);

        // q^{-n} = e^{-2πinx} e^{2πny}; the real factor is folded into beta
        let two_pi_y = pi(p) * 2u32 * &z.im;
        let u = Cx::q_of(&Cx::new(-z.re.clone(), Float::new(p)));
        let mut terms = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let c = &self.shadow.coeffs[n];
            if c.is_zero() {
                terms.push(Cx::zero(p));
                continue;
            }
            let mut b = beta_integral(self.weight_2mk, n as u64, &z.im);
            if n > 0 {
                b *= Float::with_val(p, &two_pi_y * n as u64).exp();
            }
            terms.push(at_prec(&c.conj(), p).scale(&b));
        }
        let nonholo = horner(&terms, &u, p);
        Ok(Evaluation { value: &holo - &nonholo, tail_bound })
    }
}

fn derivative_step(z: &Cx, bits: u32) -> Result<Real> {
    let p = z.prec().max(bits + GUARD);
    let h = Float::with_val(p, &z.im) >> (bits as i32 / 4);
    if Float::with_val(p, &z.im - &h) <= 0 {
        return Err(Error::Domain("finite-difference stencil leaves the upper half-plane".into()));
    }
    Ok(h)
}

struct Partials {
    fx: Cx,
    fy: Cx,
    fxx: Cx,
    fyy: Cx,
}

/// Central differences with step `h`; second derivatives only on request.
fn partials(f: &dyn Evaluatable, z: &Cx, h: &Real, second: bool) -> Result<Partials> {
    let p = h.prec();
    let z = at_prec(z, p);
    let shift = |dx: &Real, dy: &Real| {
        Cx::new(Float::with_val(p, &z.re + dx), Float::with_val(p, &z.im + dy))
    };
    let zero = Float::new(p);
    let mh = Float::with_val(p, -h);
    let fxp = f.eval(&shift(h, &zero))?;
    let fxm = f.eval(&shift(&mh, &zero))?;
    let fyp = f.eval(&shift(&zero, h))?;
    let fym = f.eval(&shift(&zero, &mh))?;
    let two_h = Float::with_val(p, h * 2u32);
    let inv2h = Float::with_val(p, two_h.recip_ref());
    let fx = (&fxp - &fxm).scale(&inv2h);
    let fy = (&fyp - &fym).scale(&inv2h);
    let (fxx, fyy) = if second {
        let f0 = f.eval(&z)?.scale_i64(2);
        let inv_h2 = Float::with_val(p, h.square_ref()).recip();
        ((&(&fxp + &fxm) - &f0).scale(&inv_h2), (&(&fyp + &fym) - &f0).scale(&inv_h2))
    } else {
        (Cx::zero(p), Cx::zero(p))
    };
    Ok(Partials { fx, fy, fxx, fyy })
}

/// `(4 D(h/2) - D(h)) / 3`.
fn richardson(coarse: &Cx, fine: &Cx) -> Cx {
    let p = fine.prec();
    let third = Float::with_val(p, 3).recip();
    (&fine.scale_i64(4) - coarse).scale(&third)
}

fn richardson_partials(f: &dyn Evaluatable, z: &Cx, second: bool) -> Result<Partials> {
    let h = derivative_step(z, f.prec())?;
    let coarse = partials(f, z, &h, second)?;
    let fine = partials(f, z, &Float::with_val(h.prec(), &h >> 1), second)?;
    Ok(Partials {
        fx: richardson(&coarse.fx, &fine.fx),
        fy: richardson(&coarse.fy, &fine.fy),
        fxx: richardson(&coarse.fxx, &fine.fxx),
        fyy: richardson(&coarse.fyy, &fine.fyy),
    })
}

/// `xi_w f = 2i y^w conj(∂f/∂zbar)` by central differences with step
/// `y 2^{-bits/4}` and one Richardson step.
pub fn xi_numeric(f: &dyn Evaluatable, z: &Cx, weight: i64) -> Result<Cx> {
    check_upper(z)?;
    let d = richardson_partials(f, z, false)?;
    let p = d.fx.prec();
    // ∂/∂zbar = (∂x + i ∂y)/2
    let dzbar = (&d.fx + &d.fy.mul_i()).scale(&Float::with_val(p, 0.5));
    let yw = Float::with_val(p, Float::with_val(p, &z.im).pow(weight as i32));
    Ok(dzbar.conj().mul_i().scale_i64(2).scale(&yw))
}

/// `Delta_w = y^2 (∂x^2 + ∂y^2) - i w y (∂x + i ∂y)` by second differences.
pub fn laplacian_numeric(f: &dyn Evaluatable, z: &Cx, weight: i64) -> Result<Cx> {
    check_upper(z)?;
    let d = richardson_partials(f, z, true)?;
    let p = d.fx.prec();
    let y = Float::with_val(p, &z.im);
    let y2 = Float::with_val(p, y.square_ref());
    let lap = (&d.fxx + &d.fyy).scale(&y2);
    let first = (&d.fx + &d.fy.mul_i()).mul_i().scale(&Float::with_val(p, &y * weight));
    Ok(&lap - &first)
}

/// `[[a, b], [c, d]]` with `ad - bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GammaZeroElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GammaZeroElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64, level: u64) -> Result<Self> {
        if a as i128 * d as i128 - b as i128 * c as i128 != 1 {
            return Err(Error::GroupElement { level, reason: format!("det of [[{a},{b}],[{c},{d}]] is not 1") });
        }
        if c.rem_euclid(level as i64) != 0 {
            return Err(Error::GroupElement { level, reason: format!("c = {c} is not divisible by {level}") });
        }
        Ok(GammaZeroElement { a, b, c, d })
    }

    pub fn t() -> Self {
        GammaZeroElement { a: 1, b: 1, c: 0, d: 1 }
    }

    pub fn s() -> Self {
        GammaZeroElement { a: 0, b: -1, c: 1, d: 0 }
    }

    /// `c z + d`.
    pub fn cocycle(&self, z: &Cx) -> Cx {
        let p = z.prec();
        Cx::new(Float::with_val(p, &z.re * self.c) + self.d, Float::with_val(p, &z.im * self.c))
    }

    pub fn act(&self, z: &Cx) -> Cx {
        let p = z.prec();
        let num = Cx::new(Float::with_val(p, &z.re * self.a) + self.b, Float::with_val(p, &z.im * self.a));
        num.div(&self.cocycle(z))
    }
}

/// `|f(gamma z) - chi(d) (cz+d)^w f(z)|` plus the tail bounds of both values.
pub fn modularity_residual(
    f: &dyn Evaluatable,
    gamma: &GammaZeroElement,
    z: &Cx,
    weight: i64,
    chi: &DirichletCharacter,
) -> Result<Real> {
    if gamma.c.rem_euclid(chi.modulus() as i64) != 0 {
        return Err(Error::GroupElement { level: chi.modulus(), reason: format!("c = {}", gamma.c) });
    }
    let p = f.prec() + GUARD;
    let z = at_prec(z, p);
    let lhs = f.evaluate(&gamma.act(&z))?;
    let rhs = f.evaluate(&z)?;
    let chi_d = chi.evaluate(gamma.d, p);
    let factor = &chi_d * &gamma.cocycle(&z).powi(weight);
    let diff = &lhs.value - &(&factor * &rhs.value);
    let bound = lhs.tail_bound + factor.abs().to_f64() * rhs.tail_bound;
    Ok(diff.abs() + bound)
}

/// Seeded elements of `Gamma0(level)` with entries bounded by `bound`.
///
/// `c` runs over nonzero multiples of the level when one fits under the
/// bound, `d` over residues coprime to `c`, and `a` is the symmetric inverse
/// of `d` mod `c`, which keeps `b = (ad - 1)/c` small as well.
pub fn sample_gamma0(level: u64, count: usize, bound: i64, seed: u64) -> Vec<GammaZeroElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = level as i64;
    let jmax = bound / n;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if jmax == 0 {
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            out.push(GammaZeroElement { a: s, b: rng.gen_range(-bound..=bound), c: 0, d: s });
            continue;
        }
        let mut j = rng.gen_range(1..=jmax);
        if rng.gen_bool(0.5) {
            j = -j;
        }
        let c = n * j;
        let d = rng.gen_range(-bound..=bound);
        if d == 0 || crate::arith::gcd(c.unsigned_abs(), d.unsigned_abs()) != 1 {
            continue;
        }
        let m = c.abs();
        let mut a = match inv_mod(d, m as u64) {
            Some(a) => a as i64,
            None => continue,
        };
        if 2 * a > m {
            a -= m;
        }
        if m == 1 {
            a = 0;
        }
        let b = (a * d - 1) / c;
        if b.abs() > bound {
            continue;
        }
        out.push(GammaZeroElement { a, b, c, d });
    }
    out
}

/// A point at which both `z` and `gamma z` are evaluated at the same height:
/// on the isometric circle `|cz + d| = 1` at an angle in `[π/4, 3π/4]`, or
/// with `y` in `[y_lo, y_hi]` when `c = 0`.
pub fn sample_point(gamma: &GammaZeroElement, rng: &mut impl Rng, y_lo: f64, y_hi: f64, prec: u32) -> Cx {
    if gamma.c == 0 {
        let x: f64 = rng.gen_range(-0.5..0.5);
        let y: f64 = rng.gen_range(y_lo..=y_hi);
        return Cx::from_f64(prec, x, y);
    }
    let theta: f64 = rng.gen_range(0.25..=0.75);
    let theta = pi(prec) * Float::with_val(prec, theta);
    let inv_c = Float::with_val(prec, gamma.c.abs()).recip();
    let centre = Float::with_val(prec, -gamma.d) / Float::with_val(prec, gamma.c);
    let e = Cx::cis(&theta).scale(&inv_c);
    Cx::new(centre + &e.re, e.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::kronecker_character;
    use crate::mp::real;

    const P: u32 = 128;

    fn close(a: &Cx, b: &Cx, tol: f64) -> bool {
        (a - b).abs().to_f64() < tol
    }

    #[test]
    fn beta_examples() {
        let y = real(P, 1.0);
        let b = beta_integral(0, 1, &y);
        let four_pi = pi(P) * 4u32;
        let expect = Float::with_val(P, -&four_pi).exp() / four_pi;
        assert!((b - expect).abs() < 1e-35);
        assert_eq!(beta_integral(-1, 0, &real(P, 2.0)), -2);
        let e = Float::with_val(P, 1).exp();
        assert!((beta_integral(1, 0, &e) + 1u32).abs() < 1e-35);
    }

    #[test]
    fn beta_matches_finite_sum_for_integer_order() {
        // Γ(a, x) = (a-1)! e^{-x} Σ_{j<a} x^j/j!
        for (k, n, y) in [(3i64, 1u64, 0.3), (4, 2, 0.7), (6, 1, 0.05), (5, 3, 1.9)] {
            let y = real(P, y);
            let a = k - 1;
            let x = pi(P) * (4 * n) * &y;
            let mut s = Float::new(P);
            let mut term = Float::with_val(P, 1);
            for j in 0..a {
                if j > 0 {
                    term *= &x;
                    term /= j as u32;
                }
                s += &term;
            }
            let fact: u32 = (1..a as u32).product();
            let gam = s * fact * Float::with_val(P, -&x).exp();
            let expect = gam / Float::with_val(P, pi(P) * (4 * n)).pow(a as i32);
            let got = beta_integral(2 - k, n, &y);
            assert!(((got - &expect) / expect).abs() < 1e-33, "k={k}");
        }
    }

    #[test]
    fn omega_examples() {
        let w = omega_function(&real(P, 3.7), &real(P, 2.4), &real(P, 0.0)).unwrap();
        assert!((w - 1u32).abs() < 1e-30);
        let w = omega_function(&real(P, 2.0), &real(P, 1.0), &real(P, 1.0)).unwrap();
        assert!((w - 1u32).abs() < 1e-30);
        assert!(omega_function(&real(P, 0.0), &real(P, 1.0), &real(P, 1.0)).is_err());
    }

    #[test]
    fn omega_bridge_to_beta() {
        let (k, n, y) = (4i64, 1u64, real(P, 0.5));
        let arg = pi(P) * (4 * n) * &y;
        let lhs = omega_function(&arg, &real(P, (k - 1) as f64), &real(P, 1.0)).unwrap()
            * Float::with_val(P, (&y).pow((k - 2) as i32));
        let rhs = Float::with_val(P, &arg).exp() * beta_integral(2 - k, n, &y) * (pi(P) * (4 * n));
        assert!(((lhs - &rhs) / rhs).abs() < 1e-30);
    }

    #[test]
    fn omega_symmetry_with_negative_beta() {
        let y = real(P, 1.3);
        let (a, b) = (real(P, 2.5), real(P, 0.6));
        let w1 = omega_function(&y, &a, &b).unwrap();
        let w2 = omega_function(&y, &(Float::with_val(P, 1) - &b), &(Float::with_val(P, 1) - &a)).unwrap();
        assert!((w1 - w2).abs() < 1e-28);
    }

    #[test]
    fn level_one_harmonic_constants() {
        let spec = EisSpec::level_one(4).unwrap();
        let f = assemble_harmonic(&spec, 10, P).unwrap();
        let z4 = crate::lfun::zeta_value(4, P);
        assert!((f.shadow.coeffs[0].re.clone() - z4).abs() < 1e-35);
        let z3 = crate::lfun::zeta_value(3, P);
        let expect = -(pi(P) * z3) / 12u32;
        assert!((f.holo.coeffs[0].re.clone() - expect).abs() < 1e-35);
    }

    #[test]
    fn trivial_pair_t1_vanishes() {
        let spec = EisSpec::level_one(2).unwrap();
        let f = assemble_harmonic(&spec, 8, P).unwrap();
        let v = f.eval(&Cx::from_f64(P, 0.1, 1.0)).unwrap();
        assert!(v.abs() < 1e-35);
    }

    #[test]
    fn weight_one_shadow_is_class_number_series() {
        let spec = EisSpec::new(1, kronecker_character(-4).unwrap(), DirichletCharacter::trivial(1), 1).unwrap();
        let f = assemble_harmonic(&spec, 12, P).unwrap();
        // E_{1,-4} = 1/4 + Σ R_{-4}(n) q^n with R_{-4}(n) = r_2(n)/4
        let r2 = [0i64, 4, 4, 0, 4, 8, 0, 0, 4, 4, 8, 0, 0];
        let m2pi_i = Cx::new(Float::new(P), -(pi(P) * 2u32));
        for n in 1..=12 {
            let expect = m2pi_i.scale_i64(r2[n]).scale(&Float::with_val(P, 0.25));
            assert!(close(&f.shadow.coeffs[n], &expect, 1e-30), "n={n}");
        }
    }

    #[test]
    fn truncation_error_reports_requirement() {
        let spec = EisSpec::level_one(4).unwrap();
        let f = assemble_harmonic(&spec, 16, P).unwrap();
        match f.evaluate(&Cx::from_f64(P, 0.0, 0.05)) {
            Err(Error::Truncation { have, required }) => assert!(have == 16 && required > 100),
            other => panic!("expected truncation error, got {other:?}"),
        }
        assert!(f.evaluate(&Cx::from_f64(P, 0.0, 1.0)).is_ok());
    }

    #[test]
    fn xi_of_beta_term_is_minus_q() {
        // f = beta_{-1}(1, y) q^{-1}
        let f = FnForm {
            weight: -1,
            prec: P,
            f: |z: &Cx| {
                let b = beta_integral(-1, 1, &z.im);
                Cx::q_of(z).recip().scale(&b)
            },
        };
        let z = Cx::from_f64(P, 0.0, 1.0);
        let xi = xi_numeric(&f, &z, -1).unwrap();
        let q = Cx::q_of(&z);
        assert!(close(&xi, &(-q), 1e-13));
    }

    #[test]
    fn xi_kills_holomorphic_and_laplacian_kills_y() {
        let spec = EisSpec::level_one(4).unwrap();
        let e4 = eisenstein_coefficients(&spec, 40, P).unwrap();
        let z = Cx::from_f64(P, 0.0, 1.0);
        assert!(xi_numeric(&e4, &z, 4).unwrap().abs() < 1e-12);
        let y = FnForm { weight: 0, prec: P, f: |z: &Cx| Cx::from_real(z.im.clone()) };
        assert!(laplacian_numeric(&y, &z, 0).unwrap().abs() < 1e-12);
        let y2 = FnForm { weight: 0, prec: P, f: |z: &Cx| Cx::from_real(Float::with_val(P, z.im.square_ref())) };
        let got = laplacian_numeric(&y2, &z, 0).unwrap();
        assert!(close(&got, &Cx::from_f64(P, 2.0, 0.0), 1e-10));
    }

    #[test]
    fn xi_of_assembled_form_is_shadow() {
        let spec = EisSpec::level_one(4).unwrap();
        let f = assemble_harmonic(&spec, 48, P).unwrap();
        let z = Cx::from_f64(P, 0.3, 1.1);
        let xi = xi_numeric(&f, &z, -2).unwrap();
        let sh = f.shadow.eval(&z).unwrap();
        assert!(close(&xi, &sh, 1e-12), "{xi:?} vs {sh:?}");
        assert!(laplacian_numeric(&f, &z, -2).unwrap().abs() < 1e-10);
    }

    #[test]
    fn group_elements() {
        assert!(GammaZeroElement::new(1, 0, 4, 1, 4).is_ok());
        assert!(GammaZeroElement::new(1, 0, 2, 1, 4).is_err());
        assert!(GammaZeroElement::new(2, 0, 4, 1, 4).is_err());
        for g in sample_gamma0(12, 30, 20, 7) {
            assert_eq!(g.a * g.d - g.b * g.c, 1);
            assert_eq!(g.c % 12, 0);
            assert!(g.a.abs() <= 20 && g.b.abs() <= 20 && g.c.abs() <= 20 && g.d.abs() <= 20);
        }
        assert_eq!(sample_gamma0(4, 5, 20, 1), sample_gamma0(4, 5, 20, 1));
    }

    #[test]
    fn isometric_points_keep_height() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in sample_gamma0(4, 10, 20, 3) {
            let z = sample_point(&g, &mut rng, 0.8, 2.0, P);
            let w = g.act(&z);
            assert!((Float::with_val(P, &w.im - &z.im)).abs() < 1e-30);
        }
    }

    #[test]
    fn modularity_examples() {
        let spec = EisSpec::level_one(4).unwrap();
        let e4 = eisenstein_coefficients(&spec, 60, P).unwrap();
        let one = DirichletCharacter::trivial(1);
        let i = Cx::from_f64(P, 0.0, 1.0);
        let t = modularity_residual(&e4, &GammaZeroElement::t(), &Cx::from_f64(P, 0.2, 1.0), 4, &one).unwrap();
        assert!(t < 1e-30);
        let s = modularity_residual(&e4, &GammaZeroElement::s(), &i, 4, &one).unwrap();
        assert!(s < 1e-30);

        let two = EisSpec::new(2, one.clone(), one.clone(), 4).unwrap();
        let f = assemble_harmonic(&two, 400, P).unwrap();
        let g = GammaZeroElement::new(1, 0, 4, 1, 4).unwrap();
        let z = Cx::from_f64(P, 0.1, 1.3);
        let r = modularity_residual(&f, &g, &z, 0, &DirichletCharacter::trivial(4)).unwrap();
        assert!(r < 1e-10, "{r}");
    }
}
