//! Residual suites: the numerical checks that an assembled form is a
//! harmonic Maass form with the right shadow, plus the kernel identities.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::chars::DirichletCharacter;
use crate::coeffs::{eisenstein_coefficients, EisSpec};
use crate::config::PrecisionConfig;
use crate::forms::{
    assemble_harmonic, beta_integral, laplacian_numeric, modularity_residual, omega_function, sample_gamma0,
    sample_point, tail_tolerance, xi_numeric, Evaluatable, GammaZeroElement, HarmonicMaassForm,
};
use crate::lattice::lattice_preimage;
use crate::mp::{fmt_real, pi, real, Cx};
use crate::Result;

/// Entries of sampled `Gamma0(N)` elements stay within this bound.
pub const GROUP_ENTRY_BOUND: i64 = 20;

#[derive(Clone, Debug, Serialize)]
pub struct ResidualRow {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaZeroElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<[String; 2]>,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub subject: String,
    pub n_max: usize,
    pub rows: Vec<ResidualRow>,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: &str, subject: String, n_max: usize, rows: Vec<ResidualRow>, tol: f64) -> Self {
        let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
        let pass = rows.iter().all(|r| r.pass);
        SuiteReport { suite: suite.into(), subject, n_max, rows, max_residual, tol, pass }
    }
}

fn point_strings(z: &Cx) -> [String; 2] {
    [fmt_real(&z.re), fmt_real(&z.im)]
}

fn row(label: String, gamma: Option<GammaZeroElement>, z: Option<&Cx>, residual: f64, tol: f64) -> ResidualRow {
    ResidualRow { label, gamma, z: z.map(point_strings), residual, tol, pass: residual < tol }
}

/// Seeded points with `x` in `[-1/2, 1/2]` and `y` in `[0.8, 2]`.
pub fn sample_points(count: usize, seed: u64, prec: u32) -> Vec<Cx> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x: f64 = rng.gen_range(-0.5..=0.5);
            let y: f64 = rng.gen_range(0.8..=2.0);
            Cx::from_f64(prec, x, y)
        })
        .collect()
}

/// `|xi_{2-k} F - E_k^{psi,rho,t}|` at seeded points.
pub fn shadow_suite(spec: &EisSpec, cfg: &PrecisionConfig, points: usize, tol: f64) -> Result<SuiteReport> {
    let form = assemble_harmonic(spec, cfg.n_max, cfg.bits)?;
    shadow_suite_for(&form, cfg, points, tol)
}

pub fn shadow_suite_for(form: &HarmonicMaassForm, cfg: &PrecisionConfig, points: usize, tol: f64) -> Result<SuiteReport> {
    let pts = sample_points(points, cfg.seed, cfg.bits);
    let rows = pts
        .par_iter()
        .map(|z| {
            let xi = xi_numeric(form, z, form.weight_2mk)?;
            let sh = form.shadow.eval(z)?;
            let r = (&xi - &sh).abs().to_f64();
            Ok(row("xi".into(), None, Some(z), r, tol))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new("shadow", form.spec.describe(), form.n_max(), rows, tol))
}

/// `|Delta_{2-k} F|` at the same seeded points as the shadow suite.
pub fn laplacian_suite(spec: &EisSpec, cfg: &PrecisionConfig, points: usize, tol: f64) -> Result<SuiteReport> {
    let form = assemble_harmonic(spec, cfg.n_max, cfg.bits)?;
    let pts = sample_points(points, cfg.seed, cfg.bits);
    let rows = pts
        .par_iter()
        .map(|z| {
            let r = laplacian_numeric(&form, z, form.weight_2mk)?.abs().to_f64();
            Ok(row("laplacian".into(), None, Some(z), r, tol))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new("laplacian", spec.describe(), form.n_max(), rows, tol))
}

/// Seeded `(gamma, z)` pairs for a level; `z` lies on the isometric circle
/// of `gamma` so that `z` and `gamma z` sit at the same height.
pub fn modularity_samples(level: u64, count: usize, seed: u64, prec: u32) -> Vec<(GammaZeroElement, Cx)> {
    let gammas = sample_gamma0(level, count, GROUP_ENTRY_BOUND, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    gammas
        .into_iter()
        .map(|g| {
            let z = sample_point(&g, &mut rng, 0.8, 2.0, prec);
            (g, z)
        })
        .collect()
}

/// Builds a form via `build(n_max)`, enlarging `n_max` until the tail at
/// the lowest sample point is below the evaluation tolerance.
pub fn form_for_samples(
    build: &dyn Fn(usize) -> Result<HarmonicMaassForm>,
    samples: &[(GammaZeroElement, Cx)],
    cfg: &PrecisionConfig,
) -> Result<HarmonicMaassForm> {
    let y_min = samples.iter().map(|(_, z)| z.im.to_f64()).fold(f64::INFINITY, f64::min);
    let form = build(cfg.n_max)?;
    if !y_min.is_finite() {
        return Ok(form);
    }
    let need = form.required_n_max(y_min, tail_tolerance(cfg.bits));
    if need <= form.n_max() {
        return Ok(form);
    }
    build(need + need / 16 + 1)
}

pub fn modularity_suite(spec: &EisSpec, cfg: &PrecisionConfig, count: usize, tol: f64) -> Result<SuiteReport> {
    let build = |n: usize| assemble_harmonic(spec, n, cfg.bits);
    modularity_suite_for(&build, spec.describe(), cfg, count, tol).map(|(r, _)| r)
}

/// Modularity residuals of `build(n_max)` over seeded elements of
/// `Gamma0(level)`; also returns the form actually used.
pub fn modularity_suite_for(
    build: &dyn Fn(usize) -> Result<HarmonicMaassForm>,
    subject: String,
    cfg: &PrecisionConfig,
    count: usize,
    tol: f64,
) -> Result<(SuiteReport, HarmonicMaassForm)> {
    let probe = build(1)?;
    let samples = modularity_samples(probe.level, count, cfg.seed, cfg.bits);
    let form = form_for_samples(build, &samples, cfg)?;
    let rows = samples
        .par_iter()
        .map(|(g, z)| {
            let r = modularity_residual(&form, g, z, form.weight_2mk, &form.character)?;
            Ok(row("gamma".into(), Some(*g), Some(z), r.to_f64(), tol))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((SuiteReport::new("modularity", subject, form.n_max(), rows, tol), form))
}

/// The scalar `lambda` minimising `Σ |lambda A + B|^2`, where `A` and `B`
/// are the modularity defects of the holomorphic and non-holomorphic parts.
/// A modular form gives `lambda = 1`.
pub fn fit_holomorphic_scale(form: &HarmonicMaassForm, samples: &[(GammaZeroElement, Cx)]) -> Result<f64> {
    let p = form.holo.prec() + crate::special::GUARD;
    let parts = samples
        .par_iter()
        .map(|(g, z)| {
            let w = g.act(z);
            let chi = form.character.evaluate(g.d, p);
            let factor = &chi * &g.cocycle(z).powi(form.weight_2mk);
            let h_w = form.holo.eval(&w)?;
            let h_z = form.holo.eval(z)?;
            let f_w = form.eval(&w)?;
            let f_z = form.eval(z)?;
            let a = &h_w - &(&factor * &h_z);
            let full = &f_w - &(&factor * &f_z);
            let b = &full - &a;
            Ok((a, b))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut num = Cx::zero(p);
    let mut den = Float::new(p);
    for (a, b) in &parts {
        num += &a.conj() * b;
        den += a.norm_sqr();
    }
    if den.is_zero() {
        return Ok(f64::NAN);
    }
    Ok(-(num.re / den).to_f64())
}

/// Agreement of the assembled pre-image with the direct lattice sum.
pub fn lattice_suite(spec: &EisSpec, points: &[Cx], bound: u64, cfg: &PrecisionConfig, tol: f64) -> Result<SuiteReport> {
    let form = assemble_harmonic(spec, cfg.n_max, cfg.bits)?;
    let mut rows = Vec::new();
    for z in points {
        let lv = lattice_preimage(spec, z, bound)?;
        let r = (&lv.value - &form.eval(z)?).abs().to_f64();
        rows.push(row(format!("lattice bound {bound}, error estimate {:.2e}", lv.error_estimate), None, Some(z), r, tol));
    }
    Ok(SuiteReport::new("lattice", spec.describe(), form.n_max(), rows, tol))
}

fn rel(a: &Float, b: &Float) -> f64 {
    let p = a.prec();
    let diff = Float::with_val(p, a - b).abs();
    let scale = Float::with_val(p, b.abs_ref()).max(&Float::with_val(p, 1));
    (diff / scale).to_f64()
}

/// `omega(y; a, 0) = 1`, `omega(y; 1-b, 1-a) = omega(y; a, b)` and
/// `y^{k-2} omega(4πny; k-1, 1) = 4πn e^{4πny} beta_{2-k}(n, y)`, each on a
/// 27-point grid; residuals are relative with floor 1.
pub fn omega_suite(prec: u32, tol: f64) -> Result<SuiteReport> {
    let ys = [0.5, 2.0, 7.0];
    let alphas = [-0.7, 0.4, 2.5];
    let betas = [0.0, 0.6, 1.8];
    let mut jobs: Vec<(String, Box<dyn Fn() -> Result<f64> + Send + Sync>)> = Vec::new();
    for &y in &ys {
        for &a in &alphas {
            for &b in &[0.3, 1.0, 3.2] {
                jobs.push((
                    format!("omega(y={y}; a={a}, 0) = 1 [b grid {b}]"),
                    Box::new(move || {
                        // a is shifted by b so the 27 points are distinct
                        let w = omega_function(&real(prec, y), &real(prec, a + b), &real(prec, 0.0))?;
                        Ok(rel(&w, &real(prec, 1.0)))
                    }),
                ));
            }
            for &b in &betas {
                jobs.push((
                    format!("omega(y={y}; {a}, {b}) = omega(y; {}, {})", 1.0 - b, 1.0 - a),
                    Box::new(move || {
                        let w1 = omega_function(&real(prec, y), &real(prec, a), &real(prec, b))?;
                        let w2 = omega_function(&real(prec, y), &real(prec, 1.0 - b), &real(prec, 1.0 - a))?;
                        Ok(rel(&w1, &w2))
                    }),
                ));
            }
        }
    }
    for &k in &[1i64, 3, 4] {
        for &n in &[1u64, 2, 5] {
            for &y in &[0.3, 0.8, 1.5] {
                jobs.push((
                    format!("bridge k={k} n={n} y={y}"),
                    Box::new(move || {
                        let yr = real(prec, y);
                        let four_pi_n = pi(prec) * (4 * n);
                        let arg = Float::with_val(prec, &four_pi_n * &yr);
                        let lhs = omega_function(&arg, &real(prec, (k - 1) as f64), &real(prec, 1.0))?
                            * Float::with_val(prec, rug::ops::Pow::pow(&yr, (k - 2) as i32));
                        let rhs = four_pi_n * arg.exp() * beta_integral(2 - k, n, &yr);
                        Ok(rel(&lhs, &rhs))
                    }),
                ));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|(label, job)| Ok(row(label.clone(), None, None, job()?, tol)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new("omega", "kernel identities".into(), 0, rows, tol))
}

/// `(M / W(conj rho)) c[E_1^{psi,rho,t}](n) = (L / W(conj psi)) c[E_1^{rho,psi,t}](n)`
/// for primitive `psi`, `rho`; residuals relative with floor 1.
pub fn symmetry_suite(
    psi: &DirichletCharacter,
    rho: &DirichletCharacter,
    t: u64,
    n_max: usize,
    prec: u32,
    tol: f64,
) -> Result<SuiteReport> {
    let a = EisSpec::new(1, psi.clone(), rho.clone(), t)?;
    let b = EisSpec::new(1, rho.clone(), psi.clone(), t)?;
    let ea = eisenstein_coefficients(&a, n_max, prec)?;
    let eb = eisenstein_coefficients(&b, n_max, prec)?;
    let la = Cx::from_real(Float::with_val(prec, rho.modulus())).div(&rho.conj().gauss_sum(prec)?);
    let lb = Cx::from_real(Float::with_val(prec, psi.modulus())).div(&psi.conj().gauss_sum(prec)?);
    let rows = (0..=n_max)
        .map(|n| {
            let lhs = &la * &ea.coeffs[n];
            let rhs = &lb * &eb.coeffs[n];
            let scale = rhs.abs().to_f64().max(1.0);
            row(format!("n={n}"), None, None, (&lhs - &rhs).abs().to_f64() / scale, tol)
        })
        .collect();
    Ok(SuiteReport::new("symmetry", format!("{} <-> {}", a.describe(), b.describe()), n_max, rows, tol))
}
