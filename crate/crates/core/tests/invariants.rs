use eismock::arith::{divisors, gcd};
use eismock::chars::{character_group, is_fundamental_discriminant, kronecker_character, DirichletCharacter};
use eismock::coeffs::{a_coeff, sigma_twisted, sigma_twisted_exact};
use eismock::cyclo::Cyclo;
use eismock::forms::{sample_gamma0, GammaZeroElement};
use eismock::lfun::{l_value, zeta_even_closed_form};
use eismock::mp::{real, Cx};
use eismock::oracles::{hecke_r, hecke_rplus, RplusMethod};
use eismock::special::riemann_zeta;
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer};

const P: u32 = 128;

fn fundamentals() -> Vec<i64> {
    (-200..0).filter(|&d| is_fundamental_discriminant(d)).collect()
}

fn characters_up_to(n: u64) -> Vec<DirichletCharacter> {
    (1..=n).flat_map(character_group).collect()
}

#[test]
fn orthogonality_is_exact() {
    for chi in characters_up_to(60).iter().filter(|c| !c.is_trivial()) {
        let n = chi.modulus();
        let mut s = Cyclo::zero(chi.order());
        for a in 1..=n {
            if let Some(r) = chi.value(a as i64) {
                s.add_root(r.num(), r.den(), 1);
            }
        }
        assert!(s.is_zero(), "{chi}");
    }
}

#[test]
fn gauss_sums_have_modulus_sqrt_conductor_and_conjugate() {
    let tol = Float::with_val(P, 1) >> 100;
    for chi in characters_up_to(60).iter().filter(|c| c.is_primitive()) {
        let w = chi.gauss_sum(P).unwrap();
        assert!((w.norm_sqr() - chi.modulus()).abs() < tol, "{chi}");
        let lhs = w.conj().scale_i64(chi.parity());
        let rhs = chi.conj().gauss_sum(P).unwrap();
        assert!((&lhs - &rhs).abs() < tol, "{chi}");
    }
}

#[test]
fn even_zeta_closed_form_against_series() {
    for k in (2..=20).step_by(2) {
        let a = zeta_even_closed_form(k, P);
        let b = riemann_zeta(&real(P, k as f64));
        assert!((a - b).abs() < 1e-36, "k = {k}");
    }
}

/// `L(2, chi)` against `Σ_{n <= 10^6} chi(n)/n^2`, whose tail is below `10^{-6}`.
#[test]
fn l_two_against_direct_summation() {
    const N: usize = 1_000_000;
    for chi in characters_up_to(40).iter().filter(|c| c.is_primitive() && !c.is_trivial()) {
        let m = chi.modulus() as usize;
        let vals: Vec<(f64, f64)> = (0..m)
            .map(|a| {
                let v = chi.evaluate(a as i64, 64).to_f64();
                (v.0, v.1)
            })
            .collect();
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for n in (1..=N).rev() {
            let (a, b) = vals[n % m];
            let w = 1.0 / (n as f64 * n as f64);
            re += a * w;
            im += b * w;
        }
        let l = l_value(chi, 2, P).unwrap().to_f64();
        let err = ((l.0 - re).powi(2) + (l.1 - im).powi(2)).sqrt();
        assert!(err < 1.0 / N as f64 + 1e-12, "{chi}: {err}");
    }
}

#[test]
fn classical_divisor_sums() {
    let one = DirichletCharacter::trivial(1);
    for k1 in [0u32, 1, 3, 5] {
        for n in 1..=1000u64 {
            let classical: Integer = divisors(n).into_iter().map(|d| Integer::from(d).pow(k1)).sum();
            assert_eq!(sigma_twisted_exact(k1, n, &one, &one).as_integer().unwrap(), classical);
        }
    }
}

/// `a_k(0; n, psi, conj rho) = σ^{psi,rho}_{k-1}(n)`, two independent divisor-sum paths.
#[test]
fn a_coeff_at_zero_is_sigma() {
    let grid: Vec<DirichletCharacter> = [1u64, 3, 4, 6, 8, 12].into_iter().flat_map(character_group).collect();
    let zero = Float::new(P);
    let tol = Float::with_val(P, 1) >> 90;
    for psi in &grid {
        for rho in &grid {
            for k in [1i64, 2] {
                for n in 1..=200u64 {
                    let a = a_coeff(&zero, k, n, psi, &rho.conj());
                    let s = sigma_twisted(k as u32 - 1, n, psi, rho, P);
                    let scale = Float::with_val(P, s.abs()).max(&Float::with_val(P, 1));
                    assert!((&a - &s).abs() < Float::with_val(P, &tol * &scale), "{psi} {rho} k={k} n={n}");
                }
            }
        }
    }
}

#[test]
fn four_r_minus_four_is_r_two_small() {
    for n in 1..=50u64 {
        let brute = (-8i64..=8)
            .flat_map(|a| (-8i64..=8).map(move |b| a * a + b * b))
            .filter(|&s| s == n as i64)
            .count() as i64;
        assert_eq!(4 * hecke_r(-4, n).unwrap(), brute, "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kronecker_divisor_sum_is_multiplicative(i in 0usize..62, m in 1u64..=100, n in 1u64..=100) {
        let ds = fundamentals();
        let d = ds[i % ds.len()];
        prop_assume!(gcd(m, n) == 1);
        let chi = kronecker_character(d).unwrap();
        let one = DirichletCharacter::trivial(1);
        let f = |x: u64| sigma_twisted_exact(0, x, &chi, &one).as_integer().unwrap();
        prop_assert_eq!(f(m * n), f(m) * f(n));
        prop_assert_eq!(f(m * n), Integer::from(hecke_r(d, m * n).unwrap()));
    }

    #[test]
    fn rplus_routes_agree(i in 0usize..62, n in 1u64..=5000) {
        let ds = fundamentals();
        let d = ds[i % ds.len()];
        let a = hecke_rplus(d, n, RplusMethod::Definitional, P).unwrap();
        let b = hecke_rplus(d, n, RplusMethod::Proposition, P).unwrap();
        let scale = a.to_f64().abs().max(1.0);
        prop_assert!((a - b).abs().to_f64() <= 1e-30 * scale);
    }

    #[test]
    fn character_values_are_multiplicative(n in 1u64..=60, j in 0usize..64, a in -500i64..500, b in -500i64..500) {
        let group = character_group(n);
        let chi = &group[j % group.len()];
        let prod = match (chi.value(a), chi.value(b)) {
            (Some(x), Some(y)) => Some(x.mul(y)),
            _ => None,
        };
        prop_assert_eq!(chi.value(a * b), prod);
    }

    #[test]
    fn group_action_scales_height(level in 1u64..=12, seed in 0u64..1000, x in -0.5f64..0.5, y in 0.3f64..3.0) {
        let g: GammaZeroElement = sample_gamma0(level, 1, 20, seed).remove(0);
        prop_assert_eq!(g.a * g.d - g.b * g.c, 1);
        prop_assert_eq!(g.c.rem_euclid(level as i64), 0);
        let z = Cx::from_f64(P, x, y);
        let w = g.act(&z);
        let j = g.cocycle(&z);
        let expect = Float::with_val(P, &z.im / j.norm_sqr());
        prop_assert!((w.im - expect).abs() < 1e-30);
    }
}
