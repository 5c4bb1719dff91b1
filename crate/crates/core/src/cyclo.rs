//! Exact sums of roots of unity.
//!
//! An element of `Z[x]/(x^n - 1)`, read as a sum `Σ a_j ζ_n^j`. Equality and
//! zero tests reduce modulo the cyclotomic polynomial `Φ_n`, so identities such
//! as character orthogonality hold exactly rather than to a tolerance.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::Integer;

use crate::arith::divisors;
use crate::mp::{Cx, Real};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclo {
    order: u64,
    coeffs: Vec<Integer>,
}

impl Cyclo {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1);
        Cyclo {
            order,
            coeffs: vec![Integer::new(); order as usize],
        }
    }

    pub fn integer(v: impl Into<Integer>) -> Self {
        Cyclo {
            order: 1,
            coeffs: vec![v.into()],
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Add `coeff * ζ^(num/den)` where `den` divides the order.
    pub fn add_root<T>(&mut self, num: u64, den: u64, coeff: T)
    where
        Integer: std::ops::AddAssign<T>,
    {
        debug_assert!(self.order % den == 0, "root order {den} does not divide {}", self.order);
        let j = (num % den) * (self.order / den);
        self.coeffs[j as usize] += coeff;
    }

    /// Re-express in `Z[x]/(x^m - 1)` for a multiple `m` of the current order.
    pub fn lift(&self, m: u64) -> Cyclo {
        assert!(m % self.order == 0);
        let step = m / self.order;
        let mut out = Cyclo::zero(m);
        for (j, c) in self.coeffs.iter().enumerate() {
            out.coeffs[j * step as usize] += c;
        }
        out
    }

    pub fn add(&self, other: &Cyclo) -> Cyclo {
        let m = crate::arith::lcm(self.order, other.order);
        let mut a = self.lift(m);
        let b = other.lift(m);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn scale(&self, k: &Integer) -> Cyclo {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| Integer::from(c * k)).collect(),
        }
    }

    /// Canonical representative of degree `< φ(n)`.
    pub fn reduced(&self) -> Vec<Integer> {
        let phi = cyclotomic_polynomial(self.order);
        poly_rem(&self.coeffs, &phi)
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|c| *c == 0)
    }

    /// The rational integer this element equals, if it is one.
    pub fn as_integer(&self) -> Option<Integer> {
        let r = self.reduced();
        if r.iter().skip(1).all(|c| *c == 0) {
            Some(r.into_iter().next().unwrap_or_default())
        } else {
            None
        }
    }

    pub fn to_complex(&self, prec: u32) -> Cx {
        let mut acc = Cx::zero(prec);
        for (j, c) in self.coeffs.iter().enumerate() {
            if *c != 0 {
                let root = Cx::root_of_unity(prec, j as i64, self.order);
                acc += root.scale(&Real::with_val(prec, c));
            }
        }
        acc
    }
}

fn poly_rem(num: &[Integer], monic: &[i128]) -> Vec<Integer> {
    let d = monic.len() - 1;
    let mut r: Vec<Integer> = num.to_vec();
    if r.len() <= d {
        r.resize(d, Integer::new());
        return r;
    }
    for i in (d..r.len()).rev() {
        let c = r[i].clone();
        if c != 0 {
            for (j, &m) in monic.iter().enumerate() {
                if m != 0 {
                    r[i - d + j] -= Integer::from(&c * Integer::from(m));
                }
            }
        }
    }
    r.truncate(d);
    r
}

fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    // den is monic
    let d = den.len() - 1;
    let mut r = num.to_vec();
    let mut q = vec![0i128; num.len() - d];
    for i in (d..r.len()).rev() {
        let c = r[i];
        q[i - d] = c;
        if c != 0 {
            for (j, &m) in den.iter().enumerate() {
                r[i - d + j] -= c * m;
            }
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i128> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<i128>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 = Π_{d | n} Φ_d
    let mut p = vec![0i128; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in divisors(n) {
        if d < n {
            p = poly_div_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    cache.lock().unwrap().insert(n, p.clone());
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn full_root_sum_vanishes() {
        for n in 2..40u64 {
            let mut s = Cyclo::zero(n);
            for j in 0..n {
                s.add_root(j, n, 1);
            }
            assert!(s.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn integer_detection() {
        // ζ_3 + ζ_3^2 = -1
        let mut s = Cyclo::zero(3);
        s.add_root(1, 3, 1);
        s.add_root(2, 3, 1);
        assert_eq!(s.as_integer(), Some(Integer::from(-1)));
        // i is not rational
        let mut t = Cyclo::zero(4);
        t.add_root(1, 4, 1);
        assert_eq!(t.as_integer(), None);
    }
}
