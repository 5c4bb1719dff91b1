//! Dirichlet characters held exactly as exponent vectors on a fixed basis of
//! `(Z/NZ)*`.
//!
//! The basis is built by CRT over prime powers: the smallest primitive root
//! for odd `p^a`, `{-1}` for 4 and `{-1, 5}` for `2^a`, `a >= 3`. A character
//! sends the i-th generator `g_i` of order `o_i` to `e^{2 pi i e_i / o_i}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, factor, gcd, inv_mod, is_squarefree, lcm, smallest_primitive_root};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::mp::Cx;

pub use crate::arith::mobius;

/// The root of unity `e^{2 pi i num/den}`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    num: u64,
    den: u64,
}

impl Root {
    pub const ONE: Root = Root { num: 0, den: 1 };
    pub const MINUS_ONE: Root = Root { num: 1, den: 2 };

    pub fn new(num: i64, den: u64) -> Root {
        assert!(den >= 1);
        let n = num.rem_euclid(den as i64) as u64;
        let g = gcd(n, den);
        if n == 0 {
            Root::ONE
        } else {
            Root { num: n / g, den: den / g }
        }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    /// Multiplicative order.
    pub fn den(self) -> u64 {
        self.den
    }

    pub fn mul(self, o: Root) -> Root {
        let d = lcm(self.den, o.den);
        Root::new((self.num * (d / self.den) + o.num * (d / o.den)) as i64, d)
    }

    pub fn conj(self) -> Root {
        Root::new(-(self.num as i64), self.den)
    }

    pub fn pow(self, e: u64) -> Root {
        Root::new(((self.num as u128 * e as u128) % self.den as u128) as i64, self.den)
    }

    /// `+1` or `-1` when the root is real.
    pub fn sign(self) -> Option<i64> {
        match self.den {
            1 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn to_cx(self, prec: u32) -> Cx {
        Cx::root_of_unity(prec, self.num as i64, self.den)
    }
}

struct Component {
    q: u64,
    p: u64,
    /// Generators modulo `q` with their orders.
    gens: Vec<(u64, u64)>,
    /// `logs[r * gens.len() + i]`: exponent of generator `i` in the unit `r`.
    logs: Vec<u32>,
}

impl Component {
    fn new(p: u64, a: u32) -> Component {
        let q = p.pow(a);
        let gens: Vec<(u64, u64)> = if p != 2 {
            vec![(smallest_primitive_root(p, a), q / p * (p - 1))]
        } else if a == 1 {
            vec![]
        } else if a == 2 {
            vec![(3, 2)]
        } else {
            vec![(q - 1, 2), (5, q / 4)]
        };
        let stride = gens.len();
        let mut logs = vec![u32::MAX; q as usize * stride.max(1)];
        match gens.as_slice() {
            [] => {}
            [(g, o)] => {
                let mut pw = 1u64;
                for j in 0..*o {
                    logs[pw as usize] = j as u32;
                    pw = pw * g % q;
                }
            }
            [(_, _), (five, o5)] => {
                let mut pw = 1u64;
                for v in 0..*o5 {
                    logs[pw as usize * 2] = 0;
                    logs[pw as usize * 2 + 1] = v as u32;
                    let neg = q - pw;
                    logs[neg as usize * 2] = 1;
                    logs[neg as usize * 2 + 1] = v as u32;
                    pw = pw * five % q;
                }
            }
            _ => unreachable!(),
        }
        Component { q, p, gens, logs }
    }
}

/// Structure of `(Z/NZ)*` on the canonical basis.
pub struct UnitGroup {
    modulus: u64,
    components: Vec<Component>,
    /// CRT-lifted generators modulo `N` and their orders.
    generators: Vec<(u64, u64)>,
    /// Least common multiple of the generator orders.
    exponent: u64,
}

impl UnitGroup {
    fn build(n: u64) -> UnitGroup {
        let mut components = Vec::new();
        let mut generators = Vec::new();
        for (p, a) in factor(n) {
            let c = Component::new(p, a);
            let rest = n / c.q;
            for &(g, o) in &c.gens {
                // x = g mod q, x = 1 mod N/q
                let lifted = if rest == 1 {
                    g
                } else {
                    let inv = inv_mod(rest as i64, c.q).expect("coprime CRT factors");
                    let t = ((g + c.q - 1) % c.q) as u128 * inv as u128 % c.q as u128;
                    (1 + rest as u128 * t) as u64 % n
                };
                generators.push((lifted, o));
            }
            components.push(c);
        }
        let exponent = generators.iter().fold(1, |acc, &(_, o)| lcm(acc, o));
        UnitGroup {
            modulus: n,
            components,
            generators,
            exponent,
        }
    }

    pub fn get(n: u64) -> Arc<UnitGroup> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<UnitGroup>>>> = OnceLock::new();
        assert!(n >= 1, "modulus must be positive");
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(g) = cache.lock().unwrap().get(&n) {
            return g.clone();
        }
        let g = Arc::new(UnitGroup::build(n));
        cache.lock().unwrap().entry(n).or_insert(g).clone()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[(u64, u64)] {
        &self.generators
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn order(&self) -> u64 {
        self.generators.iter().map(|&(_, o)| o).product()
    }

    /// Exponents of `n` on the generators, or `None` if `n` is not a unit.
    pub fn discrete_log(&self, n: i64) -> Option<Vec<u64>> {
        let mut out = Vec::with_capacity(self.generators.len());
        for c in &self.components {
            let r = n.rem_euclid(c.q as i64) as u64;
            if r % c.p == 0 {
                return None;
            }
            let s = c.gens.len();
            for i in 0..s {
                out.push(c.logs[r as usize * s + i] as u64);
            }
        }
        Some(out)
    }
}

#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    exponents: Vec<u64>,
    conductor: u64,
    parity: i64,
    core: Option<Arc<DirichletCharacter>>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, o: &Self) -> bool {
        self.modulus() == o.modulus() && self.exponents == o.exponents
    }
}

impl Eq for DirichletCharacter {}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi[{}; {:?}]", self.modulus(), self.exponents)
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label_json())
    }
}

impl DirichletCharacter {
    pub fn new(modulus: u64, exponents: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Label("modulus must be positive".into()));
        }
        let group = UnitGroup::get(modulus);
        if exponents.len() != group.generators.len() {
            return Err(Error::Label(format!(
                "modulus {modulus} needs {} exponents, got {}",
                group.generators.len(),
                exponents.len()
            )));
        }
        for (&e, &(_, o)) in exponents.iter().zip(&group.generators) {
            if e >= o {
                return Err(Error::Label(format!("exponent {e} out of range 0..{o}")));
            }
        }
        Ok(Self::from_parts(group, exponents))
    }

    fn from_parts(group: Arc<UnitGroup>, exponents: Vec<u64>) -> Self {
        let mut chi = DirichletCharacter {
            group,
            exponents,
            conductor: 0,
            parity: 1,
            core: None,
        };
        chi.parity = chi.value(-1).and_then(Root::sign).expect("chi(-1) = +-1");
        chi.conductor = chi.find_conductor();
        if chi.conductor != chi.modulus() {
            let m = chi.conductor;
            let n = chi.modulus();
            let core = Self::from_values(m, |h| {
                let lift = (0..n)
                    .map(|t| h + m * t)
                    .find(|&x| gcd(x, n) == 1)
                    .expect("every unit mod m lifts to a unit mod N");
                chi.value(lift as i64).unwrap()
            });
            debug_assert_eq!(core.conductor, m);
            chi.core = Some(Arc::new(core));
        }
        chi
    }

    /// The character mod `modulus` taking the value `f(g)` on each basis generator.
    pub fn from_values(modulus: u64, f: impl Fn(u64) -> Root) -> Self {
        let group = UnitGroup::get(modulus);
        let exponents = group
            .generators
            .iter()
            .map(|&(g, o)| {
                let r = f(g);
                assert!(
                    (r.num * o) % r.den == 0,
                    "value on generator {g} is not an {o}-th root of unity"
                );
                r.num * o / r.den
            })
            .collect();
        Self::from_parts(group, exponents)
    }

    pub fn trivial(modulus: u64) -> Self {
        let group = UnitGroup::get(modulus);
        let exponents = vec![0; group.generators.len()];
        Self::from_parts(group, exponents)
    }

    fn find_conductor(&self) -> u64 {
        let n = self.modulus();
        for d in divisors(n) {
            if d == n {
                return n;
            }
            let induced = (1..n / d)
                .map(|j| 1 + d * j)
                .filter(|&x| gcd(x, n) == 1)
                .all(|x| self.value(x as i64) == Some(Root::ONE));
            if induced {
                return d;
            }
        }
        n
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn group(&self) -> &UnitGroup {
        &self.group
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// `N / m_chi`.
    pub fn ell(&self) -> u64 {
        self.modulus() / self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.core.is_none()
    }

    /// The primitive character inducing this one.
    pub fn core(&self) -> &DirichletCharacter {
        self.core.as_deref().unwrap_or(self)
    }

    pub fn conductor_and_core(&self) -> (u64, DirichletCharacter) {
        (self.conductor, self.core().clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// `chi(-1)`.
    pub fn parity(&self) -> i64 {
        self.parity
    }

    pub fn order(&self) -> u64 {
        self.exponents
            .iter()
            .zip(&self.group.generators)
            .fold(1, |acc, (&e, &(_, o))| lcm(acc, o / gcd(e, o)))
    }

    pub fn is_real(&self) -> bool {
        self.order() <= 2
    }

    /// Exact value: `None` when `gcd(n, N) > 1`.
    pub fn value(&self, n: i64) -> Option<Root> {
        let logs = self.group.discrete_log(n)?;
        let big_e = self.group.exponent;
        let mut idx: u128 = 0;
        for ((&l, &e), &(_, o)) in logs.iter().zip(&self.exponents).zip(&self.group.generators) {
            idx += l as u128 * e as u128 * (big_e / o) as u128;
        }
        Some(Root::new((idx % big_e as u128) as i64, big_e))
    }

    /// Value of a real character as an integer in `{-1, 0, 1}`.
    pub fn real_value(&self, n: i64) -> i64 {
        match self.value(n) {
            None => 0,
            Some(r) => r.sign().expect("real_value on a non-real character"),
        }
    }

    /// `chi(n)` rendered at `prec` bits.
    pub fn evaluate(&self, n: i64, prec: u32) -> Cx {
        match self.value(n) {
            None => Cx::zero(prec),
            Some(r) => r.to_cx(prec),
        }
    }

    pub fn conj(&self) -> Self {
        let exps = self
            .exponents
            .iter()
            .zip(&self.group.generators)
            .map(|(&e, &(_, o))| (o - e) % o)
            .collect();
        Self::from_parts(self.group.clone(), exps)
    }

    /// Pointwise product, as a character modulo the lcm of the moduli.
    pub fn mul(&self, o: &DirichletCharacter) -> Self {
        let n = lcm(self.modulus(), o.modulus());
        Self::from_values(n, |g| {
            self.value(g as i64)
                .unwrap()
                .mul(o.value(g as i64).unwrap())
        })
    }

    /// The character induced to a multiple of the modulus.
    pub fn lift_to(&self, n: u64) -> Self {
        assert!(n % self.modulus() == 0, "lift_to needs a multiple of the modulus");
        Self::from_values(n, |g| self.value(g as i64).unwrap())
    }

    /// `W(chi) = Σ_{n=1}^{N} chi(n) e^{2 pi i n/N}` as an exact cyclotomic number.
    pub fn gauss_sum_exact(&self) -> Result<Cyclo> {
        if !self.is_primitive() {
            return Err(Error::NotPrimitive {
                modulus: self.modulus(),
                conductor: self.conductor,
            });
        }
        let n = self.modulus();
        let order = lcm(self.group.exponent, n);
        let mut acc = Cyclo::zero(order);
        for a in 1..=n {
            if let Some(r) = self.value(a as i64) {
                // chi(a) zeta_n^a as a single root
                let root = r.mul(Root::new(a as i64, n));
                acc.add_root(root.num, root.den, 1);
            }
        }
        Ok(acc)
    }

    pub fn gauss_sum(&self, prec: u32) -> Result<Cx> {
        Ok(self.gauss_sum_exact()?.to_complex(prec))
    }

    pub fn label(&self) -> CharacterLabel {
        CharacterLabel {
            modulus: self.modulus(),
            exponents: self.exponents.clone(),
            conductor: Some(self.conductor),
        }
    }

    pub fn label_json(&self) -> String {
        serde_json::to_string(&self.label()).expect("label serializes")
    }
}

/// Serialized form `{"modulus": N, "exponents": [...], "conductor": m}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterLabel {
    pub modulus: u64,
    pub exponents: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor: Option<u64>,
}

/// Parse `trivial:N`, `kronecker:D` (any fundamental `D`), or the JSON label object.
pub fn parse_label(s: &str) -> Result<DirichletCharacter> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("trivial:") {
        let n: u64 = rest
            .trim()
            .parse()
            .map_err(|_| Error::Label(s.to_string()))?;
        if n == 0 {
            return Err(Error::Label(s.to_string()));
        }
        return Ok(DirichletCharacter::trivial(n));
    }
    if let Some(rest) = s.strip_prefix("kronecker:") {
        let d: i64 = rest
            .trim()
            .parse()
            .map_err(|_| Error::Label(s.to_string()))?;
        return quadratic_character(d);
    }
    if s.starts_with('{') {
        let lab: CharacterLabel =
            serde_json::from_str(s).map_err(|e| Error::Label(format!("{s}: {e}")))?;
        let chi = DirichletCharacter::new(lab.modulus, lab.exponents)?;
        if let Some(c) = lab.conductor {
            if c != chi.conductor {
                return Err(Error::Label(format!(
                    "{s}: stated conductor {c}, actual {}",
                    chi.conductor
                )));
            }
        }
        return Ok(chi);
    }
    Err(Error::Label(s.to_string()))
}

/// All `phi(N)` characters mod `N`, exponent vectors in lexicographic order.
pub fn character_group(n: u64) -> Vec<DirichletCharacter> {
    let group = UnitGroup::get(n);
    let orders: Vec<u64> = group.generators.iter().map(|&(_, o)| o).collect();
    let total: u64 = orders.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut exps = vec![0u64; orders.len()];
    for _ in 0..total {
        out.push(DirichletCharacter::from_parts(group.clone(), exps.clone()));
        for i in (0..exps.len()).rev() {
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
    out
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Kronecker symbol `(d/n)` for `n >= 1`.
pub fn kronecker_symbol(d: i64, n: u64) -> i64 {
    assert!(n >= 1);
    let mut acc = 1i64;
    for (p, e) in factor(n) {
        let s = if p == 2 {
            if d % 2 == 0 {
                0
            } else if matches!(d.rem_euclid(8), 1 | 7) {
                1
            } else {
                -1
            }
        } else {
            let r = d.rem_euclid(p as i64) as u64;
            if r == 0 {
                0
            } else if crate::arith::pow_mod(r, (p - 1) / 2, p) == 1 {
                1
            } else {
                -1
            }
        };
        if e % 2 == 1 || s == 0 {
            acc *= s;
        }
    }
    acc
}

/// `psi_D(n) = (D/n)` as a primitive odd character mod `|D|`, for `D` the
/// discriminant of an imaginary quadratic field.
pub fn kronecker_character(d: i64) -> Result<DirichletCharacter> {
    if d >= 0 {
        return Err(Error::NotFundamental(d));
    }
    quadratic_character(d)
}

/// `(D/.)` for any fundamental discriminant; even exactly when `D > 0`.
pub fn quadratic_character(d: i64) -> Result<DirichletCharacter> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::NotFundamental(d));
    }
    let n = d.unsigned_abs();
    let chi = DirichletCharacter::from_values(n, |g| match kronecker_symbol(d, g) {
        1 => Root::ONE,
        -1 => Root::MINUS_ONE,
        _ => unreachable!("generators are units"),
    });
    debug_assert!(chi.is_primitive() && chi.parity() == d.signum());
    Ok(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::euler_phi;

    const P: u32 = 128;

    fn close(a: &Cx, b: &Cx) -> bool {
        (a - b).abs() < 1e-35
    }

    #[test]
    fn group_sizes_and_trivial_modulus_one() {
        let g1 = character_group(1);
        assert_eq!(g1.len(), 1);
        assert!(g1[0].is_trivial());
        assert_eq!(g1[0].value(0), Some(Root::ONE));
        assert_eq!(g1[0].value(17), Some(Root::ONE));
        for n in 1..=60 {
            assert_eq!(character_group(n).len() as u64, euler_phi(n));
        }
    }

    #[test]
    fn mod_four_and_five() {
        let g4 = character_group(4);
        let nt = g4.iter().find(|c| !c.is_trivial()).unwrap();
        assert_eq!(nt.real_value(3), -1);

        // generator of (Z/5)* is 2; exponent 1 sends 2 -> i
        let chi = DirichletCharacter::new(5, vec![1]).unwrap();
        assert!(close(&chi.evaluate(2, P), &Cx::i(P)));
        assert!(close(&chi.evaluate(3, P), &-Cx::i(P)));
        assert!(close(&chi.evaluate(4, P), &-Cx::one(P)));
    }

    #[test]
    fn evaluation_examples() {
        let t6 = DirichletCharacter::trivial(6);
        assert!(t6.evaluate(4, P).is_zero());
        let psi = kronecker_character(-4).unwrap();
        assert_eq!(psi.real_value(7), -1);
        assert_eq!(psi.real_value(-1), psi.parity());
    }

    #[test]
    fn conductors() {
        let (m, core) = DirichletCharacter::trivial(6).conductor_and_core();
        assert_eq!(m, 1);
        assert_eq!(core, DirichletCharacter::trivial(1));
        let psi = kronecker_character(-4).unwrap();
        assert_eq!(psi.conductor(), 4);
        assert!(psi.is_primitive());
        let lifted = psi.lift_to(8);
        assert_eq!(lifted.modulus(), 8);
        for n in (1..16).step_by(2) {
            assert_eq!(lifted.real_value(n), psi.real_value(n));
        }
        assert_eq!(lifted.conductor(), 4);
        assert_eq!(*lifted.core(), psi);
    }

    #[test]
    fn gauss_sum_examples() {
        let w1 = DirichletCharacter::trivial(1).gauss_sum(P).unwrap();
        assert!(close(&w1, &Cx::one(P)));
        let w4 = kronecker_character(-4).unwrap().gauss_sum(P).unwrap();
        assert!(close(&w4, &Cx::from_f64(P, 0.0, 2.0)));
        let w3 = kronecker_character(-3).unwrap().gauss_sum(P).unwrap();
        let sqrt3 = rug::Float::with_val(P, 3).sqrt();
        assert!(close(&w3, &Cx::new(rug::Float::new(P), sqrt3)));
        assert!(DirichletCharacter::trivial(4).gauss_sum(P).is_err());
    }

    #[test]
    fn kronecker_examples() {
        let psi = kronecker_character(-4).unwrap();
        let vals: Vec<i64> = (1..=4).map(|n| psi.real_value(n)).collect();
        assert_eq!(vals, vec![1, 0, -1, 0]);
        assert_eq!(kronecker_character(-3).unwrap().real_value(2), -1);
        assert_eq!(kronecker_character(-5), Err(Error::NotFundamental(-5)));
        assert!(kronecker_character(5).is_err());
        let five = quadratic_character(5).unwrap();
        assert_eq!((five.parity(), five.real_value(2), five.real_value(4)), (1, -1, 1));
        assert!(kronecker_character(-12).is_err());
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn labels_round_trip() {
        let chi = DirichletCharacter::new(5, vec![1]).unwrap();
        let s = chi.label_json();
        assert_eq!(s, r#"{"modulus":5,"exponents":[1],"conductor":5}"#);
        assert_eq!(parse_label(&s).unwrap(), chi);
        assert_eq!(parse_label("trivial:6").unwrap(), DirichletCharacter::trivial(6));
        assert_eq!(
            parse_label("kronecker:-4").unwrap(),
            kronecker_character(-4).unwrap()
        );
        assert!(parse_label("kronecker:-5").is_err());
        assert!(parse_label(r#"{"modulus":5,"exponents":[1],"conductor":1}"#).is_err());
        assert!(parse_label("nonsense").is_err());
    }

    #[test]
    fn product_of_characters() {
        let a = kronecker_character(-4).unwrap();
        let b = kronecker_character(-3).unwrap();
        let ab = a.mul(&b);
        assert_eq!(ab.modulus(), 12);
        for n in -20..20 {
            assert_eq!(ab.real_value(n), a.real_value(n) * b.real_value(n));
        }
        assert_eq!(ab.parity(), 1);
    }
}
