//! Type BC root data with arbitrary multiplicities.
//!
//! Roots are `±ε_j±ε_k` (multiplicity `a`), `±ε_j` (`2b`) and `±2ε_j` (`ι`).
//! A torus point `t` pairs with `ε_j` as `t_j`.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::param::{format_q, q_to_f64, qi, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::R, Field::C, Field::H];

    /// Real dimension of the field.
    pub fn a(self) -> u32 {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        })
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "R" | "r" | "real" => Ok(Field::R),
            "C" | "c" | "complex" => Ok(Field::C),
            "H" | "h" | "quaternion" => Ok(Field::H),
            other => Err(Error::InvalidParameter(format!(
                "unknown field `{other}` (expected R, C or H)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootType {
    B,
    C,
    D,
    BC,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootSystemBC {
    rank: usize,
    a: Q,
    b2: Q,
    iota: Q,
}

impl RootSystemBC {
    pub fn new(rank: usize, a: Q, b2: Q, iota: Q) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidParameter("rank must be at least 1".into()));
        }
        for (name, m) in [("a", &a), ("2b", &b2), ("iota", &iota)] {
            if m.is_negative() {
                return Err(Error::InvalidParameter(format!(
                    "multiplicity {name} = {} is negative",
                    format_q(m)
                )));
            }
        }
        Ok(RootSystemBC { rank, a, b2, iota })
    }

    pub fn from_ints(rank: usize, a: i64, b2: i64, iota: i64) -> Result<Self> {
        Self::new(rank, qi(a), qi(b2), qi(iota))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn a(&self) -> &Q {
        &self.a
    }

    pub fn b2(&self) -> &Q {
        &self.b2
    }

    pub fn b(&self) -> Q {
        &self.b2 / qi(2)
    }

    pub fn iota(&self) -> &Q {
        &self.iota
    }

    pub fn root_type(&self) -> RootType {
        match (self.b2.is_zero(), self.iota.is_zero()) {
            (true, true) => RootType::D,
            (true, false) => RootType::C,
            (false, true) => RootType::B,
            (false, false) => RootType::BC,
        }
    }

    /// `ρ_j = ι + b + a(r−j)`, the half sum of positive roots with multiplicity.
    pub fn rho(&self) -> Vec<Q> {
        let base = &self.iota + self.b();
        (1..=self.rank)
            .map(|j| &base + &self.a * qi((self.rank - j) as i64))
            .collect()
    }

    pub fn rho_f64(&self) -> Vec<f64> {
        self.rho().iter().map(q_to_f64).collect()
    }

    /// Positive roots as coefficient vectors in the `ε` basis, with multiplicities.
    pub fn positive_roots(&self) -> Vec<(Vec<i64>, Q)> {
        let r = self.rank;
        let mut out = Vec::new();
        for j in 0..r {
            for k in j + 1..r {
                let mut minus = vec![0; r];
                minus[j] = 1;
                minus[k] = -1;
                out.push((minus, self.a.clone()));
                let mut plus = vec![0; r];
                plus[j] = 1;
                plus[k] = 1;
                out.push((plus, self.a.clone()));
            }
            let mut short = vec![0; r];
            short[j] = 1;
            out.push((short.clone(), self.b2.clone()));
            short[j] = 2;
            out.push((short, self.iota.clone()));
        }
        out.retain(|(_, m)| !m.is_zero());
        out
    }

    /// `∏_{j<k} |2sin(t_j−t_k)|^a |2sin(t_j+t_k)|^a ∏_j |2sin t_j|^{2b} |2sin 2t_j|^ι`.
    pub fn measure_density(&self, t: &[f64]) -> f64 {
        let a = q_to_f64(&self.a);
        let b2 = q_to_f64(&self.b2);
        let iota = q_to_f64(&self.iota);
        let mut d = 1.0;
        for j in 0..self.rank {
            for k in j + 1..self.rank {
                d *= pow_abs(2.0 * (t[j] - t[k]).sin(), a) * pow_abs(2.0 * (t[j] + t[k]).sin(), a);
            }
            d *= pow_abs(2.0 * t[j].sin(), b2) * pow_abs(2.0 * (2.0 * t[j]).sin(), iota);
        }
        d
    }

    /// The Weyl group: hyperoctahedral, or its even-sign subgroup in type D.
    pub fn weyl_group(&self) -> Vec<SignedPermutation> {
        let all = SignedPermutation::hyperoctahedral(self.rank);
        if self.root_type() == RootType::D {
            all.into_iter().filter(|w| w.sign_parity() == 1).collect()
        } else {
            all
        }
    }

    /// `[a, 2b, ι]`
    pub fn multiplicities(&self) -> [Q; 3] {
        [self.a.clone(), self.b2.clone(), self.iota.clone()]
    }
}

impl fmt::Display for RootSystemBC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BC{}(a={}, 2b={}, iota={})",
            self.rank,
            format_q(&self.a),
            format_q(&self.b2),
            format_q(&self.iota)
        )
    }
}

fn pow_abs(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else {
        x.abs().powf(p)
    }
}

/// Maps `(field, n, r)` to the multiplicities of the Grassmannian `G_{n,r}(K)`.
pub trait MultiplicityConvention: Send + Sync {
    fn name(&self) -> &'static str;
    fn multiplicities(&self, field: Field, n: usize, r: usize) -> (Q, Q, Q);
}

/// `2b = a(n−2r)`, `ι = a−1`: the short roots carry the off-diagonal block.
pub struct Geometric;

/// `b = a(n−2r)`, `ι = a−1` read with `b` as the half multiplicity.
pub struct Literal;

impl MultiplicityConvention for Geometric {
    fn name(&self) -> &'static str {
        "geometric"
    }

    fn multiplicities(&self, field: Field, n: usize, r: usize) -> (Q, Q, Q) {
        let a = field.a() as i64;
        (qi(a), qi(a * (n - 2 * r) as i64), qi(a - 1))
    }
}

impl MultiplicityConvention for Literal {
    fn name(&self) -> &'static str {
        "literal"
    }

    fn multiplicities(&self, field: Field, n: usize, r: usize) -> (Q, Q, Q) {
        let a = field.a() as i64;
        (qi(a), qi(2 * a * (n - 2 * r) as i64), qi(a - 1))
    }
}

pub fn multiplicity_conventions() -> Vec<Box<dyn MultiplicityConvention>> {
    vec![Box::new(Geometric), Box::new(Literal)]
}

pub fn multiplicity_convention(name: &str) -> Result<Box<dyn MultiplicityConvention>> {
    multiplicity_conventions()
        .into_iter()
        .find(|c| c.name() == name)
        .ok_or_else(|| Error::UnknownName {
            kind: "multiplicity convention",
            name: name.to_string(),
        })
}

pub fn grassmannian_preset_with(
    convention: &dyn MultiplicityConvention,
    field: Field,
    n: usize,
    r: usize,
) -> Result<RootSystemBC> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    if 2 * r > n {
        return Err(Error::InvalidParameter(format!(
            "G_{{{n},{r}}} needs 2r <= n; use G_{{{n},{}}} instead",
            n - r
        )));
    }
    let (a, b2, iota) = convention.multiplicities(field, n, r);
    RootSystemBC::new(r, a, b2, iota)
}

/// Root system of `G_{n,r}(field)` under the geometric convention.
pub fn grassmannian_preset(field: Field, n: usize, r: usize) -> Result<RootSystemBC> {
    grassmannian_preset_with(&Geometric, field, n, r)
}

/// `(w·t)_i = signs[i] · t[perm[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn hyperoctahedral(r: usize) -> Vec<SignedPermutation> {
        let mut out = Vec::new();
        for perm in permutations(r) {
            for mask in 0u32..(1 << r) {
                let signs = (0..r)
                    .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                    .collect();
                out.push(SignedPermutation {
                    perm: perm.clone(),
                    signs,
                });
            }
        }
        out
    }

    /// Product of the signs.
    pub fn sign_parity(&self) -> i8 {
        self.signs.iter().product()
    }

    pub fn act_f64(&self, t: &[f64]) -> Vec<f64> {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| s as f64 * t[p])
            .collect()
    }

    pub fn act_i64(&self, v: &[i64]) -> Vec<i64> {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| s as i64 * v[p])
            .collect()
    }
}

pub fn permutations(r: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; r], &mut out);
    out
}

/// Dominant weight `m_1 ≥ … ≥ m_r ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight {
    parts: Vec<u32>,
}

impl Weight {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParameter("weight must have at least one part".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!(
                "weight {parts:?} is not weakly decreasing"
            )));
        }
        Ok(Weight { parts })
    }

    pub fn zero(r: usize) -> Self {
        Weight { parts: vec![0; r] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|&p| p == 0)
    }

    pub fn is_even(&self) -> bool {
        self.parts.iter().all(|p| p % 2 == 0)
    }

    pub fn require_even(&self) -> Result<()> {
        if self.is_even() {
            Ok(())
        } else {
            Err(Error::OddWeight(self.parts.clone()))
        }
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.parts.iter().map(|&p| p as i64).collect()
    }

    /// `self ≤ other` in dominance order: all partial sums bounded.
    pub fn dominated_by(&self, other: &Weight) -> bool {
        let (mut s, mut o) = (0i64, 0i64);
        for (x, y) in self.parts.iter().zip(&other.parts) {
            s += *x as i64;
            o += *y as i64;
            if s > o {
                return false;
            }
        }
        true
    }

    /// Resize to rank `r`, padding with zeros; fails if nonzero parts would be dropped.
    pub fn with_rank(&self, r: usize) -> Result<Weight> {
        if self.parts.iter().skip(r).any(|&p| p != 0) {
            return Err(Error::DimensionMismatch(format!(
                "weight {:?} does not fit rank {r}",
                self.parts
            )));
        }
        let mut parts: Vec<u32> = self.parts.iter().copied().take(r).collect();
        parts.resize(r, 0);
        Ok(Weight { parts })
    }

    /// All even dominant weights of rank `r` with `|m| ≤ bound`, smallest first.
    pub fn even_dominant(r: usize, bound: u32) -> Vec<Weight> {
        fn go(r: usize, max_part: u32, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Weight>) {
            if prefix.len() == r {
                out.push(Weight {
                    parts: prefix.clone(),
                });
                return;
            }
            let mut p = 0;
            while p <= max_part.min(left) {
                prefix.push(p);
                go(r, p, left - p, prefix, out);
                prefix.pop();
                p += 2;
            }
        }
        let mut out = Vec::new();
        go(r, bound, bound, &mut Vec::new(), &mut out);
        out.sort_by(|x, y| x.size().cmp(&y.size()).then(x.parts.cmp(&y.parts)));
        out
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = body
            .split([',', ' '])
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.parse::<u32>()
                    .map_err(|_| Error::InvalidParameter(format!("bad weight part `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Weight::new(parts)
    }
}

/// A point of the compact torus, coordinates in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint(pub Vec<f64>);

impl TorusPoint {
    /// No `t_j ≡ 0, π/2 (mod π)` and no `t_j ≡ ±t_k (mod π)`, up to `tol`.
    pub fn is_generic(&self, tol: f64) -> bool {
        generic_defect(&self.0) > tol
    }
}

impl std::ops::Deref for TorusPoint {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

fn dist_mod(x: f64, period: f64) -> f64 {
    let y = x.rem_euclid(period);
    y.min(period - y)
}

/// Distance of `t` from the walls where reflection denominators vanish.
pub fn generic_defect(t: &[f64]) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    let mut d = f64::INFINITY;
    for (j, &x) in t.iter().enumerate() {
        d = d.min(dist_mod(x, FRAC_PI_2));
        for &y in &t[j + 1..] {
            d = d.min(dist_mod(x - y, std::f64::consts::PI));
            d = d.min(dist_mod(x + y, std::f64::consts::PI));
        }
    }
    d
}
