//! Heckman–Opdam Jacobi polynomials as combinations of orbit sums.
//!
//! Orbit sums are taken over the full hyperoctahedral group in every type,
//! so the polynomials are invariant under all sign changes.

mod construct;
mod gram;
mod laurent;

pub use construct::{
    jacobi_builder, jacobi_builders, jacobi_polynomial, jacobi_polynomial_with, value_at_half_pi,
    value_at_half_pi_by_construction, CherednikEigenSolve, GramSchmidtQuadrature, JacobiBuilder,
    DEFAULT_DEGREE_BUDGET,
};
pub use gram::{gram_check, GramReport};
pub use laurent::{Coefficient, LaurentPoly, LaurentTrigPoly, RealLaurent, CQ};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::param::{format_q, parse_q, q_to_f64, qi, Q};
use crate::rootsystem::{permutations, RootSystemBC, Weight};

/// Distinct images of `λ` under all signed permutations.
pub fn orbit(lambda: &[i64]) -> Vec<Vec<i64>> {
    let r = lambda.len();
    let mut seen = std::collections::BTreeSet::new();
    for perm in permutations(r) {
        for mask in 0u32..(1 << r) {
            let v: Vec<i64> = (0..r)
                .map(|i| {
                    let x = lambda[perm[i]];
                    if mask >> i & 1 == 1 {
                        -x
                    } else {
                        x
                    }
                })
                .collect();
            seen.insert(v);
        }
    }
    seen.into_iter().collect()
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Order of the stabilizer of `λ` in the hyperoctahedral group.
pub fn stabilizer_order(lambda: &[u32]) -> u64 {
    let mut counts = BTreeMap::new();
    for &x in lambda {
        *counts.entry(x).or_insert(0usize) += 1;
    }
    counts
        .iter()
        .map(|(&v, &c)| factorial(c) * if v == 0 { 1 << c } else { 1 })
        .product()
}

pub fn orbit_size(lambda: &[u32]) -> u64 {
    let r = lambda.len();
    (1u64 << r) * factorial(r) / stabilizer_order(lambda)
}

/// `M_λ` as a Laurent polynomial.
pub fn orbit_sum(lambda: &Weight) -> RealLaurent {
    let mut p = RealLaurent::zero(lambda.rank());
    for mu in orbit(&lambda.as_i64()) {
        p.add_term(mu, qi(1));
    }
    p
}

/// `Σ_λ c_λ M_λ` with exact coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTrigPoly {
    rs: RootSystemBC,
    coeffs: BTreeMap<Weight, Q>,
}

impl SymTrigPoly {
    pub fn new(rs: &RootSystemBC, coeffs: BTreeMap<Weight, Q>) -> Result<Self> {
        for w in coeffs.keys() {
            if w.rank() != rs.rank() {
                return Err(Error::DimensionMismatch(format!(
                    "weight {w} in a rank {} polynomial",
                    rs.rank()
                )));
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(SymTrigPoly {
            rs: rs.clone(),
            coeffs,
        })
    }

    pub fn root_system(&self) -> &RootSystemBC {
        &self.rs
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &Q)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, w: &Weight) -> Q {
        self.coeffs.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest weight size in the support.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(Weight::size).max().unwrap_or(0)
    }

    pub fn scale(&self, x: &Q) -> SymTrigPoly {
        SymTrigPoly {
            rs: self.rs.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|_| !x.is_zero())
                .map(|(w, c)| (w.clone(), c * x))
                .collect(),
        }
    }

    pub fn to_laurent(&self) -> RealLaurent {
        let mut p = RealLaurent::zero(self.rs.rank());
        for (w, c) in &self.coeffs {
            p.add_scaled(&orbit_sum(w), c);
        }
        p
    }

    /// Exact value at the origin: `Σ c_λ |Wλ|`.
    pub fn value_at_origin(&self) -> Q {
        self.coeffs
            .iter()
            .map(|(w, c)| c * qi(orbit_size(w.parts()) as i64))
            .fold(Q::zero(), |a, b| a + b)
    }

    /// Exact value at `t_j = π/2` for `j` in `mask`, `t_j = 0` elsewhere.
    pub fn evaluate_quarter_point(&self, mask: &[bool]) -> Q {
        let mut total = Q::zero();
        for (w, c) in &self.coeffs {
            // Gaussian integer Σ_μ ∏_{j∈mask} i^{μ_j}
            let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
            for mu in orbit(&w.as_i64()) {
                let k: i64 = mu
                    .iter()
                    .zip(mask)
                    .filter(|(_, &m)| m)
                    .map(|(x, _)| *x)
                    .sum();
                match k.rem_euclid(4) {
                    0 => re += 1,
                    1 => im += 1,
                    2 => re -= 1,
                    _ => im -= 1,
                }
            }
            debug_assert!(im.is_zero());
            total += c * Q::from_integer(re);
        }
        total
    }

    pub fn evaluate(&self, t: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .map(|(w, c)| {
                let s: f64 = orbit(&w.as_i64())
                    .iter()
                    .map(|mu| mu.iter().zip(t).map(|(m, x)| *m as f64 * x).sum::<f64>().cos())
                    .sum();
                q_to_f64(c) * s
            })
            .sum()
    }

    pub fn evaluator(&self) -> Evaluator {
        Evaluator::new(self)
    }

    pub fn to_json(&self) -> SymTrigPolyJson {
        SymTrigPolyJson {
            rank: self.rs.rank(),
            mult: self.rs.multiplicities().iter().map(format_q).collect(),
            terms: self
                .coeffs
                .iter()
                .map(|(w, c)| TermJson {
                    lambda: w.parts().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &SymTrigPolyJson) -> Result<Self> {
        let mult: Vec<Q> = json
            .mult
            .iter()
            .map(|s| parse_q(s).ok_or_else(|| Error::InvalidParameter(format!("bad multiplicity `{s}`"))))
            .collect::<Result<_>>()?;
        if mult.len() != 3 {
            return Err(Error::InvalidParameter("mult must have three entries".into()));
        }
        let rs = RootSystemBC::new(json.rank, mult[0].clone(), mult[1].clone(), mult[2].clone())?;
        let mut coeffs = BTreeMap::new();
        for t in &json.terms {
            let num: BigInt = t
                .num
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad numerator `{}`", t.num)))?;
            let den: BigInt = t
                .den
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad denominator `{}`", t.den)))?;
            if den.is_zero() {
                return Err(Error::InvalidParameter("zero denominator".into()));
            }
            coeffs.insert(Weight::new(t.lambda.clone())?, Q::new(num, den));
        }
        SymTrigPoly::new(&rs, coeffs)
    }
}

/// JSON form: `{"rank", "mult": [a, 2b, ι], "terms": [{"lambda", "num", "den"}]}`.
/// Exact quantities are decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymTrigPolyJson {
    pub rank: usize,
    pub mult: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub lambda: Vec<u32>,
    pub num: String,
    pub den: String,
}

/// Fast floating-point evaluation of a [`SymTrigPoly`].
///
/// Uses `Σ_{w∈W} e^{i⟨wλ,t⟩} = Σ_σ ∏_j 2cos(λ_{σ(j)} t_j)`.
#[derive(Debug, Clone)]
pub struct Evaluator {
    rank: usize,
    max_part: usize,
    terms: Vec<(f64, Vec<usize>)>,
    perms: Vec<Vec<usize>>,
}

impl Evaluator {
    fn new(p: &SymTrigPoly) -> Self {
        let rank = p.rs.rank();
        let terms: Vec<(f64, Vec<usize>)> = p
            .coeffs
            .iter()
            .map(|(w, c)| {
                let scale = q_to_f64(c) / stabilizer_order(w.parts()) as f64;
                (scale, w.parts().iter().map(|&x| x as usize).collect())
            })
            .collect();
        let max_part = terms
            .iter()
            .flat_map(|(_, l)| l.iter().copied())
            .max()
            .unwrap_or(0);
        Evaluator {
            rank,
            max_part,
            terms,
            perms: permutations(rank),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Value at `t`, using a scratch table of `2cos(k t_j)`.
    pub fn eval_with(&self, t: &[f64], table: &mut Vec<f64>) -> f64 {
        let width = self.max_part + 1;
        table.clear();
        table.resize(width * self.rank, 0.0);
        for (j, &x) in t.iter().enumerate() {
            let c1 = 2.0 * x.cos();
            let row = &mut table[j * width..(j + 1) * width];
            row[0] = 2.0;
            if width > 1 {
                row[1] = c1;
            }
            for k in 2..width {
                row[k] = c1 * row[k - 1] - row[k - 2];
            }
        }
        let mut total = 0.0;
        for (scale, lambda) in &self.terms {
            let mut s = 0.0;
            for perm in &self.perms {
                let mut prod = 1.0;
                for j in 0..self.rank {
                    prod *= table[j * width + lambda[perm[j]]];
                }
                s += prod;
            }
            total += scale * s;
        }
        total
    }

    pub fn eval(&self, t: &[f64]) -> f64 {
        let mut table = Vec::new();
        self.eval_with(t, &mut table)
    }
}

/// `φ` rescaled so that its value at the origin is one.
pub(crate) fn normalize(p: SymTrigPoly) -> Result<SymTrigPoly> {
    let v = p.value_at_origin();
    if v.is_zero() {
        return Err(Error::Internal("polynomial vanishes at the origin".into()));
    }
    Ok(p.scale(&(Q::one() / v)))
}
