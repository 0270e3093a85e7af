use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{normalize, orbit_sum, RealLaurent, SymTrigPoly};
use crate::cherednik::CherednikOperator;
use crate::error::{Error, Result};
use crate::param::{qi, Q};
use crate::quadrature::{domain_for, TorusRule};
use crate::rootsystem::{RootSystemBC, RootType, Weight};

pub const DEFAULT_DEGREE_BUDGET: u32 = 12;

/// A way of producing the normalized Jacobi polynomial `φ_m`.
pub trait JacobiBuilder: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, rs: &RootSystemBC, m: &Weight) -> Result<SymTrigPoly>;
}

/// Triangular eigen-solve for the commuting operators `Σ_j T_j^{2k}`, exact.
pub struct CherednikEigenSolve {
    pub budget: u32,
}

/// Gram–Schmidt of orbit sums against the torus measure, in floating point.
pub struct GramSchmidtQuadrature {
    pub budget: u32,
    pub order: usize,
}

impl Default for CherednikEigenSolve {
    fn default() -> Self {
        CherednikEigenSolve {
            budget: DEFAULT_DEGREE_BUDGET,
        }
    }
}

impl Default for GramSchmidtQuadrature {
    fn default() -> Self {
        GramSchmidtQuadrature {
            budget: DEFAULT_DEGREE_BUDGET,
            order: 64,
        }
    }
}

pub fn jacobi_builders() -> Vec<Box<dyn JacobiBuilder>> {
    vec![
        Box::new(CherednikEigenSolve::default()),
        Box::new(GramSchmidtQuadrature::default()),
    ]
}

pub fn jacobi_builder(name: &str) -> Result<Box<dyn JacobiBuilder>> {
    jacobi_builders()
        .into_iter()
        .find(|b| b.name() == name)
        .ok_or_else(|| Error::UnknownName {
            kind: "Jacobi construction",
            name: name.to_string(),
        })
}

fn check_budget(m: &Weight, budget: u32, rs: &RootSystemBC) -> Result<()> {
    if m.rank() != rs.rank() {
        return Err(Error::DimensionMismatch(format!(
            "weight {m} for a rank {} root system",
            rs.rank()
        )));
    }
    if m.size() > budget {
        return Err(Error::DegreeBudget {
            weight: m.parts().to_vec(),
            budget,
        });
    }
    Ok(())
}

/// Dominant weights below `m` in dominance order, largest first.
///
/// For even `m` only even weights are kept: every root shifts exponents by
/// even amounts, so odd weights never enter.
pub(crate) fn support_below(m: &Weight) -> Vec<Weight> {
    let r = m.rank();
    let even = m.is_even();
    let mut out = Vec::new();
    fn go(r: usize, max_part: u32, prefix: &mut Vec<u32>, m: &Weight, even: bool, out: &mut Vec<Weight>) {
        if prefix.len() == r {
            if let Ok(w) = Weight::new(prefix.clone()) {
                if w.dominated_by(m) && w.size() % 2 == m.size() % 2 {
                    out.push(w);
                }
            }
            return;
        }
        let step = if even { 2 } else { 1 };
        let mut p = 0;
        while p <= max_part {
            prefix.push(p);
            go(r, p, prefix, m, even, out);
            prefix.pop();
            p += step;
        }
    }
    go(r, m.parts()[0], &mut Vec::new(), m, even, &mut out);
    out.sort_by(|x, y| y.size().cmp(&x.size()).then(y.parts().cmp(x.parts())));
    out
}

/// `Σ_j (λ_j + ρ_j)^{2k}`, the eigenvalue of `Σ_j T_j^{2k}` on `φ_λ`.
fn power_eigenvalue(rho: &[Q], lambda: &Weight, k: u32) -> Q {
    lambda
        .parts()
        .iter()
        .zip(rho)
        .map(|(&l, r)| num_traits::pow(qi(l as i64) + r, 2 * k as usize))
        .fold(Q::zero(), |a, b| a + b)
}

struct OperatorFamily<'a> {
    ops: Vec<CherednikOperator>,
    support: &'a [Weight],
    cache: HashMap<(usize, u32), BTreeMap<Weight, Q>>,
}

impl<'a> OperatorFamily<'a> {
    /// Coefficients of `Σ_j T_j^{2k} M_λ` on the support.
    fn image(&mut self, idx: usize, k: u32) -> Result<&BTreeMap<Weight, Q>> {
        if !self.cache.contains_key(&(idx, k)) {
            let lambda = &self.support[idx];
            let m = orbit_sum(lambda);
            let mut total = RealLaurent::zero(lambda.rank());
            for op in &self.ops {
                let mut p = m.clone();
                for _ in 0..2 * k {
                    p = op.apply_t(&p)?;
                }
                total.add_assign(&p);
            }
            let mut coeffs = BTreeMap::new();
            for (e, c) in total.terms() {
                if e.windows(2).all(|w| w[0] >= w[1]) && e.last().is_none_or(|&x| x >= 0) {
                    let w = Weight::new(e.iter().map(|&x| x as u32).collect())?;
                    if !self.support.contains(&w) {
                        return Err(Error::Internal(format!(
                            "operator image of M_{lambda} leaves the dominance support at {w}"
                        )));
                    }
                    coeffs.insert(w, c.clone());
                }
            }
            self.cache.insert((idx, k), coeffs);
        }
        Ok(&self.cache[&(idx, k)])
    }
}

impl JacobiBuilder for CherednikEigenSolve {
    fn name(&self) -> &'static str {
        "cherednik"
    }

    fn build(&self, rs: &RootSystemBC, m: &Weight) -> Result<SymTrigPoly> {
        check_budget(m, self.budget, rs)?;
        let support = support_below(m);
        let rho = rs.rho();
        let r = rs.rank() as u32;
        let mut family = OperatorFamily {
            ops: (0..rs.rank())
                .map(|j| CherednikOperator::new(rs, j))
                .collect::<Result<_>>()?,
            support: &support,
            cache: HashMap::new(),
        };
        // support[0] == m
        let mut coeffs: Vec<Q> = vec![Q::zero(); support.len()];
        coeffs[0] = Q::one();
        for idx in 1..support.len() {
            let mu = support[idx].clone();
            let mut solved = false;
            for k in 1..=r {
                let gap = power_eigenvalue(&rho, m, k) - power_eigenvalue(&rho, &mu, k);
                if gap.is_zero() {
                    continue;
                }
                let mut rhs = Q::zero();
                for (lidx, c) in coeffs.iter().enumerate().take(idx) {
                    if c.is_zero() {
                        continue;
                    }
                    if let Some(x) = family.image(lidx, k)?.get(&mu) {
                        rhs += c * x;
                    }
                }
                coeffs[idx] = rhs / gap;
                solved = true;
                break;
            }
            if !solved {
                return Err(Error::EigenvalueCollision {
                    a: m.parts().to_vec(),
                    b: mu.parts().to_vec(),
                });
            }
        }
        let map = support.into_iter().zip(coeffs).collect();
        normalize(SymTrigPoly::new(rs, map)?)
    }
}

impl JacobiBuilder for GramSchmidtQuadrature {
    fn name(&self) -> &'static str {
        "gram-schmidt"
    }

    fn build(&self, rs: &RootSystemBC, m: &Weight) -> Result<SymTrigPoly> {
        check_budget(m, self.budget, rs)?;
        let mut support = support_below(m);
        support.reverse();
        let n = support.len();
        let rule = TorusRule::new(rs.rank(), self.order, domain_for(rs));
        let evals: Vec<_> = support
            .iter()
            .map(|w| {
                let unit = SymTrigPoly::new(rs, BTreeMap::from([(w.clone(), qi(1))]))?;
                Ok(unit.evaluator())
            })
            .collect::<Result<_>>()?;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
        let flat = rule.integrate_many(pairs.len(), |t, out| {
            let d = rs.measure_density(t);
            let mut table = Vec::new();
            let vals: Vec<f64> = evals.iter().map(|e| e.eval_with(t, &mut table)).collect();
            for (o, &(i, j)) in out.iter_mut().zip(&pairs) {
                *o = d * vals[i] * vals[j];
            }
        });
        let mut gram = vec![vec![0.0; n]; n];
        for (&(i, j), v) in pairs.iter().zip(flat) {
            gram[i][j] = v;
            gram[j][i] = v;
        }
        let inner = |x: &[f64], y: &[f64]| -> f64 {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += x[i] * gram[i][j] * y[j];
                }
            }
            s
        };
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            for b in &basis {
                let c = inner(&v, b) / inner(b, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
            basis.push(v);
        }
        let top = basis.pop().expect("support contains m");
        let mut map = BTreeMap::new();
        for (w, c) in support.into_iter().zip(top) {
            if c != 0.0 {
                let exact = BigRational::from_float(c)
                    .ok_or_else(|| Error::Quadrature(format!("non-finite coefficient at {w}")))?;
                map.insert(w, exact);
            }
        }
        normalize(SymTrigPoly::new(rs, map)?)
    }
}

type CacheKey = (RootSystemBC, Weight);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<SymTrigPoly>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<SymTrigPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `φ_m` by the exact construction, memoized across threads.
pub fn jacobi_polynomial(rs: &RootSystemBC, m: &Weight) -> Result<Arc<SymTrigPoly>> {
    let key = (rs.clone(), m.clone());
    if let Some(p) = cache().read().expect("cache lock").get(&key) {
        return Ok(p.clone());
    }
    let p = Arc::new(CherednikEigenSolve::default().build(rs, m)?);
    cache().write().expect("cache lock").insert(key, p.clone());
    Ok(p)
}

pub fn jacobi_polynomial_with(builder: &dyn JacobiBuilder, rs: &RootSystemBC, m: &Weight) -> Result<SymTrigPoly> {
    builder.build(rs, m)
}

/// `φ_m(π/2, …, π/2)`; `∏_j (−1)^{m_j/2}` in types C and D.
pub fn value_at_half_pi(rs: &RootSystemBC, m: &Weight) -> Result<Q> {
    m.require_even()?;
    match rs.root_type() {
        RootType::C | RootType::D => {
            let k: u32 = m.parts().iter().map(|p| p / 2).sum();
            Ok(if k.is_multiple_of(2) { qi(1) } else { qi(-1) })
        }
        _ => value_at_half_pi_by_construction(rs, m),
    }
}

/// Builds `φ_m` and evaluates it exactly at `(π/2, …, π/2)`.
pub fn value_at_half_pi_by_construction(rs: &RootSystemBC, m: &Weight) -> Result<Q> {
    let p = jacobi_polynomial(rs, m)?;
    Ok(p.evaluate_quarter_point(&vec![true; rs.rank()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::q;

    #[test]
    fn support_is_dominance_downset() {
        let m = Weight::new(vec![4, 2]).unwrap();
        let s = support_below(&m);
        let names: Vec<String> = s.iter().map(|w| w.to_string()).collect();
        assert_eq!(names, ["(4,2)", "(4,0)", "(2,2)", "(2,0)", "(0,0)"]);
    }

    #[test]
    fn constant_polynomial() {
        let rs = RootSystemBC::from_ints(2, 1, 2, 1).unwrap();
        let p = jacobi_polynomial(&rs, &Weight::zero(2)).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&Weight::zero(2)), qi(1));
    }

    #[test]
    fn rank_one_degree_two_matches_jacobi_p1() {
        // φ_(2)(t) = P_1^{(α,β)}(cos 2t)/P_1^{(α,β)}(1), α = b + (ι−1)/2, β = (ι−1)/2
        let rs = RootSystemBC::new(1, qi(0), q(3, 1), q(1, 2)).unwrap();
        let p = jacobi_polynomial(&rs, &Weight::new(vec![2]).unwrap()).unwrap();
        let alpha = 1.5 + (0.5 - 1.0) / 2.0;
        let beta = (0.5 - 1.0) / 2.0;
        let p1 = |x: f64| 0.5 * (alpha - beta) + 0.5 * (alpha + beta + 2.0) * x;
        for t in [0.1, 0.7, 1.3, 2.9] {
            let expect = p1((2.0f64 * t).cos()) / p1(1.0);
            assert!((p.evaluate(&[t]) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn budget_enforced() {
        let rs = RootSystemBC::from_ints(1, 0, 1, 1).unwrap();
        let m = Weight::new(vec![14]).unwrap();
        assert!(matches!(
            jacobi_polynomial(&rs, &m),
            Err(Error::DegreeBudget { .. })
        ));
    }

    #[test]
    fn builders_registered_by_name() {
        assert_eq!(jacobi_builder("cherednik").unwrap().name(), "cherednik");
        assert_eq!(jacobi_builder("gram-schmidt").unwrap().name(), "gram-schmidt");
        assert!(jacobi_builder("nope").is_err());
    }
}
