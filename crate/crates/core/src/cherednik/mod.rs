//! Trigonometric Cherednik operators.
//!
//! Writing `D_j = i·T_j`, the operator `T_j` has rational coefficients on the
//! exponential basis, so all exact work happens with `T_j` and the factor `i`
//! is restored only in [`apply_d`].

mod bernstein_sato;
mod closed_form;

pub use bernstein_sato::{
    verify_bs_cos, verify_bs_sin, verify_factor_identities, BsResidual, FactorReport,
};
pub use closed_form::{ClosedForm, ClosedFormFactor, TorusFunction};

use num_complex::{Complex, Complex64};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::jacobi::{Coefficient, LaurentPoly, LaurentTrigPoly, CQ};
use crate::param::{q_to_f64, qi, Q};
use crate::rootsystem::{generic_defect, RootSystemBC, Weight};

/// How `ρ` enters the constant term of `D_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoRule {
    /// `ρ_j = ι + b + a(r−j)`
    HalfSum,
    /// `ρ_j = ι + b + (a/2)(r−j)`
    HalfA,
}

/// Sign choices for the `s_kj` difference terms and the `ρ` rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CherednikConvention {
    /// Sign of the `a`-term summed over `k < j`.
    pub lower_sign: i8,
    /// Sign of the `a`-term summed over `k > j`.
    pub upper_sign: i8,
    pub rho: RhoRule,
}

impl Default for CherednikConvention {
    fn default() -> Self {
        CherednikConvention {
            lower_sign: -1,
            upper_sign: 1,
            rho: RhoRule::HalfSum,
        }
    }
}

impl CherednikConvention {
    pub fn rho(&self, rs: &RootSystemBC) -> Vec<Q> {
        match self.rho {
            RhoRule::HalfSum => rs.rho(),
            RhoRule::HalfA => {
                let base = rs.iota() + rs.b();
                let r = rs.rank();
                (1..=r)
                    .map(|j| &base + rs.a() * qi((r - j) as i64) / qi(2))
                    .collect()
            }
        }
    }
}

/// The operator `D_j` (index `j` is zero-based) for a root system.
#[derive(Debug, Clone)]
pub struct CherednikOperator {
    rs: RootSystemBC,
    j: usize,
    conv: CherednikConvention,
    rho_j: Q,
}

/// One reflection term: multiplicity weight, reflection and denominator exponent.
struct DifferenceTerm {
    weight: Q,
    reflect: Box<dyn Fn(&[i64]) -> Vec<i64> + Send + Sync>,
    beta: Vec<i64>,
}

impl CherednikOperator {
    pub fn new(rs: &RootSystemBC, j: usize) -> Result<Self> {
        Self::with_convention(rs, j, CherednikConvention::default())
    }

    pub fn with_convention(rs: &RootSystemBC, j: usize, conv: CherednikConvention) -> Result<Self> {
        if j >= rs.rank() {
            return Err(Error::InvalidParameter(format!(
                "operator index {j} out of range for rank {}",
                rs.rank()
            )));
        }
        let rho_j = conv.rho(rs)[j].clone();
        Ok(CherednikOperator {
            rs: rs.clone(),
            j,
            conv,
            rho_j,
        })
    }

    pub fn index(&self) -> usize {
        self.j
    }

    fn difference_terms(&self) -> Vec<DifferenceTerm> {
        let r = self.rs.rank();
        let j = self.j;
        let a = self.rs.a().clone();
        let mut out = Vec::new();
        for k in 0..r {
            if k == j {
                continue;
            }
            let sign = if k < j {
                self.conv.lower_sign
            } else {
                self.conv.upper_sign
            };
            // s_{kj} swaps coordinates; the denominator root points from the
            // smaller index to the larger one.
            let (lo, hi) = if k < j { (k, j) } else { (j, k) };
            let mut beta = vec![0; r];
            beta[lo] = 2;
            beta[hi] = -2;
            out.push(DifferenceTerm {
                weight: &a * qi(sign as i64),
                reflect: Box::new(move |l: &[i64]| {
                    let mut v = l.to_vec();
                    v.swap(j, k);
                    v
                }),
                beta,
            });
            let mut beta = vec![0; r];
            beta[j] = 2;
            beta[k] = 2;
            out.push(DifferenceTerm {
                weight: a.clone(),
                reflect: Box::new(move |l: &[i64]| {
                    let mut v = l.to_vec();
                    v[j] = -l[k];
                    v[k] = -l[j];
                    v
                }),
                beta,
            });
        }
        let flip = move |l: &[i64]| {
            let mut v = l.to_vec();
            v[j] = -l[j];
            v
        };
        let mut beta = vec![0; r];
        beta[j] = 4;
        out.push(DifferenceTerm {
            weight: self.rs.iota() * qi(2),
            reflect: Box::new(flip),
            beta,
        });
        let mut beta = vec![0; r];
        beta[j] = 2;
        out.push(DifferenceTerm {
            weight: self.rs.b2().clone(),
            reflect: Box::new(flip),
            beta,
        });
        out.retain(|t| !t.weight.is_zero());
        out
    }

    /// `T_j = −i·D_j` on the exponential basis.
    pub fn apply_t<C: Coefficient>(&self, p: &LaurentPoly<C>) -> Result<LaurentPoly<C>> {
        let terms = self.difference_terms();
        let mut out = LaurentPoly::zero(p.rank());
        for (lambda, c) in p.terms() {
            out.add_term(lambda.clone(), c.scale(&(qi(lambda[self.j]) - &self.rho_j)));
            for term in &terms {
                let image = (term.reflect)(lambda);
                let diff: Vec<i64> = lambda.iter().zip(&image).map(|(x, y)| x - y).collect();
                let k = multiple_of(&diff, &term.beta).ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "exponent {lambda:?} is off the even lattice; difference quotient is not a polynomial"
                    ))
                })?;
                let cw = c.scale(&term.weight);
                if k > 0 {
                    for l in 0..k {
                        let e = lambda.iter().zip(&term.beta).map(|(x, b)| x - l * b).collect();
                        out.add_term(e, cw.clone());
                    }
                } else if k < 0 {
                    for l in 1..=-k {
                        let e = lambda.iter().zip(&term.beta).map(|(x, b)| x + l * b).collect();
                        out.add_term(e, -cw.clone());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Pointwise evaluation of `D_j f` at a generic `t`.
    pub fn apply_pointwise(&self, f: &dyn TorusFunction, t: &[f64]) -> Result<Complex64> {
        if generic_defect(t) < 1e-9 {
            return Err(Error::NonGenericPoint(format!("{t:?}")));
        }
        let j = self.j;
        let r = self.rs.rank();
        let a = q_to_f64(self.rs.a());
        let ft = f.value(t);
        let quotient = |image: Vec<f64>, arg: f64| -> Complex64 {
            (ft - f.value(&image)) / (Complex64::new(1.0, 0.0) - Complex64::cis(-arg))
        };
        let mut s = Complex64::zero();
        for k in 0..r {
            if k == j {
                continue;
            }
            let mut swapped = t.to_vec();
            swapped.swap(j, k);
            if k < j {
                s += self.conv.lower_sign as f64 * a * quotient(swapped, 2.0 * (t[k] - t[j]));
            } else {
                s += self.conv.upper_sign as f64 * a * quotient(swapped, 2.0 * (t[j] - t[k]));
            }
            let mut sigma = t.to_vec();
            sigma[j] = -t[k];
            sigma[k] = -t[j];
            s += a * quotient(sigma, 2.0 * (t[j] + t[k]));
        }
        let mut flipped = t.to_vec();
        flipped[j] = -t[j];
        s += 2.0 * q_to_f64(self.rs.iota()) * quotient(flipped.clone(), 4.0 * t[j]);
        s += q_to_f64(self.rs.b2()) * quotient(flipped, 2.0 * t[j]);
        let i = Complex64::new(0.0, 1.0);
        Ok(f.partial(j, t) + i * s - i * q_to_f64(&self.rho_j) * ft)
    }
}

fn multiple_of(v: &[i64], beta: &[i64]) -> Option<i64> {
    let idx = beta.iter().position(|&b| b != 0)?;
    if v[idx] % beta[idx] != 0 {
        return None;
    }
    let k = v[idx] / beta[idx];
    v.iter().zip(beta).all(|(x, b)| *x == k * b).then_some(k)
}

/// `D_j p`, exactly.
pub fn apply_d(op: &CherednikOperator, p: &LaurentTrigPoly) -> Result<LaurentTrigPoly> {
    let tp = op.apply_t(p)?;
    let mut out = LaurentTrigPoly::zero(p.rank());
    for (e, c) in tp.terms() {
        // multiply by i
        out.add_term(e.clone(), Complex::new(-c.im.clone(), c.re.clone()));
    }
    Ok(out)
}

/// `M_δ = ∏_j (D_j² + (δ+ρ_1)²) = ∏_j ((δ+ρ_1)² − T_j²)`.
pub fn apply_m<C: Coefficient>(rs: &RootSystemBC, delta: &Q, p: &LaurentPoly<C>) -> Result<LaurentPoly<C>> {
    apply_m_with(rs, CherednikConvention::default(), delta, p)
}

pub fn apply_m_with<C: Coefficient>(
    rs: &RootSystemBC,
    conv: CherednikConvention,
    delta: &Q,
    p: &LaurentPoly<C>,
) -> Result<LaurentPoly<C>> {
    let c = delta + &conv.rho(rs)[0];
    let c2 = &c * &c;
    let mut cur = p.clone();
    for j in 0..rs.rank() {
        let op = CherednikOperator::with_convention(rs, j, conv)?;
        let tt = op.apply_t(&op.apply_t(&cur)?)?;
        let mut next = cur.scale(&c2);
        next.add_scaled(&tt, &qi(-1));
        cur = next;
    }
    Ok(cur)
}

/// `∏_j ((2ν+2+ρ_1)² − (m_j+ρ_j)²)`.
pub fn eigenvalue_of_m(rs: &RootSystemBC, nu: &Q, m: &Weight) -> Q {
    let rho = rs.rho();
    let c = nu * qi(2) + qi(2) + &rho[0];
    m.parts()
        .iter()
        .zip(&rho)
        .map(|(&mj, rj)| {
            let x = qi(mj as i64) + rj;
            &c * &c - &x * &x
        })
        .fold(qi(1), |acc, f| acc * f)
}

/// Convenience: the Gaussian rational `i·x`.
pub fn times_i(x: &CQ) -> CQ {
    Complex::new(-x.im.clone(), x.re.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::RealLaurent;
    use crate::param::q;

    fn rs(r: usize, a: i64, b2: i64, iota: i64) -> RootSystemBC {
        RootSystemBC::from_ints(r, a, b2, iota).unwrap()
    }

    #[test]
    fn constants_are_eigenfunctions() {
        let sys = rs(2, 2, 2, 1);
        let one = LaurentTrigPoly::constant(2, CQ::from_q(qi(1)));
        for j in 0..2 {
            let op = CherednikOperator::new(&sys, j).unwrap();
            let d = apply_d(&op, &one).unwrap();
            let expect = CQ::new(qi(0), -sys.rho()[j].clone());
            assert_eq!(d.coeff(&[0, 0]), expect);
            assert_eq!(d.len(), 1);
        }
    }

    #[test]
    fn m_on_constant() {
        let sys = rs(3, 1, 2, 0);
        let one = RealLaurent::constant(3, qi(1));
        let delta = q(7, 2);
        let out = apply_m(&sys, &delta, &one).unwrap();
        let rho = sys.rho();
        let c = &delta + &rho[0];
        let expect = rho.iter().fold(qi(1), |acc, r| acc * (&c * &c - r * r));
        assert_eq!(out, RealLaurent::constant(3, expect));
        assert_eq!(eigenvalue_of_m(&sys, &q(3, 4), &Weight::zero(3)), {
            let c = q(3, 2) + qi(2) + &rho[0];
            rho.iter().fold(qi(1), |acc, r| acc * (&c * &c - r * r))
        });
    }

    #[test]
    fn eigenvalue_vanishes_on_the_diagonal() {
        let sys = RootSystemBC::from_ints(1, 0, 0, 1).unwrap();
        assert_eq!(sys.rho(), vec![qi(1)]);
        let m = Weight::new(vec![2]).unwrap();
        assert_eq!(eigenvalue_of_m(&sys, &qi(0), &m), qi(0));
    }

    #[test]
    fn rank_one_telescoping() {
        // ι = μ, 2b = 0: T e^{2it} = (2 − ρ) e^{2it} + 2μ e^{2it}
        let mu = q(3, 2);
        let sys = RootSystemBC::new(1, qi(0), qi(0), mu.clone()).unwrap();
        let op = CherednikOperator::new(&sys, 0).unwrap();
        let p = RealLaurent::monomial(vec![2], qi(1));
        let out = op.apply_t(&p).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out.coeff(&[2]), qi(2) - &mu + &mu * qi(2));
        let p = RealLaurent::monomial(vec![-2], qi(1));
        let out = op.apply_t(&p).unwrap();
        assert_eq!(out.coeff(&[2]), -(&mu * qi(2)));
        assert_eq!(out.coeff(&[-2]), qi(-2) - &mu);
    }

    #[test]
    fn odd_lattice_rejected() {
        let sys = rs(2, 1, 0, 0);
        let op = CherednikOperator::new(&sys, 0).unwrap();
        let p = RealLaurent::monomial(vec![1, 0], qi(1));
        assert!(op.apply_t(&p).is_err());
    }

    #[test]
    fn multiple_of_detects_lattice() {
        assert_eq!(multiple_of(&[4, -4], &[2, -2]), Some(2));
        assert_eq!(multiple_of(&[-4, 4], &[2, -2]), Some(-2));
        assert_eq!(multiple_of(&[2, 0], &[2, -2]), None);
        assert_eq!(multiple_of(&[0, 0], &[4, 0]), Some(0));
    }
}
