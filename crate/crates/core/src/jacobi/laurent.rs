use std::collections::BTreeMap;
use std::ops::{AddAssign, Neg};

use num_complex::{Complex, Complex64};
use num_traits::Zero;

use crate::param::{q_to_f64, Q};
use crate::rootsystem::SignedPermutation;

pub type CQ = Complex<Q>;

/// Exact coefficient ring for Laurent polynomials: the rationals or the Gaussian rationals.
pub trait Coefficient: Clone + Zero + AddAssign + Neg<Output = Self> + PartialEq + Send + Sync {
    fn scale(&self, x: &Q) -> Self;
    fn from_q(x: Q) -> Self;
    fn to_c64(&self) -> Complex64;
}

impl Coefficient for Q {
    fn scale(&self, x: &Q) -> Self {
        self * x
    }

    fn from_q(x: Q) -> Self {
        x
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(q_to_f64(self), 0.0)
    }
}

impl Coefficient for CQ {
    fn scale(&self, x: &Q) -> Self {
        Complex::new(&self.re * x, &self.im * x)
    }

    fn from_q(x: Q) -> Self {
        Complex::new(x, Q::zero())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
}

/// `Σ c_λ e^{i⟨λ,t⟩}` over a finite set of `λ ∈ ℤ^r`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly<C> {
    rank: usize,
    terms: BTreeMap<Vec<i64>, C>,
}

/// Laurent trigonometric polynomial with Gaussian-rational coefficients.
pub type LaurentTrigPoly = LaurentPoly<CQ>;

/// Laurent trigonometric polynomial with rational coefficients.
pub type RealLaurent = LaurentPoly<Q>;

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, c: C) -> Self {
        let mut p = Self::zero(rank);
        p.add_term(vec![0; rank], c);
        p
    }

    pub fn monomial(exponent: Vec<i64>, c: C) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, c);
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponent: &[i64]) -> C {
        self.terms.get(exponent).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, exponent: Vec<i64>, c: C) {
        debug_assert_eq!(exponent.len(), self.rank);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, x: &Q) {
        if x.is_zero() {
            return;
        }
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.scale(x));
        }
    }

    pub fn scale(&self, x: &Q) -> Self {
        let mut out = Self::zero(self.rank);
        out.add_scaled(self, x);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn evaluate(&self, t: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_c64() * Complex64::cis(dot(e, t)))
            .sum()
    }

    /// `∂_j` evaluated at `t`.
    pub fn partial_at(&self, j: usize, t: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_c64() * Complex64::new(0.0, e[j] as f64) * Complex64::cis(dot(e, t)))
            .sum()
    }

    pub fn pullback(&self, w: &SignedPermutation) -> Self {
        // f(w·t) = Σ c_λ e^{i⟨λ, w·t⟩} = Σ c_λ e^{i⟨w^T λ, t⟩}
        let mut out = Self::zero(self.rank);
        for (e, c) in &self.terms {
            let mut mu = vec![0; self.rank];
            for (i, (&p, &s)) in w.perm.iter().zip(&w.signs).enumerate() {
                mu[p] += s as i64 * e[i];
            }
            out.add_term(mu, c.clone());
        }
        out
    }

    pub fn is_invariant_under(&self, group: &[SignedPermutation]) -> bool {
        group.iter().all(|w| &self.pullback(w) == self)
    }
}

impl RealLaurent {
    pub fn to_complex(&self) -> LaurentTrigPoly {
        let mut out = LaurentTrigPoly::zero(self.rank);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), CQ::from_q(c.clone()));
        }
        out
    }
}

impl LaurentTrigPoly {
    pub fn real_part(&self) -> RealLaurent {
        let mut out = RealLaurent::zero(self.rank);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.re.clone());
        }
        out
    }

    pub fn imag_part(&self) -> RealLaurent {
        let mut out = RealLaurent::zero(self.rank);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.im.clone());
        }
        out
    }

    pub fn from_parts(re: &RealLaurent, im: &RealLaurent) -> Self {
        let mut out = re.to_complex();
        for (e, c) in &im.terms {
            out.add_term(e.clone(), Complex::new(Q::zero(), c.clone()));
        }
        out
    }
}

fn dot(e: &[i64], t: &[f64]) -> f64 {
    e.iter().zip(t).map(|(&a, &b)| a as f64 * b).sum()
}
