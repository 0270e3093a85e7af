use num_complex::Complex64;

use crate::jacobi::{Coefficient, LaurentPoly};
use crate::rootsystem::SignedPermutation;

/// A function on the torus that can be evaluated and differentiated pointwise.
pub trait TorusFunction {
    fn value(&self, t: &[f64]) -> Complex64;
    fn partial(&self, j: usize, t: &[f64]) -> Complex64;
}

impl<C: Coefficient> TorusFunction for LaurentPoly<C> {
    fn value(&self, t: &[f64]) -> Complex64 {
        self.evaluate(t)
    }

    fn partial(&self, j: usize, t: &[f64]) -> Complex64 {
        self.partial_at(j, t)
    }
}

/// `scale · ∏_j |cos t_j|^{p_j} sgn(cos t_j)^{s_j} |sin t_j|^{q_j} sgn(sin t_j)^{u_j} e^{iκ_j t_j}`
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormFactor {
    pub scale: Complex64,
    pub cos_pow: Vec<f64>,
    pub cos_sgn: Vec<u8>,
    pub sin_pow: Vec<f64>,
    pub sin_sgn: Vec<u8>,
    pub kappa: Vec<i64>,
}

fn signed_pow(x: f64, p: f64, s: u8) -> f64 {
    let m = if p == 0.0 { 1.0 } else { x.abs().powf(p) };
    if s % 2 == 1 && x < 0.0 {
        -m
    } else {
        m
    }
}

impl ClosedFormFactor {
    pub fn one(r: usize) -> Self {
        ClosedFormFactor {
            scale: Complex64::new(1.0, 0.0),
            cos_pow: vec![0.0; r],
            cos_sgn: vec![0; r],
            sin_pow: vec![0.0; r],
            sin_sgn: vec![0; r],
            kappa: vec![0; r],
        }
    }

    /// `|Cos(t)|^δ`
    pub fn cos_power(r: usize, delta: f64) -> Self {
        let mut f = Self::one(r);
        f.cos_pow = vec![delta; r];
        f
    }

    /// `|Sin(t)|^δ`
    pub fn sin_power(r: usize, delta: f64) -> Self {
        let mut f = Self::one(r);
        f.sin_pow = vec![delta; r];
        f
    }

    pub fn rank(&self) -> usize {
        self.kappa.len()
    }

    /// Multiply by `e^{iκ t_j} / cos t_j`.
    pub fn times_exp_over_cos(mut self, j: usize, kappa: i64) -> Self {
        self.cos_pow[j] -= 1.0;
        self.cos_sgn[j] ^= 1;
        self.kappa[j] += kappa;
        self
    }

    /// Multiply by `e^{iκ t_j} / sin t_j`.
    pub fn times_exp_over_sin(mut self, j: usize, kappa: i64) -> Self {
        self.sin_pow[j] -= 1.0;
        self.sin_sgn[j] ^= 1;
        self.kappa[j] += kappa;
        self
    }

    /// Multiply by `cos^{-2} t_j`.
    pub fn over_cos_squared(mut self, j: usize) -> Self {
        self.cos_pow[j] -= 2.0;
        self
    }

    /// Multiply by `sin^{-2} t_j`.
    pub fn over_sin_squared(mut self, j: usize) -> Self {
        self.sin_pow[j] -= 2.0;
        self
    }

    pub fn value(&self, t: &[f64]) -> Complex64 {
        let mut re = 1.0;
        let mut phase = 0.0;
        for j in 0..self.rank() {
            let (s, c) = t[j].sin_cos();
            re *= signed_pow(c, self.cos_pow[j], self.cos_sgn[j]);
            re *= signed_pow(s, self.sin_pow[j], self.sin_sgn[j]);
            phase += self.kappa[j] as f64 * t[j];
        }
        self.scale * re * Complex64::cis(phase)
    }

    /// Symbolic `∂_j`.
    pub fn partial(&self, j: usize) -> ClosedForm {
        let mut out = Vec::new();
        let p = self.cos_pow[j];
        if p != 0.0 {
            // d/dt |cos|^p sgn^s = −p |cos|^{p−1} sgn(cos)^{s+1} |sin| sgn(sin)
            let mut f = self.clone();
            f.scale *= -p;
            f.cos_pow[j] -= 1.0;
            f.cos_sgn[j] ^= 1;
            f.sin_pow[j] += 1.0;
            f.sin_sgn[j] ^= 1;
            out.push(f);
        }
        let q = self.sin_pow[j];
        if q != 0.0 {
            let mut f = self.clone();
            f.scale *= q;
            f.sin_pow[j] -= 1.0;
            f.sin_sgn[j] ^= 1;
            f.cos_pow[j] += 1.0;
            f.cos_sgn[j] ^= 1;
            out.push(f);
        }
        if self.kappa[j] != 0 {
            let mut f = self.clone();
            f.scale *= Complex64::new(0.0, self.kappa[j] as f64);
            out.push(f);
        }
        ClosedForm { terms: out }
    }

    /// `t ↦ f(w·t)`, again a closed-form factor.
    pub fn pullback(&self, w: &SignedPermutation) -> Self {
        let mut f = Self::one(self.rank());
        f.scale = self.scale;
        for (i, (&p, &s)) in w.perm.iter().zip(&w.signs).enumerate() {
            f.cos_pow[p] = self.cos_pow[i];
            f.cos_sgn[p] = self.cos_sgn[i];
            f.sin_pow[p] = self.sin_pow[i];
            f.sin_sgn[p] = self.sin_sgn[i];
            f.kappa[p] = s as i64 * self.kappa[i];
            if s < 0 && self.sin_sgn[i] % 2 == 1 {
                f.scale = -f.scale;
            }
        }
        f
    }
}

/// Finite linear combination of [`ClosedFormFactor`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub terms: Vec<ClosedFormFactor>,
}

impl From<ClosedFormFactor> for ClosedForm {
    fn from(f: ClosedFormFactor) -> Self {
        ClosedForm { terms: vec![f] }
    }
}

impl ClosedForm {
    pub fn partial_form(&self, j: usize) -> ClosedForm {
        ClosedForm {
            terms: self.terms.iter().flat_map(|f| f.partial(j).terms).collect(),
        }
    }

    pub fn pullback(&self, w: &SignedPermutation) -> ClosedForm {
        ClosedForm {
            terms: self.terms.iter().map(|f| f.pullback(w)).collect(),
        }
    }
}

impl TorusFunction for ClosedForm {
    fn value(&self, t: &[f64]) -> Complex64 {
        self.terms.iter().map(|f| f.value(t)).sum()
    }

    fn partial(&self, j: usize, t: &[f64]) -> Complex64 {
        self.partial_form(j).value(t)
    }
}

impl TorusFunction for ClosedFormFactor {
    fn value(&self, t: &[f64]) -> Complex64 {
        ClosedFormFactor::value(self, t)
    }

    fn partial(&self, j: usize, t: &[f64]) -> Complex64 {
        ClosedFormFactor::partial(self, j).value(t)
    }
}
