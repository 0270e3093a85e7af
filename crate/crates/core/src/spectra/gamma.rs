//! Signed log-Gamma values with exact pole detection.

use serde::Serialize;

use crate::param::{is_nonpositive_integer, qi, Param, Q};

/// `log|x|`, the sign of `x`, and whether `x` is a pole (infinite).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogValue {
    pub log_abs: f64,
    pub sign: f64,
    pub pole: bool,
}

impl LogValue {
    pub const ONE: LogValue = LogValue {
        log_abs: 0.0,
        sign: 1.0,
        pole: false,
    };

    pub fn from_f64(x: f64) -> Self {
        LogValue {
            log_abs: x.abs().ln(),
            sign: if x < 0.0 { -1.0 } else { 1.0 },
            pole: false,
        }
    }

    pub fn mul(self, other: LogValue) -> Self {
        LogValue {
            log_abs: self.log_abs + other.log_abs,
            sign: self.sign * other.sign,
            pole: self.pole || other.pole,
        }
    }

    /// `1/x`; the reciprocal of a pole is zero.
    pub fn recip(self) -> Self {
        LogValue {
            log_abs: -self.log_abs,
            sign: self.sign,
            pole: !self.pole && self.log_abs == f64::NEG_INFINITY,
        }
    }

    /// The value, or a signed infinity at a pole.
    pub fn value(self) -> f64 {
        if self.pole {
            self.sign * f64::INFINITY
        } else {
            self.sign * self.log_abs.exp()
        }
    }
}

pub fn param_is_pole(x: &Param) -> bool {
    match x {
        Param::Exact(q) => is_nonpositive_integer(q),
        Param::Float(v) => *v <= 0.0 && v.fract() == 0.0,
    }
}

/// `log|Γ(x)|` and `sign Γ(x)`.
pub fn ln_gamma(x: &Param) -> LogValue {
    if param_is_pole(x) {
        return LogValue {
            log_abs: f64::INFINITY,
            sign: 1.0,
            pole: true,
        };
    }
    let (l, s) = libm::lgamma_r(x.to_f64());
    LogValue {
        log_abs: l,
        sign: s as f64,
        pole: false,
    }
}

/// `Γ_a(α) = ∏_{j=1}^r Γ(α − (a/2)(j−1))`.
pub fn gindikin_gamma(a: &Q, r: usize, alpha: &Param) -> LogValue {
    (0..r)
        .map(|j| ln_gamma(&alpha.add_q(&(-(a * qi(j as i64)) / qi(2)))))
        .fold(LogValue::ONE, LogValue::mul)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::q;

    #[test]
    fn gindikin_examples() {
        let g = gindikin_gamma(&qi(2), 2, &Param::from(3));
        assert!((g.value() - 2.0).abs() < 1e-14);
        assert!(gindikin_gamma(&qi(2), 2, &Param::from(1)).pole);
        let one = gindikin_gamma(&q(7, 3), 1, &Param::Exact(q(9, 2)));
        assert!((one.value() - 11.631728396567448).abs() < 1e-12);
    }

    #[test]
    fn negative_arguments_carry_sign() {
        // Γ(−1/2) = −2√π
        let g = ln_gamma(&Param::Exact(q(-1, 2)));
        assert!((g.value() + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
        // Γ(−3/2) = 4√π/3
        let g = ln_gamma(&Param::Float(-1.5));
        assert!((g.value() - 4.0 * std::f64::consts::PI.sqrt() / 3.0).abs() < 1e-13);
        assert!(ln_gamma(&Param::Float(-2.0)).pole);
    }
}
