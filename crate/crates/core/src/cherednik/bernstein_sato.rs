//! Pointwise checks of `M_δ |Cos|^δ = c·|Cos|^{δ−2}` and its sine analogue,
//! assembled from first-order factors.

use num_complex::Complex64;
use serde::Serialize;

use super::closed_form::{ClosedForm, ClosedFormFactor, TorusFunction};
use super::CherednikOperator;
use crate::error::{Error, Result};
use crate::param::q_to_f64;
use crate::rootsystem::RootSystemBC;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kernel {
    Cos,
    Sin,
}

struct Step {
    measured: Complex64,
    expected: Complex64,
}

impl Step {
    fn rel(&self) -> f64 {
        (self.measured - self.expected).norm() / self.expected.norm()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BsResidual {
    /// `(M_δ K^δ)(t) / K^{δ−2}(t)` assembled from the factor chain.
    pub measured_re: f64,
    pub measured_im: f64,
    pub constant: f64,
    pub residual: f64,
    pub relative: f64,
    /// Worst relative residual among the individual factor steps.
    pub worst_step: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorReport {
    pub cos_ascending: f64,
    pub cos_descending: f64,
    pub sin_ascending: f64,
    pub sin_descending: f64,
}

impl FactorReport {
    pub fn max(&self) -> f64 {
        self.cos_ascending
            .max(self.cos_descending)
            .max(self.sin_ascending)
            .max(self.sin_descending)
    }
}

/// Input of ascending step `l` (zero-based): `K^δ ∏_{k<l} e^{it_k}/K(t_k)`.
fn ascending_state(kernel: Kernel, r: usize, delta: f64, l: usize) -> ClosedFormFactor {
    let mut f = match kernel {
        Kernel::Cos => ClosedFormFactor::cos_power(r, delta),
        Kernel::Sin => ClosedFormFactor::sin_power(r, delta),
    };
    for k in 0..l {
        f = match kernel {
            Kernel::Cos => f.times_exp_over_cos(k, 1),
            Kernel::Sin => f.times_exp_over_sin(k, 1),
        };
    }
    f
}

/// Output of descending step `l` (zero-based):
/// `K^δ ∏_{k<l} e^{it_k}/K(t_k) ∏_{k≥l} K(t_k)^{−2}`.
fn descending_state(kernel: Kernel, r: usize, delta: f64, l: usize) -> ClosedFormFactor {
    let mut f = ascending_state(kernel, r, delta, l);
    for k in l..r {
        f = match kernel {
            Kernel::Cos => f.over_cos_squared(k),
            Kernel::Sin => f.over_sin_squared(k),
        };
    }
    f
}

fn apply_factor(
    op: &CherednikOperator,
    sign: f64,
    c: f64,
    f: &ClosedFormFactor,
    t: &[f64],
) -> Result<Complex64> {
    let form = ClosedForm::from(f.clone());
    let d = op.apply_pointwise(&form, t)?;
    Ok(Complex64::new(0.0, sign) * d + c * form.value(t))
}

fn ascending_steps(rs: &RootSystemBC, kernel: Kernel, delta: f64, t: &[f64], upto: usize) -> Result<Vec<Step>> {
    let r = rs.rank();
    let a = q_to_f64(rs.a());
    let c = delta + rs.rho_f64()[0];
    let mut out = Vec::new();
    for l in 0..upto {
        let op = CherednikOperator::new(rs, l)?;
        let input = ascending_state(kernel, r, delta, l);
        let output = ascending_state(kernel, r, delta, l + 1);
        let lhs = apply_factor(&op, -1.0, c, &input, t)?;
        let k = delta + a * l as f64;
        let expected = match kernel {
            Kernel::Cos => Complex64::new(k, 0.0),
            Kernel::Sin => Complex64::new(0.0, -k),
        };
        out.push(Step {
            measured: lhs / output.value(t),
            expected,
        });
    }
    Ok(out)
}

fn descending_steps(rs: &RootSystemBC, kernel: Kernel, delta: f64, t: &[f64], from: usize) -> Result<Vec<Step>> {
    let r = rs.rank();
    let a = q_to_f64(rs.a());
    let iota = q_to_f64(rs.iota());
    let b2 = q_to_f64(rs.b2());
    let c = delta + rs.rho_f64()[0];
    let mut out = Vec::new();
    for l in (from..r).rev() {
        let op = CherednikOperator::new(rs, l)?;
        let input = descending_state(kernel, r, delta, l + 1);
        let output = descending_state(kernel, r, delta, l);
        let lhs = apply_factor(&op, 1.0, c, &input, t)?;
        let tail = a * (r - 1 - l) as f64;
        let expected = match kernel {
            Kernel::Cos => Complex64::new(delta - 1.0 + iota + tail, 0.0),
            Kernel::Sin => Complex64::new(0.0, delta - 1.0 + iota + b2 + tail),
        };
        out.push(Step {
            measured: lhs / output.value(t),
            expected,
        });
    }
    Ok(out)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta >= 2.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("delta = {delta} must be at least 2")));
    }
    Ok(())
}

fn full_identity(rs: &RootSystemBC, kernel: Kernel, delta: f64, t: &[f64]) -> Result<BsResidual> {
    check_delta(delta)?;
    if t.len() != rs.rank() {
        return Err(Error::DimensionMismatch(format!(
            "torus point has {} coordinates, rank is {}",
            t.len(),
            rs.rank()
        )));
    }
    let mut steps = ascending_steps(rs, kernel, delta, t, rs.rank())?;
    steps.extend(descending_steps(rs, kernel, delta, t, 0)?);
    let measured: Complex64 = steps.iter().map(|s| s.measured).product();
    let constant: Complex64 = steps.iter().map(|s| s.expected).product();
    let worst_step = steps.iter().map(Step::rel).fold(0.0, f64::max);
    let residual = (measured - constant).norm();
    Ok(BsResidual {
        measured_re: measured.re,
        measured_im: measured.im,
        constant: constant.re,
        residual,
        relative: residual / constant.norm(),
        worst_step,
    })
}

/// Residual of `M_δ |Cos|^δ = ∏(δ+a(j−1))(δ+ι−1+a(r−j)) |Cos|^{δ−2}` at `t`.
pub fn verify_bs_cos(rs: &RootSystemBC, delta: f64, t: &[f64]) -> Result<BsResidual> {
    full_identity(rs, Kernel::Cos, delta, t)
}

/// Residual of `M_δ |Sin|^δ = ∏(δ+a(j−1))(δ+ι+2b−1+a(r−j)) |Sin|^{δ−2}` at `t`.
pub fn verify_bs_sin(rs: &RootSystemBC, delta: f64, t: &[f64]) -> Result<BsResidual> {
    full_identity(rs, Kernel::Sin, delta, t)
}

/// Worst relative residual of the four partial products ending at factor `j` (one-based).
pub fn verify_factor_identities(rs: &RootSystemBC, delta: f64, j: usize, t: &[f64]) -> Result<FactorReport> {
    check_delta(delta)?;
    if j == 0 || j > rs.rank() {
        return Err(Error::InvalidParameter(format!(
            "factor index {j} must lie in 1..={}",
            rs.rank()
        )));
    }
    let worst = |steps: Vec<Step>| steps.iter().map(Step::rel).fold(0.0, f64::max);
    Ok(FactorReport {
        cos_ascending: worst(ascending_steps(rs, Kernel::Cos, delta, t, j)?),
        cos_descending: worst(descending_steps(rs, Kernel::Cos, delta, t, j - 1)?),
        sin_ascending: worst(ascending_steps(rs, Kernel::Sin, delta, t, j)?),
        sin_descending: worst(descending_steps(rs, Kernel::Sin, delta, t, j - 1)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_cosine() {
        let rs = RootSystemBC::from_ints(1, 0, 0, 3).unwrap();
        let res = verify_bs_cos(&rs, 2.0, &[0.7]).unwrap();
        assert!((res.constant - 2.0 * (2.0 + 3.0 - 1.0)).abs() < 1e-12);
        assert!(res.relative < 1e-9, "{res:?}");
    }

    #[test]
    fn type_d_rank_two_sine_constant() {
        let rs = RootSystemBC::from_ints(2, 1, 0, 0).unwrap();
        let res = verify_bs_sin(&rs, 2.0, &[0.4, 1.1]).unwrap();
        let expect = (2.0 * 2.0) * (3.0 * 1.0);
        assert!((res.constant - expect).abs() < 1e-12);
        assert!(res.relative < 1e-8, "{res:?}");
    }

    #[test]
    fn degenerate_point_rejected() {
        let rs = RootSystemBC::from_ints(2, 1, 2, 1).unwrap();
        assert!(verify_bs_cos(&rs, 2.0, &[0.5, 0.5]).is_err());
        assert!(verify_bs_cos(&rs, 1.0, &[0.5, 0.9]).is_err());
    }

    #[test]
    fn first_factor_in_rank_one() {
        let rs = RootSystemBC::from_ints(1, 0, 2, 1).unwrap();
        let rep = verify_factor_identities(&rs, 3.5, 1, &[1.2]).unwrap();
        assert!(rep.max() < 1e-9, "{rep:?}");
    }
}
