use serde::Serialize;

use super::TransformKind;
use crate::error::{Error, Result};
use crate::jacobi::jacobi_polynomial;
use crate::param::Param;
use crate::quadrature::{domain_for, Domain, TorusRule};
use crate::rootsystem::{RootSystemBC, Weight};

/// Relative disagreement between the two resolutions above which a value is
/// reported as unconverged.
pub const SELF_CHECK_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Serialize)]
pub struct QuadratureSymbol {
    pub m: Weight,
    pub value: f64,
    /// The same integral at roughly three quarters of the order.
    pub coarse: f64,
    /// `∫ K^{2ν} dμ`, the scale against which differences are judged.
    pub scale: f64,
    pub order: usize,
    /// `|value − coarse| / scale`
    pub self_check: f64,
    pub converged: bool,
}

pub fn default_order(rank: usize) -> usize {
    match rank {
        0..=2 => 64,
        3 => 48,
        _ => 24,
    }
}

fn kernel_domain(rs: &RootSystemBC, nu: &Param) -> Domain {
    match domain_for(rs) {
        Domain::Alcove if nu.mul_q(&crate::param::qi(2)).is_integer() => Domain::Alcove,
        _ => Domain::GradedAlcove(2),
    }
}

fn integrate(
    rs: &RootSystemBC,
    nu: f64,
    sine: bool,
    evals: &[crate::jacobi::Evaluator],
    rule: &TorusRule,
) -> Vec<f64> {
    let width = evals.len() + 1;
    rule.integrate_many(width, |t, out| {
        let k: f64 = t
            .iter()
            .map(|&x| if sine { x.sin() } else { x.cos() }.max(0.0).powf(2.0 * nu))
            .product();
        let w = k * rs.measure_density(t);
        let mut table = Vec::new();
        out[0] = w;
        for (o, e) in out[1..].iter_mut().zip(evals) {
            *o = w * e.eval_with(t, &mut table);
        }
    })
}

/// `∫ K^{2ν} φ_m dμ` over the torus for several weights at once.
pub fn quadrature_symbols(
    rs: &RootSystemBC,
    nu: &Param,
    kind: TransformKind,
    weights: &[Weight],
    order: usize,
) -> Result<Vec<QuadratureSymbol>> {
    let sine = match kind {
        TransformKind::Cosine => false,
        TransformKind::Sine => true,
        other => {
            return Err(Error::InvalidParameter(format!(
                "quadrature covers the cosine and sine kernels, not {other}"
            )))
        }
    };
    if nu.is_negative() {
        return Err(Error::InvalidParameter(format!("nu = {nu} must be nonnegative")));
    }
    if order < 4 {
        return Err(Error::Quadrature(format!("order {order} is below the minimum of 4")));
    }
    for m in weights {
        m.require_even()?;
    }
    let evals = weights
        .iter()
        .map(|m| Ok(jacobi_polynomial(rs, m)?.evaluator()))
        .collect::<Result<Vec<_>>>()?;
    let domain = kernel_domain(rs, nu);
    let coarse_order = (3 * order).div_ceil(4);
    let fine = integrate(rs, nu.to_f64(), sine, &evals, &TorusRule::new(rs.rank(), order, domain));
    let coarse = integrate(
        rs,
        nu.to_f64(),
        sine,
        &evals,
        &TorusRule::new(rs.rank(), coarse_order, domain),
    );
    let scale = fine[0];
    let norm_check = (fine[0] - coarse[0]).abs() / scale;
    Ok(weights
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let self_check = ((fine[i + 1] - coarse[i + 1]).abs() / scale).max(norm_check);
            QuadratureSymbol {
                m: m.clone(),
                value: fine[i + 1],
                coarse: coarse[i + 1],
                scale,
                order,
                self_check,
                converged: self_check <= SELF_CHECK_TOL,
            }
        })
        .collect())
}

pub fn quadrature_symbol(
    rs: &RootSystemBC,
    nu: &Param,
    kind: TransformKind,
    m: &Weight,
    order: usize,
) -> Result<QuadratureSymbol> {
    Ok(quadrature_symbols(rs, nu, kind, std::slice::from_ref(m), order)?.remove(0))
}

/// `∫ K^{2ν} dμ`; `kind` selects cosine or sine.
pub fn quadrature_norm(rs: &RootSystemBC, nu: &Param, kind: TransformKind, order: usize) -> Result<QuadratureSymbol> {
    quadrature_symbol(rs, nu, kind, &Weight::zero(rs.rank()), order)
}

/// Relative error of a quadrature value against a closed form; at exact zeros
/// the error is taken relative to `∫ K^{2ν} dμ`.
pub fn relative_error(closed: &super::SpectralSymbol, quad: &QuadratureSymbol) -> f64 {
    if closed.is_exact_zero {
        quad.value.abs() / quad.scale
    } else {
        (quad.value - closed.value).abs() / closed.value.abs()
    }
}
