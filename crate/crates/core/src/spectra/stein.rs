use num_traits::Signed;
use serde::Serialize;

use super::{norm_factors_sin, Factor, SpectralSymbol, TransformKind};
use crate::error::{Error, Result};
use crate::param::{q_to_f64, qi, Param};
use crate::rootsystem::{grassmannian_preset, Field, Weight};

/// Which denominator the Knapp–Stein eigenvalue carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KnappSteinForm {
    /// `((a/2)(r+1−j+2t))_{m_j/2}`, the sine symbol of `G_{2r,r}` at `ν = −(a/2)(r−2t)`.
    Substituted,
    /// `((a/2)(r+j−1+2t))_{m_j/2}`
    Printed,
}

/// `ν = −(a/2)(r − 2t)`
pub fn knapp_stein_nu(field: Field, r: usize, t: &Param) -> Param {
    let half_a = qi(field.a() as i64) / qi(2);
    t.mul_q(&qi(2)).add_q(&-qi(r as i64)).mul_q(&half_a)
}

pub fn knapp_stein_symbol(field: Field, r: usize, t: &Param, m: &Weight) -> Result<SpectralSymbol> {
    knapp_stein_symbol_with(KnappSteinForm::Substituted, field, r, t, m)
}

/// `N′_ν ∏_j ((a/2)(r+1−j−2t))_{m_j/2} / (denominator)_{m_j/2}`, continued
/// meromorphically to `ν < 0`.
pub fn knapp_stein_symbol_with(
    form: KnappSteinForm,
    field: Field,
    r: usize,
    t: &Param,
    m: &Weight,
) -> Result<SpectralSymbol> {
    let rs = grassmannian_preset(field, 2 * r, r)?;
    m.require_even()?;
    if m.rank() != r {
        return Err(Error::DimensionMismatch(format!("weight {m} does not have rank {r}")));
    }
    let nu = knapp_stein_nu(field, r, t);
    let half_a = qi(field.a() as i64) / qi(2);
    let two_t = t.mul_q(&qi(2));
    let mut factors = Vec::new();
    for (j, &mj) in m.parts().iter().enumerate() {
        let k = mj / 2;
        if k == 0 {
            continue;
        }
        let j = j as i64;
        let r = r as i64;
        factors.push(Factor::Pochhammer {
            x: two_t.neg().add_q(&qi(r - j)).mul_q(&half_a),
            k,
            power: 1,
        });
        let base = match form {
            KnappSteinForm::Substituted => r - j,
            KnappSteinForm::Printed => r + j,
        };
        factors.push(Factor::Pochhammer {
            x: two_t.add_q(&qi(base)).mul_q(&half_a),
            k,
            power: -1,
        });
    }
    Ok(SpectralSymbol::assemble(
        TransformKind::KnappStein,
        nu.clone(),
        m.clone(),
        norm_factors_sin(&rs, &nu)?,
        factors,
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct SteinScan {
    pub field: Field,
    pub r: usize,
    pub t: Param,
    pub nu: Param,
    pub degree_bound: u32,
    pub weights: usize,
    /// Symbols are compared after division by `N′_ν`.
    pub min_normalized: f64,
    pub min_weight: Weight,
    pub all_positive: bool,
    /// First weight (smallest size first) whose normalized symbol is not positive.
    pub witness: Option<Weight>,
    pub witness_value: Option<f64>,
    /// `N′_ν` itself sits at a pole of its continuation.
    pub norm_pole: bool,
    /// `0 < t < 1/2`
    pub in_unitary_range: bool,
    /// `Some(all_positive)` inside the unitary range, `None` outside.
    pub pass: Option<bool>,
}

pub fn stein_positivity_scan(field: Field, r: usize, t: &Param, degree_bound: u32) -> Result<SteinScan> {
    let weights = Weight::even_dominant(r, degree_bound);
    let mut min_normalized = f64::INFINITY;
    let mut min_weight = Weight::zero(r);
    let mut witness = None;
    let mut witness_value = None;
    let mut norm_pole = false;
    for m in &weights {
        let s = knapp_stein_symbol(field, r, t, m)?;
        norm_pole |= s.norm_factors.iter().any(Factor::is_pole);
        let (value, positive) = match s.ratio() {
            Some(q) => (q_to_f64(&q), q.is_positive()),
            None => {
                let v = s.ratio_f64();
                (v, v > 0.0)
            }
        };
        if value < min_normalized {
            min_normalized = value;
            min_weight = m.clone();
        }
        if !positive && witness.is_none() {
            witness = Some(m.clone());
            witness_value = Some(value);
        }
    }
    let tv = t.to_f64();
    let in_unitary_range = tv > 0.0 && tv < 0.5;
    let all_positive = witness.is_none();
    Ok(SteinScan {
        field,
        r,
        t: t.clone(),
        nu: knapp_stein_nu(field, r, t),
        degree_bound,
        weights: weights.len(),
        min_normalized,
        min_weight,
        all_positive,
        witness,
        witness_value,
        norm_pole,
        in_unitary_range,
        pass: in_unitary_range.then_some(all_positive),
    })
}
