//! Closed-form spectral symbols of the cosine, sine and Knapp–Stein
//! transforms, with quadrature oracles and image predicates.

mod gamma;
mod image;
mod kernels;
mod quadrature;
mod stein;

pub use gamma::{gindikin_gamma, ln_gamma, LogValue};
pub use image::{branching_list, image_membership, image_membership_with, in_l_nu, in_l_rr, Membership, MinRankRule};
pub use kernels::{symbol_kernel, symbol_kernels, SymbolKernel, SymbolRequest};
pub use quadrature::{
    default_order, quadrature_norm, quadrature_symbol, quadrature_symbols, relative_error, QuadratureSymbol, SELF_CHECK_TOL,
};
pub use stein::{
    knapp_stein_nu, knapp_stein_symbol, knapp_stein_symbol_with, stein_positivity_scan, KnappSteinForm, SteinScan,
};

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobi::value_at_half_pi;
use crate::param::{format_q, q_to_f64, qi, Param, Q};
use crate::rootsystem::{Field, RootSystemBC, RootType, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformKind {
    Cosine,
    Sine,
    KnappStein,
    CompositeCosine,
    CompositeSine,
}

impl TransformKind {
    pub const ALL: [TransformKind; 5] = [
        TransformKind::Cosine,
        TransformKind::Sine,
        TransformKind::KnappStein,
        TransformKind::CompositeCosine,
        TransformKind::CompositeSine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Cosine => "cosine",
            TransformKind::Sine => "sine",
            TransformKind::KnappStein => "knapp-stein",
            TransformKind::CompositeCosine => "composite-cosine",
            TransformKind::CompositeSine => "composite-sine",
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TransformKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "transform kind",
                name: s.to_string(),
            })
    }
}

/// One multiplicative piece of a closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Factor {
    /// `Γ(arg)^power`
    Gamma { arg: Param, power: i32 },
    /// `((x)_k)^power`
    Pochhammer { x: Param, k: u32, power: i32 },
    /// `2^exponent`
    PowerOfTwo { exponent: Param },
    Rational { value: Param },
    Scalar { value: f64 },
}

/// `(x)_k` exactly.
pub fn pochhammer(x: &Q, k: u32) -> Q {
    (0..k).fold(qi(1), |acc, i| acc * (x + qi(i as i64)))
}

impl Factor {
    fn rational(x: Q) -> Self {
        Factor::Rational { value: Param::Exact(x) }
    }

    /// The exact value, when the factor is rational and finite.
    pub fn exact(&self) -> Option<Q> {
        match self {
            Factor::Pochhammer {
                x: Param::Exact(x),
                k,
                power,
            } => {
                let p = pochhammer(x, *k);
                match *power {
                    1 => Some(p),
                    -1 if !p.is_zero() => Some(p.recip()),
                    _ => None,
                }
            }
            Factor::Rational { value: Param::Exact(v) } => Some(v.clone()),
            _ => None,
        }
    }

    /// A numerator factor that vanishes identically.
    pub fn is_exact_zero(&self) -> bool {
        match self {
            Factor::Pochhammer {
                x: Param::Exact(x),
                k,
                power,
            } => *power > 0 && pochhammer(x, *k).is_zero(),
            Factor::Rational { value: Param::Exact(v) } => v.is_zero(),
            Factor::Scalar { value } => *value == 0.0,
            _ => false,
        }
    }

    /// A denominator factor that vanishes, or a Gamma pole.
    pub fn is_pole(&self) -> bool {
        match self {
            Factor::Gamma { arg, .. } => gamma::param_is_pole(arg),
            Factor::Pochhammer {
                x: Param::Exact(x),
                k,
                power,
            } => *power < 0 && pochhammer(x, *k).is_zero(),
            _ => false,
        }
    }

    pub fn log_value(&self) -> LogValue {
        match self {
            Factor::Gamma { arg, power } => {
                let g = ln_gamma(arg);
                if *power < 0 {
                    g.recip()
                } else {
                    g
                }
            }
            Factor::Pochhammer { x, k, power } => {
                let v = match x {
                    Param::Exact(x) => q_to_f64(&pochhammer(x, *k)),
                    Param::Float(x) => (0..*k).map(|i| x + i as f64).product(),
                };
                let lv = LogValue::from_f64(v);
                if *power < 0 {
                    LogValue {
                        pole: v == 0.0,
                        ..lv.recip()
                    }
                } else {
                    lv
                }
            }
            Factor::PowerOfTwo { exponent } => LogValue {
                log_abs: exponent.to_f64() * std::f64::consts::LN_2,
                sign: 1.0,
                pole: false,
            },
            Factor::Rational { value } => LogValue::from_f64(value.to_f64()),
            Factor::Scalar { value } => LogValue::from_f64(*value),
        }
    }
}

/// An eigenvalue as a normalization constant times a product of factors.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSymbol {
    pub kind: TransformKind,
    pub nu: Param,
    pub m: Weight,
    /// Gamma-function factors of the normalization constant(s).
    pub norm_factors: Vec<Factor>,
    /// The remaining factors; their product is the normalized symbol.
    pub factors: Vec<Factor>,
    pub value: f64,
    pub is_exact_zero: bool,
    pub zero_order: u32,
    pub zero_witness: Option<Factor>,
    /// Some factor sits at a pole; `value` is then infinite or undefined.
    pub pole: bool,
}

impl SpectralSymbol {
    pub(crate) fn assemble(
        kind: TransformKind,
        nu: Param,
        m: Weight,
        norm_factors: Vec<Factor>,
        factors: Vec<Factor>,
    ) -> Self {
        let zeros: Vec<&Factor> = factors.iter().filter(|f| f.is_exact_zero()).collect();
        let zero_order = zeros.len() as u32;
        let zero_witness = zeros.first().map(|f| (*f).clone());
        let pole = norm_factors.iter().chain(&factors).any(Factor::is_pole);
        let is_exact_zero = zero_order > 0;
        let value = if is_exact_zero {
            0.0
        } else {
            norm_factors
                .iter()
                .chain(&factors)
                .map(Factor::log_value)
                .fold(LogValue::ONE, LogValue::mul)
                .value()
        };
        SpectralSymbol {
            kind,
            nu,
            m,
            norm_factors,
            factors,
            value,
            is_exact_zero,
            zero_order,
            zero_witness,
            pole,
        }
    }

    /// The symbol divided by its normalization constant, exactly when possible.
    pub fn ratio(&self) -> Option<Q> {
        self.factors
            .iter()
            .map(Factor::exact)
            .try_fold(qi(1), |acc, f| f.map(|f| acc * f))
    }

    pub fn ratio_f64(&self) -> f64 {
        if self.is_exact_zero {
            return 0.0;
        }
        self.factors
            .iter()
            .map(Factor::log_value)
            .fold(LogValue::ONE, LogValue::mul)
            .value()
    }

    pub fn norm(&self) -> LogValue {
        self.norm_factors
            .iter()
            .map(Factor::log_value)
            .fold(LogValue::ONE, LogValue::mul)
    }

    pub fn to_json(&self, field: Option<Field>, n: Option<usize>) -> SymbolJson {
        SymbolJson {
            kind: self.kind.name().to_string(),
            field: field.map(|f| f.to_string()),
            n,
            r: self.m.rank(),
            nu: self.nu.to_string(),
            m: self.m.parts().to_vec(),
            value: self.value,
            ratio: self.ratio().map(|q| format_q(&q)),
            exact_zero: self.is_exact_zero,
            zero_order: self.zero_order,
            zero_witness_factor: self.zero_witness.clone(),
            pole: self.pole,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SymbolJson {
    pub kind: String,
    pub field: Option<String>,
    pub n: Option<usize>,
    pub r: usize,
    pub nu: String,
    pub m: Vec<u32>,
    pub value: f64,
    pub ratio: Option<String>,
    pub exact_zero: bool,
    pub zero_order: u32,
    pub zero_witness_factor: Option<Factor>,
    pub pole: bool,
}

fn gindikin_factors(a: &Q, r: usize, alpha: &Param, power: i32, out: &mut Vec<Factor>) {
    for j in 0..r {
        out.push(Factor::Gamma {
            arg: alpha.add_q(&(-(a * qi(j as i64)) / qi(2))),
            power,
        });
    }
}

/// Factors of `N_ν` for multiplicities `(a, 2b, ι)`.
fn norm_factors_raw(r: usize, a: &Q, b2: &Q, iota: &Q, nu: &Param) -> Result<Vec<Factor>> {
    if r >= 2 && a.is_zero() {
        return Err(Error::InvalidParameter(
            "normalization constants need a > 0 in rank at least 2".into(),
        ));
    }
    let half = Q::new(1.into(), 2.into());
    let b = b2 * &half;
    let rq = qi(r as i64);
    let mut out = vec![
        Factor::PowerOfTwo {
            exponent: Param::Exact(a * &rq * qi(r as i64 - 1) + b2 * &rq + qi(2) * &rq * iota),
        },
        Factor::rational((1..=r as i64).fold(qi(1), |acc, k| acc * qi(k))),
    ];
    for i in 1..=r as i64 {
        for j in i + 1..=r as i64 {
            out.push(Factor::Gamma {
                arg: Param::Exact(a * &half * qi(j - i + 1)),
                power: 1,
            });
            out.push(Factor::Gamma {
                arg: Param::Exact(a * &half * qi(j - i)),
                power: -1,
            });
        }
    }
    let shift = (iota - qi(1)) * &half + a * &half * qi(r as i64 - 1);
    gindikin_factors(a, r, &Param::Exact(qi(1) + &b + &shift), 1, &mut out);
    gindikin_factors(a, r, &nu.add_q(&(qi(1) + &shift)), 1, &mut out);
    gindikin_factors(a, r, &nu.add_q(&(qi(1) + &b + iota + a * qi(r as i64 - 1))), -1, &mut out);
    Ok(out)
}

/// Factors of `N_ν = ∫ |Cos|^{2ν} dμ`.
pub fn norm_factors_cos(rs: &RootSystemBC, nu: &Param) -> Result<Vec<Factor>> {
    norm_factors_raw(rs.rank(), rs.a(), rs.b2(), rs.iota(), nu)
}

/// Factors of `N′_ν = ∫ |Sin|^{2ν} dμ = 2^{2rb} N_{ν+b}(a, 0, ι)`.
pub fn norm_factors_sin(rs: &RootSystemBC, nu: &Param) -> Result<Vec<Factor>> {
    let mut out = vec![Factor::PowerOfTwo {
        exponent: Param::Exact(rs.b2() * qi(rs.rank() as i64)),
    }];
    out.extend(norm_factors_raw(
        rs.rank(),
        rs.a(),
        &Q::zero(),
        rs.iota(),
        &nu.add_q(&rs.b()),
    )?);
    Ok(out)
}

fn product(factors: &[Factor]) -> LogValue {
    factors.iter().map(Factor::log_value).fold(LogValue::ONE, LogValue::mul)
}

pub fn norm_const_cos(rs: &RootSystemBC, nu: &Param) -> Result<LogValue> {
    Ok(product(&norm_factors_cos(rs, nu)?))
}

pub fn norm_const_sin(rs: &RootSystemBC, nu: &Param) -> Result<LogValue> {
    Ok(product(&norm_factors_sin(rs, nu)?))
}

fn check_symbol_args(rs: &RootSystemBC, nu: &Param, m: &Weight) -> Result<()> {
    m.require_even()?;
    if m.rank() != rs.rank() {
        return Err(Error::DimensionMismatch(format!(
            "weight {m} has rank {}, root system has rank {}",
            m.rank(),
            rs.rank()
        )));
    }
    if nu.is_negative() {
        return Err(Error::InvalidParameter(format!("nu = {nu} must be nonnegative")));
    }
    Ok(())
}

/// `∏_j (x_j)_{m_j/2} / (ν+1+ι+b+a(r−1)−(a/2)(j−1))_{m_j/2}` with `x_j` from `numerator(j, m_j/2)`.
fn pochhammer_product(
    rs: &RootSystemBC,
    nu: &Param,
    m: &Weight,
    numerator: impl Fn(usize, u32) -> Param,
) -> Vec<Factor> {
    let r = rs.rank() as i64;
    let top = qi(1) + rs.iota() + rs.b() + rs.a() * qi(r - 1);
    let mut out = Vec::new();
    for (j, &mj) in m.parts().iter().enumerate() {
        let k = mj / 2;
        if k == 0 {
            continue;
        }
        out.push(Factor::Pochhammer {
            x: numerator(j, k),
            k,
            power: 1,
        });
        out.push(Factor::Pochhammer {
            x: nu.add_q(&(&top - rs.a() * qi(j as i64) / qi(2))),
            k,
            power: -1,
        });
    }
    out
}

/// Numerators `ν+1+(a/2)(j−1)−m_j/2`.
fn cosine_product(rs: &RootSystemBC, nu: &Param, m: &Weight) -> Vec<Factor> {
    pochhammer_product(rs, nu, m, |j, k| {
        nu.add_q(&(qi(1) + rs.a() * qi(j as i64) / qi(2) - qi(k as i64)))
    })
}

/// `c_ν(m) = N_ν ∏_j (ν+1+(a/2)(j−1)−m_j/2)_{m_j/2} / (ν+1+ι+b+a(r−1)−(a/2)(j−1))_{m_j/2}`.
pub fn cosine_symbol(rs: &RootSystemBC, nu: &Param, m: &Weight) -> Result<SpectralSymbol> {
    check_symbol_args(rs, nu, m)?;
    Ok(SpectralSymbol::assemble(
        TransformKind::Cosine,
        nu.clone(),
        m.clone(),
        norm_factors_cos(rs, nu)?,
        cosine_product(rs, nu, m),
    ))
}

/// `s_ν(m) = N′_ν ∏_j (…)_{m_j/2}/(…)_{m_j/2} · φ_m(π/2, …, π/2)`.
pub fn sine_symbol(rs: &RootSystemBC, nu: &Param, m: &Weight) -> Result<SpectralSymbol> {
    check_symbol_args(rs, nu, m)?;
    let mut factors = cosine_product(rs, nu, m);
    let half_pi = value_at_half_pi(rs, m)?;
    if !half_pi.is_one() {
        factors.push(Factor::rational(half_pi));
    }
    Ok(SpectralSymbol::assemble(
        TransformKind::Sine,
        nu.clone(),
        m.clone(),
        norm_factors_sin(rs, nu)?,
        factors,
    ))
}

/// The type C/D form `N′_ν ∏_j (−ν−(a/2)(j−1))_{m_j/2} / (ν+1+ι+b+a(r−1)−(a/2)(j−1))_{m_j/2}`.
pub fn sine_symbol_cd(rs: &RootSystemBC, nu: &Param, m: &Weight) -> Result<SpectralSymbol> {
    check_symbol_args(rs, nu, m)?;
    if !matches!(rs.root_type(), RootType::C | RootType::D) {
        return Err(Error::InvalidParameter(format!("{rs} is not of type C or D")));
    }
    let factors = pochhammer_product(rs, nu, m, |j, _| nu.neg().add_q(&(-(rs.a() * qi(j as i64)) / qi(2))));
    Ok(SpectralSymbol::assemble(
        TransformKind::Sine,
        nu.clone(),
        m.clone(),
        norm_factors_sin(rs, nu)?,
        factors,
    ))
}

/// `λ · σ_{ν,r}(m) · σ_{ν,r′}(m)` for a supplied Radon eigenvalue `λ`, with `σ`
/// the cosine or sine symbol. Weights with nonzero parts beyond the smaller
/// rank are not in the common spectrum and get the value zero.
pub fn composite_symbol(
    radon_eigenvalue: f64,
    rs_r: &RootSystemBC,
    rs_rprime: &RootSystemBC,
    nu: &Param,
    m: &Weight,
    kind: TransformKind,
) -> Result<SpectralSymbol> {
    let single: fn(&RootSystemBC, &Param, &Weight) -> Result<SpectralSymbol> = match kind {
        TransformKind::CompositeCosine => cosine_symbol,
        TransformKind::CompositeSine => sine_symbol,
        other => {
            return Err(Error::InvalidParameter(format!(
                "{other} is not a composite transform kind"
            )))
        }
    };
    let mut norm = Vec::new();
    let mut factors = vec![Factor::Scalar {
        value: radon_eigenvalue,
    }];
    for rs in [rs_r, rs_rprime] {
        match m.with_rank(rs.rank()) {
            Ok(w) => {
                let s = single(rs, nu, &w)?;
                norm.extend(s.norm_factors);
                factors.extend(s.factors);
            }
            Err(_) => factors.push(Factor::rational(Q::zero())),
        }
    }
    Ok(SpectralSymbol::assemble(kind, nu.clone(), m.clone(), norm, factors))
}
