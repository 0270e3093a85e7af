use serde::Serialize;

use crate::error::{Error, Result};
use crate::param::{qi, Param, Q};
use crate::rootsystem::{grassmannian_preset, Field, Weight};

/// How the rank cut-off `min(r, r′)` is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinRankRule {
    /// `m_j = 0` for `j > min(r, r′)`.
    Strict,
    /// `m_j = 0` for `j ≥ min(r, r′)`.
    Inclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub in_l_rr: bool,
    pub in_l_nu: bool,
    pub in_image_closure: bool,
}

/// `m_j/2 < ν + 1 + (a/2)(j−1)` for every `j` at which the right side is an integer.
pub fn in_l_nu(a: &Q, nu: &Param, m: &Weight) -> bool {
    m.parts().iter().enumerate().all(|(j, &mj)| {
        let x = nu.add_q(&(qi(1) + a * qi(j as i64) / qi(2)));
        !x.is_integer() || (mj as f64) / 2.0 < x.to_f64()
    })
}

pub fn in_l_rr(r: usize, r_prime: usize, m: &Weight, rule: MinRankRule) -> bool {
    let cut = r.min(r_prime);
    m.parts().iter().enumerate().all(|(i, &mj)| {
        let j = i + 1;
        let constrained = match rule {
            MinRankRule::Strict => j > cut,
            MinRankRule::Inclusive => j >= cut,
        };
        !constrained || mj == 0
    })
}

pub fn image_membership(field: Field, n: usize, r: usize, r_prime: usize, nu: &Param, m: &Weight) -> Result<Membership> {
    image_membership_with(field, n, r, r_prime, nu, m, MinRankRule::Strict)
}

pub fn image_membership_with(
    field: Field,
    n: usize,
    r: usize,
    r_prime: usize,
    nu: &Param,
    m: &Weight,
    rule: MinRankRule,
) -> Result<Membership> {
    grassmannian_preset(field, n, r)?;
    if r_prime == 0 || r_prime > n {
        return Err(Error::InvalidParameter(format!("r' = {r_prime} must lie in 1..={n}")));
    }
    m.require_even()?;
    if m.rank() != r {
        return Err(Error::DimensionMismatch(format!("weight {m} does not have rank {r}")));
    }
    let in_l_rr = in_l_rr(r, r_prime, m, rule);
    let in_l_nu = in_l_nu(&qi(field.a() as i64), nu, m);
    Ok(Membership {
        in_l_rr,
        in_l_nu,
        in_image_closure: in_l_rr && in_l_nu,
    })
}

/// Even dominant `m` of rank `r`, `|m| ≤ degree_bound`, in `L_ν` with `ν = α/2`
/// over ℝ and `ν = α` over ℍ.
pub fn branching_list(field: Field, alpha: u32, r: usize, degree_bound: u32) -> Result<Vec<Weight>> {
    let nu = match field {
        Field::R => Param::Exact(Q::new(alpha.into(), 2.into())),
        Field::H => Param::from(alpha as i64),
        Field::C => {
            return Err(Error::InvalidParameter(
                "branching lists are defined for the real and quaternionic fields only".into(),
            ))
        }
    };
    if alpha == 0 {
        return Err(Error::InvalidParameter("alpha must be a positive integer".into()));
    }
    if r == 0 {
        return Err(Error::InvalidParameter("rank must be positive".into()));
    }
    let a = qi(field.a() as i64);
    Ok(Weight::even_dominant(r, degree_bound)
        .into_iter()
        .filter(|m| in_l_nu(&a, &nu, m))
        .collect())
}
