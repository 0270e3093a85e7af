use serde::Serialize;

use super::jacobi_polynomial;
use crate::error::Result;
use crate::quadrature::{domain_for, TorusRule};
use crate::rootsystem::{RootSystemBC, Weight};

#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub weights: usize,
    pub quadrature_order: usize,
    /// Largest `|⟨φ_m, φ_n⟩| / (‖φ_m‖ ‖φ_n‖)` over `m ≠ n`.
    pub max_off_diagonal: f64,
    pub worst_pair: Option<(Weight, Weight)>,
}

/// Orthogonality of all `φ_m` with even `m`, `|m| ≤ degree_bound`.
pub fn gram_check(rs: &RootSystemBC, degree_bound: u32, quadrature_order: usize) -> Result<GramReport> {
    let weights = Weight::even_dominant(rs.rank(), degree_bound);
    let evals = weights
        .iter()
        .map(|w| Ok(jacobi_polynomial(rs, w)?.evaluator()))
        .collect::<Result<Vec<_>>>()?;
    let n = weights.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
    let rule = TorusRule::new(rs.rank(), quadrature_order, domain_for(rs));
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
    let mut worst = 0.0;
    let mut worst_pair = None;
    for i in 0..n {
        for j in 0..i {
            let v = gram[i][j].abs() / (gram[i][i] * gram[j][j]).sqrt();
            if v > worst {
                worst = v;
                worst_pair = Some((weights[i].clone(), weights[j].clone()));
            }
        }
    }
    Ok(GramReport {
        weights: n,
        quadrature_order,
        max_off_diagonal: worst,
        worst_pair,
    })
}
