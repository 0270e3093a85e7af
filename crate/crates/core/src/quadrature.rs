//! Gauss–Legendre rules and tensor integration over the torus.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::rootsystem::RootSystemBC;

/// Nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `π/2 ≥ t_1 ≥ … ≥ t_r ≥ 0`, unfolded to the torus by the factor `2^r r!`.
    Alcove,
    /// The alcove with the sigmoidal substitution `s = u^p/(u^p + (1−u)^p)`
    /// on every axis, for integrands with fractional powers at the walls.
    GradedAlcove(u32),
    /// `[0, π]^r`.
    Cube,
}

/// Plain alcove for integer multiplicities, graded otherwise.
pub fn domain_for(rs: &RootSystemBC) -> Domain {
    if rs.multiplicities().iter().all(|m| m.is_integer()) {
        Domain::Alcove
    } else {
        Domain::GradedAlcove(2)
    }
}

fn sigmoid(u: f64, p: u32) -> (f64, f64) {
    let a = u.powi(p as i32);
    let b = (1.0 - u).powi(p as i32);
    let s = a / (a + b);
    let ds = p as f64 * u.powi(p as i32 - 1) * (1.0 - u).powi(p as i32 - 1) / ((a + b) * (a + b));
    (s, ds)
}

/// A tensor rule whose weights integrate functions invariant under signed
/// permutations and `t_j ↦ π − t_j` over the torus `[0, π]^r`.
#[derive(Debug, Clone)]
pub struct TorusRule {
    rank: usize,
    order: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

const CHUNK: usize = 2048;

impl TorusRule {
    pub fn new(rank: usize, order: usize, domain: Domain) -> Self {
        let (x, w) = gauss_legendre(order);
        let total = order.pow(rank as u32);
        let mut points = Vec::with_capacity(total * rank);
        let mut weights = Vec::with_capacity(total);
        let fold = match domain {
            Domain::Alcove | Domain::GradedAlcove(_) => (1..=rank).map(|k| 2.0 * k as f64).product::<f64>(),
            Domain::Cube => 1.0,
        };
        let mut idx = vec![0usize; rank];
        for _ in 0..total {
            let mut wt = fold;
            match domain {
                Domain::Alcove | Domain::GradedAlcove(_) => {
                    // t_1 = (π/2) s_1, t_j = t_{j−1} s_j
                    let mut prev = FRAC_PI_2;
                    for &i in &idx {
                        let u = 0.5 * (x[i] + 1.0);
                        let (s, ds) = match domain {
                            Domain::GradedAlcove(p) => sigmoid(u, p),
                            _ => (u, 1.0),
                        };
                        wt *= 0.5 * w[i] * ds * prev;
                        prev *= s;
                        points.push(prev);
                    }
                }
                Domain::Cube => {
                    for &i in &idx {
                        points.push(FRAC_PI_2 * (x[i] + 1.0));
                        wt *= FRAC_PI_2 * w[i];
                    }
                }
            }
            weights.push(wt);
            for d in (0..rank).rev() {
                idx[d] += 1;
                if idx[d] < order {
                    break;
                }
                idx[d] = 0;
            }
        }
        TorusRule {
            rank,
            order,
            points,
            weights,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.rank..(i + 1) * self.rank]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// `Σ w_i f(t_i)` for a vector-valued integrand; chunked so that the result
    /// does not depend on the thread count.
    pub fn integrate_many<F>(&self, width: usize, f: F) -> Vec<f64>
    where
        F: Fn(&[f64], &mut [f64]) + Sync,
    {
        let partial: Vec<Vec<f64>> = (0..self.len())
            .collect::<Vec<_>>()
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut buf = vec![0.0; width];
                let mut acc = vec![Vec::with_capacity(chunk.len()); width];
                for &i in chunk {
                    f(self.point(i), &mut buf);
                    for (a, v) in acc.iter_mut().zip(&buf) {
                        a.push(self.weights[i] * v);
                    }
                }
                acc.into_iter().map(neumaier_sum).collect()
            })
            .collect();
        (0..width)
            .map(|k| neumaier_sum(partial.iter().map(|p| p[k])))
            .collect()
    }

    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        self.integrate_many(1, |t, out| out[0] = f(t))[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m18: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((m18 - 2.0 / 19.0).abs() < 1e-14);
        let (x, w) = gauss_legendre(7);
        let m12: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((m12 - 2.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn alcove_and_cube_agree_on_symmetric_functions() {
        let f = |t: &[f64]| (t[0].cos() * t[1].cos()).powi(2) * (t[0] - t[1]).sin().abs() * (t[0] + t[1]).sin().abs();
        let a = TorusRule::new(2, 40, Domain::Alcove).integrate(f);
        let c = TorusRule::new(2, 400, Domain::Cube).integrate(f);
        assert!((a - 2.0 / 3.0).abs() < 1e-13, "{a}");
        assert!((a - c).abs() < 1e-4 * a.abs(), "{a} {c}");
        let vol = TorusRule::new(3, 8, Domain::Alcove).integrate(|_| 1.0);
        assert!((vol - PI.powi(3)).abs() < 1e-12);
        let g = TorusRule::new(2, 40, Domain::GradedAlcove(2)).integrate(f);
        assert!((g - 2.0 / 3.0).abs() < 1e-10, "{g}");
    }

    #[test]
    fn grading_handles_wall_singularities() {
        // ∫_0^π |sin t|^{1/2} dt = √π Γ(3/4)/Γ(5/4)
        let exact = 2.396280469471184;
        let plain = TorusRule::new(1, 40, Domain::Alcove).integrate(|t| t[0].sin().sqrt());
        let graded = TorusRule::new(1, 40, Domain::GradedAlcove(2)).integrate(|t| t[0].sin().sqrt());
        assert!((graded - exact).abs() < 1e-11, "{graded}");
        assert!((plain - exact).abs() > (graded - exact).abs());
    }

    #[test]
    fn compensated_sum() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(neumaier_sum(v), 2.0);
    }
}
